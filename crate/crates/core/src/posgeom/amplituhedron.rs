use std::collections::HashMap;

use crate::scalar::Exact;

use super::matrix::{subsets, Matrix};
use super::PosGeomError;

/// `n x d` matrix with rows `(1, t, t^2, ..., t^(d-1))` at `t = 1..=n`;
/// every maximal minor is a positive Vandermonde determinant.
pub fn moment_curve<F: Exact>(n: usize, d: usize) -> Matrix<F> {
    let mut z = Matrix::zeros(n, d);
    for i in 0..n {
        let t = F::from_int(i as i64 + 1);
        let mut x = F::one();
        for j in 0..d {
            z.set(i, j, x.clone());
            x = x * t.clone();
        }
    }
    z
}

/// `Y = C Z` for a full-rank `k x n` matrix `C` and an `n x (k + m)`
/// matrix `Z`.
pub fn amplituhedron_point<F: Exact>(c: &Matrix<F>, z: &Matrix<F>) -> Result<Matrix<F>, PosGeomError> {
    if c.cols() != z.rows() {
        return Err(PosGeomError::DimensionMismatch(format!("C has {} columns, Z has {} rows", c.cols(), z.rows())));
    }
    if z.cols() <= c.rows() {
        return Err(PosGeomError::DimensionMismatch(format!("Z needs more than k = {} columns", c.rows())));
    }
    let k = c.rows();
    let rank = c.rank();
    if rank < k {
        return Err(PosGeomError::RankDeficient { rank, expected: k });
    }
    let y = c.mul(z)?;
    let rank = y.rank();
    if rank < k {
        return Err(PosGeomError::RankCollapse { rank, expected: k });
    }
    Ok(y)
}

/// `<Y Z_{i_1} ... Z_{i_m}>`: the determinant of `Y` stacked on the listed
/// rows of `Z`.
pub fn bracket<F: Exact>(y: &Matrix<F>, z: &Matrix<F>, indices: &[usize]) -> Result<F, PosGeomError> {
    if y.cols() != z.cols() || y.rows() + indices.len() != z.cols() {
        return Err(PosGeomError::DimensionMismatch(format!(
            "bracket of a {}x{} Y with {} rows of a {}x{} Z",
            y.rows(),
            y.cols(),
            indices.len(),
            z.rows(),
            z.cols()
        )));
    }
    if let Some(&bad) = indices.iter().find(|&&i| i >= z.rows()) {
        return Err(PosGeomError::DimensionMismatch(format!("Z has no row {bad}")));
    }
    Ok(y.stack(&z.select_rows(indices))?.det())
}

/// Signs of `<Y Z_I>` over all increasing `m`-subsets `I`.
pub fn bracket_signs<F: Exact>(y: &Matrix<F>, z: &Matrix<F>) -> Result<Vec<i8>, PosGeomError> {
    let m = z.cols().saturating_sub(y.rows());
    subsets(z.rows(), m)
        .iter()
        .map(|s| {
            bracket(y, z, s).map(|v| {
                if v.is_positive() {
                    1
                } else if v.is_negative() {
                    -1
                } else {
                    0
                }
            })
        })
        .collect()
}

/// Rank of the differential of `C -> Y = C Z` between affine charts of
/// `G(k, n)` and `G(k, k + m)` at `C`.
pub fn jacobian_rank<F: Exact>(c: &Matrix<F>, z: &Matrix<F>) -> Result<usize, PosGeomError> {
    let y = amplituhedron_point(c, z)?;
    let k = c.rows();
    let (cr, c_pivots) = c.rref();
    let y0 = cr.mul(z)?;
    let (_, y_pivots) = y.rref();
    let y_free: Vec<usize> = (0..y.cols()).filter(|j| !y_pivots.contains(j)).collect();
    let y1_inv = y0.select_cols(&y_pivots).inverse().expect("pivot columns are independent");
    let y2 = y0.select_cols(&y_free);
    let w = y1_inv.mul(&y2)?;
    let rows: Vec<usize> = (0..k).collect();
    let mut columns = Vec::new();
    for i in 0..k {
        for j in (0..c.cols()).filter(|j| !c_pivots.contains(j)) {
            // dY = E_ij Z: row i of dY is row j of Z
            let mut dy = Matrix::zeros(k, z.cols());
            for col in 0..z.cols() {
                dy.set(i, col, z.get(j, col).clone());
            }
            let dy1 = dy.select_cols(&y_pivots);
            let dy2 = dy.select_cols(&y_free);
            let inner = dy1.mul(&w)?;
            let mut diff = Matrix::zeros(k, y_free.len());
            for a in 0..k {
                for b in 0..y_free.len() {
                    diff.set(a, b, dy2.get(a, b).clone() - inner.get(a, b).clone());
                }
            }
            let d = y1_inv.mul(&diff)?;
            columns.push(rows.iter().flat_map(|&a| d.row(a).to_vec()).collect::<Vec<F>>());
        }
    }
    if columns.is_empty() {
        return Ok(0);
    }
    Ok(Matrix::from_rows(columns)?.rank())
}

fn chord(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn crosses((a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
    (a < c && c < b && b < d) || (c < a && a < d && d < b)
}

/// Checks that `triangles` triangulate the convex `n`-gon with vertices
/// `0..n` in cyclic order, and returns them with increasing corners.
pub fn validate_polygon_triangulation(n: usize, triangles: &[[usize; 3]]) -> Result<Vec<[usize; 3]>, PosGeomError> {
    let bad = |msg: String| Err(PosGeomError::NotATriangulation(msg));
    if n < 3 {
        return bad(format!("a polygon needs at least 3 vertices, got {n}"));
    }
    if triangles.len() != n - 2 {
        return bad(format!("{} triangles for a {n}-gon, expected {}", triangles.len(), n - 2));
    }
    let mut uses: HashMap<(usize, usize), usize> = HashMap::new();
    let mut out = Vec::with_capacity(triangles.len());
    for t in triangles {
        let mut s = *t;
        s.sort_unstable();
        if s[2] >= n || s[0] == s[1] || s[1] == s[2] {
            return bad(format!("triangle {t:?} is not three distinct vertices of the {n}-gon"));
        }
        for (a, b) in [(s[0], s[1]), (s[1], s[2]), (s[0], s[2])] {
            *uses.entry(chord(a, b)).or_default() += 1;
        }
        out.push(s);
    }
    for i in 0..n {
        let side = chord(i, (i + 1) % n);
        if uses.get(&side) != Some(&1) {
            return bad(format!("side {}-{} is not covered exactly once", side.0, side.1));
        }
    }
    let diagonals: Vec<(usize, usize)> =
        uses.iter().filter(|(&(a, b), _)| b - a != 1 && !(a == 0 && b == n - 1)).map(|(&d, _)| d).collect();
    for d in &diagonals {
        if uses[d] != 2 {
            return bad(format!("diagonal {}-{} borders {} triangles", d.0, d.1, uses[d]));
        }
    }
    for (i, &d) in diagonals.iter().enumerate() {
        if let Some(&e) = diagonals[i + 1..].iter().find(|&&e| crosses(d, e)) {
            return bad(format!("diagonals {}-{} and {}-{} cross", d.0, d.1, e.0, e.1));
        }
    }
    Ok(out)
}

/// Every triangulation of the convex `n`-gon; there are Catalan(n - 2).
pub fn all_polygon_triangulations(n: usize) -> Vec<Vec<[usize; 3]>> {
    fn go(i: usize, j: usize) -> Vec<Vec<[usize; 3]>> {
        if j < i + 2 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for apex in i + 1..j {
            for left in go(i, apex) {
                for right in go(apex, j) {
                    let mut t = vec![[i, apex, j]];
                    t.extend(left.iter().copied());
                    t.extend(right.iter().copied());
                    out.push(t);
                }
            }
        }
        out
    }
    if n < 3 {
        return Vec::new();
    }
    go(0, n - 1)
}

/// `<a b c>^2 / (<Y a b> <Y b c> <Y c a>)` for one triangle.
pub fn polygon_triangle_form<F: Exact>(z: &Matrix<F>, y: &Matrix<F>, [a, b, c]: [usize; 3]) -> Result<F, PosGeomError> {
    let abc = z.select_rows(&[a, b, c]).det();
    let ab = bracket(y, z, &[a, b])?;
    let bc = bracket(y, z, &[b, c])?;
    let ca = bracket(y, z, &[c, a])?;
    Ok(abc.clone() * abc / (ab * bc * ca))
}

/// Canonical form of the polygon spanned by the rows of an `n x 3` matrix
/// `Z` at a `1 x 3` point `Y`, summed over the given triangulation.
pub fn polygon_canonical_form<F: Exact>(
    z: &Matrix<F>,
    triangles: &[[usize; 3]],
    y: &Matrix<F>,
) -> Result<F, PosGeomError> {
    if z.cols() != 3 || y.rows() != 1 || y.cols() != 3 {
        return Err(PosGeomError::DimensionMismatch(format!(
            "polygon forms need an n x 3 Z and a 1 x 3 Y, got {}x{} and {}x{}",
            z.rows(),
            z.cols(),
            y.rows(),
            y.cols()
        )));
    }
    let n = z.rows();
    let triangles = validate_polygon_triangulation(n, triangles)?;
    for i in 0..n {
        if bracket(y, z, &[i, (i + 1) % n])?.is_zero() {
            return Err(PosGeomError::PointOnBoundary { i, j: (i + 1) % n });
        }
    }
    let mut total = F::zero();
    for t in triangles {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
            if bracket(y, z, &[a, b])?.is_zero() {
                return Err(PosGeomError::SpuriousPole { i: a, j: b });
            }
        }
        total = total + polygon_triangle_form(z, y, t)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;
    use rand::SeedableRng;
    use num_traits::Signed;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::posgeom::{is_totally_positive, random_positive_row, random_tnn};

    type Q = BigRational;

    #[test]
    fn moment_curve_is_positive() {
        for n in 4..=8 {
            assert!(is_totally_positive(&moment_curve::<Q>(n, 3)));
            assert!(is_totally_positive(&moment_curve::<Q>(n, 4)));
        }
    }

    #[test]
    fn brackets_are_positive_inside() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let z = moment_curve::<Q>(6, 3);
        for _ in 0..20 {
            let c = random_positive_row::<Q, _>(6, &mut rng);
            let y = amplituhedron_point(&c, &z).unwrap();
            for i in 0..5 {
                assert!(bracket(&y, &z, &[i, i + 1]).unwrap().is_positive());
            }
            // twisted cyclic symmetry: <Y n 1> carries (-1)^(k-1) = +1 for k = 1
            assert!(bracket(&y, &z, &[5, 0]).unwrap().is_positive());
        }
    }

    #[test]
    fn errors() {
        let z = moment_curve::<Q>(5, 3);
        let c = Matrix::<Q>::from_ints(&[&[1, 1, 1, 1]]);
        assert!(matches!(amplituhedron_point(&c, &z), Err(PosGeomError::DimensionMismatch(_))));
        let c = Matrix::<Q>::from_ints(&[&[1, 0, 0, 0, 0], &[2, 0, 0, 0, 0]]);
        assert!(matches!(amplituhedron_point(&c, &moment_curve(5, 4)), Err(PosGeomError::RankDeficient { .. })));
        // Z of rank one collapses any Y
        let flat = Matrix::<Q>::from_ints(&[&[1, 1, 1, 1], &[1, 1, 1, 1], &[1, 1, 1, 1], &[1, 1, 1, 1]]);
        let c = Matrix::<Q>::from_ints(&[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        assert!(matches!(amplituhedron_point(&c, &flat), Err(PosGeomError::RankCollapse { rank: 1, expected: 2 })));
        assert!(bracket(&Matrix::<Q>::from_ints(&[&[1, 0, 0]]), &z, &[0]).is_err());
    }

    #[test]
    fn triangulation_counts_and_validation() {
        let catalan = [1, 1, 2, 5, 14, 42, 132];
        for n in 3..=8 {
            let all = all_polygon_triangulations(n);
            assert_eq!(all.len(), catalan[n - 2]);
            for t in &all {
                validate_polygon_triangulation(n, t).unwrap();
            }
        }
        assert!(validate_polygon_triangulation(4, &[[0, 1, 2], [0, 1, 3]]).is_err());
        assert!(validate_polygon_triangulation(5, &[[0, 1, 2], [0, 2, 3]]).is_err());
        // 0-2 and 1-3 cross
        assert!(validate_polygon_triangulation(6, &[[0, 1, 2], [1, 2, 3], [0, 2, 5], [1, 3, 4]]).is_err());
    }

    #[test]
    fn canonical_form_is_triangulation_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 4..=7 {
            let z = moment_curve::<Q>(n, 3);
            let c = random_positive_row::<Q, _>(n, &mut rng);
            let y = amplituhedron_point(&c, &z).unwrap();
            let mut values = all_polygon_triangulations(n)
                .iter()
                .map(|t| polygon_canonical_form(&z, t, &y).unwrap())
                .collect::<Vec<_>>();
            assert!(values[0].is_positive());
            values.dedup();
            assert_eq!(values.len(), 1, "n = {n}");
        }
    }

    #[test]
    fn boundary_point_is_rejected() {
        let z = moment_curve::<Q>(5, 3);
        let c = Matrix::<Q>::from_ints(&[&[1, 1, 0, 0, 0]]);
        let y = amplituhedron_point(&c, &z).unwrap();
        let fan: Vec<[usize; 3]> = (1..4).map(|i| [0, i, i + 1]).collect();
        assert!(matches!(polygon_canonical_form(&z, &fan, &y), Err(PosGeomError::PointOnBoundary { i: 0, j: 1 })));
        let c = Matrix::<Q>::from_ints(&[&[1, 0, 1, 0, 0]]);
        let y = amplituhedron_point(&c, &z).unwrap();
        assert!(matches!(polygon_canonical_form(&z, &fan, &y), Err(PosGeomError::SpuriousPole { i: 0, j: 2 })));
        let other = [[0, 1, 3], [1, 2, 3], [0, 3, 4]];
        assert!(polygon_canonical_form(&z, &other, &y).unwrap().is_positive());
    }

    #[test]
    fn simple_pole_at_a_side() {
        // Y(t) -> the midpoint of side 0-1; <Y 0 1> * Omega tends to a finite
        // nonzero residue, so successive products converge
        let z = moment_curve::<Q>(5, 3);
        let fan: Vec<[usize; 3]> = (1..4).map(|i| [0, i, i + 1]).collect();
        let target = Matrix::<Q>::from_ints(&[&[1, 1, 0, 0, 0]]).mul(&z).unwrap();
        let inside = Matrix::<Q>::from_ints(&[&[1, 1, 1, 1, 1]]).mul(&z).unwrap();
        let mut products = Vec::new();
        for e in [100i64, 1000, 10000, 100000] {
            let eps = Q::from_ratio(1, e);
            let mut y = Matrix::zeros(1, 3);
            for j in 0..3 {
                y.set(0, j, target.get(0, j).clone() + eps.clone() * inside.get(0, j).clone());
            }
            let omega = polygon_canonical_form(&z, &fan, &y).unwrap();
            products.push(bracket(&y, &z, &[0, 1]).unwrap() * omega);
        }
        let gaps: Vec<Q> = products.windows(2).map(|w| (w[1].clone() - w[0].clone()).abs()).collect();
        assert!(gaps[2] < gaps[1] && gaps[1] < gaps[0]);
        assert!(products[3].is_positive());
    }

    #[test]
    fn gl_k_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let z = moment_curve::<Q>(6, 4);
        let c = random_tnn::<Q, _>(2, 6, 0.0, &mut rng);
        let g = Matrix::<Q>::from_ints(&[&[2, 1], &[1, 3]]);
        let y = amplituhedron_point(&c, &z).unwrap();
        let gy = amplituhedron_point(&g.mul(&c).unwrap(), &z).unwrap();
        assert!(y.same_row_space(&gy));
        assert_eq!(bracket_signs(&y, &z).unwrap(), bracket_signs(&gy, &z).unwrap());
        for i in 0..5 {
            assert!(bracket(&y, &z, &[i, i + 1]).unwrap().is_positive());
        }
    }

    #[test]
    fn jacobian_has_full_rank_km() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (k, n, m) in [(1, 5, 2), (2, 6, 2), (2, 7, 3)] {
            let z = moment_curve::<Q>(n, k + m);
            let c = random_tnn::<Q, _>(k, n, 0.0, &mut rng);
            assert_eq!(jacobian_rank(&c, &z).unwrap(), k * m);
        }
    }
}
