//! The Turaev–Viro operator of a thickened surface.
//!
//! For `N = S x [-1, 1]` the state sum with fixed colorings `x-` on the
//! bottom copy and `x+` on the top copy gives the matrix element
//! `M[x+][x-]`. Simplices on the boundary carry square-root weights (`eta`
//! per vertex, `Delta^(1/2)` per edge, `theta^(-1/2)` per triangle) so that
//! stacking two copies reproduces full interior weights, which makes `M`
//! idempotent. Its trace is the invariant of `S x S^1`.

use std::collections::HashMap;

use num_complex::Complex;

use super::statesum::{EnumerationStats, Plan, Weights};
use super::surface::{prism, SurfaceTriangulation};
use crate::recoupling::{Color, RecouplingTable, RootParams};
use crate::scalar::{complex_abs, complex_sqrt_of_real, Real};

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex::new(T::zero(), T::zero()); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, z: Complex<T>) {
        self.data[i * self.cols + j] = z;
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = out.data[idx] + a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + self.get(i, i))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| complex_abs(*a - *b).lossy_f64()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| complex_abs(*z).lossy_f64()).fold(0.0, f64::max)
    }

    /// Numerical rank by Gaussian elimination with partial pivoting; pivots
    /// below `tol * max_abs` count as zero.
    pub fn rank(&self, tol: f64) -> usize {
        let cutoff = tol * self.max_abs();
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..a.cols {
            if rank == a.rows {
                break;
            }
            let (pivot, size) = (rank..a.rows)
                .map(|i| (i, complex_abs(a.get(i, col)).lossy_f64()))
                .fold((rank, -1.0), |best, x| if x.1 > best.1 { x } else { best });
            if size <= cutoff {
                continue;
            }
            for j in 0..a.cols {
                a.data.swap(rank * a.cols + j, pivot * a.cols + j);
            }
            let p = a.get(rank, col);
            for i in rank + 1..a.rows {
                let factor = a.get(i, col) / p;
                if factor.re == T::zero() && factor.im == T::zero() {
                    continue;
                }
                for j in col..a.cols {
                    let v = a.get(i, j) - factor * a.get(rank, j);
                    a.set(i, j, v);
                }
            }
            rank += 1;
        }
        rank
    }
}

/// The boundary operator with its basis of boundary colorings.
#[derive(Debug, Clone)]
pub struct BoundaryOperator<T> {
    /// Admissible colorings of the surface edges, indexed like
    /// [`SurfaceTriangulation::edges`], in lexicographic order.
    pub basis: Vec<Vec<Color>>,
    /// `matrix[top][bottom]`.
    pub matrix: ComplexMatrix<T>,
    pub stats: EnumerationStats,
}

impl<T: Real> BoundaryOperator<T> {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// `max |M^2 - M|`.
    pub fn idempotence_defect(&self) -> f64 {
        self.matrix.mul(&self.matrix).max_abs_diff(&self.matrix)
    }

    /// `max |M - M^T|`.
    pub fn symmetry_defect(&self) -> f64 {
        self.matrix.transpose().max_abs_diff(&self.matrix)
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.matrix.rank(tol)
    }

    pub fn trace(&self) -> Complex<T> {
        self.matrix.trace()
    }
}

struct BoundaryWeights<'a, T> {
    table: &'a RecouplingTable<T>,
    boundary_edge: Vec<bool>,
    boundary_triangle: Vec<bool>,
    sqrt_delta: Vec<Complex<T>>,
}

impl<T: Real> Weights for BoundaryWeights<'_, T> {
    type W = Complex<T>;
    fn one(&self) -> Complex<T> {
        Complex::new(T::one(), T::zero())
    }
    fn edge(&self, e: usize, c: Color) -> Complex<T> {
        if self.boundary_edge[e] {
            self.sqrt_delta[c as usize]
        } else {
            Complex::new(self.table.delta(c), T::zero())
        }
    }
    fn triangle(&self, f: usize, [a, b, c]: [Color; 3]) -> Complex<T> {
        let theta = self.table.theta(a, b, c);
        if self.boundary_triangle[f] {
            self.one() / complex_sqrt_of_real(theta)
        } else {
            Complex::new(T::one() / theta, T::zero())
        }
    }
    fn tet(&self, _: usize, c: [Color; 6]) -> Complex<T> {
        Complex::new(self.table.tet_k4(c[5], c[4], c[3], c[2], c[1], c[0]), T::zero())
    }
}

fn surface_colorings<T: Real>(s: &SurfaceTriangulation, table: &RecouplingTable<T>) -> Vec<Vec<Color>> {
    let tri_edges: Vec<[usize; 3]> =
        s.triangles().iter().map(|&[a, b, c]| [s.edge_index(a, b), s.edge_index(b, c), s.edge_index(a, c)]).collect();
    let mut out = Vec::new();
    let mut colors = vec![0; s.num_edges()];
    fn go<T: Real>(e: usize, colors: &mut Vec<Color>, tri_edges: &[[usize; 3]], table: &RecouplingTable<T>, out: &mut Vec<Vec<Color>>) {
        if e == colors.len() {
            out.push(colors.clone());
            return;
        }
        for c in 0..table.num_colors() as Color {
            colors[e] = c;
            let ok = tri_edges.iter().filter(|t| t.iter().all(|&x| x <= e)).all(|t| table.admissible(colors[t[0]], colors[t[1]], colors[t[2]]));
            if ok {
                go(e + 1, colors, tri_edges, table, out);
            }
        }
    }
    go(0, &mut colors, &tri_edges, table, &mut out);
    out
}

/// TV operator of `s x [-1, 1]` on admissible boundary colorings.
pub fn tv_boundary_operator<T: Real>(s: &SurfaceTriangulation, p: &RootParams<T>) -> BoundaryOperator<T> {
    let table = RecouplingTable::new(*p);
    let pr = prism(s);
    let n3 = &pr.triangulation;
    let basis = surface_colorings(s, &table);
    let index: HashMap<Vec<Color>, usize> = basis.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();

    let mut boundary_edge = vec![false; n3.num_edges()];
    for e in n3.boundary_edges() {
        boundary_edge[e] = true;
    }
    let mut boundary_triangle = vec![false; n3.num_triangles()];
    for (t, f) in n3.boundary_faces() {
        boundary_triangle[n3.triangle_class(t, f)] = true;
    }
    let weights = BoundaryWeights {
        table: &table,
        boundary_edge,
        boundary_triangle,
        sqrt_delta: (0..table.num_colors() as Color).map(|c| complex_sqrt_of_real(table.delta(c))).collect(),
    };
    let dim = basis.len();
    let plan = Plan::new(n3);
    let (matrix, stats) = plan.run(
        &table,
        &weights,
        || ComplexMatrix::<T>::zeros(dim, dim),
        |m, colors, w| {
            let bottom: Vec<Color> = pr.bottom_edges.iter().map(|&e| colors[e]).collect();
            let top: Vec<Color> = pr.top_edges.iter().map(|&e| colors[e]).collect();
            let (i, j) = (index[&top], index[&bottom]);
            let idx = i * dim + j;
            m.data[idx] = m.data[idx] + w;
        },
        |acc, other| {
            for (a, b) in acc.data.iter_mut().zip(other.data) {
                *a = *a + b;
            }
        },
    );
    let boundary_vertices = n3.boundary_vertices().len() as i32;
    let interior_vertices = n3.num_vertices() as i32 - boundary_vertices;
    let eta = p.eta();
    let scale = Complex::new(eta.powi(boundary_vertices + 2 * interior_vertices), T::zero());
    let mut matrix = matrix;
    for z in matrix.data.iter_mut() {
        *z = *z * scale;
    }
    BoundaryOperator { basis, matrix, stats }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulate::{tv_invariant, Triangulation};

    #[test]
    fn rank_of_small_matrices() {
        let mut m = ComplexMatrix::<f64>::zeros(3, 3);
        m.set(0, 0, Complex::new(1.0, 0.0));
        m.set(1, 1, Complex::new(0.0, 2.0));
        m.set(2, 0, Complex::new(1.0, 0.0));
        assert_eq!(m.rank(1e-12), 2);
        assert_eq!(m.mul(&m).get(1, 1), Complex::new(-4.0, 0.0));
        assert_eq!(ComplexMatrix::<f64>::zeros(2, 2).rank(1e-12), 0);
    }

    #[test]
    fn sphere_operator_is_rank_one_projector() {
        for r in [3, 4] {
            let p = RootParams::<f64>::new(r).unwrap();
            let op = tv_boundary_operator(&SurfaceTriangulation::tetrahedron_boundary(), &p);
            assert!(op.idempotence_defect() < 1e-10, "r={r}: {}", op.idempotence_defect());
            assert!(op.symmetry_defect() < 1e-10);
            assert_eq!(op.rank(1e-8), 1);
            assert_eq!(op.stats.leaves as usize, crate::triangulate::count_admissible_colorings(&prism(&SurfaceTriangulation::tetrahedron_boundary()).triangulation, &p) as usize);
            let s2xs1 = tv_invariant(&Triangulation::s2_x_s1(), &p).unwrap().value;
            assert!((op.trace().re - s2xs1).abs() < 1e-10);
        }
    }

    #[test]
    fn torus_operator_at_r3() {
        let p = RootParams::<f64>::new(3).unwrap();
        let op = tv_boundary_operator(&SurfaceTriangulation::seven_vertex_torus(), &p);
        assert_eq!(op.dimension(), 256);
        assert!(op.idempotence_defect() < 1e-10);
        assert!(op.symmetry_defect() < 1e-10);
        // (r - 1)^2 states on the torus; the trace is TV(T^3)
        assert_eq!(op.rank(1e-8), 4);
        assert!((op.trace().re - 4.0).abs() < 1e-9);
    }
}
