use crate::scalar::Exact;

use super::matrix::{maximal_minors, subsets, Matrix};
use super::PosGeomError;

/// Plücker coordinates of a full-rank `k x n` matrix, indexed by column
/// subsets in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct PlueckerVector<F> {
    pub k: usize,
    pub n: usize,
    pub coords: Vec<(Vec<usize>, F)>,
}

impl<F: Exact> PlueckerVector<F> {
    /// Alternating bracket: indices in any order, zero on repeats.
    pub fn get(&self, indices: &[usize]) -> F {
        let mut sorted = indices.to_vec();
        let mut sign = false;
        for i in 0..sorted.len() {
            for j in 0..sorted.len() - 1 - i {
                if sorted[j] > sorted[j + 1] {
                    sorted.swap(j, j + 1);
                    sign = !sign;
                }
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return F::zero();
        }
        let pos = self.coords.binary_search_by(|(s, _)| s.cmp(&sorted)).expect("k-subset of 0..n");
        let v = self.coords[pos].1.clone();
        if sign { -v } else { v }
    }

    /// Three-term relations `p(Sab)p(Scd) - p(Sac)p(Sbd) + p(Sad)p(Sbc)`
    /// over all `(k-2)`-subsets `S` and `a < b < c < d`; returns
    /// `(checked, violated)`.
    pub fn three_term_relations(&self) -> (usize, usize) {
        if self.k < 2 {
            return (0, 0);
        }
        let mut checked = 0;
        let mut violated = 0;
        for s in subsets(self.n, self.k - 2) {
            for q in subsets(self.n, 4) {
                if q.iter().any(|x| s.contains(x)) {
                    continue;
                }
                let p = |x: usize, y: usize| {
                    let mut idx = s.clone();
                    idx.extend([q[x], q[y]]);
                    self.get(&idx)
                };
                let value = p(0, 1) * p(2, 3) - p(0, 2) * p(1, 3) + p(0, 3) * p(1, 2);
                checked += 1;
                if !value.is_zero() {
                    violated += 1;
                }
            }
        }
        (checked, violated)
    }
}

/// Plücker coordinates of `c`, which must have full row rank.
pub fn pluecker<F: Exact>(c: &Matrix<F>) -> Result<PlueckerVector<F>, PosGeomError> {
    if c.rows() > c.cols() {
        return Err(PosGeomError::DimensionMismatch(format!("{}x{} has more rows than columns", c.rows(), c.cols())));
    }
    let rank = c.rank();
    if rank < c.rows() {
        return Err(PosGeomError::RankDeficient { rank, expected: c.rows() });
    }
    Ok(PlueckerVector { k: c.rows(), n: c.cols(), coords: maximal_minors(c) })
}

/// All maximal minors strictly positive.
pub fn is_totally_positive<F: Exact>(m: &Matrix<F>) -> bool {
    maximal_minors(m).iter().all(|(_, d)| d.is_positive())
}

/// All maximal minors non-negative and at least one positive.
pub fn is_totally_nonneg<F: Exact>(m: &Matrix<F>) -> bool {
    let minors = maximal_minors(m);
    minors.iter().all(|(_, d)| !d.is_negative()) && minors.iter().any(|(_, d)| d.is_positive())
}

/// `mu_i = sum_{J containing i} p_J^2 / sum_J p_J^2`.
pub fn moment_map<F: Exact>(c: &Matrix<F>) -> Result<Vec<F>, PosGeomError> {
    let p = pluecker(c)?;
    let mut num = vec![F::zero(); p.n];
    let mut total = F::zero();
    for (s, v) in &p.coords {
        let sq = v.clone() * v.clone();
        for &i in s {
            num[i] = num[i].clone() + sq.clone();
        }
        total = total + sq;
    }
    Ok(num.into_iter().map(|x| x / total.clone()).collect())
}

/// Whether `x` lies in the hypersimplex `{0 <= x_i <= 1, sum x_i = k}`.
pub fn hypersimplex_contains<F: Exact>(x: &[F], k: usize) -> bool {
    let sum = x.iter().fold(F::zero(), |a, b| a + b.clone());
    sum == F::from_int(k as i64) && x.iter().all(|v| !v.is_negative() && *v <= F::one())
}

/// Indicator vectors of the `k`-subsets of `0..n`.
pub fn hypersimplex_vertices<F: Exact>(k: usize, n: usize) -> Vec<Vec<F>> {
    subsets(n, k)
        .into_iter()
        .map(|s| (0..n).map(|i| if s.contains(&i) { F::one() } else { F::zero() }).collect())
        .collect()
}
