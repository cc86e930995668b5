use rand::Rng;

use crate::scalar::Exact;

use super::matrix::Matrix;

fn positive_ratio<F: Exact, R: Rng>(rng: &mut R) -> F {
    F::from_ratio(rng.gen_range(1..=9), rng.gen_range(1..=4))
}

/// Random `k x n` totally non-negative matrix of full rank.
///
/// Builds the first `k` rows of `L D U`, where `L` and `U` are products of
/// elementary bidiagonal factors along a reduced word of the longest
/// permutation and `D` is a positive diagonal. Each factor parameter is
/// zero with probability `zero_prob`, otherwise a small positive rational;
/// with `zero_prob = 0` every maximal minor is positive.
pub fn random_tnn<F: Exact, R: Rng>(k: usize, n: usize, zero_prob: f64, rng: &mut R) -> Matrix<F> {
    assert!(k <= n, "k must not exceed n");
    let word: Vec<usize> = (1..n).flat_map(|a| (0..a).rev()).collect();
    let mut m = Matrix::<F>::identity(n);
    for lower in [true, false] {
        for &i in &word {
            if rng.gen_bool(zero_prob) {
                continue;
            }
            let t: F = positive_ratio(rng);
            // right-multiply by I + t E_{i+1,i} or I + t E_{i,i+1}
            let (from, to) = if lower { (i + 1, i) } else { (i, i + 1) };
            for row in 0..n {
                let v = m.get(row, to).clone() + t.clone() * m.get(row, from).clone();
                m.set(row, to, v);
            }
        }
        if lower {
            for j in 0..n {
                let d: F = positive_ratio(rng);
                for row in 0..n {
                    let v = m.get(row, j).clone() * d.clone();
                    m.set(row, j, v);
                }
            }
        }
    }
    m.select_rows(&(0..k).collect::<Vec<_>>())
}

/// `1 x n` row with positive rational entries.
pub fn random_positive_row<F: Exact, R: Rng>(n: usize, rng: &mut R) -> Matrix<F> {
    Matrix::from_rows(vec![(0..n).map(|_| positive_ratio(rng)).collect()]).expect("single row")
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::posgeom::{is_totally_nonneg, is_totally_positive, maximal_minors};

    type Q = BigRational;

    #[test]
    fn generic_samples_are_totally_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (k, n) in [(1, 4), (2, 5), (3, 6), (2, 8)] {
            let c = random_tnn::<Q, _>(k, n, 0.0, &mut rng);
            assert!(is_totally_positive(&c), "{k} x {n}: {c}");
        }
    }

    #[test]
    fn sparse_samples_stay_nonnegative() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut saw_zero = false;
        for _ in 0..30 {
            let c = random_tnn::<Q, _>(2, 5, 0.6, &mut rng);
            assert!(is_totally_nonneg(&c));
            assert_eq!(c.rank(), 2);
            saw_zero |= maximal_minors(&c).iter().any(|(_, d)| num_traits::Zero::is_zero(d));
        }
        assert!(saw_zero);
    }
}
