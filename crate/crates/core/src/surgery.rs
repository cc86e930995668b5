//! Reshetikhin–Turaev invariants of a small surgery family.
//!
//! For a framed link `L` in `S^3`,
//!
//! ```text
//! tau(M_L) = eta^(1 + |L|) * kappa^(-sigma(L)) * sum_c prod_i Delta_(c_i) <L(c)>
//! ```
//!
//! where `sigma` is the signature of the linking matrix and `<L(c)>` the
//! colored bracket. Only the empty link, a framed unknot and a framed Hopf
//! link are supported; their brackets are in closed form:
//!
//! * unknot with framing `p`, color `c`: `mu_c^p Delta_c`;
//! * Hopf link with framings `p, q`, colors `a, b`:
//!   `mu_a^p mu_b^q (-1)^(a+b) [(a+1)(b+1)]`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::recoupling::{Color, RootParams};
use crate::scalar::{complex_abs, Real};
use crate::triangulate::{tv_invariant, Triangulation, TriangulationError};

/// Surgery description of a closed 3-manifold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FramedSurgery {
    /// `S^3`.
    Empty,
    /// Lens space `L(p, 1)`; `p = 0` gives `S^2 x S^1`, `p = +-1` gives `S^3`.
    Unknot(i64),
    /// Hopf link with framings `p` and `q`.
    HopfPair(i64, i64),
}

impl FramedSurgery {
    pub fn components(&self) -> usize {
        match self {
            Self::Empty => 0,
            Self::Unknot(_) => 1,
            Self::HopfPair(..) => 2,
        }
    }

    /// Signature of the linking matrix.
    pub fn signature(&self) -> i64 {
        match *self {
            Self::Empty => 0,
            Self::Unknot(p) => p.signum(),
            Self::HopfPair(p, q) => {
                let det = p * q - 1;
                let trace = p + q;
                match det.signum() {
                    1 => 2 * trace.signum(),
                    -1 => 0,
                    _ => trace.signum(),
                }
            }
        }
    }
}

impl fmt::Display for FramedSurgery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Empty => write!(f, "empty"),
            Self::Unknot(p) => write!(f, "unknot:p={p}"),
            Self::HopfPair(p, q) => write!(f, "hopf:p={p},q={q}"),
        }
    }
}

/// Error for malformed surgery specifications.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid surgery `{0}`; expected `empty`, `unknot:p=N` or `hopf:p=N,q=M`")]
pub struct SurgeryParseError(pub String);

impl FromStr for FramedSurgery {
    type Err = SurgeryParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || SurgeryParseError(s.to_string());
        let (kind, args) = s.split_once(':').unwrap_or((s, ""));
        let mut p = None;
        let mut q = None;
        for part in args.split(',').filter(|x| !x.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(err)?;
            let value: i64 = value.trim().parse().map_err(|_| err())?;
            match key.trim() {
                "p" if p.is_none() => p = Some(value),
                "q" if q.is_none() => q = Some(value),
                _ => return Err(err()),
            }
        }
        match (kind.trim(), p, q) {
            ("empty", None, None) => Ok(Self::Empty),
            ("unknot", Some(p), None) => Ok(Self::Unknot(p)),
            ("hopf", Some(p), Some(q)) => Ok(Self::HopfPair(p, q)),
            _ => Err(err()),
        }
    }
}

fn real<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

fn complex_powi<T: Real>(z: Complex<T>, n: i64) -> Complex<T> {
    let mut base = if n < 0 { Complex::new(T::one(), T::zero()) / z } else { z };
    let mut e = n.unsigned_abs();
    let mut acc = Complex::new(T::one(), T::zero());
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base;
        }
        base = base * base;
        e >>= 1;
    }
    acc
}

/// Unnormalized Hopf pairing `(-1)^(a+b) [(a+1)(b+1)]`.
pub fn hopf_pairing<T: Real>(a: Color, b: Color, p: &RootParams<T>) -> T {
    let sign = if (a + b).is_multiple_of(2) { T::one() } else { -T::one() };
    sign * p.quantum_integer(((a + 1) * (b + 1)) as u64)
}

/// `tau(M)` for the manifold presented by `s`.
pub fn rt_invariant<T: Real>(s: &FramedSurgery, p: &RootParams<T>) -> Complex<T> {
    let delta: Vec<T> = p.colors().map(|c| p.quantum_dimension(c).expect("valid color")).collect();
    let mu: Vec<Complex<T>> = p.colors().map(|c| p.twist(c)).collect();
    let bracket_sum = match *s {
        FramedSurgery::Empty => real(T::one()),
        FramedSurgery::Unknot(fr) => p.colors().fold(real(T::zero()), |acc, c| {
            let d = delta[c as usize];
            acc + complex_powi(mu[c as usize], fr) * real(d * d)
        }),
        FramedSurgery::HopfPair(fp, fq) => {
            let mut acc = real(T::zero());
            for a in p.colors() {
                for b in p.colors() {
                    let w = delta[a as usize] * delta[b as usize] * hopf_pairing(a, b, p);
                    acc = acc + complex_powi(mu[a as usize], fp) * complex_powi(mu[b as usize], fq) * real(w);
                }
            }
            acc
        }
    };
    let eta = p.eta();
    real(eta.powi(1 + s.components() as i32)) * complex_powi(p.kappa(), -s.signature()) * bracket_sum
}

/// Normalized S-matrix `eta * (-1)^(a+b) [(a+1)(b+1)]`, row-major.
pub fn s_matrix<T: Real>(p: &RootParams<T>) -> Vec<Vec<T>> {
    let eta = p.eta();
    p.colors().map(|a| p.colors().map(|b| eta * hopf_pairing(a, b, p)).collect()).collect()
}

/// `max |S S^T - I|` (the S-matrix is real).
pub fn s_matrix_unitarity_defect<T: Real>(p: &RootParams<T>) -> f64 {
    let s = s_matrix(p);
    let n = s.len();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let dot = (0..n).fold(T::zero(), |acc, k| acc + s[i][k] * s[j][k]);
            let target = if i == j { T::one() } else { T::zero() };
            worst = worst.max((dot - target).abs().lossy_f64());
        }
    }
    worst
}

/// Side-by-side comparison of a TV value with `|tau|^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TvRtReport<T> {
    pub tv: T,
    pub rt: Complex<T>,
    pub rt_abs_sq: T,
    pub difference: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Default tolerance of [`check_tv_rt`].
pub const TV_RT_TOLERANCE: f64 = 1e-8;

/// Computes the TV invariant of `t` and compares it with `|tau(s)|^2`. The
/// caller is responsible for both describing the same manifold; a mismatch
/// is reported, not raised.
pub fn check_tv_rt<T: Real>(t: &Triangulation, s: &FramedSurgery, p: &RootParams<T>) -> Result<TvRtReport<T>, TriangulationError> {
    Ok(compare_tv_rt(tv_invariant(t, p)?.value, s, p))
}

/// Compares a precomputed TV value with `|tau(s)|^2`.
pub fn compare_tv_rt<T: Real>(tv: T, s: &FramedSurgery, p: &RootParams<T>) -> TvRtReport<T> {
    let rt = rt_invariant(s, p);
    let abs = complex_abs(rt);
    let rt_abs_sq = abs * abs;
    let difference = (tv - rt_abs_sq).abs().lossy_f64();
    TvRtReport { tv, rt, rt_abs_sq, difference, tolerance: TV_RT_TOLERANCE, pass: difference <= TV_RT_TOLERANCE }
}
