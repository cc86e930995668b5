//! Recoupling theory for `U_q(sl(2))` at the root of unity `A = e^{2 pi i / 4r}`.
//!
//! Colors are Kauffman–Lins integer colors `c = 2j` in `0..=r-2`. Quantum
//! integers are `[n] = sin(n pi / r) / sin(pi / r)` and loop values are
//! `Delta_c = (-1)^c [c + 1]`.
//!
//! The tetrahedral net `Tet[a b e; c d f]` is the evaluation of the planar
//! 1-skeleton of a tetrahedron whose vertex triples are `(a,b,e)`, `(c,d,e)`,
//! `(a,d,f)` and `(b,c,f)`. Opposite edge pairs are `(a,c)`, `(b,d)` and
//! `(e,f)`. The F-move
//!
//! ```text
//!  a     d        a     d
//!   \   /          \   /
//!    \_/            \ /
//!    |e   = sum_f    f---
//!    /\             / \
//!   /  \           /   \
//!  b    c         b     c
//! ```
//!
//! re-channels an edge `e` separating legs `{a,b} | {c,d}` (in cyclic order
//! `a,b,c,d`) into an edge `f` separating `{b,c} | {d,a}` with coefficient
//! `Tet[a b e; c d f] Delta_f / (theta(a,d,f) theta(b,c,f))`.

use num_complex::Complex;
use thiserror::Error;

use crate::scalar::{unit_root, Real};

/// Kauffman–Lins color (twice the spin).
pub type Color = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecouplingError {
    #[error("level r = {0} is below the minimum of 2")]
    InvalidLevel(u32),
    #[error("color {color} outside 0..={max}")]
    ColorOutOfRange { color: Color, max: Color },
    #[error("triple ({0}, {1}, {2}) is not admissible")]
    NotAdmissible(Color, Color, Color),
}

/// Root-of-unity datum shared by every quantum computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootParams<T> {
    r: u32,
    a: Complex<T>,
    q: Complex<T>,
}

impl<T: Real> RootParams<T> {
    /// Level `r` with `A = e^{2 pi i / 4r}`. The degenerate `r = 2` (single
    /// color 0) is accepted so enumeration code has a trivial base case.
    pub fn new(r: u32) -> Result<Self, RecouplingError> {
        if r < 2 {
            return Err(RecouplingError::InvalidLevel(r));
        }
        let a = unit_root::<T>(1, 2 * r as i64);
        Ok(Self { r, a, q: a * a })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn a(&self) -> Complex<T> {
        self.a
    }

    pub fn q(&self) -> Complex<T> {
        self.q
    }

    pub fn precision_bits(&self) -> u32 {
        T::PRECISION_BITS
    }

    /// `A^m`, reduced modulo `4r` before exponentiation.
    pub fn a_pow(&self, m: i64) -> Complex<T> {
        unit_root::<T>(m, 2 * self.r as i64)
    }

    pub fn max_color(&self) -> Color {
        self.r - 2
    }

    pub fn num_colors(&self) -> usize {
        (self.r - 1) as usize
    }

    pub fn colors(&self) -> std::ops::RangeInclusive<Color> {
        0..=self.max_color()
    }

    pub fn check_color(&self, c: Color) -> Result<Color, RecouplingError> {
        if c > self.max_color() {
            Err(RecouplingError::ColorOutOfRange { color: c, max: self.max_color() })
        } else {
            Ok(c)
        }
    }

    /// `[n]`, exactly zero when `r | n`.
    pub fn quantum_integer(&self, n: u64) -> T {
        let r = self.r as u64;
        let m = n % (2 * r);
        if m.is_multiple_of(r) {
            return T::zero();
        }
        let pi_r = T::pi() / T::from_u32(self.r).unwrap();
        (pi_r * T::from_u64(m).unwrap()).sin_cos().0 / pi_r.sin_cos().0
    }

    /// `[n]! = [1][2]...[n]`.
    pub fn quantum_factorial(&self, n: u64) -> T {
        (1..=n).fold(T::one(), |acc, m| acc * self.quantum_integer(m))
    }

    /// `Delta_c = (-1)^c [c+1]`.
    pub fn quantum_dimension(&self, c: Color) -> Result<T, RecouplingError> {
        self.check_color(c)?;
        Ok(self.delta_unchecked(c))
    }

    fn delta_unchecked(&self, c: Color) -> T {
        let v = self.quantum_integer(c as u64 + 1);
        if c.is_multiple_of(2) {
            v
        } else {
            -v
        }
    }

    /// Parity, triangle inequalities and the level bound `a+b+c <= 2r-4`.
    pub fn is_admissible(&self, a: Color, b: Color, c: Color) -> bool {
        admissible(self.r, a, b, c)
    }

    fn require(&self, a: Color, b: Color, c: Color) -> Result<(), RecouplingError> {
        for x in [a, b, c] {
            self.check_color(x)?;
        }
        if self.is_admissible(a, b, c) {
            Ok(())
        } else {
            Err(RecouplingError::NotAdmissible(a, b, c))
        }
    }

    /// Theta net `theta(a,b,c)`.
    pub fn theta(&self, a: Color, b: Color, c: Color) -> Result<T, RecouplingError> {
        self.require(a, b, c)?;
        Ok(theta_with(&Factorials::new(self), a, b, c))
    }

    /// Tetrahedral net `Tet[a b e; c d f]`; see the module docs for the
    /// labelling.
    pub fn tet(
        &self,
        a: Color,
        b: Color,
        e: Color,
        c: Color,
        d: Color,
        f: Color,
    ) -> Result<T, RecouplingError> {
        self.require(a, b, e)?;
        self.require(c, d, e)?;
        self.require(a, d, f)?;
        self.require(b, c, f)?;
        Ok(tet_with(&Factorials::new(self), self.r, [a, b, e, c, d, f]))
    }

    /// F-move coefficient taking channel `e` on legs `(a,b,c,d)` to channel
    /// `f`. Zero when `f` is not admissible with `(a,d)` or `(b,c)`.
    pub fn fmove_coeff(
        &self,
        a: Color,
        b: Color,
        c: Color,
        d: Color,
        e: Color,
        f: Color,
    ) -> Result<T, RecouplingError> {
        self.require(a, b, e)?;
        self.require(c, d, e)?;
        self.check_color(f)?;
        if !self.is_admissible(a, d, f) || !self.is_admissible(b, c, f) {
            return Ok(T::zero());
        }
        let fact = Factorials::new(self);
        let tet = tet_with(&fact, self.r, [a, b, e, c, d, f]);
        Ok(tet * self.delta_unchecked(f)
            / (theta_with(&fact, a, d, f) * theta_with(&fact, b, c, f)))
    }

    /// Framing coefficient `mu_c = (-1)^c A^{c^2 + 2c}`.
    pub fn twist(&self, c: Color) -> Complex<T> {
        let z = self.a_pow((c as i64) * (c as i64 + 2));
        if c.is_multiple_of(2) {
            z
        } else {
            -z
        }
    }

    /// `eta = (A^2 - A^{-2}) / (i sqrt(2r)) = sqrt(2/r) sin(pi/r)`.
    pub fn eta(&self) -> T {
        let two_r = T::from_u32(2 * self.r).unwrap();
        let num = self.a_pow(2) - self.a_pow(-2);
        let den = Complex::new(T::zero(), two_r.sqrt());
        (num / den).re
    }

    /// `sum_c Delta_c^2`.
    pub fn global_dim_sq(&self) -> T {
        self.colors().map(|c| self.delta_unchecked(c).powi(2)).fold(T::zero(), |s, x| s + x)
    }

    /// `kappa = eta * sum_c Delta_c^2 mu_c`, the unit-modulus framing anomaly.
    pub fn kappa(&self) -> Complex<T> {
        let sum = self
            .colors()
            .map(|c| self.twist(c) * self.delta_unchecked(c).powi(2))
            .fold(Complex::new(T::zero(), T::zero()), |s, x| s + x);
        sum * self.eta()
    }
}

pub(crate) fn admissible(r: u32, a: Color, b: Color, c: Color) -> bool {
    let s = a + b + c;
    s.is_multiple_of(2) && a <= b + c && b <= a + c && c <= a + b && s + 4 <= 2 * r
}

/// `[0]! .. [r-1]!`; every factorial reached by an admissible theta or tet
/// evaluation lies in this range.
struct Factorials<T> {
    table: Vec<T>,
}

impl<T: Real> Factorials<T> {
    fn new(p: &RootParams<T>) -> Self {
        let mut table = Vec::with_capacity(p.r as usize);
        let mut acc = T::one();
        table.push(acc);
        for n in 1..p.r as u64 {
            acc *= p.quantum_integer(n);
            table.push(acc);
        }
        Self { table }
    }

    #[inline]
    fn get(&self, n: u32) -> T {
        assert!((n as usize) < self.table.len(), "quantum factorial [{n}]! reaches a multiple of r");
        self.table[n as usize]
    }
}

fn theta_with<T: Real>(fact: &Factorials<T>, a: Color, b: Color, c: Color) -> T {
    let x = (a + b - c) / 2;
    let y = (b + c - a) / 2;
    let z = (c + a - b) / 2;
    let num = fact.get(x + y + z + 1) * fact.get(x) * fact.get(y) * fact.get(z);
    let den = fact.get(x + y) * fact.get(y + z) * fact.get(z + x);
    let v = num / den;
    if (x + y + z).is_multiple_of(2) {
        v
    } else {
        -v
    }
}

fn tet_with<T: Real>(fact: &Factorials<T>, r: u32, labels: [Color; 6]) -> T {
    let [a, b, e, c, d, f] = labels;
    let vertex_sums = [(a + b + e) / 2, (c + d + e) / 2, (a + d + f) / 2, (b + c + f) / 2];
    let square_sums = [(a + b + c + d) / 2, (a + c + e + f) / 2, (b + d + e + f) / 2];
    let mut inner = T::one();
    for &bj in &square_sums {
        for &ai in &vertex_sums {
            inner *= fact.get(bj - ai);
        }
    }
    let edges = labels.iter().fold(T::one(), |acc, &x| acc * fact.get(x));
    let lo = *vertex_sums.iter().max().unwrap();
    // Terms with s + 1 >= r carry the factor [r] = 0.
    let hi = (*square_sums.iter().min().unwrap()).min(r - 2);
    let mut sum = T::zero();
    for s in lo..=hi {
        let mut den = T::one();
        for &ai in &vertex_sums {
            den *= fact.get(s - ai);
        }
        for &bj in &square_sums {
            den *= fact.get(bj - s);
        }
        let term = fact.get(s + 1) / den;
        sum = if s % 2 == 0 { sum + term } else { sum - term };
    }
    inner / edges * sum
}

/// Dense tables of `Delta`, `theta` and `Tet` for one level; shared read-only
/// by the state-sum enumerators and the spin-network reducer.
#[derive(Debug, Clone)]
pub struct RecouplingTable<T> {
    params: RootParams<T>,
    n: usize,
    delta: Vec<T>,
    theta: Vec<T>,
    tet: Vec<T>,
}

impl<T: Real> RecouplingTable<T> {
    pub fn new(params: RootParams<T>) -> Self {
        let fact = Factorials::new(&params);
        let n = params.num_colors();
        let r = params.r;
        let delta = params.colors().map(|c| params.delta_unchecked(c)).collect();
        let mut theta = vec![T::zero(); n * n * n];
        for a in 0..n as Color {
            for b in 0..n as Color {
                for c in 0..n as Color {
                    if admissible(r, a, b, c) {
                        theta[(a as usize * n + b as usize) * n + c as usize] = theta_with(&fact, a, b, c);
                    }
                }
            }
        }
        let mut tet = vec![T::zero(); n.pow(6)];
        let colors: Vec<Color> = (0..n as Color).collect();
        for &a in &colors {
            for &b in &colors {
                for &e in &colors {
                    if !admissible(r, a, b, e) {
                        continue;
                    }
                    for &c in &colors {
                        for &d in &colors {
                            if !admissible(r, c, d, e) {
                                continue;
                            }
                            for &f in &colors {
                                if admissible(r, a, d, f) && admissible(r, b, c, f) {
                                    let idx = tet_index(n, [a, b, e, c, d, f]);
                                    tet[idx] = tet_with(&fact, r, [a, b, e, c, d, f]);
                                }
                            }
                        }
                    }
                }
            }
        }
        Self { params, n, delta, theta, tet }
    }

    pub fn params(&self) -> &RootParams<T> {
        &self.params
    }

    pub fn num_colors(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn admissible(&self, a: Color, b: Color, c: Color) -> bool {
        admissible(self.params.r, a, b, c)
    }

    #[inline]
    pub fn delta(&self, c: Color) -> T {
        self.delta[c as usize]
    }

    /// Zero for inadmissible triples.
    #[inline]
    pub fn theta(&self, a: Color, b: Color, c: Color) -> T {
        self.theta[(a as usize * self.n + b as usize) * self.n + c as usize]
    }

    /// Zero when any vertex triple is inadmissible.
    #[inline]
    pub fn tet(&self, a: Color, b: Color, e: Color, c: Color, d: Color, f: Color) -> T {
        self.tet[tet_index(self.n, [a, b, e, c, d, f])]
    }

    /// Tetrahedral net of a labelled complete graph on vertices `0..4`, with
    /// `e_ij` the color of the edge joining `i` and `j`.
    #[inline]
    pub fn tet_k4(&self, e01: Color, e02: Color, e03: Color, e12: Color, e13: Color, e23: Color) -> T {
        // vertex triples (e01,e02,e03), (e01,e12,e13), (e02,e12,e23), (e03,e13,e23)
        self.tet(e02, e03, e01, e13, e12, e23)
    }

    /// F-move coefficient; zero whenever either channel is inadmissible.
    #[inline]
    pub fn fmove(&self, a: Color, b: Color, c: Color, d: Color, e: Color, f: Color) -> T {
        let th = self.theta(a, d, f) * self.theta(b, c, f);
        if th == T::zero() || !self.admissible(a, b, e) || !self.admissible(c, d, e) {
            return T::zero();
        }
        self.tet(a, b, e, c, d, f) * self.delta(f) / th
    }
}

#[inline]
fn tet_index(n: usize, l: [Color; 6]) -> usize {
    l.iter().fold(0, |acc, &x| acc * n + x as usize)
}

/// Outcome of an identity sweep: how many equations were checked and the
/// worst absolute residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentitySweep {
    pub checked: usize,
    pub max_defect: f64,
}

/// `sum_f F^{abcd}_{ef} F^{bcda}_{fe'} = delta_{ee'}` over all admissible
/// external colors.
pub fn orthogonality_sweep<T: Real>(table: &RecouplingTable<T>) -> IdentitySweep {
    let n = table.num_colors() as Color;
    let mut sweep = IdentitySweep { checked: 0, max_defect: 0.0 };
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let channels: Vec<Color> =
                        (0..n).filter(|&e| table.admissible(a, b, e) && table.admissible(c, d, e)).collect();
                    for &e in &channels {
                        for &e2 in &channels {
                            let sum = (0..n).fold(T::zero(), |s, f| {
                                s + table.fmove(a, b, c, d, e, f) * table.fmove(b, c, d, a, f, e2)
                            });
                            let want = if e == e2 { T::one() } else { T::zero() };
                            sweep.checked += 1;
                            sweep.max_defect = sweep.max_defect.max((sum - want).abs().lossy_f64());
                        }
                    }
                }
            }
        }
    }
    sweep
}

/// Biedenharn–Elliott identity on five-leg trees with legs `a,b,c,d,g` in
/// cyclic order: two F-moves from the tree `(x | y)` to `(x' | w)` agree
/// with the three-move path through the intermediate channel `z`.
pub fn pentagon_sweep<T: Real>(table: &RecouplingTable<T>) -> IdentitySweep {
    let n = table.num_colors() as Color;
    let adm = |a, b, c| table.admissible(a, b, c);
    let mut sweep = IdentitySweep { checked: 0, max_defect: 0.0 };
    for a in 0..n {
        for b in 0..n {
            for x in (0..n).filter(|&x| adm(a, b, x)) {
                for c in 0..n {
                    for y in (0..n).filter(|&y| adm(x, c, y)) {
                        for d in 0..n {
                            for g in (0..n).filter(|&g| adm(y, d, g)) {
                                for x2 in (0..n).filter(|&x2| adm(b, c, x2)) {
                                    for w in (0..n).filter(|&w| adm(x2, d, w) && adm(w, g, a)) {
                                        let lhs = table.fmove(a, b, c, y, x, x2) * table.fmove(a, x2, d, g, y, w);
                                        let rhs = (0..n).fold(T::zero(), |s, z| {
                                            s + table.fmove(x, c, d, g, y, z)
                                                * table.fmove(a, b, z, g, x, w)
                                                * table.fmove(c, d, w, b, z, x2)
                                        });
                                        sweep.checked += 1;
                                        sweep.max_defect = sweep.max_defect.max((lhs - rhs).abs().lossy_f64());
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    sweep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::DoubleDouble;

    const PHI: f64 = 1.618_033_988_749_895;

    fn p(r: u32) -> RootParams<f64> {
        RootParams::new(r).unwrap()
    }

    #[test]
    fn quantum_integers() {
        assert_eq!(p(5).quantum_integer(0), 0.0);
        for r in 3..9 {
            assert!((p(r).quantum_integer(1) - 1.0).abs() < 1e-15);
            assert_eq!(p(r).quantum_integer(r as u64), 0.0);
            assert_eq!(p(r).quantum_integer(3 * r as u64), 0.0);
            assert!(p(r).quantum_integer(r as u64 + 1).abs() > 0.1);
        }
        // sin(2 pi/5) / sin(pi/5) = 2 cos(pi/5) = golden ratio
        assert!((p(5).quantum_integer(2) - PHI).abs() < 1e-14);
    }

    #[test]
    fn quantum_integer_high_precision() {
        let p = RootParams::<DoubleDouble>::new(5).unwrap();
        let phi = (DoubleDouble::from(1.0) + DoubleDouble::from(5.0).sqrt()) / DoubleDouble::from(2.0);
        let err = (p.quantum_integer(2) - phi).abs();
        assert!(err.hi() < 1e-30, "{err:?}");
    }

    #[test]
    fn dimensions() {
        assert_eq!(p(5).quantum_dimension(0).unwrap(), 1.0);
        assert!((p(3).quantum_dimension(1).unwrap() + 1.0).abs() < 1e-15);
        assert!((p(4).quantum_dimension(2).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(
            p(4).quantum_dimension(3),
            Err(RecouplingError::ColorOutOfRange { color: 3, max: 2 })
        );
        for r in 3..13 {
            for c in p(r).colors() {
                assert!(p(r).quantum_dimension(c).unwrap().abs() > 1e-3);
            }
        }
    }

    #[test]
    fn admissibility() {
        assert!(p(5).is_admissible(0, 0, 0));
        assert!(!p(5).is_admissible(1, 1, 1));
        assert!(!p(4).is_admissible(2, 2, 2));
        assert!(p(5).is_admissible(2, 2, 2));
        assert!(!p(6).is_admissible(1, 1, 4));
    }

    #[test]
    fn factorials() {
        assert_eq!(p(5).quantum_factorial(0), 1.0);
        assert!((p(5).quantum_factorial(2) - PHI).abs() < 1e-14);
        assert!((p(4).quantum_factorial(3) - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn theta_values() {
        assert!((p(5).theta(1, 1, 0).unwrap() + PHI).abs() < 1e-14);
        assert!((p(5).theta(1, 1, 2).unwrap() - PHI).abs() < 1e-14);
        assert!((p(4).theta(1, 1, 2).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(p(5).theta(1, 1, 1), Err(RecouplingError::NotAdmissible(1, 1, 1)));
        for r in 3..8 {
            let p = p(r);
            for a in p.colors() {
                assert!((p.theta(a, a, 0).unwrap() - p.quantum_dimension(a).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn tet_values() {
        let p5 = p(5);
        assert!((p5.tet(1, 1, 0, 1, 1, 0).unwrap() + PHI).abs() < 1e-14);
        // -phi^{-4}, from an independent 40-digit evaluation of the closed form
        let x = p5.tet(2, 2, 2, 2, 2, 2).unwrap();
        assert!((x + 0.145_898_033_750_315_46).abs() < 1e-14, "{x}");
        for r in 3..7 {
            let p = p(r);
            for a in p.colors() {
                for b in p.colors() {
                    for e in p.colors().filter(|&e| p.is_admissible(a, b, e)) {
                        let t = p.tet(a, b, e, b, a, 0).unwrap();
                        assert!((t - p.theta(a, b, e).unwrap()).abs() < 1e-12);
                    }
                }
            }
        }
        assert_eq!(p5.tet(1, 1, 0, 1, 1, 1), Err(RecouplingError::NotAdmissible(1, 1, 1)));
    }

    #[test]
    fn fmove_values() {
        let p5 = p(5);
        assert!((p5.fmove_coeff(1, 1, 1, 1, 0, 0).unwrap() + 1.0 / PHI).abs() < 1e-14);
        assert_eq!(p5.fmove_coeff(1, 1, 1, 1, 0, 1).unwrap(), 0.0);
        assert!(p5.fmove_coeff(1, 1, 1, 1, 1, 0).is_err());
        for r in 3..7 {
            let p = p(r);
            for a in p.colors() {
                for c in p.colors() {
                    for d in p.colors().filter(|&d| p.is_admissible(c, d, a)) {
                        if p.is_admissible(a, d, d) && p.is_admissible(0, c, d) {
                            assert!((p.fmove_coeff(a, 0, c, d, a, d).unwrap() - 1.0).abs() < 1e-12);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn fmove_row_at_r5() {
        let p5 = p(5);
        let t = RecouplingTable::new(p5);
        let row: Vec<f64> = (0..4).map(|f| t.fmove(1, 1, 1, 1, 0, f)).collect();
        let phi = PHI;
        // f = 0: 1/Delta_1; f = 2: Tet[1 1 0; 1 1 2] Delta_2 / theta(1,1,2)^2 = [3] / [3]
        assert!((row[0] + 1.0 / phi).abs() < 1e-14);
        assert_eq!(row[1], 0.0);
        assert!((row[2] - 1.0).abs() < 1e-14);
        assert_eq!(row[3], 0.0);
    }

    #[test]
    fn twists() {
        assert_eq!(p(5).twist(0), Complex::new(1.0, 0.0));
        assert!((p(3).twist(1) - Complex::new(0.0, -1.0)).norm() < 1e-15);
        let want = Complex::from_polar(1.0, 4.0 * std::f64::consts::PI / 5.0);
        assert!((p(5).twist(2) - want).norm() < 1e-15);
    }

    #[test]
    fn global_constants() {
        let p3 = p(3);
        assert!((p3.eta() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((p3.global_dim_sq() - 2.0).abs() < 1e-14);
        let want = Complex::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
        assert!((p3.kappa() - want).norm() < 1e-14);
        assert!((p(4).eta() - 0.5).abs() < 1e-15);
        assert!((p(4).global_dim_sq() - 4.0).abs() < 1e-14);
        assert!((p(5).eta() - 0.371_748_034_460_184_5).abs() < 1e-15);
        for r in 3..13 {
            let p = p(r);
            let eta = p.eta();
            let closed = (2.0 / r as f64).sqrt() * (std::f64::consts::PI / r as f64).sin();
            assert!((eta - closed).abs() < 1e-15);
            assert!((p.global_dim_sq() - eta.powi(-2)).abs() < 1e-10);
            assert!((p.kappa().norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_small_levels() {
        assert_eq!(RootParams::<f64>::new(1).unwrap_err(), RecouplingError::InvalidLevel(1));
        let p2 = RootParams::<f64>::new(2).unwrap();
        assert_eq!(p2.num_colors(), 1);
        assert!((p2.global_dim_sq() - p2.eta().powi(-2)).abs() < 1e-12);
    }

    #[test]
    fn a_is_a_root_of_unity() {
        for r in 3..13 {
            let p = p(r);
            let a = p.a();
            assert!((a.norm() - 1.0).abs() < 1e-15);
            assert!((a.powu(4 * r) - Complex::new(1.0, 0.0)).norm() < 1e-12);
            assert_eq!(p.q(), a * a);
        }
    }

    #[test]
    fn table_matches_direct_evaluation() {
        for r in 3..7 {
            let p = p(r);
            let t = RecouplingTable::new(p);
            for a in p.colors() {
                for b in p.colors() {
                    for e in p.colors().filter(|&e| p.is_admissible(a, b, e)) {
                        assert_eq!(t.theta(a, b, e), p.theta(a, b, e).unwrap());
                        for c in p.colors() {
                            for d in p.colors().filter(|&d| p.is_admissible(c, d, e)) {
                                for f in p.colors() {
                                    let direct = p.fmove_coeff(a, b, c, d, e, f).unwrap();
                                    assert!((t.fmove(a, b, c, d, e, f) - direct).abs() < 1e-13);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn theta_and_tet_symmetries() {
        for r in 3..7 {
            let p = p(r);
            let t = RecouplingTable::new(p);
            let cs: Vec<Color> = p.colors().collect();
            for &a in &cs {
                for &b in &cs {
                    for &c in &cs {
                        let th = t.theta(a, b, c);
                        for perm in [(b, a, c), (a, c, b), (c, b, a), (b, c, a), (c, a, b)] {
                            assert_eq!(th, t.theta(perm.0, perm.1, perm.2));
                        }
                    }
                }
            }
            // generators of the tetrahedral group acting on K4 vertex labels
            for e in 0..cs.len().pow(6) {
                let mut x = e;
                let mut l = [0 as Color; 6];
                for slot in l.iter_mut() {
                    *slot = (x % cs.len()) as Color;
                    x /= cs.len();
                }
                let [e01, e02, e03, e12, e13, e23] = l;
                let v = t.tet_k4(e01, e02, e03, e12, e13, e23);
                // swap vertices 0,1
                let s01 = t.tet_k4(e01, e12, e13, e02, e03, e23);
                // cycle 1 -> 2 -> 3 -> 1
                let c123 = t.tet_k4(e03, e01, e02, e13, e23, e12);
                // swap vertices 2,3
                let s23 = t.tet_k4(e01, e03, e02, e13, e12, e23);
                for w in [s01, c123, s23] {
                    assert!((v - w).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn orthogonality_and_pentagon() {
        for r in 3..6 {
            let t = RecouplingTable::new(p(r));
            let o = orthogonality_sweep(&t);
            assert!(o.checked > 0 && o.max_defect < 1e-10, "r={r} {o:?}");
            let pent = pentagon_sweep(&t);
            assert!(pent.checked > 0 && pent.max_defect < 1e-10, "r={r} {pent:?}");
        }
    }
}
