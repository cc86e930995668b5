//! Scalar abstractions.
//!
//! The quantum modules are generic over a floating point type implementing
//! [`Real`]; the positive-geometry module is generic over an exact ordered
//! field implementing [`Exact`].

use std::fmt::{self, Debug, Display};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, Sub, SubAssign};

use num_complex::Complex;
use num_traits::{Float, FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use twofloat::TwoFloat;

/// Floating point scalar used by the recoupling, spin-network, state-sum and
/// surgery code.
pub trait Real:
    Copy
    + Num
    + Neg<Output = Self>
    + AddAssign
    + MulAssign
    + PartialOrd
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Mantissa bits carried by the type.
    const PRECISION_BITS: u32;

    fn pi() -> Self;
    fn sqrt(self) -> Self;
    /// `(sin x, cos x)` to the full precision of the type.
    fn sin_cos(self) -> (Self, Self);

    fn abs(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }

    fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { Self::one() / self } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    fn from_int(n: i64) -> Self {
        <Self as FromPrimitive>::from_i64(n).expect("integer conversion")
    }

    fn lossy_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

macro_rules! impl_real_for_float {
    ($t:ty) => {
        impl Real for $t {
            const PRECISION_BITS: u32 = <$t>::MANTISSA_DIGITS;

            #[inline]
            fn pi() -> Self {
                <$t as num_traits::FloatConst>::PI()
            }

            #[inline]
            fn sqrt(self) -> Self {
                Float::sqrt(self)
            }

            #[inline]
            fn sin_cos(self) -> (Self, Self) {
                Float::sin_cos(self)
            }

            #[inline]
            fn abs(self) -> Self {
                Float::abs(self)
            }

            #[inline]
            fn powi(self, n: i32) -> Self {
                Float::powi(self, n)
            }
        }
    };
}

impl_real_for_float!(f32);
impl_real_for_float!(f64);

/// Double-double scalar with roughly 106 mantissa bits.
///
/// Storage and the error-free add/multiply kernels come from
/// [`twofloat::TwoFloat`]; division, square root and the trigonometric
/// functions are computed here by Newton refinement and series evaluation so
/// that every operation keeps the full double-double precision.
#[derive(Clone, Copy, Default, PartialEq, PartialOrd)]
pub struct DoubleDouble(TwoFloat);

impl DoubleDouble {
    pub fn hi(self) -> f64 {
        self.0.hi()
    }

    pub fn lo(self) -> f64 {
        self.0.lo()
    }

    fn recip(self) -> Self {
        let one = TwoFloat::from(1.0);
        let mut t = TwoFloat::from(1.0 / self.0.hi());
        for _ in 0..2 {
            t += t * (one - self.0 * t);
        }
        Self(t)
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self(TwoFloat::from(x))
    }
}

impl Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DoubleDouble({:e} + {:e})", self.0.hi(), self.0.lo())
    }
}

/// Scientific notation with 32 significant digits, enough to separate
/// neighbouring double-double values.
impl Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hi = self.0.hi();
        if hi == 0.0 || !hi.is_finite() {
            return Display::fmt(&hi, f);
        }
        let negative = hi < 0.0;
        let ten = DoubleDouble::from(10.0);
        let mut exp = hi.abs().log10().floor() as i32;
        let mut y = self.abs() / ten.powi(exp);
        if y.hi() >= 10.0 {
            y /= ten;
            exp += 1;
        } else if y.hi() < 1.0 {
            y *= ten;
            exp -= 1;
        }
        let mut digits = String::new();
        for _ in 0..32 {
            let mut d = y.hi().floor();
            if (y - DoubleDouble::from(d)).hi() < 0.0 {
                d -= 1.0;
            }
            let d = d.clamp(0.0, 9.0);
            digits.push(char::from(b'0' + d as u8));
            y = (y - DoubleDouble::from(d)) * ten;
        }
        let digits = digits.trim_end_matches('0');
        let (lead, rest) = digits.split_at(1);
        let sign = if negative { "-" } else { "" };
        if rest.is_empty() {
            write!(f, "{sign}{lead}e{exp}")
        } else {
            write!(f, "{sign}{lead}.{rest}e{exp}")
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let t = rhs.recip().0;
        let q = self.0 * t;
        // one correction step on the quotient itself
        Self(q + t * (self.0 - rhs.0 * q))
    }
}

impl Rem for DoubleDouble {
    type Output = Self;
    fn rem(self, rhs: Self) -> Self {
        let q = (self / rhs).0.trunc();
        Self(self.0 - rhs.0 * q)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl AddAssign for DoubleDouble {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for DoubleDouble {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for DoubleDouble {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl DivAssign for DoubleDouble {
    fn div_assign(&mut self, rhs: Self) {
        *self = *self / rhs;
    }
}

impl Zero for DoubleDouble {
    fn zero() -> Self {
        Self(TwoFloat::from(0.0))
    }

    fn is_zero(&self) -> bool {
        self.0.hi() == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        Self(TwoFloat::from(1.0))
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = num_traits::ParseFloatError;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        f64::from_str_radix(s, radix).map(Self::from)
    }
}

impl FromPrimitive for DoubleDouble {
    fn from_i64(n: i64) -> Option<Self> {
        <TwoFloat as FromPrimitive>::from_i64(n).map(Self)
    }

    fn from_u64(n: u64) -> Option<Self> {
        <TwoFloat as FromPrimitive>::from_u64(n).map(Self)
    }

    fn from_f64(x: f64) -> Option<Self> {
        Some(Self::from(x))
    }
}

impl ToPrimitive for DoubleDouble {
    fn to_i64(&self) -> Option<i64> {
        self.0.to_i64()
    }

    fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    fn to_f64(&self) -> Option<f64> {
        Some(self.0.hi() + self.0.lo())
    }
}

impl Real for DoubleDouble {
    const PRECISION_BITS: u32 = 2 * f64::MANTISSA_DIGITS;

    fn pi() -> Self {
        Self(<TwoFloat as num_traits::FloatConst>::PI())
    }

    fn sqrt(self) -> Self {
        if self.0.hi() <= 0.0 {
            return Self::zero();
        }
        let s = Self::from(self.0.hi().sqrt());
        s + (self - s * s) / (Self::from(2.0) * s)
    }

    // Taylor series on x / 16, then four angle doublings.
    fn sin_cos(self) -> (Self, Self) {
        let y = self.0 / 16.0;
        let y2 = y * y;
        let mut term = y;
        let mut sin = y;
        let mut k = 1.0;
        while term.hi().abs() > 1e-40 {
            term = -(term * y2) / ((k + 1.0) * (k + 2.0));
            sin += term;
            k += 2.0;
        }
        let mut term = TwoFloat::from(1.0);
        let mut cos = term;
        let mut k = 0.0;
        while term.hi().abs() > 1e-40 {
            term = -(term * y2) / ((k + 1.0) * (k + 2.0));
            cos += term;
            k += 2.0;
        }
        for _ in 0..4 {
            let (s, c) = (sin, cos);
            sin = s * c * 2.0;
            cos = c * c - s * s;
        }
        (Self(sin), Self(cos))
    }
}

/// Exact ordered field used by [`crate::posgeom`].
pub trait Exact: Clone + Num + Signed + PartialOrd + Debug + Display + Send + Sync + 'static {
    fn from_int(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
}

impl Exact for num_rational::BigRational {
    fn from_int(n: i64) -> Self {
        num_rational::BigRational::from_integer(n.into())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num_rational::BigRational::new(num.into(), den.into())
    }
}

impl Exact for num_rational::Ratio<i128> {
    fn from_int(n: i64) -> Self {
        num_rational::Ratio::from_integer(n as i128)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num_rational::Ratio::new(num as i128, den as i128)
    }
}

/// `e^{i pi num / den}` evaluated with the angle reduced modulo `2 den`.
pub fn unit_root<T: Real>(num: i64, den: i64) -> Complex<T> {
    let m = num.rem_euclid(2 * den);
    let angle = T::pi() * T::from_int(m) / T::from_int(den);
    let (sin, cos) = angle.sin_cos();
    Complex::new(cos, sin)
}

/// `|z|` for complex numbers over any [`Real`].
pub fn complex_abs<T: Real>(z: Complex<T>) -> T {
    (z.re * z.re + z.im * z.im).sqrt()
}

/// Principal square root of a real number, as a complex number.
pub fn complex_sqrt_of_real<T: Real>(x: T) -> Complex<T> {
    if x < T::zero() {
        Complex::new(T::zero(), (-x).sqrt())
    } else {
        Complex::new(x.sqrt(), T::zero())
    }
}
