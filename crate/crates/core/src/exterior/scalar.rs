//! Scalar towers: exact rationals, exact complex rationals, f64 and Complex64.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar.
pub type Q = BigRational;
/// Exact complex rational scalar.
pub type QC = Complex<BigRational>;

/// Which tower a value belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tower {
    Rational,
    ComplexRational,
    Float,
    ComplexFloat,
}

/// Coefficient field for forms. Exact towers are closed under the four
/// operations (division by nonzero); float towers are compared with a
/// [`Tolerance`].
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const TOWER: Tower;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(n: i64) -> Self;
    fn from_q(q: &Q) -> Self;
    fn conj(&self) -> Self;
    /// Squared modulus as f64, used for norms and diagnostics.
    fn abs2_f64(&self) -> f64;
    /// Rendering split into (negative, magnitude) for canonical text output.
    fn render_signed(&self) -> (bool, String);

    fn ratio(n: i64, d: i64) -> Self {
        Self::from_q(&Q::new(BigInt::from(n), BigInt::from(d)))
    }
}

/// Scalars with an imaginary unit.
pub trait ComplexScalar: Scalar {
    type Real: Scalar;
    fn i() -> Self;
    fn from_real(r: Self::Real) -> Self;
    fn re(&self) -> Self::Real;
    fn im(&self) -> Self::Real;
}

/// Scalars embedded in a complex tower.
pub trait RealScalar: Scalar {
    type Complex: ComplexScalar<Real = Self>;
}

impl Scalar for Q {
    const TOWER: Tower = Tower::Rational;
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_i64(n: i64) -> Self {
        Q::from_integer(BigInt::from(n))
    }
    fn from_q(q: &Q) -> Self {
        q.clone()
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn abs2_f64(&self) -> f64 {
        let f = self.to_f64().unwrap_or(f64::NAN);
        f * f
    }
    fn render_signed(&self) -> (bool, String) {
        (self.is_negative(), self.abs().to_string())
    }
}

impl Scalar for QC {
    const TOWER: Tower = Tower::ComplexRational;
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_i64(n: i64) -> Self {
        Complex::new(Q::from_i64(n), Zero::zero())
    }
    fn from_q(q: &Q) -> Self {
        Complex::new(q.clone(), Zero::zero())
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn abs2_f64(&self) -> f64 {
        self.re.abs2_f64() + self.im.abs2_f64()
    }
    fn render_signed(&self) -> (bool, String) {
        if Zero::is_zero(&self.im) {
            return self.re.render_signed();
        }
        if Zero::is_zero(&self.re) {
            let (neg, mag) = self.im.render_signed();
            let mag = if mag == "1" { "i".to_string() } else { format!("{mag}i") };
            return (neg, mag);
        }
        let (ineg, imag) = self.im.render_signed();
        let op = if ineg { '-' } else { '+' };
        (false, format!("({}{}{}i)", self.re, op, imag))
    }
}

impl Scalar for f64 {
    const TOWER: Tower = Tower::Float;
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_q(q: &Q) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
    fn conj(&self) -> Self {
        *self
    }
    fn abs2_f64(&self) -> f64 {
        self * self
    }
    fn render_signed(&self) -> (bool, String) {
        (self.is_sign_negative() && *self != 0.0, format!("{}", self.abs()))
    }
}

impl Scalar for Complex64 {
    const TOWER: Tower = Tower::ComplexFloat;
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn from_q(q: &Q) -> Self {
        Complex64::new(f64::from_q(q), 0.0)
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn abs2_f64(&self) -> f64 {
        self.norm_sqr()
    }
    fn render_signed(&self) -> (bool, String) {
        if self.im == 0.0 {
            return self.re.render_signed();
        }
        (false, format!("({}{:+}i)", self.re, self.im))
    }
}

impl ComplexScalar for QC {
    type Real = Q;
    fn i() -> Self {
        Complex::new(Zero::zero(), One::one())
    }
    fn from_real(r: Q) -> Self {
        Complex::new(r, Zero::zero())
    }
    fn re(&self) -> Q {
        self.re.clone()
    }
    fn im(&self) -> Q {
        self.im.clone()
    }
}

impl ComplexScalar for Complex64 {
    type Real = f64;
    fn i() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn from_real(r: f64) -> Self {
        Complex64::new(r, 0.0)
    }
    fn re(&self) -> f64 {
        self.re
    }
    fn im(&self) -> f64 {
        self.im
    }
}

impl RealScalar for Q {
    type Complex = QC;
}

impl RealScalar for f64 {
    type Complex = Complex64;
}

/// Exact rational from a numerator and denominator.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Exact integer rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Absolute and relative tolerance for comparisons in the float tower.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel }
    }

    pub const fn absolute(abs: f64) -> Self {
        Tolerance { abs, rel: 0.0 }
    }

    /// True when `err` is within tolerance of a quantity of size `scale`.
    pub fn accepts(&self, err: f64, scale: f64) -> bool {
        err <= self.abs + self.rel * scale
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::new(1e-12, 1e-12)
    }
}
