//! Exact coefficient algebras.
//!
//! Four algebras carry every computation in the crate:
//!
//! * the rationals (standing in for the reals),
//! * the Gaussian rationals `Q(i)` with `i^2 = -1`,
//! * the Lorentz (double) numbers `Q[eps]` with `eps^2 = +1`,
//! * the rational quaternions `w + xi + yj + zk`.
//!
//! The quaternions use the Hamilton product, so for a complex number `u = a + bi`
//! we have `u j = j conj(u)`. This is the convention under which the quaternions
//! decompose as `H = C + jC`, and the quaternionic forms built in
//! [`crate::orbit`] depend on it.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary precision rational number, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Shorthand for the integer `n` as a rational.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`.
///
/// Panics if `den == 0`.
pub fn qf(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// A commutative-or-not ring with an involutive conjugation.
///
/// Every algebra here is a `*`-algebra over `Q`; for the rationals the
/// conjugation is the identity.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_rational(q: &Rational) -> Self;
    fn conj(&self) -> Self;
    /// Coefficient of `1`.
    fn real_part(&self) -> Rational;
    fn is_unit(&self) -> bool;
    /// Approximate value of the real part, used by the floating mirror.
    fn real_f64(&self) -> f64 {
        rational_to_f64(&self.real_part())
    }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or_else(|| {
        // numerator or denominator beyond f64 range: scale both down
        let n = x.numer().to_f64().unwrap_or(f64::MAX);
        let d = x.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

impl Ring for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn real_part(&self) -> Rational {
        self.clone()
    }
    fn is_unit(&self) -> bool {
        !self.is_zero()
    }
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

// ---------------------------------------------------------------------------
// Gaussian rationals

/// `re + im * i` with `i^2 = -1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn i() -> Self {
        Self::new(q(0), q(1))
    }

    /// `re^2 + im^2`.
    pub fn norm(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{} - {}i", self.re, -&self.im)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::new(q(0), q(0))
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::new(q(1), q(0))
    }
}

impl Ring for GaussianRational {
    fn from_rational(q: &Rational) -> Self {
        Self::new(q.clone(), Rational::zero())
    }
    fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }
    fn real_part(&self) -> Rational {
        self.re.clone()
    }
    fn is_unit(&self) -> bool {
        !self.is_zero()
    }
}

impl Field for GaussianRational {
    fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(Self::new(&self.re / &n, -&self.im / &n))
    }
}

// ---------------------------------------------------------------------------
// Lorentz numbers

/// `a + b * eps` with `eps^2 = +1`.
///
/// The null idempotents `e = (1 - eps)/2` and `ebar = (1 + eps)/2` split the
/// algebra as a product of two copies of `Q`; see [`LorentzRational::split`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LorentzRational {
    pub a: Rational,
    pub b: Rational,
}

impl LorentzRational {
    pub fn new(a: Rational, b: Rational) -> Self {
        Self { a, b }
    }

    pub fn eps() -> Self {
        Self::new(q(0), q(1))
    }

    /// The idempotent `e = (1 - eps)/2`.
    pub fn e() -> Self {
        Self::new(qf(1, 2), qf(-1, 2))
    }

    /// The idempotent `ebar = (1 + eps)/2`.
    pub fn ebar() -> Self {
        Self::new(qf(1, 2), qf(1, 2))
    }

    /// Coordinates `(p, q)` with `self = p e + q ebar`.
    ///
    /// The map is a ring isomorphism onto `Q x Q` with componentwise operations.
    pub fn split(&self) -> (Rational, Rational) {
        (&self.a - &self.b, &self.a + &self.b)
    }

    /// Inverse of [`LorentzRational::split`].
    pub fn from_split(p: &Rational, q_: &Rational) -> Self {
        let half = qf(1, 2);
        Self::new((p + q_) * &half, (q_ - p) * half)
    }

    /// `a^2 - b^2`, the product with the conjugate.
    pub fn quadrance(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b
    }

    pub fn inv(&self) -> Option<Self> {
        let d = self.quadrance();
        if d.is_zero() {
            None
        } else {
            Some(Self::new(&self.a / &d, -&self.b / &d))
        }
    }
}

/// Free function form of [`LorentzRational::split`].
pub fn lorentz_split(x: &LorentzRational) -> (Rational, Rational) {
    x.split()
}

impl fmt::Display for LorentzRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{} - {}eps", self.a, -&self.b)
        } else {
            write!(f, "{} + {}eps", self.a, self.b)
        }
    }
}

impl Add for LorentzRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for LorentzRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b)
    }
}

impl Mul for LorentzRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            &self.a * &o.a + &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
        )
    }
}

impl Neg for LorentzRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

impl Zero for LorentzRational {
    fn zero() -> Self {
        Self::new(q(0), q(0))
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for LorentzRational {
    fn one() -> Self {
        Self::new(q(1), q(0))
    }
}

impl Ring for LorentzRational {
    fn from_rational(q: &Rational) -> Self {
        Self::new(q.clone(), Rational::zero())
    }
    fn conj(&self) -> Self {
        Self::new(self.a.clone(), -&self.b)
    }
    fn real_part(&self) -> Rational {
        self.a.clone()
    }
    fn is_unit(&self) -> bool {
        !self.quadrance().is_zero()
    }
}

// ---------------------------------------------------------------------------
// Quaternions

/// `w + x i + y j + z k` with the Hamilton relations `i^2 = j^2 = k^2 = ijk = -1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RationalQuaternion {
    pub w: Rational,
    pub x: Rational,
    pub y: Rational,
    pub z: Rational,
}

impl RationalQuaternion {
    pub fn new(w: Rational, x: Rational, y: Rational, z: Rational) -> Self {
        Self { w, x, y, z }
    }

    pub fn i() -> Self {
        Self::new(q(0), q(1), q(0), q(0))
    }

    pub fn j() -> Self {
        Self::new(q(0), q(0), q(1), q(0))
    }

    pub fn k() -> Self {
        Self::new(q(0), q(0), q(0), q(1))
    }

    /// Embeds `C` as `span(1, i)`.
    pub fn from_complex(c: &GaussianRational) -> Self {
        Self::new(c.re.clone(), c.im.clone(), q(0), q(0))
    }

    /// Writes `self = u + j v` with `u, v` complex and returns `(u, v)`.
    pub fn complex_parts(&self) -> (GaussianRational, GaussianRational) {
        // j (v_r + v_i i) = v_r j - v_i k
        (
            GaussianRational::new(self.w.clone(), self.x.clone()),
            GaussianRational::new(self.y.clone(), -&self.z),
        )
    }

    pub fn norm(&self) -> Rational {
        &self.w * &self.w + &self.x * &self.x + &self.y * &self.y + &self.z * &self.z
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(Self::new(&c.w / &n, &c.x / &n, &c.y / &n, &c.z / &n))
    }
}

impl fmt::Display for RationalQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i + {}j + {}k", self.w, self.x, self.y, self.z)
    }
}

impl Add for RationalQuaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for RationalQuaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul for RationalQuaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a1, b1, c1, d1) = (&self.w, &self.x, &self.y, &self.z);
        let (a2, b2, c2, d2) = (&o.w, &o.x, &o.y, &o.z);
        Self::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

impl Neg for RationalQuaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Zero for RationalQuaternion {
    fn zero() -> Self {
        Self::new(q(0), q(0), q(0), q(0))
    }
    fn is_zero(&self) -> bool {
        self.w.is_zero() && self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }
}

impl One for RationalQuaternion {
    fn one() -> Self {
        Self::new(q(1), q(0), q(0), q(0))
    }
}

impl Ring for RationalQuaternion {
    fn from_rational(q_: &Rational) -> Self {
        Self::new(q_.clone(), q(0), q(0), q(0))
    }
    fn conj(&self) -> Self {
        Self::new(self.w.clone(), -&self.x, -&self.y, -&self.z)
    }
    fn real_part(&self) -> Rational {
        self.w.clone()
    }
    fn is_unit(&self) -> bool {
        !self.is_zero()
    }
}

// ---------------------------------------------------------------------------
// Tagged scalars

/// Which coefficient algebra a value or matrix lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algebra {
    Real,
    Complex,
    Lorentz,
    Quaternion,
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Algebra::Real => "real",
            Algebra::Complex => "complex",
            Algebra::Lorentz => "lorentz",
            Algebra::Quaternion => "quaternion",
        };
        f.write_str(s)
    }
}

/// A scalar together with its algebra.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Real(Rational),
    Complex(GaussianRational),
    Lorentz(LorentzRational),
    Quaternion(RationalQuaternion),
}

impl Scalar {
    pub fn algebra(&self) -> Algebra {
        match self {
            Scalar::Real(_) => Algebra::Real,
            Scalar::Complex(_) => Algebra::Complex,
            Scalar::Lorentz(_) => Algebra::Lorentz,
            Scalar::Quaternion(_) => Algebra::Quaternion,
        }
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Real(x) => Scalar::Real(x.clone()),
            Scalar::Complex(x) => Scalar::Complex(x.conj()),
            Scalar::Lorentz(x) => Scalar::Lorentz(x.conj()),
            Scalar::Quaternion(x) => Scalar::Quaternion(x.conj()),
        }
    }

    pub fn is_unit(&self) -> bool {
        match self {
            Scalar::Real(x) => x.is_unit(),
            Scalar::Complex(x) => x.is_unit(),
            Scalar::Lorentz(x) => x.is_unit(),
            Scalar::Quaternion(x) => x.is_unit(),
        }
    }
}

fn expect_algebra(x: &Scalar, algebra: Algebra) -> Result<()> {
    if x.algebra() == algebra {
        Ok(())
    } else {
        Err(Error::AlgebraMismatch {
            expected: algebra,
            found: x.algebra(),
        })
    }
}

/// Conjugation in the named algebra.
pub fn conjugate(x: &Scalar, algebra: Algebra) -> Result<Scalar> {
    expect_algebra(x, algebra)?;
    Ok(x.conj())
}

/// Whether `x` has a two-sided inverse in the named algebra.
pub fn is_unit(x: &Scalar, algebra: Algebra) -> Result<bool> {
    expect_algebra(x, algebra)?;
    Ok(x.is_unit())
}
