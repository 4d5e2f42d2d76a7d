//! Scalar fields used by every matrix in the crate.
//!
//! [`Exact`] is a complex number with arbitrary-precision rational real and
//! imaginary parts; equality is literal. [`Approx`] is a complex float that
//! carries the tolerance under which it is compared to zero.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default tolerance for float mode.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Arithmetic needed by the linear algebra kernel.
///
/// Methods take references so that big-rational values are not cloned on
/// every operation.
pub trait Field: Clone + fmt::Debug + fmt::Display + PartialEq + Send + Sync + 'static {
    /// `true` when equality is literal (no tolerance).
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(numer: i64, denom: i64) -> Self;
    fn from_complex_ratio(re: (i64, i64), im: (i64, i64)) -> Self {
        Self::from_ratio(re.0, re.1).add(&Self::from_ratio(im.0, im.1).mul(&Self::i()))
    }
    /// The imaginary unit.
    fn i() -> Self;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for (approximate) zero.
    fn inv(&self) -> Option<Self>;
    fn conj(&self) -> Self;

    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool {
        self.sub(&Self::one()).is_zero()
    }
    fn approx_eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
    /// Sign of a real value; `None` if the imaginary part is nonzero.
    fn real_sign(&self) -> Option<Ordering>;
    /// Modulus as a float, used only to rank pivot candidates.
    fn magnitude(&self) -> f64;
}

/// Exact complex rational.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Exact {
    re: BigRational,
    im: BigRational,
}

impl Exact {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    /// Parse `"p"`, `"p/q"` or `"-p/q"`.
    pub fn parse_rational(s: &str) -> Option<BigRational> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().ok()?;
                let d: BigInt = d.trim().parse().ok()?;
                if d.is_zero() {
                    return None;
                }
                Some(BigRational::new(n, d))
            }
            None => Some(BigRational::from_integer(s.parse().ok()?)),
        }
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", fmt_rational(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}i", fmt_rational(&self.im))
        } else {
            let sign = if self.im.is_negative() { '-' } else { '+' };
            write!(f, "{}{}{}i", fmt_rational(&self.re), sign, fmt_rational(&self.im.abs()))
        }
    }
}

impl Field for Exact {
    const EXACT: bool = true;

    fn zero() -> Self {
        Self { re: BigRational::zero(), im: BigRational::zero() }
    }

    fn one() -> Self {
        Self::real(BigRational::one())
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Self::real(BigRational::new(numer.into(), denom.into()))
    }

    fn i() -> Self {
        Self { re: BigRational::zero(), im: BigRational::one() }
    }

    fn add(&self, rhs: &Self) -> Self {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        Self { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }

    fn sub(&self, rhs: &Self) -> Self {
        if rhs.is_zero() {
            return self.clone();
        }
        Self { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }

    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        if self.im.is_zero() && rhs.im.is_zero() {
            return Self::real(&self.re * &rhs.re);
        }
        Self {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }

    fn neg(&self) -> Self {
        Self { re: -&self.re, im: -&self.im }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(Self::real(self.re.recip()));
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(Self { re: &self.re / &norm, im: -&self.im / &norm })
    }

    fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -&self.im }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn is_one(&self) -> bool {
        self.im.is_zero() && self.re.is_one()
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn real_sign(&self) -> Option<Ordering> {
        if !self.im.is_zero() {
            return None;
        }
        Some(self.re.cmp(&BigRational::zero()))
    }

    fn magnitude(&self) -> f64 {
        let re = self.re.to_f64().unwrap_or(f64::MAX);
        let im = self.im.to_f64().unwrap_or(f64::MAX);
        re.hypot(im)
    }
}

/// Complex float compared to zero under a tolerance.
///
/// Values built without an explicit tolerance (constants, fixtures) adopt the
/// tolerance of whatever they are combined with, falling back to
/// [`DEFAULT_TOLERANCE`].
#[derive(Clone, Copy)]
pub struct Approx {
    re: f64,
    im: f64,
    tol: Option<f64>,
}

impl Approx {
    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im, tol: None }
    }

    pub fn with_tolerance(re: f64, im: f64, tol: f64) -> Self {
        Self { re, im, tol: Some(tol) }
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn tolerance(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_TOLERANCE)
    }

    fn join_tol(a: Option<f64>, b: Option<f64>) -> Option<f64> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.max(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    fn combine(&self, rhs: &Self, re: f64, im: f64) -> Self {
        Self { re, im, tol: Self::join_tol(self.tol, rhs.tol) }
    }
}

impl PartialEq for Approx {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other)
    }
}

impl fmt::Debug for Approx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Approx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tol = self.tolerance();
        let im = if self.im.abs() <= tol { 0.0 } else { self.im };
        let re = if self.re.abs() <= tol { 0.0 } else { self.re };
        if im == 0.0 {
            write!(f, "{re}")
        } else if re == 0.0 {
            write!(f, "{im}i")
        } else {
            write!(f, "{re}{:+}i", im)
        }
    }
}

impl Field for Approx {
    const EXACT: bool = false;

    fn zero() -> Self {
        Self::new(0.0, 0.0)
    }

    fn one() -> Self {
        Self::new(1.0, 0.0)
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Self::new(numer as f64 / denom as f64, 0.0)
    }

    fn i() -> Self {
        Self::new(0.0, 1.0)
    }

    fn add(&self, rhs: &Self) -> Self {
        self.combine(rhs, self.re + rhs.re, self.im + rhs.im)
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.combine(rhs, self.re - rhs.re, self.im - rhs.im)
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.combine(
            rhs,
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }

    fn neg(&self) -> Self {
        Self { re: -self.re, im: -self.im, tol: self.tol }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = self.re * self.re + self.im * self.im;
        Some(Self { re: self.re / norm, im: -self.im / norm, tol: self.tol })
    }

    fn conj(&self) -> Self {
        Self { re: self.re, im: -self.im, tol: self.tol }
    }

    fn is_zero(&self) -> bool {
        self.re.hypot(self.im) <= self.tolerance()
    }

    fn real_sign(&self) -> Option<Ordering> {
        let tol = self.tolerance();
        if self.im.abs() > tol {
            return None;
        }
        Some(if self.re > tol {
            Ordering::Greater
        } else if self.re < -tol {
            Ordering::Less
        } else {
            Ordering::Equal
        })
    }

    fn magnitude(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_is_closed() {
        let a = Exact::from_ratio(1, 3);
        let b = Exact::from_complex_ratio((1, 2), (-2, 5));
        let prod = a.mul(&b);
        assert_eq!(prod, Exact::from_complex_ratio((1, 6), (-2, 15)));
        assert!(b.mul(&b.inv().unwrap()).is_one());
        assert_eq!(b.conj().conj(), b);
        assert_eq!(Exact::i().mul(&Exact::i()), Exact::from_ratio(-1, 1));
    }

    #[test]
    fn exact_parse() {
        assert_eq!(Exact::parse_rational("-3/6"), Some(BigRational::new((-1).into(), 2.into())));
        assert_eq!(Exact::parse_rational("7"), Some(BigRational::from_integer(7.into())));
        assert_eq!(Exact::parse_rational("1/0"), None);
        assert_eq!(Exact::parse_rational("x"), None);
    }

    #[test]
    fn exact_display() {
        assert_eq!(Exact::from_ratio(2, 4).to_string(), "1/2");
        assert_eq!(Exact::from_complex_ratio((1, 1), (-1, 3)).to_string(), "1-1/3i");
        assert_eq!(Exact::i().to_string(), "1i");
    }

    #[test]
    fn approx_tolerance_propagates() {
        let loose = Approx::with_tolerance(1e-4, 0.0, 1e-3);
        assert!(loose.is_zero());
        // the default-tolerance operand adopts the explicit one
        assert!(loose.sub(&Approx::zero()).is_zero());
        assert!(!Approx::new(1e-4, 0.0).is_zero());
        let tight = Approx::with_tolerance(1e-11, 0.0, 1e-12);
        assert!(!tight.is_zero());
        assert!(tight.mul(&Approx::one()).tolerance() == 1e-12);
    }

    #[test]
    fn real_sign() {
        assert_eq!(Exact::from_ratio(-1, 2).real_sign(), Some(Ordering::Less));
        assert_eq!(Exact::i().real_sign(), None);
        assert_eq!(Approx::new(1e-12, 0.0).real_sign(), Some(Ordering::Equal));
    }
}
