//! Scalar rings used throughout the crate.
//!
//! Two coefficient fields are supported: exact Gaussian rationals
//! ([`GaussRat`]) and double precision complex numbers ([`C64`]).
//! Polynomial rings over the Gaussian rationals ([`crate::algebra::MultiPoly`])
//! implement [`Ring`] as well, which lets determinant and characteristic
//! polynomial code run symbolically.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type C64 = Complex64;

/// A commutative ring containing the rationals.
pub trait Ring:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(k: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// Division by a nonzero integer, exact in every ring we use.
    fn div_int(&self, k: i64) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

pub trait Field: Ring + Div<Output = Self> {
    fn inv(&self) -> Option<Self>;
}

/// Magnitude used for pivoting and norms.
pub trait Magnitude {
    fn magnitude(&self) -> f64;
}

impl Ring for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn one() -> Self {
        C64::new(1.0, 0.0)
    }
    fn from_i64(k: i64) -> Self {
        C64::new(k as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn div_int(&self, k: i64) -> Self {
        self / k as f64
    }
}

impl Field for C64 {
    fn inv(&self) -> Option<Self> {
        if Ring::is_zero(self) {
            None
        } else {
            Some(1.0 / self)
        }
    }
}

impl Magnitude for C64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Exact complex number with rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussRat {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussRat {
            re: BigRational::from_integer(re.into()),
            im: BigRational::from_integer(im.into()),
        }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        GaussRat::real(BigRational::new(num.into(), den.into()))
    }

    pub fn i() -> Self {
        GaussRat::from_ints(0, 1)
    }

    /// Exact conversion of a finite double; returns `None` for NaN or infinity.
    pub fn from_c64(z: C64) -> Option<Self> {
        Some(GaussRat {
            re: BigRational::from_float(z.re)?,
            im: BigRational::from_float(z.im)?,
        })
    }

    pub fn to_c64(&self) -> C64 {
        C64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    pub fn conj(&self) -> Self {
        GaussRat {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Total order on (re, im), used for canonical eigenvalue ordering.
    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

pub fn rat_to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // very large numerator/denominator: scale down by bit length
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = (nb - db).clamp(-1000, 1000);
    let scaled = if shift >= 0 {
        q / BigRational::from_integer(BigInt::one() << (shift as usize))
    } else {
        q * BigRational::from_integer(BigInt::one() << ((-shift) as usize))
    };
    let n = scaled.numer().clone();
    let d = scaled.denom().clone();
    let excess = (n.bits().max(d.bits()) as i64 - 60).max(0) as usize;
    let nf = (n >> excess).to_f64().unwrap_or(0.0);
    let df = (d >> excess).to_f64().unwrap_or(1.0);
    nf / df * 2f64.powi(shift as i32)
}

/// "num/den" text of a rational, denominator always written.
pub fn rat_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Serialized as `["re_num/re_den", "im_num/im_den"]`.
impl serde::Serialize for GaussRat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeTuple;
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&rat_string(&self.re))?;
        t.serialize_element(&rat_string(&self.im))?;
        t.end()
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Add for GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: GaussRat) -> GaussRat {
        GaussRat {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl<'a> Add<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: GaussRat) -> GaussRat {
        GaussRat {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl<'a> Sub<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: GaussRat) -> GaussRat {
        &self * &rhs
    }
}

impl<'a> Mul<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussRat::real(&self.re * &rhs.re);
        }
        GaussRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Div for GaussRat {
    type Output = GaussRat;
    fn div(self, rhs: GaussRat) -> GaussRat {
        let inv = rhs.inv().expect("division by zero Gaussian rational");
        self * inv
    }
}

impl Ring for GaussRat {
    fn zero() -> Self {
        GaussRat::from_ints(0, 0)
    }
    fn one() -> Self {
        GaussRat::from_ints(1, 0)
    }
    fn from_i64(k: i64) -> Self {
        GaussRat::from_ints(k, 0)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn div_int(&self, k: i64) -> Self {
        let k = BigRational::from_integer(k.into());
        GaussRat {
            re: &self.re / &k,
            im: &self.im / &k,
        }
    }
}

impl Field for GaussRat {
    fn inv(&self) -> Option<Self> {
        if Ring::is_zero(self) {
            return None;
        }
        if self.im.is_zero() {
            return Some(GaussRat::real(self.re.recip()));
        }
        let d = self.norm_sqr();
        Some(GaussRat {
            re: &self.re / &d,
            im: -(&self.im / &d),
        })
    }
}

impl Magnitude for GaussRat {
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_inverse_roundtrip() {
        let z = GaussRat::new(BigRational::new(3.into(), 4.into()), BigRational::new((-2).into(), 5.into()));
        let w = z.inv().unwrap();
        assert_eq!(&z * &w, GaussRat::one());
        assert!(GaussRat::zero().inv().is_none());
    }

    #[test]
    fn float_conversion_is_exact() {
        let z = C64::new(0.1, -3.5);
        let g = GaussRat::from_c64(z).unwrap();
        assert_eq!(g.to_c64(), z);
        assert!(GaussRat::from_c64(C64::new(f64::NAN, 0.0)).is_none());
    }

    #[test]
    fn huge_rationals_convert() {
        let big = BigRational::from_integer(BigInt::one() << 2000usize);
        let q = &big / (&big * BigRational::from_integer(3.into()));
        assert!((rat_to_f64(&q) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn pow_by_squaring() {
        let i = GaussRat::i();
        assert_eq!(i.pow(2), GaussRat::from_i64(-1));
        assert_eq!(i.pow(4), GaussRat::one());
        assert_eq!(GaussRat::from_i64(3).pow(5), GaussRat::from_i64(243));
    }
}
