//! Scalar abstractions shared by the exact and floating-point engines.
//!
//! Gaussian elimination is written against [`FieldElement`], the simplex
//! against [`OrderedField`], and the semidefinite solver against
//! [`num_traits::Float`]. Prime-field elements carry their modulus, so the
//! field traits never ask for a free-standing `zero()`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Inv, One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};

/// Element of a field in which elimination can run.
pub trait FieldElement:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Inv<Output = Self>
{
    fn is_zero_element(&self) -> bool;
}

/// Ordered field with constructible constants, as required by the simplex.
pub trait OrderedField: FieldElement + Zero + One + PartialOrd {
    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }
    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }
}

impl FieldElement for BigRational {
    fn is_zero_element(&self) -> bool {
        Zero::is_zero(self)
    }
}
impl OrderedField for BigRational {}

macro_rules! float_field {
    ($t:ty) => {
        impl FieldElement for $t {
            fn is_zero_element(&self) -> bool {
                *self == 0.0
            }
        }
        impl OrderedField for $t {}
    };
}
float_field!(f32);
float_field!(f64);

/// Element of the prime field F_p, p < 2^31.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn new(value: i64, modulus: u32) -> Self {
        let p = modulus as i64;
        Fp {
            value: value.rem_euclid(p) as u64,
            modulus: modulus as u64,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u32 {
        self.modulus as u32
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.value;
        let mut acc = 1u64 % self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.modulus;
            }
            base = base * base % self.modulus;
            e >>= 1;
        }
        Fp {
            value: acc,
            modulus: self.modulus,
        }
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Fp {
            value: (self.value + rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Fp {
            value: (self.value + self.modulus - rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Fp {
            value: self.value * rhs.value % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Inv for Fp {
    type Output = Fp;
    /// Fermat inverse; panics on zero.
    fn inv(self) -> Fp {
        assert!(self.value != 0, "inverse of zero in F_{}", self.modulus);
        self.pow(self.modulus - 2)
    }
}

impl FieldElement for Fp {
    fn is_zero_element(&self) -> bool {
        self.value == 0
    }
}

/// Deterministic trial division; moduli are below 2^31.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Formats as `p/q`, or `p` for integers.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q`, `p`, or a finite decimal such as `2.5`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || domain(format!("not a rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let w: BigInt = if whole.is_empty() || whole == "-" {
            BigInt::zero()
        } else {
            whole.parse().map_err(|_| bad())?
        };
        let f: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = w.abs() * &scale + f;
        let num = if negative { -mag } else { mag };
        return Ok(BigRational::new(num, scale));
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(p))
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Denominator grid used when a float enters the exact engine.
pub const ROUNDING_DENOMINATOR: i64 = 1_000_000_000;

/// Smallest multiple of 1/10^9 that is >= `x`.
pub fn round_up(x: f64) -> Result<BigRational> {
    round_to_grid(x, true)
}

/// Largest multiple of 1/10^9 that is <= `x`.
pub fn round_down(x: f64) -> Result<BigRational> {
    round_to_grid(x, false)
}

fn round_to_grid(x: f64, up: bool) -> Result<BigRational> {
    let exact = BigRational::from_float(x)
        .ok_or_else(|| Error::Domain(format!("cannot round non-finite value {x}")))?;
    let scale = BigInt::from(ROUNDING_DENOMINATOR);
    let scaled = exact * BigRational::from_integer(scale.clone());
    let n = if up { scaled.ceil() } else { scaled.floor() };
    Ok(BigRational::new(n.to_integer(), scale))
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Serde helpers writing rationals as `p/q` strings.
pub mod rational_text {
    use num_rational::BigRational;
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    use super::format_rational;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn serialize_int<S: Serializer>(r: &num_bigint::BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn serialize_vec<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rational(r))?;
        }
        seq.end()
    }
}
