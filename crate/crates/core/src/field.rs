//! Exact scalar fields.
//!
//! Every algebraic routine in this crate is generic over a [`Field`], a small
//! context object that knows how to build constants, combine elements and
//! (de)serialize them. Two implementations are provided: [`RationalField`]
//! over arbitrary-precision rationals and [`PrimeField`] over `Z/pZ` for a
//! word-size prime `p`.
//!
//! Elements are plain values. `Rational` and `FpElement` also implement the
//! usual `std::ops` traits so tests and callers can write `a + b` directly;
//! generic code goes through the field object.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::roots;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse field element {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("unknown field specification {0:?} (expected \"Q\" or \"Fp:<prime>\")")]
    BadSpec(String),
}

/// Commutative ring with identity, used as an explicit context object.
pub trait Ring: Clone + fmt::Debug + PartialEq + Send + Sync {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
}

/// An exact field.
pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    fn parse(&self, s: &str) -> Result<Self::Elem, FieldError>;
    fn format(&self, a: &Self::Elem) -> String;
    fn spec(&self) -> FieldSpec;

    /// Draw a "small" random element: an integer in `[-10, 10]` over Q,
    /// a uniform residue over F_p.
    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem;

    /// Distinct roots in the field of the univariate polynomial with
    /// ascending coefficients `poly` (`poly[i]` multiplies `t^i`).
    /// The polynomial must not be identically zero.
    fn distinct_roots(&self, poly: &[Self::Elem]) -> Vec<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// Serializable description of a field: `"Q"` or `"Fp:<p>"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "Q" {
            return Ok(FieldSpec::Rational);
        }
        let p = t
            .strip_prefix("Fp:")
            .and_then(|rest| rest.parse::<u64>().ok())
            .ok_or_else(|| FieldError::BadSpec(s.to_string()))?;
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p))
    }
}

impl TryFrom<String> for FieldSpec {
    type Error = FieldError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<FieldSpec> for String {
    fn from(s: FieldSpec) -> String {
        s.to_string()
    }
}

// ---------------------------------------------------------------------------
// Rationals
// ---------------------------------------------------------------------------

/// Arbitrary-precision rational in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, FieldError> {
        rat_normalize(num.into(), den.into())
    }

    pub fn from_integer(v: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(v.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn signum(&self) -> i32 {
        if self.0.is_zero() {
            0
        } else if self.0.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn recip(&self) -> Option<Self> {
        (!self.0.is_zero()).then(|| Rational(self.0.recip()))
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

}

/// Build the canonical reduced rational `num/den`.
pub fn rat_normalize(num: BigInt, den: BigInt) -> Result<Rational, FieldError> {
    if den.is_zero() {
        return Err(FieldError::ZeroDenominator);
    }
    // BigRational::new reduces and fixes the sign of the denominator.
    Ok(Rational(BigRational::new(num, den)))
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_bigint(s: &str, whole: &str) -> Result<BigInt, FieldError> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(FieldError::Parse {
            input: whole.to_string(),
            reason: format!("{s:?} is not an integer"),
        });
    }
    BigInt::from_str(s).map_err(|e| FieldError::Parse {
        input: whole.to_string(),
        reason: e.to_string(),
    })
}

impl FromStr for Rational {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once('/') {
            None => Ok(Rational::from_integer(parse_bigint(s, s)?)),
            Some((n, d)) => {
                if d.starts_with(['+', '-']) {
                    return Err(FieldError::Parse {
                        input: s.to_string(),
                        reason: "sign belongs on the numerator".into(),
                    });
                }
                rat_normalize(parse_bigint(n, s)?, parse_bigint(d, s)?)
            }
        }
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational(self.0 - rhs.0)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0 * rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

/// The field Q.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RationalField;

impl Ring for RationalField {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        Rational(&a.0 + &b.0)
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        Rational(&a.0 - &b.0)
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        Rational(&a.0 * &b.0)
    }
    fn neg(&self, a: &Rational) -> Rational {
        Rational(-&a.0)
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.0.is_zero()
    }
}

impl Field for RationalField {
    fn inv(&self, a: &Rational) -> Option<Rational> {
        a.recip()
    }
    fn from_i64(&self, v: i64) -> Rational {
        Rational::from_integer(v)
    }
    fn from_bigint(&self, v: &BigInt) -> Rational {
        Rational::from_integer(v.clone())
    }
    fn parse(&self, s: &str) -> Result<Rational, FieldError> {
        s.parse()
    }
    fn format(&self, a: &Rational) -> String {
        a.to_string()
    }
    fn spec(&self) -> FieldSpec {
        FieldSpec::Rational
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Rational {
        Rational::from_integer(rng.gen_range(-10i64..=10))
    }
    fn distinct_roots(&self, poly: &[Rational]) -> Vec<Rational> {
        roots::rational_roots(poly)
    }
}

// ---------------------------------------------------------------------------
// Prime fields
// ---------------------------------------------------------------------------

/// Element of `Z/pZ`, stored as its canonical residue in `[0, p)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpElement {
    value: u64,
    modulus: u64,
}

impl FpElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn raw(value: u64, modulus: u64) -> Self {
        FpElement { value, modulus }
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = FpElement::raw(1 % self.modulus, self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn inv(self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        // extended Euclid on i128 to stay clear of overflow
        let (mut r0, mut r1) = (self.modulus as i128, self.value as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        let m = self.modulus as i128;
        Some(FpElement::raw(t0.rem_euclid(m) as u64, self.modulus))
    }
}

/// Reduce an integer into `Z/pZ`.
pub fn fp_embed(x: &BigInt, p: u64) -> Result<FpElement, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    let r = x.mod_floor(&BigInt::from(p));
    Ok(FpElement::raw(r.to_u64().expect("residue fits in u64"), p))
}

impl fmt::Display for FpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

impl fmt::Debug for FpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for FpElement {
    type Output = FpElement;
    fn add(self, rhs: FpElement) -> FpElement {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let s = (self.value as u128 + rhs.value as u128) % self.modulus as u128;
        FpElement::raw(s as u64, self.modulus)
    }
}

impl Sub for FpElement {
    type Output = FpElement;
    fn sub(self, rhs: FpElement) -> FpElement {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.modulus - (rhs.value - self.value)
        };
        FpElement::raw(v, self.modulus)
    }
}

impl Mul for FpElement {
    type Output = FpElement;
    fn mul(self, rhs: FpElement) -> FpElement {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let m = (self.value as u128 * rhs.value as u128) % self.modulus as u128;
        FpElement::raw(m as u64, self.modulus)
    }
}

impl Neg for FpElement {
    type Output = FpElement;
    fn neg(self) -> FpElement {
        if self.value == 0 {
            self
        } else {
            FpElement::raw(self.modulus - self.value, self.modulus)
        }
    }
}

/// The prime field `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

/// Above this size root finding switches from exhaustive search over the
/// projective line to equal-degree splitting.
const EXHAUSTIVE_ROOT_LIMIT: u64 = 1 << 20;

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, v: i64) -> FpElement {
        FpElement::raw(v.rem_euclid(self.p as i64) as u64, self.p)
    }

    pub fn from_u64(&self, v: u64) -> FpElement {
        FpElement::raw(v % self.p, self.p)
    }
}

impl Ring for PrimeField {
    type Elem = FpElement;

    fn zero(&self) -> FpElement {
        FpElement::raw(0, self.p)
    }
    fn one(&self) -> FpElement {
        FpElement::raw(1 % self.p, self.p)
    }
    fn add(&self, a: &FpElement, b: &FpElement) -> FpElement {
        *a + *b
    }
    fn sub(&self, a: &FpElement, b: &FpElement) -> FpElement {
        *a - *b
    }
    fn mul(&self, a: &FpElement, b: &FpElement) -> FpElement {
        *a * *b
    }
    fn neg(&self, a: &FpElement) -> FpElement {
        -*a
    }
    fn is_zero(&self, a: &FpElement) -> bool {
        a.value == 0
    }
}

impl Field for PrimeField {
    fn inv(&self, a: &FpElement) -> Option<FpElement> {
        a.inv()
    }
    fn from_i64(&self, v: i64) -> FpElement {
        self.elem(v)
    }
    fn from_bigint(&self, v: &BigInt) -> FpElement {
        let r = v.mod_floor(&BigInt::from(self.p));
        FpElement::raw(r.to_u64().expect("residue fits in u64"), self.p)
    }

    /// Accepts `"v mod p"` (with `p` matching this field) or a bare integer,
    /// which is reduced.
    fn parse(&self, s: &str) -> Result<FpElement, FieldError> {
        let (v, m) = match s.split_once(" mod ") {
            Some((v, m)) => (v, Some(m)),
            None => (s, None),
        };
        if let Some(m) = m {
            let q = parse_bigint(m, s)?;
            if q != BigInt::from(self.p) {
                return Err(FieldError::Parse {
                    input: s.to_string(),
                    reason: format!("modulus {q} does not match field F_{}", self.p),
                });
            }
        }
        Ok(self.from_bigint(&parse_bigint(v, s)?))
    }
    fn format(&self, a: &FpElement) -> String {
        a.to_string()
    }
    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }
    fn sample(&self, rng: &mut dyn RngCore) -> FpElement {
        FpElement::raw(rng.gen_range(0..self.p), self.p)
    }
    fn distinct_roots(&self, poly: &[FpElement]) -> Vec<FpElement> {
        if self.p <= EXHAUSTIVE_ROOT_LIMIT {
            roots::exhaustive_roots(self, poly)
        } else {
            roots::splitting_roots(self, poly)
        }
    }
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    'witness: for &a in &BASES {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
