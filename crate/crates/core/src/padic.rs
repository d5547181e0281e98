//! p-adic scalars with bounded denominators, known to a fixed number of
//! significant digits.
//!
//! A nonzero scalar is stored as `p^shift * mantissa` with `mantissa` a unit
//! modulo `p^digits`. `digits` starts at the context precision `M` and only
//! ever decreases (cancellation in a sum, or an operand that is itself known
//! to fewer digits). A value none of whose digits survive is an *inexact*
//! zero: it records the power of `p` it is known modulo. The exact zero is a
//! separate sentinel so that structural zeros stay structural.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};

const EXACT: i64 = i64::MAX;

/// The pair `(p, M)` shared by every scalar of one computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PAdicContext {
    prime: u64,
    precision: u32,
}

impl PAdicContext {
    pub fn new(prime: u64, precision: u32) -> Result<Self> {
        if prime < 3 || prime % 2 == 0 || !is_prime(prime) {
            return Err(Error::InvalidContext(format!("{prime} is not an odd prime")));
        }
        if precision == 0 {
            return Err(Error::InvalidContext("precision must be positive".into()));
        }
        match prime.checked_pow(precision) {
            Some(m) if m < (1u64 << 62) => {}
            _ => {
                return Err(Error::InvalidContext(format!(
                    "{prime}^{precision} does not fit in 62 bits"
                )))
            }
        }
        Ok(Self { prime, precision })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `p^M`.
    pub fn modulus(&self) -> u64 {
        self.prime.pow(self.precision)
    }

    pub fn zero(&self) -> PAdicScalar {
        PAdicScalar {
            prime: self.prime,
            cap: self.precision,
            shift: EXACT,
            mantissa: 0,
            digits: 0,
        }
    }

    pub fn one(&self) -> PAdicScalar {
        self.integer(1)
    }

    pub fn integer(&self, n: i64) -> PAdicScalar {
        self.big_integer(n as i128)
    }

    fn big_integer(&self, n: i128) -> PAdicScalar {
        if n == 0 {
            return self.zero();
        }
        let p = self.prime as i128;
        let mut v = 0i64;
        let mut m = n;
        while m % p == 0 {
            m /= p;
            v += 1;
        }
        let modulus = self.modulus() as i128;
        let mantissa = m.rem_euclid(modulus) as u64;
        PAdicScalar {
            prime: self.prime,
            cap: self.precision,
            shift: v,
            mantissa,
            digits: self.precision,
        }
    }

    /// `num / den` as a p-adic scalar.
    pub fn rational(&self, num: i64, den: i64) -> Result<PAdicScalar> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.integer(num);
        let d = self.integer(den);
        n.div(&d)
    }

    /// `p^k` as a scalar.
    pub fn prime_power(&self, k: i64) -> PAdicScalar {
        PAdicScalar {
            prime: self.prime,
            cap: self.precision,
            shift: k,
            mantissa: 1,
            digits: self.precision,
        }
    }

    /// An inexact zero known modulo `p^abs`.
    pub fn zero_mod(&self, abs: i64) -> PAdicScalar {
        PAdicScalar {
            prime: self.prime,
            cap: self.precision,
            shift: abs,
            mantissa: 0,
            digits: 0,
        }
    }

    /// Parses the text encoding `p^k * m (mod p^e)`, a plain integer, a
    /// rational `a/b`, `0`, or `0 (mod p^k)`.
    pub fn parse(&self, text: &str) -> Result<PAdicScalar> {
        let s = text.trim();
        if let Some((lhs, modpart)) = s.split_once("(mod") {
            let modpart = modpart
                .trim()
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("missing ')' in {s:?}")))?;
            let e = self.parse_prime_power(modpart)?;
            let lhs = lhs.trim();
            if lhs == "0" {
                return Ok(self.zero_mod(e));
            }
            let (pp, m) = lhs
                .split_once('*')
                .ok_or_else(|| Error::Parse(format!("expected 'p^k * m' in {s:?}")))?;
            let k = self.parse_prime_power(pp)?;
            let m: u64 = m
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad mantissa in {s:?}")))?;
            if e < 1 || e > self.precision as i64 {
                return Err(Error::Parse(format!(
                    "digit count {e} outside 1..={} in {s:?}",
                    self.precision
                )));
            }
            let digits = e as u32;
            if m % self.prime == 0 || m >= self.prime.pow(digits) {
                return Err(Error::Parse(format!("mantissa is not a reduced unit in {s:?}")));
            }
            return Ok(PAdicScalar {
                prime: self.prime,
                cap: self.precision,
                shift: k,
                mantissa: m,
                digits,
            });
        }
        if let Some((a, b)) = s.split_once('/') {
            let a: i64 = a
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
            let b: i64 = b
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
            return self.rational(a, b);
        }
        let n: i64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("unrecognised scalar {s:?}")))?;
        Ok(self.integer(n))
    }

    fn parse_prime_power(&self, s: &str) -> Result<i64> {
        let (base, exp) = s
            .trim()
            .split_once('^')
            .ok_or_else(|| Error::Parse(format!("expected p^k, got {s:?}")))?;
        let base: u64 = base
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad base in {s:?}")))?;
        if base != self.prime {
            return Err(Error::Parse(format!(
                "prime {base} does not match context prime {}",
                self.prime
            )));
        }
        exp.trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// p-adic valuation; `Infinite` for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PAdicScalar {
    prime: u64,
    cap: u32,
    shift: i64,
    mantissa: u64,
    digits: u32,
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(m as i128) as u64
}

impl PAdicScalar {
    pub fn context(&self) -> PAdicContext {
        PAdicContext {
            prime: self.prime,
            precision: self.cap,
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// Significant digits currently known (0 for any zero).
    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// The unit part, reduced modulo `p^digits`.
    pub fn mantissa(&self) -> u64 {
        self.mantissa
    }

    pub fn shift(&self) -> Option<i64> {
        (self.digits > 0).then_some(self.shift)
    }

    /// Indistinguishable from zero at the precision it is known to.
    pub fn is_zero(&self) -> bool {
        self.digits == 0
    }

    pub fn is_exact_zero(&self) -> bool {
        self.digits == 0 && self.shift == EXACT
    }

    pub fn valuation(&self) -> Valuation {
        if self.digits == 0 {
            Valuation::Infinite
        } else {
            Valuation::Finite(self.shift)
        }
    }

    /// The power of `p` this value is known modulo (`i64::MAX` when exact).
    pub fn abs_precision(&self) -> i64 {
        if self.digits == 0 {
            self.shift
        } else {
            self.shift + self.digits as i64
        }
    }

    /// A p-adic unit: nonzero with valuation 0.
    pub fn is_unit(&self) -> bool {
        self.digits > 0 && self.shift == 0
    }

    fn same_context(&self, other: &Self) -> bool {
        self.prime == other.prime && self.cap == other.cap
    }

    fn check_context(&self, other: &Self) -> Result<()> {
        if self.same_context(other) {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!(
                "(p={}, M={}) vs (p={}, M={})",
                self.prime, self.cap, other.prime, other.cap
            )))
        }
    }

    fn zero_mod(&self, abs: i64) -> Self {
        Self {
            prime: self.prime,
            cap: self.cap,
            shift: abs,
            mantissa: 0,
            digits: 0,
        }
    }

    /// Forget every digit at or beyond `p^abs`.
    pub fn truncate_abs(&self, abs: i64) -> Self {
        if abs >= self.abs_precision() {
            return *self;
        }
        if self.digits == 0 || abs <= self.shift {
            return self.zero_mod(abs);
        }
        let digits = (abs - self.shift) as u32;
        Self {
            mantissa: self.mantissa % self.prime.pow(digits),
            digits,
            ..*self
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        Ok(self.add_impl(other))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        Ok(self.mul_impl(other))
    }

    fn add_impl(&self, other: &Self) -> Self {
        debug_assert!(self.same_context(other));
        if self.digits == 0 {
            return other.truncate_abs(self.shift);
        }
        if other.digits == 0 {
            return self.truncate_abs(other.shift);
        }
        let (a, b) = if self.shift <= other.shift {
            (self, other)
        } else {
            (other, self)
        };
        let abs = a.abs_precision().min(b.abs_precision());
        let rel = (abs - a.shift) as u32;
        let p = self.prime;
        let modulus = p.pow(rel);
        let gap = b.shift - a.shift;
        let mut m = a.mantissa % modulus;
        if gap < rel as i64 {
            let term = mulmod(b.mantissa % modulus, p.pow(gap as u32), modulus);
            m = (m + term) % modulus;
        }
        if m == 0 {
            return self.zero_mod(abs);
        }
        let mut t = 0u32;
        while m % p == 0 {
            m /= p;
            t += 1;
        }
        Self {
            prime: p,
            cap: self.cap,
            shift: a.shift + t as i64,
            mantissa: m,
            digits: rel - t,
        }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        debug_assert!(self.same_context(other));
        if self.is_exact_zero() || other.is_exact_zero() {
            return self.context().zero();
        }
        match (self.digits == 0, other.digits == 0) {
            (true, true) => self.zero_mod(self.shift + other.shift),
            (true, false) => self.zero_mod(self.shift + other.shift),
            (false, true) => self.zero_mod(self.shift + other.shift),
            (false, false) => {
                let digits = self.digits.min(other.digits);
                let modulus = self.prime.pow(digits);
                Self {
                    prime: self.prime,
                    cap: self.cap,
                    shift: self.shift + other.shift,
                    mantissa: mulmod(self.mantissa % modulus, other.mantissa % modulus, modulus),
                    digits,
                }
            }
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.digits == 0 {
            return Err(Error::DivisionByZero);
        }
        let modulus = self.prime.pow(self.digits);
        Ok(Self {
            shift: -self.shift,
            mantissa: inv_mod(self.mantissa, modulus),
            ..*self
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        Ok(self.mul_impl(&other.inv()?))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = self.context().one();
        for _ in 0..n {
            acc = acc.mul_impl(self);
        }
        acc
    }

    /// Whether `self - other` vanishes modulo `p^floor`.
    pub fn agrees(&self, other: &Self, floor: i64) -> bool {
        let d = self.add_impl(&other.neg_impl());
        match d.valuation() {
            Valuation::Infinite => true,
            Valuation::Finite(v) => v >= floor,
        }
    }

    fn neg_impl(&self) -> Self {
        if self.digits == 0 {
            return *self;
        }
        let modulus = self.prime.pow(self.digits);
        Self {
            mantissa: (modulus - self.mantissa % modulus) % modulus,
            ..*self
        }
    }

    /// The signed integer `p^shift * m` with `m` taken in the symmetric range,
    /// when the shift is non-negative and the result fits.
    pub fn to_centered_integer(&self) -> Option<i128> {
        if self.digits == 0 {
            return Some(0);
        }
        if self.shift < 0 {
            return None;
        }
        let modulus = self.prime.pow(self.digits) as i128;
        let mut m = self.mantissa as i128;
        if m > modulus / 2 {
            m -= modulus;
        }
        (self.prime as i128)
            .checked_pow(self.shift as u32)
            .and_then(|pp| pp.checked_mul(m))
    }
}

impl Add for PAdicScalar {
    type Output = PAdicScalar;
    fn add(self, rhs: Self) -> Self {
        assert!(self.same_context(&rhs), "p-adic context mismatch");
        self.add_impl(&rhs)
    }
}

impl<'a> Add<&'a PAdicScalar> for &'a PAdicScalar {
    type Output = PAdicScalar;
    fn add(self, rhs: &PAdicScalar) -> PAdicScalar {
        assert!(self.same_context(rhs), "p-adic context mismatch");
        self.add_impl(rhs)
    }
}

impl AddAssign<&PAdicScalar> for PAdicScalar {
    fn add_assign(&mut self, rhs: &PAdicScalar) {
        *self = self.add_impl(rhs);
    }
}

impl Sub for PAdicScalar {
    type Output = PAdicScalar;
    fn sub(self, rhs: Self) -> Self {
        assert!(self.same_context(&rhs), "p-adic context mismatch");
        self.add_impl(&rhs.neg_impl())
    }
}

impl<'a> Sub<&'a PAdicScalar> for &'a PAdicScalar {
    type Output = PAdicScalar;
    fn sub(self, rhs: &PAdicScalar) -> PAdicScalar {
        assert!(self.same_context(rhs), "p-adic context mismatch");
        self.add_impl(&rhs.neg_impl())
    }
}

impl Mul for PAdicScalar {
    type Output = PAdicScalar;
    fn mul(self, rhs: Self) -> Self {
        assert!(self.same_context(&rhs), "p-adic context mismatch");
        self.mul_impl(&rhs)
    }
}

impl<'a> Mul<&'a PAdicScalar> for &'a PAdicScalar {
    type Output = PAdicScalar;
    fn mul(self, rhs: &PAdicScalar) -> PAdicScalar {
        assert!(self.same_context(rhs), "p-adic context mismatch");
        self.mul_impl(rhs)
    }
}

impl Neg for PAdicScalar {
    type Output = PAdicScalar;
    fn neg(self) -> Self {
        self.neg_impl()
    }
}

impl Neg for &PAdicScalar {
    type Output = PAdicScalar;
    fn neg(self) -> PAdicScalar {
        self.neg_impl()
    }
}

impl fmt::Display for PAdicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.prime;
        if self.is_exact_zero() {
            write!(f, "0")
        } else if self.digits == 0 {
            write!(f, "0 (mod {p}^{})", self.shift)
        } else {
            write!(f, "{p}^{} * {} (mod {p}^{})", self.shift, self.mantissa, self.digits)
        }
    }
}
