//! Exact field arithmetic over `F_p` and `Q`, together with the base-`p`
//! digit combinatorics used throughout: digit expansions, digit factorials
//! and Lucas-style binomial and multinomial coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Primes must fit below this bound so that products of residues fit in a `u64`.
pub const PRIME_BOUND: u64 = 1 << 31;

/// A prime number below [`PRIME_BOUND`], checked at construction.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p < PRIME_BOUND && is_prime(p) {
            Ok(Prime(p as u32))
        } else {
            Err(Error::InvalidField(format!("{p} is not a prime below 2^31")))
        }
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn as_u64(self) -> u64 {
        self.0 as u64
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

// Trial division; the library only targets word-sized primes.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Prime(Prime),
    Rational,
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "F_{p}"),
            FieldSpec::Rational => f.write_str("Q"),
        }
    }
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        Prime::new(p).map(FieldSpec::Prime)
    }

    /// The characteristic, `0` for the rationals.
    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Prime(p) => p.get(),
            FieldSpec::Rational => 0,
        }
    }

    pub fn as_prime(&self) -> Option<Prime> {
        match self {
            FieldSpec::Prime(p) => Some(*p),
            FieldSpec::Rational => None,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Prime(p) => {
                let v = n.rem_euclid(p.get() as i64) as u32;
                Scalar::Mod { value: v, p: *p }
            }
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
        }
    }

    pub fn from_u64(&self, n: u64) -> Scalar {
        match self {
            FieldSpec::Prime(p) => Scalar::Mod { value: (n % p.as_u64()) as u32, p: *p },
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            FieldSpec::Prime(p) => {
                let v = n.mod_floor(&BigInt::from(p.get())).to_u32().expect("residue fits");
                Scalar::Mod { value: v, p: *p }
            }
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(n.clone())),
        }
    }

    /// The element `num / den` of this field.
    pub fn ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        self.from_i64(num).div(&self.from_i64(den))
    }

    /// Parse a canonical value string: a decimal residue in `[0, p)` for prime
    /// fields; `a/b` in lowest terms with `b > 1`, or an integer, for `Q`.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let bad = || Error::Parse(format!("'{s}' is not a canonical element of {self}"));
        match self {
            FieldSpec::Prime(p) => {
                if !is_canonical_natural(s) {
                    return Err(bad());
                }
                let v: u64 = s.parse().map_err(|_| bad())?;
                if v >= p.as_u64() {
                    return Err(bad());
                }
                Ok(Scalar::Mod { value: v as u32, p: *p })
            }
            FieldSpec::Rational => {
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n, Some(d)),
                    None => (s, None),
                };
                let digits = num.strip_prefix('-').unwrap_or(num);
                if !is_canonical_natural(digits) || num == "-0" {
                    return Err(bad());
                }
                let num: BigInt = num.parse().map_err(|_| bad())?;
                match den {
                    None => Ok(Scalar::Rational(BigRational::from_integer(num))),
                    Some(d) => {
                        if !is_canonical_natural(d) {
                            return Err(bad());
                        }
                        let den: BigInt = d.parse().map_err(|_| bad())?;
                        if den <= BigInt::one() || !num.gcd(&den).is_one() {
                            return Err(bad());
                        }
                        Ok(Scalar::Rational(BigRational::new_raw(num, den)))
                    }
                }
            }
        }
    }

    /// `n!` as an element of the field (zero in characteristic `p` once `n >= p`).
    pub fn factorial(&self, n: u64) -> Scalar {
        match self {
            FieldSpec::Prime(p) => {
                if n >= p.as_u64() {
                    return self.zero();
                }
                let p = p.as_u64();
                let v = (2..=n).fold(1u64, |acc, k| acc * k % p);
                self.from_u64(v)
            }
            FieldSpec::Rational => {
                let v = (2..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k));
                self.from_bigint(&v)
            }
        }
    }

    /// `C(n, k)` in this field; zero when `k > n`.
    pub fn binomial(&self, n: u64, k: u64) -> Scalar {
        match self {
            FieldSpec::Prime(p) => lucas_binomial(n, k, *p),
            FieldSpec::Rational => self.from_bigint(&exact_binomial(n, k)),
        }
    }

    /// The multinomial coefficient `(Σ parts)! / Π parts[i]!` in this field.
    pub fn multinomial(&self, parts: &[u64]) -> Scalar {
        let n: u64 = parts.iter().sum();
        match self {
            FieldSpec::Prime(p) => lucas_multinomial(n, parts, *p).expect("parts sum to n"),
            FieldSpec::Rational => {
                let mut rest = n;
                let mut acc = BigInt::one();
                for &part in parts {
                    acc *= exact_binomial(rest, part);
                    rest -= part;
                }
                self.from_bigint(&acc)
            }
        }
    }
}

fn is_canonical_natural(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) && (s == "0" || !s.starts_with('0'))
}

/// Exact `C(n, k)` over the integers, zero when `k > n`.
pub fn exact_binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// An element of `F_p` (canonical residue) or `Q` (reduced fraction).
///
/// Canonical forms are unique, so derived equality is field equality.
/// Arithmetic between scalars of different fields is a programming error and
/// panics; every container in this crate checks fields at its boundary.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Mod { value: u32, p: Prime },
    Rational(BigRational),
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Mod { p, .. } => FieldSpec::Prime(*p),
            Scalar::Rational(_) => FieldSpec::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 0,
            Scalar::Rational(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 1,
            Scalar::Rational(q) => q.is_one(),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Mod { p, .. } => self.pow(p.as_u64() - 2),
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
        })
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Scalar> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod { value, .. } => value.fmt(f),
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    q.numer().fmt(f)
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar field mismatch: {} vs {}", a.field(), b.field())
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: q }) if p == q => {
                let s = (*a as u64 + *b as u64) % p.as_u64();
                Scalar::Mod { value: s as u32, p: *p }
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: q }) if p == q => {
                let m = p.as_u64();
                let s = (*a as u64 + m - *b as u64) % m;
                Scalar::Mod { value: s as u32, p: *p }
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: q }) if p == q => {
                let s = (*a as u64 * *b as u64) % p.as_u64();
                Scalar::Mod { value: s as u32, p: *p }
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Mod { value, p } => {
                let v = (p.as_u64() - *value as u64) % p.as_u64();
                Scalar::Mod { value: v as u32, p: *p }
            }
            Scalar::Rational(q) => Scalar::Rational(-q),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Scalar {
    /// Signed integer view of a rational with denominator one, used by tests
    /// and diagnostics.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Mod { value, .. } => Some(*value as i64),
            Scalar::Rational(q) if q.denom().is_one() => q.numer().to_i64(),
            Scalar::Rational(_) => None,
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_negative())
    }
}

/// Base-`p` digits of a nonnegative integer, least significant first, with no
/// trailing zero digit (so zero has no digits).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitVector {
    p: Prime,
    digits: Vec<u32>,
}

impl DigitVector {
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// Digit at position `i`, zero past the end.
    pub fn digit(&self, i: usize) -> u32 {
        self.digits.get(i).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn reconstruct(&self) -> u64 {
        self.digits
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * self.p.as_u64() + d as u64)
    }
}

pub fn p_digits(mut n: u64, p: Prime) -> DigitVector {
    let base = p.as_u64();
    let mut digits = Vec::new();
    while n > 0 {
        digits.push((n % base) as u32);
        n /= base;
    }
    DigitVector { p, digits }
}

/// `Γ(n)`: the product of the factorials of the base-`p` digits of `n`, in `F_p`.
/// Every digit is below `p`, so the result is a unit.
pub fn gamma(n: u64, p: Prime) -> Scalar {
    let field = FieldSpec::Prime(p);
    p_digits(n, p)
        .digits
        .iter()
        .fold(field.one(), |acc, &d| &acc * &field.factorial(d as u64))
}

// C(a, b) mod p for a, b < p.
fn small_binomial(a: u64, b: u64, p: Prime) -> u64 {
    if b > a {
        return 0;
    }
    let m = p.as_u64();
    let b = b.min(a - b);
    let field = FieldSpec::Prime(p);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..b {
        num = num * (a - i) % m;
        den = den * (i + 1) % m;
    }
    let inv = field.from_u64(den).inv().expect("digits are below p");
    num * inv.to_i64().unwrap() as u64 % m
}

/// `C(n, r) mod p` by Lucas' theorem, digit by digit. Returns zero for `r > n`.
pub fn lucas_binomial(mut n: u64, mut r: u64, p: Prime) -> Scalar {
    let field = FieldSpec::Prime(p);
    if r > n {
        return field.zero();
    }
    let m = p.as_u64();
    let mut acc = 1u64;
    while r > 0 {
        let (nd, rd) = (n % m, r % m);
        if rd > nd {
            return field.zero();
        }
        acc = acc * small_binomial(nd, rd, p) % m;
        n /= m;
        r /= m;
    }
    field.from_u64(acc)
}

/// Multinomial coefficient `n! / Π parts[i]!` mod `p`, computed digit-wise.
/// Zero exactly when some digit column of the parts sums to `p` or more.
pub fn lucas_multinomial(n: u64, parts: &[u64], p: Prime) -> Result<Scalar> {
    let total: u64 = parts.iter().sum();
    if total != n {
        return Err(Error::Contract(format!(
            "multinomial parts sum to {total}, expected {n}"
        )));
    }
    let field = FieldSpec::Prime(p);
    let m = p.as_u64();
    let mut rest: Vec<u64> = parts.to_vec();
    let mut acc = 1u64;
    while rest.iter().any(|&x| x > 0) {
        let column: Vec<u64> = rest.iter().map(|x| x % m).collect();
        let mut remaining: u64 = column.iter().sum();
        if remaining >= m {
            return Ok(field.zero());
        }
        for &d in &column {
            acc = acc * small_binomial(remaining, d, p) % m;
            remaining -= d;
        }
        for x in rest.iter_mut() {
            *x /= m;
        }
    }
    Ok(field.from_u64(acc))
}
