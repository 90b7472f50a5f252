//! Exact scalars over the rationals and over prime fields.
//!
//! A [`FieldSpec`] describes the ambient field; a [`Scalar`] is an element
//! in canonical form. Rationals keep a machine-word fast path and spill
//! into arbitrary precision only when a value no longer fits, so two equal
//! rationals always have the same representation regardless of how they
//! were produced.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot combine elements of {left} and {right}")]
    FieldMismatch { left: String, right: String },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("F{0} has no square root of -1 (p = 3 mod 4 or p = 2 handled separately)")]
    NoSqrtMinusOne(u64),
    #[error("{value} is not a square root of -1 in {field}")]
    InvalidSqrtMinusOne { value: String, field: String },
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("scalar {value} does not belong to {field}")]
    NotInField { value: String, field: String },
}

pub type FieldResult<T> = Result<T, FieldError>;

/// Which field the scalars live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rationals,
    Prime(u64),
}

/// An exact field together with an optional chosen square root of -1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    kind: FieldKind,
    sqrt_minus_one: Option<Scalar>,
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec {
            kind: FieldKind::Rationals,
            sqrt_minus_one: None,
        }
    }

    pub fn prime(p: u64) -> FieldResult<Self> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec {
            kind: FieldKind::Prime(p),
            sqrt_minus_one: None,
        })
    }

    /// Prime field with a square root of -1 found by scanning 1..p-1.
    pub fn prime_with_sqrt_minus_one(p: u64) -> FieldResult<Self> {
        let field = Self::prime(p)?;
        if p != 2 && p % 4 == 3 {
            return Err(FieldError::NoSqrtMinusOne(p));
        }
        let minus_one = p - 1;
        let root = (1..p)
            .find(|&x| mul_mod(x, x, p) == minus_one)
            .ok_or(FieldError::NoSqrtMinusOne(p))?;
        Ok(FieldSpec {
            sqrt_minus_one: Some(Scalar::Residue {
                value: root,
                modulus: p,
            }),
            ..field
        })
    }

    /// Attach an explicitly chosen square root of -1.
    pub fn with_sqrt_minus_one(self, root: Scalar) -> FieldResult<Self> {
        self.check(&root)?;
        let square = root.mul(&root);
        if square != self.one().neg() {
            return Err(FieldError::InvalidSqrtMinusOne {
                value: root.to_string(),
                field: self.name(),
            });
        }
        Ok(FieldSpec {
            sqrt_minus_one: Some(root),
            ..self
        })
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn sqrt_minus_one(&self) -> Option<&Scalar> {
        self.sqrt_minus_one.as_ref()
    }

    /// 0 for the rationals.
    pub fn characteristic(&self) -> u64 {
        match self.kind {
            FieldKind::Rationals => 0,
            FieldKind::Prime(p) => p,
        }
    }

    pub fn name(&self) -> String {
        match self.kind {
            FieldKind::Rationals => "Q".to_string(),
            FieldKind::Prime(p) => format!("F{p}"),
        }
    }

    /// True when both specs describe the same field (the chosen root of -1 is ignored).
    pub fn same_field(&self, other: &FieldSpec) -> bool {
        self.kind == other.kind
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self.kind {
            FieldKind::Rationals => Scalar::Rational(Rational::from_integer(n)),
            FieldKind::Prime(p) => Scalar::Residue {
                value: reduce_i128(n as i128, p),
                modulus: p,
            },
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> FieldResult<Scalar> {
        self.from_i64(num).div(&self.from_i64(den))
    }

    /// Map a big rational into the field (denominator must be invertible).
    pub fn from_big_rational(&self, q: &BigRational) -> FieldResult<Scalar> {
        match self.kind {
            FieldKind::Rationals => Ok(Scalar::Rational(Rational::from_big(q.clone()))),
            FieldKind::Prime(p) => {
                let m = BigInt::from(p);
                let num = mod_big(q.numer(), &m);
                let den = mod_big(q.denom(), &m);
                let n = Scalar::Residue { value: num, modulus: p };
                let d = Scalar::Residue { value: den, modulus: p };
                n.div(&d)
            }
        }
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        matches!((self.kind, s), (FieldKind::Rationals, Scalar::Rational(_)))
            || matches!((self.kind, s), (FieldKind::Prime(p), Scalar::Residue { modulus, .. }) if p == *modulus)
    }

    pub fn check(&self, s: &Scalar) -> FieldResult<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(FieldError::NotInField {
                value: s.to_string(),
                field: self.name(),
            })
        }
    }

    /// Parse "-3", "5/6" or a residue "4". Over a prime field fractions are
    /// interpreted as a product with an inverse.
    pub fn parse_scalar(&self, text: &str) -> FieldResult<Scalar> {
        let q = parse_big_rational(text)?;
        self.from_big_rational(&q)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn parse_big_rational(text: &str) -> FieldResult<BigRational> {
    let cleaned: String = text
        .trim()
        .chars()
        .map(|c| if c == '\u{2212}' { '-' } else { c })
        .filter(|c| !c.is_whitespace())
        .collect();
    let err = || FieldError::Parse(text.to_string());
    if cleaned.is_empty() {
        return Err(err());
    }
    let (num, den) = match cleaned.split_once('/') {
        Some((n, d)) => (n, d),
        None => (cleaned.as_str(), "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| err())?;
    let den = BigInt::from_str(den).map_err(|_| err())?;
    if den.is_zero() {
        return Err(FieldError::DivisionByZero);
    }
    Ok(BigRational::new(num, den))
}

fn mod_big(n: &BigInt, m: &BigInt) -> u64 {
    let r = ((n % m) + m) % m;
    r.to_u64().expect("residue fits in u64")
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn reduce_i128(n: i128, p: u64) -> u64 {
    n.rem_euclid(p as i128) as u64
}

/// Inverse modulo p via the extended Euclidean algorithm.
fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(reduce_i128(old_s, p))
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

/// Exact rational number in lowest terms with a positive denominator.
///
/// Values whose numerator and denominator fit in an `i64` are always stored
/// in the `Small` variant; `Big` is used only otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rational {
    Small { num: i64, den: i64 },
    Big(Box<BigRational>),
}

impl Rational {
    pub fn from_integer(n: i64) -> Self {
        if n == i64::MIN {
            return Rational::Big(Box::new(BigRational::from_integer(BigInt::from(n))));
        }
        Rational::Small { num: n, den: 1 }
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd_u128(num.unsigned_abs(), den as u128) as i128;
        if g > 1 {
            num /= g;
            den /= g;
        }
        let fits = |v: i128| v > i64::MIN as i128 && v <= i64::MAX as i128;
        if fits(num) && fits(den) {
            Rational::Small {
                num: num as i64,
                den: den as i64,
            }
        } else {
            Rational::Big(Box::new(BigRational::new(BigInt::from(num), BigInt::from(den))))
        }
    }

    fn from_big(q: BigRational) -> Self {
        // BigRational::new already reduces; only the size class is decided here.
        match (q.numer().to_i64(), q.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => Rational::Small { num: n, den: d },
            _ => Rational::Big(Box::new(q)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rational::Small { num, den } => BigRational::new_raw(BigInt::from(*num), BigInt::from(*den)),
            Rational::Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rational::Small { num: 0, .. })
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rational::Small { den, .. } => *den == 1,
            Rational::Big(b) => b.is_integer(),
        }
    }

    fn add(&self, other: &Rational) -> Rational {
        match (self, other) {
            (Rational::Small { num: a, den: b }, Rational::Small { num: c, den: d }) => {
                if *b == 1 && *d == 1 {
                    return Rational::from_i128(*a as i128 + *c as i128, 1);
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Rational::from_i128(a * d + c * b, b * d)
            }
            _ => Rational::from_big(self.to_big() + other.to_big()),
        }
    }

    fn mul(&self, other: &Rational) -> Rational {
        match (self, other) {
            (Rational::Small { num: a, den: b }, Rational::Small { num: c, den: d }) => {
                if *b == 1 && *d == 1 {
                    return Rational::from_i128(*a as i128 * *c as i128, 1);
                }
                Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Rational::from_big(self.to_big() * other.to_big()),
        }
    }

    fn neg(&self) -> Rational {
        match self {
            Rational::Small { num, den } => Rational::Small { num: -num, den: *den },
            Rational::Big(b) => Rational::from_big(-(**b).clone()),
        }
    }

    fn inv(&self) -> Option<Rational> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Rational::Small { num, den } => Rational::from_i128(*den as i128, *num as i128),
            Rational::Big(b) => Rational::from_big(b.recip()),
        })
    }

    fn signum(&self) -> Ordering {
        match self {
            Rational::Small { num, .. } => num.cmp(&0),
            Rational::Big(b) => {
                if b.is_positive() {
                    Ordering::Greater
                } else if b.is_negative() {
                    Ordering::Less
                } else {
                    Ordering::Equal
                }
            }
        }
    }
}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Rational::Small { num, den } => {
                0u8.hash(state);
                num.hash(state);
                den.hash(state);
            }
            Rational::Big(b) => {
                1u8.hash(state);
                b.numer().hash(state);
                b.denom().hash(state);
            }
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small { num, den: 1 } => write!(f, "{num}"),
            Rational::Small { num, den } => write!(f, "{num}/{den}"),
            Rational::Big(b) => {
                if b.is_integer() {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
        }
    }
}

/// A field element in canonical form.
///
/// The arithmetic operators panic when the operands come from different
/// fields; use the `try_*` methods where the operands are not already known
/// to share a field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Rational),
    Residue { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(
            self,
            Scalar::Rational(Rational::Small { num: 1, den: 1 }) | Scalar::Residue { value: 1, .. }
        )
    }

    pub fn field_name(&self) -> String {
        match self {
            Scalar::Rational(_) => "Q".to_string(),
            Scalar::Residue { modulus, .. } => format!("F{modulus}"),
        }
    }

    fn mismatch(&self, other: &Scalar) -> FieldError {
        FieldError::FieldMismatch {
            left: self.field_name(),
            right: other.field_name(),
        }
    }

    pub fn try_add(&self, other: &Scalar) -> FieldResult<Scalar> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a.add(b))),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q }) if p == q => {
                let s = a + b;
                Ok(Scalar::Residue {
                    value: if s >= *p { s - p } else { s },
                    modulus: *p,
                })
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn try_sub(&self, other: &Scalar) -> FieldResult<Scalar> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Scalar) -> FieldResult<Scalar> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a.mul(b))),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q }) if p == q => {
                Ok(Scalar::Residue {
                    value: mul_mod(*a, *b, *p),
                    modulus: *p,
                })
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn try_div(&self, other: &Scalar) -> FieldResult<Scalar> {
        let inv = other.inv()?;
        self.try_mul(&inv)
    }

    pub fn try_eq(&self, other: &Scalar) -> FieldResult<bool> {
        match (self, other) {
            (Scalar::Rational(_), Scalar::Rational(_)) => Ok(self == other),
            (Scalar::Residue { modulus: p, .. }, Scalar::Residue { modulus: q, .. }) if p == q => Ok(self == other),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(r.neg()),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    pub fn inv(&self) -> FieldResult<Scalar> {
        match self {
            Scalar::Rational(r) => r.inv().map(Scalar::Rational).ok_or(FieldError::DivisionByZero),
            Scalar::Residue { value, modulus } => {
                if *value == 0 {
                    return Err(FieldError::DivisionByZero);
                }
                let v = inv_mod(*value, *modulus).expect("modulus is prime");
                Ok(Scalar::Residue {
                    value: v,
                    modulus: *modulus,
                })
            }
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.try_add(other).expect("scalars from different fields")
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.try_sub(other).expect("scalars from different fields")
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.try_mul(other).expect("scalars from different fields")
    }

    pub fn div(&self, other: &Scalar) -> FieldResult<Scalar> {
        self.try_div(other)
    }

    /// `self += a * b`, the inner-loop workhorse of elimination.
    pub fn add_mul_assign(&mut self, a: &Scalar, b: &Scalar) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *self = self.add(&a.mul(b));
    }

    /// Sign of a rational; `None` for residues.
    pub fn rational_sign(&self) -> Option<Ordering> {
        match self {
            Scalar::Rational(r) => Some(r.signum()),
            Scalar::Residue { .. } => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Binary and unary operations addressable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
    Eq,
}

/// Outcome of [`field_arithmetic`]: a scalar or, for `Eq`, a truth value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpValue {
    Scalar(Scalar),
    Bool(bool),
}

/// Apply `op` to `a` (and `b` for binary operations).
pub fn field_arithmetic(a: &Scalar, b: Option<&Scalar>, op: FieldOp) -> FieldResult<OpValue> {
    let need_b = || b.ok_or_else(|| FieldError::Parse("missing second operand".to_string()));
    Ok(match op {
        FieldOp::Add => OpValue::Scalar(a.try_add(need_b()?)?),
        FieldOp::Sub => OpValue::Scalar(a.try_sub(need_b()?)?),
        FieldOp::Mul => OpValue::Scalar(a.try_mul(need_b()?)?),
        FieldOp::Div => OpValue::Scalar(a.try_div(need_b()?)?),
        FieldOp::Neg => OpValue::Scalar(a.neg()),
        FieldOp::Inv => OpValue::Scalar(a.inv()?),
        FieldOp::Eq => OpValue::Bool(a.try_eq(need_b()?)?),
    })
}
