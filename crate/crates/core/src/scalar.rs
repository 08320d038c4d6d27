//! Exact scalars: arbitrary-precision rationals and residues modulo a small odd prime.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Errors raised by scalar arithmetic and parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("{0} is not an odd prime below 65536")]
    InvalidPrime(u64),
    #[error("cannot parse scalar {text:?} over {field}: {reason}")]
    Parse {
        text: String,
        field: FieldSpec,
        reason: String,
    },
}

/// An odd prime `p < 2^16`. The only way to obtain one is through validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u16);

impl Prime {
    pub fn new(p: u64) -> Result<Self, ScalarError> {
        if !(3..65536).contains(&p) || !is_prime(p) {
            return Err(ScalarError::InvalidPrime(p));
        }
        Ok(Prime(p as u16))
    }

    pub fn get(self) -> u16 {
        self.0
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// The base field: the rationals or a prime field of odd characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    Prime(Prime),
}

impl FieldSpec {
    /// Prime field `F_p`; fails unless `p` is an odd prime below 2^16.
    pub fn prime(p: u64) -> Result<Self, ScalarError> {
        Prime::new(p).map(FieldSpec::Prime)
    }

    pub fn characteristic(self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => p.get() as u64,
        }
    }

    /// All field elements in increasing residue order, or `None` for the rationals.
    pub fn elements(self) -> Option<Vec<Scalar>> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime(p) => Some(
                (0..p.get())
                    .map(|v| Scalar::Residue { value: v, p })
                    .collect(),
            ),
        }
    }

    /// Nonzero field elements, or `None` for the rationals.
    pub fn units(self) -> Option<Vec<Scalar>> {
        self.elements()
            .map(|all| all.into_iter().filter(|s| !s.is_zero()).collect())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F{}", p.get()),
        }
    }
}

/// An exact field element. Rationals are kept in lowest terms with a positive
/// denominator; residues are kept in `[0, p)`. Equality is therefore structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u16, p: Prime },
}

/// The four field operations, for callers that want a single checked entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Scalar {
    pub fn zero(field: FieldSpec) -> Self {
        Self::from_int(field, 0)
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: FieldSpec, n: i64) -> Self {
        match field {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(n.into())),
            FieldSpec::Prime(p) => Scalar::Residue {
                value: n.rem_euclid(p.get() as i64) as u16,
                p,
            },
        }
    }

    /// `n / d` in the given field.
    pub fn from_frac(field: FieldSpec, n: i64, d: i64) -> Result<Self, ScalarError> {
        Self::from_int(field, n).checked_div(&Self::from_int(field, d))
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Residue { p, .. } => FieldSpec::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    /// The residue representative in `[0, p)`, if this is a prime-field element.
    pub fn residue(&self) -> Option<u16> {
        match self {
            Scalar::Residue { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    fn same_field(&self, other: &Self) -> Result<(), ScalarError> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(ScalarError::FieldMismatch(self.field(), other.field()))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ScalarError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, p }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: ((*a as u32 + *b as u32) % p.get() as u32) as u16,
                    p: *p,
                }
            }
            _ => unreachable!("fields already compared"),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, p }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: ((*a as u32 * *b as u32) % p.get() as u32) as u16,
                    p: *p,
                }
            }
            _ => unreachable!("fields already compared"),
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ScalarError> {
        self.same_field(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn arith(&self, other: &Self, op: ArithOp) -> Result<Self, ScalarError> {
        match op {
            ArithOp::Add => self.checked_add(other),
            ArithOp::Sub => self.checked_sub(other),
            ArithOp::Mul => self.checked_mul(other),
            ArithOp::Div => self.checked_div(other),
        }
    }

    fn neg_ref(&self) -> Self {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Residue { value, p } => Scalar::Residue {
                value: (p.get() - value) % p.get(),
                p: *p,
            },
        }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Residue { value, p } => {
                // Fermat: a^(p-2) is the inverse of a.
                let m = p.get() as u64;
                let (mut base, mut exp, mut acc) = (*value as u64, m - 2, 1u64);
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % m;
                    }
                    base = base * base % m;
                    exp >>= 1;
                }
                Scalar::Residue {
                    value: acc as u16,
                    p: *p,
                }
            }
        })
    }

    /// Integer power (negative exponents invert first).
    pub fn pow(&self, e: i32) -> Result<Self, ScalarError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Scalar::one(self.field());
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// A square root, if one exists in the field.
    ///
    /// In `F_p` the smaller residue of the two roots is returned, so scripts that
    /// take square roots replay identically. Over the rationals only perfect
    /// squares have roots, and the nonnegative one is returned.
    pub fn sqrt(&self) -> Option<Self> {
        match self {
            Scalar::Residue { value, p } => {
                let m = p.get() as u32;
                (0..=(m - 1) / 2)
                    .find(|r| r * r % m == *value as u32)
                    .map(|r| Scalar::Residue {
                        value: r as u16,
                        p: *p,
                    })
            }
            Scalar::Rational(r) => {
                if r.is_negative() {
                    return None;
                }
                let n = exact_isqrt(r.numer())?;
                let d = exact_isqrt(r.denom())?;
                Some(Scalar::Rational(BigRational::new(n, d)))
            }
        }
    }

    /// Parse the text encoding: `n` or `n/d` over the rationals, a decimal residue
    /// in `[0, p)` over a prime field.
    pub fn parse(field: FieldSpec, text: &str) -> Result<Self, ScalarError> {
        let fail = |reason: &str| ScalarError::Parse {
            text: text.to_string(),
            field,
            reason: reason.to_string(),
        };
        let t = text.trim();
        match field {
            FieldSpec::Rationals => {
                let (n, d) = match t.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (t, "1"),
                };
                let n = BigInt::from_str(n).map_err(|_| fail("bad numerator"))?;
                let d = BigInt::from_str(d).map_err(|_| fail("bad denominator"))?;
                if d.is_zero() {
                    return Err(fail("zero denominator"));
                }
                Ok(Scalar::Rational(BigRational::new(n, d)))
            }
            FieldSpec::Prime(p) => {
                let v: u32 = t.parse().map_err(|_| fail("expected a decimal residue"))?;
                if v >= p.get() as u32 {
                    return Err(fail("residue out of range"));
                }
                Ok(Scalar::Residue {
                    value: v as u16,
                    p,
                })
            }
        }
    }

    /// Parse a rational-looking text (`n`, `-n`, `n/d`) and map it into any field.
    /// Useful for CLI parameters that should work uniformly over Q and F_p.
    pub fn parse_lenient(field: FieldSpec, text: &str) -> Result<Self, ScalarError> {
        let q = Scalar::parse(FieldSpec::Rationals, text).map_err(|_| ScalarError::Parse {
            text: text.to_string(),
            field,
            reason: "expected n or n/d".to_string(),
        })?;
        q.reduce_into(field)
    }

    /// Map a rational into a field (reducing modulo p when needed).
    pub fn reduce_into(&self, field: FieldSpec) -> Result<Self, ScalarError> {
        match (self, field) {
            (Scalar::Rational(r), FieldSpec::Prime(p)) => {
                let m = BigInt::from(p.get());
                let n = residue_of(r.numer(), &m);
                let d = residue_of(r.denom(), &m);
                Scalar::from_int(field, n).checked_div(&Scalar::from_int(field, d))
            }
            _ if self.field() == field => Ok(self.clone()),
            _ => Err(ScalarError::FieldMismatch(self.field(), field)),
        }
    }
}

fn residue_of(n: &BigInt, m: &BigInt) -> i64 {
    let r = ((n % m) + m) % m;
    i64::try_from(r).expect("residue fits in i64")
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Scalar::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

// Operator sugar for internal code paths where both operands are known to share a
// field. These panic on a mismatch; use the `checked_*` methods at API boundaries.

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.checked_add(rhs).expect("scalar field mismatch")
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.checked_sub(rhs).expect("scalar field mismatch")
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.checked_mul(rhs).expect("scalar field mismatch")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_frac(FieldSpec::Rationals, n, d).unwrap()
    }

    fn f7(n: i64) -> Scalar {
        Scalar::from_int(FieldSpec::prime(7).unwrap(), n)
    }

    #[test]
    fn rational_sum() {
        assert_eq!(&q(1, 2) + &q(1, 3), q(5, 6));
        assert_eq!((&q(1, 2) + &q(1, 3)).to_string(), "5/6");
    }

    #[test]
    fn residue_product_and_inverse() {
        assert_eq!(&f7(2) * &f7(5), f7(3));
        assert_eq!(f7(1).checked_div(&f7(3)).unwrap(), f7(5));
    }

    #[test]
    fn inverse_matches_exhaustive_search() {
        for p in [3u64, 5, 7, 11, 13] {
            let f = FieldSpec::prime(p).unwrap();
            for a in f.units().unwrap() {
                let brute = f.units().unwrap().into_iter().find(|b| (&a * b).is_one());
                assert_eq!(Some(a.inv().unwrap()), brute);
            }
        }
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(f7(0).sqrt(), Some(f7(0)));
        assert_eq!(f7(2).sqrt(), Some(f7(3)));
        assert_eq!(f7(3).sqrt(), None);
        assert_eq!(q(9, 4).sqrt(), Some(q(3, 2)));
        assert_eq!(q(2, 1).sqrt(), None);
        assert_eq!(q(-4, 1).sqrt(), None);
    }

    #[test]
    fn squares_hit_half_the_field() {
        for p in (3u64..=101).filter(|&p| is_prime(p)) {
            let f = FieldSpec::prime(p).unwrap();
            let mut squares: Vec<u16> = f
                .elements()
                .unwrap()
                .iter()
                .map(|x| (x * x).residue().unwrap())
                .collect();
            squares.sort_unstable();
            squares.dedup();
            assert_eq!(squares.len() as u64, p.div_ceil(2), "p = {p}");
        }
    }

    #[test]
    fn errors() {
        assert_eq!(q(1, 1).checked_div(&q(0, 1)), Err(ScalarError::DivisionByZero));
        assert!(matches!(
            q(1, 1).checked_add(&f7(1)),
            Err(ScalarError::FieldMismatch(..))
        ));
        assert!(FieldSpec::prime(2).is_err());
        assert!(FieldSpec::prime(9).is_err());
        assert!(FieldSpec::prime(65537).is_err());
        assert!(Scalar::parse(FieldSpec::prime(7).unwrap(), "7").is_err());
        assert!(Scalar::parse(FieldSpec::Rationals, "1/0").is_err());
    }

    #[test]
    fn text_round_trip() {
        for s in ["0", "-3", "7/2", "-1/5"] {
            assert_eq!(Scalar::parse(FieldSpec::Rationals, s).unwrap().to_string(), s);
        }
        assert_eq!(Scalar::parse(FieldSpec::Rationals, "4/6").unwrap().to_string(), "2/3");
        assert_eq!(
            Scalar::parse_lenient(FieldSpec::prime(7).unwrap(), "-1/2").unwrap(),
            f7(3)
        );
    }
}
