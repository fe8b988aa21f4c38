//! Exact field elements: rationals and quadratic extensions `Q(sqrt(d))`.
//!
//! A [`Scalar`] is `a + b*sqrt(d)` with `a`, `b` reduced rationals; over the
//! plain rationals `b` is identically zero. Addition is field-independent,
//! multiplication and inversion take the ambient [`FieldSpec`]. Equality is
//! structural equality of canonical forms.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::fmt;

pub type Rational = BigRational;

/// The ambient field: `Q` or a quadratic extension `Q(sqrt(d))`.
///
/// `d` must be square-free and not a perfect square; `d = -1` is the usual
/// choice and the default extension of the shipped corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    pub ext: Option<i64>,
}

impl FieldSpec {
    pub const RATIONAL: FieldSpec = FieldSpec { ext: None };

    pub fn rational() -> Self {
        Self::RATIONAL
    }

    pub fn quadratic(d: i64) -> Result<Self> {
        if d == 0 || d == 1 || !is_square_free(d) || is_perfect_square(d) {
            return Err(Error::ParseError {
                position: "field".into(),
                message: format!("{d} is not a valid square-free non-square extension"),
            });
        }
        Ok(FieldSpec { ext: Some(d) })
    }

    /// Canonical name, also the CLI `--field` syntax: `Q` or `Q(sqrt:d)`.
    pub fn name(&self) -> String {
        match self.ext {
            None => "Q".to_string(),
            Some(d) => format!("Q(sqrt:{d})"),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        if s == "Q" {
            return Ok(Self::RATIONAL);
        }
        if let Some(inner) = s.strip_prefix("Q(sqrt:").and_then(|r| r.strip_suffix(')')) {
            let d: i64 = inner.parse().map_err(|_| Error::ParseError {
                position: "field".into(),
                message: format!("bad extension `{inner}`"),
            })?;
            return Self::quadratic(d);
        }
        Err(Error::ParseError {
            position: "field".into(),
            message: format!("unknown field `{s}` (expected Q or Q(sqrt:d))"),
        })
    }
}

fn is_perfect_square(d: i64) -> bool {
    if d < 0 {
        return false;
    }
    let r = (d as f64).sqrt().round() as i64;
    (r - 1..=r + 1).any(|k| k * k == d)
}

fn is_square_free(d: i64) -> bool {
    let mut n = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        while n.is_multiple_of(p) {
            n /= p;
        }
        p += 1;
    }
    true
}

/// An exact element `a + b*sqrt(d)` of the ambient field.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar {
    a: Rational,
    b: Rational,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            a: Rational::zero(),
            b: Rational::zero(),
        }
    }

    pub fn one() -> Self {
        Scalar {
            a: Rational::one(),
            b: Rational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar {
            a: Rational::from_integer(BigInt::from(n)),
            b: Rational::zero(),
        }
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Scalar {
            a: Rational::new(BigInt::from(p), BigInt::from(q)),
            b: Rational::zero(),
        }
    }

    pub fn from_parts(a: Rational, b: Rational) -> Self {
        Scalar { a, b }
    }

    /// `sqrt(d)` itself; only meaningful when the field has an extension.
    pub fn sqrt_gen() -> Self {
        Scalar {
            a: Rational::zero(),
            b: Rational::one(),
        }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn radical_part(&self) -> &Rational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// True when the element lies in the prime field `Q`.
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        Scalar {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        Scalar {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }

    pub fn mul(&self, rhs: &Scalar, field: FieldSpec) -> Scalar {
        // (a1 + b1 r)(a2 + b2 r) = a1 a2 + d b1 b2 + (a1 b2 + a2 b1) r
        let cross = &self.a * &rhs.b + &self.b * &rhs.a;
        let mut plain = &self.a * &rhs.a;
        if !self.b.is_zero() && !rhs.b.is_zero() {
            let d = field
                .ext
                .expect("radical parts require an extension field");
            plain += &self.b * &rhs.b * Rational::from_integer(BigInt::from(d));
        }
        Scalar { a: plain, b: cross }
    }

    /// Conjugate `a - b*sqrt(d)`.
    pub fn conj(&self) -> Scalar {
        Scalar {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// Field norm `a^2 - d b^2`, a rational.
    pub fn norm(&self, field: FieldSpec) -> Rational {
        let mut n = &self.a * &self.a;
        if !self.b.is_zero() {
            let d = field.ext.expect("radical part requires an extension");
            n -= &self.b * &self.b * Rational::from_integer(BigInt::from(d));
        }
        n
    }

    /// Multiplicative inverse via the conjugate; errors on zero.
    pub fn inv(&self, field: FieldSpec) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        if self.b.is_zero() {
            return Ok(Scalar {
                a: self.a.recip(),
                b: Rational::zero(),
            });
        }
        let n = self.norm(field);
        // square-free non-square d keeps the norm anisotropic, so n != 0
        debug_assert!(!n.is_zero());
        let ninv = n.recip();
        Ok(Scalar {
            a: &self.a * &ninv,
            b: -(&self.b * &ninv),
        })
    }

    pub fn div(&self, rhs: &Scalar, field: FieldSpec) -> Result<Scalar> {
        Ok(self.mul(&rhs.inv(field)?, field))
    }

    /// A square root in the field, if one exists. The other root is its negation.
    pub fn sqrt_in(&self, field: FieldSpec) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        match field.ext {
            None => rational_sqrt(&self.a).map(|r| Scalar {
                a: r,
                b: Rational::zero(),
            }),
            Some(d) => {
                let d_rat = Rational::from_integer(BigInt::from(d));
                if self.b.is_zero() {
                    // (u)^2 = a  or  (v sqrt(d))^2 = d v^2 = a
                    if let Some(u) = rational_sqrt(&self.a) {
                        return Some(Scalar {
                            a: u,
                            b: Rational::zero(),
                        });
                    }
                    if let Some(v) = rational_sqrt(&(&self.a / &d_rat)) {
                        return Some(Scalar {
                            a: Rational::zero(),
                            b: v,
                        });
                    }
                    None
                } else {
                    // (u + v r)^2 = a + b r:  u^2 + d v^2 = a, 2uv = b.
                    // u^2 = (a ± sqrt(a^2 - d b^2)) / 2, all square roots rational.
                    let n = self.norm(field);
                    let s = rational_sqrt(&n)?;
                    let two = Rational::from_integer(BigInt::from(2));
                    for sign in [1i64, -1] {
                        let cand = (&self.a + &s * Rational::from_integer(BigInt::from(sign)))
                            / &two;
                        if let Some(u) = rational_sqrt(&cand) {
                            if !u.is_zero() {
                                let v = &self.b / (&two * &u);
                                return Some(Scalar { a: u, b: v });
                            }
                        }
                    }
                    None
                }
            }
        }
    }

    /// Canonical string: `p/q` or `p/q+r/s*sqrt(d)` (minus sign absorbed
    /// into the radical coefficient as `p/q-r/s*sqrt(d)`).
    pub fn canonical_string(&self, field: FieldSpec) -> String {
        let plain = format!("{}/{}", self.a.numer(), self.a.denom());
        if self.b.is_zero() {
            return plain;
        }
        let d = field.ext.expect("radical part requires an extension");
        if self.b.is_negative() {
            let nb = -self.b.clone();
            format!("{plain}-{}/{}*sqrt({d})", nb.numer(), nb.denom())
        } else {
            format!("{plain}+{}/{}*sqrt({d})", self.b.numer(), self.b.denom())
        }
    }

    /// Parse a canonical (or integer-shorthand) scalar string.
    pub fn parse(s: &str, field: FieldSpec) -> Result<Scalar> {
        let err = |msg: &str| Error::ParseError {
            position: format!("scalar `{s}`"),
            message: msg.to_string(),
        };
        let s = s.trim();
        if s.is_empty() {
            return Err(err("empty scalar"));
        }
        // Split an optional radical term off the tail: look for the last
        // '+'/'-' that is not the leading sign and precedes a sqrt factor.
        if let Some(star) = s.find("*sqrt(") {
            let close = s[star..]
                .find(')')
                .map(|p| star + p)
                .ok_or_else(|| err("missing `)` after sqrt"))?;
            if close != s.len() - 1 {
                return Err(err("trailing characters after sqrt(d)"));
            }
            let d_str = &s[star + 6..close];
            let d: i64 = d_str.parse().map_err(|_| err("bad radicand"))?;
            match field.ext {
                Some(fd) if fd == d => {}
                _ => {
                    return Err(err(&format!(
                        "sqrt({d}) does not live in {}",
                        field.name()
                    )))
                }
            }
            // The coefficient starts after the sign that separates the two
            // terms; scan for the split point outside position 0.
            let head = &s[..star];
            let mut split = None;
            for (i, c) in head.char_indices().skip(1) {
                if c == '+' || c == '-' {
                    split = Some(i);
                }
            }
            let split = split.ok_or_else(|| err("missing rational part before sqrt term"))?;
            let a = parse_rational(&s[..split]).ok_or_else(|| err("bad rational part"))?;
            let sign = if s.as_bytes()[split] == b'-' { -1 } else { 1 };
            let b_raw =
                parse_rational(&s[split + 1..star]).ok_or_else(|| err("bad sqrt coefficient"))?;
            let b = b_raw * Rational::from_integer(BigInt::from(sign));
            return Ok(Scalar { a, b });
        }
        if s.contains("sqrt") {
            return Err(err("sqrt term must look like r/s*sqrt(d)"));
        }
        let a = parse_rational(s).ok_or_else(|| err("bad rational"))?;
        Ok(Scalar {
            a,
            b: Rational::zero(),
        })
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        Some(Rational::new(p, q))
    } else {
        let p: BigInt = s.parse().ok()?;
        Some(Rational::from_integer(p))
    }
}

/// Exact square root of a non-negative rational, if it is a perfect square.
fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(Rational::zero());
    }
    let pn = r.numer().sqrt();
    if &(&pn * &pn) != r.numer() {
        return None;
    }
    let pd = r.denom().sqrt();
    if &(&pd * &pd) != r.denom() {
        return None;
    }
    Some(Rational::new(pn, pd))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Display assumes the reader knows the ambient field; the radicand
        // is only recoverable through `canonical_string`.
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*r", self.b)
        } else {
            write!(f, "{}+{}*r", self.a, self.b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi() -> FieldSpec {
        FieldSpec::quadratic(-1).unwrap()
    }

    #[test]
    fn rational_reciprocal() {
        let s = Scalar::from_ratio(2, 3);
        assert_eq!(s.inv(FieldSpec::RATIONAL).unwrap(), Scalar::from_ratio(3, 2));
    }

    #[test]
    fn extension_inverse_by_conjugate() {
        // (1 + i)^-1 = 1/2 - 1/2 i, norm a^2 - d b^2 = 2
        let s = Scalar::from_int(1).add(&Scalar::sqrt_gen());
        let inv = s.inv(qi()).unwrap();
        let expect = Scalar::from_parts(
            Rational::new(BigInt::from(1), BigInt::from(2)),
            Rational::new(BigInt::from(-1), BigInt::from(2)),
        );
        assert_eq!(inv, expect);
        assert!(s.mul(&inv, qi()).is_one());
    }

    #[test]
    fn zero_has_no_inverse() {
        assert!(matches!(
            Scalar::zero().inv(FieldSpec::RATIONAL),
            Err(Error::ZeroInverse)
        ));
    }

    #[test]
    fn canonical_strings_round_trip() {
        let f = qi();
        let cases = [
            Scalar::from_ratio(-7, 3),
            Scalar::zero(),
            Scalar::sqrt_gen(),
            Scalar::from_ratio(1, 2).sub(&Scalar::sqrt_gen()),
        ];
        for s in &cases {
            let txt = s.canonical_string(f);
            assert_eq!(&Scalar::parse(&txt, f).unwrap(), s, "{txt}");
        }
        assert_eq!(
            Scalar::from_ratio(1, 2)
                .sub(&Scalar::sqrt_gen())
                .canonical_string(f),
            "1/2-1/1*sqrt(-1)"
        );
    }

    #[test]
    fn division_by_zero_denominator_rejected() {
        assert!(Scalar::parse("1/0", FieldSpec::RATIONAL).is_err());
    }

    #[test]
    fn mismatched_radicand_rejected() {
        assert!(Scalar::parse("0/1+1/1*sqrt(2)", qi()).is_err());
        assert!(Scalar::parse("0/1+1/1*sqrt(-1)", FieldSpec::RATIONAL).is_err());
    }

    #[test]
    fn sqrt_in_field() {
        let f = qi();
        // sqrt(-1) = i
        let m1 = Scalar::from_int(-1);
        let r = m1.sqrt_in(f).unwrap();
        assert_eq!(r.mul(&r, f), m1);
        // sqrt(9/4) rational even inside the extension
        assert_eq!(
            Scalar::from_ratio(9, 4).sqrt_in(f).unwrap(),
            Scalar::from_ratio(3, 2)
        );
        // 2i = (1+i)^2
        let two_i = Scalar::sqrt_gen().mul(&Scalar::from_int(2), f);
        let r = two_i.sqrt_in(f).unwrap();
        assert_eq!(r.mul(&r, f), two_i);
        // no sqrt of 2 in Q(i)
        assert!(Scalar::from_int(2).sqrt_in(f).is_none());
        assert!(Scalar::from_int(2).sqrt_in(FieldSpec::RATIONAL).is_none());
    }

    #[test]
    fn field_spec_validation() {
        assert!(FieldSpec::quadratic(4).is_err());
        assert!(FieldSpec::quadratic(12).is_err());
        assert!(FieldSpec::quadratic(1).is_err());
        assert!(FieldSpec::quadratic(-1).is_ok());
        assert!(FieldSpec::quadratic(5).is_ok());
        assert_eq!(FieldSpec::parse("Q(sqrt:-1)").unwrap(), qi());
        assert_eq!(FieldSpec::parse("Q").unwrap(), FieldSpec::RATIONAL);
    }
}
