//! Ground fields and exact scalars.
//!
//! Two fields are supported: the rationals and prime fields F_p. Rational
//! values are arbitrary-precision and kept in canonical reduced form with a
//! positive denominator, so scalar equality is structural equality. Residues
//! mod p are stored in [0, p).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The ground field: characteristic 0 (the rationals) or a prime field F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl FieldSpec {
    /// Builds a prime-field spec, rejecting composite or unit moduli.
    pub fn prime(p: u64) -> Result<FieldSpec> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rational(BigRational::zero()),
            FieldSpec::Prime(p) => Scalar::Residue {
                value: 0,
                modulus: *p,
            },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rational(BigRational::one()),
            FieldSpec::Prime(p) => Scalar::Residue {
                value: 1 % *p,
                modulus: *p,
            },
        }
    }

    /// The scalar for an integer constant, reduced into the field.
    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Prime(p) => {
                let p_i = *p as i128;
                let r = ((n as i128 % p_i) + p_i) % p_i;
                Scalar::Residue {
                    value: r as u64,
                    modulus: *p,
                }
            }
        }
    }

    /// All nonzero field elements; only available for prime fields small
    /// enough to enumerate.
    pub fn nonzero_elements(&self) -> Option<Vec<Scalar>> {
        match self {
            FieldSpec::Rational => None,
            FieldSpec::Prime(p) if *p > 1 << 20 => None,
            FieldSpec::Prime(p) => Some(
                (1..*p)
                    .map(|v| Scalar::Residue {
                        value: v,
                        modulus: *p,
                    })
                    .collect(),
            ),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "0"),
            FieldSpec::Prime(p) => write!(f, "{p}"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map_or(false, |dd| dd <= n) {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact field element, tagged with the field it lives in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rational,
            Scalar::Residue { modulus, .. } => FieldSpec::Prime(*modulus),
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
            Scalar::Residue { value, modulus } => *value == 1 % *modulus,
        }
    }

    /// Exact rational from a numerator/denominator pair.
    pub fn ratio(num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        Scalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (
                Scalar::Residue {
                    value: a,
                    modulus: p,
                },
                Scalar::Residue {
                    value: b,
                    modulus: q,
                },
            ) if p == q => Scalar::Residue {
                value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                modulus: *p,
            },
            _ => panic!("scalar field mismatch in add"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (
                Scalar::Residue {
                    value: a,
                    modulus: p,
                },
                Scalar::Residue {
                    value: b,
                    modulus: q,
                },
            ) if p == q => {
                let prod = (*a as u128 * *b as u128) % (*p as u128);
                Scalar::Residue {
                    value: prod as u64,
                    modulus: *p,
                }
            }
            _ => panic!("scalar field mismatch in mul"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            Scalar::Rational(a) => Ok(Scalar::Rational(a.recip())),
            Scalar::Residue { value, modulus } => {
                // Fermat: value^(p-2) mod p.
                let mut base = *value as u128;
                let p = *modulus as u128;
                let mut exp = p - 2;
                let mut acc: u128 = 1;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % p;
                    }
                    base = base * base % p;
                    exp >>= 1;
                }
                Ok(Scalar::Residue {
                    value: acc as u64,
                    modulus: *modulus,
                })
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&other.inv()?))
    }

    /// Total order used only to make outputs deterministic (block sorting,
    /// canonical report ordering). Rationals compare numerically, residues by
    /// representative.
    pub fn sort_key_cmp(&self, other: &Scalar) -> std::cmp::Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            (Scalar::Residue { value: a, .. }, Scalar::Residue { value: b, .. }) => a.cmp(b),
            (Scalar::Rational(_), Scalar::Residue { .. }) => std::cmp::Ordering::Less,
            (Scalar::Residue { .. }, Scalar::Rational(_)) => std::cmp::Ordering::Greater,
        }
    }

    /// Parses the wire syntax: "n/d" or "n" over the rationals, a decimal
    /// representative in [0, p) over a prime field.
    pub fn parse(text: &str, field: FieldSpec) -> Result<Scalar> {
        let text = text.trim();
        match field {
            FieldSpec::Rational => {
                let (num, den) = match text.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (text, "1"),
                };
                let num = BigInt::from_str(num)
                    .map_err(|_| Error::InvalidAlgebra(format!("bad rational '{text}'")))?;
                let den = BigInt::from_str(den)
                    .map_err(|_| Error::InvalidAlgebra(format!("bad rational '{text}'")))?;
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(Scalar::Rational(BigRational::new(num, den)))
            }
            FieldSpec::Prime(p) => {
                let v = text
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidAlgebra(format!("bad residue '{text}'")))?;
                if v >= p {
                    return Err(Error::InvalidAlgebra(format!(
                        "residue {v} out of range for modulus {p}"
                    )));
                }
                Ok(Scalar::Residue {
                    value: v,
                    modulus: p,
                })
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else if r.denom().is_negative() {
                    // num-rational keeps denominators positive; guard anyway.
                    write!(f, "{}/{}", -r.numer(), -r.denom())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_canonical_form() {
        let half = Scalar::ratio(2, 4);
        assert_eq!(half, Scalar::ratio(1, 2));
        assert_eq!(half.to_string(), "1/2");
        let neg = Scalar::ratio(1, -2);
        assert_eq!(neg.to_string(), "-1/2");
        assert_eq!(Scalar::ratio(6, 3).to_string(), "2");
    }

    #[test]
    fn residue_arithmetic() {
        let f5 = FieldSpec::prime(5).unwrap();
        let a = f5.from_i64(3);
        let b = f5.from_i64(4);
        assert_eq!(a.mul(&b), f5.from_i64(2));
        assert_eq!(a.add(&b), f5.from_i64(2));
        assert_eq!(a.inv().unwrap(), f5.from_i64(2)); // 3*2 = 6 = 1 mod 5
        assert_eq!(f5.from_i64(-1), f5.from_i64(4));
    }

    #[test]
    fn prime_validation() {
        assert!(FieldSpec::prime(2).is_ok());
        assert!(FieldSpec::prime(97).is_ok());
        assert_eq!(FieldSpec::prime(1), Err(Error::NotPrime(1)));
        assert_eq!(FieldSpec::prime(91), Err(Error::NotPrime(91)));
    }

    #[test]
    fn parse_round_trip() {
        let s = Scalar::parse("-7/3", FieldSpec::Rational).unwrap();
        assert_eq!(s.to_string(), "-7/3");
        let r = Scalar::parse("4", FieldSpec::prime(7).unwrap()).unwrap();
        assert_eq!(r.to_string(), "4");
        assert!(Scalar::parse("9", FieldSpec::prime(7).unwrap()).is_err());
        assert!(Scalar::parse("1/0", FieldSpec::Rational).is_err());
    }
}
