//! Exact field elements.  Two fields are supported: the rationals with
//! arbitrary-precision numerator and denominator, and prime fields F_p with
//! canonical residues in `[0, p)`.  There is no floating point anywhere.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// The coefficient field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    /// Prime-field constructor; rejects composite moduli.
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// Number of field elements, or `None` for an infinite field.
    pub fn order(&self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime(p) => Some(*p),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.integer(0)
    }

    pub fn one(&self) -> Scalar {
        self.integer(1)
    }

    /// Embed a signed integer.
    pub fn integer(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Prime(p) => {
                let p = *p as i128;
                let v = ((n as i128 % p) + p) % p;
                Scalar::Residue { value: v as u64, modulus: p as u64 }
            }
        }
    }

    /// The `k`-th element of a fixed enumeration of the nonzero scalars
    /// (`k = 0` gives 1), or `None` once a finite field runs out.
    pub fn nth_nonzero(&self, k: u64) -> Option<Scalar> {
        match self {
            FieldSpec::Rationals => {
                Some(Scalar::Rational(BigRational::from_integer(BigInt::from(k + 1))))
            }
            FieldSpec::Prime(p) => {
                if k + 1 < *p {
                    Some(Scalar::Residue { value: k + 1, modulus: *p })
                } else {
                    None
                }
            }
        }
    }

    /// Every field element, for exhaustive searches over finite fields.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime(p) => {
                Some((0..*p).map(|v| Scalar::Residue { value: v, modulus: *p }).collect())
            }
        }
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        matches!(
            (self, s),
            (FieldSpec::Rationals, Scalar::Rational(_))
        ) || matches!((self, s), (FieldSpec::Prime(p), Scalar::Residue { modulus, .. }) if p == modulus)
    }

    /// Parse the serialized form: `num/den` or `num` over the rationals,
    /// a decimal residue over a prime field.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let bad = || Error::BadScalar(text.to_string());
        match self {
            FieldSpec::Rationals => {
                let (num, den) = match text.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (text, "1"),
                };
                let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
                let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(bad());
                }
                Ok(Scalar::Rational(BigRational::new(num, den)))
            }
            FieldSpec::Prime(p) => {
                let v = u64::from_str(text.trim()).map_err(|_| bad())?;
                Ok(Scalar::Residue { value: v % p, modulus: *p })
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "rational"),
            FieldSpec::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

// File form: "rational" or {"prime": p}.
impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            FieldSpec::Rationals => s.serialize_str("rational"),
            FieldSpec::Prime(p) => {
                use serde::ser::SerializeMap;
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("prime", p)?;
                m.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Name(String),
            Prime { prime: u64 },
        }
        match Repr::deserialize(d)? {
            Repr::Name(s) if s == "rational" => Ok(FieldSpec::Rationals),
            Repr::Name(s) => Err(D::Error::custom(format!("unknown field `{s}`"))),
            Repr::Prime { prime } => {
                FieldSpec::prime(prime).map_err(|e| D::Error::custom(e.to_string()))
            }
        }
    }
}

/// A single field element.  Residues carry their modulus so that arithmetic
/// is closed without threading a field handle through every call site.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
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
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q }) => {
                assert_eq!(p, q, "mixed moduli");
                Scalar::Residue { value: (a + b) % p, modulus: *p }
            }
            _ => panic!("mixed fields"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, modulus } => {
                Scalar::Residue { value: (modulus - value) % modulus, modulus: *modulus }
            }
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q }) => {
                assert_eq!(p, q, "mixed moduli");
                let v = (*a as u128 * *b as u128) % *p as u128;
                Scalar::Residue { value: v as u64, modulus: *p }
            }
            _ => panic!("mixed fields"),
        }
    }

    /// Multiplicative inverse.  Panics on zero; callers divide only by
    /// pivots that were checked to be nonzero.
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => {
                assert!(!a.is_zero(), "inverse of zero");
                Scalar::Rational(a.recip())
            }
            Scalar::Residue { value, modulus } => {
                assert!(*value != 0, "inverse of zero");
                Scalar::Residue { value: mod_inverse(*value, *modulus), modulus: *modulus }
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Extended Euclid on (a, p); p prime and a != 0 mod p.
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    assert_eq!(old_r, 1, "not invertible");
    (((old_s % p as i128) + p as i128) % p as i128) as u64
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    // Deterministic Miller-Rabin for u64.
    let d = (n - 1) >> (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        let mut e = d;
        while e != n - 1 {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            e <<= 1;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, n: u64) -> u64 {
    let mut acc: u64 = 1;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % n as u128) as u64;
        }
        base = ((base as u128 * base as u128) % n as u128) as u64;
        exp >>= 1;
    }
    acc
}
