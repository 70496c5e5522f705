//! Pluggable exact coefficient rings.
//!
//! Three concrete rings are provided: the integers, the integers modulo
//! `n >= 2`, and the rationals. Elements are kept in canonical form at all
//! times (residues in `[0, n)`, fractions fully reduced with positive
//! denominator), so equality of elements is structural equality.
//!
//! ```
//! use budcalc::ring::RingDescriptor;
//!
//! let z6 = RingDescriptor::Mod(6);
//! let five = z6.from_i64(5);
//! // 5 * 5 = 25 = 1 (mod 6), so 5 is its own inverse
//! assert_eq!(five.try_invert(), Some(five.clone()));
//! ```

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;

/// Names one of the three supported coefficient rings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingDescriptor {
    /// Arbitrary-precision integers.
    Integers,
    /// Integers modulo `n`, with `n >= 2`.
    Mod(u64),
    /// Arbitrary-precision rationals.
    Rationals,
}

impl RingDescriptor {
    /// Parses the string form: `"z"`, `"q"`, or `"zmod:<n>"`.
    pub fn parse(s: &str) -> Result<Self, Error> {
        match s {
            "z" => Ok(RingDescriptor::Integers),
            "q" => Ok(RingDescriptor::Rationals),
            _ => {
                let n = s
                    .strip_prefix("zmod:")
                    .and_then(|rest| rest.parse::<u64>().ok())
                    .ok_or_else(|| {
                        Error::InvalidArgument(format!(
                            "unknown ring {s:?}; expected \"z\", \"q\", or \"zmod:<n>\""
                        ))
                    })?;
                if n < 2 {
                    return Err(Error::InvalidArgument(format!(
                        "modulus must be at least 2, got {n}"
                    )));
                }
                Ok(RingDescriptor::Mod(n))
            }
        }
    }

    /// The additive identity.
    pub fn zero(&self) -> RingElement {
        self.from_i64(0)
    }

    /// The multiplicative identity.
    pub fn one(&self) -> RingElement {
        self.from_i64(1)
    }

    /// Embeds a machine integer, reducing to canonical form.
    pub fn from_i64(&self, v: i64) -> RingElement {
        self.from_bigint(BigInt::from(v))
    }

    /// Embeds an arbitrary-precision integer, reducing to canonical form.
    pub fn from_bigint(&self, v: BigInt) -> RingElement {
        let value = match self {
            RingDescriptor::Integers => Scalar::Int(v),
            RingDescriptor::Mod(n) => Scalar::Int(v.mod_floor(&BigInt::from(*n))),
            RingDescriptor::Rationals => Scalar::Rat(BigRational::from_integer(v)),
        };
        RingElement { ring: *self, value }
    }

    /// Builds a rational `p/q`; only meaningful over the rationals.
    pub fn from_ratio(&self, num: BigInt, den: BigInt) -> Result<RingElement, Error> {
        if den.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        match self {
            RingDescriptor::Rationals => Ok(RingElement {
                ring: *self,
                value: Scalar::Rat(BigRational::new(num, den)),
            }),
            _ => Err(Error::InvalidArgument(format!(
                "fractional literal over non-field ring {self}"
            ))),
        }
    }

    /// Parses an element from its string form (`"-3"`, or `"2/3"` over Q).
    pub fn parse_element(&self, s: &str) -> Result<RingElement, Error> {
        let bad = || Error::InvalidArgument(format!("cannot parse {s:?} as an element of {self}"));
        if let Some((num, den)) = s.split_once('/') {
            let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
            let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
            self.from_ratio(num, den)
        } else {
            let v = BigInt::from_str(s.trim()).map_err(|_| bad())?;
            Ok(self.from_bigint(v))
        }
    }

    /// Returns `p` when the additive order of 1 is a prime `p`, i.e. for
    /// `Mod(p)` with `p` prime. Integers, rationals, and composite moduli
    /// have no prime characteristic.
    pub fn characteristic_prime(&self) -> Option<u64> {
        match self {
            RingDescriptor::Mod(n) if is_prime(*n) => Some(*n),
            _ => None,
        }
    }

    /// Lists all elements of a finite ring in residue order `0, 1, ..., n-1`.
    pub fn enumerate_elements(&self) -> Result<Vec<RingElement>, Error> {
        match self {
            RingDescriptor::Mod(n) => Ok((0..*n).map(|v| self.from_i64(v as i64)).collect()),
            _ => Err(Error::NotEnumerable(self.to_string())),
        }
    }

    /// Number of elements, for finite rings.
    pub fn size(&self) -> Option<u64> {
        match self {
            RingDescriptor::Mod(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Integers => write!(f, "z"),
            RingDescriptor::Rationals => write!(f, "q"),
            RingDescriptor::Mod(n) => write!(f, "zmod:{n}"),
        }
    }
}

impl FromStr for RingDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RingDescriptor::parse(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Scalar {
    Int(BigInt),
    Rat(BigRational),
}

/// An element of one of the three rings, always in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElement {
    ring: RingDescriptor,
    value: Scalar,
}

impl RingElement {
    /// The ring this element belongs to.
    pub fn ring(&self) -> RingDescriptor {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Scalar::Int(v) => v.is_zero(),
            Scalar::Rat(v) => v.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.value {
            Scalar::Int(v) => v.is_one(),
            Scalar::Rat(v) => v.is_one(),
        }
    }

    fn same_ring(&self, other: &RingElement) -> Result<(), Error> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(
                self.ring.to_string(),
                other.ring.to_string(),
            ))
        }
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement, Error> {
        self.same_ring(other)?;
        Ok(self.map2(other, |a, b| a + b, |a, b| a + b))
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement, Error> {
        self.same_ring(other)?;
        Ok(self.map2(other, |a, b| a - b, |a, b| a - b))
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement, Error> {
        self.same_ring(other)?;
        Ok(self.map2(other, |a, b| a * b, |a, b| a * b))
    }

    pub fn neg(&self) -> RingElement {
        let value = match &self.value {
            Scalar::Int(v) => Scalar::Int(-v),
            Scalar::Rat(v) => Scalar::Rat(-v),
        };
        RingElement { ring: self.ring, value }.canonical()
    }

    /// Multiplies by a machine integer.
    pub fn mul_i64(&self, n: i64) -> RingElement {
        let value = match &self.value {
            Scalar::Int(v) => Scalar::Int(v * n),
            Scalar::Rat(v) => Scalar::Rat(v * BigInt::from(n)),
        };
        RingElement { ring: self.ring, value }.canonical()
    }

    fn map2(
        &self,
        other: &RingElement,
        fi: impl Fn(&BigInt, &BigInt) -> BigInt,
        fr: impl Fn(&BigRational, &BigRational) -> BigRational,
    ) -> RingElement {
        let value = match (&self.value, &other.value) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(fi(a, b)),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(fr(a, b)),
            _ => unreachable!("same descriptor implies same scalar kind"),
        };
        RingElement { ring: self.ring, value }.canonical()
    }

    fn canonical(self) -> RingElement {
        match (self.ring, self.value) {
            (RingDescriptor::Mod(n), Scalar::Int(v)) => RingElement {
                ring: self.ring,
                value: Scalar::Int(v.mod_floor(&BigInt::from(n))),
            },
            (ring, value) => RingElement { ring, value },
        }
    }

    /// Returns `u` with `self * u = 1` if `self` is a unit, `None` otherwise.
    /// Over `Mod(n)` this is the extended Euclidean algorithm.
    pub fn try_invert(&self) -> Option<RingElement> {
        match (&self.ring, &self.value) {
            (RingDescriptor::Integers, Scalar::Int(v)) => {
                if v.is_one() || (-v).is_one() {
                    Some(self.clone())
                } else {
                    None
                }
            }
            (RingDescriptor::Mod(n), Scalar::Int(v)) => {
                let n = BigInt::from(*n);
                let ext = v.extended_gcd(&n);
                if ext.gcd.is_one() {
                    Some(self.ring.from_bigint(ext.x))
                } else {
                    None
                }
            }
            (RingDescriptor::Rationals, Scalar::Rat(v)) => {
                if v.is_zero() {
                    None
                } else {
                    Some(RingElement {
                        ring: self.ring,
                        value: Scalar::Rat(v.recip()),
                    })
                }
            }
            _ => unreachable!(),
        }
    }

    /// Returns `b` with `m * b = self` when such `b` exists uniquely.
    ///
    /// Over the integers this is an exact divisibility test. Over the
    /// rationals it always succeeds. Over `Mod(n)` the solution is unique
    /// exactly when `gcd(m, n) = 1`; a non-unique solution is reported as
    /// absent rather than chosen arbitrarily.
    pub fn divide_by_integer(&self, m: i64) -> Result<Option<RingElement>, Error> {
        if m == 0 {
            return Err(Error::InvalidArgument("division by integer 0".into()));
        }
        let m_big = BigInt::from(m);
        Ok(match (&self.ring, &self.value) {
            (RingDescriptor::Integers, Scalar::Int(v)) => {
                let (q, r) = v.div_rem(&m_big);
                if r.is_zero() {
                    Some(self.ring.from_bigint(q))
                } else {
                    None
                }
            }
            (RingDescriptor::Mod(_), Scalar::Int(_)) => self
                .ring
                .from_i64(m)
                .try_invert()
                .map(|inv| inv.mul(self).expect("same ring")),
            (RingDescriptor::Rationals, Scalar::Rat(v)) => Some(RingElement {
                ring: self.ring,
                value: Scalar::Rat(v / BigInt::from(m)),
            }),
            _ => unreachable!(),
        })
    }

    /// The canonical integer representative, when the element is integral.
    pub fn to_bigint(&self) -> Option<BigInt> {
        match &self.value {
            Scalar::Int(v) => Some(v.clone()),
            Scalar::Rat(v) => v.is_integer().then(|| v.to_integer()),
        }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Scalar::Int(v) => write!(f, "{v}"),
            Scalar::Rat(v) => {
                if v.is_integer() {
                    write!(f, "{}", v.numer())
                } else {
                    write!(f, "{}/{}", v.numer(), v.denom())
                }
            }
        }
    }
}

/// A uniformly-ish random element for randomized harnesses: full range over
/// finite rings, small numerators and denominators otherwise.
pub(crate) fn random_element<R: rand::Rng>(rng: &mut R, ring: RingDescriptor) -> RingElement {
    match ring {
        RingDescriptor::Integers => ring.from_i64(rng.gen_range(-9..=9)),
        RingDescriptor::Mod(n) => ring.from_i64(rng.gen_range(0..n) as i64),
        RingDescriptor::Rationals => {
            let num = rng.gen_range(-9..=9);
            let den = rng.gen_range(1..=9);
            ring.from_ratio(num.into(), den.into()).expect("nonzero denominator")
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
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
