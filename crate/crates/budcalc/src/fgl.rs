//! Buds of formal group laws and their calculus.
//!
//! A `k`-bud of a (1-dimensional, commutative) formal group law over `B` is
//! a 2-variable series `F(x, y)` at precision `k` satisfying, exactly to
//! that precision,
//!
//! ```text
//! F(x, 0) = x = F(0, y),      F(x, y) = F(y, x),      F(F(x, y), z) = F(x, F(y, z)).
//! ```
//!
//! [`FormalGroupBud`] values are certified: every constructor runs the three
//! axiom checks, with the associativity check built from two exact 3-variable
//! substitutions. On top of the buds this module provides n-series, formal
//! sums, the group of strict isomorphisms under composition, the conjugation
//! action `F^phi = phi(F(phi^-1(x), phi^-1(y)))`, the passage between buds
//! and symmetric 2-cocycles, heights over prime characteristic, and
//! logarithms where the ring allows the required divisions.
//!
//! ```
//! use budcalc::fgl::FormalGroupBud;
//! use budcalc::ring::RingDescriptor;
//!
//! let f = FormalGroupBud::multiplicative(RingDescriptor::Mod(2), 4);
//! // (1+x)^2 - 1 = x^2 over Z/2
//! assert_eq!(f.n_series(2).to_string(), "x0^2");
//! ```

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cocycle::{principal_cocycle, SymCocycle};
use crate::error::Error;
use crate::ring::{RingDescriptor, RingElement};
use crate::series::TruncatedSeries;

/// A certified bud of a formal group law: a 2-variable series whose
/// precision is the bud order, with the three axioms checked exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalGroupBud {
    series: TruncatedSeries,
}

/// A strict isomorphism (bud): a univariate series with linear coefficient
/// exactly 1. These form a group under composition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrictIso {
    series: TruncatedSeries,
}

/// Result of a height computation over a ring of prime characteristic `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeightResult {
    /// `[p]_F(x) = u x^{p^h} + higher`, with `u` nonzero.
    Finite { height: u32, unit: RingElement },
    /// `[p]_F` vanishes up to the inspected degree bound.
    AtLeastBound(u32),
}

impl FormalGroupBud {
    /// Certifies a candidate series as a bud of a formal group law,
    /// reporting the first failing axiom and a witness monomial otherwise.
    pub fn validate(series: TruncatedSeries) -> Result<Self, Error> {
        if series.num_vars() != 2 {
            return Err(Error::ShapeMismatch(format!(
                "formal group law must be a 2-variable series, got {}",
                series.num_vars()
            )));
        }
        let ring = series.ring();
        let n = series.precision();

        // unit axiom F(x, 0) = x and F(0, y) = y: the linear coefficients
        // are 1 and no pure power of a single variable appears
        if !series.coefficient(&[1, 0]).is_one() {
            return Err(Error::AxiomViolation { axiom: "unit", monomial: "x".into() });
        }
        if !series.coefficient(&[0, 1]).is_one() {
            return Err(Error::AxiomViolation { axiom: "unit", monomial: "y".into() });
        }
        for (idx, _) in series.terms() {
            let e = idx.exponents();
            if idx.total_degree() >= 2 && (e[0] == 0 || e[1] == 0) {
                return Err(Error::AxiomViolation {
                    axiom: "unit",
                    monomial: format!("x^{}*y^{}", e[0], e[1]),
                });
            }
        }

        // commutativity F(x, y) = F(y, x)
        for (idx, coef) in series.terms() {
            let e = idx.exponents();
            if series.coefficient(&[e[1], e[0]]) != *coef {
                return Err(Error::AxiomViolation {
                    axiom: "commutativity",
                    monomial: format!("x^{}*y^{}", e[0], e[1]),
                });
            }
        }

        // associativity F(F(x, y), z) = F(x, F(y, z)) as 3-variable series
        let x = TruncatedSeries::variable(ring, 3, 0, n)?;
        let z = TruncatedSeries::variable(ring, 3, 2, n)?;
        let f_xy = series.embed(3, &[0, 1])?;
        let f_yz = series.embed(3, &[1, 2])?;
        let left = series.substitute(&[f_xy, z])?;
        let right = series.substitute(&[x, f_yz])?;
        let diff = left.sub(&right)?;
        if let Some((idx, _)) = diff.terms().next() {
            let e = idx.exponents();
            return Err(Error::AxiomViolation {
                axiom: "associativity",
                monomial: format!("x^{}*y^{}*z^{}", e[0], e[1], e[2]),
            });
        }

        Ok(FormalGroupBud { series })
    }

    /// The additive law `x + y`.
    pub fn additive(ring: RingDescriptor, order: u32) -> Self {
        let series = TruncatedSeries::from_terms(
            ring,
            2,
            order,
            [(vec![1, 0], ring.one()), (vec![0, 1], ring.one())],
        )
        .expect("additive law is well formed");
        FormalGroupBud { series }
    }

    /// The multiplicative law `x + y + xy`.
    pub fn multiplicative(ring: RingDescriptor, order: u32) -> Self {
        let mut terms = vec![(vec![1, 0], ring.one()), (vec![0, 1], ring.one())];
        if order >= 2 {
            terms.push((vec![1, 1], ring.one()));
        }
        let series = TruncatedSeries::from_terms(ring, 2, order, terms)
            .expect("multiplicative law is well formed");
        FormalGroupBud { series }
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    pub fn ring(&self) -> RingDescriptor {
        self.series.ring()
    }

    /// The bud order (= precision of the underlying series).
    pub fn order(&self) -> u32 {
        self.series.precision()
    }

    /// The formal inverse: the unique univariate `iota` with
    /// `F(x, iota(x)) = 0` to the bud order, solved degree by degree.
    /// Its linear coefficient is -1.
    pub fn formal_inverse(&self) -> TruncatedSeries {
        let ring = self.ring();
        let n = self.order();
        let x = TruncatedSeries::variable(ring, 1, 0, n).expect("one variable");
        let mut iota = x.neg();
        for d in 2..=n {
            let residue = self
                .series
                .substitute(&[x.clone(), iota.clone()])
                .expect("shapes agree");
            // F = x + y + higher: the degree-d coefficient of F(x, iota)
            // responds linearly, with slope 1, to the degree-d term of iota
            iota = iota.sub(&residue.homogeneous_part(d)).expect("shapes agree");
        }
        debug_assert!(self
            .series
            .substitute(&[x, iota.clone()])
            .expect("shapes agree")
            .is_zero());
        iota
    }

    /// The n-series `[n]_F` for any integer `n`: `[0] = 0`,
    /// `[n+1](x) = F(x, [n](x))`, and `[-n] = [n] o iota`.
    pub fn n_series(&self, n: i64) -> TruncatedSeries {
        let ring = self.ring();
        let prec = self.order();
        let x = TruncatedSeries::variable(ring, 1, 0, prec).expect("one variable");
        let mut acc = TruncatedSeries::zero(ring, 1, prec);
        for _ in 0..n.unsigned_abs() {
            acc = self
                .series
                .substitute(&[x.clone(), acc])
                .expect("shapes agree");
        }
        if n < 0 {
            let iota = self.formal_inverse();
            acc = acc.substitute(std::slice::from_ref(&iota)).expect("shapes agree");
        }
        acc
    }

    /// The formal sum `f_1 +_F f_2 +_F ...` of a nonempty list of series
    /// sharing one shape, with precision equal to the bud order.
    pub fn formal_sum(&self, summands: &[TruncatedSeries]) -> Result<TruncatedSeries, Error> {
        let (first, rest) = summands
            .split_first()
            .ok_or_else(|| Error::InvalidArgument("formal sum of an empty list".into()))?;
        let mut acc = first.clone();
        for f in rest {
            acc = self.series.substitute(&[acc, f.clone()])?;
        }
        Ok(acc)
    }

    /// The conjugated law `F^phi(x, y) = phi(F(phi^-1(x), phi^-1(y)))`,
    /// re-certified after construction. `phi` is a strict isomorphism from
    /// `F` to the result.
    pub fn conjugate(&self, phi: &StrictIso) -> Result<FormalGroupBud, Error> {
        if phi.order() != self.order() {
            return Err(Error::ShapeMismatch(format!(
                "isomorphism precision {} differs from bud order {}",
                phi.order(),
                self.order()
            )));
        }
        let inv = phi.series.compositional_inverse()?;
        let inner = self
            .series
            .substitute(&[inv.embed(2, &[0])?, inv.embed(2, &[1])?])?;
        let outer = phi.series.substitute(std::slice::from_ref(&inner))?;
        FormalGroupBud::validate(outer)
            .map_err(|e| Error::Internal(format!("conjugate of a certified bud failed: {e}")))
    }

    /// Truncates to a lower bud order. The axioms descend along truncation.
    pub fn truncate(&self, k: u32) -> Result<FormalGroupBud, Error> {
        Ok(FormalGroupBud { series: self.series.truncate(k)? })
    }

    /// `F + c` for a cocycle of degree equal to the bud order: another bud
    /// with the same `(k-1)`-bud. The axioms are re-checked, so a corrupted
    /// cocycle is caught here.
    pub fn add_cocycle(&self, c: &SymCocycle) -> Result<FormalGroupBud, Error> {
        if c.degree() != self.order() {
            return Err(Error::DegreeMismatch { cocycle: c.degree(), bud: self.order() });
        }
        FormalGroupBud::validate(self.series.add(c.series())?)
    }

    /// The degree-`k` cocycle `F - F'` of two order-`k` buds with equal
    /// `(k-1)`-buds.
    pub fn difference_cocycle(&self, other: &FormalGroupBud) -> Result<SymCocycle, Error> {
        let k = self.order();
        if other.order() != k {
            return Err(Error::ShapeMismatch(format!(
                "bud orders differ: {k} vs {}",
                other.order()
            )));
        }
        if k < 2 {
            return Err(Error::InvalidArgument(
                "difference cocycles require bud order >= 2".into(),
            ));
        }
        if self.series.truncate(k - 1)? != other.series.truncate(k - 1)? {
            return Err(Error::BudMismatch { degree: k - 1 });
        }
        SymCocycle::new(self.series.sub(&other.series)?)
    }

    /// Conjugates by `x + b x^k` (with `k` the bud order) and asserts the
    /// relation `F^{x + b x^k} = F + theta(-b)`; the exact agreement of the
    /// two routes is this operation's contract.
    ///
    /// The sign is forced by direct expansion: modulo degree `k + 1`,
    /// `phi^{-1}(x) = x - b x^k`, so the inner substitution contributes
    /// `-b x^k - b y^k` while the outer `phi` adds `b (x+y)^k` back, and
    /// the net change is `-b [x^k + y^k - (x+y)^k] = theta(-b)`.
    pub fn bud_isomorphism_step(&self, b: &RingElement) -> Result<FormalGroupBud, Error> {
        let k = self.order();
        if k < 2 {
            return Err(Error::InvalidArgument(
                "isomorphism steps require bud order >= 2".into(),
            ));
        }
        let ring = self.ring();
        let phi = StrictIso::new(TruncatedSeries::from_terms(
            ring,
            1,
            k,
            [(vec![1], ring.one()), (vec![k], b.clone())],
        )?)?;
        let conjugated = self.conjugate(&phi)?;
        let translated = self.add_cocycle(&principal_cocycle(&b.neg(), k)?)?;
        if conjugated != translated {
            return Err(Error::Internal(format!(
                "conjugation by x + b x^{k} disagrees with adding the principal cocycle of -b"
            )));
        }
        Ok(conjugated)
    }

    /// Height over a ring of prime characteristic `p`: inspects `[p]_F` up
    /// to the given degree bound, which must not exceed the bud order.
    ///
    /// For genuine buds the lowest nonzero degree of `[p]_F` is a power of
    /// `p`; a violation is reported as an error rather than folded into a
    /// wrong answer.
    pub fn height(&self, bound: u32) -> Result<HeightResult, Error> {
        let ring = self.ring();
        let p = ring
            .characteristic_prime()
            .ok_or_else(|| Error::WrongCharacteristic(ring.to_string()))?;
        if bound < 1 || bound > self.order() {
            return Err(Error::OutOfRange(format!(
                "height bound {bound} outside 1..={}",
                self.order()
            )));
        }
        let p_series = self.n_series(p as i64);
        match p_series.valuation().filter(|&d| d <= bound) {
            None => Ok(HeightResult::AtLeastBound(bound)),
            Some(d) => {
                let mut q = d;
                let mut h = 0u32;
                while q % (p as u32) == 0 {
                    q /= p as u32;
                    h += 1;
                }
                if q != 1 || h == 0 {
                    return Err(Error::InvalidHeight { degree: d, p });
                }
                Ok(HeightResult::Finite { height: h, unit: p_series.coefficient(&[d]) })
            }
        }
    }

    /// The logarithm: the strict isomorphism from `F` to the additive law,
    /// computed as `l(x) = integral of dx / (dF/dy)(x, 0)` and verified by
    /// direct conjugation. Requires every arising integer division to
    /// succeed in the coefficient ring (always, over the rationals).
    pub fn logarithm(&self) -> Result<StrictIso, Error> {
        let ring = self.ring();
        let n = self.order();
        let x1 = TruncatedSeries::variable(ring, 1, 0, n)?;
        if n == 1 {
            return StrictIso::new(x1);
        }

        // dF/dy with the bare y term removed first, so no constant appears
        let y = TruncatedSeries::variable(ring, 2, 1, n)?;
        let dy = self.series.sub(&y)?.partial_derivative(1)?;

        // g(x) = (dF/dy)(x, 0) - 1, a univariate series of valuation >= 1
        let xm = TruncatedSeries::variable(ring, 1, 0, n - 1)?;
        let zero = TruncatedSeries::zero(ring, 1, n - 1);
        let g = dy.substitute(&[xm, zero])?;

        // 1 / (1 + g) = 1 + h by the geometric series
        let mut h = TruncatedSeries::zero(ring, 1, n - 1);
        let mut power = g.clone();
        let mut negate = true;
        for _ in 1..n {
            h = if negate { h.sub(&power)? } else { h.add(&power)? };
            negate = !negate;
            power = power.mul(&g)?;
            if power.is_zero() {
                break;
            }
        }

        let integral = h.integrate_univariate().map_err(|e| match e {
            Error::NotDivisible { degree, divisor } => Error::NeedsQAlgebra { degree, divisor },
            other => other,
        })?;
        let log = StrictIso::new(x1.add(&integral)?)?;

        // postcondition: conjugating by the logarithm yields the additive law
        if self.conjugate(&log)? != FormalGroupBud::additive(ring, n) {
            return Err(Error::Internal(
                "logarithm failed to linearize the formal group law".into(),
            ));
        }
        Ok(log)
    }
}

impl StrictIso {
    /// Certifies a univariate series with linear coefficient exactly 1.
    pub fn new(series: TruncatedSeries) -> Result<Self, Error> {
        if series.num_vars() != 1 {
            return Err(Error::ShapeMismatch(format!(
                "strict isomorphism must be univariate, got {} variables",
                series.num_vars()
            )));
        }
        if !series.coefficient(&[1]).is_one() {
            return Err(Error::InvalidArgument(format!(
                "strict isomorphism must have linear coefficient 1, got {}",
                series.coefficient(&[1])
            )));
        }
        Ok(StrictIso { series })
    }

    /// The identity `x`.
    pub fn identity(ring: RingDescriptor, precision: u32) -> Self {
        StrictIso {
            series: TruncatedSeries::variable(ring, 1, 0, precision).expect("one variable"),
        }
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    pub fn order(&self) -> u32 {
        self.series.precision()
    }

    pub fn ring(&self) -> RingDescriptor {
        self.series.ring()
    }

    /// Composition `self(other(x))`.
    pub fn compose(&self, other: &StrictIso) -> Result<StrictIso, Error> {
        let series = self.series.substitute(std::slice::from_ref(&other.series))?;
        StrictIso::new(series)
    }

    /// The group inverse under composition.
    pub fn invert(&self) -> Result<StrictIso, Error> {
        StrictIso::new(self.series.compositional_inverse()?)
    }
}

/// A random strict isomorphism: `x` plus random higher terms.
pub(crate) fn random_strict_iso<R: rand::Rng>(
    rng: &mut R,
    ring: RingDescriptor,
    precision: u32,
) -> StrictIso {
    let mut terms = vec![(vec![1u32], ring.one())];
    for d in 2..=precision {
        if rng.gen_bool(0.5) {
            terms.push((vec![d], crate::ring::random_element(rng, ring)));
        }
    }
    StrictIso::new(TruncatedSeries::from_terms(ring, 1, precision, terms).expect("terms in range"))
        .expect("leading coefficient is 1")
}

/// A seeded random bud over a finite ring, built from the additive law by
/// the extension tower: at each order the previous bud is extended one
/// degree (killing the associativity defect) and then perturbed by a random
/// multiple of the universal cocycle.
pub fn random_bud(seed: u64, ring: RingDescriptor, order: u32) -> Result<FormalGroupBud, Error> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut bud = FormalGroupBud::additive(ring, 1);
    for k in 2..=order {
        let extended = bud.extend()?;
        let b = crate::ring::random_element(&mut rng, ring);
        let cocycle = SymCocycle::new(
            crate::cocycle::universal_cocycle(ring, k)?.series().scalar_mul(&b)?,
        )?;
        bud = extended.add_cocycle(&cocycle)?;
    }
    Ok(bud)
}

impl FormalGroupBud {
    /// Extends a `(k-1)`-bud to some `k`-bud over a finite ring.
    ///
    /// Re-reading the same polynomial at the higher precision leaves a
    /// homogeneous degree-`k` associativity defect `D`; adding a symmetric
    /// degree-`k` correction `c` (with no pure powers) shifts the defect by
    /// `c(x,y) + c(x+y,z) - c(x,y+z) - c(y,z)`, which is linear in `c`. The
    /// finitely many candidate corrections are searched in a fixed order,
    /// so the extension is deterministic; one always exists.
    pub fn extend(&self) -> Result<FormalGroupBud, Error> {
        let ring = self.ring();
        let k = self.order() + 1;
        let elements = ring.enumerate_elements()?;
        let base = TruncatedSeries::from_terms(
            ring,
            2,
            k,
            self.series.terms().map(|(idx, c)| (idx.exponents().to_vec(), c.clone())),
        )?;

        // associativity defect of the bare polynomial at the new precision
        let x = TruncatedSeries::variable(ring, 3, 0, k)?;
        let z = TruncatedSeries::variable(ring, 3, 2, k)?;
        let left = base.substitute(&[base.embed(3, &[0, 1])?, z])?;
        let right = base.substitute(&[x, base.embed(3, &[1, 2])?])?;
        let defect = left.sub(&right)?;

        // defect response of each free symmetric correction coefficient
        let free = (k as usize) / 2;
        let mut responses = Vec::with_capacity(free);
        let mut basis = Vec::with_capacity(free);
        for i in 1..=free as u32 {
            let mut terms = vec![(vec![i, k - i], ring.one())];
            if 2 * i != k {
                terms.push((vec![k - i, i], ring.one()));
            }
            let gamma = TruncatedSeries::from_terms(ring, 2, k, terms)?;
            let x = TruncatedSeries::variable(ring, 3, 0, k)?;
            let y = TruncatedSeries::variable(ring, 3, 1, k)?;
            let z = TruncatedSeries::variable(ring, 3, 2, k)?;
            let shift = gamma
                .embed(3, &[0, 1])?
                .add(&gamma.substitute(&[x.add(&y)?, z.clone()])?)?
                .sub(&gamma.substitute(&[x, y.add(&z)?])?)?
                .sub(&gamma.embed(3, &[1, 2])?)?;
            responses.push(shift);
            basis.push(gamma);
        }

        let mut odometer = vec![0usize; free];
        loop {
            let mut total = defect.clone();
            for (i, response) in responses.iter().enumerate() {
                total = total.add(&response.scalar_mul(&elements[odometer[i]])?)?;
            }
            if total.is_zero() {
                let mut series = base;
                for (i, gamma) in basis.iter().enumerate() {
                    series = series.add(&gamma.scalar_mul(&elements[odometer[i]])?)?;
                }
                return FormalGroupBud::validate(series)
                    .map_err(|e| Error::Internal(format!("defect-free extension invalid: {e}")));
            }
            let mut pos = 0;
            while pos < free {
                odometer[pos] += 1;
                if odometer[pos] < elements.len() {
                    break;
                }
                odometer[pos] = 0;
                pos += 1;
            }
            if pos == free {
                return Err(Error::Internal(format!(
                    "no degree-{k} extension found; the input cannot be a genuine bud"
                )));
            }
        }
    }
}

impl Serialize for FormalGroupBud {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.series.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FormalGroupBud {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let series = TruncatedSeries::deserialize(deserializer)?;
        FormalGroupBud::validate(series).map_err(D::Error::custom)
    }
}

impl Serialize for StrictIso {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.series.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StrictIso {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let series = TruncatedSeries::deserialize(deserializer)?;
        StrictIso::new(series).map_err(D::Error::custom)
    }
}
