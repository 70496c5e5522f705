//! Homogeneous symmetric 2-cocycles of degree `k`.
//!
//! A degree-`k` symmetric 2-cocycle over a ring `B` is a homogeneous
//! polynomial `c(x, y)` of degree `k` with
//!
//! ```text
//! c(x, y) = c(y, x)        and        c(x, y) + c(x + y, z) = c(x, y + z) + c(y, z).
//! ```
//!
//! These control which `(k-1)`-buds of formal group laws extend to `k`-buds.
//! The classification is classical: with `d_k` the greatest common divisor of
//! the binomial coefficients `C(k, i)` for `0 < i < k`, the polynomial
//!
//! ```text
//! c_k(x, y) = (x^k + y^k - (x + y)^k) / d_k
//! ```
//!
//! has integer coefficients, and every degree-`k` symmetric 2-cocycle over
//! `B` is `b * c_k` for some `b` in `B`. [`classify_cocycles`] does not
//! assume this: it enumerates all candidates over a finite ring by brute
//! force and asserts that the result coincides with the multiples of `c_k`.
//!
//! ```
//! use budcalc::cocycle::universal_cocycle;
//! use budcalc::ring::RingDescriptor;
//!
//! let c2 = universal_cocycle(RingDescriptor::Integers, 2).unwrap();
//! assert_eq!(c2.series().to_string(), "-x0*x1");
//! ```

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::ring::{RingDescriptor, RingElement};
use crate::series::TruncatedSeries;

/// A certified homogeneous symmetric 2-cocycle of degree `k >= 2`,
/// represented as a 2-variable series at precision `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymCocycle {
    series: TruncatedSeries,
}

/// Names the first cocycle condition a candidate fails, with a witness
/// monomial of the discrepancy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleFailure {
    pub condition: &'static str,
    pub monomial: String,
}

impl SymCocycle {
    /// Certifies a candidate series as a symmetric 2-cocycle.
    ///
    /// The series must be 2-variable of precision `k >= 2` and homogeneous
    /// of degree exactly `k`; the symmetry and cocycle identities are
    /// checked exactly.
    pub fn new(series: TruncatedSeries) -> Result<Self, Error> {
        let k = series.precision();
        match check_symmetric_cocycle(&series, k)? {
            None => Ok(SymCocycle { series }),
            Some(failure) => Err(Error::NotACocycle {
                condition: failure.condition,
                monomial: failure.monomial,
            }),
        }
    }

    /// The zero cocycle of degree `k`.
    pub fn zero(ring: RingDescriptor, k: u32) -> Result<Self, Error> {
        SymCocycle::new(TruncatedSeries::zero(ring, 2, k))
    }

    pub fn degree(&self) -> u32 {
        self.series.precision()
    }

    pub fn ring(&self) -> RingDescriptor {
        self.series.ring()
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    pub fn is_zero(&self) -> bool {
        self.series.is_zero()
    }

    pub fn add(&self, other: &SymCocycle) -> Result<SymCocycle, Error> {
        Ok(SymCocycle { series: self.series.add(&other.series)? })
    }

    /// The coefficients `a_1, ..., a_{k-1}` of `x^i y^{k-i}`.
    pub fn coefficient_vector(&self) -> Vec<RingElement> {
        let k = self.degree();
        (1..k).map(|i| self.series.coefficient(&[i, k - i])).collect()
    }
}

/// Checks the symmetric 2-cocycle conditions for a homogeneous candidate.
///
/// Returns `Ok(None)` when both conditions hold, `Ok(Some(failure))` naming
/// the first violated condition, and a shape error when the input is not a
/// 2-variable series homogeneous of degree `k` at precision `k`.
pub fn check_symmetric_cocycle(
    series: &TruncatedSeries,
    k: u32,
) -> Result<Option<CocycleFailure>, Error> {
    if series.num_vars() != 2 {
        return Err(Error::ShapeMismatch(format!(
            "cocycle must be a 2-variable series, got {}",
            series.num_vars()
        )));
    }
    if k < 2 {
        return Err(Error::ShapeMismatch(format!("cocycle degree must be >= 2, got {k}")));
    }
    if series.precision() != k {
        return Err(Error::ShapeMismatch(format!(
            "cocycle of degree {k} must have precision {k}, got {}",
            series.precision()
        )));
    }
    if !series.is_homogeneous_of_degree(k) {
        return Err(Error::ShapeMismatch(format!(
            "cocycle candidate is not homogeneous of degree {k}"
        )));
    }

    // symmetry: c(x, y) = c(y, x)
    for (idx, coef) in series.terms() {
        let e = idx.exponents();
        let swapped = [e[1], e[0]];
        if series.coefficient(&swapped) != *coef {
            return Ok(Some(CocycleFailure {
                condition: "symmetry",
                monomial: format!("x^{}*y^{}", e[0], e[1]),
            }));
        }
    }

    // cocycle identity: c(x,y) + c(x+y,z) = c(x,y+z) + c(y,z) in three variables
    let ring = series.ring();
    let x = TruncatedSeries::variable(ring, 3, 0, k)?;
    let y = TruncatedSeries::variable(ring, 3, 1, k)?;
    let z = TruncatedSeries::variable(ring, 3, 2, k)?;
    let lhs = series
        .embed(3, &[0, 1])?
        .add(&series.substitute(&[x.add(&y)?, z.clone()])?)?;
    let rhs = series
        .substitute(&[x, y.add(&z)?])?
        .add(&series.embed(3, &[1, 2])?)?;
    let diff = lhs.sub(&rhs)?;
    if let Some((idx, _)) = diff.terms().next() {
        let e = idx.exponents();
        return Ok(Some(CocycleFailure {
            condition: "cocycle identity",
            monomial: format!("x^{}*y^{}*z^{}", e[0], e[1], e[2]),
        }));
    }
    Ok(None)
}

/// The binomial coefficient `C(n, k)` in arbitrary precision.
pub fn binomial(n: u64, k: u64) -> BigInt {
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

/// `d_k`: the greatest common divisor of `C(k, i)` for `1 <= i <= k-1`.
///
/// Evaluates to `p` when `k = p^h` is a prime power and to 1 otherwise.
pub fn binomial_gcd(k: u32) -> BigInt {
    assert!(k >= 2, "d_k is defined for k >= 2");
    let mut g = BigInt::zero();
    for i in 1..k {
        g = g.gcd(&binomial(k as u64, i as u64));
        if g.is_one() {
            break;
        }
    }
    g
}

/// Lazard's universal cocycle `c_k = (x^k + y^k - (x+y)^k) / d_k`, with its
/// integer coefficients `-C(k,i)/d_k` mapped into the given ring.
pub fn universal_cocycle(ring: RingDescriptor, k: u32) -> Result<SymCocycle, Error> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("cocycle degree must be >= 2, got {k}")));
    }
    let d = binomial_gcd(k);
    let mut terms = Vec::new();
    for i in 1..k {
        let (q, r) = binomial(k as u64, i as u64).div_rem(&d);
        debug_assert!(r.is_zero(), "d_k divides every interior binomial coefficient");
        terms.push((vec![i, k - i], ring.from_bigint(-q)));
    }
    SymCocycle::new(TruncatedSeries::from_terms(ring, 2, k, terms)?)
}

/// The principal cocycle `theta(b) = b * (x^k + y^k - (x+y)^k)`.
pub fn principal_cocycle(b: &RingElement, k: u32) -> Result<SymCocycle, Error> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("cocycle degree must be >= 2, got {k}")));
    }
    let ring = b.ring();
    let mut terms = Vec::new();
    for i in 1..k {
        let c = ring.from_bigint(-binomial(k as u64, i as u64));
        terms.push((vec![i, k - i], b.mul(&c)?));
    }
    SymCocycle::new(TruncatedSeries::from_terms(ring, 2, k, terms)?)
}

/// Enumerates every degree-`k` symmetric 2-cocycle over a finite ring by
/// brute force, and asserts that the result is exactly the set of multiples
/// `b * c_k` of the universal cocycle.
///
/// Symmetry and the forced vanishing of the `x^k` and `y^k` coefficients are
/// imposed up front, so the search runs over the `floor(k/2)` free
/// coefficients `a_1, ..., a_{floor(k/2)}` (with `a_{k-i} = a_i`). The
/// search size must stay within `budget`.
///
/// The returned list is sorted by coefficient vector.
pub fn classify_cocycles(
    ring: RingDescriptor,
    k: u32,
    budget: u128,
) -> Result<Vec<SymCocycle>, Error> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("cocycle degree must be >= 2, got {k}")));
    }
    let n = ring
        .size()
        .ok_or_else(|| Error::NotEnumerable(ring.to_string()))?;
    let free = (k as usize) / 2;
    let size = (n as u128).saturating_pow(free as u32);
    if size > budget {
        return Err(Error::BudgetExceeded { size, budget });
    }

    let elements = ring.enumerate_elements()?;
    let mut found = Vec::new();
    let mut odometer = vec![0usize; free];
    loop {
        // a_i = elements[odometer[i-1]], mirrored onto a_{k-i}
        let mut terms = Vec::new();
        for i in 1..=free as u32 {
            let a = elements[odometer[(i - 1) as usize]].clone();
            if 2 * i == k {
                terms.push((vec![i, i], a));
            } else {
                terms.push((vec![i, k - i], a.clone()));
                terms.push((vec![k - i, i], a));
            }
        }
        let candidate = TruncatedSeries::from_terms(ring, 2, k, terms)?;
        if check_symmetric_cocycle(&candidate, k)?.is_none() {
            found.push(SymCocycle { series: candidate });
        }

        // next odometer position
        let mut pos = 0;
        while pos < free {
            odometer[pos] += 1;
            if odometer[pos] < n as usize {
                break;
            }
            odometer[pos] = 0;
            pos += 1;
        }
        if pos == free {
            break;
        }
    }

    // the empirical check of Lazard's classification
    let ck = universal_cocycle(ring, k)?;
    let mut expected = BTreeSet::new();
    for b in &elements {
        expected.insert(SymCocycle { series: ck.series.scalar_mul(b)? }.coefficient_vector());
    }
    let got: BTreeSet<_> = found.iter().map(|c| c.coefficient_vector()).collect();
    if got != expected {
        let witness = got
            .symmetric_difference(&expected)
            .next()
            .map(|v| {
                v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
            })
            .unwrap_or_default();
        return Err(Error::Internal(format!(
            "brute-force cocycles over {ring} at degree {k} differ from the multiples of c_k; \
             witness coefficient vector [{witness}]"
        )));
    }

    found.sort_by_key(|c| c.coefficient_vector());
    Ok(found)
}

/// Component count and morphism data of the groupoid of degree-`k` cocycles
/// over a finite ring: objects are cocycles, and `b : c -> c'` whenever
/// `c' = c + theta(b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupoidInvariants {
    /// Number of orbits of the translation action of `theta`.
    pub pi0_size: u64,
    /// Order of the stabilizer `{b : theta(b) = 0} = {b : d_k b = 0}`,
    /// the fundamental group at every basepoint.
    pub stabilizer_size: u64,
}

/// Computes the groupoid invariants by brute force and cross-checks them
/// against the closed form: for `k = p^h` the components biject with
/// `B / pB` and the stabilizer is `{b : pb = 0}`; for `k` not a prime power
/// the groupoid is connected.
pub fn groupoid_invariants(
    ring: RingDescriptor,
    k: u32,
    budget: u128,
) -> Result<GroupoidInvariants, Error> {
    let cocycles = classify_cocycles(ring, k, budget)?;
    let elements = ring.enumerate_elements()?;
    let n = elements.len() as u64;

    let mut theta_image = BTreeSet::new();
    let mut stabilizer_size = 0u64;
    for b in &elements {
        let theta_b = principal_cocycle(b, k)?;
        if theta_b.is_zero() {
            stabilizer_size += 1;
        }
        theta_image.insert(theta_b.coefficient_vector());
    }
    let image_size = theta_image.len() as u64;
    let count = cocycles.len() as u64;
    if !count.is_multiple_of(image_size) {
        return Err(Error::Internal(format!(
            "theta-image size {image_size} does not divide cocycle count {count}"
        )));
    }
    let pi0_size = count / image_size;

    // cross-check against the closed form from the classification
    let d = binomial_gcd(k);
    if d.is_one() {
        if pi0_size != 1 {
            return Err(Error::Internal(format!(
                "k = {k} is not a prime power but pi0 = {pi0_size}"
            )));
        }
    } else {
        let p = i64::try_from(&d).expect("d_k is a small prime");
        let p_multiples: BTreeSet<_> = elements.iter().map(|b| b.mul_i64(p)).collect();
        let b_mod_pb = n / p_multiples.len() as u64;
        let p_torsion = elements.iter().filter(|b| b.mul_i64(p).is_zero()).count() as u64;
        if pi0_size != b_mod_pb || stabilizer_size != p_torsion {
            return Err(Error::Internal(format!(
                "groupoid invariants over {ring} at k = {k}: brute force gives \
                 (pi0, stab) = ({pi0_size}, {stabilizer_size}), closed form gives \
                 ({b_mod_pb}, {p_torsion})"
            )));
        }
    }

    Ok(GroupoidInvariants { pi0_size, stabilizer_size })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minus_xy_is_a_cocycle() {
        for ring in [RingDescriptor::Integers, RingDescriptor::Mod(6), RingDescriptor::Rationals] {
            let c =
                TruncatedSeries::from_terms(ring, 2, 2, [(vec![1, 1], ring.from_i64(-1))]).unwrap();
            assert_eq!(check_symmetric_cocycle(&c, 2).unwrap(), None);
        }
    }

    #[test]
    fn degree_three_cocycles() {
        let z = RingDescriptor::Integers;
        let c3 = universal_cocycle(z, 3).unwrap();
        // d_3 = 3, so c_3 = -(x^2 y + x y^2)
        assert_eq!(c3.series().to_string(), "-x0^2*x1 - x0*x1^2");

        // x^2 y + x y^2 = (-1) * c_3 is again a cocycle
        let c = TruncatedSeries::from_terms(z, 2, 3, [(vec![2, 1], z.one()), (vec![1, 2], z.one())])
            .unwrap();
        assert_eq!(check_symmetric_cocycle(&c, 3).unwrap(), None);
    }

    #[test]
    fn wrong_degree_is_shape_error() {
        let z = RingDescriptor::Integers;
        let xy = TruncatedSeries::from_terms(z, 2, 3, [(vec![1, 1], z.one())]).unwrap();
        assert!(matches!(check_symmetric_cocycle(&xy, 3), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn asymmetric_candidate_fails_symmetry() {
        let z = RingDescriptor::Integers;
        let c = TruncatedSeries::from_terms(z, 2, 2, [(vec![2, 0], z.one())]).unwrap();
        let failure = check_symmetric_cocycle(&c, 2).unwrap().unwrap();
        assert_eq!(failure.condition, "symmetry");
    }

    #[test]
    fn symmetric_non_cocycle_fails_identity() {
        let z = RingDescriptor::Integers;
        // x^2 + y^2 is symmetric but fails the three-variable identity
        let c = TruncatedSeries::from_terms(z, 2, 2, [(vec![2, 0], z.one()), (vec![0, 2], z.one())])
            .unwrap();
        let failure = check_symmetric_cocycle(&c, 2).unwrap().unwrap();
        assert_eq!(failure.condition, "cocycle identity");
    }

    #[test]
    fn binomial_gcd_small_values() {
        assert_eq!(binomial_gcd(2), BigInt::from(2));
        assert_eq!(binomial_gcd(3), BigInt::from(3));
        assert_eq!(binomial_gcd(4), BigInt::from(2));
        assert_eq!(binomial_gcd(6), BigInt::from(1));
        assert_eq!(binomial_gcd(9), BigInt::from(3));
    }

    #[test]
    fn universal_cocycle_examples() {
        let z = RingDescriptor::Integers;
        assert_eq!(universal_cocycle(z, 2).unwrap().series().to_string(), "-x0*x1");

        // over Z/2 at k = 4 the coefficients -C(4,i)/2 = (-2, -3, -2) reduce
        // to (0, 1, 0), leaving only the middle term
        let z2 = RingDescriptor::Mod(2);
        let c4 = universal_cocycle(z2, 4).unwrap();
        assert_eq!(c4.series().to_string(), "x0^2*x1^2");
    }

    #[test]
    fn universal_cocycle_matches_expansion_oracle() {
        // oracle: expand (x^k + y^k - (x+y)^k) over Z, divide by d_k, then
        // map into the target ring
        for ring in [RingDescriptor::Mod(2), RingDescriptor::Mod(6), RingDescriptor::Integers] {
            for k in 2..=8u32 {
                let d = binomial_gcd(k);
                let z = RingDescriptor::Integers;
                let x = TruncatedSeries::variable(z, 2, 0, k).unwrap();
                let y = TruncatedSeries::variable(z, 2, 1, k).unwrap();
                let sum_pow = x.add(&y).unwrap().pow(k).unwrap();
                let numerator =
                    x.pow(k).unwrap().add(&y.pow(k).unwrap()).unwrap().sub(&sum_pow).unwrap();
                let expected: Vec<RingElement> = (1..k)
                    .map(|i| {
                        let c = numerator.coefficient(&[i, k - i]).to_bigint().unwrap();
                        let (q, r) = c.div_rem(&d);
                        assert!(r.is_zero());
                        ring.from_bigint(q)
                    })
                    .collect();
                let ck = universal_cocycle(ring, k).unwrap();
                assert_eq!(ck.coefficient_vector(), expected, "{ring} k={k}");
            }
        }
    }

    #[test]
    fn principal_cocycle_examples() {
        let z4 = RingDescriptor::Mod(4);
        assert!(principal_cocycle(&z4.zero(), 5).unwrap().is_zero());

        // theta(1) at k = 2 is -2xy = 2xy over Z/4
        let theta = principal_cocycle(&z4.one(), 2).unwrap();
        assert_eq!(theta.series().to_string(), "2*x0*x1");
    }

    #[test]
    fn principal_is_additive_in_b() {
        let z6 = RingDescriptor::Mod(6);
        for k in [2u32, 3, 4] {
            for b1 in 0..6 {
                for b2 in 0..6 {
                    let t1 = principal_cocycle(&z6.from_i64(b1), k).unwrap();
                    let t2 = principal_cocycle(&z6.from_i64(b2), k).unwrap();
                    let sum = principal_cocycle(&z6.from_i64(b1 + b2), k).unwrap();
                    assert_eq!(t1.add(&t2).unwrap(), sum);
                }
            }
        }
    }

    #[test]
    fn theta_is_dk_times_universal() {
        for ring in [RingDescriptor::Mod(4), RingDescriptor::Mod(6)] {
            for k in 2..=6u32 {
                let dk = i64::try_from(&binomial_gcd(k)).unwrap();
                let ck = universal_cocycle(ring, k).unwrap();
                for b in ring.enumerate_elements().unwrap() {
                    let theta = principal_cocycle(&b, k).unwrap();
                    let scaled = ck.series().scalar_mul(&b.mul_i64(dk)).unwrap();
                    assert_eq!(theta.series(), &scaled);
                }
            }
        }
    }

    #[test]
    fn classify_mod_two_degree_two() {
        let z2 = RingDescriptor::Mod(2);
        let cocycles = classify_cocycles(z2, 2, 1 << 20).unwrap();
        assert_eq!(cocycles.len(), 2);
        assert!(cocycles[0].is_zero());
        assert_eq!(cocycles[1].series().to_string(), "x0*x1");
    }

    #[test]
    fn classify_mod_four_degree_two() {
        let z4 = RingDescriptor::Mod(4);
        let cocycles = classify_cocycles(z4, 2, 1 << 20).unwrap();
        assert_eq!(cocycles.len(), 4);
    }

    #[test]
    fn classify_mod_three_degree_four() {
        // d_4 = 2 is invertible mod 3, so the multiples of c_4 are 3 distinct
        // cocycles
        let z3 = RingDescriptor::Mod(3);
        let cocycles = classify_cocycles(z3, 4, 1 << 20).unwrap();
        assert_eq!(cocycles.len(), 3);
    }

    #[test]
    fn classification_is_a_group() {
        let z6 = RingDescriptor::Mod(6);
        let cocycles = classify_cocycles(z6, 4, 1 << 20).unwrap();
        let vectors: BTreeSet<_> = cocycles.iter().map(|c| c.coefficient_vector()).collect();
        for a in &cocycles {
            for b in &cocycles {
                let sum = a.add(b).unwrap();
                assert!(vectors.contains(&sum.coefficient_vector()));
            }
            // closed under theta-translation
            for b in z6.enumerate_elements().unwrap() {
                let shifted = a.add(&principal_cocycle(&b, 4).unwrap()).unwrap();
                assert!(vectors.contains(&shifted.coefficient_vector()));
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            classify_cocycles(RingDescriptor::Mod(6), 6, 10),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            classify_cocycles(RingDescriptor::Integers, 2, 1 << 20),
            Err(Error::NotEnumerable(_))
        ));
    }

    #[test]
    fn invariants_mod_four_degree_two() {
        let inv = groupoid_invariants(RingDescriptor::Mod(4), 2, 1 << 20).unwrap();
        assert_eq!(inv, GroupoidInvariants { pi0_size: 2, stabilizer_size: 2 });
    }

    #[test]
    fn invariants_mod_three_degree_two() {
        let inv = groupoid_invariants(RingDescriptor::Mod(3), 2, 1 << 20).unwrap();
        assert_eq!(inv, GroupoidInvariants { pi0_size: 1, stabilizer_size: 1 });
    }

    #[test]
    fn invariants_non_prime_power() {
        let inv = groupoid_invariants(RingDescriptor::Mod(6), 6, 1 << 20).unwrap();
        assert_eq!(inv.pi0_size, 1);
    }

    #[test]
    fn orbit_stabilizer_identity() {
        for ring in [RingDescriptor::Mod(2), RingDescriptor::Mod(4), RingDescriptor::Mod(6)] {
            for k in 2..=5u32 {
                let cocycles = classify_cocycles(ring, k, 1 << 20).unwrap();
                let inv = groupoid_invariants(ring, k, 1 << 20).unwrap();
                let n = ring.size().unwrap();
                assert_eq!(
                    inv.pi0_size * (n / inv.stabilizer_size),
                    cocycles.len() as u64,
                    "{ring} k={k}"
                );
            }
        }
    }

    #[test]
    fn ck_principal_iff_dk_unit() {
        // there is b with theta(b) = c_k exactly when d_k b = 1 is solvable
        for ring in [RingDescriptor::Mod(2), RingDescriptor::Mod(3), RingDescriptor::Mod(6)] {
            for k in 2..=6u32 {
                let dk = i64::try_from(&binomial_gcd(k)).unwrap();
                let ck = universal_cocycle(ring, k).unwrap();
                let principal = ring
                    .enumerate_elements()
                    .unwrap()
                    .iter()
                    .any(|b| principal_cocycle(b, k).unwrap() == ck);
                let dk_unit = ring.from_i64(dk).try_invert().is_some();
                assert_eq!(principal, dk_unit, "{ring} k={k}");
            }
        }
    }
}
