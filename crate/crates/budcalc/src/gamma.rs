//! Point-set values of the Gamma-rings `HZ` and `DB` at finite pointed sets.
//!
//! The pointed set `m+` is `{0, 1, ..., m}` with basepoint 0. `HZ(m+)` is
//! the free abelian group on the non-basepoint elements; `DB(m+)` is the
//! augmentation ideal of the (truncated) power series ring on variables
//! `x_1, ..., x_m`. The multiplication of `DB` substitutes one series into
//! the other in smash coordinates,
//!
//! ```text
//! mu(f /\ g) = f(g(x_{1,1}, ..., x_{1,n}), ..., g(x_{m,1}, ..., x_{m,n})),
//! ```
//!
//! with the pair `(i, j)` flattened to the single index `(i-1) n + j`. With
//! this convention the smash associator is the identity on indices, so
//! associativity of `mu` is a literal equality of series.
//!
//! A formal group bud `F` induces the map [`fstar`] from `HZ` to `DB`
//! sending `sum a_i . i` to the `F`-formal sum of the `[a_i]`-series of the
//! variables; [`check_fstar_homomorphism`] exercises its unit,
//! multiplicativity, naturality, and conjugation-equivariance properties on
//! seeded random instances, and [`check_gammaring_axioms`] does the same
//! for the Gamma-ring axioms of `DB` itself.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cocycle::binomial;
use crate::error::Error;
use crate::fgl::{random_strict_iso, FormalGroupBud, HeightResult, StrictIso};
use crate::ring::{random_element, RingDescriptor};
use crate::series::TruncatedSeries;

/// The finite pointed set `m+ = {0, 1, ..., m}` with basepoint 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PointedSet(pub usize);

impl PointedSet {
    /// Number of non-basepoint elements.
    pub fn size(&self) -> usize {
        self.0
    }
}

/// A basepoint-preserving map of pointed sets; only the images of the
/// non-basepoint elements are stored (0 is allowed as an image).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedMap {
    source: PointedSet,
    target: PointedSet,
    images: Vec<usize>,
}

impl PointedMap {
    pub fn new(source: PointedSet, target: PointedSet, images: Vec<usize>) -> Result<Self, Error> {
        if images.len() != source.size() {
            return Err(Error::ShapeMismatch(format!(
                "map from {}+ needs {} images, got {}",
                source.size(),
                source.size(),
                images.len()
            )));
        }
        if let Some(&bad) = images.iter().find(|&&v| v > target.size()) {
            return Err(Error::OutOfRange(format!(
                "image {bad} exceeds target size {}",
                target.size()
            )));
        }
        Ok(PointedMap { source, target, images })
    }

    pub fn identity(set: PointedSet) -> Self {
        PointedMap { source: set, target: set, images: (1..=set.size()).collect() }
    }

    /// The fold map `2+ -> 1+` sending both non-basepoint elements to 1.
    pub fn fold() -> Self {
        PointedMap { source: PointedSet(2), target: PointedSet(1), images: vec![1, 1] }
    }

    /// The map collapsing everything to the basepoint.
    pub fn collapse(source: PointedSet, target: PointedSet) -> Self {
        PointedMap { source, target, images: vec![0; source.size()] }
    }

    pub fn source(&self) -> PointedSet {
        self.source
    }

    pub fn target(&self) -> PointedSet {
        self.target
    }

    /// Image of element `i` (1-based; the basepoint 0 maps to 0).
    pub fn image(&self, i: usize) -> usize {
        if i == 0 {
            0
        } else {
            self.images[i - 1]
        }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }
}

/// Smash product `K /\ L` with the deterministic pairing
/// `(i, j) -> (i - 1) * |L| + j` on non-basepoint elements.
pub fn smash(k: PointedSet, l: PointedSet) -> PointedSet {
    PointedSet(k.size() * l.size())
}

/// Flat index of the pair `(i, j)` in `K /\ L` (all 1-based).
pub fn smash_index(i: usize, j: usize, l: PointedSet) -> usize {
    (i - 1) * l.size() + j
}

/// The smash product of two pointed maps, in flat coordinates.
pub fn smash_map(alpha: &PointedMap, beta: &PointedMap) -> PointedMap {
    let source = smash(alpha.source(), beta.source());
    let target = smash(alpha.target(), beta.target());
    let mut images = Vec::with_capacity(source.size());
    for i in 1..=alpha.source().size() {
        for j in 1..=beta.source().size() {
            let (a, b) = (alpha.image(i), beta.image(j));
            images.push(if a == 0 || b == 0 { 0 } else { smash_index(a, b, beta.target()) });
        }
    }
    PointedMap { source, target, images }
}

/// An element of `HZ(K)`: an integer vector indexed by the non-basepoint
/// elements of `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HZElement {
    set: PointedSet,
    coefficients: Vec<i64>,
}

impl HZElement {
    pub fn new(set: PointedSet, coefficients: Vec<i64>) -> Result<Self, Error> {
        if coefficients.len() != set.size() {
            return Err(Error::ShapeMismatch(format!(
                "HZ element on {}+ needs {} coefficients, got {}",
                set.size(),
                set.size(),
                coefficients.len()
            )));
        }
        Ok(HZElement { set, coefficients })
    }

    /// The generator `e_i` (1-based).
    pub fn generator(set: PointedSet, i: usize) -> Result<Self, Error> {
        if i == 0 || i > set.size() {
            return Err(Error::OutOfRange(format!(
                "generator index {i} outside 1..={}",
                set.size()
            )));
        }
        let mut coefficients = vec![0; set.size()];
        coefficients[i - 1] = 1;
        Ok(HZElement { set, coefficients })
    }

    /// Parses a comma-separated integer vector; the set size is the number
    /// of entries.
    pub fn parse_csv(s: &str) -> Result<Self, Error> {
        let coefficients: Result<Vec<i64>, _> =
            s.split(',').map(|part| part.trim().parse::<i64>()).collect();
        let coefficients = coefficients
            .map_err(|_| Error::InvalidArgument(format!("cannot parse {s:?} as integers")))?;
        Ok(HZElement { set: PointedSet(coefficients.len()), coefficients })
    }

    pub fn set(&self) -> PointedSet {
        self.set
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }
}

/// Pushforward along a pointed map: coefficients are summed over preimages;
/// anything hitting the basepoint is dropped.
pub fn hz_map(alpha: &PointedMap, a: &HZElement) -> Result<HZElement, Error> {
    if a.set != alpha.source() {
        return Err(Error::ShapeMismatch(format!(
            "element lives on {}+ but map starts at {}+",
            a.set.size(),
            alpha.source().size()
        )));
    }
    let mut coefficients = vec![0i64; alpha.target().size()];
    for i in 1..=a.set.size() {
        let j = alpha.image(i);
        if j != 0 {
            coefficients[j - 1] += a.coefficients[i - 1];
        }
    }
    Ok(HZElement { set: alpha.target(), coefficients })
}

/// The multiplication of `HZ`: `(sum a_i . i) /\ (sum b_j . j)` goes to
/// `sum a_i b_j . (i /\ j)`.
pub fn hz_mul(a: &HZElement, b: &HZElement) -> HZElement {
    let set = smash(a.set, b.set);
    let mut coefficients = Vec::with_capacity(set.size());
    for i in 1..=a.set.size() {
        for j in 1..=b.set.size() {
            coefficients.push(a.coefficients[i - 1] * b.coefficients[j - 1]);
        }
    }
    HZElement { set, coefficients }
}

/// An element of `DB(K)` (more precisely of its truncation `D_N B(K)`): a
/// series on one variable per non-basepoint element of `K`, at explicit
/// precision `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DBElement {
    set: PointedSet,
    series: TruncatedSeries,
}

impl DBElement {
    pub fn new(set: PointedSet, series: TruncatedSeries) -> Result<Self, Error> {
        if series.num_vars() != set.size() {
            return Err(Error::ShapeMismatch(format!(
                "series in {} variables on the pointed set {}+",
                series.num_vars(),
                set.size()
            )));
        }
        Ok(DBElement { set, series })
    }

    pub fn zero(ring: RingDescriptor, set: PointedSet, precision: u32) -> Self {
        DBElement { set, series: TruncatedSeries::zero(ring, set.size(), precision) }
    }

    pub fn set(&self) -> PointedSet {
        self.set
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    pub fn precision(&self) -> u32 {
        self.series.precision()
    }

    pub fn ring(&self) -> RingDescriptor {
        self.series.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.series.is_zero()
    }
}

impl Serialize for DBElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.series.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DBElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let series = TruncatedSeries::deserialize(deserializer)?;
        Ok(DBElement { set: PointedSet(series.num_vars()), series })
    }
}

/// The unit of `DB`: element `i` of `K` goes to the variable it represents.
pub fn db_unit(
    ring: RingDescriptor,
    set: PointedSet,
    i: usize,
    precision: u32,
) -> Result<DBElement, Error> {
    if i == 0 || i > set.size() {
        return Err(Error::OutOfRange(format!(
            "element index {i} outside 1..={}",
            set.size()
        )));
    }
    Ok(DBElement {
        set,
        series: TruncatedSeries::variable(ring, set.size(), i - 1, precision)?,
    })
}

/// Functoriality of `DB`: substitutes `x_i -> x_{alpha(i)}`, with the
/// basepoint killing the variable.
pub fn db_map(alpha: &PointedMap, f: &DBElement) -> Result<DBElement, Error> {
    if f.set != alpha.source() {
        return Err(Error::ShapeMismatch(format!(
            "element lives on {}+ but map starts at {}+",
            f.set.size(),
            alpha.source().size()
        )));
    }
    let ring = f.ring();
    let n = alpha.target().size();
    let precision = f.precision();
    let args: Result<Vec<_>, _> = (1..=f.set.size())
        .map(|i| match alpha.image(i) {
            0 => Ok(TruncatedSeries::zero(ring, n, precision)),
            j => TruncatedSeries::variable(ring, n, j - 1, precision),
        })
        .collect();
    Ok(DBElement { set: alpha.target(), series: f.series.substitute(&args?)? })
}

/// The Gamma-ring multiplication of `DB` by substitution in smash
/// coordinates: variable `i` of `f` receives `g` written in the variables
/// `x_{(i,1)}, ..., x_{(i,n)}`.
pub fn db_mul(f: &DBElement, g: &DBElement) -> Result<DBElement, Error> {
    if f.ring() != g.ring() || f.precision() != g.precision() {
        return Err(Error::ShapeMismatch(format!(
            "operands differ in ring or precision: {}@{} vs {}@{}",
            f.ring(),
            f.precision(),
            g.ring(),
            g.precision()
        )));
    }
    let (m, n) = (f.set.size(), g.set.size());
    let out_set = smash(f.set, g.set);
    if m == 0 || n == 0 {
        return Ok(DBElement::zero(f.ring(), out_set, f.precision()));
    }
    let args: Result<Vec<_>, _> = (0..m)
        .map(|i| {
            let var_map: Vec<usize> = (0..n).map(|j| i * n + j).collect();
            g.series.embed(out_set.size(), &var_map)
        })
        .collect();
    Ok(DBElement { set: out_set, series: f.series.substitute(&args?)? })
}

/// Truncation `D_N B -> D_k B`.
pub fn db_truncate(f: &DBElement, k: u32) -> Result<DBElement, Error> {
    Ok(DBElement { set: f.set, series: f.series.truncate(k)? })
}

/// The conjugation action of an invertible power series:
/// `c(phi)(f) = phi(f(phi^-1(x_1), ..., phi^-1(x_m)))`.
pub fn db_conjugate(phi: &StrictIso, f: &DBElement) -> Result<DBElement, Error> {
    if phi.order() != f.precision() || phi.ring() != f.ring() {
        return Err(Error::ShapeMismatch(format!(
            "isomorphism shape {}@{} does not match element {}@{}",
            phi.ring(),
            phi.order(),
            f.ring(),
            f.precision()
        )));
    }
    let m = f.set.size();
    let inv = phi.series().compositional_inverse()?;
    let args: Result<Vec<_>, _> = (0..m).map(|i| inv.embed(m, &[i])).collect();
    let inner = f.series.substitute(&args?)?;
    let outer = phi.series().substitute(std::slice::from_ref(&inner))?;
    Ok(DBElement { set: f.set, series: outer })
}

/// The Gamma-ring map induced by a formal group bud: `sum a_i . i` goes to
/// the `F`-formal sum of the series `[a_i]_F(x_i)`.
pub fn fstar(bud: &FormalGroupBud, a: &HZElement) -> Result<DBElement, Error> {
    let set = a.set();
    let precision = bud.order();
    let summands: Result<Vec<_>, Error> = (1..=set.size())
        .filter(|&i| a.coefficients[i - 1] != 0)
        .map(|i| bud.n_series(a.coefficients[i - 1]).embed(set.size(), &[i - 1]))
        .collect();
    let summands = summands?;
    if summands.is_empty() {
        return Ok(DBElement::zero(bud.ring(), set, precision));
    }
    Ok(DBElement { set, series: bud.formal_sum(&summands)? })
}

/// One graded piece of a `DB` element, written in the multiset basis of the
/// `k`-th symmetric power of the pointed set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeSlot {
    pub degree: u32,
    /// `C(m + k - 1, k)`: the number of size-`k` multisets of `{1..m}`.
    pub dimension: u64,
    /// Exponent vectors of the multiset basis, in the series' term order.
    pub basis: Vec<Vec<u32>>,
    /// Coefficient at each basis multiset (as strings, for JSON output).
    pub coefficients: Vec<String>,
}

/// Splits a `DB` element into its graded pieces, indexed by multisets: the
/// degree-`k` part of `DB(m+)` is the free module on the size-`k` multisets
/// of `{1, ..., m}`. The multiset count is asserted to match the dimension
/// `C(m + k - 1, k)` of the `k`-th symmetric power.
pub fn homogeneous_decomposition(f: &DBElement) -> Result<Vec<DegreeSlot>, Error> {
    let m = f.set.size();
    let mut slots = Vec::new();
    for k in 1..=f.precision() {
        let basis = exponent_vectors(m, k);
        let expected = binomial((m as u64) + (k as u64) - 1, k as u64);
        if num_bigint::BigInt::from(basis.len()) != expected {
            return Err(Error::Internal(format!(
                "degree-{k} multiset count {} differs from C({}, {k})",
                basis.len(),
                m + k as usize - 1
            )));
        }
        let coefficients = basis
            .iter()
            .map(|exp| f.series.coefficient(exp).to_string())
            .collect();
        slots.push(DegreeSlot { degree: k, dimension: basis.len() as u64, basis, coefficients });
    }
    Ok(slots)
}

/// All exponent vectors of total degree `k` in `m` variables, in the same
/// x0-major order the series use.
pub(crate) fn exponent_vectors(m: usize, k: u32) -> Vec<Vec<u32>> {
    fn fill(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, pos: usize, remaining: u32) {
        let len = current.len();
        if pos + 1 == len {
            current[pos] = remaining;
            out.push(current.clone());
            current[pos] = 0;
            return;
        }
        // descending leading exponent gives the series' term order directly
        for e in (0..=remaining).rev() {
            current[pos] = e;
            fill(out, current, pos + 1, remaining - e);
        }
        current[pos] = 0;
    }

    if m == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut current = vec![0u32; m];
    fill(&mut out, &mut current, 0, k);
    out
}

/// Checks `F*(p . x) = [p]_F(F*(x)) = 0 modulo degree p^h`: truncating
/// `fstar(F, p e_1)` at degree `p^h - 1` must vanish exactly when the
/// height of `F` is at least `h`. The two routes are cross-checked.
pub fn height_factorization_check(bud: &FormalGroupBud, h: u32) -> Result<bool, Error> {
    let ring = bud.ring();
    let p = ring
        .characteristic_prime()
        .ok_or_else(|| Error::WrongCharacteristic(ring.to_string()))?;
    if h < 1 {
        return Err(Error::InvalidArgument("height exponent h must be >= 1".into()));
    }
    let ph = p.checked_pow(h).filter(|&v| v <= bud.order() as u64).ok_or_else(|| {
        Error::OutOfRange(format!("p^h = {p}^{h} exceeds the bud order {}", bud.order()))
    })? as u32;

    let a = HZElement::new(PointedSet(1), vec![p as i64])?;
    let image = fstar(bud, &a)?;
    let vanishes = db_truncate(&image, ph - 1)?.is_zero();

    // cross-check against the direct height computation
    let expected = match bud.height(bud.order())? {
        HeightResult::Finite { height, .. } => height >= h,
        HeightResult::AtLeastBound(_) => true,
    };
    if vanishes != expected {
        return Err(Error::Internal(format!(
            "factorization check ({vanishes}) disagrees with height comparison ({expected})"
        )));
    }
    Ok(vanishes)
}

/// Outcome of a seeded randomized check suite. The seed is recorded so any
/// counterexample can be reproduced.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub seed: u64,
    pub trials: u32,
    pub checks_run: u64,
    pub failures: Vec<CheckFailure>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckFailure {
    pub trial: u32,
    pub check: String,
    pub detail: String,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

type MulOp<'a> = dyn Fn(&DBElement, &DBElement) -> Result<DBElement, Error> + 'a;

/// Randomized verification that `mu` and `eta` make `DB` a Gamma-ring:
/// associativity in flattened smash coordinates, left and right unit laws,
/// and naturality of `mu` against random pointed maps.
pub fn check_gammaring_axioms(
    ring: RingDescriptor,
    precision: u32,
    max_set_size: usize,
    trials: u32,
    seed: u64,
) -> Result<CheckReport, Error> {
    run_gammaring_axioms(&db_mul, ring, precision, max_set_size, trials, seed)
}

fn run_gammaring_axioms(
    mul: &MulOp<'_>,
    ring: RingDescriptor,
    precision: u32,
    max_set_size: usize,
    trials: u32,
    seed: u64,
) -> Result<CheckReport, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport { seed, trials, checks_run: 0, failures: Vec::new() };

    for trial in 0..trials {
        let k = PointedSet(rng.gen_range(1..=max_set_size));
        let l = PointedSet(rng.gen_range(1..=max_set_size));
        let q = PointedSet(rng.gen_range(1..=max_set_size));
        let f = random_db_element(&mut rng, ring, k, precision);
        let g = random_db_element(&mut rng, ring, l, precision);
        let h = random_db_element(&mut rng, ring, q, precision);

        // associativity (the flat smash pairing makes the associator the
        // identity on indices)
        let lhs = mul(&mul(&f, &g)?, &h)?;
        let rhs = mul(&f, &mul(&g, &h)?)?;
        report.checks_run += 1;
        if lhs != rhs {
            report.failures.push(CheckFailure {
                trial,
                check: "associativity".into(),
                detail: format!("f = {}, g = {}, h = {}", f.series, g.series, h.series),
            });
        }

        // unit laws under the smash unitors (identity on flat indices)
        let eta = db_unit(ring, PointedSet(1), 1, precision)?;
        report.checks_run += 2;
        if mul(&eta, &g)? != g {
            report.failures.push(CheckFailure {
                trial,
                check: "left unit".into(),
                detail: format!("g = {}", g.series),
            });
        }
        if mul(&f, &eta)? != f {
            report.failures.push(CheckFailure {
                trial,
                check: "right unit".into(),
                detail: format!("f = {}", f.series),
            });
        }

        // naturality of mu in both variables
        let k2 = PointedSet(rng.gen_range(1..=max_set_size));
        let l2 = PointedSet(rng.gen_range(1..=max_set_size));
        let alpha = random_pointed_map(&mut rng, k, k2);
        let beta = random_pointed_map(&mut rng, l, l2);
        let mapped_then_mul = mul(&db_map(&alpha, &f)?, &db_map(&beta, &g)?)?;
        let mul_then_mapped = db_map(&smash_map(&alpha, &beta), &mul(&f, &g)?)?;
        report.checks_run += 1;
        if mapped_then_mul != mul_then_mapped {
            report.failures.push(CheckFailure {
                trial,
                check: "naturality".into(),
                detail: format!(
                    "f = {}, g = {}, alpha = {:?}, beta = {:?}",
                    f.series, g.series, alpha.images, beta.images
                ),
            });
        }
    }
    Ok(report)
}

/// Randomized verification that `F*` is a map of Gamma-rings: (i) it
/// respects the units, (ii) it intertwines the multiplications, (iii) it is
/// natural in the pointed set, (iv) it is equivariant for conjugation by
/// strict isomorphisms, and (v) on `1+` it restricts to the n-series monoid
/// law `[n] o [m] = [nm]`.
pub fn check_fstar_homomorphism(
    bud: &FormalGroupBud,
    max_set_size: usize,
    trials: u32,
    seed: u64,
) -> Result<CheckReport, Error> {
    let ring = bud.ring();
    let precision = bud.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport { seed, trials, checks_run: 0, failures: Vec::new() };

    for trial in 0..trials {
        let k = PointedSet(rng.gen_range(1..=max_set_size));
        let l = PointedSet(rng.gen_range(1..=max_set_size));
        let a = random_hz_element(&mut rng, k);
        let b = random_hz_element(&mut rng, l);

        // (i) unit: generators go to generators
        let i = rng.gen_range(1..=k.size());
        report.checks_run += 1;
        if fstar(bud, &HZElement::generator(k, i)?)? != db_unit(ring, k, i, precision)? {
            report.failures.push(CheckFailure {
                trial,
                check: "unit".into(),
                detail: format!("generator {i} of {}+", k.size()),
            });
        }

        // (ii) multiplicativity
        let lhs = fstar(bud, &hz_mul(&a, &b))?;
        let rhs = db_mul(&fstar(bud, &a)?, &fstar(bud, &b)?)?;
        report.checks_run += 1;
        if lhs != rhs {
            report.failures.push(CheckFailure {
                trial,
                check: "multiplicativity".into(),
                detail: format!("a = {:?}, b = {:?}", a.coefficients, b.coefficients),
            });
        }

        // (iii) naturality
        let k2 = PointedSet(rng.gen_range(1..=max_set_size));
        let alpha = random_pointed_map(&mut rng, k, k2);
        let lhs = fstar(bud, &hz_map(&alpha, &a)?)?;
        let rhs = db_map(&alpha, &fstar(bud, &a)?)?;
        report.checks_run += 1;
        if lhs != rhs {
            report.failures.push(CheckFailure {
                trial,
                check: "naturality".into(),
                detail: format!("a = {:?}, alpha = {:?}", a.coefficients, alpha.images),
            });
        }

        // (iv) equivariance: (F^phi)* = phi . F* . phi^{-1}
        let phi = random_strict_iso(&mut rng, ring, precision);
        let lhs = fstar(&bud.conjugate(&phi)?, &a)?;
        let rhs = db_conjugate(&phi, &fstar(bud, &a)?)?;
        report.checks_run += 1;
        if lhs != rhs {
            report.failures.push(CheckFailure {
                trial,
                check: "equivariance".into(),
                detail: format!("a = {:?}, phi = {}", a.coefficients, phi.series()),
            });
        }

        // (v) the n-series monoid law on 1+
        let n = rng.gen_range(-4i64..=4);
        let m = rng.gen_range(-4i64..=4);
        let composed = bud
            .n_series(n)
            .substitute(std::slice::from_ref(&bud.n_series(m)))?;
        report.checks_run += 1;
        if composed != bud.n_series(n * m) {
            report.failures.push(CheckFailure {
                trial,
                check: "n-series monoid".into(),
                detail: format!("n = {n}, m = {m}"),
            });
        }
    }
    Ok(report)
}

fn random_db_element(
    rng: &mut ChaCha8Rng,
    ring: RingDescriptor,
    set: PointedSet,
    precision: u32,
) -> DBElement {
    let m = set.size();
    let num_terms = rng.gen_range(0..=4);
    let mut terms = Vec::with_capacity(num_terms);
    for _ in 0..num_terms {
        // a random exponent vector of total degree in 1..=precision
        let degree = rng.gen_range(1..=precision);
        let mut exp = vec![0u32; m];
        for _ in 0..degree {
            exp[rng.gen_range(0..m)] += 1;
        }
        terms.push((exp, random_element(rng, ring)));
    }
    DBElement {
        set,
        series: TruncatedSeries::from_terms(ring, m, precision, terms)
            .expect("generated terms are in range"),
    }
}

fn random_hz_element(rng: &mut ChaCha8Rng, set: PointedSet) -> HZElement {
    let coefficients = (0..set.size()).map(|_| rng.gen_range(-3..=3)).collect();
    HZElement { set, coefficients }
}

fn random_pointed_map(rng: &mut ChaCha8Rng, source: PointedSet, target: PointedSet) -> PointedMap {
    let images = (0..source.size())
        .map(|_| rng.gen_range(0..=target.size()))
        .collect();
    PointedMap { source, target, images }
}
