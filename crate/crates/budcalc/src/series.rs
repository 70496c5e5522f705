//! Truncated multivariate power series with exact coefficients.
//!
//! A [`TruncatedSeries`] is a sparse polynomial representative of a power
//! series modulo degree `N + 1`, where `N` is the series' explicit
//! *precision*. Every series lives in the augmentation ideal: constant terms
//! are identically zero by construction. This makes substitution total and
//! exact — substituting series of valuation at least one into a monomial of
//! degree `d` only produces terms of degree at least `d`, so truncation
//! never feeds discarded terms back into retained ones.
//!
//! Binary operations demand equal ring, variable count, and precision, and
//! fail loudly otherwise; [`TruncatedSeries::truncate`] is the only coercion.
//!
//! ```
//! use budcalc::ring::RingDescriptor;
//! use budcalc::series::TruncatedSeries;
//!
//! let z = RingDescriptor::Integers;
//! let x = TruncatedSeries::variable(z, 2, 0, 2).unwrap();
//! let y = TruncatedSeries::variable(z, 2, 1, 2).unwrap();
//! let s = x.add(&y).unwrap();
//! // (x + y)^2 = x^2 + 2xy + y^2
//! assert_eq!(s.mul(&s).unwrap().to_string(), "x0^2 + 2*x0*x1 + x1^2");
//! ```

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::ring::{RingDescriptor, RingElement};

/// Exponent vector of a monomial. Ordered by total degree first, then
/// lexicographically (graded-lexicographic order).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn num_vars(&self) -> usize {
        self.0.len()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        // graded order: by total degree, then x0-major within a degree
        // (reverse lexicographic on exponent vectors)
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A multivariate power series truncated at an explicit precision.
///
/// Invariants, maintained by every constructor and operation:
/// - every stored exponent vector has length `num_vars` and total degree
///   between 1 and `precision`;
/// - no stored coefficient is zero;
/// - all coefficients belong to `ring`.
///
/// Two series are equal iff ring, variable count, precision, and term maps
/// agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    ring: RingDescriptor,
    num_vars: usize,
    precision: u32,
    terms: BTreeMap<MultiIndex, RingElement>,
}

impl TruncatedSeries {
    /// The zero series of the given shape.
    pub fn zero(ring: RingDescriptor, num_vars: usize, precision: u32) -> Self {
        assert!(precision >= 1, "precision must be at least 1");
        TruncatedSeries {
            ring,
            num_vars,
            precision,
            terms: BTreeMap::new(),
        }
    }

    /// The series `x_i` (zero-based variable index).
    pub fn variable(
        ring: RingDescriptor,
        num_vars: usize,
        index: usize,
        precision: u32,
    ) -> Result<Self, Error> {
        if index >= num_vars {
            return Err(Error::OutOfRange(format!(
                "variable index {index} out of range for {num_vars} variables"
            )));
        }
        let mut exp = vec![0u32; num_vars];
        exp[index] = 1;
        let mut s = TruncatedSeries::zero(ring, num_vars, precision);
        s.terms.insert(MultiIndex(exp), ring.one());
        Ok(s)
    }

    /// Builds a series from explicit terms, validating the invariants.
    /// Duplicate exponent vectors are summed.
    pub fn from_terms(
        ring: RingDescriptor,
        num_vars: usize,
        precision: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, RingElement)>,
    ) -> Result<Self, Error> {
        if precision < 1 {
            return Err(Error::ShapeMismatch("precision must be at least 1".into()));
        }
        let mut map: BTreeMap<MultiIndex, RingElement> = BTreeMap::new();
        for (exp, coef) in terms {
            if exp.len() != num_vars {
                return Err(Error::ShapeMismatch(format!(
                    "exponent vector of length {} in a {num_vars}-variable series",
                    exp.len()
                )));
            }
            if coef.ring() != ring {
                return Err(Error::RingMismatch(ring.to_string(), coef.ring().to_string()));
            }
            let idx = MultiIndex(exp);
            let deg = idx.total_degree();
            if deg == 0 {
                return Err(Error::ShapeMismatch(
                    "constant terms are not representable (augmentation ideal)".into(),
                ));
            }
            if deg > precision {
                return Err(Error::ShapeMismatch(format!(
                    "term of degree {deg} exceeds precision {precision}"
                )));
            }
            match map.entry(idx) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(coef);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let sum = e.get().add(&coef)?;
                    e.insert(sum);
                }
            }
        }
        map.retain(|_, c| !c.is_zero());
        Ok(TruncatedSeries { ring, num_vars, precision, terms: map })
    }

    pub fn ring(&self) -> RingDescriptor {
        self.ring
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates over the terms in graded-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &RingElement)> {
        self.terms.iter()
    }

    /// The coefficient at an exponent vector (zero if absent).
    pub fn coefficient(&self, exponents: &[u32]) -> RingElement {
        self.terms
            .get(&MultiIndex(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    /// Lowest total degree carrying a nonzero term.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().map(|idx| idx.total_degree()).min()
    }

    fn same_shape(&self, other: &TruncatedSeries) -> Result<(), Error> {
        if self.ring != other.ring {
            return Err(Error::ShapeMismatch(format!(
                "rings differ: {} vs {}",
                self.ring, other.ring
            )));
        }
        if self.num_vars != other.num_vars {
            return Err(Error::ShapeMismatch(format!(
                "variable counts differ: {} vs {}",
                self.num_vars, other.num_vars
            )));
        }
        if self.precision != other.precision {
            return Err(Error::ShapeMismatch(format!(
                "precisions differ: {} vs {}",
                self.precision, other.precision
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, Error> {
        self.same_shape(other)?;
        let mut terms = self.terms.clone();
        for (idx, coef) in &other.terms {
            match terms.entry(idx.clone()) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(coef.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let sum = e.get().add(coef)?;
                    if sum.is_zero() {
                        e.remove();
                    } else {
                        e.insert(sum);
                    }
                }
            }
        }
        Ok(TruncatedSeries { terms, ..self.clone() })
    }

    pub fn neg(&self) -> TruncatedSeries {
        let terms = self
            .terms
            .iter()
            .map(|(idx, coef)| (idx.clone(), coef.neg()))
            .collect();
        TruncatedSeries { terms, ..self.clone() }
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, Error> {
        self.add(&other.neg())
    }

    /// Product, with all terms of total degree above the precision discarded.
    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, Error> {
        self.same_shape(other)?;
        let mut terms: BTreeMap<MultiIndex, RingElement> = BTreeMap::new();
        for (ia, ca) in &self.terms {
            let da = ia.total_degree();
            if da >= self.precision {
                // da + db > precision for every db >= 1
                continue;
            }
            for (ib, cb) in &other.terms {
                if da + ib.total_degree() > self.precision {
                    continue;
                }
                let exp: Vec<u32> = ia.0.iter().zip(&ib.0).map(|(a, b)| a + b).collect();
                let prod = ca.mul(cb)?;
                let idx = MultiIndex(exp);
                match terms.entry(idx) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let sum = e.get().add(&prod)?;
                        e.insert(sum);
                    }
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(TruncatedSeries { terms, ..self.clone() })
    }

    /// Multiplies every coefficient by a ring scalar.
    pub fn scalar_mul(&self, scalar: &RingElement) -> Result<TruncatedSeries, Error> {
        if scalar.ring() != self.ring {
            return Err(Error::RingMismatch(
                self.ring.to_string(),
                scalar.ring().to_string(),
            ));
        }
        let mut terms = BTreeMap::new();
        for (idx, coef) in &self.terms {
            let prod = scalar.mul(coef)?;
            if !prod.is_zero() {
                terms.insert(idx.clone(), prod);
            }
        }
        Ok(TruncatedSeries { terms, ..self.clone() })
    }

    /// `self^exponent` with truncation; `exponent >= 1`.
    pub fn pow(&self, exponent: u32) -> Result<TruncatedSeries, Error> {
        assert!(exponent >= 1, "pow of a constant-free series needs exponent >= 1");
        let mut acc = self.clone();
        for _ in 1..exponent {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Substitutes `args[i]` for variable `i`: computes `self(args...)`.
    ///
    /// All arguments must share one shape, whose precision equals this
    /// series' precision. Because every argument has valuation at least one,
    /// the truncation is exact.
    pub fn substitute(&self, args: &[TruncatedSeries]) -> Result<TruncatedSeries, Error> {
        if args.len() != self.num_vars {
            return Err(Error::ArityMismatch { expected: self.num_vars, got: args.len() });
        }
        let target = match args.first() {
            Some(f) => {
                for g in &args[1..] {
                    f.same_shape(g)?;
                }
                if f.precision != self.precision {
                    return Err(Error::ShapeMismatch(format!(
                        "substitution precision {} differs from outer precision {}",
                        f.precision, self.precision
                    )));
                }
                if f.ring != self.ring {
                    return Err(Error::ShapeMismatch(format!(
                        "substitution ring {} differs from outer ring {}",
                        f.ring, self.ring
                    )));
                }
                (f.num_vars, f.precision)
            }
            // a zero-variable series is identically zero; substitution
            // into it yields the empty (zero) series in zero variables
            None => (0, self.precision),
        };
        let (out_vars, precision) = target;
        let mut result = TruncatedSeries::zero(self.ring, out_vars, precision);

        // cache powers of each argument up to the largest exponent it sees
        let mut powers: Vec<Vec<TruncatedSeries>> = args.iter().map(|f| vec![f.clone()]).collect();
        for (idx, coef) in &self.terms {
            let mut product: Option<TruncatedSeries> = None;
            for (i, &e) in idx.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while (powers[i].len() as u32) < e {
                    let next = powers[i].last().unwrap().mul(&args[i])?;
                    powers[i].push(next);
                }
                let factor = &powers[i][(e - 1) as usize];
                product = Some(match product {
                    None => factor.clone(),
                    Some(p) => p.mul(factor)?,
                });
            }
            let term_value = product
                .expect("terms have total degree >= 1")
                .scalar_mul(coef)?;
            result = result.add(&term_value)?;
        }
        Ok(result)
    }

    /// Reindexes variables into a larger ambient set: variable `i` becomes
    /// variable `var_map[i]`. The map must be injective into `0..new_vars`.
    pub fn embed(&self, new_vars: usize, var_map: &[usize]) -> Result<TruncatedSeries, Error> {
        if var_map.len() != self.num_vars {
            return Err(Error::ArityMismatch { expected: self.num_vars, got: var_map.len() });
        }
        if var_map.iter().any(|&v| v >= new_vars) {
            return Err(Error::OutOfRange("variable map exceeds ambient size".into()));
        }
        let mut terms = BTreeMap::new();
        for (idx, coef) in &self.terms {
            let mut exp = vec![0u32; new_vars];
            for (i, &e) in idx.0.iter().enumerate() {
                exp[var_map[i]] += e;
            }
            if terms.insert(MultiIndex(exp), coef.clone()).is_some() {
                return Err(Error::InvalidArgument("variable map is not injective".into()));
            }
        }
        Ok(TruncatedSeries {
            ring: self.ring,
            num_vars: new_vars,
            precision: self.precision,
            terms,
        })
    }

    /// Drops all terms of total degree above `k`, lowering the precision to `k`.
    pub fn truncate(&self, k: u32) -> Result<TruncatedSeries, Error> {
        if k < 1 || k > self.precision {
            return Err(Error::OutOfRange(format!(
                "truncation degree {k} outside 1..={}",
                self.precision
            )));
        }
        let terms = self
            .terms
            .iter()
            .filter(|(idx, _)| idx.total_degree() <= k)
            .map(|(idx, c)| (idx.clone(), c.clone()))
            .collect();
        Ok(TruncatedSeries { precision: k, terms, ..self.clone() })
    }

    /// Keeps only the terms of total degree exactly `k` (same precision).
    pub fn homogeneous_part(&self, k: u32) -> TruncatedSeries {
        let terms = self
            .terms
            .iter()
            .filter(|(idx, _)| idx.total_degree() == k)
            .map(|(idx, c)| (idx.clone(), c.clone()))
            .collect();
        TruncatedSeries { terms, ..self.clone() }
    }

    /// Returns true when every term has total degree exactly `k`.
    pub fn is_homogeneous_of_degree(&self, k: u32) -> bool {
        self.terms.keys().all(|idx| idx.total_degree() == k)
    }

    /// Formal partial derivative with respect to variable `var`. The degree
    /// of every term drops by one, so the precision drops to `N - 1`.
    ///
    /// A term `x_var` would differentiate to a constant, which the type
    /// cannot represent; subtract the linear part first.
    pub fn partial_derivative(&self, var: usize) -> Result<TruncatedSeries, Error> {
        if var >= self.num_vars {
            return Err(Error::OutOfRange(format!("no variable {var}")));
        }
        if self.precision < 2 {
            return Err(Error::OutOfRange(
                "derivative of a precision-1 series has precision 0".into(),
            ));
        }
        let mut terms = BTreeMap::new();
        for (idx, coef) in &self.terms {
            let e = idx.0[var];
            if e == 0 {
                continue;
            }
            if idx.total_degree() == 1 {
                return Err(Error::InvalidArgument(
                    "derivative has a constant term; subtract the linear part first".into(),
                ));
            }
            let mut exp = idx.0.clone();
            exp[var] -= 1;
            let c = coef.mul_i64(e as i64);
            if !c.is_zero() {
                terms.insert(MultiIndex(exp), c);
            }
        }
        Ok(TruncatedSeries {
            precision: self.precision - 1,
            terms,
            ..self.clone()
        })
    }

    /// Antiderivative of a univariate series with zero constant term: the
    /// coefficient of `x^i` is divided by `i + 1` and moved to `x^{i+1}`.
    /// The precision rises to `N + 1`.
    pub fn integrate_univariate(&self) -> Result<TruncatedSeries, Error> {
        if self.num_vars != 1 {
            return Err(Error::ShapeMismatch(format!(
                "integrate_univariate on a {}-variable series",
                self.num_vars
            )));
        }
        let mut terms = BTreeMap::new();
        for (idx, coef) in &self.terms {
            let i = idx.0[0];
            let divisor = (i + 1) as i64;
            let c = coef
                .divide_by_integer(divisor)?
                .ok_or(Error::NotDivisible { degree: i, divisor })?;
            if !c.is_zero() {
                terms.insert(MultiIndex(vec![i + 1]), c);
            }
        }
        Ok(TruncatedSeries {
            precision: self.precision + 1,
            terms,
            ..self.clone()
        })
    }

    /// Compositional inverse of a univariate series whose linear coefficient
    /// is a unit: the unique `psi` with `self(psi(x)) = x = psi(self(x))` to
    /// this precision, solved degree by degree.
    pub fn compositional_inverse(&self) -> Result<TruncatedSeries, Error> {
        if self.num_vars != 1 {
            return Err(Error::ShapeMismatch(format!(
                "compositional inverse of a {}-variable series",
                self.num_vars
            )));
        }
        let linear = self.coefficient(&[1]);
        let linear_inv = linear.try_invert().ok_or_else(|| {
            Error::NotInvertible(format!("linear coefficient {linear} is not a unit"))
        })?;

        let x = TruncatedSeries::variable(self.ring, 1, 0, self.precision)?;
        let mut psi = x.scalar_mul(&linear_inv)?;
        for d in 2..=self.precision {
            let composed = self.substitute(std::slice::from_ref(&psi))?;
            let excess = composed.coefficient(&[d]);
            if excess.is_zero() {
                continue;
            }
            let correction = TruncatedSeries::from_terms(
                self.ring,
                1,
                self.precision,
                [(vec![d], linear_inv.mul(&excess)?.neg())],
            )?;
            psi = psi.add(&correction)?;
        }
        debug_assert_eq!(self.substitute(std::slice::from_ref(&psi)).unwrap(), x);
        debug_assert_eq!(psi.substitute(std::slice::from_ref(self)).unwrap(), x);
        Ok(psi)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (idx, coef) in &self.terms {
            let mono: Vec<String> = idx
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
                .collect();
            let mono = mono.join("*");
            let cs = coef.to_string();
            let (sign, abs) = match cs.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", cs),
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            if abs == "1" {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<u32>,
    coef: String,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    ring: String,
    vars: usize,
    precision: u32,
    terms: Vec<TermRepr>,
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let repr = SeriesRepr {
            ring: self.ring.to_string(),
            vars: self.num_vars,
            precision: self.precision,
            // BTreeMap iteration is already graded-lexicographic
            terms: self
                .terms
                .iter()
                .map(|(idx, coef)| TermRepr { exp: idx.0.clone(), coef: coef.to_string() })
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = SeriesRepr::deserialize(deserializer)?;
        let ring = RingDescriptor::parse(&repr.ring).map_err(D::Error::custom)?;
        let terms: Result<Vec<_>, _> = repr
            .terms
            .into_iter()
            .map(|t| ring.parse_element(&t.coef).map(|c| (t.exp, c)))
            .collect();
        TruncatedSeries::from_terms(
            ring,
            repr.vars,
            repr.precision,
            terms.map_err(D::Error::custom)?,
        )
        .map_err(D::Error::custom)
    }
}
