//! The crate-wide error type.

use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// Mathematical *falsifications* (a candidate that fails an axiom check, a
/// randomized harness finding a counterexample) are reported through return
/// values, not through this type; `Error` is reserved for ill-posed inputs
/// and internal consistency violations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two elements from different coefficient rings met in one operation.
    #[error("ring descriptor mismatch: {0} vs {1}")]
    RingMismatch(String, String),

    /// Series operands disagree in ring, variable count, or precision.
    #[error("series shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Wrong number of series supplied to a substitution.
    #[error("substitution arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    /// A compositional inverse was requested for a series whose linear
    /// coefficient is not a unit.
    #[error("series is not invertible under composition: {0}")]
    NotInvertible(String),

    /// An exact division failed; the degree names the offending coefficient.
    #[error("coefficient at degree {degree} is not divisible by {divisor}")]
    NotDivisible { degree: u32, divisor: i64 },

    /// `enumerate_elements` was called on an infinite ring.
    #[error("ring {0} is not enumerable")]
    NotEnumerable(String),

    /// A formal group law axiom failed; names the axiom and a witness monomial.
    #[error("formal group axiom violated ({axiom}) at monomial {monomial}")]
    AxiomViolation { axiom: &'static str, monomial: String },

    /// Two buds that were required to agree after truncation do not.
    #[error("buds disagree below degree {degree}")]
    BudMismatch { degree: u32 },

    /// A cocycle's degree does not match the bud order it is paired with.
    #[error("degree mismatch: cocycle degree {cocycle}, bud order {bud}")]
    DegreeMismatch { cocycle: u32, bud: u32 },

    /// A candidate failed the symmetric-2-cocycle conditions.
    #[error("not a symmetric 2-cocycle ({condition}) at monomial {monomial}")]
    NotACocycle { condition: &'static str, monomial: String },

    /// An operation needed a ring of prime characteristic.
    #[error("operation requires prime characteristic, but ring is {0}")]
    WrongCharacteristic(String),

    /// An integer division arose that the coefficient ring cannot perform.
    #[error("computation requires division by {divisor} (degree {degree}); ring is not a Q-algebra")]
    NeedsQAlgebra { degree: u32, divisor: i64 },

    /// A formal group bud whose p-series starts in a degree that is not a
    /// power of p; impossible for genuine buds of formal group laws.
    #[error("p-series starts in degree {degree}, which is not a power of {p}")]
    InvalidHeight { degree: u32, p: u64 },

    /// An index or truncation degree lies outside its allowed range.
    #[error("argument out of range: {0}")]
    OutOfRange(String),

    /// Invalid argument to an operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An enumeration would exceed the configured budget.
    #[error("search space of size {size} exceeds budget {budget}")]
    BudgetExceeded { size: u128, budget: u128 },

    /// Boundary matrices do not compose to zero.
    #[error("not a chain complex: d.d != 0 between degrees {degree} and {}", degree - 2)]
    NotAComplex { degree: usize },

    /// Homology was requested too close to the top of a truncated complex.
    #[error("truncation too short: need top >= {need}, have {have}")]
    InsufficientTruncation { need: usize, have: usize },

    /// An identity that must hold for certified inputs failed; this always
    /// indicates a bug, not bad input.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
