//! Exact-arithmetic calculus of formal group law buds and their friends.
//!
//! `budcalc` computes, over a pluggable exact coefficient ring (arbitrary-precision
//! integers, integers mod n, or rationals):
//!
//! - truncated multivariate power series with explicit precision ([`series`]),
//! - buds (truncations) of one-dimensional commutative formal group laws,
//!   their n-series, strict isomorphisms, heights and logarithms ([`fgl`]),
//! - homogeneous symmetric 2-cocycles, the universal cocycle
//!   `(x^k + y^k - (x+y)^k) / d_k`, and their brute-force classification
//!   over finite rings ([`cocycle`]),
//! - point-set values of the Gamma-rings `HZ` and `DB` at finite pointed sets,
//!   the substitution product, the conjugation action, and the map `F*`
//!   induced by a formal group bud ([`gamma`]),
//! - integer chain-complex homology via Smith normal form, including the
//!   explicit complex whose homology gives the stable derived functors of
//!   the exterior square ([`homology`]).
//!
//! Everything is exact: there is no floating point anywhere, all values are
//! immutable after construction, and every operation is a pure function.
//!
//! ```
//! use budcalc::fgl::FormalGroupBud;
//! use budcalc::ring::RingDescriptor;
//!
//! let f = FormalGroupBud::multiplicative(RingDescriptor::Integers, 3);
//! // [3](x) = (1+x)^3 - 1 = 3x + 3x^2 + x^3
//! let three = f.n_series(3);
//! assert_eq!(three.to_string(), "3*x0 + 3*x0^2 + x0^3");
//! ```

pub mod cocycle;
pub mod error;
pub mod fgl;
pub mod gamma;
pub mod guide;
pub mod homology;
pub mod ring;
pub mod series;

pub use error::Error;
