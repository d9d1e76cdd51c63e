//! Exact randomized dimension computations for Hadamard products of
//! projective varieties over prime fields.
//!
//! The crate samples points on parametrized or implicit subvarieties of
//! projective space, assembles Terracini-style tangent frames for
//! coordinatewise products, and reads dimensions off exact matrix ranks
//! over a random 62-bit prime. A brute-force point-counting oracle over a
//! small field, a binomial-hypersurface search, and the degree-d surface
//! parameter counts round out the toolkit. Everything is deterministic
//! given one seed.

pub mod binomial;
pub mod catalogue;
pub mod counts;
pub mod field;
pub mod hadamard;
pub mod matrix;
pub mod oracle;
pub mod poly;
pub mod rng;
pub mod runner;
pub mod variety;

pub use field::{random_prime, Fp};
pub use hadamard::{DimensionReport, TwistMode, Verdict};
pub use matrix::Matrix;
pub use poly::{IntPoly, MultiPoly};
pub use rng::SeedStream;
pub use variety::{ProjectivePoint, Variety, VarietySpec};
