//! Exact symbolic computation of quantum cluster variables for linearly
//! ordered quivers and for the rank-2 system of exchange degree 2, all at
//! principal quantization.
//!
//! Three independent routes produce each variable: seed mutation in the
//! quantum torus, closed quantum-binomial formulas, and weighted perfect
//! matchings of snake graphs. The crate cross-checks the routes against each
//! other, against commutative oracles, and against a battery of structural
//! identities (exchange relations, coefficient recursions, twist lattices,
//! and the q = −1 phenomenon on level sets).
//!
//! Everything is exact: coefficients are big integers attached to doubled
//! powers of q^{1/2}, so no floating point enters anywhere.

pub mod kronecker;
pub mod qarith;
pub mod qseed;
pub mod qtorus;
pub mod snake;
pub mod stembridge;
pub mod typea;

pub use kronecker::{HConvention, Kronecker, KroneckerGraph};
pub use qarith::{QArithError, QLaurent};
pub use qseed::{IntMatrix, QuantumSeed, SeedError};
pub use qtorus::{ClassicalLaurent, SkewMatrix, TorusElement, TorusError};
pub use snake::{MatchingLattice, SnakeGraph};
pub use stembridge::{StembridgeError, StembridgeInstance};
pub use typea::{PathQuiver, TypeA, TypeAError};
