//! Exact computation of Stiefel-Whitney classes and numbers for real and
//! complex projective spaces, Dold manifolds `P(m,n)`, Milnor manifolds
//! `H(m,n)` and products of the non-Milnor families, together with
//! decision procedures for unoriented bordism and checkers for the known
//! Dold/Milnor bordism families.
//!
//! Everything is computed over GF(2) in truncated polynomial rings, so all
//! answers are exact.

pub mod bordism;
pub mod cli;
pub mod error;
pub mod gf2ring;
pub mod manifolds;
pub mod theorems;

pub use bordism::{
    bordant, bounds, partitions, sw_number, sw_profile, Partition, ProfileCache, SwProfile,
};
pub use error::{Error, Result};
pub use gf2ring::{binom_mod2, GeneratorSpec, Gf2Poly, Monomial, RingPresentation};
pub use manifolds::{CohomologyModel, ManifoldExpr, ManifoldKind, PairingRule};
