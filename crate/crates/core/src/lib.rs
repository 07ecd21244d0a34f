//! Constructive algebra for line bundles on projective space.
//!
//! All computations run over explicitly presented commutative rings
//! ([`ring`]) and return certificates that can be re-checked by exact
//! re-multiplication.

pub mod cli;
pub mod cocycle;
pub mod error;
pub mod horrocks;
pub mod json;
pub mod lattice;
pub mod matrix;
pub mod oracle;
pub mod parse;
pub mod picard;
pub mod poly;
pub mod projmod;
pub mod projspace;
pub mod ring;

pub use error::{Error, ErrorClass, Result};
pub use poly::LaurentPoly;
pub use ring::{Elem, Ring, RingFacts, RingSpec, RingValue};
