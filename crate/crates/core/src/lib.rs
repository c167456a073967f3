//! Finite rings, modules and torsion notions: executable checks for the
//! classification of relatively congruence modular quasivarieties of modules.

pub mod bitset;
pub mod classify;
pub mod corpus;
pub mod delta;
pub mod error;
pub mod ideal;
pub mod lattice;
pub mod module;
pub mod ring;
pub mod spec;
mod subobject;
pub mod torsion;

pub use bitset::BitSet;
pub use classify::{ClassificationVerdict, Outcome, Quasiidentity, QuasivarietyDescriptor};
pub use delta::{DeltaAxiom, ReducedDelta};
pub use error::{Error, Result};
pub use ideal::{LeftIdeal, QuotientRing, TwoSidedIdeal};
pub use lattice::{FiniteLattice, Modularity};
pub use module::{FiniteModule, Module, Submodule};
pub use ring::{FiniteRing, Ring};
pub use torsion::{AxiomCheck, AxiomReport, AxiomViolation, TorsionNotion};
