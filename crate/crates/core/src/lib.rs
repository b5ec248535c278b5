//! Rough-set approximation spaces and the matroids they induce.
//!
//! A partition of a finite universe determines lower and upper approximation
//! operators. The sets whose upper approximation is the whole universe form the
//! support family of a partition matroid; this crate builds that matroid,
//! checks the axiom systems involved, and cross-validates every derived family
//! against brute-force enumeration.

pub mod cli;
pub mod error;
pub mod induced;
pub mod matroid;
pub mod oracle;
pub mod rough;
pub mod setfam;
pub mod universe;

pub use error::{Error, Result};
pub use induced::{induced_matroid, intersection_inclusion_check, InducedMatroid};
pub use matroid::{Axiom, AxiomReport, Matroid};
pub use rough::{check_approx_properties, ApproximationOperators, CheckMode, Partition};
pub use setfam::SetFamily;
pub use universe::{Subset, Universe};
