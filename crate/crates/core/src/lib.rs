//! Exact invariants of 5-manifolds with fundamental group `Z/2` that arise as
//! total spaces of principal circle bundles over simply connected 4-manifolds.
//!
//! - [`lattice`]: intersection forms and degree-2 classes
//! - [`series`]: truncated graded power series over `Q`, the `A-hat` sequence
//! - [`cobordism`]: spin^c characteristic numbers and the pin^+ invariant
//! - [`bundle`]: Type I/II/III classification, quotients, Chern-class families
//! - [`eta`]: eta invariants of spin^c Dirac operators and component counts

#![allow(clippy::needless_range_loop)]

pub mod bundle;
pub mod cobordism;
pub mod error;
pub mod eta;
pub mod lattice;
pub mod series;

pub use bundle::{
    classify_total_space, BundleSpec, FiveManifoldClass, ManifoldType, StandardName,
    StandardQuotient,
};
pub use cobordism::{beta, spinc_class, EpsilonSign, PinPlusClass, SpincClass};
pub use error::{Error, Result};
pub use eta::{EtaFamilyReport, EtaValue, PairingData};
pub use lattice::{CohomologyClass, IntersectionForm, Mod2Vector, Provenance};
