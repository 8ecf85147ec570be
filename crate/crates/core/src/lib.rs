//! Enumeration and classification of braces with a given finite abelian
//! additive group, via regular subgroups of the holomorph.

pub mod abelian;
pub mod aut;
pub mod brace;
pub mod checkpoint;
pub mod classify;
pub mod closure;
pub mod complements;
pub mod error;
pub mod fingerprint;
pub mod finite;
pub mod fp;
pub mod hol;
pub mod holtable;
pub mod iso;
pub mod layered;
pub mod numeric;
pub mod oracle;
pub mod pipeline;
pub mod series;
pub mod subgroup;

pub use abelian::{GroupElement, GroupSpec};
pub use aut::Automorphism;
pub use error::{Error, Result};
pub use hol::{HolElement, Holomorph};
pub use subgroup::Subgroup;
