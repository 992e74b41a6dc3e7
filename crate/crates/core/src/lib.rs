//! Exact computations on toric Deligne-Mumford stacks given by stacky fans:
//! Picard groups, Frobenius push-forwards of line bundles, line-bundle
//! cohomology in dimension at most two, nefness, stack constructions and
//! exceptional-collection checks.

pub mod catalog;
pub mod cohomology;
pub mod constructions;
pub mod error;
pub mod exceptional;
pub mod exactalg;
pub mod fan;
pub mod frobenius;
pub mod geometry;
pub mod picard;

pub use error::{Error, Result};
pub use exactalg::{FgAbGroup, GroupElement, IntMatrix};
pub use fan::{RayData, StackyFan, ValidationReport, Violation};
pub use picard::{LineBundle, PicardGroup};
