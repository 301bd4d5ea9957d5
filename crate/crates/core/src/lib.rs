pub mod cli;
pub mod error;
pub mod golden;
pub mod ktheory;
pub mod qklines;
pub mod repring;
pub mod rootsys;
pub mod weyl;

pub use error::{Error, Result};
pub use ktheory::{KClass, KTheory, SchubertExpansion};
pub use qklines::{QKConstant, QKProduct, Report, Side};
pub use repring::RingElt;
pub use rootsys::{CartanDatum, Root, Weight};
pub use weyl::{ParabolicSubset, WeylElement, WeylGroup};
