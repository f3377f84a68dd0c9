//! Combinatorial designs, placement delivery arrays and the coded caching
//! schemes built from them, for device-to-device networks where users reach
//! shared cache nodes through a fixed access topology.
//!
//! The crate is layered bottom-up:
//!
//! * [`design`]: block designs, resolutions, orthogonal arrays and group
//!   divisible designs.
//! * [`array`]: placement delivery arrays, their checker and sender maps.
//! * [`scheme`]: the multiaccess constructions and their closed-form metrics.
//! * [`sim`]: byte-level placement, XOR delivery and decoding.
//! * [`compare`]: baseline calculators and comparison tables.
//! * [`format`]: the plain-text file formats shared by the command line tool.

pub mod array;
pub mod compare;
pub mod design;
mod error;
pub mod field;
pub mod fixtures;
pub mod format;
pub mod math;
pub mod scheme;
pub mod sim;

pub use error::{Error, Result};
pub use math::Ratio;
