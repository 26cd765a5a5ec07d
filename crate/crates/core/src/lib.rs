//! Exact art-gallery workbench core.
//!
//! Rational planar geometry, visibility regions and their arrangement, an
//! exact point-vertex guarding solver, the gadget polygon families, the
//! formula-to-gallery compiler and the tools used to measure the topology of
//! optimal guard placements. Everything here is `no_std` with `alloc`.
#![no_std]
// errors carry exact points and only travel cold paths
#![allow(clippy::result_large_err)]

extern crate alloc;

pub mod bitset;
pub mod error;
pub mod geometry;
pub mod visibility;
pub mod solver;
pub mod gadgets;
pub mod compiler;
pub mod topology;

pub use bitset::BitSet;
pub use error::{Error, Result};
