//! Collars and short pants decompositions on hyperbolic cone-surfaces whose
//! cone angles are all below `pi`.
//!
//! The crate is organised bottom-up:
//!
//! * [`trig`] holds the closed-form trigonometry of trirectangles and
//!   right-angled hexagons.
//! * [`pants`] builds Y-pieces, V-pieces and joker's hats from it.
//! * [`surface`] glues pants into cone-surfaces and validates them.
//! * [`collars`] computes collar widths and certifies that collars are disjoint.
//! * [`bers`] replays the length bookkeeping behind the partition bound.
//! * [`oracle`] is an independent coordinate model of the hyperbolic plane
//!   used to check the closed forms.
//! * [`document`] reads and writes the JSON formats used by the command line.
//!
//! All angles passed to library functions are cone *half*-angles `phi`, with
//! the cone angle being `2 phi`. Documents use full angles.

// NaN must fail range checks, so `!(x > 0.0)` is used on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bers;
pub mod collars;
pub mod document;
pub mod error;
pub mod oracle;
pub mod pants;
pub mod surface;
pub mod trig;

pub use error::{GeometryError, Result};
