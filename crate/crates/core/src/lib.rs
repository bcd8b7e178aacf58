#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod football;
pub mod numerics;
pub mod phase_plane;
pub mod singular_gmt;
pub mod variation;
pub mod warped_geometry;

pub use error::{Error, Result};
