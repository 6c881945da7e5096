//! Spectral shape optimization for convex planar bodies under Neumann
//! boundary conditions.

pub mod bounds;
pub mod constraints;
pub mod eigen;
pub mod error;
pub mod families;
pub mod mesh;
pub mod optimize;
pub mod par;
pub mod polygon;
pub mod reference;
pub mod report;
pub mod scheme;
pub mod self_domain;
pub mod support;

pub use error::{Error, Result};
