//! Numerical toolkit for optimal quantum cloning machines.

pub mod cloners;
pub mod cvclone;
pub mod objectives;
pub mod optics;
pub mod error;
pub mod qcore;
pub mod sdp;

pub use error::{Error, Result};
