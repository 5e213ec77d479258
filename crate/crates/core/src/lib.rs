//! Lagrangian free-boundary Euler with self-gravity on the unit disk, with a
//! numerical harness for its energy functionals and inequalities.

pub mod cli_io;
pub mod disk_spectral;
pub mod dynamics;
pub mod elliptic;
pub mod energies;
pub mod error;
pub mod geometry;
pub mod hodge;
pub mod krylov;
pub mod potential;
pub mod quadrature;

pub use error::{Error, Result};
