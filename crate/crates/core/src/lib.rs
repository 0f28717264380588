//! Framed McKay quivers of Kleinian groups, their preprojective and cornered
//! algebras, King stability for the weights `θ_I` and `η_I`, and exact
//! certificates that the associated quiver varieties are nonempty.
//!
//! Everything here needs only `alloc`. File formats, the CLI and the threaded
//! restart executor live in the `kq` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algebra;
pub mod cyclotomic;
pub mod dimvec;
pub mod dynkin;
pub mod error;
pub mod field;
pub mod matrix;
pub mod mckay;
pub mod oracle;
pub mod pipeline;
pub mod quiver;
pub mod rep;
pub mod solver;
pub mod stability;

pub use dimvec::DimVector;
pub use error::{Error, Result};
pub use field::{Field, Q};
pub use matrix::{Matrix, Subspace};
pub use mckay::{GroupFamily, McKayData};
pub use quiver::{Arrow, FramedQuiver, Vertex};

pub use rep::{Representation, Verdict};
pub use stability::Stability;
