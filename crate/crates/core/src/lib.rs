//! Combinatorial R maps of type-A and type-D affine crystals as
//! piecewise-linear integer maps, the associated box-ball / particle
//! antiparticle cellular automaton, and an exhaustive verification
//! harness for the identities relating them.

pub mod basic_array;
pub mod crystal;
pub mod dynamics;
pub mod error;
pub mod gamma;
pub mod limits;
pub mod rmap_a;
pub mod rmap_d;
pub mod statefile;
pub mod verify;

pub use error::{Error, Result};
