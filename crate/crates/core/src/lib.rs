//! Combinatorics and linear algebra over `F_p` for layers of free spectral
//! Lie algebras: tree complexes, group homology of small groups, the layer
//! spectral sequence, shifted Lie words, and operation bases.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arboreal;
pub mod dims;
pub mod ehp;
pub mod error;
pub mod fieldlin;
pub mod forest;
pub mod grouphom;
pub mod layers;
pub mod opbasis;
pub mod shiftedlie;

pub use dims::GradedDims;
pub use error::{Error, ErrorKind, Result};
