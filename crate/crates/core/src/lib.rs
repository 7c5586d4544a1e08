//! Decorated rooted trees, their pre-Lie and post-Lie products, the Hopf
//! algebras built on them, and the isomorphisms onto word algebras.
//!
//! Everything here works over exact rationals and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod classical;
pub mod enumerate;
pub mod error;
pub mod hopf;
pub mod iso;
pub mod linalg;
pub mod model;
pub mod verify;
pub mod multiindex;
pub mod ops;
pub mod parse;
pub mod tree;
pub mod vect;
pub mod word;
pub mod workspace;

pub use error::{Error, Result};
pub use multiindex::{EdgeLabel, Kind, MultiIndex};
pub use tree::{Forest, Planted, Tree};
pub use vect::{Q, Vect};
pub use word::Word;
pub use workspace::{Bounds, Workspace};
