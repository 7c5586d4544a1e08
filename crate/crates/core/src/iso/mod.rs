//! Isomorphisms from tree Hopf algebras onto word Hopf algebras.

pub mod cf;
pub mod hk;
pub mod psi;
pub mod theta;

pub use cf::{CfBasis, Component, WordVect};
pub use hk::hairer_kelly;
pub use psi::{NormalForm, Sign, Strategy};
pub use theta::Theta;
