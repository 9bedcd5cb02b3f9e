//! Subdivided homotopy theory of ring maps.
//!
//! Polynomial families over a simplicial pair `(K, L)`, the multiplication
//! `μ` between them, subdivided homotopies of algebra maps, extensions and
//! their classifying maps, and the simplicial spaces of algebra maps built
//! out of all of this.
//!
//! The main entry points:
//!
//! * [`sset`]: finite simplicial sets, products, subdivision, last vertex maps.
//! * [`coeff`]: builtin coefficient algebras and finitely presented algebras.
//! * [`polyfun`]: polynomial families `Z_r^{(K,L)} ⊗ B`.
//! * [`mult`]: the multiplication `μ`.
//! * [`homotopy`]: subdivided homotopies and their composition.
//! * [`extensions`]: extensions, tensor algebras and classifying maps.
//! * [`mapspace`]: the simplicial spaces of maps.

pub mod coeff;
pub mod error;
pub mod extensions;
pub mod homotopy;
pub mod json;
pub mod mapspace;
pub mod mult;
pub mod poly;
pub mod polyfun;
pub mod ring;
pub mod snf;
pub mod tensor;
pub mod sset;
pub mod suite;

pub use error::{Error, Result};
pub use ring::{Integers, Ring};
