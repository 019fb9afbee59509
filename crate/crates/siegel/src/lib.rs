//! Computational machinery for Siegel modular threefolds: exact symplectic
//! group and congruence-subgroup arithmetic, numerical theta constants with
//! their exact transformation cocycles, finite quotient groups with the
//! B -> 2B isomorphism and its Fricke variant, the genus-2 squaring
//! endomorphism checks, and the genus-3 classification of nonvanishing
//! symmetrized gradient forms.
//!
//! The `examples/` directory of this crate has one runnable example per
//! capability; the `siegel` binary drives the same verifications as batch
//! jobs emitting JSON reports.

pub mod chars;
pub mod cocycle;
pub mod cyclotomic;
pub mod error;
pub mod genus2;
pub mod genus3;
pub mod group;
pub mod intmat;
pub mod jobs;
pub mod quotient;
pub mod rng;
pub mod symplectic;
pub mod theta;

pub mod cli;

pub use chars::{CharacteristicMatrix, ParityFilter, ThetaCharacteristic};
pub use cyclotomic::{Cyclotomic8, PhiValue};
pub use error::{Error, Result};
pub use group::{GroupDescriptor, GroupKind};
pub use intmat::IntMat;
pub use quotient::FiniteQuotient;
pub use rng::SplitMix64;
pub use symplectic::{is_symplectic, FrickeJ2, SymplecticMatrix};
pub use theta::{EvalOptions, SiegelPoint, ThetaValue};
