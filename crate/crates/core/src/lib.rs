//! Nine-parameter chart of the 3x3 unitary group built from 3D Jones
//! vectors, its inverse, and the characteristic decomposition of 3x3
//! coherency matrices.

pub mod error;
pub mod linalg;
pub mod rotations;
pub mod jones;
pub mod parametrization;
pub mod characteristic;
pub mod interface;

pub use error::{Error, RecoveryStep, Result};
pub use linalg::{Complex3Vector, ComplexMatrix3, EigenDecomposition, Tolerances, C64};
pub use parametrization::{
    canonicalize_params, compose_core, compose_unitary, recover_params, Branch, CoreParams,
    RecoveryReport, UnitaryParams,
};
pub use rotations::{RealMatrix3, RotationAngles};
