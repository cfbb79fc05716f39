//! Zero-divisor graphs of Lipschitz quaternion rings `Z_n[i,j,k]` and of
//! `M_2(Z_{p^s})`: construction, twin compression, domination and
//! automorphism computations.

pub mod automorphism;
pub mod domination;
pub mod error;
pub mod linalg;
pub mod matrix;
pub mod modular;
pub mod quaternion;
pub mod ring;
pub mod verify;
pub mod zdg;

pub use error::{Error, Result};
pub use matrix::{Mat2, MatRing};
pub use modular::{Modulus, Residue};
pub use quaternion::{PiTag, QuatRing, Quaternion};
pub use ring::FiniteRing;
