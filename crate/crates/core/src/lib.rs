//! Period integrals, Picard–Fuchs systems and monodromy of a two-parameter
//! family of lattice-polarized K3 surfaces.

pub mod algebra;
pub mod periods;
pub mod pfaffian;
pub mod fibration;
pub mod lattice;
pub mod monodromy;
pub mod conformal;
pub mod verify;
