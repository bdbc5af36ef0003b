//! Static vacuum metrics with cosmological constant: model catalog, horizon surface gravity,
//! virtual mass, pointwise identities, monotone level-set functionals and a radial shooting
//! solver.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod csv;
pub mod diagnostics;
pub mod error;
pub mod geometry;
pub mod horizon;
pub mod jet;
pub mod roots;
pub mod shooting;

pub use catalog::{build, m_max, ModelData, ModelKind, ModelTriple};
pub use error::{Error, Result};
pub use geometry::{CrossSection, CurvatureSample, RadialFunction, RadialGeometry};
pub use horizon::{
    classify, surface_gravity_curve, invert_k_minus, invert_k_plus, k_minus, k_plus, virtual_mass, HorizonType,
    RegionKind, VirtualMassResult,
};
