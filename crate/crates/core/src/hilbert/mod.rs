//! Layouts, pure and mixed states, tensor composition and partial trace.

mod branches;
mod density;
mod layout;
mod state;

pub use branches::{build_premeasurement, mixture_of, BranchDecomposition, BRANCH_TOLERANCE};
pub use density::{tensor_density, DensityMatrix, DENSITY_TOLERANCE};
pub use layout::{HilbertLayout, Subsystem, SubsystemKind, DEFAULT_DIMENSION_CAP};
pub use state::{tensor, StateVector, INPUT_NORM_TOLERANCE};

pub(crate) use density::hermiticity_defect;
pub(crate) use state::{inner, vec_norm};

/// `partial_trace(rho, keep)` as a free function.
pub fn partial_trace<S: AsRef<str>>(rho: &DensityMatrix, keep: &[S]) -> crate::Result<DensityMatrix> {
    rho.partial_trace(keep)
}
