//! Fields and calculus on the reference unit disk.

pub mod cutoff;
pub mod field;
pub mod grid;
pub mod localized;
pub mod ops;

pub use cutoff::{make_cutoffs, smoothstep_c6, smoothstep_quintic, CutoffFamily};
pub use field::{pointwise, BoundaryFieldCircle, SamplePoint, ScalarFieldDisk, VectorFieldDisk};
pub use localized::{
    cutoff_partial, localized_norm, localized_norm_sq, localized_norm_vector, localized_norm_vector_sq, CutoffKind,
    MAX_LOCALIZED_ORDER,
};
pub use grid::{Grid, GridSpec, RadialOps, DEFAULT_CHOP_TOL};
pub use ops::{sobolev_norm, sobolev_norm_sq, sobolev_norm_vector, sobolev_norm_vector_sq};
