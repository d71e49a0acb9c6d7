//! Global, K-way and subset-restricted partial transposes of multipartite
//! quantum states, the negativities derived from them, and the partial
//! K-way negativities that split the global negativity.

pub mod canonical;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod multistate;
pub mod negativity;
pub mod ptranspose;
pub mod spectral;
pub mod statejson;
pub mod types;

pub use error::{Error, Result};
pub use multistate::{
    count_lbps, hamming_distance, partial_trace, project_and_renormalize, pure_to_density,
    DensityOperator, MultiIndex, PureState, SubsystemDims,
};
pub use negativity::{
    global_negativity, kway_negativity, partial_kway_negativities, reduced_convexity_check,
    single_negative_identity_check, subset_negativity, NegativityReport,
};
pub use ptranspose::{global_pt, kway_pt, subset_pt, TransposeKind, TransposedOperator};
pub use spectral::{count_negative, eigendecompose, trace_norm, SpectralResult};
