//! Polarisation measured as a loss of embedding dimension.
//!
//! A communication network is modelled as a random dot product graph. The
//! singular values of its adjacency matrix give the embedding dimension
//! (via a profile-likelihood elbow) and a normalised SVD entropy; a decrease
//! of the dimension across time windows signals polarisation.

pub mod adjacency;
pub mod dimension;
pub mod embedding;
pub mod entropy;
pub mod error;
pub mod pipeline;
pub mod polarisation;
pub mod report;
pub mod sbm;
pub mod seed;
pub mod svd;

pub use adjacency::SparseAdjacency;
pub use dimension::{estimate_dimension, DimensionEstimate};
pub use embedding::{embed, RdpgEmbedding};
pub use entropy::{svd_entropy, EntropyReport};
pub use error::{Error, Result};
pub use polarisation::{compare_windows, PolarisationVerdict, Trend, WindowMetrics};
pub use svd::{
    svd_factors, svd_factors_with, truncated_svd, truncated_svd_with, SingularSpectrum, SvdFactors,
    SvdMethod, SvdOptions,
};
