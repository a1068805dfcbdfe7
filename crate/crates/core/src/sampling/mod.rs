//! Sampling strategies on the product graph.

pub mod bandlimited;
pub mod gcs;
pub mod igcs;
pub mod oracle;
pub mod persist;
pub mod random;
pub mod sample_set;
pub mod select;
pub mod split;

pub use bandlimited::{
    aopt_local_search, aopt_objective, bandlimited_basis, bandlimited_reconstruct, AoptRun,
    BandlimitedBasis, Regularization,
};
pub use gcs::{gcs_sample, gcs_sample_with, GcsOptions, GcsState};
pub use igcs::{igcs_sample, BlockKind, IgcsParams, IgcsRun, IgcsStep};
pub use oracle::{exact_greedy_oracle, lambda_max_bound};
pub use persist::{read_meta, read_samples, sidecar_path, write_meta, write_samples, SampleMeta};
pub use random::random_sample;
pub use sample_set::{IndexMask, SampleSet};
pub use select::{argmax_magnitude, rank_by_magnitude, TIE_TOL};
pub use split::{build_split, perfect_shuffle, permute_dense, SplitView};
