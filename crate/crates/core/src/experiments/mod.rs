//! Dataset files, split protocols and experiment sweeps.

pub mod config;
pub mod io;
pub mod metrics;
pub mod run;
pub mod split;

pub use config::{
    DatasetSpec, ExperimentConfig, GraphSource, MethodEntry, MethodSpec, SamplerKind,
    SamplerParams, SolverSettings, SplitFractions,
};
pub use io::{load_features, load_ratings, parse_ratings, write_ratings};
pub use metrics::{
    export_failures, export_metrics, read_metrics, sort_rows, FailureRow, MetricsRow,
    METRICS_HEADER,
};
pub use run::{run_experiment, run_sampler, ExperimentResults, SamplerRun};
pub use split::{split_dataset, DatasetSplit};
