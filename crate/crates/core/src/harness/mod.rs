//! Synthetic experiments: spec, data streams, trial driver, CSV output and
//! the property-suite runner.

pub mod data;
pub mod output;
pub mod props;
pub mod run;
pub mod spec;

pub use data::RNG_ID;
pub use output::{aggregate, final_round_stats, write_csv, write_metadata, RoundSummary, Welford};
pub use run::{all_series_failed, run_experiment, RegretRecord};
pub use spec::{Algorithm, ExperimentKind, ExperimentSpec, RadiusMode};
