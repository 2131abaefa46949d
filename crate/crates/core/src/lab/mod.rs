//! Experiment orchestration: seeded Monte Carlo studies, reproducibility
//! manifests, and the commands behind the `chromlab` binary.
//!
//! Every run writes `<stem>.json`, an optional `<stem>.csv`, any binary
//! artifacts, and `<stem>.manifest.json`. Sample `i` of a Monte Carlo study
//! always draws from stream `i` of the master seed, so results do not depend
//! on the thread count.

mod chi;
mod command;
mod manifest;
mod table;
mod xk;

pub use chi::{
    chi_interval_experiment, lab_budget, ChiIntervalReport, ChiSample, Quantile, CHI_MAX_N, CHI_MIN_SAMPLES, F_TOLERANCE,
    NODES_PER_MS, UNRELIABLE_SHARE,
};
pub use command::{replay, run, ArtifactMatch, Command, ReplayReport, RunOptions, RunOutput};
pub use manifest::{Artifact, ExperimentManifest, Streams, Toolchain, MANIFEST_SCHEMA_VERSION};
pub use table::Table;
pub use xk::{k_for_mu, xk_distribution_experiment, xk_distribution_with, XkBlock, XkConfig, XkReport, XkRow, XK_BLOCKS, XK_MIN_SAMPLES};
