//! The conditioned coupling of G(n, 1/2) and G(n', 1/2) with planted
//! independent sets, and empirical checks of its properties.

mod claim2;
mod gap;
mod pair;

pub use claim2::{claim2_experiment, Claim2Config, Claim2Report, SampleSummary, Statistic, ThresholdEvent};
pub use gap::{permute_labels, random_permutation, verify_chi_gap, verify_chi_gap_with, ChiGap, GapVerdict};
pub use pair::{
    build_conditioned_pair, check_pair_parameters, read_pair, verify_pair, write_pair, CoupledPair, PairCheck,
    PairSidecar, RejectionStats,
};
