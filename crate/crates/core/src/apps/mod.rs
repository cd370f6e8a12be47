//! Bottom-up applications of the torque volume: saliency, edge contribution
//! and strengthening, and precision/recall evaluation.

mod contribution;
mod eval;
mod saliency;
mod strengthen;

pub use contribution::{
    edge_contribution, edge_contribution_all_patches, edge_contribution_from_extrema,
    ContributionMode, DEFAULT_CONTRIBUTION_EXTREMA,
};
pub use eval::{
    curve_to_csv, equally_spaced_thresholds, max_f, pr_counts, pr_curve, BinaryMask, EvalCounts,
    PrPoint, GROUND_TRUTH_THRESHOLD,
};
pub use saliency::{
    blend_saliency, saliency_from_extrema, GaussianWeighting, SaliencyMap, DEFAULT_SIGMA,
    DEFAULT_TORQUE_WEIGHT,
};
pub use strengthen::{
    strengthen_edges, strengthen_linear, strengthen_logistic, strengthened_edges,
    StrengthenConfig, StrengthenMode, DEFAULT_BLEND, DEFAULT_C0, DEFAULT_C1, DEFAULT_C2,
};
