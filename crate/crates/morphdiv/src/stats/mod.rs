//! Distributional metrics over conditional pattern distributions.

pub mod correlation;
pub mod distribution;
pub mod fit;
pub mod kde;
pub mod metrics;

pub use correlation::{kendall_tau, pearson};
pub use distribution::{
    build_distribution, ConditionalPatternDistribution, DistributionScope, OutcomeKey,
};
pub use fit::{quadratic_fit, QuadraticFit};
pub use kde::{kde, Bandwidth, KdeCurve, KdeResult};
pub use metrics::{
    aggregate_convergence, aggregate_diversity, bin_wd_by_frequency, compare_corpora,
    entropy_of_counts, pattern_diversity, per_pattern_convergence, total_variation,
    wasserstein_unit, BinConfig, BinnedSeries, ConvergenceDenominator, PatternDelta, WdBin,
};
