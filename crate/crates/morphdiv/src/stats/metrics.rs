//! Diversity, convergence and distributional-distance metrics.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::stats::distribution::{ConditionalPatternDistribution, OutcomeKey};

/// Entropy of a count vector in the given log base, via
/// H = log(T) - sum(c * log(c)) / T, which is exact for uniform counts.
/// Computed in base 2 and rescaled, so changing base is an exact division.
pub fn entropy_of_counts<I: IntoIterator<Item = u64>>(counts: I, log_base: f64) -> f64 {
    let mut total = 0u64;
    let mut acc = 0.0f64;
    for c in counts {
        if c == 0 {
            continue;
        }
        total += c;
        acc += c as f64 * (c as f64).log2();
    }
    if total == 0 {
        return 0.0;
    }
    let bits = (total as f64).log2() - acc / total as f64;
    rescale_bits(bits, log_base)
}

fn rescale_bits(bits: f64, log_base: f64) -> f64 {
    if log_base == 2.0 {
        bits
    } else {
        bits / log_base.log2()
    }
}

/// Source pattern-specific diversity: entropy of the target outcomes
/// aligned to `pattern`.
pub fn pattern_diversity(
    dist: &ConditionalPatternDistribution,
    pattern: &str,
    log_base: f64,
) -> Result<f64> {
    let outcomes = dist
        .conditional(pattern)
        .ok_or_else(|| Error::UnknownPattern(pattern.to_string()))?;
    Ok(entropy_of_counts(outcomes.values().copied(), log_base))
}

/// Aggregate diversity: the frequency-weighted mean of the per-pattern
/// entropies, equal to H(P,Q) - H(P) over the joint counts.
pub fn aggregate_diversity(dist: &ConditionalPatternDistribution, log_base: f64) -> Result<f64> {
    if dist.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let grand = dist.grand_total() as f64;
    let mut acc = 0.0;
    for p in dist.patterns() {
        let outcomes = dist.conditional(p).expect("pattern key exists");
        let h = entropy_of_counts(outcomes.values().copied(), log_base);
        acc += dist.total(p) as f64 / grand * h;
    }
    Ok(acc)
}

/// Which occurrences form the denominator of a convergence rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvergenceDenominator {
    /// One-to-one outcomes only (the default).
    O2oOnly,
    /// All four categories, including NULL and OTHER.
    AllCategories,
}

fn convergence_fraction(
    outcomes: &std::collections::BTreeMap<OutcomeKey, u64>,
    pattern: &str,
    denom: ConvergenceDenominator,
) -> (u64, u64) {
    let mut convergent = 0u64;
    let mut total = 0u64;
    for (k, &c) in outcomes {
        match k {
            OutcomeKey::Target(t) => {
                total += c;
                if t == pattern {
                    convergent += c;
                }
            }
            OutcomeKey::Null | OutcomeKey::Other => {
                if denom == ConvergenceDenominator::AllCategories {
                    total += c;
                }
            }
        }
    }
    (convergent, total)
}

/// Fraction of occurrences of `pattern` whose outcome is convergent.
pub fn per_pattern_convergence(
    dist: &ConditionalPatternDistribution,
    pattern: &str,
    denom: ConvergenceDenominator,
) -> Result<f64> {
    let outcomes = dist
        .conditional(pattern)
        .ok_or_else(|| Error::UnknownPattern(pattern.to_string()))?;
    let (convergent, total) = convergence_fraction(outcomes, pattern, denom);
    if total == 0 {
        return Err(Error::stats(format!(
            "convergence rate undefined for {pattern}: empty denominator"
        )));
    }
    Ok(convergent as f64 / total as f64)
}

/// Corpus-level convergence rate in [0, 1].
pub fn aggregate_convergence(
    dist: &ConditionalPatternDistribution,
    denom: ConvergenceDenominator,
) -> Result<f64> {
    let mut convergent = 0u64;
    let mut total = 0u64;
    for p in dist.patterns() {
        let outcomes = dist.conditional(p).expect("pattern key exists");
        let (c, t) = convergence_fraction(outcomes, p, denom);
        convergent += c;
        total += t;
    }
    if total == 0 {
        return Err(Error::stats(
            "convergence rate undefined: empty denominator",
        ));
    }
    Ok(convergent as f64 / total as f64)
}

/// Unit-cost Wasserstein distance between the conditionals of `pattern` in
/// two distributions. Under a 0/1 cost matrix the optimal transport cost is
/// exactly the total variation distance: half the L1 distance over the
/// union of outcome keys, with missing keys at probability 0.
pub fn wasserstein_unit(
    a: &ConditionalPatternDistribution,
    b: &ConditionalPatternDistribution,
    pattern: &str,
) -> Result<f64> {
    let ca = a.conditional(pattern);
    let cb = b.conditional(pattern);
    if ca.is_none() && cb.is_none() {
        return Err(Error::UnknownPattern(pattern.to_string()));
    }
    let (ca, cb) = match (ca, cb) {
        (Some(ca), Some(cb)) => (ca, cb),
        // A conditional cannot be formed on one side: treat as undefined.
        _ => {
            return Err(Error::UnknownPattern(format!(
                "{pattern} (present in only one distribution)"
            )))
        }
    };
    let ta = a.total(pattern) as f64;
    let tb = b.total(pattern) as f64;
    let keys: BTreeSet<&OutcomeKey> = ca.keys().chain(cb.keys()).collect();
    let mut l1 = 0.0;
    for k in keys {
        let pa = ca.get(k).copied().unwrap_or(0) as f64 / ta;
        let pb = cb.get(k).copied().unwrap_or(0) as f64 / tb;
        l1 += (pa - pb).abs();
    }
    Ok(0.5 * l1)
}

/// Total variation distance between two probability vectors over a shared
/// index space (used by tests and the decoder analyses).
pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    0.5 * a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .sum::<f64>()
}

#[derive(Debug, Clone)]
pub struct BinConfig {
    /// Bin width on the log10 frequency axis.
    pub log10_width: f64,
    /// Patterns below this frequency in the reference distribution are
    /// dropped before binning.
    pub min_freq: u64,
}

impl Default for BinConfig {
    fn default() -> Self {
        BinConfig {
            log10_width: 0.5,
            min_freq: 1,
        }
    }
}

/// One frequency bin of Wasserstein distances.
#[derive(Debug, Clone, PartialEq)]
pub struct WdBin {
    pub log10_lo: f64,
    pub log10_hi: f64,
    pub count: usize,
    pub mean: Option<f64>,
    /// 1.96 * sd / sqrt(n); absent when count < 2.
    pub ci_half_width: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinnedSeries {
    pub bins: Vec<WdBin>,
    /// Patterns present in the reference distribution but missing from the
    /// other one (no conditional to compare against).
    pub skipped_missing: usize,
}

/// Bins per-pattern Wasserstein distances by log10 frequency in the
/// reference distribution `ht` and reports per-bin means with normal 95%
/// confidence half-widths. Bin gaps are emitted with count 0.
pub fn bin_wd_by_frequency(
    ht: &ConditionalPatternDistribution,
    mt: &ConditionalPatternDistribution,
    cfg: &BinConfig,
) -> Result<BinnedSeries> {
    if cfg.log10_width <= 0.0 {
        return Err(Error::invalid("bin width must be positive"));
    }
    let mut skipped = 0usize;
    let mut points: Vec<(i64, f64)> = Vec::new(); // (bin index, wd)
    for p in ht.patterns() {
        let freq = ht.total(p);
        if freq < cfg.min_freq {
            continue;
        }
        match wasserstein_unit(ht, mt, p) {
            Ok(wd) => {
                let bin = ((freq as f64).log10() / cfg.log10_width).floor() as i64;
                points.push((bin, wd));
            }
            Err(Error::UnknownPattern(_)) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    if points.is_empty() {
        return Ok(BinnedSeries {
            bins: Vec::new(),
            skipped_missing: skipped,
        });
    }
    let lo = points.iter().map(|&(b, _)| b).min().unwrap();
    let hi = points.iter().map(|&(b, _)| b).max().unwrap();
    let mut bins = Vec::new();
    for b in lo..=hi {
        let values: Vec<f64> = points
            .iter()
            .filter(|&&(pb, _)| pb == b)
            .map(|&(_, wd)| wd)
            .collect();
        let n = values.len();
        let (mean, ci) = if n == 0 {
            (None, None)
        } else {
            let m = values.iter().sum::<f64>() / n as f64;
            let ci = if n >= 2 {
                let var =
                    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n as f64 - 1.0);
                Some(1.96 * var.sqrt() / (n as f64).sqrt())
            } else {
                None
            };
            (Some(m), ci)
        };
        bins.push(WdBin {
            log10_lo: b as f64 * cfg.log10_width,
            log10_hi: (b + 1) as f64 * cfg.log10_width,
            count: n,
            mean,
            ci_half_width: ci,
        });
    }
    Ok(BinnedSeries {
        bins,
        skipped_missing: skipped,
    })
}

/// Per-pattern comparison record between two corpora.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternDelta {
    pub pattern: String,
    /// Frequency in corpus A.
    pub freq: u64,
    pub diversity_a: f64,
    pub diversity_b: Option<f64>,
    /// (B - A) / A; None when A's diversity is 0 or B lacks the pattern.
    pub diversity_rel_diff: Option<f64>,
    pub convergence_a: f64,
    pub convergence_b: Option<f64>,
    /// B - A; None when B lacks the pattern.
    pub convergence_abs_diff: Option<f64>,
}

/// One record per source pattern with freq >= min_freq in corpus A.
pub fn compare_corpora(
    a: &ConditionalPatternDistribution,
    b: &ConditionalPatternDistribution,
    min_freq: u64,
    log_base: f64,
) -> Result<Vec<PatternDelta>> {
    if a.pattern_type() != b.pattern_type() {
        return Err(Error::MixedPatternTypes(
            "cannot compare distributions of different pattern types".to_string(),
        ));
    }
    let mut out = Vec::new();
    for p in a.patterns() {
        let freq = a.total(p);
        if freq < min_freq.max(1) {
            continue;
        }
        let diversity_a = pattern_diversity(a, p, log_base)?;
        let convergence_a = per_pattern_convergence(a, p, ConvergenceDenominator::O2oOnly)?;
        let (diversity_b, convergence_b) = if b.conditional(p).is_some() {
            (
                Some(pattern_diversity(b, p, log_base)?),
                Some(per_pattern_convergence(b, p, ConvergenceDenominator::O2oOnly)?),
            )
        } else {
            (None, None)
        };
        let diversity_rel_diff = match diversity_b {
            Some(db) if diversity_a > 0.0 => Some((db - diversity_a) / diversity_a),
            _ => None,
        };
        let convergence_abs_diff = convergence_b.map(|cb| cb - convergence_a);
        out.push(PatternDelta {
            pattern: p.to_string(),
            freq,
            diversity_a,
            diversity_b,
            diversity_rel_diff,
            convergence_a,
            convergence_b,
            convergence_abs_diff,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::PatternType;
    use crate::stats::distribution::DistributionScope;

    fn dist(entries: &[(&str, &[(&str, u64)])]) -> ConditionalPatternDistribution {
        let mut d =
            ConditionalPatternDistribution::new(PatternType::Word, DistributionScope::O2oOnly);
        for (p, outcomes) in entries {
            for (t, c) in outcomes.iter() {
                d.add_count(p.to_string(), OutcomeKey::Target(t.to_string()), *c);
            }
        }
        d
    }

    #[test]
    fn entropy_basics() {
        // Deterministic outcome.
        assert_eq!(entropy_of_counts([5], 2.0), 0.0);
        // Uniform over 4 outcomes in base 2 is exactly 2 bits.
        assert_eq!(entropy_of_counts([1, 1, 1, 1], 2.0), 2.0);
        // Independent evaluation of the formula for counts {3, 1}.
        let h = entropy_of_counts([3, 1], 2.0);
        assert!((h - 0.8112781244591328).abs() < 1e-12, "{h}");
    }

    #[test]
    fn entropy_is_base_covariant() {
        let h2 = entropy_of_counts([3, 2, 1], 2.0);
        let he = entropy_of_counts([3, 2, 1], std::f64::consts::E);
        let h10 = entropy_of_counts([3, 2, 1], 10.0);
        assert!((he - h2 / std::f64::consts::E.log2()).abs() < 1e-12);
        assert!((h10 - h2 / 10f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn diversity_per_pattern_and_unknown() {
        let d = dist(&[("p", &[("q", 3), ("r", 1)])]);
        let h = pattern_diversity(&d, "p", 2.0).unwrap();
        assert!((h - 0.8112781244591328).abs() < 1e-12);
        assert!(pattern_diversity(&d, "zzz", 2.0).is_err());
    }

    #[test]
    fn aggregate_diversity_cases() {
        // Every pattern deterministic: 0.
        let d = dist(&[("p", &[("q", 7)]), ("r", &[("s", 3)])]);
        assert_eq!(aggregate_diversity(&d, 2.0).unwrap(), 0.0);
        // Two patterns, each uniform over 2 outcomes: 1 bit.
        let d = dist(&[("p", &[("a", 2), ("b", 2)]), ("r", &[("c", 5), ("d", 5)])]);
        assert!((aggregate_diversity(&d, 2.0).unwrap() - 1.0).abs() < 1e-12);
        // Empty distribution errors.
        let empty =
            ConditionalPatternDistribution::new(PatternType::Word, DistributionScope::O2oOnly);
        assert!(aggregate_diversity(&empty, 2.0).is_err());
    }

    #[test]
    fn aggregate_diversity_equals_joint_minus_marginal() {
        // H(Q|P) = H(P,Q) - H(P) on a small fixed distribution.
        let d = dist(&[
            ("p", &[("a", 3), ("b", 2)]),
            ("r", &[("a", 1), ("c", 4), ("d", 2)]),
        ]);
        let agg = aggregate_diversity(&d, 2.0).unwrap();
        let joint = entropy_of_counts([3u64, 2, 1, 4, 2], 2.0);
        let marginal = entropy_of_counts([5u64, 7], 2.0);
        assert!((agg - (joint - marginal)).abs() < 1e-12);
    }

    #[test]
    fn convergence_rates() {
        let d = dist(&[("p", &[("p", 1), ("x", 3)])]);
        assert_eq!(
            per_pattern_convergence(&d, "p", ConvergenceDenominator::O2oOnly).unwrap(),
            0.25
        );
        let d = dist(&[("p", &[("p", 4)])]);
        assert_eq!(
            aggregate_convergence(&d, ConvergenceDenominator::O2oOnly).unwrap(),
            1.0
        );
    }

    #[test]
    fn convergence_with_all_categories_denominator() {
        let mut d =
            ConditionalPatternDistribution::new(PatternType::Word, DistributionScope::AllCategories);
        d.add_count("p".to_string(), OutcomeKey::Target("p".to_string()), 1);
        d.add_count("p".to_string(), OutcomeKey::Null, 1);
        d.add_count("p".to_string(), OutcomeKey::Other, 2);
        assert_eq!(
            per_pattern_convergence(&d, "p", ConvergenceDenominator::AllCategories).unwrap(),
            0.25
        );
        assert_eq!(
            per_pattern_convergence(&d, "p", ConvergenceDenominator::O2oOnly).unwrap(),
            1.0
        );
    }

    #[test]
    fn wasserstein_cases() {
        let a = dist(&[("p", &[("x", 1), ("y", 1)])]);
        let b = dist(&[("p", &[("x", 2)])]);
        // (0.5, 0.5) vs (1.0, 0): checked against a brute-force min-cost
        // transport solver in the integration suite.
        assert!((wasserstein_unit(&a, &b, "p").unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(wasserstein_unit(&a, &a, "p").unwrap(), 0.0);
        // Disjoint supports.
        let c = dist(&[("p", &[("z", 5)])]);
        assert_eq!(wasserstein_unit(&a, &c, "p").unwrap(), 1.0);
        // Unknown pattern.
        assert!(wasserstein_unit(&a, &b, "zzz").is_err());
        // Present on one side only.
        let d = dist(&[("other", &[("x", 1)])]);
        assert!(wasserstein_unit(&a, &d, "p").is_err());
    }

    #[test]
    fn binning_means_and_cis() {
        // Patterns at frequencies 10 and 1000 with known distances.
        let a = dist(&[
            ("p1", &[("x", 5), ("y", 5)]),
            ("p2", &[("x", 500), ("y", 500)]),
            ("p3", &[("x", 600), ("y", 400)]),
        ]);
        let b = dist(&[
            ("p1", &[("x", 10)]),
            ("p2", &[("x", 1000)]),
            ("p3", &[("x", 1000)]),
        ]);
        let series = bin_wd_by_frequency(&a, &b, &BinConfig::default()).unwrap();
        // log10(10)=1 -> bin 2 [1.0,1.5); log10(1000)=3 -> bin 6 [3.0,3.5).
        assert_eq!(series.bins.len(), 5);
        assert_eq!(series.bins[0].count, 1);
        assert_eq!(series.bins[0].mean, Some(0.5));
        assert_eq!(series.bins[0].ci_half_width, None); // n=1
        let last = series.bins.last().unwrap();
        assert_eq!(last.count, 2);
        assert!((last.mean.unwrap() - 0.45).abs() < 1e-12);
        assert!(last.ci_half_width.unwrap() > 0.0);
        // Gap bins between them are empty.
        assert!(series.bins[1..4].iter().all(|b| b.count == 0 && b.mean.is_none()));
        assert_eq!(series.skipped_missing, 0);
    }

    #[test]
    fn identical_corpora_bin_to_zero() {
        let a = dist(&[("p1", &[("x", 5), ("y", 5)]), ("p2", &[("x", 100)])]);
        let series = bin_wd_by_frequency(&a, &a, &BinConfig::default()).unwrap();
        for bin in &series.bins {
            if let Some(m) = bin.mean {
                assert_eq!(m, 0.0);
            }
        }
    }

    #[test]
    fn compare_corpora_records() {
        let a = dist(&[("p", &[("x", 2), ("y", 2)]), ("rare", &[("x", 1)])]);
        let b = dist(&[("p", &[("x", 4)])]);
        let recs = compare_corpora(&a, &b, 2, 2.0).unwrap();
        assert_eq!(recs.len(), 1); // "rare" filtered by min_freq
        let r = &recs[0];
        assert_eq!(r.pattern, "p");
        assert_eq!(r.freq, 4);
        // B deterministic where A is uniform-2: relative diff -1.
        assert_eq!(r.diversity_rel_diff, Some(-1.0));
        assert_eq!(r.convergence_abs_diff, Some(0.0));
    }

    #[test]
    fn compare_identical_corpora_is_all_zero() {
        let a = dist(&[("p", &[("p", 2), ("y", 2)])]);
        let recs = compare_corpora(&a, &a, 1, 2.0).unwrap();
        assert_eq!(recs[0].diversity_rel_diff, Some(0.0));
        assert_eq!(recs[0].convergence_abs_diff, Some(0.0));
    }

    #[test]
    fn compare_zero_diversity_reports_undefined() {
        let a = dist(&[("p", &[("x", 3)])]);
        let b = dist(&[("p", &[("x", 1), ("y", 1)])]);
        let recs = compare_corpora(&a, &b, 1, 2.0).unwrap();
        assert_eq!(recs[0].diversity_rel_diff, None);
        assert!(recs[0].diversity_b.is_some());
    }
}
