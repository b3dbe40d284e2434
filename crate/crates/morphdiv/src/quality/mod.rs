//! Divergence-vs-quality analysis: contrastive sentence groups, scoring,
//! and frequency correlates.

pub mod bleu;
pub mod groups;

use std::collections::BTreeMap;
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::stats::correlation::{kendall_tau, pearson};
use crate::stats::distribution::{ConditionalPatternDistribution, OutcomeKey};

pub use bleu::{corpus_bleu, tokenize_13a, BleuOptions, Tokenization};
pub use groups::{DivergenceGroupSpec, GroupIndex, GroupRejection};

/// How a group of sentences is scored.
#[derive(Debug, Clone)]
pub enum GroupMetric {
    CorpusBleu(BleuOptions),
    /// Mean of externally supplied per-sentence scores.
    ExternalMean(BTreeMap<String, f64>),
}

impl GroupMetric {
    pub fn name(&self) -> &'static str {
        match self {
            GroupMetric::CorpusBleu(_) => "bleu",
            GroupMetric::ExternalMean(_) => "external",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupQualityReport {
    pub source_pattern: String,
    pub target_pattern: String,
    pub metric: String,
    pub control_score: f64,
    pub experiment_score: f64,
    /// experiment - control.
    pub delta: f64,
    pub control_size: usize,
    pub experiment_size: usize,
}

fn score_side(
    ids: &[String],
    mt: &BTreeMap<String, String>,
    refs: &BTreeMap<String, String>,
    metric: &GroupMetric,
) -> Result<f64> {
    match metric {
        GroupMetric::CorpusBleu(opts) => {
            let mut hyps = Vec::with_capacity(ids.len());
            let mut rfs = Vec::with_capacity(ids.len());
            for id in ids {
                let h = mt
                    .get(id)
                    .ok_or_else(|| Error::invalid(format!("missing translation output for sentence {id}")))?;
                let r = refs
                    .get(id)
                    .ok_or_else(|| Error::invalid(format!("missing reference for sentence {id}")))?;
                hyps.push(h.as_str());
                rfs.push(r.as_str());
            }
            corpus_bleu(&hyps, &rfs, opts)
        }
        GroupMetric::ExternalMean(scores) => {
            let mut acc = 0.0;
            for id in ids {
                acc += scores
                    .get(id)
                    .ok_or_else(|| Error::invalid(format!("missing score for sentence {id}")))?;
            }
            Ok(acc / ids.len() as f64)
        }
    }
}

/// Scores both groups of a divergence and records the delta.
pub fn score_groups(
    spec: &DivergenceGroupSpec,
    mt_outputs: &BTreeMap<String, String>,
    references: &BTreeMap<String, String>,
    metric: &GroupMetric,
) -> Result<GroupQualityReport> {
    let control_score = score_side(&spec.control_ids, mt_outputs, references, metric)?;
    let experiment_score = score_side(&spec.experiment_ids, mt_outputs, references, metric)?;
    Ok(GroupQualityReport {
        source_pattern: spec.source_pattern.clone(),
        target_pattern: spec.target_pattern.clone(),
        metric: metric.name().to_string(),
        control_score,
        experiment_score,
        delta: experiment_score - control_score,
        control_size: spec.control_ids.len(),
        experiment_size: spec.experiment_ids.len(),
    })
}

/// Reads a two-column TSV of (sentence_id, score). Duplicate ids and
/// malformed rows are errors; an empty file gives an empty map.
pub fn ingest_external_scores<R: BufRead>(reader: R) -> Result<BTreeMap<String, f64>> {
    let mut map = BTreeMap::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (id, score) = line.split_once('\t').ok_or_else(|| Error::invalid(format!(
            "score file line {}: expected two tab-separated columns",
            lineno + 1
        )))?;
        let value: f64 = score.trim().parse().map_err(|_| {
            Error::invalid(format!(
                "score file line {}: malformed score {score:?}",
                lineno + 1
            ))
        })?;
        if map.insert(id.to_string(), value).is_some() {
            return Err(Error::invalid(format!(
                "score file line {}: duplicate sentence id {id:?}",
                lineno + 1
            )));
        }
    }
    Ok(map)
}

/// Training-frequency predictors of a divergence p -> q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Predictor {
    AbsFreq,
    RelFreq,
    LogAbs,
    LogRel,
}

impl Predictor {
    pub const ALL: [Predictor; 4] = [
        Predictor::AbsFreq,
        Predictor::RelFreq,
        Predictor::LogAbs,
        Predictor::LogRel,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Predictor::AbsFreq => "abs_freq",
            Predictor::RelFreq => "rel_freq",
            Predictor::LogAbs => "log_abs",
            Predictor::LogRel => "log_rel",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationRow {
    pub metric: String,
    pub predictor: Predictor,
    pub n: usize,
    pub pearson_r: f64,
    pub pearson_p: f64,
    pub kendall_tau: f64,
    pub kendall_p: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CorrelationTable {
    pub rows: Vec<CorrelationRow>,
    /// Divergences skipped under rel_freq because p -> p never occurs.
    pub skipped: Vec<String>,
}

/// Correlates group score deltas against training-frequency predictors of
/// their divergences. `training` must contain every (p, q) of the reports.
pub fn frequency_correlates(
    reports: &[GroupQualityReport],
    training: &ConditionalPatternDistribution,
) -> Result<CorrelationTable> {
    let mut table = CorrelationTable::default();
    let mut metrics: Vec<String> = reports.iter().map(|r| r.metric.clone()).collect();
    metrics.sort();
    metrics.dedup();
    for metric in &metrics {
        let rows: Vec<&GroupQualityReport> =
            reports.iter().filter(|r| &r.metric == metric).collect();
        for predictor in Predictor::ALL {
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for r in &rows {
                let cond = training.conditional(&r.source_pattern).ok_or_else(|| {
                    Error::UnknownPattern(format!(
                        "{} not in the training distribution",
                        r.source_pattern
                    ))
                })?;
                let abs = cond
                    .get(&OutcomeKey::Target(r.target_pattern.clone()))
                    .copied()
                    .ok_or_else(|| {
                        Error::UnknownPattern(format!(
                            "{} -> {} not in the training distribution",
                            r.source_pattern, r.target_pattern
                        ))
                    })? as f64;
                let value = match predictor {
                    Predictor::AbsFreq => abs,
                    Predictor::LogAbs => abs.ln(),
                    Predictor::RelFreq | Predictor::LogRel => {
                        let conv = cond
                            .get(&OutcomeKey::Target(r.source_pattern.clone()))
                            .copied()
                            .unwrap_or(0) as f64;
                        if conv == 0.0 {
                            let key = format!("{}->{}", r.source_pattern, r.target_pattern);
                            if !table.skipped.contains(&key) {
                                table.skipped.push(key);
                            }
                            continue;
                        }
                        let rel = abs / conv;
                        if predictor == Predictor::RelFreq {
                            rel
                        } else {
                            rel.ln()
                        }
                    }
                };
                xs.push(value);
                ys.push(r.delta);
            }
            let (pearson_r, pearson_p) = pearson(&xs, &ys)?;
            let (tau, kendall_p) = kendall_tau(&xs, &ys)?;
            table.rows.push(CorrelationRow {
                metric: metric.clone(),
                predictor,
                n: xs.len(),
                pearson_r,
                pearson_p,
                kendall_tau: tau,
                kendall_p,
            });
        }
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeepDirection {
    Lowest,
    Highest,
}

/// Keeps the floor(keep_fraction * n) best-scored items, ties broken by
/// the earlier ordinal. `scores[i]` belongs to `items[i]`.
pub fn filter_by_score<T>(
    items: Vec<T>,
    scores: &[f64],
    keep_fraction: f64,
    direction: KeepDirection,
) -> Result<Vec<T>> {
    if scores.len() != items.len() {
        return Err(Error::invalid(format!(
            "missing scores: {} items but {} scores",
            items.len(),
            scores.len()
        )));
    }
    if !(keep_fraction > 0.0 && keep_fraction <= 1.0) {
        return Err(Error::invalid("keep fraction must be in (0, 1]"));
    }
    let keep = (keep_fraction * items.len() as f64).floor() as usize;
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&i, &j| {
        let cmp = scores[i].partial_cmp(&scores[j]).expect("finite scores");
        let cmp = match direction {
            KeepDirection::Lowest => cmp,
            KeepDirection::Highest => cmp.reverse(),
        };
        cmp.then(i.cmp(&j))
    });
    let mut chosen: Vec<usize> = order.into_iter().take(keep).collect();
    chosen.sort_unstable(); // preserve corpus order of the retained subset
    let chosen_set: std::collections::BTreeSet<usize> = chosen.into_iter().collect();
    Ok(items
        .into_iter()
        .enumerate()
        .filter_map(|(i, item)| chosen_set.contains(&i).then_some(item))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::PatternType;
    use crate::stats::distribution::DistributionScope;
    use std::io::Cursor;

    fn spec() -> DivergenceGroupSpec {
        DivergenceGroupSpec {
            source_pattern: "p".to_string(),
            target_pattern: "q".to_string(),
            control_ids: vec!["c0".to_string(), "c1".to_string()],
            experiment_ids: vec!["e0".to_string(), "e1".to_string()],
        }
    }

    fn seg_map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    #[test]
    fn identical_outputs_give_zero_delta() {
        let refs = seg_map(&[
            ("c0", "aa bb cc dd"),
            ("c1", "ee ff gg hh"),
            ("e0", "ii jj kk ll"),
            ("e1", "mm nn oo pp"),
        ]);
        let report = score_groups(
            &spec(),
            &refs,
            &refs,
            &GroupMetric::CorpusBleu(BleuOptions::default()),
        )
        .unwrap();
        assert_eq!(report.delta, 0.0);
        assert_eq!(report.control_score, 100.0);
        assert_eq!(report.control_size, 2);
    }

    #[test]
    fn degraded_experiment_outputs_give_negative_delta() {
        let refs = seg_map(&[
            ("c0", "aa bb cc dd"),
            ("c1", "ee ff gg hh"),
            ("e0", "ii jj kk ll"),
            ("e1", "mm nn oo pp"),
        ]);
        let mut mt = refs.clone();
        mt.insert("e0".to_string(), "ii jj xx ll".to_string());
        let report = score_groups(
            &spec(),
            &mt,
            &refs,
            &GroupMetric::CorpusBleu(BleuOptions {
                smoothing: true,
                ..Default::default()
            }),
        )
        .unwrap();
        assert!(report.delta < 0.0, "{report:?}");
    }

    #[test]
    fn swapping_groups_flips_delta_sign() {
        let refs = seg_map(&[
            ("c0", "aa bb cc dd"),
            ("c1", "ee ff gg hh"),
            ("e0", "ii jj kk ll"),
            ("e1", "mm nn oo pp"),
        ]);
        let mut mt = refs.clone();
        mt.insert("e0".to_string(), "ii jj xx ll".to_string());
        let s = spec();
        let swapped = DivergenceGroupSpec {
            control_ids: s.experiment_ids.clone(),
            experiment_ids: s.control_ids.clone(),
            ..s.clone()
        };
        let m = GroupMetric::CorpusBleu(BleuOptions {
            smoothing: true,
            ..Default::default()
        });
        let r1 = score_groups(&s, &mt, &refs, &m).unwrap();
        let r2 = score_groups(&swapped, &mt, &refs, &m).unwrap();
        assert!((r1.delta + r2.delta).abs() < 1e-12);
    }

    #[test]
    fn equal_external_scores_give_zero_delta() {
        let scores: BTreeMap<String, f64> = ["c0", "c1", "e0", "e1"]
            .iter()
            .map(|id| (id.to_string(), 0.5))
            .collect();
        let empty = BTreeMap::new();
        let report =
            score_groups(&spec(), &empty, &empty, &GroupMetric::ExternalMean(scores)).unwrap();
        assert_eq!(report.delta, 0.0);
    }

    #[test]
    fn missing_sentence_is_an_error() {
        let refs = seg_map(&[("c0", "aa"), ("c1", "bb"), ("e0", "cc")]);
        let err = score_groups(
            &spec(),
            &refs,
            &refs,
            &GroupMetric::CorpusBleu(BleuOptions::default()),
        )
        .unwrap_err();
        assert!(err.to_string().contains("e1"), "{err}");
    }

    #[test]
    fn external_scores_roundtrip() {
        let map = ingest_external_scores(Cursor::new("s0\t0.5\ns1\t-1.25\n")).unwrap();
        assert_eq!(map.len(), 2);
        assert_eq!(map["s1"], -1.25);
        assert!(ingest_external_scores(Cursor::new("")).unwrap().is_empty());
        assert!(ingest_external_scores(Cursor::new("s0\t1\ns0\t2\n")).is_err());
        assert!(ingest_external_scores(Cursor::new("s0\tnope\n")).is_err());
        assert!(ingest_external_scores(Cursor::new("one-column\n")).is_err());
    }

    fn training_dist(entries: &[(&str, &str, u64)]) -> ConditionalPatternDistribution {
        let mut d =
            ConditionalPatternDistribution::new(PatternType::Word, DistributionScope::O2oOnly);
        for (p, q, c) in entries {
            d.add_count(p.to_string(), OutcomeKey::Target(q.to_string()), *c);
        }
        d
    }

    #[test]
    fn deltas_proportional_to_log_rel_give_pearson_one() {
        let mut entries = Vec::new();
        let mut reports = Vec::new();
        for (i, qf) in [(1u64, 10u64), (2, 40), (3, 160), (4, 640)].iter().enumerate() {
            let p = format!("p{i}~X~leaf");
            let q = format!("q{i}~Y~leaf");
            entries.push((p.clone(), q.clone(), qf.1));
            entries.push((p.clone(), p.clone(), 100 * qf.0));
            let rel: f64 = qf.1 as f64 / (100 * qf.0) as f64;
            reports.push(GroupQualityReport {
                source_pattern: p,
                target_pattern: q,
                metric: "bleu".to_string(),
                control_score: 0.0,
                experiment_score: 0.0,
                delta: 2.0 * rel.ln() + 1.0,
                control_size: 1,
                experiment_size: 1,
            });
        }
        let owned: Vec<(&str, &str, u64)> = entries
            .iter()
            .map(|(p, q, c)| (p.as_str(), q.as_str(), *c))
            .collect();
        let dist = training_dist(&owned);
        let table = frequency_correlates(&reports, &dist).unwrap();
        let row = table
            .rows
            .iter()
            .find(|r| r.predictor == Predictor::LogRel)
            .unwrap();
        assert!((row.pearson_r - 1.0).abs() < 1e-9, "{row:?}");
        assert!(table.skipped.is_empty());
    }

    #[test]
    fn zero_convergent_count_is_skipped_with_warning() {
        let dist = training_dist(&[("p~X~leaf", "q~Y~leaf", 5)]);
        let mk = |i: usize, p: &str| GroupQualityReport {
            source_pattern: p.to_string(),
            target_pattern: "q~Y~leaf".to_string(),
            metric: "bleu".to_string(),
            control_score: 0.0,
            experiment_score: 0.0,
            delta: i as f64,
            control_size: 1,
            experiment_size: 1,
        };
        // Three reports on patterns with convergents, one without.
        let mut d = training_dist(&[
            ("a~X~leaf", "q~Y~leaf", 2),
            ("a~X~leaf", "a~X~leaf", 4),
            ("b~X~leaf", "q~Y~leaf", 3),
            ("b~X~leaf", "b~X~leaf", 9),
            ("c~X~leaf", "q~Y~leaf", 4),
            ("c~X~leaf", "c~X~leaf", 2),
        ]);
        d.merge(&dist).unwrap();
        let reports = vec![
            mk(1, "a~X~leaf"),
            mk(2, "b~X~leaf"),
            mk(3, "c~X~leaf"),
            mk(4, "p~X~leaf"),
        ];
        let table = frequency_correlates(&reports, &d).unwrap();
        assert_eq!(table.skipped, vec!["p~X~leaf->q~Y~leaf".to_string()]);
        let rel_row = table
            .rows
            .iter()
            .find(|r| r.predictor == Predictor::RelFreq)
            .unwrap();
        assert_eq!(rel_row.n, 3);
        let abs_row = table
            .rows
            .iter()
            .find(|r| r.predictor == Predictor::AbsFreq)
            .unwrap();
        assert_eq!(abs_row.n, 4);
    }

    #[test]
    fn filter_keeps_floor_fraction_with_stable_ties() {
        let items: Vec<usize> = (0..10).collect();
        let scores: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let kept = filter_by_score(items.clone(), &scores, 1.0, KeepDirection::Lowest).unwrap();
        assert_eq!(kept.len(), 10);
        let kept = filter_by_score(items.clone(), &scores, 0.5, KeepDirection::Lowest).unwrap();
        assert_eq!(kept, vec![0, 1, 2, 3, 4]);
        let kept = filter_by_score(items.clone(), &scores, 0.5, KeepDirection::Highest).unwrap();
        assert_eq!(kept, vec![5, 6, 7, 8, 9]);
        // Ties at the boundary: earlier ordinal wins.
        let tied = vec![1.0, 0.0, 0.0, 0.0, 2.0];
        let kept = filter_by_score(vec![0, 1, 2, 3, 4], &tied, 0.4, KeepDirection::Lowest).unwrap();
        assert_eq!(kept, vec![1, 2]);
        // floor(0.35 * 10) = 3
        let kept = filter_by_score(items, &scores, 0.35, KeepDirection::Lowest).unwrap();
        assert_eq!(kept.len(), 3);
    }

    #[test]
    fn filter_error_paths() {
        assert!(filter_by_score(vec![1], &[], 0.5, KeepDirection::Lowest).is_err());
        assert!(filter_by_score(vec![1], &[1.0], 0.0, KeepDirection::Lowest).is_err());
        assert!(filter_by_score(vec![1], &[1.0], 1.5, KeepDirection::Lowest).is_err());
    }
}
