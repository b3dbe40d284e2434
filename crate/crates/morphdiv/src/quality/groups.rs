//! Control/experiment sentence groups for a given divergence.
//!
//! For a divergence p -> q (p != q): the control group holds sentences in
//! which every occurrence of p is convergent; the experiment group holds
//! sentences in which exactly one occurrence of p diverges to q and every
//! other occurrence of p is convergent. Sentences where any occurrence of p
//! is NULL/OTHER (or diverges elsewhere) belong to neither group.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::patterns::{Outcome, PatternOccurrence, PatternType};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivergenceGroupSpec {
    pub source_pattern: String,
    pub target_pattern: String,
    /// Sentence ids, in corpus order.
    pub control_ids: Vec<String>,
    pub experiment_ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRejection {
    pub source_pattern: String,
    pub target_pattern: String,
    pub control_size: usize,
    pub experiment_size: usize,
    pub min_size: usize,
}

impl std::fmt::Display for GroupRejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} -> {}: control {} / experiment {} below minimum {}",
            self.source_pattern,
            self.target_pattern,
            self.control_size,
            self.experiment_size,
            self.min_size
        )
    }
}

/// Per-sentence outcome summary of one source pattern.
#[derive(Debug, Clone, Copy, Default)]
struct PatternTally {
    convergent: u32,
    /// Interned target id of the single divergent outcome seen, when unique.
    divergent: Option<u32>,
    divergent_count: u32,
    null_or_other: u32,
}

/// Sentence-indexed occurrence store with interned pattern keys.
#[derive(Debug, Default)]
pub struct GroupIndex {
    pattern_ids: BTreeMap<String, u32>,
    patterns: Vec<String>,
    target_ids: BTreeMap<String, u32>,
    targets: Vec<String>,
    /// One entry per sentence: id plus per-pattern tallies.
    sentences: Vec<(String, BTreeMap<u32, PatternTally>)>,
}

impl GroupIndex {
    pub fn new() -> Self {
        Self::default()
    }

    fn intern_pattern(&mut self, key: &str) -> u32 {
        if let Some(&id) = self.pattern_ids.get(key) {
            return id;
        }
        let id = self.patterns.len() as u32;
        self.patterns.push(key.to_string());
        self.pattern_ids.insert(key.to_string(), id);
        id
    }

    fn intern_target(&mut self, key: &str) -> u32 {
        if let Some(&id) = self.target_ids.get(key) {
            return id;
        }
        let id = self.targets.len() as u32;
        self.targets.push(key.to_string());
        self.target_ids.insert(key.to_string(), id);
        id
    }

    /// Appends the word-based occurrences of the next sentence in corpus
    /// order. Arc-based occurrences are rejected: group construction is
    /// defined over word-based patterns (arc-based behind the same API is
    /// possible by indexing arc occurrences explicitly).
    pub fn push_sentence(&mut self, sentence_id: &str, occs: &[PatternOccurrence]) -> Result<()> {
        let mut tallies: BTreeMap<u32, PatternTally> = BTreeMap::new();
        for occ in occs {
            if occ.pattern_type != PatternType::Word {
                return Err(Error::MixedPatternTypes(
                    "group construction expects word-based occurrences".to_string(),
                ));
            }
            let pid = self.intern_pattern(&occ.source);
            let t = tallies.entry(pid).or_default();
            match &occ.outcome {
                Outcome::Convergent(_) => t.convergent += 1,
                Outcome::Divergent(target) => {
                    let tid = self.intern_target(target);
                    t.divergent_count += 1;
                    t.divergent = match t.divergent {
                        None => Some(tid),
                        Some(prev) if prev == tid => Some(prev),
                        // Mixed divergence targets: mark invalid with a
                        // sentinel that can never match a real target.
                        Some(_) => Some(u32::MAX),
                    };
                }
                Outcome::Null | Outcome::Other => t.null_or_other += 1,
            }
        }
        self.sentences.push((sentence_id.to_string(), tallies));
        Ok(())
    }

    pub fn num_sentences(&self) -> usize {
        self.sentences.len()
    }

    /// Builds the groups for divergence p -> q, or a rejection when either
    /// group is smaller than `min_size`. `min_control_occurrences` is the
    /// minimum number of occurrences of p a control sentence must contain.
    pub fn build_groups(
        &self,
        p: &str,
        q: &str,
        min_size: usize,
        min_control_occurrences: u32,
    ) -> Result<std::result::Result<DivergenceGroupSpec, GroupRejection>> {
        if p == q {
            return Err(Error::invalid(
                "divergence requires distinct source and target patterns",
            ));
        }
        let Some(&pid) = self.pattern_ids.get(p) else {
            return Err(Error::UnknownPattern(p.to_string()));
        };
        let qid = self.target_ids.get(q).copied();
        let mut control = Vec::new();
        let mut experiment = Vec::new();
        for (id, tallies) in &self.sentences {
            let Some(t) = tallies.get(&pid) else {
                continue;
            };
            if t.null_or_other > 0 {
                continue;
            }
            if t.divergent_count == 0 && t.convergent >= min_control_occurrences {
                control.push(id.clone());
            } else if t.divergent_count == 1 && qid.is_some() && t.divergent == qid {
                experiment.push(id.clone());
            }
        }
        if control.len() < min_size || experiment.len() < min_size {
            return Ok(Err(GroupRejection {
                source_pattern: p.to_string(),
                target_pattern: q.to_string(),
                control_size: control.len(),
                experiment_size: experiment.len(),
                min_size,
            }));
        }
        Ok(Ok(DivergenceGroupSpec {
            source_pattern: p.to_string(),
            target_pattern: q.to_string(),
            control_ids: control,
            experiment_ids: experiment,
        }))
    }

    /// Every (p, q) divergence whose groups both meet `min_size`.
    pub fn enumerate_specs(
        &self,
        min_size: usize,
        min_control_occurrences: u32,
    ) -> Vec<DivergenceGroupSpec> {
        // Candidate q values per p: any target seen as a unique divergence.
        let mut candidates: BTreeMap<u32, std::collections::BTreeSet<u32>> = BTreeMap::new();
        for (_, tallies) in &self.sentences {
            for (&pid, t) in tallies {
                if t.null_or_other == 0 && t.divergent_count == 1 {
                    if let Some(tid) = t.divergent {
                        if tid != u32::MAX {
                            candidates.entry(pid).or_default().insert(tid);
                        }
                    }
                }
            }
        }
        let mut specs = Vec::new();
        for (pid, targets) in candidates {
            let p = self.patterns[pid as usize].clone();
            for tid in targets {
                let q = self.targets[tid as usize].clone();
                if p == q {
                    continue;
                }
                if let Ok(Ok(spec)) =
                    self.build_groups(&p, &q, min_size, min_control_occurrences)
                {
                    specs.push(spec);
                }
            }
        }
        specs
    }
}
