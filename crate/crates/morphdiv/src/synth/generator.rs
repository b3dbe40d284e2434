//! Seeded generation of parallel treebanks with controlled conditional
//! pattern distributions.
//!
//! Each sentence plants one source pattern drawn from the inventory and
//! realizes one sampled target outcome for it. Trees use a minimal grammar:
//! a root verb carrying the planted word (or the planted word as root) with
//! leaf noun children for the pattern's content dependencies, plus optional
//! punctuation fillers. Linguistic realism is a non-goal; the files are
//! valid pipeline inputs whose empirical conditional distributions converge
//! to the configured ones.
//!
//! Every sentence derives its randomness from (seed, sentence index), so
//! output is byte-identical no matter how generation is sharded.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::align::ContentDeprels;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub seed: u64,
    pub sentences: u64,
    /// Uniform count range of non-content filler tokens per side.
    #[serde(default)]
    pub filler: FillerRange,
    pub patterns: Vec<PatternSpec>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, Default)]
pub struct FillerRange {
    pub min: u32,
    pub max: u32,
}

/// One plantable word pattern and its target-outcome distribution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatternSpec {
    pub parent_deprel: String,
    pub upos: String,
    #[serde(default)]
    pub child_deprels: Vec<String>,
    pub weight: f64,
    pub outcomes: Vec<OutcomeSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OutcomeSpec {
    /// Target mirrors the source pattern.
    Convergent { weight: f64 },
    /// Target realizes a different word pattern.
    Divergent {
        weight: f64,
        parent_deprel: String,
        upos: String,
        #[serde(default)]
        child_deprels: Vec<String>,
    },
    /// The planted word is left unaligned (deletion).
    Null { weight: f64 },
    /// The planted word is aligned one-to-many.
    Other { weight: f64 },
}

impl OutcomeSpec {
    fn weight(&self) -> f64 {
        match self {
            OutcomeSpec::Convergent { weight }
            | OutcomeSpec::Divergent { weight, .. }
            | OutcomeSpec::Null { weight }
            | OutcomeSpec::Other { weight } => *weight,
        }
    }
}

impl GeneratorSpec {
    pub fn from_json(json: &str) -> Result<Self> {
        let spec: GeneratorSpec = serde_json::from_str(json)?;
        spec.validate(&ContentDeprels::default())?;
        Ok(spec)
    }

    /// Checks normalizability and that planted words are content words
    /// under the given content set (otherwise outcomes cannot be realized).
    pub fn validate(&self, content: &ContentDeprels) -> Result<()> {
        if self.sentences == 0 {
            return Err(Error::invalid("generator needs sentences > 0"));
        }
        if self.patterns.is_empty() {
            return Err(Error::invalid("generator needs at least one pattern"));
        }
        if self.filler.min > self.filler.max {
            return Err(Error::invalid("filler.min must be <= filler.max"));
        }
        let total: f64 = self.patterns.iter().map(|p| p.weight).sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::invalid("pattern weights must sum to a positive number"));
        }
        for p in &self.patterns {
            if p.weight < 0.0 || !p.weight.is_finite() {
                return Err(Error::invalid("pattern weights must be non-negative"));
            }
            if !content.contains(&p.parent_deprel) {
                return Err(Error::invalid(format!(
                    "pattern parent {:?} is not a content dependency",
                    p.parent_deprel
                )));
            }
            let wsum: f64 = p.outcomes.iter().map(|o| o.weight()).sum();
            if !(wsum > 0.0) || !wsum.is_finite() {
                return Err(Error::invalid(format!(
                    "outcome weights for {} must sum to a positive number",
                    p.parent_deprel
                )));
            }
            for o in &p.outcomes {
                if o.weight() < 0.0 {
                    return Err(Error::invalid("outcome weights must be non-negative"));
                }
                if let OutcomeSpec::Divergent { parent_deprel, .. } = o {
                    if !content.contains(parent_deprel) {
                        return Err(Error::invalid(format!(
                            "divergent parent {parent_deprel:?} is not a content dependency"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

struct TokenDraft {
    form: String,
    upos: String,
    head: usize,
    deprel: String,
}

fn write_sentence<W: Write>(
    w: &mut W,
    sentence_id: &str,
    tokens: &[TokenDraft],
) -> std::io::Result<()> {
    writeln!(w, "# sent_id = {sentence_id}")?;
    for (i, t) in tokens.iter().enumerate() {
        writeln!(
            w,
            "{}\t{}\t_\t{}\t_\t_\t{}\t{}\t_\t_",
            i + 1,
            t.form,
            t.upos,
            t.head,
            t.deprel
        )?;
    }
    writeln!(w)
}

/// Builds one side of a sentence. Returns (tokens, planted index,
/// root-verb index if present, child indices in listed order).
fn build_side(
    parent_deprel: &str,
    upos: &str,
    child_deprels: &[String],
    fillers: u32,
    pattern_tag: usize,
) -> (Vec<TokenDraft>, usize, Option<usize>, Vec<usize>) {
    let mut tokens = Vec::new();
    let (planted_idx, root_verb) = if parent_deprel == "root" {
        tokens.push(TokenDraft {
            form: format!("w{pattern_tag}"),
            upos: upos.to_string(),
            head: 0,
            deprel: "root".to_string(),
        });
        (1, None)
    } else {
        tokens.push(TokenDraft {
            form: "v0".to_string(),
            upos: "VERB".to_string(),
            head: 0,
            deprel: "root".to_string(),
        });
        tokens.push(TokenDraft {
            form: format!("w{pattern_tag}"),
            upos: upos.to_string(),
            head: 1,
            deprel: parent_deprel.to_string(),
        });
        (2, Some(1))
    };
    let mut children = Vec::new();
    for (j, d) in child_deprels.iter().enumerate() {
        tokens.push(TokenDraft {
            form: format!("k{j}"),
            upos: "NOUN".to_string(),
            head: planted_idx,
            deprel: d.clone(),
        });
        children.push(tokens.len());
    }
    for _ in 0..fillers {
        tokens.push(TokenDraft {
            form: ",".to_string(),
            upos: "PUNCT".to_string(),
            head: 1,
            deprel: "punct".to_string(),
        });
    }
    (tokens, planted_idx, root_verb, children)
}

/// Pairs source and target children: identical deprels first, remaining
/// positions in order. Returns (src_idx, tgt_idx) pairs.
fn match_children(
    src_deprels: &[String],
    src_idx: &[usize],
    tgt_deprels: &[String],
    tgt_idx: &[usize],
) -> Vec<(usize, usize)> {
    let mut used_tgt = vec![false; tgt_idx.len()];
    let mut pairs = Vec::new();
    let mut unmatched_src = Vec::new();
    for (i, d) in src_deprels.iter().enumerate() {
        let slot = (0..tgt_idx.len()).find(|&j| !used_tgt[j] && &tgt_deprels[j] == d);
        match slot {
            Some(j) => {
                used_tgt[j] = true;
                pairs.push((src_idx[i], tgt_idx[j]));
            }
            None => unmatched_src.push(i),
        }
    }
    let mut free_tgt = (0..tgt_idx.len()).filter(|&j| !used_tgt[j]);
    for i in unmatched_src {
        if let Some(j) = free_tgt.next() {
            pairs.push((src_idx[i], tgt_idx[j]));
        }
    }
    pairs.sort_unstable();
    pairs
}

/// Generates sentences [start, end) of the corpus into the three writers.
pub fn gen_range<WS: Write, WT: Write, WA: Write>(
    spec: &GeneratorSpec,
    start: u64,
    end: u64,
    src_w: &mut WS,
    tgt_w: &mut WT,
    align_w: &mut WA,
) -> Result<()> {
    spec.validate(&ContentDeprels::default())?;
    let pattern_cum: Vec<f64> = cumulative(spec.patterns.iter().map(|p| p.weight));
    let outcome_cums: Vec<Vec<f64>> = spec
        .patterns
        .iter()
        .map(|p| cumulative(p.outcomes.iter().map(|o| o.weight())))
        .collect();
    for i in start..end {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(i);
        let pi = pick(&pattern_cum, rng.gen::<f64>());
        let pat = &spec.patterns[pi];
        let oi = pick(&outcome_cums[pi], rng.gen::<f64>());
        let src_fill = rng.gen_range(spec.filler.min..=spec.filler.max);
        let tgt_fill = rng.gen_range(spec.filler.min..=spec.filler.max);

        let (src_tokens, s_planted, s_root, s_children) = build_side(
            &pat.parent_deprel,
            &pat.upos,
            &pat.child_deprels,
            src_fill,
            pi,
        );
        // Shape of the target side and whether the planted word aligns.
        let (t_parent, t_upos, t_children_deprels): (&str, &str, &[String]) =
            match &pat.outcomes[oi] {
                OutcomeSpec::Divergent {
                    parent_deprel,
                    upos,
                    child_deprels,
                    ..
                } => (parent_deprel, upos, child_deprels),
                _ => (&pat.parent_deprel, &pat.upos, &pat.child_deprels),
            };
        let (mut tgt_tokens, t_planted, t_root, t_children) =
            build_side(t_parent, t_upos, t_children_deprels, tgt_fill, pi);

        let mut links: Vec<(usize, usize)> = Vec::new();
        match &pat.outcomes[oi] {
            OutcomeSpec::Null { .. } => {}
            OutcomeSpec::Other { .. } => {
                links.push((s_planted, t_planted));
                tgt_tokens.push(TokenDraft {
                    form: "x0".to_string(),
                    upos: "NOUN".to_string(),
                    head: t_planted,
                    deprel: "conj".to_string(),
                });
                links.push((s_planted, tgt_tokens.len()));
            }
            _ => links.push((s_planted, t_planted)),
        }
        if let (Some(sr), Some(tr)) = (s_root, t_root) {
            links.push((sr, tr));
        }
        links.extend(match_children(
            &pat.child_deprels,
            &s_children,
            t_children_deprels,
            &t_children,
        ));
        links.sort_unstable();
        links.dedup();

        let sid = format!("s{i}");
        write_sentence(src_w, &sid, &src_tokens)?;
        write_sentence(tgt_w, &sid, &tgt_tokens)?;
        let line: Vec<String> = links
            .iter()
            .map(|&(s, t)| format!("{}-{}", s - 1, t - 1))
            .collect();
        writeln!(align_w, "{}", line.join(" "))?;
    }
    Ok(())
}

fn cumulative<I: Iterator<Item = f64>>(weights: I) -> Vec<f64> {
    let mut acc = 0.0;
    let mut cum: Vec<f64> = weights
        .map(|w| {
            acc += w;
            acc
        })
        .collect();
    let total = *cum.last().expect("non-empty weights");
    for c in &mut cum {
        *c /= total;
    }
    cum
}

fn pick(cum: &[f64], u: f64) -> usize {
    cum.partition_point(|&c| c < u).min(cum.len() - 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedCorpus {
    pub source: PathBuf,
    pub target: PathBuf,
    pub alignment: PathBuf,
}

/// Generates the full corpus into `dir` as source.conllu / target.conllu /
/// alignment.pharaoh.
pub fn gen_parallel_corpus(spec: &GeneratorSpec, dir: &Path) -> Result<GeneratedCorpus> {
    std::fs::create_dir_all(dir)?;
    let source = dir.join("source.conllu");
    let target = dir.join("target.conllu");
    let alignment = dir.join("alignment.pharaoh");
    let mut src_w = BufWriter::new(File::create(&source)?);
    let mut tgt_w = BufWriter::new(File::create(&target)?);
    let mut align_w = BufWriter::new(File::create(&alignment)?);
    gen_range(spec, 0, spec.sentences, &mut src_w, &mut tgt_w, &mut align_w)?;
    src_w.flush()?;
    tgt_w.flush()?;
    align_w.flush()?;
    Ok(GeneratedCorpus {
        source,
        target,
        alignment,
    })
}
