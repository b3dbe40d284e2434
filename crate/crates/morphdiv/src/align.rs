//! Word alignments, content-word identification and alignment categories.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::treebank::{strip_deprel_subtype, DepTree};

/// One alignment link; indices are 1-based token positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AlignmentLink {
    pub src: usize,
    pub tgt: usize,
}

/// Alignment status of a single content word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AlignmentCategory {
    /// Linked exactly once, to a word that is itself linked exactly once.
    O2O,
    /// Source content word with no surviving link (deletion).
    Src2Null,
    /// Target content word with no surviving link (insertion).
    Null2Tgt,
    /// Everything else, e.g. one-to-many.
    Other,
}

/// The set of dependency relations that mark content words. Membership is
/// tested on the subtype-stripped label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContentDeprels(BTreeSet<String>);

pub const DEFAULT_CONTENT_DEPRELS: [&str; 18] = [
    "root", "nsubj", "obj", "iobj", "obl", "nmod", "appos", "nummod", "amod", "acl", "advcl",
    "advmod", "ccomp", "xcomp", "conj", "compound", "flat", "parataxis",
];

impl Default for ContentDeprels {
    fn default() -> Self {
        ContentDeprels(
            DEFAULT_CONTENT_DEPRELS
                .iter()
                .map(|s| s.to_string())
                .collect(),
        )
    }
}

impl ContentDeprels {
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(labels: I) -> Self {
        ContentDeprels(labels.into_iter().map(Into::into).collect())
    }

    /// Loads a newline-separated label file; '#' lines and blanks are skipped.
    pub fn from_reader<R: BufRead>(r: R) -> Result<Self> {
        let mut set = BTreeSet::new();
        for line in r.lines() {
            let line = line?;
            let label = line.trim();
            if label.is_empty() || label.starts_with('#') {
                continue;
            }
            set.insert(label.to_string());
        }
        Ok(ContentDeprels(set))
    }

    pub fn contains(&self, deprel: &str) -> bool {
        self.0.contains(strip_deprel_subtype(deprel))
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|s| s.as_str())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Parses one Pharaoh-format line ("i-j" pairs, 0-based) into 1-based links.
/// Duplicate pairs collapse; out-of-range indices are errors.
pub fn parse_pharaoh(line: &str, src_len: usize, tgt_len: usize) -> Result<BTreeSet<AlignmentLink>> {
    let mut links = BTreeSet::new();
    for piece in line.split_whitespace() {
        let (s, t) = piece
            .split_once('-')
            .ok_or_else(|| Error::invalid(format!("malformed alignment pair {piece:?}")))?;
        let s: usize = s
            .parse()
            .map_err(|_| Error::invalid(format!("malformed alignment pair {piece:?}")))?;
        let t: usize = t
            .parse()
            .map_err(|_| Error::invalid(format!("malformed alignment pair {piece:?}")))?;
        if s >= src_len {
            return Err(Error::invalid(format!(
                "alignment source index {s} out of range (sentence length {src_len})"
            )));
        }
        if t >= tgt_len {
            return Err(Error::invalid(format!(
                "alignment target index {t} out of range (sentence length {tgt_len})"
            )));
        }
        links.insert(AlignmentLink {
            src: s + 1,
            tgt: t + 1,
        });
    }
    Ok(links)
}

/// Indices of tokens whose (subtype-stripped) deprel is in the content set.
pub fn content_words(tree: &DepTree, content: &ContentDeprels) -> BTreeSet<usize> {
    tree.tokens
        .iter()
        .filter(|t| content.contains(&t.deprel))
        .map(|t| t.index)
        .collect()
}

/// A sentence pair with its alignment and content masks.
#[derive(Debug, Clone)]
pub struct AlignedSentencePair {
    pub source: DepTree,
    pub target: DepTree,
    pub links: BTreeSet<AlignmentLink>,
    pub src_content: BTreeSet<usize>,
    pub tgt_content: BTreeSet<usize>,
}

impl AlignedSentencePair {
    pub fn new(
        source: DepTree,
        target: DepTree,
        links: BTreeSet<AlignmentLink>,
        content: &ContentDeprels,
    ) -> Result<Self> {
        for l in &links {
            if l.src == 0 || l.src > source.len() || l.tgt == 0 || l.tgt > target.len() {
                return Err(Error::invalid(format!(
                    "alignment link {}-{} out of range (lengths {}, {})",
                    l.src,
                    l.tgt,
                    source.len(),
                    target.len()
                )));
            }
        }
        let src_content = content_words(&source, content);
        let tgt_content = content_words(&target, content);
        Ok(AlignedSentencePair {
            source,
            target,
            links,
            src_content,
            tgt_content,
        })
    }

    /// Links whose both endpoints are content words; all categorization and
    /// pattern extraction works on these.
    pub fn content_links(&self) -> BTreeSet<AlignmentLink> {
        self.links
            .iter()
            .filter(|l| self.src_content.contains(&l.src) && self.tgt_content.contains(&l.tgt))
            .copied()
            .collect()
    }
}

/// Per-word alignment categories for one sentence pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Categorized {
    pub src: BTreeMap<usize, AlignmentCategory>,
    pub tgt: BTreeMap<usize, AlignmentCategory>,
    /// Surviving links (both endpoints content words).
    pub links: BTreeSet<AlignmentLink>,
}

impl Categorized {
    /// For an O2O source word, its unique aligned target word.
    pub fn o2o_target(&self, src: usize) -> Option<usize> {
        if self.src.get(&src) != Some(&AlignmentCategory::O2O) {
            return None;
        }
        self.links.iter().find(|l| l.src == src).map(|l| l.tgt)
    }
}

/// Assigns every content word exactly one category. Links touching
/// non-content words are dropped first.
pub fn categorize_alignments(pair: &AlignedSentencePair) -> Categorized {
    let links = pair.content_links();
    let mut src_degree: BTreeMap<usize, usize> = BTreeMap::new();
    let mut tgt_degree: BTreeMap<usize, usize> = BTreeMap::new();
    for l in &links {
        *src_degree.entry(l.src).or_insert(0) += 1;
        *tgt_degree.entry(l.tgt).or_insert(0) += 1;
    }
    let mut src = BTreeMap::new();
    for &i in &pair.src_content {
        let cat = match src_degree.get(&i) {
            None => AlignmentCategory::Src2Null,
            Some(1) => {
                let tgt = links.iter().find(|l| l.src == i).map(|l| l.tgt).unwrap();
                if tgt_degree[&tgt] == 1 {
                    AlignmentCategory::O2O
                } else {
                    AlignmentCategory::Other
                }
            }
            Some(_) => AlignmentCategory::Other,
        };
        src.insert(i, cat);
    }
    let mut tgt = BTreeMap::new();
    for &j in &pair.tgt_content {
        let cat = match tgt_degree.get(&j) {
            None => AlignmentCategory::Null2Tgt,
            Some(1) => {
                let s = links.iter().find(|l| l.tgt == j).map(|l| l.src).unwrap();
                if src_degree[&s] == 1 {
                    AlignmentCategory::O2O
                } else {
                    AlignmentCategory::Other
                }
            }
            Some(_) => AlignmentCategory::Other,
        };
        tgt.insert(j, cat);
    }
    Categorized { src, tgt, links }
}

/// Corpus-level alignment-category tallies; merge is entrywise sum.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CategoryCounts {
    pub o2o: u64,
    pub src2null: u64,
    pub other: u64,
    /// Unaligned target content words.
    pub null2tgt: u64,
    pub src_content_total: u64,
    pub tgt_content_total: u64,
}

impl CategoryCounts {
    pub fn add_pair(&mut self, cats: &Categorized) {
        for cat in cats.src.values() {
            self.src_content_total += 1;
            match cat {
                AlignmentCategory::O2O => self.o2o += 1,
                AlignmentCategory::Src2Null => self.src2null += 1,
                AlignmentCategory::Other => self.other += 1,
                AlignmentCategory::Null2Tgt => unreachable!("source words cannot be null2tgt"),
            }
        }
        for cat in cats.tgt.values() {
            self.tgt_content_total += 1;
            if *cat == AlignmentCategory::Null2Tgt {
                self.null2tgt += 1;
            }
        }
    }

    pub fn merge(&mut self, other: &CategoryCounts) {
        self.o2o += other.o2o;
        self.src2null += other.src2null;
        self.other += other.other;
        self.null2tgt += other.null2tgt;
        self.src_content_total += other.src_content_total;
        self.tgt_content_total += other.tgt_content_total;
    }

    /// Percentages relative to the total number of source content words.
    /// o2o + src2null + other sum to 100; null2tgt is reported on the same
    /// base and may exceed the complement.
    pub fn percentages(&self) -> Result<CategoryPercentages> {
        if self.src_content_total == 0 {
            return Err(Error::stats(
                "category distribution undefined: corpus has no source content words",
            ));
        }
        let base = self.src_content_total as f64;
        Ok(CategoryPercentages {
            o2o: self.o2o as f64 * 100.0 / base,
            src2null: self.src2null as f64 * 100.0 / base,
            other: self.other as f64 * 100.0 / base,
            null2tgt: self.null2tgt as f64 * 100.0 / base,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CategoryPercentages {
    pub o2o: f64,
    pub src2null: f64,
    pub other: f64,
    pub null2tgt: f64,
}

/// Content-word and surviving-alignment totals over a corpus.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ContentWordStats {
    pub src_content: u64,
    pub src_tokens: u64,
    pub tgt_content: u64,
    pub tgt_tokens: u64,
    /// Links with both endpoints content words.
    pub links_surviving: u64,
    pub links_total: u64,
}

impl ContentWordStats {
    pub fn add_pair(&mut self, pair: &AlignedSentencePair) {
        self.src_tokens += pair.source.len() as u64;
        self.tgt_tokens += pair.target.len() as u64;
        self.src_content += pair.src_content.len() as u64;
        self.tgt_content += pair.tgt_content.len() as u64;
        self.links_total += pair.links.len() as u64;
        self.links_surviving += pair.content_links().len() as u64;
    }

    pub fn merge(&mut self, other: &ContentWordStats) {
        self.src_content += other.src_content;
        self.src_tokens += other.src_tokens;
        self.tgt_content += other.tgt_content;
        self.tgt_tokens += other.tgt_tokens;
        self.links_surviving += other.links_surviving;
        self.links_total += other.links_total;
    }

    pub fn src_content_pct(&self) -> Option<f64> {
        pct(self.src_content, self.src_tokens)
    }

    pub fn tgt_content_pct(&self) -> Option<f64> {
        pct(self.tgt_content, self.tgt_tokens)
    }

    pub fn alignment_survival_pct(&self) -> Option<f64> {
        pct(self.links_surviving, self.links_total)
    }
}

fn pct(num: u64, den: u64) -> Option<f64> {
    if den == 0 {
        None
    } else {
        Some(num as f64 * 100.0 / den as f64)
    }
}
