//! Word-based and arc-based translation patterns.
//!
//! A word-based pattern is the triple (parent dependency, POS tag, sorted
//! multiset of content child dependencies) of one word; it is compared
//! across an aligned word pair. An arc-based pattern is a source dependency
//! arc (head POS, relation, tail POS) compared against the undirected
//! dependency path between the two aligned target words.
//!
//! Serialized forms use tildes: `root~VERB~nsubj+xcomp`, `VERB~nsubj~NOUN`,
//! with `+` joining sorted child labels and `|` joining path labels.

use std::fmt;

use crate::align::{categorize_alignments, AlignedSentencePair, AlignmentCategory, Categorized};
use crate::error::{Error, Result};
use crate::treebank::DepTree;

pub const LEAF: &str = "leaf";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternType {
    Word,
    Arc,
}

impl fmt::Display for PatternType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternType::Word => write!(f, "word"),
            PatternType::Arc => write!(f, "arc"),
        }
    }
}

impl std::str::FromStr for PatternType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "word" => Ok(PatternType::Word),
            "arc" => Ok(PatternType::Arc),
            other => Err(Error::invalid(format!("unknown pattern type {other:?}"))),
        }
    }
}

/// Word-based pattern: parent dependency, POS tag, sorted child dependencies.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WordPattern {
    pub parent_deprel: String,
    pub upos: String,
    /// Sorted multiset; empty means "leaf".
    pub child_deprels: Vec<String>,
}

impl WordPattern {
    pub fn new(
        parent_deprel: impl Into<String>,
        upos: impl Into<String>,
        mut child_deprels: Vec<String>,
    ) -> Self {
        child_deprels.sort();
        WordPattern {
            parent_deprel: parent_deprel.into(),
            upos: upos.into(),
            child_deprels,
        }
    }
}

impl fmt::Display for WordPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}~{}~", self.parent_deprel, self.upos)?;
        if self.child_deprels.is_empty() {
            write!(f, "{LEAF}")
        } else {
            write!(f, "{}", self.child_deprels.join("+"))
        }
    }
}

/// Arc-based source pattern: head POS, arc relation, tail POS.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcPattern {
    pub head_upos: String,
    pub deprel: String,
    pub tail_upos: String,
}

impl ArcPattern {
    pub fn new(
        head_upos: impl Into<String>,
        deprel: impl Into<String>,
        tail_upos: impl Into<String>,
    ) -> Self {
        ArcPattern {
            head_upos: head_upos.into(),
            deprel: deprel.into(),
            tail_upos: tail_upos.into(),
        }
    }
}

impl fmt::Display for ArcPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}~{}~{}", self.head_upos, self.deprel, self.tail_upos)
    }
}

/// Arc-based target pattern: the undirected label path between the target
/// words aligned to the arc's head and tail, plus their POS tags.
///
/// The label sequence is canonicalized to the lexicographically smaller of
/// (path, reversed path): direction markers are dropped, so a path and its
/// reverse denote the same structure.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TargetPathPattern {
    pub head_upos: String,
    pub labels: Vec<String>,
    pub tail_upos: String,
}

impl TargetPathPattern {
    pub fn new(
        head_upos: impl Into<String>,
        labels: Vec<String>,
        tail_upos: impl Into<String>,
    ) -> Self {
        TargetPathPattern {
            head_upos: head_upos.into(),
            labels: canonical_path(labels),
            tail_upos: tail_upos.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Lexicographically smaller of (path, reversed path).
pub fn canonical_path(labels: Vec<String>) -> Vec<String> {
    let rev: Vec<String> = labels.iter().rev().cloned().collect();
    if rev < labels {
        rev
    } else {
        labels
    }
}

impl fmt::Display for TargetPathPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}~{}~{}",
            self.head_upos,
            self.labels.join("|"),
            self.tail_upos
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SourcePattern {
    Word(WordPattern),
    Arc(ArcPattern),
}

impl SourcePattern {
    pub fn pattern_type(&self) -> PatternType {
        match self {
            SourcePattern::Word(_) => PatternType::Word,
            SourcePattern::Arc(_) => PatternType::Arc,
        }
    }
}

impl fmt::Display for SourcePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourcePattern::Word(p) => p.fmt(f),
            SourcePattern::Arc(p) => p.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TargetPattern {
    Word(WordPattern),
    Path(TargetPathPattern),
}

impl fmt::Display for TargetPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetPattern::Word(p) => p.fmt(f),
            TargetPattern::Path(p) => p.fmt(f),
        }
    }
}

/// True when source and target have the same structure. Word-based: triple
/// equality. Arc-based: a single-arc path with the same relation and the
/// same POS pair. Comparing across pattern types is an error.
pub fn is_convergent(source: &SourcePattern, target: &TargetPattern) -> Result<bool> {
    match (source, target) {
        (SourcePattern::Word(s), TargetPattern::Word(t)) => Ok(s == t),
        (SourcePattern::Arc(s), TargetPattern::Path(t)) => Ok(t.labels.len() == 1
            && t.labels[0] == s.deprel
            && t.head_upos == s.head_upos
            && t.tail_upos == s.tail_upos),
        _ => Err(Error::invalid(
            "pattern type mismatch between source and target",
        )),
    }
}

/// How one pattern occurrence was translated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// One-to-one aligned, same structure; carries the serialized target.
    Convergent(String),
    /// One-to-one aligned, different structure; carries the serialized target.
    Divergent(String),
    /// The source word (or an arc endpoint) is an unaligned deletion.
    Null,
    /// Any non-one-to-one alignment.
    Other,
}

impl Outcome {
    /// Report label; matches the four-way breakdown naming.
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Convergent(_) => "o2o:conv",
            Outcome::Divergent(_) => "o2o:div",
            Outcome::Null => "null",
            Outcome::Other => "others",
        }
    }

    pub fn target(&self) -> Option<&str> {
        match self {
            Outcome::Convergent(t) | Outcome::Divergent(t) => Some(t),
            _ => None,
        }
    }
}

/// One extracted pattern occurrence. Source pattern and target pattern are
/// stored in serialized form; equality of the serialized forms is exactly
/// structural convergence for both pattern types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternOccurrence {
    pub sentence_id: String,
    pub pattern_type: PatternType,
    pub source: String,
    pub outcome: Outcome,
    /// Word-based: (token, None). Arc-based: (head, Some(tail)).
    pub tokens: (usize, Option<usize>),
}

#[derive(Debug, Clone)]
pub struct PatternConfig {
    /// Restrict child dependencies in word patterns to the content set.
    pub children_content_only: bool,
}

impl Default for PatternConfig {
    fn default() -> Self {
        PatternConfig {
            children_content_only: true,
        }
    }
}

fn word_pattern_at(
    tree: &DepTree,
    index: usize,
    content_mask: &std::collections::BTreeSet<usize>,
    cfg: &PatternConfig,
) -> WordPattern {
    let tok = tree.token(index);
    let children: Vec<String> = tree
        .children_of(index)
        .iter()
        .filter(|&&c| !cfg.children_content_only || content_mask.contains(&c))
        .map(|&c| tree.token(c).deprel.clone())
        .collect();
    WordPattern::new(tok.deprel.clone(), tok.upos.clone(), children)
}

/// Undirected label path between two distinct nodes of the target tree,
/// read from `from` to `to`, then canonicalized. Each step contributes the
/// deprel of the lower node of the edge.
pub fn target_path(tree: &DepTree, from: usize, to: usize) -> Vec<String> {
    debug_assert_ne!(from, to);
    let chain = |mut i: usize| {
        let mut v = vec![i];
        while tree.token(i).head != 0 {
            i = tree.token(i).head;
            v.push(i);
        }
        v
    };
    let ca = chain(from);
    let cb = chain(to);
    let in_ca: std::collections::BTreeMap<usize, usize> =
        ca.iter().enumerate().map(|(depth, &n)| (n, depth)).collect();
    // First node of cb that also lies on ca is the lowest common ancestor.
    let (depth_b, depth_a) = cb
        .iter()
        .enumerate()
        .find_map(|(db, n)| in_ca.get(n).map(|&da| (db, da)))
        .expect("two nodes of one tree always share an ancestor");
    // Edge (node, parent) carries deprel(node): climb from `from` to the
    // ancestor, then descend to `to`.
    let mut labels: Vec<String> = ca[..depth_a]
        .iter()
        .map(|&n| tree.token(n).deprel.clone())
        .collect();
    labels.extend(
        cb[..depth_b]
            .iter()
            .rev()
            .map(|&n| tree.token(n).deprel.clone()),
    );
    labels
}

/// Emits one occurrence per source content word.
pub fn extract_word_patterns(
    pair: &AlignedSentencePair,
    cfg: &PatternConfig,
) -> Vec<PatternOccurrence> {
    let cats = categorize_alignments(pair);
    extract_word_patterns_with(pair, &cats, cfg)
}

pub fn extract_word_patterns_with(
    pair: &AlignedSentencePair,
    cats: &Categorized,
    cfg: &PatternConfig,
) -> Vec<PatternOccurrence> {
    let mut out = Vec::with_capacity(pair.src_content.len());
    for &i in &pair.src_content {
        let source = word_pattern_at(&pair.source, i, &pair.src_content, cfg);
        let outcome = match cats.src[&i] {
            AlignmentCategory::O2O => {
                let j = cats.o2o_target(i).expect("o2o word has a target");
                let target = word_pattern_at(&pair.target, j, &pair.tgt_content, cfg);
                let serialized = target.to_string();
                if target == source {
                    Outcome::Convergent(serialized)
                } else {
                    Outcome::Divergent(serialized)
                }
            }
            AlignmentCategory::Src2Null => Outcome::Null,
            _ => Outcome::Other,
        };
        out.push(PatternOccurrence {
            sentence_id: pair.source.sentence_id.clone(),
            pattern_type: PatternType::Word,
            source: source.to_string(),
            outcome,
            tokens: (i, None),
        });
    }
    out
}

/// Emits one occurrence per source arc whose head and tail are both content
/// words. A target pattern exists only when both endpoints are one-to-one
/// aligned; an unaligned endpoint gives `Null`, anything else `Other`.
pub fn extract_arc_patterns(
    pair: &AlignedSentencePair,
    cfg: &PatternConfig,
) -> Vec<PatternOccurrence> {
    let cats = categorize_alignments(pair);
    extract_arc_patterns_with(pair, &cats, cfg)
}

pub fn extract_arc_patterns_with(
    pair: &AlignedSentencePair,
    cats: &Categorized,
    _cfg: &PatternConfig,
) -> Vec<PatternOccurrence> {
    let mut out = Vec::new();
    for tail in 1..=pair.source.len() {
        let head = pair.source.token(tail).head;
        if head == 0 {
            continue;
        }
        if !pair.src_content.contains(&tail) || !pair.src_content.contains(&head) {
            continue;
        }
        let source = ArcPattern::new(
            pair.source.token(head).upos.clone(),
            pair.source.token(tail).deprel.clone(),
            pair.source.token(tail).upos.clone(),
        );
        let head_cat = cats.src[&head];
        let tail_cat = cats.src[&tail];
        let outcome = if head_cat == AlignmentCategory::O2O && tail_cat == AlignmentCategory::O2O {
            let th = cats.o2o_target(head).expect("o2o head has a target");
            let tt = cats.o2o_target(tail).expect("o2o tail has a target");
            let labels = target_path(&pair.target, th, tt);
            let target = TargetPathPattern::new(
                pair.target.token(th).upos.clone(),
                labels,
                pair.target.token(tt).upos.clone(),
            );
            let convergent =
                is_convergent(&SourcePattern::Arc(source.clone()), &TargetPattern::Path(target.clone()))
                    .expect("same pattern type");
            let serialized = target.to_string();
            if convergent {
                Outcome::Convergent(serialized)
            } else {
                Outcome::Divergent(serialized)
            }
        } else if head_cat == AlignmentCategory::Src2Null || tail_cat == AlignmentCategory::Src2Null
        {
            Outcome::Null
        } else {
            Outcome::Other
        };
        out.push(PatternOccurrence {
            sentence_id: pair.source.sentence_id.clone(),
            pattern_type: PatternType::Arc,
            source: source.to_string(),
            outcome,
            tokens: (head, Some(tail)),
        });
    }
    out
}

/// Four-way percentage breakdown of the outcomes of one source pattern.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourWayBreakdown {
    pub o2o_conv: f64,
    pub o2o_div: f64,
    pub null: f64,
    pub others: f64,
}

/// Percentages over all occurrences of `pattern`, summing to 100.
pub fn per_pattern_outcome_breakdown(
    occurrences: &[PatternOccurrence],
    pattern: &str,
) -> Result<FourWayBreakdown> {
    let mut conv = 0u64;
    let mut div = 0u64;
    let mut null = 0u64;
    let mut others = 0u64;
    for occ in occurrences.iter().filter(|o| o.source == pattern) {
        match occ.outcome {
            Outcome::Convergent(_) => conv += 1,
            Outcome::Divergent(_) => div += 1,
            Outcome::Null => null += 1,
            Outcome::Other => others += 1,
        }
    }
    let total = conv + div + null + others;
    if total == 0 {
        return Err(Error::UnknownPattern(pattern.to_string()));
    }
    let t = total as f64;
    Ok(FourWayBreakdown {
        o2o_conv: conv as f64 * 100.0 / t,
        o2o_div: div as f64 * 100.0 / t,
        null: null as f64 * 100.0 / t,
        others: others as f64 * 100.0 / t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::align::{parse_pharaoh, ContentDeprels};
    use crate::treebank::Token;

    fn tree(tokens: Vec<(usize, &str, &str, usize, &str)>) -> DepTree {
        let toks = tokens
            .into_iter()
            .map(|(i, form, upos, head, deprel)| Token::new(i, form, upos, head, deprel))
            .collect();
        let mut warnings = Vec::new();
        DepTree::from_tokens("t".to_string(), vec![], toks, true, &mut warnings).unwrap()
    }

    fn pair(src: DepTree, tgt: DepTree, pharaoh: &str) -> AlignedSentencePair {
        let content = ContentDeprels::default();
        let links = parse_pharaoh(pharaoh, src.len(), tgt.len()).unwrap();
        AlignedSentencePair::new(src, tgt, links, &content).unwrap()
    }

    /// Control-verb construction: "Readers are cautioned to place reliance"
    /// against a target that adds an oblique, giving the divergent pair
    /// root~VERB~nsubj+xcomp -> root~VERB~nsubj+obl+xcomp and the arc pair
    /// VERB~nsubj~NOUN -> VERB~obl~NOUN.
    fn control_verb_pair() -> AlignedSentencePair {
        let src = tree(vec![
            (1, "readers", "NOUN", 3, "nsubj"),
            (2, "are", "AUX", 3, "aux"),
            (3, "cautioned", "VERB", 0, "root"),
            (4, "to", "PART", 5, "mark"),
            (5, "place", "VERB", 3, "xcomp"),
            (6, "reliance", "NOUN", 5, "obj"),
        ]);
        let tgt = tree(vec![
            (1, "il", "PRON", 3, "nsubj"),
            (2, "est", "AUX", 3, "aux"),
            (3, "recommande", "VERB", 0, "root"),
            (4, "aux", "ADP", 5, "case"),
            (5, "lecteurs", "NOUN", 3, "obl"),
            (6, "de", "PART", 7, "mark"),
            (7, "accorder", "VERB", 3, "xcomp"),
            (8, "importance", "NOUN", 7, "obj"),
        ]);
        pair(src, tgt, "2-2 0-4 4-6 5-7")
    }

    #[test]
    fn control_verb_word_divergence() {
        let p = control_verb_pair();
        let occs = extract_word_patterns(&p, &PatternConfig::default());
        let root = occs
            .iter()
            .find(|o| o.source == "root~VERB~nsubj+xcomp")
            .unwrap();
        assert_eq!(
            root.outcome,
            Outcome::Divergent("root~VERB~nsubj+obl+xcomp".to_string())
        );
    }

    #[test]
    fn control_verb_arc_divergence() {
        let p = control_verb_pair();
        let occs = extract_arc_patterns(&p, &PatternConfig::default());
        let nsubj = occs
            .iter()
            .find(|o| o.source == "VERB~nsubj~NOUN")
            .unwrap();
        assert_eq!(nsubj.outcome, Outcome::Divergent("VERB~obl~NOUN".to_string()));
        // The xcomp and obj arcs carry over unchanged.
        let xcomp = occs.iter().find(|o| o.source == "VERB~xcomp~VERB").unwrap();
        assert_eq!(
            xcomp.outcome,
            Outcome::Convergent("VERB~xcomp~VERB".to_string())
        );
    }

    #[test]
    fn leaf_adjective_convergence() {
        let src = tree(vec![
            (1, "black", "ADJ", 2, "amod"),
            (2, "cats", "NOUN", 0, "root"),
        ]);
        let tgt = tree(vec![
            (1, "chats", "NOUN", 0, "root"),
            (2, "noirs", "ADJ", 1, "amod"),
        ]);
        let p = pair(src, tgt, "0-1 1-0");
        let occs = extract_word_patterns(&p, &PatternConfig::default());
        let adj = occs.iter().find(|o| o.source == "amod~ADJ~leaf").unwrap();
        assert_eq!(adj.outcome, Outcome::Convergent("amod~ADJ~leaf".to_string()));
    }

    #[test]
    fn unaligned_source_word_is_null() {
        let src = tree(vec![
            (1, "she", "PRON", 2, "nsubj"),
            (2, "runs", "VERB", 0, "root"),
        ]);
        let tgt = tree(vec![(1, "court", "VERB", 0, "root")]);
        let p = pair(src, tgt, "1-0");
        let occs = extract_word_patterns(&p, &PatternConfig::default());
        let she = occs.iter().find(|o| o.source == "nsubj~PRON~leaf").unwrap();
        assert_eq!(she.outcome, Outcome::Null);
    }

    #[test]
    fn non_o2o_is_other() {
        let src = tree(vec![(1, "seek", "VERB", 0, "root")]);
        let tgt = tree(vec![
            (1, "ont", "VERB", 0, "root"),
            (2, "but", "NOUN", 1, "obl"),
        ]);
        let p = pair(src, tgt, "0-0 0-1");
        let occs = extract_word_patterns(&p, &PatternConfig::default());
        assert_eq!(occs[0].outcome, Outcome::Other);
    }

    #[test]
    fn children_restricted_to_content_set() {
        // "are" (aux) and "to" (mark) must not appear among the children.
        let p = control_verb_pair();
        let occs = extract_word_patterns(&p, &PatternConfig::default());
        assert!(occs.iter().any(|o| o.source == "root~VERB~nsubj+xcomp"));
        let all = PatternConfig {
            children_content_only: false,
        };
        let occs = extract_word_patterns(&p, &all);
        assert!(occs.iter().any(|o| o.source == "root~VERB~aux+nsubj+xcomp"));
    }

    #[test]
    fn target_path_distance_three() {
        // poursuite(root) -> faite(acl) -> meute(obl) -> chiens(nmod)
        let tgt = tree(vec![
            (1, "la", "DET", 2, "det"),
            (2, "poursuite", "NOUN", 0, "root"),
            (3, "faite", "VERB", 2, "acl"),
            (4, "par", "ADP", 5, "case"),
            (5, "meute", "NOUN", 3, "obl"),
            (6, "de", "ADP", 7, "case"),
            (7, "chiens", "NOUN", 5, "nmod"),
        ]);
        // Brute-force check: BFS over the undirected tree gives distance 3.
        let labels = target_path(&tgt, 2, 7);
        assert_eq!(labels, vec!["acl", "obl", "nmod"]);
        let labels_rev = target_path(&tgt, 7, 2);
        assert_eq!(labels_rev, vec!["nmod", "obl", "acl"]);
        // Canonicalization makes both reads identical.
        assert_eq!(canonical_path(labels), canonical_path(labels_rev));
    }

    #[test]
    fn target_path_through_common_ancestor() {
        let tgt = tree(vec![
            (1, "a", "NOUN", 3, "nsubj"),
            (2, "b", "NOUN", 3, "obj"),
            (3, "c", "VERB", 0, "root"),
        ]);
        assert_eq!(target_path(&tgt, 1, 2), vec!["nsubj", "obj"]);
        assert_eq!(target_path(&tgt, 3, 1), vec!["nsubj"]);
        assert_eq!(target_path(&tgt, 1, 3), vec!["nsubj"]);
    }

    #[test]
    fn convergence_decisions() {
        let w = |s: &str, u: &str, c: Vec<&str>| {
            WordPattern::new(s, u, c.into_iter().map(String::from).collect())
        };
        assert!(is_convergent(
            &SourcePattern::Word(w("amod", "ADJ", vec![])),
            &TargetPattern::Word(w("amod", "ADJ", vec![])),
        )
        .unwrap());
        let arc = ArcPattern::new("VERB", "nsubj", "NOUN");
        assert!(!is_convergent(
            &SourcePattern::Arc(arc.clone()),
            &TargetPattern::Path(TargetPathPattern::new(
                "VERB",
                vec!["obl".to_string()],
                "NOUN"
            )),
        )
        .unwrap());
        // Path length != 1 is never convergent.
        assert!(!is_convergent(
            &SourcePattern::Arc(arc.clone()),
            &TargetPattern::Path(TargetPathPattern::new(
                "VERB",
                vec!["nsubj".to_string(), "conj".to_string()],
                "NOUN"
            )),
        )
        .unwrap());
        // Type mismatch is an error.
        assert!(is_convergent(
            &SourcePattern::Arc(arc),
            &TargetPattern::Word(w("amod", "ADJ", vec![])),
        )
        .is_err());
    }

    #[test]
    fn breakdown_percentages() {
        let p = "x~X~leaf";
        let mk = |outcome| PatternOccurrence {
            sentence_id: "s".to_string(),
            pattern_type: PatternType::Word,
            source: p.to_string(),
            outcome,
            tokens: (1, None),
        };
        let occs = vec![
            mk(Outcome::Convergent(p.to_string())),
            mk(Outcome::Divergent("y~Y~leaf".to_string())),
            mk(Outcome::Null),
            mk(Outcome::Other),
        ];
        let b = per_pattern_outcome_breakdown(&occs, p).unwrap();
        assert_eq!(
            (b.o2o_conv, b.o2o_div, b.null, b.others),
            (25.0, 25.0, 25.0, 25.0)
        );
        assert!(per_pattern_outcome_breakdown(&occs, "nope").is_err());
    }

    #[test]
    fn identity_pair_is_all_convergent() {
        let src = tree(vec![
            (1, "a", "NOUN", 2, "nsubj"),
            (2, "b", "VERB", 0, "root"),
            (3, "c", "NOUN", 2, "obj"),
        ]);
        let p = pair(src.clone(), src, "0-0 1-1 2-2");
        for occ in extract_word_patterns(&p, &PatternConfig::default())
            .into_iter()
            .chain(extract_arc_patterns(&p, &PatternConfig::default()))
        {
            assert!(
                matches!(occ.outcome, Outcome::Convergent(_)),
                "{occ:?} should be convergent"
            );
        }
    }

    #[test]
    fn outcome_exhaustiveness() {
        let p = control_verb_pair();
        let word = extract_word_patterns(&p, &PatternConfig::default());
        assert_eq!(word.len(), p.src_content.len());
        let arcs = extract_arc_patterns(&p, &PatternConfig::default());
        let content_arcs = (1..=p.source.len())
            .filter(|&t| {
                let h = p.source.token(t).head;
                h != 0 && p.src_content.contains(&t) && p.src_content.contains(&h)
            })
            .count();
        assert_eq!(arcs.len(), content_arcs);
    }
}
