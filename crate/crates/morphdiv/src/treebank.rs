//! CoNLL-U parsing, validation and serialization.
//!
//! Only the ID, FORM, UPOS, HEAD and DEPREL columns are interpreted; the
//! remaining columns are carried through untouched so that a parsed corpus
//! can be re-emitted without information loss. Multiword-token ranges
//! (`i-j`) and empty nodes (`i.1`) are skipped: alignment indices always
//! refer to base token positions.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// The 17 Universal Dependencies POS tags.
pub const UPOS_TAGS: [&str; 17] = [
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM", "PART", "PRON", "PROPN",
    "PUNCT", "SCONJ", "SYM", "VERB", "X",
];

pub fn is_upos_tag(tag: &str) -> bool {
    UPOS_TAGS.contains(&tag)
}

/// Drops the subtype of a dependency label: everything from the first ':'
/// onward. Labels without a subtype are returned unchanged.
pub fn strip_deprel_subtype(deprel: &str) -> &str {
    match deprel.find(':') {
        Some(pos) => &deprel[..pos],
        None => deprel,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// 1-based position in the sentence.
    pub index: usize,
    pub form: String,
    pub upos: String,
    /// 0 means attached to the artificial root.
    pub head: usize,
    pub deprel: String,
    // Passthrough columns, kept verbatim for serialization.
    pub lemma: String,
    pub xpos: String,
    pub feats: String,
    pub deps: String,
    pub misc: String,
}

impl Token {
    pub fn new(index: usize, form: &str, upos: &str, head: usize, deprel: &str) -> Self {
        Token {
            index,
            form: form.to_string(),
            upos: upos.to_string(),
            head,
            deprel: deprel.to_string(),
            lemma: "_".to_string(),
            xpos: "_".to_string(),
            feats: "_".to_string(),
            deps: "_".to_string(),
            misc: "_".to_string(),
        }
    }
}

/// One parsed sentence: tokens plus the derived tree structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepTree {
    pub sentence_id: String,
    pub comments: Vec<String>,
    pub tokens: Vec<Token>,
    pub root_index: usize,
    /// children[i] lists the dependents of token i (1-based; slot 0 unused).
    pub children: Vec<Vec<usize>>,
}

impl DepTree {
    /// Builds a tree from tokens, checking the tree invariants. In lenient
    /// mode extra roots are reattached to the first root and a warning is
    /// pushed to `warnings`.
    pub fn from_tokens(
        sentence_id: String,
        comments: Vec<String>,
        mut tokens: Vec<Token>,
        strict: bool,
        warnings: &mut Vec<String>,
    ) -> Result<Self> {
        let n = tokens.len();
        if n == 0 {
            return Err(Error::invalid(format!(
                "sentence {sentence_id}: no tokens"
            )));
        }
        for tok in &tokens {
            if tok.head > n {
                return Err(Error::invalid(format!(
                    "sentence {sentence_id}: token {} head {} out of range (len {n})",
                    tok.index, tok.head
                )));
            }
            if tok.head == tok.index {
                return Err(Error::invalid(format!(
                    "sentence {sentence_id}: token {} is its own head (cycle)",
                    tok.index
                )));
            }
        }
        let roots: Vec<usize> = tokens
            .iter()
            .filter(|t| t.head == 0)
            .map(|t| t.index)
            .collect();
        let root_index = match roots.len() {
            0 => {
                return Err(Error::invalid(format!(
                    "sentence {sentence_id}: no root token"
                )))
            }
            1 => roots[0],
            _ if strict => {
                return Err(Error::invalid(format!(
                    "sentence {sentence_id}: multiple roots at {roots:?}"
                )))
            }
            _ => {
                let keep = roots[0];
                for &extra in &roots[1..] {
                    tokens[extra - 1].head = keep;
                }
                warnings.push(format!(
                    "sentence {sentence_id}: reattached extra roots {:?} to token {keep}",
                    &roots[1..]
                ));
                keep
            }
        };
        let mut children = vec![Vec::new(); n + 1];
        for tok in &tokens {
            if tok.head > 0 {
                children[tok.head].push(tok.index);
            }
        }
        let tree = DepTree {
            sentence_id,
            comments,
            tokens,
            root_index,
            children,
        };
        let visited = tree.count_reachable();
        if visited != n {
            return Err(Error::invalid(format!(
                "sentence {}: cycle detected ({} of {n} tokens reachable from root)",
                tree.sentence_id, visited
            )));
        }
        Ok(tree)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// 1-based token access.
    pub fn token(&self, index: usize) -> &Token {
        &self.tokens[index - 1]
    }

    pub fn children_of(&self, index: usize) -> &[usize] {
        &self.children[index]
    }

    fn count_reachable(&self) -> usize {
        let mut seen = vec![false; self.len() + 1];
        let mut stack = vec![self.root_index];
        let mut count = 0;
        while let Some(i) = stack.pop() {
            if seen[i] {
                continue;
            }
            seen[i] = true;
            count += 1;
            stack.extend_from_slice(&self.children[i]);
        }
        count
    }

    /// Depth-first traversal order from the root.
    pub fn dfs_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.len());
        let mut stack = vec![self.root_index];
        while let Some(i) = stack.pop() {
            order.push(i);
            for &c in self.children[i].iter().rev() {
                stack.push(c);
            }
        }
        order
    }

    pub fn write_conllu<W: Write>(&self, w: &mut W) -> Result<()> {
        for c in &self.comments {
            writeln!(w, "{c}")?;
        }
        for t in &self.tokens {
            writeln!(
                w,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                t.index, t.form, t.lemma, t.upos, t.xpos, t.feats, t.head, t.deprel, t.deps, t.misc
            )?;
        }
        writeln!(w)?;
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ParseOptions {
    /// Strip dependency-label subtypes ("aux:pass" -> "aux") while parsing.
    pub strip_subtypes: bool,
    /// Strict mode: unknown UPOS tags and multiple roots are errors.
    /// Lenient mode repairs extra roots and accepts any UPOS string.
    pub strict: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            strip_subtypes: true,
            strict: false,
        }
    }
}

/// Streaming CoNLL-U reader: yields one `DepTree` per sentence block.
pub struct ConlluReader<R: BufRead> {
    input: R,
    opts: ParseOptions,
    line_no: usize,
    ordinal: usize,
    warnings: Vec<String>,
    done: bool,
}

impl<R: BufRead> ConlluReader<R> {
    pub fn new(input: R, opts: ParseOptions) -> Self {
        ConlluReader {
            input,
            opts,
            line_no: 0,
            ordinal: 0,
            warnings: Vec::new(),
            done: false,
        }
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn take_warnings(&mut self) -> Vec<String> {
        std::mem::take(&mut self.warnings)
    }

    fn parse_token_line(&self, line: &str) -> Result<Option<Token>> {
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(Error::Conllu {
                line: self.line_no,
                message: format!("expected 10 tab-separated columns, got {}", cols.len()),
            });
        }
        let id = cols[0];
        // Multiword-token ranges and empty nodes carry no base index.
        if id.contains('-') || id.contains('.') {
            return Ok(None);
        }
        let index: usize = id.parse().map_err(|_| Error::Conllu {
            line: self.line_no,
            message: format!("non-integer token id {id:?}"),
        })?;
        let head: usize = cols[6].parse().map_err(|_| Error::Conllu {
            line: self.line_no,
            message: format!("non-integer head {:?}", cols[6]),
        })?;
        if index == 0 {
            return Err(Error::Conllu {
                line: self.line_no,
                message: "token id must be >= 1".to_string(),
            });
        }
        let upos = cols[3];
        if self.opts.strict && upos != "_" && !is_upos_tag(upos) {
            return Err(Error::Conllu {
                line: self.line_no,
                message: format!("unknown UPOS tag {upos:?}"),
            });
        }
        let deprel = if self.opts.strip_subtypes {
            strip_deprel_subtype(cols[7])
        } else {
            cols[7]
        };
        Ok(Some(Token {
            index,
            form: cols[1].to_string(),
            upos: upos.to_string(),
            head,
            deprel: deprel.to_string(),
            lemma: cols[2].to_string(),
            xpos: cols[4].to_string(),
            feats: cols[5].to_string(),
            deps: cols[8].to_string(),
            misc: cols[9].to_string(),
        }))
    }

    fn next_tree(&mut self) -> Result<Option<DepTree>> {
        let mut comments: Vec<String> = Vec::new();
        let mut tokens: Vec<Token> = Vec::new();
        let mut saw_content = false;
        let mut line = String::new();
        loop {
            line.clear();
            let n = self.input.read_line(&mut line)?;
            if n == 0 {
                // EOF: emit a pending sentence if any.
                if tokens.is_empty() {
                    if saw_content && self.opts.strict {
                        return Err(Error::Conllu {
                            line: self.line_no,
                            message: "comment block without tokens".to_string(),
                        });
                    }
                    return Ok(None);
                }
                break;
            }
            self.line_no += 1;
            let trimmed = line.trim_end_matches(['\n', '\r']);
            if trimmed.is_empty() {
                if tokens.is_empty() {
                    if saw_content {
                        if self.opts.strict {
                            return Err(Error::Conllu {
                                line: self.line_no,
                                message: "comment block without tokens".to_string(),
                            });
                        }
                        self.warnings
                            .push(format!("line {}: skipped tokenless block", self.line_no));
                        comments.clear();
                        saw_content = false;
                    }
                    continue; // leading/duplicate blank lines
                }
                break;
            }
            saw_content = true;
            if trimmed.starts_with('#') {
                comments.push(trimmed.to_string());
                continue;
            }
            if let Some(tok) = self.parse_token_line(trimmed)? {
                let expected = tokens.last().map_or(1, |t: &Token| t.index + 1);
                if tok.index != expected {
                    return Err(Error::Conllu {
                        line: self.line_no,
                        message: format!(
                            "non-consecutive token id {} (expected {expected})",
                            tok.index
                        ),
                    });
                }
                tokens.push(tok);
            }
        }
        let sentence_id = sentence_id_from_comments(&comments)
            .unwrap_or_else(|| self.ordinal.to_string());
        self.ordinal += 1;
        let tree = DepTree::from_tokens(
            sentence_id,
            comments,
            tokens,
            self.opts.strict,
            &mut self.warnings,
        )?;
        Ok(Some(tree))
    }
}

fn sentence_id_from_comments(comments: &[String]) -> Option<String> {
    for c in comments {
        let body = c.trim_start_matches('#').trim_start();
        if let Some(rest) = body.strip_prefix("sent_id") {
            let rest = rest.trim_start();
            if let Some(value) = rest.strip_prefix('=') {
                return Some(value.trim().to_string());
            }
        }
    }
    None
}

impl<R: BufRead> Iterator for ConlluReader<R> {
    type Item = Result<DepTree>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        match self.next_tree() {
            Ok(Some(tree)) => Some(Ok(tree)),
            Ok(None) => None,
            Err(e) => {
                self.done = true;
                Some(Err(e))
            }
        }
    }
}

/// Parses a whole stream. Sentence k in the stream becomes tree k.
pub fn parse_conllu<R: BufRead>(input: R, opts: &ParseOptions) -> Result<Vec<DepTree>> {
    ConlluReader::new(input, opts.clone()).collect()
}

/// Like `parse_conllu` but also returns lenient-mode repair warnings.
pub fn parse_conllu_with_warnings<R: BufRead>(
    input: R,
    opts: &ParseOptions,
) -> Result<(Vec<DepTree>, Vec<String>)> {
    let mut reader = ConlluReader::new(input, opts.clone());
    let mut trees = Vec::new();
    for tree in &mut reader {
        trees.push(tree?);
    }
    let warnings = reader.take_warnings();
    Ok((trees, warnings))
}

/// One validation finding; violations are data, not failures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Offending token (None for sentence-level problems).
    pub token_index: Option<usize>,
    pub rule: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.token_index {
            Some(i) => write!(f, "token {}: {}", i, self.rule),
            None => write!(f, "{}", self.rule),
        }
    }
}

/// Checks every tree invariant; an empty report means the tree is well formed.
pub fn validate_tree(tree: &DepTree) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = tree.tokens.len();
    let mut roots = Vec::new();
    for (pos, tok) in tree.tokens.iter().enumerate() {
        if tok.index != pos + 1 {
            out.push(Violation {
                token_index: Some(tok.index),
                rule: format!("index {} does not match position {}", tok.index, pos + 1),
            });
        }
        if tok.head > n {
            out.push(Violation {
                token_index: Some(tok.index),
                rule: format!("head out of range ({} > {n})", tok.head),
            });
        }
        if tok.head == tok.index {
            out.push(Violation {
                token_index: Some(tok.index),
                rule: "token is its own head".to_string(),
            });
        }
        if tok.head == 0 {
            roots.push(tok.index);
        }
        if !is_upos_tag(&tok.upos) && tok.upos != "_" {
            out.push(Violation {
                token_index: Some(tok.index),
                rule: format!("unknown upos {:?}", tok.upos),
            });
        }
    }
    match roots.len() {
        0 => out.push(Violation {
            token_index: None,
            rule: "no root".to_string(),
        }),
        1 => {
            if tree.root_index != roots[0] {
                out.push(Violation {
                    token_index: Some(tree.root_index),
                    rule: "root_index does not match the head-0 token".to_string(),
                });
            }
        }
        _ => out.push(Violation {
            token_index: None,
            rule: format!("multiple roots at {roots:?}"),
        }),
    }
    // Children adjacency must mirror the head fields.
    if tree.children.len() != n + 1 {
        out.push(Violation {
            token_index: None,
            rule: "children adjacency has wrong length".to_string(),
        });
    } else {
        for tok in &tree.tokens {
            if tok.head > 0 && tok.head <= n && !tree.children[tok.head].contains(&tok.index) {
                out.push(Violation {
                    token_index: Some(tok.index),
                    rule: format!("children adjacency missing edge {} -> {}", tok.head, tok.index),
                });
            }
        }
    }
    // Reachability: every token must be reachable from the root.
    if roots.len() == 1 && out.is_empty() {
        let reachable = tree.count_reachable();
        if reachable != n {
            out.push(Violation {
                token_index: None,
                rule: format!("cycle: {reachable} of {n} tokens reachable from root"),
            });
        }
    }
    out
}
