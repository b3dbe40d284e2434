//! Corpus BLEU: clipped modified n-gram precision up to 4-grams, geometric
//! mean, exponential brevity penalty.

use std::collections::HashMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tokenization {
    /// Inputs are already tokenized; split on whitespace.
    Whitespace,
    /// mteval-13a-compatible tokenization for raw text.
    V13a,
}

#[derive(Debug, Clone)]
pub struct BleuOptions {
    pub max_order: usize,
    /// Exponential smoothing of zero-match orders: the k-th zero order
    /// contributes 1 / (2^k * total) instead of zero.
    pub smoothing: bool,
    pub tokenization: Tokenization,
}

impl Default for BleuOptions {
    fn default() -> Self {
        BleuOptions {
            max_order: 4,
            smoothing: false,
            tokenization: Tokenization::Whitespace,
        }
    }
}

/// Splits punctuation off words the way the classic mteval "international"
/// tokenizer does: punctuation becomes its own token except periods/commas
/// between digits and hyphens following digits keep their neighbors.
pub fn tokenize_13a(line: &str) -> Vec<String> {
    let mut text = line.replace("<skipped>", "");
    text = text.replace("-\n", "").replace('\n', " ");
    text = text
        .replace("&quot;", "\"")
        .replace("&amp;", "&")
        .replace("&lt;", "<")
        .replace("&gt;", ">");
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len() + 16);
    for (i, &c) in chars.iter().enumerate() {
        let prev = if i > 0 { Some(chars[i - 1]) } else { None };
        let next = chars.get(i + 1).copied();
        let is_digit = |c: Option<char>| c.is_some_and(|c| c.is_ascii_digit());
        let separate = if c.is_alphanumeric() || c.is_whitespace() {
            false
        } else if c == '.' || c == ',' {
            // keep within numbers: "1.5" stays together
            !(is_digit(prev) && is_digit(next))
        } else if c == '-' {
            // "5-6" splits the hyphen off after a digit
            is_digit(prev)
        } else {
            true
        };
        if separate {
            out.push(' ');
            out.push(c);
            out.push(' ');
        } else {
            out.push(c);
        }
    }
    out.split_whitespace().map(|s| s.to_string()).collect()
}

fn tokenize(line: &str, mode: Tokenization) -> Vec<String> {
    match mode {
        Tokenization::Whitespace => line.split_whitespace().map(|s| s.to_string()).collect(),
        Tokenization::V13a => tokenize_13a(line),
    }
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], u64> {
    let mut map: HashMap<&[String], u64> = HashMap::new();
    if tokens.len() >= n {
        for i in 0..=(tokens.len() - n) {
            *map.entry(&tokens[i..i + n]).or_insert(0) += 1;
        }
    }
    map
}

/// Corpus BLEU in [0, 100] over parallel hypothesis/reference segments.
///
/// Orders whose total candidate n-gram count is zero (every segment shorter
/// than n) are excluded from the geometric mean, so identical corpora score
/// 100 regardless of segment length; on any corpus with at least one
/// max_order-token segment this matches the standard definition. An order
/// with candidates but zero matches yields 0 unless smoothing is enabled.
pub fn corpus_bleu<S: AsRef<str>>(
    hypotheses: &[S],
    references: &[S],
    opts: &BleuOptions,
) -> Result<f64> {
    if hypotheses.is_empty() {
        return Err(Error::invalid("empty corpus"));
    }
    if hypotheses.len() != references.len() {
        return Err(Error::invalid(format!(
            "segment count mismatch: {} hypotheses vs {} references",
            hypotheses.len(),
            references.len()
        )));
    }
    if opts.max_order == 0 {
        return Err(Error::invalid("max_order must be >= 1"));
    }
    let mut correct = vec![0u64; opts.max_order];
    let mut total = vec![0u64; opts.max_order];
    let mut hyp_len = 0u64;
    let mut ref_len = 0u64;
    for (h, r) in hypotheses.iter().zip(references) {
        let ht = tokenize(h.as_ref(), opts.tokenization);
        let rt = tokenize(r.as_ref(), opts.tokenization);
        hyp_len += ht.len() as u64;
        ref_len += rt.len() as u64;
        for n in 1..=opts.max_order {
            if ht.len() < n {
                continue;
            }
            total[n - 1] += (ht.len() - n + 1) as u64;
            let rc = ngram_counts(&rt, n);
            for (gram, count) in ngram_counts(&ht, n) {
                let clip = rc.get(gram).copied().unwrap_or(0);
                correct[n - 1] += count.min(clip);
            }
        }
    }
    if hyp_len == 0 {
        return Err(Error::invalid("hypotheses contain no tokens"));
    }
    let mut log_sum = 0.0f64;
    let mut orders = 0usize;
    let mut smooth_inv = 1.0f64;
    for n in 0..opts.max_order {
        if total[n] == 0 {
            continue;
        }
        orders += 1;
        let precision = if correct[n] > 0 {
            correct[n] as f64 / total[n] as f64
        } else if opts.smoothing {
            smooth_inv *= 2.0;
            1.0 / (smooth_inv * total[n] as f64)
        } else {
            return Ok(0.0);
        };
        log_sum += precision.ln();
    }
    debug_assert!(orders > 0, "hyp_len > 0 implies order 1 is populated");
    let geo = (log_sum / orders as f64).exp();
    let bp = (1.0 - ref_len as f64 / hyp_len as f64).min(0.0).exp();
    Ok(100.0 * geo * bp)
}
