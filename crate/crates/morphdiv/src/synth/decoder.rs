//! Decoder simulation at the pattern-outcome level: mode-seeking selection
//! versus unbiased sampling over learned conditional distributions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::stats::distribution::{ConditionalPatternDistribution, OutcomeKey};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecoderBias {
    /// I.i.d. draws from the conditional: an unbiased estimator of it.
    FaithfulSample,
    /// Always the modal outcome per pattern (ties broken by smaller key).
    Argmax,
    /// Reshape probabilities as p^(1/tau), then sample. tau > 0.
    Temperature(f64),
    /// Truncate to the smallest prefix of probability >= p, renormalize,
    /// then sample. p in (0, 1].
    TopP(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoderSim {
    pub bias: DecoderBias,
    pub seed: u64,
}

/// For every source pattern, emits as many outcomes as the input
/// distribution holds, chosen per the decoder bias. The result feeds the
/// same corpus-comparison machinery as a real second corpus.
pub fn simulate_decoder(
    ht: &ConditionalPatternDistribution,
    sim: &DecoderSim,
) -> Result<ConditionalPatternDistribution> {
    if ht.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    match sim.bias {
        DecoderBias::Temperature(tau) if !(tau > 0.0) => {
            return Err(Error::invalid("temperature must be positive"))
        }
        DecoderBias::TopP(p) if !(p > 0.0 && p <= 1.0) => {
            return Err(Error::invalid("top-p must be in (0, 1]"))
        }
        _ => {}
    }
    let mut rng = ChaCha8Rng::seed_from_u64(sim.seed);
    let mut out = ConditionalPatternDistribution::new(ht.pattern_type(), ht.scope());
    for pattern in ht.patterns() {
        let outcomes = ht.conditional(pattern).expect("pattern key exists");
        let n = ht.total(pattern);
        let keys: Vec<&OutcomeKey> = outcomes.keys().collect();
        let counts: Vec<u64> = outcomes.values().copied().collect();
        match sim.bias {
            DecoderBias::Argmax => {
                let max = *counts.iter().max().expect("non-empty conditional");
                let modal = keys
                    .iter()
                    .zip(&counts)
                    .find(|(_, &c)| c == max)
                    .map(|(k, _)| (*k).clone())
                    .expect("max exists");
                out.add_count(pattern.to_string(), modal, n);
            }
            DecoderBias::FaithfulSample => {
                let total = n as f64;
                let probs: Vec<f64> = counts.iter().map(|&c| c as f64 / total).collect();
                sample_multinomial(&mut rng, &mut out, pattern, &keys, &probs, n);
            }
            DecoderBias::Temperature(tau) => {
                let reshaped: Vec<f64> = counts.iter().map(|&c| (c as f64).powf(1.0 / tau)).collect();
                let z: f64 = reshaped.iter().sum();
                let probs: Vec<f64> = reshaped.iter().map(|w| w / z).collect();
                sample_multinomial(&mut rng, &mut out, pattern, &keys, &probs, n);
            }
            DecoderBias::TopP(p) => {
                let total = n as f64;
                // Nucleus: most probable outcomes first, ties by smaller key.
                let mut order: Vec<usize> = (0..keys.len()).collect();
                order.sort_by(|&i, &j| counts[j].cmp(&counts[i]).then(keys[i].cmp(keys[j])));
                let mut cum = 0.0;
                let mut nucleus = Vec::new();
                for &i in &order {
                    nucleus.push(i);
                    cum += counts[i] as f64 / total;
                    if cum >= p {
                        break;
                    }
                }
                let z: f64 = nucleus.iter().map(|&i| counts[i] as f64).sum();
                let keys_n: Vec<&OutcomeKey> = nucleus.iter().map(|&i| keys[i]).collect();
                let probs: Vec<f64> = nucleus.iter().map(|&i| counts[i] as f64 / z).collect();
                sample_multinomial(&mut rng, &mut out, pattern, &keys_n, &probs, n);
            }
        }
    }
    Ok(out)
}

/// Draws a multinomial sample of size n via sequential binomials.
fn sample_multinomial(
    rng: &mut ChaCha8Rng,
    out: &mut ConditionalPatternDistribution,
    pattern: &str,
    keys: &[&OutcomeKey],
    probs: &[f64],
    n: u64,
) {
    let mut remaining_n = n;
    let mut remaining_p = 1.0f64;
    for (idx, (&key, &p)) in keys.iter().zip(probs).enumerate() {
        if remaining_n == 0 {
            break;
        }
        let draw = if idx == keys.len() - 1 {
            remaining_n
        } else {
            let cond = (p / remaining_p).clamp(0.0, 1.0);
            let b = Binomial::new(remaining_n, cond).expect("valid binomial");
            b.sample(rng)
        };
        if draw > 0 {
            out.add_count(pattern.to_string(), key.clone(), draw);
        }
        remaining_n -= draw;
        remaining_p -= p;
    }
    if remaining_n > 0 {
        // Numerical leftovers land on the last key.
        out.add_count(
            pattern.to_string(),
            (*keys.last().expect("non-empty")).clone(),
            remaining_n,
        );
    }
    let _ = rng.gen::<u32>(); // decouple patterns even when a draw is skipped
}
