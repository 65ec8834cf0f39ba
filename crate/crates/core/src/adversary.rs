//! The guessing adversary: MAP estimation, exact Bayes error, the
//! min-entropy/error identity, and Monte-Carlo sampling of pointwise
//! leakage.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::composition::exact_global_leakage;
use crate::error::{Error, Result};
use crate::metrics::{LeakageDistribution, MetricSpec};
use crate::numeric::{log_sum_exp, KahanSum, LnFactorials};
use crate::prob::{merge_equivalent_rows, System, DEFAULT_MERGE_TOLERANCE};

/// Maximum-a-posteriori estimate of the secret from an output histogram.
/// Ties resolve to the smallest index. No row merging: the guess is over
/// the secrets as given.
pub fn map_estimate(sys: &System, counts: &[u64]) -> Result<usize> {
    if counts.len() != sys.n_outputs() {
        return Err(Error::CountMismatch {
            detail: format!(
                "got {} counts for a channel with {} outputs",
                counts.len(),
                sys.n_outputs()
            ),
        });
    }
    let log_joint = sys.log_joint(counts);
    let mut best = f64::NEG_INFINITY;
    let mut arg = None;
    for (x, &v) in log_joint.iter().enumerate() {
        if v > best {
            best = v;
            arg = Some(x);
        }
    }
    arg.ok_or(Error::AllLikelihoodsZero)
}

fn check_counts_fit(n: u64, m: usize) -> Result<()> {
    crate::composition::count_types(n, m).map(|_| ())
}

/// Exact probability that the MAP guess after n observations is wrong.
///
/// Summed directly over misclassified (type, secret) pairs, so tiny error
/// probabilities keep full precision instead of cancelling against 1.
pub fn bayes_error(sys: &System, n: u64) -> Result<f64> {
    check_counts_fit(n, sys.n_outputs())?;
    let lf = LnFactorials::up_to(n);
    let mut err = KahanSum::new();
    visit_histograms(n, sys.n_outputs(), |counts| {
        let log_joint = sys.log_joint(counts);
        let mut best = f64::NEG_INFINITY;
        let mut map = 0usize;
        for (x, &v) in log_joint.iter().enumerate() {
            if v > best {
                best = v;
                map = x;
            }
        }
        if best == f64::NEG_INFINITY {
            return; // histogram impossible under every secret
        }
        let ln_mult = lf.ln_multinomial(counts);
        for (x, &v) in log_joint.iter().enumerate() {
            if x != map && v > f64::NEG_INFINITY {
                err.add((ln_mult + v).exp());
            }
        }
    });
    Ok(err.value())
}

/// Exact probability that the MAP guess after n observations is right.
pub fn map_success_probability(sys: &System, n: u64) -> Result<f64> {
    check_counts_fit(n, sys.n_outputs())?;
    let lf = LnFactorials::up_to(n);
    let mut succ = KahanSum::new();
    visit_histograms(n, sys.n_outputs(), |counts| {
        let log_joint = sys.log_joint(counts);
        let best = log_joint.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if best > f64::NEG_INFINITY {
            succ.add((lf.ln_multinomial(counts) + best).exp());
        }
    });
    Ok(succ.value())
}

/// Infallible histogram walk for callers that already checked the count.
fn visit_histograms<F: FnMut(&[u64])>(n: u64, m: usize, mut f: F) {
    fn rec<F: FnMut(&[u64])>(counts: &mut [u64], pos: usize, rem: u64, f: &mut F) {
        if pos + 1 == counts.len() {
            counts[pos] = rem;
            f(counts);
            return;
        }
        for c in 0..=rem {
            counts[pos] = c;
            rec(counts, pos + 1, rem - c, f);
        }
    }
    let mut counts = vec![0u64; m];
    rec(&mut counts, 0, n, &mut f);
}

/// Both sides of the min-entropy identity
/// 𝓛_n = log₂((1 − P_e(n)) / (1 − P_e(0))),
/// evaluated on the merged system (the identity relates leakage about the
/// distinguishable classes to the error of guessing among them).
#[derive(Debug, Clone, Serialize)]
pub struct MinEntropyIdentity {
    pub n: u64,
    /// Global min-entropy leakage after n observations, bits.
    pub leakage_bits: f64,
    /// log₂ of the MAP success ratio — the error-probability form.
    pub error_form_bits: f64,
    /// leakage_bits − error_form_bits.
    pub difference: f64,
    /// MAP error after n observations (merged classes).
    pub bayes_error_n: f64,
    /// MAP error with no observations: 1 − max prior (merged classes).
    pub bayes_error_prior: f64,
}

/// Evaluates the identity tying global min-entropy leakage to the drop in
/// MAP error probability.
pub fn min_entropy_identity(sys: &System, n: u64) -> Result<MinEntropyIdentity> {
    let merged = merge_equivalent_rows(sys, DEFAULT_MERGE_TOLERANCE)?.system;
    let leakage_bits = exact_global_leakage(&MetricSpec::MinEntropy, &merged, n)?;
    let succ_n = map_success_probability(&merged, n)?;
    let succ_0 = merged
        .prior()
        .probs()
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let error_form_bits = (succ_n / succ_0).log2();
    Ok(MinEntropyIdentity {
        n,
        leakage_bits,
        error_form_bits,
        difference: leakage_bits - error_form_bits,
        bayes_error_n: bayes_error(&merged, n)?,
        bayes_error_prior: 1.0 - succ_0,
    })
}

/// Monte-Carlo settings. Trial t draws from an independent counter-indexed
/// stream of one seeded generator, so results are reproducible and
/// independent of the number of worker threads.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SimulationConfig {
    pub trials: u64,
    pub n: u64,
    pub seed: u64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            trials: 100_000,
            n: 1,
            seed: 0,
        }
    }
}

/// Inverse-CDF draw: smallest index whose cumulative mass exceeds u.
fn draw(cdf: &[f64], u: f64) -> usize {
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}

fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = KahanSum::new();
    probs
        .iter()
        .map(|&p| {
            acc.add(p);
            acc.value()
        })
        .collect()
}

/// Samples the pointwise leakage: each trial draws a secret from the merged
/// prior, n channel outputs from its row, forms the posterior from the
/// histogram, and evaluates the metric. Returns the empirical distribution
/// (every trial carries mass 1/trials).
pub fn simulate_empirical_cdf(
    m: &MetricSpec,
    sys: &System,
    cfg: &SimulationConfig,
) -> Result<LeakageDistribution> {
    if cfg.trials == 0 {
        return Err(Error::InsufficientPoints { needed: 1, got: 0 });
    }
    let merged = merge_equivalent_rows(sys, DEFAULT_MERGE_TOLERANCE)?.system;
    m.validate(merged.n_inputs())?;
    let prior: Vec<f64> = merged.prior().probs().to_vec();
    let prior_cdf = cumulative(&prior);
    let row_cdfs: Vec<Vec<f64>> = (0..merged.n_inputs())
        .map(|x| cumulative(merged.channel().row(x).probs()))
        .collect();
    let n_outputs = merged.n_outputs();

    let values: Vec<f64> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(trial);
            let x = draw(&prior_cdf, rng.gen::<f64>());
            let mut counts = vec![0u64; n_outputs];
            for _ in 0..cfg.n {
                counts[draw(&row_cdfs[x], rng.gen::<f64>())] += 1;
            }
            let log_joint = merged.log_joint(&counts);
            let lz = log_sum_exp(&log_joint);
            let posterior: Vec<f64> = log_joint.iter().map(|&v| (v - lz).exp()).collect();
            m.f_raw(&posterior, &prior)
        })
        .collect();

    let mass = 1.0 / cfg.trials as f64;
    let mut pairs = Vec::with_capacity(values.len());
    for (trial, &v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::InfiniteLeakage {
                detail: format!("trial {trial} produced pointwise value {v}"),
            });
        }
        pairs.push((v, mass));
    }
    LeakageDistribution::from_pairs(pairs)
}
