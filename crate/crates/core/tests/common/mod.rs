//! Shared oracle helpers for the integration suites.
//!
//! Everything here is computed the "obvious" way: explicit output sequences,
//! plain-product likelihoods, textbook closed forms, dense grid search. The
//! helpers deliberately share no code with the library's log-space
//! type-class machinery, so agreement between the two is evidence rather
//! than tautology.

#![allow(dead_code)]

use privleak_core::{ProbVec, System};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// All output sequences of length `n` over an alphabet of size `m`, in
/// lexicographic order. Intended for small cases only (m^n sequences).
pub fn all_sequences(n: usize, m: usize) -> Vec<Vec<usize>> {
    let total = m.checked_pow(n as u32).expect("oracle sequence space fits");
    let mut out = Vec::with_capacity(total);
    let mut seq = vec![0usize; n];
    loop {
        out.push(seq.clone());
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            seq[i] += 1;
            if seq[i] < m {
                break;
            }
            seq[i] = 0;
        }
    }
}

/// Π_t W(y_t | x), plain multiplication.
pub fn sequence_likelihood(sys: &System, seq: &[usize], x: usize) -> f64 {
    seq.iter().map(|&y| sys.channel().prob(x, y)).product()
}

/// Plain-arithmetic Bayes: returns (posterior, sequence probability), or
/// None when the sequence has probability zero under every secret.
pub fn sequence_posterior(sys: &System, seq: &[usize]) -> Option<(Vec<f64>, f64)> {
    let q = sys.prior().probs();
    let joint: Vec<f64> = (0..sys.n_inputs())
        .map(|x| q[x] * sequence_likelihood(sys, seq, x))
        .collect();
    let z: f64 = joint.iter().sum();
    if z <= 0.0 {
        return None;
    }
    Some((joint.iter().map(|j| j / z).collect(), z))
}

// --- Direct pointwise formulas (base-2), one per catalog family we cross
// --- check by brute force.

/// log₂ max_{x: q_x > 0} p_x / q_x.
pub fn pml_bits(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .filter(|&(_, &qx)| qx > 0.0)
        .map(|(&px, &qx)| px / qx)
        .fold(f64::NEG_INFINITY, f64::max)
        .log2()
}

/// Σ p log₂(p/q) with the 0·log 0 = 0 convention.
pub fn kl_bits(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(&px, &qx)| if px > 0.0 { px * (px / qx).log2() } else { 0.0 })
        .sum()
}

/// log₂(max p / max q).
pub fn min_entropy_pointwise_bits(p: &[f64], q: &[f64]) -> f64 {
    let mp = p.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mq = q.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (mp / mq).log2()
}

/// log₂ Σ q (p/q)² = log₂ Σ p²/q (order-2 row of the catalog).
pub fn sibson2_pointwise_bits(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .filter(|&(_, &qx)| qx > 0.0)
        .map(|(&px, &qx)| px * px / qx)
        .sum::<f64>()
        .log2()
}

/// log₂(Σ p² / Σ q²).
pub fn arimoto2_pointwise_bits(p: &[f64], q: &[f64]) -> f64 {
    let np: f64 = p.iter().map(|v| v * v).sum();
    let nq: f64 = q.iter().map(|v| v * v).sum();
    (np / nq).log2()
}

/// The oracle's own pointwise-distribution representation: atoms sorted by
/// value, probabilities summed over sequences, nearby values merged.
#[derive(Debug, Clone)]
pub struct OracleAtoms {
    pub values: Vec<f64>,
    pub probs: Vec<f64>,
}

/// Aggregates (value, probability) pairs over sequences into sorted atoms:
/// runs of values with consecutive gaps below `tol` become one atom at their
/// mass-weighted mean (or the exact value when the run is bit-identical).
pub fn aggregate_atoms(mut pairs: Vec<(f64, f64)>, tol: f64) -> OracleAtoms {
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut values = Vec::new();
    let mut probs = Vec::new();
    let mut cluster: Vec<(f64, f64)> = Vec::new();
    let flush = |cluster: &mut Vec<(f64, f64)>, values: &mut Vec<f64>, probs: &mut Vec<f64>| {
        if cluster.is_empty() {
            return;
        }
        let mass: f64 = cluster.iter().map(|&(_, p)| p).sum();
        let first = cluster[0].0;
        let value = if cluster.iter().all(|&(v, _)| v == first) {
            first
        } else {
            cluster.iter().map(|&(v, p)| v * p).sum::<f64>() / mass
        };
        values.push(value);
        probs.push(mass);
        cluster.clear();
    };
    for (v, p) in pairs {
        if let Some(&(prev, _)) = cluster.last() {
            if v - prev >= tol {
                flush(&mut cluster, &mut values, &mut probs);
            }
        }
        cluster.push((v, p));
    }
    flush(&mut cluster, &mut values, &mut probs);
    OracleAtoms { values, probs }
}

/// Pointwise-leakage distribution after n observations, by enumerating all
/// |Y|^n sequences and applying `f` to the plain-Bayes posterior.
pub fn brute_force_distribution<F>(sys: &System, n: usize, f: F) -> OracleAtoms
where
    F: Fn(&[f64], &[f64]) -> f64,
{
    let q = sys.prior().probs();
    let mut pairs = Vec::new();
    for seq in all_sequences(n, sys.n_outputs()) {
        if let Some((post, pz)) = sequence_posterior(sys, &seq) {
            pairs.push((f(&post, q), pz));
        }
    }
    aggregate_atoms(pairs, 1e-9)
}

/// Names for the five global forms the brute-force oracle reproduces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMetric {
    MutualInformation,
    Sibson2,
    Arimoto2,
    MaximalLeakage,
    MinEntropy,
}

impl OracleMetric {
    pub fn pointwise(self) -> fn(&[f64], &[f64]) -> f64 {
        match self {
            OracleMetric::MutualInformation => kl_bits,
            OracleMetric::Sibson2 => sibson2_pointwise_bits,
            OracleMetric::Arimoto2 => arimoto2_pointwise_bits,
            OracleMetric::MaximalLeakage => pml_bits,
            OracleMetric::MinEntropy => min_entropy_pointwise_bits,
        }
    }
}

/// The textbook closed form of each global metric, evaluated directly on
/// the n-fold product channel by summing over all |Y|^n sequences.
pub fn brute_force_global(which: OracleMetric, sys: &System, n: usize) -> f64 {
    let q = sys.prior().probs();
    let nx = sys.n_inputs();
    let seqs = all_sequences(n, sys.n_outputs());
    match which {
        OracleMetric::MutualInformation => {
            // Σ_{y^n} P(y^n) · D(post ‖ prior)
            let mut acc = 0.0;
            for seq in &seqs {
                if let Some((post, pz)) = sequence_posterior(sys, seq) {
                    acc += pz * kl_bits(&post, q);
                }
            }
            acc
        }
        OracleMetric::Sibson2 => {
            // 2 · log₂ Σ_{y^n} ( Σ_x q_x W(y^n|x)² )^{1/2}
            let mut acc = 0.0;
            for seq in &seqs {
                let inner: f64 = (0..nx)
                    .map(|x| {
                        let w = sequence_likelihood(sys, seq, x);
                        q[x] * w * w
                    })
                    .sum();
                acc += inner.sqrt();
            }
            2.0 * acc.log2()
        }
        OracleMetric::Arimoto2 => {
            // 2 · log₂ Σ_{y^n} ( Σ_x q_x² W(y^n|x)² / Σ_x q_x² )^{1/2}
            let qnorm: f64 = q.iter().map(|v| v * v).sum();
            let mut acc = 0.0;
            for seq in &seqs {
                let inner: f64 = (0..nx)
                    .map(|x| {
                        let w = sequence_likelihood(sys, seq, x);
                        q[x] * q[x] * w * w
                    })
                    .sum();
                acc += (inner / qnorm).sqrt();
            }
            2.0 * acc.log2()
        }
        OracleMetric::MaximalLeakage => {
            // log₂ Σ_{y^n} max_{x: q_x > 0} W(y^n|x)
            let mut acc = 0.0;
            for seq in &seqs {
                let best = (0..nx)
                    .filter(|&x| q[x] > 0.0)
                    .map(|x| sequence_likelihood(sys, seq, x))
                    .fold(f64::NEG_INFINITY, f64::max);
                acc += best;
            }
            acc.log2()
        }
        OracleMetric::MinEntropy => {
            // log₂ ( Σ_{y^n} max_x q_x W(y^n|x) / max_x q_x )
            let mut acc = 0.0;
            for seq in &seqs {
                let best = (0..nx)
                    .map(|x| q[x] * sequence_likelihood(sys, seq, x))
                    .fold(f64::NEG_INFINITY, f64::max);
                acc += best;
            }
            let qmax = q.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            (acc / qmax).log2()
        }
    }
}

/// MAP error probability by direct enumeration:
/// 1 − Σ_{y^n} max_x q_x · W(y^n|x).
pub fn brute_force_bayes_error(sys: &System, n: usize) -> f64 {
    let q = sys.prior().probs();
    let mut success = 0.0;
    for seq in all_sequences(n, sys.n_outputs()) {
        let best = (0..sys.n_inputs())
            .map(|x| q[x] * sequence_likelihood(sys, &seq, x))
            .fold(f64::NEG_INFINITY, f64::max);
        success += best;
    }
    1.0 - success
}

// --- Grid-search Chernoff oracle.

/// −min_{λ∈[0,1]} log₂ Σ p^λ q^{1−λ} by dense grid search with the given
/// step, restricted to the common support. Returns +∞ on disjoint supports.
pub fn grid_chernoff(p: &[f64], q: &[f64], step: f64) -> f64 {
    let terms: Vec<(f64, f64)> = p
        .iter()
        .zip(q)
        .filter(|&(&a, &b)| a > 0.0 && b > 0.0)
        .map(|(&a, &b)| (a.ln(), b.ln()))
        .collect();
    if terms.is_empty() {
        return f64::INFINITY;
    }
    let steps = (1.0 / step).round() as u64;
    let mut min_sum = f64::INFINITY;
    for k in 0..=steps {
        let lam = k as f64 / steps as f64;
        let sum: f64 = terms
            .iter()
            .map(|&(la, lb)| (lb + lam * (la - lb)).exp())
            .sum();
        min_sum = min_sum.min(sum);
    }
    (-min_sum.log2()).max(0.0)
}

// --- Random fixtures.

/// Deterministic generator for test fixtures, keyed by a label so suites
/// don't share streams by accident.
pub fn fixture_rng(stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e3779b97f4a7c15);
    rng.set_stream(stream);
    rng
}

/// A strictly positive probability vector: uniform draws shifted away from
/// zero and normalized. Entries end up in roughly [0.05/k, 1].
pub fn random_simplex<R: Rng>(rng: &mut R, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
    let z: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / z).collect()
}

/// A strictly positive random system with the given dimensions.
pub fn random_system<R: Rng>(rng: &mut R, nx: usize, ny: usize) -> System {
    let prior = random_simplex(rng, nx);
    let rows: Vec<Vec<f64>> = (0..nx).map(|_| random_simplex(rng, ny)).collect();
    System::new(prior, rows).expect("random system is valid")
}

/// A strictly positive random prior as a validated ProbVec.
pub fn random_prior<R: Rng>(rng: &mut R, k: usize) -> ProbVec {
    ProbVec::new(random_simplex(rng, k)).expect("random prior is valid")
}

/// Max absolute difference between an oracle atom list and a library
/// distribution, insisting on identical atom structure.
pub fn max_atom_difference(
    oracle: &OracleAtoms,
    dist: &privleak_core::LeakageDistribution,
) -> f64 {
    assert_eq!(
        oracle.values.len(),
        dist.len(),
        "atom counts differ: oracle {:?} vs library {:?}",
        oracle.values,
        dist.support()
    );
    let mut worst: f64 = 0.0;
    for (i, (v, p)) in dist.iter().enumerate() {
        worst = worst.max((v - oracle.values[i]).abs());
        worst = worst.max((p - oracle.probs[i]).abs());
    }
    worst
}
