//! Finite probability vectors, channels, and prior/channel systems.
//!
//! A `System` models a secret X with a known prior observed through a fixed
//! discrete memoryless channel; the analysis modules study what n independent
//! channel outputs reveal about X. Because the per-symbol likelihoods are
//! exchangeable, everything an observer learns from a length-n output string
//! is carried by its empirical histogram, so the core Bayes operations here
//! take count vectors rather than sequences.
//!
//! Validation is strict: probabilities must be non-negative and sum to 1
//! within [`SUM_TOLERANCE`]; nothing is silently renormalized.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{log_sum_exp, nats_to_bits, KahanSum, LnFactorials};

/// Absolute tolerance on |Σp − 1| accepted by validation.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Default tolerance for detecting duplicate channel rows.
pub const DEFAULT_MERGE_TOLERANCE: f64 = 1e-12;

/// A validated probability distribution over finitely many outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVec {
    probs: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl ProbVec {
    /// Validates and wraps a raw vector. No renormalization is performed.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::EmptyVector);
        }
        for (index, &value) in probs.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::NegativeEntry { index, value });
            }
        }
        let mut acc = KahanSum::new();
        for &p in &probs {
            acc.add(p);
        }
        let sum = acc.value();
        if !((sum - 1.0).abs() <= SUM_TOLERANCE) {
            return Err(Error::SumOutOfTolerance {
                sum,
                tol: SUM_TOLERANCE,
            });
        }
        Ok(Self {
            probs,
            labels: None,
        })
    }

    pub fn with_labels(probs: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != probs.len() {
            return Err(Error::LengthMismatch {
                expected: probs.len(),
                got: labels.len(),
            });
        }
        let mut v = Self::new(probs)?;
        v.labels = Some(labels);
        Ok(v)
    }

    /// Uniform distribution over `k` outcomes.
    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::EmptyVector);
        }
        Self::new(vec![1.0 / k as f64; k])
    }

    /// Point mass on outcome `i` among `k` outcomes (an extreme point of the
    /// simplex).
    pub fn point_mass(k: usize, i: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::EmptyVector);
        }
        if i >= k {
            return Err(Error::LengthMismatch { expected: k, got: i });
        }
        let mut probs = vec![0.0; k];
        probs[i] = 1.0;
        Self::new(probs)
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, i: usize) -> f64 {
        self.probs[i]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Index of a largest entry (smallest index on ties).
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &p) in self.probs.iter().enumerate() {
            if p > self.probs[best] {
                best = i;
            }
        }
        best
    }

    /// Smallest strictly positive entry, if any.
    pub fn min_positive(&self) -> Option<f64> {
        self.probs
            .iter()
            .copied()
            .filter(|&p| p > 0.0)
            .fold(None, |acc, p| Some(acc.map_or(p, |m: f64| m.min(p))))
    }
}

/// Kullback–Leibler divergence D(P‖Q) in bits.
///
/// Terms with pᵢ = 0 contribute zero; a positive pᵢ against qᵢ = 0 makes the
/// divergence +∞ (returned as a value, not an error).
pub fn kl_divergence(p: &ProbVec, q: &ProbVec) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    Ok(kl_divergence_raw(p.probs(), q.probs()))
}

/// KL divergence on raw slices (no validation); used by hot loops and by the
/// axiom checkers, which probe points slightly off the simplex.
pub fn kl_divergence_raw(p: &[f64], q: &[f64]) -> f64 {
    let mut acc = KahanSum::new();
    for (&pi, &qi) in p.iter().zip(q) {
        if pi > 0.0 {
            if qi <= 0.0 {
                return f64::INFINITY;
            }
            acc.add(pi * (pi / qi).ln());
        }
    }
    nats_to_bits(acc.value())
}

/// A row-stochastic channel: one conditional output distribution per input.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    rows: Vec<ProbVec>,
}

impl Channel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyVector);
        }
        let width = rows[0].len();
        let mut validated = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != width {
                return Err(Error::LengthMismatch {
                    expected: width,
                    got: row.len(),
                });
            }
            validated.push(ProbVec::new(row)?);
        }
        Ok(Self { rows: validated })
    }

    pub fn n_inputs(&self) -> usize {
        self.rows.len()
    }

    pub fn n_outputs(&self) -> usize {
        self.rows[0].len()
    }

    pub fn row(&self, x: usize) -> &ProbVec {
        &self.rows[x]
    }

    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.rows[x].get(y)
    }

    pub fn rows(&self) -> impl Iterator<Item = &ProbVec> {
        self.rows.iter()
    }

    /// Channel composition: feed this channel's output through `garble`
    /// (a channel from this channel's output alphabet to a new alphabet).
    pub fn compose(&self, garble: &Channel) -> Result<Channel> {
        if garble.n_inputs() != self.n_outputs() {
            return Err(Error::LengthMismatch {
                expected: self.n_outputs(),
                got: garble.n_inputs(),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                (0..garble.n_outputs())
                    .map(|z| {
                        let mut acc = KahanSum::new();
                        for (y, &py) in row.probs().iter().enumerate() {
                            acc.add(py * garble.prob(y, z));
                        }
                        acc.value()
                    })
                    .collect()
            })
            .collect();
        Channel::new(rows)
    }
}

/// JSON document form of a [`System`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemDoc {
    pub prior: Vec<f64>,
    pub channel: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_labels: Option<Vec<String>>,
}

/// A prior over secrets together with the observation channel.
#[derive(Debug, Clone, PartialEq)]
pub struct System {
    prior: ProbVec,
    channel: Channel,
    x_labels: Vec<String>,
    y_labels: Vec<String>,
    /// ln prior, cached for the log-space Bayes hot path.
    ln_prior: Vec<f64>,
    /// ln channel rows, cached likewise.
    ln_rows: Vec<Vec<f64>>,
}

fn default_labels(prefix: &str, k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("{prefix}{i}")).collect()
}

impl System {
    pub fn new(prior: Vec<f64>, channel: Vec<Vec<f64>>) -> Result<Self> {
        let prior = ProbVec::new(prior)?;
        let channel = Channel::new(channel)?;
        Self::from_parts(prior, channel, None, None)
    }

    pub fn from_parts(
        prior: ProbVec,
        channel: Channel,
        x_labels: Option<Vec<String>>,
        y_labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if prior.len() != channel.n_inputs() {
            return Err(Error::LengthMismatch {
                expected: prior.len(),
                got: channel.n_inputs(),
            });
        }
        let x_labels = match x_labels {
            Some(l) => {
                if l.len() != prior.len() {
                    return Err(Error::LengthMismatch {
                        expected: prior.len(),
                        got: l.len(),
                    });
                }
                l
            }
            None => default_labels("x", prior.len()),
        };
        let y_labels = match y_labels {
            Some(l) => {
                if l.len() != channel.n_outputs() {
                    return Err(Error::LengthMismatch {
                        expected: channel.n_outputs(),
                        got: l.len(),
                    });
                }
                l
            }
            None => default_labels("y", channel.n_outputs()),
        };
        let ln_prior = prior.probs().iter().map(|&p| p.ln()).collect();
        let ln_rows = channel
            .rows()
            .map(|r| r.probs().iter().map(|&p| p.ln()).collect())
            .collect();
        Ok(Self {
            prior,
            channel,
            x_labels,
            y_labels,
            ln_prior,
            ln_rows,
        })
    }

    pub fn from_doc(doc: SystemDoc) -> Result<Self> {
        let prior = ProbVec::new(doc.prior)?;
        let channel = Channel::new(doc.channel)?;
        Self::from_parts(prior, channel, doc.x_labels, doc.y_labels)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: SystemDoc = serde_json::from_str(s).map_err(|e| Error::Parse {
            detail: e.to_string(),
        })?;
        Self::from_doc(doc)
    }

    pub fn to_doc(&self) -> SystemDoc {
        SystemDoc {
            prior: self.prior.probs().to_vec(),
            channel: self
                .channel
                .rows()
                .map(|r| r.probs().to_vec())
                .collect(),
            x_labels: Some(self.x_labels.clone()),
            y_labels: Some(self.y_labels.clone()),
        }
    }

    pub fn n_inputs(&self) -> usize {
        self.prior.len()
    }

    pub fn n_outputs(&self) -> usize {
        self.channel.n_outputs()
    }

    pub fn prior(&self) -> &ProbVec {
        &self.prior
    }

    pub fn channel(&self) -> &Channel {
        &self.channel
    }

    pub fn x_labels(&self) -> &[String] {
        &self.x_labels
    }

    pub fn y_labels(&self) -> &[String] {
        &self.y_labels
    }

    fn check_counts(&self, counts: &[u64]) -> Result<()> {
        if counts.len() != self.n_outputs() {
            return Err(Error::CountMismatch {
                detail: format!(
                    "count vector has {} entries but the channel has {} outputs",
                    counts.len(),
                    self.n_outputs()
                ),
            });
        }
        Ok(())
    }

    /// ln(prior(x)) + Σ_y counts[y]·ln(channel(x,y)) per secret: the
    /// unnormalized log joint weight of a count vector under each x.
    /// Terms with counts[y] = 0 are skipped, so a zero channel entry only
    /// matters if the impossible symbol was actually observed.
    pub(crate) fn log_joint(&self, counts: &[u64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n_inputs());
        for x in 0..self.n_inputs() {
            let mut v = self.ln_prior[x];
            for (y, &c) in counts.iter().enumerate() {
                if c > 0 {
                    v += c as f64 * self.ln_rows[x][y];
                }
            }
            out.push(v);
        }
        out
    }

    /// Posterior over secrets given the histogram of n channel outputs,
    /// computed in log space. Secrets with zero prior stay at zero.
    pub fn posterior_from_counts(&self, counts: &[u64]) -> Result<ProbVec> {
        self.check_counts(counts)?;
        let log_joint = self.log_joint(counts);
        let lz = log_sum_exp(&log_joint);
        if lz == f64::NEG_INFINITY {
            return Err(Error::AllLikelihoodsZero);
        }
        let probs = log_joint.iter().map(|&v| (v - lz).exp()).collect();
        ProbVec::with_labels(probs, self.x_labels.clone())
    }

    /// Probability that n independent outputs land in the type class with
    /// the given histogram: Σ_x prior(x)·multinomial(counts)·Π_y p(y|x)^counts[y].
    pub fn output_marginal(&self, n: u64, counts: &[u64]) -> Result<f64> {
        let lf = LnFactorials::up_to(n);
        self.output_marginal_with(&lf, n, counts)
    }

    /// As [`Self::output_marginal`], reusing a precomputed factorial table
    /// (the enumeration loops build the table once per n).
    pub(crate) fn output_marginal_with(
        &self,
        lf: &LnFactorials,
        n: u64,
        counts: &[u64],
    ) -> Result<f64> {
        self.check_counts(counts)?;
        let total: u64 = counts.iter().sum();
        if total != n {
            return Err(Error::CountMismatch {
                detail: format!("counts sum to {total}, expected n = {n}"),
            });
        }
        let ln_mult = lf.ln_multinomial(counts);
        let log_joint = self.log_joint(counts);
        let mut acc = KahanSum::new();
        for &v in &log_joint {
            if v > f64::NEG_INFINITY {
                acc.add((ln_mult + v).exp());
            }
        }
        Ok(acc.value())
    }
}

/// Result of grouping channel rows that are equal within tolerance.
#[derive(Debug, Clone)]
pub struct MergedSystem {
    /// System over the merged secret classes (class prior = summed priors,
    /// class row = first member's row, class label = members joined by `+`).
    pub system: System,
    /// `class_of[x]` is the merged class index of original secret x.
    pub class_of: Vec<usize>,
}

impl MergedSystem {
    /// True when no rows were actually merged.
    pub fn is_identity(&self) -> bool {
        self.system.n_inputs() == self.class_of.len()
    }
}

/// Groups secrets whose channel rows coincide within `tol` (max-abs entry
/// difference), summing their prior mass. Secrets with identical rows are
/// indistinguishable from any number of observations, so downstream analysis
/// treats each group as one secret class.
pub fn merge_equivalent_rows(sys: &System, tol: f64) -> Result<MergedSystem> {
    let nx = sys.n_inputs();
    let mut reps: Vec<usize> = Vec::new();
    let mut class_of = vec![0usize; nx];
    for x in 0..nx {
        let row = sys.channel().row(x).probs();
        let mut assigned = None;
        for (c, &r) in reps.iter().enumerate() {
            let rep_row = sys.channel().row(r).probs();
            let close = row
                .iter()
                .zip(rep_row)
                .all(|(&a, &b)| (a - b).abs() <= tol);
            if close {
                assigned = Some(c);
                break;
            }
        }
        class_of[x] = match assigned {
            Some(c) => c,
            None => {
                reps.push(x);
                reps.len() - 1
            }
        };
    }

    let mut prior = vec![0.0f64; reps.len()];
    let mut labels: Vec<Vec<&str>> = vec![Vec::new(); reps.len()];
    for x in 0..nx {
        prior[class_of[x]] += sys.prior().get(x);
        labels[class_of[x]].push(sys.x_labels()[x].as_str());
    }
    let rows: Vec<Vec<f64>> = reps
        .iter()
        .map(|&r| sys.channel().row(r).probs().to_vec())
        .collect();
    let x_labels: Vec<String> = labels.iter().map(|parts| parts.join("+")).collect();
    let system = System::from_parts(
        ProbVec::new(prior)?,
        Channel::new(rows)?,
        Some(x_labels),
        Some(sys.y_labels().to_vec()),
    )?;
    Ok(MergedSystem { system, class_of })
}
