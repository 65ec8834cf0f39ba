//! Exact and simulated analysis of pointwise information leakage under
//! repeated independent observations of a discrete memoryless channel.
//!
//! A secret `X` with a known prior is observed through a fixed channel n
//! independent times. Each leakage metric in the catalog is assembled from a
//! pointwise comparison `f(posterior, prior)` together with a monotone
//! envelope `g₂(E[g₁(f)])`, which makes exact finite-n computation possible
//! by enumerating output type classes instead of output sequences. The crate
//! provides:
//!
//! * [`prob`] — validated probability vectors, channels, prior/channel
//!   systems, log-space Bayes updates on observation histograms;
//! * [`metrics`] — the metric catalog (mutual information, Sibson and Arimoto
//!   orders α, max-ratio, min-entropy, f-divergences, gain-function leakage),
//!   pointwise evaluation, and leakage distributions;
//! * [`axioms`] — seeded randomized checkers for the structural axioms a
//!   pointwise metric should satisfy, plus convexity, derivative, and
//!   data-processing checks;
//! * [`composition`] — exact type-class enumeration: finite-n leakage
//!   distributions, global leakage, its n→∞ limit, and the type geometry
//!   (divergence ordering, decision margins) that governs convergence;
//! * [`chernoff`] — Chernoff information, the minimum pairwise exponent of a
//!   channel, and log-linear decay-rate fits for convergence experiments;
//! * [`adversary`] — MAP estimation, exact Bayes error, the min-entropy
//!   leakage/Bayes-error identity, and Monte-Carlo simulation of leakage
//!   distributions;
//! * [`presets`] — the bundled example systems.
//!
//! # Numerics and determinism
//!
//! Probability accumulation over observation histograms happens in
//! natural-log space; results are reported in bits. Reductions run in a
//! fixed (lexicographic) order with compensated summation, so results are
//! bit-stable run to run. Simulation uses the counter-based ChaCha8 generator
//! (`rand_chacha`) keyed by the user seed with the trial index as stream id;
//! outputs are identical for a given seed regardless of thread count.

pub mod adversary;
pub mod axioms;
pub mod chernoff;
pub mod composition;
pub mod error;
pub mod metrics;
pub mod numeric;
pub mod presets;
pub mod prob;

pub use error::{Error, Result};
pub use metrics::{GainMatrix, LeakageDistribution, MetricSpec};
pub use prob::{
    kl_divergence, merge_equivalent_rows, Channel, MergedSystem, ProbVec, System, SystemDoc,
};
