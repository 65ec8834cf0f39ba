//! The leakage-metric catalog.
//!
//! Every metric here is assembled from three pieces: a pointwise comparison
//! `f(P, Q)` between a posterior P and the prior Q, a strictly increasing
//! inner map `g₁`, and a strictly increasing outer map `g₂` with
//! `g₂(g₁(0)) = 0`. The global leakage of a system is `g₂(E_Y[g₁(f(·))])`,
//! and [`standard_global_leakage`] evaluates each metric's textbook
//! definition directly from the prior and channel as an independent route to
//! the same number.
//!
//! All values are reported in bits (logarithms base 2).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::KahanSum;
use crate::prob::{ProbVec, System, SUM_TOLERANCE};

/// Generator functions for the f-divergence family, applied in the
/// orientation D_f̂(P‖Q) = Σᵢ pᵢ·f̂(qᵢ/pᵢ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FDivKind {
    /// f̂(t) = −log₂ t, giving the ordinary KL divergence D(P‖Q) in bits.
    Kl,
    /// f̂(t) = 1/t − 1, giving χ²(P‖Q) = Σ pᵢ²/qᵢ − 1. (The raw generator
    /// t²−1 would diverge at every extreme point of the simplex.)
    ChiSquared,
    /// f̂(t) = (√t − 1)², giving Σ(√pᵢ − √qᵢ)².
    SquaredHellinger,
}

impl FDivKind {
    pub fn name(&self) -> &'static str {
        match self {
            FDivKind::Kl => "kl",
            FDivKind::ChiSquared => "chi_squared",
            FDivKind::SquaredHellinger => "squared_hellinger",
        }
    }
}

/// A non-negative gain matrix `g[action][secret]` for gain-function leakage.
///
/// Every secret column must contain a strictly positive entry so that
/// extreme-point leakage values stay finite, and at least one entry must be
/// positive overall so expected-gain denominators are positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GainMatrix(pub Vec<Vec<f64>>);

impl GainMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let g = GainMatrix(rows);
        g.validate_dims(None)?;
        Ok(g)
    }

    /// Identity gain over `k` secrets: guessing the secret outright.
    pub fn identity(k: usize) -> Self {
        let rows = (0..k)
            .map(|w| (0..k).map(|x| if w == x { 1.0 } else { 0.0 }).collect())
            .collect();
        GainMatrix(rows)
    }

    pub fn n_actions(&self) -> usize {
        self.0.len()
    }

    pub fn n_secrets(&self) -> usize {
        self.0.first().map_or(0, |r| r.len())
    }

    fn validate_dims(&self, n_secrets: Option<usize>) -> Result<()> {
        if self.0.is_empty() || self.0[0].is_empty() {
            return Err(Error::InvalidGainMatrix {
                detail: "gain matrix must be non-empty".into(),
            });
        }
        let width = self.0[0].len();
        for row in &self.0 {
            if row.len() != width {
                return Err(Error::InvalidGainMatrix {
                    detail: "gain matrix rows have unequal lengths".into(),
                });
            }
            for &v in row {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidGainMatrix {
                        detail: format!("gain entries must be finite and non-negative, got {v}"),
                    });
                }
            }
        }
        if let Some(k) = n_secrets {
            if width != k {
                return Err(Error::LengthMismatch {
                    expected: k,
                    got: width,
                });
            }
        }
        for x in 0..width {
            if !self.0.iter().any(|row| row[x] > 0.0) {
                return Err(Error::InvalidGainMatrix {
                    detail: format!("secret column {x} has no positive gain under any action"),
                });
            }
        }
        Ok(())
    }

    /// Best expected gain max_w Σₓ p(x)·g(w, x).
    pub fn best_gain(&self, p: &[f64]) -> f64 {
        self.0
            .iter()
            .map(|row| row.iter().zip(p).map(|(&g, &pi)| g * pi).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// A metric from the catalog. The JSON form uses a `kind` tag, e.g.
/// `{"kind": "sibson", "alpha": 2.0}` or `{"kind": "g_leakage", "gain": [[1,0],[0,1]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MetricSpec {
    MutualInformation,
    Sibson { alpha: f64 },
    Arimoto { alpha: f64 },
    MaximalLeakage,
    MinEntropy,
    FDivergence { fdiv_kind: FDivKind },
    GLeakage { gain: GainMatrix },
}

impl MetricSpec {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            detail: e.to_string(),
        })
    }

    /// Compact, CSV-safe display name.
    pub fn name(&self) -> String {
        match self {
            MetricSpec::MutualInformation => "mutual_information".into(),
            MetricSpec::Sibson { alpha } => format!("sibson:{alpha}"),
            MetricSpec::Arimoto { alpha } => format!("arimoto:{alpha}"),
            MetricSpec::MaximalLeakage => "maximal_leakage".into(),
            MetricSpec::MinEntropy => "min_entropy".into(),
            MetricSpec::FDivergence { fdiv_kind } => format!("f_divergence:{}", fdiv_kind.name()),
            MetricSpec::GLeakage { .. } => "g_leakage".into(),
        }
    }

    /// Checks parameters against the number of secrets the metric will see.
    pub fn validate(&self, n_secrets: usize) -> Result<()> {
        match self {
            MetricSpec::Sibson { alpha } | MetricSpec::Arimoto { alpha } => {
                if !(alpha.is_finite() && *alpha > 1.0) {
                    return Err(Error::AlphaOutOfRange { alpha: *alpha });
                }
            }
            MetricSpec::GLeakage { gain } => gain.validate_dims(Some(n_secrets))?,
            _ => {}
        }
        Ok(())
    }

    /// Pointwise leakage f(P, Q) in bits, on raw slices of equal length.
    ///
    /// No validation is performed; infinite or NaN results are returned
    /// verbatim. The axiom checkers rely on this accepting points slightly
    /// off the simplex.
    pub fn f_raw(&self, p: &[f64], q: &[f64]) -> f64 {
        debug_assert_eq!(p.len(), q.len());
        match self {
            MetricSpec::MutualInformation => crate::prob::kl_divergence_raw(p, q),
            MetricSpec::Sibson { alpha } => sibson_sum(p, q, *alpha).log2(),
            MetricSpec::Arimoto { alpha } => {
                let (num, den) = arimoto_sums(p, q, *alpha);
                (num / den).log2()
            }
            MetricSpec::MaximalLeakage => max_ratio(p, q).log2(),
            MetricSpec::MinEntropy => {
                let mp = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let mq = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                (mp / mq).log2()
            }
            MetricSpec::FDivergence { fdiv_kind } => fdiv_raw(*fdiv_kind, p, q),
            MetricSpec::GLeakage { gain } => (gain.best_gain(p) / gain.best_gain(q)).log2(),
        }
    }

    /// Validated pointwise leakage on probability vectors.
    pub fn pointwise_f(&self, p: &ProbVec, q: &ProbVec) -> Result<f64> {
        self.validate(q.len())?;
        if p.len() != q.len() {
            return Err(Error::LengthMismatch {
                expected: q.len(),
                got: p.len(),
            });
        }
        Ok(self.f_raw(p.probs(), q.probs()))
    }

    /// Inner map g₁ applied to a leakage value in bits.
    pub fn g1_apply(&self, z: f64) -> f64 {
        match self {
            MetricSpec::MutualInformation | MetricSpec::FDivergence { .. } => z,
            MetricSpec::Sibson { alpha } | MetricSpec::Arimoto { alpha } => (z / alpha).exp2(),
            MetricSpec::MaximalLeakage | MetricSpec::MinEntropy | MetricSpec::GLeakage { .. } => {
                z.exp2()
            }
        }
    }

    /// h(P, Q) = g₁(f(P, Q)) computed natively (avoiding the exp∘log
    /// round-trip where g₁ is an exponential), on raw slices.
    pub fn h_raw(&self, p: &[f64], q: &[f64]) -> f64 {
        match self {
            MetricSpec::MutualInformation | MetricSpec::FDivergence { .. } => self.f_raw(p, q),
            MetricSpec::Sibson { alpha } => sibson_sum(p, q, *alpha).powf(1.0 / alpha),
            MetricSpec::Arimoto { alpha } => {
                let (num, den) = arimoto_sums(p, q, *alpha);
                (num / den).powf(1.0 / alpha)
            }
            MetricSpec::MaximalLeakage => max_ratio(p, q),
            MetricSpec::MinEntropy => {
                let mp = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let mq = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                mp / mq
            }
            MetricSpec::GLeakage { gain } => gain.best_gain(p) / gain.best_gain(q),
        }
    }

    /// Validated h(P, Q) = g₁(f(P, Q)). Convex in P for every catalog metric
    /// (checkable via [`crate::axioms::check_h_convexity`]).
    pub fn h_value(&self, p: &ProbVec, q: &ProbVec) -> Result<f64> {
        self.validate(q.len())?;
        if p.len() != q.len() {
            return Err(Error::LengthMismatch {
                expected: q.len(),
                got: p.len(),
            });
        }
        Ok(self.h_raw(p.probs(), q.probs()))
    }

    /// Outer map g₂ applied to an averaged g₁ value.
    pub fn g2_apply(&self, z: f64) -> Result<f64> {
        match self {
            MetricSpec::MutualInformation | MetricSpec::FDivergence { .. } => Ok(z),
            MetricSpec::Sibson { alpha } | MetricSpec::Arimoto { alpha } => {
                if z <= 0.0 {
                    return Err(Error::DomainError {
                        detail: format!("g2 needs a positive argument, got {z}"),
                    });
                }
                Ok(alpha / (alpha - 1.0) * z.log2())
            }
            MetricSpec::MaximalLeakage | MetricSpec::MinEntropy | MetricSpec::GLeakage { .. } => {
                if z <= 0.0 {
                    return Err(Error::DomainError {
                        detail: format!("g2 needs a positive argument, got {z}"),
                    });
                }
                Ok(z.log2())
            }
        }
    }
}

/// Σᵢ qᵢ·(pᵢ/qᵢ)^α with the usual support conventions: terms with pᵢ = 0
/// vanish, and positive pᵢ against qᵢ = 0 makes the sum infinite.
fn sibson_sum(p: &[f64], q: &[f64], alpha: f64) -> f64 {
    let mut acc = KahanSum::new();
    for (&pi, &qi) in p.iter().zip(q) {
        if pi > 0.0 {
            if qi <= 0.0 {
                return f64::INFINITY;
            }
            acc.add(qi.powf(1.0 - alpha) * pi.powf(alpha));
        }
    }
    acc.value()
}

/// (Σ pᵢ^α, Σ qᵢ^α).
fn arimoto_sums(p: &[f64], q: &[f64], alpha: f64) -> (f64, f64) {
    let mut np = KahanSum::new();
    let mut nq = KahanSum::new();
    for (&pi, &qi) in p.iter().zip(q) {
        if pi > 0.0 {
            np.add(pi.powf(alpha));
        }
        if qi > 0.0 {
            nq.add(qi.powf(alpha));
        }
    }
    (np.value(), nq.value())
}

/// max over the support of Q of pᵢ/qᵢ.
fn max_ratio(p: &[f64], q: &[f64]) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for (&pi, &qi) in p.iter().zip(q) {
        if qi > 0.0 {
            best = best.max(pi / qi);
        }
    }
    best
}

/// D_f̂(P‖Q) = Σᵢ pᵢ·f̂(qᵢ/pᵢ), in bits for the KL generator and unitless
/// otherwise, with the zero-mass limits taken term by term.
fn fdiv_raw(kind: FDivKind, p: &[f64], q: &[f64]) -> f64 {
    let mut acc = KahanSum::new();
    for (&pi, &qi) in p.iter().zip(q) {
        match kind {
            FDivKind::Kl => {
                if pi > 0.0 {
                    if qi <= 0.0 {
                        return f64::INFINITY;
                    }
                    acc.add(pi * (pi / qi).log2());
                }
            }
            FDivKind::ChiSquared => {
                if pi > 0.0 {
                    if qi <= 0.0 {
                        return f64::INFINITY;
                    }
                    acc.add(pi * pi / qi - pi);
                }
            }
            FDivKind::SquaredHellinger => {
                // p·(√(q/p) − 1)² = p + q − 2√(pq); the p → 0 limit is q.
                acc.add(pi + qi - 2.0 * (pi * qi).sqrt());
            }
        }
    }
    acc.value()
}

/// Leakage of a single realisation x: f(Eₓ, Q), the value the pointwise
/// leakage converges to when x is the true secret.
pub fn information_value(m: &MetricSpec, x: usize, q: &ProbVec) -> Result<f64> {
    m.validate(q.len())?;
    if x >= q.len() {
        return Err(Error::LengthMismatch {
            expected: q.len(),
            got: x,
        });
    }
    if q.get(x) <= 0.0 {
        return Err(Error::ZeroPriorRealisation { index: x });
    }
    let e = ProbVec::point_mass(q.len(), x)?;
    Ok(m.f_raw(e.probs(), q.probs()))
}

/// Distribution of the information value f(E_X, Q) with X drawn from Q.
/// Zero-prior realisations carry no mass and are skipped; equal values are
/// merged within the distribution tolerance.
pub fn information_distribution(m: &MetricSpec, q: &ProbVec) -> Result<LeakageDistribution> {
    m.validate(q.len())?;
    let mut pairs = Vec::new();
    for x in 0..q.len() {
        let mass = q.get(x);
        if mass > 0.0 {
            pairs.push((information_value(m, x, q)?, mass));
        }
    }
    LeakageDistribution::from_pairs(pairs)
}

/// A finite distribution of leakage values in bits: strictly increasing
/// support, positive masses summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct LeakageDistribution {
    values: Vec<f64>,
    probs: Vec<f64>,
    cumulative: Vec<f64>,
}

impl LeakageDistribution {
    /// Support values closer than this are merged into one atom.
    pub const MERGE_TOLERANCE: f64 = 1e-9;

    /// Builds a distribution from (value, mass) pairs: zero-mass pairs are
    /// dropped, values are sorted, and runs of values with consecutive gaps
    /// below [`Self::MERGE_TOLERANCE`] are merged into their
    /// probability-weighted mean (which preserves the distribution's first
    /// moment, and hence CDF-distance asymptotics, under merging).
    pub fn from_pairs(mut pairs: Vec<(f64, f64)>) -> Result<Self> {
        pairs.retain(|&(_, p)| p != 0.0);
        for &(v, p) in &pairs {
            if !v.is_finite() {
                return Err(Error::InfiniteLeakage {
                    detail: format!("support value {v} with mass {p}"),
                });
            }
            if !p.is_finite() || p < 0.0 {
                return Err(Error::NegativeEntry {
                    index: 0,
                    value: p,
                });
            }
        }
        if pairs.is_empty() {
            return Err(Error::EmptyVector);
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut values = Vec::new();
        let mut probs = Vec::new();
        let mut mass = 0.0f64;
        let mut weighted = KahanSum::new();
        let mut first_raw = f64::NEG_INFINITY;
        let mut prev_raw = f64::NEG_INFINITY;
        // A cluster of bit-identical values keeps that exact value: the
        // averaged mean can drift by an ulp, which would desynchronise
        // supports computed by different routes (exact vs. sampled).
        let close_cluster =
            |values: &mut Vec<f64>, probs: &mut Vec<f64>, w: &KahanSum, m: f64, lo: f64, hi: f64| {
                values.push(if lo == hi { lo } else { w.value() / m });
                probs.push(m);
            };
        for &(v, p) in &pairs {
            if !values.is_empty() || mass > 0.0 {
                // close the open cluster when the gap to the previous raw
                // value reaches the tolerance
                if v - prev_raw >= Self::MERGE_TOLERANCE {
                    close_cluster(&mut values, &mut probs, &weighted, mass, first_raw, prev_raw);
                    mass = 0.0;
                    weighted = KahanSum::new();
                    first_raw = v;
                }
            } else {
                first_raw = v;
            }
            mass += p;
            weighted.add(v * p);
            prev_raw = v;
        }
        close_cluster(&mut values, &mut probs, &weighted, mass, first_raw, prev_raw);

        let mut acc = KahanSum::new();
        let cumulative: Vec<f64> = probs
            .iter()
            .map(|&p| {
                acc.add(p);
                acc.value()
            })
            .collect();
        let total = *cumulative.last().expect("non-empty");
        if !((total - 1.0).abs() <= SUM_TOLERANCE) {
            return Err(Error::SumOutOfTolerance {
                sum: total,
                tol: SUM_TOLERANCE,
            });
        }
        Ok(Self {
            values,
            probs,
            cumulative,
        })
    }

    pub fn support(&self) -> &[f64] {
        &self.values
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().copied().zip(self.probs.iter().copied())
    }

    /// Right-continuous CDF at `v`.
    pub fn cdf_at(&self, v: f64) -> f64 {
        let idx = self.values.partition_point(|&x| x <= v);
        if idx == 0 {
            0.0
        } else {
            self.cumulative[idx - 1]
        }
    }

    /// Expected value.
    pub fn mean(&self) -> f64 {
        let mut acc = KahanSum::new();
        for (v, p) in self.iter() {
            acc.add(v * p);
        }
        acc.value()
    }
}

/// One-shot global leakage assembled from the metric's own pieces:
/// g₂(Σ_y Q_Y(y) · g₁(f(Q_{X|Y=y}, Q_X))), evaluated on the system exactly
/// as given — no row merging. Post-processing comparisons need this form
/// because a garbled channel can produce identical rows while the metric
/// (e.g. a gain matrix) stays dimensioned for the original secrets.
pub fn compositional_global_leakage(m: &MetricSpec, sys: &System) -> Result<f64> {
    m.validate(sys.n_inputs())?;
    let prior = sys.prior().probs();
    let mut acc = KahanSum::new();
    let mut posterior = vec![0.0f64; sys.n_inputs()];
    for y in 0..sys.n_outputs() {
        let mut marginal = KahanSum::new();
        for x in 0..sys.n_inputs() {
            posterior[x] = prior[x] * sys.channel().prob(x, y);
            marginal.add(posterior[x]);
        }
        let q_y = marginal.value();
        if q_y == 0.0 {
            continue;
        }
        for p in posterior.iter_mut() {
            *p /= q_y;
        }
        let h = m.h_raw(&posterior, prior);
        if !h.is_finite() {
            return Err(Error::InfiniteLeakage {
                detail: format!("inner value {h} on output {y} with marginal {q_y}"),
            });
        }
        acc.add(q_y * h);
    }
    m.g2_apply(acc.value())
}

/// Evaluates a metric's textbook global-leakage definition directly from the
/// prior and channel (one observation), without going through posteriors,
/// g₁/g₂, or type enumeration. Serves as an independent cross-check of the
/// compositional route.
pub fn standard_global_leakage(m: &MetricSpec, sys: &System) -> Result<f64> {
    m.validate(sys.n_inputs())?;
    let q = sys.prior().probs();
    let ch = sys.channel();
    let ny = sys.n_outputs();
    let nx = sys.n_inputs();

    // output marginal
    let marginal: Vec<f64> = (0..ny)
        .map(|y| {
            let mut acc = KahanSum::new();
            for x in 0..nx {
                acc.add(q[x] * ch.prob(x, y));
            }
            acc.value()
        })
        .collect();

    match m {
        MetricSpec::MutualInformation => {
            let mut acc = KahanSum::new();
            for x in 0..nx {
                for y in 0..ny {
                    let joint = q[x] * ch.prob(x, y);
                    if joint > 0.0 {
                        acc.add(joint * (ch.prob(x, y) / marginal[y]).log2());
                    }
                }
            }
            Ok(acc.value())
        }
        MetricSpec::Sibson { alpha } => {
            let mut outer = KahanSum::new();
            for y in 0..ny {
                let mut inner = KahanSum::new();
                for x in 0..nx {
                    if q[x] > 0.0 {
                        inner.add(q[x] * ch.prob(x, y).powf(*alpha));
                    }
                }
                outer.add(inner.value().powf(1.0 / alpha));
            }
            Ok(alpha / (alpha - 1.0) * outer.value().log2())
        }
        MetricSpec::Arimoto { alpha } => {
            let mut den = KahanSum::new();
            for x in 0..nx {
                if q[x] > 0.0 {
                    den.add(q[x].powf(*alpha));
                }
            }
            let den = den.value().powf(1.0 / alpha);
            let mut outer = KahanSum::new();
            for y in 0..ny {
                let mut inner = KahanSum::new();
                for x in 0..nx {
                    if q[x] > 0.0 {
                        inner.add(q[x].powf(*alpha) * ch.prob(x, y).powf(*alpha));
                    }
                }
                outer.add(inner.value().powf(1.0 / alpha));
            }
            Ok(alpha / (alpha - 1.0) * (outer.value() / den).log2())
        }
        MetricSpec::MaximalLeakage => {
            let mut acc = KahanSum::new();
            for y in 0..ny {
                let mut best = 0.0f64;
                for x in 0..nx {
                    if q[x] > 0.0 {
                        best = best.max(ch.prob(x, y));
                    }
                }
                acc.add(best);
            }
            Ok(acc.value().log2())
        }
        MetricSpec::MinEntropy => {
            let max_prior = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mut acc = KahanSum::new();
            for y in 0..ny {
                let mut best = 0.0f64;
                for x in 0..nx {
                    best = best.max(q[x] * ch.prob(x, y));
                }
                acc.add(best);
            }
            Ok((acc.value() / max_prior).log2())
        }
        MetricSpec::FDivergence { fdiv_kind } => {
            let mut acc = KahanSum::new();
            for y in 0..ny {
                if marginal[y] <= 0.0 {
                    continue;
                }
                // posterior by direct division
                let post: Vec<f64> = (0..nx)
                    .map(|x| q[x] * ch.prob(x, y) / marginal[y])
                    .collect();
                let div = match fdiv_kind {
                    FDivKind::Kl => {
                        let mut d = KahanSum::new();
                        for x in 0..nx {
                            if post[x] > 0.0 {
                                d.add(post[x] * (post[x] / q[x]).log2());
                            }
                        }
                        d.value()
                    }
                    FDivKind::ChiSquared => {
                        let mut d = KahanSum::new();
                        for x in 0..nx {
                            if post[x] > 0.0 {
                                d.add(post[x] * post[x] / q[x]);
                            }
                        }
                        d.value() - 1.0
                    }
                    FDivKind::SquaredHellinger => {
                        let mut d = KahanSum::new();
                        for x in 0..nx {
                            let s = post[x].sqrt() - q[x].sqrt();
                            d.add(s * s);
                        }
                        d.value()
                    }
                };
                acc.add(marginal[y] * div);
            }
            Ok(acc.value())
        }
        MetricSpec::GLeakage { gain } => {
            let prior_best = gain.best_gain(q);
            let mut acc = KahanSum::new();
            for y in 0..ny {
                let mut best = f64::NEG_INFINITY;
                for row in &gain.0 {
                    let mut s = KahanSum::new();
                    for x in 0..nx {
                        s.add(q[x] * ch.prob(x, y) * row[x]);
                    }
                    best = best.max(s.value());
                }
                acc.add(best);
            }
            Ok((acc.value() / prior_best).log2())
        }
    }
}

/// Representative metrics covering every catalog row, sized for `n_secrets`.
/// The gain-function entry uses the identity gain.
pub fn catalog_for(n_secrets: usize) -> Vec<MetricSpec> {
    vec![
        MetricSpec::MutualInformation,
        MetricSpec::Sibson { alpha: 2.0 },
        MetricSpec::Arimoto { alpha: 2.0 },
        MetricSpec::MaximalLeakage,
        MetricSpec::MinEntropy,
        MetricSpec::FDivergence {
            fdiv_kind: FDivKind::Kl,
        },
        MetricSpec::FDivergence {
            fdiv_kind: FDivKind::ChiSquared,
        },
        MetricSpec::FDivergence {
            fdiv_kind: FDivKind::SquaredHellinger,
        },
        MetricSpec::GLeakage {
            gain: GainMatrix::identity(n_secrets),
        },
    ]
}
