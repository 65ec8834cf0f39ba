//! Exact finite-n leakage via type-class enumeration.
//!
//! The posterior after n independent channel outputs depends on the output
//! string only through its histogram (type class). There are only
//! C(n+|Y|−1, |Y|−1) histograms against |Y|ⁿ strings, so exact leakage
//! distributions and expectations stay tractable well past the n where the
//! asymptotics kick in.
//!
//! The geometry of a type P — its divergence to each channel row, the margin
//! between the closest and second-closest row, and whether it lies deep
//! inside a row's decision region — is what drives the exponential
//! convergence rates measured by [`crate::chernoff`]: posteriors concentrate
//! at rate 2^(−n·margin), and the stragglers near decision boundaries carry
//! probability 2^(−n·C) where C is the minimum pairwise Chernoff information
//! of the channel.

use crate::error::{Error, Result};
use crate::metrics::{LeakageDistribution, MetricSpec};
use crate::numeric::{log_sum_exp, KahanSum, LnFactorials};
use crate::prob::{merge_equivalent_rows, System, DEFAULT_MERGE_TOLERANCE};

/// Hard cap on the number of type classes a single exact computation may
/// enumerate.
pub const MAX_TYPE_EVALUATIONS: u128 = 100_000_000;

/// A histogram of n channel outputs over the output alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeClass {
    counts: Vec<u64>,
}

impl TypeClass {
    pub fn new(counts: Vec<u64>) -> Self {
        Self { counts }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn n(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// The empirical distribution counts/n.
    pub fn empirical(&self) -> Vec<f64> {
        let n = self.n() as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }
}

/// Number of type classes C(n+m−1, m−1), or a SizeLimit error when it
/// exceeds [`MAX_TYPE_EVALUATIONS`] (or overflows outright).
pub fn count_types(n: u64, m: usize) -> Result<u128> {
    if m == 0 {
        return Err(Error::EmptyVector);
    }
    let mut count: u128 = 1;
    for i in 1..m as u128 {
        count = count
            .checked_mul(n as u128 + i)
            .ok_or(Error::SizeLimit {
                size: u128::MAX,
                limit: MAX_TYPE_EVALUATIONS,
            })?
            / i; // exact division: the running product is a binomial coefficient
    }
    if count > MAX_TYPE_EVALUATIONS {
        return Err(Error::SizeLimit {
            size: count,
            limit: MAX_TYPE_EVALUATIONS,
        });
    }
    Ok(count)
}

/// Calls `f` once per histogram of n outcomes over m symbols, in ascending
/// lexicographic order, reusing one counts buffer.
fn visit_types<F>(n: u64, m: usize, mut f: F) -> Result<()>
where
    F: FnMut(&[u64]) -> Result<()>,
{
    count_types(n, m)?;
    fn rec<F>(counts: &mut [u64], pos: usize, rem: u64, f: &mut F) -> Result<()>
    where
        F: FnMut(&[u64]) -> Result<()>,
    {
        if pos + 1 == counts.len() {
            counts[pos] = rem;
            return f(counts);
        }
        for c in 0..=rem {
            counts[pos] = c;
            rec(counts, pos + 1, rem - c, f)?;
        }
        Ok(())
    }
    let mut counts = vec![0u64; m];
    rec(&mut counts, 0, n, &mut f)
}

/// All type classes for n outcomes over m symbols, ascending lexicographic.
pub fn enumerate_types(n: u64, m: usize) -> Result<Vec<TypeClass>> {
    let mut out = Vec::with_capacity(count_types(n, m)? as usize);
    visit_types(n, m, |counts| {
        out.push(TypeClass::new(counts.to_vec()));
        Ok(())
    })?;
    Ok(out)
}

/// Divergence ordering of a type against the (merged) channel rows.
#[derive(Debug, Clone)]
pub struct TypeGeometry {
    /// Labels of the merged secret classes the divergences refer to.
    pub labels: Vec<String>,
    /// D(P‖Q_x) in bits per merged class x (+∞ when P puts mass where the
    /// row doesn't).
    pub divergences: Vec<f64>,
    /// Class indices sorted by (divergence, index).
    pub order: Vec<usize>,
    /// Divergence margin between the second-closest and closest rows.
    pub k_gap: f64,
    /// True when the closest row is strictly unique.
    pub in_domain: bool,
    /// True when the type sits at least 1/√n deeper than the channel
    /// constant c_n, i.e. c_n − D(P‖Q_{x★}) ≥ 1/√n.
    pub in_tilde: bool,
}

impl TypeGeometry {
    /// The maximum-likelihood class (closest row; smallest index on ties).
    pub fn x_star(&self) -> usize {
        self.order[0]
    }

    /// The second-closest class.
    pub fn x_second(&self) -> usize {
        self.order[1]
    }
}

/// D(empirical‖row) in bits for each channel row of `sys`.
fn divergences_to_rows(sys: &System, empirical: &[f64]) -> Vec<f64> {
    (0..sys.n_inputs())
        .map(|x| {
            let row = sys.channel().row(x).probs();
            let mut acc = KahanSum::new();
            for (&pe, &r) in empirical.iter().zip(row) {
                if pe > 0.0 {
                    if r <= 0.0 {
                        return f64::INFINITY;
                    }
                    acc.add(pe * (pe / r).log2());
                }
            }
            acc.value()
        })
        .collect()
}

/// Smallest and second-smallest entries of a divergence vector.
fn two_smallest(ds: &[f64]) -> (f64, f64) {
    let (mut d1, mut d2) = (f64::INFINITY, f64::INFINITY);
    for &d in ds {
        if d < d1 {
            d2 = d1;
            d1 = d;
        } else if d < d2 {
            d2 = d;
        }
    }
    (d1, d2)
}

/// Geometry of one type class against the merged rows of `sys`.
///
/// `c_n_value` is the channel constant for this n (from [`c_n`]); it is a
/// per-(system, n) quantity, so callers classifying many types should
/// compute it once and pass it in.
pub fn type_geometry(sys: &System, t: &TypeClass, c_n_value: f64) -> Result<TypeGeometry> {
    let merged = merge_equivalent_rows(sys, DEFAULT_MERGE_TOLERANCE)?;
    let s = &merged.system;
    if s.n_inputs() < 2 {
        return Err(Error::SingleClass);
    }
    if t.counts().len() != s.n_outputs() {
        return Err(Error::CountMismatch {
            detail: format!(
                "type has {} symbols but the channel has {} outputs",
                t.counts().len(),
                s.n_outputs()
            ),
        });
    }
    let n = t.n();
    if n == 0 {
        return Err(Error::CountMismatch {
            detail: "type geometry needs at least one observation".into(),
        });
    }
    let empirical = t.empirical();
    let divergences = divergences_to_rows(s, &empirical);
    let mut order: Vec<usize> = (0..divergences.len()).collect();
    order.sort_by(|&a, &b| divergences[a].total_cmp(&divergences[b]).then(a.cmp(&b)));
    let d_star = divergences[order[0]];
    let d_second = divergences[order[1]];
    Ok(TypeGeometry {
        labels: s.x_labels().to_vec(),
        divergences,
        order,
        k_gap: d_second - d_star,
        in_domain: d_star < d_second,
        in_tilde: c_n_value - d_star >= 1.0 / (n as f64).sqrt(),
    })
}

/// The channel constant at blocklength n: the smallest divergence from any
/// type to its second-closest merged row. Converges to the minimum pairwise
/// Chernoff information of the channel as n grows.
pub fn c_n(sys: &System, n: u64) -> Result<f64> {
    let merged = merge_equivalent_rows(sys, DEFAULT_MERGE_TOLERANCE)?;
    let s = &merged.system;
    if s.n_inputs() < 2 {
        return Err(Error::SingleClass);
    }
    if n == 0 {
        return Err(Error::CountMismatch {
            detail: "the channel constant needs at least one observation".into(),
        });
    }
    let nf = n as f64;
    let mut best = f64::INFINITY;
    let mut empirical = vec![0.0f64; s.n_outputs()];
    visit_types(n, s.n_outputs(), |counts| {
        for (dst, &c) in empirical.iter_mut().zip(counts) {
            *dst = c as f64 / nf;
        }
        let ds = divergences_to_rows(s, &empirical);
        let (_, d2) = two_smallest(&ds);
        if d2 < best {
            best = d2;
        }
        Ok(())
    })?;
    Ok(best)
}

/// Shared enumeration core. Merges equivalent rows, then calls
/// `f(counts, type_probability, posterior, prior)` for every type class with
/// nonzero probability, in ascending lexicographic order.
fn for_each_type<F>(sys: &System, n: u64, mut f: F) -> Result<()>
where
    F: FnMut(&[u64], f64, &[f64], &[f64]) -> Result<()>,
{
    let merged = merge_equivalent_rows(sys, DEFAULT_MERGE_TOLERANCE)?;
    let s = &merged.system;
    let prior: Vec<f64> = s.prior().probs().to_vec();
    let lf = LnFactorials::up_to(n);
    let mut posterior = vec![0.0f64; s.n_inputs()];
    visit_types(n, s.n_outputs(), |counts| {
        let log_joint = s.log_joint(counts);
        let lz = log_sum_exp(&log_joint);
        if lz == f64::NEG_INFINITY {
            // no secret can produce this histogram: zero probability
            return Ok(());
        }
        let ln_mult = lf.ln_multinomial(counts);
        let mut prob = KahanSum::new();
        for &v in &log_joint {
            if v > f64::NEG_INFINITY {
                prob.add((ln_mult + v).exp());
            }
        }
        for (dst, &v) in posterior.iter_mut().zip(&log_joint) {
            *dst = (v - lz).exp();
        }
        f(counts, prob.value(), &posterior, &prior)
    })
}

/// Exact distribution of the pointwise leakage after n observations: one
/// atom per type class, weighted by the type's probability, with nearby
/// support values merged to their probability-weighted mean.
///
/// Equivalent rows are merged first; the metric must be finite on every
/// positive-probability type.
pub fn exact_pointwise_distribution(
    m: &MetricSpec,
    sys: &System,
    n: u64,
) -> Result<LeakageDistribution> {
    let mut pairs = Vec::new();
    let mut validated = false;
    for_each_type(sys, n, |counts, prob, posterior, prior| {
        if !validated {
            m.validate(prior.len())?;
            validated = true;
        }
        let value = m.f_raw(posterior, prior);
        if !value.is_finite() {
            return Err(Error::InfiniteLeakage {
                detail: format!(
                    "pointwise value {value} on type {counts:?} with probability {prob:e}"
                ),
            });
        }
        pairs.push((value, prob));
        Ok(())
    })?;
    debug_assert!(validated, "every valid system has a possible histogram");
    LeakageDistribution::from_pairs(pairs)
}

/// Exact global leakage after n observations: g₂ of the type-weighted
/// expectation of h = g₁∘f, accumulated with compensated summation in
/// lexicographic type order.
pub fn exact_global_leakage(m: &MetricSpec, sys: &System, n: u64) -> Result<f64> {
    let mut acc = KahanSum::new();
    let mut validated = false;
    for_each_type(sys, n, |counts, prob, posterior, prior| {
        if !validated {
            m.validate(prior.len())?;
            validated = true;
        }
        if prob == 0.0 {
            return Ok(());
        }
        let h = m.h_raw(posterior, prior);
        if !h.is_finite() {
            return Err(Error::InfiniteLeakage {
                detail: format!(
                    "inner value {h} on type {counts:?} with probability {prob:e}"
                ),
            });
        }
        acc.add(prob * h);
        Ok(())
    })?;
    m.g2_apply(acc.value())
}

/// The n→∞ limit of the global leakage: the adversary eventually pins the
/// posterior to the point mass of the true merged class, so the limit is
/// g₂(Σ_x q_x · g₁(f(E_x, q))) over merged classes with positive prior.
pub fn global_limit(m: &MetricSpec, sys: &System) -> Result<f64> {
    let merged = merge_equivalent_rows(sys, DEFAULT_MERGE_TOLERANCE)?;
    let s = &merged.system;
    let prior = s.prior().probs();
    m.validate(prior.len())?;
    let mut acc = KahanSum::new();
    let mut point = vec![0.0f64; prior.len()];
    for (x, &q) in prior.iter().enumerate() {
        if q == 0.0 {
            continue;
        }
        point[x] = 1.0;
        let value = m.f_raw(&point, prior);
        point[x] = 0.0;
        if !value.is_finite() {
            return Err(Error::InfiniteLeakage {
                detail: format!("limit value {value} on class {x} with prior {q}"),
            });
        }
        acc.add(q * m.g1_apply(value));
    }
    m.g2_apply(acc.value())
}

/// L¹ distance between two step CDFs: ∫|F_a − F_b| dv over the union of
/// their supports.
pub fn cdf_l1_distance(a: &LeakageDistribution, b: &LeakageDistribution) -> f64 {
    let va = a.support();
    let vb = b.support();
    let mut points: Vec<f64> = va.iter().chain(vb.iter()).copied().collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    let mut acc = KahanSum::new();
    for w in points.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        acc.add((a.cdf_at(lo) - b.cdf_at(lo)).abs() * (hi - lo));
    }
    acc.value()
}

/// Kolmogorov–Smirnov distance between two step CDFs. Both CDFs are
/// constant between jump points, so the supremum is attained at a jump of
/// one of them. Jump points closer than the distribution merge tolerance
/// are treated as the same atom (evaluated after both sides have jumped):
/// supports are only canonical to within that tolerance, and a sliver of
/// disagreement an ulp wide should not register as a full atom of distance.
pub fn ks_distance(a: &LeakageDistribution, b: &LeakageDistribution) -> f64 {
    let mut points: Vec<f64> = a.support().iter().chain(b.support().iter()).copied().collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    let mut best: f64 = 0.0;
    let mut i = 0;
    while i < points.len() {
        // swallow the whole cluster of nearby jump points
        let mut j = i;
        while j + 1 < points.len()
            && points[j + 1] - points[j] < LeakageDistribution::MERGE_TOLERANCE
        {
            j += 1;
        }
        let v = points[j];
        best = best.max((a.cdf_at(v) - b.cdf_at(v)).abs());
        i = j + 1;
    }
    best
}
