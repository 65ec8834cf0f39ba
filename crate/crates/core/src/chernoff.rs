//! Chernoff information and measured leakage decay rates.
//!
//! The gap between n-observation leakage and its limit closes exponentially,
//! 2^(−n·C+o(n)), where C is the smallest pairwise Chernoff information
//! among the channel rows — the binary-hypothesis error exponent of the two
//! hardest-to-distinguish secrets. This module computes C and fits measured
//! gap sequences against it.

use serde::{Deserialize, Serialize};

use crate::composition::{
    cdf_l1_distance, exact_global_leakage, exact_pointwise_distribution, global_limit,
};
use crate::error::{Error, Result};
use crate::metrics::{information_distribution, MetricSpec};
use crate::numeric::{log_sum_exp, KahanSum};
use crate::prob::{merge_equivalent_rows, Channel, ProbVec, System, DEFAULT_MERGE_TOLERANCE};

const GOLDEN_TOLERANCE: f64 = 1e-10;

/// ln Σ_i p_i^λ q_i^(1−λ) over the common support, given the log masses.
fn phi(ln_p: &[f64], ln_q: &[f64], lambda: f64) -> f64 {
    let terms: Vec<f64> = ln_p
        .iter()
        .zip(ln_q)
        .map(|(&a, &b)| lambda * a + (1.0 - lambda) * b)
        .collect();
    log_sum_exp(&terms)
}

/// Chernoff information between two distributions, in bits:
/// C(P, Q) = −log₂ min_{λ∈[0,1]} Σ_i p_i^λ q_i^(1−λ).
///
/// Returns +∞ for distributions with disjoint supports (they are
/// distinguishable from a single observation almost surely).
pub fn chernoff_information(p: &ProbVec, q: &ProbVec) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    let mut ln_p = Vec::new();
    let mut ln_q = Vec::new();
    for (&a, &b) in p.probs().iter().zip(q.probs()) {
        if a > 0.0 && b > 0.0 {
            ln_p.push(a.ln());
            ln_q.push(b.ln());
        }
    }
    if ln_p.is_empty() {
        return Ok(f64::INFINITY);
    }

    // φ is convex on [0,1]; golden-section search plus the endpoints.
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = phi(&ln_p, &ln_q, x1);
    let mut f2 = phi(&ln_p, &ln_q, x2);
    while hi - lo > GOLDEN_TOLERANCE {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = phi(&ln_p, &ln_q, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = phi(&ln_p, &ln_q, x2);
        }
    }
    let interior = f1.min(f2);
    let at_ends = phi(&ln_p, &ln_q, 0.0).min(phi(&ln_p, &ln_q, 1.0));
    let min_phi = interior.min(at_ends);
    Ok((-min_phi / std::f64::consts::LN_2).max(0.0))
}

/// The smallest pairwise Chernoff information among the channel rows and the
/// (row, row) pair attaining it. Ties resolve to the lexicographically first
/// pair.
pub fn min_pairwise_chernoff(channel: &Channel) -> Result<(f64, (usize, usize))> {
    let k = channel.n_inputs();
    if k < 2 {
        return Err(Error::SingleClass);
    }
    let mut best = f64::INFINITY;
    let mut arg = (0, 1);
    for i in 0..k {
        for j in (i + 1)..k {
            let c = chernoff_information(channel.row(i), channel.row(j))?;
            if c < best {
                best = c;
                arg = (i, j);
            }
        }
    }
    Ok((best, arg))
}

/// Which gap sequence a rate experiment measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateMode {
    /// Limit minus the n-observation global leakage.
    GlobalGap,
    /// L¹ distance between the n-observation pointwise-leakage CDF and the
    /// CDF of the information value of the secret.
    PointwiseL1,
}

impl RateMode {
    pub fn name(self) -> &'static str {
        match self {
            RateMode::GlobalGap => "global_gap",
            RateMode::PointwiseL1 => "pointwise_l1",
        }
    }
}

impl std::str::FromStr for RateMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "global_gap" | "global-gap" | "gap" => Ok(RateMode::GlobalGap),
            "pointwise_l1" | "pointwise-l1" | "l1" => Ok(RateMode::PointwiseL1),
            other => Err(Error::Parse {
                detail: format!("unknown rate mode '{other}' (use global_gap or pointwise_l1)"),
            }),
        }
    }
}

/// One measured gap.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RatePoint {
    pub n: u64,
    pub gap_bits: f64,
}

/// A measured decay-rate experiment with its least-squares fit and the
/// channel's predicted exponent.
#[derive(Debug, Clone, Serialize)]
pub struct RateReport {
    pub metric_name: String,
    pub mode: RateMode,
    pub points: Vec<RatePoint>,
    /// Inclusive n-range used for the fit.
    pub window: (u64, u64),
    pub slope_bits_per_n: f64,
    pub intercept_bits: f64,
    pub r_squared: f64,
    /// Predicted exponent: minimum pairwise Chernoff information (bits).
    pub c_min_bits: f64,
    /// Merged-class pair attaining the minimum.
    pub c_argmin: (usize, usize),
    /// |slope + C| / C — how far the measured exponent sits from −C.
    pub relative_error: f64,
}

/// Ordinary least squares of log₂(gap) against n over the points inside the
/// inclusive window. Returns (slope, intercept, r²).
pub fn fit_decay_rate(points: &[RatePoint], window: (u64, u64)) -> Result<(f64, f64, f64)> {
    let selected: Vec<&RatePoint> = points
        .iter()
        .filter(|p| p.n >= window.0 && p.n <= window.1)
        .collect();
    if selected.len() < 3 {
        return Err(Error::InsufficientPoints {
            needed: 3,
            got: selected.len(),
        });
    }
    let mut xs = Vec::with_capacity(selected.len());
    let mut ys = Vec::with_capacity(selected.len());
    for p in &selected {
        if !(p.gap_bits > 0.0) {
            return Err(Error::NonPositiveGap {
                n: p.n as u32,
                value: p.gap_bits,
            });
        }
        xs.push(p.n as f64);
        ys.push(p.gap_bits.log2());
    }
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut sxx = KahanSum::new();
    let mut sxy = KahanSum::new();
    for (&x, &y) in xs.iter().zip(&ys) {
        sxx.add((x - mean_x) * (x - mean_x));
        sxy.add((x - mean_x) * (y - mean_y));
    }
    let slope = sxy.value() / sxx.value();
    let intercept = mean_y - slope * mean_x;
    let mut ss_res = KahanSum::new();
    let mut ss_tot = KahanSum::new();
    for (&x, &y) in xs.iter().zip(&ys) {
        let fit = slope * x + intercept;
        ss_res.add((y - fit) * (y - fit));
        ss_tot.add((y - mean_y) * (y - mean_y));
    }
    let r_squared = if ss_tot.value() == 0.0 {
        1.0
    } else {
        1.0 - ss_res.value() / ss_tot.value()
    };
    Ok((slope, intercept, r_squared))
}

/// Measures the gap sequence for `m` on `sys` at each n in `ns`, fits the
/// exponential decay over `window`, and compares the fitted exponent with
/// the channel's minimum pairwise Chernoff information.
pub fn rate_experiment(
    m: &MetricSpec,
    sys: &System,
    ns: &[u64],
    window: (u64, u64),
    mode: RateMode,
) -> Result<RateReport> {
    let merged = merge_equivalent_rows(sys, DEFAULT_MERGE_TOLERANCE)?;
    let s = &merged.system;
    m.validate(s.n_inputs())?;
    let (c_min_bits, c_argmin) = min_pairwise_chernoff(s.channel())?;

    let mut points = Vec::with_capacity(ns.len());
    match mode {
        RateMode::GlobalGap => {
            let limit = global_limit(m, s)?;
            for &n in ns {
                let gap = limit - exact_global_leakage(m, s, n)?;
                points.push(RatePoint { n, gap_bits: gap });
            }
        }
        RateMode::PointwiseL1 => {
            let target = information_distribution(m, s.prior())?;
            for &n in ns {
                let dist = exact_pointwise_distribution(m, s, n)?;
                points.push(RatePoint {
                    n,
                    gap_bits: cdf_l1_distance(&dist, &target),
                });
            }
        }
    }

    let (slope_bits_per_n, intercept_bits, r_squared) = fit_decay_rate(&points, window)?;
    let relative_error = if c_min_bits > 0.0 {
        (slope_bits_per_n + c_min_bits).abs() / c_min_bits
    } else {
        f64::INFINITY
    };
    Ok(RateReport {
        metric_name: m.name(),
        mode,
        points,
        window,
        slope_bits_per_n,
        intercept_bits,
        r_squared,
        c_min_bits,
        c_argmin,
        relative_error,
    })
}
