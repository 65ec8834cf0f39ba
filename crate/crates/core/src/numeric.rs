//! Small numeric building blocks shared across the crate.
//!
//! Probability mass over long observation sequences is accumulated in
//! natural-log space and only converted to bits at the interface. Plain
//! summation is not precise enough at the tail of the decay experiments
//! (gaps of ~1e-10 against totals of ~1), so reductions over type classes
//! use compensated (Kahan) summation and log-multinomials come from a
//! compensated cumulative log-factorial table.

use std::f64::consts::LN_2;

use rand::Rng;

/// Kahan–Babuška compensated accumulator.
///
/// Error stays O(eps · Σ|xᵢ|) independent of the number of terms, where naive
/// summation grows linearly with it.
#[derive(Debug, Clone, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// log(Σ exp(vᵢ)) over natural-log values, tolerating -inf entries
/// (which contribute zero mass). Returns -inf for an empty or all--inf input.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let m = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let mut acc = KahanSum::new();
    for &v in values {
        if v > f64::NEG_INFINITY {
            acc.add((v - m).exp());
        }
    }
    m + acc.value().ln()
}

/// Convert natural-log values to bits.
pub fn nats_to_bits(x: f64) -> f64 {
    x / LN_2
}

/// Cumulative table of ln k! for k = 0..=n, built with compensated summation
/// so the absolute error stays ~1e-13 nats even at k in the hundreds.
#[derive(Debug, Clone)]
pub struct LnFactorials {
    table: Vec<f64>,
}

impl LnFactorials {
    pub fn up_to(n: u64) -> Self {
        let mut table = Vec::with_capacity(n as usize + 1);
        let mut acc = KahanSum::new();
        table.push(0.0);
        for k in 1..=n {
            acc.add((k as f64).ln());
            table.push(acc.value());
        }
        Self { table }
    }

    pub fn ln_factorial(&self, k: u64) -> f64 {
        self.table[k as usize]
    }

    /// ln of the multinomial coefficient (Σ counts)! / Π countsᵢ!.
    pub fn ln_multinomial(&self, counts: &[u64]) -> f64 {
        let n: u64 = counts.iter().sum();
        let mut v = self.ln_factorial(n);
        for &c in counts {
            v -= self.ln_factorial(c);
        }
        v
    }
}

/// Uniform sample from the probability simplex over `k` outcomes
/// (normalized standard exponentials). Entries are strictly positive
/// almost surely.
pub fn sample_simplex<R: Rng>(rng: &mut R, k: usize) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..k)
            .map(|_| {
                let u: f64 = rng.gen();
                -(1.0 - u).ln()
            })
            .collect();
        let total: f64 = v.iter().sum();
        if total > 0.0 && v.iter().all(|x| x.is_finite() && *x > 0.0) {
            for x in &mut v {
                *x /= total;
            }
            return v;
        }
    }
}
