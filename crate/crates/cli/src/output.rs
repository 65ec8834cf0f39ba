//! CSV and plain-text rendering. Every CSV writer formats floats with the
//! default `Display` (shortest round-trip form), so identical inputs always
//! produce byte-identical output.

use privleak_core::axioms::{AxiomReport, CheckStatus};
use privleak_core::chernoff::RateReport;
use privleak_core::LeakageDistribution;

pub struct ComposeRow {
    pub n: u64,
    pub metric: String,
    pub global_leakage_bits: f64,
    pub global_limit_bits: f64,
    pub gap_bits: f64,
    pub l1_to_information_cdf: f64,
}

pub struct ChernoffRow {
    pub row_a: usize,
    pub row_b: usize,
    pub chernoff_bits: f64,
    pub is_min: bool,
}

/// One-row table for `leak`; the value column is named by the caller
/// (`value_bits` for a single histogram, `global_leakage_bits` for the
/// expectation over n observations).
pub fn leak_csv(value_col: &str, metric: &str, n: u64, value: f64) -> String {
    format!("metric,n,{value_col}\n{metric},{n},{value}\n")
}

/// `value_bits,prob,cdf` rows in ascending value order.
pub fn distribution_csv(dist: &LeakageDistribution) -> String {
    let mut out = String::from("value_bits,prob,cdf\n");
    let mut cdf = 0.0;
    for (value, prob) in dist.iter() {
        cdf += prob;
        out.push_str(&format!("{value},{prob},{cdf}\n"));
    }
    out
}

/// `value_bits,empirical_cdf` rows for a simulated distribution.
pub fn simulate_csv(dist: &LeakageDistribution) -> String {
    let mut out = String::from("value_bits,empirical_cdf\n");
    let mut cdf = 0.0;
    for (value, prob) in dist.iter() {
        cdf += prob;
        out.push_str(&format!("{value},{cdf}\n"));
    }
    out
}

pub fn compose_csv(rows: &[ComposeRow]) -> String {
    let mut out = String::from(
        "n,metric,global_leakage_bits,global_limit_bits,gap_bits,l1_to_information_cdf\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n,
            r.metric,
            r.global_leakage_bits,
            r.global_limit_bits,
            r.gap_bits,
            r.l1_to_information_cdf
        ));
    }
    out
}

/// Flat table: one row per measured point, with the fit summary repeated in
/// the trailing columns so the file stands alone.
pub fn rate_csv(report: &RateReport) -> String {
    let mut out = String::from(
        "n,gap_bits,metric,mode,window_lo,window_hi,slope_bits_per_n,intercept_bits,\
         r_squared,c_min_bits,c_argmin_a,c_argmin_b,relative_error\n",
    );
    for p in &report.points {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            p.n,
            p.gap_bits,
            report.metric_name,
            report.mode.name(),
            report.window.0,
            report.window.1,
            report.slope_bits_per_n,
            report.intercept_bits,
            report.r_squared,
            report.c_min_bits,
            report.c_argmin.0,
            report.c_argmin.1,
            report.relative_error
        ));
    }
    out
}

pub fn chernoff_csv(rows: &[ChernoffRow]) -> String {
    let mut out = String::from("row_a,row_b,chernoff_bits,is_min\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.row_a, r.row_b, r.chernoff_bits, r.is_min
        ));
    }
    out
}

fn status_str(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "FAIL",
        CheckStatus::Inconclusive => "inconclusive",
    }
}

/// Plain-text table over all verification reports, one line per check,
/// with witness points on continuation lines.
pub fn verify_table(reports: &[AxiomReport]) -> String {
    let mut out = String::new();
    for report in reports {
        out.push_str(&format!(
            "metric {}  prior {:?}\n",
            report.metric, report.prior
        ));
        for check in &report.checks {
            out.push_str(&format!(
                "  {:<44} {:<12} {:>7}  {}\n",
                check.name, status_str(check.status), check.samples_used, check.detail
            ));
            if let Some(w) = &check.witness {
                out.push_str(&format!("    witness p = {:?}, q = {:?}\n", w.p, w.q));
            }
        }
    }
    out
}
