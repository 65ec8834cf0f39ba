//! End-to-end acceptance gate. Ten numbered checks, each printing one
//! PASS/FAIL line with its runtime; the test panics at the end if any check
//! failed. All tolerances are pinned here, not configurable.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

mod common;

use std::time::{Duration, Instant};

use privleak_core::adversary::{
    bayes_error, min_entropy_identity, simulate_empirical_cdf, SimulationConfig,
};
use privleak_core::axioms::{
    check_axioms, check_axioms_fn, check_data_processing, check_derivative_property,
    check_derivative_property_fn, check_h_convexity, check_h_convexity_fn, CheckConfig,
    CheckStatus,
};
use privleak_core::chernoff::{
    chernoff_information, min_pairwise_chernoff, rate_experiment, RateMode,
};
use privleak_core::composition::{
    c_n, cdf_l1_distance, enumerate_types, exact_global_leakage, exact_pointwise_distribution,
    global_limit, ks_distance, type_geometry,
};
use privleak_core::metrics::{
    catalog_for, compositional_global_leakage, information_distribution, information_value,
    standard_global_leakage,
};
use privleak_core::{presets, MetricSpec, ProbVec};
use rand::Rng;

use common::OracleMetric;

type Outcome = Result<String, String>;

const TOL: f64 = 1e-9;

/// Minimum pairwise Chernoff information of the three-symbol channel, bits.
/// Pinned from the golden-section solver and confirmed by the grid oracle.
const THREE_SYMBOL_CHERNOFF: f64 = 0.16355822766945521;

/// Chernoff information between the survey channel's rows, bits. Equals
/// −log₂(√5/3) in closed form.
const SURVEY_CHERNOFF: f64 = 0.423998453277475;

fn pml() -> MetricSpec {
    MetricSpec::MaximalLeakage
}

// 1. Survey cross-check: one "No" observation leaks log₂(5/3) bits under
// the max-ratio pointwise metric; the balanced pair ("No","Yes") leaks 0.
fn c01_binary_survey() -> Outcome {
    let sys = presets::binary_survey();
    let expected = (5.0f64 / 3.0).log2();

    // counts indexed (Yes, No): one "No".
    let post_no = sys.posterior_from_counts(&[0, 1]).map_err(|e| e.to_string())?;
    let leak_no = pml()
        .pointwise_f(&post_no, sys.prior())
        .map_err(|e| e.to_string())?;
    if (leak_no - expected).abs() > TOL {
        return Err(format!(
            "single-\"No\" leakage {leak_no} differs from log₂(5/3) = {expected}"
        ));
    }
    // The guessing side of the same observation: posterior mass 5/6 on "No".
    if (post_no.get(1) - 5.0 / 6.0).abs() > TOL {
        return Err(format!("posterior on \"No\" is {}, expected 5/6", post_no.get(1)));
    }

    let post_both = sys.posterior_from_counts(&[1, 1]).map_err(|e| e.to_string())?;
    let leak_both = pml()
        .pointwise_f(&post_both, sys.prior())
        .map_err(|e| e.to_string())?;
    if leak_both.abs() > TOL {
        return Err(format!("balanced observations leak {leak_both}, expected 0"));
    }

    Ok(format!(
        "one \"No\" leaks {leak_no:.9} bits (posterior 5/6); a balanced pair leaks {leak_both:e}"
    ))
}

// 2. Global mutual-information gap on the three-symbol system: the limit is
// the prior entropy, and log₂(limit − value at n) decays linearly in n with
// slope −C (minimum pairwise Chernoff information), within 10% over
// n ∈ [60, 200].
fn c02_global_gap_rate() -> Outcome {
    let sys = presets::three_symbol();
    let mi = MetricSpec::MutualInformation;

    let entropy: f64 = sys
        .prior()
        .probs()
        .iter()
        .map(|&q| if q > 0.0 { -q * q.log2() } else { 0.0 })
        .sum();
    let limit = global_limit(&mi, &sys).map_err(|e| e.to_string())?;
    if (limit - entropy).abs() > TOL {
        return Err(format!(
            "mutual-information limit {limit} differs from prior entropy {entropy}"
        ));
    }

    let ns: Vec<u64> = (60..=200).step_by(10).collect();
    let report = rate_experiment(&mi, &sys, &ns, (60, 200), RateMode::GlobalGap)
        .map_err(|e| e.to_string())?;
    if (report.c_min_bits - THREE_SYMBOL_CHERNOFF).abs() > 1e-12 {
        return Err(format!(
            "channel exponent {} drifted from the pinned {THREE_SYMBOL_CHERNOFF}",
            report.c_min_bits
        ));
    }
    if report.relative_error > 0.10 {
        return Err(format!(
            "fitted slope {:.6} is {:.1}% away from −C = −{:.6} (limit 10%)",
            report.slope_bits_per_n,
            100.0 * report.relative_error,
            report.c_min_bits
        ));
    }
    Ok(format!(
        "limit = H = {entropy:.6}; slope {:.6} vs −C = −{:.6} ({:.2}% off, r² = {:.6})",
        report.slope_bits_per_n,
        report.c_min_bits,
        100.0 * report.relative_error,
        report.r_squared
    ))
}

// 3. Pointwise CDF-distance decay on the three-symbol system, whole catalog:
// metrics that pass the directional-derivative check must match −C within
// 10%; any others must still decay at least as fast as 0.9·C.
fn c03_pointwise_l1_rate() -> Outcome {
    let sys = presets::three_symbol();
    let ns: Vec<u64> = (60..=200).step_by(10).collect();
    let mut lines = Vec::new();

    let mut pml_seen = false;
    for m in catalog_for(sys.n_inputs()) {
        let derivative_ok = check_derivative_property(&m, sys.prior()).all_pass();
        if m == pml() {
            pml_seen = true;
            if !derivative_ok {
                return Err("max-ratio metric failed its derivative check".into());
            }
        }
        let report = rate_experiment(&m, &sys, &ns, (60, 200), RateMode::PointwiseL1)
            .map_err(|e| format!("{}: {e}", m.name()))?;
        if derivative_ok {
            if report.relative_error > 0.10 {
                return Err(format!(
                    "{}: slope {:.6} is {:.1}% from −C (limit 10%, derivative verified)",
                    m.name(),
                    report.slope_bits_per_n,
                    100.0 * report.relative_error
                ));
            }
        } else if report.slope_bits_per_n > -0.9 * report.c_min_bits {
            return Err(format!(
                "{}: slope {:.6} is slower than −0.9·C = {:.6}",
                m.name(),
                report.slope_bits_per_n,
                -0.9 * report.c_min_bits
            ));
        }
        lines.push(format!(
            "{} {:.4} ({:.1}%)",
            m.name(),
            report.slope_bits_per_n,
            100.0 * report.relative_error
        ));
    }
    if !pml_seen {
        return Err("catalog did not include the max-ratio metric".into());
    }
    Ok(format!("slopes vs −C: {}", lines.join(", ")))
}

// 4. Distributional convergence of the max-ratio pointwise leakage: the
// CDF distance to the information CDF decreases strictly for n ≥ 40, is
// below 1e-3 by n = 150, and no type inside the concentration margin ever
// leaks more than the information value of its most likely class.
fn c04_distributional_convergence() -> Outcome {
    let sys = presets::three_symbol();
    let m = pml();
    let target = information_distribution(&m, sys.prior()).map_err(|e| e.to_string())?;

    let mut distances = Vec::new();
    for n in 40..=200u64 {
        let dist = exact_pointwise_distribution(&m, &sys, n).map_err(|e| e.to_string())?;
        distances.push((n, cdf_l1_distance(&dist, &target)));
    }
    for pair in distances.windows(2) {
        let ((n0, d0), (n1, d1)) = (pair[0], pair[1]);
        if !(d1 < d0) {
            return Err(format!(
                "CDF distance is not strictly decreasing: {d0:e} at n={n0}, {d1:e} at n={n1}"
            ));
        }
    }
    let at_150 = distances
        .iter()
        .find(|&&(n, _)| n == 150)
        .map(|&(_, d)| d)
        .expect("150 is inside the sweep");
    if at_150 >= 1e-3 {
        return Err(format!("CDF distance at n=150 is {at_150:e}, expected < 1e-3"));
    }

    // Pointwise ceiling on the deep-concentration types.
    for &n in &[50u64, 100] {
        let margin = c_n(&sys, n).map_err(|e| e.to_string())?;
        let mut in_tilde = 0usize;
        for t in enumerate_types(n, sys.n_outputs()).map_err(|e| e.to_string())? {
            let geo = type_geometry(&sys, &t, margin).map_err(|e| e.to_string())?;
            if !geo.in_tilde {
                continue;
            }
            in_tilde += 1;
            let post = sys.posterior_from_counts(t.counts()).map_err(|e| e.to_string())?;
            let leak = m.pointwise_f(&post, sys.prior()).map_err(|e| e.to_string())?;
            let ceiling = information_value(&m, geo.x_star(), sys.prior())
                .map_err(|e| e.to_string())?;
            if leak > ceiling + TOL {
                return Err(format!(
                    "type {:?} at n={n} leaks {leak} above its class ceiling {ceiling}",
                    t.counts()
                ));
            }
        }
        if in_tilde == 0 {
            return Err(format!("no types inside the concentration margin at n={n}"));
        }
    }

    Ok(format!(
        "distance strictly falls over n∈[40,200]; at n=150 it is {at_150:.3e}; ceiling holds at n∈{{50,100}}"
    ))
}

// 5. The two evaluation routes — each metric's textbook closed form and the
// envelope-assembled form — agree on 50 random systems.
fn c05_catalog_equivalence() -> Outcome {
    let mut rng = common::fixture_rng(50);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let nx = rng.gen_range(2..=4usize);
        let ny = rng.gen_range(2..=4usize);
        let sys = common::random_system(&mut rng, nx, ny);
        for m in catalog_for(nx) {
            let std = standard_global_leakage(&m, &sys).map_err(|e| e.to_string())?;
            let comp = compositional_global_leakage(&m, &sys).map_err(|e| e.to_string())?;
            let diff = (std - comp).abs();
            worst = worst.max(diff);
            if diff > TOL {
                return Err(format!(
                    "{} on a {nx}×{ny} system: closed form {std} vs assembled {comp}",
                    m.name()
                ));
            }
        }
    }
    Ok(format!("max |closed − assembled| = {worst:.2e} over 50 systems"))
}

// 6. Axiom suite: the whole catalog passes the structural checks and
// convexity on random strictly positive priors; the max-ratio and
// mutual-information metrics also pass the derivative check; planted
// violations are caught with witnesses.
fn c06_axiom_suite() -> Outcome {
    let mut reports = 0usize;
    for k in 2..=4usize {
        let mut rng = common::fixture_rng(60 + k as u64);
        for i in 0..20 {
            let q = common::random_prior(&mut rng, k);
            let cfg = CheckConfig {
                seed: (k * 1000 + i) as u64,
                ..CheckConfig::default()
            };
            for m in catalog_for(k) {
                let axioms = check_axioms(&m, &q, &cfg);
                if !axioms.all_pass() {
                    return Err(format!(
                        "{} on prior {:?}: {}",
                        m.name(),
                        q.probs(),
                        first_not_passing(&axioms)
                    ));
                }
                let convexity = check_h_convexity(&m, &q, 200, cfg.seed);
                if !convexity.all_pass() {
                    return Err(format!(
                        "{} convexity on prior {:?}: {}",
                        m.name(),
                        q.probs(),
                        first_not_passing(&convexity)
                    ));
                }
                reports += 2;
            }
            for m in [pml(), MetricSpec::MutualInformation] {
                let derivative = check_derivative_property(&m, &q);
                if !derivative.all_pass() {
                    return Err(format!(
                        "{} derivative on prior {:?}: {}",
                        m.name(),
                        q.probs(),
                        first_not_passing(&derivative)
                    ));
                }
                reports += 1;
            }
        }
    }

    // Planted violations must be caught, with witnesses attached.
    let q = ProbVec::new(vec![0.5, 0.3, 0.2]).expect("valid prior");
    let cfg = CheckConfig::default();

    let negated = check_axioms_fn("planted: negated divergence", |p, qq| -common::kl_bits(p, qq), &q, &cfg);
    if !failed_with_witness(&negated) {
        return Err("negated divergence was not caught by the axiom checks".into());
    }
    let repelled = check_derivative_property_fn(
        "planted: negated distance",
        |p, qq| -p.iter().zip(qq).map(|(a, b)| (a - b) * (a - b)).sum::<f64>(),
        &q,
    );
    if !failed_with_witness(&repelled) {
        return Err("vertex-repelling function was not caught by the derivative check".into());
    }
    let concave = check_h_convexity_fn(
        "planted: concave envelope",
        |p, _| -p.iter().map(|v| v * v).sum::<f64>(),
        &q,
        200,
        0,
    );
    if !failed_with_witness(&concave) {
        return Err("concave envelope was not caught by the convexity check".into());
    }

    // Post-processing can only destroy information, never create it.
    let dpi = check_data_processing(&pml(), &presets::three_symbol(), None, 50, 7)
        .map_err(|e| e.to_string())?;
    if !dpi.all_pass() {
        return Err(format!("post-processing checks: {}", first_not_passing(&dpi)));
    }

    Ok(format!(
        "{reports} reports all pass on 60 random priors; 3 planted violations caught with witnesses"
    ))
}

fn first_not_passing(report: &privleak_core::axioms::AxiomReport) -> String {
    report
        .checks
        .iter()
        .find(|c| c.status != CheckStatus::Pass)
        .map(|c| format!("check '{}' is {:?}: {}", c.name, c.status, c.detail))
        .unwrap_or_else(|| "all checks pass".into())
}

fn failed_with_witness(report: &privleak_core::axioms::AxiomReport) -> bool {
    report
        .checks
        .iter()
        .any(|c| c.status == CheckStatus::Fail && c.witness.is_some())
}

// 7. The min-entropy leakage equals the log-ratio of MAP success
// probabilities, exactly, on both presets; the survey value at n=1 is
// log₂(5/3) with MAP error 1/6.
fn c07_min_entropy_identity() -> Outcome {
    for (label, sys) in [
        ("survey", presets::binary_survey()),
        ("three-symbol", presets::three_symbol()),
    ] {
        for n in [0u64, 1, 5, 10, 50] {
            let id = min_entropy_identity(&sys, n).map_err(|e| e.to_string())?;
            if id.difference.abs() > TOL {
                return Err(format!(
                    "{label} at n={n}: leakage {} vs error form {} (diff {:e})",
                    id.leakage_bits, id.error_form_bits, id.difference
                ));
            }
        }
    }
    let survey_1 = min_entropy_identity(&presets::binary_survey(), 1).map_err(|e| e.to_string())?;
    let expected = (5.0f64 / 3.0).log2();
    if (survey_1.leakage_bits - expected).abs() > TOL {
        return Err(format!(
            "survey n=1 leakage {} differs from log₂(5/3) = {expected}",
            survey_1.leakage_bits
        ));
    }
    if (survey_1.bayes_error_n - 1.0 / 6.0).abs() > TOL {
        return Err(format!(
            "survey n=1 MAP error {} differs from 1/6",
            survey_1.bayes_error_n
        ));
    }
    Ok(format!(
        "identity holds to {TOL:e} at n∈{{0,1,5,10,50}} on both presets; survey n=1 = {:.6} bits, MAP error 1/6",
        survey_1.leakage_bits
    ))
}

// 8. Type-class computations match brute-force enumeration of every output
// sequence: leakage distribution, global leakage, and MAP error.
fn c08_brute_force_equivalence() -> Outcome {
    let mut rng = common::fixture_rng(80);
    let systems = vec![
        ("survey", presets::binary_survey()),
        ("three-symbol", presets::three_symbol()),
        ("random 2×3", common::random_system(&mut rng, 2, 3)),
        ("random 3×2", common::random_system(&mut rng, 3, 2)),
        ("random 3×3", common::random_system(&mut rng, 3, 3)),
    ];
    let pairs: Vec<(OracleMetric, MetricSpec)> = vec![
        (OracleMetric::MutualInformation, MetricSpec::MutualInformation),
        (OracleMetric::Sibson2, MetricSpec::Sibson { alpha: 2.0 }),
        (OracleMetric::Arimoto2, MetricSpec::Arimoto { alpha: 2.0 }),
        (OracleMetric::MaximalLeakage, MetricSpec::MaximalLeakage),
        (OracleMetric::MinEntropy, MetricSpec::MinEntropy),
    ];

    let mut worst: f64 = 0.0;
    for (label, sys) in &systems {
        for n in 0..=5u64 {
            let oracle_err = common::brute_force_bayes_error(sys, n as usize);
            let lib_err = bayes_error(sys, n).map_err(|e| e.to_string())?;
            let diff = (oracle_err - lib_err).abs();
            worst = worst.max(diff);
            if diff > TOL {
                return Err(format!(
                    "{label} n={n}: MAP error {lib_err} vs brute force {oracle_err}"
                ));
            }
            for (oracle, metric) in &pairs {
                let oracle_global = common::brute_force_global(*oracle, sys, n as usize);
                let lib_global =
                    exact_global_leakage(metric, sys, n).map_err(|e| e.to_string())?;
                let diff = (oracle_global - lib_global).abs();
                worst = worst.max(diff);
                if diff > TOL {
                    return Err(format!(
                        "{label} n={n} {}: global {lib_global} vs brute force {oracle_global}",
                        metric.name()
                    ));
                }
                let oracle_dist =
                    common::brute_force_distribution(sys, n as usize, oracle.pointwise());
                let lib_dist =
                    exact_pointwise_distribution(metric, sys, n).map_err(|e| e.to_string())?;
                let diff = common::max_atom_difference(&oracle_dist, &lib_dist);
                worst = worst.max(diff);
                if diff > TOL {
                    return Err(format!(
                        "{label} n={n} {}: distribution atoms differ by {diff:e}",
                        metric.name()
                    ));
                }
            }
        }
    }
    Ok(format!(
        "max |type-class − brute-force| = {worst:.2e} over 5 systems × n ≤ 5 × 5 metrics"
    ))
}

// 9. The golden-section Chernoff solver agrees with a dense grid search,
// and with the closed form for the survey channel.
fn c09_chernoff_oracle() -> Outcome {
    let mut rng = common::fixture_rng(90);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let k = 2 + (i % 4);
        let p = common::random_prior(&mut rng, k);
        let q = common::random_prior(&mut rng, k);
        let golden = chernoff_information(&p, &q).map_err(|e| e.to_string())?;
        let grid = common::grid_chernoff(p.probs(), q.probs(), 1e-6);
        let diff = (golden - grid).abs();
        worst = worst.max(diff);
        if diff > 1e-8 {
            return Err(format!(
                "pair {i} (k={k}): golden {golden} vs grid {grid} (diff {diff:e})"
            ));
        }
    }

    let a = ProbVec::new(vec![5.0 / 6.0, 1.0 / 6.0]).expect("valid");
    let b = ProbVec::new(vec![1.0 / 6.0, 5.0 / 6.0]).expect("valid");
    let survey = chernoff_information(&a, &b).map_err(|e| e.to_string())?;
    let closed_form = -(5.0f64.sqrt() / 3.0).log2();
    if (survey - closed_form).abs() > TOL || (survey - SURVEY_CHERNOFF).abs() > TOL {
        return Err(format!(
            "survey exponent {survey} differs from closed form −log₂(√5/3) = {closed_form}"
        ));
    }

    let (c_min, pair) = min_pairwise_chernoff(presets::three_symbol().channel())
        .map_err(|e| e.to_string())?;
    if (c_min - THREE_SYMBOL_CHERNOFF).abs() > TOL {
        return Err(format!(
            "three-symbol exponent {c_min} drifted from pinned {THREE_SYMBOL_CHERNOFF}"
        ));
    }

    Ok(format!(
        "max |golden − grid| = {worst:.2e} over 100 pairs; survey = {survey:.9}; three-symbol = {c_min:.9} at rows {pair:?}"
    ))
}

// 10. Simulation reproduces the exact distributions (KS ≤ 0.02 at 10⁵
// trials), converges onto the three-step information CDF by n = 100, and is
// bit-identical for a fixed seed.
fn c10_simulation() -> Outcome {
    let sys = presets::three_symbol();
    let m = pml();
    let trials = 100_000;
    let mut worst: f64 = 0.0;
    for n in [1u64, 5, 10, 100] {
        let cfg = SimulationConfig { trials, n, seed: 42 };
        let sim = simulate_empirical_cdf(&m, &sys, &cfg).map_err(|e| e.to_string())?;
        let exact = exact_pointwise_distribution(&m, &sys, n).map_err(|e| e.to_string())?;
        let ks = ks_distance(&sim, &exact);
        worst = worst.max(ks);
        if ks > 0.02 {
            return Err(format!("KS to the exact distribution at n={n} is {ks:.4} > 0.02"));
        }
        if n == 100 {
            let info = information_distribution(&m, sys.prior()).map_err(|e| e.to_string())?;
            let expected_values = [(1.0 / 0.6f64).log2(), (1.0 / 0.3f64).log2(), (1.0 / 0.1f64).log2()];
            let expected_masses = [0.6, 0.3, 0.1];
            for (i, (v, p)) in info.iter().enumerate() {
                if (v - expected_values[i]).abs() > TOL || (p - expected_masses[i]).abs() > TOL {
                    return Err(format!(
                        "information CDF atom {i} is ({v}, {p}), expected ({}, {})",
                        expected_values[i], expected_masses[i]
                    ));
                }
            }
            let ks_info = ks_distance(&sim, &info);
            if ks_info > 0.02 {
                return Err(format!(
                    "KS to the three-step information CDF at n=100 is {ks_info:.4} > 0.02"
                ));
            }
        }
    }

    let cfg = SimulationConfig { trials, n: 5, seed: 42 };
    let a = simulate_empirical_cdf(&m, &sys, &cfg).map_err(|e| e.to_string())?;
    let b = simulate_empirical_cdf(&m, &sys, &cfg).map_err(|e| e.to_string())?;
    if a.support() != b.support() || a.probs() != b.probs() {
        return Err("same seed produced different empirical distributions".into());
    }

    Ok(format!(
        "KS ≤ {worst:.4} at 10⁵ trials for n∈{{1,5,10,100}}; information CDF matched; same-seed runs identical"
    ))
}

#[test]
fn acceptance_criteria() {
    let checks: Vec<(&str, fn() -> Outcome, Option<Duration>)> = vec![
        ("binary survey cross-check", c01_binary_survey, Some(Duration::from_secs(1))),
        ("global gap decay rate", c02_global_gap_rate, Some(Duration::from_secs(120))),
        ("pointwise CDF-distance decay rate", c03_pointwise_l1_rate, None),
        ("distributional convergence", c04_distributional_convergence, None),
        ("catalog equivalence", c05_catalog_equivalence, None),
        ("axiom suite", c06_axiom_suite, None),
        ("min-entropy error identity", c07_min_entropy_identity, None),
        ("brute-force equivalence", c08_brute_force_equivalence, None),
        ("Chernoff oracle agreement", c09_chernoff_oracle, None),
        ("simulation reproduction", c10_simulation, None),
    ];

    let mut failures = Vec::new();
    for (i, (label, run, budget)) in checks.iter().enumerate() {
        let started = Instant::now();
        let mut outcome = run();
        let elapsed = started.elapsed();
        if let Some(limit) = budget {
            if outcome.is_ok() && elapsed > *limit {
                outcome = Err(format!("passed but took {elapsed:.1?}, budget {limit:?}"));
            }
        }
        match &outcome {
            Ok(detail) => {
                println!("criterion {:2} ({label}): PASS [{elapsed:.1?}] — {detail}", i + 1);
            }
            Err(reason) => {
                println!("criterion {:2} ({label}): FAIL [{elapsed:.1?}] — {reason}", i + 1);
                failures.push(format!("criterion {} ({label}): {reason}", i + 1));
            }
        }
    }

    assert!(
        failures.is_empty(),
        "{} acceptance criteria failed:\n{}",
        failures.len(),
        failures.join("\n")
    );
}
