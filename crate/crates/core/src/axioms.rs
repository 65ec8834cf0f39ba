//! Numerical verification of the pointwise-metric axioms.
//!
//! A pointwise leakage function f(P, Q) (posterior, prior) is considered
//! reasonable when, for every prior Q:
//!
//! 1. f(Q, Q) = 0 — an unchanged belief leaks nothing;
//! 2. f(Eᵢ, Q) > 0 — certainty always leaks;
//! 3. f(Σλᵢ Pᵢ, Q) ≤ maxᵢ f(Pᵢ, Q) — mixing observations cannot exceed the
//!    worst component;
//! 4. qᵢ ≥ qⱼ ⇒ f(Eᵢ, Q) ≤ f(Eⱼ, Q) — rarer realisations carry at least as
//!    much information;
//! 5. each Eᵢ is a strict local maximum of f(·, Q).
//!
//! Everything here verifies by sampling and finite differences, not
//! symbolically: a pass is evidence ("no violation found in N samples"),
//! never proof. Failures always carry a witness that reproduces the
//! violation. Checks whose strict inequalities land inside the numeric
//! tolerance report `Inconclusive` rather than guessing either way.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{compositional_global_leakage, MetricSpec};
use crate::numeric::sample_simplex;
use crate::prob::{Channel, ProbVec, System};

/// Slack allowed on equalities and non-strict inequalities.
pub const TOLERANCE: f64 = 1e-9;
/// A finite-difference derivative estimate must clear this margin before a
/// strict sign claim is accepted.
pub const DERIVATIVE_MARGIN: f64 = 1e-8;
/// Step for finite-difference chords.
pub const FD_STEP: f64 = 1e-6;
/// Scales at which the strict-local-maximum axiom is probed.
pub const LOCAL_MAX_EPSILONS: [f64; 2] = [1e-3, 1e-4];

/// Outcome of a single numerical check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The data neither confirms nor refutes a strict inequality at the
    /// working tolerance.
    Inconclusive,
}

/// A concrete input reproducing a violation.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub detail: String,
}

/// One named check with its verdict.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub samples_used: u64,
    pub tolerance: f64,
    pub detail: String,
    pub witness: Option<Witness>,
}

/// The full report for one metric and prior.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub metric: String,
    pub prior: Vec<f64>,
    pub checks: Vec<CheckResult>,
}

impl AxiomReport {
    pub fn has_failures(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Fail)
    }

    pub fn has_inconclusive(&self) -> bool {
        self.checks
            .iter()
            .any(|c| c.status == CheckStatus::Inconclusive)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }
}

/// Sampling budget and seed for the randomized checks.
#[derive(Debug, Clone, Copy)]
pub struct CheckConfig {
    /// Random convex combinations tried against the mixing bound.
    pub a3_trials: u64,
    /// Random directions probed per certainty point for the local-maximum
    /// check.
    pub a5_directions: u64,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            a3_trials: 200,
            a5_directions: 100,
            seed: 0,
        }
    }
}

/// Accumulates one check: first violation (in canonical evaluation order)
/// wins, inconclusive notes are kept unless a failure trumps them.
struct CheckBuilder {
    name: &'static str,
    tolerance: f64,
    samples: u64,
    fail: Option<(Witness, String)>,
    inconclusive: Option<String>,
}

impl CheckBuilder {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            samples: 0,
            fail: None,
            inconclusive: None,
        }
    }

    fn sampled(&mut self, count: u64) {
        self.samples += count;
    }

    fn fail(&mut self, p: &[f64], q: &[f64], detail: String) {
        if self.fail.is_none() {
            self.fail = Some((
                Witness {
                    p: p.to_vec(),
                    q: q.to_vec(),
                    detail: detail.clone(),
                },
                detail,
            ));
        }
    }

    fn inconclusive(&mut self, detail: String) {
        if self.inconclusive.is_none() {
            self.inconclusive = Some(detail);
        }
    }

    fn finish(self) -> CheckResult {
        let (status, detail, witness) = match (self.fail, self.inconclusive) {
            (Some((w, d)), _) => (CheckStatus::Fail, d, Some(w)),
            (None, Some(d)) => (CheckStatus::Inconclusive, d, None),
            (None, None) => (
                CheckStatus::Pass,
                format!("no violation found in {} samples", self.samples),
                None,
            ),
        };
        CheckResult {
            name: self.name.to_string(),
            status,
            samples_used: self.samples,
            tolerance: self.tolerance,
            detail,
            witness,
        }
    }
}

fn point_mass(k: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; k];
    v[i] = 1.0;
    v
}

/// (1−ε)·Eᵢ + ε·U
fn blend_from_extreme(i: usize, u: &[f64], eps: f64) -> Vec<f64> {
    let mut out: Vec<f64> = u.iter().map(|&uj| eps * uj).collect();
    out[i] += 1.0 - eps;
    out
}

fn inconclusive_report(metric: &str, prior: &[f64], names: &[&'static str], why: &str) -> AxiomReport {
    AxiomReport {
        metric: metric.to_string(),
        prior: prior.to_vec(),
        checks: names
            .iter()
            .map(|name| CheckResult {
                name: name.to_string(),
                status: CheckStatus::Inconclusive,
                samples_used: 0,
                tolerance: TOLERANCE,
                detail: why.to_string(),
                witness: None,
            })
            .collect(),
    }
}

const AXIOM_CHECK_NAMES: [&str; 6] = [
    "zero at prior",
    "positive on certainty",
    "mixtures never exceed components",
    "rarer realisations leak at least as much",
    "certainty is a strict local maximum",
    "maximum at the rarest realisation",
];

/// Runs the five axioms plus the global-maximum consequence against an
/// arbitrary pointwise function. `f(posterior, prior)` must accept any pair
/// of equal-length probability vectors.
pub fn check_axioms_fn<F>(name: &str, f: F, q: &ProbVec, cfg: &CheckConfig) -> AxiomReport
where
    F: Fn(&[f64], &[f64]) -> f64,
{
    let prior = q.probs();
    let k = prior.len();
    if prior.iter().any(|&v| v <= 0.0) {
        return inconclusive_report(
            name,
            prior,
            &AXIOM_CHECK_NAMES,
            "prior is not strictly positive; the axioms reference every certainty point",
        );
    }

    let mut checks = Vec::with_capacity(6);

    // 1. zero at prior
    {
        let mut c = CheckBuilder::new(AXIOM_CHECK_NAMES[0], TOLERANCE);
        c.sampled(1);
        let v = f(prior, prior);
        if !(v.abs() <= TOLERANCE) {
            c.fail(prior, prior, format!("f(Q, Q) = {v}, expected 0"));
        }
        checks.push(c.finish());
    }

    // Certainty-point values are shared by several checks.
    let extreme_values: Vec<f64> = (0..k).map(|i| f(&point_mass(k, i), prior)).collect();

    // 2. positive on certainty (strict)
    {
        let mut c = CheckBuilder::new(AXIOM_CHECK_NAMES[1], TOLERANCE);
        for (i, &v) in extreme_values.iter().enumerate() {
            c.sampled(1);
            if v < -TOLERANCE {
                c.fail(
                    &point_mass(k, i),
                    prior,
                    format!("f(E_{}, Q) = {v} < 0", i + 1),
                );
            } else if v <= TOLERANCE {
                c.inconclusive(format!(
                    "f(E_{}, Q) = {v} is zero within tolerance; strict positivity unresolved",
                    i + 1
                ));
            }
        }
        checks.push(c.finish());
    }

    // 3. mixtures never exceed components
    {
        let mut c = CheckBuilder::new(AXIOM_CHECK_NAMES[2], TOLERANCE);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(1);
        for _ in 0..cfg.a3_trials {
            c.sampled(1);
            let parts = rng.gen_range(2..=k.max(2));
            let components: Vec<Vec<f64>> =
                (0..parts).map(|_| sample_simplex(&mut rng, k)).collect();
            let weights = sample_simplex(&mut rng, parts);
            let mut mix = vec![0.0f64; k];
            for (w, comp) in weights.iter().zip(&components) {
                for (m, &v) in mix.iter_mut().zip(comp) {
                    *m += w * v;
                }
            }
            let worst = components
                .iter()
                .map(|p| f(p, prior))
                .fold(f64::NEG_INFINITY, f64::max);
            let mixed = f(&mix, prior);
            if mixed > worst + TOLERANCE {
                c.fail(
                    &mix,
                    prior,
                    format!("f(mixture, Q) = {mixed} exceeds worst component {worst}"),
                );
            }
        }
        checks.push(c.finish());
    }

    // 4. rarer realisations leak at least as much (non-strict)
    {
        let mut c = CheckBuilder::new(AXIOM_CHECK_NAMES[3], TOLERANCE);
        for i in 0..k {
            for j in 0..k {
                if i == j || prior[i] < prior[j] {
                    continue;
                }
                c.sampled(1);
                if extreme_values[i] > extreme_values[j] + TOLERANCE {
                    c.fail(
                        &point_mass(k, i),
                        prior,
                        format!(
                            "q_{} = {} ≥ q_{} = {} but f(E_{}) = {} > f(E_{}) = {}",
                            i + 1,
                            prior[i],
                            j + 1,
                            prior[j],
                            i + 1,
                            extreme_values[i],
                            j + 1,
                            extreme_values[j]
                        ),
                    );
                }
            }
        }
        checks.push(c.finish());
    }

    // 5. certainty is a strict local maximum
    {
        let mut c = CheckBuilder::new(AXIOM_CHECK_NAMES[4], TOLERANCE);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(2);
        for (i, &f_i) in extreme_values.iter().enumerate() {
            for _ in 0..cfg.a5_directions {
                c.sampled(1);
                let u = sample_simplex(&mut rng, k);
                let coarse = f(&blend_from_extreme(i, &u, LOCAL_MAX_EPSILONS[0]), prior);
                let fine = f(&blend_from_extreme(i, &u, LOCAL_MAX_EPSILONS[1]), prior);
                if !f_i.is_finite() || !coarse.is_finite() || !fine.is_finite() {
                    c.inconclusive(format!(
                        "f is not finite near E_{} (values {f_i}, {coarse}, {fine})",
                        i + 1
                    ));
                    continue;
                }
                let drop_fine = f_i - fine;
                let drop_coarse = f_i - coarse;
                if drop_fine < -TOLERANCE {
                    c.fail(
                        &blend_from_extreme(i, &u, LOCAL_MAX_EPSILONS[1]),
                        prior,
                        format!(
                            "f increases by {} moving ε={} from E_{} toward {:?}",
                            -drop_fine,
                            LOCAL_MAX_EPSILONS[1],
                            i + 1,
                            u
                        ),
                    );
                } else if drop_fine <= TOLERANCE {
                    c.inconclusive(format!(
                        "f is flat within tolerance at ε={} from E_{}; strictness unresolved",
                        LOCAL_MAX_EPSILONS[1],
                        i + 1
                    ));
                } else if drop_coarse < -TOLERANCE {
                    c.inconclusive(format!(
                        "f decreases at ε={} but increases at ε={} from E_{}; \
                         the strict neighbourhood may be smaller than the tested scales",
                        LOCAL_MAX_EPSILONS[1],
                        LOCAL_MAX_EPSILONS[0],
                        i + 1
                    ));
                }
            }
        }
        checks.push(c.finish());
    }

    // 6. global maximum at the rarest realisation (consequence of 3 + 4)
    {
        let mut c = CheckBuilder::new(AXIOM_CHECK_NAMES[5], TOLERANCE);
        let rarest = (0..k)
            .min_by(|&a, &b| prior[a].total_cmp(&prior[b]).then(a.cmp(&b)))
            .expect("non-empty prior");
        let bound = extreme_values[rarest];
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(3);
        for _ in 0..cfg.a3_trials {
            c.sampled(1);
            let p = sample_simplex(&mut rng, k);
            let v = f(&p, prior);
            if v > bound + TOLERANCE {
                c.fail(
                    &p,
                    prior,
                    format!(
                        "f(P, Q) = {v} exceeds f(E_{}, Q) = {bound} at the rarest realisation",
                        rarest + 1
                    ),
                );
            }
        }
        checks.push(c.finish());
    }

    AxiomReport {
        metric: name.to_string(),
        prior: prior.to_vec(),
        checks,
    }
}

/// [`check_axioms_fn`] for a catalog metric.
pub fn check_axioms(m: &MetricSpec, q: &ProbVec, cfg: &CheckConfig) -> AxiomReport {
    if let Err(e) = m.validate(q.len()) {
        return inconclusive_report(
            &m.name(),
            q.probs(),
            &AXIOM_CHECK_NAMES,
            &format!("metric is not usable with this prior: {e}"),
        );
    }
    check_axioms_fn(&m.name(), |p, prior| m.f_raw(p, prior), q, cfg)
}

const DERIVATIVE_CHECK_NAMES: [&str; 2] = [
    "pairwise derivative ordering at certainty",
    "directional derivatives negative at certainty",
];

/// Checks that every feasible directional derivative of f(·, Q) at each
/// certainty point is negative, via finite-difference chords into the
/// simplex (one-sided, since f may blow up outside or be non-smooth at the
/// boundary). Also checks the pairwise form ∂f/∂p_j − ∂f/∂p_i < 0, which is
/// the chord toward E_j.
pub fn check_derivative_property_fn<F>(name: &str, f: F, q: &ProbVec) -> AxiomReport
where
    F: Fn(&[f64], &[f64]) -> f64,
{
    let prior = q.probs();
    let k = prior.len();
    if prior.iter().any(|&v| v <= 0.0) {
        return inconclusive_report(
            name,
            prior,
            &DERIVATIVE_CHECK_NAMES,
            "prior is not strictly positive; the property references every certainty point",
        );
    }
    let extreme_values: Vec<f64> = (0..k).map(|i| f(&point_mass(k, i), prior)).collect();

    // chord-based directional derivative estimate from E_i toward u
    let chord = |i: usize, u: &[f64]| -> f64 {
        (f(&blend_from_extreme(i, u, FD_STEP), prior) - extreme_values[i]) / FD_STEP
    };

    let judge = |c: &mut CheckBuilder, i: usize, u: &[f64], est: f64, label: &str| {
        c.sampled(1);
        if !est.is_finite() {
            c.inconclusive(format!(
                "derivative estimate at E_{} toward {label} is not finite ({est})",
                i + 1
            ));
        } else if est > DERIVATIVE_MARGIN {
            c.fail(
                u,
                prior,
                format!(
                    "directional derivative {est} at E_{} toward {label} is positive",
                    i + 1
                ),
            );
        } else if est >= -DERIVATIVE_MARGIN {
            c.inconclusive(format!(
                "derivative estimate {est} at E_{} toward {label} sits inside the margin",
                i + 1
            ));
        }
    };

    let mut checks = Vec::with_capacity(2);
    {
        let mut c = CheckBuilder::new(DERIVATIVE_CHECK_NAMES[0], DERIVATIVE_MARGIN);
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                let u = point_mass(k, j);
                let est = chord(i, &u);
                judge(&mut c, i, &u, est, &format!("E_{}", j + 1));
            }
        }
        checks.push(c.finish());
    }
    {
        let mut c = CheckBuilder::new(DERIVATIVE_CHECK_NAMES[1], DERIVATIVE_MARGIN);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        rng.set_stream(4);
        const DIRECTIONS: u64 = 50;
        for i in 0..k {
            for _ in 0..DIRECTIONS {
                let u = sample_simplex(&mut rng, k);
                let est = chord(i, &u);
                judge(&mut c, i, &u, est, "a sampled direction");
            }
        }
        checks.push(c.finish());
    }

    AxiomReport {
        metric: name.to_string(),
        prior: prior.to_vec(),
        checks,
    }
}

/// [`check_derivative_property_fn`] for a catalog metric.
pub fn check_derivative_property(m: &MetricSpec, q: &ProbVec) -> AxiomReport {
    if let Err(e) = m.validate(q.len()) {
        return inconclusive_report(
            &m.name(),
            q.probs(),
            &DERIVATIVE_CHECK_NAMES,
            &format!("metric is not usable with this prior: {e}"),
        );
    }
    check_derivative_property_fn(&m.name(), |p, prior| m.f_raw(p, prior), q)
}

const CONVEXITY_CHECK_NAME: &str = "inner aggregate convex in posterior";

/// Samples convexity of an inner-aggregate function h(·, Q): for random
/// posteriors P₁, P₂ and weight λ, h(λP₁+(1−λ)P₂) ≤ λh(P₁)+(1−λ)h(P₂).
pub fn check_h_convexity_fn<H>(
    name: &str,
    h: H,
    q: &ProbVec,
    trials: u64,
    seed: u64,
) -> AxiomReport
where
    H: Fn(&[f64], &[f64]) -> f64,
{
    let prior = q.probs();
    let k = prior.len();
    let mut c = CheckBuilder::new(CONVEXITY_CHECK_NAME, TOLERANCE);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(5);
    for _ in 0..trials {
        c.sampled(1);
        let p1 = sample_simplex(&mut rng, k);
        let p2 = sample_simplex(&mut rng, k);
        let lambda: f64 = rng.gen();
        let mid: Vec<f64> = p1
            .iter()
            .zip(&p2)
            .map(|(&a, &b)| lambda * a + (1.0 - lambda) * b)
            .collect();
        let h1 = h(&p1, prior);
        let h2 = h(&p2, prior);
        let hm = h(&mid, prior);
        if !h1.is_finite() || !h2.is_finite() || !hm.is_finite() {
            c.inconclusive(format!(
                "inner aggregate not finite on sampled posteriors ({h1}, {h2}, {hm})"
            ));
            continue;
        }
        let bound = lambda * h1 + (1.0 - lambda) * h2;
        if hm > bound + TOLERANCE {
            c.fail(
                &p1,
                &p2,
                format!("h(mixture) = {hm} exceeds the chord value {bound} at λ = {lambda}"),
            );
        }
    }
    AxiomReport {
        metric: name.to_string(),
        prior: prior.to_vec(),
        checks: vec![c.finish()],
    }
}

/// [`check_h_convexity_fn`] for a catalog metric (h = g₁∘f).
pub fn check_h_convexity(m: &MetricSpec, q: &ProbVec, trials: u64, seed: u64) -> AxiomReport {
    if let Err(e) = m.validate(q.len()) {
        return inconclusive_report(
            &m.name(),
            q.probs(),
            &[CONVEXITY_CHECK_NAME],
            &format!("metric is not usable with this prior: {e}"),
        );
    }
    check_h_convexity_fn(&m.name(), |p, prior| m.h_raw(p, prior), q, trials, seed)
}

/// Checks the global data-processing behaviour of a metric on a concrete
/// system: post-processing the outputs can never increase leakage, identity
/// post-processing preserves it, and channels carrying no information about
/// the secret leak nothing.
///
/// All leakage values here are one-shot global leakages evaluated on the
/// systems exactly as given (no row merging): post-processed channels
/// routinely produce identical rows, and the comparison must stay in the
/// original secret space.
pub fn check_data_processing(
    m: &MetricSpec,
    sys: &System,
    garble: Option<&Channel>,
    trials: u64,
    seed: u64,
) -> Result<AxiomReport> {
    m.validate(sys.n_inputs())?;
    if let Some(g) = garble {
        if g.n_inputs() != sys.n_outputs() {
            return Err(Error::LengthMismatch {
                expected: sys.n_outputs(),
                got: g.n_inputs(),
            });
        }
    }
    let baseline = compositional_global_leakage(m, sys)?;
    let leakage_through = |g: &Channel| -> Result<f64> {
        let composed = sys.channel().compose(g)?;
        let garbled = System::from_parts(sys.prior().clone(), composed, None, None)?;
        compositional_global_leakage(m, &garbled)
    };

    let mut checks = Vec::new();

    if let Some(g) = garble {
        let mut c = CheckBuilder::new("provided post-processing does not gain", TOLERANCE);
        c.sampled(1);
        let v = leakage_through(g)?;
        if v > baseline + TOLERANCE {
            c.fail(
                &[],
                sys.prior().probs(),
                format!("leakage rose from {baseline} to {v} under the provided post-processing"),
            );
        }
        checks.push(c.finish());
    }

    {
        let mut c = CheckBuilder::new("random post-processing does not gain", TOLERANCE);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(6);
        for _ in 0..trials {
            c.sampled(1);
            let n_z = rng.gen_range(2..=sys.n_outputs().max(2));
            let rows: Vec<Vec<f64>> = (0..sys.n_outputs())
                .map(|_| sample_simplex(&mut rng, n_z))
                .collect();
            let g = Channel::new(rows)?;
            let v = leakage_through(&g)?;
            if v > baseline + TOLERANCE {
                c.fail(
                    &[],
                    sys.prior().probs(),
                    format!("leakage rose from {baseline} to {v} under a sampled post-processing"),
                );
            }
        }
        checks.push(c.finish());
    }

    {
        let mut c = CheckBuilder::new("identity post-processing preserves leakage", TOLERANCE);
        c.sampled(1);
        let rows: Vec<Vec<f64>> = (0..sys.n_outputs())
            .map(|y| {
                let mut row = vec![0.0; sys.n_outputs()];
                row[y] = 1.0;
                row
            })
            .collect();
        let v = leakage_through(&Channel::new(rows)?)?;
        if (v - baseline).abs() > TOLERANCE {
            c.fail(
                &[],
                sys.prior().probs(),
                format!("identity post-processing moved leakage from {baseline} to {v}"),
            );
        }
        checks.push(c.finish());
    }

    {
        let mut c = CheckBuilder::new("constant post-processing destroys leakage", TOLERANCE);
        c.sampled(1);
        let v = leakage_through(&Channel::new(vec![vec![1.0]; sys.n_outputs()])?)?;
        if v.abs() > TOLERANCE {
            c.fail(
                &[],
                sys.prior().probs(),
                format!("a constant output still leaked {v} bits"),
            );
        }
        checks.push(c.finish());
    }

    {
        let mut c = CheckBuilder::new("independent system leaks nothing", TOLERANCE);
        c.sampled(1);
        // Every secret produces the same output distribution (the original
        // output marginal), so observing Y says nothing about X.
        let marginal = {
            let prior = sys.prior().probs();
            let mut m_y = vec![0.0f64; sys.n_outputs()];
            for (x, &qx) in prior.iter().enumerate() {
                for (y, slot) in m_y.iter_mut().enumerate() {
                    *slot += qx * sys.channel().prob(x, y);
                }
            }
            // guard against drift before re-validating as a probability row
            let total: f64 = m_y.iter().sum();
            m_y.iter_mut().for_each(|v| *v /= total);
            m_y
        };
        let independent = System::new(
            sys.prior().probs().to_vec(),
            vec![marginal; sys.n_inputs()],
        )?;
        let v = compositional_global_leakage(m, &independent)?;
        if v.abs() > TOLERANCE {
            c.fail(
                &[],
                sys.prior().probs(),
                format!("an uninformative channel leaked {v} bits"),
            );
        }
        checks.push(c.finish());
    }

    Ok(AxiomReport {
        metric: m.name(),
        prior: sys.prior().probs().to_vec(),
        checks,
    })
}
