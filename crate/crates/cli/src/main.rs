//! Command-line front end: loads systems and metrics from files or inline
//! JSON, dispatches to the core library, and emits CSV (canonical) and SVG
//! (derived from the same data) artifacts.
//!
//! Exit codes: 0 success, 1 input or computation error, 2 demonstrated
//! check violation under `verify --strict`.

mod output;
mod svg;

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use privleak_core::adversary::{simulate_empirical_cdf, SimulationConfig};
use privleak_core::axioms::{
    check_axioms, check_data_processing, check_derivative_property, check_h_convexity,
    AxiomReport, CheckConfig,
};
use privleak_core::chernoff::{
    chernoff_information, min_pairwise_chernoff, rate_experiment, RateMode,
};
use privleak_core::composition::{
    cdf_l1_distance, exact_global_leakage, exact_pointwise_distribution, global_limit,
};
use privleak_core::metrics::information_distribution;
use privleak_core::prob::DEFAULT_MERGE_TOLERANCE;
use privleak_core::{merge_equivalent_rows, presets, MetricSpec, System};

#[derive(Parser)]
#[command(
    name = "privleak",
    version,
    about = "Exact and simulated information-leakage analysis for finite prior/channel systems"
)]
struct Cli {
    /// Cap the number of worker threads used by parallel sections.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

/// Arguments shared by every computation subcommand.
#[derive(Args)]
struct SystemArg {
    /// System as a preset id (fig2, fig3), a JSON file path, or inline JSON.
    #[arg(long)]
    system: String,
}

#[derive(Args)]
struct MetricArg {
    /// Metric as a name (e.g. mutual_information, sibson:2), a JSON file
    /// path, or inline JSON like '{"kind":"maximal_leakage"}'.
    #[arg(long)]
    metric: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Svg,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Pointwise leakage of one observation histogram, or the global
    /// leakage after n observations.
    Leak {
        #[command(flatten)]
        system: SystemArg,
        #[command(flatten)]
        metric: MetricArg,
        /// Number of independent observations (global mode).
        #[arg(long, default_value_t = 1)]
        n: u64,
        /// Observation histogram, one count per output symbol; switches to
        /// pointwise mode and overrides --n with the histogram total.
        #[arg(long, value_delimiter = ',')]
        counts: Option<Vec<u64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact pointwise-leakage distribution after n observations.
    Distribution {
        #[command(flatten)]
        system: SystemArg,
        #[command(flatten)]
        metric: MetricArg,
        #[arg(long, default_value_t = 1)]
        n: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// The n→∞ leakage limit and the information distribution it follows.
    Limit {
        #[command(flatten)]
        system: SystemArg,
        #[command(flatten)]
        metric: MetricArg,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Gap table: global leakage, limit, and CDF distance per n.
    Compose {
        #[command(flatten)]
        system: SystemArg,
        #[command(flatten)]
        metric: MetricArg,
        /// Observation counts, as a..b[:step] or a comma list.
        #[arg(long)]
        ns: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the exponential decay of the leakage gap and compare it with
    /// the channel's minimum pairwise Chernoff information.
    Rate {
        #[command(flatten)]
        system: SystemArg,
        #[command(flatten)]
        metric: MetricArg,
        /// Observation counts, as a..b[:step] or a comma list.
        #[arg(long)]
        ns: String,
        /// Inclusive fitting window a..b (defaults to the whole n-list).
        #[arg(long)]
        window: Option<String>,
        /// Gap to measure: global_gap or pointwise_l1.
        #[arg(long, default_value = "global_gap")]
        mode: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Pairwise Chernoff information between channel rows.
    Chernoff {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the axiom, convexity, derivative, and post-processing checks.
    Verify {
        #[command(flatten)]
        system: SystemArg,
        #[command(flatten)]
        metric: MetricArg,
        /// Sample count for the randomized checks.
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Exit with code 2 if any check demonstrates a violation.
        #[arg(long)]
        strict: bool,
        /// Write the reports as a JSON document as well.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo estimate of the pointwise-leakage distribution.
    Simulate {
        #[command(flatten)]
        system: SystemArg,
        #[command(flatten)]
        metric: MetricArg,
        #[arg(long, default_value_t = 1)]
        n: u64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Write one of the built-in example systems as a JSON document.
    Examples {
        /// Which preset to emit: fig2 (binary survey) or fig3 (three-symbol).
        #[arg(long)]
        which: String,
        /// Output path (defaults to <which>.json).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version are successes, not usage errors.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Some(threads) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match run(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
    }
}

fn run(command: Command) -> Result<i32, String> {
    match command {
        Command::Leak { system, metric, n, counts, out } => {
            let sys = load_system(&system.system)?;
            let m = load_metric(&metric.metric)?;
            let csv = match counts {
                Some(counts) => {
                    if counts.len() != sys.n_outputs() {
                        return Err(format!(
                            "histogram has {} entries but the channel has {} outputs",
                            counts.len(),
                            sys.n_outputs()
                        ));
                    }
                    let n: u64 = counts.iter().sum();
                    let post = sys.posterior_from_counts(&counts).map_err(stringify)?;
                    let value = m.pointwise_f(&post, sys.prior()).map_err(stringify)?;
                    eprintln!(
                        "pointwise leakage of histogram {counts:?} ({n} observations): {value} bits"
                    );
                    output::leak_csv("value_bits", &m.name(), n, value)
                }
                None => {
                    note_merges(&sys)?;
                    let value = exact_global_leakage(&m, &sys, n).map_err(stringify)?;
                    eprintln!("global leakage after {n} observations: {value} bits");
                    output::leak_csv("global_leakage_bits", &m.name(), n, value)
                }
            };
            write_text(&csv, out.as_deref())?;
            Ok(0)
        }
        Command::Distribution { system, metric, n, out, format } => {
            let sys = load_system(&system.system)?;
            let m = load_metric(&metric.metric)?;
            note_merges(&sys)?;
            let dist = exact_pointwise_distribution(&m, &sys, n).map_err(stringify)?;
            let csv = output::distribution_csv(&dist);
            let svg = matches!(format, Format::Svg | Format::Both).then(|| {
                svg::step_cdf_plot(
                    &[svg::CdfSeries::from_distribution("exact", &dist, svg::COLOR_PRIMARY)],
                    &format!("{} pointwise leakage, n = {n}", m.name()),
                )
            });
            emit(csv, svg, out.as_deref(), format)?;
            Ok(0)
        }
        Command::Limit { system, metric, out, format } => {
            let sys = load_system(&system.system)?;
            let m = load_metric(&metric.metric)?;
            let merged = note_merges(&sys)?;
            let limit = global_limit(&m, &sys).map_err(stringify)?;
            let dist = information_distribution(&m, merged.prior()).map_err(stringify)?;
            eprintln!("global leakage limit: {limit} bits");
            let csv = output::distribution_csv(&dist);
            let svg = matches!(format, Format::Svg | Format::Both).then(|| {
                svg::step_cdf_plot(
                    &[svg::CdfSeries::from_distribution("information", &dist, svg::COLOR_PRIMARY)],
                    &format!("{} information distribution", m.name()),
                )
            });
            emit(csv, svg, out.as_deref(), format)?;
            Ok(0)
        }
        Command::Compose { system, metric, ns, out } => {
            let sys = load_system(&system.system)?;
            let m = load_metric(&metric.metric)?;
            let ns = parse_ns(&ns)?;
            let merged = note_merges(&sys)?;
            let limit = global_limit(&m, &sys).map_err(stringify)?;
            let target = information_distribution(&m, merged.prior()).map_err(stringify)?;
            let mut rows = Vec::with_capacity(ns.len());
            for &n in &ns {
                let value = exact_global_leakage(&m, &sys, n).map_err(stringify)?;
                let dist = exact_pointwise_distribution(&m, &sys, n).map_err(stringify)?;
                rows.push(output::ComposeRow {
                    n,
                    metric: m.name(),
                    global_leakage_bits: value,
                    global_limit_bits: limit,
                    gap_bits: limit - value,
                    l1_to_information_cdf: cdf_l1_distance(&dist, &target),
                });
            }
            write_text(&output::compose_csv(&rows), out.as_deref())?;
            Ok(0)
        }
        Command::Rate { system, metric, ns, window, mode, out, format } => {
            let sys = load_system(&system.system)?;
            let m = load_metric(&metric.metric)?;
            let ns = parse_ns(&ns)?;
            let window = match window {
                Some(w) => parse_window(&w)?,
                None => (ns[0], *ns.last().expect("non-empty")),
            };
            let mode = RateMode::from_str(&mode).map_err(stringify)?;
            note_merges(&sys)?;
            let report = rate_experiment(&m, &sys, &ns, window, mode).map_err(stringify)?;
            eprintln!(
                "fitted slope {} bits/obs vs −C = −{} ({:.2}% relative error, r² = {:.6})",
                report.slope_bits_per_n,
                report.c_min_bits,
                100.0 * report.relative_error,
                report.r_squared
            );
            let csv = output::rate_csv(&report);
            let svg = matches!(format, Format::Svg | Format::Both)
                .then(|| svg::rate_plot(&report));
            emit(csv, svg, out.as_deref(), format)?;
            Ok(0)
        }
        Command::Chernoff { system, out } => {
            let sys = load_system(&system.system)?;
            let merged = note_merges(&sys)?;
            let channel = merged.channel();
            let (c_min, pair) = min_pairwise_chernoff(channel).map_err(stringify)?;
            let mut rows = Vec::new();
            for a in 0..channel.n_inputs() {
                for b in (a + 1)..channel.n_inputs() {
                    let c = chernoff_information(channel.row(a), channel.row(b))
                        .map_err(stringify)?;
                    rows.push(output::ChernoffRow {
                        row_a: a,
                        row_b: b,
                        chernoff_bits: c,
                        is_min: (a, b) == pair,
                    });
                }
            }
            eprintln!("minimum pairwise Chernoff information: {c_min} bits at rows {pair:?}");
            write_text(&output::chernoff_csv(&rows), out.as_deref())?;
            Ok(0)
        }
        Command::Verify { system, metric, trials, seed, strict, out } => {
            let sys = load_system(&system.system)?;
            let m = load_metric(&metric.metric)?;
            let merged = note_merges(&sys)?;
            let q = merged.prior();
            let cfg = CheckConfig {
                a3_trials: trials,
                a5_directions: trials,
                seed,
            };
            let reports: Vec<AxiomReport> = vec![
                check_axioms(&m, q, &cfg),
                check_h_convexity(&m, q, trials, seed),
                check_derivative_property(&m, q),
                check_data_processing(&m, &sys, None, trials, seed).map_err(stringify)?,
            ];
            print!("{}", output::verify_table(&reports));
            if let Some(path) = out {
                let doc = serde_json::json!({
                    "metric": m.name(),
                    "prior": q.probs(),
                    "reports": reports,
                });
                let text = serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?;
                std::fs::write(&path, text + "\n")
                    .map_err(|e| format!("writing {}: {e}", path.display()))?;
            }
            let failed = reports.iter().any(AxiomReport::has_failures);
            if failed {
                eprintln!("violations demonstrated; see the table above");
            }
            Ok(if strict && failed { 2 } else { 0 })
        }
        Command::Simulate { system, metric, n, trials, seed, out, format } => {
            let sys = load_system(&system.system)?;
            let m = load_metric(&metric.metric)?;
            note_merges(&sys)?;
            let cfg = SimulationConfig { trials, n, seed };
            let empirical = simulate_empirical_cdf(&m, &sys, &cfg).map_err(stringify)?;
            let csv = output::simulate_csv(&empirical);
            let svg = if matches!(format, Format::Svg | Format::Both) {
                let exact = exact_pointwise_distribution(&m, &sys, n).map_err(stringify)?;
                Some(svg::step_cdf_plot(
                    &[
                        svg::CdfSeries::from_distribution("exact", &exact, svg::COLOR_PRIMARY),
                        svg::CdfSeries::from_distribution(
                            "empirical",
                            &empirical,
                            svg::COLOR_SECONDARY,
                        ),
                    ],
                    &format!("{} leakage CDF, n = {n}, {trials} trials", m.name()),
                ))
            } else {
                None
            };
            emit(csv, svg, out.as_deref(), format)?;
            Ok(0)
        }
        Command::Examples { which, out } => {
            let sys = presets::by_id(&which)
                .ok_or_else(|| format!("unknown preset '{which}' (use fig2 or fig3)"))?;
            let path = out.unwrap_or_else(|| PathBuf::from(format!("{which}.json")));
            let text =
                serde_json::to_string_pretty(&sys.to_doc()).map_err(|e| e.to_string())?;
            std::fs::write(&path, text + "\n")
                .map_err(|e| format!("writing {}: {e}", path.display()))?;
            eprintln!("wrote {}", path.display());
            Ok(0)
        }
    }
}

fn stringify(e: impl Display) -> String {
    e.to_string()
}

/// Loads a system from a preset id, a JSON file, or inline JSON.
fn load_system(spec: &str) -> Result<System, String> {
    if let Some(sys) = presets::by_id(spec) {
        return Ok(sys);
    }
    if spec.trim_start().starts_with('{') {
        return System::from_json_str(spec).map_err(|e| format!("inline system: {e}"));
    }
    let text = std::fs::read_to_string(spec).map_err(|e| format!("reading {spec}: {e}"))?;
    System::from_json_str(&text).map_err(|e| format!("{spec}: {e}"))
}

/// Loads a metric from a shorthand name, a JSON file, or inline JSON.
fn load_metric(spec: &str) -> Result<MetricSpec, String> {
    if spec.trim_start().starts_with('{') {
        return MetricSpec::from_json_str(spec).map_err(|e| format!("inline metric: {e}"));
    }
    if let Some(m) = metric_by_name(spec) {
        return Ok(m);
    }
    if Path::new(spec).exists() {
        let text = std::fs::read_to_string(spec).map_err(|e| format!("reading {spec}: {e}"))?;
        return MetricSpec::from_json_str(&text).map_err(|e| format!("{spec}: {e}"));
    }
    Err(format!(
        "unknown metric '{spec}': expected a name (mutual_information, sibson:<α>, \
         arimoto:<α>, maximal_leakage, min_entropy, f_divergence:<kind>), a JSON file, \
         or inline JSON"
    ))
}

/// The same shorthand names the metrics print for themselves.
fn metric_by_name(name: &str) -> Option<MetricSpec> {
    if let Some(alpha) = name.strip_prefix("sibson:") {
        return alpha.parse().ok().map(|alpha| MetricSpec::Sibson { alpha });
    }
    if let Some(alpha) = name.strip_prefix("arimoto:") {
        return alpha.parse().ok().map(|alpha| MetricSpec::Arimoto { alpha });
    }
    if let Some(kind) = name.strip_prefix("f_divergence:") {
        let spec = format!("{{\"kind\":\"f_divergence\",\"fdiv_kind\":\"{kind}\"}}");
        return MetricSpec::from_json_str(&spec).ok();
    }
    match name {
        "mutual_information" | "mi" => Some(MetricSpec::MutualInformation),
        "maximal_leakage" | "pml" => Some(MetricSpec::MaximalLeakage),
        "min_entropy" => Some(MetricSpec::MinEntropy),
        _ => None,
    }
}

/// Parses `a..b[:step]` or a comma list into a strictly increasing n-list.
fn parse_ns(spec: &str) -> Result<Vec<u64>, String> {
    let ns: Vec<u64> = if let Some((range, step)) = split_range(spec)? {
        let (a, b) = range;
        if step == 0 {
            return Err("step must be positive".into());
        }
        (a..=b).step_by(step as usize).collect()
    } else {
        spec.split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<u64>()
                    .map_err(|e| format!("invalid count '{tok}': {e}"))
            })
            .collect::<Result<_, _>>()?
    };
    if ns.is_empty() {
        return Err("the n-list is empty".into());
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err("the n-list must be strictly increasing".into());
    }
    Ok(ns)
}

/// Returns Some(((a, b), step)) when the argument looks like `a..b[:step]`.
fn split_range(spec: &str) -> Result<Option<((u64, u64), u64)>, String> {
    let Some((range, step)) = spec
        .split_once(':')
        .map(|(r, s)| (r, Some(s)))
        .or(Some((spec, None)))
    else {
        return Ok(None);
    };
    let Some((a, b)) = range.split_once("..") else {
        return Ok(None);
    };
    let a: u64 = a.trim().parse().map_err(|e| format!("invalid range start '{a}': {e}"))?;
    let b: u64 = b.trim().parse().map_err(|e| format!("invalid range end '{b}': {e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    let step: u64 = match step {
        Some(s) => s.trim().parse().map_err(|e| format!("invalid step '{s}': {e}"))?,
        None => 1,
    };
    Ok(Some(((a, b), step)))
}

fn parse_window(spec: &str) -> Result<(u64, u64), String> {
    match split_range(spec)? {
        Some(((a, b), 1)) => Ok((a, b)),
        _ => Err(format!("invalid window '{spec}': expected a..b")),
    }
}

/// Reports row merging to stderr and returns the merged system.
fn note_merges(sys: &System) -> Result<System, String> {
    let merged = merge_equivalent_rows(sys, DEFAULT_MERGE_TOLERANCE).map_err(stringify)?;
    if !merged.is_identity() {
        eprintln!(
            "note: some secrets share a channel row; merged {} secrets into {} \
             indistinguishable classes",
            sys.n_inputs(),
            merged.system.n_inputs()
        );
    }
    Ok(merged.system)
}

fn write_text(text: &str, out: Option<&Path>) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| format!("writing {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Routes CSV and SVG to stdout or files according to --format/--out.
fn emit(
    csv: String,
    svg: Option<String>,
    out: Option<&Path>,
    format: Format,
) -> Result<(), String> {
    match format {
        Format::Csv => write_text(&csv, out),
        Format::Svg => {
            let svg = svg.expect("svg was rendered for this format");
            write_text(&svg, out)
        }
        Format::Both => {
            let Some(out) = out else {
                return Err("--format both needs --out to name the two files".into());
            };
            write_text(&csv, Some(out))?;
            let svg_path = out.with_extension("svg");
            write_text(&svg.expect("svg was rendered for this format"), Some(&svg_path))
        }
    }
}
