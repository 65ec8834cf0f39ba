//! Minimal self-contained SVG plots rendered from the same data as the CSV
//! output. All coordinates are formatted with fixed precision, so identical
//! inputs produce byte-identical documents.

use std::fmt::Write as _;

use privleak_core::chernoff::RateReport;
use privleak_core::LeakageDistribution;

pub const COLOR_PRIMARY: &str = "#1f77b4";
pub const COLOR_SECONDARY: &str = "#d62728";
const COLOR_REFERENCE: &str = "#7f7f7f";

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 25.0;
const MARGIN_TOP: f64 = 45.0;
const MARGIN_BOTTOM: f64 = 55.0;

/// Maps data coordinates into the fixed plot rectangle.
struct Frame {
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
}

impl Frame {
    fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Self {
        // Degenerate ranges still need a finite scale.
        let (xmin, xmax) = pad_if_flat(xmin, xmax);
        let (ymin, ymax) = pad_if_flat(ymin, ymax);
        Frame { xmin, xmax, ymin, ymax }
    }

    fn sx(&self, x: f64) -> f64 {
        MARGIN_LEFT + (x - self.xmin) / (self.xmax - self.xmin) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn sy(&self, y: f64) -> f64 {
        HEIGHT - MARGIN_BOTTOM
            - (y - self.ymin) / (self.ymax - self.ymin) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

fn pad_if_flat(lo: f64, hi: f64) -> (f64, f64) {
    if hi - lo > 1e-12 {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

fn header(title: &str) -> String {
    let mut s = String::new();
    let _ = write!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         font-family=\"monospace\" font-size=\"13\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n\
         <text x=\"{:.1}\" y=\"25\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
        WIDTH / 2.0,
        escape(title)
    );
    s
}

/// Axes, tick marks, and numeric tick labels for the frame.
fn axes(frame: &Frame, x_label: &str, y_label: &str) -> String {
    let mut s = String::new();
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;
    let _ = write!(
        s,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\n\
         <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>\n"
    );
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let xv = frame.xmin + t * (frame.xmax - frame.xmin);
        let yv = frame.ymin + t * (frame.ymax - frame.ymin);
        let xs = frame.sx(xv);
        let ys = frame.sy(yv);
        let _ = write!(
            s,
            "<line x1=\"{xs:.2}\" y1=\"{y0}\" x2=\"{xs:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n\
             <text x=\"{xs:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{xv:.3}</text>\n\
             <line x1=\"{x0}\" y1=\"{ys:.2}\" x2=\"{:.2}\" y2=\"{ys:.2}\" stroke=\"black\"/>\n\
             <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{yv:.3}</text>\n",
            y0 + 6.0,
            y0 + 22.0,
            x0 - 6.0,
            x0 - 10.0,
            ys + 4.0
        );
    }
    let _ = write!(
        s,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>\n\
         <text x=\"18\" y=\"{:.1}\" text-anchor=\"middle\" \
         transform=\"rotate(-90 18 {:.1})\">{}</text>\n",
        (x0 + x1) / 2.0,
        HEIGHT - 12.0,
        escape(x_label),
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
    s
}

fn legend(entries: &[(&str, &str, bool)]) -> String {
    let mut s = String::new();
    let x = WIDTH - MARGIN_RIGHT - 230.0;
    for (i, (label, color, dashed)) in entries.iter().enumerate() {
        let y = MARGIN_TOP + 14.0 + 18.0 * i as f64;
        let dash = if *dashed { " stroke-dasharray=\"6 4\"" } else { "" };
        let _ = write!(
            s,
            "<line x1=\"{x:.1}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" \
             stroke=\"{color}\" stroke-width=\"2\"{dash}/>\n\
             <text x=\"{:.1}\" y=\"{:.1}\">{}</text>\n",
            x + 28.0,
            x + 34.0,
            y + 4.0,
            escape(label)
        );
    }
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// One CDF drawn as a right-continuous step function.
pub struct CdfSeries {
    label: String,
    color: &'static str,
    /// (value, cumulative probability) in ascending value order.
    steps: Vec<(f64, f64)>,
}

impl CdfSeries {
    pub fn from_distribution(
        label: &str,
        dist: &LeakageDistribution,
        color: &'static str,
    ) -> Self {
        let mut cdf = 0.0;
        let steps = dist
            .iter()
            .map(|(v, p)| {
                cdf += p;
                (v, cdf)
            })
            .collect();
        CdfSeries { label: label.to_string(), color, steps }
    }
}

pub fn step_cdf_plot(series: &[CdfSeries], title: &str) -> String {
    let xmin = series
        .iter()
        .flat_map(|s| s.steps.first().map(|&(v, _)| v))
        .fold(f64::INFINITY, f64::min);
    let xmax = series
        .iter()
        .flat_map(|s| s.steps.last().map(|&(v, _)| v))
        .fold(f64::NEG_INFINITY, f64::max);
    let frame = Frame::new(xmin, xmax, 0.0, 1.0);

    let mut s = header(title);
    s.push_str(&axes(&frame, "pointwise leakage (bits)", "cumulative probability"));
    for cdf in series {
        let mut d = format!("M {:.2} {:.2}", frame.sx(frame.xmin), frame.sy(0.0));
        let mut level = 0.0;
        for &(v, c) in &cdf.steps {
            let _ = write!(
                d,
                " L {:.2} {:.2} L {:.2} {:.2}",
                frame.sx(v),
                frame.sy(level),
                frame.sx(v),
                frame.sy(c)
            );
            level = c;
        }
        let _ = write!(d, " L {:.2} {:.2}", frame.sx(frame.xmax), frame.sy(level));
        let _ = write!(
            s,
            "<path d=\"{d}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n",
            cdf.color
        );
    }
    let entries: Vec<(&str, &str, bool)> =
        series.iter().map(|c| (c.label.as_str(), c.color, false)).collect();
    s.push_str(&legend(&entries));
    s.push_str("</svg>\n");
    s
}

/// Log-linear decay plot: measured log₂ gaps as points, the fitted line over
/// the fitting window, and a dashed reference of slope −C through the fit's
/// left end.
pub fn rate_plot(report: &RateReport) -> String {
    let pts: Vec<(f64, f64)> = report
        .points
        .iter()
        .filter(|p| p.gap_bits > 0.0)
        .map(|p| (p.n as f64, p.gap_bits.log2()))
        .collect();
    let xmin = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let xmax = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let ymin = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let ymax = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let frame = Frame::new(xmin, xmax, ymin, ymax);

    let title = format!(
        "{} {} decay: slope {:.6}, -C = {:.6}",
        report.metric_name,
        report.mode.name(),
        report.slope_bits_per_n,
        -report.c_min_bits
    );
    let mut s = header(&title);
    s.push_str(&axes(&frame, "observations n", "log2 gap (bits)"));

    let (w0, w1) = (report.window.0 as f64, report.window.1 as f64);
    let fit = |n: f64| report.slope_bits_per_n * n + report.intercept_bits;
    let _ = write!(
        s,
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" \
         stroke=\"{COLOR_SECONDARY}\" stroke-width=\"2\"/>\n",
        frame.sx(w0),
        frame.sy(fit(w0)),
        frame.sx(w1),
        frame.sy(fit(w1))
    );
    // Reference slope −C anchored to the fitted value at the window start.
    let reference = |n: f64| fit(w0) - report.c_min_bits * (n - w0);
    let _ = write!(
        s,
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" \
         stroke=\"{COLOR_REFERENCE}\" stroke-width=\"2\" stroke-dasharray=\"6 4\"/>\n",
        frame.sx(w0),
        frame.sy(reference(w0)),
        frame.sx(w1),
        frame.sy(reference(w1))
    );
    for (x, y) in &pts {
        let _ = write!(
            s,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{COLOR_PRIMARY}\"/>\n",
            frame.sx(*x),
            frame.sy(*y)
        );
    }
    s.push_str(&legend(&[
        ("measured gap", COLOR_PRIMARY, false),
        ("least-squares fit", COLOR_SECONDARY, false),
        ("slope -C reference", COLOR_REFERENCE, true),
    ]));
    s.push_str("</svg>\n");
    s
}
