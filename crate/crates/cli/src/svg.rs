//! Static SVG figures: a distance-distribution (violin) plot for eval runs
//! and a top-down path plot for multigoal traces. Pure string emission with
//! fixed-precision coordinates, so identical inputs yield identical bytes.

use std::fmt::Write as _;

use equigoal_core::evaluate::QualTrace;

const PALETTE: [&str; 4] = ["#4878cf", "#ee854a", "#6acc65", "#d65f5f"];

fn nice_ceil(v: f64) -> f64 {
    // Round up to 1/2/5 × 10^k so the axis top lands on a readable number.
    if v <= 0.0 {
        return 1.0;
    }
    let exp = v.log10().floor();
    let base = 10f64.powf(exp);
    let m = v / base;
    let nice = if m <= 1.0 {
        1.0
    } else if m <= 2.0 {
        2.0
    } else if m <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * base
}

/// Gaussian kernel density estimate at `x` with Silverman's bandwidth.
fn kde(samples: &[f64], bandwidth: f64, x: f64) -> f64 {
    let norm = 1.0 / ((2.0 * std::f64::consts::PI).sqrt() * bandwidth * samples.len() as f64);
    samples
        .iter()
        .map(|s| {
            let z = (x - s) / bandwidth;
            (-0.5 * z * z).exp()
        })
        .sum::<f64>()
        * norm
}

fn silverman_bandwidth(samples: &[f64]) -> f64 {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / n;
    let sd = var.sqrt();
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let q = |p: f64| sorted[((sorted.len() - 1) as f64 * p) as usize];
    let iqr = q(0.75) - q(0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    (0.9 * spread * n.powf(-0.2)).max(1e-3)
}

/// One violin per method over its closest-distance samples, with a tick at
/// the mean. Each violin is width-normalized to its own density peak.
pub fn violin_svg(methods: &[(String, Vec<f64>)], provenance: &str) -> String {
    let left = 56.0;
    let bottom = 36.0;
    let top = 16.0;
    let slot = 150.0;
    let height = 400.0;
    let width = left + slot * methods.len() as f64 + 20.0;
    let plot_h = height - top - bottom;

    let max_val = methods
        .iter()
        .flat_map(|(_, v)| v.iter().copied())
        .fold(0.0f64, f64::max);
    let y_top = nice_ceil(max_val * 1.05);
    let y_of = |v: f64| top + plot_h * (1.0 - v / y_top);

    let mut out = String::new();
    write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" \
         viewBox=\"0 0 {width:.0} {height:.0}\" font-family=\"sans-serif\" font-size=\"12\">\n\
         <!-- provenance {provenance} -->\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
    .expect("string write");

    // Y axis with 5 ticks.
    writeln!(
        out,
        "<line x1=\"{left:.1}\" y1=\"{top:.1}\" x2=\"{left:.1}\" y2=\"{:.1}\" stroke=\"#333\"/>",
        top + plot_h
    )
    .expect("string write");
    for i in 0..=5 {
        let v = y_top * i as f64 / 5.0;
        let y = y_of(v);
        writeln!(
            out,
            "<line x1=\"{:.1}\" y1=\"{y:.1}\" x2=\"{left:.1}\" y2=\"{y:.1}\" stroke=\"#333\"/>\
             <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{v:.2}</text>",
            left - 4.0,
            left - 8.0,
            y + 4.0
        )
        .expect("string write");
    }
    writeln!(
        out,
        "<text x=\"14\" y=\"{:.1}\" transform=\"rotate(-90 14 {:.1})\" text-anchor=\"middle\">closest distance</text>",
        top + plot_h / 2.0,
        top + plot_h / 2.0
    )
    .expect("string write");

    for (idx, (name, samples)) in methods.iter().enumerate() {
        let cx = left + slot * (idx as f64 + 0.5);
        let color = PALETTE[idx % PALETTE.len()];
        if !samples.is_empty() {
            let bw = silverman_bandwidth(samples);
            let rows = 80;
            let dens: Vec<(f64, f64)> = (0..=rows)
                .map(|r| {
                    let v = y_top * r as f64 / rows as f64;
                    (v, kde(samples, bw, v))
                })
                .collect();
            let peak = dens.iter().map(|d| d.1).fold(f64::MIN_POSITIVE, f64::max);
            let half = 0.42 * slot;
            let mut pts = String::new();
            for (v, d) in &dens {
                let w = half * d / peak;
                write!(pts, "{:.1},{:.1} ", cx + w, y_of(*v)).expect("string write");
            }
            for (v, d) in dens.iter().rev() {
                let w = half * d / peak;
                write!(pts, "{:.1},{:.1} ", cx - w, y_of(*v)).expect("string write");
            }
            writeln!(
                out,
                "<polygon points=\"{}\" fill=\"{color}\" fill-opacity=\"0.55\" stroke=\"{color}\"/>",
                pts.trim_end()
            )
            .expect("string write");
            let mean = samples.iter().sum::<f64>() / samples.len() as f64;
            writeln!(
                out,
                "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"#111\" stroke-width=\"2\"/>",
                cx - 26.0,
                y_of(mean),
                cx + 26.0,
                y_of(mean)
            )
            .expect("string write");
        }
        writeln!(
            out,
            "<text x=\"{cx:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{name}</text>",
            height - 12.0
        )
        .expect("string write");
    }
    out.push_str("</svg>\n");
    out
}

/// Top-down plot of one multigoal run: path polyline, numbered goal markers,
/// and heading ticks along the path.
pub fn multigoal_svg(trace: &QualTrace, provenance: &str) -> String {
    let size = 520.0;
    let all_x: Vec<f64> = trace
        .steps
        .iter()
        .map(|s| s.position.x)
        .chain(trace.goals.iter().map(|g| g.x))
        .collect();
    let all_y: Vec<f64> = trace
        .steps
        .iter()
        .map(|s| s.position.y)
        .chain(trace.goals.iter().map(|g| g.y))
        .collect();
    let (min_x, max_x) = bounds(&all_x);
    let (min_y, max_y) = bounds(&all_y);
    let span = (max_x - min_x).max(max_y - min_y).max(1e-9);
    let pad = span * 0.08;
    let scale = size / (span + 2.0 * pad);
    let sx = |x: f64| (x - min_x + pad) * scale;
    // SVG y grows downward; world y grows upward.
    let sy = |y: f64| size - (y - min_y + pad) * scale;

    let mut out = String::new();
    write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size:.0}\" height=\"{size:.0}\" \
         viewBox=\"0 0 {size:.0} {size:.0}\" font-family=\"sans-serif\" font-size=\"12\">\n\
         <!-- provenance {provenance} -->\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
    .expect("string write");

    if !trace.steps.is_empty() {
        let mut pts = String::new();
        for s in &trace.steps {
            write!(pts, "{:.1},{:.1} ", sx(s.position.x), sy(s.position.y)).expect("string write");
        }
        writeln!(
            out,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>",
            pts.trim_end(),
            PALETTE[0]
        )
        .expect("string write");

        // Heading ticks, thinned so long runs stay readable.
        let stride = (trace.steps.len() / 60).max(1);
        let tick = span * 0.025 * scale;
        for s in trace.steps.iter().step_by(stride) {
            let x = sx(s.position.x);
            let y = sy(s.position.y);
            writeln!(
                out,
                "<line x1=\"{x:.1}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"#888\" stroke-width=\"1\"/>",
                x + tick * s.heading.cos(),
                y - tick * s.heading.sin()
            )
            .expect("string write");
        }

        let start = &trace.steps[0];
        writeln!(
            out,
            "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"5\" fill=\"#111\"/>",
            sx(start.position.x),
            sy(start.position.y)
        )
        .expect("string write");
    }

    for (i, g) in trace.goals.iter().enumerate() {
        let achieved = i < trace.goals_achieved;
        let fill = if achieved { PALETTE[2] } else { PALETTE[3] };
        writeln!(
            out,
            "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"7\" fill=\"{fill}\" fill-opacity=\"0.8\" stroke=\"#333\"/>\
             <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
            sx(g.x),
            sy(g.y),
            sx(g.x),
            sy(g.y) - 11.0,
            i + 1
        )
        .expect("string write");
    }
    out.push_str("</svg>\n");
    out
}

fn bounds(vs: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in vs {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo > hi {
        (0.0, 1.0)
    } else {
        (lo, hi)
    }
}
