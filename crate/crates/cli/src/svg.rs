//! Static SVG rendering of the threshold figure.

use std::fmt::Write as _;

use batchdispatch_core::model::CycleEvaluation;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 70.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

struct Axis {
    lo: f64,
    hi: f64,
    px_lo: f64,
    px_hi: f64,
}

impl Axis {
    fn map(&self, v: f64) -> f64 {
        self.px_lo + (v - self.lo) / (self.hi - self.lo) * (self.px_hi - self.px_lo)
    }
}

/// Round an axis maximum up to 1, 2 or 5 times a power of ten.
fn nice_ceiling(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let p = 10f64.powf(x.log10().floor());
    [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * p)
        .find(|&c| c >= x)
        .unwrap_or(10.0 * p)
}

fn ticks(hi: f64) -> Vec<f64> {
    (0..=5).map(|i| hi * f64::from(i) / 5.0).collect()
}

fn label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-0" {
        "0".to_owned()
    } else {
        s.to_owned()
    }
}

/// Profit curve against `n` (left axis), expected wait against `n` (right
/// axis), the tolerance rule, shading over infeasible thresholds and a
/// marker at `n_star`.
pub fn threshold_figure(evals: &[CycleEvaluation], tolerance: f64, n_star: u32) -> String {
    let n_max = evals.iter().map(|e| e.n).max().unwrap_or(1);
    let x = Axis {
        lo: 0.5,
        hi: f64::from(n_max) + 0.5,
        px_lo: LEFT,
        px_hi: WIDTH - RIGHT,
    };
    let profit_hi = nice_ceiling(evals.iter().map(|e| e.profit_rate).fold(0.0, f64::max) * 1.1);
    let wait_hi = nice_ceiling(
        evals
            .iter()
            .map(|e| e.expected_wait)
            .fold(tolerance, f64::max)
            * 1.1,
    );
    let yp = Axis {
        lo: 0.0,
        hi: profit_hi,
        px_lo: HEIGHT - BOTTOM,
        px_hi: TOP,
    };
    let yw = Axis {
        lo: 0.0,
        hi: wait_hi,
        px_lo: HEIGHT - BOTTOM,
        px_hi: TOP,
    };

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    for e in evals.iter().filter(|e| !e.feasible) {
        let x0 = x.map(f64::from(e.n) - 0.5);
        let x1 = x.map(f64::from(e.n) + 0.5);
        let _ = writeln!(
            s,
            r##"<rect class="infeasible" x="{x0:.2}" y="{TOP:.2}" width="{:.2}" height="{:.2}" fill="#dddddd"/>"##,
            x1 - x0,
            HEIGHT - BOTTOM - TOP
        );
    }

    // Axes.
    let (bx, by) = (LEFT, HEIGHT - BOTTOM);
    let _ = writeln!(
        s,
        r#"<path d="M{LEFT:.2} {TOP:.2} L{bx:.2} {by:.2} L{:.2} {by:.2} L{:.2} {TOP:.2}" fill="none" stroke="black"/>"#,
        WIDTH - RIGHT,
        WIDTH - RIGHT
    );
    for n in 1..=n_max {
        let px = x.map(f64::from(n));
        let _ = writeln!(
            s,
            r#"<line x1="{px:.2}" y1="{by:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#,
            by + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{n}</text>"#,
            by + 20.0
        );
    }
    for v in ticks(profit_hi) {
        let py = yp.map(v);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 8.0,
            py + 4.0,
            label(v)
        );
    }
    for v in ticks(wait_hi) {
        let py = yw.map(v);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="start">{}</text>"#,
            WIDTH - RIGHT + 8.0,
            py + 4.0,
            label(v)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">departure threshold n</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="15" y="{:.2}" text-anchor="middle" transform="rotate(-90 15 {:.2})">profit rate</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" transform="rotate(90 {:.2} {:.2})">expected wait (h)</text>"#,
        WIDTH - 15.0,
        HEIGHT / 2.0,
        WIDTH - 15.0,
        HEIGHT / 2.0
    );

    // Tolerance rule.
    let ty = yw.map(tolerance);
    let _ = writeln!(
        s,
        r##"<line class="tolerance" x1="{LEFT:.2}" y1="{ty:.2}" x2="{:.2}" y2="{ty:.2}" stroke="#cc3333" stroke-dasharray="2 3"/>"##,
        WIDTH - RIGHT
    );

    let polyline = |axis: &Axis, value: &dyn Fn(&CycleEvaluation) -> f64| -> String {
        evals
            .iter()
            .map(|e| format!("{:.2},{:.2}", x.map(f64::from(e.n)), axis.map(value(e))))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let _ = writeln!(
        s,
        r##"<polyline class="wait" points="{}" fill="none" stroke="#3366cc" stroke-width="1.5"/>"##,
        polyline(&yw, &|e| e.expected_wait)
    );
    let _ = writeln!(
        s,
        r##"<polyline class="profit" points="{}" fill="none" stroke="black" stroke-width="2"/>"##,
        polyline(&yp, &|e| e.profit_rate)
    );
    for e in evals {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="black"/>"#,
            x.map(f64::from(e.n)),
            yp.map(e.profit_rate)
        );
    }

    // Operative threshold.
    if let Some(e) = evals.iter().find(|e| e.n == n_star) {
        let mx = x.map(f64::from(n_star));
        let _ = writeln!(
            s,
            r#"<line class="n-star" x1="{mx:.2}" y1="{TOP:.2}" x2="{mx:.2}" y2="{by:.2}" stroke="black" stroke-dasharray="6 4"/>"#
        );
        let _ = writeln!(
            s,
            r##"<circle class="n-star" cx="{mx:.2}" cy="{:.2}" r="6" fill="none" stroke="#cc3333" stroke-width="2"/>"##,
            yp.map(e.profit_rate)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}">n* = {n_star}</text>"#,
            mx + 6.0,
            TOP + 14.0
        );
    }

    // Legend.
    let lx = LEFT + 10.0;
    let entries: [(&str, &str); 3] = [
        ("black", "profit rate"),
        ("#3366cc", "expected wait (n-1)/(2λ)"),
        ("#cc3333", "tolerance w̄"),
    ];
    for (i, (color, text)) in entries.iter().enumerate() {
        let ly = TOP - 22.0 + 12.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#,
            lx + 18.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="10">{text}</text>"#,
            lx + 22.0,
            ly + 3.0
        );
    }
    let _ = writeln!(s, "</svg>");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use batchdispatch_core::{model, MarketParams};

    fn figure() -> String {
        let p = MarketParams::new(1.0, 0.33).with_tolerance(0.5);
        threshold_figure(&model::evaluate_all(&p).unwrap(), 0.5, 2)
    }

    #[test]
    fn nice_ceilings() {
        assert_eq!(nice_ceiling(0.0), 1.0);
        assert_eq!(nice_ceiling(0.13), 0.2);
        assert_eq!(nice_ceiling(2.7), 5.0);
        assert_eq!(nice_ceiling(7.0), 10.0);
    }

    #[test]
    fn figure_elements() {
        let s = figure();
        assert!(s.starts_with("<?xml") && s.trim_end().ends_with("</svg>"));
        assert_eq!(s.matches(r#"class="infeasible""#).count(), 4);
        assert_eq!(s.matches(r#"class="n-star""#).count(), 2);
        assert!(s.contains("n* = 2"));
        assert!(s.contains(r#"class="tolerance""#));
        assert!(!s.contains("NaN"));
        assert_eq!(s, figure());
    }
}
