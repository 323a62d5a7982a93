//! Two-panel SVG: flagged cells (first two coordinates) and the log-log
//! box-count fit.

use std::fmt::Write;

use crate::report::{Outcome, Summary};

const PANEL: f64 = 360.0;
const MARGIN: f64 = 30.0;

struct Frame {
    x0: f64,
    lo: [f64; 2],
    hi: [f64; 2],
}

impl Frame {
    fn fit(x0: f64, points: impl Iterator<Item = [f64; 2]> + Clone) -> Self {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in points {
            for a in 0..2 {
                lo[a] = lo[a].min(p[a]);
                hi[a] = hi[a].max(p[a]);
            }
        }
        for a in 0..2 {
            if !lo[a].is_finite() {
                (lo[a], hi[a]) = (0.0, 1.0);
            }
            if hi[a] - lo[a] < 1e-12 {
                lo[a] -= 0.5;
                hi[a] += 0.5;
            }
        }
        Frame { x0, lo, hi }
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        let u = (p[0] - self.lo[0]) / (self.hi[0] - self.lo[0]);
        let v = (p[1] - self.lo[1]) / (self.hi[1] - self.lo[1]);
        (self.x0 + MARGIN + u * (PANEL - 2.0 * MARGIN), MARGIN + (1.0 - v) * (PANEL - 2.0 * MARGIN) + 20.0)
    }
}

pub fn render(summary: &Summary, outcome: &Outcome) -> String {
    let width = 2.0 * PANEL;
    let height = PANEL + 20.0;
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="monospace" font-size="11">"#);
    let _ = writeln!(s, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    let verdict = if summary.pass { "PASS" } else { "FAIL" };
    let _ = writeln!(s, r#"<text x="8" y="14">{} {verdict}</text>"#, summary.id);

    let cells: Vec<[f64; 2]> =
        outcome.cell_points.iter().map(|p| [p[0], p.get(1).copied().unwrap_or(0.0)]).collect();
    let frame = match outcome.levels.last() {
        Some(l) => {
            let d = l.cells.grid.domain();
            let hi1 = if d.dim() > 1 { d.upper[1] } else { 1.0 };
            let lo1 = if d.dim() > 1 { d.lower[1] } else { 0.0 };
            Frame::fit(0.0, [[d.lower[0], lo1], [d.upper[0], hi1]].into_iter())
        }
        None => Frame::fit(0.0, cells.iter().copied()),
    };
    let _ = writeln!(s, r#"<text x="{MARGIN}" y="{}">nodal cells ({})</text>"#, PANEL + 12.0, cells.len());
    for p in &cells {
        let (x, y) = frame.map(*p);
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="1" fill="black"/>"#);
    }

    let pts: Vec<[f64; 2]> = outcome
        .levels
        .iter()
        .filter(|l| l.count > 0)
        .map(|l| [(1.0 / l.epsilon).ln(), (l.count as f64).ln()])
        .collect();
    let right = Frame::fit(PANEL, pts.iter().copied());
    let _ = writeln!(s, r#"<text x="{}" y="{}">log N vs log 1/eps</text>"#, PANEL + MARGIN, PANEL + 12.0);
    let poly: Vec<String> = pts
        .iter()
        .map(|p| {
            let (x, y) = right.map(*p);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    if !poly.is_empty() {
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="black"/>"#, poly.join(" "));
    }
    for p in &pts {
        let (x, y) = right.map(*p);
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="none" stroke="black"/>"#);
    }
    if let (Some(fit), Some(first), Some(last)) = (&outcome.fit, pts.first(), pts.last()) {
        let line = |t: f64| [t, fit.dimension * t + fit.intercept];
        let (x1, y1) = right.map(line(first[0]));
        let (x2, y2) = right.map(line(last[0]));
        let _ = writeln!(s, r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="red" stroke-dasharray="4 3"/>"#);
        let _ = writeln!(s, r#"<text x="{}" y="34">d = {:.3}</text>"#, PANEL + MARGIN, fit.dimension);
    }
    s.push_str("</svg>\n");
    s
}
