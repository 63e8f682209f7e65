//! Error-versus-ratio line charts.
//!
//! The x axis is logarithmic in the class-to-sample ratio. Each dataset size
//! gets one `<polyline>`, a circle per measured point and a vertical whisker
//! spanning one standard deviation either side of the mean.

use std::collections::BTreeMap;
use std::fmt::Write;

use ratioplan_core::TradeoffRow;

use crate::error::{CliError, Result};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const AXIS: &str = "#333333";

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

struct Axes {
    log_x: (f64, f64),
    y: (f64, f64),
}

impl Axes {
    fn fit(rows: &[TradeoffRow]) -> Self {
        let mut lx = (f64::INFINITY, f64::NEG_INFINITY);
        let mut y = (f64::INFINITY, f64::NEG_INFINITY);
        for r in rows {
            let l = r.x.log10();
            lx = (lx.0.min(l), lx.1.max(l));
            y = (
                y.0.min(r.mean_error - r.std_error),
                y.1.max(r.mean_error + r.std_error),
            );
        }
        Axes {
            log_x: pad(lx, 0.5),
            y: pad(y, 1.0),
        }
    }

    fn px(&self, x: f64) -> f64 {
        let (lo, hi) = self.log_x;
        LEFT + (x.log10() - lo) / (hi - lo) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        let (lo, hi) = self.y;
        HEIGHT - BOTTOM - (y - lo) / (hi - lo) * (HEIGHT - TOP - BOTTOM)
    }
}

/// Widens a degenerate range and adds a 5% margin.
fn pad((lo, hi): (f64, f64), min_span: f64) -> (f64, f64) {
    let (lo, hi) = if hi - lo < 1e-12 {
        (lo - 0.5 * min_span, hi + 0.5 * min_span)
    } else {
        (lo, hi)
    };
    let m = 0.05 * (hi - lo);
    (lo - m, hi + m)
}

/// Renders a trade-off table. Output bytes depend only on the rows.
pub fn render_tradeoff_svg(rows: &[TradeoffRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(CliError::Validation("trade-off table has no rows".into()));
    }
    let mut series: BTreeMap<u64, Vec<&TradeoffRow>> = BTreeMap::new();
    for r in rows {
        series.entry(r.n_total).or_default().push(r);
    }
    for points in series.values_mut() {
        points.sort_by(|a, b| a.x.total_cmp(&b.x));
    }
    let axes = Axes::fit(rows);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{HEIGHT:.0}" viewBox="0 0 {WIDTH:.0} {HEIGHT:.0}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    write_axes(&mut s, &axes);

    for (i, (n_total, points)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(s, r#"<g class="series" data-n="{n_total}">"#);
        let coords: Vec<String> = points
            .iter()
            .map(|p| format!("{:.2},{:.2}", axes.px(p.x), axes.py(p.mean_error)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            coords.join(" ")
        );
        for p in points {
            let cx = axes.px(p.x);
            if p.std_error > 0.0 {
                let _ = writeln!(
                    s,
                    r#"<line class="whisker" x1="{cx:.2}" y1="{:.2}" x2="{cx:.2}" y2="{:.2}" stroke="{color}"/>"#,
                    axes.py(p.mean_error - p.std_error),
                    axes.py(p.mean_error + p.std_error),
                );
            }
            let _ = writeln!(
                s,
                r#"<circle cx="{cx:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                axes.py(p.mean_error)
            );
        }
        let ly = TOP + 20.0 + 18.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#,
            lx + 20.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}">N={n_total}</text>"#,
            lx + 26.0,
            ly + 4.0
        );
        let _ = writeln!(s, "</g>");
    }
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

fn write_axes(s: &mut String, axes: &Axes) {
    let (x0, x1) = (LEFT, WIDTH - RIGHT);
    let (y0, y1) = (HEIGHT - BOTTOM, TOP);
    let _ = writeln!(s, r#"<g class="axes" stroke="{AXIS}">"#);
    let _ = writeln!(
        s,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}"/>"#
    );
    let _ = writeln!(
        s,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}"/>"#
    );
    let _ = writeln!(s, "</g>");

    let (lo, hi) = axes.log_x;
    for e in lo.ceil() as i32..=hi.floor() as i32 {
        let px = axes.px(10f64.powi(e));
        let _ = writeln!(
            s,
            r#"<line x1="{px:.2}" y1="{y0:.2}" x2="{px:.2}" y2="{:.2}" stroke="{AXIS}"/>"#,
            y0 + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">1e{e}</text>"#,
            y0 + 18.0
        );
    }
    let (ylo, yhi) = axes.y;
    for i in 0..=4 {
        let v = ylo + (yhi - ylo) * i as f64 / 4.0;
        let py = axes.py(v);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{x0:.2}" y2="{py:.2}" stroke="{AXIS}"/>"#,
            x0 - 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.2}</text>"#,
            x0 - 8.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">class-to-sample ratio K/n</text>"#,
        0.5 * (x0 + x1),
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">error (%)</text>"#,
        0.5 * (y0 + y1),
        0.5 * (y0 + y1)
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n_total: u64, k: u64, mean_error: f64, std_error: f64) -> TradeoffRow {
        TradeoffRow {
            n_total,
            k,
            x: (k * k) as f64 / n_total as f64,
            mean_error,
            std_error,
            replicates: 5,
        }
    }

    #[test]
    fn empty_table_is_rejected() {
        assert!(render_tradeoff_svg(&[]).is_err());
    }

    #[test]
    fn single_point_has_one_marker() {
        let svg = render_tradeoff_svg(&[row(1000, 10, 30.0, 0.0)]).unwrap();
        assert_eq!(svg.matches("<circle").count(), 1);
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }

    #[test]
    fn one_polyline_per_size_and_stable_bytes() {
        let rows = [
            row(1000, 10, 30.0, 0.4),
            row(1000, 20, 28.0, 0.3),
            row(5000, 10, 25.0, 0.2),
            row(5000, 50, 22.0, 0.5),
            row(20000, 100, 19.0, 0.1),
        ];
        let svg = render_tradeoff_svg(&rows).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert_eq!(svg.matches("<circle").count(), 5);
        assert_eq!(svg.matches(r#"class="whisker""#).count(), 5);
        assert_eq!(svg, render_tradeoff_svg(&rows).unwrap());
    }
}
