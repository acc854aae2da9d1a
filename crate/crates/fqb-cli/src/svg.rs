//! Minimal self-contained SVG line plots. No external assets, byte-for-byte
//! deterministic for identical input.

use std::fmt::Write as _;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 28.0;
const MARGIN_BOTTOM: f64 = 52.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// One named polyline.
#[derive(Debug, Clone)]
pub struct PlotSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// Axis labels and title.
#[derive(Debug, Clone)]
pub struct PlotStyle {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
}

fn coord(v: f64) -> String {
    format!("{v:.2}")
}

/// Tick spacing of roughly range/5 snapped to a 1/2/2.5/5 decade pattern.
fn nice_step(range: f64) -> f64 {
    let raw = range / 5.0;
    let magnitude = 10f64.powf(raw.abs().log10().floor());
    let candidates = [1.0, 2.0, 2.5, 5.0, 10.0];
    for c in candidates {
        if raw <= c * magnitude {
            return c * magnitude;
        }
    }
    10.0 * magnitude
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    if hi <= lo {
        return vec![lo];
    }
    let step = nice_step(hi - lo);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    crate::output::format_significant(v, 6)
}

/// Renders line series into a standalone SVG document. Single-point series
/// degrade to a marker.
pub fn render_plot(series: &[PlotSeries], style: &PlotStyle) -> String {
    let all: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .collect();
    let (mut x_lo, mut x_hi) = bounds(all.iter().map(|p| p.0));
    let (mut y_lo, mut y_hi) = bounds(all.iter().map(|p| p.1));
    if x_hi == x_lo {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    if y_hi == y_lo {
        y_lo -= 0.5;
        y_hi += 0.5;
    }
    // Headroom so curves do not sit on the frame.
    let y_pad = 0.05 * (y_hi - y_lo);
    y_lo -= y_pad;
    y_hi += y_pad;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = move |x: f64| MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = move |y: f64| MARGIN_TOP + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h;

    let mut out = String::new();
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    out.push('\n');
    let _ = writeln!(
        out,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    // Frame.
    let _ = writeln!(
        out,
        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black" stroke-width="1"/>"#,
        coord(MARGIN_LEFT),
        coord(MARGIN_TOP),
        coord(plot_w),
        coord(plot_h)
    );

    // Ticks, grid and labels.
    for tx in ticks(x_lo, x_hi) {
        let x = sx(tx);
        let _ = writeln!(
            out,
            r##"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#cccccc" stroke-width="0.5"/>"##,
            coord(x),
            coord(MARGIN_TOP),
            coord(MARGIN_TOP + plot_h)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            coord(x),
            coord(MARGIN_TOP + plot_h + 16.0),
            tick_label(tx)
        );
    }
    for ty in ticks(y_lo, y_hi) {
        let y = sy(ty);
        let _ = writeln!(
            out,
            r##"<line x1="{0}" y1="{2}" x2="{1}" y2="{2}" stroke="#cccccc" stroke-width="0.5"/>"##,
            coord(MARGIN_LEFT),
            coord(MARGIN_LEFT + plot_w),
            coord(y)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            coord(MARGIN_LEFT - 6.0),
            coord(y + 4.0),
            tick_label(ty)
        );
    }

    // Axis titles.
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#,
        coord(MARGIN_LEFT + plot_w / 2.0),
        coord(HEIGHT - 12.0),
        escape(&style.x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        coord(MARGIN_TOP + plot_h / 2.0),
        coord(MARGIN_TOP + plot_h / 2.0),
        escape(&style.y_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="18" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        coord(MARGIN_LEFT + plot_w / 2.0),
        escape(&style.title)
    );

    // Data.
    for (idx, s) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        if s.points.len() == 1 {
            let (x, y) = s.points[0];
            let _ = writeln!(
                out,
                r#"<circle cx="{}" cy="{}" r="3.5" fill="{color}"/>"#,
                coord(sx(x)),
                coord(sy(y))
            );
        } else {
            let mut path = String::new();
            for (x, y) in &s.points {
                if !path.is_empty() {
                    path.push(' ');
                }
                let _ = write!(path, "{},{}", coord(sx(*x)), coord(sy(*y)));
            }
            let _ = writeln!(
                out,
                r#"<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>"#
            );
        }
    }

    // Legend for labelled multi-series plots.
    let labelled: Vec<(usize, &PlotSeries)> = series
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.label.is_empty())
        .collect();
    if labelled.len() > 1 {
        for (slot, (idx, s)) in labelled.iter().enumerate() {
            let y = MARGIN_TOP + 14.0 + 16.0 * slot as f64;
            let x = MARGIN_LEFT + plot_w - 130.0;
            let _ = writeln!(
                out,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="1.5"/>"#,
                coord(x),
                coord(y - 4.0),
                coord(x + 22.0),
                coord(y - 4.0),
                PALETTE[idx % PALETTE.len()]
            );
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11">{}</text>"#,
                coord(x + 28.0),
                coord(y),
                escape(&s.label)
            );
        }
    }

    out.push_str("</svg>\n");
    out
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn demo() -> (Vec<PlotSeries>, PlotStyle) {
        let series = vec![
            PlotSeries {
                label: "a".into(),
                points: (0..20)
                    .map(|n| (n as f64, (n as f64 * 0.7).sin()))
                    .collect(),
            },
            PlotSeries {
                label: "b".into(),
                points: (0..20)
                    .map(|n| (n as f64, (n as f64 * 0.3).cos()))
                    .collect(),
            },
        ];
        let style = PlotStyle {
            title: "demo".into(),
            x_label: "n".into(),
            y_label: "ΔE".into(),
        };
        (series, style)
    }

    #[test]
    fn output_is_deterministic() {
        let (series, style) = demo();
        assert_eq!(render_plot(&series, &style), render_plot(&series, &style));
    }

    #[test]
    fn single_point_series_renders_a_marker() {
        let series = vec![PlotSeries {
            label: String::new(),
            points: vec![(1.0, 2.0)],
        }];
        let style = PlotStyle {
            title: "point".into(),
            x_label: "x".into(),
            y_label: "y".into(),
        };
        let svg = render_plot(&series, &style);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<circle"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn multi_series_has_legend_and_polylines() {
        let (series, style) = demo();
        let svg = render_plot(&series, &style);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(">a</text>"));
        assert!(svg.contains(">b</text>"));
        assert!(!svg.contains("http://") || svg.contains("xmlns"));
    }

    #[test]
    fn four_overlaid_charging_curves() {
        // The standard four-period comparison on the nearest-neighbor ring.
        use fqb_core::{evolve, ChargerParams, CouplingRange, ObservableSet};
        let series: Vec<PlotSeries> = [("pi/8", 1.0), ("pi/4", 2.0), ("3pi/8", 3.0), ("pi/2", 4.0)]
            .iter()
            .map(|(label, eighths)| {
                let tau = eighths * std::f64::consts::FRAC_PI_8;
                let params = ChargerParams {
                    range: CouplingRange::NearestNeighbor,
                    ..ChargerParams::new(8, tau)
                };
                let run = evolve(&params, 60, &ObservableSet::default()).unwrap();
                PlotSeries {
                    label: format!("τ = {label}"),
                    points: run
                        .records
                        .iter()
                        .map(|r| (r.n as f64, r.delta_e))
                        .collect(),
                }
            })
            .collect();
        let style = PlotStyle {
            title: "stored energy vs kicks".into(),
            x_label: "n".into(),
            y_label: "ΔE".into(),
        };
        let svg = render_plot(&series, &style);
        assert_eq!(svg.matches("<polyline").count(), 4);
        for label in ["τ = pi/8", "τ = pi/4", "τ = 3pi/8", "τ = pi/2"] {
            assert!(svg.contains(&format!(">{label}</text>")), "missing {label}");
        }
        assert_eq!(svg, render_plot(&series, &style));
    }
}
