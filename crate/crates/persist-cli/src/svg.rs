//! Minimal static SVG plots: log-log polylines with reference slopes.
//!
//! No plotting dependency; the output is a plain text SVG with decade grid
//! lines and optional dashed reference lines of slope `-gamma` anchored at
//! the first point of the first series. Output contains no timestamps.

use std::fmt::Write as _;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 520.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 30.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 50.0;

const PALETTE: &[&str] = &["#1f6fb2", "#c23b22", "#2e8b57", "#8a2be2", "#b8860b"];

pub struct Series {
    pub label: String,
    /// Positive `(x, y)` pairs; non-positive entries are skipped.
    pub points: Vec<(f64, f64)>,
}

/// Reference decay `y = c x^{-gamma}` through the anchor point.
pub struct RefSlope {
    pub gamma: f64,
    pub label: String,
}

struct Frame {
    lx0: f64,
    lx1: f64,
    ly0: f64,
    ly1: f64,
}

impl Frame {
    fn x(&self, lx: f64) -> f64 {
        MARGIN_L + (lx - self.lx0) / (self.lx1 - self.lx0) * (WIDTH - MARGIN_L - MARGIN_R)
    }

    fn y(&self, ly: f64) -> f64 {
        HEIGHT - MARGIN_B - (ly - self.ly0) / (self.ly1 - self.ly0) * (HEIGHT - MARGIN_T - MARGIN_B)
    }
}

/// Renders a log-log plot of the series plus reference slopes.
pub fn loglog_plot(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series],
    refs: &[RefSlope],
) -> String {
    let logs: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|s| {
            s.points
                .iter()
                .filter(|(x, y)| *x > 0.0 && *y > 0.0)
                .map(|(x, y)| (x.log10(), y.log10()))
                .collect()
        })
        .collect();
    let all: Vec<(f64, f64)> = logs.iter().flatten().copied().collect();
    let (mut lx0, mut lx1, mut ly0, mut ly1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for (lx, ly) in &all {
        lx0 = lx0.min(*lx);
        lx1 = lx1.max(*lx);
        ly0 = ly0.min(*ly);
        ly1 = ly1.max(*ly);
    }
    if all.is_empty() {
        lx0 = 0.0;
        lx1 = 1.0;
        ly0 = -1.0;
        ly1 = 0.0;
    }
    if lx1 - lx0 < 1e-9 {
        lx1 = lx0 + 1.0;
    }
    // leave room for the reference lines below the data
    let ref_drop = refs
        .iter()
        .map(|r| r.gamma * (lx1 - lx0))
        .fold(0.0f64, f64::max);
    ly0 -= 0.1 + 0.0f64.max(ref_drop - (ly1 - ly0));
    ly1 += 0.1;
    let f = Frame { lx0, lx1, ly0, ly1 };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" font-family="monospace" font-size="15" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        xml_escape(title)
    );

    // decade grid
    for d in (lx0.floor() as i64)..=(lx1.ceil() as i64) {
        let x = f.x(d as f64);
        if !(MARGIN_L..=WIDTH - MARGIN_R).contains(&x) {
            continue;
        }
        let _ = writeln!(
            out,
            r##"<line x1="{x:.1}" y1="{MARGIN_T}" x2="{x:.1}" y2="{}" stroke="#dddddd"/>"##,
            HEIGHT - MARGIN_B
        );
        let _ = writeln!(
            out,
            r#"<text x="{x:.1}" y="{}" font-family="monospace" font-size="11" text-anchor="middle">1e{d}</text>"#,
            HEIGHT - MARGIN_B + 16.0
        );
    }
    for d in (ly0.floor() as i64)..=(ly1.ceil() as i64) {
        let y = f.y(d as f64);
        if !(MARGIN_T..=HEIGHT - MARGIN_B).contains(&y) {
            continue;
        }
        let _ = writeln!(
            out,
            r##"<line x1="{MARGIN_L}" y1="{y:.1}" x2="{}" y2="{y:.1}" stroke="#dddddd"/>"##,
            WIDTH - MARGIN_R
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{:.1}" font-family="monospace" font-size="11" text-anchor="end">1e{d}</text>"#,
            MARGIN_L - 6.0,
            y + 4.0
        );
    }
    // axes
    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - MARGIN_L - MARGIN_R,
        HEIGHT - MARGIN_T - MARGIN_B
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-family="monospace" font-size="13" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0,
        xml_escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{}" font-family="monospace" font-size="13" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        xml_escape(y_label)
    );

    // reference slopes through the first point of the first series
    if let Some(anchor) = logs.iter().flatten().next() {
        for r in refs {
            let (ax, ay) = *anchor;
            let y_end = ay - r.gamma * (lx1 - ax);
            let _ = writeln!(
                out,
                r##"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="#999999" stroke-dasharray="6 4"/>"##,
                f.x(ax),
                f.y(ay),
                f.x(lx1),
                f.y(y_end)
            );
            let _ = writeln!(
                out,
                r##"<text x="{:.1}" y="{:.1}" font-family="monospace" font-size="11" fill="#777777">{}</text>"##,
                f.x(lx1) - 90.0,
                f.y(y_end) - 6.0,
                xml_escape(&r.label)
            );
        }
    }

    // data polylines and legend
    for (i, (s, pts)) in series.iter().zip(&logs).enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if !pts.is_empty() {
            let path: Vec<String> = pts
                .iter()
                .map(|(lx, ly)| format!("{:.2},{:.2}", f.x(*lx), f.y(*ly)))
                .collect();
            let _ = writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.6"/>"#,
                path.join(" ")
            );
        }
        let ly = MARGIN_T + 16.0 + 16.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{ly:.1}" x2="{}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/>"#,
            WIDTH - MARGIN_R - 150.0,
            WIDTH - MARGIN_R - 125.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{:.1}" font-family="monospace" font-size="11">{}</text>"#,
            WIDTH - MARGIN_R - 118.0,
            ly + 4.0,
            xml_escape(&s.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_and_is_deterministic() {
        let series = vec![Series {
            label: "p2".into(),
            points: (1..=10).map(|k| (k as f64, (k as f64).powf(-0.25))).collect(),
        }];
        let refs = vec![RefSlope {
            gamma: 0.25,
            label: "slope -1/4".into(),
        }];
        let a = loglog_plot("survival", "n", "p", &series, &refs);
        let b = loglog_plot("survival", "n", "p", &series, &refs);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.contains("polyline"));
        assert!(a.contains("slope -1/4"));
        assert!(a.ends_with("</svg>\n"));
    }

    #[test]
    fn skips_nonpositive_points() {
        let series = vec![Series {
            label: "x".into(),
            points: vec![(1.0, 0.0), (2.0, 0.5)],
        }];
        let svg = loglog_plot("t", "n", "p", &series, &[]);
        assert!(svg.contains("<svg"));
    }
}
