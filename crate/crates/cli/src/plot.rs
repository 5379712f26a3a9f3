// SPDX-License-Identifier: Apache-2.0

//! Static figures: a gnuplot script over the CSV table and a standalone SVG.

use std::fmt::Write as _;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_L: f64 = 80.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 60.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    /// 1-based CSV column holding the values, for the gnuplot script.
    pub csv_column: usize,
    pub csv_file: String,
    pub xs: Vec<f64>,
    pub ys: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub title: String,
    pub y_label: String,
    pub log_y: bool,
    /// Multiplier applied to y values before plotting (e.g. 1e6 for μs).
    pub y_scale: f64,
    pub series: Vec<Series>,
}

impl Figure {
    fn points(&self, s: &Series) -> Vec<Option<(f64, f64)>> {
        s.xs.iter()
            .zip(&s.ys)
            .map(|(&x, y)| {
                let y = (*y)? * self.y_scale;
                let y = if self.log_y {
                    (y > 0.0).then(|| y.log10())?
                } else {
                    y
                };
                y.is_finite().then_some((x / 1e9, y))
            })
            .collect()
    }

    fn ranges(&self) -> ((f64, f64), (f64, f64)) {
        let mut x = (f64::INFINITY, f64::NEG_INFINITY);
        let mut y = (f64::INFINITY, f64::NEG_INFINITY);
        for s in &self.series {
            for (px, py) in self.points(s).into_iter().flatten() {
                x = (x.0.min(px), x.1.max(px));
                y = (y.0.min(py), y.1.max(py));
            }
        }
        if !x.0.is_finite() {
            return ((0.0, 1.0), (0.0, 1.0));
        }
        let pad = |(lo, hi): (f64, f64)| {
            if hi > lo {
                (lo, hi)
            } else {
                (lo - 0.5, hi + 0.5)
            }
        };
        (pad(x), pad(y))
    }

    /// Standalone SVG document.
    pub fn svg(&self) -> String {
        let ((x0, x1), (y0, y1)) = self.ranges();
        let (pw, ph) = (WIDTH - MARGIN_L - MARGIN_R, HEIGHT - MARGIN_T - MARGIN_B);
        let sx = |x: f64| MARGIN_L + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| MARGIN_T + (1.0 - (y - y0) / (y1 - y0)) * ph;
        let mut out = String::new();
        let w = &mut out;
        writeln!(w, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#).unwrap();
        writeln!(w, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
        writeln!(
            w,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        )
        .unwrap();
        writeln!(w, r#"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#).unwrap();
        for i in 0..=5 {
            let t = i as f64 / 5.0;
            let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
            let (px, py) = (sx(xv), sy(yv));
            let ylab = if self.log_y {
                format!("1e{yv:.1}")
            } else {
                format!("{yv:.3}")
            };
            writeln!(
                w,
                r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#,
                MARGIN_T + ph,
                MARGIN_T + ph + 5.0
            )
            .unwrap();
            writeln!(
                w,
                r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{xv:.3}</text>"#,
                MARGIN_T + ph + 20.0
            )
            .unwrap();
            writeln!(
                w,
                r#"<line x1="{:.2}" y1="{py:.2}" x2="{MARGIN_L}" y2="{py:.2}" stroke="black"/>"#,
                MARGIN_L - 5.0
            )
            .unwrap();
            writeln!(
                w,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{ylab}</text>"#,
                MARGIN_L - 8.0,
                py + 4.0
            )
            .unwrap();
        }
        writeln!(
            w,
            r#"<text x="{}" y="{}" text-anchor="middle">frequency (GHz)</text>"#,
            MARGIN_L + pw / 2.0,
            HEIGHT - 15.0
        )
        .unwrap();
        writeln!(w, r#"<text x="18" y="{0}" text-anchor="middle" transform="rotate(-90 18 {0})">{1}</text>"#, MARGIN_T + ph / 2.0, escape(&self.y_label)).unwrap();
        for (i, s) in self.series.iter().enumerate() {
            let color = COLORS[i % COLORS.len()];
            let mut run = Vec::new();
            let flush = |run: &mut Vec<String>, w: &mut String| {
                if run.len() > 1 {
                    writeln!(w, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, run.join(" ")).unwrap();
                }
                run.clear();
            };
            for p in self.points(s) {
                match p {
                    Some((x, y)) => run.push(format!("{:.2},{:.2}", sx(x), sy(y))),
                    None => flush(&mut run, w),
                }
            }
            flush(&mut run, w);
            let ly = MARGIN_T + 16.0 + 16.0 * i as f64;
            let lx = MARGIN_L + pw - 180.0;
            writeln!(w, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, lx + 24.0).unwrap();
            writeln!(
                w,
                r#"<text x="{}" y="{}">{}</text>"#,
                lx + 30.0,
                ly + 4.0,
                escape(&s.label)
            )
            .unwrap();
        }
        writeln!(w, "</svg>").unwrap();
        out
    }

    /// gnuplot script rendering the same figure from the CSV tables.
    pub fn gnuplot(&self, svg_out: &str) -> String {
        let mut out = String::new();
        let w = &mut out;
        writeln!(w, "set terminal svg size {WIDTH},{HEIGHT}").unwrap();
        writeln!(w, "set output '{svg_out}'").unwrap();
        writeln!(w, "set datafile separator ','").unwrap();
        writeln!(w, "set title '{}'", self.title.replace('\'', "")).unwrap();
        writeln!(w, "set xlabel 'frequency (GHz)'").unwrap();
        writeln!(w, "set ylabel '{}'", self.y_label.replace('\'', "")).unwrap();
        if self.log_y {
            writeln!(w, "set logscale y").unwrap();
        }
        writeln!(w, "set key top right").unwrap();
        let plots: Vec<String> = self
            .series
            .iter()
            .map(|s| {
                format!(
                    "'{}' every ::1 using ($1/1e9):(${}*{}) with lines title '{}'",
                    s.csv_file,
                    s.csv_column,
                    self.y_scale,
                    s.label.replace('\'', "")
                )
            })
            .collect();
        writeln!(w, "plot {}", plots.join(", \\\n     ")).unwrap();
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
