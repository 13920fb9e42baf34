//! Small native SVG line plots.
//!
//! Just enough for the figures: a log x axis, optionally log y, decade
//! ticks, a legend, dashed lines. No external renderer, no text metrics;
//! the legend box width is sized from the longest label at a fixed glyph
//! width, which is close enough for sans-serif at 12px.

use std::fmt::Write;

pub struct Series {
    pub label: String,
    pub color: &'static str,
    pub dashed: bool,
    pub points: Vec<(f64, f64)>,
}

pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_y: bool,
    pub series: Vec<Series>,
}

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 540.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 26.0;
const MARGIN_TOP: f64 = 46.0;
const MARGIN_BOTTOM: f64 = 62.0;
const FONT: &str = "font-family=\"Helvetica, Arial, sans-serif\"";

/// Data-to-pixel mapping. `x0/x1` are log10 of the data bounds; `y0/y1` are
/// log10 bounds in log mode and plain values otherwise.
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    log_y: bool,
}

impl Frame {
    fn sx(&self, x: f64) -> f64 {
        MARGIN_LEFT + (x.log10() - self.x0) / (self.x1 - self.x0) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn sy(&self, y: f64) -> f64 {
        let v = if self.log_y { y.log10() } else { y };
        HEIGHT - MARGIN_BOTTOM
            - (v - self.y0) / (self.y1 - self.y0) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

fn domains(plot: &Plot) -> Frame {
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for s in &plot.series {
        for &(x, y) in &s.points {
            if x <= 0.0 || (plot.log_y && y <= 0.0) {
                continue;
            }
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            let v = if plot.log_y { y.log10() } else { y };
            y_min = y_min.min(v);
            y_max = y_max.max(v);
        }
    }
    // degenerate inputs still get a drawable frame
    if !x_min.is_finite() || x_min == x_max {
        x_min = 1.0;
        x_max = 10.0;
    }
    if !y_min.is_finite() {
        y_min = 0.0;
        y_max = 1.0;
    }
    if y_min == y_max {
        y_min -= 1.0;
        y_max += 1.0;
    }
    let pad = (y_max - y_min) * 0.06;
    Frame {
        x0: x_min.log10(),
        x1: x_max.log10(),
        y0: y_min - pad,
        y1: y_max + pad,
        log_y: plot.log_y,
    }
}

/// Tick positions for a linear axis: a 1/2/5 step that yields roughly
/// `target` divisions.
fn linear_ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let raw = (hi - lo) / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + step * 1e-9 {
        // snap values like 4.000000000000001 back onto the step lattice
        out.push((t / step).round() * step);
        t += step;
    }
    out
}

fn decade_ticks(lo: f64, hi: f64) -> Vec<i32> {
    let first = lo.ceil() as i32;
    let last = hi.floor() as i32;
    (first..=last).collect()
}

fn format_tick(value: f64, step: f64) -> String {
    if step >= 1.0 {
        format!("{value:.0}")
    } else {
        let decimals = (-step.log10().floor()) as usize;
        format!("{value:.decimals$}")
    }
}

pub fn render(plot: &Plot) -> String {
    let frame = domains(plot);
    let mut out = String::with_capacity(8192);
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(out, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"#ffffff\"/>");

    let plot_bottom = HEIGHT - MARGIN_BOTTOM;
    let plot_right = WIDTH - MARGIN_RIGHT;

    // x grid and labels: decades only
    for k in decade_ticks(frame.x0, frame.x1) {
        let x = frame.sx(10f64.powi(k));
        let _ = writeln!(
            out,
            "<line x1=\"{x:.2}\" y1=\"{MARGIN_TOP}\" x2=\"{x:.2}\" y2=\"{plot_bottom}\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>"
        );
        let _ = writeln!(
            out,
            "<text x=\"{x:.2}\" y=\"{y:.2}\" {FONT} font-size=\"12\" fill=\"#444444\" text-anchor=\"middle\">1e{k}</text>",
            y = plot_bottom + 18.0
        );
    }

    // y grid and labels
    if frame.log_y {
        for k in decade_ticks(frame.y0, frame.y1) {
            let y = frame.sy(10f64.powi(k));
            let _ = writeln!(
                out,
                "<line x1=\"{MARGIN_LEFT}\" y1=\"{y:.2}\" x2=\"{plot_right}\" y2=\"{y:.2}\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>"
            );
            let _ = writeln!(
                out,
                "<text x=\"{x:.2}\" y=\"{y2:.2}\" {FONT} font-size=\"12\" fill=\"#444444\" text-anchor=\"end\">1e{k}</text>",
                x = MARGIN_LEFT - 8.0,
                y2 = y + 4.0
            );
        }
    } else {
        let ticks = linear_ticks(frame.y0, frame.y1, 5);
        let step = if ticks.len() > 1 {
            ticks[1] - ticks[0]
        } else {
            1.0
        };
        for &t in &ticks {
            let y = HEIGHT
                - MARGIN_BOTTOM
                - (t - frame.y0) / (frame.y1 - frame.y0) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM);
            let _ = writeln!(
                out,
                "<line x1=\"{MARGIN_LEFT}\" y1=\"{y:.2}\" x2=\"{plot_right}\" y2=\"{y:.2}\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>"
            );
            let _ = writeln!(
                out,
                "<text x=\"{x:.2}\" y=\"{y2:.2}\" {FONT} font-size=\"12\" fill=\"#444444\" text-anchor=\"end\">{label}</text>",
                x = MARGIN_LEFT - 8.0,
                y2 = y + 4.0,
                label = format_tick(t, step)
            );
        }
    }

    // frame box
    let _ = writeln!(
        out,
        "<rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{w:.2}\" height=\"{h:.2}\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1\"/>",
        w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT,
        h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    );

    // series
    for s in &plot.series {
        let mut points = String::new();
        for &(x, y) in &s.points {
            if x <= 0.0 || (frame.log_y && y <= 0.0) {
                continue;
            }
            let _ = write!(points, "{:.2},{:.2} ", frame.sx(x), frame.sy(y));
        }
        let dash = if s.dashed {
            " stroke-dasharray=\"7 5\""
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "<polyline points=\"{points}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" stroke-linejoin=\"round\"{dash}/>",
            points = points.trim_end(),
            color = s.color
        );
    }

    // legend, top right inside the frame
    let label_chars = plot
        .series
        .iter()
        .map(|s| s.label.len())
        .max()
        .unwrap_or(0);
    let legend_w = 52.0 + label_chars as f64 * 7.2;
    let legend_h = 10.0 + plot.series.len() as f64 * 20.0;
    let lx = plot_right - legend_w - 12.0;
    let ly = MARGIN_TOP + 12.0;
    let _ = writeln!(
        out,
        "<rect x=\"{lx:.2}\" y=\"{ly:.2}\" width=\"{legend_w:.2}\" height=\"{legend_h:.2}\" fill=\"#ffffff\" fill-opacity=\"0.92\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>"
    );
    for (i, s) in plot.series.iter().enumerate() {
        let y = ly + 18.0 + i as f64 * 20.0;
        let dash = if s.dashed {
            " stroke-dasharray=\"7 5\""
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "<line x1=\"{x1:.2}\" y1=\"{y0:.2}\" x2=\"{x2:.2}\" y2=\"{y0:.2}\" stroke=\"{color}\" stroke-width=\"2\"{dash}/>",
            x1 = lx + 10.0,
            x2 = lx + 38.0,
            y0 = y - 4.0,
            color = s.color
        );
        let _ = writeln!(
            out,
            "<text x=\"{x:.2}\" y=\"{y:.2}\" {FONT} font-size=\"12\" fill=\"#222222\">{label}</text>",
            x = lx + 46.0,
            label = s.label
        );
    }

    // title and axis labels
    let _ = writeln!(
        out,
        "<text x=\"{x:.2}\" y=\"28\" {FONT} font-size=\"15\" font-weight=\"600\" fill=\"#111111\" text-anchor=\"middle\">{title}</text>",
        x = WIDTH / 2.0,
        title = plot.title
    );
    let _ = writeln!(
        out,
        "<text x=\"{x:.2}\" y=\"{y:.2}\" {FONT} font-size=\"13\" fill=\"#222222\" text-anchor=\"middle\">{label}</text>",
        x = (MARGIN_LEFT + plot_right) / 2.0,
        y = HEIGHT - 16.0,
        label = plot.x_label
    );
    let _ = writeln!(
        out,
        "<text x=\"20\" y=\"{y:.2}\" {FONT} font-size=\"13\" fill=\"#222222\" text-anchor=\"middle\" transform=\"rotate(-90 20 {y:.2})\">{label}</text>",
        y = (MARGIN_TOP + plot_bottom) / 2.0,
        label = plot.y_label
    );
    out.push_str("</svg>\n");
    out
}
