//! Hand-rolled SVG fan charts for impulse-response bands: a shaded
//! 90% band polygon, the median path, a dashed zero line, and axis ticks.
//! Output is a pure function of the band, so charts are byte-reproducible.

use crate::band::IrfBand;
use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 18.0;
const MARGIN_TOP: f64 = 42.0;
const MARGIN_BOTTOM: f64 = 46.0;

/// Renders one variable's band as a complete standalone SVG document.
/// Coordinates are written with fixed precision so identical bands always
/// produce identical bytes.
pub fn fan_chart_svg(band: &IrfBand, variable: usize) -> String {
    let name = &band.variables()[variable];
    let horizon = band.horizon();
    let lo = band.lo().row(variable).into_owned();
    let median = band.median().row(variable).into_owned();
    let hi = band.hi().row(variable).into_owned();

    // Y range covers the band and the zero line, padded 5% each side.
    let mut y_min = 0.0f64;
    let mut y_max = 0.0f64;
    for h in 0..=horizon {
        y_min = y_min.min(lo[h]);
        y_max = y_max.max(hi[h]);
    }
    let span = (y_max - y_min).max(1e-12);
    y_min -= 0.05 * span;
    y_max += 0.05 * span;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_of = |h: usize| {
        MARGIN_LEFT
            + if horizon == 0 {
                plot_w / 2.0
            } else {
                plot_w * h as f64 / horizon as f64
            }
    };
    let y_of = |v: f64| MARGIN_TOP + plot_h * (y_max - v) / (y_max - y_min);

    let mut out = String::with_capacity(4096);
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH:.0}\" height=\"{HEIGHT:.0}\" \
         viewBox=\"0 0 {WIDTH:.0} {HEIGHT:.0}\">"
    );
    let _ = writeln!(out, "<rect width=\"{WIDTH:.0}\" height=\"{HEIGHT:.0}\" fill=\"#ffffff\"/>");
    let _ = writeln!(
        out,
        "<text x=\"{:.1}\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" \
         font-weight=\"bold\" text-anchor=\"middle\">{} &#8212; {} ({})</text>",
        WIDTH / 2.0,
        escape(name),
        escape(&band.meta.engine),
        escape(&band.meta.variant),
    );

    // Shaded band: lower edge forward, upper edge back.
    let mut points = String::new();
    for h in 0..=horizon {
        let _ = write!(points, "{:.2},{:.2} ", x_of(h), y_of(lo[h]));
    }
    for h in (0..=horizon).rev() {
        let _ = write!(points, "{:.2},{:.2} ", x_of(h), y_of(hi[h]));
    }
    let _ = writeln!(
        out,
        "<polygon points=\"{}\" fill=\"#a8c8e8\" fill-opacity=\"0.6\" stroke=\"none\"/>",
        points.trim_end()
    );

    // Zero line, when zero is inside the plotted range.
    if y_min < 0.0 && y_max > 0.0 {
        let y0 = y_of(0.0);
        let _ = writeln!(
            out,
            "<line x1=\"{MARGIN_LEFT:.1}\" y1=\"{y0:.2}\" x2=\"{:.1}\" y2=\"{y0:.2}\" \
             stroke=\"#888888\" stroke-dasharray=\"4 3\" stroke-width=\"1\"/>",
            WIDTH - MARGIN_RIGHT
        );
    }

    let mut med = String::new();
    for h in 0..=horizon {
        let _ = write!(med, "{:.2},{:.2} ", x_of(h), y_of(median[h]));
    }
    let _ = writeln!(
        out,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"2\"/>",
        med.trim_end()
    );

    // Axes.
    let x_axis_y = HEIGHT - MARGIN_BOTTOM;
    let _ = writeln!(
        out,
        "<line x1=\"{MARGIN_LEFT:.1}\" y1=\"{x_axis_y:.1}\" x2=\"{:.1}\" y2=\"{x_axis_y:.1}\" \
         stroke=\"#000000\" stroke-width=\"1\"/>",
        WIDTH - MARGIN_RIGHT
    );
    let _ = writeln!(
        out,
        "<line x1=\"{MARGIN_LEFT:.1}\" y1=\"{MARGIN_TOP:.1}\" x2=\"{MARGIN_LEFT:.1}\" y2=\"{x_axis_y:.1}\" \
         stroke=\"#000000\" stroke-width=\"1\"/>"
    );

    // Horizon ticks: at most 9, always including the endpoints.
    let step = (horizon / 8).max(1);
    let mut h = 0;
    while h <= horizon {
        let x = x_of(h);
        let _ = writeln!(
            out,
            "<line x1=\"{x:.2}\" y1=\"{x_axis_y:.1}\" x2=\"{x:.2}\" y2=\"{:.1}\" \
             stroke=\"#000000\" stroke-width=\"1\"/>",
            x_axis_y + 4.0
        );
        let _ = writeln!(
            out,
            "<text x=\"{x:.2}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"middle\">{h}</text>",
            x_axis_y + 17.0
        );
        if h == horizon {
            break;
        }
        h = (h + step).min(horizon);
    }
    let _ = writeln!(
        out,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\" \
         text-anchor=\"middle\">months</text>",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    );

    // Five evenly spaced value ticks.
    for i in 0..=4 {
        let v = y_min + (y_max - y_min) * i as f64 / 4.0;
        let y = y_of(v);
        let _ = writeln!(
            out,
            "<line x1=\"{:.1}\" y1=\"{y:.2}\" x2=\"{MARGIN_LEFT:.1}\" y2=\"{y:.2}\" \
             stroke=\"#000000\" stroke-width=\"1\"/>",
            MARGIN_LEFT - 4.0
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"end\">{v:.3}</text>",
            MARGIN_LEFT - 7.0,
            y + 4.0
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
