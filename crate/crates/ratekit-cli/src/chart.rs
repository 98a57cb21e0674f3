//! Standalone SVG charts, no plotting dependency.
//!
//! Charts are assembled as plain strings with fixed-precision coordinates,
//! so re-rendering the same data yields byte-identical files. Every chart
//! embeds the generating command (as `key=value` pairs, which keeps the
//! text legal inside an XML comment) for provenance.

const WIDTH: f64 = 840.0;
const HEIGHT: f64 = 520.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 170.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 60.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

pub fn escape_xml(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// XML comments must not contain `--`; break any run of hyphens apart.
fn comment_safe(text: &str) -> String {
    text.replace("--", "- -")
}

fn chart_open(provenance: &str) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <!-- {} -->\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n",
        comment_safe(provenance)
    )
}

/// Round tick spacing to 1/2/5 times a power of ten.
fn nice_step(span: f64, target_ticks: usize) -> f64 {
    let raw = span / target_ticks.max(1) as f64;
    let magnitude = 10f64.powf(raw.log10().floor());
    let residual = raw / magnitude;
    let factor = if residual <= 1.5 {
        1.0
    } else if residual <= 3.5 {
        2.0
    } else if residual <= 7.5 {
        5.0
    } else {
        10.0
    };
    factor * magnitude
}

fn format_tick(value: f64) -> String {
    if value.abs() >= 1.0 || value == 0.0 {
        let rounded = (value * 100.0).round() / 100.0;
        if rounded.fract() == 0.0 {
            format!("{}", rounded as i64)
        } else {
            format!("{rounded}")
        }
    } else {
        format!("{value:.3}")
    }
}

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        MARGIN_LEFT
            + (v - self.x_min) / (self.x_max - self.x_min) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT
            - MARGIN_BOTTOM
            - (v - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

fn axes(out: &mut String, frame: &Frame, title: &str, x_label: &str, y_label: &str) {
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;
    out.push_str(&format!(
        "<text x=\"{:.2}\" y=\"28\" font-family=\"sans-serif\" font-size=\"18\" \
         text-anchor=\"middle\">{}</text>\n",
        (x0 + x1) / 2.0,
        escape_xml(title)
    ));
    out.push_str(&format!(
        "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x1:.2}\" y2=\"{y0:.2}\" stroke=\"black\"/>\n\
         <line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x0:.2}\" y2=\"{y1:.2}\" stroke=\"black\"/>\n"
    ));

    let x_step = nice_step(frame.x_max - frame.x_min, 8);
    let mut tick = (frame.x_min / x_step).ceil() * x_step;
    while tick <= frame.x_max + 1e-9 {
        let px = frame.x(tick);
        out.push_str(&format!(
            "<line x1=\"{px:.2}\" y1=\"{y0:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n\
             <text x=\"{px:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" \
             text-anchor=\"middle\">{}</text>\n",
            y0 + 6.0,
            y0 + 20.0,
            format_tick(tick)
        ));
        tick += x_step;
    }
    let y_step = nice_step(frame.y_max - frame.y_min, 6);
    let mut tick = (frame.y_min / y_step).ceil() * y_step;
    while tick <= frame.y_max + 1e-9 {
        let py = frame.y(tick);
        out.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{x0:.2}\" y2=\"{py:.2}\" stroke=\"black\"/>\n\
             <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" \
             text-anchor=\"end\">{}</text>\n",
            x0 - 6.0,
            x0 - 9.0,
            py + 4.0,
            format_tick(tick)
        ));
        tick += y_step;
    }
    out.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"14\" \
         text-anchor=\"middle\">{}</text>\n",
        (x0 + x1) / 2.0,
        HEIGHT - 16.0,
        escape_xml(x_label)
    ));
    out.push_str(&format!(
        "<text x=\"20\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"14\" \
         text-anchor=\"middle\" transform=\"rotate(-90 20 {:.2})\">{}</text>\n",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape_xml(y_label)
    ));
}

/// Histogram with fixed-width bins aligned to multiples of `bin_width`.
pub fn histogram_svg(values: &[f64], bin_width: f64, title: &str, provenance: &str) -> String {
    assert!(bin_width > 0.0, "bin width must be positive");
    let mut out = chart_open(provenance);
    if values.is_empty() {
        out.push_str("</svg>\n");
        return out;
    }
    let lo_edge = (values.iter().cloned().fold(f64::MAX, f64::min) / bin_width).floor() * bin_width;
    let hi_value = values.iter().cloned().fold(f64::MIN, f64::max);
    let bin_count = (((hi_value - lo_edge) / bin_width).floor() as usize) + 1;
    let mut bins = vec![0usize; bin_count];
    for &v in values {
        let mut idx = ((v - lo_edge) / bin_width).floor() as usize;
        if idx >= bin_count {
            idx = bin_count - 1;
        }
        bins[idx] += 1;
    }
    let peak = *bins.iter().max().unwrap() as f64;
    let frame = Frame {
        x_min: lo_edge,
        x_max: lo_edge + bin_count as f64 * bin_width,
        y_min: 0.0,
        y_max: peak * 1.05,
    };
    axes(&mut out, &frame, title, "rating", "players");
    for (i, &count) in bins.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let x = frame.x(lo_edge + i as f64 * bin_width);
        let x_next = frame.x(lo_edge + (i + 1) as f64 * bin_width);
        let y = frame.y(count as f64);
        let base = frame.y(0.0);
        out.push_str(&format!(
            "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{:.2}\" height=\"{:.2}\" \
             fill=\"#4e79a7\" stroke=\"white\" stroke-width=\"0.5\"/>\n",
            x_next - x,
            base - y
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// One polyline per series; series are drawn and listed in input order.
pub fn trajectories_svg(series: &[(String, Vec<f64>)], title: &str, provenance: &str) -> String {
    let mut out = chart_open(provenance);
    let longest = series.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    if longest < 2 {
        out.push_str("</svg>\n");
        return out;
    }
    let mut y_min = f64::MAX;
    let mut y_max = f64::MIN;
    for (_, values) in series {
        for &v in values {
            y_min = y_min.min(v);
            y_max = y_max.max(v);
        }
    }
    if y_min == y_max {
        y_min -= 1.0;
        y_max += 1.0;
    }
    let pad = (y_max - y_min) * 0.05;
    let frame = Frame {
        x_min: 0.0,
        x_max: (longest - 1) as f64,
        y_min: y_min - pad,
        y_max: y_max + pad,
    };
    axes(&mut out, &frame, title, "games played", "rating");
    for (i, (name, values)) in series.iter().enumerate() {
        if values.len() < 2 {
            continue;
        }
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = values
            .iter()
            .enumerate()
            .map(|(game, &rating)| format!("{:.2},{:.2}", frame.x(game as f64), frame.y(rating)))
            .collect();
        out.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            points.join(" ")
        ));
        let legend_y = MARGIN_TOP + 18.0 * i as f64;
        out.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"12\" height=\"12\" fill=\"{color}\"/>\n\
             <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
            WIDTH - MARGIN_RIGHT + 14.0,
            legend_y,
            WIDTH - MARGIN_RIGHT + 30.0,
            legend_y + 10.0,
            escape_xml(name)
        ));
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Minimal well-formedness check: tags balance and comments are legal.
    pub(crate) fn assert_well_formed(svg: &str) {
        assert!(svg.starts_with("<?xml"));
        let mut stack: Vec<String> = Vec::new();
        let mut rest = svg;
        while let Some(start) = rest.find('<') {
            rest = &rest[start..];
            if let Some(comment) = rest.strip_prefix("<!--") {
                let end = comment.find("-->").expect("unterminated comment");
                assert!(!comment[..end].contains("--"), "'--' inside a comment");
                rest = &comment[end + 3..];
                continue;
            }
            if rest.starts_with("<?") {
                let end = rest.find("?>").expect("unterminated declaration");
                rest = &rest[end + 2..];
                continue;
            }
            let end = rest.find('>').expect("unterminated tag");
            let tag = &rest[1..end];
            if let Some(name) = tag.strip_prefix('/') {
                assert_eq!(stack.pop().as_deref(), Some(name), "mismatched close tag");
            } else if !tag.ends_with('/') {
                let name: String = tag.chars().take_while(|c| !c.is_whitespace()).collect();
                stack.push(name);
            }
            rest = &rest[end + 1..];
        }
        assert!(stack.is_empty(), "unclosed tags: {stack:?}");
    }

    #[test]
    fn histogram_is_well_formed_and_deterministic() {
        let values = vec![1000.0, 1012.0, 1025.0, 980.0, 1101.0, 995.5];
        let a = histogram_svg(&values, 25.0, "Ratings", "cmd=test a=1");
        let b = histogram_svg(&values, 25.0, "Ratings", "cmd=test a=1");
        assert_eq!(a, b);
        assert_well_formed(&a);
        assert!(a.contains("cmd=test"));
        assert!(a.contains("<rect"));
    }

    #[test]
    fn trajectories_escape_names_and_balance_tags() {
        let series = vec![
            ("a<b&c".to_string(), vec![1000.0, 1010.0, 1004.0]),
            ("other".to_string(), vec![1000.0, 990.0, 1002.0]),
        ];
        let svg = trajectories_svg(&series, "Trajectories", "cmd=report");
        assert_well_formed(&svg);
        assert!(svg.contains("a&lt;b&amp;c"));
        assert_eq!(svg.matches("<polyline").count(), 2);
    }

    #[test]
    fn comments_never_contain_double_hyphens() {
        let svg = histogram_svg(&[1.0], 1.0, "t", "simulate --games 5 --seed 1");
        assert_well_formed(&svg);
        assert!(!svg.contains("<!-- simulate --games"));
    }

    #[test]
    fn empty_inputs_yield_minimal_documents() {
        assert_well_formed(&histogram_svg(&[], 25.0, "t", "p"));
        assert_well_formed(&trajectories_svg(&[], "t", "p"));
    }
}
