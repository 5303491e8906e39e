//! Output formats: canonical JSON, DOT graphs and SVG figures.

use crate::diagrams::{DerivationDiagram, TransitionDiagram};
use crate::error::{Error, Result};
use crate::farey::FareyMap;
use crate::hooper::{is_white, EdgeKind, EdgeLabel, HooperDiagram};
use crate::surface::PolygonalSurface;
use crate::tracer::CuttingWord;
use serde::Serialize;
use serde_json::{Number, Value};
use std::f64::consts::PI;
use std::fmt::Write;

/// Significant digits kept for every float in canonical output.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds `x` to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap_or(x)
}

fn canonicalize(v: Value) -> Value {
    match v {
        Value::Number(n) if !n.is_i64() && !n.is_u64() => n
            .as_f64()
            .and_then(|x| Number::from_f64(round_sig(x)))
            .map_or(Value::Null, Value::Number),
        Value::Array(a) => Value::Array(a.into_iter().map(canonicalize).collect()),
        Value::Object(o) => {
            Value::Object(o.into_iter().map(|(k, v)| (k, canonicalize(v))).collect())
        }
        other => other,
    }
}

/// Serializes with sorted keys, floats rounded to 12 significant digits, and a trailing newline.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)
        .map_err(|e| Error::InvalidParams(format!("serialization: {e}")))?;
    let mut s = serde_json::to_string_pretty(&canonicalize(v))
        .map_err(|e| Error::InvalidParams(format!("serialization: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn num(x: f64) -> String {
    let r = round_sig(x);
    let s = format!("{r}");
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

/// Hooper diagram as an undirected DOT graph laid out on its grid.
pub fn hooper_dot(d: &HooperDiagram) -> String {
    let mut s = format!(
        "graph hooper_{}_{} {{\n  node [shape=circle, style=filled];\n",
        d.m, d.n
    );
    for node in d.nodes(true).into_iter().chain(d.nodes(false)) {
        let fill = if is_white(node) { "white" } else { "black" };
        let font = if is_white(node) { "black" } else { "white" };
        let shape = if d.is_degenerate_node(node) {
            ", style=\"filled,dashed\""
        } else {
            ""
        };
        let _ = writeln!(
            s,
            "  \"{},{}\" [fillcolor={fill}, fontcolor={font}{shape}, pos=\"{},{}!\"];",
            node.0, node.1, node.0, node.1
        );
    }
    for e in &d.edges {
        let (color, label) = match e.label {
            Some(EdgeLabel::Red(l)) => ("red", l.to_string()),
            Some(EdgeLabel::Green(l)) => ("darkgreen", l.to_string()),
            None => ("gray", String::new()),
        };
        let style = if e.kind == EdgeKind::Interior {
            "solid"
        } else {
            "dashed"
        };
        let _ = writeln!(
            s,
            "  \"{},{}\" -- \"{},{}\" [color={color}, style={style}, label=\"{label}\"];",
            e.white.0, e.white.1, e.black.0, e.black.1
        );
    }
    s.push_str("}\n");
    s
}

/// Transition diagram as a directed DOT graph with vertices pinned to grid positions.
pub fn transition_dot(t: &TransitionDiagram) -> String {
    let mut s = format!(
        "digraph T{}_{}_{} {{\n  node [shape=circle];\n",
        t.sector, t.m, t.n
    );
    for (r, row) in t.grid.iter().enumerate() {
        for (c, l) in row.iter().enumerate() {
            let _ = writeln!(s, "  {l} [pos=\"{},{}!\"];", c, t.grid.len() - 1 - r);
        }
    }
    for (a, b) in t.arrows() {
        let _ = writeln!(s, "  {a} -> {b};");
    }
    s.push_str("}\n");
    s
}

/// Derivation diagram: `T_0` with arrows labelled by dual-surface labels.
pub fn derivation_dot(d: &DerivationDiagram) -> String {
    let t = &d.t0;
    let mut s = format!("digraph D0_{}_{} {{\n  node [shape=circle];\n", t.m, t.n);
    for (r, row) in t.grid.iter().enumerate() {
        for (c, l) in row.iter().enumerate() {
            let _ = writeln!(s, "  {l} [pos=\"{},{}!\"];", c, t.grid.len() - 1 - r);
        }
    }
    for (a, b, l) in d.labelled_arrows() {
        match l {
            Some(l) => {
                let _ = writeln!(s, "  {a} -> {b} [label=\"{l}\", color=darkgreen];");
            }
            None => {
                let _ = writeln!(s, "  {a} -> {b};");
            }
        }
    }
    s.push_str("}\n");
    s
}

struct Frame {
    min_x: f64,
    max_y: f64,
    scale: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn new(points: impl Iterator<Item = (f64, f64)>, target: f64) -> Self {
        let (mut x0, mut x1, mut y0, mut y1) = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for (x, y) in points {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        let span = (x1 - x0).max(y1 - y0).max(1e-9);
        let scale = target / span;
        let pad = 20.0;
        Self {
            min_x: x0 - pad / scale,
            max_y: y1 + pad / scale,
            scale,
            width: (x1 - x0) * scale + 2.0 * pad,
            height: (y1 - y0) * scale + 2.0 * pad,
        }
    }

    fn map(&self, x: f64, y: f64) -> (String, String) {
        (
            num((x - self.min_x) * self.scale),
            num((self.max_y - y) * self.scale),
        )
    }

    fn open(&self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
            num(self.width),
            num(self.height),
            num(self.width),
            num(self.height)
        )
    }
}

/// Polygon presentation with side labels and optional trajectory segments.
pub fn surface_svg(s: &PolygonalSurface, traces: &[CuttingWord]) -> String {
    let frame = Frame::new(
        s.polygons
            .iter()
            .flat_map(|p| p.vertices.iter().map(|v| (v.x, v.y))),
        600.0,
    );
    let mut out = frame.open();
    for p in &s.polygons {
        let pts: Vec<String> = p
            .vertices
            .iter()
            .map(|v| {
                let (x, y) = frame.map(v.x, v.y);
                format!("{x},{y}")
            })
            .collect();
        let _ = writeln!(
            out,
            "<polygon points=\"{}\" fill=\"#eef3fb\" stroke=\"black\"/>",
            pts.join(" ")
        );
    }
    for (k, side) in s.sides.iter().enumerate() {
        let (a, b) = s.side_segment(k);
        let (x, y) = frame.map((a.x + b.x) / 2.0, (a.y + b.y) / 2.0);
        let _ = writeln!(
            out,
            "<text x=\"{x}\" y=\"{y}\" font-size=\"14\" text-anchor=\"middle\" fill=\"firebrick\">{}</text>",
            side.label
        );
    }
    for w in traces {
        let mut from = (w.start_poly, w.start);
        for c in &w.crossings {
            if c.poly == from.0 {
                let (x1, y1) = frame.map(from.1.x, from.1.y);
                let (x2, y2) = frame.map(c.point.x, c.point.y);
                let _ = writeln!(
                    out,
                    "<line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" stroke=\"steelblue\" stroke-width=\"1\"/>"
                );
            }
            let shift = s.gluing_translation(c.side);
            let p = c.point + shift;
            let next = s.sides[s.pairing[c.side]].poly;
            from = (next, p);
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Graph of the Farey map on `[0, pi)` sampled at `samples` points per branch, one polyline
/// per branch.
pub fn farey_svg(map: &FareyMap, samples: usize) -> String {
    let frame = Frame::new([(0.0, 0.0), (PI, PI)].into_iter(), 600.0);
    let mut out = frame.open();
    let (x0, y0) = frame.map(0.0, 0.0);
    let (x1, y1) = frame.map(PI, PI);
    let _ = writeln!(
        out,
        "<rect x=\"{x0}\" y=\"{y1}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
        num(frame.width - 40.0),
        num(frame.height - 40.0)
    );
    let _ = writeln!(
        out,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y1}\" stroke=\"lightgray\"/>"
    );
    let samples = samples.max(2);
    for br in &map.branches {
        let (lo, hi) = (br.domain.0.min(br.domain.1), br.domain.0.max(br.domain.1));
        let mut pts = Vec::with_capacity(samples);
        for k in 0..samples {
            let t = lo + (hi - lo) * (k as f64 + 0.5) / samples as f64;
            if let Ok((y, _, _)) = map.apply(t) {
                let (x, y) = frame.map(t, y);
                pts.push(format!("{x},{y}"));
            }
        }
        let _ = writeln!(
            out,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"navy\"><title>({}, {})</title></polyline>",
            pts.join(" "),
            br.a,
            br.b
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round_sig(123_456.789_012_345_6), 123_456.789_012);
        assert_eq!(round_sig(0.0), 0.0);
        assert_eq!(round_sig(1.0 / 3.0), 0.333333333333);
    }

    #[test]
    fn canonical_json_sorts_keys() {
        let v = serde_json::json!({"b": 1, "a": [0.1, 2.0 / 3.0]});
        let s = canonical_json(&v).unwrap();
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
        assert!(s.contains("0.666666666667"));
    }

    #[test]
    fn transition_dot_lists_all_arrows() {
        let t = crate::diagrams::build_t0(4, 3);
        let dot = transition_dot(&t);
        assert_eq!(dot.matches("->").count(), t.arrows().len());
    }
}
