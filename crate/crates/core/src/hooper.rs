//! Hooper diagrams, augmented diagrams, cylinder widths and moduli, hats, and the orthogonal
//! presentation.

use crate::diagrams::{build_t0, dual_snake_label};
use crate::error::{Error, Result};
use crate::surface::SurfaceParams;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Grid node `(i, j)`.
pub type Node = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EdgeKind {
    Interior,
    /// The white endpoint is a degenerate node.
    ADegenerate,
    /// The black endpoint is a degenerate node.
    BDegenerate,
    CompletelyDegenerate,
}

/// Side label carried by an edge: `Red` from `M(m, n)`, `Green` from `M(n, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EdgeLabel {
    Red(u32),
    Green(u32),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HooperEdge {
    pub white: Node,
    pub black: Node,
    pub kind: EdgeKind,
    pub label: Option<EdgeLabel>,
}

/// Hooper diagram of `M(m, n)`, plain or augmented.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HooperDiagram {
    pub m: usize,
    pub n: usize,
    pub augmented: bool,
    pub edges: Vec<HooperEdge>,
    /// `east[e]`: next edge around the white endpoint of `e`.
    pub east: Vec<usize>,
    /// `north[e]`: next edge around the black endpoint of `e`.
    pub north: Vec<usize>,
    #[serde(skip)]
    index: BTreeMap<(Node, Node), usize>,
}

pub fn is_white((i, j): Node) -> bool {
    (i + j) % 2 == 0
}

fn ccw_neighbours((i, j): Node) -> [Option<Node>; 4] {
    [
        Some((i + 1, j)),
        Some((i, j + 1)),
        i.checked_sub(1).map(|x| (x, j)),
        j.checked_sub(1).map(|y| (i, y)),
    ]
}

fn build(m: usize, n: usize, augmented: bool) -> Result<HooperDiagram> {
    SurfaceParams::renormalizable(m, n)?;
    let (lo_i, hi_i, lo_j, hi_j) = if augmented {
        (0, m, 0, n)
    } else {
        (1, m - 1, 1, n - 1)
    };
    let inside = |(i, j): Node| i >= lo_i && i <= hi_i && j >= lo_j && j <= hi_j;
    let degenerate = |(i, j): Node| i == 0 || i == m || j == 0 || j == n;
    let mut edges = Vec::new();
    let mut index = BTreeMap::new();
    for i in lo_i..=hi_i {
        for j in lo_j..=hi_j {
            for other in [(i + 1, j), (i, j + 1)] {
                if !inside(other) {
                    continue;
                }
                let (white, black) = if is_white((i, j)) {
                    ((i, j), other)
                } else {
                    (other, (i, j))
                };
                let kind = match (degenerate(white), degenerate(black)) {
                    (false, false) => EdgeKind::Interior,
                    (true, false) => EdgeKind::ADegenerate,
                    (false, true) => EdgeKind::BDegenerate,
                    (true, true) => EdgeKind::CompletelyDegenerate,
                };
                index.insert((white, black), edges.len());
                edges.push(HooperEdge {
                    white,
                    black,
                    kind,
                    label: None,
                });
            }
        }
    }
    let cycle_next = |centre: Node, from: Node, ccw: bool| -> usize {
        let mut ring: Vec<Node> = ccw_neighbours(centre)
            .into_iter()
            .flatten()
            .filter(|&nb| inside(nb))
            .collect();
        if !ccw {
            ring.reverse();
        }
        let k = ring
            .iter()
            .position(|&x| x == from)
            .expect("edge endpoint is a neighbour");
        let to = ring[(k + 1) % ring.len()];
        let key = if is_white(centre) {
            (centre, to)
        } else {
            (to, centre)
        };
        index[&key]
    };
    let mut east = Vec::with_capacity(edges.len());
    let mut north = Vec::with_capacity(edges.len());
    for e in &edges {
        east.push(cycle_next(e.white, e.black, e.white.0 % 2 == 1));
        north.push(cycle_next(e.black, e.white, e.black.1 % 2 == 0));
    }
    Ok(HooperDiagram {
        m,
        n,
        augmented,
        edges,
        east,
        north,
        index,
    })
}

/// Hooper diagram on the grid `1..m-1 x 1..n-1`.
pub fn build_hooper(m: usize, n: usize) -> Result<HooperDiagram> {
    build(m, n, false)
}

/// Augmented Hooper diagram on `0..m x 0..n` with the labels of both surfaces.
pub fn build_augmented(m: usize, n: usize) -> Result<HooperDiagram> {
    let mut d = build(m, n, true)?;
    label_hooper(&mut d);
    Ok(d)
}

/// Edges `(i, j)-(i, j+1)` with `1 <= i <= m-1` carry the rows of `T_0`; edges
/// `(i, j)-(i+1, j)` with `1 <= j <= n-1` carry the dual labels snaking across `j`.
pub fn label_hooper(d: &mut HooperDiagram) {
    let (m, n) = (d.m, d.n);
    let t0 = build_t0(m, n);
    for e in &mut d.edges {
        let (a, b) = if e.white < e.black {
            (e.white, e.black)
        } else {
            (e.black, e.white)
        };
        e.label = if a.0 == b.0 && (1..m).contains(&a.0) {
            Some(EdgeLabel::Red(t0.label_at((a.0 - 1, a.1))))
        } else if a.1 == b.1 && (1..n).contains(&a.1) {
            Some(EdgeLabel::Green(dual_snake_label(m, a.1, a.0)))
        } else {
            None
        };
    }
}

impl HooperDiagram {
    pub fn edge_between(&self, a: Node, b: Node) -> Option<usize> {
        let key = if is_white(a) { (a, b) } else { (b, a) };
        self.index.get(&key).copied()
    }

    pub fn is_degenerate_node(&self, (i, j): Node) -> bool {
        i == 0 || i == self.m || j == 0 || j == self.n
    }

    /// Interior nodes of one colour.
    pub fn nodes(&self, white: bool) -> Vec<Node> {
        let mut v = Vec::new();
        for i in 1..self.m {
            for j in 1..self.n {
                if is_white((i, j)) == white {
                    v.push((i, j));
                }
            }
        }
        v
    }

    pub fn orbit_count(perm: &[usize]) -> usize {
        let mut seen = vec![false; perm.len()];
        let mut count = 0;
        for s in 0..perm.len() {
            if seen[s] {
                continue;
            }
            count += 1;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = perm[x];
            }
        }
        count
    }

    /// Edges carrying a given label.
    pub fn edge_with_label(&self, l: EdgeLabel) -> Option<usize> {
        self.edges.iter().position(|e| e.label == Some(l))
    }
}

/// `w_{i,j} = sin(i pi/m) sin(j pi/n)` on the grid `0..m x 0..n` (zero on the boundary).
pub fn width(m: usize, n: usize, (i, j): Node) -> f64 {
    let s = |k: usize, q: usize| {
        if k == 0 || k == q {
            0.0
        } else {
            (k as f64 * PI / q as f64).sin()
        }
    };
    s(i, m) * s(j, n)
}

/// Widths of all interior cylinders.
pub fn widths(m: usize, n: usize) -> BTreeMap<Node, f64> {
    let mut out = BTreeMap::new();
    for i in 1..m {
        for j in 1..n {
            out.insert((i, j), width(m, n, (i, j)));
        }
    }
    out
}

/// `height(v) = sum over cylinders u of #(v meets u) width(u)`, with intersections counted
/// from the edges of the diagram.
pub fn heights(d: &HooperDiagram, w: &BTreeMap<Node, f64>) -> BTreeMap<Node, f64> {
    let mut out: BTreeMap<Node, f64> = w.keys().map(|&k| (k, 0.0)).collect();
    for e in &d.edges {
        if e.kind != EdgeKind::Interior {
            continue;
        }
        *out.get_mut(&e.white).expect("interior") += w[&e.black];
        *out.get_mut(&e.black).expect("interior") += w[&e.white];
    }
    out
}

/// Modulus (circumference over height) of every cylinder of both directions.
///
/// A cylinder of width `w` crosses the transverse family at angle `pi/n`, so its circumference
/// is `height / sin(pi/n)`.
pub fn moduli(m: usize, n: usize) -> Result<BTreeMap<Node, f64>> {
    let d = build_hooper(m, n)?;
    let w = widths(m, n);
    let h = heights(&d, &w);
    let s = (PI / n as f64).sin();
    Ok(w.iter().map(|(&k, &wk)| (k, h[&k] / (wk * s))).collect())
}

/// `2 cot(pi/n) + 2 cos(pi/m) / sin(pi/n)`.
pub fn modulus_formula(m: usize, n: usize) -> f64 {
    let (a, b) = (PI / m as f64, PI / n as f64);
    2.0 / b.tan() + 2.0 * a.cos() / b.sin()
}

/// A stair found around a middle edge.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hat {
    pub middle: usize,
    /// `1`: white corner turning counter-clockwise, `2`: black counter-clockwise,
    /// `3`: black clockwise, `4`: white clockwise.
    pub case: u8,
    /// Edges `a, b, c, d, e, f` of the stair.
    pub stair: [usize; 6],
}

/// Classifies every edge whose endpoints differ in `i` as the middle edge of a hat.
///
/// The corner is the endpoint with smaller `i`.
pub fn enumerate_hats(d: &HooperDiagram) -> Result<Vec<Hat>> {
    let mut hats = Vec::new();
    for (a, e) in d.edges.iter().enumerate() {
        if e.white.1 != e.black.1 || e.kind == EdgeKind::CompletelyDegenerate {
            continue;
        }
        let b = d.east[a];
        let c = d.east[b];
        let dd = d.north[a];
        let f = d.north[dd];
        let top = d.north[b];
        if top != d.east[dd] {
            return Err(Error::MalformedDiagram(format!(
                "edge {a} is not the middle of a hat"
            )));
        }
        let corner = if e.white.0 < e.black.0 {
            e.white
        } else {
            e.black
        };
        let white = is_white(corner);
        let ccw = if white {
            corner.0 % 2 == 1
        } else {
            corner.1 % 2 == 0
        };
        let case = match (white, ccw) {
            (true, true) => 1,
            (false, true) => 2,
            (false, false) => 3,
            (true, false) => 4,
        };
        hats.push(Hat {
            middle: a,
            case,
            stair: [a, b, c, dd, top, f],
        });
    }
    Ok(hats)
}

/// A basic rectangle of the orthogonal presentation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rect {
    pub edge: usize,
    pub width: f64,
    pub height: f64,
    pub label: EdgeLabel,
    /// Rectangle glued on the right.
    pub east: usize,
    /// Rectangle glued on top.
    pub up: usize,
}

/// Union of basic rectangles, one per edge of the augmented diagram that is not completely
/// degenerate, drawn after a vertical flip: the rectangle above `e` is `north^-1(e)`, red labels
/// sit on negative diagonals and green labels on positive ones. Sector 0 of `M(m, n)` is then the
/// open first quadrant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthogonalPresentation {
    pub m: usize,
    pub n: usize,
    pub rects: Vec<Rect>,
}

pub fn orthogonal_presentation(m: usize, n: usize) -> Result<OrthogonalPresentation> {
    let d = build_augmented(m, n)?;
    let mut rect_of = vec![usize::MAX; d.edges.len()];
    let mut k = 0;
    for (e, edge) in d.edges.iter().enumerate() {
        if edge.kind != EdgeKind::CompletelyDegenerate {
            rect_of[e] = k;
            k += 1;
        }
    }
    let mut south = vec![0; d.edges.len()];
    for (e, &t) in d.north.iter().enumerate() {
        south[t] = e;
    }
    let mut rects = Vec::with_capacity(k);
    for (e, edge) in d.edges.iter().enumerate() {
        if edge.kind == EdgeKind::CompletelyDegenerate {
            continue;
        }
        let label = edge
            .label
            .ok_or_else(|| Error::MalformedDiagram(format!("edge {e} has no label")))?;
        rects.push(Rect {
            edge: e,
            width: width(m, n, edge.black),
            height: width(m, n, edge.white),
            label,
            east: rect_of[d.east[e]],
            up: rect_of[south[e]],
        });
    }
    Ok(OrthogonalPresentation { m, n, rects })
}

/// Direction in the orthogonal presentation of a direction `theta` in `(0, pi/n)`.
pub fn orthogonal_direction(n: usize, theta: f64) -> (f64, f64) {
    ((PI / n as f64 - theta).sin(), theta.sin())
}

impl OrthogonalPresentation {
    pub fn rect_with_label(&self, l: EdgeLabel) -> Option<usize> {
        self.rects.iter().position(|r| r.label == l)
    }

    /// Flows from `(x, y)` in rectangle `start` along `(a, b)`, `a, b > 0`, and returns the
    /// labels of the diagonals crossed, in order.
    pub fn trace(
        &self,
        start: usize,
        (x0, y0): (f64, f64),
        (a, b): (f64, f64),
        max_labels: usize,
    ) -> Result<Vec<EdgeLabel>> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::InvalidParams(
                "direction must lie in the open first quadrant".into(),
            ));
        }
        let r0 = self
            .rects
            .get(start)
            .ok_or(Error::StartOutside { poly: start })?;
        if !(x0 > 0.0 && x0 < r0.width && y0 > 0.0 && y0 < r0.height) {
            return Err(Error::StartOutside { poly: start });
        }
        let mut out = Vec::with_capacity(max_labels);
        let (mut r, mut x, mut y) = (start, x0, y0);
        let mut guard = 0usize;
        while out.len() < max_labels {
            guard += 1;
            if guard > 64 * (max_labels + 1) * self.rects.len() {
                return Err(Error::MalformedDiagram(
                    "flow does not cross any diagonal".into(),
                ));
            }
            let rect = &self.rects[r];
            let (w, h) = (rect.width, rect.height);
            if w == 0.0 {
                out.push(rect.label);
                r = rect.east;
                x = 0.0;
                continue;
            }
            if h == 0.0 {
                out.push(rect.label);
                r = rect.up;
                y = 0.0;
                continue;
            }
            let (tr, tt) = ((w - x) / a, (h - y) / b);
            if (tr - tt).abs() < 1e-13 {
                return Err(Error::VertexHit {
                    crossings: out.len(),
                });
            }
            let (ex, ey, to_east) = if tr < tt {
                (w, y + b * tr, true)
            } else {
                (x + a * tt, h, false)
            };
            let g = |px: f64, py: f64| match rect.label {
                EdgeLabel::Red(_) => px / w + py / h - 1.0,
                EdgeLabel::Green(_) => py / h - px / w,
            };
            let (g0, g1) = (g(x, y), g(ex, ey));
            if g0 * g1 < 0.0 || (g0 == 0.0) != (g1 == 0.0) {
                out.push(rect.label);
            }
            if to_east {
                r = rect.east;
                x = 0.0;
                y = ey;
            } else {
                r = rect.up;
                x = ex;
                y = 0.0;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_diagram_34() {
        let d = build_hooper(3, 4).unwrap();
        assert_eq!(d.nodes(true).len(), 3);
        assert_eq!(d.nodes(false).len(), 3);
        assert!(d
            .edges
            .iter()
            .all(|e| is_white(e.white) && !is_white(e.black)));
        assert_eq!(HooperDiagram::orbit_count(&d.east), 3);
        assert_eq!(HooperDiagram::orbit_count(&d.north), 3);
        let w = widths(3, 4);
        let h = heights(&d, &w);
        // the middle white cylinder meets all three black ones
        let mid = (2, 2);
        assert_eq!(d.edges.iter().filter(|e| e.white == mid).count(), 3);
        assert!(h[&mid] > 0.0 && w[&mid] > 0.0);
    }

    #[test]
    fn width_example() {
        assert!((width(4, 3, (1, 1)) - 0.612_372_435_695_794_5).abs() < 1e-12);
        assert!((width(4, 3, (3, 2)) - width(4, 3, (1, 1))).abs() < 1e-15);
    }

    #[test]
    fn permutations_fix_cylinders() {
        let d = build_augmented(4, 3).unwrap();
        for e in 0..d.edges.len() {
            assert_eq!(d.edges[d.east[e]].white, d.edges[e].white);
            assert_eq!(d.edges[d.north[e]].black, d.edges[e].black);
        }
    }

    #[test]
    fn labels_cover_both_alphabets() {
        let d = build_augmented(4, 3).unwrap();
        let mut red: Vec<u32> = d
            .edges
            .iter()
            .filter_map(|e| match e.label {
                Some(EdgeLabel::Red(l)) => Some(l),
                _ => None,
            })
            .collect();
        let mut green: Vec<u32> = d
            .edges
            .iter()
            .filter_map(|e| match e.label {
                Some(EdgeLabel::Green(l)) => Some(l),
                _ => None,
            })
            .collect();
        red.sort_unstable();
        green.sort_unstable();
        assert_eq!(red, (1..=9).collect::<Vec<_>>());
        assert_eq!(green, (1..=8).collect::<Vec<_>>());
    }
}
