//! Polygon presentation of the Bouw-Moller surface `M(m, n)`.

use crate::error::{Error, Result};
use crate::linalg::Vec2;
use serde::Serialize;
use std::f64::consts::PI;

/// Global geometric tolerance.
pub const EPS_GEO: f64 = 1e-9;

/// The pair `(m, n)`: `m` polygons, each with `2n` edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SurfaceParams {
    pub m: usize,
    pub n: usize,
}

impl SurfaceParams {
    /// Parameters valid for construction (`m >= 2`, `n >= 3`).
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m < 2 || n < 3 {
            return Err(Error::InvalidParams(format!(
                "need m >= 2 and n >= 3, got m={m}, n={n}"
            )));
        }
        Ok(Self { m, n })
    }

    /// Parameters valid for the renormalization pipeline (`m, n >= 3`).
    pub fn renormalizable(m: usize, n: usize) -> Result<Self> {
        if m < 3 || n < 3 {
            return Err(Error::InvalidParams(format!(
                "renormalization needs m, n >= 3, got m={m}, n={n}"
            )));
        }
        Ok(Self { m, n })
    }

    pub fn dual(&self) -> Self {
        Self {
            m: self.n,
            n: self.m,
        }
    }

    /// Size of the edge alphabet `{1..n(m-1)}`.
    pub fn label_count(&self) -> usize {
        self.n * (self.m - 1)
    }
}

/// `sin(k pi / m)`.
pub fn sine_len(k: usize, m: usize) -> f64 {
    if k == 0 || k == m {
        0.0
    } else {
        (k as f64 * PI / m as f64).sin()
    }
}

/// The polygon with edge vectors `v_i = len_i (cos i pi/n, sin i pi/n)`,
/// `len_i = a` for even `i` and `b` for odd `i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SemiRegularPolygon {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub vertices: Vec<Vec2>,
    pub edge_vectors: Vec<Vec2>,
}

impl SemiRegularPolygon {
    pub fn edge_len(&self, e: usize) -> f64 {
        if e.is_multiple_of(2) {
            self.a
        } else {
            self.b
        }
    }

    pub fn is_degenerate_edge(&self, e: usize) -> bool {
        self.edge_len(e) < EPS_GEO
    }

    /// Endpoints of edge `e`, in counter-clockwise order.
    pub fn edge(&self, e: usize) -> (Vec2, Vec2) {
        let k = self.vertices.len();
        (self.vertices[e % k], self.vertices[(e + 1) % k])
    }

    /// Shoelace area.
    pub fn area(&self) -> f64 {
        let k = self.vertices.len();
        (0..k)
            .map(|i| self.vertices[i].cross(self.vertices[(i + 1) % k]))
            .sum::<f64>()
            / 2.0
    }

    /// Vertex average; the centre of symmetry of the polygon.
    pub fn center(&self) -> Vec2 {
        let k = self.vertices.len() as f64;
        let s = self
            .vertices
            .iter()
            .fold(Vec2::default(), |acc, v| acc + *v);
        (1.0 / k) * s
    }

    /// Signed distance of `p` inside all edge lines; positive strictly inside.
    pub fn inner_margin(&self, p: Vec2) -> f64 {
        let mut best = f64::INFINITY;
        for e in 0..2 * self.n {
            if self.is_degenerate_edge(e) {
                continue;
            }
            let (s, t) = self.edge(e);
            let d = t - s;
            best = best.min(d.cross(p - s) / d.norm());
        }
        best
    }

    pub fn translated(&self, by: Vec2) -> Self {
        let mut out = self.clone();
        for v in &mut out.vertices {
            *v = *v + by;
        }
        out
    }

    pub fn min_x(&self) -> f64 {
        self.vertices.iter().fold(f64::INFINITY, |m, v| m.min(v.x))
    }

    pub fn max_x(&self) -> f64 {
        self.vertices
            .iter()
            .fold(f64::NEG_INFINITY, |m, v| m.max(v.x))
    }
}

/// Builds `P_n(a, b)` with its first vertex at the origin.
pub fn build_polygon(n: usize, a: f64, b: f64) -> Result<SemiRegularPolygon> {
    if n < 3 {
        return Err(Error::InvalidParams(format!("n must be >= 3, got {n}")));
    }
    if a < 0.0 || b < 0.0 || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParams(
            "side lengths must be finite and >= 0".into(),
        ));
    }
    if a < EPS_GEO && b < EPS_GEO {
        return Err(Error::NonPositiveShape);
    }
    let edge_vectors: Vec<Vec2> = (0..2 * n)
        .map(|i| {
            let len = if i % 2 == 0 { a } else { b };
            len * Vec2::from_angle(i as f64 * PI / n as f64)
        })
        .collect();
    let mut vertices = Vec::with_capacity(2 * n);
    let mut p = Vec2::default();
    for v in &edge_vectors {
        vertices.push(p);
        p = p + *v;
    }
    Ok(SemiRegularPolygon {
        n,
        a,
        b,
        vertices,
        edge_vectors,
    })
}

/// One non-degenerate polygon edge of the surface.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Side {
    pub poly: usize,
    pub edge: usize,
    pub label: u32,
}

/// The glued polygons `P(0), ..., P(m-1)` with labelled, paired sides.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolygonalSurface {
    pub params: SurfaceParams,
    pub polygons: Vec<SemiRegularPolygon>,
    pub sides: Vec<Side>,
    /// `pairing[s]` is the side glued to side `s`.
    pub pairing: Vec<usize>,
    #[serde(skip)]
    side_at: Vec<Vec<Option<usize>>>,
}

/// Parity of the edges of `P(k)` whose length is `sin((k+1) pi / m)`.
fn long_parity(k: usize, n: usize) -> usize {
    (1 + k * (n + 1)) % 2
}

/// Side lengths `(a, b)` of `P(k)`.
pub fn polygon_lengths(k: usize, m: usize, n: usize) -> (f64, f64) {
    let up = sine_len(k + 1, m);
    let down = sine_len(k, m);
    if long_parity(k, n) == 1 {
        (down, up)
    } else {
        (up, down)
    }
}

/// Edge order of the zig-zag walk through the edges of one parity.
pub fn zigzag_order(n: usize, parity: usize) -> Vec<usize> {
    let two_n = 2 * n;
    let horizontal = |e: usize| (two_n - e) % two_n;
    let diagonal = |e: usize| (two_n + 2 - e) % two_n;
    let mut order = vec![parity];
    let mut use_horizontal = parity == 1;
    loop {
        let cur = *order.last().unwrap();
        let next = if use_horizontal {
            horizontal(cur)
        } else {
            diagonal(cur)
        };
        if next == cur || order.contains(&next) {
            break;
        }
        order.push(next);
        use_horizontal = !use_horizontal;
    }
    order
}

/// Builds the labelled surface `M(m, n)`, polygons placed left to right.
pub fn build_surface(params: SurfaceParams) -> Result<PolygonalSurface> {
    let SurfaceParams { m, n } = params;
    let mut polygons = Vec::with_capacity(m);
    let mut cursor = 0.0;
    for k in 0..m {
        let (a, b) = polygon_lengths(k, m, n);
        let p = build_polygon(n, a, b)?;
        let shift = Vec2::new(cursor - p.min_x(), 0.0);
        let p = p.translated(shift);
        cursor = p.max_x() + 0.25;
        polygons.push(p);
    }
    let mut sides = Vec::new();
    let mut side_at = vec![vec![None; 2 * n]; m];
    for (k, p) in polygons.iter().enumerate() {
        for (e, slot) in side_at[k].iter_mut().enumerate() {
            if !p.is_degenerate_edge(e) {
                *slot = Some(sides.len());
                sides.push(Side {
                    poly: k,
                    edge: e,
                    label: 0,
                });
            }
        }
    }
    let mut pairing = vec![usize::MAX; sides.len()];
    for k in 0..m - 1 {
        let par = long_parity(k, n);
        for e in (par..2 * n).step_by(2) {
            let s = side_at[k][e].expect("long edge is non-degenerate");
            let t = side_at[k + 1][(e + n) % (2 * n)].expect("glued edge is non-degenerate");
            pairing[s] = t;
            pairing[t] = s;
        }
    }
    let surface = PolygonalSurface {
        params,
        polygons,
        sides,
        pairing,
        side_at,
    };
    Ok(label_edges(surface))
}

/// Assigns labels `1..n(m-1)` by the zig-zag rule, polygon by polygon.
pub fn label_edges(mut surface: PolygonalSurface) -> PolygonalSurface {
    let SurfaceParams { m, n } = surface.params;
    for s in &mut surface.sides {
        s.label = 0;
    }
    let mut next = 1u32;
    for k in 0..m - 1 {
        let order = zigzag_order(n, long_parity(k, n));
        for e in order {
            let s = surface.side_at[k][e].expect("zig-zag edge is non-degenerate");
            let t = surface.pairing[s];
            surface.sides[s].label = next;
            surface.sides[t].label = next;
            next += 1;
        }
    }
    surface
}

impl PolygonalSurface {
    pub fn side_at(&self, poly: usize, edge: usize) -> Option<usize> {
        self.side_at[poly][edge]
    }

    /// Label of edge `edge` of polygon `poly`, if the edge is non-degenerate.
    pub fn label(&self, poly: usize, edge: usize) -> Option<u32> {
        self.side_at[poly][edge].map(|s| self.sides[s].label)
    }

    /// Endpoints of a side, counter-clockwise within its polygon.
    pub fn side_segment(&self, s: usize) -> (Vec2, Vec2) {
        let side = &self.sides[s];
        self.polygons[side.poly].edge(side.edge)
    }

    /// Translation taking side `s` onto its partner.
    pub fn gluing_translation(&self, s: usize) -> Vec2 {
        let (a, _) = self.side_segment(s);
        let (_, b2) = self.side_segment(self.pairing[s]);
        b2 - a
    }

    pub fn area(&self) -> f64 {
        self.polygons.iter().map(|p| p.area()).sum()
    }

    /// The pair of polygon sides carrying `label`.
    pub fn sides_with_label(&self, label: u32) -> Vec<usize> {
        (0..self.sides.len())
            .filter(|&s| self.sides[s].label == label)
            .collect()
    }

    /// Label permutation induced by reflecting every polygon about its centre across the
    /// line at angle `k pi / (2n)`, when that reflection is a symmetry of the surface.
    ///
    /// Returns `perm` with `perm[l - 1]` the image of label `l`.
    pub fn reflection_permutation(&self, k: usize) -> Option<Vec<u32>> {
        let SurfaceParams { m, n } = self.params;
        let two_n = 2 * n;
        let flips = (k + n) % 2 == 1;
        let mut perm = vec![0u32; self.params.label_count()];
        for (s, side) in self.sides.iter().enumerate() {
            let e2 = (k + n + two_n - side.edge % two_n) % two_n;
            let p = &self.polygons[side.poly];
            let (a, b) = if flips { (p.b, p.a) } else { (p.a, p.b) };
            let k2 = [side.poly, m - 1 - side.poly].into_iter().find(|&j| {
                let q = &self.polygons[j];
                (q.a - a).abs() < EPS_GEO && (q.b - b).abs() < EPS_GEO
            })?;
            let t = self.side_at[k2][e2]?;
            let _ = s;
            perm[(side.label - 1) as usize] = self.sides[t].label;
        }
        let mut seen = vec![false; perm.len()];
        for &v in &perm {
            if v == 0 || seen[(v - 1) as usize] {
                return None;
            }
            seen[(v - 1) as usize] = true;
        }
        Some(perm)
    }
}

/// Area of `M(m, n)` with side lengths divided by the longest side.
fn normalized_area(m: usize, n: usize) -> Result<f64> {
    let s = build_surface(SurfaceParams::new(m, n)?)?;
    let longest = (1..m).map(|k| sine_len(k, m)).fold(0.0, f64::max);
    Ok(s.area() / (longest * longest))
}

/// Scale for `M(m, n)`, longest side normalized to 1, matching the area of `M(n, m)`
/// normalized the same way.
pub fn side_length_scale(m: usize, n: usize) -> Result<f64> {
    SurfaceParams::renormalizable(m, n)?;
    Ok((normalized_area(n, m)? / normalized_area(m, n)?).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_of_m43() {
        let p = build_polygon(3, 0.0, 1.0 / 2f64.sqrt()).unwrap();
        for e in [1, 3, 5] {
            let (s, t) = p.edge(e);
            assert!(((t - s).norm() - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        }
        assert!(p.is_degenerate_edge(0));
    }

    #[test]
    fn both_zero_rejected() {
        assert_eq!(build_polygon(4, 0.0, 0.0), Err(Error::NonPositiveShape));
    }

    #[test]
    fn zigzag_orders() {
        assert_eq!(zigzag_order(3, 1), vec![1, 5, 3]);
        assert_eq!(zigzag_order(3, 0), vec![0, 2, 4]);
        assert_eq!(zigzag_order(4, 1), vec![1, 7, 3, 5]);
        assert_eq!(zigzag_order(4, 0), vec![0, 2, 6, 4]);
    }

    #[test]
    fn m43_lengths() {
        let r = 1.0 / 2f64.sqrt();
        let expected = [(0.0, r), (r, 1.0), (1.0, r), (r, 0.0)];
        for (k, (a, b)) in expected.iter().enumerate() {
            let (x, y) = polygon_lengths(k, 4, 3);
            assert!((x - a).abs() < 1e-12 && (y - b).abs() < 1e-12, "P({k})");
        }
    }

    #[test]
    fn m34_first_polygon_labels() {
        let s = build_surface(SurfaceParams::new(3, 4).unwrap()).unwrap();
        assert_eq!(s.label(0, 1), Some(1));
        assert_eq!(s.label(0, 7), Some(2));
        assert_eq!(s.label(0, 3), Some(3));
        assert_eq!(s.label(0, 5), Some(4));
    }
}
