//! Straight-line flow on the polygon presentation and its cutting sequences.

use crate::diagrams::build_ti;
use crate::error::{Error, Result};
use crate::linalg::Vec2;
use crate::surface::{PolygonalSurface, SurfaceParams, EPS_GEO};
use serde::Serialize;
use std::f64::consts::PI;

/// One side crossing of a traced trajectory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Crossing {
    /// Side index on the surface that was crossed (as seen from the polygon left).
    pub side: usize,
    pub label: u32,
    /// Polygon left by the crossing.
    pub poly: usize,
    pub point: Vec2,
    /// Flow time at the crossing.
    pub t: f64,
}

/// A finite window of a cutting sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CuttingWord {
    pub labels: Vec<u32>,
    pub crossings: Vec<Crossing>,
    pub theta: f64,
    pub start_poly: usize,
    pub start: Vec2,
}

/// Traces the trajectory from `start` inside polygon `poly` in direction `theta` and records
/// the first `max_crossings` side crossings.
pub fn trace(
    surface: &PolygonalSurface,
    poly: usize,
    start: Vec2,
    theta: f64,
    max_crossings: usize,
) -> Result<CuttingWord> {
    if poly >= surface.polygons.len() || surface.polygons[poly].inner_margin(start) <= EPS_GEO {
        return Err(Error::StartOutside { poly });
    }
    if !theta.is_finite() || max_crossings == 0 {
        return Err(Error::InvalidParams(
            "direction must be finite and max_crossings >= 1".into(),
        ));
    }
    let dir = Vec2::from_angle(theta);
    let mut word = CuttingWord {
        labels: Vec::with_capacity(max_crossings),
        crossings: Vec::with_capacity(max_crossings),
        theta,
        start_poly: poly,
        start,
    };
    let mut cur_poly = poly;
    let mut p = start;
    let mut entry: Option<usize> = None;
    let mut clock = 0.0;
    while word.labels.len() < max_crossings {
        let (side, t, u) = next_exit(surface, cur_poly, p, dir, entry).ok_or(Error::VertexHit {
            crossings: word.labels.len(),
        })?;
        let (a, b) = surface.side_segment(side);
        let len = (b - a).norm();
        if u * len < EPS_GEO || (1.0 - u) * len < EPS_GEO {
            return Err(Error::VertexHit {
                crossings: word.labels.len(),
            });
        }
        let hit = a + u * (b - a);
        clock += t;
        word.labels.push(surface.sides[side].label);
        word.crossings.push(Crossing {
            side,
            label: surface.sides[side].label,
            poly: cur_poly,
            point: hit,
            t: clock,
        });
        let partner = surface.pairing[side];
        let (a2, b2) = surface.side_segment(partner);
        p = b2 + u * (a2 - b2);
        cur_poly = surface.sides[partner].poly;
        entry = Some(partner);
    }
    Ok(word)
}

/// First side hit by the ray `p + t dir`, skipping the entry side.
fn next_exit(
    surface: &PolygonalSurface,
    poly: usize,
    p: Vec2,
    dir: Vec2,
    entry: Option<usize>,
) -> Option<(usize, f64, f64)> {
    let n2 = 2 * surface.params.n;
    let mut best: Option<(usize, f64, f64)> = None;
    for e in 0..n2 {
        let Some(side) = surface.side_at(poly, e) else {
            continue;
        };
        if Some(side) == entry {
            continue;
        }
        let (a, b) = surface.side_segment(side);
        let v = b - a;
        let denom = dir.cross(v);
        if denom.abs() < 1e-15 {
            continue;
        }
        let w = a - p;
        let t = w.cross(v) / denom;
        let u = w.cross(dir) / denom;
        if t <= 1e-13 || !(-1e-9..=1.0 + 1e-9).contains(&u) {
            continue;
        }
        if best.is_none_or(|(_, bt, _)| t < bt) {
            best = Some((side, t, u.clamp(0.0, 1.0)));
        }
    }
    best
}

/// Sector index `i` with `theta` in `[i pi/n, (i+1) pi/n]`, and whether `theta` sits on a
/// sector boundary (in which case the smaller index is returned).
pub fn sector_of(theta: f64, n: usize) -> (usize, bool) {
    let width = PI / n as f64;
    let t = theta.rem_euclid(2.0 * PI);
    let x = t / width;
    let r = x.round();
    if (x - r).abs() < 1e-12 {
        let k = r as usize % (2 * n);
        return (if k == 0 { 0 } else { k - 1 }, true);
    }
    ((x.floor() as usize).min(2 * n - 1), false)
}

/// A random interior point of polygon `poly`, drawn by rejection from its bounding box.
pub fn random_interior_point<R: rand::Rng>(
    surface: &PolygonalSurface,
    poly: usize,
    rng: &mut R,
) -> Vec2 {
    let p = &surface.polygons[poly];
    let (mut lo, mut hi) = (
        Vec2::new(f64::INFINITY, f64::INFINITY),
        Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    );
    for v in &p.vertices {
        lo = Vec2::new(lo.x.min(v.x), lo.y.min(v.y));
        hi = Vec2::new(hi.x.max(v.x), hi.y.max(v.y));
    }
    loop {
        let q = Vec2::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if p.inner_margin(q) > 1e-6 {
            return q;
        }
    }
}

/// Traces from a random start, retrying with fresh starts on vertex hits (at most 10 times).
pub fn trace_random<R: rand::Rng>(
    surface: &PolygonalSurface,
    theta: f64,
    max_crossings: usize,
    rng: &mut R,
) -> Result<CuttingWord> {
    let mut last = Error::VertexHit { crossings: 0 };
    for _ in 0..=10 {
        let poly = rng.gen_range(0..surface.polygons.len());
        let start = random_interior_point(surface, poly, rng);
        match trace(surface, poly, start, theta, max_crossings) {
            Ok(w) => return Ok(w),
            Err(e @ Error::VertexHit { .. }) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// [`trace_random`] driven by a ChaCha8 generator seeded with `seed`.
pub fn trace_seeded(
    surface: &PolygonalSurface,
    theta: f64,
    max_crossings: usize,
    seed: u64,
) -> Result<CuttingWord> {
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    trace_random(surface, theta, max_crossings, &mut rng)
}

/// A cylinder of the periodic direction `theta`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cylinder {
    pub circumference: f64,
    pub height: f64,
    /// Circumference over height.
    pub modulus: f64,
    /// Labels crossed by the core curve, one period.
    pub core_word: Vec<u32>,
    /// A point on the core curve.
    pub start_poly: usize,
    pub start: Vec2,
}

/// Cylinder decomposition in a periodic direction, found by closing up the midline of every
/// strip between consecutive vertex levels.
pub fn cylinders(surface: &PolygonalSurface, theta: f64) -> Result<Vec<Cylinder>> {
    let (c, s) = (theta.cos(), theta.sin());
    let level = |v: Vec2| -s * v.x + c * v.y;
    let levels: Vec<Vec<f64>> = surface
        .polygons
        .iter()
        .map(|p| {
            let mut l: Vec<f64> = p.vertices.iter().map(|&v| level(v)).collect();
            l.sort_by(f64::total_cmp);
            l.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
            l
        })
        .collect();
    let strip_of = |poly: usize, y: f64| levels[poly].iter().filter(|&&l| l < y).count();
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    let max_crossings = 64 * surface.sides.len();
    for (poly, lv) in levels.iter().enumerate() {
        for w in lv.windows(2) {
            let y = 0.5 * (w[0] + w[1]);
            if seen.contains(&(poly, strip_of(poly, y))) {
                continue;
            }
            let start = chord_midpoint(surface, poly, theta, y)?;
            let word = trace(surface, poly, start, theta, max_crossings)?;
            let first = &word.crossings[0];
            let period = word.crossings[1..]
                .iter()
                .position(|x| x.side == first.side && (x.point - first.point).norm() < 1e-8)
                .map(|k| k + 1)
                .ok_or_else(|| {
                    Error::InvalidParams(format!("direction {theta} is not periodic"))
                })?;
            let (mut up, mut down) = (f64::INFINITY, f64::INFINITY);
            for x in &word.crossings[..period] {
                let yy = level(x.point);
                seen.insert((x.poly, strip_of(x.poly, yy)));
                for &l in &levels[x.poly] {
                    if l > yy {
                        up = up.min(l - yy);
                    } else {
                        down = down.min(yy - l);
                    }
                }
            }
            let circumference = word.crossings[period].t - first.t;
            let height = up + down;
            out.push(Cylinder {
                circumference,
                height,
                modulus: circumference / height,
                core_word: word.labels[1..=period].to_vec(),
                start_poly: poly,
                start,
            });
        }
    }
    Ok(out)
}

/// Midpoint of the chord of polygon `poly` in direction `theta` at transverse level `y`.
fn chord_midpoint(surface: &PolygonalSurface, poly: usize, theta: f64, y: f64) -> Result<Vec2> {
    let dir = Vec2::from_angle(theta);
    let normal = Vec2::new(-dir.y, dir.x);
    let base = y * normal;
    let p = &surface.polygons[poly];
    let mut ts = Vec::new();
    for e in 0..p.vertices.len() {
        let (a, b) = p.edge(e);
        let (ya, yb) = (normal.dot(a), normal.dot(b));
        if (ya - y) * (yb - y) < 0.0 {
            let q = a + ((y - ya) / (yb - ya)) * (b - a);
            ts.push(dir.dot(q - base));
        }
    }
    if ts.len() < 2 {
        return Err(Error::StartOutside { poly });
    }
    let (lo, hi) = ts
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &t| {
            (l.min(t), h.max(t))
        });
    Ok(base + (0.5 * (lo + hi)) * dir)
}

/// Core curve of a cylinder in a direction `k pi/n` whose cutting sequence is `(n1 n2)^reps`.
///
/// Errors with `NotCoAdjacent` unless `n1, n2` are neighbours in a row of some `T_i`.
pub fn realize_periodic(
    surface: &PolygonalSurface,
    n1: u32,
    n2: u32,
    reps: usize,
) -> Result<CuttingWord> {
    let SurfaceParams { m, n } = surface.params;
    let adjacent = (0..n).any(|i| {
        build_ti(m, n, i)
            .row_pairs()
            .iter()
            .any(|&(a, b)| (a, b) == (n1, n2) || (a, b) == (n2, n1))
    });
    if !adjacent || n1 == n2 {
        return Err(Error::NotCoAdjacent(n1, n2));
    }
    for k in 0..n {
        let theta = k as f64 * PI / n as f64;
        for cyl in cylinders(surface, theta)? {
            let mut core = cyl.core_word.clone();
            core.sort_unstable();
            if core != [n1.min(n2), n1.max(n2)] {
                continue;
            }
            let mut poly = cyl.start_poly;
            let mut start = cyl.start;
            let probe = trace(surface, poly, start, theta, 2)?;
            if probe.labels[0] != n1 {
                let c = &probe.crossings[0];
                let entry = c.point + surface.gluing_translation(c.side);
                poly = surface.sides[surface.pairing[c.side]].poly;
                start = entry + 0.5 * (probe.crossings[1].point - entry);
            }
            return trace(surface, poly, start, theta, 2 * reps.max(1));
        }
    }
    Err(Error::NotCoAdjacent(n1, n2))
}

/// Searches for a trajectory in direction `theta` whose cutting sequence starts with `word`.
///
/// A transversal segment along a side labelled `word[0]` is flowed forward and clipped at the
/// vertex rays so that every point of it follows the word; the midpoint is then traced.
pub fn realize_word(
    surface: &PolygonalSurface,
    theta: f64,
    word: &[u32],
) -> Result<Option<CuttingWord>> {
    let Some(&first) = word.first() else {
        return Err(Error::InvalidParams("empty word".into()));
    };
    let dir = Vec2::from_angle(theta);
    for side in surface.sides_with_label(first) {
        let (a, b) = surface.side_segment(side);
        let edge = b - a;
        if edge.cross(dir) >= 0.0 {
            continue;
        }
        let Some((u_lo, u_hi)) = follow_segment(surface, side, dir, &word[1..]) else {
            continue;
        };
        let u = 0.5 * (u_lo + u_hi);
        let poly = surface.sides[side].poly;
        let back = 4.0 * EPS_GEO * edge.norm() / edge.cross(dir).abs();
        let start = a + u * edge - back * dir;
        if let Ok(w) = trace(surface, poly, start, theta, word.len()) {
            if w.labels == word {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// Subinterval of side `side` (by edge parameter) whose trajectories, after leaving through
/// `side`, cross the sides labelled `rest` in order.
fn follow_segment(
    surface: &PolygonalSurface,
    side: usize,
    dir: Vec2,
    rest: &[u32],
) -> Option<(f64, f64)> {
    let glue = |s: usize, u: f64| {
        let partner = surface.pairing[s];
        let (a2, b2) = surface.side_segment(partner);
        (b2 + u * (a2 - b2), partner)
    };
    let (mut u_lo, mut u_hi) = (0.0, 1.0);
    let (mut x0, entry) = glue(side, 0.0);
    let (mut x1, _) = glue(side, 1.0);
    let mut entry = entry;
    for &target in rest {
        let poly = surface.sides[entry].poly;
        let span = x1 - x0;
        let denom = span.cross(dir);
        if denom.abs() < 1e-300 {
            return None;
        }
        let mut cuts = vec![0.0, 1.0];
        for &v in &surface.polygons[poly].vertices {
            let s = (v - x0).cross(dir) / denom;
            if s > 0.0 && s < 1.0 {
                cuts.push(s);
            }
        }
        cuts.sort_by(f64::total_cmp);
        let mut keep: Option<(f64, f64, usize)> = None;
        for w in cuts.windows(2) {
            if w[1] - w[0] <= 0.0 {
                continue;
            }
            let mid = x0 + (0.5 * (w[0] + w[1])) * span;
            let Some((exit, _, _)) = next_exit(surface, poly, mid, dir, Some(entry)) else {
                continue;
            };
            if surface.sides[exit].label != target {
                continue;
            }
            keep = match keep {
                None => Some((w[0], w[1], exit)),
                Some((lo, _, e)) if e == exit => Some((lo, w[1], e)),
                other => other,
            };
        }
        let (s0, s1, exit) = keep?;
        let (p0, p1) = (x0 + s0 * span, x0 + s1 * span);
        let (nu_lo, nu_hi) = (u_lo + s0 * (u_hi - u_lo), u_lo + s1 * (u_hi - u_lo));
        let (a, b) = surface.side_segment(exit);
        let hit = |p: Vec2| {
            let v = b - a;
            (p - a).cross(dir) / v.cross(dir)
        };
        let (e0, _) = glue(exit, hit(p0));
        let (e1, partner) = glue(exit, hit(p1));
        x0 = e0;
        x1 = e1;
        entry = partner;
        u_lo = nu_lo;
        u_hi = nu_hi;
    }
    (u_hi > u_lo).then_some((u_lo, u_hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::build_surface;

    #[test]
    fn sector_examples() {
        assert_eq!(sector_of(0.0, 3), (0, true));
        assert_eq!(sector_of(PI / 3.0, 3), (0, true));
        assert_eq!(sector_of(0.8, 4), (1, false));
    }

    #[test]
    fn horizontal_cylinders_share_modulus() {
        let s = build_surface(SurfaceParams::new(3, 4).unwrap()).unwrap();
        let cyl = cylinders(&s, 0.0).unwrap();
        assert_eq!(cyl.len(), 3);
        let m0 = cyl[0].modulus;
        assert!(cyl.iter().all(|c| (c.modulus - m0).abs() < 1e-9));
    }

    #[test]
    fn periodic_pairs() {
        let s = build_surface(SurfaceParams::new(4, 3).unwrap()).unwrap();
        let w = realize_periodic(&s, 1, 2, 4).unwrap();
        assert_eq!(w.labels, vec![1, 2, 1, 2, 1, 2, 1, 2]);
        assert!(matches!(
            realize_periodic(&s, 1, 4, 4),
            Err(Error::NotCoAdjacent(1, 4))
        ));
    }

    #[test]
    fn start_outside_rejected() {
        let s = build_surface(SurfaceParams::new(4, 3).unwrap()).unwrap();
        assert!(matches!(
            trace(&s, 0, Vec2::new(-5.0, -5.0), 0.3, 5),
            Err(Error::StartOutside { .. })
        ));
    }
}
