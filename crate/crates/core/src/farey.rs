//! Affine matrices, the Farey maps `F_{m,n}` and `FF_{m,n}`, itineraries and direction
//! recognition.
//!
//! Directions are handled as projective vectors, so the endpoint `theta = 0` (inverse slope
//! infinity) needs no special case; inverse-slope helpers are provided for the interface.

use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::surface::SurfaceParams;
use crate::tracer::sector_of;
use serde::Serialize;
use std::f64::consts::PI;

/// Width of the endpoint quarantine band.
pub const EPS_DYN: f64 = 1e-12;

/// The vertical flip `f`.
pub fn flip() -> Mat2 {
    Mat2::diag(-1.0, 1.0)
}

/// The shear `s_{m,n}` with off-diagonal entry `cot(pi/n)`.
pub fn shear(_m: usize, n: usize) -> Mat2 {
    Mat2::new(1.0, 1.0 / (PI / n as f64).tan(), 0.0, 1.0)
}

/// The diagonal rescaling `d_{m,n}`.
pub fn rescale(m: usize, n: usize) -> Mat2 {
    let (sm, sn) = ((PI / m as f64).sin(), (PI / n as f64).sin());
    Mat2::diag((sn / sm).sqrt(), (sm / sn).sqrt())
}

/// Closed form of the derivative `gamma_{m,n}` of the affine map `M(m,n) -> M(n,m)`.
pub fn gamma(m: usize, n: usize) -> Mat2 {
    let (sm, sn) = ((PI / m as f64).sin(), (PI / n as f64).sin());
    let (cm, cn) = ((PI / m as f64).cos(), (PI / n as f64).cos());
    Mat2::new(
        -(sn / sm).sqrt(),
        (cm + cn) / (sm * sn).sqrt(),
        0.0,
        (sm / sn).sqrt(),
    )
}

/// `s_{n,m} d_{m,n} s_{m,n} f`.
pub fn gamma_product(m: usize, n: usize) -> Mat2 {
    shear(n, m) * rescale(m, n) * shear(m, n) * flip()
}

/// `rho_i` of `M(m, n)`: the reflection taking sector `i` onto sector 0 (identity for `i = 0`).
pub fn reflection(_m: usize, n: usize, i: usize) -> Mat2 {
    if i.is_multiple_of(2 * n) {
        return Mat2::IDENTITY;
    }
    let phi = (i + 1) as f64 * PI / n as f64;
    Mat2::new(phi.cos(), phi.sin(), phi.sin(), -phi.cos())
}

/// Inverse slope `cot(theta)` (infinite at 0).
pub fn to_inverse_slope(theta: f64) -> f64 {
    if theta == 0.0 {
        f64::INFINITY
    } else {
        theta.cos() / theta.sin()
    }
}

/// Direction in `[0, pi)` with inverse slope `u`.
pub fn from_inverse_slope(u: f64) -> f64 {
    if u.is_infinite() {
        0.0
    } else {
        let t = (1.0 / u).atan();
        if t < 0.0 {
            t + PI
        } else {
            t
        }
    }
}

fn sorted(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Image of the closed interval `[lo, hi]` of directions under a projective map that does not
/// send any interior direction to `0` or `pi`.
fn act_interval(mat: &Mat2, (lo, hi): (f64, f64)) -> (f64, f64) {
    let (a, b) = (mat.act_angle(lo), mat.act_angle(hi));
    let mid = mat.act_angle(0.5 * (lo + hi));
    let (x, y) = sorted(a, b);
    if (mid >= x && mid <= y) || y - x < 1e-15 {
        (x, y)
    } else {
        // the image wraps through 0 = pi; take the endpoint representative on the far side
        if a < b {
            (b, a + PI)
        } else {
            (a, b + PI)
        }
    }
}

/// One branch of `FF_{m,n}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FareyBranch {
    /// Dual sector index `a` in `1..m`.
    pub a: usize,
    /// Sector index `b` in `1..n`.
    pub b: usize,
    /// Domain in angle coordinates, inside `[0, pi/n]`.
    pub domain: (f64, f64),
    /// `rho_b^{m,n} gamma_{n,m} rho_a^{n,m} gamma_{m,n}`.
    pub matrix: Mat2,
}

/// The Farey map of `M(m, n)` with its branch tables.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FareyMap {
    pub m: usize,
    pub n: usize,
    pub gamma: Mat2,
    pub dual_gamma: Mat2,
    /// Subsectors `j = 1..m-1` of `F_{m,n}` in angle coordinates.
    pub subsectors: Vec<(f64, f64)>,
    /// Subsectors of `F_{n,m}`, `j = 1..n-1`.
    pub dual_subsectors: Vec<(f64, f64)>,
    pub branches: Vec<FareyBranch>,
}

/// Subsector `j` of `F_{m,n}` for `j = 1..m-1`: directions of `[0, pi/n]` sent by `gamma` into
/// sector `j` of `M(n, m)`.
pub fn subsectors(m: usize, n: usize) -> Vec<(f64, f64)> {
    let inv = gamma(m, n).inverse();
    let w = PI / m as f64;
    (1..m)
        .map(|j| {
            let lo = if j == m - 1 {
                0.0
            } else {
                inv.act_angle((j + 1) as f64 * w)
            };
            let hi = inv.act_angle(j as f64 * w);
            let hi = if j == 1 { PI / n as f64 } else { hi };
            sorted(lo, hi)
        })
        .collect()
}

fn check_in_sector(theta: f64, n: usize) -> Result<()> {
    let top = PI / n as f64;
    if !theta.is_finite() || theta < -EPS_DYN || theta > top + EPS_DYN {
        return Err(Error::DomainError(theta));
    }
    Ok(())
}

/// Distance from `theta` to the nearest sector boundary `k pi / n`.
fn boundary_distance(theta: f64, n: usize) -> f64 {
    let w = PI / n as f64;
    let x = theta / w;
    (x - x.round()).abs() * w
}

/// `F_{m,n}`: returns the image in `[0, pi/m]` and the dual sector index `j` of `gamma theta`.
pub fn farey_f(m: usize, n: usize, theta: f64) -> Result<(f64, usize)> {
    check_in_sector(theta, n)?;
    let theta = theta.clamp(0.0, PI / n as f64);
    let phi = gamma(m, n).act_angle(theta);
    let phi = if phi < EPS_DYN { PI } else { phi };
    let (j, _) = sector_of(phi.min(PI - 1e-300), m);
    let j = j.max(1);
    let out = reflection(n, m, j).act_angle(phi);
    let out = if out > PI - EPS_DYN { 0.0 } else { out };
    Ok((out, j))
}

/// `FF_{m,n} = F_{n,m} o F_{m,n}` with branch indices `(a, b)`.
pub fn farey_ff(m: usize, n: usize, theta: f64) -> Result<(f64, usize, usize)> {
    let (mid, a) = farey_f(m, n, theta)?;
    let (out, b) = farey_f(n, m, mid)?;
    Ok((out, a, b))
}

impl FareyMap {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        SurfaceParams::renormalizable(m, n)?;
        let subs = subsectors(m, n);
        let dual_subs = subsectors(n, m);
        let mut branches = Vec::new();
        for (ai, &sa) in subs.iter().enumerate() {
            let a = ai + 1;
            let fa = reflection(n, m, a) * gamma(m, n);
            let fa_inv = fa.inverse();
            for (bi, &sb) in dual_subs.iter().enumerate() {
                let b = bi + 1;
                let domain = act_interval(&fa_inv, sb);
                let domain = (domain.0.max(sa.0), domain.1.min(sa.1));
                let matrix = reflection(m, n, b) * gamma(n, m) * fa;
                branches.push(FareyBranch {
                    a,
                    b,
                    domain,
                    matrix,
                });
            }
        }
        Ok(Self {
            m,
            n,
            gamma: gamma(m, n),
            dual_gamma: gamma(n, m),
            subsectors: subs,
            dual_subsectors: dual_subs,
            branches,
        })
    }

    pub fn branch(&self, a: usize, b: usize) -> Option<&FareyBranch> {
        self.branches.iter().find(|br| br.a == a && br.b == b)
    }

    /// Applies `FF` through the branch table, returning the branch used.
    pub fn apply(&self, theta: f64) -> Result<(f64, usize, usize)> {
        farey_ff(self.m, self.n, theta)
    }
}

/// Itinerary `b_0, (a_1, b_1), (a_2, b_2), ...` of a direction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Itinerary {
    pub b0: usize,
    pub pairs: Vec<(usize, usize)>,
}

/// First `k` itinerary pairs of `theta` in `[0, pi)`.
///
/// Fails with `BoundaryOrbit` when an iterate comes within `EPS_DYN` of a branch endpoint.
pub fn itinerary(m: usize, n: usize, theta: f64, k: usize) -> Result<Itinerary> {
    SurfaceParams::renormalizable(m, n)?;
    if !theta.is_finite() || !(0.0..PI).contains(&theta) {
        return Err(Error::DomainError(theta));
    }
    if boundary_distance(theta, n) < EPS_DYN {
        return Err(Error::BoundaryOrbit { step: 0 });
    }
    let (b0, _) = sector_of(theta, n);
    let mut cur = reflection(m, n, b0).act_angle(theta);
    let mut pairs = Vec::with_capacity(k);
    for step in 1..=k {
        let phi = gamma(m, n).act_angle(cur);
        if boundary_distance(phi, m) < EPS_DYN {
            return Err(Error::BoundaryOrbit { step });
        }
        let (mid, a) = farey_f(m, n, cur)?;
        let psi = gamma(n, m).act_angle(mid);
        if boundary_distance(psi, n) < EPS_DYN {
            return Err(Error::BoundaryOrbit { step });
        }
        let (next, b) = farey_f(n, m, mid)?;
        pairs.push((a, b));
        cur = next;
    }
    Ok(Itinerary { b0, pairs })
}

/// Recovers a direction from its itinerary by intersecting the nested branch intervals.
///
/// Fails with `NoConvergence` when the final interval is still wider than `tol`.
pub fn direction_from_itinerary(
    m: usize,
    n: usize,
    b0: usize,
    pairs: &[(usize, usize)],
    tol: f64,
) -> Result<f64> {
    let (lo, hi) = itinerary_interval(m, n, pairs)?;
    if hi - lo > tol {
        return Err(Error::NoConvergence { width: hi - lo });
    }
    let mid = 0.5 * (lo + hi);
    Ok(reflection(m, n, b0).inverse().act_angle(mid))
}

/// Interval of directions in `[0, pi/n]` whose itinerary starts with `pairs`.
pub fn itinerary_interval(m: usize, n: usize, pairs: &[(usize, usize)]) -> Result<(f64, f64)> {
    let map = FareyMap::new(m, n)?;
    if pairs.is_empty() {
        return Err(Error::InvalidParams("itinerary must be nonempty".into()));
    }
    let mut interval = (0.0, PI / n as f64);
    for &(a, b) in pairs.iter().rev() {
        let br = map
            .branch(a, b)
            .ok_or_else(|| Error::InvalidParams(format!("no branch ({a}, {b}) for M({m},{n})")))?;
        let pre = act_interval(&br.matrix.inverse(), interval);
        interval = (pre.0.max(br.domain.0), pre.1.min(br.domain.1));
        if interval.0 > interval.1 {
            return Err(Error::InvalidParams("itinerary is not realizable".into()));
        }
    }
    Ok(interval)
}

/// Attracting fixed point in `[0, pi/n]` of a branch matrix.
pub fn branch_fixed_point(br: &FareyBranch) -> Option<f64> {
    let m = br.matrix;
    // eigenvectors of m, as directions
    let tr = m.a + m.d;
    let det = m.det();
    let disc = tr * tr - 4.0 * det;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    [(tr + sq) / 2.0, (tr - sq) / 2.0]
        .into_iter()
        .filter_map(|lam| {
            let (x, y) = if m.b.abs() > 1e-14 {
                (m.b, lam - m.a)
            } else {
                (lam - m.d, m.c)
            };
            if x == 0.0 && y == 0.0 {
                return None;
            }
            let mut t = y.atan2(x);
            if t < 0.0 {
                t += PI;
            }
            if t >= PI {
                t -= PI;
            }
            Some(t)
        })
        .find(|&t| t >= br.domain.0 - 1e-12 && t <= br.domain.1 + 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_43_closed_form() {
        let g = gamma(4, 3);
        assert!((g.a + 1.106_681).abs() < 1e-5);
        assert!((g.b - 1.542_544).abs() < 1e-5);
        assert!((g.d - 0.903_602).abs() < 1e-5);
        assert!((g.det() + 1.0).abs() < 1e-12);
        assert!(g.max_abs_diff(&gamma_product(4, 3)) < 1e-12);
    }

    #[test]
    fn reflections_for_n3() {
        let s3 = 3f64.sqrt() / 2.0;
        assert!(reflection(4, 3, 0).max_abs_diff(&Mat2::IDENTITY) < 1e-12);
        assert!(reflection(4, 3, 1).max_abs_diff(&Mat2::new(-0.5, s3, s3, 0.5)) < 1e-12);
        assert!(reflection(4, 3, 2).max_abs_diff(&Mat2::new(-1.0, 0.0, 0.0, 1.0)) < 1e-12);
    }

    #[test]
    fn endpoints_are_fixed() {
        for (m, n) in [(4, 3), (3, 4), (5, 3)] {
            assert!(farey_ff(m, n, 0.0).unwrap().0.abs() < 1e-12);
            let top = PI / n as f64;
            assert!((farey_ff(m, n, top).unwrap().0 - top).abs() < 1e-9);
        }
    }

    #[test]
    fn subsectors_tile_standard_sector() {
        let s = subsectors(4, 3);
        assert_eq!(s.len(), 3);
        assert!(s[2].0.abs() < 1e-15 && (s[0].1 - PI / 3.0).abs() < 1e-15);
        assert!((s[2].1 - s[1].0).abs() < 1e-12 && (s[1].1 - s[0].0).abs() < 1e-12);
    }

    #[test]
    fn outside_sector_rejected() {
        assert!(matches!(farey_f(4, 3, 2.0), Err(Error::DomainError(_))));
        assert!(matches!(
            itinerary(4, 3, 0.0, 3),
            Err(Error::BoundaryOrbit { step: 0 })
        ));
    }

    #[test]
    fn inverse_slope_round_trip() {
        for t in [0.1, 0.7, 1.5, 2.9] {
            assert!((from_inverse_slope(to_inverse_slope(t)) - t).abs() < 1e-12);
        }
        let g = gamma(4, 3);
        let t = 0.4;
        let via_u = from_inverse_slope(g.act_inverse_slope(to_inverse_slope(t)));
        assert!((via_u - g.act_angle(t)).abs() < 1e-12);
    }
}
