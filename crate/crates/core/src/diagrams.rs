//! Transition diagrams, derivation diagrams, the arrow alphabet and sector permutations.

use crate::error::{Error, Result};
use crate::perm::Perm;
use serde::Serialize;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

/// Grid position `(row, column)`, both 0-based.
pub type Pos = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ArrowKind {
    V,
    R,
    L,
}

/// A letter of the arrow alphabet: `v_i`, `r_i` or `l_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArrowName {
    pub kind: ArrowKind,
    pub index: usize,
}

impl ArrowName {
    pub const fn v(index: usize) -> Self {
        Self {
            kind: ArrowKind::V,
            index,
        }
    }
    pub const fn r(index: usize) -> Self {
        Self {
            kind: ArrowKind::R,
            index,
        }
    }
    pub const fn l(index: usize) -> Self {
        Self {
            kind: ArrowKind::L,
            index,
        }
    }
}

impl fmt::Display for ArrowName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            ArrowKind::V => 'v',
            ArrowKind::R => 'r',
            ArrowKind::L => 'l',
        };
        write!(f, "{c}{}", self.index)
    }
}

impl Serialize for ArrowName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for ArrowName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidParams(format!("bad arrow name {s:?}"));
        let mut chars = s.chars();
        let kind = match chars.next().ok_or_else(bad)? {
            'v' => ArrowKind::V,
            'r' => ArrowKind::R,
            'l' => ArrowKind::L,
            _ => return Err(bad()),
        };
        let index: usize = chars.as_str().parse().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        Ok(Self { kind, index })
    }
}

/// Parses a whitespace or comma separated arrow word such as `"r1 l2 v1"`.
pub fn parse_arrow_word(s: &str) -> Result<Vec<ArrowName>> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect()
}

pub fn format_arrow_word(w: &[ArrowName]) -> String {
    w.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// The unlabelled diagram shared by every transition diagram of `M(m, n)`, with its arrows
/// named by the arrow alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrowAlphabet {
    pub m: usize,
    pub n: usize,
    /// Arrows in alphabet order: all `v`, then all `r`, then all `l`.
    pub arrows: Vec<(ArrowName, Pos, Pos)>,
    by_name: HashMap<ArrowName, usize>,
    by_ends: HashMap<(Pos, Pos), usize>,
}

/// Builds the arrow alphabet of `M(m, n)` and its placement on the universal diagram.
pub fn arrow_alphabet(m: usize, n: usize) -> ArrowAlphabet {
    let rows = m - 1;
    let mut arrows = Vec::new();
    let mut v = 0;
    for c in 0..n {
        let down = c % 2 == 0;
        for k in 0..rows - 1 {
            v += 1;
            let arrow = if down {
                ((k, c), (k + 1, c))
            } else {
                ((rows - 1 - k, c), (rows - 2 - k, c))
            };
            arrows.push((ArrowName::v(v), arrow.0, arrow.1));
        }
    }
    let mut r = 0;
    for row in 0..rows {
        for c in 0..n - 1 {
            r += 1;
            arrows.push((ArrowName::r(r), (row, c), (row, c + 1)));
        }
    }
    let mut l = 0;
    for row in 0..rows {
        for c in (1..n).rev() {
            l += 1;
            arrows.push((ArrowName::l(l), (row, c), (row, c - 1)));
        }
    }
    let by_name = arrows.iter().enumerate().map(|(i, a)| (a.0, i)).collect();
    let by_ends = arrows
        .iter()
        .enumerate()
        .map(|(i, a)| ((a.1, a.2), i))
        .collect();
    ArrowAlphabet {
        m,
        n,
        arrows,
        by_name,
        by_ends,
    }
}

impl ArrowAlphabet {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `3mn - 2m - 4n + 2`.
    pub fn expected_size(m: usize, n: usize) -> usize {
        3 * m * n + 2 - 2 * m - 4 * n
    }

    pub fn ends(&self, a: ArrowName) -> Option<(Pos, Pos)> {
        self.by_name
            .get(&a)
            .map(|&i| (self.arrows[i].1, self.arrows[i].2))
    }

    pub fn name_between(&self, from: Pos, to: Pos) -> Option<ArrowName> {
        self.by_ends.get(&(from, to)).map(|&i| self.arrows[i].0)
    }

    pub fn names(&self) -> Vec<ArrowName> {
        self.arrows.iter().map(|a| a.0).collect()
    }

    /// Whether consecutive letters chain head to tail.
    pub fn is_admissible(&self, w: &[ArrowName]) -> bool {
        check_chained(self, w).is_ok()
    }
}

fn check_chained(alpha: &ArrowAlphabet, w: &[ArrowName]) -> Result<()> {
    for (k, a) in w.iter().enumerate() {
        let (_, head) = alpha.ends(*a).ok_or(Error::NotChained { position: k })?;
        if let Some(b) = w.get(k + 1) {
            let (tail, _) = alpha
                .ends(*b)
                .ok_or(Error::NotChained { position: k + 1 })?;
            if tail != head {
                return Err(Error::NotChained { position: k + 1 });
            }
        }
    }
    Ok(())
}

/// Transition diagram `T_i` of `M(m, n)`: an `(m-1) x n` grid of labels over the universal
/// arrow structure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitionDiagram {
    pub m: usize,
    pub n: usize,
    pub sector: usize,
    pub grid: Vec<Vec<u32>>,
    #[serde(skip)]
    pos_of: Vec<Pos>,
}

impl TransitionDiagram {
    fn from_grid(m: usize, n: usize, sector: usize, grid: Vec<Vec<u32>>) -> Self {
        let mut pos_of = vec![(0, 0); n * (m - 1)];
        for (r, row) in grid.iter().enumerate() {
            for (c, &l) in row.iter().enumerate() {
                pos_of[l as usize - 1] = (r, c);
            }
        }
        Self {
            m,
            n,
            sector,
            grid,
            pos_of,
        }
    }

    pub fn label_at(&self, p: Pos) -> u32 {
        self.grid[p.0][p.1]
    }

    pub fn position(&self, label: u32) -> Pos {
        self.pos_of[label as usize - 1]
    }

    /// Directed arrows as label pairs, in arrow-alphabet order.
    pub fn arrows(&self) -> Vec<(u32, u32)> {
        arrow_alphabet(self.m, self.n)
            .arrows
            .iter()
            .map(|&(_, a, b)| (self.label_at(a), self.label_at(b)))
            .collect()
    }

    pub fn has_arrow(&self, a: u32, b: u32) -> bool {
        let max = self.pos_of.len() as u32;
        if a == 0 || b == 0 || a > max || b > max {
            return false;
        }
        let (pa, pb) = (self.position(a), self.position(b));
        is_universal_arrow(self.n, pa, pb)
    }

    /// Name of the arrow from label `a` to label `b`, if any.
    pub fn arrow_name(&self, alpha: &ArrowAlphabet, a: u32, b: u32) -> Option<ArrowName> {
        if !self.has_arrow(a, b) {
            return None;
        }
        alpha.name_between(self.position(a), self.position(b))
    }

    /// `Ok` if every consecutive pair of `w` is an arrow.
    pub fn check_admissible(&self, w: &[u32]) -> Result<()> {
        let max = self.pos_of.len() as u32;
        for (k, &l) in w.iter().enumerate() {
            if l == 0 || l > max {
                return Err(Error::NotAdmissible { position: k });
            }
        }
        for (k, pair) in w.windows(2).enumerate() {
            if !self.has_arrow(pair[0], pair[1]) {
                return Err(Error::NotAdmissible { position: k + 1 });
            }
        }
        Ok(())
    }

    pub fn is_admissible(&self, w: &[u32]) -> bool {
        self.check_admissible(w).is_ok()
    }

    /// The row flip: row `r` exchanged with row `m - 2 - r`.
    pub fn nu(&self) -> Self {
        self.moved(|(r, c)| (self.m - 2 - r, c))
    }

    /// The brick-pattern swap fixing the upper-left label.
    pub fn beta(&self) -> Self {
        let n = self.n;
        self.moved(|p| brick_swap(n, p))
    }

    fn moved(&self, f: impl Fn(Pos) -> Pos) -> Self {
        let grid = (0..self.m - 1)
            .map(|r| (0..self.n).map(|c| self.label_at(f((r, c)))).collect())
            .collect();
        Self::from_grid(self.m, self.n, self.sector, grid)
    }

    /// Label pairs adjacent in a row (both orders).
    pub fn row_pairs(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for row in &self.grid {
            for w in row.windows(2) {
                out.push((w[0], w[1]));
            }
        }
        out
    }
}

fn is_universal_arrow(n: usize, a: Pos, b: Pos) -> bool {
    if a.0 == b.0 {
        return a.1.abs_diff(b.1) == 1;
    }
    if a.1 != b.1 || a.0.abs_diff(b.0) != 1 {
        return false;
    }
    let _ = n;
    let down = a.1.is_multiple_of(2);
    if down {
        b.0 == a.0 + 1
    } else {
        b.0 + 1 == a.0
    }
}

fn brick_swap(n: usize, (r, c): Pos) -> Pos {
    let offset = if r % 2 == 0 { 1 } else { 0 };
    if c < offset {
        return (r, c);
    }
    let k = c - offset;
    let partner = if k % 2 == 0 { c + 1 } else { c - 1 };
    if partner >= n {
        (r, c)
    } else {
        (r, partner)
    }
}

/// `T_0`: labels snake left-to-right then right-to-left down the rows.
pub fn build_t0(m: usize, n: usize) -> TransitionDiagram {
    let grid = (0..m - 1)
        .map(|r| {
            let base = (r * n) as u32;
            let mut row: Vec<u32> = (1..=n as u32).map(|k| base + k).collect();
            if r % 2 == 1 {
                row.reverse();
            }
            row
        })
        .collect();
    TransitionDiagram::from_grid(m, n, 0, grid)
}

/// `T_i`: the labels of `T_0` moved by the sector permutation `pi_i`.
pub fn build_ti(m: usize, n: usize, i: usize) -> TransitionDiagram {
    let t0 = build_t0(m, n);
    let p = sector_permutation(m, n, i);
    let grid = t0.grid.iter().map(|row| p.apply_word(row)).collect();
    TransitionDiagram::from_grid(m, n, i, grid)
}

fn position_perm(m: usize, n: usize, f: impl Fn(Pos) -> Pos) -> Perm {
    let t0 = build_t0(m, n);
    let mut images = vec![0; n * (m - 1)];
    for r in 0..m - 1 {
        for c in 0..n {
            images[t0.label_at((r, c)) as usize - 1] = t0.label_at(f((r, c)));
        }
    }
    Perm::from_images(images)
}

/// Label permutation of the row flip `nu` on `T_0`.
pub fn nu_perm(m: usize, n: usize) -> Perm {
    position_perm(m, n, |(r, c)| (m - 2 - r, c))
}

/// Label permutation of the brick swap `beta` on `T_0`.
pub fn beta_perm(m: usize, n: usize) -> Perm {
    position_perm(m, n, |p| brick_swap(n, p))
}

/// Label permutation of the flip that exchanges the first and last polygons.
///
/// For odd `m` this is `nu`; for even `m` the columns are also reversed, so the flip turns
/// the diagram by a half-turn.
pub fn polygon_flip_perm(m: usize, n: usize) -> Perm {
    if m % 2 == 1 {
        nu_perm(m, n)
    } else {
        position_perm(m, n, |(r, c)| (m - 2 - r, n - 1 - c))
    }
}

/// The permutation `pi_i` induced by the reflection taking sector `i` onto sector 0.
///
/// The flip and `beta` compose to the rotation by `pi/n`, so
/// `pi_i = (beta o flip)^(i + n) o flip` for `i >= 1`; `pi_0` is the identity.
pub fn sector_permutation(m: usize, n: usize, i: usize) -> Perm {
    let size = n * (m - 1);
    if i.is_multiple_of(2 * n) {
        return Perm::identity(size);
    }
    let flip = polygon_flip_perm(m, n);
    let rot = beta_perm(m, n).compose(&flip);
    rot.pow((i + n) % (2 * n)).compose(&flip)
}

/// All sectors `i` in `0..n` whose diagram admits every transition of `word`.
pub fn admissible_in(m: usize, n: usize, word: &[u32]) -> Vec<usize> {
    (0..n)
        .filter(|&i| build_ti(m, n, i).is_admissible(word))
        .collect()
}

/// `T_0` with its horizontal arrows labelled by edges of the dual surface `M(n, m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivationDiagram {
    pub t0: TransitionDiagram,
    labels: HashMap<(u32, u32), u32>,
}

/// Dual label on the `pos`-th vertical Hooper edge (0 at the top) of arrow column `j >= 1`.
pub fn dual_snake_label(m: usize, j: usize, pos: usize) -> u32 {
    let base = ((j - 1) * m) as u32;
    if j % 2 == 1 {
        base + pos as u32 + 1
    } else {
        base + (m - pos) as u32
    }
}

/// Builds `D_0`: arrows between columns `j - 1` and `j` carry the dual labels snaking down
/// odd arrow columns and up even ones. In each row the left-going arrow takes the upper
/// label in odd arrow columns and the lower one in even arrow columns.
pub fn build_d0(m: usize, n: usize) -> DerivationDiagram {
    let t0 = build_t0(m, n);
    let mut labels = HashMap::new();
    for r in 0..m - 1 {
        for j in 1..n {
            let left = (t0.label_at((r, j)), t0.label_at((r, j - 1)));
            let right = (left.1, left.0);
            let (top, bottom) = if j % 2 == 1 {
                (left, right)
            } else {
                (right, left)
            };
            labels.insert(top, dual_snake_label(m, j, r));
            labels.insert(bottom, dual_snake_label(m, j, r + 1));
        }
    }
    DerivationDiagram { t0, labels }
}

impl DerivationDiagram {
    /// Dual label on the arrow `a -> b`; `None` for vertical arrows and non-arrows.
    pub fn label(&self, a: u32, b: u32) -> Option<u32> {
        self.labels.get(&(a, b)).copied()
    }

    /// All arrows with their optional labels, in arrow-alphabet order.
    pub fn labelled_arrows(&self) -> Vec<(u32, u32, Option<u32>)> {
        self.t0
            .arrows()
            .into_iter()
            .map(|(a, b)| (a, b, self.label(a, b)))
            .collect()
    }

    /// Arrows carrying dual label `g`.
    pub fn arrows_with_label(&self, g: u32) -> Vec<(u32, u32)> {
        let mut v: Vec<_> = self
            .labels
            .iter()
            .filter(|(_, &l)| l == g)
            .map(|(&k, _)| k)
            .collect();
        v.sort_unstable();
        v
    }
}

/// Vertex word of `T_i` to the arrow word of the path through it.
pub fn vertices_to_arrows(
    t: &TransitionDiagram,
    alpha: &ArrowAlphabet,
    w: &[u32],
) -> Result<Vec<ArrowName>> {
    t.check_admissible(w)?;
    Ok(w.windows(2)
        .map(|p| {
            t.arrow_name(alpha, p[0], p[1])
                .expect("admissible pair is an arrow")
        })
        .collect())
}

/// Arrow word to the vertex word of the path in `T_i` through those arrows.
pub fn arrows_to_vertices(
    t: &TransitionDiagram,
    alpha: &ArrowAlphabet,
    w: &[ArrowName],
) -> Result<Vec<u32>> {
    check_chained(alpha, w)?;
    let Some(first) = w.first() else {
        return Ok(Vec::new());
    };
    let (tail, _) = alpha.ends(*first).expect("checked");
    let mut out = vec![t.label_at(tail)];
    for a in w {
        out.push(t.label_at(alpha.ends(*a).expect("checked").1));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t0_grids() {
        assert_eq!(
            build_t0(4, 3).grid,
            vec![vec![1, 2, 3], vec![6, 5, 4], vec![7, 8, 9]]
        );
        assert_eq!(
            build_t0(3, 4).grid,
            vec![vec![1, 2, 3, 4], vec![8, 7, 6, 5]]
        );
    }

    #[test]
    fn diagram_actions_on_t0_34() {
        let t = build_t0(3, 4);
        assert_eq!(t.nu().grid, vec![vec![8, 7, 6, 5], vec![1, 2, 3, 4]]);
        assert_eq!(t.beta().grid, vec![vec![1, 3, 2, 4], vec![7, 8, 5, 6]]);
        assert_eq!(t.nu().nu(), t);
        assert_eq!(t.beta().beta(), t);
    }

    #[test]
    fn arrow_names_on_t0_43() {
        let t = build_t0(4, 3);
        let a = arrow_alphabet(4, 3);
        assert_eq!(a.len(), 18);
        assert_eq!(t.arrow_name(&a, 1, 2), Some(ArrowName::r(1)));
        assert_eq!(t.arrow_name(&a, 2, 1), Some(ArrowName::l(2)));
        assert_eq!(t.arrow_name(&a, 1, 6), Some(ArrowName::v(1)));
        assert_eq!(t.arrow_name(&a, 8, 5), Some(ArrowName::v(3)));
    }

    #[test]
    fn d0_labels_43() {
        let d = build_d0(4, 3);
        assert_eq!(d.label(2, 1), Some(1));
        assert_eq!(d.label(1, 2), Some(2));
        assert_eq!(d.label(9, 8), Some(5));
        assert_eq!(d.label(2, 3), Some(8));
        assert_eq!(d.label(5, 6), Some(2));
        assert_eq!(d.label(8, 7), Some(3));
        assert_eq!(d.label(1, 6), None);
    }

    #[test]
    fn sector_permutations_match_polygon_reflections() {
        use crate::surface::{build_surface, SurfaceParams};
        for (m, n) in (3..8)
            .flat_map(|m| (3..8).map(move |n| (m, n)))
            .filter(|(m, n)| m % 2 == 1 || n % 2 == 1)
        {
            let s = build_surface(SurfaceParams::new(m, n).unwrap()).unwrap();
            let geo = |k: usize| Perm::from_images(s.reflection_permutation(k).unwrap());
            assert_eq!(polygon_flip_perm(m, n), geo(n + 1), "flip ({m},{n})");
            assert_eq!(beta_perm(m, n), geo(n + 2), "beta ({m},{n})");
            for i in 1..2 * n {
                assert_eq!(sector_permutation(m, n, i), geo(i + 1), "pi_{i} ({m},{n})");
            }
        }
    }

    #[test]
    fn listed_sector_permutations() {
        assert_eq!(sector_permutation(4, 3, 1).to_string(), "(17)(29)(38)(56)");
        assert_eq!(sector_permutation(4, 3, 2).to_string(), "(12)(45)(78)");
        assert_eq!(sector_permutation(3, 4, 1).to_string(), "(14)(57)(68)");
        assert_eq!(sector_permutation(3, 4, 2).to_string(), "(16)(28)(35)(47)");
        assert_eq!(sector_permutation(3, 4, 3).to_string(), "(12)(34)(67)");
    }

    #[test]
    fn arrow_name_parse() {
        assert_eq!("l12".parse::<ArrowName>().unwrap(), ArrowName::l(12));
        assert!("x1".parse::<ArrowName>().is_err());
        assert!("v0".parse::<ArrowName>().is_err());
    }
}
