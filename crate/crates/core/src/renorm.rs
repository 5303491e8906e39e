//! Derivation, normalization, generation, pseudo-substitutions and substitutions.

use crate::diagrams::{
    arrow_alphabet, arrows_to_vertices, build_d0, build_ti, sector_permutation, vertices_to_arrows,
    ArrowAlphabet, ArrowName, DerivationDiagram, TransitionDiagram,
};
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::surface::SurfaceParams;
use serde::Serialize;
use std::collections::BTreeMap;

/// Diagrams, permutations and the arrow alphabet of one surface `M(m, n)`.
#[derive(Debug, Clone)]
pub struct SurfaceTables {
    pub m: usize,
    pub n: usize,
    /// `T_0 .. T_{n-1}`.
    pub diagrams: Vec<TransitionDiagram>,
    /// `pi_0 .. pi_{n-1}`.
    pub perms: Vec<Perm>,
    pub d0: DerivationDiagram,
    pub alphabet: ArrowAlphabet,
}

/// One derivation step with the arrow label read at every transition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivationRecord {
    pub input: Vec<u32>,
    pub output: Vec<u32>,
    /// Label of the arrow `input[k] -> input[k + 1]`, `None` for vertical arrows.
    pub arrow_labels: Vec<Option<u32>>,
}

impl SurfaceTables {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        SurfaceParams::renormalizable(m, n)?;
        Ok(Self {
            m,
            n,
            diagrams: (0..n).map(|i| build_ti(m, n, i)).collect(),
            perms: (0..n).map(|i| sector_permutation(m, n, i)).collect(),
            d0: build_d0(m, n),
            alphabet: arrow_alphabet(m, n),
        })
    }

    pub fn t0(&self) -> &TransitionDiagram {
        &self.diagrams[0]
    }

    /// Sectors `i` in `0..n` whose diagram admits `w`.
    pub fn admissible_sectors(&self, w: &[u32]) -> Vec<usize> {
        (0..self.n)
            .filter(|&i| self.diagrams[i].is_admissible(w))
            .collect()
    }

    /// Moves `w` into sector 0 using the smallest admissible sector.
    pub fn normalize(&self, w: &[u32]) -> Result<(usize, Vec<u32>)> {
        let i = match self.admissible_sectors(w).first() {
            Some(&i) => i,
            None => {
                let position = (0..self.n)
                    .map(|i| match self.diagrams[i].check_admissible(w) {
                        Err(Error::NotAdmissible { position }) => position,
                        _ => 0,
                    })
                    .max()
                    .unwrap_or(0);
                return Err(Error::NotAdmissible { position });
            }
        };
        Ok((i, self.perms[i].inverse().apply_word(w)))
    }

    /// Derivation with per-transition provenance.
    pub fn derive_record(&self, w: &[u32]) -> Result<DerivationRecord> {
        self.t0().check_admissible(w)?;
        let arrow_labels: Vec<Option<u32>> =
            w.windows(2).map(|p| self.d0.label(p[0], p[1])).collect();
        Ok(DerivationRecord {
            input: w.to_vec(),
            output: arrow_labels.iter().flatten().copied().collect(),
            arrow_labels,
        })
    }

    /// Arrow labels of `D_0` read along the window `w`, which must be admissible in `T_0`.
    pub fn derive(&self, w: &[u32]) -> Result<Vec<u32>> {
        Ok(self.derive_record(w)?.output)
    }

    /// Derivation of the periodic word with period `w`, returning one period.
    pub fn derive_cyclic(&self, w: &[u32]) -> Result<Vec<u32>> {
        let mut closed = w.to_vec();
        if let Some(&first) = w.first() {
            closed.push(first);
        }
        self.derive(&closed)
    }

    /// `Tr_i`: arrow word to vertex word of `T_i`.
    pub fn tr(&self, i: usize, w: &[ArrowName]) -> Result<Vec<u32>> {
        arrows_to_vertices(&self.diagrams[i], &self.alphabet, w)
    }

    /// Inverse of `Tr_i`.
    pub fn tr_inverse(&self, i: usize, w: &[u32]) -> Result<Vec<ArrowName>> {
        vertices_to_arrows(&self.diagrams[i], &self.alphabet, w)
    }
}

/// `derive_{m,n}` on a finite window.
pub fn derive(m: usize, n: usize, w: &[u32]) -> Result<Vec<u32>> {
    SurfaceTables::new(m, n)?.derive(w)
}

/// `derive_{m,n}` on the periodic word with period `w`.
pub fn derive_cyclic(m: usize, n: usize, w: &[u32]) -> Result<Vec<u32>> {
    SurfaceTables::new(m, n)?.derive_cyclic(w)
}

/// `(sector, normalized word)` for a word of `M(m, n)`.
pub fn normalize(m: usize, n: usize, w: &[u32]) -> Result<(usize, Vec<u32>)> {
    SurfaceTables::new(m, n)?.normalize(w)
}

/// A surface together with its dual.
#[derive(Debug, Clone)]
pub struct DualPair {
    pub primal: SurfaceTables,
    pub dual: SurfaceTables,
}

impl DualPair {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        Ok(Self {
            primal: SurfaceTables::new(m, n)?,
            dual: SurfaceTables::new(n, m)?,
        })
    }

    /// Tables of `M(m, n)` if `flip` is false, else of `M(n, m)`.
    pub fn side(&self, flip: bool) -> &SurfaceTables {
        if flip {
            &self.dual
        } else {
            &self.primal
        }
    }
}

/// Normalized derivatives `w^0 .. w^k` and sectors `b_0, a_1, b_1, a_2, ...`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivativeSequence {
    pub words: Vec<Vec<u32>>,
    pub sectors: Vec<usize>,
}

impl DerivativeSequence {
    pub fn b0(&self) -> usize {
        self.sectors[0]
    }

    /// Pairs `(a_t, b_t)` for `t >= 1`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.sectors[1..]
            .chunks_exact(2)
            .map(|c| (c[0], c[1]))
            .collect()
    }
}

/// Normalizes `w`, then alternately derives and normalizes `k` times.
pub fn derivative_sequence(pair: &DualPair, w: &[u32], k: usize) -> Result<DerivativeSequence> {
    let (b0, w0) = pair.primal.normalize(w)?;
    let mut words = vec![w0];
    let mut sectors = vec![b0];
    for step in 0..k {
        let cur = pair.side(step % 2 == 1);
        let next = pair.side(step % 2 == 0);
        let derived = cur.derive(words.last().expect("nonempty"))?;
        if derived.is_empty() {
            return Err(Error::InvalidParams(format!(
                "window exhausted at derivative {}",
                step + 1
            )));
        }
        let (s, normalized) = next.normalize(&derived)?;
        sectors.push(s);
        words.push(normalized);
    }
    Ok(DerivativeSequence { words, sectors })
}

/// Arrows of `T_i^{m,n}` annotated with vertex words of `D_0^{n,m}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenerationDiagram {
    pub m: usize,
    pub n: usize,
    pub sector: usize,
    pub diagram: TransitionDiagram,
    /// Annotation of every arrow `(from, to)` of `T_i^{m,n}`.
    pub annotations: BTreeMap<(u32, u32), Vec<u32>>,
    /// Common last letter of the annotations on arrows into each vertex.
    pub precedents: BTreeMap<u32, u32>,
}

fn vertical_path(d0: &DerivationDiagram, from: u32, to: u32) -> Option<Vec<u32>> {
    let t = &d0.t0;
    let mut path = vec![from];
    let limit = t.grid.len();
    while *path.last()? != to {
        if path.len() > limit {
            return None;
        }
        let cur = *path.last()?;
        let (r, c) = t.position(cur);
        let next_row = if c % 2 == 0 {
            r.checked_add(1)
        } else {
            r.checked_sub(1)
        };
        let next = next_row
            .filter(|&nr| nr < limit)
            .map(|nr| t.label_at((nr, c)))?;
        path.push(next);
    }
    Some(path)
}

/// `GD_i^{m,n}`: for every arrow `g1 -> g2` of `T_i^{m,n}` the unique vertex path of
/// `D_0^{n,m}` leaving an arrow labelled `g1` and entering an arrow labelled `g2` through
/// unlabelled arrows only.
pub fn generation_diagram(m: usize, n: usize, i: usize) -> Result<GenerationDiagram> {
    SurfaceParams::renormalizable(m, n)?;
    if i == 0 || i >= n {
        return Err(Error::InvalidParams(format!(
            "generation sector must be in 1..{n}, got {i}"
        )));
    }
    let diagram = build_ti(m, n, i);
    let dual = build_d0(n, m);
    let mut annotations = BTreeMap::new();
    for (g1, g2) in diagram.arrows() {
        let mut found: Vec<Vec<u32>> = Vec::new();
        for &(_, h1) in &dual.arrows_with_label(g1) {
            for &(t2, _) in &dual.arrows_with_label(g2) {
                if let Some(p) = vertical_path(&dual, h1, t2) {
                    if !found.contains(&p) {
                        found.push(p);
                    }
                }
            }
        }
        match found.len() {
            0 => return Err(Error::PathMissing { from: g1, to: g2 }),
            1 => {
                annotations.insert((g1, g2), found.pop().expect("one path"));
            }
            _ => return Err(Error::PathNotUnique { from: g1, to: g2 }),
        }
    }
    let mut precedents = BTreeMap::new();
    for ((_, to), ann) in &annotations {
        let last = *ann.last().expect("paths are nonempty");
        if let Some(prev) = precedents.insert(*to, last) {
            if prev != last {
                return Err(Error::MalformedDiagram(format!(
                    "vertex {to} has two precedents"
                )));
            }
        }
    }
    Ok(GenerationDiagram {
        m,
        n,
        sector: i,
        diagram,
        annotations,
        precedents,
    })
}

impl GenerationDiagram {
    /// Interpolates a word admissible in `T_i^{m,n}` into a word of `M(n, m)` whose
    /// derivation is that word.
    pub fn interpolate(&self, w: &[u32], dual_d0: &DerivationDiagram) -> Result<Vec<u32>> {
        self.diagram.check_admissible(w)?;
        let Some(&first) = w.first() else {
            return Ok(Vec::new());
        };
        let mut out = vec![self.precedents[&first]];
        for p in w.windows(2) {
            out.extend_from_slice(&self.annotations[&(p[0], p[1])]);
        }
        let last = *w.last().expect("nonempty");
        let tail = *out.last().expect("nonempty");
        let head = dual_d0
            .arrows_with_label(last)
            .into_iter()
            .find(|&(a, _)| a == tail)
            .map(|(_, b)| b)
            .ok_or(Error::PathMissing {
                from: tail,
                to: last,
            })?;
        out.push(head);
        Ok(out)
    }
}

/// Generation operators in both directions for a dual pair.
#[derive(Debug, Clone)]
pub struct Generator {
    pub pair: DualPair,
    /// `GD_i^{m,n}` for `i` in `1..n` (index 0 unused).
    pub primal_gd: Vec<Option<GenerationDiagram>>,
    /// `GD_j^{n,m}` for `j` in `1..m` (index 0 unused).
    pub dual_gd: Vec<Option<GenerationDiagram>>,
}

impl Generator {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        let pair = DualPair::new(m, n)?;
        let mut primal_gd = vec![None];
        for i in 1..n {
            primal_gd.push(Some(generation_diagram(m, n, i)?));
        }
        let mut dual_gd = vec![None];
        for j in 1..m {
            dual_gd.push(Some(generation_diagram(n, m, j)?));
        }
        Ok(Self {
            pair,
            primal_gd,
            dual_gd,
        })
    }

    /// `generate(m, n, i, w)`: `w` admissible in `T_0^{n,m}`, output admissible in
    /// `T_0^{m,n}` with `normalize o derive_{m,n}` returning `(i, w)`.
    pub fn to_primal(&self, i: usize, w: &[u32]) -> Result<Vec<u32>> {
        let gd = self
            .dual_gd
            .get(i)
            .and_then(Option::as_ref)
            .ok_or_else(|| Error::InvalidParams(format!("sector {i} has no generation diagram")))?;
        self.pair.dual.t0().check_admissible(w)?;
        let moved = self.pair.dual.perms[i].apply_word(w);
        gd.interpolate(&moved, &self.pair.primal.d0)
    }

    /// `generate(n, m, i, w)`: `w` admissible in `T_0^{m,n}`, output a word of `M(n, m)`.
    pub fn to_dual(&self, i: usize, w: &[u32]) -> Result<Vec<u32>> {
        let gd = self
            .primal_gd
            .get(i)
            .and_then(Option::as_ref)
            .ok_or_else(|| Error::InvalidParams(format!("sector {i} has no generation diagram")))?;
        self.pair.primal.t0().check_admissible(w)?;
        let moved = self.pair.primal.perms[i].apply_word(w);
        gd.interpolate(&moved, &self.pair.dual.d0)
    }
}

/// `generate(m, n, i, w)` with freshly built tables.
pub fn generate(m: usize, n: usize, i: usize, w: &[u32]) -> Result<Vec<u32>> {
    let gd = generation_diagram(n, m, i)?;
    let dual = SurfaceTables::new(n, m)?;
    dual.t0().check_admissible(w)?;
    let moved = dual.perms[i].apply_word(w);
    gd.interpolate(&moved, &build_d0(m, n))
}

/// Map from arrows of `M(m, n)` to arrow words of `M(n, m)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PseudoSubstitution {
    pub m: usize,
    pub n: usize,
    pub sector: usize,
    pub images: BTreeMap<ArrowName, Vec<ArrowName>>,
}

/// `ps_i^{m,n}` read off `GD_i^{m,n}`.
pub fn pseudo_substitution(m: usize, n: usize, i: usize) -> Result<PseudoSubstitution> {
    let gd = generation_diagram(m, n, i)?;
    pseudo_substitution_from(&gd)
}

pub fn pseudo_substitution_from(gd: &GenerationDiagram) -> Result<PseudoSubstitution> {
    let (m, n) = (gd.m, gd.n);
    let alpha = arrow_alphabet(m, n);
    let dual_alpha = arrow_alphabet(n, m);
    let dual_t0 = build_d0(n, m).t0;
    let mut images = BTreeMap::new();
    for &(name, p, q) in &alpha.arrows {
        let (j, k) = (gd.diagram.label_at(p), gd.diagram.label_at(q));
        let ann = &gd.annotations[&(j, k)];
        let mut path = vec![gd.precedents[&j]];
        path.extend_from_slice(ann);
        let image = vertices_to_arrows(&dual_t0, &dual_alpha, &path)
            .map_err(|_| Error::MalformedDiagram(format!("image of {name} is not a path")))?;
        images.insert(name, image);
    }
    Ok(PseudoSubstitution {
        m,
        n,
        sector: gd.sector,
        images,
    })
}

impl PseudoSubstitution {
    pub fn apply(&self, w: &[ArrowName]) -> Vec<ArrowName> {
        w.iter()
            .flat_map(|a| self.images[a].iter().copied())
            .collect()
    }
}

/// Substitution on the arrows of `M(m, n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Substitution {
    pub m: usize,
    pub n: usize,
    pub i: usize,
    pub j: usize,
    pub images: BTreeMap<ArrowName, Vec<ArrowName>>,
}

/// `sigma_{i,j}^{m,n} = ps_j^{n,m} o ps_i^{m,n}`.
pub fn substitution(m: usize, n: usize, i: usize, j: usize) -> Result<Substitution> {
    let first = pseudo_substitution(m, n, i)?;
    let second = pseudo_substitution(n, m, j)?;
    let images = first
        .images
        .iter()
        .map(|(a, w)| (*a, second.apply(w)))
        .collect();
    Ok(Substitution { m, n, i, j, images })
}

impl Substitution {
    pub fn apply(&self, w: &[ArrowName]) -> Vec<ArrowName> {
        w.iter()
            .flat_map(|a| self.images[a].iter().copied())
            .collect()
    }
}

/// `Some((a, b))` if `w` has length at least 2 and is a window of `... a b a b ...`.
pub fn fixed_point_form(w: &[u32]) -> Option<(u32, u32)> {
    let (&a, &b) = (w.first()?, w.get(1)?);
    if a == b {
        return None;
    }
    w.iter()
        .enumerate()
        .all(|(k, &x)| x == if k % 2 == 0 { a } else { b })
        .then_some((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_derivation_example() {
        let w = [1, 6, 7, 8, 7, 8, 5, 4, 5, 2];
        assert_eq!(derive_cyclic(4, 3, &w).unwrap(), vec![4, 3, 4, 7, 6, 1]);
        assert_eq!(derive(4, 3, &w).unwrap(), vec![4, 3, 4, 7, 6]);
    }

    #[test]
    fn vertical_word_derives_to_nothing() {
        assert!(derive(4, 3, &[1, 6]).unwrap().is_empty());
        assert!(matches!(
            derive(4, 3, &[1, 4]),
            Err(Error::NotAdmissible { position: 1 })
        ));
    }

    #[test]
    fn fixed_point_detection() {
        assert_eq!(fixed_point_form(&[1, 2, 1, 2, 1, 2]), Some((1, 2)));
        assert_eq!(fixed_point_form(&[1, 2, 1, 6]), None);
        assert_eq!(fixed_point_form(&[3]), None);
    }

    #[test]
    fn generation_annotation_example() {
        let gd = generation_diagram(4, 3, 1).unwrap();
        assert_eq!(gd.annotations[&(7, 9)], vec![3, 6]);
        assert_eq!(gd.precedents[&9], 6);
    }

    #[test]
    fn tr_example() {
        let t = SurfaceTables::new(4, 3).unwrap();
        let w = crate::diagrams::parse_arrow_word("r1 l2 v1").unwrap();
        assert_eq!(t.tr(0, &w).unwrap(), vec![1, 2, 1, 6]);
        assert_eq!(t.tr_inverse(0, &[1, 2, 1, 6]).unwrap(), w);
    }
}
