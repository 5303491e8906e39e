//! Permutations of the label alphabet `{1..N}`.

use serde::Serialize;
use std::fmt;

/// A permutation of `{1..N}`; `images[l - 1]` is the image of `l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (1..=n as u32).collect(),
        }
    }

    /// Panics unless `images` is a permutation of `1..=images.len()`.
    pub fn from_images(images: Vec<u32>) -> Self {
        let mut seen = vec![false; images.len()];
        for &v in &images {
            assert!(
                v >= 1 && (v as usize) <= images.len(),
                "image {v} out of range"
            );
            assert!(!seen[v as usize - 1], "image {v} repeated");
            seen[v as usize - 1] = true;
        }
        Self { images }
    }

    /// Builds a permutation of `{1..n}` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Self {
        let mut images: Vec<u32> = (1..=n as u32).collect();
        for c in cycles {
            for (k, &x) in c.iter().enumerate() {
                images[x as usize - 1] = c[(k + 1) % c.len()];
            }
        }
        Self::from_images(images)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, l: u32) -> u32 {
        self.images[l as usize - 1]
    }

    pub fn apply_word(&self, w: &[u32]) -> Vec<u32> {
        w.iter().map(|&l| self.apply(l)).collect()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// `self after other`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm {
            images: other.images.iter().map(|&l| self.apply(l)).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v as usize - 1] = i as u32 + 1;
        }
        Perm { images: inv }
    }

    pub fn pow(&self, k: usize) -> Perm {
        let mut out = Perm::identity(self.len());
        for _ in 0..k {
            out = self.compose(&out);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &v)| v as usize == i + 1)
    }

    /// Non-trivial cycles, each starting at its smallest element, sorted by that element.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 1..=self.len() as u32 {
            if seen[start as usize - 1] {
                continue;
            }
            let mut c = vec![start];
            seen[start as usize - 1] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x as usize - 1] = true;
                c.push(x);
                x = self.apply(x);
            }
            if c.len() > 1 {
                out.push(c);
            }
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let sep = if self.len() > 9 { " " } else { "" };
            let body: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", body.join(sep))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_notation_round_trip() {
        let p = Perm::from_cycles(9, &[&[1, 7], &[2, 9], &[3, 8], &[5, 6]]);
        assert_eq!(p.to_string(), "(17)(29)(38)(56)");
        assert!(p.compose(&p).is_identity());
    }

    #[test]
    fn compose_order() {
        let a = Perm::from_cycles(3, &[&[1, 2]]);
        let b = Perm::from_cycles(3, &[&[2, 3]]);
        assert_eq!(a.compose(&b).apply(2), 3);
        assert_eq!(a.compose(&b).apply(3), 1);
        assert_eq!(
            a.compose(&b).inverse().compose(&a.compose(&b)),
            Perm::identity(3)
        );
    }
}
