//! Dense permutations of `{0..n-1}`.

use std::fmt;

/// A permutation stored as its image vector: `images[x]` is where `x` goes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<u16>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n as u16).collect(),
        }
    }

    /// Builds a permutation from an image vector, or `None` if it is not a
    /// bijection of `{0..len-1}`.
    pub fn from_images(images: Vec<u16>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if (v as usize) >= n || seen[v as usize] {
                return None;
            }
            seen[v as usize] = true;
        }
        Some(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> &[u16] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// Function composition: `self.compose(&g)` applies `g` first, then `self`.
    pub fn compose(&self, first: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), first.degree());
        Perm {
            images: first.images.iter().map(|&v| self.images[v as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u16; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v as usize] = i as u16;
        }
        Perm { images }
    }

    /// Cycle lengths in decreasing order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles_with_fixed().iter().map(|c| c.len()).collect();
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    /// Non-trivial cycles, each starting at its minimum, ordered by minimum.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        self.cycles_with_fixed()
            .into_iter()
            .filter(|c| c.len() > 1)
            .collect()
    }

    fn cycles_with_fixed(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_applies_right_factor_first() {
        // g: 0->1->2->0, h: swap 0,1
        let g = Perm::from_images(vec![1, 2, 0]).unwrap();
        let h = Perm::from_images(vec![1, 0, 2]).unwrap();
        let gh = g.compose(&h);
        assert_eq!(gh.apply(0), g.apply(h.apply(0)));
        assert_eq!(gh.images(), &[2, 1, 0]);
    }

    #[test]
    fn inverse_round_trips() {
        let g = Perm::from_images(vec![3, 0, 2, 4, 1]).unwrap();
        assert!(g.compose(&g.inverse()).is_identity());
        assert!(g.inverse().compose(&g).is_identity());
    }

    #[test]
    fn from_images_rejects_non_bijections() {
        assert!(Perm::from_images(vec![0, 0, 1]).is_none());
        assert!(Perm::from_images(vec![0, 3, 1]).is_none());
    }

    #[test]
    fn cycle_type_counts_fixed_points() {
        let g = Perm::from_images(vec![1, 0, 2, 3]).unwrap();
        assert_eq!(g.cycle_type(), vec![2, 1, 1]);
        assert_eq!(format!("{g}"), "(0 1)");
    }
}
