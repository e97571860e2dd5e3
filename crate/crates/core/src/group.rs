//! Finite groups presented by explicit Cayley tables.
//!
//! Elements are the indices `0..n-1` and the identity is always normalized to
//! index `0`, so a brace built on two such tables has its shared two-sided
//! identity as a structural fact rather than a runtime check.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::error::BoundExceeded;
use crate::perm::Perm;

/// A finite group on `{0..n-1}` with identity `0` and a row-major Cayley
/// table: `table[a*n + b]` is the product `a*b`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u16>,
    inv: Vec<u16>,
}

/// First group axiom violated by a candidate Cayley table, with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupViolation {
    #[error("empty table")]
    Empty,
    #[error("table is not square: row {row} has length {len}, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("entry out of range at ({row},{col}): {value} not in 0..{order}")]
    EntryOutOfRange { row: usize, col: usize, value: usize, order: usize },
    #[error("no two-sided identity element")]
    MissingIdentity,
    #[error("associativity fails at ({a},{b},{c}): ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("element {element} has no two-sided inverse")]
    MissingInverse { element: usize },
}

/// Checks every group axiom on `table` and returns the group with its
/// identity relabeled to index `0`, or the first violated axiom.
pub fn validate_group(table: &[Vec<u16>]) -> Result<FiniteGroup, GroupViolation> {
    let n = table.len();
    if n == 0 {
        return Err(GroupViolation::Empty);
    }
    for (row, r) in table.iter().enumerate() {
        if r.len() != n {
            return Err(GroupViolation::NotSquare { row, len: r.len(), expected: n });
        }
        for (col, &v) in r.iter().enumerate() {
            if (v as usize) >= n {
                return Err(GroupViolation::EntryOutOfRange {
                    row,
                    col,
                    value: v as usize,
                    order: n,
                });
            }
        }
    }
    let mut flat = Vec::with_capacity(n * n);
    for r in table {
        flat.extend_from_slice(r);
    }
    let op = |a: usize, b: usize| flat[a * n + b] as usize;

    let identity = (0..n)
        .find(|&e| (0..n).all(|x| op(e, x) == x && op(x, e) == x))
        .ok_or(GroupViolation::MissingIdentity)?;

    for a in 0..n {
        for b in 0..n {
            let ab = op(a, b);
            for c in 0..n {
                if op(ab, c) != op(a, op(b, c)) {
                    return Err(GroupViolation::NotAssociative { a, b, c });
                }
            }
        }
    }

    for a in 0..n {
        let b = (0..n).find(|&b| op(a, b) == identity);
        match b {
            Some(b) if op(b, a) == identity => {}
            _ => return Err(GroupViolation::MissingInverse { element: a }),
        }
    }

    // Relabel so the identity sits at index 0.
    if identity != 0 {
        let swap = |x: usize| {
            if x == 0 {
                identity
            } else if x == identity {
                0
            } else {
                x
            }
        };
        let mut relabeled = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                relabeled[swap(a) * n + swap(b)] = swap(op(a, b)) as u16;
            }
        }
        flat = relabeled;
    }
    Ok(FiniteGroup::from_flat_unchecked(n, flat))
}

impl FiniteGroup {
    fn from_flat_unchecked(order: usize, table: Vec<u16>) -> Self {
        let mut inv = vec![0u16; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] == 0 {
                    inv[a] = b as u16;
                    break;
                }
            }
        }
        FiniteGroup { order, table, inv }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.op(a, b) == self.op(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.op(x, a);
            k += 1;
        }
        k
    }

    /// The Cayley table as rows, e.g. for serialization.
    pub fn rows(&self) -> Vec<Vec<u16>> {
        (0..self.order)
            .map(|a| self.table[a * self.order..(a + 1) * self.order].to_vec())
            .collect()
    }

    /// The cyclic group of order `n` under addition mod `n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1 && n <= u16::MAX as usize);
        let mut table = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = ((a + b) % n) as u16;
            }
        }
        Self::from_flat_unchecked(n, table)
    }

    /// Direct product, indexed by `(a, b) -> a * other.order() + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Self {
        let n = self.order * other.order;
        assert!(n <= u16::MAX as usize);
        let mut table = vec![0u16; n * n];
        for a1 in 0..self.order {
            for b1 in 0..other.order {
                for a2 in 0..self.order {
                    for b2 in 0..other.order {
                        let x = a1 * other.order + b1;
                        let y = a2 * other.order + b2;
                        table[x * n + y] =
                            (self.op(a1, a2) * other.order + other.op(b1, b2)) as u16;
                    }
                }
            }
        }
        Self::from_flat_unchecked(n, table)
    }

    /// Product of cyclic groups, e.g. `[2, 4]` for Z/2 x Z/4. An empty factor
    /// list gives the trivial group.
    pub fn from_cyclic_factors(factors: &[usize]) -> Self {
        let mut g = FiniteGroup::cyclic(1);
        for &f in factors {
            g = g.direct_product(&FiniteGroup::cyclic(f));
        }
        g
    }

    /// Closure of a set of permutations under composition, as a group with
    /// elements indexed in discovery order (identity first).
    pub fn from_generating_perms(
        degree: usize,
        gens: &[Perm],
        limit: usize,
    ) -> Result<(FiniteGroup, Vec<Perm>), BoundExceeded> {
        let mut elems: Vec<Perm> = vec![Perm::identity(degree)];
        let mut index: BTreeMap<Perm, u16> = BTreeMap::new();
        index.insert(elems[0].clone(), 0);
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let next = elems[i].compose(g);
                if !index.contains_key(&next) {
                    if elems.len() >= limit || elems.len() >= u16::MAX as usize {
                        return Err(BoundExceeded {
                            what: "permutation group closure",
                            actual: elems.len() + 1,
                            bound: limit,
                        });
                    }
                    index.insert(next.clone(), elems.len() as u16);
                    elems.push(next);
                }
            }
            i += 1;
        }
        let n = elems.len();
        let mut table = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&elems[a].compose(&elems[b])];
            }
        }
        Ok((FiniteGroup::from_flat_unchecked(n, table), elems))
    }

    /// Transports the group structure along a relabeling of the carrier:
    /// `relabel` maps old labels to new ones. The identity moves with it.
    pub fn relabeled(&self, relabel: &Perm) -> Self {
        let n = self.order;
        let mut table = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                table[relabel.apply(a) * n + relabel.apply(b)] =
                    relabel.apply(self.op(a, b)) as u16;
            }
        }
        Self::from_flat_unchecked(n, table)
    }
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteGroup(order={})", self.order)
    }
}
