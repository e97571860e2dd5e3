//! Subgroups of a Cayley-table group: enumeration, cores, cosets.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::error::BoundExceeded;
use crate::group::FiniteGroup;

/// Default order bound for full subgroup-lattice enumeration.
pub const DEFAULT_SUBGROUP_LIMIT: usize = 64;

/// A subgroup of some parent group, canonically a strictly increasing element
/// list that contains the identity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Subgroup {
    elems: Vec<u16>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubgroupError {
    #[error("element {element} is not a carrier element of the parent group")]
    OutOfRange { element: usize },
    #[error("set is not closed: {a}*{b} lies outside it")]
    NotClosed { a: usize, b: usize },
    #[error("set does not contain the identity")]
    MissingIdentity,
    #[error("not a subgroup of the parent group")]
    NotASubgroup,
}

impl Subgroup {
    /// Validates `elems` as a subgroup of `g` and returns it in canonical
    /// (sorted, deduplicated) form.
    pub fn new(g: &FiniteGroup, mut elems: Vec<u16>) -> Result<Self, SubgroupError> {
        elems.sort_unstable();
        elems.dedup();
        for &e in &elems {
            if (e as usize) >= g.order() {
                return Err(SubgroupError::OutOfRange { element: e as usize });
            }
        }
        if elems.binary_search(&0).is_err() {
            return Err(SubgroupError::MissingIdentity);
        }
        for &a in &elems {
            for &b in &elems {
                let ab = g.op(a as usize, b as usize) as u16;
                if elems.binary_search(&ab).is_err() {
                    return Err(SubgroupError::NotClosed { a: a as usize, b: b as usize });
                }
            }
        }
        Ok(Subgroup { elems })
    }

    pub fn trivial() -> Self {
        Subgroup { elems: vec![0] }
    }

    pub fn full(g: &FiniteGroup) -> Self {
        Subgroup { elems: (0..g.order() as u16).collect() }
    }

    /// Subgroup generated by `gens`, computed by multiplicative closure.
    pub fn generated(g: &FiniteGroup, gens: &[u16]) -> Self {
        Subgroup { elems: close(g, gens) }
    }

    pub fn elements(&self) -> &[u16] {
        &self.elems
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elems.binary_search(&(x as u16)).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elems.len() == 1
    }

    pub fn index_in(&self, g: &FiniteGroup) -> usize {
        g.order() / self.order()
    }

    /// The conjugate `x * self * x^-1`.
    pub fn conjugate_by(&self, g: &FiniteGroup, x: usize) -> Subgroup {
        let xi = g.inv(x);
        let mut elems: Vec<u16> =
            self.elems.iter().map(|&a| g.op(g.op(x, a as usize), xi) as u16).collect();
        elems.sort_unstable();
        Subgroup { elems }
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let other_set: BTreeSet<u16> = other.elems.iter().copied().collect();
        Subgroup {
            elems: self.elems.iter().copied().filter(|e| other_set.contains(e)).collect(),
        }
    }

    pub fn is_normal_in(&self, g: &FiniteGroup) -> bool {
        (0..g.order()).all(|x| self.conjugate_by(g, x) == *self)
    }

    /// True if `self` is a subgroup of `g` (validates closure).
    pub fn is_subgroup_of(&self, g: &FiniteGroup) -> bool {
        Subgroup::new(g, self.elems.clone()).map(|s| s == *self).unwrap_or(false)
    }
}

fn close(g: &FiniteGroup, gens: &[u16]) -> Vec<u16> {
    let n = g.order();
    let mut member = vec![false; n];
    let mut list: Vec<u16> = Vec::new();
    member[0] = true;
    list.push(0);
    for &x in gens {
        if !member[x as usize] {
            member[x as usize] = true;
            list.push(x);
        }
    }
    let mut i = 0;
    while i < list.len() {
        let x = list[i] as usize;
        let mut j = 0;
        while j < list.len() {
            let y = list[j] as usize;
            for p in [g.op(x, y), g.op(y, x)] {
                if !member[p] {
                    member[p] = true;
                    list.push(p as u16);
                }
            }
            j += 1;
        }
        i += 1;
    }
    list.sort_unstable();
    list
}

/// All subgroups of `g`, canonically sorted by (order, elements).
///
/// Works by breadth-first closure: every known subgroup is extended by every
/// outside element, so each subgroup is reached along a chain of one-generator
/// extensions.
pub fn subgroups(g: &FiniteGroup) -> Result<Vec<Subgroup>, BoundExceeded> {
    subgroups_with_limit(g, DEFAULT_SUBGROUP_LIMIT)
}

pub fn subgroups_with_limit(
    g: &FiniteGroup,
    max_order: usize,
) -> Result<Vec<Subgroup>, BoundExceeded> {
    BoundExceeded::check("subgroup enumeration", g.order(), max_order)?;
    let mut seen: BTreeSet<Vec<u16>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<u16>> = VecDeque::new();
    let trivial = vec![0u16];
    seen.insert(trivial.clone());
    queue.push_back(trivial);
    while let Some(s) = queue.pop_front() {
        for x in 1..g.order() as u16 {
            if s.binary_search(&x).is_ok() {
                continue;
            }
            let mut gens = s.clone();
            gens.push(x);
            let t = close(g, &gens);
            if seen.insert(t.clone()) {
                queue.push_back(t);
            }
        }
    }
    let mut out: Vec<Subgroup> = seen.into_iter().map(|elems| Subgroup { elems }).collect();
    out.sort_by(|a, b| (a.order(), &a.elems).cmp(&(b.order(), &b.elems)));
    Ok(out)
}

/// The core of `k` in `g`: the largest normal subgroup of `g` contained in
/// `k`, computed as the intersection of all conjugates of `k`.
pub fn subgroup_core(g: &FiniteGroup, k: &Subgroup) -> Result<Subgroup, SubgroupError> {
    if !k.is_subgroup_of(g) {
        return Err(SubgroupError::NotASubgroup);
    }
    let mut core = k.clone();
    for x in 1..g.order() {
        if core.is_trivial() {
            break;
        }
        core = core.intersect(&k.conjugate_by(g, x));
    }
    Ok(core)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("group is not abelian: {a}+{b} != {b}+{a}")]
pub struct NotAbelian {
    pub a: usize,
    pub b: usize,
}

/// True iff `set` generates all of the abelian group `a`.
pub fn additive_generates(a: &FiniteGroup, set: &[u16]) -> Result<bool, NotAbelian> {
    for x in 0..a.order() {
        for y in x + 1..a.order() {
            if a.op(x, y) != a.op(y, x) {
                return Err(NotAbelian { a: x, b: y });
            }
        }
    }
    Ok(close(a, set).len() == a.order())
}

/// Left cosets of `k` in `g`, each sorted, ordered by minimal element. The
/// minimal element of each coset is its canonical representative.
pub fn left_cosets(g: &FiniteGroup, k: &Subgroup) -> Vec<Vec<u16>> {
    let n = g.order();
    let mut assigned = vec![false; n];
    let mut cosets = Vec::with_capacity(n / k.order());
    for rep in 0..n {
        if assigned[rep] {
            continue;
        }
        let mut coset: Vec<u16> =
            k.elements().iter().map(|&a| g.op(rep, a as usize) as u16).collect();
        coset.sort_unstable();
        for &e in &coset {
            assigned[e as usize] = true;
        }
        cosets.push(coset);
    }
    cosets
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm;

    fn sym3() -> FiniteGroup {
        let gens = [
            Perm::from_images(vec![1, 0, 2]).unwrap(),
            Perm::from_images(vec![1, 2, 0]).unwrap(),
        ];
        FiniteGroup::from_generating_perms(3, &gens, 100).unwrap().0
    }

    /// Independent oracle: test every subset of the carrier directly.
    fn subgroups_by_subset_scan(g: &FiniteGroup) -> Vec<Vec<u16>> {
        let n = g.order();
        assert!(n <= 16);
        let mut out = Vec::new();
        'subset: for mask in 0u32..(1 << n) {
            if mask & 1 == 0 {
                continue;
            }
            let elems: Vec<u16> = (0..n as u16).filter(|&e| mask >> e & 1 == 1).collect();
            for &a in &elems {
                for &b in &elems {
                    let ab = g.op(a as usize, b as usize) as u16;
                    if elems.binary_search(&ab).is_err() {
                        continue 'subset;
                    }
                }
            }
            out.push(elems);
        }
        out.sort_by(|a, b| (a.len(), a.clone()).cmp(&(b.len(), b.clone())));
        out
    }

    #[test]
    fn z4_has_three_subgroups() {
        let g = FiniteGroup::cyclic(4);
        let subs = subgroups(&g).unwrap();
        let elems: Vec<_> = subs.iter().map(|s| s.elements().to_vec()).collect();
        assert_eq!(elems, vec![vec![0], vec![0, 2], vec![0, 1, 2, 3]]);
    }

    #[test]
    fn klein_group_has_five_subgroups() {
        let g = FiniteGroup::from_cyclic_factors(&[2, 2]);
        assert_eq!(subgroups(&g).unwrap().len(), 5);
    }

    #[test]
    fn sym3_subgroups_match_subset_scan_oracle() {
        let g = sym3();
        let subs = subgroups(&g).unwrap();
        let oracle = subgroups_by_subset_scan(&g);
        assert_eq!(oracle.len(), 6);
        let got: Vec<_> = subs.iter().map(|s| s.elements().to_vec()).collect();
        assert_eq!(got, oracle);
    }

    #[test]
    fn subgroup_list_is_closed_under_intersection() {
        for g in [sym3(), FiniteGroup::cyclic(8), FiniteGroup::from_cyclic_factors(&[2, 4])] {
            let subs = subgroups(&g).unwrap();
            for a in &subs {
                for b in &subs {
                    let i = a.intersect(b);
                    assert!(subs.contains(&i), "intersection missing from lattice");
                }
            }
        }
    }

    #[test]
    fn core_in_abelian_group_is_the_subgroup_itself() {
        let g = FiniteGroup::cyclic(8);
        for k in subgroups(&g).unwrap() {
            assert_eq!(subgroup_core(&g, &k).unwrap(), k);
        }
    }

    #[test]
    fn core_of_transposition_subgroup_in_sym3_is_trivial() {
        let g = sym3();
        let k = subgroups(&g)
            .unwrap()
            .into_iter()
            .find(|s| s.order() == 2)
            .unwrap();
        // oracle: intersect the conjugates directly
        let mut expected = k.clone();
        for x in 0..g.order() {
            expected = expected.intersect(&k.conjugate_by(&g, x));
        }
        let core = subgroup_core(&g, &k).unwrap();
        assert_eq!(core, expected);
        assert!(core.is_trivial());
    }

    #[test]
    fn core_of_normal_subgroup_is_itself() {
        let g = sym3();
        let a3 = subgroups(&g)
            .unwrap()
            .into_iter()
            .find(|s| s.order() == 3)
            .unwrap();
        assert!(a3.is_normal_in(&g));
        assert_eq!(subgroup_core(&g, &a3).unwrap(), a3);
    }

    #[test]
    fn core_properties_across_sym3_lattice() {
        let g = sym3();
        let subs = subgroups(&g).unwrap();
        for k in &subs {
            let core = subgroup_core(&g, k).unwrap();
            assert!(core.is_normal_in(&g));
            assert!(core.elements().iter().all(|&e| k.contains(e as usize)));
            // maximality: every normal subgroup inside k sits inside the core
            for n in &subs {
                if n.is_normal_in(&g) && n.elements().iter().all(|&e| k.contains(e as usize)) {
                    assert!(n.elements().iter().all(|&e| core.contains(e as usize)));
                }
            }
        }
    }

    #[test]
    fn additive_generation_in_cyclic_groups() {
        let z4 = FiniteGroup::cyclic(4);
        assert!(additive_generates(&z4, &[1]).unwrap());
        assert!(!additive_generates(&z4, &[2]).unwrap());
        let v = FiniteGroup::from_cyclic_factors(&[2, 2]);
        // (1,0) has index 2, (0,1) has index 1
        assert!(additive_generates(&v, &[2, 1]).unwrap());
        assert!(!additive_generates(&v, &[1]).unwrap());
    }

    #[test]
    fn additive_generates_rejects_nonabelian() {
        assert!(additive_generates(&sym3(), &[1]).is_err());
    }

    #[test]
    fn cosets_partition_the_group() {
        let g = sym3();
        for k in subgroups(&g).unwrap() {
            let cosets = left_cosets(&g, &k);
            assert_eq!(cosets.len(), k.index_in(&g));
            let mut all: Vec<u16> = cosets.concat();
            all.sort_unstable();
            assert_eq!(all, (0..g.order() as u16).collect::<Vec<_>>());
        }
    }

    #[test]
    fn subgroup_bound_is_reported() {
        let g = FiniteGroup::cyclic(8);
        let err = subgroups_with_limit(&g, 4).unwrap_err();
        assert_eq!(err.bound, 4);
        assert_eq!(err.actual, 8);
    }
}
