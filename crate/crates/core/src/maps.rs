//! Group homomorphisms, automorphisms of abelian groups, and the holomorph.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::error::BoundExceeded;
use crate::group::FiniteGroup;
use crate::perm::Perm;
use crate::subgroup::Subgroup;

/// Default bound on `|A|` for automorphism enumeration.
pub const DEFAULT_AUT_LIMIT: usize = 64;
/// Default bound on `|A| * |Aut(A)|` for holomorph construction.
pub const DEFAULT_HOLOMORPH_LIMIT: usize = 2000;

/// A homomorphism between two Cayley-table groups, stored by images.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct GroupMap {
    images: Vec<u16>,
    injective: bool,
    surjective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("image vector has length {got}, expected {expected}")]
    WrongLength { got: usize, expected: usize },
    #[error("image {value} out of range for target of order {order}")]
    ImageOutOfRange { value: usize, order: usize },
    #[error("not a homomorphism: images of {a}*{b} and {a},{b} disagree")]
    NotHomomorphism { a: usize, b: usize },
}

impl GroupMap {
    /// Validates `images` as a homomorphism `src -> dst` and records
    /// injectivity/surjectivity flags.
    pub fn new(src: &FiniteGroup, dst: &FiniteGroup, images: Vec<u16>) -> Result<Self, MapError> {
        if images.len() != src.order() {
            return Err(MapError::WrongLength { got: images.len(), expected: src.order() });
        }
        for &v in &images {
            if (v as usize) >= dst.order() {
                return Err(MapError::ImageOutOfRange { value: v as usize, order: dst.order() });
            }
        }
        for a in 0..src.order() {
            for b in 0..src.order() {
                let lhs = images[src.op(a, b)] as usize;
                let rhs = dst.op(images[a] as usize, images[b] as usize);
                if lhs != rhs {
                    return Err(MapError::NotHomomorphism { a, b });
                }
            }
        }
        let mut hit = vec![false; dst.order()];
        let mut injective = true;
        for &v in &images {
            if hit[v as usize] {
                injective = false;
            }
            hit[v as usize] = true;
        }
        let surjective = hit.iter().all(|&h| h);
        Ok(GroupMap { images, injective, surjective })
    }

    pub fn identity(n: usize) -> Self {
        GroupMap { images: (0..n as u16).collect(), injective: true, surjective: true }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> &[u16] {
        &self.images
    }

    pub fn is_injective(&self) -> bool {
        self.injective
    }

    pub fn is_surjective(&self) -> bool {
        self.surjective
    }

    pub fn is_bijective(&self) -> bool {
        self.injective && self.surjective
    }

    /// Elements of the source mapping to the identity.
    pub fn kernel_elements(&self) -> Vec<u16> {
        self.images
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == 0)
            .map(|(i, _)| i as u16)
            .collect()
    }

    pub fn as_perm(&self) -> Option<Perm> {
        if self.is_bijective() {
            Perm::from_images(self.images.clone())
        } else {
            None
        }
    }
}

/// A small generating set of an abelian group, found greedily by repeatedly
/// adjoining the element that grows the generated subgroup the most.
pub fn minimal_generating_set(a: &FiniteGroup) -> Vec<u16> {
    debug_assert!(a.is_abelian());
    let mut gens: Vec<u16> = Vec::new();
    let mut span = Subgroup::trivial();
    while span.order() < a.order() {
        let mut best: Option<(usize, u16)> = None;
        for e in 0..a.order() as u16 {
            if span.contains(e as usize) {
                continue;
            }
            let mut g2 = gens.clone();
            g2.push(e);
            let size = Subgroup::generated(a, &g2).order();
            if best.map(|(s, _)| size > s).unwrap_or(true) {
                best = Some((size, e));
            }
        }
        let (_, e) = best.expect("proper subgroup has an outside element");
        gens.push(e);
        span = Subgroup::generated(a, &gens);
    }
    gens
}

/// Precomputed data for extending maps level by level along a generating
/// chain `{0} = H_0 < H_1 < ... < H_k = A` of an abelian group.
pub(crate) struct AdditiveChain {
    pub gens: Vec<u16>,
    pub levels: Vec<ChainLevel>,
}

pub(crate) struct ChainLevel {
    /// `m`: minimal t >= 1 with `t*g` in the previous level's subgroup.
    pub m: usize,
    /// `m*g`, an element of the previous level.
    pub w: u16,
    /// New elements `(elem, base, t)` with `elem = base + t*g`, `base` in the
    /// previous level and `1 <= t < m`.
    pub new_elems: Vec<(u16, u16, u16)>,
}

pub(crate) fn additive_chain(a: &FiniteGroup) -> AdditiveChain {
    let gens = minimal_generating_set(a);
    let mut levels = Vec::with_capacity(gens.len());
    let mut prev: Vec<u16> = vec![0];
    let mut in_prev = vec![false; a.order()];
    in_prev[0] = true;
    for &g in &gens {
        let mut m = 1usize;
        let mut acc = g as usize;
        while !in_prev[acc] {
            m += 1;
            acc = a.op(acc, g as usize);
        }
        let w = acc as u16;
        let mut new_elems = Vec::new();
        for &base in &prev {
            let mut elem = base as usize;
            for t in 1..m {
                elem = a.op(elem, g as usize);
                new_elems.push((elem as u16, base, t as u16));
            }
        }
        for &(e, _, _) in &new_elems {
            in_prev[e as usize] = true;
        }
        let mut next = prev.clone();
        next.extend(new_elems.iter().map(|&(e, _, _)| e));
        next.sort_unstable();
        levels.push(ChainLevel { m, w, new_elems });
        prev = next;
    }
    debug_assert_eq!(prev.len(), a.order());
    AdditiveChain { gens, levels }
}

/// Enumerates every additive isomorphism `src -> dst` between abelian groups
/// of equal order, in lexicographic order of generator images. `filter` can
/// veto a generator image early; `visit` receives each full image vector and
/// returns `false` to stop the enumeration.
pub(crate) fn enumerate_additive_isos(
    src: &FiniteGroup,
    dst: &FiniteGroup,
    chain: &AdditiveChain,
    filter: &dyn Fn(usize, u16) -> bool,
    visit: &mut dyn FnMut(&[u16]) -> bool,
) {
    if src.order() != dst.order() {
        return;
    }
    let n = src.order();
    let mut images: Vec<u16> = vec![0; n];
    let mut used = vec![false; n];
    used[0] = true;
    let src_orders: Vec<usize> = (0..n).map(|x| src.element_order(x)).collect();
    let dst_orders: Vec<usize> = (0..n).map(|x| dst.element_order(x)).collect();
    rec(src, dst, chain, filter, visit, 0, &mut images, &mut used, &src_orders, &dst_orders);

    #[allow(clippy::too_many_arguments)]
    fn rec(
        src: &FiniteGroup,
        dst: &FiniteGroup,
        chain: &AdditiveChain,
        filter: &dyn Fn(usize, u16) -> bool,
        visit: &mut dyn FnMut(&[u16]) -> bool,
        level: usize,
        images: &mut Vec<u16>,
        used: &mut Vec<bool>,
        src_orders: &[usize],
        dst_orders: &[usize],
    ) -> bool {
        if level == chain.gens.len() {
            return visit(images);
        }
        let g = chain.gens[level] as usize;
        let lv = &chain.levels[level];
        for c in 0..dst.order() as u16 {
            if used[c as usize]
                || dst_orders[c as usize] != src_orders[g]
                || !filter(level, c)
            {
                continue;
            }
            // The extension is well-defined iff m*c equals the image of m*g.
            let mut mc = 0usize;
            for _ in 0..lv.m {
                mc = dst.op(mc, c as usize);
            }
            if mc != images[lv.w as usize] as usize {
                continue;
            }
            // t*c for t in 0..m; new_elems covers the generator itself (t=1).
            let mut tc = vec![0u16; lv.m];
            for t in 1..lv.m {
                tc[t] = dst.op(tc[t - 1] as usize, c as usize) as u16;
            }
            let mut placed: Vec<u16> = Vec::with_capacity(lv.new_elems.len());
            let mut ok = true;
            for &(elem, base, t) in lv.new_elems.iter() {
                let im = dst.op(images[base as usize] as usize, tc[t as usize] as usize);
                if used[im] {
                    ok = false;
                    break;
                }
                used[im] = true;
                images[elem as usize] = im as u16;
                placed.push(im as u16);
            }
            let keep_going = !ok
                || rec(
                    src, dst, chain, filter, visit, level + 1, images, used, src_orders,
                    dst_orders,
                );
            for &im in &placed {
                used[im as usize] = false;
            }
            if !keep_going {
                return false;
            }
        }
        true
    }
}

/// All automorphisms of the abelian group `a`, sorted by image vector (the
/// identity comes first).
pub fn abelian_automorphisms(a: &FiniteGroup) -> Result<Vec<GroupMap>, BoundExceeded> {
    abelian_automorphisms_capped(a, DEFAULT_AUT_LIMIT, usize::MAX).map(|v| v.expect("uncapped"))
}

/// As [`abelian_automorphisms`], returning `None` once more than `max_count`
/// automorphisms exist.
pub fn abelian_automorphisms_capped(
    a: &FiniteGroup,
    max_order: usize,
    max_count: usize,
) -> Result<Option<Vec<GroupMap>>, BoundExceeded> {
    BoundExceeded::check("automorphism enumeration", a.order(), max_order)?;
    assert!(a.is_abelian(), "automorphism enumeration requires an abelian group");
    let chain = additive_chain(a);
    let mut image_vecs: Vec<Vec<u16>> = Vec::new();
    let mut overflow = false;
    enumerate_additive_isos(a, a, &chain, &|_, _| true, &mut |images| {
        if image_vecs.len() >= max_count {
            overflow = true;
            return false;
        }
        image_vecs.push(images.to_vec());
        true
    });
    if overflow {
        return Ok(None);
    }
    image_vecs.sort_unstable();
    let maps = image_vecs
        .into_iter()
        .map(|im| GroupMap::new(a, a, im).expect("enumerated automorphism is a homomorphism"))
        .collect();
    Ok(Some(maps))
}

/// The automorphism group of an abelian group as a Cayley table (identity at
/// index 0), together with the automorphisms it indexes.
pub fn automorphism_group(a: &FiniteGroup) -> Result<(FiniteGroup, Vec<GroupMap>), BoundExceeded> {
    let auts = abelian_automorphisms(a)?;
    let index: BTreeMap<&[u16], u16> =
        auts.iter().enumerate().map(|(i, m)| (m.images(), i as u16)).collect();
    let k = auts.len();
    let mut table = vec![0u16; k * k];
    for (i, f) in auts.iter().enumerate() {
        for (j, g) in auts.iter().enumerate() {
            // composition f . g, applying g first
            let comp: Vec<u16> = (0..a.order()).map(|x| f.images()[g.apply(x)]).collect();
            table[i * k + j] = index[comp.as_slice()];
        }
    }
    let group = crate::group::validate_group(
        &(0..k).map(|i| table[i * k..(i + 1) * k].to_vec()).collect::<Vec<_>>(),
    )
    .expect("automorphism composition table is a group");
    Ok((group, auts))
}

/// The holomorph `A x| Aut(A)` with its natural action on `A`.
///
/// Element `a * |Aut| + f` is the pair `(a, f)`; multiplication is
/// `(a,f)(b,g) = (a + f(b), f.g)` and the action sends `x` to `a + f(x)`.
pub struct Holomorph {
    pub group: FiniteGroup,
    pub base: FiniteGroup,
    pub automorphisms: Vec<GroupMap>,
    /// Action of each holomorph element on the base carrier.
    pub action: Vec<Perm>,
    /// Embedding of the base: `a -> (a, id)`.
    pub embed_base: Vec<u16>,
    /// Embedding of the automorphism group: `f -> (0, f)`.
    pub embed_aut: Vec<u16>,
}

pub fn holomorph(a: &FiniteGroup) -> Result<Holomorph, BoundExceeded> {
    holomorph_with_limit(a, DEFAULT_HOLOMORPH_LIMIT)
}

pub fn holomorph_with_limit(a: &FiniteGroup, limit: usize) -> Result<Holomorph, BoundExceeded> {
    let max_auts = limit / a.order();
    let auts = abelian_automorphisms_capped(a, limit, max_auts)?.ok_or(BoundExceeded {
        what: "holomorph construction",
        actual: a.order() * (max_auts + 1),
        bound: limit,
    })?;
    let k = auts.len();
    let n = a.order();
    let order = n * k;
    BoundExceeded::check("holomorph construction", order, limit)?;
    let aut_index: BTreeMap<&[u16], u16> =
        auts.iter().enumerate().map(|(i, m)| (m.images(), i as u16)).collect();
    let mut table = vec![0u16; order * order];
    for a1 in 0..n {
        for f1 in 0..k {
            for a2 in 0..n {
                for f2 in 0..k {
                    let sum = a.op(a1, auts[f1].apply(a2));
                    let comp: Vec<u16> =
                        (0..n).map(|x| auts[f1].images()[auts[f2].apply(x)]).collect();
                    let fi = aut_index[comp.as_slice()] as usize;
                    table[(a1 * k + f1) * order + (a2 * k + f2)] = (sum * k + fi) as u16;
                }
            }
        }
    }
    let group = crate::group::validate_group(
        &(0..order).map(|i| table[i * order..(i + 1) * order].to_vec()).collect::<Vec<_>>(),
    )
    .expect("holomorph table is a group");
    let action: Vec<Perm> = (0..order)
        .map(|e| {
            let (ae, fe) = (e / k, e % k);
            Perm::from_images((0..n).map(|x| a.op(ae, auts[fe].apply(x)) as u16).collect())
                .expect("holomorph action is a permutation")
        })
        .collect();
    let embed_base = (0..n).map(|x| (x * k) as u16).collect();
    let embed_aut = (0..k).map(|f| f as u16).collect();
    Ok(Holomorph { group, base: a.clone(), automorphisms: auts, action, embed_base, embed_aut })
}

/// All subgroups of the holomorph of order `|A|` acting regularly on `A`.
///
/// Searches by closing partial subgroups that stay free on the base point 0:
/// at each step the minimal base point not yet in the orbit of 0 picks the
/// candidate generators.
pub fn regular_subgroups(h: &Holomorph) -> Vec<Subgroup> {
    let n = h.base.order();
    let order = h.group.order();
    if n == 1 {
        return vec![Subgroup::trivial()];
    }
    // bucket holomorph elements by their image of the base point 0
    let mut by_image: Vec<Vec<u16>> = vec![Vec::new(); n];
    for e in 0..order {
        by_image[h.action[e].apply(0)].push(e as u16);
    }
    let mut found: BTreeSet<Vec<u16>> = BTreeSet::new();
    let mut seen: BTreeSet<Vec<u16>> = BTreeSet::new();
    let start = vec![0u16];
    seen.insert(start.clone());
    let mut stack = vec![start];
    while let Some(s) = stack.pop() {
        if s.len() == n {
            found.insert(s);
            continue;
        }
        let mut covered = vec![false; n];
        for &e in &s {
            covered[h.action[e as usize].apply(0)] = true;
        }
        let target = (0..n).find(|&x| !covered[x]).expect("incomplete orbit");
        for &c in &by_image[target] {
            if let Some(t) = close_free(h, &s, c, n) {
                if seen.insert(t.clone()) {
                    stack.push(t);
                }
            }
        }
    }
    found.into_iter().map(|elems| Subgroup::new(&h.group, elems).expect("closed set")).collect()
}

/// Closes `base + {extra}` under the holomorph product, returning `None` as
/// soon as the set stops being free at the base point 0 or exceeds size `n`.
fn close_free(h: &Holomorph, base: &[u16], extra: u16, n: usize) -> Option<Vec<u16>> {
    let order = h.group.order();
    let mut member = vec![false; order];
    let mut image_used = vec![false; n];
    let mut list: Vec<u16> = Vec::with_capacity(n);
    for &e in base.iter().chain(std::iter::once(&extra)) {
        if member[e as usize] {
            continue;
        }
        let img = h.action[e as usize].apply(0);
        if image_used[img] {
            return None;
        }
        member[e as usize] = true;
        image_used[img] = true;
        list.push(e);
    }
    let mut i = 0;
    while i < list.len() {
        let x = list[i] as usize;
        let mut j = 0;
        while j < list.len() {
            let y = list[j] as usize;
            for p in [h.group.op(x, y), h.group.op(y, x)] {
                if !member[p] {
                    if list.len() >= n {
                        return None;
                    }
                    let img = h.action[p].apply(0);
                    if image_used[img] {
                        return None;
                    }
                    member[p] = true;
                    image_used[img] = true;
                    list.push(p as u16);
                }
            }
            j += 1;
        }
        i += 1;
    }
    list.sort_unstable();
    Some(list)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroup::subgroups_with_limit;

    #[test]
    fn aut_z5_has_four_elements() {
        let auts = abelian_automorphisms(&FiniteGroup::cyclic(5)).unwrap();
        assert_eq!(auts.len(), 4);
        assert!(auts[0].as_perm().unwrap().is_identity());
    }

    #[test]
    fn aut_z8_has_four_elements() {
        let auts = abelian_automorphisms(&FiniteGroup::cyclic(8)).unwrap();
        assert_eq!(auts.len(), 4);
        // units 1,3,5,7 as multiplication maps
        let firsts: Vec<usize> = auts.iter().map(|m| m.apply(1)).collect();
        assert_eq!(firsts, vec![1, 3, 5, 7]);
    }

    #[test]
    fn aut_klein_group_has_six_elements() {
        let v = FiniteGroup::from_cyclic_factors(&[2, 2]);
        assert_eq!(abelian_automorphisms(&v).unwrap().len(), 6);
    }

    #[test]
    fn automorphism_group_table_composes() {
        let v = FiniteGroup::from_cyclic_factors(&[2, 2]);
        let (aut, maps) = automorphism_group(&v).unwrap();
        assert_eq!(aut.order(), 6);
        assert!(!aut.is_abelian()); // GL(2,2) is Sym(3)
        assert!(maps[0].as_perm().unwrap().is_identity());
    }

    #[test]
    fn holomorph_orders() {
        assert_eq!(holomorph(&FiniteGroup::cyclic(3)).unwrap().group.order(), 6);
        assert_eq!(holomorph(&FiniteGroup::cyclic(4)).unwrap().group.order(), 8);
        assert_eq!(
            holomorph(&FiniteGroup::from_cyclic_factors(&[2, 2])).unwrap().group.order(),
            24
        );
    }

    #[test]
    fn holomorph_action_is_a_faithful_homomorphism() {
        for a in [FiniteGroup::cyclic(4), FiniteGroup::from_cyclic_factors(&[2, 2])] {
            let h = holomorph(&a).unwrap();
            let order = h.group.order();
            for x in 0..order {
                for y in 0..order {
                    assert_eq!(
                        h.action[h.group.op(x, y)],
                        h.action[x].compose(&h.action[y]),
                        "action must be a homomorphism"
                    );
                }
            }
            let distinct: BTreeSet<&Perm> = h.action.iter().collect();
            assert_eq!(distinct.len(), order, "action must be injective");
        }
    }

    #[test]
    fn regular_subgroups_of_prime_holomorphs_are_unique() {
        for p in [2usize, 3, 5, 7] {
            let h = holomorph(&FiniteGroup::cyclic(p)).unwrap();
            let regs = regular_subgroups(&h);
            assert_eq!(regs.len(), 1, "p = {p}");
            assert_eq!(regs[0].order(), p);
        }
    }

    #[test]
    fn regular_subgroups_match_lattice_filter_oracle() {
        // independent route: enumerate the whole subgroup lattice, then filter
        for a in [FiniteGroup::cyclic(4), FiniteGroup::cyclic(5), FiniteGroup::from_cyclic_factors(&[2, 2])] {
            let h = holomorph(&a).unwrap();
            let n = a.order();
            let all = subgroups_with_limit(&h.group, h.group.order()).unwrap();
            let oracle: Vec<_> = all
                .into_iter()
                .filter(|s| {
                    s.order() == n && {
                        let mut hit = vec![false; n];
                        for &e in s.elements() {
                            hit[h.action[e as usize].apply(0)] = true;
                        }
                        hit.iter().all(|&x| x)
                    }
                })
                .collect();
            assert_eq!(regular_subgroups(&h), oracle);
        }
    }

    #[test]
    fn translations_are_always_regular() {
        let a = FiniteGroup::cyclic(4);
        let h = holomorph(&a).unwrap();
        let translations = Subgroup::new(&h.group, h.embed_base.clone()).unwrap();
        assert!(regular_subgroups(&h).contains(&translations));
    }

    #[test]
    fn minimal_generating_sets_are_small() {
        assert_eq!(minimal_generating_set(&FiniteGroup::cyclic(8)).len(), 1);
        assert_eq!(minimal_generating_set(&FiniteGroup::from_cyclic_factors(&[2, 2, 2])).len(), 3);
        assert_eq!(minimal_generating_set(&FiniteGroup::from_cyclic_factors(&[2, 4])).len(), 2);
    }
}
