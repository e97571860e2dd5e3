//! Small-order brace census via regular subgroups of the holomorph.
//!
//! Braces with additive group `A` correspond to regular subgroups of
//! `Hol(A)`: if `S` is regular, sending each `a` to the unique `s_a` in `S`
//! with `s_a(0) = a` transports the subgroup's product onto the carrier as
//! `a·b := s_a(b)`.

use std::collections::BTreeMap;

use crate::brace::{brace_isomorphic, brace_profile, Brace};
use crate::error::BoundExceeded;
use crate::group::{validate_group, FiniteGroup};
use crate::maps::{holomorph, regular_subgroups, Holomorph};
use crate::subgroup::Subgroup;

/// Default order bound for the census.
pub const DEFAULT_CENSUS_LIMIT: usize = 8;

/// Cyclic factor lists of every abelian group of order `n`, one per
/// isomorphism class. Factors are prime powers in ascending order.
pub fn abelian_group_factorizations(n: usize) -> Vec<Vec<usize>> {
    assert!(n >= 1);
    let mut per_prime: Vec<Vec<Vec<usize>>> = Vec::new();
    for (p, e) in factorize(n) {
        let parts = partitions(e)
            .into_iter()
            .map(|part| part.into_iter().map(|k| p.pow(k as u32)).collect::<Vec<usize>>())
            .collect::<Vec<_>>();
        per_prime.push(parts);
    }
    let mut combos: Vec<Vec<usize>> = vec![Vec::new()];
    for parts in per_prime {
        let mut next = Vec::new();
        for c in &combos {
            for p in &parts {
                let mut merged = c.clone();
                merged.extend_from_slice(p);
                next.push(merged);
            }
        }
        combos = next;
    }
    for c in &mut combos {
        c.sort_unstable();
    }
    combos.sort();
    combos
}

fn factorize(mut n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Partitions of `k` with parts in non-increasing order, lexicographically
/// sorted.
fn partitions(k: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=k.min(max)).rev() {
            cur.push(part);
            rec(k - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, k, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Transports the product of a regular subgroup of the holomorph onto the
/// base carrier.
pub(crate) fn brace_from_regular_subgroup(
    a: &FiniteGroup,
    h: &Holomorph,
    s: &Subgroup,
) -> Brace {
    let n = a.order();
    debug_assert_eq!(s.order(), n);
    let mut by_target = vec![0u16; n];
    for &e in s.elements() {
        by_target[h.action[e as usize].apply(0)] = e;
    }
    let mut mul = vec![vec![0u16; n]; n];
    for x in 0..n {
        let act = &h.action[by_target[x] as usize];
        for y in 0..n {
            mul[x][y] = act.apply(y) as u16;
        }
    }
    let mul = validate_group(&mul).expect("regular subgroup transports to a group");
    Brace::from_groups(a.clone(), mul).expect("holomorph transport satisfies the brace axioms")
}

/// All braces of order `n` up to brace isomorphism.
///
/// Runs the regular-subgroup search over the holomorph of every abelian group
/// of order `n` and dedups with [`brace_isomorphic`], pre-keyed by the cheap
/// profile (element order pairs, socle order).
pub fn enumerate_braces(n: usize) -> Result<Vec<Brace>, BoundExceeded> {
    enumerate_braces_with_limit(n, DEFAULT_CENSUS_LIMIT)
}

pub fn enumerate_braces_with_limit(n: usize, limit: usize) -> Result<Vec<Brace>, BoundExceeded> {
    BoundExceeded::check("brace census", n, limit)?;
    let mut kept: Vec<Brace> = Vec::new();
    let mut buckets: BTreeMap<(Vec<(u16, u16)>, usize), Vec<usize>> = BTreeMap::new();
    for factors in abelian_group_factorizations(n) {
        let a = FiniteGroup::from_cyclic_factors(&factors);
        let h = holomorph(&a)?;
        for s in regular_subgroups(&h) {
            let b = brace_from_regular_subgroup(&a, &h, &s);
            let key = brace_profile(&b);
            let bucket = buckets.entry(key).or_default();
            let duplicate = bucket.iter().any(|&i| {
                brace_isomorphic(&kept[i], &b)
                    .expect("census braces are within the search bound")
                    .is_some()
            });
            if !duplicate {
                bucket.push(kept.len());
                kept.push(b);
            }
        }
    }
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brace::socle;

    #[test]
    fn factorizations_of_small_orders() {
        assert_eq!(abelian_group_factorizations(1), vec![Vec::<usize>::new()]);
        assert_eq!(abelian_group_factorizations(4), vec![vec![2, 2], vec![4]]);
        assert_eq!(abelian_group_factorizations(8), vec![vec![2, 2, 2], vec![2, 4], vec![8]]);
        assert_eq!(abelian_group_factorizations(12), vec![vec![2, 2, 3], vec![3, 4]]);
    }

    #[test]
    fn census_counts_at_small_orders() {
        // prime orders admit only the trivial brace: the λ image is a p-group
        // inside an automorphism group of order p-1
        let counts: Vec<usize> =
            (1..=7).map(|n| enumerate_braces(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 4, 1, 2, 1]);
    }

    #[test]
    fn census_of_order_4_contains_expected_structures() {
        let braces = enumerate_braces(4).unwrap();
        assert_eq!(braces.len(), 4);
        // two on Z/4 (socle orders 4 and 2), two on Z/2 x Z/2
        let mut seen: Vec<(usize, usize, bool)> = braces
            .iter()
            .map(|b| (b.add_group().element_order(1), socle(b).order(), b.is_trivial()))
            .collect();
        seen.sort_unstable();
        let trivial_count = seen.iter().filter(|&&(_, _, t)| t).count();
        assert_eq!(trivial_count, 2);
    }

    #[test]
    fn census_braces_of_order_6() {
        let braces = enumerate_braces(6).unwrap();
        assert_eq!(braces.len(), 2);
        let nontrivial = braces.iter().find(|b| !b.is_trivial()).unwrap();
        // additive Z/6, multiplicative Sym(3)
        assert!(nontrivial.add_group().is_abelian());
        assert!(!nontrivial.mul_group().is_abelian());
        assert_eq!(socle(nontrivial).order(), 3);
    }

    #[test]
    fn census_output_is_pairwise_nonisomorphic() {
        for n in [4usize, 6, 8] {
            let braces = enumerate_braces(n).unwrap();
            for i in 0..braces.len() {
                for j in i + 1..braces.len() {
                    assert_eq!(
                        brace_isomorphic(&braces[i], &braces[j]).unwrap(),
                        None,
                        "braces {i} and {j} of order {n}"
                    );
                }
            }
        }
    }

    #[test]
    fn census_of_order_8_has_27_classes() {
        assert_eq!(enumerate_braces(8).unwrap().len(), 27);
    }
}
