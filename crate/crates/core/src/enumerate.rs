//! Enumeration drivers: all valid configurations over a brace up to a point
//! budget, their isomorphism classes, the exhaustive small-size solution
//! search, and the completeness cross-check between the two.

use std::sync::Arc;

use thiserror::Error;

use crate::basic::is_basic_ctx;
use crate::brace::{Brace, BraceContext};
use crate::census::enumerate_braces;
use crate::error::BoundExceeded;
use crate::iso::{solutions_isomorphic, solutions_isomorphic_bruteforce_with_limit, IsoError};
use crate::perm::Perm;
use crate::solution::{
    construct_solution_ctx, permutation_group, validate_config_ctx, verify_solution, Solution,
    SolutionConfig,
};
use crate::subgroup::{subgroups_with_limit, Subgroup};

/// Default brace-order bound for enumeration.
pub const DEFAULT_ENUMERATE_BRACE_LIMIT: usize = 12;
/// Default point budget bound for enumeration.
pub const DEFAULT_ENUMERATE_POINTS_LIMIT: usize = 16;
/// Hard point bound for the exhaustive σ-assignment search.
pub const DEFAULT_BRUTE_FORCE_POINTS: usize = 4;
/// Default size bound for the completeness check.
pub const DEFAULT_COMPLETENESS_POINTS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error(transparent)]
    Bound(#[from] BoundExceeded),
    #[error(transparent)]
    Iso(#[from] IsoError),
}

/// Every valid configuration over `brace` with at most `max_points` points,
/// in deterministic order. With `basic_only`, families never repeat a
/// subgroup (a duplicate is always deletable) and only basic configurations
/// are kept.
pub fn enumerate_configs(
    brace: &Arc<Brace>,
    max_points: usize,
    basic_only: bool,
) -> Result<Vec<SolutionConfig>, EnumerateError> {
    BoundExceeded::check("enumeration brace order", brace.order(), DEFAULT_ENUMERATE_BRACE_LIMIT)?;
    BoundExceeded::check("enumeration point budget", max_points, DEFAULT_ENUMERATE_POINTS_LIMIT)?;
    let mut ctx = BraceContext::new(brace);
    let n = brace.order();
    let orbit_count = ctx.decomposition.len();
    let all_subs = subgroups_with_limit(brace.mul_group(), n)?;
    // subgroups of each stabilizer, with coset-count costs
    let stab_subs: Vec<Vec<(Subgroup, usize)>> = (0..orbit_count)
        .map(|i| {
            let stab = ctx.decomposition.stabilizer(i);
            all_subs
                .iter()
                .filter(|s| s.elements().iter().all(|&e| stab.contains(e as usize)))
                .map(|s| (s.clone(), n / s.order()))
                .collect()
        })
        .collect();
    let min_cost: Vec<usize> = (0..orbit_count)
        .map(|i| n / ctx.decomposition.stabilizer(i).order())
        .collect();

    let mut out: Vec<SolutionConfig> = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    subsets(
        brace,
        &mut ctx,
        &stab_subs,
        &min_cost,
        &all_subs,
        max_points,
        basic_only,
        0,
        0,
        &mut chosen,
        &mut out,
    );
    out.sort_by_key(|cfg| cfg.canonical_key());
    return Ok(out);

    #[allow(clippy::too_many_arguments)]
    fn subsets(
        brace: &Arc<Brace>,
        ctx: &mut BraceContext,
        stab_subs: &[Vec<(Subgroup, usize)>],
        min_cost: &[usize],
        all_subs: &[Subgroup],
        budget: usize,
        basic_only: bool,
        next_orbit: usize,
        committed_cost: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<SolutionConfig>,
    ) {
        if next_orbit == stab_subs.len() {
            if chosen.is_empty() {
                return;
            }
            // the union of the chosen orbits must generate (G,+)
            let x: Vec<u16> = chosen
                .iter()
                .flat_map(|&i| ctx.decomposition.orbit(i).iter().copied())
                .collect();
            let generates =
                crate::subgroup::additive_generates(brace.add_group(), &x)
                    .expect("brace addition is abelian");
            if !generates {
                return;
            }
            let mut families: Vec<Vec<Subgroup>> = vec![Vec::new(); chosen.len()];
            fill_families(
                brace, ctx, stab_subs, all_subs, budget, basic_only, chosen, 0, &mut families,
                out,
            );
            return;
        }
        // exclude this orbit
        subsets(
            brace,
            ctx,
            stab_subs,
            min_cost,
            all_subs,
            budget,
            basic_only,
            next_orbit + 1,
            committed_cost,
            chosen,
            out,
        );
        // include it if its cheapest family still fits
        if committed_cost + min_cost[next_orbit] <= budget {
            chosen.push(next_orbit);
            subsets(
                brace,
                ctx,
                stab_subs,
                min_cost,
                all_subs,
                budget,
                basic_only,
                next_orbit + 1,
                committed_cost + min_cost[next_orbit],
                chosen,
                out,
            );
            chosen.pop();
        }
    }

    /// Chooses a family per chosen orbit: a non-empty non-decreasing sequence
    /// of stabilizer subgroups (strictly increasing when basic-only), within
    /// the shared point budget.
    #[allow(clippy::too_many_arguments)]
    fn fill_families(
        brace: &Arc<Brace>,
        ctx: &mut BraceContext,
        stab_subs: &[Vec<(Subgroup, usize)>],
        all_subs: &[Subgroup],
        budget_left: usize,
        basic_only: bool,
        chosen: &[usize],
        pos: usize,
        families: &mut Vec<Vec<Subgroup>>,
        out: &mut Vec<SolutionConfig>,
    ) {
        if pos == chosen.len() {
            let cfg = SolutionConfig::new(
                brace.clone(),
                chosen.to_vec(),
                families.clone(),
            );
            if validate_config_ctx(&cfg, ctx).is_ok()
                && (!basic_only
                    || is_basic_ctx(&cfg, ctx, Some(all_subs)).unwrap_or(false))
            {
                out.push(cfg);
            }
            return;
        }
        // budget reserved for the remaining orbits (cheapest family each)
        let reserve: usize = chosen[pos + 1..]
            .iter()
            .map(|&i| stab_subs[i].iter().map(|&(_, c)| c).min().unwrap_or(usize::MAX))
            .sum();
        let options = &stab_subs[chosen[pos]];
        fn pick(
            options: &[(Subgroup, usize)],
            from: usize,
            budget: usize,
            basic_only: bool,
            family: &mut Vec<Subgroup>,
            then: &mut dyn FnMut(&mut Vec<Subgroup>, usize),
        ) {
            for idx in from..options.len() {
                let (sub, cost) = &options[idx];
                if *cost > budget {
                    continue;
                }
                family.push(sub.clone());
                then(family, budget - cost);
                let next_from = if basic_only { idx + 1 } else { idx };
                pick(options, next_from, budget - cost, basic_only, family, then);
                family.pop();
            }
        }
        if budget_left < reserve {
            return;
        }
        let local_budget = budget_left - reserve;
        let mut family: Vec<Subgroup> = Vec::new();
        // each pushed prefix is a complete candidate family for this orbit
        let mut recurse = |family: &mut Vec<Subgroup>, remaining: usize| {
            families[pos] = family.clone();
            let used = local_budget - remaining;
            fill_families(
                brace,
                ctx,
                stab_subs,
                all_subs,
                budget_left - used,
                basic_only,
                chosen,
                pos + 1,
                families,
                out,
            );
            families[pos].clear();
        };
        pick(options, 0, local_budget, basic_only, &mut family, &mut recurse);
    }
}

/// Isomorphism classes of solutions over `brace` with at most `max_points`
/// points: every valid configuration is constructed and classes are deduped
/// with the brace-automorphism decision procedure. Output is ordered by
/// (point count, configuration key).
pub fn enumerate_solutions(
    brace: &Arc<Brace>,
    max_points: usize,
    basic_only: bool,
) -> Result<Vec<(SolutionConfig, Solution)>, EnumerateError> {
    let configs = enumerate_configs(brace, max_points, basic_only)?;
    let mut ctx = BraceContext::new(brace);
    let mut kept: Vec<(SolutionConfig, Solution, Vec<Vec<usize>>)> = Vec::new();
    for cfg in configs {
        let sol = construct_solution_ctx(&cfg, &mut ctx)
            .expect("enumerated configurations are valid");
        let key = sol.cycle_type_key();
        let mut duplicate = false;
        for (kcfg, _, kkey) in &kept {
            if *kkey == key && solutions_isomorphic(kcfg, &cfg)?.is_some() {
                duplicate = true;
                break;
            }
        }
        if !duplicate {
            kept.push((cfg, sol, key));
        }
    }
    let mut out: Vec<(SolutionConfig, Solution)> =
        kept.into_iter().map(|(c, s, _)| (c, s)).collect();
    out.sort_by_key(|(c, _)| c.canonical_key());
    Ok(out)
}

/// Exhaustive search over all σ-assignments on `m` points: keeps the
/// families whose induced map is involutive, non-degenerate and
/// braid-valid, deduped up to isomorphism.
pub fn brute_force_all_solutions(m: usize) -> Result<Vec<Solution>, BoundExceeded> {
    BoundExceeded::check("exhaustive solution search", m, DEFAULT_BRUTE_FORCE_POINTS)?;
    let perms = all_perms(m);
    let mut assignment = vec![0usize; m];
    let mut kept: Vec<Solution> = Vec::new();
    let mut keys: Vec<Vec<Vec<usize>>> = Vec::new();
    loop {
        let rows: Vec<Vec<u16>> =
            assignment.iter().map(|&i| perms[i].images().to_vec()).collect();
        let sol = Solution::from_sigma_rows(rows).expect("rows are permutations");
        if verify_solution(&sol).all() {
            let key = sol.cycle_type_key();
            let duplicate = kept.iter().zip(&keys).any(|(k, kk)| {
                *kk == key
                    && solutions_isomorphic_bruteforce_with_limit(k, &sol, m)
                        .expect("within bound")
                        .is_some()
            });
            if !duplicate {
                kept.push(sol);
                keys.push(key);
            }
        }
        // odometer
        let mut pos = m;
        loop {
            if pos == 0 {
                return Ok(kept);
            }
            pos -= 1;
            assignment[pos] += 1;
            if assignment[pos] < perms.len() {
                break;
            }
            assignment[pos] = 0;
        }
    }
}

fn all_perms(m: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut images: Vec<u16> = (0..m as u16).collect();
    fn rec(images: &mut Vec<u16>, from: usize, out: &mut Vec<Perm>) {
        if from == images.len() {
            out.push(Perm::from_images(images.clone()).expect("permutation"));
            return;
        }
        for i in from..images.len() {
            images.swap(from, i);
            rec(images, from + 1, out);
            images.swap(from, i);
        }
    }
    rec(&mut images, 0, &mut out);
    out.sort_unstable_by(|a, b| a.images().cmp(b.images()));
    out
}

/// One line of the completeness report: an exhaustively-found solution, its
/// permutation-group order, and whether the coset construction over some
/// brace of that order reproduced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletenessEntry {
    pub index: usize,
    pub points: usize,
    pub group_order: usize,
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletenessReport {
    pub entries: Vec<CompletenessEntry>,
}

impl CompletenessReport {
    pub fn all_matched(&self) -> bool {
        self.entries.iter().all(|e| e.matched)
    }

    pub fn total(&self) -> usize {
        self.entries.len()
    }

    pub fn matched_count(&self) -> usize {
        self.entries.iter().filter(|e| e.matched).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompletenessError {
    #[error(transparent)]
    Bound(#[from] BoundExceeded),
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
}

/// For every solution found by the exhaustive search on `m` points, checks
/// that some brace of the matching permutation-group order reproduces it
/// through the coset construction.
pub fn completeness_check(m: usize) -> Result<CompletenessReport, CompletenessError> {
    completeness_check_with_limit(m, DEFAULT_COMPLETENESS_POINTS)
}

pub fn completeness_check_with_limit(
    m: usize,
    limit: usize,
) -> Result<CompletenessReport, CompletenessError> {
    BoundExceeded::check("completeness check", m, limit)?;
    let sols = brute_force_all_solutions(m)?;
    let mut entries = Vec::with_capacity(sols.len());
    for (index, sol) in sols.iter().enumerate() {
        let (group, _, _) = permutation_group(sol).map_err(CompletenessError::Bound)?;
        let q = group.order();
        let mut matched = false;
        'braces: for brace in enumerate_braces(q).map_err(CompletenessError::Bound)? {
            let brace = Arc::new(brace);
            for (_, candidate) in enumerate_solutions(&brace, m, false)? {
                if candidate.size() == sol.size()
                    && solutions_isomorphic_bruteforce_with_limit(sol, &candidate, m.max(1))
                        .expect("within bound")
                        .is_some()
                {
                    matched = true;
                    break 'braces;
                }
            }
        }
        entries.push(CompletenessEntry { index, points: sol.size(), group_order: q, matched });
    }
    Ok(CompletenessReport { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brace::{rump_brace, trivial_brace};
    use crate::group::FiniteGroup;

    fn trivial_zp(p: usize) -> Arc<Brace> {
        Arc::new(trivial_brace(FiniteGroup::cyclic(p)).unwrap())
    }

    #[test]
    fn basic_classes_over_trivial_z2_and_z3() {
        for p in [2usize, 3] {
            let b = trivial_zp(p);
            let classes = enumerate_solutions(&b, 2 * (p + 1), true).unwrap();
            assert_eq!(classes.len(), 2, "p = {p}");
            let sizes: Vec<usize> = classes.iter().map(|(_, s)| s.size()).collect();
            assert_eq!(sizes, vec![p, p + 1]);
        }
    }

    #[test]
    fn every_enumerated_solution_verifies() {
        let b = Arc::new(rump_brace(3, 2, 1).unwrap());
        let classes = enumerate_solutions(&b, 12, false).unwrap();
        assert!(!classes.is_empty());
        for (cfg, sol) in &classes {
            assert!(verify_solution(sol).all());
            assert_eq!(sol.size(), cfg.point_count());
        }
    }

    #[test]
    fn exhaustive_search_counts() {
        assert_eq!(brute_force_all_solutions(1).unwrap().len(), 1);
        assert_eq!(brute_force_all_solutions(2).unwrap().len(), 2);
        assert_eq!(brute_force_all_solutions(3).unwrap().len(), 5);
    }

    #[test]
    fn exhaustive_search_rejects_oversized_input() {
        assert!(brute_force_all_solutions(5).is_err());
    }

    #[test]
    fn completeness_at_tiny_sizes() {
        for m in [1usize, 2] {
            let report = completeness_check(m).unwrap();
            assert!(report.all_matched(), "m = {m}");
            assert_eq!(report.total(), if m == 1 { 1 } else { 2 });
        }
    }

    #[test]
    fn enumerate_configs_is_deterministic() {
        let b = trivial_zp(3);
        let a = enumerate_configs(&b, 8, false).unwrap();
        let bb = enumerate_configs(&b, 8, false).unwrap();
        assert_eq!(a, bb);
        assert!(!a.is_empty());
    }
}
