//! Basic solutions: configurations from which no subgroup can be deleted or
//! strictly enlarged without breaking the construction hypotheses, and the
//! independent characterization through proper quotients.

use thiserror::Error;

use crate::brace::BraceContext;
use crate::error::BoundExceeded;
use crate::perm::Perm;
use crate::solution::{
    gamma_map, permutation_group, validate_config_ctx, verify_solution, ConfigViolation,
    Solution, SolutionConfig, SolutionError,
};
use crate::subgroup::{subgroups_with_limit, Subgroup};

/// Default point bound for the quotient-search oracle.
pub const DEFAULT_BASIC_ORACLE_POINTS: usize = 6;

/// True iff the configuration is minimal: deleting any `K_{i,j}` (dropping
/// the orbit when its family empties), or replacing any `K_{i,j}` by a
/// strictly larger subgroup of the stabilizer, yields an invalid
/// configuration.
pub fn is_basic(cfg: &SolutionConfig) -> Result<bool, ConfigViolation> {
    let mut ctx = BraceContext::new(cfg.brace());
    is_basic_ctx(cfg, &mut ctx, None)
}

pub(crate) fn is_basic_ctx(
    cfg: &SolutionConfig,
    ctx: &mut BraceContext,
    all_subgroups: Option<&[Subgroup]>,
) -> Result<bool, ConfigViolation> {
    validate_config_ctx(cfg, ctx)?;
    let b = cfg.brace();

    // deletion of each family member
    for pos in 0..cfg.orbit_indices().len() {
        for fpos in 0..cfg.families()[pos].len() {
            let mut orbit_indices = cfg.orbit_indices().to_vec();
            let mut families = cfg.families().to_vec();
            families[pos].remove(fpos);
            if families[pos].is_empty() {
                families.remove(pos);
                orbit_indices.remove(pos);
            }
            let reduced = SolutionConfig::new(b.clone(), orbit_indices, families);
            if validate_config_ctx(&reduced, ctx).is_ok() {
                return Ok(false);
            }
        }
    }

    // strict enlargement within the stabilizer
    let owned;
    let subs: &[Subgroup] = match all_subgroups {
        Some(s) => s,
        None => {
            owned = subgroups_with_limit(b.mul_group(), b.order())
                .expect("subgroup enumeration within the brace order");
            &owned
        }
    };
    for pos in 0..cfg.orbit_indices().len() {
        let stab = ctx.decomposition.stabilizer(cfg.orbit_indices()[pos]).clone();
        for fpos in 0..cfg.families()[pos].len() {
            let k = &cfg.families()[pos][fpos];
            for k2 in subs {
                let strictly_larger = k2.order() > k.order()
                    && k.elements().iter().all(|&e| k2.contains(e as usize))
                    && k2.elements().iter().all(|&e| stab.contains(e as usize));
                if !strictly_larger {
                    continue;
                }
                let mut families = cfg.families().to_vec();
                families[pos][fpos] = k2.clone();
                let enlarged =
                    SolutionConfig::new(b.clone(), cfg.orbit_indices().to_vec(), families);
                if validate_config_ctx(&enlarged, ctx).is_ok() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Bound(#[from] BoundExceeded),
    #[error("input solution is not involutive/non-degenerate/braid-valid")]
    InvalidSolution,
    #[error(transparent)]
    Solution(#[from] SolutionError),
}

/// Independent route to basicness: enumerates every equivalence relation on
/// the point set and checks whether the solution descends to a well-defined
/// quotient solution whose permutation group has the same order. Basic means
/// only the discrete relation works.
pub fn is_basic_oracle(s: &Solution) -> Result<bool, OracleError> {
    is_basic_oracle_with_limit(s, DEFAULT_BASIC_ORACLE_POINTS)
}

pub fn is_basic_oracle_with_limit(s: &Solution, limit: usize) -> Result<bool, OracleError> {
    let m = s.size();
    BoundExceeded::check("quotient-search oracle", m, limit)?;
    if !verify_solution(s).all() {
        return Err(OracleError::InvalidSolution);
    }
    let gammas: Vec<Perm> =
        (0..m).map(|y| gamma_map(s, y)).collect::<Result<_, _>>()?;
    let (group, _, _) = permutation_group(s).map_err(OracleError::Bound)?;
    let full_order = group.order();

    let mut basic = true;
    for_each_partition(m, &mut |blocks: &[usize]| {
        let block_count = blocks.iter().max().map(|&b| b + 1).unwrap_or(0);
        if block_count == m {
            return true; // discrete relation: always works, keep going
        }
        if let Some(q) = quotient_solution(s, &gammas, blocks, block_count) {
            if verify_solution(&q).all() {
                if let Ok((qg, _, _)) = permutation_group(&q) {
                    if qg.order() == full_order {
                        basic = false;
                        return false; // a proper quotient works: stop
                    }
                }
            }
        }
        true
    });
    Ok(basic)
}

/// The induced solution on the blocks, if both components descend.
fn quotient_solution(
    s: &Solution,
    gammas: &[Perm],
    blocks: &[usize],
    block_count: usize,
) -> Option<Solution> {
    let m = s.size();
    let mut sigma = vec![vec![u16::MAX; block_count]; block_count];
    let mut gamma = vec![vec![u16::MAX; block_count]; block_count];
    for x in 0..m {
        for y in 0..m {
            let (bx, by) = (blocks[x], blocks[y]);
            let sv = blocks[s.sigma(x).apply(y)] as u16;
            let gv = blocks[gammas[y].apply(x)] as u16;
            for (table, v, (r, c)) in [(&mut sigma, sv, (bx, by)), (&mut gamma, gv, (by, bx))] {
                if table[r][c] == u16::MAX {
                    table[r][c] = v;
                } else if table[r][c] != v {
                    return None;
                }
            }
        }
    }
    let rows: Vec<Vec<u16>> = sigma.into_iter().collect();
    Solution::from_sigma_rows(rows).ok()
}

/// Visits every set partition of `{0..m-1}` as a restricted-growth string
/// `blocks[x] = block index of x`. The visitor returns `false` to stop.
fn for_each_partition(m: usize, visit: &mut dyn FnMut(&[usize]) -> bool) {
    fn rec(
        m: usize,
        x: usize,
        max_used: usize,
        blocks: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if x == m {
            return visit(blocks);
        }
        for b in 0..=max_used + 1 {
            blocks.push(b);
            let next_max = max_used.max(b);
            if !rec(m, x + 1, next_max, blocks, visit) {
                blocks.pop();
                return false;
            }
            blocks.pop();
        }
        true
    }
    if m == 0 {
        visit(&[]);
        return;
    }
    let mut blocks = vec![0usize];
    rec(m, 1, 0, &mut blocks, visit);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brace::{trivial_brace, Brace};
    use crate::group::FiniteGroup;
    use crate::solution::construct_solution;
    use std::sync::Arc;

    fn trivial_zp(p: usize) -> Arc<Brace> {
        Arc::new(trivial_brace(FiniteGroup::cyclic(p)).unwrap())
    }

    fn cycle_config(p: usize) -> SolutionConfig {
        SolutionConfig::from_reps(trivial_zp(p), &[1], vec![vec![Subgroup::trivial()]]).unwrap()
    }

    fn cycle_plus_fixed_config(p: usize) -> SolutionConfig {
        let b = trivial_zp(p);
        let full = Subgroup::full(b.mul_group());
        SolutionConfig::from_reps(b, &[0, 1], vec![vec![Subgroup::trivial()], vec![full]])
            .unwrap()
    }

    #[test]
    fn partition_counts_are_bell_numbers() {
        for (m, bell) in [(1usize, 1usize), (2, 2), (3, 5), (4, 15), (5, 52), (6, 203)] {
            let mut count = 0;
            for_each_partition(m, &mut |_| {
                count += 1;
                true
            });
            assert_eq!(count, bell, "Bell({m})");
        }
    }

    #[test]
    fn the_two_prime_configurations_are_basic() {
        for p in [2usize, 3, 5] {
            assert!(is_basic(&cycle_config(p)).unwrap());
            assert!(is_basic(&cycle_plus_fixed_config(p)).unwrap());
        }
    }

    #[test]
    fn duplicate_subgroup_in_a_family_is_not_basic() {
        let b = trivial_zp(3);
        let cfg = SolutionConfig::from_reps(
            b,
            &[1],
            vec![vec![Subgroup::trivial(), Subgroup::trivial()]],
        )
        .unwrap();
        assert!(!is_basic(&cfg).unwrap());
    }

    #[test]
    fn invalid_config_is_an_error() {
        let b = trivial_zp(3);
        let full = Subgroup::full(b.mul_group());
        let cfg = SolutionConfig::from_reps(b, &[1], vec![vec![full]]).unwrap();
        assert!(is_basic(&cfg).is_err());
    }

    #[test]
    fn oracle_agrees_on_prime_basics() {
        for p in [2usize, 3, 5] {
            let s = construct_solution(&cycle_config(p)).unwrap();
            assert!(is_basic_oracle(&s).unwrap(), "p-cycle solution, p = {p}");
            let s = construct_solution(&cycle_plus_fixed_config(p)).unwrap();
            assert!(is_basic_oracle(&s).unwrap(), "fixed-points + cycle, p = {p}");
        }
    }

    #[test]
    fn oracle_rejects_duplicate_family_members() {
        let b = trivial_zp(2);
        let cfg = SolutionConfig::from_reps(
            b,
            &[1],
            vec![vec![Subgroup::trivial(), Subgroup::trivial()]],
        )
        .unwrap();
        let s = construct_solution(&cfg).unwrap();
        assert!(!is_basic_oracle(&s).unwrap());
        assert!(!is_basic(&cfg).unwrap());
    }

    #[test]
    fn single_point_solution_is_basic() {
        let s = Solution::from_sigma_rows(vec![vec![0]]).unwrap();
        assert!(is_basic_oracle(&s).unwrap());
    }

    #[test]
    fn multi_point_trivial_solution_is_not_basic() {
        let s = Solution::from_sigma_rows(vec![vec![0, 1], vec![0, 1]]).unwrap();
        assert!(!is_basic_oracle(&s).unwrap());
    }
}
