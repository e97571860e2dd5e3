//! Deciding isomorphism of solutions.
//!
//! Two constructed solutions over a common brace are isomorphic exactly when
//! a brace automorphism ψ matches their orbit choices and conjugates each
//! subgroup family into the other: `ψ(x_i) = λ_{z_{i,k}}(x_{α(i)})` and
//! `ψ(K_{i,k}) = z_{i,k} L_{α(i),β_i(k)} z_{i,k}⁻¹`. The witness expands to
//! the explicit point bijection `gK_{i,k} -> ψ(g) z_{i,k} L_{α(i),β_i(k)}`,
//! which is re-verified directly. A brute-force point-bijection search over
//! the σ-maps serves as the independent oracle.

use std::sync::Arc;

use thiserror::Error;

use crate::brace::{brace_automorphisms, brace_isomorphic, orbit_decomposition, Brace};
use crate::error::BoundExceeded;
use crate::perm::Perm;
use crate::solution::{construct_solution, ConfigViolation, Solution, SolutionConfig};
use crate::subgroup::Subgroup;

/// Default point bound for the brute-force isomorphism search.
pub const DEFAULT_BRUTEFORCE_POINTS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsoError {
    #[error("configurations live over non-isomorphic braces")]
    NonIsomorphicBraces,
    #[error(transparent)]
    Bound(#[from] BoundExceeded),
    #[error(transparent)]
    Config(#[from] ConfigViolation),
    #[error("a found witness failed its own verification")]
    WitnessVerificationFailed,
}

/// Certificate of solution isomorphism: a brace automorphism, an orbit
/// bijection, per-orbit family bijections, conjugators, and the expanded
/// (verified) point bijection.
#[derive(Clone, Debug)]
pub struct IsoWitness {
    pub psi: Perm,
    pub alpha: Vec<usize>,
    pub beta: Vec<Vec<usize>>,
    pub z: Vec<Vec<u16>>,
    point_map: Perm,
}

impl IsoWitness {
    /// The verified point bijection from the first solution to the second.
    pub fn point_map(&self) -> &Perm {
        &self.point_map
    }
}

/// Searches for a point bijection `F` with `F(σ_x(y)) = σ_{F(x)}(F(y))`,
/// pruning by the multiset of σ cycle types and propagating forced images.
pub fn solutions_isomorphic_bruteforce(
    s: &Solution,
    t: &Solution,
) -> Result<Option<Perm>, BoundExceeded> {
    solutions_isomorphic_bruteforce_with_limit(s, t, DEFAULT_BRUTEFORCE_POINTS)
}

pub fn solutions_isomorphic_bruteforce_with_limit(
    s: &Solution,
    t: &Solution,
    limit: usize,
) -> Result<Option<Perm>, BoundExceeded> {
    BoundExceeded::check("brute-force solution isomorphism", s.size().max(t.size()), limit)?;
    if s.size() != t.size() {
        return Ok(None);
    }
    if s.cycle_type_key() != t.cycle_type_key() {
        return Ok(None);
    }
    let m = s.size();
    let candidates: Vec<Vec<u16>> = (0..m)
        .map(|x| {
            let ct = s.sigma(x).cycle_type();
            (0..m as u16).filter(|&y| t.sigma(y as usize).cycle_type() == ct).collect()
        })
        .collect();
    let mut f: Vec<i32> = vec![-1; m];
    let mut used = vec![false; m];
    if search(s, t, &candidates, &mut f, &mut used) {
        let images: Vec<u16> = f.iter().map(|&v| v as u16).collect();
        let perm = Perm::from_images(images).expect("search result is a bijection");
        debug_assert!(is_solution_iso(s, t, &perm));
        return Ok(Some(perm));
    }
    return Ok(None);

    fn search(
        s: &Solution,
        t: &Solution,
        candidates: &[Vec<u16>],
        f: &mut Vec<i32>,
        used: &mut Vec<bool>,
    ) -> bool {
        let x = match f.iter().position(|&v| v < 0) {
            None => return is_solution_iso_partial(s, t, f),
            Some(x) => x,
        };
        for &y in &candidates[x] {
            if used[y as usize] {
                continue;
            }
            if let Some(trail) = assign_and_propagate(s, t, f, used, x, y as usize) {
                if search(s, t, candidates, f, used) {
                    return true;
                }
                for v in trail {
                    used[f[v] as usize] = false;
                    f[v] = -1;
                }
            }
        }
        false
    }

    /// Assigns `f[x] = y` and chases every image forced by the
    /// σ-equivariance constraint. Returns the assigned indices for rollback,
    /// or `None` on conflict (in which case everything is already rolled
    /// back).
    fn assign_and_propagate(
        s: &Solution,
        t: &Solution,
        f: &mut Vec<i32>,
        used: &mut Vec<bool>,
        x: usize,
        y: usize,
    ) -> Option<Vec<usize>> {
        let mut trail = vec![x];
        f[x] = y as i32;
        used[y] = true;
        let mut queue = vec![x];
        while let Some(a) = queue.pop() {
            let assigned: Vec<usize> = (0..f.len()).filter(|&b| f[b] >= 0).collect();
            for &b in &assigned {
                for (p, q) in [(a, b), (b, a)] {
                    let v = s.sigma(p).apply(q);
                    let w = t.sigma(f[p] as usize).apply(f[q] as usize);
                    if f[v] < 0 {
                        if used[w] {
                            rollback(f, used, &trail);
                            return None;
                        }
                        f[v] = w as i32;
                        used[w] = true;
                        trail.push(v);
                        queue.push(v);
                    } else if f[v] != w as i32 {
                        rollback(f, used, &trail);
                        return None;
                    }
                }
            }
        }
        Some(trail)
    }

    fn rollback(f: &mut [i32], used: &mut [bool], trail: &[usize]) {
        for &v in trail {
            used[f[v] as usize] = false;
            f[v] = -1;
        }
    }

    fn is_solution_iso_partial(s: &Solution, t: &Solution, f: &[i32]) -> bool {
        let m = s.size();
        (0..m).all(|x| {
            (0..m).all(|y| {
                f[s.sigma(x).apply(y)]
                    == t.sigma(f[x] as usize).apply(f[y] as usize) as i32
            })
        })
    }
}

/// True if `map` carries the σ-structure of `s` onto `t`.
pub fn is_solution_iso(s: &Solution, t: &Solution, map: &Perm) -> bool {
    let m = s.size();
    t.size() == m
        && (0..m).all(|x| {
            (0..m).all(|y| {
                map.apply(s.sigma(x).apply(y)) == t.sigma(map.apply(x)).apply(map.apply(y))
            })
        })
}

/// Decides isomorphism of two constructed solutions through the brace
/// structure. Configurations over distinct but isomorphic braces are first
/// transported onto a common brace; non-isomorphic braces are an error.
pub fn solutions_isomorphic(
    cfg1: &SolutionConfig,
    cfg2: &SolutionConfig,
) -> Result<Option<IsoWitness>, IsoError> {
    if cfg1.brace() == cfg2.brace() {
        return same_brace_iso(cfg1, cfg2);
    }
    let f = brace_isomorphic(cfg1.brace(), cfg2.brace())?
        .ok_or(IsoError::NonIsomorphicBraces)?;
    let (cfg2t, orbit_pos_map, family_pos_maps, corr) = transport_config(cfg2, cfg1.brace().clone(), &f)?;
    let Some(w) = same_brace_iso(cfg1, &cfg2t)? else {
        return Ok(None);
    };
    // compose the witness with the transport correspondence
    let images: Vec<u16> =
        (0..w.point_map.degree()).map(|p| corr[w.point_map.apply(p)]).collect();
    let point_map = Perm::from_images(images).ok_or(IsoError::WitnessVerificationFailed)?;
    let sol1 = construct_solution(cfg1)?;
    let sol2 = construct_solution(cfg2)?;
    if !is_solution_iso(&sol1, &sol2, &point_map) {
        return Err(IsoError::WitnessVerificationFailed);
    }
    let alpha: Vec<usize> = w.alpha.iter().map(|&j| orbit_pos_map[j]).collect();
    let beta: Vec<Vec<usize>> = w
        .beta
        .iter()
        .enumerate()
        .map(|(i, bi)| bi.iter().map(|&l| family_pos_maps[w.alpha[i]][l]).collect())
        .collect();
    Ok(Some(IsoWitness { psi: w.psi, alpha, beta, z: w.z, point_map }))
}

/// Moves a configuration along a brace isomorphism `f: target -> source`
/// onto `target`'s brace, returning the transported configuration, the maps
/// from its orbit/family positions back to the original ones, and the point
/// correspondence from the transported solution to the original one.
#[allow(clippy::type_complexity)]
fn transport_config(
    cfg: &SolutionConfig,
    target: Arc<Brace>,
    f: &Perm, // brace isomorphism target -> cfg.brace()
) -> Result<(SolutionConfig, Vec<usize>, Vec<Vec<usize>>, Vec<u16>), IsoError> {
    let source = cfg.brace();
    let f_inv = f.inverse();
    let d_target = orbit_decomposition(&target);
    let d_source = orbit_decomposition(source);

    // per original orbit position: transported orbit index, conjugator w,
    // transported family
    struct Moved {
        orbit_index: usize,
        w: usize,
        family: Vec<Subgroup>,
        source_pos: usize,
    }
    let mut moved: Vec<Moved> = Vec::new();
    for (pos, &oi) in cfg.orbit_indices().iter().enumerate() {
        let x2 = d_source.rep(oi);
        let y = f_inv.apply(x2);
        let o1 = d_target.orbit_of(y);
        let x1 = d_target.rep(o1);
        let w = (0..target.order())
            .find(|&w| target.lambda_apply(w, y) == x1)
            .expect("representative lies in the orbit");
        let family = cfg.families()[pos]
            .iter()
            .map(|k| {
                let pulled: Vec<u16> =
                    k.elements().iter().map(|&e| f_inv.apply(e as usize) as u16).collect();
                let pulled = Subgroup::new(target.mul_group(), pulled)
                    .expect("isomorphism preserves subgroups");
                pulled.conjugate_by(target.mul_group(), w)
            })
            .collect();
        moved.push(Moved { orbit_index: o1, w, family, source_pos: pos });
    }
    moved.sort_by_key(|m| m.orbit_index);

    let mut orbit_indices = Vec::new();
    let mut families = Vec::new();
    let mut orbit_pos_map = Vec::new();
    let mut family_pos_maps = Vec::new();
    let mut ws = Vec::new();
    for m in &moved {
        orbit_indices.push(m.orbit_index);
        orbit_pos_map.push(m.source_pos);
        ws.push(m.w);
        // sort the family canonically, remembering where each member came from
        let mut order: Vec<usize> = (0..m.family.len()).collect();
        order.sort_by(|&a, &b| m.family[a].elements().cmp(m.family[b].elements()));
        families.push(order.iter().map(|&k| m.family[k].clone()).collect::<Vec<_>>());
        family_pos_maps.push(order);
    }
    let cfg_t = SolutionConfig::new(target.clone(), orbit_indices, families);

    // point correspondence: transported point gK' -> original point of the
    // coset of f(g*w) in the matching family member
    let sol_t = construct_solution(&cfg_t)?;
    let sol_o = construct_solution(cfg)?;
    let prov_t = sol_t.provenance().expect("constructed");
    let prov_o = sol_o.provenance().expect("constructed");
    let mut corr = vec![0u16; sol_t.size()];
    for (p, label) in sol_t.labels().iter().enumerate() {
        let g = label.coset as usize;
        let w = ws[label.orbit];
        let elem = f.apply(target.mul(g, w));
        let orig_orbit_pos = orbit_pos_map[label.orbit];
        let orig_family_pos = family_pos_maps[label.orbit][label.family];
        corr[p] = prov_o.point_of_coset(orig_orbit_pos, orig_family_pos, elem) as u16;
    }
    // sanity: the correspondence is itself a solution isomorphism
    let corr_perm = Perm::from_images(corr.clone()).ok_or(IsoError::WitnessVerificationFailed)?;
    if !is_solution_iso(&sol_t, &sol_o, &corr_perm) {
        return Err(IsoError::WitnessVerificationFailed);
    }
    let _ = prov_t;
    Ok((cfg_t, orbit_pos_map, family_pos_maps, corr))
}

fn same_brace_iso(
    cfg1: &SolutionConfig,
    cfg2: &SolutionConfig,
) -> Result<Option<IsoWitness>, IsoError> {
    let b = cfg1.brace();
    if cfg1.point_count() != cfg2.point_count()
        || cfg1.orbit_indices().len() != cfg2.orbit_indices().len()
    {
        return Ok(None);
    }
    let d = orbit_decomposition(b);
    let sol1 = construct_solution(cfg1)?;
    let sol2 = construct_solution(cfg2)?;
    let prov2 = sol2.provenance().expect("constructed");

    for psi in brace_automorphisms(b)? {
        // ψ maps chosen orbits of cfg1 onto chosen orbits of cfg2
        let mut alpha = Vec::with_capacity(cfg1.orbit_indices().len());
        let mut ok = true;
        for &oi in cfg1.orbit_indices() {
            let o2 = d.orbit_of(psi.apply(d.rep(oi)));
            match cfg2.orbit_indices().iter().position(|&o| o == o2) {
                Some(j) => alpha.push(j),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        // ψ permutes orbits injectively; with equal counts α is a bijection
        let mut seen = vec![false; alpha.len()];
        for &j in &alpha {
            seen[j] = true;
        }
        if !seen.iter().all(|&s| s) {
            continue;
        }

        let mut beta: Vec<Vec<usize>> = Vec::new();
        let mut zs: Vec<Vec<u16>> = Vec::new();
        ok = true;
        for (i, &oi) in cfg1.orbit_indices().iter().enumerate() {
            let fam1 = &cfg1.families()[i];
            let fam2 = &cfg2.families()[alpha[i]];
            if fam1.len() != fam2.len() {
                ok = false;
                break;
            }
            let target_rep = d.rep(cfg2.orbit_indices()[alpha[i]]);
            let psi_x1 = psi.apply(d.rep(oi));
            // z candidates: the coset { z : λ_z(x_{α(i)}) = ψ(x_i) }
            let z_coset: Vec<usize> =
                (0..b.order()).filter(|&z| b.lambda_apply(z, target_rep) == psi_x1).collect();
            // feasibility matrix with a witness z per feasible pair
            let psi_k: Vec<Subgroup> = fam1
                .iter()
                .map(|k| {
                    let mapped: Vec<u16> =
                        k.elements().iter().map(|&e| psi.apply(e as usize) as u16).collect();
                    Subgroup::new(b.mul_group(), mapped)
                        .expect("automorphism preserves subgroups")
                })
                .collect();
            let mut feasible: Vec<Vec<Option<u16>>> =
                vec![vec![None; fam2.len()]; fam1.len()];
            for (k, pk) in psi_k.iter().enumerate() {
                for (l, kl) in fam2.iter().enumerate() {
                    if pk.order() != kl.order() {
                        continue;
                    }
                    for &z in &z_coset {
                        if kl.conjugate_by(b.mul_group(), z) == *pk {
                            feasible[k][l] = Some(z as u16);
                            break;
                        }
                    }
                }
            }
            match perfect_matching(&feasible) {
                Some(matching) => {
                    let z_row: Vec<u16> =
                        matching.iter().enumerate().map(|(k, &l)| feasible[k][l].unwrap()).collect();
                    beta.push(matching);
                    zs.push(z_row);
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }

        // expand the witness to the explicit point bijection and verify it
        let images: Vec<u16> = sol1
            .labels()
            .iter()
            .map(|label| {
                let i = label.orbit;
                let k = label.family;
                let elem = b.mul(psi.apply(label.coset as usize), zs[i][k] as usize);
                prov2.point_of_coset(alpha[i], beta[i][k], elem) as u16
            })
            .collect();
        let point_map =
            Perm::from_images(images).ok_or(IsoError::WitnessVerificationFailed)?;
        if !is_solution_iso(&sol1, &sol2, &point_map) {
            return Err(IsoError::WitnessVerificationFailed);
        }
        return Ok(Some(IsoWitness { psi, alpha, beta, z: zs, point_map }));
    }
    Ok(None)
}

/// Backtracking perfect matching on a feasibility matrix.
fn perfect_matching(feasible: &[Vec<Option<u16>>]) -> Option<Vec<usize>> {
    let n = feasible.len();
    let mut matching = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        feasible: &[Vec<Option<u16>>],
        k: usize,
        matching: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if k == feasible.len() {
            return true;
        }
        for l in 0..feasible[k].len() {
            if !used[l] && feasible[k][l].is_some() {
                used[l] = true;
                matching[k] = l;
                if rec(feasible, k + 1, matching, used) {
                    return true;
                }
                used[l] = false;
            }
        }
        false
    }
    if rec(feasible, 0, &mut matching, &mut used) {
        Some(matching)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brace::{trivial_brace, Brace};
    use crate::group::FiniteGroup;
    use crate::solution::SolutionConfig;
    use crate::subgroup::Subgroup;

    fn trivial_zp(p: usize) -> Arc<Brace> {
        Arc::new(trivial_brace(FiniteGroup::cyclic(p)).unwrap())
    }

    fn singleton_config(b: &Arc<Brace>, rep: u16) -> SolutionConfig {
        SolutionConfig::from_reps(b.clone(), &[rep], vec![vec![Subgroup::trivial()]]).unwrap()
    }

    #[test]
    fn config_is_isomorphic_to_itself_with_identity_witness() {
        let b = trivial_zp(3);
        let cfg = singleton_config(&b, 1);
        let w = solutions_isomorphic(&cfg, &cfg).unwrap().expect("self-isomorphic");
        assert!(w.psi.is_identity());
        assert_eq!(w.alpha, vec![0]);
        assert_eq!(w.z, vec![vec![0]]);
        assert!(w.point_map().is_identity());
    }

    #[test]
    fn generator_choice_is_immaterial_over_trivial_zp() {
        for p in [3usize, 5] {
            let b = trivial_zp(p);
            let c1 = singleton_config(&b, 1);
            let c2 = singleton_config(&b, 2);
            let w = solutions_isomorphic(&c1, &c2).unwrap().expect("rescaling works");
            // the witness automorphism rescales 1 to 2
            assert_eq!(w.psi.apply(1), 2);
        }
    }

    #[test]
    fn different_coset_size_multisets_are_not_isomorphic() {
        let b = trivial_zp(3);
        let c1 = singleton_config(&b, 1);
        let full = Subgroup::full(b.mul_group());
        let c2 = SolutionConfig::from_reps(
            b.clone(),
            &[0, 1],
            vec![vec![Subgroup::trivial()], vec![full]],
        )
        .unwrap();
        assert!(solutions_isomorphic(&c1, &c2).unwrap().is_none());
        let s1 = construct_solution(&c1).unwrap();
        let s2 = construct_solution(&c2).unwrap();
        assert!(solutions_isomorphic_bruteforce(&s1, &s2).unwrap().is_none());
    }

    #[test]
    fn bruteforce_finds_relabelings() {
        let b = trivial_zp(3);
        let s = construct_solution(&singleton_config(&b, 1)).unwrap();
        let relabel = Perm::from_images(vec![2, 0, 1]).unwrap();
        let rows: Vec<Vec<u16>> = (0..3)
            .map(|y| {
                let orig = relabel.inverse().apply(y);
                (0..3)
                    .map(|x| {
                        relabel.apply(s.sigma(orig).apply(relabel.inverse().apply(x))) as u16
                    })
                    .collect()
            })
            .collect();
        let t = Solution::from_sigma_rows(rows).unwrap();
        let f = solutions_isomorphic_bruteforce(&s, &t).unwrap().expect("relabeling");
        assert!(is_solution_iso(&s, &t, &f));
    }

    #[test]
    fn trivial_vs_cycle_solutions_are_not_isomorphic() {
        let m = 3;
        let trivial = Solution::from_sigma_rows(vec![vec![0, 1, 2]; m]).unwrap();
        let b = trivial_zp(3);
        let cycle = construct_solution(&singleton_config(&b, 1)).unwrap();
        assert!(solutions_isomorphic_bruteforce(&trivial, &cycle).unwrap().is_none());
    }

    #[test]
    fn cross_brace_transport_handles_relabelings() {
        // same brace presented with a different carrier labeling
        let b1 = trivial_zp(5);
        let relabel = Perm::from_images(vec![0, 2, 4, 1, 3]).unwrap();
        let b2 = Arc::new(
            Brace::from_groups(
                b1.add_group().relabeled(&relabel),
                b1.mul_group().relabeled(&relabel),
            )
            .unwrap(),
        );
        let c1 = singleton_config(&b1, 1);
        let c2 = singleton_config(&b2, 1);
        let w = solutions_isomorphic(&c1, &c2).unwrap().expect("transported");
        let s1 = construct_solution(&c1).unwrap();
        let s2 = construct_solution(&c2).unwrap();
        assert!(is_solution_iso(&s1, &s2, w.point_map()));
    }

    #[test]
    fn non_isomorphic_braces_are_an_error() {
        let b1 = trivial_zp(3);
        let b2 = trivial_zp(5);
        let c1 = singleton_config(&b1, 1);
        let c2 = singleton_config(&b2, 1);
        assert_eq!(
            solutions_isomorphic(&c1, &c2).unwrap_err(),
            IsoError::NonIsomorphicBraces
        );
    }
}
