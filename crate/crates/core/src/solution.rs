//! The coset construction of Yang-Baxter solutions from a brace
//! configuration, and full verification of the solution axioms.
//!
//! Given a brace `G`, a λ-invariant subset `X` (a union of orbits) that
//! generates `(G,+)`, and for each chosen orbit a family of subgroups
//! `K_{i,j}` of the stabilizer of its representative with
//! `⋂ core(K_{i,j}) = {0}`, the point set is the disjoint union of the left
//! coset spaces `G/K_{i,j}` and the solution is
//! `s(x, y) = (σ_x(y), σ⁻¹_{σ_x(y)}(x))` where `σ` at the point `gK_{i,j}`
//! acts by left translation by `λ_g(x_i)`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use crate::brace::{Brace, BraceContext};
use crate::error::BoundExceeded;
use crate::group::FiniteGroup;
use crate::perm::Perm;
use crate::subgroup::{left_cosets, Subgroup};

/// Default closure bound for permutation group generation.
pub const DEFAULT_PERM_GROUP_LIMIT: usize = 10_000;

/// A choice of λ-orbits and stabilizer subgroup families over a brace; the
/// input to the solution construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SolutionConfig {
    brace: Arc<Brace>,
    orbit_indices: Vec<usize>,
    families: Vec<Vec<Subgroup>>,
}

impl SolutionConfig {
    /// Packs a configuration in canonical form: orbits ascending, each family
    /// sorted. Use [`validate_config`] to check the construction hypotheses.
    pub fn new(
        brace: Arc<Brace>,
        orbit_indices: Vec<usize>,
        families: Vec<Vec<Subgroup>>,
    ) -> Self {
        let mut paired: Vec<(usize, Vec<Subgroup>)> =
            orbit_indices.into_iter().zip(families).collect();
        paired.sort_by_key(|(i, _)| *i);
        let (orbit_indices, mut families): (Vec<usize>, Vec<Vec<Subgroup>>) =
            paired.into_iter().unzip();
        for fam in &mut families {
            fam.sort_by(|a, b| a.elements().cmp(b.elements()));
        }
        SolutionConfig { brace, orbit_indices, families }
    }

    /// Builds a configuration from orbit representatives (any element of each
    /// orbit) instead of orbit indices.
    pub fn from_reps(
        brace: Arc<Brace>,
        reps: &[u16],
        families: Vec<Vec<Subgroup>>,
    ) -> Result<Self, ConfigViolation> {
        let decomposition = crate::brace::orbit_decomposition(&brace);
        let mut indices = Vec::with_capacity(reps.len());
        for &r in reps {
            if (r as usize) >= brace.order() {
                return Err(ConfigViolation::OrbitIndexOutOfRange { index: r as usize });
            }
            indices.push(decomposition.orbit_of(r as usize));
        }
        Ok(SolutionConfig::new(brace, indices, families))
    }

    pub fn brace(&self) -> &Arc<Brace> {
        &self.brace
    }

    pub fn orbit_indices(&self) -> &[usize] {
        &self.orbit_indices
    }

    pub fn families(&self) -> &[Vec<Subgroup>] {
        &self.families
    }

    /// Total number of points: the sum of the coset-space sizes.
    pub fn point_count(&self) -> usize {
        let n = self.brace.order();
        self.families.iter().flatten().map(|k| n / k.order()).sum()
    }

    /// Deterministic ordering key: (point count, per-orbit data).
    pub fn canonical_key(&self) -> (usize, Vec<(usize, Vec<Vec<u16>>)>) {
        let per_orbit = self
            .orbit_indices
            .iter()
            .zip(&self.families)
            .map(|(&i, fam)| (i, fam.iter().map(|k| k.elements().to_vec()).collect()))
            .collect();
        (self.point_count(), per_orbit)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigViolation {
    #[error("configuration must choose at least one orbit")]
    Empty,
    #[error("orbit index {index} out of range")]
    OrbitIndexOutOfRange { index: usize },
    #[error("orbit {index} chosen twice")]
    DuplicateOrbit { index: usize },
    #[error("family for chosen orbit {orbit_pos} is empty")]
    EmptyFamily { orbit_pos: usize },
    #[error("family member {family_pos} of chosen orbit {orbit_pos} is not a subgroup of the multiplicative group")]
    NotASubgroup { orbit_pos: usize, family_pos: usize },
    #[error("subgroup {family_pos} of chosen orbit {orbit_pos} contains {element}, which moves the representative")]
    NotInStabilizer { orbit_pos: usize, family_pos: usize, element: usize },
    #[error("the union of the chosen orbits does not generate the additive group")]
    DoesNotGenerate,
    #[error("intersection of subgroup cores is nontrivial: contains {element}")]
    CoreIntersectionNontrivial { element: usize },
}

/// Checks every hypothesis of the coset construction.
pub fn validate_config(cfg: &SolutionConfig) -> Result<(), ConfigViolation> {
    let mut ctx = BraceContext::new(cfg.brace());
    validate_config_ctx(cfg, &mut ctx)
}

pub(crate) fn validate_config_ctx(
    cfg: &SolutionConfig,
    ctx: &mut BraceContext,
) -> Result<(), ConfigViolation> {
    let b = cfg.brace();
    if cfg.orbit_indices.is_empty() {
        return Err(ConfigViolation::Empty);
    }
    let orbit_count = ctx.decomposition.len();
    for w in cfg.orbit_indices.windows(2) {
        if w[0] == w[1] {
            return Err(ConfigViolation::DuplicateOrbit { index: w[0] });
        }
    }
    for (pos, &oi) in cfg.orbit_indices.iter().enumerate() {
        if oi >= orbit_count {
            return Err(ConfigViolation::OrbitIndexOutOfRange { index: oi });
        }
        let fam = &cfg.families[pos];
        if fam.is_empty() {
            return Err(ConfigViolation::EmptyFamily { orbit_pos: pos });
        }
        let stab = ctx.decomposition.stabilizer(oi);
        for (fpos, k) in fam.iter().enumerate() {
            if !k.is_subgroup_of(b.mul_group()) {
                return Err(ConfigViolation::NotASubgroup { orbit_pos: pos, family_pos: fpos });
            }
            if let Some(&e) = k.elements().iter().find(|&&e| !stab.contains(e as usize)) {
                return Err(ConfigViolation::NotInStabilizer {
                    orbit_pos: pos,
                    family_pos: fpos,
                    element: e as usize,
                });
            }
        }
    }
    // X = union of chosen orbits generates (G,+)
    let x: Vec<u16> = cfg
        .orbit_indices
        .iter()
        .flat_map(|&oi| ctx.decomposition.orbit(oi).iter().copied())
        .collect();
    let generates = crate::subgroup::additive_generates(b.add_group(), &x)
        .expect("brace addition is abelian");
    if !generates {
        return Err(ConfigViolation::DoesNotGenerate);
    }
    // ⋂ core(K_{i,j}) = {0}
    let mut intersection = Subgroup::full(b.mul_group());
    for fam in &cfg.families {
        for k in fam {
            intersection = intersection.intersect(&ctx.core(b, k));
            if intersection.is_trivial() {
                return Ok(());
            }
        }
    }
    Err(ConfigViolation::CoreIntersectionNontrivial {
        element: intersection.elements()[1] as usize,
    })
}

/// One point of a constructed solution: which chosen orbit and family member
/// it comes from, and the canonical (minimal) coset representative.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct PointLabel {
    pub orbit: usize,
    pub family: usize,
    pub coset: u16,
}

/// One coset space `G/K_{i,j}` inside a constructed solution.
#[derive(Clone, Debug)]
pub(crate) struct Slot {
    pub orbit_pos: usize,
    pub family_pos: usize,
    /// Maps each group element to the global point index of its coset.
    pub elem_to_point: Vec<u16>,
}

/// Construction data kept alongside a solution built from a configuration.
#[derive(Clone, Debug)]
pub struct Provenance {
    pub(crate) config: SolutionConfig,
    /// `h(gK_{i,j}) = λ_g(x_i)` per point.
    pub(crate) h: Vec<u16>,
    pub(crate) slots: Vec<Slot>,
    /// `(slot index, coset representative)` per point.
    pub(crate) points: Vec<(u16, u16)>,
}

impl Provenance {
    pub fn config(&self) -> &SolutionConfig {
        &self.config
    }

    /// The brace element whose action realizes this point's σ.
    pub fn h_value(&self, point: usize) -> usize {
        self.h[point] as usize
    }

    /// The permutation of the point set induced by left translation by `g`.
    pub fn action_of(&self, g: usize) -> Perm {
        let b = self.config.brace();
        let images = self
            .points
            .iter()
            .map(|&(slot, rep)| self.slots[slot as usize].elem_to_point[b.mul(g, rep as usize)])
            .collect();
        Perm::from_images(images).expect("left translation permutes cosets")
    }

    /// The point holding the coset of `elem` in the coset space of the given
    /// chosen-orbit/family pair.
    pub fn point_of_coset(&self, orbit_pos: usize, family_pos: usize, elem: usize) -> usize {
        let slot = self
            .slots
            .iter()
            .find(|s| s.orbit_pos == orbit_pos && s.family_pos == family_pos)
            .expect("slot exists for every chosen family member");
        slot.elem_to_point[elem] as usize
    }
}

/// A set-theoretic solution on points `{0..m-1}`, stored through its σ-maps;
/// the second component is forced by involutivity.
#[derive(Clone, Debug)]
pub struct Solution {
    labels: Vec<PointLabel>,
    sigma: Vec<Perm>,
    provenance: Option<Box<Provenance>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolutionError {
    #[error("sigma {index} is not a permutation of the point set")]
    MalformedSigma { index: usize },
    #[error("label count {labels} does not match sigma count {sigmas}")]
    LabelMismatch { labels: usize, sigmas: usize },
    #[error("solution carries no construction provenance")]
    MissingProvenance,
    #[error("solution was not constructed from the given configuration")]
    ConfigMismatch,
    #[error("solution is degenerate: gamma at point {point} is not a bijection")]
    Degenerate { point: usize },
}

impl Solution {
    /// Wraps raw σ rows, with synthetic labels.
    pub fn from_sigma_rows(rows: Vec<Vec<u16>>) -> Result<Self, SolutionError> {
        let labels =
            (0..rows.len()).map(|k| PointLabel { orbit: 0, family: 0, coset: k as u16 }).collect();
        Self::from_parts(labels, rows)
    }

    pub fn from_parts(labels: Vec<PointLabel>, rows: Vec<Vec<u16>>) -> Result<Self, SolutionError> {
        if labels.len() != rows.len() {
            return Err(SolutionError::LabelMismatch { labels: labels.len(), sigmas: rows.len() });
        }
        let m = rows.len();
        let mut sigma = Vec::with_capacity(m);
        for (index, row) in rows.into_iter().enumerate() {
            if row.len() != m {
                return Err(SolutionError::MalformedSigma { index });
            }
            sigma.push(Perm::from_images(row).ok_or(SolutionError::MalformedSigma { index })?);
        }
        Ok(Solution { labels, sigma, provenance: None })
    }

    pub fn size(&self) -> usize {
        self.sigma.len()
    }

    pub fn labels(&self) -> &[PointLabel] {
        &self.labels
    }

    pub fn sigma(&self, y: usize) -> &Perm {
        &self.sigma[y]
    }

    pub fn sigmas(&self) -> &[Perm] {
        &self.sigma
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_deref()
    }

    /// Multiset of σ cycle types; a cheap isomorphism invariant.
    pub fn cycle_type_key(&self) -> Vec<Vec<usize>> {
        let mut key: Vec<Vec<usize>> = self.sigma.iter().map(|s| s.cycle_type()).collect();
        key.sort();
        key
    }
}

/// Runs the coset construction. Points are ordered by (chosen orbit, family
/// member, coset representative); the representative of each coset is its
/// minimal element.
pub fn construct_solution(cfg: &SolutionConfig) -> Result<Solution, ConfigViolation> {
    let mut ctx = BraceContext::new(cfg.brace());
    construct_solution_ctx(cfg, &mut ctx)
}

pub(crate) fn construct_solution_ctx(
    cfg: &SolutionConfig,
    ctx: &mut BraceContext,
) -> Result<Solution, ConfigViolation> {
    validate_config_ctx(cfg, ctx)?;
    let b = cfg.brace();
    let n = b.order();
    let mut labels: Vec<PointLabel> = Vec::new();
    let mut slots: Vec<Slot> = Vec::new();
    let mut points: Vec<(u16, u16)> = Vec::new();
    let mut h: Vec<u16> = Vec::new();
    for (pos, &oi) in cfg.orbit_indices.iter().enumerate() {
        let x_i = ctx.decomposition.rep(oi);
        for (fpos, k) in cfg.families[pos].iter().enumerate() {
            let slot_idx = slots.len() as u16;
            let cosets = left_cosets(b.mul_group(), k);
            let mut elem_to_point = vec![0u16; n];
            for coset in &cosets {
                let point = labels.len();
                let rep = coset[0];
                labels.push(PointLabel { orbit: pos, family: fpos, coset: rep });
                points.push((slot_idx, rep));
                h.push(b.lambda_apply(rep as usize, x_i) as u16);
                for &e in coset {
                    elem_to_point[e as usize] = point as u16;
                }
            }
            slots.push(Slot { orbit_pos: pos, family_pos: fpos, elem_to_point });
        }
    }
    let m = labels.len();
    // σ at gK_{i,j} sends g'K_{i',j'} to (λ_g(x_i)·g')K_{i',j'}
    let provenance = Provenance { config: cfg.clone(), h, slots, points };
    let mut sigma: Vec<Perm> = Vec::with_capacity(m);
    let mut action_cache: BTreeMap<u16, Perm> = BTreeMap::new();
    for y in 0..m {
        let u = provenance.h[y];
        let perm = action_cache
            .entry(u)
            .or_insert_with(|| provenance.action_of(u as usize));
        sigma.push(perm.clone());
    }
    Ok(Solution { labels, sigma, provenance: Some(Box::new(provenance)) })
}

/// Outcome of checking the three solution axioms, with witnesses on failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub involutive: bool,
    pub involutive_witness: Option<(usize, usize)>,
    pub nondegenerate: bool,
    pub nondegenerate_witness: Option<usize>,
    pub braid: bool,
    pub braid_witness: Option<(usize, usize, usize)>,
}

impl VerifyReport {
    pub fn all(&self) -> bool {
        self.involutive && self.nondegenerate && self.braid
    }
}

/// Checks involutivity (`s² = id`), non-degeneracy (every σ and γ bijective)
/// and the braid relation on all triples.
pub fn verify_solution(s: &Solution) -> VerifyReport {
    let m = s.size();
    // r(x,y) = (σ_x(y), γ_y(x)) with γ_y(x) = σ⁻¹_{σ_x(y)}(x)
    let inverses: Vec<Perm> = s.sigma.iter().map(|p| p.inverse()).collect();
    let r = |x: usize, y: usize| -> (usize, usize) {
        let u = s.sigma[x].apply(y);
        (u, inverses[u].apply(x))
    };

    let mut involutive = true;
    let mut involutive_witness = None;
    'inv: for x in 0..m {
        for y in 0..m {
            let (u, v) = r(x, y);
            if r(u, v) != (x, y) {
                involutive = false;
                involutive_witness = Some((x, y));
                break 'inv;
            }
        }
    }

    let mut nondegenerate = true;
    let mut nondegenerate_witness = None;
    for y in 0..m {
        let gamma: Vec<u16> = (0..m).map(|x| inverses[s.sigma[x].apply(y)].apply(x) as u16).collect();
        if Perm::from_images(gamma).is_none() {
            nondegenerate = false;
            nondegenerate_witness = Some(y);
            break;
        }
    }

    let mut braid = true;
    let mut braid_witness = None;
    let r12 = |t: (usize, usize, usize)| {
        let (a, b) = r(t.0, t.1);
        (a, b, t.2)
    };
    let r23 = |t: (usize, usize, usize)| {
        let (b, c) = r(t.1, t.2);
        (t.0, b, c)
    };
    'braid: for x in 0..m {
        for y in 0..m {
            for z in 0..m {
                let t = (x, y, z);
                if r12(r23(r12(t))) != r23(r12(r23(t))) {
                    braid = false;
                    braid_witness = Some(t);
                    break 'braid;
                }
            }
        }
    }

    VerifyReport {
        involutive,
        involutive_witness,
        nondegenerate,
        nondegenerate_witness,
        braid,
        braid_witness,
    }
}

/// The map `γ_y: x -> σ⁻¹_{σ_x(y)}(x)`, which is the second component of the
/// solution. Errors if it fails to be a bijection.
pub fn gamma_map(s: &Solution, y: usize) -> Result<Perm, SolutionError> {
    let m = s.size();
    let images: Vec<u16> =
        (0..m).map(|x| s.sigma[s.sigma[x].apply(y)].inverse().apply(x) as u16).collect();
    Perm::from_images(images).ok_or(SolutionError::Degenerate { point: y })
}

/// Closure of the σ-maps under composition: the permutation group of the
/// solution, with elements indexed in discovery order (identity first), the
/// index of each generator σ_y, and the permutation each element stands for.
pub fn permutation_group(
    s: &Solution,
) -> Result<(FiniteGroup, Vec<u16>, Vec<Perm>), BoundExceeded> {
    permutation_group_with_limit(s, DEFAULT_PERM_GROUP_LIMIT)
}

pub fn permutation_group_with_limit(
    s: &Solution,
    limit: usize,
) -> Result<(FiniteGroup, Vec<u16>, Vec<Perm>), BoundExceeded> {
    let (group, elems) = FiniteGroup::from_generating_perms(s.size(), &s.sigma, limit)?;
    let index: BTreeMap<&Perm, u16> =
        elems.iter().enumerate().map(|(i, p)| (p, i as u16)).collect();
    let gen_map = s.sigma.iter().map(|p| index[p]).collect();
    Ok((group, gen_map, elems))
}

/// Exhaustive check that the permutation group of a constructed solution is
/// the brace it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermBraceIsoReport {
    /// The action map `g -> (left translation on points)` is injective.
    pub action_injective: bool,
    /// Every σ_y equals the action of `h(y) = λ_g(x_i)`.
    pub sigma_matches_action: bool,
    /// The closure of the σ-maps equals the image of the action map.
    pub closure_equals_image: bool,
    /// `action(h(y) + h(z)) = σ_y ∘ σ_{σ_y⁻¹(z)}` for all points y, z.
    pub addition_compatible: bool,
    /// The action kernel equals the intersection of the subgroup cores,
    /// computed independently.
    pub kernel_matches_cores: bool,
}

impl PermBraceIsoReport {
    /// The four conditions certifying the brace isomorphism.
    pub fn holds(&self) -> bool {
        self.action_injective
            && self.sigma_matches_action
            && self.closure_equals_image
            && self.addition_compatible
    }
}

pub fn check_perm_brace_iso(
    s: &Solution,
    cfg: &SolutionConfig,
) -> Result<PermBraceIsoReport, SolutionError> {
    let prov = s.provenance().ok_or(SolutionError::MissingProvenance)?;
    if prov.config() != cfg {
        return Err(SolutionError::ConfigMismatch);
    }
    let b = cfg.brace();
    let n = b.order();
    let action: Vec<Perm> = (0..n).map(|g| prov.action_of(g)).collect();

    let distinct: BTreeSet<&Perm> = action.iter().collect();
    let action_injective = distinct.len() == n;

    // independent route to the kernel: the intersection of the cores
    let mut ctx = BraceContext::new(b);
    let mut cores = Subgroup::full(b.mul_group());
    for fam in cfg.families() {
        for k in fam {
            cores = cores.intersect(&ctx.core(b, k));
        }
    }
    let kernel: Vec<u16> =
        (0..n as u16).filter(|&g| action[g as usize].is_identity()).collect();
    let kernel_matches_cores = kernel == cores.elements();

    let sigma_matches_action =
        (0..s.size()).all(|y| *s.sigma(y) == action[prov.h_value(y)]);

    let closure: BTreeSet<Perm> = {
        let (_, _, elems) = permutation_group(s).map_err(|_| SolutionError::MissingProvenance)?;
        elems.into_iter().collect()
    };
    let image: BTreeSet<Perm> = action.iter().cloned().collect();
    let closure_equals_image = closure == image;

    let mut addition_compatible = true;
    'add: for y in 0..s.size() {
        let sy_inv = s.sigma(y).inverse();
        for z in 0..s.size() {
            let w = sy_inv.apply(z);
            let sum = b.add(prov.h_value(y), prov.h_value(z));
            if action[sum] != s.sigma(y).compose(s.sigma(w)) {
                addition_compatible = false;
                break 'add;
            }
        }
    }

    Ok(PermBraceIsoReport {
        action_injective,
        sigma_matches_action,
        closure_equals_image,
        addition_compatible,
        kernel_matches_cores,
    })
}
