//! Left braces: validation, the λ-action, socle, orbits, automorphisms, and
//! the standard constructors (trivial, Rump cyclic, socle extension).
//!
//! A left brace packs an abelian group `(B,+)` and a group `(B,·)` on one
//! carrier with a common identity, subject to `x·(y+z) + x = x·y + x·z`. That
//! identity says exactly that each map `λ_x(y) = x·y − x` is an additive
//! endomorphism; bijectivity and the homomorphism law
//! `λ_{x·y} = λ_x ∘ λ_y` then follow from the group axioms.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::error::BoundExceeded;
use crate::group::{validate_group, FiniteGroup, GroupViolation};
use crate::maps::{additive_chain, enumerate_additive_isos, GroupMap};
use crate::perm::Perm;
use crate::subgroup::Subgroup;

/// Default carrier bound for brace automorphism/isomorphism searches.
pub const DEFAULT_BRACE_SEARCH_LIMIT: usize = 64;
/// Default carrier bound for the Rump cyclic braces.
pub const DEFAULT_RUMP_LIMIT: usize = 256;

/// A finite left brace. Addition and multiplication share the carrier
/// `{0..n-1}` and the identity `0`; the λ table is precomputed.
#[derive(Clone)]
pub struct Brace {
    add: FiniteGroup,
    mul: FiniteGroup,
    lambda: Vec<Perm>,
}

impl PartialEq for Brace {
    fn eq(&self, other: &Self) -> bool {
        self.add == other.add && self.mul == other.mul
    }
}
impl Eq for Brace {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraceViolation {
    #[error("addition table: {0}")]
    AddInvalid(GroupViolation),
    #[error("multiplication table: {0}")]
    MulInvalid(GroupViolation),
    #[error("tables have different orders: {add} vs {mul}")]
    OrderMismatch { add: usize, mul: usize },
    #[error("identities differ: additive {add_identity}, multiplicative {mul_identity}")]
    IdentityMismatch { add_identity: usize, mul_identity: usize },
    #[error("addition is not abelian: {a}+{b} != {b}+{a}")]
    AddNotAbelian { a: usize, b: usize },
    #[error("brace identity fails at ({x},{y},{z}): x*(y+z)+x != x*y+x*z")]
    CompatibilityFails { x: usize, y: usize, z: usize },
}

impl Brace {
    /// Builds a brace from two already-validated groups on the same carrier
    /// (both with identity 0), checking the brace axioms.
    pub fn from_groups(add: FiniteGroup, mul: FiniteGroup) -> Result<Self, BraceViolation> {
        if add.order() != mul.order() {
            return Err(BraceViolation::OrderMismatch { add: add.order(), mul: mul.order() });
        }
        let n = add.order();
        for a in 0..n {
            for b in a + 1..n {
                if add.op(a, b) != add.op(b, a) {
                    return Err(BraceViolation::AddNotAbelian { a, b });
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let xy = mul.op(x, y);
                for z in 0..n {
                    // x*(y+z) + x == x*y + x*z
                    let lhs = add.op(mul.op(x, add.op(y, z)), x);
                    let rhs = add.op(xy, mul.op(x, z));
                    if lhs != rhs {
                        return Err(BraceViolation::CompatibilityFails { x, y, z });
                    }
                }
            }
        }
        let lambda = (0..n)
            .map(|x| {
                Perm::from_images(
                    (0..n).map(|y| add.op(mul.op(x, y), add.inv(x)) as u16).collect(),
                )
                .expect("lambda maps of a brace are bijective")
            })
            .collect();
        Ok(Brace { add, mul, lambda })
    }

    pub fn order(&self) -> usize {
        self.add.order()
    }

    pub fn add_group(&self) -> &FiniteGroup {
        &self.add
    }

    pub fn mul_group(&self) -> &FiniteGroup {
        &self.mul
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add.op(a, b)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul.op(a, b)
    }

    /// Additive negation.
    pub fn neg(&self, a: usize) -> usize {
        self.add.inv(a)
    }

    /// Multiplicative inverse.
    pub fn mul_inv(&self, a: usize) -> usize {
        self.mul.inv(a)
    }

    /// The additive automorphism `λ_x: y -> x·y − x`.
    pub fn lambda(&self, x: usize) -> &Perm {
        &self.lambda[x]
    }

    pub fn lambda_apply(&self, x: usize, y: usize) -> usize {
        self.lambda[x].apply(y)
    }

    /// True if multiplication equals addition.
    pub fn is_trivial(&self) -> bool {
        self.add == self.mul
    }
}

impl std::fmt::Debug for Brace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Brace(order={})", self.order())
    }
}

/// Validates a pair of raw Cayley tables as a left brace. The shared identity
/// is relabeled to index 0 before checking the brace axioms.
pub fn validate_brace(
    add_table: &[Vec<u16>],
    mul_table: &[Vec<u16>],
) -> Result<Brace, BraceViolation> {
    if add_table.len() != mul_table.len() {
        return Err(BraceViolation::OrderMismatch {
            add: add_table.len(),
            mul: mul_table.len(),
        });
    }
    let n = add_table.len();
    let add_identity = table_identity(add_table).map_err(BraceViolation::AddInvalid)?;
    let mul_identity = table_identity(mul_table).map_err(BraceViolation::MulInvalid)?;
    if add_identity != mul_identity {
        return Err(BraceViolation::IdentityMismatch { add_identity, mul_identity });
    }
    // One shared relabeling keeps the carriers aligned.
    let swap = |x: usize| -> usize {
        if x == 0 {
            add_identity
        } else if x == add_identity {
            0
        } else {
            x
        }
    };
    let relabel = |table: &[Vec<u16>]| -> Vec<Vec<u16>> {
        let mut out = vec![vec![0u16; n]; n];
        for a in 0..n {
            for b in 0..n {
                out[swap(a)][swap(b)] = swap(table[a][b] as usize) as u16;
            }
        }
        out
    };
    let add = validate_group(&relabel(add_table)).map_err(BraceViolation::AddInvalid)?;
    let mul = validate_group(&relabel(mul_table)).map_err(BraceViolation::MulInvalid)?;
    Brace::from_groups(add, mul)
}

/// Identity index of a raw table, after basic shape/range checks.
fn table_identity(table: &[Vec<u16>]) -> Result<usize, GroupViolation> {
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
    (0..n)
        .find(|&e| (0..n).all(|x| table[e][x] as usize == x && table[x][e] as usize == x))
        .ok_or(GroupViolation::MissingIdentity)
}

/// The λ-map of a single element as a standalone permutation.
pub fn lambda_map(b: &Brace, x: usize) -> Perm {
    b.lambda(x).clone()
}

/// The socle `{x : λ_x = id}`, returned as a subgroup of the multiplicative
/// group (it is the kernel of `λ`, hence normal).
pub fn socle(b: &Brace) -> Subgroup {
    let elems: Vec<u16> = (0..b.order() as u16)
        .filter(|&x| b.lambda(x as usize).is_identity())
        .collect();
    Subgroup::new(b.mul_group(), elems).expect("socle is a subgroup of the multiplicative group")
}

/// Orbits of the action `g -> λ_g` on the carrier, with canonical (minimal)
/// representatives and their stabilizers in the multiplicative group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitDecomposition {
    orbits: Vec<Vec<u16>>,
    stabilizers: Vec<Subgroup>,
    orbit_of: Vec<u16>,
}

impl OrbitDecomposition {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn orbits(&self) -> &[Vec<u16>] {
        &self.orbits
    }

    pub fn orbit(&self, i: usize) -> &[u16] {
        &self.orbits[i]
    }

    /// Canonical representative: the minimal element of orbit `i`.
    pub fn rep(&self, i: usize) -> usize {
        self.orbits[i][0] as usize
    }

    pub fn stabilizer(&self, i: usize) -> &Subgroup {
        &self.stabilizers[i]
    }

    /// Index of the orbit containing `x`.
    pub fn orbit_of(&self, x: usize) -> usize {
        self.orbit_of[x] as usize
    }
}

pub fn orbit_decomposition(b: &Brace) -> OrbitDecomposition {
    let n = b.order();
    let mut orbit_of = vec![u16::MAX; n];
    let mut orbits = Vec::new();
    let mut stabilizers = Vec::new();
    for start in 0..n {
        if orbit_of[start] != u16::MAX {
            continue;
        }
        let idx = orbits.len() as u16;
        let mut orbit: Vec<u16> = Vec::new();
        let mut stack = vec![start];
        orbit_of[start] = idx;
        while let Some(x) = stack.pop() {
            orbit.push(x as u16);
            for g in 0..n {
                let y = b.lambda_apply(g, x);
                if orbit_of[y] == u16::MAX {
                    orbit_of[y] = idx;
                    stack.push(y);
                }
            }
        }
        orbit.sort_unstable();
        let rep = orbit[0] as usize;
        let stab: Vec<u16> =
            (0..n as u16).filter(|&g| b.lambda_apply(g as usize, rep) == rep).collect();
        stabilizers.push(
            Subgroup::new(b.mul_group(), stab).expect("stabilizer is a subgroup"),
        );
        orbits.push(orbit);
    }
    OrbitDecomposition { orbits, stabilizers, orbit_of }
}

/// All brace automorphisms (bijections preserving both operations), sorted by
/// image vector; the identity comes first.
pub fn brace_automorphisms(b: &Brace) -> Result<Vec<Perm>, BoundExceeded> {
    BoundExceeded::check("brace automorphism search", b.order(), DEFAULT_BRACE_SEARCH_LIMIT)?;
    let mut out = iso_search(b, b, false);
    out.sort_unstable_by(|a, b| a.images().cmp(b.images()));
    Ok(out)
}

/// Searches for a bijection preserving both operations. Prunes by order
/// profiles of both group structures and by socle size.
pub fn brace_isomorphic(b1: &Brace, b2: &Brace) -> Result<Option<Perm>, BoundExceeded> {
    let n = b1.order().max(b2.order());
    BoundExceeded::check("brace isomorphism search", n, DEFAULT_BRACE_SEARCH_LIMIT)?;
    if b1.order() != b2.order() {
        return Ok(None);
    }
    let profile = |b: &Brace| {
        let mut p: Vec<(usize, usize)> = (0..b.order())
            .map(|x| (b.add_group().element_order(x), b.mul_group().element_order(x)))
            .collect();
        p.sort_unstable();
        p
    };
    if profile(b1) != profile(b2) || socle(b1).order() != socle(b2).order() {
        return Ok(None);
    }
    Ok(iso_search(b1, b2, true).into_iter().next())
}

/// Enumerates additive isomorphisms `b1.add -> b2.add` whose generator images
/// match multiplicative orders and socle membership, then keeps those that
/// also preserve multiplication.
fn iso_search(b1: &Brace, b2: &Brace, first_only: bool) -> Vec<Perm> {
    let chain = additive_chain(b1.add_group());
    let soc1 = socle(b1);
    let soc2 = socle(b2);
    let mul_ord1: Vec<usize> = (0..b1.order()).map(|x| b1.mul_group().element_order(x)).collect();
    let mul_ord2: Vec<usize> = (0..b2.order()).map(|x| b2.mul_group().element_order(x)).collect();
    let gens = chain.gens.clone();
    let filter = move |level: usize, c: u16| {
        let g = gens[level] as usize;
        mul_ord1[g] == mul_ord2[c as usize]
            && soc1.contains(g) == soc2.contains(c as usize)
    };
    let mut found: Vec<Perm> = Vec::new();
    enumerate_additive_isos(b1.add_group(), b2.add_group(), &chain, &filter, &mut |images| {
        let n = images.len();
        for x in 0..n {
            for y in 0..n {
                if images[b1.mul(x, y)] as usize
                    != b2.mul(images[x] as usize, images[y] as usize)
                {
                    return true; // keep searching
                }
            }
        }
        found.push(Perm::from_images(images.to_vec()).expect("iso is a bijection"));
        !first_only
    });
    found
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrivialBraceError {
    #[error("group is not abelian: {a}*{b} != {b}*{a}")]
    NotAbelian { a: usize, b: usize },
}

/// The trivial brace on an abelian group: multiplication equals addition.
pub fn trivial_brace(a: FiniteGroup) -> Result<Brace, TrivialBraceError> {
    for x in 0..a.order() {
        for y in x + 1..a.order() {
            if a.op(x, y) != a.op(y, x) {
                return Err(TrivialBraceError::NotAbelian { a: x, b: y });
            }
        }
    }
    let mul = a.clone();
    Ok(Brace::from_groups(a, mul).expect("trivial brace satisfies the brace axioms"))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RumpParamError {
    #[error("p = {p} is not prime")]
    NotPrime { p: usize },
    #[error("n must be at least 1")]
    ZeroExponent,
    #[error("i = {i} outside the admissible range {low}..={high}")]
    IndexOutOfRange { i: usize, low: usize, high: usize },
    #[error(transparent)]
    Bound(#[from] BoundExceeded),
}

/// The cyclic brace on Z/(p^n) with `x·y = x + y + p^i x y`.
///
/// Admissible parameters: `1 <= i <= n`, except `p = 2` where `2 <= i <= n`
/// (for `i = 1` the multiplicative group of the formula is not cyclic, so it
/// falls outside this family).
pub fn rump_brace(p: usize, n: usize, i: usize) -> Result<Brace, RumpParamError> {
    rump_brace_with_limit(p, n, i, DEFAULT_RUMP_LIMIT)
}

pub fn rump_brace_with_limit(
    p: usize,
    n: usize,
    i: usize,
    limit: usize,
) -> Result<Brace, RumpParamError> {
    if !is_prime(p) {
        return Err(RumpParamError::NotPrime { p });
    }
    if n == 0 {
        return Err(RumpParamError::ZeroExponent);
    }
    let low = if p == 2 { 2 } else { 1 };
    if i < low || i > n {
        return Err(RumpParamError::IndexOutOfRange { i, low, high: n });
    }
    let order: usize = p.checked_pow(n as u32).ok_or(BoundExceeded {
        what: "rump brace order",
        actual: usize::MAX,
        bound: limit,
    })?;
    BoundExceeded::check("rump brace order", order, limit)?;
    let pi = p.pow(i as u32) % order;
    let mut mul = vec![vec![0u16; order]; order];
    for x in 0..order {
        for y in 0..order {
            mul[x][y] = ((x + y + pi * x % order * y) % order) as u16;
        }
    }
    let add = FiniteGroup::cyclic(order);
    let mul = validate_group(&mul).expect("rump multiplication is a group");
    Ok(Brace::from_groups(add, mul).expect("rump tables satisfy the brace axioms"))
}

pub(crate) fn is_prime(p: usize) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionError {
    #[error("carrier group is not abelian: {a}+{b} != {b}+{a}")]
    NotAbelian { a: usize, b: usize },
    #[error("sigma has {got} entries, expected one per brace element ({expected})")]
    WrongSigmaLength { got: usize, expected: usize },
    #[error("sigma({g}) is not an additive automorphism of the carrier")]
    SigmaNotAutomorphism { g: usize },
    #[error("sigma is not multiplicative at ({g1},{g2})")]
    SigmaNotHomomorphism { g1: usize, g2: usize },
    #[error("h is not an additive homomorphism at ({m1},{m2})")]
    HNotHomomorphism { m1: usize, m2: usize },
    #[error("h is not surjective")]
    HNotSurjective,
    #[error("compatibility h(sigma(g)(m)) = lambda_g(h(m)) fails at (g={g}, m={m})")]
    Incompatible { g: usize, m: usize },
    #[error("sigma is not injective: sigma({g1}) = sigma({g2})")]
    SigmaNotInjective { g1: usize, g2: usize },
    #[error(transparent)]
    Brace(#[from] BraceViolation),
    #[error("socle of the extension differs from ker(h)")]
    SocleMismatch,
    #[error("h fails to be multiplicative on the extension at ({x},{y})")]
    QuotientMismatch { x: usize, y: usize },
}

/// Builds the brace on `carrier` with `x·y = x + sigma(h(x))(y)` from a brace
/// `b`, an action `sigma: (B,·) -> Aut(carrier,+)` (one automorphism per
/// brace element) and a surjective additive `h: carrier -> (B,+)` satisfying
/// `h(sigma(g)(m)) = λ_g(h(m))`.
///
/// The construction is verified end to end: the result passes the brace
/// axioms, its socle equals `ker(h)`, and `h` is a brace morphism onto `b`
/// (so the quotient by the socle is `b`).
pub fn extension_brace(
    b: &Brace,
    carrier: &FiniteGroup,
    sigma: &[GroupMap],
    h: &GroupMap,
) -> Result<Brace, ExtensionError> {
    let n = carrier.order();
    for x in 0..n {
        for y in x + 1..n {
            if carrier.op(x, y) != carrier.op(y, x) {
                return Err(ExtensionError::NotAbelian { a: x, b: y });
            }
        }
    }
    if sigma.len() != b.order() {
        return Err(ExtensionError::WrongSigmaLength { got: sigma.len(), expected: b.order() });
    }
    // h: (carrier,+) -> (B,+), surjective homomorphism
    if h.images().len() != n {
        return Err(ExtensionError::HNotHomomorphism { m1: 0, m2: 0 });
    }
    for m1 in 0..n {
        for m2 in 0..n {
            if h.apply(carrier.op(m1, m2)) != b.add(h.apply(m1), h.apply(m2)) {
                return Err(ExtensionError::HNotHomomorphism { m1, m2 });
            }
        }
    }
    let mut hit = vec![false; b.order()];
    for m in 0..n {
        hit[h.apply(m)] = true;
    }
    if !hit.iter().all(|&x| x) {
        return Err(ExtensionError::HNotSurjective);
    }
    // each sigma(g) is an additive automorphism of the carrier
    for (g, s) in sigma.iter().enumerate() {
        let bijective = s.as_perm().is_some();
        let additive = s.images().len() == n
            && (0..n).all(|m1| {
                (0..n).all(|m2| {
                    s.apply(carrier.op(m1, m2)) == carrier.op(s.apply(m1), s.apply(m2))
                })
            });
        if !bijective || !additive {
            return Err(ExtensionError::SigmaNotAutomorphism { g });
        }
    }
    // sigma is multiplicative
    for g1 in 0..b.order() {
        for g2 in 0..b.order() {
            let prod = &sigma[b.mul(g1, g2)];
            if (0..n).any(|m| prod.apply(m) != sigma[g1].apply(sigma[g2].apply(m))) {
                return Err(ExtensionError::SigmaNotHomomorphism { g1, g2 });
            }
        }
    }
    // compatibility, checked before injectivity so a broken pairing reports
    // its witness
    for g in 0..b.order() {
        for m in 0..n {
            if h.apply(sigma[g].apply(m)) != b.lambda_apply(g, h.apply(m)) {
                return Err(ExtensionError::Incompatible { g, m });
            }
        }
    }
    for g1 in 0..b.order() {
        for g2 in g1 + 1..b.order() {
            if sigma[g1].images() == sigma[g2].images() {
                return Err(ExtensionError::SigmaNotInjective { g1, g2 });
            }
        }
    }
    // x·y = x + sigma(h(x))(y)
    let mut mul = vec![vec![0u16; n]; n];
    for x in 0..n {
        for y in 0..n {
            mul[x][y] = carrier.op(x, sigma[h.apply(x)].apply(y)) as u16;
        }
    }
    let mul = validate_group(&mul).map_err(BraceViolation::MulInvalid)?;
    let out = Brace::from_groups(carrier.clone(), mul)?;
    // Soc = ker(h)
    let soc = socle(&out);
    let ker: Vec<u16> = h.kernel_elements();
    if soc.elements() != ker.as_slice() {
        return Err(ExtensionError::SocleMismatch);
    }
    // h is a brace morphism onto b, so out/Soc is b
    for x in 0..n {
        for y in 0..n {
            if h.apply(out.mul(x, y)) != b.mul(h.apply(x), h.apply(y)) {
                return Err(ExtensionError::QuotientMismatch { x, y });
            }
        }
    }
    Ok(out)
}

/// Lexicographically minimal `(add, mul)` table pair over all relabelings of
/// the carrier fixing 0. Two braces are isomorphic iff their canonical forms
/// coincide; meant for small orders.
pub fn brace_canonical_form(b: &Brace) -> (Vec<u16>, Vec<u16>) {
    let n = b.order();
    let mut best: Option<(Vec<u16>, Vec<u16>)> = None;
    let mut perm: Vec<u16> = (0..n as u16).collect();
    permute_rest(&mut perm, 1, &mut |p| {
        let relabel = Perm::from_images(p.to_vec()).expect("permutation");
        let add = b.add_group().relabeled(&relabel);
        let mul = b.mul_group().relabeled(&relabel);
        let cand = (flatten(&add), flatten(&mul));
        if best.as_ref().map(|b| cand < *b).unwrap_or(true) {
            best = Some(cand);
        }
    });
    best.expect("at least the identity relabeling")
}

fn flatten(g: &FiniteGroup) -> Vec<u16> {
    g.rows().concat()
}

fn permute_rest(perm: &mut Vec<u16>, from: usize, visit: &mut impl FnMut(&[u16])) {
    if from >= perm.len() {
        visit(perm);
        return;
    }
    for i in from..perm.len() {
        perm.swap(from, i);
        permute_rest(perm, from + 1, visit);
        perm.swap(from, i);
    }
}

/// Checks that addition and multiplication both descend to the cosets of the
/// socle, and returns the quotient brace. Used to validate census output.
pub fn socle_quotient(b: &Brace) -> Result<Brace, BraceViolation> {
    let soc = socle(b);
    let cosets = crate::subgroup::left_cosets(b.add_group(), &soc_as_additive(b, &soc));
    let n = b.order();
    let mut class_of = vec![0u16; n];
    for (ci, coset) in cosets.iter().enumerate() {
        for &e in coset {
            class_of[e as usize] = ci as u16;
        }
    }
    let k = cosets.len();
    let mut add = vec![vec![u16::MAX; k]; k];
    let mut mul = vec![vec![u16::MAX; k]; k];
    for x in 0..n {
        for y in 0..n {
            let (cx, cy) = (class_of[x] as usize, class_of[y] as usize);
            for (table, v) in [(&mut add, b.add(x, y)), (&mut mul, b.mul(x, y))] {
                let cv = class_of[v];
                if table[cx][cy] == u16::MAX {
                    table[cx][cy] = cv;
                } else if table[cx][cy] != cv {
                    return Err(BraceViolation::CompatibilityFails { x, y, z: v });
                }
            }
        }
    }
    validate_brace(&add, &mul)
}

fn soc_as_additive(b: &Brace, soc: &Subgroup) -> Subgroup {
    Subgroup::new(b.add_group(), soc.elements().to_vec())
        .expect("the socle is also an additive subgroup")
}

/// Element-order profile pairs plus socle order; a cheap isomorphism
/// invariant used as a census dedup key.
pub(crate) fn brace_profile(b: &Brace) -> (Vec<(u16, u16)>, usize) {
    let mut p: Vec<(u16, u16)> = (0..b.order())
        .map(|x| {
            (b.add_group().element_order(x) as u16, b.mul_group().element_order(x) as u16)
        })
        .collect();
    p.sort_unstable();
    (p, socle(b).order())
}

/// Memoized per-brace data shared by the solution machinery.
pub(crate) struct BraceContext {
    pub decomposition: OrbitDecomposition,
    pub cores: BTreeMap<Vec<u16>, Subgroup>,
}

impl BraceContext {
    pub fn new(b: &Brace) -> Self {
        BraceContext { decomposition: orbit_decomposition(b), cores: BTreeMap::new() }
    }

    pub fn core(&mut self, b: &Brace, k: &Subgroup) -> Subgroup {
        if let Some(c) = self.cores.get(k.elements()) {
            return c.clone();
        }
        let c = crate::subgroup::subgroup_core(b.mul_group(), k)
            .expect("config subgroups are validated before core computation");
        self.cores.insert(k.elements().to_vec(), c.clone());
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    #[test]
    fn trivial_brace_on_z6_is_valid() {
        let rows = FiniteGroup::cyclic(6).rows();
        let b = validate_brace(&rows, &rows).unwrap();
        assert!(b.is_trivial());
        assert_eq!(socle(&b).order(), 6);
    }

    #[test]
    fn rump_3_2_1_is_valid_and_matches_formula() {
        let b = rump_brace(3, 2, 1).unwrap();
        assert_eq!(b.mul(1, 1), 5); // 1 + 1 + 3
        let raw = validate_brace(&b.add_group().rows(), &b.mul_group().rows()).unwrap();
        assert_eq!(raw, b);
    }

    #[test]
    fn z4_with_klein_multiplication_is_always_a_brace() {
        // The Klein table's rows are the normal Klein subgroup of Sym(4),
        // which lies inside the affine group of every Z/4 labeling, so this
        // pairing cannot violate the brace identity.
        let add = FiniteGroup::cyclic(4).rows();
        let mul = FiniteGroup::from_cyclic_factors(&[2, 2]).rows();
        let b = validate_brace(&add, &mul).unwrap();
        assert_eq!(socle(&b).order(), 2);
    }

    #[test]
    fn mixed_tables_fail_with_witness() {
        // add = Z/4 with a relabeled cyclic multiplication whose rows are not
        // affine: the brace identity fails with a witness triple.
        let add = FiniteGroup::cyclic(4).rows();
        let mul: Vec<Vec<u16>> =
            vec![vec![0, 1, 2, 3], vec![1, 0, 3, 2], vec![2, 3, 1, 0], vec![3, 2, 0, 1]];
        assert!(validate_group(&mul).is_ok());
        match validate_brace(&add, &mul) {
            Err(BraceViolation::CompatibilityFails { x, y, z }) => {
                // confirm the witness on the raw tables
                let a = |p: usize, q: usize| add[p][q] as usize;
                let m = |p: usize, q: usize| mul[p][q] as usize;
                assert_ne!(a(m(x, a(y, z)), x), a(m(x, y), m(x, z)));
            }
            other => panic!("expected compatibility failure, got {other:?}"),
        }
    }

    #[test]
    fn lambda_is_identity_on_trivial_braces() {
        let b = trivial_brace(FiniteGroup::cyclic(5)).unwrap();
        for x in 0..5 {
            assert!(lambda_map(&b, x).is_identity());
        }
    }

    #[test]
    fn rump_lambda_is_multiplication_by_unit() {
        // λ_x(a) = (1 + p^i x) a mod p^n
        let (p, n, i) = (3usize, 2usize, 1usize);
        let order = p.pow(n as u32);
        let b = rump_brace(p, n, i).unwrap();
        for x in 0..order {
            let u = (1 + p.pow(i as u32) * x) % order;
            for a in 0..order {
                assert_eq!(b.lambda_apply(x, a), u * a % order);
            }
        }
    }

    #[test]
    fn lambda_is_a_homomorphism_into_additive_automorphisms() {
        for b in [rump_brace(3, 2, 1).unwrap(), rump_brace(2, 3, 2).unwrap()] {
            let n = b.order();
            for x in 0..n {
                for y in 0..n {
                    assert_eq!(*b.lambda(b.mul(x, y)), b.lambda(x).compose(b.lambda(y)));
                }
                for u in 0..n {
                    for v in 0..n {
                        assert_eq!(
                            b.lambda_apply(x, b.add(u, v)),
                            b.add(b.lambda_apply(x, u), b.lambda_apply(x, v))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn rump_socle_is_generated_by_p_pow_n_minus_i() {
        let b = rump_brace(3, 2, 1).unwrap();
        assert_eq!(socle(&b).elements(), &[0, 3, 6]);
        for (p, n, i) in [(3usize, 2, 2), (2, 3, 2), (2, 3, 3), (5, 2, 1)] {
            let b = rump_brace(p, n, i).unwrap();
            let order = p.pow(n as u32);
            let step = p.pow((n - i) as u32);
            let expected: Vec<u16> = (0..order as u16).filter(|&x| x as usize % step == 0).collect();
            assert_eq!(socle(&b).elements(), expected.as_slice(), "(p,n,i)=({p},{n},{i})");
        }
    }

    #[test]
    fn rump_rejects_bad_parameters() {
        assert!(matches!(rump_brace(4, 2, 1), Err(RumpParamError::NotPrime { .. })));
        assert!(matches!(rump_brace(3, 0, 1), Err(RumpParamError::ZeroExponent)));
        assert!(matches!(rump_brace(3, 2, 3), Err(RumpParamError::IndexOutOfRange { .. })));
        assert!(matches!(rump_brace(2, 3, 1), Err(RumpParamError::IndexOutOfRange { .. })));
        assert!(matches!(rump_brace(2, 1, 1), Err(RumpParamError::IndexOutOfRange { .. })));
    }

    #[test]
    fn rump_with_i_equal_n_is_trivial() {
        assert!(rump_brace(3, 2, 2).unwrap().is_trivial());
        assert!(rump_brace(5, 1, 1).unwrap().is_trivial());
    }

    #[test]
    fn rump_2_3_2_multiplication() {
        let b = rump_brace(2, 3, 2).unwrap();
        assert_eq!(b.mul(1, 1), 6); // 1 + 1 + 4 mod 8
    }

    #[test]
    fn orbits_of_trivial_brace_are_singletons() {
        let b = trivial_brace(FiniteGroup::cyclic(5)).unwrap();
        let d = orbit_decomposition(&b);
        assert_eq!(d.len(), 5);
        for i in 0..5 {
            assert_eq!(d.orbit(i), &[i as u16]);
            assert_eq!(d.stabilizer(i).order(), 5);
        }
    }

    #[test]
    fn orbits_of_rump_3_2_1() {
        let b = rump_brace(3, 2, 1).unwrap();
        let d = orbit_decomposition(&b);
        let orbits: Vec<Vec<u16>> = d.orbits().to_vec();
        assert_eq!(
            orbits,
            vec![vec![0], vec![1, 4, 7], vec![2, 5, 8], vec![3], vec![6]]
        );
        // unit orbits have the order-3 stabilizer {0,3,6}
        assert_eq!(d.stabilizer(1).elements(), &[0, 3, 6]);
        assert_eq!(d.stabilizer(2).elements(), &[0, 3, 6]);
    }

    #[test]
    fn orbit_stabilizer_product_is_group_order() {
        for b in [rump_brace(3, 2, 1).unwrap(), rump_brace(2, 3, 2).unwrap()] {
            let d = orbit_decomposition(&b);
            let total: usize = d.orbits().iter().map(|o| o.len()).sum();
            assert_eq!(total, b.order());
            for i in 0..d.len() {
                assert_eq!(d.orbit(i).len() * d.stabilizer(i).order(), b.order());
            }
        }
    }

    #[test]
    fn automorphisms_of_trivial_prime_brace() {
        let b = trivial_brace(FiniteGroup::cyclic(5)).unwrap();
        let auts = brace_automorphisms(&b).unwrap();
        assert_eq!(auts.len(), 4);
        assert!(auts[0].is_identity());
    }

    #[test]
    fn automorphisms_of_rump_braces_match_closed_forms() {
        // i < n: p^i of them; i = n: all additive units p^(n-1)(p-1)
        for (p, n, i, expected) in
            [(3usize, 2usize, 1usize, 3usize), (3, 2, 2, 6), (2, 3, 2, 4), (2, 3, 3, 4)]
        {
            let b = rump_brace(p, n, i).unwrap();
            assert_eq!(brace_automorphisms(&b).unwrap().len(), expected, "(p,n,i)=({p},{n},{i})");
        }
    }

    #[test]
    fn rump_automorphisms_are_multiplications_by_units() {
        let b = rump_brace(3, 2, 1).unwrap();
        let auts = brace_automorphisms(&b).unwrap();
        let units: Vec<usize> = auts.iter().map(|a| a.apply(1)).collect();
        assert_eq!(units, vec![1, 4, 7]); // 1 + 3k
    }

    #[test]
    fn socle_order_separates_trivial_from_rump() {
        let t = trivial_brace(FiniteGroup::cyclic(9)).unwrap();
        let r = rump_brace(3, 2, 1).unwrap();
        assert_eq!(brace_isomorphic(&t, &r).unwrap(), None);
    }

    #[test]
    fn relabeled_brace_is_isomorphic() {
        let b = rump_brace(3, 2, 1).unwrap();
        let relabel = Perm::from_images(vec![0, 4, 7, 2, 8, 3, 1, 5, 6]).unwrap();
        let b2 = Brace::from_groups(
            b.add_group().relabeled(&relabel),
            b.mul_group().relabeled(&relabel),
        )
        .unwrap();
        let f = brace_isomorphic(&b, &b2).unwrap().expect("relabelings are isomorphic");
        for x in 0..9 {
            for y in 0..9 {
                assert_eq!(f.apply(b.add(x, y)), b2.add(f.apply(x), f.apply(y)));
                assert_eq!(f.apply(b.mul(x, y)), b2.mul(f.apply(x), f.apply(y)));
            }
        }
        assert_eq!(brace_canonical_form(&b), brace_canonical_form(&b2));
    }

    #[test]
    fn brace_is_isomorphic_to_itself_via_identity() {
        let b = rump_brace(2, 3, 2).unwrap();
        let f = brace_isomorphic(&b, &b).unwrap().unwrap();
        assert!(f.is_identity());
    }

    #[test]
    fn extension_of_trivial_prime_brace_gives_rump() {
        // B = trivial Z/3, carrier Z/9, sigma(g) = mult by 1+3g, h = mod 3
        let p = 3usize;
        let b = trivial_brace(FiniteGroup::cyclic(p)).unwrap();
        let carrier = FiniteGroup::cyclic(p * p);
        let sigma: Vec<GroupMap> = (0..p)
            .map(|g| {
                let images: Vec<u16> =
                    (0..p * p).map(|m| ((1 + p * g) * m % (p * p)) as u16).collect();
                GroupMap::new(&carrier, &carrier, images).unwrap()
            })
            .collect();
        let h = GroupMap::new(
            &carrier,
            b.add_group(),
            (0..p * p).map(|m| (m % p) as u16).collect(),
        )
        .unwrap();
        let e = extension_brace(&b, &carrier, &sigma, &h).unwrap();
        assert_eq!(e, rump_brace(3, 2, 1).unwrap());
    }

    #[test]
    fn extension_by_one_element_brace_is_trivial() {
        let b = trivial_brace(FiniteGroup::cyclic(1)).unwrap();
        let carrier = FiniteGroup::from_cyclic_factors(&[2, 2]);
        let sigma = vec![GroupMap::identity(4)];
        let h = GroupMap::new(&carrier, b.add_group(), vec![0; 4]).unwrap();
        let e = extension_brace(&b, &carrier, &sigma, &h).unwrap();
        assert!(e.is_trivial());
    }

    #[test]
    fn broken_compatibility_reports_witness() {
        // B: brace on Z/4 with x·y = x + y + 2xy (λ nontrivial), carrier Z/8,
        // h = mod 4, sigma all-identity: compatibility must fail.
        let add = FiniteGroup::cyclic(4);
        let mut mul = vec![vec![0u16; 4]; 4];
        for x in 0..4 {
            for y in 0..4 {
                mul[x][y] = ((x + y + 2 * x * y) % 4) as u16;
            }
        }
        let b = Brace::from_groups(add, validate_group(&mul).unwrap()).unwrap();
        let carrier = FiniteGroup::cyclic(8);
        let sigma = vec![GroupMap::identity(8); 4];
        let h =
            GroupMap::new(&carrier, b.add_group(), (0..8).map(|m| (m % 4) as u16).collect())
                .unwrap();
        match extension_brace(&b, &carrier, &sigma, &h) {
            Err(ExtensionError::Incompatible { g, m }) => {
                assert_ne!(h.apply(sigma[g].apply(m)), b.lambda_apply(g, h.apply(m)));
            }
            other => panic!("expected compatibility failure, got {other:?}"),
        }
    }

    #[test]
    fn socle_quotient_descends_on_rump_braces() {
        let b = rump_brace(3, 2, 1).unwrap();
        let q = socle_quotient(&b).unwrap();
        assert_eq!(q.order(), 3);
        assert!(q.is_trivial()); // quotient of G_1 by its socle is trivial Z/3
    }
}
