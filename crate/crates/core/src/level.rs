//! Ghost testing, ghost-lemma certificates, level bounds and the
//! dimension reports.
//!
//! A chain of composable maps that are all `G`-ghost with non-null-homotopic
//! composite certifies `level_G(source) > t`; this module builds such chains
//! from regular sequences via Koszul towers, checks them degree by degree,
//! and packages the evidence as a replayable [`GhostCertificate`].
//! Constructive upper bounds come from Gaussian minimization of a complex
//! followed by cone peeling, recorded as a [`BuildPlan`].

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use thiserror::Error;

use crate::complex::{
    cone, graded_hom, hom_differential, hom_flatten, hom_rank, hom_unflatten, hom_window,
    is_nullhomotopic, ChainMap, FreeComplex,
};
use crate::error::{Error as KernelError, Result as KernelResult};
use crate::fgmodule::{depth, is_regular_sequence, Depth, IdealGens, ModulePresentation};
use crate::groebner::{syzygies, FreeMap, ImageBasis};
use crate::koszul::KoszulTower;
use crate::poly::{AlgebraElement, Poly};
use crate::ring::{monomials_of_degree, RingSpec};

/// Failure taxonomy mirroring the hypotheses of the certificate pipeline,
/// so a failure localizes to the violated assumption.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CertFailure {
    /// Factor `s` (1-based) induces a nonzero map on `Hom*(G, -)`.
    #[error("factor {0} is not ghost for the chosen generator")]
    NotGhost(usize),
    /// The candidate composition is null-homotopic.
    #[error("the candidate composition is null-homotopic")]
    CompositionZero,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("unsupported generator: {0}")]
    UnsupportedGenerator(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl From<KernelError> for CertFailure {
    fn from(e: KernelError) -> Self {
        CertFailure::InvalidInput(e.to_string())
    }
}

// --- ghost testing ---------------------------------------------------------------

/// Per-degree verdicts for `Hom*(G, f) = 0`: for each degree in the
/// structural window of `Hom(G, source)`, `true` means every cycle maps to
/// a boundary through `f`.
pub fn ghost_check_degrees(g: &FreeComplex, f: &ChainMap) -> Vec<(i64, bool)> {
    let src = f.source();
    let tgt = f.target();
    let Some((lo, hi)) = hom_window(g, src) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for n in lo..=hi {
        if hom_rank(g, src, n) == 0 {
            out.push((n, true));
            continue;
        }
        let cycles = syzygies(&hom_differential(g, src, n));
        if cycles.source_rank() == 0 {
            out.push((n, true));
            continue;
        }
        let boundary = ImageBasis::new(&hom_differential(g, tgt, n + 1));
        let mut zero = true;
        for col in cycles.columns() {
            let z = hom_unflatten(g, src, n, &col);
            let mut through = BTreeMap::new();
            for (i, m) in z {
                through.insert(i, f.component(i + n).compose(&m));
            }
            let w = hom_flatten(g, tgt, n, &through);
            if boundary.lift(&w).is_none() {
                zero = false;
                break;
            }
        }
        out.push((n, zero));
    }
    out
}

/// Is `f` `G`-ghost, i.e. does it induce zero on `Hom*(G, -)` in every
/// degree?
pub fn is_ghost(g: &FreeComplex, f: &ChainMap) -> bool {
    ghost_check_degrees(g, f).iter().all(|(_, z)| *z)
}

// --- certificates ----------------------------------------------------------------

/// A verified chain of `G`-ghost maps with non-null-homotopic composition.
/// Self-contained: replaying the stored tower reproduces every verdict.
#[derive(Debug, Clone)]
pub struct GhostCertificate {
    generator: FreeComplex,
    tower: KoszulTower,
    ghost_checks: Vec<Vec<(i64, bool)>>,
    composition: ChainMap,
    implied_level_lower_bound: usize,
}

impl GhostCertificate {
    pub fn generator(&self) -> &FreeComplex {
        &self.generator
    }

    pub fn tower(&self) -> &KoszulTower {
        &self.tower
    }

    pub fn ghost_checks(&self) -> &[Vec<(i64, bool)>] {
        &self.ghost_checks
    }

    pub fn composition(&self) -> &ChainMap {
        &self.composition
    }

    /// Number of ghost maps in the chain.
    pub fn chain_length(&self) -> usize {
        self.tower.len()
    }

    /// The certified bound: `level_G(tower top) >= this`.
    pub fn implied_level_lower_bound(&self) -> usize {
        self.implied_level_lower_bound
    }

    /// Reassemble from stored parts (wire layer). The verdicts are carried
    /// as claims; [`replay_certificate`] recomputes them.
    pub(crate) fn from_parts(
        generator: FreeComplex,
        tower: KoszulTower,
        ghost_checks: Vec<Vec<(i64, bool)>>,
        implied_level_lower_bound: usize,
    ) -> KernelResult<GhostCertificate> {
        if implied_level_lower_bound != tower.len() + 1 {
            return Err(KernelError::InvalidInput(format!(
                "implied bound {} does not match a chain of {} maps",
                implied_level_lower_bound,
                tower.len()
            )));
        }
        if ghost_checks.len() != tower.len() {
            return Err(KernelError::InvalidInput(
                "one ghost-check record per factor is required".into(),
            ));
        }
        let composition = tower.composition();
        Ok(GhostCertificate {
            generator,
            tower,
            ghost_checks,
            composition,
            implied_level_lower_bound,
        })
    }
}

/// Build and verify a certificate with exponents chosen from the torsion
/// of each element on `Hom*(G, stage)`.
pub fn ghost_certificate(
    g: &FreeComplex,
    m: &FreeComplex,
    xs: &[AlgebraElement],
) -> Result<GhostCertificate, CertFailure> {
    certificate_from_tower(g, KoszulTower::auto(g, m, xs)?)
}

/// Build and verify a certificate with prescribed exponents.
pub fn ghost_certificate_with_exponents(
    g: &FreeComplex,
    m: &FreeComplex,
    xs: &[AlgebraElement],
    exponents: &[u32],
) -> Result<GhostCertificate, CertFailure> {
    certificate_from_tower(g, KoszulTower::with_exponents(m, xs, exponents)?)
}

fn certificate_from_tower(
    g: &FreeComplex,
    tower: KoszulTower,
) -> Result<GhostCertificate, CertFailure> {
    let mut checks = Vec::new();
    for s in 1..=tower.len() {
        let verdicts = ghost_check_degrees(g, tower.factor(s));
        if !verdicts.iter().all(|(_, z)| *z) {
            return Err(CertFailure::NotGhost(s));
        }
        checks.push(verdicts);
    }
    let composition = tower.composition();
    if is_nullhomotopic(&composition) {
        return Err(CertFailure::CompositionZero);
    }
    let t = tower.len();
    Ok(GhostCertificate {
        generator: g.clone(),
        tower,
        ghost_checks: checks,
        composition,
        implied_level_lower_bound: t + 1,
    })
}

/// Outcome of re-running all checks of a certificate from its stored data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayOutcome {
    /// the stored tower reproduces from (base, sequence, exponents)
    pub structure_ok: bool,
    pub factors_ghost: Vec<bool>,
    pub composition_nullhomotopic: bool,
}

impl ReplayOutcome {
    pub fn confirms(&self, cert: &GhostCertificate) -> bool {
        self.structure_ok
            && self.factors_ghost.len() == cert.chain_length()
            && self.factors_ghost.iter().all(|b| *b)
            && !self.composition_nullhomotopic
    }
}

/// Replay a certificate: rebuild the tower, re-run every ghost check and
/// the null-homotopy test on the composite.
pub fn replay_certificate(cert: &GhostCertificate) -> KernelResult<ReplayOutcome> {
    let rebuilt = KoszulTower::with_exponents(
        cert.tower.base(),
        cert.tower.elements(),
        cert.tower.exponents(),
    )?;
    let structure_ok = rebuilt.stages() == cert.tower.stages()
        && rebuilt.factors() == cert.tower.factors()
        && rebuilt.composition() == cert.composition;
    let factors_ghost = (1..=rebuilt.len())
        .map(|s| is_ghost(&cert.generator, rebuilt.factor(s)))
        .collect();
    let composition_nullhomotopic = is_nullhomotopic(&rebuilt.composition());
    Ok(ReplayOutcome { structure_ok, factors_ghost, composition_nullhomotopic })
}

// --- minimization ------------------------------------------------------------------

/// One Gaussian cancellation: the pivot is the `(row, col)` entry of the
/// differential into `degree - 1`, which must be a nonzero constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Elimination {
    pub degree: i64,
    pub row: usize,
    pub col: usize,
}

/// Cancel one unit entry of `d : X_degree -> X_{degree-1}`, removing basis
/// element `col` upstairs and `row` downstairs. The adjacent differentials
/// lose a row resp. a column; the correction terms vanish identically by
/// `d^2 = 0` and are asserted to.
pub fn eliminate_at(x: &FreeComplex, e: Elimination) -> KernelResult<FreeComplex> {
    let ring = x.ring();
    let d = x.differential(e.degree);
    if e.row >= d.target_rank() || e.col >= d.source_rank() {
        return Err(KernelError::InvalidInput("pivot outside the differential".into()));
    }
    let pivot = d.entry(e.row, e.col);
    if !pivot.is_nonzero_constant() {
        return Err(KernelError::InvalidInput(format!(
            "pivot at degree {}, ({}, {}) is not a unit constant",
            e.degree, e.row, e.col
        )));
    }
    let c_inv = {
        let (c, _) = pivot.leading().unwrap();
        Poly::from_terms(ring, vec![(ring.coeff_inv(c), vec![0; ring.num_vars])]).unwrap()
    };

    // Schur complement on d itself
    let rows = d.target_rank();
    let cols = d.source_rank();
    let mut new_d = Vec::new();
    for r in 0..rows {
        if r == e.row {
            continue;
        }
        let mut out_row = Vec::new();
        for c in 0..cols {
            if c == e.col {
                continue;
            }
            let corr = &(&c_inv * d.entry(r, e.col)) * d.entry(e.row, c);
            out_row.push(d.entry(r, c) - &corr);
        }
        new_d.push(out_row);
    }
    let new_d = FreeMap::new(ring, rows - 1, cols - 1, new_d)?;

    // differential from above loses row `col`; the corrected row vanishes
    let up = x.differential(e.degree + 1);
    let mut new_up = Vec::new();
    for r in 0..up.target_rank() {
        if r == e.col {
            for v in 0..up.source_rank() {
                let mut corr = up.entry(e.col, v).clone();
                for j in 0..cols {
                    if j != e.col {
                        corr = &corr + &(&(&c_inv * d.entry(e.row, j)) * up.entry(j, v));
                    }
                }
                debug_assert!(corr.is_zero(), "cancelled row must vanish by d^2 = 0");
            }
            continue;
        }
        new_up.push((0..up.source_rank()).map(|v| up.entry(r, v).clone()).collect());
    }
    let new_up = FreeMap::new(ring, up.target_rank().saturating_sub(1), up.source_rank(), new_up)?;

    // differential below loses column `row`; the corrected column vanishes
    let down = x.differential(e.degree - 1);
    let mut new_down = Vec::new();
    for u in 0..down.target_rank() {
        let mut out_row = Vec::new();
        for k in 0..down.source_rank() {
            if k == e.row {
                let mut corr = down.entry(u, e.row).clone();
                for k2 in 0..rows {
                    if k2 != e.row {
                        corr = &corr + &(&(&c_inv * d.entry(k2, e.col)) * down.entry(u, k2));
                    }
                }
                debug_assert!(corr.is_zero(), "cancelled column must vanish by d^2 = 0");
                continue;
            }
            out_row.push(down.entry(u, k).clone());
        }
        new_down.push(out_row);
    }
    let new_down = FreeMap::new(
        ring,
        down.target_rank(),
        down.source_rank().saturating_sub(1),
        new_down,
    )?;

    // reassemble
    let mut ranks = x.ranks().to_vec();
    let lo = x.lo();
    let idx = |deg: i64| (deg - lo) as usize;
    ranks[idx(e.degree)] -= 1;
    ranks[idx(e.degree - 1)] -= 1;
    let mut diffs = Vec::new();
    for deg in lo + 1..=x.hi() {
        let m = if deg == e.degree {
            new_d.clone()
        } else if deg == e.degree + 1 {
            new_up.clone()
        } else if deg == e.degree - 1 {
            new_down.clone()
        } else {
            x.differential(deg)
        };
        diffs.push(m);
    }
    FreeComplex::new(ring, lo, ranks, diffs)
}

/// Cancel unit entries until none remain. Exact: only entries that are
/// literally nonzero constants are invertible in a polynomial ring.
pub fn minimize(x: &FreeComplex) -> (FreeComplex, Vec<Elimination>) {
    let mut cur = x.clone();
    let mut trace = Vec::new();
    'outer: loop {
        for degree in cur.lo() + 1..=cur.hi() {
            let d = cur.differential(degree);
            for row in 0..d.target_rank() {
                for col in 0..d.source_rank() {
                    if d.entry(row, col).is_nonzero_constant() {
                        let e = Elimination { degree, row, col };
                        cur = eliminate_at(&cur, e).expect("pivot verified");
                        trace.push(e);
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    (cur, trace)
}

// --- build plans --------------------------------------------------------------------

/// One step of a build plan. Steps form a straight-line program; `of` /
/// `onto` / `attach` reference earlier step indices.
#[derive(Debug, Clone, PartialEq)]
pub enum PlanStep {
    /// the generator itself
    TakeG,
    Shift { of: usize, by: i64 },
    /// direct sum in order; the empty sum is the zero complex
    Sum { of: Vec<usize> },
    /// `cone(g : attach -> onto)` where `attach` is a stalk and `g` is
    /// concentrated in `map_degree`
    ConeWith { attach: usize, onto: usize, map_degree: i64, matrix: FreeMap },
    /// declares the plan target: applying `eliminations` to the original
    /// complex yields the object at `of` (plus cancelled contractible
    /// pairs, which do not change the level)
    Summand { of: usize, eliminations: Vec<Elimination> },
}

/// Witness that a complex lies in `thick^{cone_count + 1}(G)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BuildPlan {
    pub steps: Vec<PlanStep>,
    pub cone_count: usize,
}

impl BuildPlan {
    /// The level bound this plan certifies.
    pub fn certified_bound(&self) -> usize {
        self.cone_count + 1
    }
}

/// Execute a plan and verify its summand declaration against `original`.
/// Returns the built object.
pub fn replay_plan(
    plan: &BuildPlan,
    g: &FreeComplex,
    original: &FreeComplex,
) -> KernelResult<FreeComplex> {
    let ring = g.ring();
    let mut objs: Vec<FreeComplex> = Vec::new();
    let mut target: Option<FreeComplex> = None;
    for step in &plan.steps {
        let obj = match step {
            PlanStep::TakeG => g.clone(),
            PlanStep::Shift { of, by } => {
                let src = objs.get(*of).ok_or_else(|| bad_ref(*of))?;
                src.shift(*by)
            }
            PlanStep::Sum { of } => {
                let mut acc = FreeComplex::zero(ring);
                for idx in of {
                    let part = objs.get(*idx).ok_or_else(|| bad_ref(*idx))?;
                    acc = acc.direct_sum(part);
                }
                acc
            }
            PlanStep::ConeWith { attach, onto, map_degree, matrix } => {
                let a = objs.get(*attach).ok_or_else(|| bad_ref(*attach))?.clone();
                let b = objs.get(*onto).ok_or_else(|| bad_ref(*onto))?.clone();
                let mut comps = BTreeMap::new();
                comps.insert(*map_degree, matrix.clone());
                let f = ChainMap::new(a, b, comps)?;
                cone(&f).complex
            }
            PlanStep::Summand { of, eliminations } => {
                let built = objs.get(*of).ok_or_else(|| bad_ref(*of))?.clone();
                let mut reduced = original.clone();
                for e in eliminations {
                    reduced = eliminate_at(&reduced, *e)?;
                }
                if reduced.trim() != built.trim() {
                    return Err(KernelError::InvalidInput(
                        "summand declaration does not reproduce the built object".into(),
                    ));
                }
                target = Some(built.clone());
                built
            }
        };
        objs.push(obj);
    }
    target
        .or_else(|| objs.last().cloned())
        .ok_or_else(|| KernelError::InvalidInput("empty plan".into()))
}

fn bad_ref(idx: usize) -> KernelError {
    KernelError::InvalidInput(format!("plan references undefined object {idx}"))
}

/// Append steps building `(+)_{rank} S^{degree} G`; returns the object index.
fn push_stalk(steps: &mut Vec<PlanStep>, degree: i64, rank: usize) -> usize {
    steps.push(PlanStep::TakeG);
    let g_idx = steps.len() - 1;
    steps.push(PlanStep::Shift { of: g_idx, by: degree });
    let s_idx = steps.len() - 1;
    steps.push(PlanStep::Sum { of: vec![s_idx; rank] });
    steps.len() - 1
}

/// Constructive level upper bound against the canonical generator
/// `G = A` (rank-1 free in degree 0): minimize, then either recognize a sum
/// of shifted frees (bound 1) or peel the support one degree at a time
/// (bound = support width). The returned plan replays to the minimized
/// complex and records the cancellations in its summand step.
pub fn level_upper_bound(
    g: &FreeComplex,
    x: &FreeComplex,
) -> Result<(usize, BuildPlan), CertFailure> {
    let ring = x.ring();
    if g.trim() != FreeComplex::stalk(ring, 0, 1) {
        return Err(CertFailure::UnsupportedGenerator(
            "upper bounds are computed against the rank-1 free generator in degree 0".into(),
        ));
    }
    let (min, eliminations) = minimize(x);
    let t = min.trim();
    let mut steps = Vec::new();
    let all_zero_diffs =
        (t.lo() + 1..=t.hi()).all(|d| t.differential(d).is_zero());
    let (bound, cone_count) = if t.is_empty() {
        steps.push(PlanStep::Sum { of: vec![] });
        (1usize, 0usize)
    } else if all_zero_diffs {
        let mut parts = Vec::new();
        for d in t.lo()..=t.hi() {
            if t.rank(d) > 0 {
                parts.push(push_stalk(&mut steps, d, t.rank(d)));
            }
        }
        steps.push(PlanStep::Sum { of: parts });
        (1, 0)
    } else {
        let mut acc = push_stalk(&mut steps, t.lo(), t.rank(t.lo()));
        let mut cones = 0;
        for d in t.lo() + 1..=t.hi() {
            if t.rank(d) == 0 {
                continue;
            }
            let stalk = push_stalk(&mut steps, d - 1, t.rank(d));
            steps.push(PlanStep::ConeWith {
                attach: stalk,
                onto: acc,
                map_degree: d - 1,
                matrix: t.differential(d).neg(),
            });
            acc = steps.len() - 1;
            cones += 1;
        }
        (t.support_width(), cones)
    };
    let of = steps.len() - 1;
    steps.push(PlanStep::Summand { of, eliminations });
    let plan = BuildPlan { steps, cone_count };
    debug_assert_eq!(plan.certified_bound(), bound);
    Ok((bound, plan))
}

// --- depth <= generation time -----------------------------------------------------

/// Report for one run of the depth-to-generation-time comparison.
#[derive(Debug, Clone)]
pub struct DepthGentimeReport {
    pub depth: usize,
    pub sequence: Vec<AlgebraElement>,
    pub certificate: GhostCertificate,
}

impl DepthGentimeReport {
    /// depth = chain length <= every generation time of the generator
    pub fn inequality_holds(&self) -> bool {
        self.depth == self.certificate.chain_length()
    }
}

/// Exhaustive search for a regular sequence of the target length among the
/// ideal generators and their pairwise products.
fn find_regular_sequence(
    a: &IdealGens,
    m: &ModulePresentation,
    len: usize,
) -> Option<Vec<AlgebraElement>> {
    let mut candidates = a.values();
    let base = a.values();
    for i in 0..base.len() {
        for j in i..base.len() {
            let prod = &base[i] * &base[j];
            if !candidates.contains(&prod) {
                candidates.push(prod);
            }
        }
    }
    fn extend(
        prefix: &mut Vec<AlgebraElement>,
        candidates: &[Poly],
        m: &ModulePresentation,
        len: usize,
    ) -> Option<Vec<AlgebraElement>> {
        if prefix.len() == len {
            return Some(prefix.clone());
        }
        for c in candidates {
            prefix.push(AlgebraElement::in_degree_zero(c.clone()));
            if is_regular_sequence(prefix, m) {
                if let Some(found) = extend(prefix, candidates, m, len) {
                    return Some(found);
                }
            }
            prefix.pop();
        }
        None
    }
    extend(&mut Vec::new(), &candidates, m, len)
}

/// Verify `depth_A(a, Hom*(M, M)) <= gentime(G)` at desk scale: compute the
/// depth on degree-0 endomorphisms, find a regular sequence of that length
/// in `a`, and emit the ghost certificate of the same length.
pub fn verify_depth_leq_gentime(
    g: &FreeComplex,
    m: &FreeComplex,
    a: &IdealGens,
) -> Result<DepthGentimeReport, CertFailure> {
    let hom_mm = graded_hom(m, m);
    if hom_mm.is_zero() {
        return Err(CertFailure::PreconditionFailed(
            "Hom*(M, M) vanishes; the object is zero".into(),
        ));
    }
    let survives = hom_mm
        .components
        .values()
        .any(|c| !c.quotient_by_elements(&a.values()).is_zero_module());
    if !survives {
        return Err(CertFailure::PreconditionFailed(
            "the ideal acts surjectively on Hom*(M, M)".into(),
        ));
    }
    let end0 = hom_mm.components.get(&0).ok_or_else(|| {
        CertFailure::PreconditionFailed("degree-0 endomorphisms vanish".into())
    })?;
    let d = match depth(a, end0) {
        Depth::Finite(d) => d,
        Depth::Infinite => {
            return Err(CertFailure::PreconditionFailed(
                "the ideal acts surjectively on degree-0 endomorphisms".into(),
            ))
        }
    };
    let sequence = find_regular_sequence(a, end0, d).ok_or_else(|| {
        CertFailure::PreconditionFailed(format!(
            "no regular sequence of length {d} among the generators and their pairwise products"
        ))
    })?;
    let certificate = ghost_certificate(g, m, &sequence)?;
    Ok(DepthGentimeReport { depth: d, sequence, certificate })
}

// --- random perfect complexes -------------------------------------------------------

fn random_homogeneous(ring: RingSpec, degree: u32, rng: &mut impl Rng) -> Poly {
    let mut acc = Poly::zero(ring);
    for e in monomials_of_degree(ring.num_vars, degree) {
        if rng.gen_bool(0.6) {
            let c = ring.coeff_from_i64(rng.gen_range(-5..=5));
            acc = &acc + &Poly::from_terms(ring, vec![(c, e)]).unwrap();
        }
    }
    acc
}

/// Drop zero and redundant columns, leaving an inclusion-minimal
/// generating set (minimal in the graded case).
fn prune_generators(ring: RingSpec, rank: usize, cols: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    let mut kept: Vec<Vec<Poly>> = cols
        .iter()
        .filter(|c| !c.iter().all(Poly::is_zero))
        .cloned()
        .collect();
    kept.dedup();
    loop {
        let mut removed = false;
        let mut i = 0;
        while i < kept.len() {
            let mut others = kept.clone();
            let candidate = others.remove(i);
            if others.is_empty() {
                i += 1;
                continue;
            }
            let f = FreeMap::from_columns(ring, rank, &others).unwrap();
            if ImageBasis::new(&f).contains(&candidate) {
                kept.remove(i);
                removed = true;
            } else {
                i += 1;
            }
        }
        if !removed {
            break;
        }
    }
    kept
}

/// Free resolution of `coker(f)` by iterated minimal syzygies; for graded
/// input this is the minimal resolution and stops within the number of
/// variables.
pub fn resolve_cokernel(f: &FreeMap) -> KernelResult<FreeComplex> {
    let ring = f.ring();
    let cap = ring.num_vars + 1;
    let mut diffs = vec![f.clone()];
    let mut ranks = vec![f.target_rank(), f.source_rank()];
    let mut last = f.clone();
    for step in 0.. {
        let pruned = prune_generators(ring, last.source_rank(), &syzygies(&last).columns());
        if pruned.is_empty() {
            break;
        }
        if step >= cap {
            return Err(KernelError::Internal(
                "free resolution did not terminate within the variable count".into(),
            ));
        }
        let next = FreeMap::from_columns(ring, last.source_rank(), &pruned)?;
        ranks.push(next.source_rank());
        diffs.push(next.clone());
        last = next;
    }
    FreeComplex::new(ring, 0, ranks, diffs)
}

/// A seeded random perfect complex: the free resolution of the cokernel of
/// a random matrix with homogeneous entries of degree at most 2, randomly
/// shifted. Width stays at most `num_vars + 1`.
pub fn random_perfect_complex(ring: RingSpec, rng: &mut impl Rng) -> FreeComplex {
    loop {
        let rows = rng.gen_range(1..=2usize);
        let ncols = rng.gen_range(1..=3usize);
        let mut cols = Vec::new();
        for _ in 0..ncols {
            let degree = rng.gen_range(1..=2u32);
            let col: Vec<Poly> = (0..rows).map(|_| random_homogeneous(ring, degree, rng)).collect();
            if col.iter().any(|p| !p.is_zero()) {
                cols.push(col);
            }
        }
        if cols.is_empty() {
            // degenerate draw; the cokernel would just be free
            let rank = rng.gen_range(1..=2usize);
            let shift = rng.gen_range(-1..=1i64);
            return FreeComplex::stalk(ring, shift, rank);
        }
        let f = FreeMap::from_columns(ring, rows, &cols).unwrap();
        if let Ok(res) = resolve_cokernel(&f) {
            let shift = rng.gen_range(-1..=1i64);
            return res.shift(shift);
        }
    }
}

// --- the dimension report -----------------------------------------------------------

#[derive(Debug, Clone)]
pub struct RdimOptions {
    pub samples: usize,
    pub seed: u64,
    pub max_nvars: usize,
    /// user-supplied candidate generators; the certificate is re-verified
    /// against each with its own exponents
    pub candidate_generators: Vec<FreeComplex>,
}

impl Default for RdimOptions {
    fn default() -> Self {
        RdimOptions { samples: 20, seed: 1, max_nvars: 3, candidate_generators: Vec::new() }
    }
}

#[derive(Debug, Clone)]
pub struct BatteryEntry {
    pub index: usize,
    pub complex: FreeComplex,
    pub upper_bound: usize,
    pub plan: BuildPlan,
}

#[derive(Debug, Clone)]
pub struct KoszulLevelReport {
    pub complex: FreeComplex,
    pub lower_bound: usize,
    pub upper_bound: usize,
    pub plan: BuildPlan,
}

impl KoszulLevelReport {
    pub fn exact(&self) -> bool {
        self.lower_bound == self.upper_bound
    }
}

/// Everything `verify-theorem` reports: the canonical certificate (plus one
/// per candidate generator), the exact level of the full Koszul complex,
/// and an upper-bound battery of random perfect complexes.
#[derive(Debug, Clone)]
pub struct RdimReport {
    pub ring: RingSpec,
    pub dim: usize,
    pub certificate: GhostCertificate,
    pub candidate_certificates: Vec<GhostCertificate>,
    pub koszul: Option<KoszulLevelReport>,
    pub battery: Vec<BatteryEntry>,
}

impl RdimReport {
    pub fn rdim_lower_bound(&self) -> usize {
        self.certificate.chain_length()
    }

    /// Largest upper bound seen across the battery and the Koszul target;
    /// evidence that the generation time of the free generator is `dim`.
    pub fn gentime_evidence(&self) -> usize {
        let battery_max = self.battery.iter().map(|b| b.upper_bound).max().unwrap_or(1);
        let koszul_max = self.koszul.as_ref().map(|k| k.upper_bound).unwrap_or(1);
        battery_max.max(koszul_max).saturating_sub(1)
    }

    /// The headline check: lower bound `dim` certified, Koszul level exact
    /// at `dim + 1`, every sample buildable within `dim + 1` steps.
    pub fn verified(&self) -> bool {
        let n = self.dim;
        let cert_ok = self.certificate.chain_length() == n;
        let candidates_ok = self
            .candidate_certificates
            .iter()
            .all(|c| c.chain_length() == n);
        let koszul_ok = match (&self.koszul, n) {
            (None, 0) => true,
            (Some(k), _) => k.lower_bound == n + 1 && k.upper_bound == n + 1,
            (None, _) => false,
        };
        let battery_ok = self.battery.iter().all(|b| b.upper_bound <= n + 1);
        cert_ok && candidates_ok && koszul_ok && battery_ok
    }
}

/// Run the whole desk-scale verification for `F_p[x_0..x_{n-1}]`.
pub fn rdim_report(ring: RingSpec, opts: &RdimOptions) -> Result<RdimReport, CertFailure> {
    if ring.is_rational() {
        return Err(CertFailure::InvalidInput(
            "the dimension report is defined over prime fields".into(),
        ));
    }
    let n = ring.num_vars;
    if n > opts.max_nvars {
        return Err(CertFailure::InvalidInput(format!(
            "{n} variables exceed the configured bound {}",
            opts.max_nvars
        )));
    }
    let a = FreeComplex::stalk(ring, 0, 1);
    let vars: Vec<AlgebraElement> = (0..n)
        .map(|i| AlgebraElement::in_degree_zero(Poly::var(ring, i).unwrap()))
        .collect();

    let certificate = ghost_certificate(&a, &a, &vars)?;
    let mut candidate_certificates = Vec::new();
    for g in &opts.candidate_generators {
        candidate_certificates.push(ghost_certificate(g, &a, &vars)?);
    }

    let koszul = if n >= 1 {
        let k = crate::koszul::koszul_object(&a, &vars)?;
        let (upper, plan) = level_upper_bound(&a, &k)?;
        Some(KoszulLevelReport {
            complex: k,
            lower_bound: certificate.implied_level_lower_bound(),
            upper_bound: upper,
            plan,
        })
    } else {
        None
    };

    let mut battery = Vec::new();
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(opts.seed);
    for index in 0..opts.samples {
        let complex = random_perfect_complex(ring, &mut rng);
        let (upper_bound, plan) = level_upper_bound(&a, &complex)?;
        battery.push(BatteryEntry { index, complex, upper_bound, plan });
    }

    Ok(RdimReport { ring, dim: n, certificate, candidate_certificates, koszul, battery })
}
