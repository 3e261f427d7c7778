//! Koszul objects by iterated cones, the connecting maps of their defining
//! triangles, and the towers of ghost factors built from a sequence.
//!
//! For an element `x` acting on a complex `M`, the Koszul object `M//x` is
//! `cone(x . id_M)` and sits in the triangle
//!
//! ```text
//!   S^{-1}(M//x) --eps(x)--> M --x--> M --> M//x
//! ```
//!
//! `eps(x)` is the projection of the rotated cone onto its source block;
//! composing it with `x . id` is null-homotopic. A tower on `x_1..x_t`
//! stores the stages `S^{-s}(M//(x_1^{n_1+1}..x_s^{n_s+1}))` together with
//! one ghost factor per step: `eps(x_s^{n_s+1})` followed by `x_s^{n_s}`.

use std::collections::BTreeMap;

use crate::complex::{cone, graded_hom, ChainMap, FreeComplex};
use crate::error::{Error, Result};
use crate::fgmodule::torsion_exponent;
use crate::groebner::FreeMap;
use crate::poly::{AlgebraElement, Poly};

fn check_degree_zero(x: &AlgebraElement) -> Result<()> {
    if x.degree != 0 {
        return Err(Error::InvalidInput(format!(
            "element of internal degree {} is outside the degree-0 instantiation",
            x.degree
        )));
    }
    Ok(())
}

/// `M // (x_1 .. x_t)` by the cone recursion: `M` for `t = 0`,
/// `cone(x . id)` for `t = 1`, and `(M // (x_1 .. x_{t-1})) // x_t` above.
pub fn koszul_object(m: &FreeComplex, xs: &[AlgebraElement]) -> Result<FreeComplex> {
    let mut acc = m.clone();
    for x in xs {
        check_degree_zero(x)?;
        acc = cone(&ChainMap::mult(&acc, &x.value)).complex;
    }
    Ok(acc)
}

/// The connecting map `eps(x) : S^{-1}(M//x) -> M` of the defining
/// triangle: in each degree the projection `M_i (+) M_{i+1} -> M_i`.
pub fn epsilon_map(m: &FreeComplex, x: &AlgebraElement) -> Result<ChainMap> {
    check_degree_zero(x)?;
    let ring = m.ring();
    let k = cone(&ChainMap::mult(m, &x.value)).complex;
    let source = k.shift(-1);
    let mut comps = BTreeMap::new();
    for i in m.lo()..=m.hi() {
        let rows = m.rank(i);
        let cols = source.rank(i); // = m.rank(i) + m.rank(i+1)
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut entries = vec![vec![Poly::zero(ring); cols]; rows];
        for r in 0..rows {
            entries[r][r] = Poly::one(ring);
        }
        comps.insert(i, FreeMap::new(ring, rows, cols, entries)?);
    }
    ChainMap::new(source, m.clone(), comps)
}

/// One tower step from a stage: `eps(x^{n+1})` followed by multiplication
/// by `x^n`, a chain map `S^{-1}(stage // x^{n+1}) -> stage`.
pub fn ghost_factor(stage: &FreeComplex, x: &AlgebraElement, n: u32) -> Result<ChainMap> {
    check_degree_zero(x)?;
    let power = AlgebraElement::in_degree_zero(x.value.pow(n + 1));
    let eps = epsilon_map(stage, &power)?;
    Ok(eps.scale_poly(&x.value.pow(n)))
}

/// Exponent prescribed by the torsion of `x` on `Hom*(G, stage)`: the
/// maximum annihilation exponent across the finitely many nonzero degrees.
pub fn auto_exponent(g: &FreeComplex, stage: &FreeComplex, x: &AlgebraElement) -> Result<u32> {
    check_degree_zero(x)?;
    let hom = graded_hom(g, stage);
    let mut best = 0;
    for comp in hom.components.values() {
        best = best.max(torsion_exponent(x, comp)?);
    }
    Ok(best)
}

/// The explicit tower over a sequence: stages, connecting maps and ghost
/// factors, immutable once built so certificates replay without
/// recomputation.
#[derive(Debug, Clone)]
pub struct KoszulTower {
    base: FreeComplex,
    elements: Vec<AlgebraElement>,
    exponents: Vec<u32>,
    stages: Vec<FreeComplex>,
    eps_maps: Vec<ChainMap>,
    factors: Vec<ChainMap>,
}

impl KoszulTower {
    /// Build with prescribed exponents `n_s` (the step uses `x_s^{n_s+1}`).
    pub fn with_exponents(
        m: &FreeComplex,
        xs: &[AlgebraElement],
        exponents: &[u32],
    ) -> Result<Self> {
        if exponents.len() != xs.len() {
            return Err(Error::InvalidInput(format!(
                "{} exponents for {} elements",
                exponents.len(),
                xs.len()
            )));
        }
        Self::build(m, xs, |_, s| Ok(exponents[s]))
    }

    /// Build with exponents chosen from the torsion of each element on
    /// `Hom*(G, current stage)`.
    pub fn auto(g: &FreeComplex, m: &FreeComplex, xs: &[AlgebraElement]) -> Result<Self> {
        Self::build(m, xs, |stage, s| auto_exponent(g, stage, &xs[s]))
    }

    fn build<F>(m: &FreeComplex, xs: &[AlgebraElement], mut choose: F) -> Result<Self>
    where
        F: FnMut(&FreeComplex, usize) -> Result<u32>,
    {
        for x in xs {
            check_degree_zero(x)?;
            if x.value.ring() != m.ring() {
                return Err(Error::InvalidInput("sequence element over a different ring".into()));
            }
        }
        let mut stages = vec![m.clone()];
        let mut eps_maps = Vec::new();
        let mut factors = Vec::new();
        let mut exponents = Vec::new();
        // the unshifted Koszul object of the powered prefix
        let mut unshifted = m.clone();
        for (s, x) in xs.iter().enumerate() {
            let n = choose(stages.last().unwrap(), s)?;
            exponents.push(n);
            let power = AlgebraElement::in_degree_zero(x.value.pow(n + 1));
            let eps_raw = epsilon_map(&unshifted, &power)?;
            unshifted = cone(&ChainMap::mult(&unshifted, &power.value)).complex;
            let shift_by = -(s as i64);
            let eps = eps_raw.shift(shift_by);
            let factor = eps.scale_poly(&x.value.pow(n));
            stages.push(unshifted.shift(shift_by - 1));
            eps_maps.push(eps);
            factors.push(factor);
        }
        Ok(KoszulTower { base: m.clone(), elements: xs.to_vec(), exponents, stages, eps_maps, factors })
    }

    pub fn base(&self) -> &FreeComplex {
        &self.base
    }

    pub fn elements(&self) -> &[AlgebraElement] {
        &self.elements
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Stage `s`, i.e. `S^{-s}(M // (x_1^{n_1+1} .. x_s^{n_s+1}))`.
    pub fn stage(&self, s: usize) -> &FreeComplex {
        &self.stages[s]
    }

    pub fn stages(&self) -> &[FreeComplex] {
        &self.stages
    }

    pub fn top(&self) -> &FreeComplex {
        self.stages.last().unwrap()
    }

    /// The connecting map `stage(s) -> stage(s-1)`, 1-based in `s`.
    pub fn eps(&self, s: usize) -> &ChainMap {
        &self.eps_maps[s - 1]
    }

    /// Ghost factor `stage(s) -> stage(s-1)`, 1-based in `s`.
    pub fn factor(&self, s: usize) -> &ChainMap {
        &self.factors[s - 1]
    }

    pub fn factors(&self) -> &[ChainMap] {
        &self.factors
    }

    /// The full candidate composition `stage(t) -> stage(0) = M`; the
    /// identity for the empty sequence.
    pub fn composition(&self) -> ChainMap {
        let mut acc = ChainMap::identity(&self.base);
        for f in &self.factors {
            // acc : stage(s-1) -> M, f : stage(s) -> stage(s-1)
            acc = acc.compose(f);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{homology, is_nullhomotopic};
    use crate::fgmodule::{koszul_homology, IdealGens, ModulePresentation};
    use crate::ring::RingSpec;
    use crate::truncation;

    fn fp(n: usize) -> RingSpec {
        RingSpec::fp(32003, n).unwrap()
    }

    fn p(ring: RingSpec, s: &str) -> Poly {
        Poly::parse(ring, s).unwrap()
    }

    fn elem(ring: RingSpec, s: &str) -> AlgebraElement {
        AlgebraElement::in_degree_zero(p(ring, s))
    }

    fn free_stalk(ring: RingSpec) -> FreeComplex {
        FreeComplex::stalk(ring, 0, 1)
    }

    fn presentation_dims(m: &ModulePresentation, bound: u32) -> Vec<usize> {
        truncation::presentation_dims(
            m.ring(),
            &vec![0; m.ambient_rank()],
            &m.relations().columns(),
            bound,
        )
    }

    #[test]
    fn empty_sequence_returns_the_object() {
        let r = fp(2);
        let a = free_stalk(r);
        assert_eq!(koszul_object(&a, &[]).unwrap(), a);
    }

    #[test]
    fn single_element_is_the_cone() {
        let r = fp(1);
        let a = free_stalk(r);
        let k = koszul_object(&a, &[elem(r, "x0")]).unwrap();
        assert_eq!(k, cone(&ChainMap::mult(&a, &p(r, "x0"))).complex);
        let h0 = homology(&k, 0);
        let dims = presentation_dims(&h0, 3);
        assert_eq!(dims, truncation::presentation_dims(r, &[0], &[vec![p(r, "x0")]], 3));
    }

    #[test]
    fn two_elements_match_the_classical_koszul_complex() {
        let r = fp(2);
        let a = free_stalk(r);
        let k = koszul_object(&a, &[elem(r, "x0"), elem(r, "x1")]).unwrap();
        assert_eq!(k.ranks(), &[1, 2, 1]);
        // homology agrees degree by degree with the module-side Koszul
        // homology of the same sequence
        let oracle = koszul_homology(
            &IdealGens::from_polys(&[p(r, "x0"), p(r, "x1")]),
            &ModulePresentation::free(r, 1),
        );
        for i in 0..=2i64 {
            let h = homology(&k, i);
            let o = &oracle[i as usize];
            assert_eq!(h.is_zero_module(), o.is_zero_module(), "H_{i}");
            if !h.is_zero_module() {
                assert_eq!(presentation_dims(&h, 4), presentation_dims(o, 4), "H_{i} dims");
            }
        }
        assert!(homology(&k, 1).is_zero_module());
        assert!(homology(&k, 2).is_zero_module());
    }

    #[test]
    fn epsilon_degree_zero_component_is_identity() {
        let r = fp(1);
        let a = free_stalk(r);
        let eps = epsilon_map(&a, &elem(r, "x0")).unwrap();
        let c0 = eps.component(0);
        assert_eq!(c0.target_rank(), 1);
        assert_eq!(c0.source_rank(), 1);
        assert!(c0.entry(0, 0).is_one());
        // x . eps(x) is null-homotopic (triangle rotation)
        let xeps = eps.scale_poly(&p(r, "x0"));
        assert!(is_nullhomotopic(&xeps));
        // and eps itself is not, since x0 is regular on A != 0
        assert!(!is_nullhomotopic(&eps));
    }

    #[test]
    fn epsilon_of_zero_projects_off_the_split_cone() {
        let r = fp(1);
        let a = free_stalk(r);
        let eps = epsilon_map(&a, &elem(r, "0")).unwrap();
        let split = a.shift(1).direct_sum(&a);
        assert_eq!(eps.source(), &split.shift(-1));
        assert!(eps.component(0).entry(0, 0).is_one());
    }

    #[test]
    fn ghost_factor_with_zero_exponent_is_epsilon() {
        let r = fp(1);
        let a = free_stalk(r);
        let f = ghost_factor(&a, &elem(r, "x0"), 0).unwrap();
        let eps = epsilon_map(&a, &elem(r, "x0")).unwrap();
        assert_eq!(f, eps);
    }

    #[test]
    fn ghost_factor_is_scalar_times_epsilon_of_the_power() {
        let r = fp(1);
        let a = free_stalk(r);
        let f = ghost_factor(&a, &elem(r, "x0"), 1).unwrap();
        let eps2 = epsilon_map(&a, &elem(r, "x0^2")).unwrap();
        assert_eq!(f, eps2.scale_poly(&p(r, "x0")));
    }

    #[test]
    fn scalar_action_commutes_with_factors() {
        use rand::{Rng, SeedableRng};
        let r = fp(2);
        let a = free_stalk(r);
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(9);
        for _ in 0..5 {
            let i = rng.gen_range(0..2);
            let n = rng.gen_range(0..2u32);
            let x = elem(r, &format!("x{i}"));
            let other = p(r, &format!("x{}", 1 - i));
            let f = ghost_factor(&a, &x, n).unwrap();
            let left = f.scale_poly(&other);
            let right = ChainMap::mult(f.target(), &other).compose(&f);
            assert_eq!(left, right);
        }
    }

    #[test]
    fn composition_of_empty_tower_is_identity() {
        let r = fp(1);
        let a = free_stalk(r);
        let tower = KoszulTower::with_exponents(&a, &[], &[]).unwrap();
        assert_eq!(tower.composition(), ChainMap::identity(&a));
        assert!(!is_nullhomotopic(&tower.composition()));
    }

    #[test]
    fn regular_pair_gives_nonzero_composition() {
        let r = fp(2);
        let a = free_stalk(r);
        let tower =
            KoszulTower::with_exponents(&a, &[elem(r, "x0"), elem(r, "x1")], &[0, 0]).unwrap();
        // the tower top is the shifted Koszul complex
        assert_eq!(tower.top().ranks(), &[1, 2, 1]);
        assert_eq!(tower.top().lo(), -2);
        assert!(!is_nullhomotopic(&tower.composition()));
    }

    #[test]
    fn repeated_element_kills_the_composition() {
        let r = fp(1);
        let a = free_stalk(r);
        // auto exponents: the second step sees torsion in Hom*(A, stage 1)
        let tower = KoszulTower::auto(&a, &a, &[elem(r, "x0"), elem(r, "x0")]).unwrap();
        assert_eq!(tower.exponents(), &[0, 1]);
        assert!(is_nullhomotopic(&tower.composition()));
    }

    #[test]
    fn auto_exponents_for_the_variable_sequence() {
        let r = fp(2);
        let a = free_stalk(r);
        let tower = KoszulTower::auto(&a, &a, &[elem(r, "x0"), elem(r, "x1")]).unwrap();
        assert_eq!(tower.exponents(), &[0, 0]);
    }

    #[test]
    fn auto_exponent_sees_nilpotent_torsion() {
        let r = fp(1);
        let a = free_stalk(r);
        // stage = A // x0^2 = cone(x0^2 . id): Hom*(A, stage) has torsion
        // exponent 2 for x0
        let stage = koszul_object(&a, &[elem(r, "x0^2")]).unwrap();
        let n = auto_exponent(&a, &stage, &elem(r, "x0")).unwrap();
        assert_eq!(n, 2);
        // a free stage is torsion-free
        assert_eq!(auto_exponent(&a, &a, &elem(r, "x0")).unwrap(), 0);
    }

    #[test]
    fn triangle_identity_per_stage() {
        let r = fp(2);
        let a = free_stalk(r);
        for (x, n) in [("x0", 0u32), ("x1", 1), ("x0*x1", 1)] {
            let power = p(r, x).pow(n + 1);
            let eps = epsilon_map(&a, &AlgebraElement::in_degree_zero(power.clone())).unwrap();
            let composite = eps.scale_poly(&power);
            assert!(is_nullhomotopic(&composite), "x^(n+1) . eps(x^(n+1)) for {x}, n={n}");
        }
    }

    #[test]
    fn exponent_monotonicity() {
        let r = fp(1);
        let a = free_stalk(r);
        // torsion bound for x0 on Hom*(A, A//x0^2) is 2; any larger
        // exponent must also give a ghost factor
        let stage = koszul_object(&a, &[elem(r, "x0^2")]).unwrap().shift(-1);
        for n in 2..=4u32 {
            let f = ghost_factor(&stage, &elem(r, "x0"), n).unwrap();
            assert!(crate::level::is_ghost(&a, &f), "exponent {n}");
        }
    }
}
