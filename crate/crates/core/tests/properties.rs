//! Property tests for the algebraic substrate: ring axioms on normalized
//! polynomials, monomial-order laws, Groebner basis invariants and wire
//! round trips.

use proptest::prelude::*;

use ghostlevel::groebner::{
    groebner_basis, lift_membership, module_groebner, normal_form, syzygies, FreeMap, ImageBasis,
};
use ghostlevel::poly::Poly;
use ghostlevel::ring::{
    mono_compare, mono_mul, monomials_up_to, MonomialOrder, RingSpec,
};
use ghostlevel::truncation;
use ghostlevel::wire::{complex_to_wire, wire_to_complex};
use ghostlevel::complex::FreeComplex;

fn ring() -> RingSpec {
    RingSpec::fp(32003, 2).unwrap()
}

fn term_strategy() -> impl Strategy<Value = (i64, Vec<u32>)> {
    (-6i64..=6, prop::collection::vec(0u32..=3, 2))
}

fn poly_strategy() -> impl Strategy<Value = Poly> {
    prop::collection::vec(term_strategy(), 0..6).prop_map(|terms| {
        let r = ring();
        let converted = terms
            .into_iter()
            .map(|(c, e)| (r.coeff_from_i64(c), e))
            .collect();
        Poly::from_terms(r, converted).unwrap()
    })
}

fn expo_strategy() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..=4, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms_hold_termwise(p in poly_strategy(), q in poly_strategy(), r in poly_strategy()) {
        let left = &p * &(&q + &r);
        let right = &(&p * &q) + &(&p * &r);
        prop_assert_eq!(left.terms(), right.terms(), "distributivity");
        let pq = &p * &q;
        let qp = &q * &p;
        prop_assert_eq!(pq.terms(), qp.terms(), "commutativity");
        let assoc_l = &(&p * &q) * &r;
        let assoc_r = &p * &(&q * &r);
        prop_assert_eq!(assoc_l.terms(), assoc_r.terms(), "associativity");
    }

    #[test]
    fn normalization_is_idempotent(p in poly_strategy()) {
        let again = Poly::from_terms(p.ring(), p.terms().to_vec()).unwrap();
        prop_assert_eq!(again, p);
    }

    #[test]
    fn monomial_order_laws(a in expo_strategy(), b in expo_strategy(), c in expo_strategy()) {
        use std::cmp::Ordering;
        for order in [MonomialOrder::Grevlex, MonomialOrder::Lex] {
            let ab = mono_compare(&a, &b, order).unwrap();
            let ba = mono_compare(&b, &a, order).unwrap();
            prop_assert_eq!(ab, ba.reverse(), "antisymmetry");
            prop_assert_eq!(mono_compare(&a, &a, order).unwrap(), Ordering::Equal);
            // transitivity on the sampled triple
            let bc = mono_compare(&b, &c, order).unwrap();
            let ac = mono_compare(&a, &c, order).unwrap();
            if ab == bc && ab != Ordering::Equal {
                prop_assert_eq!(ac, ab, "transitivity");
            }
            // compatibility with multiplication
            let acm = mono_mul(&a, &c);
            let bcm = mono_mul(&b, &c);
            prop_assert_eq!(mono_compare(&acm, &bcm, order).unwrap(), ab, "multiplicative");
            // the constant monomial is minimal
            let one = vec![0u32; 3];
            prop_assert_ne!(mono_compare(&a, &one, order).unwrap(), Ordering::Less);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn groebner_s_vectors_reduce_to_zero(
        gens in prop::collection::vec(poly_strategy(), 1..4)
    ) {
        let r = ring();
        let gens: Vec<Poly> = gens.into_iter().filter(|p| !p.is_zero()).collect();
        prop_assume!(!gens.is_empty());
        let gb = groebner_basis(r, &gens).unwrap();
        for (i, gi) in gb.gens().iter().enumerate() {
            for gj in gb.gens().iter().skip(i + 1) {
                use ghostlevel::ring::{mono_lcm, mono_quotient};
                let (ci, ei) = gi[0].leading().unwrap();
                let (cj, ej) = gj[0].leading().unwrap();
                let lcm = mono_lcm(ei, ej);
                let a = gi[0].mul_term(&r.coeff_inv(ci), &mono_quotient(&lcm, ei));
                let b = gj[0].mul_term(&r.coeff_inv(cj), &mono_quotient(&lcm, ej));
                let s = &a - &b;
                let nf = normal_form(&[s], &gb).unwrap();
                prop_assert!(nf[0].is_zero(), "S-vector must reduce to zero");
            }
        }
        // the original generators are members
        for g in &gens {
            let nf = normal_form(&[g.clone()], &gb).unwrap();
            prop_assert!(nf[0].is_zero());
        }
    }

    #[test]
    fn lifting_is_sound(
        cols in prop::collection::vec(prop::collection::vec(poly_strategy(), 2), 1..3),
        witness in prop::collection::vec(poly_strategy(), 3)
    ) {
        let r = ring();
        let f = FreeMap::from_columns(r, 2, &cols).unwrap();
        let w: Vec<Poly> = witness.into_iter().take(f.source_rank()).collect();
        prop_assume!(w.len() == f.source_rank());
        let v = f.apply(&w);
        let lifted = lift_membership(&v, &f).unwrap();
        let lifted = lifted.expect("image elements must lift");
        prop_assert_eq!(f.apply(&lifted), v);
    }

    #[test]
    fn syzygies_cover_the_truncated_kernel(
        cols in prop::collection::vec(prop::collection::vec(poly_strategy(), 1), 2..4)
    ) {
        let r = ring();
        let f = FreeMap::from_columns(r, 1, &cols).unwrap();
        let syz = syzygies(&f);
        prop_assert!(f.compose(&syz).is_zero());
        let basis = ImageBasis::new(&syz);
        for v in truncation::kernel_basis(&f, 4) {
            prop_assert!(basis.contains(&v), "oracle kernel vector outside the syzygy span");
        }
    }

    #[test]
    fn membership_matches_the_truncation_oracle_for_constructed_members(
        cols in prop::collection::vec(prop::collection::vec(poly_strategy(), 1), 1..3),
        w in prop::collection::vec(poly_strategy(), 2)
    ) {
        let r = ring();
        let f = FreeMap::from_columns(r, 1, &cols).unwrap();
        let gb = module_groebner(&f);
        let w: Vec<Poly> = w.into_iter().take(f.source_rank()).collect();
        prop_assume!(w.len() == f.source_rank());
        let v = f.apply(&w);
        let nf = normal_form(&v, &gb).unwrap();
        prop_assert!(nf[0].is_zero(), "constructed member reduces to zero");
        let bound = v[0].total_degree().unwrap_or(0) as u32;
        let space = truncation::TruncatedSpace::new(r, 1, bound.max(1) + 4);
        prop_assert!(truncation::membership(&space, &v, &f.columns()));
    }

    #[test]
    fn two_term_complexes_round_trip_through_json(
        entries in prop::collection::vec(poly_strategy(), 1..5),
        lo in -2i64..=2
    ) {
        let r = ring();
        // a two-term complex with a 2 x k differential
        let k = entries.len().div_ceil(2);
        let mut grid = vec![vec![Poly::zero(r); k]; 2];
        for (idx, p) in entries.into_iter().enumerate() {
            grid[idx % 2][idx / 2] = p;
        }
        let d = FreeMap::new(r, 2, k, grid).unwrap();
        let x = FreeComplex::new(r, lo, vec![2, k], vec![d]).unwrap();
        let wire = complex_to_wire(&x);
        let text = serde_json::to_string(&wire).unwrap();
        let back = wire_to_complex(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, x);
    }
}

#[test]
fn minimization_preserves_homology_vanishing_on_random_cones() {
    use ghostlevel::complex::{cone, homology, hom_differential, hom_rank, hom_unflatten, ChainMap};
    use ghostlevel::level::{eliminate_at, minimize, random_perfect_complex};
    use rand::{Rng, SeedableRng};

    // random chain maps sampled from the cycle generators of the Hom
    // complex, with constant coefficients mixed in so the cones carry unit
    // entries away from any block corner
    let r = ring();
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(4242);
    let mut planted_units = 0;
    for case in 0..8 {
        let x = random_perfect_complex(r, &mut rng);
        let y = random_perfect_complex(r, &mut rng);
        if hom_rank(&x, &y, 0) == 0 {
            continue;
        }
        let cycles = syzygies(&hom_differential(&x, &y, 0));
        if cycles.source_rank() == 0 {
            continue;
        }
        let mut flat = vec![Poly::zero(r); hom_rank(&x, &y, 0)];
        for col in cycles.columns() {
            let c = r.coeff_from_i64(rng.gen_range(-2..=2));
            let scale = Poly::from_terms(r, vec![(c, vec![0, 0])]).unwrap();
            for (slot, entry) in flat.iter_mut().zip(&col) {
                *slot = &*slot + &(entry * &scale);
            }
        }
        let comps = hom_unflatten(&x, &y, 0, &flat);
        let f = ChainMap::new(x.clone(), y.clone(), comps).expect("cycles are chain maps");
        let c = cone(&f).complex;
        let has_unit = (c.lo() + 1..=c.hi()).any(|d| {
            let m = c.differential(d);
            (0..m.target_rank())
                .any(|i| (0..m.source_rank()).any(|j| m.entry(i, j).is_nonzero_constant()))
        });
        if has_unit {
            planted_units += 1;
        }
        let (min, trace) = minimize(&c);
        // no unit entries survive
        for d in min.lo() + 1..=min.hi() {
            let m = min.differential(d);
            for i in 0..m.target_rank() {
                for j in 0..m.source_rank() {
                    assert!(!m.entry(i, j).is_nonzero_constant(), "case {case}");
                }
            }
        }
        // vanishing of homology is an invariant of the cancellation
        for i in c.lo() - 1..=c.hi() + 1 {
            assert_eq!(
                homology(&c, i).is_zero_module(),
                homology(&min, i).is_zero_module(),
                "case {case}, degree {i}"
            );
        }
        // the recorded trace replays to the minimized complex
        let mut replay = c.clone();
        for e in &trace {
            replay = eliminate_at(&replay, *e).unwrap();
        }
        assert_eq!(replay, min, "case {case}");
    }
    assert!(planted_units >= 2, "the sample must exercise real cancellations");
}

#[test]
fn truncated_monomial_spaces_have_binomial_dimensions() {
    // anchor the oracle itself against hand counts
    let r = ring();
    assert_eq!(monomials_up_to(2, 6).len(), 28);
    let space = truncation::TruncatedSpace::new(r, 3, 2);
    assert_eq!(space.dim(), 3 * 6);
}
