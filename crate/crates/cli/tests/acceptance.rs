//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! Criteria 1 and 7 drive the installed binary; the property suites use the
//! library directly. Every tolerance here is exact; runtime guards use the
//! stated wall-clock budgets.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use ghostlevel::complex::{graded_hom, homology_data, hom_complex, is_nullhomotopic, ChainMap, FreeComplex};
use ghostlevel::fgmodule::{
    depth, is_regular_sequence, kernel_mult_with_embedding, koszul_homology, Depth, IdealGens,
    ModulePresentation,
};
use ghostlevel::groebner::{lift_membership, normal_form, syzygies, FreeMap, ImageBasis, module_groebner};
use ghostlevel::koszul::{auto_exponent, ghost_factor, koszul_object, KoszulTower};
use ghostlevel::level::{
    ghost_certificate, is_ghost, level_upper_bound, random_perfect_complex, replay_plan,
};
use ghostlevel::poly::{AlgebraElement, Poly};
use ghostlevel::ring::{monomials_up_to, RingSpec};
use ghostlevel::truncation;

const BATTERY_SEED: u64 = 7;

fn fp(n: usize) -> RingSpec {
    RingSpec::fp(32003, n).unwrap()
}

fn poly(ring: RingSpec, s: &str) -> Poly {
    Poly::parse(ring, s).unwrap()
}

fn elem(ring: RingSpec, s: &str) -> AlgebraElement {
    AlgebraElement::in_degree_zero(poly(ring, s))
}

fn free_gen(ring: RingSpec) -> FreeComplex {
    FreeComplex::stalk(ring, 0, 1)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ghostlevel"))
}

fn run_verify_theorem(nvars: usize) -> serde_json::Value {
    let out = bin()
        .args([
            "verify-theorem",
            "--nvars",
            &nvars.to_string(),
            "--samples",
            "20",
            "--seed",
            &BATTERY_SEED.to_string(),
        ])
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "verify-theorem --nvars {nvars} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON report")
}

fn check_theorem_report(report: &serde_json::Value, n: usize) {
    let cert = &report["certificate"];
    let factors = cert["factors"].as_array().unwrap();
    assert_eq!(factors.len(), n, "certificate length");
    for f in factors {
        for check in f["ghost_checks"].as_array().unwrap() {
            assert_eq!(check["verdict"], "zero", "every factor is ghost in every degree");
        }
    }
    assert_eq!(cert["composition"]["nullhomotopic"], false);
    assert_eq!(cert["implied_level_lower_bound"], (n + 1) as u64);
    if n >= 1 {
        let k = &report["koszul"];
        assert_eq!(k["lower_bound"], (n + 1) as u64, "koszul level lower bound");
        assert_eq!(k["upper_bound"], (n + 1) as u64, "koszul level upper bound");
        assert_eq!(k["exact"], true);
        let plans = cert["build_plans"].as_array().unwrap();
        assert_eq!(plans.len(), 1, "the koszul build plan rides on the certificate");
        assert_eq!(plans[0]["cone_count"], n as u64, "plan certifies cone_count + 1 = n + 1");
    }
    for b in report["battery"].as_array().unwrap() {
        assert!(b["upper_bound"].as_u64().unwrap() <= (n + 1) as u64);
    }
    assert_eq!(report["conclusion"]["verified"], true);
    assert_eq!(report["conclusion"]["rdim_lower_bound"], n as u64);
}

#[test]
fn criterion_1_main_theorem_desk_scale() {
    for n in [1usize, 2] {
        let started = Instant::now();
        let report = run_verify_theorem(n);
        check_theorem_report(&report, n);
        let elapsed = started.elapsed();
        if n == 2 {
            assert!(elapsed.as_secs() < 30, "n = 2 must finish within 30 s, took {elapsed:?}");
        }
    }
    println!("criterion 1 (main theorem, n = 1 and n = 2, exact): PASS");
}

#[test]
#[ignore = "optional third variable; run with --ignored (budget: 10 minutes)"]
fn criterion_1_main_theorem_three_variables() {
    let started = Instant::now();
    let report = run_verify_theorem(3);
    check_theorem_report(&report, 3);
    assert!(started.elapsed().as_secs() < 600);
    println!("criterion 1 (optional n = 3, exact): PASS");
}

fn random_poly(ring: RingSpec, max_degree: u32, rng: &mut ChaCha12Rng) -> Poly {
    let mut acc = Poly::zero(ring);
    for e in monomials_up_to(ring.num_vars, max_degree) {
        if rng.gen_bool(0.35) {
            let c = ring.coeff_from_i64(rng.gen_range(-4..=4));
            acc = &acc + &Poly::from_terms(ring, vec![(c, e)]).unwrap();
        }
    }
    acc
}

fn random_two_term(ring: RingSpec, rng: &mut ChaCha12Rng) -> FreeComplex {
    let r1 = rng.gen_range(1..=2usize);
    let r0 = rng.gen_range(1..=2usize);
    let entries: Vec<Vec<Poly>> = (0..r0)
        .map(|_| (0..r1).map(|_| random_poly(ring, 2, rng)).collect())
        .collect();
    let d = FreeMap::new(ring, r0, r1, entries).unwrap();
    let shift = rng.gen_range(-1..=1i64);
    FreeComplex::new(ring, 0, vec![r0, r1], vec![d]).unwrap().shift(shift)
}

/// Submodule span equality of `{v : x v in im(rels)}` for two exponents.
fn kernel_chain_stabilizes(
    x: &Poly,
    n: u32,
    m: &ModulePresentation,
) -> bool {
    let at = |k: u32| {
        kernel_mult_with_embedding(&AlgebraElement::in_degree_zero(x.pow(k)), m).1
    };
    let lower = at(n);
    let upper = at(n + 1);
    let mut span = lower.columns();
    span.extend(m.relations().columns());
    let basis = ImageBasis::new(&FreeMap::from_columns(m.ring(), m.ambient_rank(), &span).unwrap());
    upper.columns().iter().all(|c| basis.contains(c))
}

#[test]
fn criterion_2_ghost_factor_property_suite() {
    let started = Instant::now();
    let ring = fp(2);
    let mut rng = ChaCha12Rng::seed_from_u64(202);
    let mut passed = 0;
    for case in 0..30 {
        let g = random_two_term(ring, &mut rng);
        let m = random_two_term(ring, &mut rng);
        let x = match rng.gen_range(0..3) {
            0 => elem(ring, "x0"),
            1 => elem(ring, "x1"),
            _ => elem(ring, "x0*x1"),
        };
        let n = auto_exponent(&g, &m, &x).unwrap();
        let factor = ghost_factor(&m, &x, n).unwrap();
        assert!(is_ghost(&g, &factor), "case {case}: factor with auto exponent {n} must be ghost");
        // the kernel chain identity ker(x^n) = ker(x^(n+1)) at the chosen
        // exponent, on every degree of Hom*(G, M)
        for comp in graded_hom(&g, &m).components.values() {
            assert!(
                kernel_chain_stabilizes(&x.value, n, comp),
                "case {case}: kernel chain must stabilize at {n}"
            );
        }
        passed += 1;
    }
    assert_eq!(passed, 30);
    assert!(started.elapsed().as_secs() < 300, "budget 5 minutes");
    println!("criterion 2 (ghost factor with auto exponent, 30/30, exact): PASS");
}

/// Filtered dimensions of a homology presentation, using the cycle
/// embedding degrees as generator weights (inputs are graded).
fn homology_dims(x: &FreeComplex, i: i64, bound: u32) -> Vec<usize> {
    let data = homology_data(x, i);
    let weights: Vec<u64> = data
        .cycles
        .columns()
        .iter()
        .map(|c| c.iter().filter_map(|p| p.total_degree()).max().unwrap_or(0))
        .collect();
    truncation::presentation_dims(
        x.ring(),
        &weights,
        &data.presentation.relations().columns(),
        bound,
    )
}

#[test]
fn criterion_3_regular_sequence_property_suite() {
    let started = Instant::now();
    let regular: Vec<(RingSpec, Vec<&str>)> = vec![
        (fp(1), vec!["x0"]),
        (fp(2), vec!["x0", "x1"]),
        (fp(2), vec!["x0^2", "x1"]),
        (fp(3), vec!["x0", "x1", "x2"]),
    ];
    for (ring, seq) in &regular {
        let a = free_gen(*ring);
        let xs: Vec<AlgebraElement> = seq.iter().map(|s| elem(*ring, s)).collect();
        assert!(is_regular_sequence(&xs, &ModulePresentation::free(*ring, 1)));
        let t = xs.len();
        for mask in 0..(1u32 << t) {
            let exps: Vec<u32> = (0..t).map(|i| (mask >> i) & 1).collect();
            let tower = KoszulTower::with_exponents(&a, &xs, &exps).unwrap();
            for s in 1..=t {
                assert!(
                    is_ghost(&a, tower.factor(s)),
                    "{seq:?} with exponents {exps:?}: factor {s} ghost"
                );
            }
            assert!(
                !is_nullhomotopic(&tower.composition()),
                "{seq:?} with exponents {exps:?}: composition must be nonzero"
            );
            // the canonical identification: Hom*(A, tower top) in degree -t
            // is End/(powers) = A/(x_i^(n_i + 1)), compared degreewise
            let top = tower.top();
            let hom = hom_complex(&a, top);
            let lhs = homology_dims(&hom, -(t as i64), 6);
            let powers: Vec<Vec<Poly>> = xs
                .iter()
                .zip(&exps)
                .map(|(x, n)| vec![x.value.pow(n + 1)])
                .collect();
            let rhs = truncation::presentation_dims(*ring, &[0], &powers, 6);
            assert_eq!(lhs, rhs, "{seq:?} with exponents {exps:?}: quotient identification");
        }
    }
    // non-regular sequences: the two-condition test fails and agrees with
    // the direct regularity check
    let ring = fp(1);
    let a = free_gen(ring);
    for seq in [vec!["x0", "x0"], vec!["x0", "0"]] {
        let xs: Vec<AlgebraElement> = seq.iter().map(|s| elem(ring, s)).collect();
        assert!(!is_regular_sequence(&xs, &ModulePresentation::free(ring, 1)));
        let tower = KoszulTower::auto(&a, &a, &xs).unwrap();
        let all_ghost = (1..=xs.len()).all(|s| is_ghost(&a, tower.factor(s)));
        let nonzero = !is_nullhomotopic(&tower.composition());
        assert!(
            !(all_ghost && nonzero),
            "{seq:?}: a non-regular sequence cannot satisfy both conditions"
        );
    }
    assert!(started.elapsed().as_secs() < 600, "budget 10 minutes");
    println!("criterion 3 (regular sequences give nonzero ghost compositions, exact): PASS");
}

#[test]
fn criterion_4_depth_equals_certificate_length() {
    for n in 1..=3usize {
        let ring = fp(n);
        let a_module = ModulePresentation::free(ring, 1);
        let vars: Vec<Poly> = (0..n).map(|i| Poly::var(ring, i).unwrap()).collect();
        let ideal = IdealGens::from_polys(&vars);
        let d = match depth(&ideal, &a_module) {
            Depth::Finite(d) => d,
            Depth::Infinite => panic!("maximal ideal has finite depth"),
        };
        assert_eq!(d, n, "depth of the maximal ideal on the free module");
        let homology = koszul_homology(&ideal, &a_module);
        assert!(!homology[0].is_zero_module());
        for h in homology.iter().skip(1) {
            assert!(h.is_zero_module(), "regular sequence: higher Koszul homology vanishes");
        }
        let a = free_gen(ring);
        let xs: Vec<AlgebraElement> =
            vars.iter().cloned().map(AlgebraElement::in_degree_zero).collect();
        let cert = ghost_certificate(&a, &a, &xs).unwrap();
        assert_eq!(cert.chain_length(), n, "certificate of length depth exists");
        assert!(d <= cert.chain_length(), "depth <= certified chain length");
    }
    println!("criterion 4 (depth equals certificate length for n <= 3, exact): PASS");
}

#[test]
fn criterion_5_gentime_evidence_battery() {
    let started = Instant::now();
    let ring = fp(2);
    let g = free_gen(ring);
    let mut rng = ChaCha12Rng::seed_from_u64(BATTERY_SEED);
    for index in 0..20 {
        let sample = random_perfect_complex(ring, &mut rng);
        let (bound, plan) = level_upper_bound(&g, &sample).unwrap();
        assert!(bound <= 3, "sample {index}: bound {bound} exceeds dim + 1 = 3");
        assert!(plan.certified_bound() <= 3);
        let built = replay_plan(&plan, &g, &sample).unwrap();
        let (minimized, _) = ghostlevel::level::minimize(&sample);
        assert_eq!(built.trim(), minimized.trim(), "sample {index}: plan replays");
    }
    assert!(started.elapsed().as_secs() < 300, "budget 5 minutes");
    println!("criterion 5 (20 random perfect complexes built within 3 steps, exact): PASS");
}

#[test]
fn criterion_6_substrate_oracle_agreement() {
    let started = Instant::now();
    let ring = fp(2);
    let mut rng = ChaCha12Rng::seed_from_u64(606);
    let mut instances = 0;

    // 40 membership instances: exact normal forms against truncated spans
    for case in 0..40 {
        let rank = rng.gen_range(1..=2usize);
        let ncols = rng.gen_range(1..=3usize);
        let cols: Vec<Vec<Poly>> = (0..ncols)
            .map(|_| (0..rank).map(|_| random_poly(ring, 2, &mut rng)).collect())
            .collect();
        let f = FreeMap::from_columns(ring, rank, &cols).unwrap();
        let gb = module_groebner(&f);
        let space = truncation::TruncatedSpace::new(ring, rank, 6);
        let v: Vec<Poly> = if case % 2 == 0 {
            // a member with a witness of bounded degree
            let w: Vec<Poly> = (0..ncols).map(|_| random_poly(ring, 2, &mut rng)).collect();
            f.apply(&w)
        } else {
            (0..rank).map(|_| random_poly(ring, 2, &mut rng)).collect()
        };
        let nf = normal_form(&v, &gb).unwrap();
        let member = nf.iter().all(Poly::is_zero);
        let oracle = truncation::membership(&space, &v, &cols);
        assert_eq!(member, oracle, "membership case {case}");
        if member {
            let w = lift_membership(&v, &f).unwrap().expect("members lift");
            assert_eq!(f.apply(&w), v, "witness is exact");
        }
        instances += 1;
    }

    // 30 syzygy instances: every truncated kernel vector lies in the span
    // of the computed syzygies, and the syzygies compose to zero
    for case in 0..30 {
        let rank = rng.gen_range(1..=2usize);
        let ncols = rng.gen_range(2..=3usize);
        let cols: Vec<Vec<Poly>> = (0..ncols)
            .map(|_| (0..rank).map(|_| random_poly(ring, 2, &mut rng)).collect())
            .collect();
        let f = FreeMap::from_columns(ring, rank, &cols).unwrap();
        let syz = syzygies(&f);
        assert!(f.compose(&syz).is_zero(), "syzygy case {case}: f . syz = 0");
        let basis = ImageBasis::new(&syz);
        for v in truncation::kernel_basis(&f, 6) {
            assert!(basis.contains(&v), "syzygy case {case}: oracle kernel vector covered");
        }
        instances += 1;
    }

    // 30 homology instances on graded complexes: production subquotients
    // match pure linear algebra in every degree <= 6
    let graded_instances: Vec<FreeComplex> = {
        let mut v: Vec<FreeComplex> = Vec::new();
        let a2 = free_gen(fp(2));
        let a3 = free_gen(fp(3));
        v.push(koszul_object(&a2, &[elem(fp(2), "x0"), elem(fp(2), "x1")]).unwrap());
        v.push(koszul_object(&a2, &[elem(fp(2), "x0^2"), elem(fp(2), "x1")]).unwrap());
        v.push(koszul_object(&a2, &[elem(fp(2), "x0*x1"), elem(fp(2), "x1^2")]).unwrap());
        v.push(koszul_object(&a3, &[elem(fp(3), "x0"), elem(fp(3), "x1"), elem(fp(3), "x2")]).unwrap());
        let mut rng2 = ChaCha12Rng::seed_from_u64(99);
        while v.iter().map(|x| (x.hi() - x.lo() + 1) as usize).sum::<usize>() < 30 {
            v.push(random_perfect_complex(fp(2), &mut rng2));
        }
        v
    };
    let mut homology_checked = 0;
    'outer: for x in &graded_instances {
        for i in x.lo()..=x.hi() {
            let ring = x.ring();
            let data = homology_data(x, i);
            let b_cols = data.boundaries.columns();
            let z_cols = data.cycles.columns();
            // degreewise: production cycles span the truncated kernel
            let lhs = truncation::subquotient_dims(ring, x.rank(i), &z_cols, &b_cols, 6);
            let oracle_kernel = truncation::kernel_basis(&x.differential(i), 6);
            let rhs = truncation::subquotient_dims(ring, x.rank(i), &oracle_kernel, &b_cols, 6);
            assert_eq!(lhs, rhs, "homology at degree {i}: cycle spans");
            // and the abstract presentation has the same slice dimensions
            let weights: Vec<u64> = z_cols
                .iter()
                .map(|c| c.iter().filter_map(|p| p.total_degree()).max().unwrap_or(0))
                .collect();
            let pres =
                truncation::presentation_dims(ring, &weights, &data.presentation.relations().columns(), 6);
            assert_eq!(pres, rhs, "homology at degree {i}: presentation dims");
            homology_checked += 1;
            instances += 1;
            if homology_checked == 30 {
                break 'outer;
            }
        }
    }
    assert_eq!(homology_checked, 30);

    assert_eq!(instances, 100, "exactly one hundred seeded instances");
    assert!(started.elapsed().as_secs() < 300, "budget 5 minutes");
    println!("criterion 6 (Groebner and homology agree with the truncation oracle, 100 instances, exact): PASS");
}

#[test]
fn criterion_7_byte_identical_reruns() {
    // the binary, twice, same seed
    for args in [
        vec!["verify-theorem", "--nvars", "2", "--samples", "20", "--seed", "7"],
        vec!["ghost-cert", "--ring", "Fp[2],p=32003", "--seq", "x0,x1"],
        vec!["level", "--ring", "Fp[2],p=32003", "--target", "koszul:x0,x1"],
        vec!["depth", "--ring", "Fp[2],p=32003", "--ideal", "x0,x1"],
    ] {
        let a = bin().args(&args).output().expect("first run");
        let b = bin().args(&args).output().expect("second run");
        assert!(a.status.success() && b.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "byte-identical stdout for {args:?}");
    }
    // library-level: two full reports with the same options serialize
    // identically
    let ring = fp(2);
    let opts = ghostlevel::level::RdimOptions { samples: 20, seed: 7, ..Default::default() };
    let r1 = ghostlevel::level::rdim_report(ring, &opts).unwrap();
    let r2 = ghostlevel::level::rdim_report(ring, &opts).unwrap();
    let j1 = serde_json::to_string(&ghostlevel::wire::rdim_report_to_wire(&r1)).unwrap();
    let j2 = serde_json::to_string(&ghostlevel::wire::rdim_report_to_wire(&r2)).unwrap();
    assert_eq!(j1, j2);
    println!("criterion 7 (byte-identical certificates under fixed seeds, exact): PASS");
}

#[test]
fn chain_map_composition_agrees_with_scalar_product() {
    // sanity anchor used by several criteria: the full composition equals
    // the product of the scalars applied to the epsilon chain
    let ring = fp(2);
    let a = free_gen(ring);
    let xs = [elem(ring, "x0"), elem(ring, "x1")];
    let tower = KoszulTower::with_exponents(&a, &xs, &[1, 1]).unwrap();
    let eps_chain = tower.eps(1).compose(tower.eps(2));
    let product = poly(ring, "x0*x1");
    assert_eq!(tower.composition(), eps_chain.scale_poly(&product));
    let mut comps = BTreeMap::new();
    comps.insert(0i64, FreeMap::identity(ring, 1));
    let idlike = ChainMap::new(a.clone(), a.clone(), comps).unwrap();
    assert_eq!(ChainMap::identity(&a), idlike);
}
