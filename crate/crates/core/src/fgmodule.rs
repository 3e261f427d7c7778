//! Finitely presented modules and the commutative-algebra layer: kernels of
//! multiplication, torsion submodules and their annihilation exponents,
//! regular sequences, Koszul homology and depth.
//!
//! A module is always a cokernel `A^r / im(relations)`. Submodules are
//! handled through generating vectors in the ambient free module; the two
//! reusable devices are `preimage_gens` (generators of `{v : phi v in im S}`)
//! and `subquotient` (presentation of `(span U + span S)/span S`), both
//! reduced to syzygy computations.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::groebner::{syzygies, FreeMap, ImageBasis};
use crate::poly::{AlgebraElement, Poly};
use crate::ring::RingSpec;

/// Iteration cap for the ascending kernel chain; desk-scale modules
/// stabilize within single digits, so exceeding this is an internal error.
const TORSION_CHAIN_CAP: u32 = 64;

/// A finitely presented module `A^{ambient_rank} / im(relations)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulePresentation {
    ring: RingSpec,
    ambient_rank: usize,
    relations: FreeMap,
}

impl ModulePresentation {
    pub fn new(ambient_rank: usize, relations: FreeMap) -> Result<Self> {
        if relations.target_rank() != ambient_rank {
            return Err(Error::InvalidInput(format!(
                "relations land in rank {}, ambient rank is {ambient_rank}",
                relations.target_rank()
            )));
        }
        Ok(ModulePresentation { ring: relations.ring(), ambient_rank, relations })
    }

    /// The free module `A^rank`.
    pub fn free(ring: RingSpec, rank: usize) -> Self {
        ModulePresentation {
            ring,
            ambient_rank: rank,
            relations: FreeMap::zero(ring, rank, 0),
        }
    }

    /// The cyclic module `A/(gens)`.
    pub fn cyclic_quotient(ring: RingSpec, gens: &[Poly]) -> Result<Self> {
        let cols: Vec<Vec<Poly>> = gens.iter().map(|g| vec![g.clone()]).collect();
        let relations = FreeMap::from_columns(ring, 1, &cols)?;
        ModulePresentation::new(1, relations)
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn relations(&self) -> &FreeMap {
        &self.relations
    }

    /// Zero test: every ambient unit vector reduces to zero against the
    /// relation basis.
    pub fn is_zero_module(&self) -> bool {
        if self.ambient_rank == 0 {
            return true;
        }
        let basis = ImageBasis::new(&self.relations);
        (0..self.ambient_rank).all(|i| {
            let mut e = vec![Poly::zero(self.ring); self.ambient_rank];
            e[i] = Poly::one(self.ring);
            basis.contains(&e)
        })
    }

    /// `M / (xs) M`: adjoin `x * I` blocks to the relations.
    pub fn quotient_by_elements(&self, xs: &[Poly]) -> Self {
        let mut rel = self.relations.clone();
        for x in xs {
            rel = rel.hconcat(&FreeMap::scalar(self.ring, self.ambient_rank, x));
        }
        ModulePresentation { ring: self.ring, ambient_rank: self.ambient_rank, relations: rel }
    }

    pub fn direct_sum(&self, other: &ModulePresentation) -> Self {
        assert_eq!(self.ring, other.ring);
        let relations =
            FreeMap::block_diag(self.ring, &[&self.relations, &other.relations]);
        ModulePresentation {
            ring: self.ring,
            ambient_rank: self.ambient_rank + other.ambient_rank,
            relations,
        }
    }
}

/// A finite degree-indexed family of presentations; only nonzero components
/// are stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedModule {
    pub components: BTreeMap<i64, ModulePresentation>,
}

impl GradedModule {
    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.components.keys().copied().collect()
    }

    /// The twist `M(n)`: reindex every component by `n`.
    pub fn twist(&self, n: i64) -> GradedModule {
        GradedModule {
            components: self
                .components
                .iter()
                .map(|(d, m)| (d + n, m.clone()))
                .collect(),
        }
    }
}

/// Generators of an ideal, kept as explicit algebra elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealGens {
    pub gens: Vec<AlgebraElement>,
}

impl IdealGens {
    pub fn new(gens: Vec<AlgebraElement>) -> Self {
        IdealGens { gens }
    }

    pub fn from_polys(ps: &[Poly]) -> Self {
        IdealGens { gens: ps.iter().cloned().map(AlgebraElement::in_degree_zero).collect() }
    }

    pub fn values(&self) -> Vec<Poly> {
        self.gens.iter().map(|g| g.value.clone()).collect()
    }
}

// --- submodule machinery -------------------------------------------------------

/// Generators of the preimage `{v in A^m : phi v in im(target_sub)}`,
/// where `phi : A^m -> A^k` and `target_sub` lands in `A^k`. Computed as the
/// first-block projection of the syzygies of `[phi | target_sub]`.
pub fn preimage_gens(phi: &FreeMap, target_sub: &FreeMap) -> Vec<Vec<Poly>> {
    assert_eq!(phi.target_rank(), target_sub.target_rank());
    let combined = phi.hconcat(target_sub);
    let syz = syzygies(&combined);
    let m = phi.source_rank();
    let mut out: Vec<Vec<Poly>> = Vec::new();
    for col in syz.truncate_rows(m).columns() {
        if !col.iter().all(Poly::is_zero) && !out.contains(&col) {
            out.push(col);
        }
    }
    out
}

/// Presentation of `(span gens + span rels) / span rels`, with one ambient
/// generator per column of `gens`.
pub fn subquotient(gens: &FreeMap, rels: &FreeMap) -> ModulePresentation {
    assert_eq!(gens.target_rank(), rels.target_rank());
    let k = gens.source_rank();
    let combined = gens.hconcat(rels);
    let syz = syzygies(&combined);
    let mut cols: Vec<Vec<Poly>> = Vec::new();
    for col in syz.truncate_rows(k).columns() {
        if !col.iter().all(Poly::is_zero) && !cols.contains(&col) {
            cols.push(col);
        }
    }
    let relations = FreeMap::from_columns(gens.ring(), k, &cols)
        .expect("projected syzygies have the generator count");
    ModulePresentation::new(k, relations).expect("ranks agree by construction")
}

/// Presentation of `ker(x . : M -> M)` together with the embedding of its
/// generators into the ambient free module of `M`.
pub fn kernel_mult_with_embedding(
    x: &AlgebraElement,
    m: &ModulePresentation,
) -> (ModulePresentation, FreeMap) {
    let ring = m.ring();
    let mul = FreeMap::scalar(ring, m.ambient_rank(), &x.value);
    let gens = preimage_gens(&mul, m.relations());
    let embedding = FreeMap::from_columns(ring, m.ambient_rank(), &gens)
        .expect("preimage generators live in the ambient module");
    (subquotient(&embedding, m.relations()), embedding)
}

/// Presentation of `ker(x . : M -> M)`.
pub fn kernel_mult(x: &AlgebraElement, m: &ModulePresentation) -> ModulePresentation {
    kernel_mult_with_embedding(x, m).0
}

/// The stabilized torsion data of `x` on `M`.
pub struct TorsionData {
    /// minimal `n` with `ker(x^n) = ker(x^{n+1})`; equivalently the least
    /// `n` with `x^n . torsion = 0`
    pub exponent: u32,
    /// generators of the torsion submodule inside the ambient module
    pub embedding: FreeMap,
    pub presentation: ModulePresentation,
}

/// Ascending kernel chain `ker(x^0) <= ker(x^1) <= ...` until it stabilizes.
pub fn torsion_data(x: &AlgebraElement, m: &ModulePresentation) -> Result<TorsionData> {
    let ring = m.ring();
    let rank = m.ambient_rank();
    let kernel_of_power = |n: u32| -> Vec<Vec<Poly>> {
        let pow = x.value.pow(n);
        let mul = FreeMap::scalar(ring, rank, &pow);
        preimage_gens(&mul, m.relations())
    };

    let mut current = kernel_of_power(0);
    for n in 0..TORSION_CHAIN_CAP {
        let next = kernel_of_power(n + 1);
        // the chain ascends; stabilization means next lands in the span of
        // current together with the relations
        let mut span_cols = current.clone();
        span_cols.extend(m.relations().columns());
        let span = FreeMap::from_columns(ring, rank, &span_cols)
            .expect("submodule generators in ambient rank");
        let basis = ImageBasis::new(&span);
        if next.iter().all(|v| basis.contains(v)) {
            let embedding = FreeMap::from_columns(ring, rank, &current)
                .expect("kernel generators in ambient rank");
            let presentation = subquotient(&embedding, m.relations());
            return Ok(TorsionData { exponent: n, embedding, presentation });
        }
        current = next;
    }
    Err(Error::Internal(format!(
        "torsion chain did not stabilize within {TORSION_CHAIN_CAP} steps"
    )))
}

/// The `(x)`-torsion submodule: union of `ker(x^n)` over `n`.
pub fn torsion_submodule(x: &AlgebraElement, m: &ModulePresentation) -> Result<ModulePresentation> {
    Ok(torsion_data(x, m)?.presentation)
}

/// Least `n` with `x^n` annihilating the torsion submodule.
pub fn torsion_exponent(x: &AlgebraElement, m: &ModulePresentation) -> Result<u32> {
    Ok(torsion_data(x, m)?.exponent)
}

/// Classical module regularity of the sequence in the given order: each
/// element must act injectively on the successive quotient, and the final
/// quotient must be nonzero. Permutation invariance is not asserted.
pub fn is_regular_sequence(xs: &[AlgebraElement], m: &ModulePresentation) -> bool {
    let mut current = m.clone();
    for x in xs {
        if !kernel_mult(x, &current).is_zero_module() {
            return false;
        }
        current = current.quotient_by_elements(&[x.value.clone()]);
    }
    !current.is_zero_module()
}

/// The differential matrices of the classical Koszul complex on `t`
/// elements: `d_j : Lambda^j -> Lambda^{j-1}` over the fixed basis of
/// index subsets in lexicographic order.
fn koszul_differentials(ring: RingSpec, xs: &[Poly]) -> Vec<FreeMap> {
    let t = xs.len();
    let subsets: Vec<Vec<Vec<usize>>> = (0..=t)
        .map(|j| index_subsets(t, j))
        .collect();
    (1..=t)
        .map(|j| {
            let rows = subsets[j - 1].len();
            let cols = subsets[j].len();
            let mut entries = vec![vec![Poly::zero(ring); cols]; rows];
            for (c, subset) in subsets[j].iter().enumerate() {
                for (k, &var) in subset.iter().enumerate() {
                    let mut smaller = subset.clone();
                    smaller.remove(k);
                    let r = subsets[j - 1]
                        .iter()
                        .position(|s| *s == smaller)
                        .expect("face subset present");
                    let sign = if k % 2 == 0 { 1 } else { -1 };
                    let coef = Poly::constant(ring, sign);
                    entries[r][c] = &coef * &xs[var];
                }
            }
            FreeMap::new(ring, rows, cols, entries).expect("dimensions by construction")
        })
        .collect()
}

fn index_subsets(t: usize, j: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, t: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for i in start..t {
            cur.push(i);
            rec(i + 1, t, j, cur, out);
            cur.pop();
        }
    }
    rec(0, t, j, &mut cur, &mut out);
    out
}

/// Homology `H_0 .. H_t` of the classical Koszul complex on `xs` tensored
/// with `M`.
pub fn koszul_homology(xs: &IdealGens, m: &ModulePresentation) -> Vec<ModulePresentation> {
    let ring = m.ring();
    let r = m.ambient_rank();
    let values = xs.values();
    let t = values.len();
    let diffs = koszul_differentials(ring, &values);
    let binom = |j: usize| index_subsets(t, j).len();

    let mut out = Vec::with_capacity(t + 1);
    for j in 0..=t {
        let blocks_j = binom(j);
        let rel_j = FreeMap::block_diag(ring, &vec![m.relations(); blocks_j]);
        // cycles: preimage of the relations below under d_j
        let cycles: Vec<Vec<Poly>> = if j == 0 {
            // no differential out of degree 0: everything is a cycle
            FreeMap::identity(ring, blocks_j * r).columns()
        } else {
            let blocks_below = binom(j - 1);
            let rel_below = FreeMap::block_diag(ring, &vec![m.relations(); blocks_below]);
            let dj = FreeMap::kron_identity(&diffs[j - 1], r);
            preimage_gens(&dj, &rel_below)
        };
        let z = FreeMap::from_columns(ring, blocks_j * r, &cycles)
            .expect("cycles live in the tensor ambient");
        // boundaries and relations
        let boundaries = if j < t {
            FreeMap::kron_identity(&diffs[j], r).hconcat(&rel_j)
        } else {
            rel_j
        };
        out.push(subquotient(&z, &boundaries));
    }
    out
}

/// Depth of `a` on `M`, or infinity when `a M = M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Depth {
    Finite(usize),
    Infinite,
}

impl std::fmt::Display for Depth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Depth::Finite(n) => write!(f, "{n}"),
            Depth::Infinite => write!(f, "infinity"),
        }
    }
}

impl serde::Serialize for Depth {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Depth::Finite(n) => s.serialize_u64(*n as u64),
            Depth::Infinite => s.serialize_str("infinity"),
        }
    }
}

/// Depth via Koszul homology: `t - max{ i : H_i != 0 }` when `a M != M`,
/// infinity otherwise.
pub fn depth(a: &IdealGens, m: &ModulePresentation) -> Depth {
    let quotient = m.quotient_by_elements(&a.values());
    if quotient.is_zero_module() {
        return Depth::Infinite;
    }
    let homology = koszul_homology(a, m);
    let t = a.gens.len();
    let top = (0..=t)
        .rev()
        .find(|&i| !homology[i].is_zero_module())
        .expect("H_0 = M/aM is nonzero here");
    Depth::Finite(t - top)
}
