//! Buchberger-style Groebner bases for submodules of free modules.
//!
//! Vectors live in `A^r` with the position-over-term order (lower position
//! preferred, ring order inside a position). One augmented engine serves
//! four needs: module Groebner bases, normal forms, membership lifting with
//! an explicit witness, and syzygies. Each input column `f_j` is extended to
//! `(f_j, e_j)` in `A^{r+s}`; because the first block dominates the order,
//! the nonzero first blocks of the reduced basis form a Groebner basis of
//! the image, reducing `(v, 0)` tracks a lift of `v`, and basis elements
//! with vanishing first block carry generators of the syzygy module.
//!
//! S-pair selection follows the normal strategy (smallest lcm in the module
//! order, ties by generator index), and the final basis is inter-reduced and
//! monic, so all outputs are deterministic.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::{cmp_expo, mono_divides, mono_lcm, mono_quotient, Coeff, MonomialOrder, RingSpec};

/// A matrix of polynomials seen as a map of free modules
/// `A^{source_rank} -> A^{target_rank}`; `entries[row][col]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeMap {
    ring: RingSpec,
    target_rank: usize,
    source_rank: usize,
    entries: Vec<Vec<Poly>>,
}

impl FreeMap {
    pub fn new(
        ring: RingSpec,
        target_rank: usize,
        source_rank: usize,
        entries: Vec<Vec<Poly>>,
    ) -> Result<Self> {
        if entries.len() != target_rank {
            return Err(Error::InvalidInput(format!(
                "expected {target_rank} rows, got {}",
                entries.len()
            )));
        }
        for row in &entries {
            if row.len() != source_rank {
                return Err(Error::InvalidInput(format!(
                    "expected {source_rank} columns, got {}",
                    row.len()
                )));
            }
            for p in row {
                if p.ring() != ring {
                    return Err(Error::InvalidInput("matrix entry over a different ring".into()));
                }
            }
        }
        Ok(FreeMap { ring, target_rank, source_rank, entries })
    }

    pub fn zero(ring: RingSpec, target_rank: usize, source_rank: usize) -> Self {
        FreeMap {
            ring,
            target_rank,
            source_rank,
            entries: vec![vec![Poly::zero(ring); source_rank]; target_rank],
        }
    }

    pub fn identity(ring: RingSpec, rank: usize) -> Self {
        let mut m = FreeMap::zero(ring, rank, rank);
        for i in 0..rank {
            m.entries[i][i] = Poly::one(ring);
        }
        m
    }

    /// `p * I_rank`.
    pub fn scalar(ring: RingSpec, rank: usize, p: &Poly) -> Self {
        let mut m = FreeMap::zero(ring, rank, rank);
        for i in 0..rank {
            m.entries[i][i] = p.clone();
        }
        m
    }

    pub fn from_columns(ring: RingSpec, target_rank: usize, cols: &[Vec<Poly>]) -> Result<Self> {
        for c in cols {
            if c.len() != target_rank {
                return Err(Error::InvalidInput("column length mismatch".into()));
            }
        }
        let entries = (0..target_rank)
            .map(|r| cols.iter().map(|c| c[r].clone()).collect())
            .collect();
        FreeMap::new(ring, target_rank, cols.len(), entries)
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn target_rank(&self) -> usize {
        self.target_rank
    }

    pub fn source_rank(&self) -> usize {
        self.source_rank
    }

    pub fn entry(&self, row: usize, col: usize) -> &Poly {
        &self.entries[row][col]
    }

    pub fn rows(&self) -> &[Vec<Poly>] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        (0..self.target_rank).map(|i| self.entries[i][j].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Poly>> {
        (0..self.source_rank).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|r| r.iter().all(Poly::is_zero))
    }

    pub fn apply(&self, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(v.len(), self.source_rank, "vector length mismatch");
        (0..self.target_rank)
            .map(|i| {
                let mut acc = Poly::zero(self.ring);
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() && !self.entries[i][j].is_zero() {
                        acc = &acc + &(&self.entries[i][j] * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Composition `self . rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &FreeMap) -> FreeMap {
        assert_eq!(self.source_rank, rhs.target_rank, "composition rank mismatch");
        let mut out = FreeMap::zero(self.ring, self.target_rank, rhs.source_rank);
        for i in 0..self.target_rank {
            for j in 0..rhs.source_rank {
                let mut acc = Poly::zero(self.ring);
                for k in 0..self.source_rank {
                    let a = &self.entries[i][k];
                    let b = &rhs.entries[k][j];
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.entries[i][j] = acc;
            }
        }
        out
    }

    pub fn add(&self, rhs: &FreeMap) -> FreeMap {
        assert_eq!(self.target_rank, rhs.target_rank);
        assert_eq!(self.source_rank, rhs.source_rank);
        let mut out = self.clone();
        for i in 0..self.target_rank {
            for j in 0..self.source_rank {
                out.entries[i][j] = &out.entries[i][j] + &rhs.entries[i][j];
            }
        }
        out
    }

    pub fn sub(&self, rhs: &FreeMap) -> FreeMap {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> FreeMap {
        let mut out = self.clone();
        for row in &mut out.entries {
            for e in row.iter_mut() {
                *e = -&*e;
            }
        }
        out
    }

    pub fn scale_poly(&self, p: &Poly) -> FreeMap {
        let mut out = self.clone();
        for row in &mut out.entries {
            for e in row.iter_mut() {
                *e = &*e * p;
            }
        }
        out
    }

    /// Side-by-side concatenation; targets must agree.
    pub fn hconcat(&self, rhs: &FreeMap) -> FreeMap {
        assert_eq!(self.target_rank, rhs.target_rank);
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.iter().chain(b.iter()).cloned().collect())
            .collect();
        FreeMap {
            ring: self.ring,
            target_rank: self.target_rank,
            source_rank: self.source_rank + rhs.source_rank,
            entries,
        }
    }

    pub fn block_diag(ring: RingSpec, blocks: &[&FreeMap]) -> FreeMap {
        let target: usize = blocks.iter().map(|b| b.target_rank).sum();
        let source: usize = blocks.iter().map(|b| b.source_rank).sum();
        let mut out = FreeMap::zero(ring, target, source);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            for i in 0..b.target_rank {
                for j in 0..b.source_rank {
                    out.entries[ro + i][co + j] = b.entries[i][j].clone();
                }
            }
            ro += b.target_rank;
            co += b.source_rank;
        }
        out
    }

    /// Kronecker product with an identity of size `r`: blocks of `phi`
    /// scaled entries acting componentwise on `A^r`.
    pub fn kron_identity(phi: &FreeMap, r: usize) -> FreeMap {
        let ring = phi.ring;
        let mut out = FreeMap::zero(ring, phi.target_rank * r, phi.source_rank * r);
        for i in 0..phi.target_rank {
            for j in 0..phi.source_rank {
                if phi.entries[i][j].is_zero() {
                    continue;
                }
                for k in 0..r {
                    out.entries[i * r + k][j * r + k] = phi.entries[i][j].clone();
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> FreeMap {
        let entries = (0..self.source_rank)
            .map(|j| (0..self.target_rank).map(|i| self.entries[i][j].clone()).collect())
            .collect();
        FreeMap {
            ring: self.ring,
            target_rank: self.source_rank,
            source_rank: self.target_rank,
            entries,
        }
    }

    /// Keep the first `k` rows (projection used on syzygy output).
    pub fn truncate_rows(&self, k: usize) -> FreeMap {
        FreeMap {
            ring: self.ring,
            target_rank: k,
            source_rank: self.source_rank,
            entries: self.entries[..k].to_vec(),
        }
    }
}

// --- dense module vectors ----------------------------------------------------

pub(crate) fn vec_zero(ring: RingSpec, n: usize) -> Vec<Poly> {
    vec![Poly::zero(ring); n]
}

pub(crate) fn vec_is_zero(v: &[Poly]) -> bool {
    v.iter().all(Poly::is_zero)
}

fn vec_leading(v: &[Poly]) -> Option<(usize, Coeff, Vec<u32>)> {
    for (pos, p) in v.iter().enumerate() {
        if let Some((c, e)) = p.leading() {
            return Some((pos, c.clone(), e.to_vec()));
        }
    }
    None
}

/// `v += c * x^e * g`.
fn vec_addmul(v: &mut [Poly], c: &Coeff, e: &[u32], g: &[Poly]) {
    for (slot, gp) in v.iter_mut().zip(g) {
        if !gp.is_zero() {
            *slot = slot.addmul_term(c, e, gp);
        }
    }
}

fn vec_scale(v: &mut [Poly], c: &Coeff) {
    for p in v.iter_mut() {
        *p = p.scale(c);
    }
}

/// Position-over-term comparison of module terms, lower position preferred.
fn term_cmp(
    (p1, e1): (usize, &[u32]),
    (p2, e2): (usize, &[u32]),
    order: MonomialOrder,
) -> Ordering {
    match p1.cmp(&p2) {
        Ordering::Less => Ordering::Greater,
        Ordering::Greater => Ordering::Less,
        Ordering::Equal => cmp_expo(e1, e2, order),
    }
}

// --- the augmented engine ------------------------------------------------------

/// Reduced Groebner basis of the module generated by the columns of a map,
/// tracked in augmented form for lifting and syzygies.
#[derive(Debug, Clone)]
pub struct ImageBasis {
    ring: RingSpec,
    rank: usize,
    ncols: usize,
    rows: Vec<Vec<Poly>>,
    syzygy_complete: bool,
}

impl ImageBasis {
    /// Basis sufficient for image membership, normal forms and lifting.
    pub fn new(f: &FreeMap) -> Self {
        Self::build(f, false)
    }

    /// Basis that additionally carries a complete syzygy generating set.
    pub fn with_syzygies(f: &FreeMap) -> Self {
        Self::build(f, true)
    }

    fn build(f: &FreeMap, full: bool) -> Self {
        let ring = f.ring();
        let rank = f.target_rank();
        let ncols = f.source_rank();
        let width = rank + ncols;
        let mut rows: Vec<Vec<Poly>> = Vec::new();
        for j in 0..ncols {
            let mut v = vec_zero(ring, width);
            for i in 0..rank {
                v[i] = f.entry(i, j).clone();
            }
            v[rank + j] = Poly::one(ring);
            rows.push(v);
        }
        for v in rows.iter_mut() {
            make_monic(ring, v);
        }

        // (i, j, lcm position, lcm exponent)
        let mut pairs: Vec<(usize, usize, usize, Vec<u32>)> = Vec::new();
        let mut lts: Vec<Option<(usize, Vec<u32>)>> =
            rows.iter().map(|v| vec_leading(v).map(|(p, _, e)| (p, e))).collect();
        let push_pairs =
            |pairs: &mut Vec<(usize, usize, usize, Vec<u32>)>,
             lts: &[Option<(usize, Vec<u32>)>],
             k: usize| {
                let Some((pk, ek)) = lts[k].clone() else { return };
                for i in 0..k {
                    if let Some((pi, ei)) = &lts[i] {
                        if *pi == pk {
                            if !full && pk >= rank {
                                continue;
                            }
                            pairs.push((i, k, pk, mono_lcm(ei, &ek)));
                        }
                    }
                }
            };
        for k in 0..rows.len() {
            push_pairs(&mut pairs, &lts, k);
        }

        while !pairs.is_empty() {
            // normal strategy: smallest lcm term in the module order
            let mut best = 0;
            for idx in 1..pairs.len() {
                let a = &pairs[idx];
                let b = &pairs[best];
                match term_cmp((a.2, &a.3), (b.2, &b.3), ring.order) {
                    Ordering::Less => best = idx,
                    Ordering::Equal => {
                        if (a.0, a.1) < (b.0, b.1) {
                            best = idx;
                        }
                    }
                    Ordering::Greater => {}
                }
            }
            let (i, j, _pos, lcm) = pairs.remove(best);
            let (ei, ej) = {
                let (_, ei) = lts[i].as_ref().unwrap();
                let (_, ej) = lts[j].as_ref().unwrap();
                (ei.clone(), ej.clone())
            };
            let ring_one = ring.coeff_one();
            let minus_one = ring.coeff_neg(&ring_one);
            let mut s = vec_zero(ring, width);
            vec_addmul(&mut s, &ring_one, &mono_quotient(&lcm, &ei), &rows[i]);
            vec_addmul(&mut s, &minus_one, &mono_quotient(&lcm, &ej), &rows[j]);
            reduce_full(ring, &mut s, &rows);
            if !vec_is_zero(&s) {
                make_monic(ring, &mut s);
                rows.push(s);
                lts.push(vec_leading(rows.last().unwrap()).map(|(p, _, e)| (p, e)));
                push_pairs(&mut pairs, &lts, rows.len() - 1);
            }
        }

        interreduce(ring, &mut rows);
        ImageBasis { ring, rank, ncols, rows, syzygy_complete: full }
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Full normal form of the augmented vector `(v, 0)`; returns the first
    /// block (the normal form proper) and the second block (the negated
    /// coefficient record).
    fn reduce_augmented(&self, v: &[Poly]) -> (Vec<Poly>, Vec<Poly>) {
        assert_eq!(v.len(), self.rank, "vector length mismatch");
        let mut w = vec_zero(self.ring, self.rank + self.ncols);
        w[..self.rank].clone_from_slice(v);
        reduce_full(self.ring, &mut w, &self.rows);
        let tail = w.split_off(self.rank);
        (w, tail)
    }

    pub fn normal_form(&self, v: &[Poly]) -> Vec<Poly> {
        self.reduce_augmented(v).0
    }

    pub fn contains(&self, v: &[Poly]) -> bool {
        vec_is_zero(&self.normal_form(v))
    }

    /// Witness for `v` in the image: `Some(w)` with `f * w = v` exactly, or
    /// `None` when `v` is not in the image.
    pub fn lift(&self, v: &[Poly]) -> Option<Vec<Poly>> {
        let (nf, tail) = self.reduce_augmented(v);
        if vec_is_zero(&nf) {
            Some(tail.iter().map(|p| -p).collect())
        } else {
            None
        }
    }

    /// First blocks of the basis rows with nonzero first block: a reduced
    /// Groebner basis of the image submodule.
    pub fn image_gens(&self) -> Vec<Vec<Poly>> {
        self.rows
            .iter()
            .filter(|r| !vec_is_zero(&r[..self.rank]))
            .map(|r| r[..self.rank].to_vec())
            .collect()
    }

    /// Second blocks of the rows whose first block vanished: generators of
    /// the syzygy module of the original columns.
    pub fn syzygy_gens(&self) -> Vec<Vec<Poly>> {
        assert!(self.syzygy_complete, "basis built without syzygy pairs");
        self.rows
            .iter()
            .filter(|r| vec_is_zero(&r[..self.rank]))
            .map(|r| r[self.rank..].to_vec())
            .collect()
    }
}

fn make_monic(ring: RingSpec, v: &mut [Poly]) {
    if let Some((_, c, _)) = vec_leading(v) {
        if !c.is_one() {
            let inv = ring.coeff_inv(&c);
            vec_scale(v, &inv);
        }
    }
}

/// Full normal form against `basis`: every term of the result is reducible
/// by no leading term of the basis.
fn reduce_full(ring: RingSpec, w: &mut Vec<Poly>, basis: &[Vec<Poly>]) {
    let width = w.len();
    let mut result = vec_zero(ring, width);
    'outer: loop {
        let Some((pos, c, e)) = vec_leading(w) else { break };
        for g in basis {
            if let Some((gp, _, ge)) = vec_leading(g) {
                if gp == pos && mono_divides(&ge, &e) {
                    // basis rows are monic
                    let q = mono_quotient(&e, &ge);
                    let neg = ring.coeff_neg(&c);
                    vec_addmul(w, &neg, &q, g);
                    continue 'outer;
                }
            }
        }
        // irreducible: move the leading term to the result
        w[pos].pop_leading();
        result[pos].push_term_unchecked(c, e);
    }
    *w = result;
}

fn interreduce(ring: RingSpec, rows: &mut Vec<Vec<Poly>>) {
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < rows.len() {
            let r = rows.remove(i);
            let mut nf = r.clone();
            reduce_full(ring, &mut nf, rows);
            if vec_is_zero(&nf) {
                changed = true;
            } else {
                make_monic(ring, &mut nf);
                if nf != r {
                    changed = true;
                }
                rows.insert(i, nf);
                i += 1;
            }
        }
        if !changed {
            break;
        }
    }
    rows.sort_by(|a, b| {
        let la = vec_leading(a);
        let lb = vec_leading(b);
        match (la, lb) {
            (Some((pa, _, ea)), Some((pb, _, eb))) => {
                term_cmp((pb, &eb), (pa, &ea), ring.order)
            }
            _ => Ordering::Equal,
        }
    });
    rows.dedup();
}

// --- public operations ---------------------------------------------------------

/// A Groebner basis of a submodule of `A^rank`, given by its reduced
/// generating vectors; every S-vector of two members reduces to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleGB {
    ring: RingSpec,
    rank: usize,
    gens: Vec<Vec<Poly>>,
}

impl ModuleGB {
    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gens(&self) -> &[Vec<Poly>] {
        &self.gens
    }
}

/// Groebner basis of the ideal generated by `gens` (the rank-1 case).
pub fn groebner_basis(ring: RingSpec, gens: &[Poly]) -> Result<ModuleGB> {
    for g in gens {
        if g.ring() != ring {
            return Err(Error::InvalidInput("generators over different rings".into()));
        }
    }
    let cols: Vec<Vec<Poly>> = gens.iter().map(|g| vec![g.clone()]).collect();
    let f = FreeMap::from_columns(ring, 1, &cols)?;
    Ok(module_groebner(&f))
}

/// Groebner basis of the column span (image) of `f` in `A^{target_rank}`.
pub fn module_groebner(f: &FreeMap) -> ModuleGB {
    let basis = ImageBasis::new(f);
    ModuleGB { ring: f.ring(), rank: f.target_rank(), gens: basis.image_gens() }
}

/// Remainder of `v` on division by `gb`: no term of the result is divisible
/// by a leading term of the basis, and `v - result` lies in the span.
pub fn normal_form(v: &[Poly], gb: &ModuleGB) -> Result<Vec<Poly>> {
    if v.len() != gb.rank {
        return Err(Error::InvalidInput(format!(
            "vector of length {} against a basis in rank {}",
            v.len(),
            gb.rank
        )));
    }
    let mut w = v.to_vec();
    reduce_full(gb.ring, &mut w, &gb.gens);
    Ok(w)
}

/// Generators of `ker(f)` as the columns of the returned map; satisfies
/// `f.compose(&syzygies(f)) == 0`.
pub fn syzygies(f: &FreeMap) -> FreeMap {
    let basis = ImageBasis::with_syzygies(f);
    let cols = basis.syzygy_gens();
    let out = FreeMap::from_columns(f.ring(), f.source_rank(), &cols)
        .expect("syzygy columns have the source rank");
    debug_assert!(f.compose(&out).is_zero());
    out
}

/// Membership with witness: `Some(w)` with `f * w = v`, or `None` when `v`
/// is outside the image. `None` is a result, not a failure.
pub fn lift_membership(v: &[Poly], f: &FreeMap) -> Result<Option<Vec<Poly>>> {
    if v.len() != f.target_rank() {
        return Err(Error::InvalidInput(format!(
            "vector of length {} against a map with target rank {}",
            v.len(),
            f.target_rank()
        )));
    }
    Ok(ImageBasis::new(f).lift(v))
}
