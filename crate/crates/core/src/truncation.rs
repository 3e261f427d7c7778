//! Finite-dimensional truncation oracle.
//!
//! Everything here is plain linear algebra over the coefficient field on
//! monomial coordinates up to a degree bound: no Groebner machinery, no
//! division. It exists as an independent brute-force cross-check for the
//! production kernel and is kept deliberately separate from it.
//!
//! For a submodule spanned by homogeneous vectors the filtered spans
//! computed here are exact in every degree; for inhomogeneous generators
//! they under-approximate (membership may need multipliers above the bound),
//! which is why tests drive this oracle with graded instances or with
//! members constructed from bounded witnesses.

use crate::groebner::FreeMap;
use crate::poly::Poly;
use crate::ring::{monomials_up_to, mono_total_degree, Coeff, RingSpec};

/// Coordinate space for vectors in `A^rank` with entries of total degree
/// at most `degree`, with optional per-position weights: position `i`
/// contributes monomials `m` with `weight[i] + deg(m) <= degree`.
pub struct TruncatedSpace {
    ring: RingSpec,
    rank: usize,
    degree: u32,
    weights: Vec<u64>,
    /// basis: (position, exponent vector), in a fixed deterministic order
    basis: Vec<(usize, Vec<u32>)>,
    index: std::collections::BTreeMap<(usize, Vec<u32>), usize>,
}

impl TruncatedSpace {
    pub fn new(ring: RingSpec, rank: usize, degree: u32) -> Self {
        Self::with_weights(ring, vec![0; rank], degree)
    }

    pub fn with_weights(ring: RingSpec, weights: Vec<u64>, degree: u32) -> Self {
        let rank = weights.len();
        let mut basis = Vec::new();
        for (pos, &w) in weights.iter().enumerate() {
            if w > degree as u64 {
                continue;
            }
            for m in monomials_up_to(ring.num_vars, (degree as u64 - w) as u32) {
                basis.push((pos, m));
            }
        }
        let index = basis
            .iter()
            .enumerate()
            .map(|(k, b)| (b.clone(), k))
            .collect();
        TruncatedSpace { ring, rank, degree, weights, basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a vector, or `None` when some term exceeds the bound.
    pub fn flatten(&self, v: &[Poly]) -> Option<Vec<Coeff>> {
        assert_eq!(v.len(), self.rank);
        let mut out = vec![self.ring.coeff_zero(); self.basis.len()];
        for (pos, p) in v.iter().enumerate() {
            for (c, e) in p.terms() {
                let k = self.index.get(&(pos, e.clone()))?;
                out[*k] = c.clone();
            }
        }
        Some(out)
    }

    /// All products `m * v` whose weighted degree stays within the bound.
    fn shifts(&self, v: &[Poly]) -> Vec<Vec<Coeff>> {
        let vdeg = v
            .iter()
            .enumerate()
            .flat_map(|(pos, p)| {
                p.terms()
                    .iter()
                    .map(move |(_, e)| self.weights[pos] + mono_total_degree(e))
            })
            .max();
        let Some(vdeg) = vdeg else { return Vec::new() };
        if vdeg > self.degree as u64 {
            return Vec::new();
        }
        let headroom = (self.degree as u64 - vdeg) as u32;
        let mut out = Vec::new();
        for m in monomials_up_to(self.ring.num_vars, headroom) {
            let shifted: Vec<Poly> = v
                .iter()
                .map(|p| p.mul_term(&self.ring.coeff_one(), &m))
                .collect();
            if let Some(row) = self.flatten(&shifted) {
                out.push(row);
            }
        }
        out
    }
}

/// Row-echelon accumulator over the coefficient field.
pub struct Echelon {
    ring: RingSpec,
    /// rows normalized to pivot 1, stored with their pivot column
    rows: Vec<(usize, Vec<Coeff>)>,
}

impl Echelon {
    pub fn new(ring: RingSpec) -> Self {
        Echelon { ring, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the accumulated rows in place; returns the pivot
    /// column if a nonzero remainder survives.
    fn reduce(&self, v: &mut [Coeff]) -> Option<usize> {
        for (pivot, row) in &self.rows {
            if !v[*pivot].is_zero() {
                let c = v[*pivot].clone();
                for (slot, r) in v.iter_mut().zip(row) {
                    *slot = self.ring.coeff_sub(slot, &self.ring.coeff_mul(&c, r));
                }
            }
        }
        v.iter().position(|c| !c.is_zero())
    }

    /// Insert a vector; returns true when it enlarged the span.
    pub fn insert(&mut self, mut v: Vec<Coeff>) -> bool {
        match self.reduce(&mut v) {
            None => false,
            Some(pivot) => {
                let inv = self.ring.coeff_inv(&v[pivot]);
                for c in v.iter_mut() {
                    *c = self.ring.coeff_mul(c, &inv);
                }
                self.rows.push((pivot, v));
                true
            }
        }
    }

    pub fn contains(&self, mut v: Vec<Coeff>) -> bool {
        self.reduce(&mut v).is_none()
    }
}

/// Dimension of the filtered span `{m * g : weighted deg <= bound}` of the
/// given vectors inside the truncated space.
pub fn span_dim(space: &TruncatedSpace, gens: &[Vec<Poly>]) -> usize {
    span(space, gens).rank()
}

pub fn span(space: &TruncatedSpace, gens: &[Vec<Poly>]) -> Echelon {
    let mut ech = Echelon::new(space.ring);
    for g in gens {
        for row in space.shifts(g) {
            ech.insert(row);
        }
    }
    ech
}

/// Truncated membership: is `v` in the span of `{m * g}` within the bound?
pub fn membership(space: &TruncatedSpace, v: &[Poly], gens: &[Vec<Poly>]) -> bool {
    match space.flatten(v) {
        None => false,
        Some(coords) => span(space, gens).contains(coords),
    }
}

/// Basis of `{v : deg v <= bound, f * v = 0}` by exact nullspace
/// computation. The target space is padded by the largest entry degree of
/// `f`, so no kernel vector is lost to truncation.
pub fn kernel_basis(f: &FreeMap, degree: u32) -> Vec<Vec<Poly>> {
    let ring = f.ring();
    let source = TruncatedSpace::new(ring, f.source_rank(), degree);
    let fdeg = f
        .rows()
        .iter()
        .flat_map(|r| r.iter().filter_map(|p| p.total_degree()))
        .max()
        .unwrap_or(0) as u32;
    let target = TruncatedSpace::new(ring, f.target_rank(), degree + fdeg);

    // columns of the linear system: image of each source basis vector
    let mut cols: Vec<Vec<Coeff>> = Vec::with_capacity(source.dim());
    for (pos, m) in &source.basis {
        let mut v = vec![Poly::zero(ring); f.source_rank()];
        v[*pos] = Poly::from_terms(ring, vec![(ring.coeff_one(), m.clone())]).unwrap();
        let image = f.apply(&v);
        cols.push(target.flatten(&image).expect("padded target bound"));
    }

    // Gauss: row-reduce the transposed system to find the nullspace
    let rows = target.dim();
    let ncols = source.dim();
    let mut mat: Vec<Vec<Coeff>> = (0..rows)
        .map(|r| (0..ncols).map(|c| cols[c][r].clone()).collect())
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut rank = 0usize;
    for col in 0..ncols {
        let mut sel = None;
        for (r, row) in mat.iter().enumerate().skip(rank) {
            if !row[col].is_zero() {
                sel = Some(r);
                break;
            }
        }
        let Some(sel) = sel else { continue };
        mat.swap(rank, sel);
        let inv = ring.coeff_inv(&mat[rank][col]);
        for c in col..ncols {
            mat[rank][c] = ring.coeff_mul(&mat[rank][c], &inv);
        }
        for r in 0..rows {
            if r != rank && !mat[r][col].is_zero() {
                let factor = mat[r][col].clone();
                for c in col..ncols {
                    let sub = ring.coeff_mul(&factor, &mat[rank][c]);
                    mat[r][c] = ring.coeff_sub(&mat[r][c], &sub);
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }

    let mut kernel = Vec::new();
    for free_col in 0..ncols {
        if pivot_of_col[free_col].is_some() {
            continue;
        }
        let mut coords = vec![ring.coeff_zero(); ncols];
        coords[free_col] = ring.coeff_one();
        for (col, pv) in pivot_of_col.iter().enumerate() {
            if let Some(r) = pv {
                coords[col] = ring.coeff_neg(&mat[*r][free_col]);
            }
        }
        // unflatten
        let mut v = vec![Poly::zero(ring); f.source_rank()];
        for (k, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                let (pos, m) = &source.basis[k];
                let t = Poly::from_terms(ring, vec![(c.clone(), m.clone())]).unwrap();
                v[*pos] = &v[*pos] + &t;
            }
        }
        debug_assert!(f.apply(&v).iter().all(Poly::is_zero));
        kernel.push(v);
    }
    kernel
}

/// Filtered dimension of the subquotient `(span Z + span B) / span B` at
/// each degree `0..=bound`; exact for graded inputs.
pub fn subquotient_dims(
    ring: RingSpec,
    rank: usize,
    z: &[Vec<Poly>],
    b: &[Vec<Poly>],
    bound: u32,
) -> Vec<usize> {
    (0..=bound)
        .map(|d| {
            let space = TruncatedSpace::new(ring, rank, d);
            let mut all: Vec<Vec<Poly>> = z.to_vec();
            all.extend(b.iter().cloned());
            span_dim(&space, &all) - span_dim(&space, b)
        })
        .collect()
}

/// Filtered dimension of a cokernel presentation `A^w / span(rels)` where
/// ambient generator `i` sits in degree `weights[i]`; exact for graded
/// presentations.
pub fn presentation_dims(
    ring: RingSpec,
    weights: &[u64],
    rels: &[Vec<Poly>],
    bound: u32,
) -> Vec<usize> {
    (0..=bound)
        .map(|d| {
            let space = TruncatedSpace::with_weights(ring, weights.to_vec(), d);
            space.dim() - span_dim(&space, rels)
        })
        .collect()
}
