//! Bounded complexes of finite free modules and degree-0 chain maps.
//!
//! Conventions, fixed once and tested everywhere:
//! - homological (chain) indexing, differentials lower degree;
//! - the shift raises degree and negates the differential: `(S^n X)_i =
//!   X_{i-n}` with `d = (-1)^n d_X`;
//! - `cone(f: X -> Y)_i = X_{i-1} (+) Y_i` (source block first) with
//!   differential `[[-d_X, 0], [-f, d_Y]]`;
//! - `Hom(X, Y)_n = (+)_i Hom(X_i, Y_{i+n})` with `D(f) = d_Y f - (-1)^n
//!   f d_X`, matrices flattened row-major block by block in ascending `i`.
//!
//! `d^2 = 0` is checked whenever a complex is constructed, and the square
//! condition whenever a chain map is constructed.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fgmodule::{subquotient, GradedModule, ModulePresentation};
use crate::groebner::{syzygies, FreeMap, ImageBasis};
use crate::poly::Poly;
use crate::ring::RingSpec;

/// A bounded complex of finite free modules. `ranks[k]` is the rank in
/// degree `lo + k`; `diffs[k]` is the differential from degree `lo + k + 1`
/// to degree `lo + k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeComplex {
    ring: RingSpec,
    lo: i64,
    ranks: Vec<usize>,
    diffs: Vec<FreeMap>,
}

impl FreeComplex {
    pub fn new(ring: RingSpec, lo: i64, ranks: Vec<usize>, diffs: Vec<FreeMap>) -> Result<Self> {
        if !ranks.is_empty() && diffs.len() + 1 != ranks.len() {
            return Err(Error::InvalidInput(format!(
                "{} ranks need {} differentials, got {}",
                ranks.len(),
                ranks.len() - 1,
                diffs.len()
            )));
        }
        if ranks.is_empty() && !diffs.is_empty() {
            return Err(Error::InvalidInput("differentials without ranks".into()));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.ring() != ring {
                return Err(Error::InvalidInput("differential over a different ring".into()));
            }
            if d.source_rank() != ranks[k + 1] || d.target_rank() != ranks[k] {
                return Err(Error::InvalidInput(format!(
                    "differential {} has shape {}x{}, expected {}x{}",
                    k,
                    d.target_rank(),
                    d.source_rank(),
                    ranks[k],
                    ranks[k + 1]
                )));
            }
        }
        for k in 0..diffs.len().saturating_sub(1) {
            if !diffs[k].compose(&diffs[k + 1]).is_zero() {
                return Err(Error::InvalidInput(format!(
                    "d^2 != 0 between degrees {} and {}",
                    lo + k as i64 + 2,
                    lo + k as i64
                )));
            }
        }
        Ok(FreeComplex { ring, lo, ranks, diffs })
    }

    /// The zero complex.
    pub fn zero(ring: RingSpec) -> Self {
        FreeComplex { ring, lo: 0, ranks: Vec::new(), diffs: Vec::new() }
    }

    /// A free module of the given rank concentrated in one degree.
    pub fn stalk(ring: RingSpec, degree: i64, rank: usize) -> Self {
        FreeComplex { ring, lo: degree, ranks: vec![rank], diffs: Vec::new() }
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.ranks.len() as i64 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.iter().all(|&r| r == 0)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, degree: i64) -> usize {
        if degree < self.lo || degree > self.hi() {
            0
        } else {
            self.ranks[(degree - self.lo) as usize]
        }
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// Number of degrees with nonzero rank.
    pub fn support_width(&self) -> usize {
        self.ranks.iter().filter(|&&r| r > 0).count()
    }

    /// The differential out of `degree`, synthesized as a zero map at the
    /// boundary so callers can treat the complex as unbounded.
    pub fn differential(&self, degree: i64) -> FreeMap {
        let k = degree - self.lo;
        if k >= 1 && (k as usize) < self.ranks.len() {
            self.diffs[(k - 1) as usize].clone()
        } else {
            FreeMap::zero(self.ring, self.rank(degree - 1), self.rank(degree))
        }
    }

    /// `(S^n X)_i = X_{i-n}`, differential scaled by `(-1)^n`.
    pub fn shift(&self, n: i64) -> FreeComplex {
        let sign = if n.rem_euclid(2) == 0 { 1 } else { -1 };
        let diffs = self
            .diffs
            .iter()
            .map(|d| if sign == 1 { d.clone() } else { d.neg() })
            .collect();
        FreeComplex { ring: self.ring, lo: self.lo + n, ranks: self.ranks.clone(), diffs }
    }

    pub fn direct_sum(&self, other: &FreeComplex) -> FreeComplex {
        assert_eq!(self.ring, other.ring);
        if self.ranks.is_empty() {
            return other.clone();
        }
        if other.ranks.is_empty() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let ranks: Vec<usize> = (lo..=hi).map(|i| self.rank(i) + other.rank(i)).collect();
        let diffs: Vec<FreeMap> = (lo + 1..=hi)
            .map(|i| {
                FreeMap::block_diag(self.ring, &[&self.differential(i), &other.differential(i)])
            })
            .collect();
        // block_diag keeps the first summand's coordinates first in every
        // degree, matching the cone layout for zero maps
        FreeComplex::new(self.ring, lo, ranks, diffs).expect("sum of complexes is a complex")
    }

    /// Drop zero ranks at both ends.
    pub fn trim(&self) -> FreeComplex {
        let Some(first) = self.ranks.iter().position(|&r| r > 0) else {
            return FreeComplex::zero(self.ring);
        };
        let last = self.ranks.iter().rposition(|&r| r > 0).unwrap();
        let ranks = self.ranks[first..=last].to_vec();
        let diffs = self.diffs[first..last].to_vec();
        FreeComplex {
            ring: self.ring,
            lo: self.lo + first as i64,
            ranks,
            diffs,
        }
    }
}

/// A degree-0 chain map. Components are stored for every degree where both
/// source and target have nonzero rank; elsewhere they are zero maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMap {
    source: FreeComplex,
    target: FreeComplex,
    comps: BTreeMap<i64, FreeMap>,
}

impl ChainMap {
    pub fn new(
        source: FreeComplex,
        target: FreeComplex,
        comps: BTreeMap<i64, FreeMap>,
    ) -> Result<Self> {
        let mut stored = BTreeMap::new();
        let lo = source.lo().min(target.lo());
        let hi = source.hi().max(target.hi());
        for i in lo..=hi {
            let want_rows = target.rank(i);
            let want_cols = source.rank(i);
            let comp = match comps.get(&i) {
                Some(m) => {
                    if m.target_rank() != want_rows || m.source_rank() != want_cols {
                        return Err(Error::InvalidInput(format!(
                            "component at degree {i} has shape {}x{}, expected {want_rows}x{want_cols}",
                            m.target_rank(),
                            m.source_rank()
                        )));
                    }
                    m.clone()
                }
                None => FreeMap::zero(source.ring(), want_rows, want_cols),
            };
            if want_rows > 0 && want_cols > 0 {
                stored.insert(i, comp);
            }
        }
        for (&i, m) in &comps {
            if (i < lo || i > hi) && !m.is_zero() {
                return Err(Error::InvalidInput(format!(
                    "nonzero component at degree {i} outside both complexes"
                )));
            }
        }
        let out = ChainMap { source, target, comps: stored };
        // square condition in every relevant degree
        for i in lo..=hi + 1 {
            let lhs = out.target.differential(i).compose(&out.component(i));
            let rhs = out.component(i - 1).compose(&out.source.differential(i));
            if lhs != rhs {
                return Err(Error::InvalidInput(format!(
                    "chain map does not commute with differentials at degree {i}"
                )));
            }
        }
        Ok(out)
    }

    pub fn identity(x: &FreeComplex) -> ChainMap {
        let comps = (x.lo()..=x.hi())
            .map(|i| (i, FreeMap::identity(x.ring(), x.rank(i))))
            .collect();
        ChainMap::new(x.clone(), x.clone(), comps).expect("identity is a chain map")
    }

    pub fn zero_map(source: FreeComplex, target: FreeComplex) -> ChainMap {
        ChainMap::new(source, target, BTreeMap::new()).expect("zero is a chain map")
    }

    /// Multiplication by a ring element, `p * id_X`.
    pub fn mult(x: &FreeComplex, p: &Poly) -> ChainMap {
        let comps = (x.lo()..=x.hi())
            .map(|i| (i, FreeMap::scalar(x.ring(), x.rank(i), p)))
            .collect();
        ChainMap::new(x.clone(), x.clone(), comps).expect("scalar action is a chain map")
    }

    pub fn source(&self) -> &FreeComplex {
        &self.source
    }

    pub fn target(&self) -> &FreeComplex {
        &self.target
    }

    pub fn components(&self) -> &BTreeMap<i64, FreeMap> {
        &self.comps
    }

    pub fn component(&self, degree: i64) -> FreeMap {
        self.comps.get(&degree).cloned().unwrap_or_else(|| {
            FreeMap::zero(self.source.ring(), self.target.rank(degree), self.source.rank(degree))
        })
    }

    pub fn is_zero_map(&self) -> bool {
        self.comps.values().all(FreeMap::is_zero)
    }

    /// Composition `self . g` (apply `g` first); `g.target` must equal
    /// `self.source` literally.
    pub fn compose(&self, g: &ChainMap) -> ChainMap {
        assert_eq!(
            self.source, g.target,
            "chain map composition needs literally equal middle complexes"
        );
        let lo = g.source.lo().min(self.target.lo());
        let hi = g.source.hi().max(self.target.hi());
        let comps = (lo..=hi)
            .map(|i| (i, self.component(i).compose(&g.component(i))))
            .collect();
        ChainMap::new(g.source.clone(), self.target.clone(), comps)
            .expect("composite of chain maps is a chain map")
    }

    pub fn scale_poly(&self, p: &Poly) -> ChainMap {
        let comps = self.comps.iter().map(|(i, m)| (*i, m.scale_poly(p))).collect();
        ChainMap::new(self.source.clone(), self.target.clone(), comps)
            .expect("scalar multiple of a chain map is a chain map")
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        assert_eq!(self.source, other.source);
        assert_eq!(self.target, other.target);
        let keys: std::collections::BTreeSet<i64> =
            self.comps.keys().chain(other.comps.keys()).copied().collect();
        let comps = keys
            .into_iter()
            .map(|i| (i, self.component(i).add(&other.component(i))))
            .collect();
        ChainMap::new(self.source.clone(), self.target.clone(), comps)
            .expect("sum of chain maps is a chain map")
    }

    pub fn shift(&self, n: i64) -> ChainMap {
        let comps = self.comps.iter().map(|(i, m)| (i + n, m.clone())).collect();
        ChainMap::new(self.source.shift(n), self.target.shift(n), comps)
            .expect("shift of a chain map is a chain map")
    }
}

/// The mapping cone with its two canonical maps: the inclusion of the
/// target and the projection onto the shifted source.
pub struct Cone {
    pub complex: FreeComplex,
    pub include_target: ChainMap,
    pub project_source: ChainMap,
}

/// `cone(f)_i = X_{i-1} (+) Y_i` with differential `[[-d_X, 0], [-f, d_Y]]`.
pub fn cone(f: &ChainMap) -> Cone {
    let ring = f.source().ring();
    let x = f.source();
    let y = f.target();
    let sx = x.shift(1);
    let lo = sx.lo().min(y.lo());
    let hi = sx.hi().max(y.hi());
    let (lo, hi) = if sx.is_empty() && y.is_empty() {
        (0, -1)
    } else {
        (lo, hi)
    };
    let mut ranks = Vec::new();
    let mut diffs = Vec::new();
    for i in lo..=hi {
        ranks.push(x.rank(i - 1) + y.rank(i));
    }
    for i in lo + 1..=hi {
        let rows_x = x.rank(i - 2);
        let rows_y = y.rank(i - 1);
        let cols_x = x.rank(i - 1);
        let cols_y = y.rank(i);
        let dx = x.differential(i - 1);
        let dy = y.differential(i);
        let fc = f.component(i - 1);
        let mut entries = vec![vec![Poly::zero(ring); cols_x + cols_y]; rows_x + rows_y];
        for r in 0..rows_x {
            for c in 0..cols_x {
                entries[r][c] = -dx.entry(r, c);
            }
        }
        for r in 0..rows_y {
            for c in 0..cols_x {
                entries[rows_x + r][c] = -fc.entry(r, c);
            }
            for c in 0..cols_y {
                entries[rows_x + r][cols_x + c] = dy.entry(r, c).clone();
            }
        }
        diffs.push(
            FreeMap::new(ring, rows_x + rows_y, cols_x + cols_y, entries)
                .expect("cone differential shape"),
        );
    }
    let complex = if hi < lo {
        FreeComplex::zero(ring)
    } else {
        FreeComplex::new(ring, lo, ranks, diffs).expect("cone square vanishes")
    };

    // include Y into the second block
    let mut inc = BTreeMap::new();
    for i in y.lo()..=y.hi() {
        let rows = complex.rank(i);
        let cols = y.rank(i);
        let off = x.rank(i - 1);
        let mut entries = vec![vec![Poly::zero(ring); cols]; rows];
        for c in 0..cols {
            entries[off + c][c] = Poly::one(ring);
        }
        inc.insert(i, FreeMap::new(ring, rows, cols, entries).expect("inclusion shape"));
    }
    let include_target =
        ChainMap::new(y.clone(), complex.clone(), inc).expect("target inclusion is a chain map");

    // project onto the first block, landing in the shifted source
    let mut proj = BTreeMap::new();
    for i in sx.lo()..=sx.hi() {
        let rows = sx.rank(i);
        let cols = complex.rank(i);
        let mut entries = vec![vec![Poly::zero(ring); cols]; rows];
        for r in 0..rows {
            entries[r][r] = Poly::one(ring);
        }
        proj.insert(i, FreeMap::new(ring, rows, cols, entries).expect("projection shape"));
    }
    let project_source =
        ChainMap::new(complex.clone(), sx, proj).expect("source projection is a chain map");

    Cone { complex, include_target, project_source }
}

// --- Hom complexes ------------------------------------------------------------

/// Degree window outside which `Hom(X, Y)` is structurally zero.
pub fn hom_window(x: &FreeComplex, y: &FreeComplex) -> Option<(i64, i64)> {
    if x.is_empty() || y.is_empty() {
        return None;
    }
    Some((y.lo() - x.hi(), y.hi() - x.lo()))
}

/// Blocks of `Hom(X, Y)_n`: `(i, r_X(i), r_Y(i+n), offset)` in ascending `i`.
fn hom_blocks(x: &FreeComplex, y: &FreeComplex, n: i64) -> Vec<(i64, usize, usize, usize)> {
    let mut out = Vec::new();
    let mut offset = 0;
    for i in x.lo()..=x.hi() {
        let rx = x.rank(i);
        let ry = y.rank(i + n);
        out.push((i, rx, ry, offset));
        offset += rx * ry;
    }
    out
}

pub fn hom_rank(x: &FreeComplex, y: &FreeComplex, n: i64) -> usize {
    hom_blocks(x, y, n).iter().map(|(_, rx, ry, _)| rx * ry).sum()
}

/// Flatten a degree-`n` family `f_i : X_i -> Y_{i+n}` into coordinates.
pub fn hom_flatten(
    x: &FreeComplex,
    y: &FreeComplex,
    n: i64,
    comps: &BTreeMap<i64, FreeMap>,
) -> Vec<Poly> {
    let ring = x.ring();
    let mut out = vec![Poly::zero(ring); hom_rank(x, y, n)];
    for (i, rx, ry, offset) in hom_blocks(x, y, n) {
        if rx == 0 || ry == 0 {
            continue;
        }
        if let Some(m) = comps.get(&i) {
            for a in 0..ry {
                for b in 0..rx {
                    out[offset + a * rx + b] = m.entry(a, b).clone();
                }
            }
        }
    }
    out
}

/// Inverse of [`hom_flatten`].
pub fn hom_unflatten(
    x: &FreeComplex,
    y: &FreeComplex,
    n: i64,
    v: &[Poly],
) -> BTreeMap<i64, FreeMap> {
    let ring = x.ring();
    let mut out = BTreeMap::new();
    for (i, rx, ry, offset) in hom_blocks(x, y, n) {
        if rx == 0 || ry == 0 {
            continue;
        }
        let entries: Vec<Vec<Poly>> = (0..ry)
            .map(|a| (0..rx).map(|b| v[offset + a * rx + b].clone()).collect())
            .collect();
        out.insert(i, FreeMap::new(ring, ry, rx, entries).expect("block shape"));
    }
    out
}

/// The boundary `Hom_n -> Hom_{n-1}`, `D(f) = d_Y f - (-1)^n f d_X`.
pub fn hom_differential(x: &FreeComplex, y: &FreeComplex, n: i64) -> FreeMap {
    let ring = x.ring();
    let rows = hom_rank(x, y, n - 1);
    let cols = hom_rank(x, y, n);
    let mut entries = vec![vec![Poly::zero(ring); cols]; rows];
    let src_blocks = hom_blocks(x, y, n);
    let tgt_blocks = hom_blocks(x, y, n - 1);
    let tgt_offset: BTreeMap<i64, (usize, usize, usize)> = tgt_blocks
        .iter()
        .map(|(i, rx, ry, off)| (*i, (*rx, *ry, *off)))
        .collect();
    let sign = if n.rem_euclid(2) == 0 { -1i64 } else { 1 };
    for (i, rx, ry, off) in &src_blocks {
        if *rx == 0 || *ry == 0 {
            continue;
        }
        // post-composition with d_Y lands in block i
        let dy = y.differential(i + n);
        if let Some((trx, _try_, toff)) = tgt_offset.get(i) {
            debug_assert_eq!(*trx, *rx);
            for a2 in 0..dy.target_rank() {
                for a in 0..*ry {
                    if dy.entry(a2, a).is_zero() {
                        continue;
                    }
                    for b in 0..*rx {
                        let row = toff + a2 * rx + b;
                        let col = off + a * rx + b;
                        entries[row][col] = &entries[row][col] + dy.entry(a2, a);
                    }
                }
            }
        }
        // pre-composition with d_X lands in block i+1
        let dx = x.differential(i + 1);
        if let Some((trx, _try2, toff)) = tgt_offset.get(&(i + 1)) {
            debug_assert_eq!(*trx, x.rank(i + 1));
            for b in 0..*rx {
                for c in 0..dx.source_rank() {
                    if dx.entry(b, c).is_zero() {
                        continue;
                    }
                    for a in 0..*ry {
                        let row = toff + a * trx + c;
                        let col = off + a * rx + b;
                        let term = if sign == 1 {
                            dx.entry(b, c).clone()
                        } else {
                            -dx.entry(b, c)
                        };
                        entries[row][col] = &entries[row][col] + &term;
                    }
                }
            }
        }
    }
    FreeMap::new(ring, rows, cols, entries).expect("hom differential shape")
}

/// The total Hom complex as a [`FreeComplex`] over the structural window.
pub fn hom_complex(x: &FreeComplex, y: &FreeComplex) -> FreeComplex {
    let ring = x.ring();
    let Some((lo, hi)) = hom_window(x, y) else {
        return FreeComplex::zero(ring);
    };
    let ranks: Vec<usize> = (lo..=hi).map(|n| hom_rank(x, y, n)).collect();
    let diffs: Vec<FreeMap> = (lo + 1..=hi).map(|n| hom_differential(x, y, n)).collect();
    FreeComplex::new(ring, lo, ranks, diffs).expect("hom complex squares to zero")
}

// --- homology ------------------------------------------------------------------

pub struct HomologyData {
    pub presentation: ModulePresentation,
    /// columns embed the cycle generators into the degree-`i` module
    pub cycles: FreeMap,
    /// the incoming differential whose image is divided out
    pub boundaries: FreeMap,
}

/// `H_i(X) = ker d_i / im d_{i+1}` presented on the cycle generators.
pub fn homology_data(x: &FreeComplex, i: i64) -> HomologyData {
    let d_out = x.differential(i);
    let d_in = x.differential(i + 1);
    let cycles = syzygies(&d_out);
    let presentation = subquotient(&cycles, &d_in);
    HomologyData { presentation, cycles, boundaries: d_in }
}

pub fn homology(x: &FreeComplex, i: i64) -> ModulePresentation {
    homology_data(x, i).presentation
}

/// All homology of `Hom(G, M)` by degree: the graded Hom-module of the
/// pair, with zero components omitted.
pub fn graded_hom(g: &FreeComplex, m: &FreeComplex) -> GradedModule {
    let mut components = BTreeMap::new();
    if let Some((lo, hi)) = hom_window(g, m) {
        let hom = hom_complex(g, m);
        for n in lo..=hi {
            let h = homology(&hom, n);
            if !h.is_zero_module() {
                components.insert(n, h);
            }
        }
    }
    GradedModule { components }
}

/// Is `f` null-homotopic? Decides whether the flattened map is a boundary
/// in the Hom complex, i.e. whether `f = d_Y h + h d_X` has a solution.
pub fn is_nullhomotopic(f: &ChainMap) -> bool {
    let x = f.source();
    let y = f.target();
    if hom_rank(x, y, 0) == 0 {
        return true;
    }
    let flat = hom_flatten(x, y, 0, f.components());
    let boundary = hom_differential(x, y, 1);
    ImageBasis::new(&boundary).lift(&flat).is_some()
}
