//! Ring descriptors, exact scalars, and monomial orders.
//!
//! A [`RingSpec`] fixes the coefficient field (a prime field `F_p` or the
//! rationals), the number of variables and the monomial order. It is a small
//! `Copy` value carried by every polynomial, so mismatched-ring bugs surface
//! immediately instead of producing garbage.

use std::cmp::Ordering;

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Supported monomial orders.
///
/// `Grevlex` compares total degree first and breaks ties at the last
/// differing exponent (the smaller exponent wins); `Lex` compares exponents
/// left to right with `x0 > x1 > ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    Grevlex,
    Lex,
}

impl std::fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MonomialOrder::Grevlex => write!(f, "grevlex"),
            MonomialOrder::Lex => write!(f, "lex"),
        }
    }
}

/// The standard computer-algebra prime used as the default characteristic.
pub const DEFAULT_PRIME: u64 = 32003;

/// Description of a polynomial ring `k[x0..x{n-1}]` with a fixed monomial
/// order, where `k` is `F_p` (`characteristic = p`) or `Q`
/// (`characteristic = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingSpec {
    pub characteristic: u64,
    pub num_vars: usize,
    pub order: MonomialOrder,
}

impl RingSpec {
    /// Validating constructor: the characteristic must be 0 or prime.
    pub fn new(characteristic: u64, num_vars: usize, order: MonomialOrder) -> Result<Self> {
        if characteristic != 0 && !is_prime_u64(characteristic) {
            return Err(Error::InvalidInput(format!(
                "characteristic {characteristic} is neither 0 nor prime"
            )));
        }
        Ok(RingSpec { characteristic, num_vars, order })
    }

    /// `F_p[x0..x{n-1}]` with the grevlex order.
    pub fn fp(p: u64, num_vars: usize) -> Result<Self> {
        Self::new(p, num_vars, MonomialOrder::Grevlex)
    }

    /// `Q[x0..x{n-1}]` with the grevlex order.
    pub fn rationals(num_vars: usize) -> Self {
        RingSpec { characteristic: 0, num_vars, order: MonomialOrder::Grevlex }
    }

    pub fn with_order(self, order: MonomialOrder) -> Self {
        RingSpec { order, ..self }
    }

    pub fn is_rational(&self) -> bool {
        self.characteristic == 0
    }

    // --- exact scalar arithmetic -------------------------------------------

    pub fn coeff_zero(&self) -> Coeff {
        if self.is_rational() { Coeff::Rat(BigRational::zero()) } else { Coeff::Fp(0) }
    }

    pub fn coeff_one(&self) -> Coeff {
        if self.is_rational() { Coeff::Rat(BigRational::one()) } else { Coeff::Fp(1 % self.characteristic.max(1)) }
    }

    pub fn coeff_from_i64(&self, v: i64) -> Coeff {
        if self.is_rational() {
            Coeff::Rat(BigRational::from(BigInt::from(v)))
        } else {
            let p = self.characteristic as i128;
            let r = ((v as i128 % p) + p) % p;
            Coeff::Fp(r as u64)
        }
    }

    pub fn coeff_from_bigint(&self, v: &BigInt) -> Coeff {
        if self.is_rational() {
            Coeff::Rat(BigRational::from(v.clone()))
        } else {
            let p = BigInt::from(self.characteristic);
            let r = v.mod_floor(&p);
            Coeff::Fp(r.to_u64().expect("reduced residue fits in u64"))
        }
    }

    pub fn coeff_add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (a, b) {
            (Coeff::Fp(x), Coeff::Fp(y)) => {
                let p = self.characteristic as u128;
                Coeff::Fp(((*x as u128 + *y as u128) % p) as u64)
            }
            (Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x + y),
            _ => panic!("mixed scalar kinds"),
        }
    }

    pub fn coeff_sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.coeff_add(a, &self.coeff_neg(b))
    }

    pub fn coeff_mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (a, b) {
            (Coeff::Fp(x), Coeff::Fp(y)) => {
                let p = self.characteristic as u128;
                Coeff::Fp(((*x as u128 * *y as u128) % p) as u64)
            }
            (Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x * y),
            _ => panic!("mixed scalar kinds"),
        }
    }

    pub fn coeff_neg(&self, a: &Coeff) -> Coeff {
        match a {
            Coeff::Fp(0) => Coeff::Fp(0),
            Coeff::Fp(x) => Coeff::Fp(self.characteristic - x),
            Coeff::Rat(x) => Coeff::Rat(-x),
        }
    }

    /// Multiplicative inverse. Panics on zero: callers only invert leading
    /// coefficients, which are nonzero by the normalization invariant.
    pub fn coeff_inv(&self, a: &Coeff) -> Coeff {
        match a {
            Coeff::Fp(x) => {
                assert!(*x != 0, "inverse of zero");
                Coeff::Fp(pow_mod(*x, self.characteristic - 2, self.characteristic))
            }
            Coeff::Rat(x) => {
                assert!(!x.is_zero(), "inverse of zero");
                Coeff::Rat(x.recip())
            }
        }
    }
}

/// An exact field element: a canonical residue mod p, or a reduced rational.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coeff {
    Fp(u64),
    Rat(BigRational),
}

impl Coeff {
    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Fp(x) => *x == 0,
            Coeff::Rat(x) => x.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Fp(x) => *x == 1,
            Coeff::Rat(x) => x.is_one(),
        }
    }

    /// True for rationals strictly below zero; prime-field residues are
    /// canonical and never negative.
    pub fn is_negative(&self) -> bool {
        match self {
            Coeff::Fp(_) => false,
            Coeff::Rat(x) => x.is_negative(),
        }
    }

    pub fn abs(&self) -> Coeff {
        match self {
            Coeff::Fp(x) => Coeff::Fp(*x),
            Coeff::Rat(x) => Coeff::Rat(x.abs()),
        }
    }
}

impl std::fmt::Display for Coeff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Coeff::Fp(x) => write!(f, "{x}"),
            Coeff::Rat(x) => write!(f, "{x}"),
        }
    }
}

fn pow_mod(base: u64, mut exp: u64, p: u64) -> u64 {
    let m = p as u128;
    let mut acc: u128 = 1;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Deterministic Miller-Rabin for u64.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// --- monomials -------------------------------------------------------------

pub fn mono_total_degree(a: &[u32]) -> u64 {
    a.iter().map(|&e| e as u64).sum()
}

pub fn mono_mul(a: &[u32], b: &[u32]) -> Vec<u32> {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| x.checked_add(*y).expect("exponent overflow"))
        .collect()
}

/// Does `d` divide `m`?
pub fn mono_divides(d: &[u32], m: &[u32]) -> bool {
    debug_assert_eq!(d.len(), m.len());
    d.iter().zip(m).all(|(x, y)| x <= y)
}

/// `m / d`; requires divisibility.
pub fn mono_quotient(m: &[u32], d: &[u32]) -> Vec<u32> {
    debug_assert!(mono_divides(d, m));
    m.iter().zip(d).map(|(x, y)| x - y).collect()
}

pub fn mono_lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// Order comparison for equal-length exponent vectors.
pub(crate) fn cmp_expo(a: &[u32], b: &[u32], order: MonomialOrder) -> Ordering {
    debug_assert_eq!(a.len(), b.len());
    match order {
        MonomialOrder::Lex => {
            for (x, y) in a.iter().zip(b) {
                match x.cmp(y) {
                    Ordering::Equal => continue,
                    other => return other,
                }
            }
            Ordering::Equal
        }
        MonomialOrder::Grevlex => {
            match mono_total_degree(a).cmp(&mono_total_degree(b)) {
                Ordering::Equal => {}
                other => return other,
            }
            for k in (0..a.len()).rev() {
                match a[k].cmp(&b[k]) {
                    Ordering::Equal => continue,
                    // smaller trailing exponent means the larger monomial
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                }
            }
            Ordering::Equal
        }
    }
}

/// Total-order comparison of two exponent vectors under `order`.
pub fn mono_compare(a: &[u32], b: &[u32], order: MonomialOrder) -> Result<Ordering> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput(format!(
            "exponent vectors of lengths {} and {} are not comparable",
            a.len(),
            b.len()
        )));
    }
    Ok(cmp_expo(a, b, order))
}

/// All exponent vectors in `num_vars` variables of total degree exactly `d`,
/// in a fixed deterministic order.
pub fn monomials_of_degree(num_vars: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; num_vars];
    fn rec(k: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k + 1 == cur.len() {
            cur[k] = rem;
            out.push(cur.clone());
            return;
        }
        for e in (0..=rem).rev() {
            cur[k] = e;
            rec(k + 1, rem - e, cur, out);
        }
    }
    if num_vars == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(0, d, &mut cur, &mut out);
    out
}

/// All exponent vectors of total degree at most `d`.
pub fn monomials_up_to(num_vars: usize, d: u32) -> Vec<Vec<u32>> {
    (0..=d).flat_map(|k| monomials_of_degree(num_vars, k)).collect()
}
