//! Normalized multivariate polynomials over an exact field.
//!
//! A [`Poly`] is a strictly descending term list under its ring's monomial
//! order, with no zero coefficients and no duplicate exponent vectors; the
//! zero polynomial is the empty list. Text syntax for the CLI uses variables
//! `x0..x{n-1}` and the operators `+ - * ^` with integer (or `a/b` rational)
//! coefficients, e.g. `x0^2*x1 + 3*x1 - 1`.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num::BigInt;

use crate::error::{Error, Result};
use crate::ring::{cmp_expo, mono_mul, mono_total_degree, Coeff, RingSpec};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    ring: RingSpec,
    terms: Vec<(Coeff, Vec<u32>)>,
}

impl Poly {
    pub fn zero(ring: RingSpec) -> Self {
        Poly { ring, terms: Vec::new() }
    }

    pub fn one(ring: RingSpec) -> Self {
        Poly::constant(ring, 1)
    }

    pub fn constant(ring: RingSpec, value: i64) -> Self {
        let c = ring.coeff_from_i64(value);
        if c.is_zero() {
            return Poly::zero(ring);
        }
        Poly { ring, terms: vec![(c, vec![0; ring.num_vars])] }
    }

    pub fn var(ring: RingSpec, index: usize) -> Result<Self> {
        if index >= ring.num_vars {
            return Err(Error::InvalidInput(format!(
                "variable x{index} out of range for {} variables",
                ring.num_vars
            )));
        }
        let mut e = vec![0u32; ring.num_vars];
        e[index] = 1;
        Ok(Poly { ring, terms: vec![(ring.coeff_one(), e)] })
    }

    pub fn monomial(ring: RingSpec, coeff: Coeff, expo: Vec<u32>) -> Result<Self> {
        Poly::from_terms(ring, vec![(coeff, expo)])
    }

    /// Build from arbitrary terms: validates exponent lengths, merges
    /// duplicates, drops zeros and sorts strictly descending.
    pub fn from_terms(ring: RingSpec, terms: Vec<(Coeff, Vec<u32>)>) -> Result<Self> {
        for (_, e) in &terms {
            if e.len() != ring.num_vars {
                return Err(Error::InvalidInput(format!(
                    "exponent vector of length {} in a ring with {} variables",
                    e.len(),
                    ring.num_vars
                )));
            }
        }
        Ok(Self::normalized(ring, terms))
    }

    fn normalized(ring: RingSpec, mut terms: Vec<(Coeff, Vec<u32>)>) -> Self {
        terms.sort_by(|a, b| cmp_expo(&b.1, &a.1, ring.order));
        let mut out: Vec<(Coeff, Vec<u32>)> = Vec::with_capacity(terms.len());
        for (c, e) in terms {
            match out.last_mut() {
                Some((lc, le)) if *le == e => {
                    *lc = ring.coeff_add(lc, &c);
                }
                _ => out.push((c, e)),
            }
        }
        out.retain(|(c, _)| !c.is_zero());
        Poly { ring, terms: out }
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn terms(&self) -> &[(Coeff, Vec<u32>)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms[0].0.is_one()
            && self.terms[0].1.iter().all(|&e| e == 0)
    }

    /// A single nonzero constant term, i.e. a unit of the polynomial ring.
    pub fn is_nonzero_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1.iter().all(|&e| e == 0)
    }

    pub fn leading(&self) -> Option<(&Coeff, &[u32])> {
        self.terms.first().map(|(c, e)| (c, e.as_slice()))
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.iter().map(|(_, e)| mono_total_degree(e)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.iter().map(|(_, e)| mono_total_degree(e));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    fn assert_same_ring(&self, other: &Poly) {
        assert_eq!(self.ring, other.ring, "operands over different rings");
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check_ring(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_ring(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_ring(other)?;
        Ok(self * other)
    }

    fn check_ring(&self, other: &Poly) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::InvalidInput("operands over different rings".into()));
        }
        Ok(())
    }

    pub fn scale(&self, c: &Coeff) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.ring);
        }
        Poly {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(a, e)| (self.ring.coeff_mul(a, c), e.clone()))
                .filter(|(a, _)| !a.is_zero())
                .collect(),
        }
    }

    /// `self * c * x^expo`; term order is preserved by monomial shifts.
    pub fn mul_term(&self, c: &Coeff, expo: &[u32]) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.ring);
        }
        Poly {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(a, e)| (self.ring.coeff_mul(a, c), mono_mul(e, expo)))
                .filter(|(a, _)| !a.is_zero())
                .collect(),
        }
    }

    /// `self + c * x^expo * q`, the division-step workhorse.
    pub fn addmul_term(&self, c: &Coeff, expo: &[u32], q: &Poly) -> Poly {
        self + &q.mul_term(c, expo)
    }

    pub fn pow(&self, mut k: u32) -> Poly {
        let mut acc = Poly::one(self.ring);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Divide every coefficient by the leading one.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some((c, _)) => self.scale(&self.ring.coeff_inv(c)),
        }
    }

    /// Substitute `args[i]` for variable `i`. All args must share one ring
    /// (which may differ from `self.ring` in variable count but not in
    /// characteristic); used by test oracles.
    pub fn substitute(&self, target: RingSpec, args: &[Poly]) -> Result<Poly> {
        if args.len() != self.ring.num_vars {
            return Err(Error::InvalidInput("substitution arity mismatch".into()));
        }
        if target.characteristic != self.ring.characteristic {
            return Err(Error::InvalidInput("substitution across characteristics".into()));
        }
        let mut acc = Poly::zero(target);
        for (c, e) in &self.terms {
            let mut t = Poly::from_terms(target, vec![(c.clone(), vec![0; target.num_vars])])?;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = &t * &args[i].pow(k);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Drop the leading term. Used by normal-form loops.
    pub(crate) fn pop_leading(&mut self) -> Option<(Coeff, Vec<u32>)> {
        if self.terms.is_empty() {
            None
        } else {
            Some(self.terms.remove(0))
        }
    }

    /// Append a term strictly smaller than everything present. The caller
    /// guarantees the order; normal-form loops emit terms in decreasing
    /// order, so this is just a push.
    pub(crate) fn push_term_unchecked(&mut self, c: Coeff, e: Vec<u32>) {
        debug_assert!(self
            .terms
            .last()
            .map(|(_, le)| cmp_expo(le, &e, self.ring.order) == Ordering::Greater)
            .unwrap_or(true));
        self.terms.push((c, e));
    }

    pub fn parse(ring: RingSpec, input: &str) -> Result<Poly> {
        Parser::new(ring, input)?.parse()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.assert_same_ring(rhs);
        let order = self.ring.order;
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < rhs.terms.len() {
            let (a, ea) = &self.terms[i];
            let (b, eb) = &rhs.terms[j];
            match cmp_expo(ea, eb, order) {
                Ordering::Greater => {
                    out.push((a.clone(), ea.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b.clone(), eb.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.ring.coeff_add(a, b);
                    if !c.is_zero() {
                        out.push((c, ea.clone()));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(rhs.terms[j..].iter().cloned());
        Poly { ring: self.ring, terms: out }
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(c, e)| (self.ring.coeff_neg(c), e.clone()))
                .collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.assert_same_ring(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.ring);
        }
        let mut acc = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (a, ea) in &self.terms {
            for (b, eb) in &rhs.terms {
                acc.push((self.ring.coeff_mul(a, b), mono_mul(ea, eb)));
            }
        }
        Poly::normalized(self.ring, acc)
    }
}

impl std::fmt::Display for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (c, e)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let c = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !c.is_one() || e.iter().all(|&x| x == 0) {
                factors.push(c.to_string());
            }
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(format!("x{i}")),
                    _ => factors.push(format!("x{i}^{k}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// A ring element together with its internal degree `|x|`. The concrete
/// instantiation keeps everything in degree 0; the field exists so that
/// sequences and certificates record it explicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    pub value: Poly,
    pub degree: i64,
}

impl AlgebraElement {
    pub fn new(value: Poly, degree: i64) -> Self {
        AlgebraElement { value, degree }
    }

    pub fn in_degree_zero(value: Poly) -> Self {
        AlgebraElement { value, degree: 0 }
    }
}

// --- parser ------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

struct Parser {
    ring: RingSpec,
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(ring: RingSpec, input: &str) -> Result<Self> {
        let mut tokens = Vec::new();
        let chars: Vec<char> = input.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            match c {
                ' ' | '\t' | '\n' | '\r' => i += 1,
                '+' => {
                    tokens.push(Token::Plus);
                    i += 1;
                }
                '-' => {
                    tokens.push(Token::Minus);
                    i += 1;
                }
                '*' => {
                    tokens.push(Token::Star);
                    i += 1;
                }
                '^' => {
                    tokens.push(Token::Caret);
                    i += 1;
                }
                '/' => {
                    tokens.push(Token::Slash);
                    i += 1;
                }
                '(' => {
                    tokens.push(Token::LParen);
                    i += 1;
                }
                ')' => {
                    tokens.push(Token::RParen);
                    i += 1;
                }
                '0'..='9' => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let s: String = chars[start..i].iter().collect();
                    let n = s
                        .parse::<BigInt>()
                        .map_err(|e| Error::Parse(format!("bad integer {s}: {e}")))?;
                    tokens.push(Token::Int(n));
                }
                'x' => {
                    let start = i + 1;
                    let mut j = start;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j == start {
                        return Err(Error::Parse("variable without index; use x0, x1, ...".into()));
                    }
                    let s: String = chars[start..j].iter().collect();
                    let idx = s
                        .parse::<usize>()
                        .map_err(|e| Error::Parse(format!("bad variable index {s}: {e}")))?;
                    if idx >= ring.num_vars {
                        return Err(Error::Parse(format!(
                            "variable x{idx} out of range for {} variables",
                            ring.num_vars
                        )));
                    }
                    tokens.push(Token::Var(idx));
                    i = j;
                }
                other => return Err(Error::Parse(format!("unexpected character '{other}'"))),
            }
        }
        Ok(Parser { ring, tokens, pos: 0 })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn parse(mut self) -> Result<Poly> {
        let p = self.expr()?;
        if self.pos != self.tokens.len() {
            return Err(Error::Parse("trailing input after polynomial".into()));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while let Some(tok) = self.peek() {
            match tok {
                Token::Plus => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Token::Minus => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while let Some(Token::Star) = self.peek() {
            self.bump();
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.primary()?;
        if let Some(Token::Caret) = self.peek() {
            self.bump();
            match self.bump() {
                Some(Token::Int(n)) => {
                    let e = n
                        .to_string()
                        .parse::<u32>()
                        .map_err(|_| Error::Parse("exponent must be a small natural".into()))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(Error::Parse("expected integer exponent after '^'".into())),
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Poly> {
        match self.bump() {
            Some(Token::Int(n)) => {
                // optional rational literal a/b
                if let Some(Token::Slash) = self.peek() {
                    self.bump();
                    match self.bump() {
                        Some(Token::Int(d)) => {
                            let num = self.ring.coeff_from_bigint(&n);
                            let den = self.ring.coeff_from_bigint(&d);
                            if den.is_zero() {
                                return Err(Error::Parse("division by zero in coefficient".into()));
                            }
                            let c = self.ring.coeff_mul(&num, &self.ring.coeff_inv(&den));
                            return Poly::from_terms(
                                self.ring,
                                vec![(c, vec![0; self.ring.num_vars])],
                            );
                        }
                        _ => return Err(Error::Parse("expected integer after '/'".into())),
                    }
                }
                Poly::from_terms(
                    self.ring,
                    vec![(self.ring.coeff_from_bigint(&n), vec![0; self.ring.num_vars])],
                )
            }
            Some(Token::Var(i)) => Poly::var(self.ring, i),
            Some(Token::Minus) => Ok(-&self.factor()?),
            Some(Token::Plus) => self.factor(),
            Some(Token::LParen) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(e),
                    _ => Err(Error::Parse("missing ')'".into())),
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}
