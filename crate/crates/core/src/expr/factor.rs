//! Squarefree and coprime decompositions. Irreducibility is never
//! certified: factor lists are declared by callers and validated here.

use serde::{Deserialize, Serialize};

use super::gcd::{content_in, gcd};
use super::poly::Polynomial;
use super::rational::RationalFunction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub poly: Polynomial,
    pub multiplicity: u32,
}

/// Pairwise coprime, squarefree, non-constant factors with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FactorList {
    pub factors: Vec<Factor>,
}

impl FactorList {
    pub fn new(factors: Vec<Factor>) -> Self {
        FactorList { factors }
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Factor> {
        self.factors.iter()
    }

    pub fn product(&self, nvars: usize) -> Polynomial {
        self.factors.iter().fold(Polynomial::one(nvars), |acc, f| {
            &acc * &f.poly.pow(f.multiplicity)
        })
    }

    pub fn position(&self, p: &Polynomial) -> Option<usize> {
        let m = p.monic();
        self.factors.iter().position(|f| f.poly == m)
    }

    /// Sort factors by canonical (grlex of leading term, then full) order.
    pub fn sorted(mut self) -> Self {
        self.factors.sort_by(|a, b| canonical_cmp(&a.poly, &b.poly));
        self
    }

    /// Check non-constancy, squarefreeness and pairwise coprimality.
    pub fn validate(&self) -> Result<()> {
        for (i, f) in self.factors.iter().enumerate() {
            if f.poly.is_constant() {
                return Err(Error::Contract("declared factor is constant".into()));
            }
            if f.multiplicity == 0 {
                return Err(Error::Contract(
                    "declared multiplicity must be positive".into(),
                ));
            }
            if !is_squarefree(&f.poly) {
                return Err(Error::Contract(format!(
                    "declared factor #{i} is not squarefree"
                )));
            }
            for g in &self.factors[..i] {
                if !gcd(&f.poly, &g.poly).is_constant() {
                    return Err(Error::Contract(format!(
                        "declared factor #{i} is not coprime to an earlier factor"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Whether `target` equals the product up to a nonzero constant.
    pub fn matches(&self, target: &Polynomial) -> bool {
        !target.is_zero() && self.product(target.nvars()).monic() == target.monic()
    }
}

pub fn canonical_cmp(a: &Polynomial, b: &Polynomial) -> std::cmp::Ordering {
    let ka: Vec<_> = a.terms().rev().collect();
    let kb: Vec<_> = b.terms().rev().collect();
    for (x, y) in ka.iter().zip(&kb) {
        let o = x.0.cmp(y.0).then_with(|| x.1.cmp(y.1));
        if o != std::cmp::Ordering::Equal {
            return o;
        }
    }
    ka.len().cmp(&kb.len())
}

pub fn is_squarefree(p: &Polynomial) -> bool {
    squarefree_decompose(p)
        .map(|l| l.factors.iter().all(|f| f.multiplicity == 1))
        .unwrap_or(false)
}

/// Squarefree decomposition `p = c · ∏ fᵢ^mᵢ` (Yun's algorithm in each
/// variable, recursing on contents).
pub fn squarefree_decompose(p: &Polynomial) -> Result<FactorList> {
    if p.is_zero() {
        return Err(Error::Contract("squarefree decomposition of zero".into()));
    }
    let mut out = Vec::new();
    sqf_rec(&p.monic(), &mut out);
    let list = FactorList::new(out).sorted();
    Ok(list)
}

fn sqf_rec(p: &Polynomial, out: &mut Vec<Factor>) {
    if p.is_constant() {
        return;
    }
    let v = p.active_vars()[0];
    let cont = content_in(p, v);
    let prim = p.div_exact(&cont).expect("content divides").monic();
    yun(&prim, v, out);
    sqf_rec(&cont, out);
}

fn yun(a: &Polynomial, v: usize, out: &mut Vec<Factor>) {
    if a.is_constant() {
        return;
    }
    let da = a.derivative(v);
    let g = gcd(a, &da);
    let mut b = a.div_exact(&g).expect("gcd divides");
    let mut c = da.div_exact(&g).expect("gcd divides");
    let mut d = &c - &b.derivative(v);
    let mut i = 1u32;
    while !b.is_constant() {
        let ai = gcd(&b, &d);
        b = b.div_exact(&ai).expect("gcd divides");
        c = d.div_exact(&ai).expect("gcd divides");
        d = &c - &b.derivative(v);
        if !ai.is_constant() {
            out.push(Factor {
                poly: ai.monic(),
                multiplicity: i,
            });
        }
        i += 1;
    }
}

/// Squarefree part (product of the distinct squarefree factors).
pub fn squarefree_part(p: &Polynomial) -> Result<Polynomial> {
    let l = squarefree_decompose(p)?;
    Ok(l.factors
        .iter()
        .fold(Polynomial::one(p.nvars()), |acc, f| &acc * &f.poly))
}

/// Refine a list of squarefree polynomials into a pairwise coprime basis
/// such that each input is a product of basis elements.
pub fn coprime_basis(polys: &[Polynomial]) -> Vec<Polynomial> {
    let mut basis: Vec<Polynomial> = Vec::new();
    for p in polys {
        if p.is_constant() {
            continue;
        }
        let mut pending = vec![p.monic()];
        while let Some(mut q) = pending.pop() {
            if q.is_constant() {
                continue;
            }
            let mut i = 0;
            while i < basis.len() {
                let g = gcd(&q, &basis[i]);
                if g.is_constant() {
                    i += 1;
                    continue;
                }
                let b = basis.remove(i);
                let br = b.div_exact(&g).unwrap();
                let qr = q.div_exact(&g).unwrap();
                pending.push(br);
                pending.push(g);
                q = qr;
                if q.is_constant() {
                    break;
                }
                i = 0;
            }
            if !q.is_constant() {
                basis.push(q.monic());
            }
        }
    }
    basis.sort_by(canonical_cmp);
    basis
}

/// Largest `m` with `f^m` dividing the denominator of `r`.
pub fn pole_order(r: &RationalFunction, f: &Polynomial) -> Result<u32> {
    if f.is_constant() {
        return Err(Error::Contract("pole order along a constant".into()));
    }
    Ok(multiplicity_in(r.denominator(), f))
}

/// Largest `m` with `f^m` dividing the numerator of `r` (∞ for zero).
pub fn zero_order(r: &RationalFunction, f: &Polynomial) -> Result<Option<u32>> {
    if f.is_constant() {
        return Err(Error::Contract("zero order along a constant".into()));
    }
    if r.is_zero() {
        return Ok(None);
    }
    Ok(Some(multiplicity_in(r.numerator(), f)))
}

pub fn multiplicity_in(p: &Polynomial, f: &Polynomial) -> u32 {
    let mut m = 0;
    let mut q = p.clone();
    while !q.is_zero() {
        match q.div_exact(f) {
            Some(next) => {
                m += 1;
                q = next;
            }
            None => break,
        }
    }
    m
}

/// Wire form `{ "factor": "<expr>", "multiplicity": n }`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FactorDoc {
    pub factor: String,
    #[serde(default = "one_u32")]
    pub multiplicity: u32,
}

fn one_u32() -> u32 {
    1
}
