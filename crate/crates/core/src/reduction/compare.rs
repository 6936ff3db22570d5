//! Comparison of normal forms: necessary invariants, then a bounded search
//! for a gauge witness by linear algebra.

use num::{BigRational, One, Zero};
use serde::Serialize;

use super::{is_normal_form, ReduceOptions};
use crate::error::{Error, Result};
use crate::expr::{lcm, Monomial, Polynomial, QuadraticNumber, RationalFunction};
use crate::triple::{component_data, FormMat2, Mat2, ProjectiveTriple, Section};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentInvariants {
    pub component: Polynomial,
    pub k: u32,
    pub invariant: bool,
    pub section_count: usize,
    pub exponents: Option<[QuadraticNumber; 2]>,
}

impl ComponentInvariants {
    fn same(&self, o: &ComponentInvariants) -> bool {
        let exps = match (&self.exponents, &o.exponents) {
            (None, None) => true,
            (Some([a, b]), Some([c, d])) => (a == c && b == d) || (a == d && b == c),
            _ => false,
        };
        self.component == o.component
            && self.k == o.k
            && self.invariant == o.invariant
            && self.section_count == o.section_count
            && exps
    }
}

/// Per-component data preserved by bundle isomorphisms.
pub fn normal_form_invariants(t: &ProjectiveTriple) -> Result<Vec<ComponentInvariants>> {
    t.polar_divisor()
        .components
        .iter()
        .map(|c| {
            let cd = component_data(t, &c.component)?;
            Ok(ComponentInvariants {
                component: c.component.clone(),
                k: c.k,
                invariant: cd.invariant,
                section_count: cd.section_count,
                exponents: cd.exponents,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Isomorphic,
    Distinct,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub verdict: Verdict,
    /// `M` with `M·A₁·M⁻¹ − dM·M⁻¹ = A₂`.
    pub witness: Option<Mat2>,
    /// Whether the witness also carries `σ₁` to `σ₂`.
    pub maps_section: bool,
    pub reason: String,
}

/// Compare two normal forms, searching polynomial witnesses of degree
/// `≤ max_degree`.
pub fn compare_normal_forms(
    t1: &ProjectiveTriple,
    t2: &ProjectiveTriple,
    s1: &Section,
    s2: &Section,
    max_degree: u32,
) -> Result<Comparison> {
    if t1.vars() != t2.vars() {
        return Err(Error::Contract("triples live on different charts".into()));
    }
    let opts = ReduceOptions::default();
    for (t, s) in [(t1, s1), (t2, s2)] {
        if !is_normal_form(t, s, opts)? {
            return Err(Error::Contract("input is not in normal form".into()));
        }
    }
    let distinct = |reason: &str| Comparison {
        verdict: Verdict::Distinct,
        witness: None,
        maps_section: false,
        reason: reason.into(),
    };
    if t1.polar_divisor() != t2.polar_divisor() {
        return Ok(distinct("polar divisors differ"));
    }
    let (i1, i2) = (normal_form_invariants(t1)?, normal_form_invariants(t2)?);
    if i1.len() != i2.len() || i1.iter().zip(&i2).any(|(a, b)| !a.same(b)) {
        return Ok(distinct("component invariants differ"));
    }
    for d in 0..=max_degree {
        for with_section in [true, false] {
            let section = with_section.then_some((s1, s2));
            if let Some(m) = find_witness(t1, t2, d, section)? {
                return Ok(Comparison {
                    verdict: Verdict::Isomorphic,
                    witness: Some(m),
                    maps_section: with_section,
                    reason: format!("polynomial witness of degree {d}"),
                });
            }
        }
    }
    Ok(Comparison {
        verdict: Verdict::Inconclusive,
        witness: None,
        maps_section: false,
        reason: format!("invariants agree; no witness of degree <= {max_degree}"),
    })
}

fn monomials(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if cur.len() == n {
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

fn find_witness(
    t1: &ProjectiveTriple,
    t2: &ProjectiveTriple,
    d: u32,
    section: Option<(&Section, &Section)>,
) -> Result<Option<Mat2>> {
    let n = t1.nvars();
    let (a1, a2) = (t1.connection(), t2.connection());
    let monos = monomials(n, d);
    let mut basis: Vec<Mat2> = Vec::new();
    for e in 0..4 {
        for m in &monos {
            let mut mat = Mat2::new(
                RationalFunction::zero(n),
                RationalFunction::zero(n),
                RationalFunction::zero(n),
                RationalFunction::zero(n),
            );
            mat.e[e / 2][e % 2] = Polynomial::monomial(m.clone(), BigRational::one()).into();
            basis.push(mat);
        }
    }
    // Residual M·A₁ − A₂·M − dM for each basis matrix.
    let residuals: Vec<FormMat2> = basis
        .iter()
        .map(|b| {
            FormMat2::left_mul(b, &a1)
                .sub(&FormMat2::right_mul(&a2, b))
                .sub(&b.differential())
        })
        .collect();
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            for l in 0..n {
                let coeffs: Vec<RationalFunction> = residuals
                    .iter()
                    .map(|r| r.e[i][j].coeff(l).clone())
                    .collect();
                push_rows(&mut rows, &coeffs);
            }
        }
    }
    if let Some((s1, s2)) = section {
        let [p, q] = s1.as_rf();
        let [u, v] = s2.as_rf();
        let coeffs: Vec<RationalFunction> = basis
            .iter()
            .map(|b| {
                let [x, y] = b.apply(&[p.clone(), q.clone()]);
                &(&x * &v) - &(&y * &u)
            })
            .collect();
        push_rows(&mut rows, &coeffs);
    }
    let null = nullspace(rows, basis.len());
    let combine = |w: &[BigRational]| -> Mat2 {
        let mut m = Mat2::new(
            RationalFunction::zero(n),
            RationalFunction::zero(n),
            RationalFunction::zero(n),
            RationalFunction::zero(n),
        );
        for (c, b) in w.iter().zip(&basis) {
            if !c.is_zero() {
                for i in 0..2 {
                    for j in 0..2 {
                        m.e[i][j] = &m.e[i][j] + &b.e[i][j].scale(c);
                    }
                }
            }
        }
        m
    };
    let mut candidates: Vec<Vec<BigRational>> = null.clone();
    for p in 1..=6i64 {
        let mut w = vec![BigRational::zero(); basis.len()];
        for (i, v) in null.iter().enumerate() {
            let c = BigRational::from_integer(((i as i64 + 1) * p % 7 + p).into());
            for (wi, vi) in w.iter_mut().zip(v) {
                *wi += &c * vi;
            }
        }
        candidates.push(w);
    }
    for w in candidates {
        let m = combine(&w);
        if m.det().is_zero() {
            continue;
        }
        if t1.gauge_transform(&m)?.same_forms(t2) {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// Clear denominators of `Σ uₖ·coeffs[k]` and append one row per monomial.
fn push_rows(rows: &mut Vec<Vec<BigRational>>, coeffs: &[RationalFunction]) {
    let n = coeffs[0].nvars();
    let den = coeffs
        .iter()
        .fold(Polynomial::one(n), |acc, c| lcm(&acc, c.denominator()));
    let polys: Vec<Polynomial> = coeffs
        .iter()
        .map(|c| c.mul_poly(&den).numerator().clone())
        .collect();
    let mut monos: Vec<Monomial> = polys
        .iter()
        .flat_map(|p| p.terms().map(|(m, _)| m.clone()))
        .collect();
    monos.sort();
    monos.dedup();
    for m in monos {
        let row: Vec<BigRational> = polys
            .iter()
            .map(|p| {
                p.terms()
                    .find(|(pm, _)| **pm == m)
                    .map(|(_, c)| c.clone())
                    .unwrap_or_else(BigRational::zero)
            })
            .collect();
        rows.push(row);
    }
}

/// Basis of `{u : rows·u = 0}` by reduced row echelon form.
fn nullspace(mut rows: Vec<Vec<BigRational>>, ncols: usize) -> Vec<Vec<BigRational>> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![BigRational::zero(); ncols];
            v[fc] = BigRational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[i][fc].clone();
            }
            v
        })
        .collect()
}
