//! The branch divisor of a section and the foliation it induces.

use super::{show_form, ProjectiveTriple, Section};
use crate::error::{Error, Result};
use crate::expr::{gcd, lcm, squarefree_decompose, FactorList, Polynomial, RationalFunction};
use crate::forms::OneForm;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchReport {
    /// `σ*Ω` before any simplification.
    pub pullback: OneForm,
    /// Codimension-one zeros removed from the cleared form, with
    /// multiplicities.
    pub branch: FactorList,
    /// Polynomial 1-form with coprime coefficients defining `σ*ℋ`.
    pub foliation: OneForm,
}

impl BranchReport {
    pub fn contains(&self, f: &Polynomial) -> bool {
        self.branch.position(f).is_some()
    }

    pub fn describe_foliation(&self, t: &ProjectiveTriple) -> String {
        show_form(&self.foliation, t.vars())
    }
}

/// `σ*Ω = s₁ds₂ − s₂ds₁ + αs₁² + βs₁s₂ + γs₂²`.
pub fn section_pullback(t: &ProjectiveTriple, sigma: &Section) -> OneForm {
    let [s1, s2] = sigma.as_rf();
    let ds1 = OneForm::differential(&s1);
    let ds2 = OneForm::differential(&s2);
    let mut w = &ds2.mul(&s1) - &ds1.mul(&s2);
    w = &w + &t.alpha().mul(&(&s1 * &s1));
    w = &w + &t.beta().mul(&(&s1 * &s2));
    &w + &t.gamma().mul(&(&s2 * &s2))
}

pub fn branch_divisor(t: &ProjectiveTriple, sigma: &Section) -> Result<BranchReport> {
    if sigma.nvars() != t.nvars() {
        return Err(Error::Contract("section lives on a different chart".into()));
    }
    let w = section_pullback(t, sigma);
    if w.is_zero() {
        return Err(Error::Contract(
            "section is invariant (its pullback of the Riccati form vanishes)".into(),
        ));
    }
    let n = t.nvars();
    let den = w
        .coeffs()
        .iter()
        .fold(Polynomial::one(n), |acc, c| lcm(&acc, c.denominator()));
    let polys: Vec<Polynomial> = w
        .coeffs()
        .iter()
        .map(|c| c.mul_poly(&den).numerator().clone())
        .collect();
    let g = polys
        .iter()
        .fold(Polynomial::zero(n), |acc, p| gcd(&acc, p));
    let foliation = OneForm::new(
        polys
            .iter()
            .map(|p| RationalFunction::from_poly(p.div_exact(&g).expect("gcd divides")))
            .collect(),
    );
    let foliation = normalize_form(foliation);
    let branch = if g.is_constant() {
        FactorList::default()
    } else {
        squarefree_decompose(&g)?
    };
    Ok(BranchReport {
        pullback: w,
        branch,
        foliation,
    })
}

/// Scale a polynomial form to coprime integer coefficients, the first
/// nonzero entry having positive leading coefficient.
fn normalize_form(w: OneForm) -> OneForm {
    use num::{BigInt, BigRational, Integer, Signed, Zero};
    let mut l = BigInt::from(1);
    for c in w.coeffs() {
        l = l.lcm(&c.numerator().denominator_lcm());
    }
    let mut g = BigInt::zero();
    for c in w.coeffs() {
        for (_, a) in c.numerator().terms() {
            g = g.gcd(&(a.numer() * (&l / a.denom())));
        }
    }
    if g.is_zero() {
        return w;
    }
    let mut s = BigRational::new(l, g);
    if let Some(c) = w.coeffs().iter().find(|c| !c.is_zero()) {
        if c.numerator().leading_coefficient().is_negative() {
            s = -s;
        }
    }
    w.scale(&s)
}
