//! Projective triples `(α, β, γ)`: the Riccati form
//! `Ω = z₁dz₂ − z₂dz₁ + αz₁² + βz₁z₂ + γz₂²` on the trivial ℙ¹-bundle
//! over an affine chart.
//!
//! Integrability of `Ω` is `dα = α∧β`, `dβ = 2α∧γ`, `dγ = β∧γ`, which is
//! flatness of the trace-free connection
//!
//! ```text
//!     A = [ −β/2   −γ  ]
//!         [   α    β/2 ]
//! ```
//!
//! Horizontal sections of `Ω` are the projectivized solutions of
//! `dZ = −A·Z`; a gauge change `W = M·Z` therefore acts by
//! `A ↦ M A M⁻¹ − dM M⁻¹`, followed by removal of the trace.

pub mod branch;
pub mod component;
pub mod mat;

use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{
    coprime_basis, factor::canonical_cmp, gcd, squarefree_decompose, Factor, FactorList,
    Polynomial, RationalFunction, Vars,
};
use crate::forms::{OneForm, RationalMap, TwoForm};
use num::BigRational;

pub use branch::{branch_divisor, BranchReport};
pub use component::{component_data, component_invariant, ComponentData, Sections};
pub use mat::{FormMat2, Mat2};

/// An integrable projective triple with its declared pole components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectiveTriple {
    vars: Vars,
    alpha: OneForm,
    beta: OneForm,
    gamma: OneForm,
    poles: FactorList,
    integrable: bool,
}

/// Residuals of the three integrability relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegrabilityReport {
    pub ok: bool,
    /// `dα − α∧β`, `dβ − 2α∧γ`, `dγ − β∧γ`.
    pub residuals: [TwoForm; 3],
}

pub fn check_integrability(
    alpha: &OneForm,
    beta: &OneForm,
    gamma: &OneForm,
) -> IntegrabilityReport {
    let two = BigRational::from_integer(2.into());
    let r1 = &alpha.exterior_derivative() - &alpha.wedge(beta);
    let r2 = &beta.exterior_derivative() - &alpha.wedge(gamma).scale(&two);
    let r3 = &gamma.exterior_derivative() - &beta.wedge(gamma);
    let ok = r1.is_zero() && r2.is_zero() && r3.is_zero();
    IntegrabilityReport {
        ok,
        residuals: [r1, r2, r3],
    }
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

/// The connection matrix of a (not necessarily integrable) triple.
pub fn connection_matrix(alpha: &OneForm, beta: &OneForm, gamma: &OneForm) -> FormMat2 {
    let hb = beta.scale(&half());
    FormMat2 {
        e: [[-&hb, -gamma], [alpha.clone(), hb]],
    }
}

/// Read a triple back from a connection matrix, discarding its trace.
pub fn triple_of_connection(a: &FormMat2) -> (OneForm, OneForm, OneForm) {
    let alpha = a.e[1][0].clone();
    let beta = &a.e[1][1] - &a.e[0][0];
    let gamma = -&a.e[0][1];
    (alpha, beta, gamma)
}

/// One component of the polar divisor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarComponent {
    pub component: Polynomial,
    pub k: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolarDivisor {
    pub components: Vec<PolarComponent>,
}

impl PolarDivisor {
    /// `Σ k · deg f` in the chart.
    pub fn degree(&self) -> u32 {
        self.components
            .iter()
            .map(|c| c.k * c.component.total_degree().unwrap_or(0))
            .sum()
    }

    pub fn multiplicity(&self, f: &Polynomial) -> u32 {
        let m = f.monic();
        self.components
            .iter()
            .find(|c| c.component == m)
            .map(|c| c.k)
            .unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Whether `self − other` is effective.
    pub fn dominates(&self, other: &PolarDivisor) -> bool {
        other
            .components
            .iter()
            .all(|c| self.multiplicity(&c.component) >= c.k)
    }

    pub fn describe(&self, vars: &Vars) -> Vec<(String, u32)> {
        self.components
            .iter()
            .map(|c| (vars.show(&c.component), c.k))
            .collect()
    }
}

/// A meromorphic section `[s₁ : s₂]`, stored as coprime polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Section {
    s: [Polynomial; 2],
}

impl Section {
    pub fn new(s1: RationalFunction, s2: RationalFunction) -> Result<Self> {
        if s1.is_zero() && s2.is_zero() {
            return Err(Error::Contract("section [0:0] is undefined".into()));
        }
        let n = s1.nvars();
        let l = crate::expr::lcm(s1.denominator(), s2.denominator());
        let p1 = s1.mul_poly(&l);
        let p2 = s2.mul_poly(&l);
        let (p1, p2) = (p1.numerator().clone(), p2.numerator().clone());
        let g = gcd(&p1, &p2);
        let mut a = p1.div_exact(&g).unwrap_or_else(|| Polynomial::zero(n));
        let mut b = p2.div_exact(&g).unwrap_or_else(|| Polynomial::zero(n));
        let lead = if !a.is_zero() {
            a.leading_coefficient()
        } else {
            b.leading_coefficient()
        };
        let inv: BigRational = num::One::one();
        let inv = inv / lead;
        a = a.scale(&inv);
        b = b.scale(&inv);
        Ok(Section { s: [a, b] })
    }

    pub fn from_polys(s1: Polynomial, s2: Polynomial) -> Result<Self> {
        Self::new(s1.into(), s2.into())
    }

    /// `[1 : 0]`.
    pub fn zero_section(n: usize) -> Self {
        Section {
            s: [Polynomial::one(n), Polynomial::zero(n)],
        }
    }

    /// `[0 : 1]`.
    pub fn infinity_section(n: usize) -> Self {
        Section {
            s: [Polynomial::zero(n), Polynomial::one(n)],
        }
    }

    pub fn s1(&self) -> &Polynomial {
        &self.s[0]
    }

    pub fn s2(&self) -> &Polynomial {
        &self.s[1]
    }

    pub fn nvars(&self) -> usize {
        self.s[0].nvars()
    }

    pub fn as_rf(&self) -> [RationalFunction; 2] {
        [self.s[0].clone().into(), self.s[1].clone().into()]
    }

    /// `M · σ`.
    pub fn transform(&self, m: &Mat2) -> Result<Self> {
        let [a, b] = m.apply(&self.as_rf());
        Self::new(a, b)
    }

    pub fn describe(&self, vars: &Vars) -> String {
        format!("[{} : {}]", vars.show(&self.s[0]), vars.show(&self.s[1]))
    }

    pub fn remap(&self, nvars: usize, map: &[usize]) -> Self {
        Section {
            s: [self.s[0].remap(nvars, map), self.s[1].remap(nvars, map)],
        }
    }
}

/// `Ω` written in the two fiber charts `z = z₂/z₁` and `w = z₁/z₂`:
/// `Ω/z₁² = dz + α + βz + γz²` and `Ω/z₂² = −dw + αw² + βw + γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RiccatiForm {
    /// Coefficients of `1, z, z²` in the `z` chart.
    pub z_chart: [OneForm; 3],
    /// Coefficients of `1, w, w²` in the `w` chart.
    pub w_chart: [OneForm; 3],
}

impl RiccatiForm {
    pub fn display(&self, vars: &Vars) -> [String; 2] {
        let show = |w: &OneForm| show_form(w, vars);
        [
            format!(
                "dz + ({}) + ({})*z + ({})*z^2",
                show(&self.z_chart[0]),
                show(&self.z_chart[1]),
                show(&self.z_chart[2])
            ),
            format!(
                "-dw + ({}) + ({})*w + ({})*w^2",
                show(&self.w_chart[0]),
                show(&self.w_chart[1]),
                show(&self.w_chart[2])
            ),
        ]
    }
}

/// `a*dx + b*dy` style rendering.
pub fn show_form(w: &OneForm, vars: &Vars) -> String {
    let parts: Vec<String> = w
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| format!("({})*d{}", vars.show_rf(c), vars.names()[i]))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

impl ProjectiveTriple {
    /// Validate the declared poles, their coverage of every denominator and
    /// the integrability relations.
    pub fn new(
        vars: Vars,
        alpha: OneForm,
        beta: OneForm,
        gamma: OneForm,
        poles: FactorList,
    ) -> Result<Self> {
        let t = Self::raw(vars, alpha, beta, gamma, poles)?;
        if !t.integrable {
            return Err(Error::Contract("triple is not integrable".into()));
        }
        Ok(t)
    }

    /// Like [`ProjectiveTriple::new`] without requiring integrability; such
    /// triples support the analysis operations only.
    pub fn raw(
        vars: Vars,
        alpha: OneForm,
        beta: OneForm,
        gamma: OneForm,
        poles: FactorList,
    ) -> Result<Self> {
        let n = vars.len();
        if [&alpha, &beta, &gamma].iter().any(|w| w.nvars() != n) {
            return Err(Error::Contract(
                "forms must live on the declared chart".into(),
            ));
        }
        if poles.iter().any(|f| f.poly.nvars() != n) {
            return Err(Error::Contract(
                "pole factors must live on the declared chart".into(),
            ));
        }
        poles.validate()?;
        let integrable = check_integrability(&alpha, &beta, &gamma).ok;
        let t = ProjectiveTriple {
            vars,
            alpha,
            beta,
            gamma,
            poles: poles.sorted(),
            integrable,
        };
        t.check_coverage()?;
        Ok(t)
    }

    /// Build a triple whose pole components are the squarefree, coprime
    /// refinement of its denominators (not certified irreducible).
    pub fn with_inferred_poles(
        vars: Vars,
        alpha: OneForm,
        beta: OneForm,
        gamma: OneForm,
    ) -> Result<Self> {
        let poles = infer_poles(&[], &[&alpha, &beta, &gamma]);
        Self::new(vars, alpha, beta, gamma, poles)
    }

    /// The zero triple `(0, 0, 0)`.
    pub fn trivial(vars: Vars) -> Self {
        let n = vars.len();
        ProjectiveTriple {
            vars,
            alpha: OneForm::zero(n),
            beta: OneForm::zero(n),
            gamma: OneForm::zero(n),
            poles: FactorList::default(),
            integrable: true,
        }
    }

    fn check_coverage(&self) -> Result<()> {
        let n = self.nvars();
        let prod = self.poles.product(n);
        for w in [&self.alpha, &self.beta, &self.gamma] {
            for d in w.denominators() {
                if !d.divides(&prod) {
                    return Err(Error::Contract(format!(
                        "denominator {} is not covered by the declared poles",
                        self.vars.show(d)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn alpha(&self) -> &OneForm {
        &self.alpha
    }

    pub fn beta(&self) -> &OneForm {
        &self.beta
    }

    pub fn gamma(&self) -> &OneForm {
        &self.gamma
    }

    pub fn forms(&self) -> [&OneForm; 3] {
        [&self.alpha, &self.beta, &self.gamma]
    }

    pub fn declared_poles(&self) -> &FactorList {
        &self.poles
    }

    pub fn is_integrable(&self) -> bool {
        self.integrable
    }

    /// Error unless the triple is integrable.
    pub fn require_integrable(&self) -> Result<()> {
        if self.integrable {
            Ok(())
        } else {
            Err(Error::Contract(
                "operation requires an integrable triple".into(),
            ))
        }
    }

    pub fn integrability(&self) -> IntegrabilityReport {
        check_integrability(&self.alpha, &self.beta, &self.gamma)
    }

    pub fn connection(&self) -> FormMat2 {
        connection_matrix(&self.alpha, &self.beta, &self.gamma)
    }

    pub fn riccati_form(&self) -> RiccatiForm {
        RiccatiForm {
            z_chart: [self.alpha.clone(), self.beta.clone(), self.gamma.clone()],
            w_chart: [self.gamma.clone(), self.beta.clone(), self.alpha.clone()],
        }
    }

    /// `k` along `f`: the largest pole order of α, β, γ.
    pub fn pole_order_along(&self, f: &Polynomial) -> u32 {
        self.forms().iter().map(|w| w.pole_order(f)).max().unwrap()
    }

    pub fn polar_divisor(&self) -> PolarDivisor {
        let components = self
            .poles
            .iter()
            .map(|f| PolarComponent {
                component: f.poly.clone(),
                k: self.pole_order_along(&f.poly),
            })
            .filter(|c| c.k > 0)
            .collect();
        PolarDivisor { components }
    }

    /// The declared component equal to `f` up to a constant.
    pub fn find_component(&self, f: &Polynomial) -> Result<Polynomial> {
        let m = f.monic();
        self.poles
            .iter()
            .find(|g| g.poly == m)
            .map(|g| g.poly.clone())
            .ok_or_else(|| {
                Error::Contract(format!(
                    "{} is not a declared pole component",
                    self.vars.show(f)
                ))
            })
    }

    /// Gauge by `W = M·Z`.
    pub fn gauge_transform(&self, m: &Mat2) -> Result<Self> {
        if m.nvars() != self.nvars() {
            return Err(Error::Contract(
                "gauge matrix lives on a different chart".into(),
            ));
        }
        let inv = m.inverse()?;
        let a = self.connection();
        let conj = FormMat2::right_mul(&FormMat2::left_mul(m, &a), &inv);
        let dm = FormMat2::right_mul(&m.differential(), &inv);
        let (alpha, beta, gamma) = triple_of_connection(&conj.sub(&dm));
        self.rebuilt(alpha, beta, gamma)
    }

    /// Same chart and pole candidates, new forms; integrability re-verified.
    pub(crate) fn rebuilt(&self, alpha: OneForm, beta: OneForm, gamma: OneForm) -> Result<Self> {
        let old: Vec<Polynomial> = self.poles.iter().map(|f| f.poly.clone()).collect();
        let poles = infer_poles(&old, &[&alpha, &beta, &gamma]);
        let integrable = check_integrability(&alpha, &beta, &gamma).ok;
        if self.integrable && !integrable {
            return Err(Error::Contract("transformation broke integrability".into()));
        }
        Ok(ProjectiveTriple {
            vars: self.vars.clone(),
            alpha,
            beta,
            gamma,
            poles,
            integrable,
        })
    }

    /// Componentwise pullback to another chart with variables `vars`.
    pub fn pullback(&self, phi: &RationalMap, vars: Vars) -> Result<Self> {
        if phi.source_nvars() != vars.len() {
            return Err(Error::Contract(
                "map source does not match the new chart".into(),
            ));
        }
        if !phi.is_dominant() {
            return Err(Error::Contract("pullback along a non-dominant map".into()));
        }
        let a = self.alpha.pullback(phi)?;
        let b = self.beta.pullback(phi)?;
        let c = self.gamma.pullback(phi)?;
        let poles = infer_poles(&[], &[&a, &b, &c]);
        Self::raw(vars, a, b, c, poles)
    }

    /// Exact equality of forms and declared components.
    pub fn same_forms(&self, o: &ProjectiveTriple) -> bool {
        self.alpha == o.alpha && self.beta == o.beta && self.gamma == o.gamma
    }

    /// Hex SHA-256 of the canonical text of the forms.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        h.update(self.vars.names().join(",").as_bytes());
        for w in self.forms() {
            h.update(b"|");
            h.update(show_form(w, &self.vars).as_bytes());
        }
        hex::encode(h.finalize())
    }
}

/// Squarefree, pairwise coprime pole candidates covering every
/// denominator, keeping `old` components where possible; multiplicities
/// are the actual pole orders and zero-order candidates are dropped.
pub(crate) fn infer_poles(old: &[Polynomial], forms: &[&OneForm]) -> FactorList {
    let mut cands: Vec<Polynomial> = old.to_vec();
    for w in forms {
        for d in w.denominators() {
            if d.is_constant() {
                continue;
            }
            let mut rest = d.clone();
            for f in old {
                while let Some(q) = rest.div_exact(f) {
                    rest = q;
                }
            }
            if !rest.is_constant() {
                for f in squarefree_decompose(&rest).expect("nonzero").factors {
                    cands.push(f.poly);
                }
            }
        }
    }
    let basis = if cands.len() == old.len() {
        old.to_vec()
    } else {
        coprime_basis(&cands)
    };
    let mut factors: Vec<Factor> = basis
        .into_iter()
        .map(|f| {
            let k = forms.iter().map(|w| w.pole_order(&f)).max().unwrap_or(0);
            Factor {
                poly: f.monic(),
                multiplicity: k,
            }
        })
        .filter(|f| f.multiplicity > 0)
        .collect();
    factors.sort_by(|a, b| canonical_cmp(&a.poly, &b.poly));
    FactorList::new(factors)
}

impl fmt::Display for ProjectiveTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alpha = {}; beta = {}; gamma = {}",
            show_form(&self.alpha, &self.vars),
            show_form(&self.beta, &self.vars),
            show_form(&self.gamma, &self.vars)
        )
    }
}
