//! Local analysis of a polar component `H = {f = 0}` of order `k`.
//!
//! The singular set of the Riccati foliation over `H` is cut out by the
//! quadratic `q = (Fᵏα)z₁² + (Fᵏβ)z₁z₂ + (Fᵏγ)z₂²` restricted to `H`. When
//! `H` is invariant, `q ≡ (a z₁² + b z₁z₂ + c z₂²)·df` with `a, b, c` on `H`,
//! and the singular points are the eigenlines of the residue
//!
//! ```text
//!     R = [ −b/2  −c  ]      q(Z) = det[Z, RZ].
//!         [   a   b/2 ]
//! ```
//!
//! For `k = 1` the eigenvalues `±μ` are constant along `H`; the branch
//! through the `+μ` eigenline carries the transverse quotient `λ = 2μ`, the
//! other `−λ`. The section of quotient `λ` is `z = z₂/z₁ = (−b − λ)/(2c)`.

use num::{BigInt, BigRational, Zero};

use super::{ProjectiveTriple, Section};
use crate::error::{Error, Result};
use crate::expr::{modular, Polynomial, QuadraticNumber, RationalFunction};
use crate::forms::OneForm;

/// A singular section over `H`, with its transverse quotient when defined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchSection {
    pub section: Section,
    pub quotient: Option<QuadraticNumber>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sections {
    /// No singular point of the foliation over the generic point of `H`.
    Empty,
    /// Sections defined over ℚ.
    Rational(Vec<BranchSection>),
    /// `z = center ± offset·√d` with `d` a squarefree integer.
    Conjugate {
        d: BigInt,
        center: RationalFunction,
        offset: RationalFunction,
    },
    /// Two sections over a double cover of `H` that is not a constant
    /// quadratic extension.
    DoubleCover { discriminant: RationalFunction },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentData {
    pub component: Polynomial,
    pub k: u32,
    pub invariant: bool,
    /// `Fᵏα, Fᵏβ, Fᵏγ` reduced on `H`.
    pub section_quadratic: [OneForm; 3],
    /// `(a, b, c)` with `q = (a z₁² + b z₁z₂ + c z₂²)·df` (invariant case).
    pub scalar_quadratic: Option<[RationalFunction; 3]>,
    /// `b² − 4ac` on `H` (invariant case).
    pub discriminant: Option<RationalFunction>,
    pub section_count: usize,
    pub sections: Sections,
    /// `±μ`, eigenvalues of the residue (invariant, `k = 1`).
    pub exponents: Option<[QuadraticNumber; 2]>,
}

impl ComponentData {
    /// The transverse quotients `±λ = ±2μ` when exponents are defined.
    pub fn quotients(&self) -> Option<[QuadraticNumber; 2]> {
        let two = QuadraticNumber::rational(BigRational::from_integer(2.into()));
        self.exponents.as_ref().map(|[p, m]| [&two * p, &two * m])
    }

    pub fn rational_sections(&self) -> &[BranchSection] {
        match &self.sections {
            Sections::Rational(v) => v,
            _ => &[],
        }
    }

    /// Whether the discriminant vanishes on `H` (one-valued section).
    pub fn one_valued(&self) -> bool {
        self.section_count == 1
    }
}

fn scaled(t: &ProjectiveTriple, f: &Polynomial, k: u32) -> [OneForm; 3] {
    let fk = f.pow(k);
    t.forms().map(|w| w.mul_poly(&fk))
}

fn declared_order(t: &ProjectiveTriple, f: &Polynomial) -> Result<(Polynomial, u32)> {
    let f = t.find_component(f)?;
    let k = t.pole_order_along(&f);
    if k == 0 {
        return Err(Error::Contract(format!(
            "{} is not a pole component",
            t.vars().show(&f)
        )));
    }
    Ok((f, k))
}

/// `(Fᵏα)∧df ≡ (Fᵏβ)∧df ≡ (Fᵏγ)∧df ≡ 0 (mod f)`.
pub fn component_invariant(t: &ProjectiveTriple, f: &Polynomial) -> Result<bool> {
    let (f, k) = declared_order(t, f)?;
    Ok(scaled(t, &f, k).iter().all(|w| w.restricts_to_zero_on(&f)))
}

pub fn component_data(t: &ProjectiveTriple, f: &Polynomial) -> Result<ComponentData> {
    let (f, k) = declared_order(t, f)?;
    let forms = scaled(t, &f, k);
    let invariant = forms.iter().all(|w| w.restricts_to_zero_on(&f));
    let reduced = forms
        .clone()
        .map(|w| w.map_coeffs(|c| modular::simplify_mod(c, &f)));
    if invariant {
        invariant_data(f, k, forms, reduced)
    } else {
        non_invariant_data(f, k, forms, reduced)
    }
}

fn invariant_data(
    f: Polynomial,
    k: u32,
    forms: [OneForm; 3],
    reduced: [OneForm; 3],
) -> Result<ComponentData> {
    let n = f.nvars();
    let j = (0..n)
        .find(|&j| !modular::vanishes_mod(&f.derivative(j).into(), &f))
        .ok_or_else(|| Error::Contract("component is singular along its whole locus".into()))?;
    let fj = RationalFunction::from_poly(f.derivative(j));
    let [a, b, c] = forms.map(|w| modular::simplify_mod(&(w.coeff(j) / &fj), &f));
    let four = BigRational::from_integer(4.into());
    let disc = modular::simplify_mod(&(&(&b * &b) - &(&a * &c).scale(&four)), &f);
    let disc_zero = modular::vanishes_mod(&disc, &f);
    let disc_const = modular::constant_mod(&disc, &f);
    let c_zero = modular::vanishes_mod(&c, &f);

    let exponents = if k == 1 {
        disc_const.as_ref().map(|d| {
            let lambda = QuadraticNumber::sqrt_of(d);
            let mu = &lambda * &QuadraticNumber::rational(BigRational::new(1.into(), 2.into()));
            [mu.clone(), -&mu]
        })
    } else {
        None
    };
    let lambda_of = |sign: i32| -> Option<QuadraticNumber> {
        if k != 1 {
            return None;
        }
        let d = disc_const.as_ref()?;
        let l = QuadraticNumber::sqrt_of(d);
        Some(if sign > 0 { l } else { -&l })
    };

    let one = RationalFunction::one(n);
    let two = BigRational::from_integer(2.into());
    let (section_count, sections) = if disc_zero {
        let s = if c_zero {
            Section::infinity_section(n)
        } else {
            Section::new(c.scale(&two), -&b)?
        };
        let q = if k == 1 {
            Some(QuadraticNumber::rational(BigRational::zero()))
        } else {
            None
        };
        (
            1,
            Sections::Rational(vec![BranchSection {
                section: s,
                quotient: q,
            }]),
        )
    } else if c_zero {
        // q = z₁(a z₁ + b z₂): eigenlines [0:1] (μ = b/2) and [b : −a] (μ = −b/2).
        let bq = if k == 1 {
            modular::constant_mod(&b, &f)
        } else {
            None
        };
        let lam = |s: i32| {
            bq.as_ref()
                .map(|v| QuadraticNumber::rational(if s > 0 { v.clone() } else { -v }))
        };
        let s0 = Section::infinity_section(n);
        let s1 = Section::new(b.clone(), -&a)?;
        (
            2,
            Sections::Rational(vec![
                BranchSection {
                    section: s0,
                    quotient: lam(1),
                },
                BranchSection {
                    section: s1,
                    quotient: lam(-1),
                },
            ]),
        )
    } else {
        let two_c = c.scale(&two);
        match &disc_const {
            Some(d) => {
                let root = QuadraticNumber::sqrt_of(d);
                if let Some(r) = root.as_rational() {
                    let mk = |sign: i32| -> Result<BranchSection> {
                        let l =
                            RationalFunction::constant(n, if sign > 0 { r.clone() } else { -r });
                        let z = &(&(-&b) - &l) / &two_c;
                        Ok(BranchSection {
                            section: Section::new(one.clone(), modular::simplify_mod(&z, &f))?,
                            quotient: lambda_of(sign),
                        })
                    };
                    (2, Sections::Rational(vec![mk(1)?, mk(-1)?]))
                } else {
                    let center = modular::simplify_mod(&(&(-&b) / &two_c), &f);
                    let coeff = root.surd_coefficient().clone();
                    let offset = modular::simplify_mod(
                        &(&RationalFunction::constant(n, coeff) / &two_c),
                        &f,
                    );
                    (
                        2,
                        Sections::Conjugate {
                            d: root.radicand().clone(),
                            center,
                            offset,
                        },
                    )
                }
            }
            None => (
                2,
                Sections::DoubleCover {
                    discriminant: disc.clone(),
                },
            ),
        }
    };
    Ok(ComponentData {
        component: f,
        k,
        invariant: true,
        section_quadratic: reduced,
        scalar_quadratic: Some([a, b, c]),
        discriminant: Some(disc),
        section_count,
        sections,
        exponents,
    })
}

/// Univariate polynomials over the function field of `H`, coefficients in
/// increasing degree with the zero test "vanishes mod f".
struct FieldPoly<'a> {
    f: &'a Polynomial,
}

impl FieldPoly<'_> {
    fn trim(&self, mut p: Vec<RationalFunction>) -> Vec<RationalFunction> {
        while p.last().is_some_and(|c| modular::vanishes_mod(c, self.f)) {
            p.pop();
        }
        p.into_iter()
            .map(|c| modular::simplify_mod(&c, self.f))
            .collect()
    }

    fn rem(&self, a: &[RationalFunction], b: &[RationalFunction]) -> Vec<RationalFunction> {
        let mut r = a.to_vec();
        let lb = b.last().unwrap().clone();
        while r.len() >= b.len() {
            let lr = r.last().unwrap().clone();
            let q = &lr / &lb;
            let shift = r.len() - b.len();
            for (i, bi) in b.iter().enumerate() {
                r[i + shift] = &r[i + shift] - &(&q * bi);
            }
            r.pop();
            r = self.trim(r);
        }
        r
    }

    fn gcd(&self, a: Vec<RationalFunction>, b: Vec<RationalFunction>) -> Vec<RationalFunction> {
        let (mut a, mut b) = (self.trim(a), self.trim(b));
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        a
    }
}

fn non_invariant_data(
    f: Polynomial,
    k: u32,
    forms: [OneForm; 3],
    reduced: [OneForm; 3],
) -> Result<ComponentData> {
    let n = f.nvars();
    let fp = FieldPoly { f: &f };
    // Common zeros over H of the dx- and dy-quadratics, in z = z₂/z₁.
    let mut g: Vec<RationalFunction> = Vec::new();
    let mut infinite_root = true;
    for j in 0..n {
        let q: Vec<RationalFunction> = forms.iter().map(|w| w.coeff(j).clone()).collect();
        if !modular::vanishes_mod(&q[2], &f) {
            infinite_root = false;
        }
        g = fp.gcd(g, q);
    }
    let mut out = Vec::new();
    match g.len() {
        0 | 1 => {}
        2 => {
            let z = modular::simplify_mod(&(&(-&g[0]) / &g[1]), &f);
            out.push(BranchSection {
                section: Section::new(RationalFunction::one(n), z)?,
                quotient: None,
            });
        }
        _ => {
            // Every quadratic is proportional: fall back to the quadratic formula.
            let (a, b, c) = (&g[0], &g[1], &g[2]);
            let four = BigRational::from_integer(4.into());
            let disc = modular::simplify_mod(&(&(b * b) - &(a * c).scale(&four)), &f);
            if modular::vanishes_mod(&disc, &f) {
                let z = modular::simplify_mod(
                    &(&(-b) / &c.scale(&BigRational::from_integer(2.into()))),
                    &f,
                );
                out.push(BranchSection {
                    section: Section::new(RationalFunction::one(n), z)?,
                    quotient: None,
                });
            } else {
                return Ok(ComponentData {
                    component: f,
                    k,
                    invariant: false,
                    section_quadratic: reduced,
                    scalar_quadratic: None,
                    discriminant: Some(disc.clone()),
                    section_count: 2,
                    sections: Sections::DoubleCover { discriminant: disc },
                    exponents: None,
                });
            }
        }
    }
    if infinite_root && g.len() < 3 {
        out.push(BranchSection {
            section: Section::infinity_section(n),
            quotient: None,
        });
    }
    let count = out.len();
    let sections = if out.is_empty() {
        Sections::Empty
    } else {
        Sections::Rational(out)
    };
    Ok(ComponentData {
        component: f,
        k,
        invariant: false,
        section_quadratic: reduced,
        scalar_quadratic: None,
        discriminant: None,
        section_count: count,
        sections,
        exponents: None,
    })
}
