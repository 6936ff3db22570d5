//! Elementary transformations and the pole-change law.
//!
//! A move over `H = {F = 0}` with center `s` is the gauge
//! `E = M⁻¹ · diag(F, 1) · M`, where `M` carries `s` to `[1 : 0]` along `H`.
//! In the chart of `M` the triple becomes `(α/F, β + dF/F, Fγ)`.

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{modular, Polynomial, RationalFunction};
use crate::forms::OneForm;
use crate::triple::{Mat2, ProjectiveTriple, Section};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementaryMove {
    pub component: Polynomial,
    pub center: Section,
    /// Möbius matrix carrying the center to `[1 : 0]` over the component.
    pub mobius: Mat2,
}

impl ElementaryMove {
    /// Move over `f` centered at `center`, with a Möbius matrix that is
    /// polynomial of constant determinant whenever one is found cheaply.
    pub fn new(f: &Polynomial, center: &Section) -> Result<Self> {
        let f = f.monic();
        if f.is_constant() {
            return Err(Error::Contract("elementary move over a constant".into()));
        }
        if center.nvars() != f.nvars() {
            return Err(Error::Contract("center lives on a different chart".into()));
        }
        let mobius = mobius_for(&f, center)?;
        Self::with_mobius(&f, center, mobius)
    }

    pub fn with_mobius(f: &Polynomial, center: &Section, mobius: Mat2) -> Result<Self> {
        let f = f.monic();
        if mobius.det().is_zero() {
            return Err(Error::Contract("Möbius matrix is singular".into()));
        }
        for row in &mobius.e {
            for c in row {
                if !modular::holomorphic_along(c, &f) {
                    return Err(Error::Contract(
                        "Möbius matrix is not defined along the component".into(),
                    ));
                }
            }
        }
        if !modular::holomorphic_along(&mobius.det().recip()?, &f) {
            return Err(Error::Contract(
                "Möbius matrix degenerates along the component".into(),
            ));
        }
        let [u, w] = mobius.apply(&center.as_rf());
        if modular::vanishes_mod(&u, &f) || !modular::vanishes_mod(&w, &f) {
            return Err(Error::Contract(
                "Möbius matrix does not carry the center to [1:0]".into(),
            ));
        }
        Ok(ElementaryMove {
            component: f,
            center: center.clone(),
            mobius,
        })
    }

    /// The gauge `M⁻¹ · diag(F, 1) · M` realizing the move.
    pub fn matrix(&self) -> Mat2 {
        let n = self.component.nvars();
        let d = Mat2::diag(self.component.clone().into(), RationalFunction::one(n));
        self.mobius
            .inverse()
            .expect("checked")
            .mul(&d)
            .mul(&self.mobius)
    }

    /// Whether `E` has polynomial entries (then it creates no poles off `H`).
    pub fn is_polynomial(&self) -> bool {
        self.matrix().is_polynomial()
    }
}

/// Apply the move; integrability is re-verified and poles re-inferred.
pub fn elm(t: &ProjectiveTriple, mv: &ElementaryMove) -> Result<ProjectiveTriple> {
    t.gauge_transform(&mv.matrix())
}

/// Apply the move and transport `σ`.
pub fn elm_with_section(
    t: &ProjectiveTriple,
    mv: &ElementaryMove,
    sigma: &Section,
) -> Result<(ProjectiveTriple, Section)> {
    let e = mv.matrix();
    Ok((t.gauge_transform(&e)?, sigma.transform(&e)?))
}

fn mobius_for(f: &Polynomial, s: &Section) -> Result<Mat2> {
    let n = f.nvars();
    let one = || RationalFunction::one(n);
    let zero = || RationalFunction::zero(n);
    let [s1, s2] = s.as_rf();
    let z1 = modular::vanishes_mod(&s1, f);
    let z2 = modular::vanishes_mod(&s2, f);
    if z1 && z2 {
        return Err(Error::Contract(
            "center is undefined along the component".into(),
        ));
    }
    if z2 {
        return Ok(Mat2::identity(n));
    }
    if z1 {
        return Ok(Mat2::new(zero(), one(), one(), zero()));
    }
    if let Some(c1) = modular::constant_mod(&s1, f) {
        let c = s2.scale(&c1.recip());
        return Ok(Mat2::new(one(), zero(), -&c, one()));
    }
    if let Some(c2) = modular::constant_mod(&s2, f) {
        let c = s1.scale(&c2.recip());
        return Ok(Mat2::new(zero(), one(), one(), -&c));
    }
    if let Some(m) = bezout_mobius(f, s) {
        return Ok(m);
    }
    // Rational shear: exact over H but may have poles along s₁ = 0.
    Ok(Mat2::new(one(), zero(), -&(&s2 / &s1), one()))
}

/// For `F = l·v + r` with `l` constant in a two-variable chart, restrict the
/// center to `H` by `v = −r/l`, solve `a·s₁ + b·s₂ = 1` in the remaining
/// variable and return `[[a, b], [−s₂, s₁]]` (determinant 1).
fn bezout_mobius(f: &Polynomial, s: &Section) -> Option<Mat2> {
    let n = f.nvars();
    if n != 2 {
        return None;
    }
    let v = (0..n).find(|&v| f.degree_in(v) == Some(1) && f.coefficients_in(v)[1].is_constant())?;
    let w = 1 - v;
    let c = f.coefficients_in(v);
    let l = c[1].constant_value()?;
    let root: RationalFunction = c[0].scale(&(-l.recip())).into();
    let mut values: Vec<RationalFunction> = (0..n).map(|i| RationalFunction::var(n, i)).collect();
    values[v] = root;
    let r1 = RationalFunction::from(s.s1().clone())
        .compose(&values)
        .ok()?;
    let r2 = RationalFunction::from(s.s2().clone())
        .compose(&values)
        .ok()?;
    let (p1, p2) = (r1.as_polynomial()?.clone(), r2.as_polynomial()?.clone());
    let g = crate::expr::gcd(&p1, &p2);
    let (p1, p2) = (p1.div_exact(&g)?, p2.div_exact(&g)?);
    let (a, b) = univariate_bezout(&p1, &p2, w)?;
    Some(Mat2::from_polys(a, b, -&p2, p1))
}

/// `(a, b)` with `a·p + b·q = 1` for coprime univariate `p, q` in `w`.
fn univariate_bezout(p: &Polynomial, q: &Polynomial, w: usize) -> Option<(Polynomial, Polynomial)> {
    let n = p.nvars();
    let (mut r0, mut r1) = (p.clone(), q.clone());
    let (mut a0, mut a1) = (Polynomial::one(n), Polynomial::zero(n));
    let (mut b0, mut b1) = (Polynomial::zero(n), Polynomial::one(n));
    while !r1.is_zero() {
        let (quo, rem) = div_rem(&r0, &r1, w);
        r0 = std::mem::replace(&mut r1, rem);
        let na = &a0 - &(&quo * &a1);
        a0 = std::mem::replace(&mut a1, na);
        let nb = &b0 - &(&quo * &b1);
        b0 = std::mem::replace(&mut b1, nb);
    }
    let c = r0.constant_value()?;
    if c.is_zero() {
        return None;
    }
    let inv = c.recip();
    Some((a0.scale(&inv), b0.scale(&inv)))
}

fn div_rem(a: &Polynomial, b: &Polynomial, w: usize) -> (Polynomial, Polynomial) {
    let n = a.nvars();
    let db = b.degree_in(w).unwrap_or(0);
    let lb = b.coefficients_in(w)[db as usize]
        .constant_value()
        .expect("univariate");
    let mut rem = a.clone();
    let mut quo = Polynomial::zero(n);
    while let Some(dr) = rem.degree_in(w).filter(|&d| d >= db && !rem.is_zero()) {
        let lr = rem.coefficients_in(w)[dr as usize]
            .constant_value()
            .expect("univariate");
        let mut e = vec![0u32; n];
        e[w] = dr - db;
        let t = Polynomial::monomial(crate::expr::Monomial(e), lr / &lb);
        rem = &rem - &(&t * b);
        quo = &quo + &t;
    }
    (quo, rem)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PoleCase {
    /// The center is not singular for the foliation over `H`.
    #[serde(rename = "case-1")]
    Case1,
    /// The center lies in the singular set, which is larger than it.
    #[serde(rename = "case-2")]
    Case2,
    /// The center is the whole singular set over `H`.
    #[serde(rename = "case-3")]
    Case3,
}

impl PoleCase {
    pub fn tag(self) -> &'static str {
        match self {
            PoleCase::Case1 => "case-1",
            PoleCase::Case2 => "case-2",
            PoleCase::Case3 => "case-3",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleChange {
    pub case: PoleCase,
    pub k: u32,
    /// Exact multiplicity after the move, from the valuations of the
    /// recentred triple.
    pub predicted: u32,
    /// The three-case table read literally (undefined for `k = 0`).
    pub table_prediction: Option<u32>,
}

/// Classify a move by the restrictions of `Fᵏα, Fᵏβ` to `H` in the chart
/// where the center is `[1 : 0]`, and predict the new multiplicity.
pub fn classify_pole_change(t: &ProjectiveTriple, mv: &ElementaryMove) -> Result<PoleChange> {
    let f = &mv.component;
    let centred = t.gauge_transform(&mv.mobius)?;
    let (a, b, c) = (centred.alpha(), centred.beta(), centred.gamma());
    let k = centred.pole_order_along(f);
    let fk = f.pow(k);
    let on_h = |w: &OneForm| w.mul_poly(&fk).vanishes_mod(f);
    let case = if !on_h(a) {
        PoleCase::Case1
    } else if !on_h(b) {
        PoleCase::Case2
    } else {
        PoleCase::Case3
    };
    let (va, vb, vc) = (a.valuation(f), b.valuation(f), c.valuation(f));

    let ord_a = va.map_or(0, |v| (1 - v).max(0));
    let ord_c = vc.map_or(0, |v| (-v - 1).max(0));
    let df = OneForm::differential(&f.clone().into());
    let ord_b = match vb {
        Some(v) if v <= -2 => -v,
        Some(-1) if (&b.mul_poly(f) + &df).vanishes_mod(f) => 0,
        _ => 1,
    };
    let predicted = ord_a.max(ord_b).max(ord_c) as u32;

    let table_prediction = if k == 0 {
        None
    } else {
        Some(match case {
            PoleCase::Case1 => k + 1,
            PoleCase::Case2 if k >= 2 => k,
            PoleCase::Case2 => {
                let shifted = b + &OneForm::log_differential(&f.clone().into());
                if shifted.pole_order(f) == 0 {
                    k - 1
                } else {
                    k
                }
            }
            PoleCase::Case3 if k == 1 => k,
            PoleCase::Case3 => {
                let ka = va.map_or(1, |v| 1 - v);
                let kb = vb.map_or(1, |v| -v);
                ka.max(kb).max(1) as u32
            }
        })
    };
    Ok(PoleChange {
        case,
        k,
        predicted,
        table_prediction,
    })
}
