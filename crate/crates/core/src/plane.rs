//! Foliations of the projective plane in homogeneous coordinates, and the
//! invariants of projective structures living on a chart of it.

use num::{BigRational, One};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{
    gcd, int, is_squarefree, lcm, squarefree_decompose, Factor, FactorList, Monomial, Polynomial,
    RationalFunction, Vars,
};
use crate::forms::{OneForm, RationalMap};
use crate::reduction::{reduce_component, ReduceOptions};
use crate::triple::{branch_divisor, infer_poles, Mat2, ProjectiveTriple, Section};

/// Random-line trials allowed before giving up on genericity.
pub const LINE_BUDGET: usize = 32;
/// Independent lines that must agree on the degree.
pub const DEGREE_WITNESSES: usize = 3;

/// Affine chart of ℙ² with homogeneous coordinates `[x : y : z]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    /// `z = 1`, coordinates `(x, y)`.
    Z,
    /// `x = 1`, coordinates `(y, z)`.
    X,
}

impl Chart {
    /// Embedding of the chart into `ℂ³`.
    pub fn embedding(self) -> RationalMap {
        let v = |i| RationalFunction::var(2, i);
        let one = RationalFunction::one(2);
        let comps = match self {
            Chart::Z => vec![v(0), v(1), one],
            Chart::X => vec![one, v(0), v(1)],
        };
        RationalMap::new(2, comps).unwrap()
    }

    pub fn vars(self, names: &Vars) -> Vars {
        let n = names.names();
        match self {
            Chart::Z => Vars::new(&[&n[0], &n[1]]),
            Chart::X => Vars::new(&[&n[1], &n[2]]),
        }
    }
}

/// `ω = A dx + B dy + C dz` with `A, B, C` homogeneous of one degree,
/// `xA + yB + zC = 0` and `gcd(A, B, C) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneFoliation {
    vars: Vars,
    coeffs: [Polynomial; 3],
}

impl PlaneFoliation {
    pub fn new(vars: Vars, a: Polynomial, b: Polynomial, c: Polynomial) -> Result<Self> {
        if vars.len() != 3 || [&a, &b, &c].iter().any(|p| p.nvars() != 3) {
            return Err(Error::Contract(
                "plane foliations use three homogeneous coordinates".into(),
            ));
        }
        let coeffs = [a, b, c];
        let mut degree = None;
        for p in coeffs.iter().filter(|p| !p.is_zero()) {
            if !p.is_homogeneous() {
                return Err(Error::Contract("coefficients must be homogeneous".into()));
            }
            let d = p.total_degree();
            if degree.is_some() && degree != d {
                return Err(Error::Contract("coefficients must share one degree".into()));
            }
            degree = d;
        }
        if degree.is_none() {
            return Err(Error::Contract("the zero form defines no foliation".into()));
        }
        let euler = (0..3).fold(Polynomial::zero(3), |acc, i| {
            &acc + &(&Polynomial::var(3, i) * &coeffs[i])
        });
        if !euler.is_zero() {
            return Err(Error::Contract(
                "Euler contraction xA + yB + zC does not vanish".into(),
            ));
        }
        let g = coeffs.iter().fold(Polynomial::zero(3), |g, p| gcd(&g, p));
        if !g.is_constant() {
            return Err(Error::Contract(format!(
                "coefficients share the factor {}",
                vars.show(&g)
            )));
        }
        Ok(PlaneFoliation { vars, coeffs })
    }

    /// Parse `A`, `B`, `C` over the given coordinate names.
    pub fn parse(vars: Vars, a: &str, b: &str, c: &str) -> Result<Self> {
        let (a, b, c) = (vars.poly(a)?, vars.poly(b)?, vars.poly(c)?);
        Self::new(vars, a, b, c)
    }

    /// Saturated homogenization of a 1-form on the chart `z = 1`.
    pub fn from_affine(vars: Vars, w: &OneForm) -> Result<Self> {
        if w.nvars() != 2 {
            return Err(Error::Contract(
                "affine forms live on two coordinates".into(),
            ));
        }
        let den = w
            .coeffs()
            .iter()
            .fold(Polynomial::one(2), |acc, c| lcm(&acc, c.denominator()));
        let [a, b] = [0, 1].map(|i| w.coeff(i).mul_poly(&den).numerator().clone());
        let m = [&a, &b]
            .iter()
            .filter_map(|p| p.total_degree())
            .max()
            .ok_or_else(|| Error::Contract("the zero form defines no foliation".into()))?;
        let (ha, hb) = (homogenize_to(&a, m), homogenize_to(&b, m));
        let z = Polynomial::var(3, 2);
        let c = -(&(&Polynomial::var(3, 0) * &ha) + &(&Polynomial::var(3, 1) * &hb));
        let mut coeffs = [&z * &ha, &z * &hb, c];
        let g = coeffs.iter().fold(Polynomial::zero(3), |g, p| gcd(&g, p));
        for p in coeffs.iter_mut() {
            *p = p.div_exact(&g).expect("gcd divides");
        }
        let [a, b, c] = coeffs;
        Self::new(vars, a, b, c)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn coeffs(&self) -> &[Polynomial; 3] {
        &self.coeffs
    }

    /// Common degree of `A, B, C`; the foliation degree is one less.
    pub fn coefficient_degree(&self) -> u32 {
        self.coeffs
            .iter()
            .filter_map(|p| p.total_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn form(&self) -> OneForm {
        OneForm::new(self.coeffs.iter().cloned().map(Into::into).collect())
    }

    /// Restriction of `ω` to an affine chart.
    pub fn affine_form(&self, chart: Chart) -> OneForm {
        self.form().pullback(&chart.embedding()).unwrap()
    }

    pub fn describe(&self) -> [String; 3] {
        self.coeffs.clone().map(|p| self.vars.show(&p))
    }
}

fn homogenize_to(p: &Polynomial, m: u32) -> Polynomial {
    if p.is_zero() {
        return Polynomial::zero(3);
    }
    let h = p.homogenize();
    let lift = m - p.total_degree().unwrap();
    h.mul_monomial(&Monomial(vec![0, 0, lift]), &BigRational::one())
}

/// A line through two integer points of `ℂ³`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineSample {
    pub p: [i64; 3],
    pub q: [i64; 3],
    pub tangency_degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub degree: u32,
    pub lines: Vec<LineSample>,
    pub rejected: usize,
}

enum LineTrial {
    Invariant,
    NonReduced,
    Ok(u32),
}

/// Tangency polynomial `R(s, t)` of `ω` with the line `sP + tQ`: the
/// pullback is `R·(s dt − t ds)`, and `R` has one zero per tangency.
fn tangency_polynomial(f: &PlaneFoliation, p: &[i64; 3], q: &[i64; 3]) -> Option<Polynomial> {
    let s = Polynomial::var(2, 0);
    let t = Polynomial::var(2, 1);
    let pt: Vec<RationalFunction> = (0..3)
        .map(|i| (&s.scale(&int(p[i])) + &t.scale(&int(q[i]))).into())
        .collect();
    let mut t2 = Polynomial::zero(2);
    for (i, c) in f.coeffs.iter().enumerate() {
        let v = RationalFunction::from_poly(c.clone()).compose(&pt).unwrap();
        t2 = &t2
            + &v.as_polynomial()
                .expect("polynomial substitution")
                .scale(&int(q[i]));
    }
    if t2.is_zero() {
        return None;
    }
    Some(
        t2.div_exact(&s)
            .expect("Euler relation makes s divide the dt part"),
    )
}

fn try_line(f: &PlaneFoliation, p: &[i64; 3], q: &[i64; 3]) -> LineTrial {
    match tangency_polynomial(f, p, q) {
        None => LineTrial::Invariant,
        Some(r) if !is_squarefree(&r) => LineTrial::NonReduced,
        Some(r) => LineTrial::Ok(r.total_degree().unwrap_or(0)),
    }
}

fn random_line<R: Rng>(rng: &mut R) -> ([i64; 3], [i64; 3]) {
    loop {
        let p = [0; 3].map(|_: i64| rng.gen_range(-4..=4));
        let q = [0; 3].map(|_: i64| rng.gen_range(-4..=4));
        let cross = [
            p[1] * q[2] - p[2] * q[1],
            p[2] * q[0] - p[0] * q[2],
            p[0] * q[1] - p[1] * q[0],
        ];
        if cross != [0, 0, 0] {
            return (p, q);
        }
    }
}

/// Number of tangencies with a generic line, certified by agreement over
/// several random lines.
pub fn foliation_degree(f: &PlaneFoliation, seed: u64) -> Result<DegreeReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines = Vec::new();
    let mut rejected = 0;
    for _ in 0..LINE_BUDGET {
        let (p, q) = random_line(&mut rng);
        match try_line(f, &p, &q) {
            LineTrial::Ok(d) => lines.push(LineSample {
                p,
                q,
                tangency_degree: d,
            }),
            _ => rejected += 1,
        }
        if lines.len() == DEGREE_WITNESSES {
            let degree = lines[0].tangency_degree;
            if lines.iter().any(|l| l.tangency_degree != degree) {
                return Err(Error::Contract(
                    "random lines disagree on the tangency count".into(),
                ));
            }
            return Ok(DegreeReport {
                degree,
                lines,
                rejected,
            });
        }
    }
    Err(Error::BudgetExceeded(format!(
        "only {} generic lines in {} trials",
        lines.len(),
        LINE_BUDGET
    )))
}

/// Exact ideal test `ω ∧ dc ≡ 0 (mod c)`.
pub fn invariant_curve_test(f: &PlaneFoliation, c: &Polynomial) -> Result<bool> {
    if c.nvars() != 3 || c.is_constant() || !c.is_homogeneous() {
        return Err(Error::Contract(
            "curve must be a non-constant homogeneous polynomial in x, y, z".into(),
        ));
    }
    if !is_squarefree(c) {
        return Err(Error::Contract("curve equation must be squarefree".into()));
    }
    let dc = OneForm::differential(&c.clone().into());
    Ok(f.form().wedge(&dc).vanishes_mod(c))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LogDerivativeReport {
    /// `dω − η∧ω = 0` on `ℂ³`.
    pub homogeneous: bool,
    pub chart_z: bool,
    pub chart_x: bool,
}

impl LogDerivativeReport {
    pub fn holds(&self) -> bool {
        self.chart_z && self.chart_x
    }
}

/// Check `dω = η∧ω` for a rational 1-form `η` on `ℂ³`, on `ℂ³` itself and
/// restricted to both affine charts.
pub fn log_derivative_report(f: &PlaneFoliation, eta: &OneForm) -> Result<LogDerivativeReport> {
    if eta.nvars() != 3 {
        return Err(Error::Contract("η must be written in x, y, z".into()));
    }
    let w = f.form();
    let residual = &w.exterior_derivative() - &eta.wedge(&w);
    let on =
        |chart: Chart| -> Result<bool> { Ok(residual.pullback(&chart.embedding())?.is_zero()) };
    Ok(LogDerivativeReport {
        homogeneous: residual.is_zero(),
        chart_z: on(Chart::Z)?,
        chart_x: on(Chart::X)?,
    })
}

pub fn verify_log_derivative(f: &PlaneFoliation, eta: &OneForm) -> Result<bool> {
    Ok(log_derivative_report(f, eta)?.holds())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EccentricityReport {
    pub deg_polar: i64,
    pub deg_foliation: i64,
    pub eccentricity: i64,
}

pub fn eccentricity(deg_polar: i64, deg_f: i64) -> EccentricityReport {
    EccentricityReport {
        deg_polar,
        deg_foliation: deg_f,
        eccentricity: deg_polar - (deg_f + 2),
    }
}

/// The map `(y, z) ↦ (1/z, y/z)` from the chart `x = 1` to the chart `z = 1`.
pub fn chart_swap() -> RationalMap {
    let y = RationalFunction::var(2, 0);
    let z = RationalFunction::var(2, 1);
    let zi = z.recip().unwrap();
    RationalMap::new(2, vec![zi.clone(), &y * &zi]).unwrap()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolarContribution {
    pub component: String,
    pub degree: u32,
    pub k: u32,
}

/// Polar divisor of a structure on the chart `z = 1`, extended over ℙ².
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlanePolarReport {
    pub components: Vec<PolarContribution>,
    /// Pole order along the line at infinity in the second chart, as given.
    pub infinity_raw: u32,
    /// The same after making that component minimal.
    pub infinity: u32,
    pub total: u32,
}

/// `deg(𝒫)∞`: affine components weighted by degree and order, plus the
/// minimal order along the line at infinity.
pub fn plane_polar_degree(t: &ProjectiveTriple) -> Result<PlanePolarReport> {
    if t.nvars() != 2 {
        return Err(Error::Contract(
            "plane structures live on two coordinates".into(),
        ));
    }
    let components: Vec<PolarContribution> = t
        .polar_divisor()
        .components
        .iter()
        .map(|c| PolarContribution {
            component: t.vars().show(&c.component),
            degree: c.component.total_degree().unwrap_or(0),
            k: c.k,
        })
        .collect();
    let names = t.vars().names();
    let far_vars = Vars::new(&[names[1].clone(), format!("{}_inf", names[0])]);
    let far = t.pullback(&chart_swap(), far_vars)?;
    let line = Polynomial::var(2, 1);
    let infinity_raw = far.pole_order_along(&line);
    let infinity = if infinity_raw == 0 {
        0
    } else {
        let (reduced, _) = reduce_component(&far, &line, ReduceOptions::default())?;
        reduced.pole_order_along(&line)
    };
    let total = components.iter().map(|c| c.degree * c.k).sum::<u32>() + infinity;
    Ok(PlanePolarReport {
        components,
        infinity_raw,
        infinity,
        total,
    })
}

/// A structure restricted to a line of the chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineRestriction {
    pub alpha: OneForm,
    pub beta: OneForm,
    pub gamma: OneForm,
    /// Finite poles as squarefree factors in the line parameter, with orders.
    pub finite: Vec<(Polynomial, u32)>,
    /// Pole order at the parameter `∞` in the given trivialization.
    pub infinity_raw: u32,
    /// The same after making that point minimal.
    pub infinity: u32,
    pub polar_degree: u32,
}

/// Pull a triple back along an affine line `t ↦ P + tQ`.
pub fn restrict_structure_to_line(
    t: &ProjectiveTriple,
    line: &RationalMap,
) -> Result<LineRestriction> {
    if line.source_nvars() != 1 || line.target_nvars() != t.nvars() {
        return Err(Error::Contract(
            "a line is a map from one parameter into the chart".into(),
        ));
    }
    let affine = line.components().iter().all(|c| {
        c.as_polynomial()
            .is_some_and(|p| p.total_degree().unwrap_or(0) <= 1)
    });
    if !affine || line.is_constant() {
        return Err(Error::Contract(
            "line must be a non-constant affine parametrization".into(),
        ));
    }
    let mut restricted = Vec::new();
    for f in t.declared_poles().iter() {
        let fl = line.apply(&f.poly.clone().into())?;
        let fl = fl.numerator().clone();
        let generic = !fl.is_zero()
            && fl.total_degree() == f.poly.total_degree()
            && is_squarefree(&fl)
            && restricted
                .iter()
                .all(|g: &Polynomial| gcd(g, &fl).is_constant());
        if !generic {
            return Err(Error::Contract(format!(
                "non-generic line for the component {}",
                t.vars().show(&f.poly)
            )));
        }
        restricted.push(fl);
    }
    let [alpha, beta, gamma] = t.forms().map(|w| w.pullback(line));
    let (alpha, beta, gamma) = (alpha?, beta?, gamma?);
    let den = [&alpha, &beta, &gamma]
        .iter()
        .flat_map(|w| w.denominators())
        .fold(Polynomial::one(1), |acc, d| lcm(&acc, d));
    let finite: Vec<(Polynomial, u32)> = squarefree_decompose(&den)?
        .iter()
        .map(|f| (f.poly.clone(), f.multiplicity))
        .collect();
    let s = RationalFunction::var(1, 0);
    let flip = RationalMap::new(1, vec![s.recip()?])?;
    let far: Vec<OneForm> = [&alpha, &beta, &gamma]
        .iter()
        .map(|w| w.pullback(&flip))
        .collect::<Result<_>>()?;
    let s = Polynomial::var(1, 0);
    let poles = infer_poles(std::slice::from_ref(&s), &[&far[0], &far[1], &far[2]]);
    let [fa, fb, fc]: [OneForm; 3] = far.try_into().expect("three forms");
    let far = ProjectiveTriple::new(Vars::new(&["s"]), fa, fb, fc, poles)?;
    let infinity_raw = far.pole_order_along(&s);
    let infinity = if infinity_raw == 0 {
        0
    } else {
        let (reduced, _) = reduce_component(&far, &s, ReduceOptions::default())?;
        reduced.pole_order_along(&s)
    };
    let polar_degree = finite
        .iter()
        .map(|(f, k)| f.total_degree().unwrap_or(0) * k)
        .sum::<u32>()
        + infinity;
    Ok(LineRestriction {
        alpha,
        beta,
        gamma,
        finite,
        infinity_raw,
        infinity,
        polar_degree,
    })
}

/// The line `t ↦ p + t·q` in a two-coordinate chart.
pub fn affine_line(p: [BigRational; 2], q: [BigRational; 2]) -> RationalMap {
    let t = Polynomial::var(1, 0);
    let comps = (0..2)
        .map(|i| (&Polynomial::constant(1, p[i].clone()) + &t.scale(&q[i])).into())
        .collect();
    RationalMap::new(1, comps).unwrap()
}

/// A degree-`d` foliation transverse to the pencil through the origin,
/// with its Riccati structure.
#[derive(Debug, Clone)]
pub struct RiccatiExample {
    pub degree: u32,
    pub foliation: PlaneFoliation,
    pub triple: ProjectiveTriple,
    pub section: Section,
    /// Slopes `tᵢ` of the invariant lines `y = tᵢ x`.
    pub slopes: Vec<BigRational>,
    /// Eigenvalue differences of the residues at the slopes.
    pub exponents: Vec<BigRational>,
    /// The one-variable triple in the pencil parameter `u = y/x`.
    pub base: [RationalFunction; 3],
}

fn univariate(coeffs: &[BigRational]) -> Polynomial {
    let u = Polynomial::var(1, 0);
    coeffs.iter().rev().fold(Polynomial::zero(1), |acc, c| {
        &(&acc * &u) + &Polynomial::constant(1, c.clone())
    })
}

/// Pick slopes `tᵢ`, a numerator `B` and a radial part `h`, set
/// `Q = b·∏(u − tᵢ)`, and take the Riccati equation
/// `dx + (B/Q)x du + (h/Q)x² du = 0` over the pencil `u = y/x` with the
/// section `[1 : x]`, gauged to `[1 : 0]`.
pub fn generate_riccati_example(d: u32, seed: u64) -> Result<RiccatiExample> {
    if d == 0 {
        return Err(Error::Contract("degree must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let small = |rng: &mut ChaCha8Rng, h: i64| {
        BigRational::new(rng.gen_range(-h..=h).into(), rng.gen_range(1..=3).into())
    };
    'trial: for _ in 0..LINE_BUDGET {
        let mut slopes: Vec<BigRational> = Vec::new();
        while slopes.len() < d as usize + 1 {
            let c = BigRational::from_integer(rng.gen_range(-6i64..=6).into());
            if !slopes.contains(&c) {
                slopes.push(c);
            }
        }
        slopes.sort();
        let lead = BigRational::from_integer(rng.gen_range(1i64..=3).into());
        let mut b: Vec<BigRational> = (0..d).map(|_| small(&mut rng, 4)).collect();
        b.push(lead.clone());
        let h: Vec<BigRational> = (0..=d).map(|_| small(&mut rng, 4)).collect();
        let (bp, hp) = (univariate(&b), univariate(&h));
        if hp.is_zero() {
            continue;
        }
        let u = Polynomial::var(1, 0);
        let q = slopes.iter().fold(Polynomial::constant(1, lead), |acc, s| {
            &acc * &(&u - &Polynomial::constant(1, s.clone()))
        });
        let dq = q.derivative(0);
        let mut exponents = Vec::new();
        for s in &slopes {
            let e = bp.evaluate(std::slice::from_ref(s)) / dq.evaluate(std::slice::from_ref(s));
            if e.is_integer() {
                continue 'trial;
            }
            exponents.push(e);
        }
        let base = [
            RationalFunction::zero(1),
            RationalFunction::new(bp, q.clone())?,
            RationalFunction::new(hp, q)?,
        ];
        let ratio = RationalFunction::new(Polynomial::var(2, 1), Polynomial::var(2, 0))?;
        let pencil = RationalMap::new(2, vec![ratio.clone()])?;
        let du = OneForm::differential(&ratio);
        let [a, bt, c] = base
            .clone()
            .map(|r| du.mul(&pencil.apply(&r).expect("poles lie on lines")));
        let vars = Vars::new(&["x", "y"]);
        let xp = Polynomial::var(2, 0);
        let mut lines = vec![xp.clone()];
        lines.extend(slopes.iter().map(|s| &Polynomial::var(2, 1) - &xp.scale(s)));
        let poles = FactorList::new(
            lines
                .into_iter()
                .map(|poly| Factor {
                    poly,
                    multiplicity: 1,
                })
                .collect(),
        );
        let raw = ProjectiveTriple::new(vars, a, bt, c, poles)?;
        let x = RationalFunction::var(2, 0);
        let m = Mat2::new(
            RationalFunction::one(2),
            RationalFunction::zero(2),
            -x,
            RationalFunction::one(2),
        );
        let triple = raw.gauge_transform(&m)?;
        let section = Section::zero_section(2);
        let report = branch_divisor(&triple, &section)?;
        let foliation =
            PlaneFoliation::from_affine(Vars::new(&["x", "y", "z"]), &report.foliation)?;
        if foliation.coefficient_degree() != d + 1 {
            continue;
        }
        return Ok(RiccatiExample {
            degree: d,
            foliation,
            triple,
            section,
            slopes,
            exponents,
            base,
        });
    }
    Err(Error::BudgetExceeded(format!(
        "no generic Riccati example of degree {d} in {LINE_BUDGET} trials"
    )))
}

/// The line `y = s·x` as a homogeneous polynomial.
pub fn pencil_line(slope: &BigRational) -> Polynomial {
    &Polynomial::var(3, 1) - &Polynomial::var(3, 0).scale(slope)
}

#[cfg(test)]
mod tests;
