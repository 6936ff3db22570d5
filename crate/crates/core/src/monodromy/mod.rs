//! One-variable Fuchsian systems `dZ/du = S(u)·Z`: exact local exponents,
//! numeric monodromy along lasso loops, and the sign-lifting question for
//! projective representations.

mod lift;
mod numeric;
mod roots;

pub use lift::{
    parse_word, sl2_lift_exists, Exact, LiftReport, LiftScalar, PSL2Presentation, Word,
};
pub use numeric::{numeric_monodromy, LoopMatrix, MonodromyData, MonodromyOptions};

use num::{BigRational, ToPrimitive, Zero};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{
    lcm, multiplicity_in, squarefree_decompose, Polynomial, QuadraticNumber, RationalFunction, Vars,
};
use crate::forms::OneForm;
use crate::triple::ProjectiveTriple;

pub type RationalMatrix = [[BigRational; 2]; 2];

/// Where a singular point sits: exactly on ℚ, or bracketed numerically.
#[derive(Debug, Clone, PartialEq)]
pub enum PointLocation {
    Exact(BigRational),
    Numeric { center: Complex64, radius: f64 },
}

impl PointLocation {
    pub fn approx(&self) -> Complex64 {
        match self {
            PointLocation::Exact(p) => Complex64::new(p.to_f64().unwrap_or(f64::NAN), 0.0),
            PointLocation::Numeric { center, .. } => *center,
        }
    }

    pub fn error_radius(&self) -> f64 {
        match self {
            PointLocation::Exact(_) => 0.0,
            PointLocation::Numeric { radius, .. } => *radius,
        }
    }

    pub fn label(&self) -> String {
        match self {
            PointLocation::Exact(p) => p.to_string(),
            PointLocation::Numeric { center, radius } => {
                format!("{:.9}{:+.9}i±{:.1e}", center.re, center.im, radius)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularPoint {
    pub location: PointLocation,
    pub pole_order: u32,
    /// Exact residue matrix at an exact simple pole.
    pub residue: Option<RationalMatrix>,
}

/// `dZ/du = S(u)·Z` with `S` trace-free.
#[derive(Debug, Clone, PartialEq)]
pub struct FuchsianSystem {
    var: String,
    s: [[RationalFunction; 2]; 2],
    points: Vec<SingularPoint>,
    infinity_order: u32,
}

/// Exponents `±μ` at a simple pole, and their difference `2μ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exponents {
    pub plus: QuadraticNumber,
    pub minus: QuadraticNumber,
    pub difference: QuadraticNumber,
}

impl FuchsianSystem {
    pub fn new(var: &str, s: [[RationalFunction; 2]; 2]) -> Result<Self> {
        if s.iter().flatten().any(|e| e.nvars() != 1) {
            return Err(Error::Contract(
                "Fuchsian systems live on one variable".into(),
            ));
        }
        if !(&s[0][0] + &s[1][1]).is_zero() {
            return Err(Error::Contract("system matrix must be trace-free".into()));
        }
        let den = s
            .iter()
            .flatten()
            .fold(Polynomial::one(1), |acc, e| lcm(&acc, e.denominator()));
        let mut points = Vec::new();
        if !den.is_constant() {
            for f in squarefree_decompose(&den)?.iter() {
                for loc in roots::isolate(&f.poly)? {
                    let (pole_order, residue) = match &loc {
                        PointLocation::Exact(p) => local_data(&s, p),
                        PointLocation::Numeric { .. } => (f.multiplicity, None),
                    };
                    points.push(SingularPoint {
                        location: loc,
                        pole_order,
                        residue,
                    });
                }
            }
        }
        points.sort_by(|a, b| {
            let (a, b) = (a.location.approx(), b.location.approx());
            (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap()
        });
        let infinity_order = s
            .iter()
            .flatten()
            .filter(|e| !e.is_zero())
            .map(|e| {
                let n = e.numerator().total_degree().unwrap_or(0) as i64;
                let d = e.denominator().total_degree().unwrap_or(0) as i64;
                (2 + n - d).max(0) as u32
            })
            .max()
            .unwrap_or(0);
        Ok(FuchsianSystem {
            var: var.to_string(),
            s,
            points,
            infinity_order,
        })
    }

    /// `S(u) = Σ Rᵢ/(u − pᵢ)`.
    pub fn from_residues(points: &[(BigRational, RationalMatrix)]) -> Result<Self> {
        let u = Polynomial::var(1, 0);
        let mut s: [[RationalFunction; 2]; 2] =
            std::array::from_fn(|_| std::array::from_fn(|_| RationalFunction::zero(1)));
        for (p, r) in points {
            let lin = &u - &Polynomial::constant(1, p.clone());
            for i in 0..2 {
                for j in 0..2 {
                    let term = RationalFunction::new(
                        Polynomial::constant(1, r[i][j].clone()),
                        lin.clone(),
                    )?;
                    s[i][j] = &s[i][j] + &term;
                }
            }
        }
        Self::new("u", s)
    }

    /// The system `dZ = −A·Z` of a one-variable triple,
    /// `A = [[−β/2, −γ], [α, β/2]]`.
    pub fn from_triple(t: &ProjectiveTriple) -> Result<Self> {
        if t.nvars() != 1 {
            return Err(Error::Contract(
                "monodromy needs a one-variable triple".into(),
            ));
        }
        let [a, b, c] = t.forms().map(|w| w.coeff(0).clone());
        let half = BigRational::new(1.into(), 2.into());
        let s = [[b.scale(&half), c], [-a, -b.scale(&half)]];
        Self::new(&t.vars().names()[0], s)
    }

    /// Inverse of [`FuchsianSystem::from_triple`].
    pub fn to_triple(&self) -> Result<ProjectiveTriple> {
        let form = |r: RationalFunction| OneForm::new(vec![r]);
        let two = BigRational::from_integer(2.into());
        ProjectiveTriple::with_inferred_poles(
            Vars::new(&[self.var.as_str()]),
            form(-self.s[1][0].clone()),
            form(self.s[0][0].scale(&two)),
            form(self.s[0][1].clone()),
        )
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn matrix(&self) -> &[[RationalFunction; 2]; 2] {
        &self.s
    }

    pub fn points(&self) -> &[SingularPoint] {
        &self.points
    }

    /// Pole order of `S du` at `u = ∞` (0 when regular there).
    pub fn infinity_order(&self) -> u32 {
        self.infinity_order
    }

    pub fn point(&self, p: &BigRational) -> Option<&SingularPoint> {
        self.points
            .iter()
            .find(|q| matches!(&q.location, PointLocation::Exact(x) if x == p))
    }

    /// Residue at infinity, `−Σ Rᵢ`, when every finite pole is exact and simple.
    pub fn residue_at_infinity(&self) -> Option<RationalMatrix> {
        if self.infinity_order > 1 {
            return None;
        }
        let mut sum: RationalMatrix = Default::default();
        for p in &self.points {
            let r = p.residue.as_ref()?;
            for i in 0..2 {
                for j in 0..2 {
                    sum[i][j] = &sum[i][j] - &r[i][j];
                }
            }
        }
        Some(sum)
    }
}

/// Pole order and (for simple poles) the residue at an exact point.
fn local_data(s: &[[RationalFunction; 2]; 2], p: &BigRational) -> (u32, Option<RationalMatrix>) {
    let lin = &Polynomial::var(1, 0) - &Polynomial::constant(1, p.clone());
    let order = s
        .iter()
        .flatten()
        .map(|e| multiplicity_in(e.denominator(), &lin))
        .max()
        .unwrap_or(0);
    if order != 1 {
        return (order, None);
    }
    let mut r: RationalMatrix = Default::default();
    for i in 0..2 {
        for j in 0..2 {
            let e = s[i][j].mul_poly(&lin);
            r[i][j] = e.evaluate(std::slice::from_ref(p)).expect("simple pole");
        }
    }
    (order, Some(r))
}

/// Eigenvalues `±μ` of a trace-free residue, `μ² = −det R`.
pub fn residue_exponents(r: &RationalMatrix) -> Exponents {
    let det = &r[0][0] * &r[1][1] - &r[0][1] * &r[1][0];
    let mu = QuadraticNumber::sqrt_of(&-det);
    let two = QuadraticNumber::rational(BigRational::from_integer(2.into()));
    Exponents {
        minus: -&mu,
        difference: &mu * &two,
        plus: mu,
    }
}

/// Three simple poles at `0, 1, −1` with prescribed exponents `±μᵢ`:
/// `R₀ = diag(μ₀, −μ₀)`, `R₁ = [[a, 1], [μ₁² − a², −a]]`, `R₋₁ = −R₀ − R₁`,
/// with `a` fixed by `−det R₋₁ = μ₂²`. Regular at infinity.
pub fn three_point_system(mu: [BigRational; 3]) -> Result<FuchsianSystem> {
    if mu[0].is_zero() {
        return Err(Error::Contract("the exponent at 0 must be nonzero".into()));
    }
    let [m0, m1, m2] = mu;
    let a = (&m2 * &m2 - &m0 * &m0 - &m1 * &m1) / (&m0 * BigRational::from_integer(2.into()));
    let zero = BigRational::zero();
    let one = BigRational::from_integer(1.into());
    let r0 = [[m0.clone(), zero.clone()], [zero, -m0.clone()]];
    let r1 = [[a.clone(), one], [&m1 * &m1 - &a * &a, -a.clone()]];
    let mut r2: RationalMatrix = Default::default();
    for i in 0..2 {
        for j in 0..2 {
            r2[i][j] = -(&r0[i][j] + &r1[i][j]);
        }
    }
    FuchsianSystem::from_residues(&[
        (BigRational::zero(), r0),
        (BigRational::from_integer(1.into()), r1),
        (BigRational::from_integer((-1).into()), r2),
    ])
}

/// Exponents at an exact singular point (regular points give `±0`).
pub fn local_exponents(sys: &FuchsianSystem, p: &BigRational) -> Result<Exponents> {
    let Some(pt) = sys.point(p) else {
        return Ok(residue_exponents(&Default::default()));
    };
    match &pt.residue {
        Some(r) => Ok(residue_exponents(r)),
        None => Err(Error::Contract(format!(
            "pole of order {} at {}: exponents are defined at simple poles only",
            pt.pole_order, p
        ))),
    }
}

/// Exponents at `u = ∞`.
pub fn exponents_at_infinity(sys: &FuchsianSystem) -> Result<Exponents> {
    sys.residue_at_infinity()
        .map(|r| residue_exponents(&r))
        .ok_or_else(|| {
            Error::Contract(format!(
                "exponents at infinity need simple exact poles (order there {})",
                sys.infinity_order()
            ))
        })
}

/// Numeric `exp(2πiμ)` for an exponent.
pub fn monodromy_eigenvalue(mu: &QuadraticNumber) -> Complex64 {
    (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * mu.to_complex()).exp()
}

#[derive(Debug, Clone, Serialize)]
pub struct ExponentDoc {
    pub point: String,
    pub pole_order: u32,
    pub plus: Option<String>,
    pub minus: Option<String>,
}

/// Per-point summary for reports.
pub fn exponent_table(sys: &FuchsianSystem) -> Vec<ExponentDoc> {
    let mut out: Vec<ExponentDoc> = sys
        .points()
        .iter()
        .map(|p| {
            let e = p.residue.as_ref().map(residue_exponents);
            ExponentDoc {
                point: p.location.label(),
                pole_order: p.pole_order,
                plus: e.as_ref().map(|e| e.plus.to_string()),
                minus: e.as_ref().map(|e| e.minus.to_string()),
            }
        })
        .collect();
    if sys.infinity_order() > 0 {
        let e = exponents_at_infinity(sys).ok();
        out.push(ExponentDoc {
            point: "inf".into(),
            pole_order: sys.infinity_order(),
            plus: e.as_ref().map(|e| e.plus.to_string()),
            minus: e.as_ref().map(|e| e.minus.to_string()),
        });
    }
    out
}

#[cfg(test)]
mod tests;
