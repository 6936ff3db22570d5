//! Meromorphic differential forms with rational coefficients on an affine
//! chart, with exterior derivative, wedge product and pullback.
//!
//! A chart has `n` coordinates; the main path uses `n = 2`, restrictions to
//! curves and lines use `n = 1`, and homogeneous plane data uses `n = 3`.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::expr::{modular, Polynomial, RationalFunction};

/// `Σ aᵢ dxᵢ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OneForm {
    coeffs: Vec<RationalFunction>,
}

/// `Σ_{i<j} c_ij dxᵢ∧dxⱼ`; absent pairs are zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwoForm {
    nvars: usize,
    coeffs: BTreeMap<(usize, usize), RationalFunction>,
}

impl OneForm {
    pub fn zero(nvars: usize) -> Self {
        OneForm {
            coeffs: vec![RationalFunction::zero(nvars); nvars],
        }
    }

    pub fn new(coeffs: Vec<RationalFunction>) -> Self {
        let n = coeffs.len();
        assert!(
            coeffs.iter().all(|c| c.nvars() == n),
            "coefficients must live on the chart"
        );
        OneForm { coeffs }
    }

    /// `dxᵢ`.
    pub fn basis(nvars: usize, i: usize) -> Self {
        let mut w = Self::zero(nvars);
        w.coeffs[i] = RationalFunction::one(nvars);
        w
    }

    /// The differential `df`.
    pub fn differential(f: &RationalFunction) -> Self {
        OneForm {
            coeffs: (0..f.nvars()).map(|i| f.derivative(i)).collect(),
        }
    }

    /// The logarithmic differential `df / f`.
    pub fn log_differential(f: &RationalFunction) -> Self {
        let inv = f.recip().expect("log differential of zero");
        Self::differential(f).mul(&inv)
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize) -> &RationalFunction {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn mul(&self, f: &RationalFunction) -> Self {
        OneForm {
            coeffs: self.coeffs.iter().map(|c| c * f).collect(),
        }
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        OneForm {
            coeffs: self.coeffs.iter().map(|c| c.mul_poly(p)).collect(),
        }
    }

    pub fn div_poly(&self, p: &Polynomial) -> Self {
        OneForm {
            coeffs: self.coeffs.iter().map(|c| c.div_poly(p)).collect(),
        }
    }

    pub fn scale(&self, c: &num::BigRational) -> Self {
        OneForm {
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    pub fn exterior_derivative(&self) -> TwoForm {
        let n = self.nvars();
        let mut out = TwoForm::zero(n);
        for i in 0..n {
            for j in i + 1..n {
                let c = &self.coeffs[j].derivative(i) - &self.coeffs[i].derivative(j);
                out.set(i, j, c);
            }
        }
        out
    }

    pub fn wedge(&self, other: &OneForm) -> TwoForm {
        assert_eq!(self.nvars(), other.nvars(), "chart mismatch");
        let n = self.nvars();
        let mut out = TwoForm::zero(n);
        for i in 0..n {
            for j in i + 1..n {
                let c =
                    &(&self.coeffs[i] * &other.coeffs[j]) - &(&self.coeffs[j] * &other.coeffs[i]);
                out.set(i, j, c);
            }
        }
        out
    }

    /// Contraction with the vector field `Σ vᵢ ∂ᵢ`.
    pub fn contract(&self, v: &[RationalFunction]) -> RationalFunction {
        self.coeffs
            .iter()
            .zip(v)
            .fold(RationalFunction::zero(self.nvars()), |acc, (a, b)| {
                &acc + &(a * b)
            })
    }

    pub fn pullback(&self, phi: &RationalMap) -> Result<OneForm> {
        phi.check_target(self.nvars())?;
        let m = phi.source_nvars;
        let mut out = vec![RationalFunction::zero(m); m];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let a_star = a.compose(&phi.components)?;
            for (k, o) in out.iter_mut().enumerate() {
                let dphi = &phi.jacobian[i][k];
                if !dphi.is_zero() {
                    *o = &*o + &(&a_star * dphi);
                }
            }
        }
        Ok(OneForm { coeffs: out })
    }

    /// Largest pole order of the coefficients along `f`.
    pub fn pole_order(&self, f: &Polynomial) -> u32 {
        self.coeffs
            .iter()
            .map(|c| crate::expr::multiplicity_in(c.denominator(), f))
            .max()
            .unwrap_or(0)
    }

    /// `f`-adic valuation: the least order over the coefficients (`None` for
    /// the zero form). Poles count negatively.
    pub fn valuation(&self, f: &Polynomial) -> Option<i64> {
        self.coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| {
                crate::expr::multiplicity_in(c.numerator(), f) as i64
                    - crate::expr::multiplicity_in(c.denominator(), f) as i64
            })
            .min()
    }

    /// Whether every coefficient is holomorphic along `f` and vanishes on it.
    pub fn vanishes_mod(&self, f: &Polynomial) -> bool {
        self.coeffs.iter().all(|c| modular::vanishes_mod(c, f))
    }

    /// Ideal criterion for the restriction of `self` to `{f = 0}` to vanish:
    /// `self ∧ df ≡ 0 (mod f)`.
    pub fn restricts_to_zero_on(&self, f: &Polynomial) -> bool {
        let df = OneForm::differential(&RationalFunction::from_poly(f.clone()));
        self.wedge(&df).vanishes_mod(f)
    }

    /// Explicit restriction along a rational parametrization of a curve.
    pub fn restrict_along(&self, parametrization: &RationalMap) -> Result<OneForm> {
        self.pullback(parametrization)
    }

    pub fn map_coeffs(&self, f: impl Fn(&RationalFunction) -> RationalFunction) -> Self {
        OneForm {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn denominators(&self) -> impl Iterator<Item = &Polynomial> {
        self.coeffs.iter().map(|c| c.denominator())
    }
}

impl TwoForm {
    pub fn zero(nvars: usize) -> Self {
        TwoForm {
            nvars,
            coeffs: BTreeMap::new(),
        }
    }

    /// `c dxᵢ∧dxⱼ` for a chart of `nvars` coordinates.
    pub fn from_pairs(nvars: usize, pairs: Vec<((usize, usize), RationalFunction)>) -> Self {
        let mut out = Self::zero(nvars);
        for ((i, j), c) in pairs {
            let cur = out.get(i, j);
            out.set(i, j, &cur + &c);
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Coefficient of `dxᵢ∧dxⱼ`, antisymmetric in `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> RationalFunction {
        if i == j {
            return RationalFunction::zero(self.nvars);
        }
        let (a, b, s) = if i < j { (i, j, false) } else { (j, i, true) };
        let c = self
            .coeffs
            .get(&(a, b))
            .cloned()
            .unwrap_or_else(|| RationalFunction::zero(self.nvars));
        if s {
            -c
        } else {
            c
        }
    }

    fn set(&mut self, i: usize, j: usize, c: RationalFunction) {
        let (a, b, c) = if i < j { (i, j, c) } else { (j, i, -c) };
        if c.is_zero() {
            self.coeffs.remove(&(a, b));
        } else {
            self.coeffs.insert((a, b), c);
        }
    }

    /// Coefficient of `dx∧dy` on a 2-variable chart.
    pub fn dxdy(&self) -> RationalFunction {
        self.get(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &RationalFunction)> {
        self.coeffs.iter()
    }

    pub fn mul(&self, f: &RationalFunction) -> Self {
        let mut out = Self::zero(self.nvars);
        for (&(i, j), c) in &self.coeffs {
            out.set(i, j, c * f);
        }
        out
    }

    pub fn scale(&self, c: &num::BigRational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (&(i, j), a) in &self.coeffs {
            out.set(i, j, a.scale(c));
        }
        out
    }

    pub fn vanishes_mod(&self, f: &Polynomial) -> bool {
        self.coeffs.values().all(|c| modular::vanishes_mod(c, f))
    }

    /// Coefficients of `self ∧ ω` on `dxᵢ∧dxⱼ∧dxₖ`, `i<j<k`.
    pub fn wedge_one(&self, w: &OneForm) -> BTreeMap<(usize, usize, usize), RationalFunction> {
        let n = self.nvars;
        let mut out = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let c = &(&(&self.get(i, j) * w.coeff(k)) - &(&self.get(i, k) * w.coeff(j)))
                        + &(&self.get(j, k) * w.coeff(i));
                    if !c.is_zero() {
                        out.insert((i, j, k), c);
                    }
                }
            }
        }
        out
    }

    pub fn pullback(&self, phi: &RationalMap) -> Result<TwoForm> {
        phi.check_target(self.nvars)?;
        let m = phi.source_nvars;
        let mut out = Self::zero(m);
        for (&(i, j), c) in &self.coeffs {
            let c_star = c.compose(&phi.components)?;
            for k in 0..m {
                for l in k + 1..m {
                    let minor = &(&phi.jacobian[i][k] * &phi.jacobian[j][l])
                        - &(&phi.jacobian[i][l] * &phi.jacobian[j][k]);
                    if !minor.is_zero() {
                        let cur = out.get(k, l);
                        out.set(k, l, &cur + &(&c_star * &minor));
                    }
                }
            }
        }
        Ok(out)
    }
}

impl Add for &OneForm {
    type Output = OneForm;
    fn add(self, o: &OneForm) -> OneForm {
        assert_eq!(self.nvars(), o.nvars(), "chart mismatch");
        OneForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &OneForm {
    type Output = OneForm;
    fn sub(self, o: &OneForm) -> OneForm {
        assert_eq!(self.nvars(), o.nvars(), "chart mismatch");
        OneForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &OneForm {
    type Output = OneForm;
    fn neg(self) -> OneForm {
        OneForm {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Add for &TwoForm {
    type Output = TwoForm;
    fn add(self, o: &TwoForm) -> TwoForm {
        assert_eq!(self.nvars, o.nvars, "chart mismatch");
        let mut out = self.clone();
        for (&(i, j), c) in &o.coeffs {
            let cur = out.get(i, j);
            out.set(i, j, &cur + c);
        }
        out
    }
}

impl Sub for &TwoForm {
    type Output = TwoForm;
    fn sub(self, o: &TwoForm) -> TwoForm {
        self + &(-o)
    }
}

impl Neg for &TwoForm {
    type Output = TwoForm;
    fn neg(self) -> TwoForm {
        TwoForm {
            nvars: self.nvars,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

/// A rational map from a chart with `source_nvars` coordinates; one
/// component per target coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMap {
    source_nvars: usize,
    components: Vec<RationalFunction>,
    /// `jacobian[i][k] = ∂φᵢ/∂tₖ`.
    jacobian: Vec<Vec<RationalFunction>>,
}

impl RationalMap {
    pub fn new(source_nvars: usize, components: Vec<RationalFunction>) -> Result<Self> {
        if components.iter().any(|c| c.nvars() != source_nvars) {
            return Err(Error::Contract(
                "map components must live on the source chart".into(),
            ));
        }
        let jacobian = components
            .iter()
            .map(|c| (0..source_nvars).map(|k| c.derivative(k)).collect())
            .collect();
        Ok(RationalMap {
            source_nvars,
            components,
            jacobian,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(n, (0..n).map(|i| RationalFunction::var(n, i)).collect()).unwrap()
    }

    pub fn source_nvars(&self) -> usize {
        self.source_nvars
    }

    pub fn target_nvars(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[RationalFunction] {
        &self.components
    }

    /// Whether every component is constant (such maps are not dominant
    /// onto anything of positive dimension).
    pub fn is_constant(&self) -> bool {
        self.components.iter().all(|c| c.constant_value().is_some())
    }

    /// Rank of the Jacobian at the generic point equals the target dimension.
    pub fn is_dominant(&self) -> bool {
        generic_rank(&self.jacobian) == self.target_nvars()
    }

    pub fn apply(&self, r: &RationalFunction) -> Result<RationalFunction> {
        r.compose(&self.components)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &RationalMap) -> Result<RationalMap> {
        inner.check_target(self.source_nvars)?;
        let comps = self
            .components
            .iter()
            .map(|c| c.compose(&inner.components))
            .collect::<Result<_>>()?;
        RationalMap::new(inner.source_nvars, comps)
    }

    fn check_target(&self, n: usize) -> Result<()> {
        if self.target_nvars() != n {
            return Err(Error::Contract(format!(
                "map has {} components but the form lives on {} coordinates",
                self.target_nvars(),
                n
            )));
        }
        Ok(())
    }
}

/// Rank of a matrix of rational functions (fraction-free elimination).
fn generic_rank(rows: &[Vec<RationalFunction>]) -> usize {
    let mut m: Vec<Vec<RationalFunction>> = rows.to_vec();
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let piv = m[rank][col].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let factor = &m[r][col] / &piv;
                #[allow(clippy::needless_range_loop)]
                for c in col..ncols {
                    let t = &m[rank][c] * &factor;
                    m[r][c] = &m[r][c] - &t;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Vars;
    use proptest::prelude::*;

    fn v() -> Vars {
        Vars::new(&["x", "y"])
    }

    fn form(a: &str, b: &str) -> OneForm {
        OneForm::new(vec![v().rf(a).unwrap(), v().rf(b).unwrap()])
    }

    #[test]
    fn derivative_examples() {
        for n in 1..5 {
            assert!(form(&format!("1/x^{n}"), "0")
                .exterior_derivative()
                .is_zero());
        }
        assert_eq!(
            form("0", "x").exterior_derivative().dxdy(),
            RationalFunction::one(2)
        );
        let f = v().rf("x^3*y/(x+y^2)").unwrap();
        assert!(OneForm::differential(&f).exterior_derivative().is_zero());
    }

    #[test]
    fn wedge_examples() {
        let w = form("x*y", "1/(x-y)");
        assert!(w.wedge(&w).is_zero());
        assert_eq!(
            form("1", "0").wedge(&form("0", "1")).dxdy(),
            RationalFunction::one(2)
        );
        let fg = form("x^2", "y+1");
        assert_eq!(fg.wedge(&form("1", "0")).dxdy(), -v().rf("y+1").unwrap());
    }

    #[test]
    fn pullback_examples() {
        let w = form("x*y", "1/(x-y)");
        assert_eq!(w.pullback(&RationalMap::identity(2)).unwrap(), w);
        let t = Vars::new(&["t"]);
        let phi = RationalMap::new(1, vec![t.rf("t^2").unwrap(), t.rf("t").unwrap()]).unwrap();
        assert_eq!(
            form("1", "0").pullback(&phi).unwrap().coeff(0),
            &t.rf("2*t").unwrap()
        );
        let bad = RationalMap::new(1, vec![t.rf("1").unwrap(), t.rf("t").unwrap()]).unwrap();
        assert!(form("1/(x-1)", "0").pullback(&bad).is_err());
    }

    #[test]
    fn restriction_examples() {
        let t = Vars::new(&["t"]);
        let axis = RationalMap::new(1, vec![t.rf("0").unwrap(), t.rf("t").unwrap()]).unwrap();
        assert!(form("1", "0").restrict_along(&axis).unwrap().is_zero());
        assert_eq!(
            form("0", "1").restrict_along(&axis).unwrap().coeff(0),
            &RationalFunction::one(1)
        );
        let x = v().poly("x").unwrap();
        assert!(form("0", "x").restricts_to_zero_on(&x));
        assert!(form("1", "0").restricts_to_zero_on(&x));
        assert!(!form("0", "1").restricts_to_zero_on(&x));
    }

    #[test]
    fn dominance() {
        let t = Vars::new(&["t"]);
        let line = RationalMap::new(1, vec![t.rf("t").unwrap(), t.rf("2*t+1").unwrap()]).unwrap();
        assert!(!line.is_dominant());
        assert!(RationalMap::identity(2).is_dominant());
    }

    fn small_rf() -> impl Strategy<Value = RationalFunction> {
        let atoms = prop_oneof![
            Just("x"),
            Just("y"),
            Just("x+1"),
            Just("y-2"),
            Just("x*y+3"),
            Just("x^2-y"),
            Just("2"),
        ];
        (atoms.clone(), atoms.clone(), atoms)
            .prop_map(|(a, b, c)| v().rf(&format!("({a})*({b})/({c})")).unwrap())
    }

    fn small_form() -> impl Strategy<Value = OneForm> {
        (small_rf(), small_rf()).prop_map(|(a, b)| OneForm::new(vec![a, b]))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn d_squared_is_zero(f in small_rf()) {
            prop_assert!(OneForm::differential(&f).exterior_derivative().is_zero());
        }

        #[test]
        fn leibniz(f in small_rf(), w in small_form()) {
            let lhs = w.mul(&f).exterior_derivative();
            let rhs = &OneForm::differential(&f).wedge(&w) + &w.exterior_derivative().mul(&f);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn pullback_commutes_with_d_and_wedge(a in small_form(), b in small_form(), p in small_rf(), q in small_rf()) {
            let phi = RationalMap::new(2, vec![p, q]).unwrap();
            if let (Ok(pa), Ok(pb)) = (a.pullback(&phi), b.pullback(&phi)) {
                prop_assert_eq!(pa.exterior_derivative(), a.exterior_derivative().pullback(&phi).unwrap());
                prop_assert_eq!(pa.wedge(&pb), a.wedge(&b).pullback(&phi).unwrap());
            }
        }
    }
}
