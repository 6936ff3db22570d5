//! Reduced quotients of polynomials.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigRational, One, Zero};

use super::gcd::gcd;
use super::poly::Polynomial;
use crate::error::{Error, Result};

/// `numerator / denominator` with `gcd = 1` and a monic denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn zero(nvars: usize) -> Self {
        RationalFunction {
            num: Polynomial::zero(nvars),
            den: Polynomial::one(nvars),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(Polynomial::one(nvars))
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::from_poly(Polynomial::constant(nvars, c))
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::from_poly(Polynomial::from_int(nvars, c))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_poly(Polynomial::var(nvars, i))
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let n = p.nvars();
        RationalFunction {
            num: p,
            den: Polynomial::one(n),
        }
    }

    /// Build `num / den`, reducing to lowest terms.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Contract("zero denominator".into()));
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Polynomial, den: Polynomial) -> Self {
        let n = num.nvars();
        if num.is_zero() {
            return Self::zero(n);
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        };
        let lc = den.leading_coefficient();
        if lc.is_one() {
            RationalFunction { num, den }
        } else {
            let s = lc.recip();
            RationalFunction {
                num: num.scale(&s),
                den: den.scale(&s),
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars());
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        Self::reduce(&self.num * p, self.den.clone())
    }

    pub fn div_poly(&self, p: &Polynomial) -> Self {
        assert!(!p.is_zero(), "division by zero polynomial");
        Self::reduce(self.num.clone(), &self.den * p)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Contract("reciprocal of zero".into()));
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: i32) -> Self {
        if e >= 0 {
            RationalFunction {
                num: self.num.pow(e as u32),
                den: self.den.pow(e as u32),
            }
            .renormalized()
        } else {
            self.recip().expect("negative power of zero").pow(-e)
        }
    }

    fn renormalized(self) -> Self {
        let lc = self.den.leading_coefficient();
        if lc.is_one() {
            self
        } else {
            let s = lc.recip();
            RationalFunction {
                num: self.num.scale(&s),
                den: self.den.scale(&s),
            }
        }
    }

    pub fn derivative(&self, v: usize) -> Self {
        if self.den.is_constant() {
            return RationalFunction {
                num: self.num.derivative(v),
                den: self.den.clone(),
            };
        }
        // With g = gcd(d, d'), (n'·d/g − n·d'/g) / (d·d/g) can only share
        // factors of g with its denominator.
        let dd = self.den.derivative(v);
        let g = gcd(&self.den, &dd);
        let a = self.den.div_exact(&g).expect("gcd divides");
        let b = dd.div_exact(&g).expect("gcd divides");
        let num = &(&self.num.derivative(v) * &a) - &(&self.num * &b);
        let den = &self.den * &a;
        if g.is_constant() {
            if num.is_zero() {
                return Self::zero(self.nvars());
            }
            return RationalFunction { num, den }.renormalized();
        }
        Self::reduce(num, den)
    }

    /// Exact value at a point; `Err(Pole)` when the denominator vanishes.
    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational> {
        let d = self.den.evaluate(point);
        if d.is_zero() {
            return Err(Error::Pole);
        }
        Ok(self.num.evaluate(point) / d)
    }

    /// Substitute rational functions (in a common ring) for every variable.
    pub fn compose(&self, values: &[RationalFunction]) -> Result<Self> {
        let n = compose_poly(&self.num, values);
        let d = compose_poly(&self.den, values);
        let (nn, nd) = n;
        let (dn, dd) = d;
        if dn.is_zero() {
            return Err(Error::Contract(
                "denominator vanishes identically under substitution".into(),
            ));
        }
        Ok(Self::reduce(&nn * &dd, &nd * &dn))
    }

    pub fn remap(&self, nvars: usize, map: &[usize]) -> Self {
        RationalFunction {
            num: self.num.remap(nvars, map),
            den: self.den.remap(nvars, map),
        }
        .renormalized()
    }
}

/// Substitute into a polynomial over a common denominator; returns
/// `(numerator, denominator)` unreduced.
pub(crate) fn compose_poly(
    p: &Polynomial,
    values: &[RationalFunction],
) -> (Polynomial, Polynomial) {
    assert_eq!(values.len(), p.nvars(), "substitution arity mismatch");
    let m = values.first().map(|v| v.nvars()).unwrap_or(0);
    let degs: Vec<u32> = (0..p.nvars())
        .map(|v| p.degree_in(v).unwrap_or(0))
        .collect();
    let mut num_pows: Vec<Vec<Polynomial>> = Vec::new();
    let mut den_pows: Vec<Vec<Polynomial>> = Vec::new();
    for (i, val) in values.iter().enumerate() {
        let mut np = vec![Polynomial::one(m)];
        let mut dp = vec![Polynomial::one(m)];
        for k in 1..=degs[i] as usize {
            np.push(&np[k - 1] * val.numerator());
            dp.push(&dp[k - 1] * val.denominator());
        }
        num_pows.push(np);
        den_pows.push(dp);
    }
    let mut acc = Polynomial::zero(m);
    for (mono, c) in p.terms() {
        let mut t = Polynomial::constant(m, c.clone());
        for (i, &e) in mono.0.iter().enumerate() {
            let e = e as usize;
            let d = degs[i] as usize;
            if e > 0 {
                t = &t * &num_pows[i][e];
            }
            if d > e {
                t = &t * &den_pows[i][d - e];
            }
        }
        acc = &acc + &t;
    }
    let mut den = Polynomial::one(m);
    for (i, &d) in degs.iter().enumerate() {
        if d > 0 {
            den = &den * &den_pows[i][d as usize];
        }
    }
    (acc, den)
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFunction::reduce(&self.num + &rhs.num, self.den.clone());
        }
        let g = gcd(&self.den, &rhs.den);
        let a = self.den.div_exact(&g).expect("gcd divides");
        let b = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &b) + &(&rhs.num * &a);
        RationalFunction::reduce(num, &(&a * &b) * &g)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero(self.nvars());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunction::from_poly(&self.num * &rhs.num);
        }
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = rhs.den.div_exact(&g1).unwrap();
        let n2 = rhs.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        RationalFunction {
            num: &n1 * &n2,
            den: &d1 * &d2,
        }
        .renormalized()
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self * &rhs.recip().expect("division by zero rational function")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $f(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars()).map(|i| format!("x{i}")).collect();
        f.write_str(&super::print::rational_to_string(self, &names))
    }
}
