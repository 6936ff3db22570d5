//! Sparse multivariate polynomials over ℚ in graded-lexicographic order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};

/// Exponent vector, ordered graded-lexicographically (total degree first,
/// then lexicographic with the first variable most significant).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when every exponent of `other` is dominated.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `nvars` variables with rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(
            i < nvars,
            "variable index {i} out of range for {nvars} variables"
        );
        let mut p = Self::zero(nvars);
        p.terms.insert(Monomial::var(nvars, i), BigRational::one());
        p
    }

    pub fn monomial(mono: Monomial, c: BigRational) -> Self {
        let mut p = Self::zero(mono.0.len());
        if !c.is_zero() {
            p.terms.insert(mono, c);
        }
        p
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, BigRational)>,
    ) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars);
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_value().is_some_and(|c| c.is_one())
    }

    /// Value of a constant polynomial.
    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> BigRational {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    pub fn degree_in(&self, v: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[v]).max()
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.0[v] > 0)
    }

    pub fn active_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.uses_var(v)).collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.mul(mono), a * c))
                .collect(),
        }
    }

    /// Divide by the leading coefficient so the grlex-leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, v: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[v];
            if e == 0 {
                continue;
            }
            let mut nm = m.clone();
            nm.0[v] -= 1;
            out.add_term(nm, c * BigRational::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Exact quotient `self / divisor`, or `None` if it does not divide.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Self::zero(self.nvars));
        }
        let (lm, lc) = divisor.leading_term().expect("nonzero divisor");
        let lc_inv = lc.recip();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(lm)?;
            let qc = c * &lc_inv;
            for (dm, dc) in &divisor.terms {
                rem.add_term(dm.mul(&qm), -(dc * &qc));
            }
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    pub fn divides(&self, other: &Polynomial) -> bool {
        other.div_exact(self).is_some()
    }

    pub fn evaluate(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.nvars);
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num::pow::pow(x.clone(), e as usize);
                }
            }
            total += t;
        }
        total
    }

    /// Coefficients with respect to variable `v` (index = power of `v`);
    /// each coefficient is free of `v`.
    pub fn coefficients_in(&self, v: usize) -> Vec<Polynomial> {
        let deg = self.degree_in(v).unwrap_or(0) as usize;
        let mut out = vec![Self::zero(self.nvars); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            let e = m.0[v] as usize;
            let mut nm = m.clone();
            nm.0[v] = 0;
            out[e].add_term(nm, c.clone());
        }
        out
    }

    pub fn from_coefficients_in(nvars: usize, v: usize, coeffs: &[Polynomial]) -> Self {
        let mut out = Self::zero(nvars);
        for (e, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                let mut nm = m.clone();
                nm.0[v] += e as u32;
                out.add_term(nm, a.clone());
            }
        }
        out
    }

    /// Substitute constants for some variables, keeping the arity.
    pub fn substitute_const(&self, v: usize, value: &BigRational) -> Self {
        let top = self.degree_in(v).unwrap_or(0) as usize;
        let integral = value.is_integer() && self.is_integral();
        if integral {
            // stay in ℤ: rational arithmetic would reduce after every step
            let x = value.numer();
            let mut pows = vec![BigInt::one()];
            for i in 1..=top {
                let next = &pows[i - 1] * x;
                pows.push(next);
            }
            let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
            for (m, c) in &self.terms {
                let mut nm = m.clone();
                let e = std::mem::take(&mut nm.0[v]) as usize;
                *acc.entry(nm).or_default() += c.numer() * &pows[e];
            }
            return Polynomial {
                nvars: self.nvars,
                terms: acc
                    .into_iter()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(m, c)| (m, BigRational::from_integer(c)))
                    .collect(),
            };
        }
        let mut pows = vec![BigRational::one()];
        for i in 1..=top {
            let next = &pows[i - 1] * value;
            pows.push(next);
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut nm = m.clone();
            let e = std::mem::take(&mut nm.0[v]) as usize;
            out.add_term(nm, c * &pows[e]);
        }
        out
    }

    /// Re-embed into a ring with a different number of variables, sending
    /// variable `i` to variable `map[i]`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars);
        let mut out = Self::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; nvars];
            for (i, &k) in m.0.iter().enumerate() {
                e[map[i]] += k;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Homogenize with an extra variable appended at index `nvars`.
    pub fn homogenize(&self) -> Self {
        let d = self.total_degree().unwrap_or(0);
        let mut out = Self::zero(self.nvars + 1);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.push(d - m.degree());
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Lowest common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        use num::Integer;
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Multiply by a rational constant to obtain integer coprime
    /// coefficients whose leading coefficient is positive.
    fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn primitive_integer(&self) -> Self {
        use num::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let l = self.denominator_lcm();
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            let n = c.numer() * (&l / c.denom());
            g = g.gcd(&n);
        }
        let mut s = BigRational::new(l, g);
        if self.leading_coefficient().is_negative() {
            s = -s;
        }
        self.scale(&s)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        if self.is_integral() && rhs.is_integral() {
            let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
            for (m1, c1) in &self.terms {
                for (m2, c2) in &rhs.terms {
                    *acc.entry(m1.mul(m2)).or_default() += c1.numer() * c2.numer();
                }
            }
            return Polynomial {
                nvars: self.nvars,
                terms: acc
                    .into_iter()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(m, c)| (m, BigRational::from_integer(c)))
                    .collect(),
            };
        }
        let mut out = Polynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Display with default variable names `x0, x1, ...`; use
/// [`crate::expr::Vars::show`] for named output.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        f.write_str(&super::print::poly_to_string(self, &names))
    }
}
