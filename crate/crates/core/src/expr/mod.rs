//! Exact polynomials and rational functions over ℚ.

pub mod factor;
pub mod gcd;
pub mod modular;
pub mod parse;
pub mod poly;
pub mod print;
pub mod quadratic;
pub mod rational;

pub use factor::{
    coprime_basis, is_squarefree, multiplicity_in, pole_order, squarefree_decompose, Factor,
    FactorList,
};
pub use gcd::{gcd, lcm, resultant};
pub use parse::{parse_polynomial, parse_rational};
pub use poly::{Monomial, Polynomial};
pub use quadratic::QuadraticNumber;
pub use rational::RationalFunction;

use num::BigRational;

/// Ordered variable names of a chart or ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vars {
    names: Vec<String>,
}

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        Vars {
            names: names.iter().map(|s| s.as_ref().to_string()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn show(&self, p: &Polynomial) -> String {
        print::poly_to_string(p, &self.names)
    }

    pub fn show_rf(&self, r: &RationalFunction) -> String {
        print::rational_to_string(r, &self.names)
    }

    pub fn poly(&self, text: &str) -> crate::Result<Polynomial> {
        parse_polynomial(text, self)
    }

    pub fn rf(&self, text: &str) -> crate::Result<RationalFunction> {
        parse_rational(text, self)
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

#[cfg(test)]
mod tests;
