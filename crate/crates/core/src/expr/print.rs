//! Canonical text form; the output is accepted by the parser.

use num::{BigRational, One, Signed};

use super::poly::Polynomial;
use super::rational::RationalFunction;

fn coeff_str(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Terms in descending graded-lex order, e.g. `x^2*z + x*z^2 - 3*x*y*z + y^3`.
pub fn poly_to_string(p: &Polynomial, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        for (v, &e) in m.0.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(names[v].clone()),
                _ => factors.push(format!("{}^{}", names[v], e)),
            }
        }
        if factors.is_empty() {
            out.push_str(&coeff_str(&a));
        } else {
            if !a.is_one() {
                out.push_str(&coeff_str(&a));
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}

pub fn rational_to_string(r: &RationalFunction, names: &[String]) -> String {
    if r.is_polynomial() {
        return poly_to_string(r.numerator(), names);
    }
    let n = poly_to_string(r.numerator(), names);
    let d = poly_to_string(r.denominator(), names);
    let wrap = |s: String, p: &Polynomial| {
        if p.num_terms() > 1 || s.starts_with('-') {
            format!("({s})")
        } else {
            s
        }
    };
    let d = if d.contains(['*', ' ', '/']) {
        format!("({d})")
    } else {
        d
    };
    format!("{}/{}", wrap(n, r.numerator()), d)
}
