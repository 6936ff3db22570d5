//! Reduction of rational functions modulo an irreducible curve `f = 0`,
//! i.e. computations in the function field of the curve.
//!
//! Pseudo-remainders in a variable `v` of `f` give representatives of
//! `v`-degree below `deg_v f`; such a representative vanishes mod `f` only
//! if it is identically zero (assuming `lc_v f` is coprime to `f`).

use num::BigRational;

use super::gcd::pseudo_remainder_exact;
use super::poly::Polynomial;
use super::rational::RationalFunction;

/// Variable used for reductions: the one of least positive degree.
pub fn main_var(f: &Polynomial) -> usize {
    *f.active_vars()
        .iter()
        .min_by_key(|&&v| {
            (
                f.degree_in(v).unwrap(),
                f.coefficients_in(v)
                    .last()
                    .map(|c| c.num_terms())
                    .unwrap_or(0),
            )
        })
        .expect("non-constant curve")
}

/// Reduced representative of a polynomial modulo `f` (up to a power of
/// `lc_v f`, which is a unit on the curve).
fn rem(p: &Polynomial, f: &Polynomial, v: usize) -> (Polynomial, u32) {
    pseudo_remainder_exact(p, f, v)
}

/// Whether `r` has no pole along `f`.
pub fn holomorphic_along(r: &RationalFunction, f: &Polynomial) -> bool {
    !f.divides(r.denominator())
}

/// Whether `r` restricts to zero on `f = 0` (requires no pole along `f`).
pub fn vanishes_mod(r: &RationalFunction, f: &Polynomial) -> bool {
    holomorphic_along(r, f) && (r.is_zero() || f.divides(r.numerator()))
}

/// The pair of reduced numerator and denominator representatives,
/// normalized to the same power of `lc_v f`.
fn reduced_pair(r: &RationalFunction, f: &Polynomial) -> (Polynomial, Polynomial) {
    let v = main_var(f);
    let lc = f.coefficients_in(v).pop().unwrap();
    let (mut n, en) = rem(r.numerator(), f, v);
    let (mut d, ed) = rem(r.denominator(), f, v);
    if en < ed {
        n = rem(&(&n * &lc.pow(ed - en)), f, v).0;
    } else if ed < en {
        d = rem(&(&d * &lc.pow(en - ed)), f, v).0;
    }
    (n, d)
}

/// `Some(c)` when `r ≡ c (mod f)` for a rational constant `c`.
pub fn constant_mod(r: &RationalFunction, f: &Polynomial) -> Option<BigRational> {
    if !holomorphic_along(r, f) {
        return None;
    }
    if let Some(c) = r.constant_value() {
        return Some(c);
    }
    let (n, d) = reduced_pair(r, f);
    if n.is_zero() {
        return Some(BigRational::from_integer(0.into()));
    }
    let c = n.leading_coefficient() / d.leading_coefficient();
    if d.scale(&c) == n {
        Some(c)
    } else {
        None
    }
}

/// A simpler representative of `r` on the curve `f = 0`.
pub fn simplify_mod(r: &RationalFunction, f: &Polynomial) -> RationalFunction {
    if !holomorphic_along(r, f) {
        return r.clone();
    }
    let (n, d) = reduced_pair(r, f);
    if d.is_zero() {
        return r.clone();
    }
    let s = RationalFunction::new(n, d).expect("nonzero");
    let size = |q: &RationalFunction| q.numerator().num_terms() + q.denominator().num_terms();
    if size(&s) <= size(r) {
        s
    } else {
        r.clone()
    }
}

/// Whether `a ≡ b (mod f)`.
pub fn congruent(a: &RationalFunction, b: &RationalFunction, f: &Polynomial) -> bool {
    vanishes_mod(&(a - b), f)
}
