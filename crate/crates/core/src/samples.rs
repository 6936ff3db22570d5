//! Seeded random instances for property tests and demos.

use num::BigRational;
use rand::Rng;

use crate::expr::{Monomial, Polynomial, RationalFunction, Vars};
use crate::forms::{OneForm, RationalMap};
use crate::triple::{Mat2, ProjectiveTriple};

pub fn small_rational<R: Rng>(rng: &mut R, h: i64) -> BigRational {
    BigRational::new(rng.gen_range(-h..=h).into(), rng.gen_range(1..=3).into())
}

pub fn nonzero_rational<R: Rng>(rng: &mut R, h: i64) -> BigRational {
    loop {
        let c = small_rational(rng, h);
        if c != BigRational::from_integer(0.into()) {
            return c;
        }
    }
}

/// Polynomial with up to `terms` terms of total degree ≤ `deg`.
pub fn polynomial<R: Rng>(rng: &mut R, nvars: usize, deg: u32, terms: usize) -> Polynomial {
    let mut out = Polynomial::zero(nvars);
    for _ in 0..terms {
        let mut e = vec![0u32; nvars];
        let mut budget = rng.gen_range(0..=deg);
        for slot in e.iter_mut() {
            let take = rng.gen_range(0..=budget);
            *slot = take;
            budget -= take;
        }
        e.rotate_left(rng.gen_range(0..nvars));
        out = &out + &Polynomial::monomial(Monomial(e), small_rational(rng, 5));
    }
    out
}

pub fn nonzero_polynomial<R: Rng>(rng: &mut R, nvars: usize, deg: u32, terms: usize) -> Polynomial {
    loop {
        let p = polynomial(rng, nvars, deg, terms);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Polynomial with nonzero constant term: a unit along every component
/// through the origin's generic neighbourhood, useful as a harmless factor.
pub fn unit_like<R: Rng>(rng: &mut R, nvars: usize, deg: u32) -> Polynomial {
    loop {
        let p = &polynomial(rng, nvars, deg, 2)
            + &Polynomial::constant(nvars, nonzero_rational(rng, 4));
        // the constant term may have cancelled
        if p.terms().any(|(m, _)| m.0.iter().all(|&e| e == 0)) {
            return p;
        }
    }
}

/// One-variable triple `(a(u)du, b(u)du, c(u)du)` with poles at `u = p` for
/// the given rational points (orders in `1..=max_order`).
pub fn one_variable_triple<R: Rng>(
    rng: &mut R,
    points: &[BigRational],
    max_order: u32,
) -> [RationalFunction; 3] {
    let n = 1;
    let u = Polynomial::var(n, 0);
    let mut den = Polynomial::one(n);
    for p in points {
        let lin = &u - &Polynomial::constant(n, p.clone());
        den = &den * &lin.pow(rng.gen_range(1..=max_order));
    }
    let d = den.total_degree().unwrap_or(0);
    [0, 1, 2].map(|_| {
        let num = polynomial(rng, n, d.max(1), 3);
        RationalFunction::new(num, den.clone()).unwrap()
    })
}

/// Pullback of a one-variable triple along `u = φ(x, y)`: always integrable.
pub fn pulled_back_triple<R: Rng>(
    rng: &mut R,
    phi: &RationalFunction,
    points: &[BigRational],
    max_order: u32,
) -> ProjectiveTriple {
    let coeffs = one_variable_triple(rng, points, max_order);
    let vars = Vars::new(&["x", "y"]);
    let du = OneForm::differential(phi);
    let map = RationalMap::new(2, vec![phi.clone()]).unwrap();
    let [a, b, c] = coeffs.map(|r| du.mul(&map.apply(&r).unwrap()));
    ProjectiveTriple::with_inferred_poles(vars, a, b, c).expect("pullbacks are integrable")
}

/// Polynomial gauge matrix with constant nonzero determinant: a product of
/// elementary shears and a constant diagonal.
pub fn unimodular_gauge<R: Rng>(rng: &mut R, nvars: usize, deg: u32) -> Mat2 {
    let one = || RationalFunction::one(nvars);
    let zero = || RationalFunction::zero(nvars);
    let p: RationalFunction = polynomial(rng, nvars, deg, 2).into();
    let q: RationalFunction = polynomial(rng, nvars, deg, 2).into();
    let lower = Mat2::new(one(), zero(), p, one());
    let upper = Mat2::new(one(), q, zero(), one());
    let d = Mat2::diag(
        RationalFunction::constant(nvars, nonzero_rational(rng, 3)),
        RationalFunction::constant(nvars, nonzero_rational(rng, 3)),
    );
    d.mul(&lower).mul(&upper)
}

/// Random invertible matrix of rational functions.
pub fn rational_gauge<R: Rng>(rng: &mut R, nvars: usize) -> Mat2 {
    loop {
        let e: Vec<RationalFunction> = (0..4)
            .map(|_| {
                RationalFunction::new(polynomial(rng, nvars, 2, 2), unit_like(rng, nvars, 1))
                    .unwrap()
            })
            .collect();
        let m = Mat2::new(e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone());
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// Constant invertible matrix.
pub fn constant_gauge<R: Rng>(rng: &mut R, nvars: usize) -> Mat2 {
    loop {
        let e: Vec<RationalFunction> = (0..4)
            .map(|_| RationalFunction::constant(nvars, small_rational(rng, 4)))
            .collect();
        let m = Mat2::new(e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone());
        if !m.det().is_zero() {
            return m;
        }
    }
}
