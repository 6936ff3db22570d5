use num::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

fn xyz() -> Vars {
    Vars::new(&["x", "y", "z"])
}

fn xy() -> Vars {
    Vars::new(&["x", "y"])
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<BigRational> {
    (0..n)
        .map(|_| rat(rng.gen_range(-40..40), rng.gen_range(1..9)))
        .collect()
}

#[test]
fn parses_brunella_cubic() {
    let v = xyz();
    let c = v.poly("x^2*z + x*z^2 - 3*x*y*z + y^3").unwrap();
    assert_eq!(c.num_terms(), 4);
    assert!(c.is_homogeneous());
    assert_eq!(c.total_degree(), Some(3));
    let pt = [int(1), int(2), int(3)];
    assert_eq!(c.evaluate(&pt), int(3 + 9 - 18 + 8));
}

#[test]
fn parses_zero_and_cancellation() {
    let v = xy();
    assert!(v.poly("0").unwrap().is_zero());
    let p = v.poly("(x+y)^2 - x^2 - 2*x*y").unwrap();
    assert_eq!(p, v.poly("y^2").unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let pt = random_point(&mut rng, 2);
        assert_eq!(p.evaluate(&pt), &pt[1] * &pt[1]);
    }
}

#[test]
fn power_binds_tighter_than_minus() {
    let v = xy();
    assert_eq!(v.poly("-x^2").unwrap(), -v.poly("x^2").unwrap());
    assert_eq!(v.poly("2^3*x").unwrap(), v.poly("8*x").unwrap());
    assert_eq!(v.poly("x/2").unwrap().terms().next().unwrap().1, &rat(1, 2));
}

#[test]
fn parse_errors() {
    let v = xy();
    assert!(matches!(
        v.poly("x + w"),
        Err(Error::UnknownVariable { position: 4, .. })
    ));
    assert!(matches!(v.poly("x +"), Err(Error::Syntax { .. })));
    assert!(matches!(v.poly("(x"), Err(Error::Syntax { .. })));
    assert!(matches!(v.poly("x/y"), Err(Error::Syntax { .. })));
    assert!(matches!(v.poly(""), Err(Error::Syntax { .. })));
    assert!(matches!(v.rf("1/0"), Err(Error::Syntax { .. })));
    assert!(v.rf("x/y").is_ok());
}

use crate::Error;

#[test]
fn gcd_examples() {
    let v = xy();
    let g = gcd(&v.poly("x^2 - y^2").unwrap(), &v.poly("x - y").unwrap());
    assert_eq!(g, v.poly("x - y").unwrap());
    let p = v.poly("x^3 + 2*y").unwrap();
    assert!(gcd(&p, &Polynomial::one(2)).is_one());
    assert_eq!(gcd(&p, &Polynomial::zero(2)), p.monic());
    let q = v.poly("3*x*y - 7").unwrap();
    let r = v.poly("y^2 + x + 1").unwrap();
    let g = gcd(&(&p * &q), &(&p * &r));
    assert_eq!(g, p.monic());
}

#[test]
fn squarefree_examples() {
    let v = xy();
    let l = squarefree_decompose(&v.poly("x^3*y^2").unwrap()).unwrap();
    let mut got: Vec<(String, u32)> = l
        .iter()
        .map(|f| (v.show(&f.poly), f.multiplicity))
        .collect();
    got.sort();
    assert_eq!(got, vec![("x".to_string(), 3), ("y".to_string(), 2)]);

    let p = v.poly("(x+y)^2*(x-y)").unwrap();
    let l = squarefree_decompose(&p).unwrap();
    assert_eq!(l.len(), 2);
    assert!(l.matches(&p));
    assert_eq!(
        l.factors[l.position(&v.poly("x+y").unwrap()).unwrap()].multiplicity,
        2
    );

    let s = v.poly("x^2 + y^3 + 1").unwrap();
    let l = squarefree_decompose(&s).unwrap();
    assert_eq!(l.len(), 1);
    assert_eq!(l.factors[0].multiplicity, 1);
    assert!(squarefree_decompose(&Polynomial::zero(2)).is_err());
}

#[test]
fn pole_order_examples() {
    let v = xy();
    let x = v.poly("x").unwrap();
    let y = v.poly("y").unwrap();
    assert_eq!(pole_order(&v.rf("1/x^2").unwrap(), &x).unwrap(), 2);
    assert_eq!(pole_order(&v.rf("y/x").unwrap(), &y).unwrap(), 0);
    assert!(pole_order(&v.rf("y/x").unwrap(), &Polynomial::one(2)).is_err());
    let f = v.poly("y - x^2 + 1").unwrap();
    let h = v.poly("x*y + 3").unwrap();
    for k in 1..5 {
        let r = RationalFunction::new(h.clone(), f.pow(k)).unwrap();
        assert_eq!(pole_order(&r, &f).unwrap(), k);
    }
}

#[test]
fn evaluate_examples() {
    let v = xy();
    assert_eq!(
        v.rf("5/3").unwrap().evaluate(&[int(1), int(2)]).unwrap(),
        rat(5, 3)
    );
    assert_eq!(
        v.rf("y").unwrap().evaluate(&[int(1), int(2)]).unwrap(),
        int(2)
    );
    assert_eq!(
        v.rf("x/(y-1)")
            .unwrap()
            .evaluate(&[int(3), int(4)])
            .unwrap(),
        int(1)
    );
    assert_eq!(
        v.rf("x/(y-1)").unwrap().evaluate(&[int(3), int(1)]),
        Err(Error::Pole)
    );
}

#[test]
fn resultant_and_coprime_basis() {
    let v = xy();
    let f = v.poly("y^2 - x").unwrap();
    let g = v.poly("y - 1").unwrap();
    // Res_y(y² − x, y − 1) = 1 − x up to sign
    let r = resultant(&f, &g, 1);
    assert_eq!(r.monic(), v.poly("x - 1").unwrap());
    let b = coprime_basis(&[v.poly("x*y").unwrap(), v.poly("x*(y+1)").unwrap()]);
    assert_eq!(b.len(), 3);
}

#[test]
fn modular_reduction() {
    let v = xy();
    let f = v.poly("y - x^2").unwrap();
    let r = v.rf("(y + 2*x^2)/(3*x^2)").unwrap();
    assert_eq!(modular::constant_mod(&r, &f), Some(int(1)));
    assert!(modular::vanishes_mod(
        &v.rf("(y - x^2)*x/(x+1)").unwrap(),
        &f
    ));
    assert!(!modular::vanishes_mod(&v.rf("y").unwrap(), &f));
    let cusp = v.poly("x*y^2 - 1").unwrap();
    assert_eq!(
        modular::constant_mod(&v.rf("x*y^2 + 2").unwrap(), &cusp),
        Some(int(3))
    );
}

#[test]
fn quadratic_numbers() {
    let s = QuadraticNumber::sqrt_of(&int(8));
    assert_eq!(s.to_string(), "2*sqrt(2)");
    assert_eq!(&s * &s, QuadraticNumber::rational(int(8)));
    assert_eq!(
        QuadraticNumber::sqrt_of(&rat(9, 4)),
        QuadraticNumber::rational(rat(3, 2))
    );
    let i = QuadraticNumber::sqrt_of(&int(-1));
    assert!((i.to_complex().im - 1.0).abs() < 1e-15);
    assert!(QuadraticNumber::sqrt_of(&int(9)).positive_integer() == Some(3));
}

fn small_poly(nvars: usize) -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec((proptest::collection::vec(0u32..3, nvars), -5i64..6), 0..5).prop_map(
        move |terms| {
            Polynomial::from_terms(nvars, terms.into_iter().map(|(e, c)| (Monomial(e), int(c))))
        },
    )
}

fn nonzero_poly(nvars: usize) -> impl Strategy<Value = Polynomial> {
    small_poly(nvars).prop_filter("nonzero", |p| !p.is_zero())
}

fn small_rf() -> impl Strategy<Value = RationalFunction> {
    (small_poly(2), nonzero_poly(2)).prop_map(|(n, d)| RationalFunction::new(n, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gcd_divides_both(p in small_poly(2), q in small_poly(2)) {
        let g = gcd(&p, &q);
        if !g.is_zero() {
            let a = p.div_exact(&g).expect("divides p");
            let b = q.div_exact(&g).expect("divides q");
            prop_assert_eq!(&a * &g, p);
            prop_assert!(gcd(&a, &b).is_constant());
        }
    }

    #[test]
    fn gcd_recovers_common_factor(p in nonzero_poly(2), q in nonzero_poly(2), r in nonzero_poly(2)) {
        let g = gcd(&(&p * &q), &(&p * &r));
        prop_assert!(p.divides(&g));
    }

    #[test]
    fn print_parse_roundtrip(p in small_poly(3)) {
        let v = xyz();
        prop_assert_eq!(v.poly(&v.show(&p)).unwrap(), p);
    }

    #[test]
    fn rational_print_parse_roundtrip(r in small_rf()) {
        let v = xy();
        prop_assert_eq!(v.rf(&v.show_rf(&r)).unwrap(), r);
    }

    #[test]
    fn squarefree_reconstructs(p in nonzero_poly(2), q in nonzero_poly(2)) {
        let target = &(&p * &q) * &q;
        let l = squarefree_decompose(&target).unwrap();
        prop_assert!(l.matches(&target));
        prop_assert!(l.validate().is_ok());
    }

    #[test]
    fn field_axioms(a in small_rf(), b in small_rf(), c in small_rf()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, RationalFunction::zero(2));
        if !a.is_zero() {
            prop_assert_eq!(&a / &a, RationalFunction::one(2));
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in small_rf(), b in small_rf(), x in -9i64..9, y in -9i64..9) {
        let pt = [int(x), int(y)];
        if let (Ok(va), Ok(vb)) = (a.evaluate(&pt), b.evaluate(&pt)) {
            if let Ok(vp) = (&a * &b).evaluate(&pt) { prop_assert_eq!(vp, &va * &vb); }
            if let Ok(vs) = (&a + &b).evaluate(&pt) { prop_assert_eq!(vs, &va + &vb); }
        }
    }
}
