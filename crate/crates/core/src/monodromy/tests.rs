use super::*;
use crate::expr::{int, rat};
use crate::reduction::{elm, ElementaryMove};
use crate::triple::Section;
use num_complex::Complex64;

fn rm(e: [[i64; 2]; 2]) -> RationalMatrix {
    e.map(|row| row.map(int))
}

fn sample_system() -> FuchsianSystem {
    three_point_system([rat(1, 3), rat(1, 4), rat(1, 5)]).unwrap()
}

#[test]
fn exponents_of_residues() {
    let e = residue_exponents(&rm([[0, 4], [1, 0]]));
    assert_eq!(e.plus, QuadraticNumber::rational(int(2)));
    assert_eq!(e.minus, QuadraticNumber::rational(int(-2)));
    assert_eq!(e.difference, QuadraticNumber::rational(int(4)));
    let e = residue_exponents(&rm([[0, -2], [1, 0]]));
    assert_eq!(e.plus, QuadraticNumber::sqrt_of(&int(-2)));
    let mu = rat(2, 7);
    let d = [[mu.clone(), int(0)], [int(0), -mu.clone()]];
    assert_eq!(residue_exponents(&d).plus, QuadraticNumber::rational(mu));
}

#[test]
fn exponents_of_the_sample_system() {
    let sys = sample_system();
    assert_eq!(sys.points().len(), 3);
    assert_eq!(sys.infinity_order(), 0);
    let expect = [
        (int(0), rat(1, 3)),
        (int(1), rat(1, 4)),
        (int(-1), rat(1, 5)),
    ];
    let mut total = QuadraticNumber::rational(int(0));
    for (p, mu) in expect {
        let e = local_exponents(&sys, &p).unwrap();
        assert_eq!(e.plus, QuadraticNumber::rational(mu.clone()));
        total = &(&total + &e.plus) + &e.minus;
    }
    assert!(total.is_zero());
    let regular = local_exponents(&sys, &int(5)).unwrap();
    assert!(regular.plus.is_zero());
}

#[test]
fn higher_order_poles_have_no_exponents() {
    let u = Polynomial::var(1, 0);
    let z = RationalFunction::zero(1);
    let c = RationalFunction::new(Polynomial::one(1), u.pow(2)).unwrap();
    let sys = FuchsianSystem::new("u", [[z.clone(), c], [z.clone(), z]]).unwrap();
    assert_eq!(sys.points()[0].pole_order, 2);
    assert!(local_exponents(&sys, &int(0)).is_err());
}

#[test]
fn triple_round_trip() {
    let sys = sample_system();
    let t = sys.to_triple().unwrap();
    let back = FuchsianSystem::from_triple(&t).unwrap();
    assert_eq!(back.matrix(), sys.matrix());
}

#[test]
fn irrational_poles_are_bracketed() {
    // S = R/(u² − 2): poles at ±√2
    let den = &Polynomial::var(1, 0).pow(2) - &Polynomial::from_int(1, 2);
    let z = RationalFunction::zero(1);
    let e = |c: i64| RationalFunction::new(Polynomial::from_int(1, c), den.clone()).unwrap();
    let sys = FuchsianSystem::new("u", [[e(1), z.clone()], [z, e(-1)]]).unwrap();
    assert_eq!(sys.points().len(), 2);
    for p in sys.points() {
        let PointLocation::Numeric { center, radius } = p.location else {
            panic!("√2 is not rational");
        };
        assert!((center.re.abs() - 2f64.sqrt()).abs() <= radius.max(1e-12));
    }
    let m = numeric_monodromy(&sys, MonodromyOptions::default()).unwrap();
    assert!(m.relation_residual < 1e-6);
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() < tol
}

#[test]
fn local_monodromy_matches_exponents() {
    let sys = sample_system();
    let m = numeric_monodromy(&sys, MonodromyOptions::default()).unwrap();
    assert_eq!(m.loops.len(), 3);
    assert!(m.relation_residual < 1e-6, "{}", m.relation_residual);
    assert!(m.max_det_error < 1e-9);
    for p in sys.points() {
        let PointLocation::Exact(x) = &p.location else {
            unreachable!()
        };
        let e = local_exponents(&sys, x).unwrap();
        let want = [
            monodromy_eigenvalue(&e.plus),
            monodromy_eigenvalue(&e.minus),
        ];
        let l = m.find(&p.location.label()).unwrap();
        let got = l.eigenvalues();
        let direct = close(got[0], want[0], 1e-6) && close(got[1], want[1], 1e-6);
        let swapped = close(got[0], want[1], 1e-6) && close(got[1], want[0], 1e-6);
        assert!(direct || swapped, "{got:?} vs {want:?}");
    }
}

#[test]
fn single_point_and_trivial_systems() {
    let mu = rat(3, 10);
    let u = Polynomial::var(1, 0);
    let rf = |c: BigRational| RationalFunction::new(Polynomial::constant(1, c), u.clone()).unwrap();
    let z = RationalFunction::zero(1);
    let sys = FuchsianSystem::new(
        "u",
        [[rf(mu.clone()), z.clone()], [z.clone(), rf(-mu.clone())]],
    )
    .unwrap();
    assert_eq!(sys.infinity_order(), 1);
    let m = numeric_monodromy(&sys, MonodromyOptions::default()).unwrap();
    let ev = m.loops[0].eigenvalues();
    let want = monodromy_eigenvalue(&QuadraticNumber::rational(mu));
    assert!(close(ev[0], want, 1e-6) || close(ev[1], want, 1e-6));

    let trivial = FuchsianSystem::new("u", [[z.clone(), z.clone()], [z.clone(), z]]).unwrap();
    let m = numeric_monodromy(&trivial, MonodromyOptions::default()).unwrap();
    assert!(m.loops.is_empty());
    assert_eq!(m.relation_residual, 0.0);
}

#[test]
fn traces_survive_an_elementary_move() {
    let sys = sample_system();
    let t = sys.to_triple().unwrap();
    let before = numeric_monodromy(&sys, MonodromyOptions::default()).unwrap();
    let u = Polynomial::var(1, 0);
    for center in [Section::zero_section(1), Section::infinity_section(1)] {
        let mv = ElementaryMove::new(&u, &center).unwrap();
        let moved = FuchsianSystem::from_triple(&elm(&t, &mv).unwrap()).unwrap();
        let after = numeric_monodromy(&moved, MonodromyOptions::default()).unwrap();
        for l in &before.loops {
            let m = after.find(&l.point).unwrap();
            let (a, b) = (l.trace() * l.trace(), m.trace() * m.trace());
            assert!(close(a, b, 1e-6), "{} {a} {b}", l.point);
        }
    }
}

fn gaussian(re: i64, im: i64) -> Exact {
    Exact::new(int(re), int(im))
}

fn exact(e: [[(i64, i64); 2]; 2]) -> [[Exact; 2]; 2] {
    e.map(|row| row.map(|(a, b)| gaussian(a, b)))
}

fn names(n: &[&str]) -> Vec<String> {
    n.iter().map(|s| s.to_string()).collect()
}

#[test]
fn warning_group_does_not_lift() {
    let a = exact([[(0, 0), (1, 0)], [(1, 0), (0, 0)]]);
    let b = exact([[(-1, 0), (0, 0)], [(0, 0), (1, 0)]]);
    let nm = names(&["a", "b"]);
    let w = parse_word("a b a^-1 b^-1", &nm).unwrap();
    let p = PSL2Presentation::new(nm, vec![a, b], vec![w]).unwrap();
    let r = sl2_lift_exists(&p).unwrap();
    assert!(!r.lifts);
    assert_eq!(r.assignments_tried, 4);
    assert_eq!(r.defects, vec![-1]);
}

#[test]
fn trivial_and_sphere_representations_lift() {
    let id = exact([[(1, 0), (0, 0)], [(0, 0), (1, 0)]]);
    let nm = names(&["a", "b"]);
    let w = parse_word("a*b*a^-1*b^-1", &nm).unwrap();
    let p = PSL2Presentation::new(nm, vec![id.clone(), id], vec![w]).unwrap();
    let r = sl2_lift_exists(&p).unwrap();
    assert!(r.lifts);
    assert_eq!(r.signs, Some(vec![1, 1]));

    // g₁g₂g₃ = −I on the thrice-punctured sphere, g₁ with determinant 4
    let g1 = exact([[(4, 0), (2, 0)], [(2, 0), (2, 0)]]);
    let g2 = exact([[(1, 0), (3, 0)], [(0, 0), (1, 0)]]);
    // (g₁/2 · g₂)⁻¹ = [[−1, 7/2 ... computed exactly below
    let half = Exact::new(rat(1, 2), int(0));
    let h1 = g1.clone().map(|r| r.map(|e| e * &half));
    let prod = mmul_exact(&h1, &g2);
    let g3 = [
        [-prod[1][1].clone(), prod[0][1].clone()],
        [prod[1][0].clone(), -prod[0][0].clone()],
    ];
    let nm = names(&["a", "b", "c"]);
    let w = parse_word("a b c", &nm).unwrap();
    let p = PSL2Presentation::new(nm, vec![g1, g2, g3], vec![w]).unwrap();
    let r = sl2_lift_exists(&p).unwrap();
    assert_eq!(r.defects, vec![-1]);
    assert!(r.lifts);
    assert!(r.witness.is_some());
}

fn mmul_exact(a: &[[Exact; 2]; 2], b: &[[Exact; 2]; 2]) -> [[Exact; 2]; 2] {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

#[test]
fn determinants_without_roots_are_reported() {
    let g = exact([[(2, 0), (0, 0)], [(0, 0), (1, 0)]]);
    let nm = names(&["a"]);
    let w = parse_word("a a^-1", &nm).unwrap();
    let p = PSL2Presentation::new(nm, vec![g], vec![w]).unwrap();
    assert!(matches!(sl2_lift_exists(&p), Err(Error::Contract(_))));
}

#[test]
fn twelve_generators_are_searched_exhaustively() {
    let swap = exact([[(0, 0), (1, 0)], [(1, 0), (0, 0)]]);
    let flip = exact([[(-1, 0), (0, 0)], [(0, 0), (1, 0)]]);
    let id = exact([[(1, 0), (0, 0)], [(0, 0), (1, 0)]]);
    let mut gens = vec![swap, flip];
    gens.extend((0..10).map(|_| id.clone()));
    let nm: Vec<String> = (0..12).map(|i| format!("g{i}")).collect();
    let w = parse_word("g0 g1 g0^-1 g1^-1", &nm).unwrap();
    let start = std::time::Instant::now();
    let r = sl2_lift_exists(&PSL2Presentation::new(nm, gens, vec![w]).unwrap()).unwrap();
    assert!(!r.lifts);
    assert_eq!(r.assignments_tried, 4096);
    assert!(start.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn numeric_monodromy_lifts() {
    let m = numeric_monodromy(&sample_system(), MonodromyOptions::default()).unwrap();
    let gens: Vec<[[Complex64; 2]; 2]> = m
        .loops
        .iter()
        .map(|l| [[l.matrix[0], l.matrix[1]], [l.matrix[2], l.matrix[3]]])
        .collect();
    let nm: Vec<String> = (0..gens.len()).map(|i| format!("g{i}")).collect();
    let w = parse_word("g2 g1 g0", &nm).unwrap();
    let r = sl2_lift_exists(&PSL2Presentation::new(nm, gens, vec![w]).unwrap()).unwrap();
    assert!(r.lifts);
}
