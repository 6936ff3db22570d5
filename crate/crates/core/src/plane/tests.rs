use super::*;
use crate::expr::{int, rat};
use crate::reduction::normalize;
use crate::samples;
use proptest::prelude::*;

fn xyz() -> Vars {
    Vars::new(&["x", "y", "z"])
}

pub(crate) fn brunella() -> PlaneFoliation {
    PlaneFoliation::parse(
        xyz(),
        "-y^2*z - x*z^2 + 2*x*y*z",
        "3*x*y*z - 3*x^2*z",
        "x^2*z - 2*x*y^2 + x^2*y",
    )
    .unwrap()
}

const CUBIC: &str = "x^2*z + x*z^2 - 3*x*y*z + y^3";

fn log_combination(cx: BigRational, cz: BigRational, cc: BigRational) -> OneForm {
    let v = xyz();
    let log = |s: &str| OneForm::log_differential(&v.rf(s).unwrap());
    &(&log("x").scale(&cx) + &log("z").scale(&cz)) + &log(CUBIC).scale(&cc)
}

/// `dω = η∧ω` for the Brunella form (solved for the three weights).
fn brunella_eta() -> OneForm {
    log_combination(rat(2, 3), rat(1, 3), int(1))
}

#[test]
fn rejects_malformed_forms() {
    let v = xyz();
    assert!(PlaneFoliation::parse(v.clone(), "y", "x", "0").is_err());
    assert!(PlaneFoliation::parse(v.clone(), "y", "-x^2", "0").is_err());
    // common factor z
    assert!(PlaneFoliation::parse(v.clone(), "y*z", "-x*z", "0").is_err());
    assert!(PlaneFoliation::parse(v, "y", "-x", "0").is_ok());
}

#[test]
fn brunella_invariant_curves() {
    let f = brunella();
    let v = xyz();
    for c in ["x", "z", CUBIC] {
        assert!(
            invariant_curve_test(&f, &v.poly(c).unwrap()).unwrap(),
            "{c}"
        );
    }
    assert!(!invariant_curve_test(&f, &v.poly("y").unwrap()).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let l = (0..3).fold(Polynomial::zero(3), |acc, i| {
            &acc + &Polynomial::var(3, i).scale(&samples::nonzero_rational(&mut rng, 5))
        });
        assert!(!invariant_curve_test(&f, &l).unwrap());
    }
    assert!(invariant_curve_test(&f, &v.poly("x^2").unwrap()).is_err());
}

#[test]
fn brunella_log_derivative() {
    let f = brunella();
    let eta = brunella_eta();
    let r = log_derivative_report(&f, &eta).unwrap();
    assert!(r.homogeneous && r.chart_z && r.chart_x);
    let dx = OneForm::basis(3, 0);
    assert!(!verify_log_derivative(&f, &(&eta + &dx)).unwrap());
}

#[test]
fn swapped_log_weights_fail() {
    let f = brunella();
    let eta = log_combination(int(1), int(1), rat(2, 3));
    assert!(!log_derivative_report(&f, &eta).unwrap().chart_z);
    // the residual is −x·ι_R(dx∧dy∧dz)
    let w = f.form();
    let residual = &w.exterior_derivative() - &eta.wedge(&w);
    let v = xyz();
    assert_eq!(residual.get(0, 1), v.rf("-x*z").unwrap());
    assert_eq!(residual.get(0, 2), v.rf("x*y").unwrap());
    assert_eq!(residual.get(1, 2), v.rf("-x^2").unwrap());
}

#[test]
fn closed_chart_form_with_zero_eta() {
    // y dz − z dy restricts to −dy on z = 1, which is closed
    let f = PlaneFoliation::parse(xyz(), "0", "-z", "y").unwrap();
    let r = log_derivative_report(&f, &OneForm::zero(3)).unwrap();
    assert!(r.chart_z);
    assert!(!r.homogeneous);
}

#[test]
fn degrees() {
    let pencil = PlaneFoliation::parse(xyz(), "0", "-z", "y").unwrap();
    assert_eq!(foliation_degree(&pencil, 1).unwrap().degree, 0);
    let b = foliation_degree(&brunella(), 2).unwrap();
    assert_eq!(b.degree, 2);
    assert_eq!(b.lines.len(), DEGREE_WITNESSES);
    let v2 = Vars::new(&["x", "y"]);
    let lam = rat(3, 7);
    let w = OneForm::new(vec![v2.rf("y").unwrap().scale(&-lam), v2.rf("x").unwrap()]);
    let linear = PlaneFoliation::from_affine(xyz(), &w).unwrap();
    assert_eq!(linear.coefficient_degree(), 2);
    assert_eq!(foliation_degree(&linear, 3).unwrap().degree, 1);
}

#[test]
fn brunella_eccentricity() {
    let d = foliation_degree(&brunella(), 9).unwrap().degree as i64;
    let cubic_and_lines = 1 + 1 + 3;
    assert_eq!(eccentricity(cubic_and_lines, d).eccentricity, 1);
}

#[test]
fn eccentricity_values() {
    for ((p, f), e) in [((6, 2), 2), ((6, 3), 1), ((15, 5), 8), ((15, 9), 4)] {
        let r = eccentricity(p, f);
        assert_eq!(r.eccentricity, e);
        assert_eq!((r.deg_polar, r.deg_foliation), (p, f));
    }
    for d in 1..=4 {
        assert_eq!(eccentricity(d + 1, d).eccentricity, -1);
    }
}

fn xy_poles() -> ProjectiveTriple {
    let v = Vars::new(&["x", "y"]);
    let a = OneForm::log_differential(&v.rf("x").unwrap());
    let c = OneForm::log_differential(&v.rf("y").unwrap());
    let poles = crate::expr::FactorList::new(vec![
        crate::expr::Factor {
            poly: v.poly("x").unwrap(),
            multiplicity: 1,
        },
        crate::expr::Factor {
            poly: v.poly("y").unwrap(),
            multiplicity: 1,
        },
    ]);
    ProjectiveTriple::raw(v, a, OneForm::zero(2), c, poles).unwrap()
}

#[test]
fn restriction_to_lines() {
    let t = xy_poles();
    let line = affine_line([int(2), int(-1)], [int(1), int(3)]);
    let r = restrict_structure_to_line(&t, &line).unwrap();
    assert_eq!(r.finite.len(), 1);
    let finite: u32 = r
        .finite
        .iter()
        .map(|(f, k)| f.total_degree().unwrap() * k)
        .sum();
    assert_eq!(finite, 2);
    // residues 1 at both finite poles leave one at the parameter infinity
    assert_eq!(r.infinity, 1);
    assert_eq!(r.polar_degree, 3);

    let constant = affine_line([int(1), int(1)], [int(0), int(0)]);
    assert!(restrict_structure_to_line(&t, &constant).is_err());
    let through_origin = affine_line([int(0), int(0)], [int(1), int(2)]);
    assert!(restrict_structure_to_line(&t, &through_origin).is_err());
    let parallel = affine_line([int(1), int(0)], [int(0), int(1)]);
    assert!(restrict_structure_to_line(&t, &parallel).is_err());
}

#[test]
fn riccati_family() {
    for d in 1..=3u32 {
        let ex = generate_riccati_example(d, 11 + d as u64).unwrap();
        assert_eq!(foliation_degree(&ex.foliation, 4).unwrap().degree, d);
        for s in &ex.slopes {
            assert!(invariant_curve_test(&ex.foliation, &pencil_line(s)).unwrap());
        }
        assert!(ex.exponents.iter().all(|e| !e.is_integer()));
        let (nf, sigma, _) = normalize(&ex.triple, &ex.section, ReduceOptions::default())
            .unwrap_or_else(|e| panic!("d = {d}: {e}"));
        let polar = nf.polar_divisor();
        assert_eq!(polar.components.len(), d as usize + 1, "d = {d}");
        assert!(polar.components.iter().all(|c| c.k == 1));
        assert!(branch_divisor(&nf, &sigma).unwrap().branch.is_empty());
        let report = plane_polar_degree(&nf).unwrap();
        assert_eq!(report.infinity, 0);
        assert_eq!(report.total, d + 1);
        let e = eccentricity(report.total as i64, d as i64);
        assert_eq!(e.eccentricity, -1);
        let line = affine_line([int(3), int(-2)], [int(1), int(5)]);
        let r = restrict_structure_to_line(&nf, &line).unwrap();
        assert_eq!(r.polar_degree, d + 1);
    }
}

#[test]
fn riccati_generator_is_deterministic() {
    let a = generate_riccati_example(2, 7).unwrap();
    let b = generate_riccati_example(2, 7).unwrap();
    assert_eq!(a.foliation, b.foliation);
    assert!(a.triple.same_forms(&b.triple));
    assert!(generate_riccati_example(0, 1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn log_derivative_is_gauge_consistent(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = samples::unit_like(&mut rng, 3, 2);
        let ur: RationalFunction = u.into();
        let f = brunella();
        let w = f.form().mul(&ur);
        let eta = &brunella_eta() + &OneForm::log_differential(&ur);
        let residual = &w.exterior_derivative() - &eta.wedge(&w);
        prop_assert!(residual.is_zero());
    }

    #[test]
    fn homogenized_affine_forms_satisfy_euler(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = samples::nonzero_polynomial(&mut rng, 2, 3, 4);
        let b = samples::nonzero_polynomial(&mut rng, 2, 3, 4);
        let w = OneForm::new(vec![a.into(), b.into()]);
        let f = PlaneFoliation::from_affine(xyz(), &w).unwrap();
        let euler = (0..3).fold(Polynomial::zero(3), |acc, i| {
            &acc + &(&Polynomial::var(3, i) * &f.coeffs()[i])
        });
        prop_assert!(euler.is_zero());
        let r = foliation_degree(&f, seed).unwrap();
        let again = foliation_degree(&f, seed + 1).unwrap();
        prop_assert_eq!(r.degree, again.degree);
        prop_assert_eq!(r.degree + 1, f.coefficient_degree());
    }
}
