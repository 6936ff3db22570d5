use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::expr::{int, RationalFunction, Vars};
use crate::forms::OneForm;
use crate::samples;
use crate::triple::{component_data, Mat2};

fn v() -> Vars {
    Vars::new(&["x", "y"])
}

fn form(a: &str, b: &str) -> OneForm {
    OneForm::new(vec![v().rf(a).unwrap(), v().rf(b).unwrap()])
}

fn triple(a: [&str; 2], b: [&str; 2], c: [&str; 2]) -> ProjectiveTriple {
    ProjectiveTriple::with_inferred_poles(v(), form(a[0], a[1]), form(b[0], b[1]), form(c[0], c[1]))
        .unwrap()
}

fn p(s: &str) -> Polynomial {
    v().poly(s).unwrap()
}

fn sec(a: &str, b: &str) -> Section {
    Section::from_polys(p(a), p(b)).unwrap()
}

fn opts() -> ReduceOptions {
    ReduceOptions::default()
}

#[test]
fn elm_case_one_example() {
    let t = triple(["1/x", "0"], ["0", "0"], ["0", "0"]);
    let mv = ElementaryMove::new(&p("x"), &Section::zero_section(2)).unwrap();
    let e = elm(&t, &mv).unwrap();
    assert_eq!(e.alpha(), &form("1/x^2", "0"));
    assert_eq!(e.beta(), &form("1/x", "0"));
    assert!(e.gamma().is_zero());
    assert_eq!(e.polar_divisor().multiplicity(&p("x")), 2);
    let c = classify_pole_change(&t, &mv).unwrap();
    assert_eq!(
        (c.case, c.predicted, c.table_prediction),
        (PoleCase::Case1, 2, Some(2))
    );
}

#[test]
fn elm_then_opposite_center_is_identity() {
    let t = lambda_three();
    let m1 = ElementaryMove::new(&p("x"), &Section::zero_section(2)).unwrap();
    let once = elm(&t, &m1).unwrap();
    let m2 = ElementaryMove::new(&p("x"), &Section::infinity_section(2)).unwrap();
    let back = elm(&once, &m2).unwrap();
    assert!(back.same_forms(&t));
    assert!(m1
        .matrix()
        .mul(&m2.matrix())
        .projectively_equal(&Mat2::identity(2)));
}

#[test]
fn bezout_mobius_is_unimodular() {
    for (f, s) in [
        ("x - y", sec("1 + y", "y^2")),
        ("x + 2*y - 1", sec("y^2 + 1", "x")),
        ("y - x^2", sec("x", "1 + x")),
    ] {
        let mv = ElementaryMove::new(&p(f), &s).unwrap();
        assert!(mv.mobius.det().constant_value().is_some(), "{f}");
        assert!(mv.is_polynomial());
        assert_eq!(mv.matrix().det(), RationalFunction::from(p(f).monic()));
    }
}

#[test]
fn classify_examples() {
    // k = 1, α ≡ 0, β + dF/F holomorphic: the component disappears.
    let t = triple(["0", "0"], ["-1/x", "0"], ["1/x", "0"]);
    let mv = ElementaryMove::new(&p("x"), &Section::zero_section(2)).unwrap();
    let c = classify_pole_change(&t, &mv).unwrap();
    assert_eq!(
        (c.case, c.predicted, c.table_prediction),
        (PoleCase::Case2, 0, Some(0))
    );
    assert_eq!(
        elm(&t, &mv).unwrap().polar_divisor().multiplicity(&p("x")),
        0
    );
    // k = 2, Fᵏα ≡ Fᵏβ ≡ 0: case 3 with k′ = 1.
    let t = triple(["0", "0"], ["0", "0"], ["1/x^2", "0"]);
    let c = classify_pole_change(&t, &mv).unwrap();
    assert_eq!(
        (c.case, c.predicted, c.table_prediction),
        (PoleCase::Case3, 1, Some(1))
    );
    assert_eq!(
        elm(&t, &mv).unwrap().polar_divisor().multiplicity(&p("x")),
        1
    );
    // Case 2 with k = 1 where the literal table misses the α/F pole.
    let t = triple(["1", "0"], ["-1/x", "0"], ["0", "0"]);
    let c = classify_pole_change(&t, &mv).unwrap();
    assert_eq!(c.case, PoleCase::Case2);
    assert_eq!(c.predicted, 1);
    assert_eq!(c.table_prediction, Some(0));
    assert_eq!(
        elm(&t, &mv).unwrap().polar_divisor().multiplicity(&p("x")),
        1
    );
}

/// Random integrable triple with a pole along a random line, and a center
/// that is either generic or one of the singular sections.
fn oracle_instance(rng: &mut ChaCha8Rng) -> (ProjectiveTriple, ElementaryMove) {
    let a: i64 = rng.gen_range(1..=3);
    let b: i64 = rng.gen_range(-2..=2);
    let phi = v().rf(&format!("{a}*x + {b}*y")).unwrap();
    let t = samples::pulled_back_triple(rng, &phi, &[int(0), int(1)], 3);
    let t = t
        .gauge_transform(&samples::unimodular_gauge(rng, 2, 1))
        .unwrap();
    let f = t.polar_divisor().components[0].component.clone();
    let cd = component_data(&t, &f).unwrap();
    let secs = cd.rational_sections();
    let center = if !secs.is_empty() && rng.gen_bool(0.6) {
        secs[rng.gen_range(0..secs.len())].section.clone()
    } else {
        let s1 = samples::unit_like(rng, 2, 1);
        let s2 = samples::polynomial(rng, 2, 1, 2);
        Section::from_polys(s1, s2).unwrap()
    };
    (t.clone(), ElementaryMove::new(&f, &center).unwrap())
}

#[test]
fn pole_change_prediction_matches_recomputation() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut seen = [false; 3];
    for _ in 0..25 {
        let (t, mv) = oracle_instance(&mut rng);
        let c = classify_pole_change(&t, &mv).unwrap();
        let after = elm(&t, &mv).unwrap();
        assert_eq!(c.predicted, after.pole_order_along(&mv.component));
        seen[c.case as usize] = true;
    }
    assert!(seen[0]);
}

#[test]
fn non_invariant_family_loses_component_in_k_steps() {
    for n in 1..=3u32 {
        let t = triple(
            ["0", &format!("1/x^{n}")],
            [&format!("{n}/x"), "0"],
            ["0", &format!("x^{n}*(1+y^2)")],
        );
        let (r, tr) = reduce_component(&t, &p("x"), opts()).unwrap();
        assert_eq!(tr.steps.len(), n as usize);
        assert!(tr
            .steps
            .iter()
            .all(|s| s.tag == StepTag::NonInvariantDecrement));
        assert_eq!(r.polar_divisor().multiplicity(&p("x")), 0);
        let ks: Vec<u32> = tr
            .steps
            .iter()
            .map(|s| {
                s.polar_after
                    .iter()
                    .find(|e| e.component == "x")
                    .map_or(0, |e| e.k)
            })
            .collect();
        assert_eq!(ks, (0..n).rev().collect::<Vec<_>>());
    }
}

fn lambda_three() -> ProjectiveTriple {
    let base = triple(["0", "0"], ["-3/x", "0"], ["0", "0"]);
    let m = Mat2::from_polys(p("1"), p("x + 1"), p("y"), p("x*y + y + 1"));
    base.gauge_transform(&m).unwrap()
}

#[test]
fn lambda_chain_removes_apparent_component() {
    let t = lambda_three();
    let cd = component_data(&t, &p("x")).unwrap();
    let q = cd.quotients().unwrap();
    assert!(q.iter().any(|l| l.positive_integer() == Some(3)));
    let (r, tr) = reduce_component(&t, &p("x"), opts()).unwrap();
    assert_eq!(tr.steps.len(), 3);
    assert!(tr.steps.iter().all(|s| s.tag == StepTag::LambdaChain));
    assert!(r.polar_divisor().is_empty());
}

#[test]
fn irrational_quotient_is_minimal() {
    let t = triple(["1/x", "0"], ["0", "0"], ["-1/(2*x)", "0"]);
    let (r, tr) = reduce_component(&t, &p("x"), opts()).unwrap();
    assert!(tr.steps.is_empty());
    assert!(r.same_forms(&t));
}

#[test]
fn nilpotent_trial_is_rejected_and_degenerate_accepted() {
    let nil = triple(["1/x", "0"], ["0", "0"], ["1/x^2", "0"]);
    let (r, tr) = reduce_component(&nil, &p("x"), opts()).unwrap();
    assert!(tr.steps.is_empty());
    assert_eq!(r.polar_divisor().multiplicity(&p("x")), 2);
    assert!(tr.notes.iter().any(|n| n.contains("nilpotent")));
    let deg = triple(["0", "0"], ["0", "0"], ["1/x^2", "0"]);
    let (r, tr) = reduce_component(&deg, &p("x"), opts()).unwrap();
    assert_eq!(tr.steps[0].tag, StepTag::DegenerateDrop);
    assert!(r.polar_divisor().multiplicity(&p("x")) < 2);
}

#[test]
fn saddle_node_and_one_valued_stop() {
    // k = 2, two sections.
    let t = triple(["0", "0"], ["1/x^2", "0"], ["0", "0"]);
    let (_, tr) = reduce_component(&t, &p("x"), opts()).unwrap();
    assert!(tr.steps.is_empty());
    // k = 1, one section.
    let t = triple(["0", "0"], ["0", "0"], ["1/x", "0"]);
    let (_, tr) = reduce_component(&t, &p("x"), opts()).unwrap();
    assert!(tr.steps.is_empty());
}

#[test]
fn normalize_absorbs_branch_and_replays() {
    let t = ProjectiveTriple::trivial(v());
    let sigma = sec("1", "x^2");
    let (n, s, tr) = normalize(&t, &sigma, opts()).unwrap();
    assert!(!tr.steps.is_empty());
    assert!(branch_divisor(&n, &s).unwrap().branch.is_empty());
    let (again, s2) = replay(&t, Some(&sigma), &tr).unwrap();
    assert!(again.same_forms(&n));
    assert_eq!(s2.unwrap(), s);
    let (n2, s2, tr2) = normalize(&n, &s, opts()).unwrap();
    assert!(tr2.steps.is_empty(), "{:?}", tr2.notes);
    assert!(n2.same_forms(&n) && s2 == s);
    eprintln!(
        "{:?} {:?}",
        n.polar_divisor().describe(&v()),
        tr.steps.iter().map(|s| s.tag).collect::<Vec<_>>()
    );
    let json = serde_json::to_string(&tr).unwrap();
    let back: ReductionTranscript = serde_json::from_str(&json).unwrap();
    assert_eq!(back, tr);
}

#[test]
fn normalize_already_normal_is_identity() {
    let t = triple(["1/x", "0"], ["0", "0"], ["-1/(2*x)", "0"]);
    let sigma = sec("1", "y");
    let (n, s, tr) = normalize(&t, &sigma, opts()).unwrap();
    assert!(tr.steps.is_empty());
    assert!(n.same_forms(&t));
    assert_eq!(s, sigma);
}

#[test]
fn singular_components_are_refused() {
    assert!(smooth_certified(&p("x^2 + y^2 - 1")));
    assert!(smooth_certified(&p("y - x^2")));
    assert!(!smooth_certified(&p("y^2 - x^3")));
    let t = ProjectiveTriple::with_inferred_poles(
        v(),
        form("0", "0"),
        OneForm::log_differential(&v().rf("y^2 - x^3").unwrap()).scale(&int(-1)),
        form("0", "0"),
    )
    .unwrap();
    assert!(normalize(&t, &sec("1", "x"), opts()).is_err());
}

#[test]
fn compare_examples() {
    let t = triple(["1/x", "0"], ["0", "0"], ["-1/(2*x)", "0"]);
    let sigma = sec("1", "y");
    let c = compare_normal_forms(&t, &t, &sigma, &sigma, 1).unwrap();
    assert_eq!(c.verdict, Verdict::Isomorphic);
    assert!(c.witness.unwrap().projectively_equal(&Mat2::identity(2)));
    let m = Mat2::from_polys(p("2"), p("1"), p("1"), p("1"));
    let t2 = t.gauge_transform(&m).unwrap();
    let s2 = sigma.transform(&m).unwrap();
    let c = compare_normal_forms(&t, &t2, &sigma, &s2, 1).unwrap();
    assert_eq!(c.verdict, Verdict::Isomorphic);
    assert!(c.maps_section);
    assert!(t
        .gauge_transform(c.witness.as_ref().unwrap())
        .unwrap()
        .same_forms(&t2));
    let other = triple(["1/(x*(x-1))", "0"], ["0", "0"], ["-1/(2*x*(x-1))", "0"]);
    let c = compare_normal_forms(&t, &other, &sigma, &sigma, 1).unwrap();
    assert_eq!(c.verdict, Verdict::Distinct);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn prediction_equals_polar_after_elm(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (t, mv) = oracle_instance(&mut rng);
        let c = classify_pole_change(&t, &mv).unwrap();
        prop_assert_eq!(c.predicted, elm(&t, &mv).unwrap().pole_order_along(&mv.component));
    }
}
