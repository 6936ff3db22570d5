//! Batch front end: one verb per invocation, a JSON session document in,
//! a deterministic JSON report out.

pub mod corpus;
pub mod doc;

use std::path::PathBuf;

use num::{BigRational, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::expr::{Polynomial, Vars};
use crate::forms::{OneForm, RationalMap, TwoForm};
use crate::monodromy::{
    exponent_table, numeric_monodromy, parse_word, sl2_lift_exists, Exact, FuchsianSystem,
    MonodromyOptions, PSL2Presentation, RationalMatrix,
};
use crate::plane::{
    affine_line, chart_swap, eccentricity, foliation_degree, invariant_curve_test,
    log_derivative_report, plane_polar_degree, restrict_structure_to_line, Chart,
};
use crate::reduction::transcript::{matrix_strings, polar_entries, section_strings};
use crate::reduction::{
    classify_pole_change, compare_normal_forms, elm_with_section, normalize, reduce_component,
    replay, ElementaryMove, ReduceOptions, ReductionTranscript,
};
use crate::triple::{branch_divisor, component_data, ProjectiveTriple, Section, Sections};

pub use doc::SessionDocument;

pub const VERBS: &[&str] = &[
    "check",
    "polar",
    "component",
    "elm",
    "normalize",
    "replay",
    "compare",
    "degree",
    "invariant-curve",
    "log-derivative",
    "eccentricity",
    "restrict",
    "monodromy",
    "lift",
    "corpus",
];

/// Command-line switches shared by the verbs.
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub chart: Option<Chart>,
    pub extension: Option<i64>,
    pub seed: Option<u64>,
    pub component: Option<String>,
    pub polar: Option<i64>,
    pub degree: Option<i64>,
    pub other: Option<SessionDocument>,
    pub transcript: Option<ReductionTranscript>,
    pub corpus_dir: Option<PathBuf>,
}

/// A finished invocation: the report and the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub code: i32,
}

impl Outcome {
    pub fn render(&self) -> String {
        serde_json::to_string_pretty(&self.report).expect("reports serialize") + "\n"
    }
}

pub fn error_report(e: &Error) -> Value {
    json!({
        "ok": false,
        "error": { "kind": e.kind(), "message": e.to_string() },
    })
}

/// Run one verb; errors become diagnostics with their exit codes.
pub fn execute(
    verb: &str,
    args: &[String],
    doc: Option<&SessionDocument>,
    opts: &Options,
) -> Outcome {
    let result = if verb == "corpus" {
        corpus::run(args, opts)
    } else {
        match doc {
            Some(d) => dispatch(verb, d, opts),
            None => Err(Error::Document(format!("verb `{verb}` needs a document"))),
        }
    };
    match result {
        Ok(report) => {
            let code = if report.get("ok") == Some(&Value::Bool(false)) {
                1
            } else {
                0
            };
            Outcome { report, code }
        }
        Err(e) => Outcome {
            report: error_report(&e),
            code: e.exit_code(),
        },
    }
}

pub fn dispatch(verb: &str, doc: &SessionDocument, opts: &Options) -> Result<Value> {
    match verb {
        "check" => check(doc, opts),
        "polar" => polar(doc, opts),
        "component" => component(doc, opts),
        "elm" => elm_verb(doc, opts),
        "normalize" => normalize_verb(doc, opts),
        "replay" => replay_verb(doc, opts),
        "compare" => compare(doc, opts),
        "degree" => degree(doc, opts),
        "invariant-curve" => invariant_curves(doc),
        "log-derivative" => log_derivative(doc),
        "eccentricity" => eccentricity_verb(doc, opts),
        "restrict" => restrict(doc, opts),
        "monodromy" => monodromy(doc, opts),
        "lift" => lift(doc),
        _ => Err(Error::Document(format!(
            "unknown verb `{verb}` (expected one of {})",
            VERBS.join(", ")
        ))),
    }
}

fn reduce_options(doc: &SessionDocument) -> ReduceOptions {
    let mut o = ReduceOptions::default();
    if let Some(cap) = doc.config().iteration_cap {
        o.iteration_cap = cap;
    }
    o
}

/// Chart of the working triple: as written (`z = 1`), or moved to `x = 1`.
fn working_triple(doc: &SessionDocument, opts: &Options) -> Result<(ProjectiveTriple, Section)> {
    let t = doc.triple()?;
    let sigma = doc.section(&t)?;
    match opts.chart {
        None | Some(Chart::Z) => Ok((t, sigma)),
        Some(Chart::X) => {
            if t.nvars() != 2 {
                return Err(Error::Contract("chart swap needs a plane chart".into()));
            }
            let names = t.vars().names();
            let far = Vars::new(&[names[1].clone(), "z".to_string()]);
            let phi = chart_swap();
            let moved = t.pullback(&phi, far)?;
            let [s1, s2] = sigma.as_rf();
            let s = Section::new(phi.apply(&s1)?, phi.apply(&s2)?)?;
            Ok((moved, s))
        }
    }
}

fn show_two_form(w: &TwoForm, vars: &Vars) -> String {
    let names = vars.names();
    let parts: Vec<String> = w
        .terms()
        .map(|((i, j), c)| format!("({}) d{}^d{}", vars.show_rf(c), names[*i], names[*j]))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn polar_json(t: &ProjectiveTriple) -> Value {
    let p = t.polar_divisor();
    json!({
        "components": polar_entries(&p, t.vars()),
        "degree": p.degree(),
    })
}

fn triple_json(t: &ProjectiveTriple) -> Value {
    serde_json::to_value(doc::TripleDoc::from_triple(t)).expect("serializable")
}

fn check(doc: &SessionDocument, opts: &Options) -> Result<Value> {
    let mut out = Map::new();
    let mut ok = true;
    let mut seen = false;
    if doc.triple.is_some() {
        seen = true;
        let (t, sigma) = working_triple(doc, opts)?;
        let rep = t.integrability();
        ok &= rep.ok;
        let residuals: Vec<String> = rep
            .residuals
            .iter()
            .map(|r| show_two_form(r, t.vars()))
            .collect();
        let mut tj = json!({
            "integrable": rep.ok,
            "residuals": residuals,
            "polar": polar_json(&t),
            "digest": t.digest(),
        });
        if doc.section.is_some() {
            let b = branch_divisor(&t, &sigma)?;
            tj["branch"] = json!(b
                .branch
                .iter()
                .map(|f| json!({"factor": t.vars().show(&f.poly), "multiplicity": f.multiplicity}))
                .collect::<Vec<_>>());
            tj["foliation"] = json!(b.describe_foliation(&t));
        }
        out.insert("triple".into(), tj);
    }
    if doc.foliation.is_some() {
        seen = true;
        let f = doc.foliation()?;
        let mut fj = json!({
            "euler": true,
            "coefficient_degree": f.coefficient_degree(),
        });
        if doc.eta.is_some() {
            let r = log_derivative_report(&f, &eta(doc)?)?;
            ok &= r.holds();
            fj["log_derivative"] = serde_json::to_value(&r).unwrap();
        }
        if !doc.curves.is_empty() {
            fj["invariant_curves"] = curve_table(&f, &doc.curves)?;
        }
        out.insert("foliation".into(), fj);
    }
    if doc.fuchsian.is_some() {
        seen = true;
        let sys = fuchsian(doc)?;
        out.insert("fuchsian".into(), json!({ "points": exponent_table(&sys) }));
    }
    if !seen {
        return Err(Error::Document("nothing to check".into()));
    }
    out.insert("ok".into(), Value::Bool(ok));
    Ok(Value::Object(out))
}

fn polar(doc: &SessionDocument, opts: &Options) -> Result<Value> {
    let (t, _) = working_triple(doc, opts)?;
    let mut out = polar_json(&t);
    if t.nvars() == 2 && opts.chart != Some(Chart::X) {
        out["plane"] = serde_json::to_value(plane_polar_degree(&t)?).unwrap();
    }
    Ok(out)
}

fn component(doc: &SessionDocument, opts: &Options) -> Result<Value> {
    let (t, _) = working_triple(doc, opts)?;
    let text = opts
        .component
        .as_ref()
        .or(doc.component.as_ref())
        .ok_or_else(|| Error::Document("no component given (`component` or --component)".into()))?;
    let f = t.vars().poly(text)?;
    let cd = component_data(&t, &f)?;
    let v = t.vars();
    let show = |s: &Section| section_strings(s, v);
    let extension = opts.extension.or(doc.config().extension);
    let sections = match &cd.sections {
        Sections::Empty => json!([]),
        Sections::Rational(list) => json!(list
            .iter()
            .map(|b| json!({
                "section": show(&b.section),
                "quotient": b.quotient.as_ref().map(|q| q.to_string()),
            }))
            .collect::<Vec<_>>()),
        Sections::Conjugate { d, center, offset } => {
            let allowed = extension.is_some_and(|e| num::BigInt::from(e) == *d);
            if !allowed {
                return Err(Error::NeedsExtension(format!(
                    "sections over {} are defined over Q(sqrt({d})); rerun with --extension {d}",
                    v.show(&cd.component)
                )));
            }
            json!({
                "extension": d.to_string(),
                "center": v.show_rf(center),
                "offset": v.show_rf(offset),
                "z": format!("({}) ± ({})*sqrt({d})", v.show_rf(center), v.show_rf(offset)),
            })
        }
        Sections::DoubleCover { discriminant } => {
            return Err(Error::NeedsExtension(format!(
                "sections are defined over a double cover with discriminant {}",
                v.show_rf(discriminant)
            )))
        }
    };
    Ok(json!({
        "component": v.show(&cd.component),
        "k": cd.k,
        "invariant": cd.invariant,
        "section_count": cd.section_count,
        "sections": sections,
        "exponents": cd.exponents.as_ref().map(|e| e.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        "quotients": cd.quotients().map(|e| e.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        "discriminant": cd.discriminant.as_ref().map(|d| v.show_rf(d)),
    }))
}

fn elm_verb(doc: &SessionDocument, opts: &Options) -> Result<Value> {
    let (t, sigma) = working_triple(doc, opts)?;
    t.require_integrable()?;
    let m = doc
        .elementary_move
        .as_ref()
        .ok_or_else(|| Error::Document("document has no `move`".into()))?;
    let v = t.vars();
    let f = t.find_component(&v.poly(&m.component)?)?;
    let center = crate::reduction::transcript::parse_section(&m.center, v)?;
    let mv = ElementaryMove::new(&f, &center)?;
    let change = classify_pole_change(&t, &mv)?;
    let (moved, s) = elm_with_section(&t, &mv, &sigma)?;
    Ok(json!({
        "matrix": matrix_strings(&mv.matrix(), v),
        "pole_change": {
            "case": change.case.tag(),
            "k": change.k,
            "predicted": change.predicted,
            "table_prediction": change.table_prediction,
            "actual": moved.pole_order_along(&f),
        },
        "triple": triple_json(&moved),
        "section": section_strings(&s, v),
        "polar": polar_json(&moved),
    }))
}

fn normalize_verb(doc: &SessionDocument, opts: &Options) -> Result<Value> {
    let (t, sigma) = working_triple(doc, opts)?;
    let o = reduce_options(doc);
    if let Some(text) = opts.component.as_ref() {
        let f = t.vars().poly(text)?;
        let (r, tr) = reduce_component(&t, &f, o)?;
        return Ok(json!({
            "triple": triple_json(&r),
            "polar": polar_json(&r),
            "transcript": tr,
        }));
    }
    let (nf, s, tr) = normalize(&t, &sigma, o)?;
    Ok(json!({
        "triple": triple_json(&nf),
        "section": section_strings(&s, nf.vars()),
        "polar": polar_json(&nf),
        "transcript": tr,
    }))
}

fn replay_verb(doc: &SessionDocument, opts: &Options) -> Result<Value> {
    let (t, sigma) = working_triple(doc, opts)?;
    let tr = opts
        .transcript
        .as_ref()
        .or(doc.transcript.as_ref())
        .ok_or_else(|| Error::Document("no transcript (`transcript` or --transcript)".into()))?;
    let with_section = tr.initial_section.is_some();
    let (r, s) = replay(&t, with_section.then_some(&sigma), tr)?;
    Ok(json!({
        "ok": true,
        "steps": tr.steps.len(),
        "final_digest": r.digest(),
        "section": s.map(|s| section_strings(&s, r.vars())),
        "polar": polar_json(&r),
    }))
}

fn compare(doc: &SessionDocument, opts: &Options) -> Result<Value> {
    let other = opts
        .other
        .as_ref()
        .or(doc.other.as_deref())
        .ok_or_else(|| Error::Document("no second document (`other` or --other)".into()))?;
    let (t1, s1) = working_triple(doc, opts)?;
    let (t2, s2) = working_triple(other, opts)?;
    let deg = doc.config().max_degree.unwrap_or(1);
    let c = compare_normal_forms(&t1, &t2, &s1, &s2, deg)?;
    Ok(json!({
        "verdict": c.verdict,
        "witness": c.witness.as_ref().map(|m| matrix_strings(m, t1.vars())),
        "maps_section": c.maps_section,
        "reason": c.reason,
        "max_degree": deg,
    }))
}

fn degree(doc: &SessionDocument, opts: &Options) -> Result<Value> {
    let f = doc.foliation()?;
    let seed = doc.seed(opts.seed)?;
    let r = foliation_degree(&f, seed)?;
    let mut out = serde_json::to_value(&r).unwrap();
    out["seed"] = json!(seed);
    Ok(out)
}

fn curve_table(f: &crate::plane::PlaneFoliation, curves: &[String]) -> Result<Value> {
    let mut rows = Vec::new();
    for c in curves {
        let p = f.vars().poly(c)?;
        rows.push(json!({ "curve": c, "invariant": invariant_curve_test(f, &p)? }));
    }
    Ok(Value::Array(rows))
}

fn invariant_curves(doc: &SessionDocument) -> Result<Value> {
    let f = doc.foliation()?;
    if doc.curves.is_empty() {
        return Err(Error::Document("document lists no `curves`".into()));
    }
    Ok(json!({ "curves": curve_table(&f, &doc.curves)? }))
}

fn eta(doc: &SessionDocument) -> Result<OneForm> {
    let (vars, w) = doc
        .eta
        .as_ref()
        .ok_or_else(|| Error::Document("document has no `eta`".into()))?
        .parse()?;
    if vars.len() != 3 {
        return Err(Error::Document("η must be written on x, y, z".into()));
    }
    Ok(w)
}

fn log_derivative(doc: &SessionDocument) -> Result<Value> {
    let f = doc.foliation()?;
    let r = log_derivative_report(&f, &eta(doc)?)?;
    let mut out = serde_json::to_value(&r).unwrap();
    out["ok"] = json!(r.holds());
    Ok(out)
}

fn eccentricity_verb(doc: &SessionDocument, opts: &Options) -> Result<Value> {
    let (deg_f, f_source) = match opts.degree {
        Some(d) => (d, "flag".to_string()),
        None => {
            let seed = doc.seed(opts.seed)?;
            let f = doc.foliation()?;
            (
                foliation_degree(&f, seed)?.degree as i64,
                format!("random lines, seed {seed}"),
            )
        }
    };
    let (deg_p, p_source, plane) = match (opts.polar, doc.declared_polar_degree) {
        (Some(p), _) => (p, "flag", Value::Null),
        (None, Some(p)) => (p, "declared", Value::Null),
        (None, None) => {
            let (t, sigma) = working_triple(doc, opts)?;
            let (nf, _, _) = normalize(&t, &sigma, reduce_options(doc))?;
            let r = plane_polar_degree(&nf)?;
            (
                r.total as i64,
                "normal form",
                serde_json::to_value(&r).unwrap(),
            )
        }
    };
    let r = eccentricity(deg_p, deg_f);
    Ok(json!({
        "deg_polar": r.deg_polar,
        "deg_foliation": r.deg_foliation,
        "eccentricity": r.eccentricity,
        "polar_source": p_source,
        "degree_source": f_source,
        "plane_polar": plane,
    }))
}

fn parse_line(doc: &SessionDocument, vars: &Vars) -> Result<RationalMap> {
    let l = doc
        .line
        .as_ref()
        .ok_or_else(|| Error::Document("document has no `line`".into()))?;
    let q = |s: &String| -> Result<BigRational> {
        vars.poly(s)?
            .constant_value()
            .ok_or_else(|| Error::Document("line data must be rational constants".into()))
    };
    Ok(affine_line(
        [q(&l.point[0])?, q(&l.point[1])?],
        [q(&l.direction[0])?, q(&l.direction[1])?],
    ))
}

fn restrict(doc: &SessionDocument, opts: &Options) -> Result<Value> {
    let (t, _) = working_triple(doc, opts)?;
    let line = parse_line(doc, t.vars())?;
    let r = restrict_structure_to_line(&t, &line)?;
    let tv = Vars::new(&["t"]);
    Ok(json!({
        "alpha": FormDocJson::of(&r.alpha, &tv),
        "beta": FormDocJson::of(&r.beta, &tv),
        "gamma": FormDocJson::of(&r.gamma, &tv),
        "finite": r.finite.iter().map(|(f, k)| json!({"factor": tv.show(f), "order": k})).collect::<Vec<_>>(),
        "infinity_raw": r.infinity_raw,
        "infinity": r.infinity,
        "polar_degree": r.polar_degree,
    }))
}

struct FormDocJson;

impl FormDocJson {
    fn of(w: &OneForm, vars: &Vars) -> Value {
        serde_json::to_value(doc::FormDoc::from_form(w, vars)).unwrap()
    }
}

fn rational_matrix(m: &[[String; 2]; 2]) -> Result<RationalMatrix> {
    let v = Vars::new::<&str>(&[]);
    let q = |s: &String| -> Result<BigRational> {
        v.poly(s)?
            .constant_value()
            .ok_or_else(|| Error::Document("residues must be rational".into()))
    };
    Ok([[q(&m[0][0])?, q(&m[0][1])?], [q(&m[1][0])?, q(&m[1][1])?]])
}

fn fuchsian(doc: &SessionDocument) -> Result<FuchsianSystem> {
    if let Some(fd) = &doc.fuchsian {
        let v = Vars::new::<&str>(&[]);
        let pts = fd
            .residues
            .iter()
            .map(|r| {
                let p = v
                    .poly(&r.point)?
                    .constant_value()
                    .ok_or_else(|| Error::Document("pole locations must be rational".into()))?;
                Ok((p, rational_matrix(&r.matrix)?))
            })
            .collect::<Result<Vec<_>>>()?;
        return FuchsianSystem::from_residues(&pts);
    }
    let t = doc.triple()?;
    if t.nvars() == 1 {
        return FuchsianSystem::from_triple(&t);
    }
    let line = parse_line(doc, t.vars())?;
    let r = restrict_structure_to_line(&t, &line)?;
    let poles = crate::triple::infer_poles(&[], &[&r.alpha, &r.beta, &r.gamma]);
    let lt = ProjectiveTriple::raw(Vars::new(&["t"]), r.alpha, r.beta, r.gamma, poles)?;
    FuchsianSystem::from_triple(&lt)
}

fn monodromy_options(doc: &SessionDocument) -> MonodromyOptions {
    let mut o = MonodromyOptions::default();
    let c = doc.config();
    if let Some(r) = c.rtol {
        o.rtol = r;
    }
    if let Some(a) = c.atol {
        o.atol = a;
    }
    o
}

fn monodromy(doc: &SessionDocument, _opts: &Options) -> Result<Value> {
    let sys = fuchsian(doc)?;
    let data = numeric_monodromy(&sys, monodromy_options(doc))?;
    let gens: Vec<[[num_complex::Complex64; 2]; 2]> = data
        .loops
        .iter()
        .map(|l| [[l.matrix[0], l.matrix[1]], [l.matrix[2], l.matrix[3]]])
        .collect();
    let names: Vec<String> = (0..gens.len()).map(|i| format!("g{i}")).collect();
    // The loop product is ±I whenever infinity is at worst apparent, so the
    // relation is tried even when the trivialization has a pole there.
    let lift = if gens.is_empty() {
        Value::Null
    } else {
        let word: Vec<String> = names.iter().rev().cloned().collect();
        let w = parse_word(&word.join(" "), &names)?;
        let p = PSL2Presentation::new(names, gens, vec![w])?;
        match sl2_lift_exists(&p) {
            Ok(r) => serde_json::to_value(r).unwrap(),
            Err(e) => json!({ "error": e.to_string() }),
        }
    };
    Ok(json!({
        "exponents": exponent_table(&sys),
        "monodromy": data,
        "lift": lift,
    }))
}

/// Parse an element of `ℚ(i)` written as a polynomial in `i`.
pub fn parse_gaussian(text: &str) -> Result<Exact> {
    let v = Vars::new(&["i"]);
    let p: Polynomial = v.poly(text)?;
    let mut re = BigRational::zero();
    let mut im = BigRational::zero();
    for (m, c) in p.terms() {
        match m.0[0] % 4 {
            0 => re += c,
            1 => im += c,
            2 => re -= c,
            _ => im -= c,
        }
    }
    Ok(Exact::new(re, im))
}

fn lift(doc: &SessionDocument) -> Result<Value> {
    let pd = doc
        .presentation
        .as_ref()
        .ok_or_else(|| Error::Document("document has no `presentation`".into()))?;
    let names: Vec<String> = pd.generators.iter().map(|g| g.name.clone()).collect();
    let gens = pd
        .generators
        .iter()
        .map(|g| {
            let e = |i: usize, j: usize| parse_gaussian(&g.matrix[i][j]);
            Ok([[e(0, 0)?, e(0, 1)?], [e(1, 0)?, e(1, 1)?]])
        })
        .collect::<Result<Vec<_>>>()?;
    let rels = pd
        .relations
        .iter()
        .map(|r| parse_word(r, &names))
        .collect::<Result<Vec<_>>>()?;
    let p = PSL2Presentation::new(names, gens, rels)?;
    Ok(serde_json::to_value(sl2_lift_exists(&p)?).unwrap())
}
