//! Reduction of a projective triple to normal form by elementary moves.
//!
//! Each polar component is first made minimal (non-invariant decrements,
//! integer-quotient chains, trial moves at one-valued sections of higher
//! order); then every codimension-one branch component of `σ` is absorbed
//! by moves centered at `σ` itself.

pub mod compare;
pub mod moves;
pub mod transcript;

pub use compare::{
    compare_normal_forms, normal_form_invariants, Comparison, ComponentInvariants, Verdict,
};
pub use moves::{
    classify_pole_change, elm, elm_with_section, ElementaryMove, PoleCase, PoleChange,
};
pub use transcript::{replay, PolarEntry, ReductionTranscript, StepTag, TranscriptStep};

use transcript::Recorder;

use crate::error::{Error, Result};
use crate::expr::{factor::canonical_cmp, gcd, resultant, Polynomial, QuadraticNumber};
use crate::triple::{branch_divisor, component_data, ProjectiveTriple, Section, Sections};

pub const DEFAULT_ITERATION_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReduceOptions {
    /// Bound on moves per component (and per branch component).
    pub iteration_cap: usize,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions {
            iteration_cap: DEFAULT_ITERATION_CAP,
        }
    }
}

/// Why a component's reduction stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stop {
    Removed,
    NonIntegerQuotient,
    OneValuedSimple,
    SaddleNode,
    Nilpotent,
}

impl Stop {
    fn describe(self) -> &'static str {
        match self {
            Stop::Removed => "removed",
            Stop::NonIntegerQuotient => "minimal: quotients not positive integers",
            Stop::OneValuedSimple => "minimal: one-valued section, k = 1",
            Stop::SaddleNode => "minimal: two-valued section, k > 1 (saddle-node)",
            Stop::Nilpotent => "minimal: trial move kept k (nilpotent)",
        }
    }
}

/// Make the component `f` minimal; returns the new triple and the steps.
pub fn reduce_component(
    t: &ProjectiveTriple,
    f: &Polynomial,
    opts: ReduceOptions,
) -> Result<(ProjectiveTriple, ReductionTranscript)> {
    t.require_integrable()?;
    let f = t.find_component(f)?;
    let mut rec = Recorder::new(t, None);
    reduce_into(&mut rec, &f, opts)?;
    let (t, _, tr) = rec.finish();
    Ok((t, tr))
}

fn reduce_into(rec: &mut Recorder, f: &Polynomial, opts: ReduceOptions) -> Result<()> {
    let name = rec.t.vars().show(f);
    let start = rec.len();
    loop {
        if rec.len() - start >= opts.iteration_cap {
            return Err(Error::BudgetExceeded(format!(
                "component {name}: more than {} moves; transcript so far: {}",
                opts.iteration_cap,
                serde_json::to_string(&rec.snapshot()).unwrap_or_default()
            )));
        }
        let k = rec.t.pole_order_along(f);
        if k == 0 {
            rec.notes
                .push(format!("{name}: {}", Stop::Removed.describe()));
            return Ok(());
        }
        let cd = component_data(&rec.t, f)?;
        let (center, tag) = if !cd.invariant {
            let s = single_section(&cd.sections, &name)?;
            (s, StepTag::NonInvariantDecrement)
        } else if k == 1 && cd.section_count == 2 {
            match integer_branch(&cd.sections) {
                Some(s) => (s, StepTag::LambdaChain),
                None => {
                    rec.notes
                        .push(format!("{name}: {}", Stop::NonIntegerQuotient.describe()));
                    return Ok(());
                }
            }
        } else if k == 1 {
            rec.notes
                .push(format!("{name}: {}", Stop::OneValuedSimple.describe()));
            return Ok(());
        } else if cd.section_count == 2 {
            rec.notes
                .push(format!("{name}: {}", Stop::SaddleNode.describe()));
            return Ok(());
        } else {
            (
                single_section(&cd.sections, &name)?,
                StepTag::DegenerateDrop,
            )
        };
        let mv = ElementaryMove::new(f, &center)?;
        let change = classify_pole_change(&rec.t, &mv)?;
        let e = mv.matrix();
        let next = rec.t.gauge_transform(&e)?;
        let new_k = next.pole_order_along(f);
        match tag {
            StepTag::DegenerateDrop if new_k >= k => {
                rec.notes.push(format!(
                    "{name}: trial move at {} rejected ({})",
                    center.describe(rec.t.vars()),
                    Stop::Nilpotent.describe()
                ));
                return Ok(());
            }
            StepTag::NonInvariantDecrement if new_k >= k => {
                return Err(Error::Contract(format!(
                    "component {name}: move at the singular section did not lower k"
                )));
            }
            _ => {}
        }
        rec.push(tag, &e, next, Some((f, &center)), Some(change.case))?;
    }
}

fn single_section(s: &Sections, name: &str) -> Result<Section> {
    match s {
        Sections::Rational(v) if v.len() == 1 => Ok(v[0].section.clone()),
        Sections::Rational(v) if v.is_empty() => Err(Error::Contract(format!(
            "component {name}: no singular section found"
        ))),
        Sections::Rational(_) | Sections::Empty => Err(Error::Contract(format!(
            "component {name}: expected a unique singular section"
        ))),
        Sections::Conjugate { .. } | Sections::DoubleCover { .. } => Err(Error::NeedsExtension(
            format!("component {name}: the singular section is not defined over Q"),
        )),
    }
}

/// The branch of positive integer quotient (ties: smaller representative).
fn integer_branch(s: &Sections) -> Option<Section> {
    let Sections::Rational(v) = s else {
        return None;
    };
    v.iter()
        .filter(|b| {
            b.quotient
                .as_ref()
                .and_then(QuadraticNumber::positive_integer)
                .is_some()
        })
        .min_by(|a, b| {
            canonical_cmp(a.section.s1(), b.section.s1())
                .then_with(|| canonical_cmp(a.section.s2(), b.section.s2()))
        })
        .map(|b| b.section.clone())
}

/// Whether the affine curve `f = 0` is certified smooth: no common zero of
/// `f, ∂f/∂x, ∂f/∂y`, shown by coprime resultants in some variable.
pub fn smooth_certified(f: &Polynomial) -> bool {
    if f.total_degree().unwrap_or(0) <= 1 {
        return true;
    }
    let n = f.nvars();
    let grads: Vec<Polynomial> = (0..n).map(|v| f.derivative(v)).collect();
    for v in f.active_vars() {
        let mut g = Polynomial::zero(n);
        for d in &grads {
            let r = if d.uses_var(v) || f.uses_var(v) {
                resultant(f, d, v)
            } else {
                d.clone()
            };
            g = gcd(&g, &r);
            if g.is_constant() {
                break;
            }
        }
        if g.is_constant() && !g.is_zero() {
            return true;
        }
    }
    false
}

/// Reduce every polar component, then absorb the branch components of `σ`.
pub fn normalize(
    t: &ProjectiveTriple,
    sigma: &Section,
    opts: ReduceOptions,
) -> Result<(ProjectiveTriple, Section, ReductionTranscript)> {
    t.require_integrable()?;
    if sigma.nvars() != t.nvars() {
        return Err(Error::Contract("section lives on a different chart".into()));
    }
    branch_divisor(t, sigma)?;
    for c in t.polar_divisor().components {
        if !smooth_certified(&c.component) {
            return Err(Error::Contract(format!(
                "component {} is not certified smooth; normalize needs smooth components",
                t.vars().show(&c.component)
            )));
        }
    }
    let mut rec = Recorder::new(t, Some(sigma));
    let mut done: Vec<Polynomial> = Vec::new();
    loop {
        let next = rec
            .t
            .polar_divisor()
            .components
            .into_iter()
            .map(|c| c.component)
            .find(|f| !done.contains(f));
        let Some(f) = next else { break };
        if !smooth_certified(&f) {
            return Err(Error::Contract(format!(
                "a move created the non-smooth component {}",
                rec.t.vars().show(&f)
            )));
        }
        reduce_into(&mut rec, &f, opts)?;
        done.push(f);
    }
    absorb_branch(&mut rec, opts)?;
    let (out, s, tr) = rec.finish();
    // An input without branch components whose polar divisor is dominated
    // by the reduced one is itself minimal, hence already a normal form.
    if !tr.steps.is_empty()
        && branch_divisor(t, sigma)?.branch.is_empty()
        && out.polar_divisor().dominates(&t.polar_divisor())
    {
        let mut rec = Recorder::new(t, Some(sigma));
        rec.notes
            .push("already in normal form: no branch component and minimal polar divisor".into());
        let (t, s, tr) = rec.finish();
        return Ok((t, s.expect("section tracked"), tr));
    }
    Ok((out, s.expect("section tracked"), tr))
}

fn absorb_branch(rec: &mut Recorder, opts: ReduceOptions) -> Result<()> {
    let start = rec.len();
    loop {
        let sigma = rec.sigma.clone().expect("section tracked");
        let report = branch_divisor(&rec.t, &sigma)?;
        let Some(h) = report.branch.iter().next().map(|f| f.poly.clone()) else {
            return Ok(());
        };
        if rec.len() - start >= opts.iteration_cap {
            return Err(Error::BudgetExceeded(format!(
                "branch absorption: more than {} moves; transcript so far: {}",
                opts.iteration_cap,
                serde_json::to_string(&rec.snapshot()).unwrap_or_default()
            )));
        }
        if !smooth_certified(&h) {
            return Err(Error::Contract(format!(
                "branch component {} is not certified smooth",
                rec.t.vars().show(&h)
            )));
        }
        let mv = ElementaryMove::new(&h, &sigma)?;
        let change = classify_pole_change(&rec.t, &mv)?;
        let e = mv.matrix();
        let next = rec.t.gauge_transform(&e)?;
        rec.push(
            StepTag::BranchAbsorption,
            &e,
            next,
            Some((&h, &sigma)),
            Some(change.case),
        )?;
    }
}

/// Whether `normalize` would leave `(t, σ)` unchanged.
pub fn is_normal_form(t: &ProjectiveTriple, sigma: &Section, opts: ReduceOptions) -> Result<bool> {
    let (_, _, tr) = normalize(t, sigma, opts)?;
    Ok(tr.steps.is_empty())
}

#[cfg(test)]
mod tests;
