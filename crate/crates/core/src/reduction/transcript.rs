//! Replayable record of a reduction run.

use serde::{Deserialize, Serialize};

use super::moves::PoleCase;
use crate::error::{Error, Result};
use crate::expr::Vars;
use crate::triple::{Mat2, PolarDivisor, ProjectiveTriple, Section};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarEntry {
    pub component: String,
    pub k: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepTag {
    /// Move at the unique section of a non-invariant component.
    NonInvariantDecrement,
    /// Move at the branch of positive integer quotient.
    LambdaChain,
    /// Accepted trial move at a one-valued section with `k > 1`.
    DegenerateDrop,
    /// Move at `σ` over a codimension-one branch component.
    BranchAbsorption,
    /// Plain gauge change.
    Gauge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptStep {
    pub tag: StepTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<PoleCase>,
    /// Gauge `W = M·Z` applied at this step.
    pub matrix: [[String; 2]; 2],
    pub polar_after: Vec<PolarEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub section_after: Option<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTranscript {
    pub vars: Vec<String>,
    pub initial_digest: String,
    pub final_digest: String,
    pub initial_polar: Vec<PolarEntry>,
    pub final_polar: Vec<PolarEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_section: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_section: Option<[String; 2]>,
    pub steps: Vec<TranscriptStep>,
    /// Why each component stopped, and rejected trial moves.
    pub notes: Vec<String>,
    /// Whether every prefix's polar divisor dominates the final one.
    pub prefix_dominance: bool,
}

pub fn polar_entries(p: &PolarDivisor, vars: &Vars) -> Vec<PolarEntry> {
    p.describe(vars)
        .into_iter()
        .map(|(component, k)| PolarEntry { component, k })
        .collect()
}

pub fn section_strings(s: &Section, vars: &Vars) -> [String; 2] {
    [vars.show(s.s1()), vars.show(s.s2())]
}

pub fn parse_section(s: &[String; 2], vars: &Vars) -> Result<Section> {
    Section::new(vars.rf(&s[0])?, vars.rf(&s[1])?)
}

pub fn matrix_strings(m: &Mat2, vars: &Vars) -> [[String; 2]; 2] {
    m.e.clone().map(|row| row.map(|c| vars.show_rf(&c)))
}

pub fn parse_matrix(m: &[[String; 2]; 2], vars: &Vars) -> Result<Mat2> {
    Ok(Mat2::new(
        vars.rf(&m[0][0])?,
        vars.rf(&m[0][1])?,
        vars.rf(&m[1][0])?,
        vars.rf(&m[1][1])?,
    ))
}

/// Accumulates steps while a reduction runs.
pub(crate) struct Recorder {
    pub t: ProjectiveTriple,
    pub sigma: Option<Section>,
    initial: ProjectiveTriple,
    initial_sigma: Option<Section>,
    steps: Vec<TranscriptStep>,
    polars: Vec<PolarDivisor>,
    pub notes: Vec<String>,
}

impl Recorder {
    pub fn new(t: &ProjectiveTriple, sigma: Option<&Section>) -> Self {
        Recorder {
            t: t.clone(),
            sigma: sigma.cloned(),
            initial: t.clone(),
            initial_sigma: sigma.cloned(),
            steps: Vec::new(),
            polars: vec![t.polar_divisor()],
            notes: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    /// Record an already computed step.
    pub fn push(
        &mut self,
        tag: StepTag,
        matrix: &Mat2,
        next: ProjectiveTriple,
        center: Option<(&crate::expr::Polynomial, &Section)>,
        case: Option<PoleCase>,
    ) -> Result<()> {
        let vars = self.t.vars().clone();
        let sigma = match &self.sigma {
            Some(s) => Some(s.transform(matrix)?),
            None => None,
        };
        let polar = next.polar_divisor();
        self.steps.push(TranscriptStep {
            tag,
            component: center.map(|(f, _)| vars.show(f)),
            center: center.map(|(_, s)| section_strings(s, &vars)),
            case,
            matrix: matrix_strings(matrix, &vars),
            polar_after: polar_entries(&polar, &vars),
            section_after: sigma.as_ref().map(|s| section_strings(s, &vars)),
        });
        self.polars.push(polar);
        self.t = next;
        self.sigma = sigma;
        Ok(())
    }

    pub fn finish(self) -> (ProjectiveTriple, Option<Section>, ReductionTranscript) {
        let vars = self.t.vars().clone();
        let last = self.t.polar_divisor();
        let prefix_dominance = self.polars.iter().all(|p| p.dominates(&last));
        let tr = ReductionTranscript {
            vars: vars.names().to_vec(),
            initial_digest: self.initial.digest(),
            final_digest: self.t.digest(),
            initial_polar: polar_entries(&self.initial.polar_divisor(), &vars),
            final_polar: polar_entries(&last, &vars),
            initial_section: self
                .initial_sigma
                .as_ref()
                .map(|s| section_strings(s, &vars)),
            final_section: self.sigma.as_ref().map(|s| section_strings(s, &vars)),
            steps: self.steps,
            notes: self.notes,
            prefix_dominance,
        };
        (self.t, self.sigma, tr)
    }

    pub fn snapshot(&self) -> ReductionTranscript {
        Recorder {
            t: self.t.clone(),
            sigma: self.sigma.clone(),
            initial: self.initial.clone(),
            initial_sigma: self.initial_sigma.clone(),
            steps: self.steps.clone(),
            polars: self.polars.clone(),
            notes: self.notes.clone(),
        }
        .finish()
        .2
    }
}

/// Re-execute a transcript from `t`, checking every recorded polar
/// snapshot and the final digest.
pub fn replay(
    t: &ProjectiveTriple,
    sigma: Option<&Section>,
    tr: &ReductionTranscript,
) -> Result<(ProjectiveTriple, Option<Section>)> {
    let vars = t.vars();
    if vars.names() != tr.vars.as_slice() {
        return Err(Error::Contract(
            "transcript chart differs from the triple".into(),
        ));
    }
    if t.digest() != tr.initial_digest {
        return Err(Error::Contract(
            "transcript starts from a different triple".into(),
        ));
    }
    let mut cur = t.clone();
    let mut sig = sigma.cloned();
    for (i, step) in tr.steps.iter().enumerate() {
        let m = parse_matrix(&step.matrix, vars)?;
        cur = cur.gauge_transform(&m)?;
        if let Some(s) = &sig {
            sig = Some(s.transform(&m)?);
        }
        if polar_entries(&cur.polar_divisor(), vars) != step.polar_after {
            return Err(Error::Contract(format!("replay diverged at step {i}")));
        }
    }
    if cur.digest() != tr.final_digest {
        return Err(Error::Contract(
            "replayed triple differs from the recorded one".into(),
        ));
    }
    Ok((cur, sig))
}
