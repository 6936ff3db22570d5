//! JSON documents: forms, triples, sessions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::factor::FactorDoc;
use crate::expr::{Factor, FactorList, RationalFunction, Vars};
use crate::forms::OneForm;
use crate::plane::PlaneFoliation;
use crate::reduction::transcript::{parse_matrix, parse_section};
use crate::reduction::ReductionTranscript;
use crate::triple::{show_form, Mat2, ProjectiveTriple, Section};

/// `{ "chart": ["x", "y"], "dx": "<expr>", "dy": "<expr>" }`; missing
/// differentials are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormDoc {
    pub chart: Vec<String>,
    #[serde(flatten)]
    pub coeffs: BTreeMap<String, String>,
}

impl FormDoc {
    pub fn parse(&self) -> Result<(Vars, OneForm)> {
        let vars = Vars::new(&self.chart);
        for key in self.coeffs.keys() {
            let ok = key
                .strip_prefix('d')
                .is_some_and(|v| vars.index(v).is_some());
            if !ok {
                return Err(Error::Document(format!(
                    "form key `{key}` is not d<chart variable>"
                )));
            }
        }
        let coeffs = self
            .chart
            .iter()
            .map(|v| match self.coeffs.get(&format!("d{v}")) {
                Some(text) => vars.rf(text),
                None => Ok(RationalFunction::zero(vars.len())),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((vars, OneForm::new(coeffs)))
    }

    pub fn from_form(w: &OneForm, vars: &Vars) -> Self {
        let coeffs = vars
            .names()
            .iter()
            .zip(w.coeffs())
            .filter(|(_, c)| !c.is_zero())
            .map(|(v, c)| (format!("d{v}"), vars.show_rf(c)))
            .collect();
        FormDoc {
            chart: vars.names().to_vec(),
            coeffs,
        }
    }
}

/// `{ "alpha": form, "beta": form, "gamma": form, "poles": [...] }`; poles
/// are inferred from the denominators when omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleDoc {
    pub alpha: FormDoc,
    pub beta: FormDoc,
    pub gamma: FormDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poles: Option<Vec<FactorDoc>>,
}

impl TripleDoc {
    /// Parse without requiring integrability (analysis verbs report it).
    pub fn parse(&self) -> Result<ProjectiveTriple> {
        let (vars, a) = self.alpha.parse()?;
        let (vb, b) = self.beta.parse()?;
        let (vc, c) = self.gamma.parse()?;
        if vb != vars || vc != vars {
            return Err(Error::Document("α, β, γ must share one chart".into()));
        }
        match &self.poles {
            None => {
                let poles = crate::triple::infer_poles(&[], &[&a, &b, &c]);
                ProjectiveTriple::raw(vars, a, b, c, poles)
            }
            Some(list) => {
                let factors = list
                    .iter()
                    .map(|f| {
                        Ok(Factor {
                            poly: vars.poly(&f.factor)?,
                            multiplicity: f.multiplicity,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                ProjectiveTriple::raw(vars, a, b, c, FactorList::new(factors))
            }
        }
    }

    pub fn from_triple(t: &ProjectiveTriple) -> Self {
        let v = t.vars();
        TripleDoc {
            alpha: FormDoc::from_form(t.alpha(), v),
            beta: FormDoc::from_form(t.beta(), v),
            gamma: FormDoc::from_form(t.gamma(), v),
            poles: Some(
                t.declared_poles()
                    .iter()
                    .map(|f| FactorDoc {
                        factor: v.show(&f.poly),
                        multiplicity: f.multiplicity,
                    })
                    .collect(),
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveDoc {
    pub component: String,
    pub center: [String; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineDoc {
    pub point: [String; 2],
    pub direction: [String; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidueDoc {
    pub point: String,
    pub matrix: [[String; 2]; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuchsianDoc {
    pub residues: Vec<ResidueDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorDoc {
    pub name: String,
    /// Entries in `ℚ(i)`, e.g. `"1/2 - 3*i"`.
    pub matrix: [[String; 2]; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresentationDoc {
    pub generators: Vec<GeneratorDoc>,
    pub relations: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iteration_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rtol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atol: Option<f64>,
}

/// Everything a verb may need; each verb reads the fields it uses.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triple: Option<TripleDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub section: Option<[String; 2]>,
    /// Homogeneous form on `["x", "y", "z"]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub foliation: Option<FormDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curves: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<FormDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_polar_degree: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none", rename = "move")]
    pub elementary_move: Option<MoveDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<LineDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub other: Option<Box<SessionDocument>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transcript: Option<ReductionTranscript>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fuchsian: Option<FuchsianDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<PresentationDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<ConfigDoc>,
}

impl SessionDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }

    pub fn config(&self) -> ConfigDoc {
        self.config.clone().unwrap_or_default()
    }

    pub fn triple(&self) -> Result<ProjectiveTriple> {
        self.triple
            .as_ref()
            .ok_or_else(|| Error::Document("document has no `triple`".into()))?
            .parse()
    }

    /// The declared section, `[1 : 0]` by default.
    pub fn section(&self, t: &ProjectiveTriple) -> Result<Section> {
        match &self.section {
            Some(s) => parse_section(s, t.vars()),
            None => Ok(Section::zero_section(t.nvars())),
        }
    }

    pub fn foliation(&self) -> Result<PlaneFoliation> {
        let doc = self
            .foliation
            .as_ref()
            .ok_or_else(|| Error::Document("document has no `foliation`".into()))?;
        let (vars, w) = doc.parse()?;
        if vars.len() != 3 {
            return Err(Error::Document(
                "foliation must be written on three homogeneous coordinates".into(),
            ));
        }
        let polys = w
            .coeffs()
            .iter()
            .map(|c| {
                c.as_polynomial().cloned().ok_or_else(|| {
                    Error::Document("foliation coefficients must be polynomials".into())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let [a, b, c]: [_; 3] = polys.try_into().expect("three coefficients");
        PlaneFoliation::new(vars, a, b, c)
    }

    pub fn seed(&self, flag: Option<u64>) -> Result<u64> {
        flag.or(self.seed)
            .ok_or_else(|| Error::Document("this verb is randomized: give `seed` or --seed".into()))
    }
}

pub fn parse_mat(m: &[[String; 2]; 2], vars: &Vars) -> Result<Mat2> {
    parse_matrix(m, vars)
}

pub fn show_forms(t: &ProjectiveTriple) -> [String; 3] {
    t.forms().map(|w| show_form(w, t.vars()))
}
