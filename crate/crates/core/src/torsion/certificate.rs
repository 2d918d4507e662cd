//! Certificate data model and its JSON form.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presentations::{Presentation, PresentationError};
use crate::words::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepOp {
    /// `base^conj`.
    Base { conj: Word },
    /// Product of two earlier steps.
    Product { left: usize, right: usize },
    /// An earlier step conjugated by `by`.
    Conj { of: usize, by: Word },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub op: StepOp,
    /// Optional shorter word the step is claimed to equal in the group.
    /// Claims are checked by the verifier and then used in place of the
    /// step's word, which is how hand proofs substitute relators.
    pub claim: Option<Word>,
}

impl Step {
    pub fn base(conj: Word) -> Self {
        Step {
            op: StepOp::Base { conj },
            claim: None,
        }
    }

    pub fn product(left: usize, right: usize) -> Self {
        Step {
            op: StepOp::Product { left, right },
            claim: None,
        }
    }

    pub fn conj(of: usize, by: Word) -> Self {
        Step {
            op: StepOp::Conj { of, by },
            claim: None,
        }
    }

    pub fn claiming(mut self, w: Word) -> Self {
        self.claim = Some(w);
        self
    }

    fn parents(&self) -> Vec<usize> {
        match self.op {
            StepOp::Base { .. } => vec![],
            StepOp::Product { left, right } => vec![left, right],
            StepOp::Conj { of, .. } => vec![of],
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("step {step}: {reason}")]
    Malformed { step: usize, reason: String },
    #[error("certificate has no steps")]
    Empty,
    #[error("final step {0} out of range")]
    FinalOutOfRange(usize),
    #[error("invalid certificate JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionCertificate {
    pub presentation: Presentation,
    pub base: Word,
    pub steps: Vec<Step>,
    pub final_step: usize,
}

impl TorsionCertificate {
    /// `base^{c_1} ⋯ base^{c_k}` as a left-folded chain of products.
    pub fn from_conjugators(presentation: Presentation, base: Word, conjugators: &[Word]) -> Self {
        assert!(!conjugators.is_empty(), "need at least one conjugator");
        let mut steps: Vec<Step> = Vec::new();
        let mut acc = 0;
        for (i, c) in conjugators.iter().enumerate() {
            steps.push(Step::base(c.clone()));
            if i > 0 {
                steps.push(Step::product(acc, steps.len() - 1));
            }
            acc = steps.len() - 1;
        }
        TorsionCertificate {
            presentation,
            base,
            steps,
            final_step: acc,
        }
    }

    /// Index and letter-range checks.
    pub fn validate(&self) -> Result<(), CertificateError> {
        if self.steps.is_empty() {
            return Err(CertificateError::Empty);
        }
        if self.final_step >= self.steps.len() {
            return Err(CertificateError::FinalOutOfRange(self.final_step));
        }
        let pres = &self.presentation;
        pres.check_word(&self.base)?;
        for (i, s) in self.steps.iter().enumerate() {
            for p in s.parents() {
                if p >= i {
                    return Err(CertificateError::Malformed {
                        step: i,
                        reason: format!("references step {p}, which is not earlier"),
                    });
                }
            }
            match &s.op {
                StepOp::Base { conj } | StepOp::Conj { by: conj, .. } => pres.check_word(conj)?,
                StepOp::Product { .. } => {}
            }
            if let Some(c) = &s.claim {
                pres.check_word(c)?;
            }
        }
        Ok(())
    }

    /// Conjugators of every step, in product order.
    fn all_conjugators(&self) -> Result<Vec<Vec<Word>>, CertificateError> {
        self.validate()?;
        let mut lists: Vec<Vec<Word>> = Vec::with_capacity(self.steps.len());
        for s in &self.steps {
            let list = match &s.op {
                StepOp::Base { conj } => vec![conj.clone()],
                StepOp::Product { left, right } => {
                    let mut l = lists[*left].clone();
                    l.extend(lists[*right].iter().cloned());
                    l
                }
                StepOp::Conj { of, by } => lists[*of].iter().map(|c| c.concat(by)).collect(),
            };
            lists.push(list);
        }
        Ok(lists)
    }

    /// Conjugators `y_1..y_k` with the final step equal to
    /// `base^{y_1} ⋯ base^{y_k}` in the free group.
    pub fn flatten(&self) -> Result<Vec<Word>, CertificateError> {
        self.flatten_step(self.final_step)
    }

    pub fn flatten_step(&self, step: usize) -> Result<Vec<Word>, CertificateError> {
        let mut lists = self.all_conjugators()?;
        if step >= lists.len() {
            return Err(CertificateError::FinalOutOfRange(step));
        }
        Ok(lists.swap_remove(step))
    }

    /// Free-group value of every step, ignoring claims.
    pub fn evaluate(&self) -> Result<Vec<Word>, CertificateError> {
        self.validate()?;
        let mut vals: Vec<Word> = Vec::with_capacity(self.steps.len());
        for s in &self.steps {
            let v = match &s.op {
                StepOp::Base { conj } => self.base.conjugate(conj),
                StepOp::Product { left, right } => vals[*left].concat(&vals[*right]),
                StepOp::Conj { of, by } => vals[*of].conjugate(by),
            };
            vals.push(v);
        }
        Ok(vals)
    }

    /// Rewrites every word through `f`.
    pub fn map_words(&self, presentation: Presentation, f: impl Fn(&Word) -> Word) -> Self {
        TorsionCertificate {
            presentation,
            base: f(&self.base),
            steps: self
                .steps
                .iter()
                .map(|s| Step {
                    op: match &s.op {
                        StepOp::Base { conj } => StepOp::Base { conj: f(conj) },
                        StepOp::Product { left, right } => StepOp::Product {
                            left: *left,
                            right: *right,
                        },
                        StepOp::Conj { of, by } => StepOp::Conj { of: *of, by: f(by) },
                    },
                    claim: s.claim.as_ref().map(&f),
                })
                .collect(),
            final_step: self.final_step,
        }
    }

    pub fn to_json(&self) -> CertificateJson {
        let r = |w: &Word| self.presentation.render_word(w);
        CertificateJson {
            name: self.presentation.meta.name.clone(),
            presentation: self.presentation.render(),
            base: r(&self.base),
            steps: self
                .steps
                .iter()
                .map(|s| {
                    let claim = s.claim.as_ref().map(r);
                    match &s.op {
                        StepOp::Base { conj } => StepJson::Base {
                            conj: r(conj),
                            claim,
                        },
                        StepOp::Product { left, right } => StepJson::Mul {
                            left: *left,
                            right: *right,
                            claim,
                        },
                        StepOp::Conj { of, by } => StepJson::Conj {
                            of: *of,
                            by: r(by),
                            claim,
                        },
                    }
                })
                .collect(),
            final_step: self.final_step,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("certificate serializes")
    }

    pub fn from_json(json: &CertificateJson) -> Result<Self, CertificateError> {
        let mut presentation = Presentation::parse(&json.presentation)?;
        if let Some(n) = &json.name {
            presentation.meta.name = Some(n.clone());
        }
        let word = |s: &str| -> Result<Word, CertificateError> {
            presentation
                .parse_word(s)
                .map_err(|e| CertificateError::Presentation(e.into()))
        };
        let base = word(&json.base)?;
        let mut steps = Vec::with_capacity(json.steps.len());
        for s in &json.steps {
            let (op, claim) = match s {
                StepJson::Base { conj, claim } => (StepOp::Base { conj: word(conj)? }, claim),
                StepJson::Mul { left, right, claim } => (
                    StepOp::Product {
                        left: *left,
                        right: *right,
                    },
                    claim,
                ),
                StepJson::Conj { of, by, claim } => (
                    StepOp::Conj {
                        of: *of,
                        by: word(by)?,
                    },
                    claim,
                ),
            };
            let claim = claim.as_deref().map(word).transpose()?;
            steps.push(Step { op, claim });
        }
        let cert = TorsionCertificate {
            presentation,
            base,
            steps,
            final_step: json.final_step,
        };
        cert.validate()?;
        Ok(cert)
    }

    pub fn from_json_str(text: &str) -> Result<Self, CertificateError> {
        let json: CertificateJson =
            serde_json::from_str(text).map_err(|e| CertificateError::Json(e.to_string()))?;
        Self::from_json(&json)
    }
}

/// Serialized certificate. Words use the presentation's own spelling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub presentation: String,
    pub base: String,
    pub steps: Vec<StepJson>,
    #[serde(rename = "final")]
    pub final_step: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase", deny_unknown_fields)]
pub enum StepJson {
    Base {
        conj: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        claim: Option<String>,
    },
    Mul {
        left: usize,
        right: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        claim: Option<String>,
    },
    Conj {
        of: usize,
        by: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        claim: Option<String>,
    },
}
