//! Replaying certificates against the word-problem oracle.

use serde::Serialize;
use thiserror::Error;

use super::certificate::{CertificateError, StepOp, TorsionCertificate};
use crate::word_problem::{Budget, NonTrivialWitness, TriState, TrivialProof, WordOracle};
use crate::words::Word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error(transparent)]
    Malformed(#[from] CertificateError),
    /// The oracle ran out of budget; nothing was decided.
    #[error("inconclusive: {reason}")]
    Inconclusive { reason: String },
    /// The certificate is provably wrong.
    #[error("refuted: {reason}")]
    Refuted { reason: String },
}

impl VerifyError {
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, VerifyError::Inconclusive { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, VerifyError::Refuted { .. })
    }
}

/// What the verifier did at one step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepTranscript {
    pub step: usize,
    /// Free product of the parents' representatives.
    #[serde(serialize_with = "crate::serde_word")]
    pub computed: Word,
    /// Proof that the claim equals `computed`, when the step has a claim.
    pub claim_proof: Option<TrivialProof>,
    /// Word carried forward to later steps.
    #[serde(serialize_with = "crate::serde_word")]
    pub representative: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifiedWitness {
    pub certificate: TorsionCertificate,
    pub conjugators: Vec<Word>,
    pub base_witness: NonTrivialWitness,
    pub transcript: Vec<StepTranscript>,
    pub final_proof: TrivialProof,
}

impl VerifiedWitness {
    pub fn k(&self) -> usize {
        self.conjugators.len()
    }

    /// Replays the recorded artifacts without searching: the base witness,
    /// every claim proof, and the proof for the final representative.
    pub fn recheck(&self, oracle: &WordOracle) -> bool {
        let cert = &self.certificate;
        if self.conjugators.is_empty() || !oracle.check_witness(&cert.base, &self.base_witness) {
            return false;
        }
        if cert.flatten().as_ref() != Ok(&self.conjugators)
            || self.transcript.len() != cert.steps.len()
        {
            return false;
        }
        let reps: Vec<&Word> = self.transcript.iter().map(|t| &t.representative).collect();
        for (i, (s, t)) in cert.steps.iter().zip(&self.transcript).enumerate() {
            if t.computed != step_word(cert, &s.op, &reps[..i]) {
                return false;
            }
            match (&s.claim, &t.claim_proof) {
                (Some(c), Some(proof)) => {
                    let proven = normal_forms_agree(oracle, &t.computed, c)
                        || oracle.check_proof(&t.computed.concat(&c.inverse()), proof);
                    if &t.representative != c || !proven {
                        return false;
                    }
                }
                (None, None) => {
                    if t.representative != oracle.normal_form(&t.computed) {
                        return false;
                    }
                }
                _ => return false,
            }
        }
        let last = &self.transcript[cert.final_step].representative;
        oracle.check_proof(last, &self.final_proof)
    }
}

fn normal_forms_agree(oracle: &WordOracle, u: &Word, v: &Word) -> bool {
    oracle.normal_form(u) == oracle.normal_form(v)
        || oracle.normal_form(&u.inverse()) == oracle.normal_form(&v.inverse())
}

fn step_word(cert: &TorsionCertificate, op: &StepOp, reps: &[&Word]) -> Word {
    match op {
        StepOp::Base { conj } => cert.base.conjugate(conj),
        StepOp::Product { left, right } => reps[*left].concat(reps[*right]),
        StepOp::Conj { of, by } => reps[*of].conjugate(by),
    }
}

/// Verifies with a fresh oracle for the certificate's presentation.
pub fn verify(cert: &TorsionCertificate, budget: Budget) -> Result<VerifiedWitness, VerifyError> {
    verify_with(cert, &WordOracle::new(&cert.presentation, budget))
}

/// Verifies `cert` using an oracle built for the same presentation.
pub fn verify_with(
    cert: &TorsionCertificate,
    oracle: &WordOracle,
) -> Result<VerifiedWitness, VerifyError> {
    let conjugators = cert.flatten()?;
    let render = |w: &Word| cert.presentation.render_word(w);
    let base_witness = match oracle.is_trivial(&cert.base) {
        TriState::NonTrivial(w) => w,
        TriState::Trivial(_) => {
            return Err(VerifyError::Refuted {
                reason: format!("base {} is trivial", render(&cert.base)),
            })
        }
        TriState::Unknown { .. } => {
            return Err(VerifyError::Inconclusive {
                reason: format!("could not show base {} is nontrivial", render(&cert.base)),
            })
        }
    };
    let mut transcript: Vec<StepTranscript> = Vec::with_capacity(cert.steps.len());
    for (i, s) in cert.steps.iter().enumerate() {
        let reps: Vec<&Word> = transcript.iter().map(|t| &t.representative).collect();
        let computed = step_word(cert, &s.op, &reps);
        let (claim_proof, representative) = match &s.claim {
            Some(c) => match oracle.equal(&computed, c) {
                TriState::Trivial(p) => (Some(p), c.clone()),
                TriState::NonTrivial(_) => {
                    return Err(VerifyError::Refuted {
                        reason: format!(
                            "step {i}: {} is not equal to claimed {}",
                            render(&computed),
                            render(c)
                        ),
                    })
                }
                TriState::Unknown { .. } => {
                    return Err(VerifyError::Inconclusive {
                        reason: format!(
                            "step {i}: could not show {} = {}",
                            render(&computed),
                            render(c)
                        ),
                    })
                }
            },
            None => (None, oracle.normal_form(&computed)),
        };
        transcript.push(StepTranscript {
            step: i,
            computed,
            claim_proof,
            representative,
        });
    }
    let last = &transcript[cert.final_step].representative;
    let final_proof = match oracle.is_trivial(last) {
        TriState::Trivial(p) => p,
        TriState::NonTrivial(_) => {
            return Err(VerifyError::Refuted {
                reason: format!("final product {} is nontrivial", render(last)),
            })
        }
        TriState::Unknown { .. } => {
            return Err(VerifyError::Inconclusive {
                reason: format!("could not show final product {} is trivial", render(last)),
            })
        }
    };
    if let Some(weight) = oracle.abelianization().weight_of(&cert.base) {
        debug_assert_eq!(weight, 0, "verified base with nonzero weight");
    }
    Ok(VerifiedWitness {
        certificate: cert.clone(),
        conjugators,
        base_witness,
        transcript,
        final_proof,
    })
}
