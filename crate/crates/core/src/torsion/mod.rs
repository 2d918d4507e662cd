//! Generalized torsion: certificates, their verification, the classical
//! constructions and a bounded search.
//!
//! `x ≠ 1` is generalized torsion when some product `x^{y_1} ⋯ x^{y_k}` of
//! its conjugates is trivial. A [`TorsionCertificate`] records such a product
//! as a small derivation so long proofs stay compact.

mod builtin;
mod certificate;
mod expand;
mod search;
mod verify;

use std::collections::HashSet;

use thiserror::Error;

use crate::presentations::{Inclusion, Presentation, PresentationError};
use crate::word_problem::{TriState, WordOracle};
use crate::words::Word;

pub use builtin::{
    builtin, builtin_certificates, fivetwo_first, fivetwo_second, klein, trefoil, BUILTIN_NAMES,
};
pub use certificate::{
    CertificateError, CertificateJson, Step, StepJson, StepOp, TorsionCertificate,
};
pub use expand::{commuting_powers_certificate, expand_commutator};
pub use search::{search, NotFound, SearchBounds, SearchOutcome, SearchStats};
pub use verify::{verify, verify_with, StepTranscript, VerifiedWitness, VerifyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorsionError {
    #[error("powers must be positive, got p = {p}, q = {q}")]
    NonPositivePowers { p: i64, q: i64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("base is trivial")]
    TrivialBase,
    #[error("base has abelianization weight {0}, so no product of its conjugates is trivial")]
    NonzeroWeight(i64),
    #[error("inclusion does not carry relators of {source_name} to relators of {target}")]
    NotRelatorPreserving { source_name: String, target: String },
    #[error(transparent)]
    Certificate(#[from] CertificateError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// Renames a certificate along a relator-preserving generator map.
pub fn transport(
    cert: &TorsionCertificate,
    inclusion: &Inclusion,
    target: &Presentation,
) -> Result<TorsionCertificate, TorsionError> {
    if !inclusion.is_injective() || !inclusion.preserves_relators(&cert.presentation, target) {
        return Err(TorsionError::NotRelatorPreserving {
            source_name: cert.presentation.name().into(),
            target: target.name().into(),
        });
    }
    let moved = cert.map_words(target.clone(), |w| inclusion.apply(w));
    moved.validate()?;
    Ok(moved)
}

/// Conjugacy-class heuristic: strip matching ends and rotate while that
/// shortens or shortlex-decreases the normal form. Returns the key and the
/// chain `(conjugator, normal form after conjugating)` that reaches it from
/// `nf(w)`.
pub(crate) fn conjugacy_key(oracle: &WordOracle, w: &Word) -> (Word, Vec<(Word, Word)>) {
    let mut cur = oracle.normal_form(w);
    let mut chain: Vec<(Word, Word)> = Vec::new();
    'outer: loop {
        if cur.len() >= 2 && cur.first() == cur.last().map(|l| l.inverse()) {
            let g = Word::letter(cur.first().expect("nonempty"));
            let next = oracle.normal_form(&cur.conjugate(&g));
            chain.push((g, next.clone()));
            cur = next;
            continue;
        }
        let mut best: Option<(Word, Word)> = None;
        for k in 1..cur.len() {
            let g = cur.prefix(k);
            let r = oracle.normal_form(&cur.conjugate(&g));
            if r.len() < cur.len() {
                chain.push((g, r.clone()));
                cur = r;
                continue 'outer;
            }
            let better = match &best {
                Some((_, b)) => r.shortlex_cmp(b).is_lt(),
                None => r.shortlex_cmp(&cur).is_lt(),
            };
            if better {
                best = Some((g, r));
            }
        }
        match best {
            Some((g, r)) => {
                chain.push((g, r.clone()));
                cur = r;
            }
            None => return (cur, chain),
        }
    }
}

/// Reduced words of length exactly `len` on `n` generators, shortlex order.
pub(crate) fn words_of_length(n: usize, len: usize) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &out {
            for code in 0..2 * n {
                let l = crate::words::Letter::from_code(code as u16);
                if w.last() != Some(l.inverse()) {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out
}

/// Commutators `[u, v]` of words of length at most two that the oracle
/// shows nontrivial, one per conjugacy key.
pub fn candidate_bases(pres: &Presentation, oracle: &WordOracle) -> Vec<Word> {
    let short: Vec<Word> = (1..=2)
        .flat_map(|len| words_of_length(pres.generator_count(), len))
        .collect();
    let mut seen: HashSet<Word> = HashSet::new();
    let mut out = Vec::new();
    for u in &short {
        for v in &short {
            let c = u.commutator(v);
            if c.is_identity()
                || oracle
                    .abelianization()
                    .weight_of(&c)
                    .is_some_and(|w| w != 0)
            {
                continue;
            }
            let (k, _) = conjugacy_key(oracle, &c);
            if k.is_identity() || !seen.insert(k) {
                continue;
            }
            if matches!(oracle.is_trivial(&c), TriState::NonTrivial(_)) {
                out.push(c);
            }
        }
    }
    out
}
