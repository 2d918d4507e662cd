//! Commuting powers give generalized torsion.
//!
//! In the free group `[x^n, y] = [x^{n-1}, y]^x [x, y]` and
//! `[x, y^n] = [x, y] [x, y^{n-1}]^y`, so `[x^p, y^q]` is a product of `p·q`
//! conjugates of `[x, y]`. If `x^p` and `y^q` commute in a group, that product
//! is trivial there.

use super::certificate::TorsionCertificate;
use super::TorsionError;
use crate::presentations::Presentation;
use crate::word_problem::{TriState, WordOracle};
use crate::words::Word;

/// Conjugators `c_1..c_m` (over `x = 0`, `y = 1`) with
/// `[x,y]^{c_1} ⋯ [x,y]^{c_m} = [x^p, y^q]` in the free group.
pub fn expand_commutator(p: i64, q: i64) -> Result<Vec<Word>, TorsionError> {
    if p < 1 || q < 1 {
        return Err(TorsionError::NonPositivePowers { p, q });
    }
    let x = Word::generator(0);
    let y = Word::generator(1);
    // [x, y^q] = [x,y]^1 [x,y]^y ⋯ [x,y]^{y^{q-1}}
    let mut list: Vec<Word> = (0..q).map(|j| y.pow(j)).collect();
    for _ in 1..p {
        let mut next: Vec<Word> = list.iter().map(|c| c.concat(&x)).collect();
        next.extend((0..q).map(|j| y.pow(j)));
        list = next;
    }
    Ok(list)
}

/// Certificate for `[x, y]` from a proof that `x^p` and `y^q` commute.
pub fn commuting_powers_certificate(
    pres: &Presentation,
    x: &Word,
    y: &Word,
    p: i64,
    q: i64,
    oracle: &WordOracle,
) -> Result<TorsionCertificate, TorsionError> {
    let generic = expand_commutator(p, q)?;
    let base = x.commutator(y);
    match oracle.is_trivial(&x.pow(p).commutator(&y.pow(q))) {
        TriState::Trivial(_) => {}
        TriState::NonTrivial(_) => {
            return Err(TorsionError::Precondition(format!(
                "x^{p} and y^{q} do not commute"
            )))
        }
        TriState::Unknown { .. } => {
            return Err(TorsionError::Inconclusive(format!(
                "could not decide whether x^{p} and y^{q} commute"
            )))
        }
    }
    match oracle.is_trivial(&base) {
        TriState::NonTrivial(_) => {}
        TriState::Trivial(_) => {
            return Err(TorsionError::Precondition(format!(
                "{} is trivial",
                pres.render_word(&base)
            )))
        }
        TriState::Unknown { .. } => {
            return Err(TorsionError::Inconclusive(format!(
                "could not show {} is nontrivial",
                pres.render_word(&base)
            )))
        }
    }
    let images = [x.clone(), y.clone()];
    let conjugators: Vec<Word> = generic.iter().map(|c| c.substitute(&images)).collect();
    Ok(TorsionCertificate::from_conjugators(
        pres.clone(),
        base,
        &conjugators,
    ))
}
