//! Bounded search for products of conjugates that collapse.
//!
//! The closure of the base under products is grown level by level (a level-k
//! element is a product of k conjugates), with the allowed conjugator length
//! raised one round at a time. Elements are stored by oracle normal form. A
//! certificate is found when an element is trivial, or when the conjugacy
//! keys of one element and the inverse of another coincide: then a conjugate
//! of the first times a conjugate of the second is trivial.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::certificate::{Step, TorsionCertificate};
use super::verify::verify_with;
use super::{conjugacy_key, words_of_length, TorsionError};
use crate::presentations::Presentation;
use crate::word_problem::{TriState, WordOracle};
use crate::words::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    /// Longest conjugator applied to the base.
    pub max_conj_len: usize,
    /// Elements kept in the closure before giving up.
    pub max_closure: usize,
    /// Most conjugates of the base in one certificate's product (before
    /// the final conjugations that align the two halves).
    pub max_depth: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_conj_len: 4,
            max_closure: 1_000_000,
            max_depth: 6,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Conjugator lengths fully explored.
    pub rounds: usize,
    pub conjugates: usize,
    pub elements: usize,
    /// Candidate hits whose certificate did not verify.
    pub rejected_hits: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NotFound {
    pub bounds: SearchBounds,
    pub stats: SearchStats,
    /// The closure cap stopped the search before the other bounds did.
    pub closure_exhausted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found {
        certificate: TorsionCertificate,
        stats: SearchStats,
    },
    NotFound(NotFound),
}

struct Elem {
    nf: Word,
    /// Element this one extends on the right, if any.
    parent: Option<u32>,
    /// Index into the conjugator list.
    factor: u32,
    depth: u8,
    round: u8,
}

struct Computed {
    nf: Word,
    key: Word,
    inv_key: Word,
}

struct Candidate {
    parent: Option<u32>,
    factor: u32,
    depth: u8,
}

struct State<'a> {
    pres: &'a Presentation,
    base: &'a Word,
    oracle: &'a WordOracle,
    bounds: SearchBounds,
    conjugators: Vec<Word>,
    elems: Vec<Elem>,
    by_nf: HashMap<Word, u32>,
    /// key(u) -> u
    keys: HashMap<Word, u32>,
    /// key(u^-1) -> u
    inv_keys: HashMap<Word, u32>,
    levels: Vec<Vec<u32>>,
    stats: SearchStats,
}

enum Insert {
    Skip,
    Done(Box<TorsionCertificate>),
    Full,
}

/// Searches for a certificate for `base`. Results depend only on the inputs,
/// not on the rayon thread count.
pub fn search(
    pres: &Presentation,
    base: &Word,
    bounds: SearchBounds,
    oracle: &WordOracle,
) -> Result<SearchOutcome, TorsionError> {
    pres.check_word(base)?;
    if let Some(w) = oracle.abelianization().weight_of(base) {
        if w != 0 {
            return Err(TorsionError::NonzeroWeight(w));
        }
    }
    match oracle.is_trivial(base) {
        TriState::NonTrivial(_) => {}
        TriState::Trivial(_) => return Err(TorsionError::TrivialBase),
        TriState::Unknown { .. } => {
            return Err(TorsionError::Inconclusive(format!(
                "could not show {} is nontrivial",
                pres.render_word(base)
            )))
        }
    }
    let half = bounds.max_depth.div_ceil(2).max(1);
    let mut st = State {
        pres,
        base,
        oracle,
        bounds,
        conjugators: Vec::new(),
        elems: Vec::new(),
        by_nf: HashMap::new(),
        keys: HashMap::new(),
        inv_keys: HashMap::new(),
        levels: vec![Vec::new(); half + 1],
        stats: SearchStats::default(),
    };
    for round in 0..=bounds.max_conj_len {
        let fresh: Vec<Candidate> = words_of_length(pres.generator_count(), round)
            .into_iter()
            .map(|y| {
                st.conjugators.push(y);
                Candidate {
                    parent: None,
                    factor: (st.conjugators.len() - 1) as u32,
                    depth: 1,
                }
            })
            .collect();
        if let Some(out) = st.process(fresh, round) {
            return Ok(out);
        }
        st.stats.conjugates = st.levels[1].len();
        for depth in 2..=half {
            let mut batch: Vec<Candidate> = Vec::new();
            for i in 0..st.levels[depth - 1].len() {
                let u = st.levels[depth - 1][i];
                for j in 0..st.levels[1].len() {
                    let c = st.levels[1][j];
                    if st.elems[u as usize].round as usize != round
                        && st.elems[c as usize].round as usize != round
                    {
                        continue;
                    }
                    batch.push(Candidate {
                        parent: Some(u),
                        factor: st.elems[c as usize].factor,
                        depth: depth as u8,
                    });
                    if batch.len() >= 4096 {
                        if let Some(out) = st.process(std::mem::take(&mut batch), round) {
                            return Ok(out);
                        }
                    }
                }
            }
            if let Some(out) = st.process(batch, round) {
                return Ok(out);
            }
        }
        st.stats.rounds = round + 1;
    }
    Ok(SearchOutcome::NotFound(NotFound {
        bounds,
        stats: st.stats,
        closure_exhausted: false,
    }))
}

impl State<'_> {
    fn value(&self, c: &Candidate) -> Word {
        let conj = self.base.conjugate(&self.conjugators[c.factor as usize]);
        match c.parent {
            None => self.oracle.normal_form(&conj),
            Some(p) => {
                // Same word the verifier forms for a product step.
                let right = self.oracle.normal_form(&conj);
                self.oracle
                    .normal_form(&self.elems[p as usize].nf.concat(&right))
            }
        }
    }

    /// Inserts a batch; returns an outcome when the search should stop.
    fn process(&mut self, batch: Vec<Candidate>, round: usize) -> Option<SearchOutcome> {
        let computed: Vec<Computed> = batch
            .par_iter()
            .map(|c| {
                let nf = self.value(c);
                let key = conjugacy_key(self.oracle, &nf).0;
                let inv_key = conjugacy_key(self.oracle, &nf.inverse()).0;
                Computed { nf, key, inv_key }
            })
            .collect();
        for (c, v) in batch.into_iter().zip(computed) {
            match self.insert(c, v, round) {
                Insert::Skip => {}
                Insert::Done(certificate) => {
                    return Some(SearchOutcome::Found {
                        certificate: *certificate,
                        stats: self.stats.clone(),
                    })
                }
                Insert::Full => {
                    return Some(SearchOutcome::NotFound(NotFound {
                        bounds: self.bounds,
                        stats: self.stats.clone(),
                        closure_exhausted: true,
                    }))
                }
            }
        }
        None
    }

    fn insert(&mut self, c: Candidate, v: Computed, round: usize) -> Insert {
        if self.by_nf.contains_key(&v.nf) {
            return Insert::Skip;
        }
        if self.elems.len() >= self.bounds.max_closure {
            return Insert::Full;
        }
        let id = self.elems.len() as u32;
        self.by_nf.insert(v.nf.clone(), id);
        self.elems.push(Elem {
            nf: v.nf.clone(),
            parent: c.parent,
            factor: c.factor,
            depth: c.depth,
            round: round as u8,
        });
        self.levels[c.depth as usize].push(id);
        self.stats.elements += 1;
        let depth = c.depth as usize;
        let mut hits: Vec<(u32, u32)> = Vec::new();
        if v.key.is_identity() {
            hits.push((u32::MAX, id));
        }
        if let Some(&other) = self.keys.get(&v.inv_key) {
            if self.elems[other as usize].depth as usize + depth <= self.bounds.max_depth {
                hits.push((id, other));
            }
        }
        if let Some(&other) = self.inv_keys.get(&v.key) {
            if self.elems[other as usize].depth as usize + depth <= self.bounds.max_depth {
                hits.push((other, id));
            }
        }
        if v.inv_key == v.key && 2 * depth <= self.bounds.max_depth {
            hits.push((id, id));
        }
        self.keys.entry(v.key).or_insert(id);
        self.inv_keys.entry(v.inv_key).or_insert(id);
        for (inverted, direct) in hits {
            let cert = self.certificate(inverted, direct);
            if verify_with(&cert, self.oracle).is_ok() {
                return Insert::Done(Box::new(cert));
            }
            self.stats.rejected_hits += 1;
        }
        Insert::Skip
    }

    fn product_steps(&self, id: u32, steps: &mut Vec<Step>) -> usize {
        let mut factors = Vec::new();
        let mut at = Some(id);
        while let Some(i) = at {
            factors.push(self.elems[i as usize].factor);
            at = self.elems[i as usize].parent;
        }
        factors.reverse();
        let mut acc = None;
        for f in factors {
            steps.push(Step::base(self.conjugators[f as usize].clone()));
            let s = steps.len() - 1;
            acc = Some(match acc {
                None => s,
                Some(a) => {
                    steps.push(Step::product(a, s));
                    steps.len() - 1
                }
            });
        }
        acc.expect("elements have at least one factor")
    }

    /// Conjugation chain from element `id` to its key (or, when `inverted`,
    /// to the inverse of the key of its inverse).
    fn chain_steps(&self, id: u32, inverted: bool, steps: &mut Vec<Step>) -> usize {
        let mut at = self.product_steps(id, steps);
        let nf = &self.elems[id as usize].nf;
        let start = if inverted { nf.inverse() } else { nf.clone() };
        let (_, chain) = conjugacy_key(self.oracle, &start);
        let flip = |w: Word| if inverted { w.inverse() } else { w };
        let first = self.oracle.normal_form(&start);
        if first != start {
            steps.push(Step::conj(at, Word::identity()).claiming(flip(first)));
            at = steps.len() - 1;
        }
        for (g, r) in chain {
            steps.push(Step::conj(at, g).claiming(flip(r)));
            at = steps.len() - 1;
        }
        at
    }

    fn certificate(&self, inverted: u32, direct: u32) -> TorsionCertificate {
        let mut steps = Vec::new();
        let final_step = if inverted == u32::MAX {
            self.chain_steps(direct, false, &mut steps)
        } else {
            let a = self.chain_steps(inverted, true, &mut steps);
            let b = self.chain_steps(direct, false, &mut steps);
            steps.push(Step::product(a, b));
            steps.len() - 1
        };
        TorsionCertificate {
            presentation: self.pres.clone(),
            base: self.base.clone(),
            steps,
            final_step,
        }
    }
}
