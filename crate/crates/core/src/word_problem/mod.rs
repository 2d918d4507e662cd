//! Tri-state word problem oracle.
//!
//! A word is reported `Trivial` only with a mechanical proof (rewriting to
//! the empty word, the exact torus solver, or an explicit chain of relator
//! insertions) and `NonTrivial` only with a checkable witness. Anything else
//! is `Unknown`.

mod quotient;
mod rewriting;
mod torus;

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::sync::Mutex;

use serde::Serialize;

use crate::presentations::{AbelianizationData, Presentation};
use crate::words::Word;

pub use quotient::{finite_quotient_witness, QuotientWitness, MAX_QUOTIENT_DEGREE};
pub use rewriting::{
    kb_complete, CompletionLimits, CompletionStatus, RewriteStep, RewriteSystem, Rule,
    RulesFormatError,
};
pub use torus::{torus_is_trivial, TorusNormalForm, TorusSolver};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub completion: CompletionLimits,
    /// Maximum number of relator insertions in the fallback search.
    pub insertion_depth: usize,
    /// Words expanded by the fallback search before giving up.
    pub insertion_nodes: usize,
    pub quotient_degree: usize,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            completion: CompletionLimits::default(),
            insertion_depth: 6,
            insertion_nodes: 2_000,
            quotient_degree: 7,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum TrivialProof {
    FreeReduction,
    /// The rewriting system reduces the word (or its inverse) to the identity.
    Rewriting {
        complete: bool,
    },
    Torus,
    /// Words visited while inserting relators; each entry is the result of
    /// inserting `relator` at `position` into the previous word and rewriting.
    RelatorInsertion {
        steps: Vec<InsertionStep>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InsertionStep {
    pub position: usize,
    #[serde(serialize_with = "crate::serde_word")]
    pub relator: Word,
    #[serde(serialize_with = "crate::serde_word")]
    pub result: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum NonTrivialWitness {
    /// Nonzero image in the abelianization (coordinates in the diagonal basis).
    Abelian {
        coordinates: Vec<String>,
    },
    Torus {
        normal_form: TorusNormalForm,
    },
    /// Normal form of a complete rewriting system differs from the identity.
    Rewriting {
        #[serde(serialize_with = "crate::serde_word")]
        normal_form: Word,
    },
    Quotient(QuotientWitness),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TriState {
    Trivial(TrivialProof),
    NonTrivial(NonTrivialWitness),
    Unknown {
        insertion_nodes: usize,
        quotient_degree: usize,
    },
}

impl TriState {
    pub fn is_trivial(&self) -> bool {
        matches!(self, TriState::Trivial(_))
    }

    pub fn is_nontrivial(&self) -> bool {
        matches!(self, TriState::NonTrivial(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            TriState::Trivial(_) => "Trivial",
            TriState::NonTrivial(_) => "NonTrivial",
            TriState::Unknown { .. } => "Unknown",
        }
    }
}

/// Word problem engine for one presentation.
pub struct WordOracle {
    pres: Presentation,
    abelian: AbelianizationData,
    rewriting: RewriteSystem,
    torus: Option<TorusSolver>,
    pieces: Vec<Word>,
    budget: Budget,
    quotients: Mutex<Vec<QuotientWitness>>,
}

impl WordOracle {
    pub fn new(pres: &Presentation, budget: Budget) -> Self {
        let torus = match pres.meta.torus {
            Some((p, q)) if pres.generator_count() == 2 => Some(TorusSolver::new(p, q)),
            _ => TorusSolver::detect(pres),
        };
        let mut pieces: Vec<Word> = Vec::new();
        for r in pres.relators() {
            for k in 0..r.len() {
                for w in [r.rotate(k), r.rotate(k).inverse()] {
                    if !pieces.contains(&w) {
                        pieces.push(w);
                    }
                }
            }
        }
        WordOracle {
            abelian: pres.abelianization(),
            rewriting: kb_complete(pres, budget.completion),
            pres: pres.clone(),
            torus,
            pieces,
            budget,
            quotients: Mutex::new(Vec::new()),
        }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn abelianization(&self) -> &AbelianizationData {
        &self.abelian
    }

    pub fn rewriting(&self) -> &RewriteSystem {
        &self.rewriting
    }

    pub fn torus(&self) -> Option<&TorusSolver> {
        self.torus.as_ref()
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    /// True when [`normal_form`](Self::normal_form) is canonical.
    pub fn has_canonical_forms(&self) -> bool {
        self.torus.is_some() || self.rewriting.is_complete()
    }

    /// A word equal to `w` in the group; canonical when
    /// [`has_canonical_forms`](Self::has_canonical_forms) holds.
    pub fn normal_form(&self, w: &Word) -> Word {
        match &self.torus {
            Some(t) => t.canonical(w),
            None => self.rewriting.normal_form(w),
        }
    }

    fn cheap_trivial(&self, w: &Word) -> Option<TrivialProof> {
        if w.is_identity() {
            return Some(TrivialProof::FreeReduction);
        }
        if let Some(t) = &self.torus {
            return t.is_trivial(w).then_some(TrivialProof::Torus);
        }
        let complete = self.rewriting.is_complete();
        if self.rewriting.normal_form(w).is_identity()
            || self.rewriting.normal_form(&w.inverse()).is_identity()
        {
            return Some(TrivialProof::Rewriting { complete });
        }
        None
    }

    fn cheap_nontrivial(&self, w: &Word) -> Option<NonTrivialWitness> {
        if w.is_identity() {
            return None;
        }
        if self.abelian.detects(w) {
            return Some(NonTrivialWitness::Abelian {
                coordinates: self
                    .abelian
                    .coordinates(w)
                    .iter()
                    .map(|c| c.to_string())
                    .collect(),
            });
        }
        if let Some(t) = &self.torus {
            let nf = t.normal_form(w);
            return (!nf.is_identity()).then_some(NonTrivialWitness::Torus { normal_form: nf });
        }
        if self.rewriting.is_complete() {
            let nf = self.rewriting.normal_form(w);
            if !nf.is_identity() {
                return Some(NonTrivialWitness::Rewriting { normal_form: nf });
            }
        }
        let cache = self.quotients.lock().expect("quotient cache poisoned");
        cache
            .iter()
            .find(|q| !q.image(w).iter().enumerate().all(|(i, &p)| i == p as usize))
            .map(|q| NonTrivialWitness::Quotient(q.clone()))
    }

    /// Decides triviality of `w` within the budget.
    pub fn is_trivial(&self, w: &Word) -> TriState {
        if let Some(p) = self.cheap_trivial(w) {
            return TriState::Trivial(p);
        }
        if let Some(wit) = self.cheap_nontrivial(w) {
            return TriState::NonTrivial(wit);
        }
        if let Some(steps) = self.insertion_search(w) {
            return TriState::Trivial(TrivialProof::RelatorInsertion { steps });
        }
        if let Some(q) =
            finite_quotient_witness(&self.pres, w, self.budget.quotient_degree, self.budget.seed)
        {
            self.quotients
                .lock()
                .expect("quotient cache poisoned")
                .push(q.clone());
            return TriState::NonTrivial(NonTrivialWitness::Quotient(q));
        }
        TriState::Unknown {
            insertion_nodes: self.budget.insertion_nodes,
            quotient_degree: self.budget.quotient_degree,
        }
    }

    /// Whether `u = v` in the group; `Trivial` means equal.
    pub fn equal(&self, u: &Word, v: &Word) -> TriState {
        if u == v {
            return TriState::Trivial(TrivialProof::FreeReduction);
        }
        let complete = self.has_canonical_forms();
        if self.normal_form(u) == self.normal_form(v)
            || self.normal_form(&u.inverse()) == self.normal_form(&v.inverse())
        {
            return TriState::Trivial(match self.torus {
                Some(_) => TrivialProof::Torus,
                None => TrivialProof::Rewriting { complete },
            });
        }
        self.is_trivial(&u.concat(&v.inverse()))
    }

    /// Re-checks a nontriviality witness for `w` from scratch.
    pub fn check_witness(&self, w: &Word, witness: &NonTrivialWitness) -> bool {
        match witness {
            NonTrivialWitness::Abelian { .. } => self.abelian.detects(w),
            NonTrivialWitness::Torus { normal_form } => self
                .torus
                .is_some_and(|t| &t.normal_form(w) == normal_form && !normal_form.is_identity()),
            NonTrivialWitness::Rewriting { normal_form } => {
                self.rewriting.is_complete()
                    && &self.rewriting.normal_form(w) == normal_form
                    && !normal_form.is_identity()
            }
            NonTrivialWitness::Quotient(q) => q.separates(&self.pres, w),
        }
    }

    /// Re-checks a triviality proof for `w`.
    pub fn check_proof(&self, w: &Word, proof: &TrivialProof) -> bool {
        match proof {
            TrivialProof::FreeReduction => w.is_identity(),
            TrivialProof::Torus => self.torus.is_some_and(|t| t.is_trivial(w)),
            TrivialProof::Rewriting { .. } => {
                self.rewriting.normal_form(w).is_identity()
                    || self.rewriting.normal_form(&w.inverse()).is_identity()
            }
            TrivialProof::RelatorInsertion { steps } => {
                let mut cur = self.rewriting.normal_form(w);
                for s in steps {
                    if !self.pieces.contains(&s.relator) || s.position > cur.len() {
                        return false;
                    }
                    let next = self.insert(&cur, s.position, &s.relator);
                    if next != s.result {
                        return false;
                    }
                    cur = next;
                }
                cur.is_identity()
            }
        }
    }

    fn insert(&self, w: &Word, position: usize, piece: &Word) -> Word {
        let head = w.prefix(position);
        let tail = Word::from_letters(w.letters()[position..].iter().copied());
        self.rewriting
            .normal_form(&head.concat(piece).concat(&tail))
    }

    /// Best-first search over relator insertions, shortest words first.
    fn insertion_search(&self, w: &Word) -> Option<Vec<InsertionStep>> {
        let start = self.rewriting.normal_form(w);
        let mut parents: Vec<(usize, Option<InsertionStep>)> = vec![(usize::MAX, None)];
        let mut words = vec![start.clone()];
        let mut depth = vec![0usize];
        let mut seen: HashSet<Word> = HashSet::from([start.clone()]);
        let mut heap = BinaryHeap::from([Reverse((start.len(), 0usize))]);
        let mut expanded = 0;
        while let Some(Reverse((_, id))) = heap.pop() {
            if expanded >= self.budget.insertion_nodes {
                break;
            }
            expanded += 1;
            if depth[id] >= self.budget.insertion_depth {
                continue;
            }
            let cur = words[id].clone();
            for position in 0..=cur.len() {
                for piece in &self.pieces {
                    let next = self.insert(&cur, position, piece);
                    if !seen.insert(next.clone()) {
                        continue;
                    }
                    let step = InsertionStep {
                        position,
                        relator: piece.clone(),
                        result: next.clone(),
                    };
                    let nid = words.len();
                    parents.push((id, Some(step)));
                    depth.push(depth[id] + 1);
                    words.push(next.clone());
                    if next.is_identity() {
                        let mut steps = Vec::new();
                        let mut at = nid;
                        while let (p, Some(s)) = &parents[at] {
                            steps.push(s.clone());
                            at = *p;
                        }
                        steps.reverse();
                        return Some(steps);
                    }
                    heap.push(Reverse((next.len(), nid)));
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{catalog, torus_group, Presentation};

    #[test]
    fn identity_is_trivial_everywhere() {
        for name in crate::presentations::CATALOG_NAMES {
            let o = WordOracle::new(&catalog(name).unwrap(), Budget::default());
            assert!(o.is_trivial(&Word::identity()).is_trivial());
        }
    }

    #[test]
    fn five_two_examples() {
        let p = catalog("5_2").unwrap();
        let o = WordOracle::new(&p, Budget::default());
        match o.is_trivial(&p.parse_word("a").unwrap()) {
            TriState::NonTrivial(NonTrivialWitness::Abelian { .. }) => {}
            other => panic!("expected abelian witness, got {other:?}"),
        }
        let base = p.parse_word("AbaB").unwrap();
        let t = o.is_trivial(&base);
        let TriState::NonTrivial(wit) = t else {
            panic!("AbaB should be separated, got {t:?}")
        };
        assert!(o.check_witness(&base, &wit));
    }

    #[test]
    fn relators_and_rotations_are_trivial() {
        for name in crate::presentations::CATALOG_NAMES {
            let p = catalog(name).unwrap();
            let o = WordOracle::new(&p, Budget::default());
            for r in p.relators() {
                for k in 0..r.len() {
                    for w in [r.rotate(k), r.rotate(k).inverse()] {
                        let t = o.is_trivial(&w);
                        let TriState::Trivial(proof) = t else {
                            panic!("{name}: {} not proven trivial: {t:?}", p.render_word(&w))
                        };
                        assert!(o.check_proof(&w, &proof));
                    }
                }
            }
        }
    }

    #[test]
    fn klein_relation() {
        let p = catalog("klein").unwrap();
        let o = WordOracle::new(&p, Budget::default());
        let w = p.parse_word("Yxyx").unwrap();
        assert!(o.is_trivial(&w).is_trivial());
        let x = p.parse_word("x").unwrap();
        assert!(o.is_trivial(&x).is_nontrivial());
    }

    #[test]
    fn insertion_proofs_replay() {
        // A free-cancellation-only system forces the insertion fallback.
        let p = Presentation::parse("<a,b | aba = bab>").unwrap();
        let budget = Budget {
            completion: CompletionLimits {
                max_rules: 4,
                ..CompletionLimits::default()
            },
            ..Budget::default()
        };
        let o = WordOracle::new(&p, budget);
        let w = p
            .parse_word("abaBAB")
            .unwrap()
            .conjugate(&p.parse_word("ab").unwrap());
        let t = o.is_trivial(&w);
        let TriState::Trivial(proof) = t else {
            panic!("expected proof, got {t:?}")
        };
        assert!(o.check_proof(&w, &proof));
    }

    #[test]
    fn torus_oracle_is_exact() {
        let p = torus_group(2, 3).unwrap();
        let o = WordOracle::new(&p, Budget::default());
        assert!(o.has_canonical_forms());
        let c = p.parse_word("[x,y]").unwrap();
        assert!(o.is_trivial(&c).is_nontrivial());
        let w = p.parse_word("X[x,y]x[x,y]").unwrap();
        assert!(o.is_trivial(&w).is_trivial());
        assert!(o
            .equal(&p.parse_word("xx").unwrap(), &p.parse_word("yyy").unwrap())
            .is_trivial());
    }
}
