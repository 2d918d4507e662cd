//! Shortlex string rewriting and Knuth–Bendix completion.
//!
//! The monoid alphabet is the generators and their inverses, ordered
//! `a < A < b < B < ...`. Every rule is a consequence of the relators and
//! the free-cancellation rules, so rewriting a word to the empty word proves
//! it trivial even when completion stopped early. Only a complete system
//! gives canonical normal forms.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::presentations::Presentation;
use crate::words::{Alphabet, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompletionLimits {
    pub max_rules: usize,
    pub max_rule_len: usize,
    pub max_iterations: usize,
}

impl Default for CompletionLimits {
    fn default() -> Self {
        CompletionLimits {
            max_rules: 500,
            max_rule_len: 64,
            max_iterations: 100_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompletionStatus {
    Complete,
    Capped,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Vec<Letter>,
    pub rhs: Vec<Letter>,
}

fn shortlex(a: &[Letter], b: &[Letter]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

const NONE: u32 = u32::MAX;

/// Trie over reversed left-hand sides, so that a redex ending at the top of
/// the output stack is found by walking the stack downwards.
#[derive(Clone, Debug)]
struct SuffixTrie {
    width: usize,
    next: Vec<u32>,
    rule: Vec<u32>,
}

impl SuffixTrie {
    fn new(width: usize) -> Self {
        SuffixTrie {
            width,
            next: vec![NONE; width],
            rule: vec![NONE],
        }
    }

    fn insert(&mut self, lhs: &[Letter], id: usize) {
        let mut node = 0usize;
        for l in lhs.iter().rev() {
            let slot = node * self.width + l.code() as usize;
            if self.next[slot] == NONE {
                let fresh = self.rule.len() as u32;
                self.next[slot] = fresh;
                self.next.extend(std::iter::repeat_n(NONE, self.width));
                self.rule.push(NONE);
            }
            node = self.next[slot] as usize;
        }
        self.rule[node] = id as u32;
    }

    fn remove(&mut self, lhs: &[Letter]) {
        let mut node = 0usize;
        for l in lhs.iter().rev() {
            node = self.next[node * self.width + l.code() as usize] as usize;
        }
        self.rule[node] = NONE;
    }

    /// Rule whose lhs is a suffix of `stack`, if any.
    #[inline]
    fn find_suffix(&self, stack: &[Letter]) -> Option<usize> {
        let mut node = 0usize;
        for l in stack.iter().rev() {
            let nxt = self.next[node * self.width + l.code() as usize];
            if nxt == NONE {
                return None;
            }
            node = nxt as usize;
            if self.rule[node] != NONE {
                return Some(self.rule[node] as usize);
            }
        }
        None
    }
}

/// One rewrite step: rule `rule` applied at letter offset `position`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RewriteStep {
    pub position: usize,
    pub rule: usize,
}

#[derive(Clone, Debug)]
pub struct RewriteSystem {
    generators: usize,
    rules: Vec<Rule>,
    status: CompletionStatus,
    trie: SuffixTrie,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RulesFormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

impl RewriteSystem {
    pub fn from_rules(generators: usize, rules: Vec<Rule>, status: CompletionStatus) -> Self {
        let mut trie = SuffixTrie::new(2 * generators);
        for (i, r) in rules.iter().enumerate() {
            trie.insert(&r.lhs, i);
        }
        RewriteSystem {
            generators,
            rules,
            status,
            trie,
        }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn status(&self) -> CompletionStatus {
        self.status
    }

    pub fn is_complete(&self) -> bool {
        self.status == CompletionStatus::Complete
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    /// Irreducible form of an arbitrary letter sequence.
    pub fn reduce_letters(&self, letters: &[Letter]) -> Vec<Letter> {
        let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
        let mut input: Vec<Letter> = letters.iter().rev().copied().collect();
        while let Some(l) = input.pop() {
            out.push(l);
            if let Some(id) = self.trie.find_suffix(&out) {
                let rule = &self.rules[id];
                out.truncate(out.len() - rule.lhs.len());
                input.extend(rule.rhs.iter().rev());
            }
        }
        out
    }

    /// Normal form of a word. Canonical when the system is complete.
    pub fn normal_form(&self, w: &Word) -> Word {
        Word::from_letters(self.reduce_letters(w.letters()))
    }

    /// Like [`normal_form`](Self::normal_form) but records each rule application.
    pub fn normal_form_traced(&self, w: &Word) -> (Word, Vec<RewriteStep>) {
        let mut trace = Vec::new();
        let mut out: Vec<Letter> = Vec::with_capacity(w.len());
        let mut input: Vec<Letter> = w.letters().iter().rev().copied().collect();
        while let Some(l) = input.pop() {
            out.push(l);
            if let Some(id) = self.trie.find_suffix(&out) {
                let rule = &self.rules[id];
                let position = out.len() - rule.lhs.len();
                trace.push(RewriteStep { position, rule: id });
                out.truncate(position);
                input.extend(rule.rhs.iter().rev());
            }
        }
        (Word::from_letters(out), trace)
    }

    /// Replays a trace, checking that every step matches its rule's lhs.
    pub fn replay(&self, w: &Word, trace: &[RewriteStep]) -> Option<Word> {
        let mut cur: Vec<Letter> = w.letters().to_vec();
        for step in trace {
            let rule = self.rules.get(step.rule)?;
            let end = step.position + rule.lhs.len();
            if end > cur.len() || cur[step.position..end] != rule.lhs[..] {
                return None;
            }
            cur.splice(step.position..end, rule.rhs.iter().copied());
        }
        let out = Word::from_letters(cur.iter().copied());
        (out.letters() == &cur[..]).then_some(out)
    }

    /// Every overlap of two left-hand sides resolves. True for complete systems.
    pub fn is_locally_confluent(&self) -> bool {
        for a in &self.rules {
            for b in &self.rules {
                for (x, y) in overlaps(a, b) {
                    if self.reduce_letters(&x) != self.reduce_letters(&y) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Text form, one `lhs -> rhs` rule per line; the empty word is `1`.
    pub fn dump(&self, alphabet: &Alphabet) -> String {
        let mut s = String::new();
        let status = match self.status {
            CompletionStatus::Complete => "complete",
            CompletionStatus::Capped => "capped",
        };
        let _ = writeln!(s, "# generators: {}", alphabet.names().join(","));
        let _ = writeln!(s, "# status: {status}");
        for r in &self.rules {
            let _ = writeln!(
                s,
                "{} -> {}",
                render_raw(alphabet, &r.lhs),
                render_raw(alphabet, &r.rhs)
            );
        }
        s
    }

    pub fn load(text: &str, alphabet: &Alphabet) -> Result<Self, RulesFormatError> {
        let mut rules = Vec::new();
        let mut status = CompletionStatus::Capped;
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let syntax = |message: String| RulesFormatError::Syntax {
                line: line_no,
                message,
            };
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            if let Some(c) = t.strip_prefix('#') {
                if let Some(st) = c.trim().strip_prefix("status:") {
                    status = match st.trim() {
                        "complete" => CompletionStatus::Complete,
                        "capped" => CompletionStatus::Capped,
                        other => return Err(syntax(format!("unknown status {other:?}"))),
                    };
                }
                continue;
            }
            let (l, r) = t
                .split_once("->")
                .ok_or_else(|| syntax("expected 'lhs -> rhs'".into()))?;
            let lhs = parse_raw(alphabet, l.trim()).map_err(&syntax)?;
            let rhs = parse_raw(alphabet, r.trim()).map_err(&syntax)?;
            if shortlex(&lhs, &rhs) != Ordering::Greater {
                return Err(syntax("lhs must be shortlex-greater than rhs".into()));
            }
            rules.push(Rule { lhs, rhs });
        }
        Ok(RewriteSystem::from_rules(alphabet.len(), rules, status))
    }
}

fn render_raw(alphabet: &Alphabet, letters: &[Letter]) -> String {
    if letters.is_empty() {
        return "1".into();
    }
    let mut s = String::new();
    for &l in letters {
        alphabet.render_letter(l, &mut s);
    }
    s
}

/// Letter sequence without free reduction.
fn parse_raw(alphabet: &Alphabet, text: &str) -> Result<Vec<Letter>, String> {
    if text == "1" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        let name: String = if c == '[' {
            let mut n = String::new();
            loop {
                match chars.next() {
                    Some(']') => break,
                    Some(ch) => n.push(ch),
                    None => return Err("unterminated '['".into()),
                }
            }
            n
        } else {
            c.to_string()
        };
        let lower = name.to_lowercase();
        let g = alphabet
            .lookup(&lower)
            .ok_or_else(|| format!("unknown generator {name:?}"))?;
        out.push(Letter::new(g, name != lower));
    }
    Ok(out)
}

/// Critical pairs from suffix/prefix overlaps of `a.lhs` with `b.lhs`.
fn overlaps(a: &Rule, b: &Rule) -> Vec<(Vec<Letter>, Vec<Letter>)> {
    let (l1, l2) = (&a.lhs, &b.lhs);
    let mut out = Vec::new();
    for k in 1..l1.len().min(l2.len()) {
        if l1[l1.len() - k..] == l2[..k] {
            let mut x = a.rhs.clone();
            x.extend_from_slice(&l2[k..]);
            let mut y = l1[..l1.len() - k].to_vec();
            y.extend_from_slice(&b.rhs);
            out.push((x, y));
        }
    }
    out
}

fn contains(hay: &[Letter], needle: &[Letter]) -> bool {
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}

struct Completion {
    rules: Vec<Option<Rule>>,
    trie: SuffixTrie,
    active: usize,
}

impl Completion {
    fn reduce(&self, letters: &[Letter]) -> Vec<Letter> {
        let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
        let mut input: Vec<Letter> = letters.iter().rev().copied().collect();
        while let Some(l) = input.pop() {
            out.push(l);
            if let Some(id) = self.trie.find_suffix(&out) {
                let rule = self.rules[id].as_ref().expect("trie points at live rule");
                out.truncate(out.len() - rule.lhs.len());
                input.extend(rule.rhs.iter().rev());
            }
        }
        out
    }
}

type Pending = BinaryHeap<Reverse<(usize, u64, Vec<Letter>, Vec<Letter>)>>;

/// Knuth–Bendix completion of the group presented by `p`, shortlex order.
pub fn kb_complete(p: &Presentation, limits: CompletionLimits) -> RewriteSystem {
    let n = p.generator_count();
    let mut state = Completion {
        rules: Vec::new(),
        trie: SuffixTrie::new(2 * n),
        active: 0,
    };
    let mut pending: Pending = BinaryHeap::new();
    let mut seq = 0u64;
    let mut push = |pending: &mut Pending, l: Vec<Letter>, r: Vec<Letter>| {
        pending.push(Reverse((l.len() + r.len(), seq, l, r)));
        seq += 1;
    };
    for g in 0..n {
        push(&mut pending, vec![Letter::gen(g), Letter::inv(g)], vec![]);
        push(&mut pending, vec![Letter::inv(g), Letter::gen(g)], vec![]);
    }
    for r in p.relators() {
        push(&mut pending, r.letters().to_vec(), vec![]);
    }

    let mut capped = false;
    let mut iterations = 0usize;
    while let Some(Reverse((_, _, l, r))) = pending.pop() {
        iterations += 1;
        if iterations > limits.max_iterations {
            capped = true;
            break;
        }
        let a = state.reduce(&l);
        let b = state.reduce(&r);
        let (lhs, rhs) = match shortlex(&a, &b) {
            Ordering::Equal => continue,
            Ordering::Greater => (a, b),
            Ordering::Less => (b, a),
        };
        if lhs.len() > limits.max_rule_len {
            capped = true;
            continue;
        }
        if state.active >= limits.max_rules {
            capped = true;
            break;
        }
        let id = state.rules.len();
        state.trie.insert(&lhs, id);
        state.rules.push(Some(Rule {
            lhs: lhs.clone(),
            rhs,
        }));
        state.active += 1;

        // Interreduce: retire rules whose lhs became reducible.
        for j in 0..id {
            let retire = match &state.rules[j] {
                Some(rule) => contains(&rule.lhs, &lhs),
                None => continue,
            };
            if retire {
                let rule = state.rules[j].take().expect("checked live");
                state.trie.remove(&rule.lhs);
                state.active -= 1;
                push(&mut pending, rule.lhs, rule.rhs);
            }
        }
        for j in 0..id {
            if let Some(rule) = &state.rules[j] {
                if contains(&rule.rhs, &lhs) {
                    let reduced = state.reduce(&rule.rhs);
                    state.rules[j].as_mut().expect("live").rhs = reduced;
                }
            }
        }

        let new_rule = state.rules[id].clone().expect("just inserted");
        for j in 0..=id {
            let Some(other) = state.rules[j].clone() else {
                continue;
            };
            for (x, y) in overlaps(&new_rule, &other) {
                push(&mut pending, x, y);
            }
            if j != id {
                for (x, y) in overlaps(&other, &new_rule) {
                    push(&mut pending, x, y);
                }
            }
        }
    }
    if !pending.is_empty() {
        capped = true;
    }

    let mut rules: Vec<Rule> = state.rules.into_iter().flatten().collect();
    rules.sort_by(|a, b| shortlex(&a.lhs, &b.lhs));
    let status = if capped {
        CompletionStatus::Capped
    } else {
        CompletionStatus::Complete
    };
    RewriteSystem::from_rules(n, rules, status)
}
