//! Fox derivatives in the integral group ring of a free group.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::laurent::LaurentPolynomial;
use crate::words::{Alphabet, Word};

/// Finite integer combination of reduced words.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GroupRingElement {
    terms: BTreeMap<Word, BigInt>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn word(w: Word) -> Self {
        let mut e = Self::zero();
        e.add_term(w, BigInt::one());
        e
    }

    pub fn add_term(&mut self, w: Word, c: BigInt) {
        let slot = self.terms.entry(w).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    /// `u · self`.
    pub fn left_mul(&self, u: &Word) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(u.concat(w), c.clone());
        }
        out
    }

    /// Image under `x_j ↦ t^{weights[j]}`.
    pub fn abelianize(&self, weights: &[i64]) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (w, c) in &self.terms {
            let e: i64 = w
                .exponent_vector(weights.len())
                .iter()
                .zip(weights)
                .map(|(a, b)| a * b)
                .sum();
            out = &out + &LaurentPolynomial::monomial(c.clone(), e);
        }
        out
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let word = if w.is_identity() {
                    "1".to_string()
                } else {
                    alphabet.render(w)
                };
                if c.is_one() {
                    word
                } else if *c == -BigInt::one() {
                    format!("-{word}")
                } else {
                    format!("{c}*{word}")
                }
            })
            .collect();
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self
            .terms
            .keys()
            .map(|w| w.generator_bound())
            .max()
            .unwrap_or(1)
            .max(1);
        f.write_str(&self.render(&Alphabet::standard(n)))
    }
}

/// `∂r/∂x_g`: each occurrence of `x_g` contributes the prefix before it, each
/// occurrence of `x_g^{-1}` contributes minus the prefix through it.
pub fn fox_derivative(r: &Word, g: usize) -> GroupRingElement {
    let mut out = GroupRingElement::zero();
    let mut prefix = Word::identity();
    for &l in r.letters() {
        if l.generator() == g {
            if l.is_inverse() {
                out.add_term(prefix.concat(&Word::letter(l)), -BigInt::one());
            } else {
                out.add_term(prefix.clone(), BigInt::one());
            }
        }
        prefix.push(l);
    }
    out
}
