//! Free-group words over a finite alphabet.
//!
//! Words are stored freely reduced, so two words denote the same free-group
//! element exactly when their letter sequences are equal. Inverses are
//! written with capital letters: `AbaB` is `a⁻¹ b a b⁻¹`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A generator or its inverse, packed as `2 * generator + inverse_bit`.
///
/// The packing makes the derived ordering `a < A < b < B < ...`, which is the
/// letter order used by the shortlex rewriting order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter(u16);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter((generator as u16) << 1 | inverse as u16)
    }

    pub fn gen(generator: usize) -> Self {
        Self::new(generator, false)
    }

    pub fn inv(generator: usize) -> Self {
        Self::new(generator, true)
    }

    pub fn from_code(code: u16) -> Self {
        Letter(code)
    }

    pub fn code(self) -> u16 {
        self.0
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    /// +1 for a generator, -1 for an inverse.
    pub fn sign(self) -> i64 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn generator(g: usize) -> Self {
        Word(vec![Letter::gen(g)])
    }

    /// Builds a word from an arbitrary letter sequence, reducing it.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut w = Word::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    /// Builds a word from signed generator numbers `±(g + 1)`.
    pub fn from_signed(seq: &[i32]) -> Self {
        Self::from_letters(seq.iter().filter(|&&x| x != 0).map(|&x| {
            let g = x.unsigned_abs() as usize - 1;
            Letter::new(g, x < 0)
        }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    /// Appends a letter, cancelling against the last letter if needed.
    pub fn push(&mut self, l: Letter) {
        if self.0.last() == Some(&l.inverse()) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn append(&mut self, other: &Word) {
        for &l in &other.0 {
            self.push(l);
        }
    }

    /// Freely reduced product `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        // Cancellation only happens at the seam.
        let mut k = 0;
        let (a, b) = (&self.0, &other.0);
        while k < a.len() && k < b.len() && a[a.len() - 1 - k] == b[k].inverse() {
            k += 1;
        }
        let mut out = Vec::with_capacity(a.len() + b.len() - 2 * k);
        out.extend_from_slice(&a[..a.len() - k]);
        out.extend_from_slice(&b[k..]);
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// `self^by = by⁻¹ · self · by`.
    pub fn conjugate(&self, by: &Word) -> Word {
        by.inverse().concat(self).concat(by)
    }

    /// `[self, other] = self⁻¹ other⁻¹ self other`.
    pub fn commutator(&self, other: &Word) -> Word {
        self.inverse()
            .concat(&other.inverse())
            .concat(self)
            .concat(other)
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Returns `(core, conjugator)` with `core = conjugator · self · conjugator⁻¹`
    /// cyclically reduced, so that `self == core.conjugate(&conjugator)`.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let n = self.0.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.0[k] == self.0[n - 1 - k].inverse() {
            k += 1;
        }
        let core = Word(self.0[k..n - k].to_vec());
        let conjugator = Word(self.0[..k].to_vec()).inverse();
        (core, conjugator)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(f), Some(l)) => self.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    /// Cyclic rotation moving the first `k` letters to the end. Only meaningful
    /// (and only reduced) for cyclically reduced words.
    pub fn rotate(&self, k: usize) -> Word {
        let n = self.0.len();
        if n == 0 {
            return self.clone();
        }
        let k = k % n;
        let mut out = Vec::with_capacity(n);
        out.extend_from_slice(&self.0[k..]);
        out.extend_from_slice(&self.0[..k]);
        Word::from_letters(out)
    }

    pub fn prefix(&self, k: usize) -> Word {
        Word(self.0[..k].to_vec())
    }

    /// Signed letter counts per generator. The vector is long enough to index
    /// every generator the word uses, even past `generators`.
    pub fn exponent_vector(&self, generators: usize) -> Vec<i64> {
        let mut v = vec![0i64; generators.max(self.generator_bound())];
        for l in &self.0 {
            v[l.generator()] += l.sign();
        }
        v
    }

    /// One more than the largest generator index used (0 for the identity).
    pub fn generator_bound(&self) -> usize {
        self.0.iter().map(|l| l.generator() + 1).max().unwrap_or(0)
    }

    /// Renames generators through `map[old] = new`.
    pub fn rename(&self, map: &[usize]) -> Word {
        Word::from_letters(
            self.0
                .iter()
                .map(|l| Letter::new(map[l.generator()], l.is_inverse())),
        )
    }

    /// Replaces generator `g` by `images[g]`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Word::identity();
        for l in &self.0 {
            let img = &images[l.generator()];
            if l.is_inverse() {
                out = out.concat(&img.inverse());
            } else {
                out = out.concat(img);
            }
        }
        out
    }

    /// Shortlex comparison: shorter first, then lexicographic in letter order.
    pub fn shortlex_cmp(&self, other: &Word) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        let alphabet = Alphabet::standard(self.generator_bound());
        f.write_str(&alphabet.render(self))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

/// Printable generator names, indexed densely from 0.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(from = "Vec<String>", into = "Vec<String>")]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl From<Vec<String>> for Alphabet {
    fn from(names: Vec<String>) -> Self {
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        Alphabet { names, index }
    }
}

impl From<Alphabet> for Vec<String> {
    fn from(a: Alphabet) -> Self {
        a.names
    }
}

impl Alphabet {
    /// Builds an alphabet, rejecting duplicate or malformed names.
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, ParseError> {
        let mut out = Vec::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            let n = n.as_ref().trim();
            if !valid_name(n) {
                return Err(ParseError::new(i, format!("invalid generator name {n:?}")));
            }
            if out.iter().any(|m: &String| m == n) {
                return Err(ParseError::new(i, format!("duplicate generator {n:?}")));
            }
            out.push(n.to_string());
        }
        Ok(Alphabet::from(out))
    }

    /// `a, b, c, ...`; generators past `z` are named `g26, g27, ...`.
    pub fn standard(n: usize) -> Self {
        Alphabet::from(
            (0..n)
                .map(|i| {
                    if i < 26 {
                        ((b'a' + i as u8) as char).to_string()
                    } else {
                        format!("g{i}")
                    }
                })
                .collect::<Vec<_>>(),
        )
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn contains_word(&self, w: &Word) -> bool {
        w.generator_bound() <= self.len()
    }

    pub fn render_letter(&self, l: Letter, out: &mut String) {
        let name = &self.names[l.generator()];
        let single = name.chars().count() == 1;
        if !single {
            out.push('[');
        }
        if l.is_inverse() {
            out.push_str(&name.to_uppercase());
        } else {
            out.push_str(name);
        }
        if !single {
            out.push(']');
        }
    }

    /// Renders in capital-letter inverse notation; the identity is `""`.
    pub fn render(&self, w: &Word) -> String {
        let mut s = String::with_capacity(w.len());
        for &l in w.letters() {
            self.render_letter(l, &mut s);
        }
        s
    }

    /// Parses a word expression.
    ///
    /// Besides plain letters the grammar accepts exponents (`x2`, `x^-3`),
    /// parenthesised groups (`(ab)^2`), commutators `[u,v]`, bracketed
    /// generator names `[g3]` / `[G3]`, and `1` for the identity.
    pub fn parse(&self, text: &str) -> Result<Word, ParseError> {
        let chars: Vec<char> = text.chars().collect();
        let mut p = WordParser {
            alphabet: self,
            chars: &chars,
            pos: 0,
        };
        let w = p.expr()?;
        p.skip_ws();
        if p.pos < chars.len() {
            return Err(ParseError::new(
                p.pos,
                format!("unexpected character {:?}", chars[p.pos]),
            ));
        }
        Ok(w)
    }
}

fn valid_name(n: &str) -> bool {
    let mut cs = n.chars();
    match cs.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    cs.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

struct WordParser<'a> {
    alphabet: &'a Alphabet,
    chars: &'a [char],
    pos: usize,
}

impl WordParser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn expr(&mut self) -> Result<Word, ParseError> {
        let mut w = Word::identity();
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some(')') | Some(']') | Some(',') => return Ok(w),
                _ => {
                    let t = self.term()?;
                    w = w.concat(&t);
                }
            }
        }
    }

    fn term(&mut self) -> Result<Word, ParseError> {
        let atom = self.atom()?;
        self.skip_ws();
        let exp = self.exponent()?;
        Ok(match exp {
            Some(e) => atom.pow(e),
            None => atom,
        })
    }

    fn exponent(&mut self) -> Result<Option<i64>, ParseError> {
        let start = self.pos;
        let caret = self.peek() == Some('^');
        if caret {
            self.pos += 1;
            self.skip_ws();
        }
        let negative = caret && self.peek() == Some('-');
        if negative {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            if caret {
                return Err(ParseError::new(start, "expected exponent after '^'"));
            }
            return Ok(None);
        }
        let digits: String = self.chars[digits_start..self.pos].iter().collect();
        let n: i64 = digits
            .parse()
            .map_err(|_| ParseError::new(digits_start, "exponent out of range"))?;
        Ok(Some(if negative { -n } else { n }))
    }

    fn atom(&mut self) -> Result<Word, ParseError> {
        let start = self.pos;
        let c = self.peek().expect("atom called at end of input");
        match c {
            '(' => {
                self.pos += 1;
                let w = self.expr()?;
                self.expect(')')?;
                Ok(w)
            }
            '[' => {
                self.pos += 1;
                // Either a bracketed generator name or a commutator.
                let save = self.pos;
                let mut name = String::new();
                while let Some(ch) = self.peek() {
                    if ch.is_ascii_alphanumeric() || ch == '_' {
                        name.push(ch);
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                if self.peek() == Some(']') && !name.is_empty() {
                    if let Some(w) = self.named(&name) {
                        self.pos += 1;
                        return Ok(w);
                    }
                    if name.chars().count() > 1 {
                        return Err(ParseError::new(save, format!("unknown generator {name:?}")));
                    }
                }
                self.pos = save;
                let u = self.expr()?;
                self.expect(',')?;
                let v = self.expr()?;
                self.expect(']')?;
                Ok(u.commutator(&v))
            }
            '1' => {
                self.pos += 1;
                Ok(Word::identity())
            }
            c if c.is_ascii_alphabetic() => {
                self.pos += 1;
                let name = c.to_ascii_lowercase().to_string();
                match self.alphabet.lookup(&name) {
                    Some(g) => Ok(Word::letter(Letter::new(g, c.is_ascii_uppercase()))),
                    None => Err(ParseError::new(start, format!("unknown generator {c:?}"))),
                }
            }
            c => Err(ParseError::new(
                start,
                format!("unexpected character {c:?}"),
            )),
        }
    }

    fn named(&self, name: &str) -> Option<Word> {
        if let Some(g) = self.alphabet.lookup(name) {
            return Some(Word::generator(g));
        }
        let lower = name.to_lowercase();
        if name != lower && name == name.to_uppercase() {
            if let Some(g) = self.alphabet.lookup(&lower) {
                return Some(Word::letter(Letter::inv(g)));
            }
        }
        None
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError::new(self.pos, format!("expected {c:?}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ab() -> Alphabet {
        Alphabet::new(&["a", "b"]).unwrap()
    }

    fn w(s: &str) -> Word {
        ab().parse(s).unwrap()
    }

    #[test]
    fn parse_capital_inverse() {
        let x = w("AbaB");
        assert_eq!(x.len(), 4);
        assert_eq!(
            x.letters(),
            &[
                Letter::inv(0),
                Letter::gen(1),
                Letter::gen(0),
                Letter::inv(1)
            ]
        );
        assert!(w("").is_identity());
        assert!(w("aA").is_identity());
    }

    #[test]
    fn parse_errors_name_position() {
        let err = ab().parse("abz").unwrap_err();
        assert_eq!(err.position, 2);
        assert!(ab().parse("a^").is_err());
        assert!(ab().parse("(ab").is_err());
    }

    #[test]
    fn parse_sugar() {
        assert_eq!(w("ab3a"), w("abbba"));
        assert_eq!(w("a^-2"), w("AA"));
        assert_eq!(w("(ab)^2"), w("abab"));
        assert_eq!(w("[a,b]"), w("ABab"));
        assert_eq!(w("[a, B]"), w("AbaB"));
        assert_eq!(w("[a]"), w("a"));
        assert_eq!(w("[A]"), w("A"));
        assert_eq!(w("1"), Word::identity());
    }

    #[test]
    fn bracketed_names() {
        let names: Vec<String> = (0..30).map(|i| format!("g{i}")).collect();
        let alpha = Alphabet::new(&names).unwrap();
        let x = alpha.parse("[g3][G27]").unwrap();
        assert_eq!(x.letters(), &[Letter::gen(3), Letter::inv(27)]);
        assert_eq!(alpha.render(&x), "[g3][G27]");
        assert!(alpha.parse("[g99]").is_err());
    }

    #[test]
    fn concat_examples() {
        assert!(w("ab").concat(&w("BA")).is_identity());
        assert_eq!(w("ab").concat(&w("b")), w("abb"));
        assert_eq!(w("abA").concat(&w("aB")), w("a"));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(ab().render(&w("AbaB").inverse()), "bABa");
        assert!(Word::identity().inverse().is_identity());
        assert_eq!(w("a").inverse(), w("A"));
    }

    #[test]
    fn conjugate_and_commutator() {
        let alpha = Alphabet::new(&["x", "y"]).unwrap();
        let x = alpha.parse("x").unwrap();
        let y = alpha.parse("y").unwrap();
        assert_eq!(alpha.render(&x.conjugate(&y)), "Yxy");
        assert_eq!(x.conjugate(&Word::identity()), x);
        assert_eq!(x.conjugate(&x), x);
        assert_eq!(alpha.render(&x.commutator(&y)), "XYxy");
        assert!(x.commutator(&x).is_identity());
        assert!(x.commutator(&Word::identity()).is_identity());
    }

    #[test]
    fn cyclic_reduce_examples() {
        let (core, c) = w("abA").cyclic_reduce();
        assert_eq!(core, w("b"));
        assert_eq!(c, w("A"));
        assert_eq!(core.conjugate(&c), w("abA"));
        let (core, c) = Word::identity().cyclic_reduce();
        assert!(core.is_identity() && c.is_identity());
        let (core, c) = w("AbaB").cyclic_reduce();
        assert_eq!(core, w("AbaB"));
        assert!(c.is_identity());
    }

    #[test]
    fn exponent_vectors() {
        assert_eq!(w("AbaB").exponent_vector(2), vec![0, 0]);
        let x = Alphabet::new(&["x"]).unwrap().parse("x2").unwrap();
        assert_eq!(x.exponent_vector(1), vec![2]);
    }

    #[test]
    fn rendering_round_trip() {
        let alpha = ab();
        for s in ["", "a", "AbaB", "bbAAbbaBBBa"] {
            assert_eq!(alpha.render(&w(s)), s);
        }
    }

    fn word_strategy(gens: usize, max_len: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec((0..gens, any::<bool>()), 0..max_len)
            .prop_map(|v| Word::from_letters(v.into_iter().map(|(g, i)| Letter::new(g, i))))
    }

    fn is_reduced(x: &Word) -> bool {
        x.letters().windows(2).all(|p| p[0] != p[1].inverse())
    }

    proptest! {
        #[test]
        fn reduction_is_idempotent(x in word_strategy(3, 24)) {
            prop_assert!(is_reduced(&x));
            prop_assert_eq!(Word::from_letters(x.letters().iter().copied()), x);
        }

        #[test]
        fn inverse_cancels(x in word_strategy(3, 24)) {
            prop_assert!(x.concat(&x.inverse()).is_identity());
            prop_assert!(x.inverse().concat(&x).is_identity());
        }

        #[test]
        fn concat_matches_letterwise_push(x in word_strategy(3, 16), y in word_strategy(3, 16)) {
            let mut z = x.clone();
            z.append(&y);
            prop_assert_eq!(x.concat(&y), z);
        }

        #[test]
        fn exponent_vector_laws(x in word_strategy(3, 16), y in word_strategy(3, 16)) {
            let ex = x.exponent_vector(3);
            let ey = y.exponent_vector(3);
            let exy = x.concat(&y).exponent_vector(3);
            for i in 0..3 {
                prop_assert_eq!(exy[i], ex[i] + ey[i]);
            }
            prop_assert_eq!(x.conjugate(&y).exponent_vector(3), ex);
            prop_assert!(x.commutator(&y).exponent_vector(3).iter().all(|&e| e == 0));
        }

        #[test]
        fn cyclic_reduce_round_trips(x in word_strategy(3, 24)) {
            let (core, c) = x.cyclic_reduce();
            prop_assert!(core.len() <= x.len());
            prop_assert!(core.is_cyclically_reduced());
            prop_assert_eq!(core.conjugate(&c), x);
        }

        #[test]
        fn render_parse_round_trip(x in word_strategy(2, 24)) {
            let alpha = Alphabet::new(&["a", "b"]).unwrap();
            prop_assert_eq!(alpha.parse(&alpha.render(&x)).unwrap(), x);
        }
    }
}
