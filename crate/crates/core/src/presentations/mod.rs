//! Finitely presented groups: parsing, the built-in knot-group catalog, torus
//! groups, connected sums and abelianization.

mod abelian;

use std::fmt;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::words::{Alphabet, ParseError, Word};

pub use abelian::{smith_form, AbelianizationData, SmithForm};

/// Names accepted by [`catalog`].
pub const CATALOG_NAMES: [&str; 5] = ["klein", "3_1", "4_1", "5_1", "5_2"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("relator {index} is trivial after reduction")]
    EmptyRelator { index: usize },
    #[error("presentation needs at least one generator")]
    EmptyAlphabet,
    #[error("unknown catalog entry {name:?}; available: {}", CATALOG_NAMES.join(", "))]
    UnknownCatalog { name: String },
    #[error("torus group needs |p| > 1 and |q| > 1, got p = {p}, q = {q}")]
    TorusHypothesis { p: i64, q: i64 },
    #[error("presentation {0} has no meridian")]
    MissingMeridian(String),
    #[error("word uses generators outside the alphabet")]
    AlphabetMismatch,
}

/// Optional knot-theoretic annotations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Metadata {
    pub name: Option<String>,
    pub fibred: Option<bool>,
    /// A word mapping to 1 under the abelianization weights.
    pub meridian: Option<Word>,
    /// `(p, q)` when the presentation is `⟨x, y | x^p = y^q⟩`.
    pub torus: Option<(i64, i64)>,
    /// The presentation is a one-relator presentation of the special form for
    /// which "no positive real roots" rules out bi-orderability.
    pub special_one_relator: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Alphabet,
    relators: Vec<Word>,
    pub meta: Metadata,
}

impl Presentation {
    /// Builds a presentation; relators are cyclically reduced and must be
    /// nontrivial.
    pub fn new(alphabet: Alphabet, relators: Vec<Word>) -> Result<Self, PresentationError> {
        if alphabet.is_empty() {
            return Err(PresentationError::EmptyAlphabet);
        }
        let mut out = Vec::with_capacity(relators.len());
        for (index, r) in relators.into_iter().enumerate() {
            if !alphabet.contains_word(&r) {
                return Err(PresentationError::AlphabetMismatch);
            }
            let (core, _) = r.cyclic_reduce();
            if core.is_identity() {
                return Err(PresentationError::EmptyRelator { index });
            }
            out.push(core);
        }
        Ok(Presentation {
            alphabet,
            relators: out,
            meta: Metadata::default(),
        })
    }

    /// Parses `<a, b | r1, u = v, ...>`; `:` may replace `|`.
    pub fn parse(text: &str) -> Result<Self, PresentationError> {
        let t = text.trim();
        let inner = t
            .strip_prefix('<')
            .and_then(|s| s.strip_suffix('>'))
            .ok_or_else(|| ParseError {
                position: 0,
                message: "expected <generators | relators>".into(),
            })?;
        let offset = t.find('<').unwrap_or(0) + 1;
        let bar = inner.find(['|', ':']).ok_or_else(|| ParseError {
            position: offset,
            message: "missing '|' between generators and relators".into(),
        })?;
        let gens: Vec<&str> = inner[..bar]
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        let alphabet = Alphabet::new(&gens).map_err(|e| ParseError {
            position: offset + e.position,
            message: e.message,
        })?;
        let body_start = offset + bar + 1;
        let mut relators = Vec::new();
        for (start, piece) in split_top_level(&inner[bar + 1..]) {
            if piece.trim().is_empty() {
                continue;
            }
            let at = |e: ParseError, base: usize| ParseError {
                position: body_start + start + base + e.position,
                message: e.message,
            };
            let r = match piece.split_once('=') {
                Some((lhs, rhs)) => {
                    let u = alphabet.parse(lhs).map_err(|e| at(e, 0))?;
                    let v = alphabet.parse(rhs).map_err(|e| at(e, lhs.len() + 1))?;
                    u.concat(&v.inverse())
                }
                None => alphabet.parse(piece).map_err(|e| at(e, 0))?,
            };
            relators.push(r);
        }
        Presentation::new(alphabet, relators)
    }

    pub fn with_meta(mut self, meta: Metadata) -> Self {
        self.meta = meta;
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_count(&self) -> usize {
        self.alphabet.len()
    }

    pub fn name(&self) -> &str {
        self.meta.name.as_deref().unwrap_or("<anonymous>")
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, ParseError> {
        self.alphabet.parse(text)
    }

    pub fn render_word(&self, w: &Word) -> String {
        self.alphabet.render(w)
    }

    pub fn check_word(&self, w: &Word) -> Result<(), PresentationError> {
        if self.alphabet.contains_word(w) {
            Ok(())
        } else {
            Err(PresentationError::AlphabetMismatch)
        }
    }

    /// Grammar form, `<a,b | bbAAbbaBBBa>`.
    pub fn render(&self) -> String {
        let rels: Vec<String> = self.relators.iter().map(|r| self.render_word(r)).collect();
        format!(
            "<{} | {}>",
            self.alphabet.names().join(","),
            rels.join(", ")
        )
    }

    pub fn abelianization(&self) -> AbelianizationData {
        AbelianizationData::of(self)
    }

    pub fn to_json(&self) -> PresentationJson {
        PresentationJson {
            name: self.meta.name.clone(),
            text: self.render(),
            generators: self.alphabet.names().to_vec(),
            relators: self.relators.iter().map(|r| self.render_word(r)).collect(),
            fibred: self.meta.fibred,
            meridian: self.meta.meridian.as_ref().map(|m| self.render_word(m)),
            torus: self.meta.torus,
        }
    }

    /// The unknot group `⟨m | ⟩` with meridian `m`.
    pub fn unknot() -> Self {
        let alphabet = Alphabet::new(&["m"]).expect("valid name");
        Presentation::new(alphabet, vec![])
            .expect("free group")
            .with_meta(Metadata {
                name: Some("0_1".into()),
                fibred: Some(true),
                meridian: Some(Word::generator(0)),
                ..Metadata::default()
            })
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// JSON rendering used by the CLI.
#[derive(Clone, Debug, Serialize)]
pub struct PresentationJson {
    pub name: Option<String>,
    pub text: String,
    pub generators: Vec<String>,
    pub relators: Vec<String>,
    pub fibred: Option<bool>,
    pub meridian: Option<String>,
    pub torus: Option<(i64, i64)>,
}

/// Splits on commas that are not nested inside brackets or parentheses,
/// returning each piece with its byte offset.
fn split_top_level(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, &s[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &s[start..]));
    out
}

/// `⟨x, y | x^p = y^q⟩`.
pub fn torus_group(p: i64, q: i64) -> Result<Presentation, PresentationError> {
    if p.abs() <= 1 || q.abs() <= 1 {
        return Err(PresentationError::TorusHypothesis { p, q });
    }
    let alphabet = Alphabet::new(&["x", "y"]).expect("valid names");
    let x = Word::generator(0);
    let y = Word::generator(1);
    let rel = x.pow(p).concat(&y.pow(-q));
    let mut pres = Presentation::new(alphabet, vec![rel])?;
    let mut meta = Metadata {
        name: Some(format!("T({p},{q})")),
        torus: Some((p, q)),
        ..Metadata::default()
    };
    if p.gcd(&q) == 1 {
        meta.fibred = Some(true);
        let w = pres
            .abelianization()
            .weights
            .expect("coprime torus group has rank-one abelianization");
        let e = w[0].extended_gcd(&w[1]);
        debug_assert_eq!(e.gcd, 1);
        meta.meridian = Some(x.pow(e.x).concat(&y.pow(e.y)));
    }
    pres.meta = meta;
    Ok(pres)
}

/// The built-in presentations.
pub fn catalog(name: &str) -> Result<Presentation, PresentationError> {
    let named = |p: Presentation, meta: Metadata| p.with_meta(meta);
    match name {
        "klein" => Ok(named(
            Presentation::parse("<x,y | Yxy = X>")?,
            Metadata {
                name: Some("klein".into()),
                ..Metadata::default()
            },
        )),
        "3_1" | "5_1" => {
            let mut p = torus_group(2, if name == "3_1" { 3 } else { 5 })?;
            p.meta.name = Some(name.into());
            Ok(p)
        }
        "4_1" => Ok(named(
            Presentation::parse("<a,b | ab3a = ba2b>")?,
            Metadata {
                name: Some("4_1".into()),
                fibred: Some(true),
                meridian: Some(Word::generator(0)),
                ..Metadata::default()
            },
        )),
        "5_2" => Ok(named(
            Presentation::parse("<a,b | b2A2b2 = Ab3A>")?,
            Metadata {
                name: Some("5_2".into()),
                fibred: Some(false),
                meridian: Some(Word::generator(0)),
                special_one_relator: true,
                ..Metadata::default()
            },
        )),
        _ => Err(PresentationError::UnknownCatalog { name: name.into() }),
    }
}

/// Generator renaming from one presentation into another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inclusion {
    pub map: Vec<usize>,
}

impl Inclusion {
    pub fn identity(n: usize) -> Self {
        Inclusion {
            map: (0..n).collect(),
        }
    }

    pub fn apply(&self, w: &Word) -> Word {
        w.rename(&self.map)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = self.map.clone();
        seen.sort_unstable();
        seen.windows(2).all(|p| p[0] != p[1])
    }

    /// Every relator of `source` maps to a relator of `target`, up to cyclic
    /// rotation and inversion.
    pub fn preserves_relators(&self, source: &Presentation, target: &Presentation) -> bool {
        if self.map.len() != source.generator_count()
            || self.map.iter().any(|&g| g >= target.generator_count())
        {
            return false;
        }
        source.relators().iter().all(|r| {
            let image = self.apply(r);
            target
                .relators()
                .iter()
                .any(|t| same_cyclic_word(&image, t) || same_cyclic_word(&image.inverse(), t))
        })
    }
}

fn same_cyclic_word(a: &Word, b: &Word) -> bool {
    a.len() == b.len() && (0..a.len().max(1)).any(|k| &a.rotate(k) == b)
}

/// Connected sum: disjoint union of generators and relators plus the relator
/// identifying the two meridians.
pub fn connected_sum(
    p1: &Presentation,
    p2: &Presentation,
) -> Result<(Presentation, Inclusion, Inclusion), PresentationError> {
    let m1 = p1
        .meta
        .meridian
        .clone()
        .ok_or_else(|| PresentationError::MissingMeridian(p1.name().into()))?;
    let m2 = p2
        .meta
        .meridian
        .clone()
        .ok_or_else(|| PresentationError::MissingMeridian(p2.name().into()))?;
    let mut names: Vec<String> = p1.alphabet().names().to_vec();
    let n1 = names.len();
    for name in p2.alphabet().names() {
        let fresh = if !names.contains(name) {
            name.clone()
        } else {
            ('a'..='z')
                .map(|c| c.to_string())
                .chain((0..).map(|i| format!("{name}_{i}")))
                .find(|c| !names.contains(c) && !p2.alphabet().names().contains(c))
                .expect("infinite candidate list")
        };
        names.push(fresh);
    }
    let alphabet = Alphabet::new(&names)?;
    let inc1 = Inclusion::identity(n1);
    let inc2 = Inclusion {
        map: (n1..names.len()).collect(),
    };
    let mut relators: Vec<Word> = p1.relators().to_vec();
    relators.extend(p2.relators().iter().map(|r| inc2.apply(r)));
    relators.push(m1.concat(&inc2.apply(&m2).inverse()));
    let fibred = match (p1.meta.fibred, p2.meta.fibred) {
        (Some(a), Some(b)) => Some(a && b),
        (Some(false), _) | (_, Some(false)) => Some(false),
        _ => None,
    };
    let sum = Presentation::new(alphabet, relators)?.with_meta(Metadata {
        name: Some(format!("{}#{}", p1.name(), p2.name())),
        fibred,
        meridian: Some(m1),
        ..Metadata::default()
    });
    Ok((sum, inc1, inc2))
}
