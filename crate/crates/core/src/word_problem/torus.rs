//! Exact word problem for `⟨x, y | x^p = y^q⟩`.
//!
//! The group is the amalgam `⟨x⟩ *_{x^p = y^q} ⟨y⟩` and `z = x^p` is central,
//! so every element is `z^m` times an alternating product of syllables
//! `x^i` (0 < i < |p|) and `y^j` (0 < j < |q|), uniquely.

use serde::Serialize;

use crate::presentations::Presentation;
use crate::words::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TorusNormalForm {
    /// Exponent of the central element `z = x^p`.
    pub central: i64,
    /// `(generator index, exponent)`, generators alternating.
    pub syllables: Vec<(usize, i64)>,
}

impl TorusNormalForm {
    pub fn is_identity(&self) -> bool {
        self.central == 0 && self.syllables.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorusSolver {
    pub x: usize,
    pub y: usize,
    pub p: i64,
    pub q: i64,
}

impl TorusSolver {
    /// Solver for generators `0` and `1` with relation `x^p = y^q`.
    pub fn new(p: i64, q: i64) -> Self {
        assert!(
            p.abs() > 1 && q.abs() > 1,
            "torus solver needs |p|, |q| > 1"
        );
        TorusSolver { x: 0, y: 1, p, q }
    }

    /// Recognises a two-generator presentation whose single relator is
    /// cyclically `g^a h^b` with `|a|, |b| > 1`.
    pub fn detect(pres: &Presentation) -> Option<Self> {
        if pres.generator_count() != 2 || pres.relators().len() != 1 {
            return None;
        }
        let r = &pres.relators()[0];
        let mut syllables: Vec<(usize, i64)> = Vec::new();
        for l in r.letters() {
            match syllables.last_mut() {
                Some((g, e)) if *g == l.generator() => *e += l.sign(),
                _ => syllables.push((l.generator(), l.sign())),
            }
        }
        if syllables.len() != 2 {
            return None;
        }
        let (g, a) = syllables[0];
        let (h, b) = syllables[1];
        // g^a h^b = 1  <=>  g^a = h^(-b)
        (g != h && a.abs() > 1 && b.abs() > 1).then_some(TorusSolver {
            x: g,
            y: h,
            p: a,
            q: -b,
        })
    }

    fn period(&self, g: usize) -> (i64, i64) {
        if g == self.x {
            (self.p.abs(), self.p.signum())
        } else {
            (self.q.abs(), self.q.signum())
        }
    }

    pub fn normal_form(&self, w: &Word) -> TorusNormalForm {
        let mut central = 0i64;
        let mut syllables: Vec<(usize, i64)> = Vec::new();
        for l in w.letters() {
            let g = l.generator();
            debug_assert!(g == self.x || g == self.y, "letter outside torus alphabet");
            let mut e = l.sign();
            if let Some(&(top, te)) = syllables.last() {
                if top == g {
                    e += te;
                    syllables.pop();
                }
            }
            let (n, s) = self.period(g);
            let r = e.rem_euclid(n);
            central += (e - r) / n * s;
            if r != 0 {
                syllables.push((g, r));
            }
        }
        TorusNormalForm { central, syllables }
    }

    pub fn is_trivial(&self, w: &Word) -> bool {
        self.normal_form(w).is_identity()
    }

    /// The canonical word `x^(p·m) · syllables` of a normal form.
    pub fn canonical_word(&self, nf: &TorusNormalForm) -> Word {
        let mut w = Word::generator(self.x).pow(self.p * nf.central);
        for &(g, e) in &nf.syllables {
            w = w.concat(&Word::letter(Letter::gen(g)).pow(e));
        }
        w
    }

    pub fn canonical(&self, w: &Word) -> Word {
        self.canonical_word(&self.normal_form(w))
    }
}

/// `torus_is_trivial(p, q, w)` for words over `x = 0`, `y = 1`.
pub fn torus_is_trivial(p: i64, q: i64, w: &Word) -> bool {
    TorusSolver::new(p, q).is_trivial(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::torus_group;

    #[test]
    fn trefoil_identity() {
        let t = torus_group(2, 3).unwrap();
        let x = t.parse_word("x").unwrap();
        let y = t.parse_word("y").unwrap();
        let c = x.commutator(&y);
        // x^-1 [x,y] x [x,y]
        let w = x.inverse().concat(&c).concat(&x).concat(&c);
        assert!(torus_is_trivial(2, 3, &w));
        assert!(!torus_is_trivial(2, 3, &c));
    }

    #[test]
    fn relator_is_trivial() {
        for (p, q) in [(2, 3), (2, 5), (3, 4), (-2, 3), (4, 6), (3, -5)] {
            let t = torus_group(p, q).unwrap();
            let r = &t.relators()[0];
            assert!(torus_is_trivial(p, q, r), "({p},{q})");
            assert!(torus_is_trivial(p, q, &r.inverse()));
            assert!(torus_is_trivial(p, q, &r.rotate(1)));
        }
    }

    #[test]
    fn canonical_words_are_fixed_points() {
        let s = TorusSolver::new(3, 4);
        let t = torus_group(3, 4).unwrap();
        for txt in ["xyxYxxYYY", "XXyx", "xxxYYYY", "yyyyXXX", ""] {
            let w = t.parse_word(txt).unwrap();
            let c = s.canonical(&w);
            assert_eq!(s.normal_form(&c), s.normal_form(&w));
            assert_eq!(s.canonical(&c), c);
        }
    }

    #[test]
    fn central_power() {
        let s = TorusSolver::new(2, 3);
        let nf = s.normal_form(&Word::from_signed(&[1, 1]));
        assert_eq!(nf.central, 1);
        assert!(nf.syllables.is_empty());
        let nf = s.normal_form(&Word::from_signed(&[-2, -2, -2]));
        assert_eq!(nf.central, -1);
    }

    #[test]
    fn detect_from_presentation() {
        let t = torus_group(2, 5).unwrap();
        let s = TorusSolver::detect(&t).unwrap();
        assert_eq!((s.x, s.y, s.p, s.q), (0, 1, 2, 5));
        let p = crate::presentations::Presentation::parse("<a,b | b3 = a2>").unwrap();
        let s = TorusSolver::detect(&p).unwrap();
        assert!(s.is_trivial(&p.parse_word("bbbAA").unwrap()));
        assert!(TorusSolver::detect(&crate::presentations::catalog("5_2").unwrap()).is_none());
    }
}
