//! Hand-written certificates for the classical examples.

use super::certificate::{Step, TorsionCertificate};
use crate::presentations::{catalog, Presentation};
use crate::words::Word;

pub const BUILTIN_NAMES: [&str; 4] = ["klein", "trefoil", "fivetwo_first", "fivetwo_second"];

fn word(p: &Presentation, s: &str) -> Word {
    p.parse_word(s).expect("built-in word parses")
}

/// `x^y x = 1` in `⟨x, y | x^y = x^{-1}⟩`.
pub fn klein() -> TorsionCertificate {
    let p = catalog("klein").expect("catalog entry");
    TorsionCertificate {
        base: word(&p, "x"),
        steps: vec![
            Step::base(word(&p, "y")),
            Step::base(word(&p, "1")),
            Step::product(0, 1),
        ],
        final_step: 2,
        presentation: p,
    }
}

/// `[x,y]^x [x,y] = 1` in `⟨x, y | x^2 = y^3⟩`.
pub fn trefoil() -> TorsionCertificate {
    let p = catalog("3_1").expect("catalog entry");
    TorsionCertificate {
        base: word(&p, "[x,y]"),
        steps: vec![
            Step::base(word(&p, "x")),
            Step::base(word(&p, "1")),
            Step::product(0, 1),
        ],
        final_step: 2,
        presentation: p,
    }
}

/// Nine memberships of the closure of `AbaB`, then `a^4 (9) A^4 (8) = 1`.
pub fn fivetwo_first() -> TorsionCertificate {
    let p = catalog("5_2").expect("catalog entry");
    let w = |s: &str| word(&p, s);
    let steps = vec![
        Step::base(w("1")).claiming(w("AbaB")),
        Step::conj(0, w("bb")).claiming(w("BBAbab")),
        Step::conj(0, w("B")).claiming(w("bAbaBB")),
        // AbbaBB = aBBAb uses aB^3a = B^2a^2B^2
        Step::product(0, 2).claiming(w("aBBAb")),
        Step::conj(3, w("bbAb")).claiming(w("BAbba")),
        Step::conj(3, w("B")).claiming(w("baBBA")),
        Step::conj(0, w("AB")).claiming(w("bbaBAB")),
        Step::product(6, 5).claiming(w("bbaBBBA")),
        Step::product(1, 4).claiming(w("BBAbbba")),
        Step::conj(8, w("AAAA")),
        Step::product(9, 7),
    ];
    TorsionCertificate {
        base: w("AbaB"),
        steps,
        final_step: 10,
        presentation: p,
    }
}

/// With `c = [a, b^{-1}]`: one product of conjugates is `b^{-2}`, another is
/// `b^2`.
pub fn fivetwo_second() -> TorsionCertificate {
    let p = catalog("5_2").expect("catalog entry");
    let w = |s: &str| word(&p, s);
    let steps = vec![
        Step::base(w("A")).claiming(w("baBA")),
        Step::base(w("1")),
        Step::base(w("B")),
        Step::product(0, 1),
        Step::product(3, 2).claiming(w("baBBBAb")),
        Step::conj(4, w("Baa")).claiming(w("BB")),
        Step::base(w("bb")),
        Step::base(w("b")),
        Step::product(6, 7).claiming(w("BBAbba")),
        Step::conj(8, w("Ab")),
        Step::product(6, 9).claiming(w("BBAbbba")),
        Step::conj(10, w("AA")).claiming(w("bb")),
        Step::product(5, 11),
    ];
    TorsionCertificate {
        base: w("[a,B]"),
        steps,
        final_step: 12,
        presentation: p,
    }
}

pub fn builtin(name: &str) -> Option<TorsionCertificate> {
    match name {
        "klein" => Some(klein()),
        "trefoil" => Some(trefoil()),
        "fivetwo_first" => Some(fivetwo_first()),
        "fivetwo_second" => Some(fivetwo_second()),
        _ => None,
    }
}

pub fn builtin_certificates() -> Vec<(&'static str, TorsionCertificate)> {
    BUILTIN_NAMES
        .iter()
        .map(|&n| (n, builtin(n).expect("listed name")))
        .collect()
}
