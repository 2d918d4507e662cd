//! Generalized torsion in finitely presented groups.
//!
//! A nontrivial element is a *generalized torsion element* when some
//! nonempty product of its conjugates is the identity. Groups with such
//! elements are not bi-orderable. This crate builds, verifies and searches
//! for certificates of generalized torsion in knot groups, and computes the
//! Alexander-polynomial data used by the classical bi-orderability criteria.
//!
//! Modules, bottom-up:
//!
//! - [`words`]: free-group words in capital-letter inverse notation.
//! - [`presentations`]: presentations, the knot catalog, torus groups,
//!   connected sums, abelianization.
//! - [`word_problem`]: rewriting systems, the torus-group solver, finite
//!   quotient witnesses and the tri-state oracle built from them.
//! - [`torsion`]: certificates, their verification and the search engine.
//! - [`alexander`]: Fox calculus, Alexander polynomials and exact real-root
//!   counting.
//! - [`cli`]: the `gentorsion` command line.

pub mod alexander;
pub mod cli;
pub mod presentations;
pub mod torsion;
pub mod word_problem;
pub mod words;

pub use presentations::{catalog, connected_sum, torus_group, Presentation};
pub use word_problem::{Budget, TriState, WordOracle};
pub use words::{Alphabet, Letter, Word};

pub(crate) fn serde_word<S: serde::Serializer>(w: &Word, s: S) -> Result<S::Ok, S::Error> {
    let text = if w.is_identity() {
        String::new()
    } else {
        w.to_string()
    };
    s.serialize_str(&text)
}
