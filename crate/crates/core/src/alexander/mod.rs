//! Alexander polynomials from Fox calculus, exact root counts, and the
//! bi-orderability criteria that depend on them.

mod fox;
mod laurent;
mod roots;

use serde::Serialize;
use thiserror::Error;

use crate::presentations::Presentation;
use crate::torsion::VerifiedWitness;

pub use fox::{fox_derivative, GroupRingElement};
pub use laurent::{LaurentPolynomial, PolynomialError};
pub use roots::{max_interval_width, positive_real_roots, RootError, RootInterval, RootReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlexanderError {
    #[error("deficiency must be one: {generators} generators, {relators} relators")]
    Deficiency { generators: usize, relators: usize },
    #[error("abelianization is not infinite cyclic (invariant factors {invariant_factors:?}, free rank {free_rank})")]
    NotInfiniteCyclic {
        invariant_factors: Vec<String>,
        free_rank: usize,
    },
    #[error("deleting column {column} gives {got}, expected {expected}")]
    ColumnMismatch {
        column: usize,
        got: String,
        expected: String,
    },
    #[error(transparent)]
    Polynomial(#[from] PolynomialError),
    #[error(transparent)]
    Roots(#[from] RootError),
    #[error("fibredness of {0} is unknown; pass it explicitly")]
    MissingFibredness(String),
}

/// Abelianized Fox matrix: `rows[i][j] = φ(∂r_i/∂x_j)`.
pub fn fox_matrix(pres: &Presentation, weights: &[i64]) -> Vec<Vec<LaurentPolynomial>> {
    pres.relators()
        .iter()
        .map(|r| {
            (0..pres.generator_count())
                .map(|j| fox_derivative(r, j).abelianize(weights))
                .collect()
        })
        .collect()
}

/// Determinant by expansion over column subsets.
fn determinant(m: &[Vec<LaurentPolynomial>], cols: &[usize]) -> LaurentPolynomial {
    let n = m.len();
    debug_assert_eq!(n, cols.len());
    // dp[mask] = det of rows 0..popcount(mask) against the columns in mask.
    let mut dp = vec![LaurentPolynomial::zero(); 1 << n];
    dp[0] = LaurentPolynomial::one();
    for mask in 0usize..(1 << n) {
        if dp[mask].is_zero() {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == n {
            continue;
        }
        for (k, &c) in cols.iter().enumerate() {
            if mask & (1 << k) != 0 {
                continue;
            }
            // Sign from the number of chosen columns to the right of k.
            let above = (mask >> (k + 1)).count_ones();
            let term = &dp[mask] * &m[row][c];
            let term = if above % 2 == 1 { -term } else { term };
            let next = mask | (1 << k);
            dp[next] = &dp[next] + &term;
        }
    }
    dp[(1 << n) - 1].clone()
}

/// Normalized Alexander polynomial of a deficiency-one presentation whose
/// abelianization is `ℤ`. Every deletable column is computed and compared.
pub fn alexander_polynomial(pres: &Presentation) -> Result<LaurentPolynomial, AlexanderError> {
    let n = pres.generator_count();
    let m = pres.relators().len();
    if n != m + 1 {
        return Err(AlexanderError::Deficiency {
            generators: n,
            relators: m,
        });
    }
    let ab = pres.abelianization();
    let weights = match (&ab.weights, ab.invariant_factors.iter().all(|f| f == "1")) {
        (Some(w), true) => w.clone(),
        _ => {
            return Err(AlexanderError::NotInfiniteCyclic {
                invariant_factors: ab.invariant_factors.clone(),
                free_rank: ab.free_rank,
            })
        }
    };
    let matrix = fox_matrix(pres, &weights);
    let t_minus_1 = LaurentPolynomial::from_i64(&[-1, 1]);
    let mut result: Option<(usize, LaurentPolynomial)> = None;
    let mut zero_weight_columns = Vec::new();
    for j in 0..n {
        let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let d = determinant(&matrix, &cols);
        if weights[j] == 0 {
            zero_weight_columns.push((j, d));
            continue;
        }
        let denom = &LaurentPolynomial::t_pow(weights[j]) - &LaurentPolynomial::one();
        let delta = (&d * &t_minus_1).div_exact(&denom)?.normalized();
        match &result {
            None => result = Some((j, delta)),
            Some((_, expected)) if *expected != delta => {
                return Err(AlexanderError::ColumnMismatch {
                    column: j,
                    got: delta.to_string(),
                    expected: expected.to_string(),
                })
            }
            Some(_) => {}
        }
    }
    let (_, delta) = result.expect("some weight is nonzero when the abelianization is ℤ");
    // D_j (t^{w_k} - 1) = ±t^a D_k (t^{w_j} - 1) forces D_j = 0 when w_j = 0.
    for (j, d) in zero_weight_columns {
        if !d.is_zero() {
            return Err(AlexanderError::ColumnMismatch {
                column: j,
                got: d.to_string(),
                expected: "0".into(),
            });
        }
    }
    Ok(delta)
}

/// `Σ_j φ(∂r/∂x_j)(t^{w_j} - 1)`, which equals `φ(r) - 1 = 0` for a relator.
pub fn fundamental_identity_residue(
    pres: &Presentation,
    weights: &[i64],
    relator: usize,
) -> LaurentPolynomial {
    let r = &pres.relators()[relator];
    (0..pres.generator_count()).fold(LaurentPolynomial::zero(), |acc, j| {
        let d = fox_derivative(r, j).abelianize(weights);
        let g = &LaurentPolynomial::t_pow(weights[j]) - &LaurentPolynomial::one();
        &acc + &(&d * &g)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    BiOrderable,
    NotBiOrderable,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderabilityReport {
    pub name: String,
    pub verdict: Verdict,
    /// The criterion applied, or why none applies.
    pub criterion: String,
    pub polynomial: String,
    pub coefficients: serde_json::Value,
    pub fibred: Option<bool>,
    pub special_one_relator: bool,
    pub roots: RootReport,
}

pub const FIBRED_REAL_POSITIVE: &str =
    "fibred knot whose Alexander polynomial has all roots real and positive is bi-orderable (Perron-Rolfsen)";
pub const FIBRED_NO_POSITIVE: &str =
    "fibred knot whose Alexander polynomial has no positive real root is not bi-orderable (Clay-Rolfsen)";
pub const ONE_RELATOR_NO_POSITIVE: &str =
    "special one-relator knot group whose Alexander polynomial has no positive real root is not bi-orderable (Chiswell-Glass-Wilson)";

/// Applies the root criteria to a polynomial and the knot's fibredness.
pub fn orderability_from(
    name: &str,
    polynomial: &LaurentPolynomial,
    fibred: Option<bool>,
    special_one_relator: bool,
) -> Result<OrderabilityReport, AlexanderError> {
    let polynomial = polynomial.normalized();
    let roots = positive_real_roots(&polynomial)?;
    let nontrivial = roots.degree > 0;
    let (verdict, criterion) = if fibred == Some(true) && roots.all_roots_real_positive() {
        (Verdict::BiOrderable, FIBRED_REAL_POSITIVE.to_string())
    } else if nontrivial && roots.positive == 0 && fibred == Some(true) {
        (Verdict::NotBiOrderable, FIBRED_NO_POSITIVE.to_string())
    } else if nontrivial && roots.positive == 0 && special_one_relator {
        (Verdict::NotBiOrderable, ONE_RELATOR_NO_POSITIVE.to_string())
    } else if fibred.is_none()
        && (roots.all_roots_real_positive() || (nontrivial && roots.positive == 0))
    {
        // A fibred/not-fibred answer would decide the verdict here.
        return Err(AlexanderError::MissingFibredness(name.to_string()));
    } else {
        let why = if fibred.is_none() {
            format!(
                "{} of {} roots are positive real: no root criterion applies whether or not the knot is fibred",
                roots.positive_with_multiplicity, roots.degree
            )
        } else if fibred == Some(true) {
            format!(
                "fibred, but {} of {} roots are positive real: neither root criterion applies",
                roots.positive_with_multiplicity, roots.degree
            )
        } else if roots.positive > 0 {
            format!(
                "not fibred and {} positive real roots: no root criterion applies",
                roots.positive
            )
        } else {
            "not fibred and not a special one-relator presentation: no root criterion applies"
                .to_string()
        };
        (Verdict::Inconclusive, why)
    };
    Ok(OrderabilityReport {
        name: name.to_string(),
        verdict,
        criterion,
        coefficients: polynomial.coefficients_json(),
        polynomial: polynomial.to_string(),
        fibred,
        special_one_relator,
        roots,
    })
}

/// Report for a presentation, optionally with a supplied polynomial and
/// fibredness (which override the computed polynomial and the metadata).
pub fn orderability_report(
    pres: &Presentation,
    polynomial: Option<&LaurentPolynomial>,
    fibred: Option<bool>,
) -> Result<OrderabilityReport, AlexanderError> {
    let poly = match polynomial {
        Some(p) => p.clone(),
        None => alexander_polynomial(pres)?,
    };
    orderability_from(
        pres.name(),
        &poly,
        fibred.or(pres.meta.fibred),
        pres.meta.special_one_relator,
    )
}

/// A bi-orderable verdict and a verified generalized-torsion certificate for
/// the same group contradict each other.
pub fn cross_check(report: &OrderabilityReport, witness: &VerifiedWitness) -> Result<(), String> {
    if report.verdict == Verdict::BiOrderable {
        Err(format!(
            "{} is reported bi-orderable but has a verified generalized torsion element {}",
            report.name,
            witness
                .certificate
                .presentation
                .render_word(&witness.certificate.base)
        ))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{catalog, torus_group};
    use crate::words::Word;

    fn poly(s: &str) -> LaurentPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn fox_examples() {
        let xy = Word::from_signed(&[1, 2]);
        assert_eq!(
            fox_derivative(&xy, 0),
            GroupRingElement::word(Word::identity())
        );
        let xinv = Word::from_signed(&[-1]);
        assert_eq!(fox_derivative(&xinv, 0).to_string(), "-A");
        let x3 = Word::from_signed(&[1, 1, 1]);
        assert_eq!(fox_derivative(&x3, 0).to_string(), "1 + a + aa");
    }

    #[test]
    fn catalog_polynomials() {
        assert_eq!(
            alexander_polynomial(&catalog("4_1").unwrap()).unwrap(),
            poly("1 - 3t + t^2")
        );
        assert_eq!(
            alexander_polynomial(&catalog("5_2").unwrap()).unwrap(),
            poly("2 - 3t + 2t^2")
        );
        assert_eq!(
            alexander_polynomial(&catalog("3_1").unwrap()).unwrap(),
            poly("1 - t + t^2")
        );
        assert_eq!(
            alexander_polynomial(&torus_group(2, 5).unwrap()).unwrap(),
            poly("1 - t + t^2 - t^3 + t^4")
        );
        assert_eq!(
            alexander_polynomial(&Presentation::unknot()).unwrap(),
            LaurentPolynomial::one()
        );
    }

    #[test]
    fn torus_closed_form() {
        for (p, q) in [(2i64, 3i64), (2, 5), (3, 4), (3, 5), (2, 7)] {
            let num = &(&LaurentPolynomial::t_pow(p * q) - &LaurentPolynomial::one())
                * &(&LaurentPolynomial::t_pow(1) - &LaurentPolynomial::one());
            let den = &(&LaurentPolynomial::t_pow(p) - &LaurentPolynomial::one())
                * &(&LaurentPolynomial::t_pow(q) - &LaurentPolynomial::one());
            let closed = num.div_exact(&den).unwrap().normalized();
            assert_eq!(
                alexander_polynomial(&torus_group(p, q).unwrap()).unwrap(),
                closed,
                "({p},{q})"
            );
        }
    }

    #[test]
    fn rejects_bad_presentations() {
        let klein = catalog("klein").unwrap();
        assert!(matches!(
            alexander_polynomial(&klein),
            Err(AlexanderError::NotInfiniteCyclic { .. })
        ));
        let two = Presentation::parse("<a,b,c | ab>").unwrap();
        assert!(matches!(
            alexander_polynomial(&two),
            Err(AlexanderError::Deficiency { .. })
        ));
    }

    #[test]
    fn reports() {
        let r = orderability_report(&catalog("4_1").unwrap(), None, None).unwrap();
        assert_eq!(r.verdict, Verdict::BiOrderable);
        let r = orderability_report(&catalog("5_2").unwrap(), None, None).unwrap();
        assert_eq!(r.verdict, Verdict::NotBiOrderable);
        assert_eq!(r.criterion, ONE_RELATOR_NO_POSITIVE);
        let r = orderability_from(
            "6_2",
            &poly("1 - 3t + 3t^2 - 3t^3 + t^4"),
            Some(true),
            false,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        let r = orderability_from(
            "6_3",
            &poly("1 - 3t + 5t^2 - 3t^3 + t^4"),
            Some(true),
            false,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::NotBiOrderable);
        let r = orderability_from("6_1", &poly("2 - 5t + 2t^2"), Some(false), false).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(matches!(
            orderability_from("x", &poly("2 - 5t + 2t^2"), None, false),
            Err(AlexanderError::MissingFibredness(_))
        ));
    }
}
