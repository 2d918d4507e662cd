//! Python bindings: `import gentorsion`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use gentorsion::alexander::{
    alexander_polynomial, orderability_from, positive_real_roots, LaurentPolynomial,
};
use gentorsion::presentations::{catalog, torus_group, Presentation as CorePresentation};
use gentorsion::torsion::{
    builtin, commuting_powers_certificate, expand_commutator, search as core_search, verify_with,
    SearchBounds, SearchOutcome, TorsionCertificate, VerifyError, BUILTIN_NAMES,
};
use gentorsion::word_problem::{Budget, WordOracle};
use gentorsion::words::Alphabet;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_python(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(v).map_err(value_error)?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// A finite group presentation.
#[pyclass(name = "Presentation", module = "gentorsion", frozen)]
struct PyPresentation {
    inner: CorePresentation,
}

#[pymethods]
impl PyPresentation {
    /// Parses `<a,b | rel, lhs = rhs>`.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        CorePresentation::parse(text)
            .map(|inner| Self { inner })
            .map_err(value_error)
    }

    #[staticmethod]
    fn catalog(name: &str) -> PyResult<Self> {
        catalog(name)
            .map(|inner| Self { inner })
            .map_err(value_error)
    }

    #[staticmethod]
    fn torus(p: i64, q: i64) -> PyResult<Self> {
        torus_group(p, q)
            .map(|inner| Self { inner })
            .map_err(value_error)
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn relators(&self) -> Vec<String> {
        self.inner
            .relators()
            .iter()
            .map(|r| self.inner.render_word(r))
            .collect()
    }

    #[getter]
    fn fibred(&self) -> Option<bool> {
        self.inner.meta.fibred
    }

    fn render(&self) -> String {
        self.inner.render()
    }

    /// "Trivial", "NonTrivial" or "Unknown".
    #[pyo3(signature = (word, seed = 0))]
    fn word_problem(&self, word: &str, seed: u64) -> PyResult<String> {
        let w = self.inner.parse_word(word).map_err(value_error)?;
        let oracle = WordOracle::new(
            &self.inner,
            Budget {
                seed,
                ..Budget::default()
            },
        );
        Ok(oracle.is_trivial(&w).label().to_string())
    }

    /// Normalized Alexander polynomial, ascending: `"2 - 3*t + 2*t^2"`.
    fn alexander_polynomial(&self) -> PyResult<String> {
        alexander_polynomial(&self.inner)
            .map(|p| p.normalized().to_string())
            .map_err(value_error)
    }

    /// Orderability report as a dict.
    #[pyo3(signature = (fibred = None))]
    fn orderability(&self, py: Python<'_>, fibred: Option<bool>) -> PyResult<Py<PyAny>> {
        let poly = alexander_polynomial(&self.inner).map_err(value_error)?;
        let report = orderability_from(
            self.inner.name(),
            &poly,
            fibred.or(self.inner.meta.fibred),
            self.inner.meta.special_one_relator,
        )
        .map_err(value_error)?;
        to_python(py, &serde_json::to_value(report).map_err(value_error)?)
    }

    fn __repr__(&self) -> String {
        format!(
            "Presentation({:?}, {:?})",
            self.inner.name(),
            self.inner.render()
        )
    }
}

/// A generalized-torsion certificate.
#[pyclass(name = "Certificate", module = "gentorsion", frozen)]
struct PyCertificate {
    inner: TorsionCertificate,
}

#[pymethods]
impl PyCertificate {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        TorsionCertificate::from_json_str(text)
            .map(|inner| Self { inner })
            .map_err(value_error)
    }

    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        builtin(name)
            .map(|inner| Self { inner })
            .ok_or_else(|| value_error(format!("no built-in certificate {name:?}")))
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    #[getter]
    fn base(&self) -> String {
        self.inner.presentation.render_word(&self.inner.base)
    }

    #[getter]
    fn presentation(&self) -> PyPresentation {
        PyPresentation {
            inner: self.inner.presentation.clone(),
        }
    }

    /// Conjugators `g_1..g_k` of `x^{g_1} ... x^{g_k}`.
    fn flatten(&self) -> PyResult<Vec<String>> {
        let flat = self.inner.flatten().map_err(value_error)?;
        Ok(flat
            .iter()
            .map(|w| self.inner.presentation.render_word(w))
            .collect())
    }

    /// `("verified" | "inconclusive" | "refuted", k, reason)`.
    #[pyo3(signature = (seed = 0))]
    fn verify(&self, py: Python<'_>, seed: u64) -> PyResult<(String, usize, String)> {
        let cert = &self.inner;
        let result = py.detach(|| {
            let oracle = WordOracle::new(
                &cert.presentation,
                Budget {
                    seed,
                    ..Budget::default()
                },
            );
            verify_with(cert, &oracle).map(|w| w.k())
        });
        match result {
            Ok(k) => Ok(("verified".into(), k, String::new())),
            Err(VerifyError::Inconclusive { reason }) => Ok(("inconclusive".into(), 0, reason)),
            Err(VerifyError::Refuted { reason }) => Ok(("refuted".into(), 0, reason)),
            Err(e @ VerifyError::Malformed(_)) => Err(value_error(e)),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "Certificate(base={:?}, steps={})",
            self.inner.presentation.render_word(&self.inner.base),
            self.inner.steps.len()
        )
    }
}

/// Bounded search; `None` when nothing is found within the bounds.
#[pyfunction]
#[pyo3(signature = (presentation, base, max_conj = 4, max_closure = 1_000_000, max_depth = 6, seed = 0))]
fn search(
    py: Python<'_>,
    presentation: &PyPresentation,
    base: &str,
    max_conj: usize,
    max_closure: usize,
    max_depth: usize,
    seed: u64,
) -> PyResult<Option<PyCertificate>> {
    let pres = &presentation.inner;
    let b = pres.parse_word(base).map_err(value_error)?;
    let bounds = SearchBounds {
        max_conj_len: max_conj,
        max_closure,
        max_depth,
    };
    let outcome = py.detach(|| {
        let oracle = WordOracle::new(
            pres,
            Budget {
                seed,
                ..Budget::default()
            },
        );
        core_search(pres, &b, bounds, &oracle)
    });
    match outcome.map_err(value_error)? {
        SearchOutcome::Found { certificate, .. } => Ok(Some(PyCertificate { inner: certificate })),
        SearchOutcome::NotFound(_) => Ok(None),
    }
}

/// Conjugators over `x, y` whose product is `[x^p, y^q]` in the free group.
#[pyfunction]
fn expand_commutator_conjugators(p: i64, q: i64) -> PyResult<Vec<String>> {
    let words = expand_commutator(p, q).map_err(value_error)?;
    let xy = Alphabet::new(&["x", "y"]).map_err(value_error)?;
    Ok(words.iter().map(|w| xy.render(w)).collect())
}

/// Certificate that `[x, y]` is generalized torsion in `<x,y | x^p = y^q>`.
#[pyfunction]
fn torus_certificate(p: i64, q: i64) -> PyResult<PyCertificate> {
    let pres = torus_group(p, q).map_err(value_error)?;
    let x = pres.parse_word("x").map_err(value_error)?;
    let y = pres.parse_word("y").map_err(value_error)?;
    let oracle = WordOracle::new(&pres, Budget::default());
    commuting_powers_certificate(&pres, &x, &y, p, q, &oracle)
        .map(|inner| PyCertificate { inner })
        .map_err(value_error)
}

/// Real-root report for a polynomial such as `"2 - 5t + 2t^2"`.
#[pyfunction]
fn real_roots(py: Python<'_>, polynomial: &str) -> PyResult<Py<PyAny>> {
    let p: LaurentPolynomial = polynomial.parse().map_err(value_error)?;
    let report = positive_real_roots(&p.normalized()).map_err(value_error)?;
    to_python(py, &serde_json::to_value(report).map_err(value_error)?)
}

#[pyfunction]
fn builtin_names() -> Vec<&'static str> {
    BUILTIN_NAMES.to_vec()
}

#[pymodule]
#[pyo3(name = "gentorsion")]
pub fn gentorsion_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPresentation>()?;
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(expand_commutator_conjugators, m)?)?;
    m.add_function(wrap_pyfunction!(torus_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(real_roots, m)?)?;
    m.add_function(wrap_pyfunction!(builtin_names, m)?)?;
    Ok(())
}
