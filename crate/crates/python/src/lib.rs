//! Python bindings: clopen sets, the enumeration, ideals, block and D-set
//! predicates, lemma runs and certificate replay.

use cantor_forge::cantor::{self, BitWord, Cylinder, PointB, RepSet};
use cantor_forge::certificate::Certificate;
use cantor_forge::config::{Config, IdealRef};
use cantor_forge::ideals::{IdealHandle, TriState};
use cantor_forge::{constructions, enumeration, finite, harness};
use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_set(json: &str) -> PyResult<RepSet> {
    serde_json::from_str(json).map_err(err)
}

/// Finite union of cylinders `[word] × {level}`, kept in canonical form.
#[pyclass(name = "Clopen", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyClopen(cantor::ClopenX);

#[pymethods]
impl PyClopen {
    /// `Clopen([("01", 0), ("1", 2)])`.
    #[new]
    #[pyo3(signature = (cylinders = Vec::new()))]
    fn new(cylinders: Vec<(String, u32)>) -> PyResult<Self> {
        let cyls = cylinders
            .into_iter()
            .map(|(w, level)| {
                BitWord::parse(&w).map(|w| Cylinder::new(w, level)).ok_or_else(|| err(format!("not a binary word: {w:?}")))
            })
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PyClopen(cantor::ClopenX::canonicalize(cyls)))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(PyClopen).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(err)
    }

    fn cylinders(&self) -> Vec<(String, u32)> {
        self.0.cylinders().iter().map(|c| (c.word.to_bit_string(), c.level)).collect()
    }

    /// Whether `(α, level)` lies in the set, with `α` given by its ones.
    fn contains(&self, ones: Vec<u64>, level: u32) -> bool {
        self.0.contains_point(&PointB::from_ones(ones), level)
    }

    fn union(&self, other: &PyClopen) -> Self {
        PyClopen(self.0.union(&other.0))
    }

    fn difference(&self, other: &PyClopen) -> Self {
        PyClopen(self.0.difference(&other.0))
    }

    fn sym_diff(&self, other: &PyClopen) -> Self {
        PyClopen(self.0.sym_diff(&other.0))
    }

    fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Position in the fixed enumeration.
    fn index(&self) -> PyResult<u64> {
        enumeration::rank(&self.0).map_err(err)
    }

    /// The `m` with `self ∈ A_m`, if any.
    fn block(&self) -> Option<u64> {
        constructions::block_of(&self.0)
    }

    fn in_block(&self, m: u64) -> bool {
        constructions::in_a_m(&self.0, m)
    }

    /// Membership in `D(A)`, with `A` as set JSON.
    fn in_d(&self, set_json: &str) -> PyResult<bool> {
        Ok(constructions::d_membership(&parse_set(set_json)?, &self.0))
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Clopen({:?})", self.cylinders())
    }
}

/// The clopen set at position `n`.
#[pyfunction]
fn unrank(n: u64) -> PyClopen {
    PyClopen(enumeration::unrank(n))
}

/// Index of `2^ℕ × {0}`.
#[pyfunction]
fn q_index() -> u64 {
    enumeration::q_index()
}

/// `ψ_n(α, p)` with `α` given by its ones.
#[pyfunction]
fn psi(n: u64, ones: Vec<u64>, level: u32) -> bool {
    enumeration::psi_eval(n, &PointB::from_ones(ones), level)
}

#[pyfunction]
fn pair(i: u64, j: u64) -> u64 {
    cantor::pair(i, j)
}

#[pyfunction]
fn unpair(n: u64) -> (u64, u64) {
    cantor::unpair(n)
}

/// Membership of a set (JSON) in a named ideal: `True`, `False` or `None`.
#[pyfunction]
fn ideal_member(ideal: &str, set_json: &str) -> PyResult<Option<bool>> {
    let h = IdealHandle::parse(ideal).map_err(err)?;
    Ok(match h.member(&parse_set(set_json)?) {
        TriState::Yes => Some(true),
        TriState::No => Some(false),
        TriState::Unknown => None,
    })
}

#[pyfunction]
fn lemma_ids() -> Vec<&'static str> {
    harness::LEMMAS.to_vec()
}

/// Run one registered lemma; returns the run as JSON.
#[pyfunction]
#[pyo3(signature = (id, seed = 42, ideal = None))]
fn run_lemma(py: Python<'_>, id: &str, seed: u64, ideal: Option<String>) -> PyResult<String> {
    let id = harness::resolve_id(id).map_err(|e| PyKeyError::new_err(e.to_string()))?;
    let cfg = Config { ideal: ideal.map(IdealRef::Name), seed, ..Config::default() };
    cfg.validate().map_err(err)?;
    let run = py.detach(|| harness::run_lemma(id, &cfg)).map_err(err)?;
    run.to_json().map_err(err)
}

/// Replay a certificate or a lemma run given as JSON.
#[pyfunction]
fn replay(text: &str) -> PyResult<bool> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(err)?;
    let cert: Certificate = match value.get("certificate") {
        Some(c) => serde_json::from_value(c.clone()),
        None => serde_json::from_value(value),
    }
    .map_err(err)?;
    cert.replay().map_err(err)
}

/// Outcome string of a certificate or run given as JSON.
#[pyfunction]
fn outcome(text: &str) -> PyResult<String> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(err)?;
    let kind = value.get("certificate").unwrap_or(&value).get("kind").and_then(|k| k.as_str());
    kind.map(str::to_string).ok_or_else(|| err("no outcome field"))
}

/// Check the α-topology construction on every topology with `points`
/// points; returns the certificate outcome.
#[pyfunction]
fn check_finite(py: Python<'_>, points: usize) -> PyResult<String> {
    let cert = py.detach(|| finite::check_all(points)).map_err(err)?;
    Ok(serde_json::to_value(cert.kind).map_err(err)?.as_str().unwrap_or_default().to_string())
}

#[pymodule]
fn cantor_forge_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyClopen>()?;
    m.add_function(wrap_pyfunction!(unrank, m)?)?;
    m.add_function(wrap_pyfunction!(q_index, m)?)?;
    m.add_function(wrap_pyfunction!(psi, m)?)?;
    m.add_function(wrap_pyfunction!(pair, m)?)?;
    m.add_function(wrap_pyfunction!(unpair, m)?)?;
    m.add_function(wrap_pyfunction!(ideal_member, m)?)?;
    m.add_function(wrap_pyfunction!(lemma_ids, m)?)?;
    m.add_function(wrap_pyfunction!(run_lemma, m)?)?;
    m.add_function(wrap_pyfunction!(replay, m)?)?;
    m.add_function(wrap_pyfunction!(outcome, m)?)?;
    m.add_function(wrap_pyfunction!(check_finite, m)?)?;
    Ok(())
}
