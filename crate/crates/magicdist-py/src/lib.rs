//! Python bindings for the distillation workbench.
//!
//! Exposes the signed Pauli algebra, the closed-form distillation maps,
//! exact hull membership, threshold searches and the named end-to-end
//! checks. Exact-rational values cross the boundary as fraction strings
//! ("501/1000") or JSON, so nothing is lost to floating point.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use magicdist::data::{data_tables_digest, Tables, FROZEN_DATA_DIGEST};
use magicdist::maps::{self, BlochVector, FidelityTuple, Region};
use magicdist::pauli::{commutes, pauli_multiply};
use magicdist::polytope::membership;
use magicdist::reductions::verify_counterexample;
use magicdist::stabilizer;
use magicdist::thresholds::{self, DistillCriterion, NoiseKind};
use magicdist::verify::run_checks;
use magicdist::{PauliCoefficients, PauliOperator, Rat};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_rat(s: &str) -> PyResult<Rat> {
    s.trim()
        .parse::<Rat>()
        .map_err(|e| value_err(format!("bad fraction '{s}': {e}")))
}

/// A signed n-qubit Pauli operator, e.g. "+XZ" or "-IY".
#[pyclass]
struct Pauli {
    inner: PauliOperator,
}

#[pymethods]
impl Pauli {
    #[new]
    fn new(label: &str) -> PyResult<Self> {
        Ok(Pauli {
            inner: PauliOperator::parse(label).map_err(value_err)?,
        })
    }

    /// Signed label, e.g. "+XZ".
    fn label(&self) -> String {
        self.inner.to_string()
    }

    fn qubits(&self) -> usize {
        self.inner.n
    }

    /// Number of non-identity tensor factors.
    fn weight(&self) -> u32 {
        self.inner.weight()
    }

    fn commutes(&self, other: &Pauli) -> PyResult<bool> {
        commutes(&self.inner, &other.inner).map_err(value_err)
    }

    fn __mul__(&self, other: &Pauli) -> PyResult<Pauli> {
        Ok(Pauli {
            inner: pauli_multiply(&self.inner, &other.inner).map_err(value_err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("Pauli(\"{}\")", self.inner)
    }

    fn __eq__(&self, other: &Pauli) -> bool {
        self.inner == other.inner
    }
}

#[pyfunction]
fn version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

/// Checksum of the embedded data tables (counterexamples, faces, code).
#[pyfunction]
fn data_digest() -> String {
    data_tables_digest()
}

/// The checksum the test suite pins the tables to.
#[pyfunction]
fn frozen_data_digest() -> &'static str {
    FROZEN_DATA_DIGEST
}

#[pyfunction]
fn count_stabilizer_states(n: usize) -> PyResult<u64> {
    if !(1..=8).contains(&n) {
        return Err(value_err("n must lie in 1..=8"));
    }
    Ok(stabilizer::count_stabilizer_states(n))
}

#[pyfunction]
fn count_reductions(n: usize) -> PyResult<u64> {
    if !(2..=8).contains(&n) {
        return Err(value_err("n must lie in 2..=8"));
    }
    Ok(stabilizer::count_reductions(n))
}

#[pyfunction]
fn parity_map(x: f64, y: f64, z: f64) -> (f64, f64, f64) {
    let b = maps::parity_map(&BlochVector::new(x, y, z));
    (b.x, b.y, b.z)
}

#[pyfunction]
fn pair_parity_map(x: f64, y: f64, z: f64) -> (f64, f64, f64) {
    let b = maps::pair_parity_map(&BlochVector::new(x, y, z));
    (b.x, b.y, b.z)
}

#[pyfunction]
fn dual_round_map(x: f64) -> f64 {
    maps::dual_round_map(x)
}

#[pyfunction]
fn twisted_scheme_step(x: f64, y: f64, z: f64) -> (f64, f64, f64) {
    let b = maps::twisted_scheme_step(&BlochVector::new(x, y, z));
    (b.x, b.y, b.z)
}

/// One symmetric five-qubit round at uniform input fidelity `f`; returns
/// (success probability, output fidelity).
#[pyfunction]
fn five_qubit_symmetric_step(f: f64) -> (f64, f64) {
    maps::five_qubit_symmetric_step(&FidelityTuple::uniform(f))
}

/// Region tags: cone_unit | pair_sum_unit | pair_sum_codes |
/// diagonal_five_qubit.
#[pyfunction]
fn region_check(x: f64, y: f64, z: f64, region: &str) -> PyResult<bool> {
    let which = Region::parse(region).map_err(value_err)?;
    Ok(maps::region_check(&BlochVector::new(x, y, z), which))
}

/// Exact hull membership of the single-qubit state with the given rational
/// Bloch coordinates (fraction strings). Returns (inside, certificate JSON).
#[pyfunction]
fn membership_bloch(x: &str, y: &str, z: &str) -> PyResult<(bool, String)> {
    let s = PauliCoefficients::from_bloch_rational(parse_rat(x)?, parse_rat(y)?, parse_rat(z)?);
    let cert = membership(&s).map_err(value_err)?;
    Ok((cert.is_inside(), cert.to_json().to_string()))
}

/// Exact hull membership of a serialized coefficient vector (one or two
/// qubits). Returns (inside, certificate JSON).
#[pyfunction]
fn membership_json(state_json: &str) -> PyResult<(bool, String)> {
    let value: serde_json::Value = serde_json::from_str(state_json).map_err(value_err)?;
    let s = PauliCoefficients::from_json(&value).map_err(value_err)?;
    let cert = membership(&s).map_err(value_err)?;
    Ok((cert.is_inside(), cert.to_json().to_string()))
}

/// Serialized coefficient vector of embedded counterexample state `i`
/// (1-based).
#[pyfunction]
fn counterexample_state_json(i: usize) -> PyResult<String> {
    let states = Tables::embedded().counterexample_states();
    if !(1..=states.len()).contains(&i) {
        return Err(value_err(format!("index must lie in 1..={}", states.len())));
    }
    Ok(states[i - 1].to_json().to_string())
}

/// Full report for embedded counterexample state `i`: outside the two-qubit
/// hull, yet every reduction lands inside the octahedron. Returns JSON.
#[pyfunction]
fn check_counterexample(i: usize) -> PyResult<String> {
    let states = Tables::embedded().counterexample_states();
    if !(1..=states.len()).contains(&i) {
        return Err(value_err(format!("index must lie in 1..={}", states.len())));
    }
    let report = verify_counterexample(&states[i - 1]).map_err(value_err)?;
    Ok(report.to_json().to_string())
}

/// Noise tags: depolarizing | dephasing | worst_case. Criterion tags:
/// jamiolkowski_parity | direct_plus.
#[pyfunction]
fn threshold_search(noise: &str, criterion: &str) -> PyResult<f64> {
    let kind = NoiseKind::parse(noise).map_err(value_err)?;
    let crit = DistillCriterion::parse(criterion).map_err(value_err)?;
    thresholds::threshold_search(kind, crit).map_err(value_err)
}

#[pyfunction]
fn expected_threshold(noise: &str, criterion: &str) -> PyResult<f64> {
    let kind = NoiseKind::parse(noise).map_err(value_err)?;
    let crit = DistillCriterion::parse(criterion).map_err(value_err)?;
    Ok(thresholds::expected_threshold(kind, crit))
}

/// Bloch vector of the parity-reduced noisy pi/8 Choi state at rate offset
/// `eps` from the threshold.
#[pyfunction]
fn pi8_parity_output(eps: f64) -> (f64, f64, f64) {
    let b = thresholds::pi8_parity_output(eps);
    (b.x, b.y, b.z)
}

/// Run the named end-to-end checks (all when `only` is None); returns
/// (name, passed, detail, seconds) per check.
#[pyfunction]
#[pyo3(signature = (only=None))]
fn checks(only: Option<&str>) -> Vec<(String, bool, String, f64)> {
    run_checks(&Tables::embedded(), only)
        .into_iter()
        .map(|o| (o.name.to_string(), o.passed, o.detail, o.seconds))
        .collect()
}

#[pymodule]
fn magicdist_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Pauli>()?;
    m.add_function(wrap_pyfunction!(version, m)?)?;
    m.add_function(wrap_pyfunction!(data_digest, m)?)?;
    m.add_function(wrap_pyfunction!(frozen_data_digest, m)?)?;
    m.add_function(wrap_pyfunction!(count_stabilizer_states, m)?)?;
    m.add_function(wrap_pyfunction!(count_reductions, m)?)?;
    m.add_function(wrap_pyfunction!(parity_map, m)?)?;
    m.add_function(wrap_pyfunction!(pair_parity_map, m)?)?;
    m.add_function(wrap_pyfunction!(dual_round_map, m)?)?;
    m.add_function(wrap_pyfunction!(twisted_scheme_step, m)?)?;
    m.add_function(wrap_pyfunction!(five_qubit_symmetric_step, m)?)?;
    m.add_function(wrap_pyfunction!(region_check, m)?)?;
    m.add_function(wrap_pyfunction!(membership_bloch, m)?)?;
    m.add_function(wrap_pyfunction!(membership_json, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample_state_json, m)?)?;
    m.add_function(wrap_pyfunction!(check_counterexample, m)?)?;
    m.add_function(wrap_pyfunction!(threshold_search, m)?)?;
    m.add_function(wrap_pyfunction!(expected_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(pi8_parity_output, m)?)?;
    m.add_function(wrap_pyfunction!(checks, m)?)?;
    Ok(())
}
