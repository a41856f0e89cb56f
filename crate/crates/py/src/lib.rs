//! Python bindings. Every entry point takes and returns JSON text in the same schema as the
//! `planeaut` command line, so Python callers can use `json.loads` on the results.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use serde_json::{json, Value};

use planeaut::dvr::remove_pole as remove_pole_at;
use planeaut::family::{linearize_family_generic, remove_all_poles, verify_family};
use planeaut::fields::DvrContext;
use planeaut::group::{linearize_over_field, verify_linearization};
use planeaut::json as pj;
use planeaut::plane::{decompose_endo, PlaneAut};
use planeaut::selftest::{run_suite, SUITES};
use planeaut::Error;

create_exception!(planeaut_py, PlaneautError, PyException, "A schema or mathematical failure; args are (tag, message).");

fn to_py(e: Error) -> PyErr {
    PlaneautError::new_err((e.tag().to_string(), e.to_string()))
}

fn parse(text: &str) -> Result<Value, Error> {
    serde_json::from_str(text).map_err(|e| Error::Schema(format!("invalid JSON: {e}")))
}

fn render(v: &Value) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn member<'a>(v: &'a Value, key: &str) -> Result<&'a Value, Error> {
    v.get(key).ok_or_else(|| Error::Schema(format!("missing \"{key}\"")))
}

pub fn linearize_json(group: &str) -> Result<String, Error> {
    let g = pj::group_from_json(&parse(group)?, None, None)?;
    let (psi, rho) = linearize_over_field(&g)?;
    let ok = verify_linearization(&psi, &g, &rho);
    Ok(render(&json!({"psi": pj::aut_to_json(&psi), "rho": pj::rep_to_json(&rho), "verified": ok})))
}

pub fn remove_pole_json(request: &str, at: &str) -> Result<String, Error> {
    let v = parse(request)?;
    let psi = pj::aut_from_json(member(&v, "psi")?, None)?;
    let field = psi.field().clone();
    let ctx = field.rf_ctx().ok_or_else(|| Error::Schema("pole removal needs a function field".into()))?;
    let rho = pj::rep_from_json(member(&v, "rho")?, &field.base_field())?;
    let center = pj::parse_scalar_str(at, &field.base_field())?
        .as_cyclo()
        .ok_or_else(|| Error::Schema("the center must be a constant".into()))?;
    let (alpha, psi_t, trace) = remove_pole_at(&psi, &rho, &DvrContext::new(ctx.clone(), center))?;
    Ok(render(&json!({
        "alpha": pj::aut_to_json(&alpha),
        "psi": pj::aut_to_json(&psi_t),
        "trace": pj::kr_trace_to_json(&trace),
    })))
}

pub fn family_json(family: &str) -> Result<String, Error> {
    let nu = pj::family_from_json(&parse(family)?)?;
    let (psi, rho) = linearize_family_generic(&nu)?;
    Ok(render(&pj::report_to_json(&remove_all_poles(&psi, &rho, &nu)?)))
}

pub fn verify_json(request: &str) -> Result<bool, Error> {
    let v = parse(request)?;
    let nu = pj::family_from_json(member(&v, "family")?)?;
    let report = pj::report_from_json(member(&v, "report")?, nu.field())?;
    Ok(verify_family(&report, &nu))
}

pub fn selftest_json(suite: &str, seed: u64) -> Result<String, Error> {
    let report = run_suite(suite, seed)
        .ok_or_else(|| Error::Schema(format!("unknown suite {suite:?}; choose from {}", SUITES.join(", "))))?;
    Ok(render(&pj::suite_to_json(&report)))
}

/// An automorphism of the plane over Q, Q(zeta_k) or a rational function field.
#[pyclass(name = "Automorphism", frozen, module = "planeaut_py")]
pub struct PyAutomorphism {
    inner: PlaneAut,
}

#[pymethods]
impl PyAutomorphism {
    /// Parse `{"field": ..., "components": [...]}`; `field` overrides a missing descriptor.
    #[new]
    #[pyo3(signature = (text, field = None))]
    fn new(text: &str, field: Option<&str>) -> PyResult<Self> {
        let default = field.map(pj::parse_field).transpose().map_err(to_py)?;
        let inner = pj::aut_from_json(&parse(text).map_err(to_py)?, default.as_ref()).map_err(to_py)?;
        Ok(PyAutomorphism { inner })
    }

    #[getter]
    fn field(&self) -> String {
        pj::field_text(self.inner.field())
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    fn polydegree(&self) -> Vec<u32> {
        self.inner.polydegree()
    }

    fn compose(&self, other: &PyAutomorphism) -> PyResult<PyAutomorphism> {
        Ok(PyAutomorphism { inner: self.inner.compose(&other.inner).map_err(to_py)? })
    }

    fn inverse(&self) -> PyAutomorphism {
        PyAutomorphism { inner: self.inner.inv() }
    }

    fn is_identity(&self) -> bool {
        self.inner.is_identity()
    }

    /// The amalgam word as JSON.
    fn decompose(&self) -> PyResult<String> {
        let d = decompose_endo(self.inner.forward()).map_err(to_py)?;
        Ok(render(&pj::decomposition_to_json(&d)))
    }

    fn to_json(&self) -> String {
        render(&pj::aut_to_json(&self.inner))
    }

    fn __eq__(&self, other: &PyAutomorphism) -> bool {
        self.inner.forward() == other.inner.forward()
    }

    fn __repr__(&self) -> String {
        format!("Automorphism({})", self.to_json())
    }
}

#[pyfunction]
fn linearize(group: &str) -> PyResult<String> {
    linearize_json(group).map_err(to_py)
}

#[pyfunction]
fn remove_pole(request: &str, at: &str) -> PyResult<String> {
    remove_pole_json(request, at).map_err(to_py)
}

/// Linearize a family over kappa[x]; the result is a report whose "verified" flag must be checked.
#[pyfunction]
fn family(family: &str) -> PyResult<String> {
    family_json(family).map_err(to_py)
}

#[pyfunction]
fn verify(request: &str) -> PyResult<bool> {
    verify_json(request).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (suite, seed = 0))]
fn selftest(py: Python<'_>, suite: &str, seed: u64) -> PyResult<String> {
    py.detach(|| selftest_json(suite, seed)).map_err(to_py)
}

#[pymodule]
fn planeaut_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAutomorphism>()?;
    m.add("PlaneautError", m.py().get_type::<PlaneautError>())?;
    m.add("SUITES", SUITES.to_vec())?;
    m.add_function(wrap_pyfunction!(linearize, m)?)?;
    m.add_function(wrap_pyfunction!(remove_pole, m)?)?;
    m.add_function(wrap_pyfunction!(family, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linearize_reports_verified() {
        let g = r#"{"kind": "cyclic", "orders": [2], "field": "Q", "generators": [{"components": ["-z1 + z2^2", "z2"]}]}"#;
        let v: Value = serde_json::from_str(&linearize_json(g).unwrap()).unwrap();
        assert_eq!(v["verified"], true);
    }

    #[test]
    fn family_report_round_trips_through_verify() {
        let fam = r#"{"group": {"kind": "cyclic", "orders": [2]}, "field": "Q(x)",
            "generators": [{"components": ["-z1 + x*z2^2", "z2"]}]}"#;
        let report: Value = serde_json::from_str(&family_json(fam).unwrap()).unwrap();
        let req = json!({"family": serde_json::from_str::<Value>(fam).unwrap(), "report": report}).to_string();
        assert!(verify_json(&req).unwrap());
    }

    #[test]
    fn errors_keep_their_tags() {
        assert_eq!(linearize_json("{").unwrap_err().tag(), "SchemaError");
        assert_eq!(selftest_json("nope", 0).unwrap_err().tag(), "SchemaError");
        let bad = r#"{"psi": {"field": "Q", "components": ["z1", "z2"]}, "rho": []}"#;
        assert!(remove_pole_json(bad, "0").is_err());
    }
}
