//! Python bindings: catalog actions, spec parsing, transfer maps and reports.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use goid::catalog;
use goid::dynamics::{ActionInstance, Point};
use goid::group::GroupElement;
use goid::groupoid;
use goid::report::{Report, TriState};
use goid::syntax;

create_exception!(pygoid, GoidError, PyException);

fn err(e: goid::Error) -> PyErr {
    GoidError::new_err(e.to_string())
}

fn tristate(t: TriState) -> &'static str {
    match t {
        TriState::True => "true",
        TriState::False => "false",
        TriState::Undetermined { .. } => "undetermined",
    }
}

/// An injective semigroup action on a space.
#[pyclass(name = "Action", module = "pygoid")]
struct PyAction {
    inner: ActionInstance,
}

impl PyAction {
    fn point(&self, s: &str) -> PyResult<Point> {
        syntax::parse_point(&self.inner.space, s).map_err(err)
    }

    fn element(&self, s: &str) -> PyResult<GroupElement> {
        syntax::parse_element(self.inner.ctx.family, s).map_err(err)
    }
}

#[pymethods]
impl PyAction {
    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn generators(&self) -> Vec<String> {
        self.inner.ctx.generators.iter().map(|g| g.to_string()).collect()
    }

    /// `θ_g(x)` for `g` in the semigroup.
    fn act(&self, g: &str, x: &str) -> PyResult<String> {
        let y = self.inner.act(&self.element(g)?, &self.point(x)?).map_err(err)?;
        Ok(syntax::format_point(&y))
    }

    /// Whether `g ∈ Q_x`.
    fn q_contains(&self, x: &str, g: &str) -> PyResult<bool> {
        groupoid::q_contains(&self.inner, &self.point(x)?, &self.element(g)?).map_err(err)
    }

    /// `u(x, g)`, or `None` when `g ∉ Q_x`.
    fn transfer(&self, x: &str, g: &str) -> PyResult<Option<String>> {
        let y = groupoid::transfer_opt(&self.inner, &self.point(x)?, &self.element(g)?).map_err(err)?;
        Ok(y.as_ref().map(syntax::format_point))
    }

    #[pyo3(signature = (x, radius = 3))]
    fn orbit(&self, x: &str, radius: usize) -> PyResult<Vec<String>> {
        let pts = groupoid::orbit(&self.inner, &self.point(x)?, radius).map_err(err)?;
        Ok(pts.iter().map(syntax::format_point).collect())
    }

    /// `"true"`, `"false"` or `"undetermined"` for openness of every generator image.
    fn is_etale(&self) -> PyResult<&'static str> {
        let mut all = TriState::True;
        for g in &self.inner.ctx.generators {
            all = all.and(self.inner.image_is_open(g).map_err(err)?);
        }
        Ok(tristate(all))
    }

    #[pyo3(signature = (radius = 3))]
    fn is_free(&self, radius: usize) -> PyResult<&'static str> {
        Ok(tristate(groupoid::is_topologically_free(&self.inner, radius).map_err(err)?.verdict))
    }

    /// Number of arrows in the truncated groupoid over the default window.
    #[pyo3(signature = (radius = 3))]
    fn arrow_count(&self, radius: usize) -> PyResult<usize> {
        let window = self.inner.default_window().map_err(err)?;
        Ok(groupoid::enumerate(&self.inner, &window, radius).map_err(err)?.len())
    }

    fn export_spec(&self) -> PyResult<String> {
        syntax::export_spec(&self.inner).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Action({})", self.inner.name)
    }
}

/// A verification report.
#[pyclass(name = "Report", module = "pygoid")]
struct PyReport {
    inner: Report,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn command(&self) -> String {
        self.inner.command.clone()
    }

    #[getter]
    fn status(&self) -> String {
        self.inner.status.to_string()
    }

    #[getter]
    fn inputs_digest(&self) -> String {
        self.inner.inputs_digest.clone()
    }

    #[getter]
    fn exit_code(&self) -> i32 {
        self.inner.exit_code()
    }

    /// `(claim, status, witness)` for every record.
    #[getter]
    fn records(&self) -> Vec<(String, String, Option<String>)> {
        self.inner
            .records
            .iter()
            .map(|r| (r.claim.clone(), r.status.to_string(), r.witness.clone()))
            .collect()
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __repr__(&self) -> String {
        format!("Report({}, {}, {} records)", self.inner.command, self.inner.status, self.inner.records.len())
    }
}

/// Names accepted by `build` and `run_battery`.
#[pyfunction]
fn catalog_names() -> Vec<&'static str> {
    catalog::INSTANCES.iter().chain(catalog::PAIRS).copied().collect()
}

#[pyfunction]
fn build(name: &str) -> PyResult<PyAction> {
    Ok(PyAction {
        inner: catalog::build(name).map_err(err)?,
    })
}

/// Parses an action spec from its text.
#[pyfunction]
fn parse_spec(text: &str) -> PyResult<PyAction> {
    Ok(PyAction {
        inner: syntax::parse_spec_str(text).map_err(err)?.instance,
    })
}

#[pyfunction]
#[pyo3(signature = (name, radius = 3))]
fn run_battery(py: Python<'_>, name: &str, radius: usize) -> PyResult<PyReport> {
    let rep = py.detach(|| catalog::run_battery(name, radius)).map_err(err)?;
    Ok(PyReport { inner: rep })
}

/// Runs the command-line front end; returns the rendered output and the exit status.
#[pyfunction]
fn cli(py: Python<'_>, args: Vec<String>) -> (String, i32) {
    py.detach(|| goid::cli::run(std::iter::once("goid".to_string()).chain(args)))
}

#[pymodule]
fn pygoid(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("GoidError", m.py().get_type::<GoidError>())?;
    m.add_class::<PyAction>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    m.add_function(wrap_pyfunction!(build, m)?)?;
    m.add_function(wrap_pyfunction!(parse_spec, m)?)?;
    m.add_function(wrap_pyfunction!(run_battery, m)?)?;
    m.add_function(wrap_pyfunction!(cli, m)?)?;
    Ok(())
}
