//! Python module `norden`: manifolds, immersions and the scenario runner.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde::Serialize;
use serde_json::Value;

use norden_geom::catalog;
use norden_geom::cli::{self as runner, Overrides};
use norden_geom::expr::Expr;
use norden_geom::hypercomplex;
use norden_geom::manifold::{self, ChartManifold, Structure};
use norden_geom::policy::Tolerances;
use norden_geom::sampling::halton_points;
use norden_geom::submanifold::{self, Immersion};

create_exception!(norden, NordenError, PyValueError);

fn err(e: impl std::fmt::Display) -> PyErr {
    NordenError::new_err(e.to_string())
}

fn structure(alpha: usize) -> PyResult<Structure> {
    Structure::from_alpha(alpha).ok_or_else(|| err(format!("alpha must be 1, 2 or 3, got {alpha}")))
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn record<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &serde_json::to_value(value).map_err(err)?)
}

fn matrix_rows(m: &norden_geom::numeric::Matrix<f64>) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| m.row(i)).collect()
}

fn sample(dim: usize, points: Option<Vec<Vec<f64>>>, count: usize, half_width: f64) -> Vec<Vec<f64>> {
    points.unwrap_or_else(|| halton_points(dim, count, half_width))
}

fn tolerances(hold: f64, fail: f64) -> PyResult<Tolerances> {
    if !(hold > 0.0 && hold <= fail) {
        return Err(err(format!("need 0 < hold <= fail, got {hold}, {fail}")));
    }
    Ok(Tolerances { hold, fail })
}

/// A chart manifold with metric and three structure fields.
#[pyclass(name = "Manifold", module = "norden", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyManifold {
    inner: ChartManifold,
}

#[pymethods]
impl PyManifold {
    /// Flat model of dimension 4n.
    #[staticmethod]
    fn flat_k(n: usize) -> PyResult<Self> {
        Ok(Self {
            inner: catalog::flat_k(n).map_err(err)?,
        })
    }

    /// Flat model rescaled by exp(2u).
    #[staticmethod]
    fn conformal_w(n: usize, u: &str) -> PyResult<Self> {
        Ok(Self {
            inner: catalog::conformal_w(n, u).map_err(err)?,
        })
    }

    fn conformal(&self, u: &str) -> PyResult<Self> {
        let e = Expr::parse(u, self.inner.dim()).map_err(err)?;
        Ok(Self {
            inner: hypercomplex::conformal_transform(&self.inner, &e).map_err(err)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    fn metric(&self, x: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
        Ok(matrix_rows(&self.inner.metric_at(&x).map_err(err)?))
    }

    fn structure(&self, alpha: usize, x: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
        Ok(matrix_rows(&self.inner.structure_at(structure(alpha)?, &x).map_err(err)?))
    }

    /// Lee forms and covectors at a point.
    fn lee_forms<'py>(&self, py: Python<'py>, x: Vec<f64>) -> PyResult<Bound<'py, PyAny>> {
        let pg = manifold::point_geometry(&self.inner, &x).map_err(err)?;
        let lee = manifold::lee_forms(&pg);
        let dict = PyDict::new(py);
        dict.set_item("theta", lee.theta.to_vec())?;
        dict.set_item("p", lee.p.to_vec())?;
        Ok(dict.into_any())
    }

    fn christoffel(&self, x: Vec<f64>) -> PyResult<Vec<Vec<Vec<f64>>>> {
        let pg = manifold::point_geometry(&self.inner, &x).map_err(err)?;
        let d = self.inner.dim();
        Ok((0..d)
            .map(|k| (0..d).map(|i| (0..d).map(|j| pg.gamma[(k, i, j)]).collect()).collect())
            .collect())
    }

    fn nijenhuis_max(&self, alpha: usize, x: Vec<f64>) -> PyResult<f64> {
        manifold::nijenhuis_max(&self.inner, &x, structure(alpha)?).map_err(err)
    }

    #[pyo3(signature = (points=None, count=32, half_width=1.0))]
    fn structure_residuals<'py>(
        &self,
        py: Python<'py>,
        points: Option<Vec<Vec<f64>>>,
        count: usize,
        half_width: f64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let pts = sample(self.inner.dim(), points, count, half_width);
        record(py, &hypercomplex::structure_residuals(&self.inner, &pts).map_err(err)?)
    }

    /// Class residuals and the K / W / Outside / Indeterminate verdict.
    #[pyo3(signature = (points=None, count=32, half_width=1.0, hold=1e-7, fail=1e-4))]
    fn classify<'py>(
        &self,
        py: Python<'py>,
        points: Option<Vec<Vec<f64>>>,
        count: usize,
        half_width: f64,
        hold: f64,
        fail: f64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let pts = sample(self.inner.dim(), points, count, half_width);
        let c = hypercomplex::class_residuals(&self.inner, &pts, &tolerances(hold, fail)?).map_err(err)?;
        record(py, &c)
    }

    fn __repr__(&self) -> String {
        format!("Manifold({:?}, dim={})", self.inner.label(), self.inner.dim())
    }
}

/// An immersion of a 4m-dimensional chart into an ambient manifold.
#[pyclass(name = "Immersion", module = "norden", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyImmersion {
    inner: Immersion,
}

#[pymethods]
impl PyImmersion {
    #[new]
    fn new(ambient: &PyManifold, source_dim: usize, components: Vec<String>) -> PyResult<Self> {
        Ok(Self {
            inner: Immersion::parse(ambient.inner.clone(), source_dim, &components).map_err(err)?,
        })
    }

    /// Coordinate slice of quaternionic dimension m; the other coordinates
    /// are held at `section`.
    #[staticmethod]
    #[pyo3(signature = (ambient, m, section=Vec::new()))]
    fn coordinate(ambient: &PyManifold, m: usize, section: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: catalog::coordinate_immersion(&ambient.inner, m, &section).map_err(err)?,
        })
    }

    #[getter]
    fn source_dim(&self) -> usize {
        self.inner.source_dim()
    }

    #[getter]
    fn ambient(&self) -> PyManifold {
        PyManifold {
            inner: self.inner.ambient().clone(),
        }
    }

    fn map(&self, p: Vec<f64>) -> PyResult<Vec<f64>> {
        self.inner.map(&p).map_err(err)
    }

    fn holomorphy_residual(&self, p: Vec<f64>) -> PyResult<f64> {
        submanifold::holomorphy_residual(&self.inner, &p).map_err(err)
    }

    /// `h(e_i, e_j)` on the source coordinate frame, as a k×k nested list
    /// of ambient vectors.
    fn second_fundamental(&self, p: Vec<f64>) -> PyResult<Vec<Vec<Vec<f64>>>> {
        let f = submanifold::frame_at(&self.inner, &p).map_err(err)?;
        let k = f.source_dim();
        let h = f.h_basis();
        Ok(h.chunks(k).map(|row| row.to_vec()).collect())
    }

    fn mean_curvature(&self, p: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(submanifold::frame_at(&self.inner, &p).map_err(err)?.mean_curvature())
    }

    fn induced(&self) -> PyResult<PyManifold> {
        Ok(PyManifold {
            inner: submanifold::induced_manifold(&self.inner).map_err(err)?,
        })
    }

    #[pyo3(signature = (points=None, count=32, half_width=1.0))]
    fn theorem31<'py>(
        &self,
        py: Python<'py>,
        points: Option<Vec<Vec<f64>>>,
        count: usize,
        half_width: f64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let pts = sample(self.inner.source_dim(), points, count, half_width);
        let (worst, _) = submanifold::theorem31_over(&self.inner, &pts).map_err(err)?;
        record(py, &worst)
    }

    #[pyo3(signature = (points=None, count=32, half_width=1.0, hold=1e-7, fail=1e-4))]
    fn lee_restriction<'py>(
        &self,
        py: Python<'py>,
        points: Option<Vec<Vec<f64>>>,
        count: usize,
        half_width: f64,
        hold: f64,
        fail: f64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let pts = sample(self.inner.source_dim(), points, count, half_width);
        let r = submanifold::lee_restriction_check(&self.inner, &pts, &tolerances(hold, fail)?).map_err(err)?;
        record(py, &r)
    }

    #[pyo3(signature = (points=None, count=32, half_width=1.0, hold=1e-7, fail=1e-4))]
    fn umbilicity<'py>(
        &self,
        py: Python<'py>,
        points: Option<Vec<Vec<f64>>>,
        count: usize,
        half_width: f64,
        hold: f64,
        fail: f64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let pts = sample(self.inner.source_dim(), points, count, half_width);
        let r = submanifold::umbilicity_classify(&self.inner, &pts, &tolerances(hold, fail)?).map_err(err)?;
        record(py, &r)
    }

    fn __repr__(&self) -> String {
        format!(
            "Immersion({:?}, {} -> {})",
            self.inner.label(),
            self.inner.source_dim(),
            self.inner.ambient().dim()
        )
    }
}

/// Product manifold and its two factor embeddings.
#[pyfunction]
#[pyo3(signature = (left, right, left_section=Vec::new(), right_section=Vec::new()))]
fn product(
    left: &PyManifold,
    right: &PyManifold,
    left_section: Vec<f64>,
    right_section: Vec<f64>,
) -> PyResult<(PyManifold, PyImmersion, PyImmersion)> {
    let p = catalog::product(&left.inner, &right.inner, &left_section, &right_section).map_err(err)?;
    Ok((
        PyManifold { inner: p.manifold },
        PyImmersion { inner: p.left },
        PyImmersion { inner: p.right },
    ))
}

#[pyfunction]
#[pyo3(signature = (dim, count, half_width=1.0))]
fn halton(dim: usize, count: usize, half_width: f64) -> Vec<Vec<f64>> {
    halton_points(dim, count, half_width)
}

/// Runs a TOML scenario and returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (text, points=None, half_width=None, hold=None, fail=None))]
fn run_scenario<'py>(
    py: Python<'py>,
    text: &str,
    points: Option<usize>,
    half_width: Option<f64>,
    hold: Option<f64>,
    fail: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let overrides = Overrides {
        points,
        half_width,
        hold,
        fail,
    };
    let report = runner::parse_scenario(text)
        .and_then(|s| runner::run_scenario(s, &overrides))
        .map_err(err)?;
    record(py, &report)
}

#[pyfunction]
fn checks() -> Vec<&'static str> {
    runner::CHECK_NAMES.to_vec()
}

#[pymodule]
fn norden(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyManifold>()?;
    m.add_class::<PyImmersion>()?;
    m.add_function(wrap_pyfunction!(product, m)?)?;
    m.add_function(wrap_pyfunction!(halton, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(checks, m)?)?;
    m.add("NordenError", m.py().get_type::<NordenError>())?;
    Ok(())
}
