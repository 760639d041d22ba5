//! Python bindings. Configurations cross the boundary as `Config` objects
//! that wrap the JSON document model; reports come back as plain dicts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ilab_core::analysis::{extract_structure, flatness_audit, joint_bound as core_joint_bound, match_structure, Table};
use ilab_core::constructions::{
    gen_algebraic, gen_desargues, gen_dual_cycles, gen_reye, gen_tricolor, sample_probabilistic, AlgebraicParams,
    ProbParams,
};
use ilab_core::exactgeom::{format_rat, parse_rat, RatScalar};
use ilab_core::incidence::IncidenceTable;
use ilab_core::io;
use ilab_core::transforms::{dualize, lift_to_concurrent, project_generic, undualize};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_dict<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyDict>> {
    let text = serde_json::to_string(value).map_err(err)?;
    py.import("json")?
        .call_method1("loads", (text,))?
        .cast_into::<PyDict>()
        .map_err(Into::into)
}

/// A colored configuration: a grid, a set of lines, or a dual point set.
#[pyclass(name = "Config", module = "ilab", frozen)]
struct PyConfig {
    inner: io::Config,
}

impl PyConfig {
    fn wrap(inner: impl Into<io::Config>) -> Self {
        PyConfig { inner: inner.into() }
    }

    fn table(&self) -> IncidenceTable {
        match &self.inner {
            io::Config::Grid(g) => g.incidence_table(),
            io::Config::Lines(l) => l.incidence_table(),
            io::Config::Points(p) => p.incidence_table(),
        }
    }
}

#[pymethods]
impl PyConfig {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::Config::from_json(text).map(|inner| PyConfig { inner }).map_err(err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    /// `"grid"`, `"lines"` or `"points"`.
    #[getter]
    fn model(&self) -> &'static str {
        self.inner.model()
    }

    #[getter]
    fn class_sizes(&self) -> Vec<usize> {
        self.table().class_sizes().to_vec()
    }

    /// Verdict dict with keys `k`, `consistent` and `failures`. Colors and
    /// line indices in failures are 0-based.
    fn k_consistency<'py>(&self, py: Python<'py>, k: usize) -> PyResult<Bound<'py, PyDict>> {
        to_dict(py, &self.table().k_consistency(k).map_err(err)?)
    }

    fn max_colorful_order(&self) -> usize {
        self.table().max_colorful_order().order
    }

    /// True when the configuration is k-consistent and no single line can be
    /// removed without breaking that.
    fn is_minimal(&self, py: Python<'_>, k: usize) -> PyResult<bool> {
        let table = self.table();
        py.detach(|| table.minimality(k)).map(|v| v.minimal()).map_err(err)
    }

    /// Number of flat incidences among points with at least `t` colors.
    fn flat_incidences(&self, t: usize) -> PyResult<usize> {
        let lines = self.inner.to_lines().map_err(err)?;
        Ok(flatness_audit(&lines, t)
            .map_err(err)?
            .iter()
            .filter(|e| e.flat)
            .count())
    }

    fn structure(&self) -> String {
        extract_structure(&self.table()).to_string()
    }

    /// Whether the incidence structure is a relabeling of table `"I"` or `"II"`.
    fn matches_table(&self, table: &str) -> PyResult<bool> {
        let t: Table = table.parse().map_err(err)?;
        Ok(match_structure(&extract_structure(&self.table()), t)
            .map_err(err)?
            .is_some())
    }

    fn lift(&self) -> PyResult<Self> {
        match &self.inner {
            io::Config::Grid(g) => Ok(Self::wrap(lift_to_concurrent(g))),
            _ => Err(err("lift needs a grid configuration")),
        }
    }

    fn project(&self, py: Python<'_>, d: usize, seed: u64) -> PyResult<Self> {
        let lines = self.inner.to_lines().map_err(err)?;
        py.detach(|| project_generic(&lines, d, seed))
            .map(|p| Self::wrap(p.config))
            .map_err(err)
    }

    fn dualize(&self) -> PyResult<Self> {
        let lines = self.inner.to_lines().map_err(err)?;
        dualize(&lines).map(Self::wrap).map_err(err)
    }

    fn undualize(&self) -> PyResult<Self> {
        match &self.inner {
            io::Config::Points(p) => undualize(p).map(Self::wrap).map_err(err),
            _ => Err(err("undualize needs a point configuration")),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "Config(model={:?}, class_sizes={:?})",
            self.inner.model(),
            self.class_sizes()
        )
    }
}

#[pyfunction]
fn algebraic(py: Python<'_>, k: usize, p: u64) -> PyResult<PyConfig> {
    let params = AlgebraicParams::with_defaults(k, p).map_err(err)?;
    py.detach(|| gen_algebraic(&params)).map(PyConfig::wrap).map_err(err)
}

/// Returns the configuration and the per-class deletion report.
#[pyfunction]
#[pyo3(signature = (k, n, seed, probability=None, before_deletion=false))]
fn probabilistic<'py>(
    py: Python<'py>,
    k: usize,
    n: u32,
    seed: u64,
    probability: Option<&str>,
    before_deletion: bool,
) -> PyResult<(PyConfig, Bound<'py, PyDict>)> {
    let params = match probability {
        Some(p) => ProbParams::with_probability(k, n, seed, &parse_rat(p).map_err(err)?),
        None => ProbParams::new(k, n, seed),
    }
    .map_err(err)?;
    let sample = py.detach(|| sample_probabilistic(&params));
    let cfg = if before_deletion {
        sample.before_deletion()
    } else {
        sample.after_deletion()
    };
    Ok((PyConfig::wrap(cfg), to_dict(py, &sample.report)?))
}

#[pyfunction]
fn tricolor(steps: Vec<i64>) -> PyResult<PyConfig> {
    gen_tricolor(&steps).map(PyConfig::wrap).map_err(err)
}

#[pyfunction]
fn reye() -> PyResult<PyConfig> {
    gen_reye().map(PyConfig::wrap).map_err(err)
}

#[pyfunction]
fn desargues() -> PyResult<PyConfig> {
    gen_desargues().map(PyConfig::wrap).map_err(err)
}

/// Slopes and starts are rationals given as strings such as `"3/2"`.
#[pyfunction]
#[pyo3(signature = (slopes, starts))]
fn dual_cycles<'py>(
    py: Python<'py>,
    slopes: Vec<String>,
    starts: Vec<String>,
) -> PyResult<(PyConfig, Bound<'py, PyDict>)> {
    let parse = |v: &[String]| {
        v.iter()
            .map(|s| parse_rat(s).map_err(err))
            .collect::<PyResult<Vec<RatScalar>>>()
    };
    let slopes: [RatScalar; 3] = parse(&slopes)?
        .try_into()
        .map_err(|_| err("need exactly three slopes"))?;
    let out = gen_dual_cycles(&slopes, &parse(&starts)?).map_err(err)?;
    Ok((PyConfig::wrap(out.config), to_dict(py, &out.report)?))
}

/// Exact lower bound on the line count as a `"num/den"` string, and whether
/// `lines` meets it.
#[pyfunction]
fn joint_bound(m: usize, k: usize, lines: usize) -> PyResult<(String, bool)> {
    if k == 0 || m < k {
        return Err(err("need 1 <= k <= m"));
    }
    let b = core_joint_bound(m, k, lines);
    Ok((format_rat(&b.bound), b.satisfied))
}

#[pymodule]
fn ilab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyConfig>()?;
    m.add_function(wrap_pyfunction!(algebraic, m)?)?;
    m.add_function(wrap_pyfunction!(probabilistic, m)?)?;
    m.add_function(wrap_pyfunction!(tricolor, m)?)?;
    m.add_function(wrap_pyfunction!(reye, m)?)?;
    m.add_function(wrap_pyfunction!(desargues, m)?)?;
    m.add_function(wrap_pyfunction!(dual_cycles, m)?)?;
    m.add_function(wrap_pyfunction!(joint_bound, m)?)?;
    Ok(())
}
