//! Python bindings. Rationals cross the boundary as `fractions.Fraction`.

use std::collections::BTreeMap;

use localp2::graphs;
use localp2::rational::{self, Rational};
use localp2::solver::tables::{reference, Table, TableKind};
use localp2::solver::{self, gv, verify, GenusInputs, Mode, SolverConfig};
use localp2::{Series, Var};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn to_py(py: Python<'_>, r: &Rational) -> PyResult<Py<PyAny>> {
    let frac = py.import("fractions")?.getattr("Fraction")?;
    Ok(frac.call1((rational::to_canonical(r),))?.unbind())
}

/// Accepts `int`, `str` or `fractions.Fraction`.
fn from_py(v: &Bound<'_, PyAny>) -> PyResult<Rational> {
    rational::parse(&v.str()?.to_string()).map_err(value_err)
}

fn table_to_dict<'py>(py: Python<'py>, t: &Table) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (&(g, i), v) in t {
        d.set_item((g, i), to_py(py, v)?)?;
    }
    Ok(d)
}

fn table_kind(name: &str) -> PyResult<TableKind> {
    name.parse().map_err(value_err)
}

/// Truncated Laurent series with exact rational coefficients.
#[pyclass(name = "Series", module = "localp2", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySeries {
    inner: Series,
}

#[pymethods]
impl PySeries {
    /// `Series(var, coeffs, valuation=0)`; the window ends after the last coefficient.
    #[new]
    #[pyo3(signature = (var, coeffs, valuation = 0))]
    fn new(var: &str, coeffs: Vec<Bound<'_, PyAny>>, valuation: i64) -> PyResult<Self> {
        let var: Var = var.parse().map_err(value_err)?;
        let c = coeffs.iter().map(from_py).collect::<PyResult<Vec<_>>>()?;
        Ok(PySeries { inner: Series::laurent(var, valuation, c) })
    }

    #[getter]
    fn var(&self) -> &'static str {
        self.inner.var().label()
    }

    #[getter]
    fn valuation(&self) -> i64 {
        self.inner.valuation()
    }

    #[getter]
    fn order(&self) -> i64 {
        self.inner.order()
    }

    fn coeff(&self, py: Python<'_>, k: i64) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner.coeff(k).map_err(value_err)?)
    }

    fn __add__(&self, o: &PySeries) -> PyResult<PySeries> {
        Ok(PySeries { inner: self.inner.checked_add(&o.inner).map_err(value_err)? })
    }

    fn __sub__(&self, o: &PySeries) -> PyResult<PySeries> {
        Ok(PySeries { inner: self.inner.checked_sub(&o.inner).map_err(value_err)? })
    }

    fn __mul__(&self, o: &PySeries) -> PyResult<PySeries> {
        Ok(PySeries { inner: self.inner.checked_mul(&o.inner).map_err(value_err)? })
    }

    fn __truediv__(&self, o: &PySeries) -> PyResult<PySeries> {
        Ok(PySeries { inner: self.inner.checked_div(&o.inner).map_err(value_err)? })
    }

    fn __pow__(&self, n: i64, _modulo: Option<i64>) -> PyResult<PySeries> {
        Ok(PySeries { inner: self.inner.pow(n).map_err(value_err)? })
    }

    fn __eq__(&self, o: &PySeries) -> bool {
        self.inner == o.inner
    }

    fn compose(&self, inner: &PySeries) -> PyResult<PySeries> {
        Ok(PySeries { inner: self.inner.compose(&inner.inner).map_err(value_err)? })
    }

    fn reverse(&self) -> PyResult<PySeries> {
        Ok(PySeries { inner: self.inner.reverse().map_err(value_err)? })
    }

    fn theta(&self) -> PyResult<PySeries> {
        Ok(PySeries { inner: self.inner.theta().map_err(value_err)? })
    }

    fn exp(&self) -> PyResult<PySeries> {
        Ok(PySeries { inner: self.inner.exp().map_err(value_err)? })
    }

    fn log(&self) -> PyResult<PySeries> {
        Ok(PySeries { inner: self.inner.log().map_err(value_err)? })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("series serialize")
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<PySeries> {
        Ok(PySeries { inner: serde_json::from_str(s).map_err(value_err)? })
    }

    fn __repr__(&self) -> String {
        format!("Series({})", self.inner)
    }
}

/// The genus-by-genus pipeline.
#[pyclass(name = "Solver", module = "localp2", unsendable)]
struct PySolver {
    inner: solver::Solver,
    mode: Mode,
}

#[pymethods]
impl PySolver {
    #[new]
    #[pyo3(signature = (max_genus = 3, a = "1/12", mode = "joint", max_degree = 15, max_insertions = 27))]
    fn new(max_genus: u32, a: &str, mode: &str, max_degree: i64, max_insertions: i64) -> PyResult<Self> {
        let mut cfg = SolverConfig::new(max_genus);
        cfg.a = rational::parse(a).map_err(value_err)?;
        cfg.max_degree = max_degree;
        cfg.max_insertions = max_insertions;
        cfg.orders = solver::Orders::for_ranges(max_genus, max_degree, max_insertions, cfg.con_max);
        let mode: Mode = mode.parse().map_err(value_err)?;
        Ok(PySolver { inner: solver::Solver::new(cfg).map_err(runtime_err)?, mode })
    }

    #[getter]
    fn sealed_genus(&self) -> u32 {
        self.inner.sealed_genus()
    }

    /// Seals the next genus. `gv` maps degree to Gopakumar-Vafa input and
    /// defaults to the embedded values; returns the ambiguity coefficients.
    #[pyo3(signature = (gv = None, gw0 = None))]
    fn step(
        &mut self,
        py: Python<'_>,
        gv: Option<BTreeMap<u32, Bound<'_, PyAny>>>,
        gw0: Option<Bound<'_, PyAny>>,
    ) -> PyResult<Vec<Py<PyAny>>> {
        let g = self.inner.sealed_genus() + 1;
        let mut inp = GenusInputs::defaults(g, self.mode);
        if let Some(gv) = gv {
            inp.gv_low = gv.iter().map(|(&d, v)| Ok((d, from_py(v)?))).collect::<PyResult<_>>()?;
        }
        if let Some(c) = gw0 {
            inp.gw0 = Some(from_py(&c)?);
        }
        let amb = self.inner.step(&inp).map_err(runtime_err)?;
        amb.coeffs.iter().map(|c| to_py(py, c)).collect()
    }

    /// Seals every genus up to `max_genus` with the embedded inputs.
    fn run(&mut self) -> PyResult<()> {
        for g in self.inner.sealed_genus() + 1..=self.inner.config.max_genus {
            self.inner.step(&GenusInputs::defaults(g, self.mode)).map_err(runtime_err)?;
        }
        Ok(())
    }

    /// `{table name: {(genus, index): Fraction}}`.
    fn tables<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let t = self.inner.tables().map_err(runtime_err)?;
        let d = PyDict::new(py);
        for kind in TableKind::ALL {
            d.set_item(kind.label(), table_to_dict(py, t.get(kind))?)?;
        }
        Ok(d)
    }

    /// Flat-frame `(g, n)` correlator in a chart (`lr`, `orb` or `con`).
    fn correlator(&self, chart: &str, g: u32, n: u32) -> PyResult<PySeries> {
        let chart = chart.parse().map_err(value_err)?;
        Ok(PySeries { inner: self.inner.chart(chart).flat_correlator(g, n).map_err(runtime_err)? })
    }

    /// Runs the table comparison and the conifold gap; returns `(name, passed, detail)`.
    fn verify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let t = self.inner.tables().map_err(runtime_err)?;
        let mut r = verify::verify_tables(&t, &self.inner.config);
        for g in 2..=self.inner.sealed_genus() {
            r.extend(verify::verify_gap(&self.inner, g).map_err(runtime_err)?);
        }
        PyList::new(py, r.checks.into_iter().map(|c| (c.name, c.passed, c.detail)))
    }
}

/// Embedded reference table by name (`gw_y`, `gv_y`, `ambiguity`, `gw_orb`, `gw_con`).
#[pyfunction]
fn reference_table<'py>(py: Python<'py>, name: &str) -> PyResult<Bound<'py, PyDict>> {
    table_to_dict(py, &reference().table(table_kind(name)?))
}

fn dict_to_table(d: &Bound<'_, PyDict>) -> PyResult<Table> {
    d.iter().map(|(k, v)| Ok((k.extract::<(u32, i64)>()?, from_py(&v)?))).collect()
}

#[pyfunction]
fn gw_from_gv<'py>(py: Python<'py>, gv: &Bound<'py, PyDict>, max_genus: u32, max_degree: i64) -> PyResult<Bound<'py, PyDict>> {
    let t = gv::gw_from_gv(&dict_to_table(gv)?, max_genus, max_degree).map_err(value_err)?;
    table_to_dict(py, &t)
}

#[pyfunction]
fn gv_from_gw<'py>(py: Python<'py>, gw: &Bound<'py, PyDict>, max_genus: u32, max_degree: i64) -> PyResult<Bound<'py, PyDict>> {
    let t = gv::gv_from_gw(&dict_to_table(gw)?, max_genus, max_degree).map_err(value_err)?;
    table_to_dict(py, &t)
}

type GraphTuple = (Vec<u32>, Vec<(usize, usize)>, Vec<usize>, u64);

/// Stable graphs of type `(g, n)` as `(vertex genera, edges, legs, |Aut|)`.
#[pyfunction]
fn stable_graphs(g: u32, n: usize) -> PyResult<Vec<GraphTuple>> {
    Ok(graphs::enumerate(g, n)
        .map_err(value_err)?
        .into_iter()
        .map(|s| (s.genera, s.edges, s.legs, s.aut))
        .collect())
}

#[pymodule]
#[pyo3(name = "localp2")]
fn localp2_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySeries>()?;
    m.add_class::<PySolver>()?;
    m.add_function(wrap_pyfunction!(reference_table, m)?)?;
    m.add_function(wrap_pyfunction!(gw_from_gv, m)?)?;
    m.add_function(wrap_pyfunction!(gv_from_gw, m)?)?;
    m.add_function(wrap_pyfunction!(stable_graphs, m)?)?;
    Ok(())
}
