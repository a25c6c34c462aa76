use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ::trimer::negativity::{full_report, Temperature};
use ::trimer::phases::{classify, classify_ground_state, manifold_suite};
use ::trimer::reconstruct::{negativity_from_observables, observables_from_rho, ObservableSet};
use ::trimer::spectrum::analytic_spectrum;
use ::trimer::sweep::{self, Base, FreeAxes, RealUnits, SearchBox};
use ::trimer::density::thermal_density_matrix;

fn err(e: ::trimer::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "CouplingParams", frozen, get_all, from_py_object)]
#[derive(Clone, Copy)]
pub struct PyParams {
    pub j: f64,
    pub j1: f64,
    pub h: f64,
}

impl PyParams {
    fn inner(&self) -> ::trimer::CouplingParams {
        ::trimer::CouplingParams { j: self.j, j1: self.j1, h: self.h }
    }
}

#[pymethods]
impl PyParams {
    #[new]
    #[pyo3(signature = (j, j1, h = 0.0))]
    fn new(j: f64, j1: f64, h: f64) -> PyResult<Self> {
        ::trimer::CouplingParams::new(j, j1, h).map_err(err)?;
        Ok(PyParams { j, j1, h })
    }

    fn __repr__(&self) -> String {
        format!("CouplingParams(j={}, j1={}, h={})", self.j, self.j1, self.h)
    }
}

#[pyclass(name = "NegativityReport", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
pub struct PyReport {
    pub n_mu_s1: f64,
    pub n_s1_s2: f64,
    pub n_mu_full: f64,
    pub n_s1_full: f64,
    pub n_tri: f64,
    pub class_label: String,
}

impl From<::trimer::NegativityReport> for PyReport {
    fn from(r: ::trimer::NegativityReport) -> Self {
        PyReport {
            n_mu_s1: r.n_mu_s1,
            n_s1_s2: r.n_s1_s2,
            n_mu_full: r.n_mu_full,
            n_s1_full: r.n_s1_full,
            n_tri: r.n_tri,
            class_label: classify(&r).label().to_string(),
        }
    }
}

#[pymethods]
impl PyReport {
    fn as_dict(&self) -> BTreeMap<&'static str, f64> {
        BTreeMap::from([
            ("n_mu_s1", self.n_mu_s1),
            ("n_s1_s2", self.n_s1_s2),
            ("n_mu_full", self.n_mu_full),
            ("n_s1_full", self.n_s1_full),
            ("n_tri", self.n_tri),
        ])
    }

    fn __repr__(&self) -> String {
        format!(
            "NegativityReport(n_mu_s1={:.6}, n_s1_s2={:.6}, n_mu_full={:.6}, n_s1_full={:.6}, n_tri={:.6}, class='{}')",
            self.n_mu_s1, self.n_s1_s2, self.n_mu_full, self.n_s1_full, self.n_tri, self.class_label
        )
    }
}

/// Five negativities at k_B T = t (t = 0 is the ground state).
#[pyfunction]
#[pyo3(signature = (params, t = 0.0))]
fn report(params: PyParams, t: f64) -> PyResult<PyReport> {
    let temp = Temperature::from_kt(t).map_err(err)?;
    Ok(full_report(&params.inner(), temp).map_err(err)?.into())
}

/// (ground-state label, degeneracy, energy, class).
#[pyfunction]
fn ground_state(params: PyParams) -> PyResult<(String, usize, f64, String)> {
    let (g, _, c) = classify_ground_state(&params.inner()).map_err(err)?;
    Ok((g.to_string(), g.degeneracy(), g.energy, c.label().to_string()))
}

/// Levels as (label, energy), lowest first.
#[pyfunction]
fn spectrum(params: PyParams) -> PyResult<Vec<(String, f64)>> {
    Ok(analytic_spectrum(&params.inner())
        .map_err(err)?
        .iter()
        .map(|e| (e.level.to_string(), e.energy))
        .collect())
}

/// The degenerate-manifold table as (name, report).
#[pyfunction]
fn manifolds() -> Vec<(String, PyReport)> {
    manifold_suite().into_iter().map(|r| (r.manifold.name().to_string(), r.report.into())).collect()
}

/// (temperature, found) in the energy units of `params`.
#[pyfunction]
#[pyo3(signature = (params, target = 0.0))]
fn threshold_temperature(params: PyParams, target: f64) -> PyResult<(f64, bool)> {
    let r = sweep::threshold_temperature(&params.inner(), target).map_err(err)?;
    Ok((r.value, r.found))
}

/// (kelvin, found) for couplings in cm^-1 and field in tesla.
#[pyfunction]
#[pyo3(signature = (j_cm1, j1_cm1, g, b_tesla, target = 0.0))]
fn threshold_kelvin(j_cm1: f64, j1_cm1: f64, g: f64, b_tesla: f64, target: f64) -> PyResult<(f64, bool)> {
    let u = RealUnits { j_cm1, j1_cm1, g, b_tesla, t_kelvin: 0.0 };
    let r = sweep::threshold_temperature_real(&u, target).map_err(err)?;
    Ok((r.value, r.found))
}

/// (max n_tri, T, h) over T in [0, t_max], and h in [0, h_max] when `free_field`.
#[pyfunction]
#[pyo3(signature = (params, t_max, h_max = 0.0, free_field = false))]
fn max_negativity(params: PyParams, t_max: f64, h_max: f64, free_field: bool) -> PyResult<(f64, f64, f64)> {
    let base = Base::Dimensionless { params: params.inner(), t: 0.0 };
    let free = if free_field { FreeAxes::TH } else { FreeAxes::T };
    let m = sweep::max_negativity_over(&base, free, &SearchBox::new(t_max, h_max)).map_err(err)?;
    Ok((m.value, m.t, m.h))
}

/// n_tri along a temperature grid.
#[pyfunction]
fn t_scan(params: PyParams, temperatures: Vec<f64>) -> PyResult<Vec<f64>> {
    temperatures
        .iter()
        .map(|&t| Ok(full_report(&params.inner(), Temperature::from_kt(t).map_err(err)?).map_err(err)?.n_tri))
        .collect()
}

/// The nine local observables of the thermal state at k_B T = t > 0.
#[pyfunction]
fn observables(params: PyParams, t: f64) -> PyResult<BTreeMap<&'static str, f64>> {
    let beta = match Temperature::from_kt(t).map_err(err)? {
        Temperature::Beta(b) => b,
        Temperature::Zero => return Err(PyValueError::new_err("t must be > 0")),
    };
    let rho = thermal_density_matrix(&params.inner(), beta).map_err(err)?;
    let o = observables_from_rho(&rho).map_err(err)?;
    Ok(ObservableSet::FIELDS.into_iter().zip(o.values()).collect())
}

/// Negativities from the nine observables at known beta and h.
#[pyfunction]
fn reconstruct(obs: BTreeMap<String, f64>, beta: f64, h: f64) -> PyResult<PyReport> {
    let get = |k: &str| obs.get(k).copied().ok_or_else(|| PyValueError::new_err(format!("missing observable {k}")));
    let o = ObservableSet {
        mz_mu: get("mz_mu")?,
        mz_s: get("mz_s")?,
        c_mus: get("c_mus")?,
        c_ss: get("c_ss")?,
        c_qss: get("c_qss")?,
        x_mus: get("x_mus")?,
        x_ss: get("x_ss")?,
        x_mixed: get("x_mixed")?,
        x_quad: get("x_quad")?,
    };
    Ok(negativity_from_observables(&o, beta, h).map_err(err)?.into())
}

#[pymodule]
#[pyo3(name = "trimer")]
fn trimer_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(report, m)?)?;
    m.add_function(wrap_pyfunction!(ground_state, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(manifolds, m)?)?;
    m.add_function(wrap_pyfunction!(threshold_temperature, m)?)?;
    m.add_function(wrap_pyfunction!(threshold_kelvin, m)?)?;
    m.add_function(wrap_pyfunction!(max_negativity, m)?)?;
    m.add_function(wrap_pyfunction!(t_scan, m)?)?;
    m.add_function(wrap_pyfunction!(observables, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    Ok(())
}
