//! Python bindings: registry lookups, machine fidelities, SDP curves and the optical
//! simulations, returning plain floats, lists and dicts.

use pyo3::exceptions::{PyMemoryError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use clonekit::cloners::{ClonerFamily, ClonerSpec, HeisenbergFamily};
use clonekit::objectives::{lookup, registry as all_formulas, Params};
use clonekit::optics::{pc_beamsplitter_cloner, pc_bs_optimal_r, pdc_clone, PcBsScheme, PdcGeometry, PdcParams};
use clonekit::sdp::{asym_tradeoff as sdp_tradeoff, SdpOptions};
use clonekit::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::NotConverged { .. } => PyRuntimeError::new_err(e.to_string()),
        Error::SizeCap { .. } => PyMemoryError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Evaluate the registry entry `id` with keyword-style parameters.
#[pyfunction]
#[pyo3(signature = (id, params=None))]
fn evaluate(id: &str, params: Option<std::collections::BTreeMap<String, f64>>) -> PyResult<f64> {
    let formula = lookup(id).map_err(py_err)?;
    formula.evaluate(&Params(params.unwrap_or_default())).map_err(py_err)
}

/// All registry entries as dicts with `id`, `kind`, `params`, `citation` and `conjectured`.
#[pyfunction]
fn registry(py: Python<'_>) -> PyResult<Vec<Bound<'_, PyDict>>> {
    all_formulas()
        .into_iter()
        .map(|f| {
            let d = PyDict::new_bound(py);
            d.set_item("id", f.id)?;
            d.set_item("kind", format!("{:?}", f.kind).to_lowercase())?;
            d.set_item("params", f.params.iter().map(|p| p.name).collect::<Vec<_>>())?;
            d.set_item("citation", f.source)?;
            d.set_item("conjectured", f.conjectured)?;
            Ok(d)
        })
        .collect()
}

/// Fidelities read off the explicitly constructed machine.
#[pyfunction]
#[pyo3(signature = (family, d=2, n=1, m=2, asymmetry=Vec::new()))]
fn machine_fidelities(family: &str, d: usize, n: usize, m: usize, asymmetry: Vec<f64>) -> PyResult<Vec<f64>> {
    let fam = ClonerFamily::parse(family).map_err(py_err)?;
    ClonerSpec::new(fam, d, n, m, asymmetry).machine_fidelities().map_err(py_err)
}

/// SDP trade-off curve; one dict per weight.
#[pyfunction]
#[pyo3(signature = (family, d, grid, tol=1e-7, seed=7))]
fn asym_tradeoff<'py>(py: Python<'py>, family: &str, d: usize, grid: Vec<f64>, tol: f64, seed: u64) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let fam = HeisenbergFamily::parse(family).map_err(py_err)?;
    let opts = SdpOptions { tol, seed, ..SdpOptions::default() };
    let points = py.allow_threads(|| sdp_tradeoff(fam, d, &grid, &opts)).map_err(py_err)?;
    points
        .iter()
        .map(|p| {
            let d = PyDict::new_bound(py);
            d.set_item("p", p.p)?;
            d.set_item("fa", p.fa)?;
            d.set_item("fb", p.fb)?;
            d.set_item("value", p.value)?;
            d.set_item("fb_closed_form", p.fb_closed_form)?;
            d.set_item("certified", p.certified)?;
            Ok(d)
        })
        .collect()
}

/// Down-conversion `N → M` cloner: fidelity, branch probability, truncation deficit.
#[pyfunction]
#[pyo3(signature = (n=1, m=2, d=2, lam=0.1))]
fn simulate_pdc(py: Python<'_>, n: usize, m: usize, d: usize, lam: f64) -> PyResult<Bound<'_, PyDict>> {
    let geometry = if d == 2 { PdcGeometry::QubitSinglet } else { PdcGeometry::QuditTimeBin(d) };
    let params = PdcParams::new(lam, geometry).map_err(py_err)?;
    let r = pdc_clone(&params, n, m).map_err(py_err)?;
    let out = PyDict::new_bound(py);
    out.set_item("fidelity", r.fidelity)?;
    out.set_item("probability", r.branch.probability)?;
    out.set_item("truncation_deficit", r.branch.deficit)?;
    out.set_item("registry", r.registry)?;
    Ok(out)
}

/// Phase-covariant beam-splitter cloner at reflectance `r2`.
#[pyfunction]
#[pyo3(signature = (r2=None, equal_reflectance=false))]
fn simulate_pc_bs(py: Python<'_>, r2: Option<f64>, equal_reflectance: bool) -> PyResult<Bound<'_, PyDict>> {
    let r = match r2 {
        Some(x) if (0.0..=1.0).contains(&x) => x.sqrt(),
        Some(x) => return Err(PyValueError::new_err(format!("r2 = {x} outside [0, 1]"))),
        None => pc_bs_optimal_r(),
    };
    let scheme = if equal_reflectance { PcBsScheme::EqualReflectance { r } } else { PcBsScheme::PolarizationDependent { r_v: r } };
    let rep = pc_beamsplitter_cloner(scheme).map_err(py_err)?;
    let out = PyDict::new_bound(py);
    out.set_item("fidelity", rep.fidelity)?;
    out.set_item("probability", rep.probability)?;
    out.set_item("formula", rep.formula)?;
    Ok(out)
}

#[pymodule]
fn pyclonekit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(registry, m)?)?;
    m.add_function(wrap_pyfunction!(machine_fidelities, m)?)?;
    m.add_function(wrap_pyfunction!(asym_tradeoff, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_pdc, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_pc_bs, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
