//! Python bindings: enough surface for notebook exploration and
//! cross-checking against an independent implementation, not a full mirror
//! of the CLI. Everything returns plain Python values.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use regulus::engine::{CongruenceFamily, FamilyCheck, FamilyConstruction, Provenance};
use regulus::etaq::EtaQuotient;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn construction(reg_k: u64, m: u64) -> PyResult<FamilyConstruction> {
    match reg_k {
        4 => FamilyConstruction::b4(m).map_err(err),
        6 => FamilyConstruction::b6(m).map_err(err),
        _ => Err(PyValueError::new_err("reg_k must be 4 or 6")),
    }
}

/// Exact k-regular partition count by dynamic programming. Small n only.
#[pyfunction]
fn bk_exact(k: u64, n: u64) -> PyResult<u64> {
    if k < 2 || n > 60 {
        return Err(PyValueError::new_err("need k >= 2 and n <= 60"));
    }
    Ok(regulus::fpseries::bk_exact(k, n))
}

/// First `limit` coefficients of sum b_k(n) q^n reduced mod `modulus`.
#[pyfunction]
fn bk_series(k: u64, modulus: u64, limit: usize) -> PyResult<Vec<u64>> {
    let series = regulus::fpseries::regular_partition_series(k, modulus, limit).map_err(err)?;
    Ok(series.to_u64_vec())
}

/// Sturm bound for weight and Gamma_0 level.
#[pyfunction]
fn sturm_bound(weight: u64, level: u64) -> u64 {
    regulus::etaq::sturm_bound(weight, level)
}

/// Kronecker symbol (a|n), fully extended.
#[pyfunction]
fn kronecker(a: i64, n: i64) -> i64 {
    regulus::etaq::kronecker(a, n)
}

/// The smallest-offset arithmetic progression certified by T(l) on the
/// b_k construction mod m, as a dict with keys A, B, modulus, reg_k.
#[pyfunction]
fn specialize_minimal<'py>(
    py: Python<'py>,
    reg_k: u64,
    m: u64,
    l: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let fc = construction(reg_k, m)?;
    let fam = regulus::engine::specialize_minimal(&fc, l).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("reg_k", fam.reg_k)?;
    out.set_item("modulus", fam.modulus)?;
    out.set_item("A", fam.a)?;
    out.set_item("B", fam.b)?;
    Ok(out)
}

/// Gordon-Hughes admissibility of an eta quotient, given as
/// "delta:exp,delta:exp,..." at a level. Returns a dict with "admissible"
/// plus either the space data or the rejection reason.
#[pyfunction]
fn gordon_hughes<'py>(py: Python<'py>, quotient: &str, level: u64) -> PyResult<Bound<'py, PyDict>> {
    let eq: EtaQuotient = quotient.parse().map_err(err)?;
    let out = PyDict::new(py);
    match regulus::etaq::gordon_hughes(&eq, level) {
        Ok(space) => {
            out.set_item("admissible", true)?;
            out.set_item("weight", space.weight)?;
            out.set_item("level", space.level)?;
            out.set_item("character_disc", space.character_disc)?;
            out.set_item(
                "sturm_bound",
                regulus::etaq::sturm_bound(space.weight, space.level),
            )?;
        }
        Err(reason) => {
            out.set_item("admissible", false)?;
            out.set_item("reason", reason.to_string())?;
        }
    }
    Ok(out)
}

/// Check b_k(A n + B) == 0 (mod modulus) for 0 <= n <= n_max straight off
/// the series. Returns None when the family holds, else a dict describing
/// the first counterexample.
#[pyfunction]
fn verify_family<'py>(
    py: Python<'py>,
    reg_k: u64,
    modulus: u64,
    a: u64,
    b: u64,
    n_max: u64,
) -> PyResult<Option<Bound<'py, PyDict>>> {
    let fam = CongruenceFamily {
        reg_k,
        modulus,
        a,
        b,
        provenance: Provenance::PaperExample,
    };
    match regulus::engine::verify_family(&fam, n_max).map_err(err)? {
        FamilyCheck::Holds { .. } => Ok(None),
        FamilyCheck::Fails { n, index, value } => {
            let out = PyDict::new(py);
            out.set_item("n", n)?;
            out.set_item("index", index)?;
            out.set_item("value", value)?;
            Ok(Some(out))
        }
    }
}

#[pymodule]
fn regulus_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(bk_exact, m)?)?;
    m.add_function(wrap_pyfunction!(bk_series, m)?)?;
    m.add_function(wrap_pyfunction!(sturm_bound, m)?)?;
    m.add_function(wrap_pyfunction!(kronecker, m)?)?;
    m.add_function(wrap_pyfunction!(specialize_minimal, m)?)?;
    m.add_function(wrap_pyfunction!(gordon_hughes, m)?)?;
    m.add_function(wrap_pyfunction!(verify_family, m)?)?;
    Ok(())
}
