//! Python bindings: catalog access, required pairs, representations, Wedderburn
//! decompositions and verification.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ratrep_core::catalog::{entries_for, ingest as core_ingest, instantiate, GroupInstance};
use ratrep_core::pairs::required_pairs;
use ratrep_core::rep::{all_rational_irreps, export_text};
use ratrep_core::verify::verify_group;
use ratrep_core::wedderburn::decompose;

fn err(e: ratrep_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn group(name: &str, p: u32) -> PyResult<GroupInstance> {
    instantiate(name, p).map_err(err)
}

/// Names of the catalog entries instantiable at `p`.
#[pyfunction]
fn catalog(p: u32) -> Vec<String> {
    entries_for(p).iter().map(|e| e.name.to_string()).collect()
}

/// `(family index, order, |Z|, |G'|, number of cyclic subgroup classes)`.
#[pyfunction]
fn invariants(name: &str, p: u32) -> PyResult<(u8, usize, usize, usize, usize)> {
    let inst = group(name, p)?;
    let g = &inst.group;
    Ok((
        inst.family.index(),
        g.order(),
        g.center().order(),
        g.derived_subgroup().order(),
        g.cyclic_subgroup_classes().count(),
    ))
}

/// One `(chi(1), d, Omega key)` per Galois orbit of irreducible characters.
#[pyfunction]
fn pairs(name: &str, p: u32) -> PyResult<Vec<(u64, u64, Vec<i64>)>> {
    let inst = group(name, p)?;
    let ps = required_pairs(&inst).map_err(err)?;
    Ok(ps.pairs.into_iter().map(|pr| (pr.degree, pr.d, pr.key)).collect())
}

/// Components `(n, d, multiplicity)` of `QG = sum M_n(Q(zeta_d))`; `method` is
/// `"formula"` or `"oracle"`.
#[pyfunction]
#[pyo3(signature = (name, p, method = "formula"))]
fn wedderburn(name: &str, p: u32, method: &str) -> PyResult<Vec<(u64, u64, u64)>> {
    let inst = group(name, p)?;
    let ps = required_pairs(&inst).map_err(err)?;
    let report = decompose(&inst, &ps.pairs).map_err(err)?;
    let dec = match method {
        "formula" => report
            .formula
            .ok_or_else(|| PyValueError::new_err(report.formula_note.unwrap_or_default()))?,
        "oracle" => report.oracle,
        other => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    };
    Ok(dec.components().map(|(c, m)| (c.n, c.d, m)).collect())
}

/// Degrees of the verified irreducible rational representations.
#[pyfunction]
fn rep_degrees(name: &str, p: u32) -> PyResult<Vec<usize>> {
    let inst = group(name, p)?;
    let ps = required_pairs(&inst).map_err(err)?;
    let reps = all_rational_irreps(&inst.group, &ps.pairs).map_err(err)?;
    Ok(reps.iter().map(|r| r.degree).collect())
}

/// Export text of the representation of one orbit.
#[pyfunction]
fn export_rep(name: &str, p: u32, orbit: usize) -> PyResult<String> {
    let inst = group(name, p)?;
    let ps = required_pairs(&inst).map_err(err)?;
    let pair = ps
        .pairs
        .get(orbit)
        .ok_or_else(|| PyValueError::new_err(format!("orbit {orbit} out of range")))?;
    let rep = ratrep_core::rep::build_rep(&inst.group, pair).map_err(err)?;
    Ok(export_text(&inst.name, orbit, &rep))
}

/// Check name to `"pass"`, `"fail: ..."` or `"n/a: ..."`.
#[pyfunction]
fn verify(name: &str, p: u32) -> PyResult<BTreeMap<String, String>> {
    let inst = group(name, p)?;
    let report = verify_group(&inst, false);
    Ok(report.checks.iter().map(|(n, s)| (n.to_string(), s.to_string())).collect())
}

/// Validates a presentation text; returns `(name, family index, order)`.
#[pyfunction]
fn ingest(text: &str) -> PyResult<(String, u8, usize)> {
    let inst = core_ingest(text).map_err(err)?;
    Ok((inst.name.clone(), inst.family.index(), inst.group.order()))
}

#[pymodule]
fn ratrep(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(invariants, m)?)?;
    m.add_function(wrap_pyfunction!(pairs, m)?)?;
    m.add_function(wrap_pyfunction!(wedderburn, m)?)?;
    m.add_function(wrap_pyfunction!(rep_degrees, m)?)?;
    m.add_function(wrap_pyfunction!(export_rep, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(ingest, m)?)?;
    Ok(())
}
