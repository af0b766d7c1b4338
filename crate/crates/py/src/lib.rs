//! Python bindings: states, GQD minimization, monogamy audits and sweeps.

use gqdlab as gq;
use gq::monogamy::{residual_report, ConditionLevel};
use gq::{AngleSet, Complex64, Partition};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: gq::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn partition(blocks: Option<Vec<Vec<usize>>>, n: usize) -> PyResult<Partition> {
    match blocks {
        Some(b) => Partition::from_blocks(b).map_err(err),
        None => Ok(Partition::all_singletons(n)),
    }
}

fn config(restarts: usize, seed: u64) -> PyResult<gq::OptimizerConfig> {
    let cfg = gq::OptimizerConfig {
        restarts,
        ..gq::OptimizerConfig::with_seed(seed)
    };
    cfg.validate().map_err(err)?;
    Ok(cfg)
}

/// Multi-qubit density matrix; qubit 0 is the leftmost tensor factor.
#[pyclass(name = "DensityMatrix", frozen)]
struct PyDensityMatrix {
    inner: gq::DensityMatrix,
}

#[pymethods]
impl PyDensityMatrix {
    /// Validates a square, Hermitian, unit-trace, positive matrix given as rows.
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(PyValueError::new_err("matrix must be square"));
        }
        let m = nalgebra::DMatrix::from_fn(dim, dim, |r, c| rows[r][c]);
        Ok(Self {
            inner: gq::DensityMatrix::new(m).map_err(err)?,
        })
    }

    /// State of a named family: ghz, w, werner-ghz, mixed-w, random.
    #[staticmethod]
    #[pyo3(signature = (family, n, mu=1.0, rank=1, seed=0))]
    fn family(family: &str, n: usize, mu: f64, rank: usize, seed: u64) -> PyResult<Self> {
        let spec = gq::StateSpec {
            family: family.parse().map_err(err)?,
            n_qubits: n,
            mu,
            rank,
            seed,
        };
        Ok(Self {
            inner: gq::make_state(&spec).map_err(err)?,
        })
    }

    /// Ground (`t == 0`) or Gibbs state of the periodic transverse-field Ising ring.
    #[staticmethod]
    #[pyo3(signature = (l, b, j=1.0, t=0.0))]
    fn ising(l: usize, b: f64, j: f64, t: f64) -> PyResult<Self> {
        let h = gq::build_hamiltonian(&gq::HamiltonianSpec::new(l, j, b)).map_err(err)?;
        Ok(Self {
            inner: gq::ising::thermal_state(&h, t).map_err(err)?,
        })
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.inner.n_qubits()
    }

    fn trace(&self) -> f64 {
        self.inner.trace()
    }

    fn purity(&self) -> f64 {
        self.inner.purity()
    }

    fn eigenvalues(&self) -> Vec<f64> {
        self.inner.eigenvalues()
    }

    /// Von Neumann entropy in bits.
    fn entropy(&self) -> PyResult<f64> {
        gq::von_neumann_entropy(&self.inner).map_err(err)
    }

    fn partial_trace(&self, keep: Vec<usize>) -> PyResult<Self> {
        let subset = gq::QubitSubset::new(keep).map_err(err)?;
        Ok(Self {
            inner: gq::partial_trace(&self.inner, &subset).map_err(err)?,
        })
    }

    fn to_list(&self) -> Vec<Vec<Complex64>> {
        let m = self.inner.matrix();
        (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect()
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix(n_qubits={}, purity={:.6})", self.inner.n_qubits(), self.inner.purity())
    }
}

#[pyclass(name = "GqdResult", frozen, get_all)]
struct PyGqdResult {
    value: f64,
    /// `(theta, phi)` per measured qubit.
    argmin: Vec<(f64, f64)>,
    qubits: Vec<usize>,
    evaluations: usize,
    converged: bool,
}

#[pymethods]
impl PyGqdResult {
    fn __repr__(&self) -> String {
        format!("GqdResult(value={:.10}, converged={})", self.value, self.converged)
    }
}

#[pyclass(name = "AuditReport", frozen, get_all)]
struct PyAuditReport {
    audit: String,
    lhs: f64,
    rhs: f64,
    margin: f64,
    tolerance: f64,
    holds: bool,
    conditions_hold: bool,
    fixed_phi_conditions_hold: bool,
    /// `(label, value)` of every minimized term.
    components: Vec<(String, f64)>,
    json: String,
}

#[pymethods]
impl PyAuditReport {
    fn __repr__(&self) -> String {
        format!("AuditReport({}, margin={:.10}, holds={})", self.audit, self.margin, self.holds)
    }
}

impl From<gq::AuditReport> for PyAuditReport {
    fn from(r: gq::AuditReport) -> Self {
        Self {
            json: serde_json::to_string(&r).expect("reports serialize"),
            conditions_hold: r.conditions_hold(ConditionLevel::Minimized),
            fixed_phi_conditions_hold: r.conditions_hold(ConditionLevel::FixedPhi),
            components: r.components.iter().map(|t| (t.label.clone(), t.value)).collect(),
            audit: r.audit,
            lhs: r.lhs,
            rhs: r.rhs,
            margin: r.margin,
            tolerance: r.tolerance,
            holds: r.holds,
        }
    }
}

#[pyclass(name = "SweepRecord", frozen, get_all)]
struct PySweepRecord {
    param: f64,
    gqd_total: f64,
    nn_sum: f64,
    residual: f64,
    theta_bar: Option<f64>,
    converged: bool,
    nn_terms: Vec<f64>,
    error: Option<String>,
}

impl From<gq::SweepRecord> for PySweepRecord {
    fn from(r: gq::SweepRecord) -> Self {
        Self {
            param: r.param,
            gqd_total: r.gqd_total,
            nn_sum: r.nn_sum,
            residual: r.residual,
            theta_bar: r.theta_bar,
            converged: r.converged,
            nn_terms: r.nn_terms,
            error: r.error,
        }
    }
}

/// Total mutual information across `blocks` (all qubits separately by default).
#[pyfunction]
#[pyo3(signature = (rho, blocks=None))]
fn mutual_information(rho: &PyDensityMatrix, blocks: Option<Vec<Vec<usize>>>) -> PyResult<f64> {
    gq::mutual_information(&rho.inner, &partition(blocks, rho.inner.n_qubits())?).map_err(err)
}

/// Loss of correlation at fixed angles, one `(theta, phi)` per register qubit.
#[pyfunction]
#[pyo3(signature = (rho, angles, blocks=None))]
fn loss_of_correlation(rho: &PyDensityMatrix, angles: Vec<(f64, f64)>, blocks: Option<Vec<Vec<usize>>>) -> PyResult<f64> {
    let p = partition(blocks, rho.inner.n_qubits())?;
    gq::loss_of_correlation(&rho.inner, &p, &AngleSet::new(angles)).map_err(err)
}

/// Global quantum discord minimized over product projective measurements.
#[pyfunction]
#[pyo3(signature = (rho, blocks=None, restarts=16, seed=0))]
fn gqd(py: Python<'_>, rho: &PyDensityMatrix, blocks: Option<Vec<Vec<usize>>>, restarts: usize, seed: u64) -> PyResult<PyGqdResult> {
    let p = partition(blocks, rho.inner.n_qubits())?;
    let cfg = config(restarts, seed)?;
    let r = py.detach(|| gq::gqd(&rho.inner, &p, &cfg)).map_err(err)?;
    Ok(PyGqdResult {
        value: r.value,
        argmin: r.argmin.pairs().to_vec(),
        qubits: r.qubits,
        evaluations: r.evaluations,
        converged: r.converged,
    })
}

#[pyfunction]
#[pyo3(signature = (rho, seed=0))]
fn standard_deficit(py: Python<'_>, rho: &PyDensityMatrix, seed: u64) -> PyResult<PyAuditReport> {
    let cfg = config(16, seed)?;
    Ok(py.detach(|| gq::standard_deficit(&rho.inner, &cfg)).map_err(err)?.into())
}

#[pyfunction]
#[pyo3(signature = (rho, cuts, seed=0))]
fn general_deficit(py: Python<'_>, rho: &PyDensityMatrix, cuts: Vec<usize>, seed: u64) -> PyResult<PyAuditReport> {
    let cfg = config(16, seed)?;
    let spec = gq::AuditSpec::with_cuts(cuts);
    Ok(py.detach(|| gq::general_deficit(&rho.inner, &spec, &cfg)).map_err(err)?.into())
}

#[pyfunction]
#[pyo3(signature = (rho, k, seed=0))]
fn second_class_audit(py: Python<'_>, rho: &PyDensityMatrix, k: usize, seed: u64) -> PyResult<PyAuditReport> {
    let cfg = config(16, seed)?;
    let spec = gq::AuditSpec::with_window(k);
    Ok(py.detach(|| gq::second_class_audit(&rho.inner, &spec, &cfg)).map_err(err)?.into())
}

#[pyfunction]
#[pyo3(signature = (rho, seed=0))]
fn residual_gqd(py: Python<'_>, rho: &PyDensityMatrix, seed: u64) -> PyResult<PyAuditReport> {
    let cfg = config(16, seed)?;
    Ok(py.detach(|| residual_report(&rho.inner, &cfg)).map_err(err)?.into())
}

#[pyfunction]
#[pyo3(signature = (rho, blocks, n_pow, seed=0))]
fn power_inequality(py: Python<'_>, rho: &PyDensityMatrix, blocks: Vec<Vec<usize>>, n_pow: u32, seed: u64) -> PyResult<PyAuditReport> {
    let cfg = config(16, seed)?;
    let p = Partition::from_blocks(blocks).map_err(err)?;
    Ok(py.detach(|| gq::power_inequality_check(&rho.inner, &p, n_pow, &cfg)).map_err(err)?.into())
}

/// `|lhs - rhs|` of the telescoping identity, or of the block identity when
/// `blocks` is given, at fixed angles.
#[pyfunction]
#[pyo3(signature = (rho, angles, blocks=None))]
fn identity_residual(rho: &PyDensityMatrix, angles: Vec<(f64, f64)>, blocks: Option<Vec<Vec<usize>>>) -> PyResult<f64> {
    let mode = match blocks {
        Some(b) => gq::IdentityMode::Block(Partition::from_blocks(b).map_err(err)?),
        None => gq::IdentityMode::Telescoping,
    };
    gq::identity_audit(&rho.inner, &AngleSet::new(angles), &mode).map_err(err)
}

#[pyfunction]
fn mixed_w_residual_closed_form(n: usize, mu: f64) -> f64 {
    gq::mixed_w_residual_closed_form(n, mu)
}

/// Field sweep of the Ising ring at fixed `t_over_j` (0 for ground states).
#[pyfunction]
#[pyo3(signature = (l, b_over_j, t_over_j=0.0, j=1.0, all_bonds=false, seed=0))]
fn ising_sweep(py: Python<'_>, l: usize, b_over_j: Vec<f64>, t_over_j: f64, j: f64, all_bonds: bool, seed: u64) -> PyResult<Vec<PySweepRecord>> {
    let spec = gq::IsingSweepSpec {
        l,
        j,
        b_over_j,
        t_over_j,
        all_bonds,
        optimizer: config(16, seed)?,
        ..gq::IsingSweepSpec::default()
    };
    let records = py.detach(|| gq::sweep::ising_sweep(&spec)).map_err(err)?;
    Ok(records.into_iter().map(Into::into).collect())
}

/// Mixing-parameter sweep of `werner-ghz` or `mixed-w` states.
#[pyfunction]
#[pyo3(signature = (family, n, mus, seed=0))]
fn mu_sweep(py: Python<'_>, family: &str, n: usize, mus: Vec<f64>, seed: u64) -> PyResult<Vec<PySweepRecord>> {
    let family: gq::Family = family.parse().map_err(err)?;
    let cfg = config(16, seed)?;
    let records = py.detach(|| gq::sweep::mu_sweep(family, n, &mus, &cfg)).map_err(err)?;
    Ok(records.into_iter().map(Into::into).collect())
}

#[pymodule]
#[pyo3(name = "gqdlab")]
fn gqdlab_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDensityMatrix>()?;
    m.add_class::<PyGqdResult>()?;
    m.add_class::<PyAuditReport>()?;
    m.add_class::<PySweepRecord>()?;
    m.add_function(wrap_pyfunction!(mutual_information, m)?)?;
    m.add_function(wrap_pyfunction!(loss_of_correlation, m)?)?;
    m.add_function(wrap_pyfunction!(gqd, m)?)?;
    m.add_function(wrap_pyfunction!(standard_deficit, m)?)?;
    m.add_function(wrap_pyfunction!(general_deficit, m)?)?;
    m.add_function(wrap_pyfunction!(second_class_audit, m)?)?;
    m.add_function(wrap_pyfunction!(residual_gqd, m)?)?;
    m.add_function(wrap_pyfunction!(power_inequality, m)?)?;
    m.add_function(wrap_pyfunction!(identity_residual, m)?)?;
    m.add_function(wrap_pyfunction!(mixed_w_residual_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(ising_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(mu_sweep, m)?)?;
    Ok(())
}
