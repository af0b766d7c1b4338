//! Periodic transverse-field Ising ring `H = -J sum s^z_i s^z_{i+1} + B sum s^x_i`:
//! Hamiltonian, ground and Gibbs states, the closed GQD expression at a fixed
//! measurement, and the symmetric one-angle scan.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::discord::{LossEvaluator, OptimizerConfig};
use crate::measure::{product_rotation, site_rotation, AngleSet};
use crate::qstate::{partial_trace, shannon_entropy, von_neumann_entropy, DensityMatrix, QubitSubset};
use crate::states::MAX_QUBITS;
use crate::{Error, Result};

/// Ground states closer to degeneracy than this are rejected.
pub const DEGENERACY_GAP: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianSpec {
    /// Ring length.
    pub l: usize,
    pub j: f64,
    pub b: f64,
}

impl HamiltonianSpec {
    pub fn new(l: usize, j: f64, b: f64) -> Self {
        Self { l, j, b }
    }

    pub fn validate(&self) -> Result<()> {
        if !(3..=MAX_QUBITS).contains(&self.l) {
            return Err(Error::InvalidHamiltonian(format!(
                "ring length L = {} outside 3..={MAX_QUBITS}",
                self.l
            )));
        }
        if !(self.j.is_finite() && self.j > 0.0) {
            return Err(Error::InvalidHamiltonian(format!("coupling J = {} must be positive", self.j)));
        }
        if !self.b.is_finite() {
            return Err(Error::InvalidHamiltonian(format!("field B = {} is not finite", self.b)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    pub spec: HamiltonianSpec,
    /// Real symmetric matrix in the computational basis.
    pub matrix: DMatrix<f64>,
}

impl Hamiltonian {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    fn eigen(&self) -> (Vec<f64>, DMatrix<f64>) {
        let eig = SymmetricEigen::new(self.matrix.clone());
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = DMatrix::from_fn(self.dim(), self.dim(), |r, c| eig.eigenvectors[(r, order[c])]);
        (values, vectors)
    }

    /// Eigenvalues in ascending order.
    pub fn energies(&self) -> Vec<f64> {
        self.eigen().0
    }
}

pub fn build_hamiltonian(spec: &HamiltonianSpec) -> Result<Hamiltonian> {
    spec.validate()?;
    let l = spec.l;
    let dim = 1usize << l;
    let mut m = DMatrix::zeros(dim, dim);
    for idx in 0..dim {
        let z = |site: usize| if (idx >> (l - 1 - site)) & 1 == 0 { 1.0 } else { -1.0 };
        m[(idx, idx)] = -spec.j * (0..l).map(|i| z(i) * z((i + 1) % l)).sum::<f64>();
        for site in 0..l {
            m[(idx ^ (1 << (l - 1 - site)), idx)] += spec.b;
        }
    }
    Ok(Hamiltonian { spec: *spec, matrix: m })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub state: DensityMatrix,
    pub vector: Vec<f64>,
    pub energy: f64,
    /// `E_1 - E_0`.
    pub gap: f64,
}

/// Pure ground state for `B > 0`; the `B = 0` ring is twofold degenerate.
pub fn ground_state(h: &Hamiltonian) -> Result<GroundState> {
    if !(h.spec.b > 0.0) {
        return Err(Error::InvalidHamiltonian(format!(
            "ground state needs B > 0, got {}",
            h.spec.b
        )));
    }
    let (energies, vectors) = h.eigen();
    let gap = energies[1] - energies[0];
    if gap < DEGENERACY_GAP {
        return Err(Error::DegenerateGroundState(gap));
    }
    let vector: Vec<f64> = vectors.column(0).iter().copied().collect();
    let amps: Vec<Complex64> = vector.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    Ok(GroundState {
        state: DensityMatrix::from_pure(&amps)?,
        vector,
        energy: energies[0],
        gap,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalSpec {
    /// Temperature in the energy units of `J` (`k_B = 1`).
    pub t: f64,
}

/// `exp(-H/T) / Z`, with energies shifted by the ground energy before exponentiating.
pub fn gibbs_state(h: &Hamiltonian, thermal: &ThermalSpec) -> Result<DensityMatrix> {
    let t = thermal.t;
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::NonPositiveTemperature(t));
    }
    let (energies, vectors) = h.eigen();
    let e0 = energies[0];
    let weights: Vec<f64> = energies.iter().map(|e| (-(e - e0) / t).exp()).collect();
    let z: f64 = weights.iter().sum();
    let mut scaled = vectors.clone();
    for (mut col, w) in scaled.column_iter_mut().zip(&weights) {
        col *= w / z;
    }
    let rho = scaled * vectors.transpose();
    DensityMatrix::new(rho.map(|x| Complex64::new(x, 0.0)))
}

/// Ground state for `t == 0`, Gibbs state otherwise.
pub fn thermal_state(h: &Hamiltonian, t: f64) -> Result<DensityMatrix> {
    if t == 0.0 {
        Ok(ground_state(h)?.state)
    } else {
        gibbs_state(h, &ThermalSpec { t })
    }
}

/// GQD of every site against every other at a fixed measurement, from the
/// closed form `sum_j S(rho_j) - S(rho) - sum_j H(p_j) + H(p)`.
///
/// `p` is the diagonal of the rotated state and `p_j` the diagonal of each
/// rotated single-site marginal. This route shares no code with the
/// minimization evaluator and serves as its cross-check.
pub fn eval_gqd_formula(rho: &DensityMatrix, angles: &AngleSet) -> Result<f64> {
    let n = rho.n_qubits();
    if angles.len() != n {
        return Err(Error::AngleCountMismatch { expected: n, found: angles.len() });
    }
    let r = product_rotation(angles);
    let rotated = r.adjoint() * rho.matrix() * &r;
    let p: Vec<f64> = rotated.diagonal().iter().map(|z| z.re.max(0.0)).collect();
    let mut total = shannon_entropy(&p) - von_neumann_entropy(rho)?;
    for (site, &(theta, phi)) in angles.pairs().iter().enumerate() {
        let marginal = partial_trace(rho, &QubitSubset::single(site))?;
        let u = site_rotation(theta, phi);
        let local = u.adjoint() * marginal.matrix().fixed_view::<2, 2>(0, 0) * u;
        let pj = [local[(0, 0)].re.max(0.0), local[(1, 1)].re.max(0.0)];
        total += von_neumann_entropy(&marginal)? - shannon_entropy(&pj);
    }
    Ok(total)
}

/// Result of [`symmetric_gqd_scan`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetricScan {
    pub value: f64,
    /// Common polar angle of the minimizing measurement (`phi = 0` on all sites).
    pub theta: f64,
    pub evaluations: usize,
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Minimizes the all-sites GQD over translation-invariant measurements
/// `(theta, 0)` on every site: a uniform grid on `[0, pi/2]` followed by a
/// golden-section refinement around the best grid point.
pub fn symmetric_gqd_scan(rho: &DensityMatrix, grid_points: usize, refine_tol: f64) -> Result<SymmetricScan> {
    if grid_points < 2 {
        return Err(Error::InvalidConfig(format!("scan needs at least 2 grid points, got {grid_points}")));
    }
    if !(refine_tol.is_finite() && refine_tol > 0.0) {
        return Err(Error::InvalidConfig(format!("refine tolerance {refine_tol} must be positive")));
    }
    let n = rho.n_qubits();
    let blocks: Vec<Vec<usize>> = (0..n).map(|q| vec![q]).collect();
    let evaluator = LossEvaluator::new(rho, &blocks)?;
    let mut evaluations = 0;
    let mut f = |theta: f64| {
        evaluations += 1;
        let rotations = vec![site_rotation(theta, 0.0); n];
        let p = evaluator.probabilities(&rotations);
        evaluator.mutual_info() - evaluator.classical_mutual_info(&p)
    };

    let step = std::f64::consts::FRAC_PI_2 / (grid_points - 1) as f64;
    let values: Vec<f64> = (0..grid_points).map(|i| f(i as f64 * step)).collect();
    let (best_i, &best_v) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty grid");
    let (mut best_t, mut best_v) = (best_i as f64 * step, best_v);

    let mut a = best_i.saturating_sub(1) as f64 * step;
    let mut b = (best_i + 1).min(grid_points - 1) as f64 * step;
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > refine_tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d);
        }
    }
    for (t, v) in [(c, fc), (d, fd)] {
        if v < best_v {
            best_t = t;
            best_v = v;
        }
    }
    if !best_v.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(SymmetricScan {
        value: best_v,
        theta: best_t,
        evaluations,
    })
}

/// Field sweep of the ring at fixed `T/J`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IsingSweepSpec {
    pub l: usize,
    pub j: f64,
    pub b_over_j: Vec<f64>,
    /// `T/J`; zero selects the ground state.
    pub t_over_j: f64,
    /// Include the wrap-around bond `(L-1, 0)` in the nearest-neighbour sum.
    pub all_bonds: bool,
    pub scan_points: usize,
    pub refine_tol: f64,
    /// Also run the unrestricted minimization for `L <= 4` as a check on the
    /// symmetric scan.
    pub spot_check: bool,
    pub optimizer: OptimizerConfig,
}

impl Default for IsingSweepSpec {
    fn default() -> Self {
        Self {
            l: 5,
            j: 1.0,
            b_over_j: default_field_grid(),
            t_over_j: 0.0,
            all_bonds: false,
            scan_points: 181,
            refine_tol: 1e-10,
            spot_check: true,
            optimizer: OptimizerConfig::default(),
        }
    }
}

/// 60 evenly spaced values of `B/J` in `[0.05, 3]`.
pub fn default_field_grid() -> Vec<f64> {
    linspace(0.05, 3.0, 60)
}

pub fn linspace(start: f64, end: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count)
            .map(|i| start + (end - start) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

impl IsingSweepSpec {
    pub fn validate(&self) -> Result<()> {
        HamiltonianSpec::new(self.l, self.j, 0.0).validate()?;
        if !(self.t_over_j.is_finite() && self.t_over_j >= 0.0) {
            return Err(Error::NonPositiveTemperature(self.t_over_j));
        }
        if self.b_over_j.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidConfig("field grid contains a non-finite value".into()));
        }
        self.optimizer.validate()
    }

    /// State at field `b_over_j`.
    pub fn state(&self, b_over_j: f64) -> Result<DensityMatrix> {
        let h = build_hamiltonian(&HamiltonianSpec::new(self.l, self.j, b_over_j * self.j))?;
        thermal_state(&h, self.t_over_j * self.j)
    }

    /// Nearest-neighbour bonds entering the pairwise sum.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let mut bonds: Vec<_> = (0..self.l - 1).map(|i| (i, i + 1)).collect();
        if self.all_bonds {
            bonds.push((self.l - 1, 0));
        }
        bonds
    }
}
