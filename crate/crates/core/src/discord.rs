//! Multipartite mutual information, loss of correlation under a fixed product
//! measurement, and global quantum discord as its minimum over measurements.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::measure::{apply_site, dephase, AngleSet};
use crate::optimize::{multi_start, NelderMead};
use crate::qstate::{partial_trace, shannon_entropy, von_neumann_entropy, DensityMatrix, QubitSubset};
use crate::{Error, Result};

/// Slack granted to every comparison between independently minimized values.
pub const OPTIMIZER_NOISE: f64 = 1e-6;

/// Ordered list of disjoint, nonempty qubit blocks (the parties).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Partition {
    blocks: Vec<QubitSubset>,
}

impl Partition {
    pub fn new(blocks: Vec<QubitSubset>) -> Result<Self> {
        let mut seen: Vec<usize> = blocks.iter().flat_map(|b| b.indices().iter().copied()).collect();
        seen.sort_unstable();
        if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::OverlappingBlocks(w[0]));
        }
        Ok(Self { blocks })
    }

    pub fn from_blocks(blocks: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(blocks.into_iter().map(QubitSubset::new).collect::<Result<_>>()?)
    }

    /// One block per listed qubit, in the listed order.
    pub fn singletons(qubits: &[usize]) -> Result<Self> {
        Self::new(qubits.iter().map(|&q| QubitSubset::single(q)).collect())
    }

    /// Singletons `{0}, {1}, ..., {n-1}`.
    pub fn all_singletons(n: usize) -> Self {
        Self {
            blocks: (0..n).map(QubitSubset::single).collect(),
        }
    }

    /// Contiguous blocks `[0, c_1), [c_1, c_2), ..., [c_k, n)`.
    pub fn from_cuts(n: usize, cuts: &[usize]) -> Result<Self> {
        let mut edges = Vec::with_capacity(cuts.len() + 2);
        edges.push(0);
        edges.extend_from_slice(cuts);
        edges.push(n);
        if edges.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidAudit(format!(
                "cuts {cuts:?} must be strictly increasing inside (0, {n})"
            )));
        }
        Ok(Self {
            blocks: edges.windows(2).map(|w| QubitSubset::range(w[0], w[1])).collect(),
        })
    }

    pub fn blocks(&self) -> &[QubitSubset] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_singletons(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    /// Union of all blocks, ascending.
    pub fn union(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.blocks.iter().flat_map(|b| b.indices().iter().copied()).collect();
        all.sort_unstable();
        all
    }

    fn check_correlation(&self, n_qubits: usize) -> Result<()> {
        if self.blocks.len() < 2 {
            return Err(Error::TooFewBlocks(self.blocks.len()));
        }
        self.blocks.iter().try_for_each(|b| b.check_within(n_qubits))
    }

    /// Blocks re-indexed by position inside `union`.
    fn local_blocks(&self, union: &[usize]) -> Vec<Vec<usize>> {
        self.blocks
            .iter()
            .map(|b| {
                b.indices()
                    .iter()
                    .map(|q| union.binary_search(q).expect("block qubit lies in union"))
                    .collect()
            })
            .collect()
    }
}

/// Reduced state on the partition's union plus the blocks in its local labels.
fn reduce(rho: &DensityMatrix, partition: &Partition) -> Result<(DensityMatrix, Vec<usize>, Vec<Vec<usize>>)> {
    partition.check_correlation(rho.n_qubits())?;
    let union = partition.union();
    let reduced = if union.len() == rho.n_qubits() {
        rho.clone()
    } else {
        partial_trace(rho, &QubitSubset::new(union.clone())?)?
    };
    let local = partition.local_blocks(&union);
    Ok((reduced, union, local))
}

fn block_entropy_sum(rho: &DensityMatrix, local_blocks: &[Vec<usize>]) -> Result<f64> {
    local_blocks
        .iter()
        .map(|b| von_neumann_entropy(&partial_trace(rho, &QubitSubset::new(b.clone())?)?))
        .sum()
}

/// `sum_blocks S(rho_block) - S(rho_union)` in bits.
pub fn mutual_information(rho: &DensityMatrix, partition: &Partition) -> Result<f64> {
    let (reduced, _, local) = reduce(rho, partition)?;
    Ok(block_entropy_sum(&reduced, &local)? - von_neumann_entropy(&reduced)?)
}

/// `I(rho) - I(Phi(rho))` over `partition`, where `Phi` measures every qubit of
/// the register with `angles` (one pair per register qubit).
pub fn loss_of_correlation(rho: &DensityMatrix, partition: &Partition, angles: &AngleSet) -> Result<f64> {
    if angles.len() != rho.n_qubits() {
        return Err(Error::AngleCountMismatch {
            expected: rho.n_qubits(),
            found: angles.len(),
        });
    }
    let (reduced, union, local) = reduce(rho, partition)?;
    let measured = dephase(&reduced, &angles.restrict(&union)?)?;
    let before = block_entropy_sum(&reduced, &local)? - von_neumann_entropy(&reduced)?;
    let after = block_entropy_sum(&measured, &local)? - von_neumann_entropy(&measured)?;
    Ok(before - after)
}

/// Fixed-state evaluator of the loss of correlation, used inside minimization.
///
/// The measured state is diagonal in the rotated product basis, so its block
/// entropies are Shannon entropies of marginals of `p = diag(R^dagger rho R)`.
/// `p` is assembled from the eigenvectors of `rho`, which is cheap for the
/// low-rank states that dominate the workload.
pub(crate) struct LossEvaluator {
    n: usize,
    spectrum: Vec<(f64, Vec<Complex64>)>,
    block_maps: Vec<(usize, Vec<usize>)>,
    mutual_info: f64,
}

impl LossEvaluator {
    pub(crate) fn new(reduced: &DensityMatrix, local_blocks: &[Vec<usize>]) -> Result<Self> {
        let n = reduced.n_qubits();
        let mutual_info = block_entropy_sum(reduced, local_blocks)? - von_neumann_entropy(reduced)?;
        let spectrum = reduced
            .spectrum(1e-15)
            .into_iter()
            .map(|(l, v)| (l, v.iter().copied().collect()))
            .collect();
        let block_maps = local_blocks
            .iter()
            .map(|b| {
                let k = b.len();
                let map = (0..1usize << n)
                    .map(|idx| {
                        b.iter().enumerate().fold(0, |acc, (i, &q)| {
                            acc | (((idx >> (n - 1 - q)) & 1) << (k - 1 - i))
                        })
                    })
                    .collect();
                (1usize << k, map)
            })
            .collect();
        Ok(Self {
            n,
            spectrum,
            block_maps,
            mutual_info,
        })
    }

    pub(crate) fn n_qubits(&self) -> usize {
        self.n
    }

    pub(crate) fn mutual_info(&self) -> f64 {
        self.mutual_info
    }

    pub(crate) fn probabilities(&self, rotations: &[Matrix2<Complex64>]) -> Vec<f64> {
        let dim = 1usize << self.n;
        let adjoints: Vec<Matrix2<Complex64>> = rotations.iter().map(|r| r.adjoint()).collect();
        let mut p = vec![0.0; dim];
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        for (weight, vector) in &self.spectrum {
            amps.copy_from_slice(vector);
            for (site, u) in adjoints.iter().enumerate() {
                apply_site(&mut amps, site, self.n, u);
            }
            for (pk, a) in p.iter_mut().zip(&amps) {
                *pk += weight * a.norm_sqr();
            }
        }
        p
    }

    /// Classical multi-information of the outcome distribution.
    pub(crate) fn classical_mutual_info(&self, p: &[f64]) -> f64 {
        let marginal_entropy: f64 = self
            .block_maps
            .iter()
            .map(|(dim, map)| {
                let mut marginal = vec![0.0; *dim];
                for (pk, &m) in p.iter().zip(map) {
                    marginal[m] += pk;
                }
                shannon_entropy(&marginal)
            })
            .sum();
        marginal_entropy - shannon_entropy(p)
    }

    pub(crate) fn loss(&self, angles: &AngleSet) -> f64 {
        let p = self.probabilities(&angles.rotations());
        self.mutual_info - self.classical_mutual_info(&p)
    }

    /// Loss at flat, unnormalized angles `[theta_0, phi_0, ...]`.
    pub(crate) fn loss_flat(&self, x: &[f64]) -> f64 {
        let rotations: Vec<_> = x
            .chunks_exact(2)
            .map(|c| crate::measure::site_rotation(c[0], c[1]))
            .collect();
        let p = self.probabilities(&rotations);
        self.mutual_info - self.classical_mutual_info(&p)
    }
}

/// Settings of the multi-start simplex minimization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct OptimizerConfig {
    /// Number of local searches.
    pub restarts: usize,
    /// Size of the stratified screening design that picks the second start.
    pub grid_seeds_per_angle: usize,
    pub max_iterations: usize,
    /// Simplex value spread at convergence, bits.
    pub f_tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 16,
            grid_seeds_per_angle: 4,
            max_iterations: 2000,
            f_tol: 1e-8,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if !(self.f_tol > 0.0 && self.f_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!("f_tol must be positive, got {}", self.f_tol)));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be at least 1".into()));
        }
        Ok(())
    }

    fn method(&self) -> NelderMead {
        NelderMead {
            max_iterations: self.max_iterations,
            f_tol: self.f_tol,
            ..NelderMead::default()
        }
    }
}

/// Minimum found by [`gqd`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GqdResult {
    /// Bits.
    pub value: f64,
    /// Measurement angles of the qubits in `qubits`, in that order.
    pub argmin: AngleSet,
    /// Register qubits the argmin refers to (the partition's union, ascending).
    pub qubits: Vec<usize>,
    pub evaluations: usize,
    pub converged: bool,
}

impl GqdResult {
    /// Argmin extended to every qubit of an `n`-qubit register (others at `theta = 0`).
    pub fn register_angles(&self, n: usize) -> AngleSet {
        let mut pairs = vec![(0.0, 0.0); n];
        for (&q, &pair) in self.qubits.iter().zip(self.argmin.pairs()) {
            pairs[q] = pair;
        }
        AngleSet::new(pairs)
    }
}

fn starting_points(n_qubits: usize, cfg: &OptimizerConfig, evaluator: &LossEvaluator, evals: &mut usize) -> Vec<Vec<f64>> {
    let dims = 2 * n_qubits;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut starts = vec![vec![0.0; dims]];
    if cfg.restarts >= 2 {
        // Latin-hypercube screening: each coordinate visits every stratum once.
        let g = cfg.grid_seeds_per_angle.max(1);
        let strata: Vec<Vec<usize>> = (0..dims)
            .map(|_| {
                let mut s: Vec<usize> = (0..g).collect();
                s.shuffle(&mut rng);
                s
            })
            .collect();
        let best = (0..g)
            .map(|i| {
                let x: Vec<f64> = (0..dims)
                    .map(|d| {
                        let span = if d % 2 == 0 { FRAC_PI_2 } else { PI };
                        (strata[d][i] as f64 + 0.5) / g as f64 * span
                    })
                    .collect();
                *evals += 1;
                let v = evaluator.loss_flat(&x);
                (x, v)
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(x, _)| x)
            .expect("at least one screening point");
        starts.push(best);
    }
    if cfg.restarts >= 3 {
        starts.push(best_pauli_start(n_qubits, evaluator, evals));
    }
    for _ in starts.len()..cfg.restarts {
        starts.push(
            (0..dims)
                .map(|d| rng.random::<f64>() * if d % 2 == 0 { FRAC_PI_2 } else { PI })
                .collect(),
        );
    }
    starts
}

/// Largest register for which every X/Y/Z product basis is screened.
const PAULI_SCREEN_MAX_QUBITS: usize = 6;

/// Best product of Pauli eigenbases other than all-Z. The loss can have narrow
/// cusps at these points (e.g. near-product marginals), which random starts miss.
/// Above `PAULI_SCREEN_MAX_QUBITS` only the uniform X and Y products are tried.
fn best_pauli_start(n_qubits: usize, evaluator: &LossEvaluator, evals: &mut usize) -> Vec<f64> {
    const BASES: [(f64, f64); 3] = [(0.0, 0.0), (FRAC_PI_4, 0.0), (FRAC_PI_4, FRAC_PI_2)];
    let point = |code: &[usize]| -> Vec<f64> { code.iter().flat_map(|&c| [BASES[c].0, BASES[c].1]).collect() };
    let codes: Vec<Vec<usize>> = if n_qubits <= PAULI_SCREEN_MAX_QUBITS {
        (1..3usize.pow(n_qubits as u32))
            .map(|mut k| {
                let mut code = vec![0; n_qubits];
                for c in code.iter_mut().rev() {
                    *c = k % 3;
                    k /= 3;
                }
                code
            })
            .collect()
    } else {
        vec![vec![1; n_qubits], vec![2; n_qubits]]
    };
    codes
        .iter()
        .map(|code| {
            *evals += 1;
            let x = point(code);
            let v = evaluator.loss_flat(&x);
            (x, v)
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(x, _)| x)
        .expect("at least one Pauli product")
}

pub(crate) fn minimize_loss(evaluator: &LossEvaluator, cfg: &OptimizerConfig) -> Result<(f64, AngleSet, usize, bool)> {
    cfg.validate()?;
    if evaluator.mutual_info().abs() < 1e-13 {
        // Zero total correlation: every measurement loses nothing.
        let n = evaluator.n_qubits();
        return Ok((evaluator.loss(&AngleSet::zeros(n)), AngleSet::zeros(n), 1, true));
    }
    let mut evaluations = 0;
    let starts = starting_points(evaluator.n_qubits(), cfg, evaluator, &mut evaluations);
    let runs = multi_start(&cfg.method(), |x| evaluator.loss_flat(x), &starts);
    evaluations += runs.iter().map(|r| r.evaluations).sum::<usize>();
    // min by value, ties to the lowest start index
    let best = runs
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(i.cmp(j)))
        .map(|(_, r)| r)
        .expect("at least one start");
    if !best.value.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok((best.value, AngleSet::from_flat(&best.x), evaluations, best.converged))
}

/// Global quantum discord of `rho` across `partition`, minimized over product
/// projective measurements of every qubit in the partition's union.
pub fn gqd(rho: &DensityMatrix, partition: &Partition, cfg: &OptimizerConfig) -> Result<GqdResult> {
    let (reduced, union, local) = reduce(rho, partition)?;
    let evaluator = LossEvaluator::new(&reduced, &local)?;
    let (value, argmin, evaluations, converged) = minimize_loss(&evaluator, cfg)?;
    Ok(GqdResult {
        value,
        argmin,
        qubits: union,
        evaluations,
        converged,
    })
}

/// Discard-monotonicity margins `D(A_1..A_k : A_{k+1}) - D(A_1 : A_{k+1})` for
/// `k = 2..N-1`, both minimized and at the measurement minimizing the total GQD.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    /// Party count `k` of the left group per entry.
    pub k: Vec<usize>,
    pub margins: Vec<f64>,
    pub fixed_phi_margins: Vec<f64>,
    pub tolerance: f64,
    pub condition_holds: bool,
    pub fixed_phi_condition_holds: bool,
}

pub fn monotonicity_condition_audit(
    rho: &DensityMatrix,
    order: &Partition,
    cfg: &OptimizerConfig,
) -> Result<MonotonicityReport> {
    if !order.is_singletons() || order.len() < 3 {
        return Err(Error::InvalidAudit(
            "monotonicity audit needs at least 3 singleton parties".into(),
        ));
    }
    let parties: Vec<usize> = order.blocks().iter().map(|b| b.indices()[0]).collect();
    let total = gqd(rho, order, cfg)?;
    let phi = total.register_angles(rho.n_qubits());
    let mut report = MonotonicityReport {
        k: Vec::new(),
        margins: Vec::new(),
        fixed_phi_margins: Vec::new(),
        tolerance: OPTIMIZER_NOISE,
        condition_holds: true,
        fixed_phi_condition_holds: true,
    };
    for k in 2..parties.len() {
        let grouped = Partition::from_blocks(vec![parties[..k].to_vec(), vec![parties[k]]])?;
        let discarded = Partition::singletons(&[parties[0], parties[k]])?;
        let margin = gqd(rho, &grouped, cfg)?.value - gqd(rho, &discarded, cfg)?.value;
        let fixed = loss_of_correlation(rho, &grouped, &phi)? - loss_of_correlation(rho, &discarded, &phi)?;
        report.k.push(k);
        report.margins.push(margin);
        report.fixed_phi_margins.push(fixed);
        report.condition_holds &= margin >= -OPTIMIZER_NOISE;
        report.fixed_phi_condition_holds &= fixed >= -OPTIMIZER_NOISE;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{make_state, random_density, StateSpec};

    fn cfg() -> OptimizerConfig {
        OptimizerConfig::default()
    }

    #[test]
    fn mutual_information_examples() {
        let ghz4 = make_state(&StateSpec::ghz(4)).unwrap();
        let i = mutual_information(&ghz4, &Partition::all_singletons(4)).unwrap();
        assert!((i - 4.0).abs() < 1e-10);
        let bell = make_state(&StateSpec::ghz(2)).unwrap();
        assert!((mutual_information(&bell, &Partition::all_singletons(2)).unwrap() - 2.0).abs() < 1e-10);
        let product = DensityMatrix::maximally_mixed(3);
        assert!(mutual_information(&product, &Partition::all_singletons(3)).unwrap().abs() < 1e-10);
    }

    #[test]
    fn partition_errors() {
        assert_eq!(
            Partition::from_blocks(vec![vec![0, 1], vec![1, 2]]).unwrap_err(),
            Error::OverlappingBlocks(1)
        );
        let rho = DensityMatrix::maximally_mixed(2);
        assert_eq!(
            mutual_information(&rho, &Partition::from_blocks(vec![vec![0, 1]]).unwrap()).unwrap_err(),
            Error::TooFewBlocks(1)
        );
        assert!(Partition::from_cuts(4, &[2, 2]).is_err());
        assert!(Partition::from_cuts(4, &[4]).is_err());
        assert_eq!(Partition::from_cuts(4, &[1, 3]).unwrap().union(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn loss_of_bell_state_in_z() {
        let bell = make_state(&StateSpec::ghz(2)).unwrap();
        let d = loss_of_correlation(&bell, &Partition::all_singletons(2), &AngleSet::zeros(2)).unwrap();
        assert!((d - 1.0).abs() < 1e-10);
        assert_eq!(
            loss_of_correlation(&bell, &Partition::all_singletons(2), &AngleSet::zeros(1)).unwrap_err(),
            Error::AngleCountMismatch { expected: 2, found: 1 }
        );
    }

    #[test]
    fn classical_state_loses_nothing_in_its_basis() {
        let diag = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(
            [0.1, 0.2, 0.3, 0.05, 0.05, 0.1, 0.15, 0.05]
                .iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect(),
        ));
        let rho = DensityMatrix::new(diag).unwrap();
        let d = loss_of_correlation(&rho, &Partition::all_singletons(3), &AngleSet::zeros(3)).unwrap();
        assert!(d.abs() < 1e-12);
    }

    #[test]
    fn evaluator_matches_direct_route() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for seed in 0..10 {
            let rho = random_density(4, 1 + seed as usize % 4, seed).unwrap();
            let partition = Partition::from_blocks(vec![vec![0, 2], vec![1], vec![3]]).unwrap();
            let angles = AngleSet::new((0..4).map(|_| (rng.random::<f64>() * 3.0, rng.random::<f64>() * 3.0)).collect());
            let (reduced, _, local) = reduce(&rho, &partition).unwrap();
            let fast = LossEvaluator::new(&reduced, &local).unwrap().loss(&angles);
            let direct = loss_of_correlation(&rho, &partition, &angles).unwrap();
            assert!((fast - direct).abs() < 1e-10, "{fast} vs {direct}");
        }
    }

    #[test]
    fn gqd_examples() {
        let bell = make_state(&StateSpec::ghz(2)).unwrap();
        let r = gqd(&bell, &Partition::all_singletons(2), &cfg()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-8 && r.converged);
        let mixed = make_state(&StateSpec::werner_ghz(3, 0.0)).unwrap();
        assert!(gqd(&mixed, &Partition::all_singletons(3), &cfg()).unwrap().value.abs() < 1e-12);
    }

    #[test]
    fn bell_gqd_matches_brute_force_grid() {
        // Oracle: 20 points per angle on (theta_1, phi_1, theta_2, phi_2).
        let bell = make_state(&StateSpec::ghz(2)).unwrap();
        let partition = Partition::all_singletons(2);
        let (reduced, _, local) = reduce(&bell, &partition).unwrap();
        let evaluator = LossEvaluator::new(&reduced, &local).unwrap();
        let pts = |span: f64| (0..20).map(move |i| i as f64 * span / 20.0);
        let mut grid_min = f64::INFINITY;
        for t1 in pts(FRAC_PI_2) {
            for p1 in pts(PI) {
                for t2 in pts(FRAC_PI_2) {
                    for p2 in pts(PI) {
                        grid_min = grid_min.min(evaluator.loss(&AngleSet::new(vec![(t1, p1), (t2, p2)])));
                    }
                }
            }
        }
        assert!((grid_min - 1.0).abs() < 1e-9);
        let r = gqd(&bell, &partition, &cfg()).unwrap();
        assert!(r.value <= grid_min + 1e-9);
        // argmin reproduces the value
        let again = loss_of_correlation(&bell, &partition, &r.argmin).unwrap();
        assert!((again - r.value).abs() < cfg().f_tol);
    }

    #[test]
    fn gqd_is_deterministic_per_seed() {
        let rho = random_density(3, 2, 9).unwrap();
        let p = Partition::all_singletons(3);
        let a = gqd(&rho, &p, &OptimizerConfig::with_seed(4)).unwrap();
        let b = gqd(&rho, &p, &OptimizerConfig::with_seed(4)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn single_restart_uses_only_the_corner() {
        let rho = make_state(&StateSpec::ghz(3)).unwrap();
        let c = OptimizerConfig {
            restarts: 1,
            ..cfg()
        };
        let r = gqd(&rho, &Partition::all_singletons(3), &c).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9);
        let bad = OptimizerConfig {
            restarts: 0,
            ..cfg()
        };
        assert!(matches!(gqd(&rho, &Partition::all_singletons(3), &bad), Err(Error::InvalidConfig(_))));
        let bad = OptimizerConfig { f_tol: 0.0, ..cfg() };
        assert!(matches!(bad.validate(), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn narrow_minimum_in_the_x_basis_is_found() {
        // paramagnetic ring pair: the X-basis minimum is a cusp that random starts miss
        let spec = crate::ising::IsingSweepSpec {
            l: 3,
            ..Default::default()
        };
        let rho = spec.state(2.5).unwrap();
        let pair = Partition::singletons(&[0, 1]).unwrap();
        let x = AngleSet::new(vec![(FRAC_PI_4, 0.0); 3]);
        let z = AngleSet::zeros(3);
        let at_x = loss_of_correlation(&rho, &pair, &x).unwrap();
        assert!(at_x < loss_of_correlation(&rho, &pair, &z).unwrap() - 1e-3);
        let r = gqd(&rho, &pair, &cfg()).unwrap();
        assert!(r.value <= at_x + 1e-12, "{} > {at_x}", r.value);
    }

    #[test]
    fn monotonicity_on_product_and_ghz() {
        let product = DensityMatrix::maximally_mixed(4);
        let r = monotonicity_condition_audit(&product, &Partition::all_singletons(4), &cfg()).unwrap();
        assert!(r.condition_holds);
        assert!(r.margins.iter().all(|m| m.abs() < 1e-12));
        let ghz = make_state(&StateSpec::ghz(4)).unwrap();
        let r = monotonicity_condition_audit(&ghz, &Partition::all_singletons(4), &cfg()).unwrap();
        assert!(r.condition_holds, "{r:?}");
        assert_eq!(r.k, vec![2, 3]);
        assert!(monotonicity_condition_audit(&ghz, &Partition::all_singletons(2), &cfg()).is_err());
    }
}
