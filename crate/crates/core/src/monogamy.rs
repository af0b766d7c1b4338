//! Monogamy deficits, the second-class (sliding-window) inequality, residual
//! GQD, the power inequality, and fixed-measurement identity audits.
//!
//! Parties `A_1..A_N` are register qubits `0..N-1`. Every minimized term is
//! recorded in the report so that each side of an inequality can be checked
//! independently. Violations are findings, not errors: the inequalities only
//! hold under discard-monotonicity, which is reported alongside.

use rayon::prelude::*;
use serde::Serialize;

use crate::discord::{gqd, loss_of_correlation, OptimizerConfig, Partition, OPTIMIZER_NOISE};
use crate::measure::AngleSet;
use crate::qstate::DensityMatrix;
use crate::{Error, Result};

/// Parameters shared by the inequality audits.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct AuditSpec {
    /// Party numbers `1 < m_1 < ... < m_n < N` splitting the general family.
    pub cuts: Vec<usize>,
    /// Window size `K` of the second-class inequality, `1 <= K < N`.
    pub window: usize,
    /// Exponent of the power inequality.
    pub n_pow: u32,
    /// Extra slack in bits, added to [`OPTIMIZER_NOISE`].
    pub tolerance: f64,
}

impl Default for AuditSpec {
    fn default() -> Self {
        Self {
            cuts: Vec::new(),
            window: 1,
            n_pow: 1,
            tolerance: 0.0,
        }
    }
}

impl AuditSpec {
    pub fn with_cuts(cuts: Vec<usize>) -> Self {
        Self {
            cuts,
            ..Self::default()
        }
    }

    pub fn with_window(window: usize) -> Self {
        Self {
            window,
            ..Self::default()
        }
    }

    pub fn with_power(n_pow: u32) -> Self {
        Self {
            n_pow,
            ..Self::default()
        }
    }

    fn slack(&self) -> f64 {
        self.tolerance + OPTIMIZER_NOISE
    }

    fn check_cuts(&self, n: usize) -> Result<()> {
        let mut prev = 1;
        for &m in &self.cuts {
            if m <= prev || m >= n {
                return Err(Error::InvalidAudit(format!(
                    "cuts {:?} must satisfy 1 < m_1 < ... < m_n < N = {n}",
                    self.cuts
                )));
            }
            prev = m;
        }
        Ok(())
    }

    fn check_window(&self, n: usize) -> Result<()> {
        if self.window == 0 || self.window >= n {
            return Err(Error::InvalidAudit(format!(
                "window K = {} must satisfy 1 <= K < N = {n}",
                self.window
            )));
        }
        Ok(())
    }
}

/// One minimized GQD entering an audit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Term {
    pub label: String,
    /// Blocks as register qubits.
    pub blocks: Vec<Vec<usize>>,
    pub value: f64,
    pub converged: bool,
    pub evaluations: usize,
    /// Minimizing angles on every register qubit (unmeasured qubits at zero).
    pub argmin: AngleSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionLevel {
    /// Both sides minimized independently.
    Minimized,
    /// Both sides at the measurement minimizing the total GQD.
    FixedPhi,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionFlag {
    pub name: String,
    pub level: ConditionLevel,
    pub margin: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub audit: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs - rhs`.
    pub margin: f64,
    pub tolerance: f64,
    /// `margin >= -tolerance`.
    pub holds: bool,
    pub condition_flags: Vec<ConditionFlag>,
    pub components: Vec<Term>,
}

impl AuditReport {
    fn new(audit: &str, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let margin = lhs - rhs;
        Self {
            audit: audit.to_owned(),
            lhs,
            rhs,
            margin,
            tolerance,
            holds: margin >= -tolerance,
            condition_flags: Vec::new(),
            components: Vec::new(),
        }
    }

    pub fn all_converged(&self) -> bool {
        self.components.iter().all(|t| t.converged)
    }

    pub fn conditions_hold(&self, level: ConditionLevel) -> bool {
        self.condition_flags
            .iter()
            .filter(|f| f.level == level)
            .all(|f| f.holds)
    }

    pub fn component(&self, label: &str) -> Option<&Term> {
        self.components.iter().find(|t| t.label == label)
    }
}

/// `D(A1A2:A3)`-style label for 0-based qubit blocks.
pub fn label(blocks: &[Vec<usize>]) -> String {
    let parts: Vec<String> = blocks
        .iter()
        .map(|b| b.iter().map(|q| format!("A{}", q + 1)).collect::<String>())
        .collect();
    format!("D({})", parts.join(":"))
}

fn singletons(qubits: impl IntoIterator<Item = usize>) -> Vec<Vec<usize>> {
    qubits.into_iter().map(|q| vec![q]).collect()
}

/// Minimized GQD for `blocks`; a single block carries no correlation.
fn term(rho: &DensityMatrix, blocks: Vec<Vec<usize>>, cfg: &OptimizerConfig) -> Result<Term> {
    let n = rho.n_qubits();
    if blocks.len() < 2 {
        return Ok(Term {
            label: label(&blocks),
            blocks,
            value: 0.0,
            converged: true,
            evaluations: 0,
            argmin: AngleSet::zeros(n),
        });
    }
    let partition = Partition::from_blocks(blocks.clone())?;
    let r = gqd(rho, &partition, cfg)?;
    Ok(Term {
        label: label(&blocks),
        blocks,
        value: r.value,
        converged: r.converged,
        evaluations: r.evaluations,
        argmin: r.register_angles(n),
    })
}

fn terms(rho: &DensityMatrix, list: Vec<Vec<Vec<usize>>>, cfg: &OptimizerConfig) -> Result<Vec<Term>> {
    list.into_par_iter().map(|blocks| term(rho, blocks, cfg)).collect()
}

fn fixed_loss(rho: &DensityMatrix, blocks: &[Vec<usize>], phi: &AngleSet) -> Result<f64> {
    if blocks.len() < 2 {
        return Ok(0.0);
    }
    loss_of_correlation(rho, &Partition::from_blocks(blocks.to_vec())?, phi)
}

/// Discard-monotonicity checks `D(kept) >= D(discarded)` at both levels.
fn discard_flags(
    rho: &DensityMatrix,
    pairs: Vec<(Vec<Vec<usize>>, Vec<Vec<usize>>)>,
    phi: &AngleSet,
    slack: f64,
    cfg: &OptimizerConfig,
) -> Result<Vec<ConditionFlag>> {
    let minimized: Vec<(f64, f64)> = pairs
        .par_iter()
        .map(|(kept, discarded)| Ok((term(rho, kept.clone(), cfg)?.value, term(rho, discarded.clone(), cfg)?.value)))
        .collect::<Result<_>>()?;
    let mut flags = Vec::with_capacity(2 * pairs.len());
    for ((kept, discarded), (dk, dd)) in pairs.iter().zip(minimized) {
        let name = format!("{} >= {}", label(kept), label(discarded));
        let margin = dk - dd;
        flags.push(ConditionFlag {
            name: name.clone(),
            level: ConditionLevel::Minimized,
            margin,
            holds: margin >= -slack,
        });
        let margin = fixed_loss(rho, kept, phi)? - fixed_loss(rho, discarded, phi)?;
        flags.push(ConditionFlag {
            name,
            level: ConditionLevel::FixedPhi,
            margin,
            holds: margin >= -slack,
        });
    }
    Ok(flags)
}

fn require_parties(rho: &DensityMatrix, min: usize, audit: &str) -> Result<usize> {
    let n = rho.n_qubits();
    if n < min {
        return Err(Error::InvalidAudit(format!("{audit} needs at least {min} parties, got {n}")));
    }
    Ok(n)
}

/// Standard monogamy deficit `D(A_1:..:A_N) - sum_k D(A_1:A_{k+1})`.
pub fn standard_deficit(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<AuditReport> {
    let n = require_parties(rho, 3, "standard deficit")?;
    let mut list = vec![singletons(0..n)];
    list.extend((1..n).map(|k| vec![vec![0], vec![k]]));
    let components = terms(rho, list, cfg)?;
    let lhs = components[0].value;
    let rhs = components[1..].iter().map(|t| t.value).sum();
    let mut report = AuditReport::new("standard_deficit", lhs, rhs, OPTIMIZER_NOISE);
    // D(A_1..A_k : A_{k+1}) >= D(A_1 : A_{k+1})
    let pairs = (2..n)
        .map(|k| (vec![(0..k).collect(), vec![k]], vec![vec![0], vec![k]]))
        .collect();
    report.condition_flags = discard_flags(rho, pairs, &components[0].argmin, OPTIMIZER_NOISE, cfg)?;
    report.components = components;
    Ok(report)
}

/// Groups `[A_1..A_{m_1}], [A_1, A_{m_1+1}..A_{m_2}], ..., [A_1, A_{m_n+1}..A_N]`
/// as 0-based qubit lists.
fn general_groups(n: usize, cuts: &[usize]) -> Vec<Vec<usize>> {
    let mut edges = vec![0];
    edges.extend_from_slice(cuts);
    edges.push(n);
    edges
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            if i == 0 {
                (0..w[1]).collect()
            } else {
                std::iter::once(0).chain(w[0]..w[1]).collect()
            }
        })
        .collect()
}

/// General monogamy deficit for cut points `spec.cuts`.
pub fn general_deficit(rho: &DensityMatrix, spec: &AuditSpec, cfg: &OptimizerConfig) -> Result<AuditReport> {
    let n = require_parties(rho, 2, "general deficit")?;
    spec.check_cuts(n)?;
    let groups = general_groups(n, &spec.cuts);
    let mut list = vec![singletons(0..n)];
    list.extend(groups.iter().map(|g| singletons(g.iter().copied())));
    let components = terms(rho, list, cfg)?;
    let lhs = components[0].value;
    let rhs = components[1..].iter().map(|t| t.value).sum();
    let slack = spec.slack();
    let mut report = AuditReport::new("general_deficit", lhs, rhs, slack);
    // For a target A_{k+1} in a later group starting after cut m:
    // D(A_1..A_k : A_{k+1}) >= D(A_1 A_{m+1}..A_k : A_{k+1}).
    let mut pairs = Vec::new();
    for (i, &m) in spec.cuts.iter().enumerate() {
        let end = spec.cuts.get(i + 1).copied().unwrap_or(n);
        for target in m..end {
            let kept = vec![(0..target).collect(), vec![target]];
            let discarded_left: Vec<usize> = std::iter::once(0).chain(m..target).collect();
            pairs.push((kept, vec![discarded_left, vec![target]]));
        }
    }
    report.condition_flags = discard_flags(rho, pairs, &components[0].argmin, slack, cfg)?;
    report.components = components;
    Ok(report)
}

fn second_class(
    rho: &DensityMatrix,
    window: usize,
    slack: f64,
    cfg: &OptimizerConfig,
    with_conditions: bool,
) -> Result<AuditReport> {
    let n = rho.n_qubits();
    let mut list = vec![singletons(0..n)];
    // D(A_i..A_{i+K-1} : A_{i+K}), i = 1..N-K
    list.extend((0..n - window).map(|i| vec![(i..i + window).collect(), vec![i + window]]));
    list.push(singletons(0..window));
    let components = terms(rho, list, cfg)?;
    let total = components[0].value;
    let windows: f64 = components[1..=n - window].iter().map(|t| t.value).sum();
    let rhs = components[n - window + 1].value;
    let mut report = AuditReport::new("second_class", total - windows, rhs, slack);
    if with_conditions {
        // D(A_1..A_j : A_{j+1}) >= D(A_{j-K+1}..A_j : A_{j+1}), j = K+1..N-1
        let pairs = (window + 1..n)
            .map(|j| {
                (
                    vec![(0..j).collect(), vec![j]],
                    vec![(j - window..j).collect(), vec![j]],
                )
            })
            .collect();
        report.condition_flags = discard_flags(rho, pairs, &components[0].argmin, slack, cfg)?;
    }
    report.components = components;
    Ok(report)
}

/// Second-class inequality with window `K = spec.window`:
/// `D(A_1:..:A_N) - sum_i D(A_i..A_{i+K-1} : A_{i+K}) >= D(A_1:..:A_K)`.
pub fn second_class_audit(rho: &DensityMatrix, spec: &AuditSpec, cfg: &OptimizerConfig) -> Result<AuditReport> {
    let n = require_parties(rho, 2, "second-class audit")?;
    spec.check_window(n)?;
    second_class(rho, spec.window, spec.slack(), cfg, true)
}

/// Residual GQD `D(A_1:..:A_N) - sum_K D(A_K : A_{K+1})` in register order,
/// returned with its components. Identical to the `K = 1` second-class margin.
pub fn residual_report(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<AuditReport> {
    require_parties(rho, 2, "residual GQD")?;
    let mut report = second_class(rho, 1, OPTIMIZER_NOISE, cfg, false)?;
    report.audit = "residual_gqd".into();
    Ok(report)
}

pub fn residual_gqd(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<f64> {
    Ok(residual_report(rho, cfg)?.margin)
}

/// Power inequality: `D_total^n >= sum_blocks D_block^n + D_between^n`.
///
/// Condition flags carry the lower bounds it rests on (block identity
/// inequality and its two corollaries).
pub fn power_inequality_check(
    rho: &DensityMatrix,
    blocks: &Partition,
    n_pow: u32,
    cfg: &OptimizerConfig,
) -> Result<AuditReport> {
    power_check(rho, blocks, &AuditSpec::with_power(n_pow), cfg)
}

pub(crate) fn power_check(
    rho: &DensityMatrix,
    blocks: &Partition,
    spec: &AuditSpec,
    cfg: &OptimizerConfig,
) -> Result<AuditReport> {
    if spec.n_pow == 0 {
        return Err(Error::InvalidAudit("power inequality needs n_pow >= 1".into()));
    }
    if blocks.len() < 2 {
        return Err(Error::TooFewBlocks(blocks.len()));
    }
    let union = blocks.union();
    if let Some(&q) = union.iter().find(|&&q| q >= rho.n_qubits()) {
        return Err(Error::IndexOutOfRange { index: q, n_qubits: rho.n_qubits() });
    }
    let block_lists: Vec<Vec<usize>> = blocks.blocks().iter().map(|b| b.indices().to_vec()).collect();
    let mut list = vec![singletons(union.iter().copied())];
    list.extend(block_lists.iter().map(|b| singletons(b.iter().copied())));
    list.push(block_lists.clone());
    let components = terms(rho, list, cfg)?;
    let k = block_lists.len();
    let total = components[0].value;
    let inner: Vec<f64> = components[1..=k].iter().map(|t| t.value).collect();
    let between = components[k + 1].value;
    let p = spec.n_pow as i32;
    let lhs = total.powi(p);
    let rhs = inner.iter().map(|d| d.powi(p)).sum::<f64>() + between.powi(p);
    let slack = spec.slack();
    let mut report = AuditReport::new("power_inequality", lhs, rhs, slack);
    let inner_sum: f64 = inner.iter().sum();
    for (name, margin) in [
        ("D_total >= sum D_block + D_between", total - inner_sum - between),
        ("D_total >= sum D_block", total - inner_sum),
        ("D_total >= D_between", total - between),
    ] {
        report.condition_flags.push(ConditionFlag {
            name: name.into(),
            level: ConditionLevel::Minimized,
            margin,
            holds: margin >= -slack,
        });
    }
    report.components = components;
    Ok(report)
}

/// Which fixed-measurement identity to audit.
#[derive(Debug, Clone, PartialEq)]
pub enum IdentityMode {
    /// `D_Phi(A_1:..:A_N) = sum_k D_Phi(A_1..A_k : A_{k+1})`.
    Telescoping,
    /// `D_Phi(all) = sum_blocks D_Phi(inside block) + D_Phi(block : block : ..)`.
    Block(Partition),
}

/// `|lhs - rhs|` of the chosen identity, every term under the same `angles`.
pub fn identity_audit(rho: &DensityMatrix, angles: &AngleSet, mode: &IdentityMode) -> Result<f64> {
    let n = rho.n_qubits();
    match mode {
        IdentityMode::Telescoping => {
            let lhs = fixed_loss(rho, &singletons(0..n), angles)?;
            let rhs = (1..n)
                .map(|k| fixed_loss(rho, &[(0..k).collect(), vec![k]], angles))
                .sum::<Result<f64>>()?;
            Ok((lhs - rhs).abs())
        }
        IdentityMode::Block(partition) => {
            if partition.len() < 2 {
                return Err(Error::TooFewBlocks(partition.len()));
            }
            let lhs = fixed_loss(rho, &singletons(partition.union()), angles)?;
            let blocks: Vec<Vec<usize>> = partition.blocks().iter().map(|b| b.indices().to_vec()).collect();
            let inside = blocks
                .iter()
                .map(|b| fixed_loss(rho, &singletons(b.iter().copied()), angles))
                .sum::<Result<f64>>()?;
            let between = fixed_loss(rho, &blocks, angles)?;
            Ok((lhs - inside - between).abs())
        }
    }
}
