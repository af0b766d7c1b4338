//! `gqdlab` command-line tool.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 a minimization
//! did not converge. Results go to `--out` or standard output; diagnostics
//! go to standard error.

mod config;
mod output;

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gqdlab::ising::{build_hamiltonian, thermal_state, IsingSweepSpec};
use gqdlab::monogamy::{residual_report, AuditReport, ConditionLevel};
use gqdlab::sweep::{ising_sweep, mu_sweep};
use gqdlab::{
    general_deficit, gqd, identity_audit, make_state, mutual_information, power_inequality_check,
    second_class_audit, standard_deficit, von_neumann_entropy, AngleSet, AuditSpec, DensityMatrix, Family,
    HamiltonianSpec, IdentityMode, OptimizerConfig, Partition, StateSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use config::{parse_blocks, parse_grid, Format, Options};
use output::{emit, nonfinite_warnings, sweep_csv, to_json_text};

#[derive(Parser)]
#[command(name = "gqdlab", version, about = "Global quantum discord of multi-qubit states")]
struct Cli {
    /// TOML file with option keys; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectrum, entropy and total correlation of a state
    StateInfo(Options),
    /// Minimized GQD across a partition (all qubits by default)
    Gqd(Options),
    /// Monogamy audits and identity checks
    Audit(Options),
    /// Mixing-parameter or transverse-field sweep
    Sweep(Options),
}

enum Outcome {
    Done,
    NotConverged,
}

type CliResult<T> = Result<T, String>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::NotConverged) => {
            eprintln!("gqdlab: warning: a minimization did not converge");
            ExitCode::from(2)
        }
        Err(msg) => {
            eprintln!("gqdlab: error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> CliResult<Outcome> {
    let (command, flags) = match cli.command {
        Command::StateInfo(o) => ("state-info", o),
        Command::Gqd(o) => ("gqd", o),
        Command::Audit(o) => ("audit", o),
        Command::Sweep(o) => ("sweep", o),
    };
    let opts = match &cli.config {
        Some(path) => flags.over(Options::load(path)?),
        None => flags,
    };
    configure_threads(&opts)?;
    match command {
        "state-info" => cmd_state_info(&opts),
        "gqd" => cmd_gqd(&opts),
        "audit" => cmd_audit(&opts),
        _ => cmd_sweep(&opts),
    }
}

fn configure_threads(opts: &Options) -> CliResult<()> {
    let threads = match opts.threads {
        Some(t) => Some(t),
        None => match std::env::var("GQDLAB_THREADS") {
            Ok(v) => Some(v.trim().parse().map_err(|_| format!("GQDLAB_THREADS: `{v}` is not a thread count"))?),
            Err(_) => None,
        },
    };
    if let Some(t) = threads {
        if t == 0 {
            return Err("threads: must be at least 1".into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| format!("threads: {e}"))?;
    }
    Ok(())
}

fn optimizer(opts: &Options) -> CliResult<OptimizerConfig> {
    let mut cfg = OptimizerConfig::with_seed(opts.seed.unwrap_or(0));
    if let Some(r) = opts.restarts {
        cfg.restarts = r;
    }
    if let Some(m) = opts.max_iterations {
        cfg.max_iterations = m;
    }
    cfg.validate().map_err(|e| format!("optimizer: {e}"))?;
    Ok(cfg)
}

fn require<T: Copy>(value: Option<T>, key: &str) -> CliResult<T> {
    value.ok_or_else(|| format!("missing required key `{key}`"))
}

enum Source {
    Family(StateSpec),
    Ising { spec: HamiltonianSpec, t_over_j: f64 },
}

impl Source {
    fn from_options(opts: &Options) -> CliResult<Source> {
        let family = opts.family.as_deref().ok_or("missing required key `family`")?;
        if family.eq_ignore_ascii_case("ising") {
            let j = opts.j.unwrap_or(1.0);
            let spec = HamiltonianSpec::new(opts.l.unwrap_or(5), j, opts.b.unwrap_or(1.0) * j);
            return Ok(Source::Ising {
                spec,
                t_over_j: opts.t.unwrap_or(0.0),
            });
        }
        let family: Family = family.parse().map_err(|e| format!("family: {e}"))?;
        Ok(Source::Family(StateSpec {
            family,
            n_qubits: require(opts.n, "n")?,
            mu: opts.mu.unwrap_or(1.0),
            rank: opts.rank.unwrap_or(1),
            seed: opts.seed.unwrap_or(0),
        }))
    }

    fn build(&self) -> CliResult<DensityMatrix> {
        match self {
            Source::Family(spec) => make_state(spec).map_err(|e| e.to_string()),
            Source::Ising { spec, t_over_j } => {
                let h = build_hamiltonian(spec).map_err(|e| e.to_string())?;
                thermal_state(&h, t_over_j * spec.j).map_err(|e| e.to_string())
            }
        }
    }

    fn describe(&self) -> Value {
        match self {
            Source::Family(spec) => serde_json::to_value(spec).expect("state spec serializes"),
            Source::Ising { spec, t_over_j } => json!({
                "family": "ising", "L": spec.l, "J": spec.j, "B": spec.b, "T": t_over_j,
            }),
        }
    }
}

fn partition_for(opts: &Options, n: usize) -> CliResult<Partition> {
    match &opts.blocks {
        Some(text) => Partition::from_blocks(parse_blocks(text)?).map_err(|e| format!("blocks: {e}")),
        None => Ok(Partition::all_singletons(n)),
    }
}

fn json_only(opts: &Options, command: &str) -> CliResult<()> {
    match opts.format {
        Some(Format::Csv) => Err(format!("format: {command} writes JSON only")),
        _ => Ok(()),
    }
}

fn cmd_state_info(opts: &Options) -> CliResult<Outcome> {
    json_only(opts, "state-info")?;
    let source = Source::from_options(opts)?;
    let rho = source.build()?;
    let n = rho.n_qubits();
    let entropy = von_neumann_entropy(&rho).map_err(|e| e.to_string())?;
    let total_mi = mutual_information(&rho, &Partition::all_singletons(n)).map_err(|e| e.to_string())?;
    let value = json!({
        "command": "state-info",
        "state": source.describe(),
        "n_qubits": n,
        "trace": rho.trace(),
        "purity": rho.purity(),
        "von_neumann_entropy": entropy,
        "total_mutual_information": total_mi,
        "eigenvalues": rho.eigenvalues(),
        "warnings": Vec::<String>::new(),
    });
    emit(opts.out.as_deref(), &to_json_text(&value))?;
    Ok(Outcome::Done)
}

fn cmd_gqd(opts: &Options) -> CliResult<Outcome> {
    json_only(opts, "gqd")?;
    let source = Source::from_options(opts)?;
    let rho = source.build()?;
    let partition = partition_for(opts, rho.n_qubits())?;
    let cfg = optimizer(opts)?;
    let mi = mutual_information(&rho, &partition).map_err(|e| e.to_string())?;
    let r = gqd(&rho, &partition, &cfg).map_err(|e| e.to_string())?;
    eprintln!("gqd: {:.12} bits after {} evaluations", r.value, r.evaluations);
    let warnings = nonfinite_warnings([("value".to_string(), r.value)]);
    let value = json!({
        "command": "gqd",
        "state": source.describe(),
        "partition": partition,
        "value": r.value,
        "argmin": r.argmin,
        "qubits": r.qubits,
        "mutual_information": mi,
        "evaluations": r.evaluations,
        "converged": r.converged,
        "optimizer": cfg,
        "warnings": warnings,
    });
    emit(opts.out.as_deref(), &to_json_text(&value))?;
    Ok(if r.converged { Outcome::Done } else { Outcome::NotConverged })
}

fn audit_states(opts: &Options, source: &Source) -> CliResult<Vec<(Value, DensityMatrix)>> {
    let count = opts.count.unwrap_or(1);
    match source {
        Source::Family(spec) if spec.family == Family::Random => (0..count as u64)
            .map(|i| {
                let spec = StateSpec {
                    seed: spec.seed + i,
                    ..*spec
                };
                let rho = make_state(&spec).map_err(|e| e.to_string())?;
                Ok((serde_json::to_value(spec).expect("state spec serializes"), rho))
            })
            .collect(),
        _ if count != 1 => Err("count: only random states can be audited in batches".into()),
        _ => Ok(vec![(source.describe(), source.build()?)]),
    }
}

fn report_json(state: &Value, report: &AuditReport) -> Value {
    let mut v = serde_json::to_value(report).expect("reports serialize");
    v["state"] = state.clone();
    v["minimized_conditions_hold"] = json!(report.conditions_hold(ConditionLevel::Minimized));
    v["fixed_phi_conditions_hold"] = json!(report.conditions_hold(ConditionLevel::FixedPhi));
    v["warnings"] = json!(nonfinite_warnings([
        ("lhs".to_string(), report.lhs),
        ("rhs".to_string(), report.rhs),
        ("margin".to_string(), report.margin),
    ]));
    v
}

fn cmd_audit(opts: &Options) -> CliResult<Outcome> {
    json_only(opts, "audit")?;
    let source = Source::from_options(opts)?;
    let cfg = optimizer(opts)?;
    let kinds = opts.audit.clone().unwrap_or_else(|| vec!["standard".into()]);
    let spec = AuditSpec {
        cuts: opts.cuts.clone().unwrap_or_default(),
        window: opts.k.unwrap_or(1),
        n_pow: opts.power.unwrap_or(1),
        tolerance: 0.0,
    };
    let mut entries = Vec::new();
    let mut converged = true;
    for (index, (state, rho)) in audit_states(opts, &source)?.into_iter().enumerate() {
        let n = rho.n_qubits();
        for kind in &kinds {
            let err = |e: gqdlab::Error| format!("audit {kind}: {e}");
            let report = match kind.as_str() {
                "standard" => standard_deficit(&rho, &cfg).map_err(err)?,
                "general" => general_deficit(&rho, &spec, &cfg).map_err(err)?,
                "second-class" => second_class_audit(&rho, &spec, &cfg).map_err(err)?,
                "residual" => residual_report(&rho, &cfg).map_err(err)?,
                "power" => {
                    let blocks = match (&opts.blocks, &opts.cuts) {
                        (Some(_), _) => partition_for(opts, n)?,
                        (None, Some(cuts)) => Partition::from_cuts(n, cuts).map_err(err)?,
                        (None, None) => Partition::from_cuts(n, &[n / 2]).map_err(err)?,
                    };
                    power_inequality_check(&rho, &blocks, spec.n_pow, &cfg).map_err(err)?
                }
                "ordering" => {
                    let g = general_deficit(&rho, &spec, &cfg).map_err(err)?;
                    let s = standard_deficit(&rho, &cfg).map_err(err)?;
                    converged &= g.all_converged() && s.all_converged();
                    let margin = s.margin - g.margin;
                    entries.push(json!({
                        "audit": "deficit_ordering",
                        "state": state,
                        "general_deficit": g.margin,
                        "standard_deficit": s.margin,
                        "margin": margin,
                        "tolerance": 1e-6,
                        "holds": margin >= -1e-6,
                        "warnings": nonfinite_warnings([("margin".to_string(), margin)]),
                    }));
                    continue;
                }
                "identity" => {
                    let seed = opts.seed.unwrap_or(0).wrapping_add(index as u64);
                    entries.push(identity_entry(opts, &state, &rho, seed)?);
                    continue;
                }
                other => return Err(format!("audit: unknown audit kind `{other}`")),
            };
            converged &= report.all_converged();
            entries.push(report_json(&state, &report));
        }
    }
    eprintln!("audit: {} reports", entries.len());
    emit(opts.out.as_deref(), &to_json_text(&Value::Array(entries)))?;
    Ok(if converged { Outcome::Done } else { Outcome::NotConverged })
}

/// Telescoping (and, with `--blocks`/`--cuts`, block) identity residuals at
/// seeded random measurement angles.
fn identity_entry(opts: &Options, state: &Value, rho: &DensityMatrix, seed: u64) -> CliResult<Value> {
    let n = rho.n_qubits();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let angles = AngleSet::new(
        (0..n)
            .map(|_| (rng.random::<f64>() * FRAC_PI_2, rng.random::<f64>() * PI))
            .collect(),
    );
    let telescoping = identity_audit(rho, &angles, &IdentityMode::Telescoping).map_err(|e| e.to_string())?;
    let block = match (&opts.blocks, &opts.cuts) {
        (None, None) => None,
        (Some(_), _) => Some(partition_for(opts, n)?),
        (None, Some(cuts)) => Some(Partition::from_cuts(n, cuts).map_err(|e| format!("cuts: {e}"))?),
    };
    let block_residual = match &block {
        Some(p) => Some(identity_audit(rho, &angles, &IdentityMode::Block(p.clone())).map_err(|e| e.to_string())?),
        None => None,
    };
    let worst = telescoping.max(block_residual.unwrap_or(0.0));
    Ok(json!({
        "audit": "identity",
        "state": state,
        "angles": angles,
        "telescoping_residual": telescoping,
        "blocks": block,
        "block_residual": block_residual,
        "tolerance": 1e-9,
        "holds": worst < 1e-9,
        "warnings": nonfinite_warnings([("telescoping_residual".to_string(), telescoping)]),
    }))
}

fn cmd_sweep(opts: &Options) -> CliResult<Outcome> {
    let source = Source::from_options(opts)?;
    let cfg = optimizer(opts)?;
    let records = match &source {
        Source::Ising { spec, t_over_j } => {
            let grid = match &opts.grid {
                Some(g) => parse_grid(g)?,
                None => gqdlab::ising::default_field_grid(),
            };
            let sweep = IsingSweepSpec {
                l: spec.l,
                j: spec.j,
                b_over_j: grid,
                t_over_j: *t_over_j,
                all_bonds: opts.all_bonds.unwrap_or(false),
                optimizer: cfg,
                ..IsingSweepSpec::default()
            };
            eprintln!("sweep: ising L={} T/J={} over {} fields", sweep.l, sweep.t_over_j, sweep.b_over_j.len());
            ising_sweep(&sweep).map_err(|e| e.to_string())?
        }
        Source::Family(spec) => {
            let grid = match &opts.grid {
                Some(g) => parse_grid(g)?,
                None => gqdlab::ising::linspace(0.0, 1.0, 21),
            };
            eprintln!("sweep: {} N={} over {} values of mu", spec.family.name(), spec.n_qubits, grid.len());
            mu_sweep(spec.family, spec.n_qubits, &grid, &cfg).map_err(|e| e.to_string())?
        }
    };
    for r in records.iter().filter(|r| r.error.is_some()) {
        eprintln!("sweep: point {} failed: {}", r.param, r.error.as_deref().unwrap_or_default());
    }
    let text = match opts.format.unwrap_or(Format::Csv) {
        Format::Csv => sweep_csv(&records),
        Format::Json => {
            let warnings = nonfinite_warnings(records.iter().enumerate().flat_map(|(i, r)| {
                [
                    (format!("records[{i}].gqd_total"), r.gqd_total),
                    (format!("records[{i}].nn_sum"), r.nn_sum),
                    (format!("records[{i}].residual"), r.residual),
                ]
            }));
            to_json_text(&json!({
                "command": "sweep",
                "state": source.describe(),
                "records": records,
                "warnings": warnings,
            }))
        }
    };
    emit(opts.out.as_deref(), &text)?;
    let converged = records.iter().all(|r| r.converged || r.error.is_some());
    Ok(if converged { Outcome::Done } else { Outcome::NotConverged })
}
