//! Command options: flags, an optional TOML file with the same keys, and defaults.
//! Flags override file keys, which override defaults.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Default, Clone, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// State family: ghz, w, werner-ghz, mixed-w, random, ising
    #[arg(long)]
    pub family: Option<String>,
    /// Number of qubits
    #[arg(long)]
    pub n: Option<usize>,
    /// Mixing weight of the pure component
    #[arg(long)]
    pub mu: Option<f64>,
    /// Rank of random states
    #[arg(long)]
    pub rank: Option<usize>,
    /// Number of consecutive seeds for random-state audits
    #[arg(long)]
    pub count: Option<usize>,
    /// Ising ring length
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub l: Option<usize>,
    /// Ising coupling
    #[arg(long = "J")]
    #[serde(rename = "J")]
    pub j: Option<f64>,
    /// Transverse field
    #[arg(long = "B")]
    #[serde(rename = "B")]
    pub b: Option<f64>,
    /// Temperature in units of J (0 selects the ground state)
    #[arg(long = "T")]
    #[serde(rename = "T")]
    pub t: Option<f64>,
    /// Include the wrap-around bond in nearest-neighbour sums
    #[arg(long)]
    pub all_bonds: Option<bool>,
    /// Window size of the second-class audit
    #[arg(long = "K")]
    #[serde(rename = "K")]
    pub k: Option<usize>,
    /// Cut party numbers, e.g. 3 or 2,4
    #[arg(long, value_delimiter = ',')]
    pub cuts: Option<Vec<usize>>,
    /// Exponent of the power inequality
    #[arg(long)]
    pub power: Option<u32>,
    /// Qubit blocks, e.g. "0,1|2,3"
    #[arg(long)]
    pub blocks: Option<String>,
    /// Audits to run: standard, general, ordering, second-class, residual, power, identity
    #[arg(long, value_delimiter = ',')]
    pub audit: Option<Vec<String>>,
    /// Sweep grid: "start:end:count" or a comma list; empty for none
    #[arg(long)]
    pub grid: Option<String>,
    /// Optimizer local searches per minimization
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Simplex iteration budget per local search
    #[arg(long)]
    pub max_iterations: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (default: GQDLAB_THREADS, then all cores)
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output file (default: standard output)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

macro_rules! prefer {
    ($a:ident, $b:ident, $($field:ident),*) => {
        Options { $($field: $a.$field.or($b.$field)),* }
    };
}

impl Options {
    /// Fills every unset field from `file`.
    pub fn over(self, file: Options) -> Options {
        prefer!(
            self, file, family, n, mu, rank, count, l, j, b, t, all_bonds, k, cuts, power, blocks, audit, grid,
            restarts, max_iterations, seed, threads, out, format
        )
    }

    pub fn load(path: &Path) -> Result<Options, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))
    }
}

/// Parses `"start:end:count"` (evenly spaced, inclusive) or `"a,b,c"`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let number = |s: &str| s.trim().parse::<f64>().map_err(|_| format!("grid: `{s}` is not a number"));
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid: expected start:end:count, got `{text}`"));
        }
        let count = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|_| format!("grid: count `{}` is not a non-negative integer", parts[2]))?;
        return Ok(gqdlab::ising::linspace(number(parts[0])?, number(parts[1])?, count));
    }
    text.split(',').map(number).collect()
}

/// Parses `"0,1|2,3"` into qubit blocks.
pub fn parse_blocks(text: &str) -> Result<Vec<Vec<usize>>, String> {
    text.split('|')
        .map(|block| {
            block
                .split(',')
                .map(|q| q.trim().parse::<usize>().map_err(|_| format!("blocks: `{q}` is not a qubit index")))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let flags = Options {
            n: Some(4),
            ..Options::default()
        };
        let file: Options = toml::from_str("n = 3\nmu = 0.5\nfamily = \"ghz\"\nL = 6\ncuts = [3]").unwrap();
        let merged = flags.over(file);
        assert_eq!(merged.n, Some(4));
        assert_eq!(merged.mu, Some(0.5));
        assert_eq!(merged.l, Some(6));
        assert_eq!(merged.cuts, Some(vec![3]));
    }

    #[test]
    fn unknown_config_key_is_named() {
        let err = toml::from_str::<Options>("qubits = 3").unwrap_err().to_string();
        assert!(err.contains("qubits"), "{err}");
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("").unwrap(), Vec::<f64>::new());
        assert_eq!(parse_grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("0.1, 0.2").unwrap(), vec![0.1, 0.2]);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("a,b").is_err());
    }

    #[test]
    fn blocks() {
        assert_eq!(parse_blocks("0,1|2").unwrap(), vec![vec![0, 1], vec![2]]);
        assert!(parse_blocks("0|x").is_err());
    }
}
