//! Subcommands. Each produces a report that renders either as JSON or as
//! rounded text.

use netdyn_core::linalg::rational_from_f64;
use netdyn_core::{DenseMatrix, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::{Cli, Command};
use crate::error::{CliError, Result};
use crate::format::Fmt;
use crate::network::Network;

pub mod equilibria;
pub mod gershgorin;
pub mod info;
pub mod simulate;
pub mod trees;

pub trait Report: Serialize {
    fn render(&self, f: &Fmt) -> String;
}

/// Render `report` as the caller asked.
pub fn emit<R: Report>(report: &R, cli: &Cli) -> String {
    if cli.json {
        let mut s = serde_json::to_string_pretty(report).expect("reports always serialize");
        s.push('\n');
        s
    } else {
        report.render(&Fmt::new(cli.precision))
    }
}

/// Run the parsed command line and return what goes to stdout.
pub fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Info { file } => Ok(emit(&info::run(&Network::load(file)?)?, cli)),
        Command::Trees { file, cap, signed } => Ok(emit(&trees::run(&Network::load(file)?, *cap, *signed)?, cli)),
        Command::Equilibria { file, at, cap } => {
            let net = Network::load(file)?;
            let at = at.as_deref().map(parse_vector).transpose()?;
            Ok(emit(&equilibria::run(&net, at, *cap)?, cli))
        }
        Command::Simulate(args) => {
            let summary = simulate::run(&Network::load(&args.file)?, args)?;
            if let Some(path) = &args.summary {
                let text = serde_json::to_string_pretty(&summary).expect("reports always serialize");
                std::fs::write(path, text + "\n").map_err(|source| CliError::Write {
                    path: path.clone(),
                    source,
                })?;
            }
            Ok(emit(&summary, cli))
        }
        Command::Gershgorin { file } => Ok(emit(&gershgorin::run(&Network::load(file)?)?, cli)),
    }
}

/// A rational value with its float rendering.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactValue {
    pub value: f64,
    /// `p/q` when the value is known exactly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

impl ExactValue {
    pub fn exact(r: &Rational) -> Self {
        use netdyn_core::linalg::Scalar;
        Self {
            value: r.to_f64(),
            exact: Some(r.to_string()),
        }
    }

    pub fn float(v: f64) -> Self {
        Self { value: v, exact: None }
    }

    pub fn render(&self, f: &Fmt) -> String {
        match &self.exact {
            Some(e) => e.clone(),
            None => f.num(self.value),
        }
    }
}

pub fn rows(m: &DenseMatrix) -> Vec<Vec<f64>> {
    m.to_rows()
}

pub fn exact_weights(w: &[f64]) -> Result<Vec<Rational>> {
    w.iter()
        .map(|&v| rational_from_f64(v).ok_or_else(|| CliError::Validation(format!("weight {v} is not finite"))))
        .collect()
}

/// Comma-separated finite floats.
pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            match s.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(CliError::Usage(format!("\"{s}\" is not a finite number"))),
            }
        })
        .collect()
}

/// An explicit vector or `seed:N`, which draws `len` values uniformly from
/// [-1, 1] with ChaCha8.
pub fn parse_state(text: &str, len: usize) -> Result<Vec<f64>> {
    if let Some(seed) = text.strip_prefix("seed:") {
        let seed: u64 = seed
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("seed \"{seed}\" is not an unsigned integer")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        return Ok((0..len).map(|_| rng.gen_range(-1.0..=1.0)).collect());
    }
    parse_vector(text)
}

pub fn check_len(v: &[f64], expected: usize, what: &str) -> Result<()> {
    if v.len() == expected {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{what} has {} entries, expected {expected}", v.len())))
    }
}
