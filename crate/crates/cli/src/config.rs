use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;
use skewpencil::field::FieldSpec;
use skewpencil::json::{self, JsonError};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid input {path}: {source}")]
    Input { path: PathBuf, source: JsonError },
}

impl CliError {
    pub fn input(path: &std::path::Path, source: JsonError) -> Self {
        CliError::Input {
            path: path.to_path_buf(),
            source,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Algebra,
    Even,
    Odd,
    All,
}

#[derive(Debug, Parser)]
#[command(name = "skewpencil", version, about = "Exact degeneracy loci of skew-symmetric pencils, with certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Coefficient field: `Q` or `Fp:<prime>`. Defaults to the input's
    /// declared field, then to `Q`.
    #[arg(long, global = true)]
    pub field: Option<String>,

    /// Matrix size.
    #[arg(long, global = true)]
    pub n: Option<usize>,

    /// Seed for all random draws.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Number of random trials.
    #[arg(long, global = true, default_value_t = 10)]
    pub trials: usize,

    /// Input JSON file.
    #[arg(long, global = true, visible_aliases = ["lines", "forms"])]
    pub input: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Pfaffian of an even matrix, or signed sub-Pfaffians of an odd one.
    Pfaffian,
    /// Degeneracy locus of a pencil.
    Deglocus,
    /// A certified pencil whose degeneracy locus is the given lines.
    EvenFiber,
    /// Dimension of the space of complexes whose center contains a line.
    GaussDim,
    /// A pencil whose sub-Pfaffians are proportional to the given forms.
    OddRealize,
    /// All pencils with the given sub-Pfaffians, and one certified sample.
    OddFiber,
    /// Seeded verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Pfaffian => "pfaffian",
            Command::Deglocus => "deglocus",
            Command::EvenFiber => "even-fiber",
            Command::GaussDim => "gauss-dim",
            Command::OddRealize => "odd-realize",
            Command::OddFiber => "odd-fiber",
            Command::Verify { .. } => "verify",
        }
    }
}

/// Validated settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub field: FieldSpec,
    pub n: Option<usize>,
    pub input: Option<(PathBuf, Value)>,
    pub seed: u64,
    pub trials: usize,
    pub format: Format,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let input = match &cli.input {
            None => None,
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                let v = json::parse_value(&text).map_err(|e| CliError::input(path, e))?;
                Some((path.clone(), v))
            }
        };
        let flag: Option<FieldSpec> = match &cli.field {
            None => None,
            Some(s) => Some(s.parse().map_err(|e| CliError::Usage(format!("--field: {e}")))?),
        };
        let declared = match &input {
            Some((path, v)) => json::declared_field(v).map_err(|e| CliError::input(path, e))?,
            None => None,
        };
        let field = match (flag, declared) {
            (Some(a), Some(b)) if a != b => {
                return Err(CliError::Usage(format!("--field {a} conflicts with the input's declared field {b}")))
            }
            (Some(a), _) => a,
            (None, Some(b)) => b,
            (None, None) => FieldSpec::Rational,
        };
        if let Some(n) = cli.n {
            if n < 4 {
                return Err(CliError::Usage(format!("--n must be at least 4, got {n}")));
            }
        }
        if cli.trials == 0 {
            return Err(CliError::Usage("--trials must be positive".into()));
        }
        Ok(RunConfig {
            command: cli.command.clone(),
            field,
            n: cli.n,
            input,
            seed: cli.seed,
            trials: cli.trials,
            format: cli.format,
        })
    }

    pub fn input_value(&self) -> Option<&Value> {
        self.input.as_ref().map(|(_, v)| v)
    }

    pub fn require_input(&self) -> Result<(&std::path::Path, &Value), CliError> {
        self.input
            .as_ref()
            .map(|(p, v)| (p.as_path(), v))
            .ok_or_else(|| CliError::Usage(format!("{} needs --input", self.command.name())))
    }

    /// Check a size coming from the input against `--n` and the parity rule.
    pub fn check_n(&self, found: usize, even: Option<bool>) -> Result<usize, CliError> {
        if let Some(n) = self.n {
            if n != found {
                return Err(CliError::Usage(format!("--n {n} but the input has size {found}")));
            }
        }
        check_parity(found, even)
    }
}

pub fn check_parity(n: usize, even: Option<bool>) -> Result<usize, CliError> {
    match even {
        Some(true) if n % 2 == 1 || n < 4 => Err(CliError::Usage(format!("this command needs even n >= 4, got {n}"))),
        Some(false) if n % 2 == 0 || n < 5 => Err(CliError::Usage(format!("this command needs odd n >= 5, got {n}"))),
        _ => Ok(n),
    }
}
