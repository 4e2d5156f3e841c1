//! Command-line front end for `skewpencil`: reads JSON inputs, runs one
//! computation, and reports the results together with the checks that
//! certify them.

pub mod certificate;
pub mod commands;
pub mod config;
mod verify;

use skewpencil::field::{FieldSpec, PrimeField, RationalField};

pub use certificate::{Certificate, Check};
pub use config::{Cli, CliError, Command, Format, RunConfig, Suite};

pub fn execute(cli: &Cli) -> Result<Certificate, CliError> {
    let cfg = RunConfig::from_cli(cli)?;
    match cfg.field {
        FieldSpec::Rational => commands::run(&RationalField, &cfg),
        FieldSpec::Prime(p) => {
            let k = PrimeField::new(p).map_err(|e| CliError::Usage(format!("--field: {e}")))?;
            commands::run(&k, &cfg)
        }
    }
}

pub fn render(cert: &Certificate, format: Format) -> String {
    match format {
        Format::Json => cert.to_json(),
        Format::Text => cert.to_text(),
    }
}
