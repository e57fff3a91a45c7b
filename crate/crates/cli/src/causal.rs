use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Subcommand;
use kinorder_core::causal::{cascade_site, check_axioms, Site};

use crate::output::emit;
use crate::Outcome;

#[derive(Debug, Subcommand)]
pub enum CausalCommand {
    /// Check a site file against every axiom and print the report.
    Check {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a cascade site.
    Gen {
        #[arg(long, default_value_t = 2)]
        p: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn run(cmd: &CausalCommand) -> Result<Outcome> {
    match cmd {
        CausalCommand::Check { input, out } => {
            let text = fs::read_to_string(input)
                .with_context(|| format!("reading {}", input.display()))?;
            let site =
                Site::from_json(&text).with_context(|| format!("parsing {}", input.display()))?;
            let report = check_axioms(&site);
            let mut json = serde_json::to_string_pretty(&report.to_json(&site))?;
            json.push('\n');
            emit(out.as_deref(), &json)?;
            Ok(if report.passed {
                Outcome::Passed
            } else {
                Outcome::Failed
            })
        }
        CausalCommand::Gen { p, depth, out } => {
            let site = cascade_site(*p, *depth)?;
            let mut json = site.to_json();
            json.push('\n');
            emit(out.as_deref(), &json)?;
            Ok(if check_axioms(&site).passed {
                Outcome::Passed
            } else {
                Outcome::Failed
            })
        }
    }
}
