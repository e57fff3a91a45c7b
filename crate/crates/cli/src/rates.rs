use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use kinorder_core::spectro::{rate_set, OscillatorSpec, RadiationMode};
use serde::Deserialize;

use crate::output::{emit, json_text, load_config};
use crate::Outcome;

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct RatesArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Angular frequency in rad/s.
    #[arg(long)]
    omega: Option<f64>,
    /// Transition dipole in esu·cm.
    #[arg(long)]
    dipole: Option<f64>,
    /// Bath temperature in kelvin.
    #[arg(long)]
    temperature: Option<f64>,
    #[arg(long)]
    n_levels: Option<usize>,
    /// off, spontaneous or full.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RatesConfig {
    omega: f64,
    dipole: f64,
    temperature: f64,
    n_levels: usize,
    mode: RadiationMode,
}

impl Default for RatesConfig {
    fn default() -> Self {
        Self {
            omega: 1e14,
            dipole: 1e-18,
            temperature: 300.0,
            n_levels: 2,
            mode: RadiationMode::Full,
        }
    }
}

pub fn run(args: &RatesArgs) -> Result<Outcome> {
    let mut cfg: RatesConfig = load_config(args.config.as_deref())?;
    cfg.omega = args.omega.unwrap_or(cfg.omega);
    cfg.dipole = args.dipole.unwrap_or(cfg.dipole);
    cfg.temperature = args.temperature.unwrap_or(cfg.temperature);
    cfg.n_levels = args.n_levels.unwrap_or(cfg.n_levels);
    if let Some(mode) = &args.mode {
        cfg.mode = mode.parse()?;
    }
    let spec = OscillatorSpec::new(cfg.omega, cfg.dipole, cfg.n_levels)?;
    let rates = rate_set(&spec, cfg.temperature, cfg.mode)?;
    emit(
        args.out.as_deref(),
        &json_text(serde_json::to_value(&rates)?),
    )?;
    Ok(Outcome::Passed)
}
