use std::io::Write;
use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use kinorder_core::engine::{csv_header, LevelHistogram};
use kinorder_core::{GasConfig, Simulation};
use serde_json::json;

use crate::output::{create, json_text, load_config};
use crate::Outcome;

/// Largest relative ledger drift accepted at the end of a run.
pub const LEDGER_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long)]
    out: PathBuf,
    /// Write a row every this many steps.
    #[arg(long, default_value_t = 1)]
    sample_stride: u64,
    /// Momentum bins of the entropy histogram.
    #[arg(long, default_value_t = 32)]
    bins: usize,
    /// Level populations at every sampled time, as t,level,count rows.
    #[arg(long)]
    histogram: Option<PathBuf>,
}

pub fn run(args: &SimulateArgs) -> Result<Outcome> {
    let mut cfg: GasConfig = load_config(args.config.as_deref())?;
    cfg.seed = args.seed.unwrap_or(cfg.seed);
    cfg.steps = args.steps.unwrap_or(cfg.steps);
    if args.sample_stride == 0 {
        return Err(kinorder_core::Error::Config("sample-stride must be at least 1".into()).into());
    }

    let mut sim = Simulation::new(cfg)?;
    let mut csv = create(&args.out)?;
    csv.write_all(csv_header().as_bytes())?;
    let mut hist = args.histogram.as_ref().map(create).transpose()?;
    if let Some(h) = hist.as_mut() {
        h.write_all(b"t,level,count\n")?;
    }

    sim.run(args.sample_stride, args.bins, |sim, record| {
        let io = |e: std::io::Error| kinorder_core::Error::Runtime(format!("writing output: {e}"));
        csv.write_all(record.csv_row().as_bytes()).map_err(io)?;
        if let Some(h) = hist.as_mut() {
            let levels = LevelHistogram::of(&sim.state);
            for (level, count) in levels.counts.iter().enumerate() {
                writeln!(h, "{:.11e},{level},{count}", levels.t).map_err(io)?;
            }
        }
        Ok(())
    })?;
    csv.flush()?;
    if let Some(h) = hist.as_mut() {
        h.flush()?;
    }

    let drift = sim.ledger_drift();
    let ledger = &sim.state.ledger;
    let summary = json!({
        "steps": sim.config.steps,
        "collisions": sim.collisions,
        "e_kin": ledger.e_kin,
        "e_int": ledger.e_int,
        "e_rad": ledger.e_rad,
        "e_pump": ledger.e_pump,
        "e_work": ledger.e_work,
        "ledger_drift": drift,
        "momentum_error": sim.momentum_error,
    });
    print!("{}", json_text(summary));
    if drift > LEDGER_TOLERANCE {
        eprintln!("ledger drift {drift:e} exceeds {LEDGER_TOLERANCE:e}");
        return Ok(Outcome::Failed);
    }
    Ok(Outcome::Passed)
}
