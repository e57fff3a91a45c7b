use std::io::Write;
use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use kinorder_core::hierosc::{build_quantum_hamiltonian, evolve, ChainSpec, HamiltonianMode};
use serde::Deserialize;

use crate::output::{create, load_config};
use crate::Outcome;

pub const NORM_TOLERANCE: f64 = 1e-9;

pub const CSV_HEADER: &str = "t,occ_a,occ_0,occ_1,total,norm,energy,coupling,environment";

#[derive(Debug, Args)]
pub struct HierOscArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// free, hermitian, full or scale_ordered.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of time steps after t = 0.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    sample_stride: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct HierConfig {
    m0: f64,
    k0: f64,
    k1: f64,
    tilde_k0: f64,
    n_cut: usize,
    mode: String,
    /// Initial Fock occupations of A, a₀, a₁.
    n_a: usize,
    n_0: usize,
    n_1: usize,
    dt: f64,
    steps: usize,
    trajectories: usize,
    seed: u64,
}

impl Default for HierConfig {
    fn default() -> Self {
        Self {
            m0: 1.0,
            k0: 1.0,
            k1: 0.25,
            tilde_k0: 0.1,
            n_cut: 6,
            mode: "hermitian".into(),
            n_a: 1,
            n_0: 0,
            n_1: 0,
            dt: 0.5,
            steps: 100,
            trajectories: 1000,
            seed: 1,
        }
    }
}

pub fn run(args: &HierOscArgs) -> Result<Outcome> {
    let mut cfg: HierConfig = load_config(args.config.as_deref())?;
    if let Some(mode) = &args.mode {
        cfg.mode = mode.clone();
    }
    cfg.seed = args.seed.unwrap_or(cfg.seed);
    cfg.steps = args.steps.unwrap_or(cfg.steps);
    let config_error = |msg: String| -> anyhow::Error { kinorder_core::Error::Config(msg).into() };
    if !(cfg.dt > 0.0 && cfg.dt.is_finite()) {
        return Err(config_error(format!("dt must be positive, got {}", cfg.dt)));
    }
    if args.sample_stride == 0 {
        return Err(config_error("sample-stride must be at least 1".into()));
    }
    let mode: HamiltonianMode = cfg.mode.parse()?;
    let spec = ChainSpec {
        m0: cfg.m0,
        k0: cfg.k0,
        k1: cfg.k1,
        tilde_k0: cfg.tilde_k0,
        n_cut: cfg.n_cut,
    };
    let model = build_quantum_hamiltonian(&spec, mode)?;
    let psi = model.fock_state(cfg.n_a, cfg.n_0, cfg.n_1)?;
    let times: Vec<f64> = (0..=cfg.steps)
        .step_by(args.sample_stride)
        .map(|k| k as f64 * cfg.dt)
        .collect();
    let samples = evolve(&model, &psi, &times, cfg.trajectories, cfg.seed)?;

    let mut csv = create(&args.out)?;
    writeln!(csv, "{CSV_HEADER}")?;
    let mut drift: f64 = 0.0;
    for s in &samples {
        drift = drift.max((s.norm - 1.0).abs());
        let fields = [
            s.t,
            s.occ_a,
            s.occ_0,
            s.occ_1,
            s.total_quanta(),
            s.norm,
            s.energy,
            s.coupling,
            s.environment,
        ];
        let row: Vec<String> = fields.iter().map(|x| format!("{x:.11e}")).collect();
        writeln!(csv, "{}", row.join(","))?;
    }
    csv.flush()?;
    println!("norm drift {drift:.11e}");
    if drift > NORM_TOLERANCE {
        eprintln!("norm drift {drift:e} exceeds {NORM_TOLERANCE:e}");
        return Ok(Outcome::Failed);
    }
    Ok(Outcome::Passed)
}
