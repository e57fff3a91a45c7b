use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{GasConfig, SimState};

pub const CSV_HEADER: &str = "t,e_kin,e_int,e_rad,e_pump,mean_n,temp_kin,entropy";

pub fn csv_header() -> String {
    format!("{CSV_HEADER}\n")
}

/// One sampled row of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub t: f64,
    pub e_kin: f64,
    pub e_int: f64,
    pub e_rad: f64,
    pub e_pump: f64,
    pub mean_n: f64,
    pub temp_kin: f64,
    pub entropy: f64,
}

impl Record {
    /// Comma-separated row, 12 significant digits per field.
    pub fn csv_row(&self) -> String {
        let fields = [
            self.t,
            self.e_kin,
            self.e_int,
            self.e_rad,
            self.e_pump,
            self.mean_n,
            self.temp_kin,
            self.entropy,
        ];
        let mut row = fields
            .iter()
            .map(|v| format!("{v:.11e}"))
            .collect::<Vec<_>>()
            .join(",");
        row.push('\n');
        row
    }
}

/// Snapshot of the level occupation counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelHistogram {
    pub t: f64,
    pub counts: Vec<u64>,
}

impl LevelHistogram {
    pub fn of(state: &SimState) -> Self {
        let top = state.particles.iter().map(|p| p.n).max().unwrap_or(0) as usize;
        let mut counts = vec![0u64; top + 1];
        for p in &state.particles {
            counts[p.n as usize] += 1;
        }
        Self {
            t: state.time,
            counts,
        }
    }
}

/// Macroscopic observables of a state.
///
/// The entropy is −Σ f ln f over a joint histogram of (|p|, n) with `bins`
/// equal-width momentum bins on [0, max|p|].
pub fn observables(state: &SimState, cfg: &GasConfig, bins: usize) -> Record {
    let bins = bins.max(4);
    let n = state.particles.len() as f64;
    let ledger = &state.ledger;
    let p_max = state
        .particles
        .iter()
        .map(|p| p.p.norm())
        .fold(0.0, f64::max);
    let mut hist: HashMap<(usize, u32), u64> = HashMap::new();
    for part in &state.particles {
        let b = if p_max > 0.0 {
            ((part.p.norm() / p_max * bins as f64) as usize).min(bins - 1)
        } else {
            0
        };
        *hist.entry((b, part.n)).or_default() += 1;
    }
    // Sorted so the floating sum is order-independent of the hash map.
    let mut counts: Vec<_> = hist.into_iter().collect();
    counts.sort_unstable();
    let entropy = -counts
        .iter()
        .map(|&(_, c)| {
            let f = c as f64 / n;
            f * f.ln()
        })
        .sum::<f64>();
    let total_n: u64 = state.particles.iter().map(|p| u64::from(p.n)).sum();
    let p_mean = state
        .particles
        .iter()
        .map(|p| p.p)
        .sum::<crate::collision::Vec3>()
        / n;
    let thermal: f64 = state
        .particles
        .iter()
        .map(|p| (p.p - p_mean).norm_squared())
        .sum::<f64>()
        / (2.0 * cfg.mass);
    Record {
        t: state.time,
        e_kin: ledger.e_kin,
        e_int: ledger.e_int,
        e_rad: ledger.e_rad,
        e_pump: ledger.e_pump,
        mean_n: total_n as f64 / n,
        temp_kin: 2.0 * thermal / (3.0 * n),
        entropy: entropy.max(0.0),
    }
}
