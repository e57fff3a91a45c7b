//! Stochastic particle solver for the one-way kinetic equation.
//!
//! A step is the fixed splitting free flight → binary collisions → radiative
//! jumps. Every energy flow is booked in an [`EnergyLedger`] so that
//! e_kin + e_int + e_rad − e_pump − e_work stays constant.

mod config;
mod observe;

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::collision::{fixed_to_energy, kinetic_fixed, CollisionKernel, Particle, Vec3};
use crate::error::{Error, Result};
pub use config::{GasConfig, Ladder, ReducedUnits, MAX_RATE_DT};
pub use observe::{csv_header, observables, LevelHistogram, Record, CSV_HEADER};

/// Running energy totals of a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyLedger {
    pub e_kin: f64,
    pub e_int: f64,
    /// Cumulative energy carried off by emitted photons.
    pub e_rad: f64,
    /// Cumulative energy absorbed from the bath.
    pub e_pump: f64,
    /// Cumulative work done by the external force.
    pub e_work: f64,
}

impl EnergyLedger {
    /// e_kin + e_int + e_rad − e_pump − e_work.
    pub fn invariant(&self) -> f64 {
        self.e_kin + self.e_int + self.e_rad - self.e_pump - self.e_work
    }
}

/// Exact kinetic total of a particle set, via the fixed-point grid.
pub fn kinetic_total(particles: &[Particle], mass: f64) -> f64 {
    fixed_to_energy(particles.iter().map(|p| kinetic_fixed(&p.p, mass)).sum())
}

pub fn internal_total(particles: &[Particle], quantum: f64) -> f64 {
    particles.iter().map(|p| u64::from(p.n)).sum::<u64>() as f64 * quantum
}

/// Per-step counters.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StepReport {
    pub collisions: usize,
    pub quanta: i64,
    pub emissions: u64,
    pub absorptions: u64,
    /// Largest |Σp_out − Σp_in| over this step's collisions.
    pub momentum_error: f64,
}

#[derive(Debug, Clone)]
pub struct SimState {
    pub particles: Vec<Particle>,
    pub time: f64,
    pub ledger: EnergyLedger,
    rng: ChaCha8Rng,
}

impl SimState {
    /// Maxwellian momenta at `initial_temperature`, uniform positions, all
    /// levels at `initial_level`.
    pub fn initial(cfg: &GasConfig) -> Result<Self> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let normal = Normal::new(0.0, (cfg.mass * cfg.initial_temperature).sqrt())
            .map_err(|e| Error::Config(format!("initial momentum spread: {e}")))?;
        let particles = (0..cfg.n_particles)
            .map(|_| {
                let x = Vec3::from_fn(|_, _| rng.random_range(0.0..cfg.box_length));
                let p = Vec3::from_fn(|_, _| normal.sample(&mut rng));
                Particle::new(x, p, cfg.initial_level)
            })
            .collect();
        Ok(Self::from_particles(particles, cfg, rng))
    }

    pub fn from_particles(particles: Vec<Particle>, cfg: &GasConfig, rng: ChaCha8Rng) -> Self {
        let ledger = EnergyLedger {
            e_kin: kinetic_total(&particles, cfg.mass),
            e_int: internal_total(&particles, cfg.quantum()),
            ..EnergyLedger::default()
        };
        Self {
            particles,
            time: 0.0,
            ledger,
            rng,
        }
    }

    pub fn rng_mut(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn refresh(&mut self, cfg: &GasConfig) {
        self.ledger.e_kin = kinetic_total(&self.particles, cfg.mass);
        self.ledger.e_int = internal_total(&self.particles, cfg.quantum());
    }
}

/// Constant-force kick then drift with periodic wrap. Returns the work done,
/// Σ((p + FΔt)² − p²)/(2m) evaluated analytically.
pub fn free_flight(state: &mut SimState, dt: f64, force: &Vec3, mass: f64, box_length: f64) -> f64 {
    let kick = force * dt;
    let kick_sq = kick.norm_squared();
    let mut work = 0.0;
    for part in &mut state.particles {
        work += (2.0 * part.p.dot(&kick) + kick_sq) / (2.0 * mass);
        part.p += kick;
        part.x += part.p * (dt / mass);
        for c in part.x.iter_mut() {
            *c = c.rem_euclid(box_length);
            // rem_euclid can round up to exactly box_length
            if *c >= box_length {
                *c -= box_length;
            }
        }
    }
    work
}

/// No-time-counter candidate selection in one well-mixed cell.
///
/// Draws ⌊M⌋ (+1 with probability frac M) distinct candidate pairs with
/// M = ½N(N−1)·σ·v_bound·Δt/V, accepting each with probability
/// v_rel/v_bound. v_bound = 2·max|v − v̄| bounds every relative speed.
pub fn select_collision_pairs<R: Rng + ?Sized>(
    particles: &[Particle],
    cfg: &GasConfig,
    dt: f64,
    rng: &mut R,
) -> Vec<(usize, usize)> {
    let n = particles.len();
    if n < 2 {
        return Vec::new();
    }
    let mean = particles.iter().fold(Vec3::zeros(), |acc, p| acc + p.p) / (n as f64 * cfg.mass);
    let spread = particles
        .iter()
        .map(|p| (p.p / cfg.mass - mean).norm())
        .fold(0.0, f64::max);
    let v_bound = 2.0 * spread;
    if v_bound == 0.0 {
        return Vec::new();
    }
    let all_pairs = n * (n - 1) / 2;
    let expected = all_pairs as f64 * cfg.cross_section() * v_bound * dt / cfg.volume();
    let mut count = expected.floor() as usize;
    if rng.random::<f64>() < expected - expected.floor() {
        count += 1;
    }
    let count = count.min(all_pairs);

    let mut seen = HashSet::with_capacity(count);
    let mut accepted = Vec::new();
    while seen.len() < count {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let key = (i.min(j), i.max(j));
        if !seen.insert(key) {
            continue;
        }
        let v_rel = (particles[i].p - particles[j].p).norm() / cfg.mass;
        if rng.random::<f64>() * v_bound < v_rel {
            accepted.push(key);
        }
    }
    accepted
}

/// One radiative step: each particle makes at most one Δn = ±1 jump with
/// probability rate·Δt. Returns (emissions, absorptions).
pub fn apply_radiation(
    state: &mut SimState,
    ladder: &Ladder,
    dt: f64,
    quantum: f64,
) -> Result<(u64, u64)> {
    if ladder.a_spont == 0.0 && ladder.k_eq == 0.0 {
        return Ok((0, 0));
    }
    let (mut down, mut up) = (0u64, 0u64);
    let SimState { particles, rng, .. } = state;
    for part in particles.iter_mut() {
        let p_down = ladder.down(part.n) * dt;
        let p_up = ladder.up(part.n) * dt;
        if p_down + p_up >= MAX_RATE_DT {
            return Err(Error::Runtime(format!(
                "level {} has radiative rate × dt = {} ≥ {MAX_RATE_DT}",
                part.n,
                p_down + p_up
            )));
        }
        let u: f64 = rng.random();
        if u < p_down {
            part.n -= 1;
            down += 1;
        } else if u < p_down + p_up {
            part.n += 1;
            up += 1;
        }
    }
    state.ledger.e_rad += down as f64 * quantum;
    state.ledger.e_pump += up as f64 * quantum;
    Ok((down, up))
}

/// A configured run: validated parameters plus current state.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub config: GasConfig,
    pub state: SimState,
    kernel: CollisionKernel,
    ladder: Ladder,
    invariant0: f64,
    /// Total accepted collisions so far.
    pub collisions: u64,
    /// Largest per-collision momentum error seen so far.
    pub momentum_error: f64,
}

impl Simulation {
    pub fn new(config: GasConfig) -> Result<Self> {
        let state = SimState::initial(&config)?;
        Self::with_state(config, state)
    }

    pub fn with_state(config: GasConfig, state: SimState) -> Result<Self> {
        config.validate()?;
        let kernel = CollisionKernel::new(
            config.mass,
            config.quantum(),
            config.n_max,
            config.ordering_rule,
        )?;
        let ladder = config.ladder()?;
        let invariant0 = state.ledger.invariant();
        Ok(Self {
            config,
            state,
            kernel,
            ladder,
            invariant0,
            collisions: 0,
            momentum_error: 0.0,
        })
    }

    pub fn ladder(&self) -> &Ladder {
        &self.ladder
    }

    /// Advances one Δt.
    pub fn step(&mut self) -> Result<StepReport> {
        let cfg = &self.config;
        let mut report = StepReport::default();
        let force = Vec3::from(cfg.force);
        self.state.ledger.e_work +=
            free_flight(&mut self.state, cfg.dt, &force, cfg.mass, cfg.box_length);

        if cfg.collisions {
            let pairs =
                select_collision_pairs(&self.state.particles, cfg, cfg.dt, &mut self.state.rng);
            for (i, j) in pairs {
                let (a, b) = (self.state.particles[i], self.state.particles[j]);
                let out = self.kernel.sample(&a, &b, &mut self.state.rng);
                let err = ((out.p_out + out.p1_out) - (a.p + b.p)).amax();
                report.momentum_error = report.momentum_error.max(err);
                report.quanta += out.quanta_transferred;
                report.collisions += 1;
                self.state.particles[i].p = out.p_out;
                self.state.particles[i].n = out.n_out;
                self.state.particles[j].p = out.p1_out;
                self.state.particles[j].n = out.n1_out;
            }
        }

        let (down, up) = apply_radiation(&mut self.state, &self.ladder, cfg.dt, cfg.quantum())?;
        report.emissions = down;
        report.absorptions = up;
        self.state.time += cfg.dt;
        self.state.refresh(cfg);
        self.collisions += report.collisions as u64;
        self.momentum_error = self.momentum_error.max(report.momentum_error);
        Ok(report)
    }

    /// |I(t) − I(0)| / |I(0)| for the ledger invariant I.
    pub fn ledger_drift(&self) -> f64 {
        (self.state.ledger.invariant() - self.invariant0).abs()
            / self.invariant0.abs().max(f64::MIN_POSITIVE)
    }

    pub fn record(&self, bins: usize) -> Record {
        observables(&self.state, &self.config, bins)
    }

    /// Runs `config.steps` steps, handing a record to `sink` at t = 0 and
    /// after every `stride` steps.
    pub fn run(
        &mut self,
        stride: u64,
        bins: usize,
        mut sink: impl FnMut(&Self, &Record) -> Result<()>,
    ) -> Result<()> {
        let stride = stride.max(1);
        sink(self, &self.record(bins))?;
        for k in 1..=self.config.steps {
            self.step()?;
            if k % stride == 0 {
                sink(self, &self.record(bins))?;
            }
        }
        Ok(())
    }
}
