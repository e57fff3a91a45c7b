//! Binary-collision kernel with quantized energy transfer.
//!
//! A collision conserves total momentum and spends N quanta of the pair's
//! relative kinetic energy on the internal oscillators. With the ordering
//! rule in force the transfer is one-way: levels never decrease and internal
//! energy never returns to translation.

use nalgebra::Vector3;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub type Vec3 = Vector3<f64>;

/// One molecule: position, momentum and vibrational level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Particle {
    pub x: Vec3,
    pub p: Vec3,
    pub n: u32,
}

impl Particle {
    pub fn new(x: Vec3, p: Vec3, n: u32) -> Self {
        Self { x, p, n }
    }

    pub fn kinetic(&self, mass: f64) -> f64 {
        self.p.norm_squared() / (2.0 * mass)
    }
}

/// Kinetic energy on a fixed-point grid of 2⁻⁶⁴, rounded down.
///
/// Sums of these are exact, so a total built from them is monotone whenever
/// every pair update is.
pub fn kinetic_fixed(p: &Vec3, mass: f64) -> i128 {
    const SCALE: f64 = 18_446_744_073_709_551_616.0; // 2^64
    (p.norm_squared() / (2.0 * mass) * SCALE) as i128
}

/// Converts a fixed-point kinetic total back to energy units.
pub fn fixed_to_energy(q: i128) -> f64 {
    const SCALE: f64 = 18_446_744_073_709_551_616.0;
    q as f64 / SCALE
}

/// ΔQ = (p² + p₁² − p′² − p₁′²)/(2m).
pub fn delta_q(p: &Vec3, p1: &Vec3, p_prime: &Vec3, p1_prime: &Vec3, mass: f64) -> f64 {
    ((p.norm_squared() - p_prime.norm_squared()) + (p1.norm_squared() - p1_prime.norm_squared()))
        / (2.0 * mass)
}

/// Kinetic energy of the pair's relative motion, g²/m with g = (p − p₁)/2.
pub fn relative_energy(p: &Vec3, p1: &Vec3, mass: f64) -> f64 {
    let g = (p - p1) * 0.5;
    g.norm_squared() / mass
}

/// Number of ways to split `n` quanta between two oscillators.
pub fn split_count(n: u32) -> u64 {
    u64::from(n) + 1
}

/// Law of the number of quanta N taken from relative motion: P(N) ∝ N + 1 on
/// 0..=N_eff.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferDistribution {
    probs: Vec<f64>,
}

impl TransferDistribution {
    /// N_eff = min(n_max, ⌊e_rel/quantum⌋).
    pub fn new(e_rel: f64, quantum: f64, n_max: u32) -> Result<Self> {
        if !(e_rel >= 0.0) || !e_rel.is_finite() {
            return domain(format!(
                "relative energy must be finite and non-negative, got {e_rel}"
            ));
        }
        if !(quantum > 0.0) {
            return domain(format!("energy quantum must be positive, got {quantum}"));
        }
        let fits = (e_rel / quantum).floor();
        let n_eff = if fits >= f64::from(n_max) {
            n_max
        } else {
            fits as u32
        };
        Ok(Self::from_weights(
            (0..=n_eff).map(|n| split_count(n) as f64),
        ))
    }

    fn from_weights(weights: impl Iterator<Item = f64>) -> Self {
        let w: Vec<f64> = weights.collect();
        let total: f64 = w.iter().sum();
        Self {
            probs: w.into_iter().map(|x| x / total).collect(),
        }
    }

    pub fn n_eff(&self) -> u32 {
        (self.probs.len() - 1) as u32
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (n, &p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return n as u32;
            }
        }
        self.n_eff()
    }
}

/// Splits `n_quanta` into (Δn_a, Δn_b), each of the N + 1 compositions
/// equally likely.
pub fn partition_quanta<R: Rng + ?Sized>(n_quanta: u32, rng: &mut R) -> (u32, u32) {
    if n_quanta == 0 {
        return (0, 0);
    }
    let a = rng.random_range(0..=n_quanta);
    (a, n_quanta - a)
}

/// Post-collision state of a pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionOutcome {
    pub p_out: Vec3,
    pub p1_out: Vec3,
    pub n_out: u32,
    pub n1_out: u32,
    /// Quanta moved from translation into the oscillators. Negative only
    /// when the ordering rule is off and the pair de-excited.
    pub quanta_transferred: i64,
}

/// Collision parameters shared by every pair of a gas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionKernel {
    pub mass: f64,
    /// ħω in the caller's energy units.
    pub quantum: f64,
    pub n_max: u32,
    /// Forbid internal → kinetic transfer.
    pub ordering_rule: bool,
}

impl CollisionKernel {
    pub fn new(mass: f64, quantum: f64, n_max: u32, ordering_rule: bool) -> Result<Self> {
        if !(mass > 0.0) {
            return domain(format!("mass must be positive, got {mass}"));
        }
        if !(quantum > 0.0) {
            return domain(format!("energy quantum must be positive, got {quantum}"));
        }
        Ok(Self {
            mass,
            quantum,
            n_max,
            ordering_rule,
        })
    }

    /// Samples the outcome of a collision between `a` and `b`.
    ///
    /// Works in the centre-of-mass frame: P = p_a + p_b is kept, the relative
    /// momentum g = (p_a − p_b)/2 is rescaled to the post-transfer energy and
    /// given an isotropic direction. With the ordering rule on, the pair's
    /// fixed-point kinetic total never increases.
    pub fn sample<R: Rng + ?Sized>(
        &self,
        a: &Particle,
        b: &Particle,
        rng: &mut R,
    ) -> CollisionOutcome {
        let unchanged = CollisionOutcome {
            p_out: a.p,
            p1_out: b.p,
            n_out: a.n,
            n1_out: b.n,
            quanta_transferred: 0,
        };
        let g = (a.p - b.p) * 0.5;
        if g.norm_squared() == 0.0 {
            return unchanged;
        }
        let e_rel = g.norm_squared() / self.mass;

        let forward = self.ordering_rule || rng.random_bool(0.5);
        let (quanta, n_out, n1_out) = if forward {
            // e_rel is finite and non-negative here, quantum validated at construction.
            let dist = TransferDistribution::new(e_rel, self.quantum, self.n_max)
                .expect("validated transfer inputs");
            let n = dist.sample(rng);
            let (da, db) = partition_quanta(n, rng);
            (i64::from(n), a.n + da, b.n + db)
        } else {
            let (n, da, db) = self.sample_release(a.n, b.n, rng);
            (-i64::from(n), a.n - da, b.n - db)
        };

        let e_after = e_rel - quanta as f64 * self.quantum;
        let g_len = (self.mass * e_after.max(0.0)).sqrt();
        let total = a.p + b.p;
        let half = total * 0.5;
        let mut g_out = isotropic_unit(rng) * g_len;
        let budget = kinetic_fixed(&a.p, self.mass) + kinetic_fixed(&b.p, self.mass);

        let mut p_out = half + g_out;
        let mut p1_out = total - p_out;
        if forward {
            // Round-off can lift an elastic pair by an ulp; shave it off.
            let mut tries = 0;
            while kinetic_fixed(&p_out, self.mass) + kinetic_fixed(&p1_out, self.mass) > budget {
                tries += 1;
                if tries > 64 {
                    return unchanged;
                }
                g_out *= 1.0 - 4.0 * f64::EPSILON;
                p_out = half + g_out;
                p1_out = total - p_out;
            }
        }
        CollisionOutcome {
            p_out,
            p1_out,
            n_out,
            n1_out,
            quanta_transferred: quanta,
        }
    }

    /// De-excitation draw used only without the ordering rule. Weights count
    /// the ways to remove N quanta from levels (na, nb).
    fn sample_release<R: Rng + ?Sized>(&self, na: u32, nb: u32, rng: &mut R) -> (u32, u32, u32) {
        let top = self.n_max.min(na + nb);
        let ways =
            |n: u32| -> Vec<u32> { (0..=n).filter(|&da| da <= na && n - da <= nb).collect() };
        let weights: Vec<f64> = (0..=top).map(|n| ways(n).len() as f64).collect();
        let dist = TransferDistribution::from_weights(weights.into_iter());
        let n = dist.sample(rng);
        let options = ways(n);
        let da = options[rng.random_range(0..options.len())];
        (n, da, n - da)
    }
}

/// One-way collision of equal-mass molecules with ħω = `quantum`.
pub fn sample_collision<R: Rng + ?Sized>(
    a: &Particle,
    b: &Particle,
    mass: f64,
    quantum: f64,
    n_max: u32,
    rng: &mut R,
) -> Result<CollisionOutcome> {
    Ok(CollisionKernel::new(mass, quantum, n_max, true)?.sample(a, b, rng))
}

/// Uniform direction on the unit sphere.
pub fn isotropic_unit<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    let cos_t: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
    Vec3::new(sin_t * phi.cos(), sin_t * phi.sin(), cos_t)
}
