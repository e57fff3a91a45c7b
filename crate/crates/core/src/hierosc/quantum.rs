//! Truncated Fock-space model of the four-particle chain (ħ = 1).
//!
//! Basis |n_A⟩⊗|n_0⟩⊗|n_1⟩ with index (n_A·n_cut + n_0)·n_cut + n_1. All
//! Hamiltonians built here are real symmetric.

use std::str::FromStr;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ChainSpec;
use crate::error::{config, domain, Error, Result};

/// Largest population allowed in the top Fock level of any mode.
pub const HEADROOM: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HamiltonianMode {
    /// Uncoupled oscillators.
    Free,
    /// Number-conserving (rotating-wave) part of the inter-block coupling.
    Hermitian,
    /// The complete expanded inter-block quadratic form.
    Full,
    /// Free oscillators plus one-way coarse → fine jumps a_i†A.
    ScaleOrdered,
}

impl FromStr for HamiltonianMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(Self::Free),
            "hermitian" => Ok(Self::Hermitian),
            "full" => Ok(Self::Full),
            "scale_ordered" | "scale-ordered" => Ok(Self::ScaleOrdered),
            other => config(format!(
                "unknown mode {other:?} (expected free, hermitian, full or scale_ordered)"
            )),
        }
    }
}

/// Single-mode annihilation operator on n_cut levels.
pub fn annihilation(n_cut: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n_cut, n_cut, |i, j| {
        if j == i + 1 {
            (j as f64).sqrt()
        } else {
            0.0
        }
    })
}

/// Dimensionless quadrature ξ = (a + a†)/√2.
pub fn quadrature(n_cut: usize) -> DMatrix<f64> {
    let a = annihilation(n_cut);
    (&a + a.transpose()) / std::f64::consts::SQRT_2
}

/// An operator on the three-mode product space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    pub matrix: DMatrix<f64>,
    pub n_cut: usize,
}

impl FockOperator {
    pub fn dim(&self) -> usize {
        self.n_cut.pow(3)
    }

    pub fn index(n_cut: usize, n_a: usize, n_0: usize, n_1: usize) -> usize {
        (n_a * n_cut + n_0) * n_cut + n_1
    }

    /// (n_A, n_0, n_1) of a basis index.
    pub fn occupations(n_cut: usize, idx: usize) -> (usize, usize, usize) {
        (idx / (n_cut * n_cut), (idx / n_cut) % n_cut, idx % n_cut)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (&self.matrix - self.matrix.transpose()).amax() <= tol
    }
}

/// Lifts a single-mode operator onto mode 0 (A), 1 (a₀) or 2 (a₁).
fn embed(op: &DMatrix<f64>, mode: usize) -> DMatrix<f64> {
    let id = DMatrix::identity(op.nrows(), op.ncols());
    let factors = [
        if mode == 0 { op } else { &id },
        if mode == 1 { op } else { &id },
        if mode == 2 { op } else { &id },
    ];
    factors[0].kronecker(factors[1]).kronecker(factors[2])
}

/// Hamiltonian and jump operators of one mode of operation.
#[derive(Debug, Clone)]
pub struct QuantumModel {
    pub spec: ChainSpec,
    pub mode: HamiltonianMode,
    pub hamiltonian: FockOperator,
    /// Free part Ω(N_A + ½) + ω(N₀ + N₁ + 1).
    pub free: FockOperator,
    /// Jump operators, already scaled by √γ.
    pub jumps: Vec<DMatrix<f64>>,
}

impl QuantumModel {
    pub fn n_cut(&self) -> usize {
        self.spec.n_cut
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    /// Fock product state |n_A, n_0, n_1⟩.
    pub fn fock_state(&self, n_a: usize, n_0: usize, n_1: usize) -> Result<DVector<Complex64>> {
        let n = self.n_cut();
        if n_a >= n || n_0 >= n || n_1 >= n {
            return domain(format!(
                "occupations ({n_a}, {n_0}, {n_1}) exceed n_cut = {n}"
            ));
        }
        let mut psi = DVector::zeros(self.dim());
        psi[FockOperator::index(n, n_a, n_0, n_1)] = Complex64::new(1.0, 0.0);
        Ok(psi)
    }
}

/// Coefficients of the inter-block coupling in ladder operators: the
/// coupling is (k̃₀/2)·Q² with Q = c_A·X_A − (c_a/2)(X₀ + X₁), X = (b + b†)/2.
pub fn coupling_coefficients(spec: &ChainSpec) -> (f64, f64) {
    let c_a_coarse = (spec.k1 * spec.m0).powf(-0.25);
    let c_a_fine = (spec.k0 * spec.mu0()).powf(-0.25);
    (c_a_coarse, c_a_fine)
}

/// Amplitude g of the a_i†A term of the coupling, k̃₀·c_A·c_a/8.
pub fn exchange_amplitude(spec: &ChainSpec) -> f64 {
    let (ca, cf) = coupling_coefficients(spec);
    spec.tilde_k0 * ca * cf / 8.0
}

/// One-way transfer rate γ = 2|g| of each jump a_i†A.
pub fn jump_rate(spec: &ChainSpec) -> f64 {
    2.0 * exchange_amplitude(spec).abs()
}

pub fn build_quantum_hamiltonian(spec: &ChainSpec, mode: HamiltonianMode) -> Result<QuantumModel> {
    spec.validate()?;
    let n = spec.n_cut;
    let big_omega = spec.coarse_frequency();
    let omega = spec.fine_frequency();
    let dim = n.pow(3);

    let free = DMatrix::from_fn(dim, dim, |i, j| {
        if i != j {
            return 0.0;
        }
        let (na, n0, n1) = FockOperator::occupations(n, i);
        big_omega * (na as f64 + 0.5) + omega * ((n0 + n1) as f64 + 1.0)
    });

    let a = annihilation(n);
    let x = (&a + a.transpose()) / 2.0;
    let (ca, cf) = coupling_coefficients(spec);
    let q = embed(&x, 0) * ca - (embed(&x, 1) + embed(&x, 2)) * (cf / 2.0);
    let coupling_full = (&q * &q) * (spec.tilde_k0 / 2.0);

    let mut jumps = Vec::new();
    let hamiltonian = match mode {
        HamiltonianMode::Free | HamiltonianMode::ScaleOrdered => free.clone(),
        HamiltonianMode::Full => &free + &coupling_full,
        HamiltonianMode::Hermitian => {
            let total = |k: usize| {
                let (na, n0, n1) = FockOperator::occupations(n, k);
                na + n0 + n1
            };
            let rwa = DMatrix::from_fn(dim, dim, |i, j| {
                if total(i) == total(j) {
                    coupling_full[(i, j)]
                } else {
                    0.0
                }
            });
            &free + rwa
        }
    };
    if mode == HamiltonianMode::ScaleOrdered {
        let big_a = embed(&a, 0);
        let root = jump_rate(spec).sqrt();
        for mode_idx in [1, 2] {
            let raise = embed(&a.transpose(), mode_idx);
            jumps.push(raise * &big_a * root);
        }
    }
    Ok(QuantumModel {
        spec: *spec,
        mode,
        hamiltonian: FockOperator {
            matrix: hamiltonian,
            n_cut: n,
        },
        free: FockOperator {
            matrix: free,
            n_cut: n,
        },
        jumps,
    })
}

/// Expectation values at one instant. In scale-ordered mode these are
/// averages over trajectories.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub occ_a: f64,
    pub occ_0: f64,
    pub occ_1: f64,
    pub norm: f64,
    /// ⟨H⟩.
    pub energy: f64,
    /// ⟨H⟩ − ⟨H_free⟩.
    pub coupling: f64,
    /// Energy handed to the environment so far: Ω − ω per jump, the exact
    /// spectral shift of a_i†A. Its ensemble mean balances ⟨H⟩.
    pub environment: f64,
}

impl Sample {
    pub fn total_quanta(&self) -> f64 {
        self.occ_a + self.occ_0 + self.occ_1
    }
}

struct Moments {
    occ: [f64; 3],
    norm: f64,
    energy: f64,
    free: f64,
}

fn moments(model: &QuantumModel, psi: &DVector<Complex64>) -> Result<Moments> {
    let n = model.n_cut();
    let mut occ = [0.0; 3];
    let mut top = [0.0; 3];
    let mut norm = 0.0;
    for (k, amp) in psi.iter().enumerate() {
        let w = amp.norm_sqr();
        norm += w;
        let (na, n0, n1) = FockOperator::occupations(n, k);
        for (m, level) in [na, n0, n1].into_iter().enumerate() {
            occ[m] += w * level as f64;
            if level == n - 1 {
                top[m] += w;
            }
        }
    }
    if let Some(m) = top.iter().position(|&t| t / norm > HEADROOM) {
        return Err(Error::Runtime(format!(
            "truncation overflow: top Fock level of mode {} holds {:.3e} > {HEADROOM:e}; increase n_cut (now {n})",
            ["A", "a0", "a1"][m],
            top[m] / norm
        )));
    }
    let expect = |h: &DMatrix<f64>| -> f64 {
        let re = DVector::from_iterator(psi.len(), psi.iter().map(|c| c.re));
        let im = DVector::from_iterator(psi.len(), psi.iter().map(|c| c.im));
        re.dot(&(h * &re)) + im.dot(&(h * &im))
    };
    let energy = expect(&model.hamiltonian.matrix);
    let free = expect(&model.free.matrix);
    Ok(Moments {
        occ: occ.map(|o| o / norm),
        norm,
        energy: energy / norm,
        free: free / norm,
    })
}

/// Evolves `psi0` over `times` (ascending, starting at any t ≥ 0 relative to
/// the initial state at t = 0).
///
/// Hermitian modes propagate exactly through the eigendecomposition of H.
/// Scale-ordered mode averages `trajectories` quantum-jump trajectories with
/// the waiting-time algorithm; trajectory k uses stream k of `seed`.
pub fn evolve(
    model: &QuantumModel,
    psi0: &DVector<Complex64>,
    times: &[f64],
    trajectories: usize,
    seed: u64,
) -> Result<Vec<Sample>> {
    if psi0.len() != model.dim() {
        return domain(format!(
            "state has dimension {}, model needs {}",
            psi0.len(),
            model.dim()
        ));
    }
    let norm0 = psi0.norm_squared();
    if (norm0 - 1.0).abs() > 1e-9 {
        return domain(format!("initial state must be normalized, |ψ|² = {norm0}"));
    }
    if times.windows(2).any(|w| w[1] < w[0]) || times.first().is_some_and(|&t| t < 0.0) {
        return domain("time grid must be non-negative and ascending");
    }
    if model.jumps.is_empty() {
        evolve_unitary(model, psi0, times)
    } else {
        if trajectories == 0 {
            return domain("scale-ordered evolution needs at least one trajectory");
        }
        evolve_jumps(model, psi0, times, trajectories, seed)
    }
}

fn evolve_unitary(
    model: &QuantumModel,
    psi0: &DVector<Complex64>,
    times: &[f64],
) -> Result<Vec<Sample>> {
    let eig = SymmetricEigen::new(model.hamiltonian.matrix.clone());
    let vectors = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
    let coeffs = vectors.adjoint() * psi0;
    times
        .iter()
        .map(|&t| {
            let phased = DVector::from_iterator(
                coeffs.len(),
                coeffs
                    .iter()
                    .zip(eig.eigenvalues.iter())
                    .map(|(c, &l)| c * Complex64::from_polar(1.0, -l * t)),
            );
            let psi = &vectors * phased;
            let m = moments(model, &psi)?;
            Ok(Sample {
                t,
                occ_a: m.occ[0],
                occ_0: m.occ[1],
                occ_1: m.occ[2],
                norm: m.norm,
                energy: m.energy,
                coupling: m.energy - m.free,
                environment: 0.0,
            })
        })
        .collect()
}

fn diagonal(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    let off = DMatrix::from_fn(
        m.nrows(),
        m.ncols(),
        |i, j| if i == j { 0.0 } else { m[(i, j)] },
    );
    if off.amax() > 0.0 {
        return domain("jump unraveling needs a Fock-diagonal effective Hamiltonian");
    }
    Ok(m.diagonal().iter().copied().collect())
}

/// One trajectory's unnormalized state between jumps.
struct Trajectory {
    psi: DVector<Complex64>,
    threshold: f64,
    environment: f64,
}

fn evolve_jumps(
    model: &QuantumModel,
    psi0: &DVector<Complex64>,
    times: &[f64],
    trajectories: usize,
    seed: u64,
) -> Result<Vec<Sample>> {
    let energies = diagonal(&model.hamiltonian.matrix)?;
    let decay_op = model
        .jumps
        .iter()
        .fold(DMatrix::zeros(model.dim(), model.dim()), |acc, l| {
            acc + l.transpose() * l
        });
    let decay = diagonal(&decay_op)?;

    let mut sums = vec![[0.0f64; 7]; times.len()];
    for k in 0..trajectories {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let mut traj = Trajectory {
            psi: psi0.clone(),
            threshold: rng.random(),
            environment: 0.0,
        };
        let mut now = 0.0;
        for (slot, &t) in sums.iter_mut().zip(times) {
            advance(model, &energies, &decay, &mut traj, t - now, &mut rng)?;
            now = t;
            let normalized = &traj.psi / Complex64::new(traj.psi.norm(), 0.0);
            let m = moments(model, &normalized)?;
            let values = [
                m.occ[0],
                m.occ[1],
                m.occ[2],
                m.norm,
                m.energy,
                m.energy - m.free,
                traj.environment,
            ];
            for (s, v) in slot.iter_mut().zip(values) {
                *s += v;
            }
        }
    }
    let count = trajectories as f64;
    Ok(times
        .iter()
        .zip(sums)
        .map(|(&t, s)| Sample {
            t,
            occ_a: s[0] / count,
            occ_0: s[1] / count,
            occ_1: s[2] / count,
            norm: s[3] / count,
            energy: s[4] / count,
            coupling: s[5] / count,
            environment: s[6] / count,
        })
        .collect())
}

/// Advances a trajectory by `span`, jumping whenever the decaying norm²
/// reaches the trajectory's threshold.
fn advance(
    model: &QuantumModel,
    energies: &[f64],
    decay: &[f64],
    traj: &mut Trajectory,
    mut span: f64,
    rng: &mut ChaCha8Rng,
) -> Result<()> {
    let norm_after = |psi: &DVector<Complex64>, tau: f64| -> f64 {
        psi.iter()
            .zip(decay)
            .map(|(c, g)| c.norm_sqr() * (-g * tau).exp())
            .sum()
    };
    let propagate = |psi: &mut DVector<Complex64>, tau: f64| {
        for ((c, &e), &g) in psi.iter_mut().zip(energies).zip(decay) {
            *c *= Complex64::new(-0.5 * g * tau, -e * tau).exp();
        }
    };
    while span > 0.0 {
        if norm_after(&traj.psi, span) > traj.threshold {
            propagate(&mut traj.psi, span);
            return Ok(());
        }
        // norm² is monotone in τ, bisect for the jump time.
        let (mut lo, mut hi) = (0.0, span);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if norm_after(&traj.psi, mid) > traj.threshold {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * span {
                break;
            }
        }
        propagate(&mut traj.psi, hi);
        span -= hi;

        let normalized = &traj.psi / Complex64::new(traj.psi.norm(), 0.0);
        let candidates: Vec<DVector<Complex64>> = model
            .jumps
            .iter()
            .map(|l| l.map(|x| Complex64::new(x, 0.0)) * &normalized)
            .collect();
        let weights: Vec<f64> = candidates.iter().map(|c| c.norm_squared()).collect();
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::Runtime(
                "jump requested from a state no jump operator reaches".into(),
            ));
        }
        let mut pick = rng.random::<f64>() * total;
        let mut chosen = candidates.len() - 1;
        for (i, w) in weights.iter().enumerate() {
            if pick < *w {
                chosen = i;
                break;
            }
            pick -= w;
        }
        let jumped = &candidates[chosen] / Complex64::new(weights[chosen].sqrt(), 0.0);
        traj.environment += model.spec.coarse_frequency() - model.spec.fine_frequency();
        traj.psi = jumped;
        traj.threshold = rng.random();
    }
    Ok(())
}
