//! Hierarchic oscillator chain: pairs of atoms form molecules, pairs of
//! molecules form the next block, and so on.
//!
//! The classical part works for any 2^L particles. The quantum part is the
//! four-particle chain with one coarse mode (A, frequency Ω) and two fine
//! modes (a₀, a₁, frequency ω), see [`quantum`].

pub mod quantum;

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub use quantum::{
    build_quantum_hamiltonian, evolve, FockOperator, HamiltonianMode, QuantumModel, Sample,
};

/// Masses and spring constants of the four-particle chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpec {
    pub m0: f64,
    /// Intra-molecule rigidity.
    pub k0: f64,
    /// Inter-molecule rigidity.
    pub k1: f64,
    /// Rigidity of the spring joining neighbouring blocks.
    pub tilde_k0: f64,
    /// Fock levels kept per mode.
    pub n_cut: usize,
}

impl ChainSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("m0", self.m0), ("k0", self.k0), ("k1", self.k1)] {
            if !(v.is_finite() && v > 0.0) {
                return domain(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.tilde_k0.is_finite() && self.tilde_k0 >= 0.0) {
            return domain(format!(
                "tilde_k0 must be non-negative, got {}",
                self.tilde_k0
            ));
        }
        if self.n_cut < 2 {
            return domain(format!("n_cut must be at least 2, got {}", self.n_cut));
        }
        Ok(())
    }

    /// Reduced mass of one molecule, m₀/2.
    pub fn mu0(&self) -> f64 {
        self.m0 / 2.0
    }

    /// Coarse-mode frequency Ω = √(k₁/m₀).
    pub fn coarse_frequency(&self) -> f64 {
        (self.k1 / self.m0).sqrt()
    }

    /// Fine-mode frequency ω = √(k₀/μ₀).
    pub fn fine_frequency(&self) -> f64 {
        (self.k0 / self.mu0()).sqrt()
    }
}

/// Centre-of-mass coordinates and displacements of every level above the
/// particles. Index 0 holds level 1 (molecules), the last entry the top
/// level with a single element.
#[derive(Debug, Clone, PartialEq)]
pub struct HierCoords {
    pub s_levels: Vec<Vec<f64>>,
    pub d_levels: Vec<Vec<f64>>,
}

impl HierCoords {
    pub fn depth(&self) -> usize {
        self.d_levels.len()
    }

    /// s^j for j ≥ 1.
    pub fn s(&self, level: usize) -> &[f64] {
        &self.s_levels[level - 1]
    }

    /// d^j for j ≥ 1.
    pub fn d(&self, level: usize) -> &[f64] {
        &self.d_levels[level - 1]
    }

    pub fn top(&self) -> f64 {
        self.s_levels.last().map_or(0.0, |s| s[0])
    }
}

/// s^{j+1}_i = (s^j_{2i} + s^j_{2i+1})/2, d^{j+1}_i = s^j_{2i} − s^j_{2i+1}.
pub fn to_hierarchical(positions: &[f64]) -> Result<HierCoords> {
    let n = positions.len();
    if n < 2 || !n.is_power_of_two() {
        return domain(format!(
            "need a power-of-two number of positions ≥ 2, got {n}"
        ));
    }
    let mut s_levels = Vec::new();
    let mut d_levels = Vec::new();
    let mut current = positions.to_vec();
    while current.len() > 1 {
        let (s, d): (Vec<f64>, Vec<f64>) = current
            .chunks_exact(2)
            .map(|pair| ((pair[0] + pair[1]) / 2.0, pair[0] - pair[1]))
            .unzip();
        d_levels.push(d);
        s_levels.push(s.clone());
        current = s;
    }
    Ok(HierCoords { s_levels, d_levels })
}

/// s^j_{2i} = s^{j+1}_i + d^{j+1}_i/2, s^j_{2i+1} = s^{j+1}_i − d^{j+1}_i/2.
///
/// Only the top centre of mass and the displacements are used; intermediate
/// s levels are checked for shape.
pub fn from_hierarchical(coords: &HierCoords) -> Result<Vec<f64>> {
    let depth = coords.d_levels.len();
    if depth == 0 || coords.s_levels.len() != depth {
        return domain(format!(
            "s and d must have the same non-zero number of levels, got {} and {depth}",
            coords.s_levels.len()
        ));
    }
    for (j, (s, d)) in coords.s_levels.iter().zip(&coords.d_levels).enumerate() {
        let want = 1usize << (depth - 1 - j);
        if s.len() != want || d.len() != want {
            return domain(format!(
                "level {} must hold {want} entries, got s: {} d: {}",
                j + 1,
                s.len(),
                d.len()
            ));
        }
    }
    let mut current = coords.s_levels[depth - 1].clone();
    for d in coords.d_levels.iter().rev() {
        current = current
            .iter()
            .zip(d)
            .flat_map(|(&s, &d)| [s + d / 2.0, s - d / 2.0])
            .collect();
    }
    Ok(current)
}

fn check_four(positions: &[f64], what: &str) -> Result<()> {
    if positions.len() != 4 {
        return domain(format!("{what} needs 4 particles, got {}", positions.len()));
    }
    Ok(())
}

/// Chain energy in particle coordinates: kinetic energy of the four atoms,
/// intra-molecule springs (s₀ − s₁), (s₂ − s₃) and the molecule-molecule
/// spring between the two molecular centres.
pub fn classical_energy(spec: &ChainSpec, positions: &[f64], velocities: &[f64]) -> Result<f64> {
    check_four(positions, "classical_energy")?;
    check_four(velocities, "classical_energy")?;
    let x = positions;
    let kinetic = spec.m0 / 2.0 * velocities.iter().map(|v| v * v).sum::<f64>();
    let intra = spec.k0 / 2.0 * ((x[0] - x[1]).powi(2) + (x[2] - x[3]).powi(2));
    let inter = spec.k1 / 2.0 * ((x[0] + x[1]) / 2.0 - (x[2] + x[3]) / 2.0).powi(2);
    Ok(kinetic + intra + inter)
}

/// Energy as two independent scales,
/// m₀(ḋ²₀)²/2 + k₁(d²₀)²/2 + (m₀/4)Σ(ḋ¹ᵢ)² + (k₀/2)Σ(d¹ᵢ)².
///
/// Valid only when the chain's centre of mass is at rest.
pub fn decomposed_energy(spec: &ChainSpec, coords: &HierCoords, rates: &HierCoords) -> Result<f64> {
    if coords.depth() != 2 || rates.depth() != 2 {
        return domain("decomposed_energy needs the two-level (4-particle) chain");
    }
    let scale = rates
        .d_levels
        .iter()
        .flatten()
        .map(|v| v.abs())
        .sum::<f64>()
        .max(rates.top().abs());
    if rates.top().abs() > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return domain(format!(
            "centre-of-mass velocity must vanish (zero total momentum), got {}",
            rates.top()
        ));
    }
    let coarse = spec.m0 * rates.d(2)[0].powi(2) / 2.0 + spec.k1 / 2.0 * coords.d(2)[0].powi(2);
    let fine = spec.m0 / 4.0 * rates.d(1).iter().map(|v| v * v).sum::<f64>()
        + spec.k0 / 2.0 * coords.d(1).iter().map(|d| d * d).sum::<f64>();
    Ok(coarse + fine)
}

/// Spring between neighbouring blocks, (k̃₀/2)(d²₀ − (d¹₀ + d¹₁)/2)².
pub fn interblock_energy(spec: &ChainSpec, coords: &HierCoords) -> Result<f64> {
    if coords.depth() != 2 {
        return domain("interblock_energy needs the two-level (4-particle) chain");
    }
    let bracket = coords.d(2)[0] - (coords.d(1)[0] + coords.d(1)[1]) / 2.0;
    Ok(spec.tilde_k0 / 2.0 * bracket * bracket)
}

/// The same spring in particle coordinates, (k̃₀/2)(s⁰₁ − s⁰₂)².
pub fn interblock_energy_direct(spec: &ChainSpec, positions: &[f64]) -> Result<f64> {
    check_four(positions, "interblock_energy_direct")?;
    Ok(spec.tilde_k0 / 2.0 * (positions[1] - positions[2]).powi(2))
}

/// Stiffness matrix of the four-atom chain (without the inter-block spring).
pub fn stiffness_matrix(spec: &ChainSpec) -> Matrix4<f64> {
    let springs = [
        (spec.k0, Vector4::new(1.0, -1.0, 0.0, 0.0)),
        (spec.k0, Vector4::new(0.0, 0.0, 1.0, -1.0)),
        (spec.k1, Vector4::new(0.5, 0.5, -0.5, -0.5)),
    ];
    springs
        .iter()
        .fold(Matrix4::zeros(), |k, (c, e)| k + e * e.transpose() * *c)
}

/// Small-oscillation angular frequencies, ascending; the first is the free
/// translation (zero).
pub fn normal_mode_frequencies(spec: &ChainSpec) -> Vec<f64> {
    let dynamical = stiffness_matrix(spec) / spec.m0;
    let mut freqs: Vec<f64> = SymmetricEigen::new(dynamical)
        .eigenvalues
        .iter()
        .map(|l| l.max(0.0).sqrt())
        .collect();
    freqs.sort_by(f64::total_cmp);
    freqs
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn spec() -> ChainSpec {
        ChainSpec {
            m0: 1.3,
            k0: 2.0,
            k1: 0.7,
            tilde_k0: 0.4,
            n_cut: 4,
        }
    }

    #[test]
    fn four_point_example() {
        let h = to_hierarchical(&[0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(h.s(1), &[0.5, 2.5]);
        assert_eq!(h.d(1), &[-1.0, -1.0]);
        assert_eq!(h.s(2), &[1.5]);
        assert_eq!(h.d(2), &[-2.0]);
        assert_eq!(from_hierarchical(&h).unwrap(), vec![0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn constant_positions() {
        let h = to_hierarchical(&[2.5; 8]).unwrap();
        assert!(h.d_levels.iter().flatten().all(|&d| d == 0.0));
        assert_eq!(h.top(), 2.5);
        assert_eq!(from_hierarchical(&h).unwrap(), vec![2.5; 8]);
    }

    #[test]
    fn shape_errors() {
        assert!(to_hierarchical(&[1.0, 2.0, 3.0]).is_err());
        assert!(to_hierarchical(&[1.0]).is_err());
        let mut h = to_hierarchical(&[0.0, 1.0, 2.0, 3.0]).unwrap();
        h.d_levels[0].pop();
        assert!(from_hierarchical(&h).is_err());
    }

    #[test]
    fn rest_is_zero_energy() {
        let x = [0.0; 4];
        assert_eq!(classical_energy(&spec(), &x, &x).unwrap(), 0.0);
        let h = to_hierarchical(&x).unwrap();
        assert_eq!(decomposed_energy(&spec(), &h, &h).unwrap(), 0.0);
    }

    #[test]
    fn moving_centre_is_rejected() {
        let x = to_hierarchical(&[0.0; 4]).unwrap();
        let v = to_hierarchical(&[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert!(decomposed_energy(&spec(), &x, &v).is_err());
    }

    #[test]
    fn interblock_vanishes_when_bracket_does() {
        // d²₀ = (d¹₀ + d¹₁)/2 ⇔ s⁰₁ = s⁰₂
        let h = to_hierarchical(&[0.3, 1.0, 1.0, 2.2]).unwrap();
        assert!(interblock_energy(&spec(), &h).unwrap().abs() < 1e-30);
        let free = ChainSpec {
            tilde_k0: 0.0,
            ..spec()
        };
        let h = to_hierarchical(&[0.0, 1.0, 5.0, 3.0]).unwrap();
        assert_eq!(interblock_energy(&free, &h).unwrap(), 0.0);
    }

    #[test]
    fn normal_modes() {
        let s = spec();
        let f = normal_mode_frequencies(&s);
        assert!(f[0].abs() < 1e-7);
        let mut want = [s.coarse_frequency(), s.fine_frequency(), s.fine_frequency()];
        want.sort_by(f64::total_cmp);
        for (got, want) in f[1..].iter().zip(want) {
            assert_relative_eq!(*got, want, max_relative = 1e-9);
        }
    }

    proptest! {
        #[test]
        fn round_trip(level in 1usize..6, seed in proptest::collection::vec(-1e3f64..1e3, 32)) {
            let x = &seed[..1 << level];
            let back = from_hierarchical(&to_hierarchical(x).unwrap()).unwrap();
            for (a, b) in x.iter().zip(&back) {
                prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
            }
        }

        #[test]
        fn transform_is_linear(x in proptest::collection::vec(-10f64..10.0, 8),
                               y in proptest::collection::vec(-10f64..10.0, 8),
                               c in -3f64..3.0) {
            let hx = to_hierarchical(&x).unwrap();
            let hy = to_hierarchical(&y).unwrap();
            let z: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + c * b).collect();
            let hz = to_hierarchical(&z).unwrap();
            for (lz, (lx, ly)) in hz.d_levels.iter().zip(hx.d_levels.iter().zip(&hy.d_levels)) {
                for (dz, (dx, dy)) in lz.iter().zip(lx.iter().zip(ly)) {
                    prop_assert!((dz - (dx + c * dy)).abs() < 1e-11);
                }
            }
        }

        #[test]
        fn interblock_agrees_across_coordinates(x in proptest::collection::vec(-5f64..5.0, 4)) {
            let s = spec();
            let h = to_hierarchical(&x).unwrap();
            let a = interblock_energy(&s, &h).unwrap();
            let b = interblock_energy_direct(&s, &x).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b));
        }
    }
}
