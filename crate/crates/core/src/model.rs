//! Static description of the driven qubit pair.
//!
//! Energies are measured in units of the single-qubit tunnelling amplitude
//! and times in units of its inverse (`hbar = 1`).

use nalgebra::Matrix4;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::pauli::{pauli_product, Pauli};

/// Tunnelling amplitudes, coupling and phenomenological damping of the pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitPairParams {
    pub delta1: f64,
    pub delta2: f64,
    pub g: f64,
    pub gamma_phi1: f64,
    pub gamma_phi2: f64,
    pub gamma_r1: f64,
    pub gamma_r2: f64,
    pub zt1: f64,
    pub zt2: f64,
}

impl QubitPairParams {
    /// Two identical qubits sharing dephasing, relaxation and equilibrium polarization.
    pub fn identical(delta: f64, g: f64, gamma_phi: f64, gamma_r: f64, zt: f64) -> Self {
        Self {
            delta1: delta,
            delta2: delta,
            g,
            gamma_phi1: gamma_phi,
            gamma_phi2: gamma_phi,
            gamma_r1: gamma_r,
            gamma_r2: gamma_r,
            zt1: zt,
            zt2: zt,
        }
    }

    /// Same as `identical` with every damping rate set to zero.
    pub fn undamped(delta: f64, g: f64) -> Self {
        Self::identical(delta, g, 0.0, 0.0, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("delta1", self.delta1), ("delta2", self.delta2)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(name, format!("must be finite and > 0, got {v}")));
            }
        }
        if !self.g.is_finite() {
            return Err(Error::param("g", "must be finite"));
        }
        for (name, v) in [
            ("gamma_phi1", self.gamma_phi1),
            ("gamma_phi2", self.gamma_phi2),
            ("gamma_r1", self.gamma_r1),
            ("gamma_r2", self.gamma_r2),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::param(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        for (name, v) in [("zt1", self.zt1), ("zt2", self.zt2)] {
            if !(v.is_finite() && v.abs() <= 1.0) {
                return Err(Error::param(name, format!("must satisfy |zt| <= 1, got {v}")));
            }
        }
        Ok(())
    }

    pub fn max_delta(&self) -> f64 {
        self.delta1.max(self.delta2)
    }
}

/// Pump tone, weak tone and white-noise intensity applied to both qubits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriveParams {
    pub amp_pump: f64,
    pub omega_pump: f64,
    pub amp_weak: f64,
    pub omega_weak: f64,
    pub noise_d: f64,
    /// Phase offset of the weak tone relative to the pump, in radians.
    pub phase_weak: f64,
}

impl DriveParams {
    pub fn new(amp_pump: f64, omega_pump: f64, amp_weak: f64, omega_weak: f64, noise_d: f64) -> Self {
        Self {
            amp_pump,
            omega_pump,
            amp_weak,
            omega_weak,
            noise_d,
            phase_weak: 0.0,
        }
    }

    pub fn none() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("amp_pump", self.amp_pump),
            ("amp_weak", self.amp_weak),
            ("noise_d", self.noise_d),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::param(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        if self.amp_pump > 0.0 && !(self.omega_pump.is_finite() && self.omega_pump > 0.0) {
            return Err(Error::param("omega_pump", "must be > 0 when amp_pump is nonzero"));
        }
        if self.amp_weak > 0.0 && !(self.omega_weak.is_finite() && self.omega_weak > 0.0) {
            return Err(Error::param("omega_weak", "must be > 0 when amp_weak is nonzero"));
        }
        if !self.phase_weak.is_finite() {
            return Err(Error::param("phase_weak", "must be finite"));
        }
        Ok(())
    }

    /// Noiseless part of the bias, identical for both qubits.
    #[inline]
    pub fn deterministic(&self, t: f64) -> f64 {
        self.amp_pump * (self.omega_pump * t).sin()
            + self.amp_weak * (self.omega_weak * t + self.phase_weak).sin()
    }

    /// Standard deviation of the per-step noise bias for step `dt`.
    #[inline]
    pub fn noise_scale(&self, dt: f64) -> f64 {
        if self.noise_d == 0.0 {
            0.0
        } else {
            (2.0 * self.noise_d / dt).sqrt()
        }
    }
}

/// The four inter-level transition frequencies of the undriven identical pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransitionFrequencies {
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
    pub omega4: f64,
}

impl TransitionFrequencies {
    pub fn as_array(&self) -> [f64; 4] {
        [self.omega1, self.omega2, self.omega3, self.omega4]
    }

    /// Look up `omega1`..`omega4` by one-based index.
    pub fn get(&self, index: usize) -> Option<f64> {
        match index {
            1 => Some(self.omega1),
            2 => Some(self.omega2),
            3 => Some(self.omega3),
            4 => Some(self.omega4),
            _ => None,
        }
    }
}

pub fn transition_frequencies(delta: f64, g: f64) -> Result<TransitionFrequencies> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::param("delta", format!("must be finite and > 0, got {delta}")));
    }
    if !(g.is_finite() && g >= 0.0) {
        return Err(Error::param("g", format!("must be finite and >= 0, got {g}")));
    }
    let r = delta.hypot(g);
    Ok(TransitionFrequencies {
        omega1: 2.0 * r,
        omega2: r - g,
        omega3: r + g,
        omega4: 2.0 * g,
    })
}

/// Two-qubit Hamiltonian with biases `eps1`, `eps2` in the computational product basis.
pub fn hamiltonian_matrix(params: &QubitPairParams, eps1: f64, eps2: f64) -> Matrix4<C64> {
    let zi = pauli_product(Pauli::Z, Pauli::I);
    let iz = pauli_product(Pauli::I, Pauli::Z);
    let xi = pauli_product(Pauli::X, Pauli::I);
    let ix = pauli_product(Pauli::I, Pauli::X);
    let xx = pauli_product(Pauli::X, Pauli::X);
    let c = |v: f64| C64::new(v, 0.0);
    (zi * c(params.delta1) + iz * c(params.delta2) + xi * c(eps1) + ix * c(eps2)) * c(-0.5)
        + xx * c(params.g)
}

/// Bias applied to each qubit at time `t`.
///
/// `noise` holds one independent standard-normal sample per qubit; it is
/// scaled by `sqrt(2 D / dt)`, the discrete-time white-noise convention.
pub fn drive_value(drive: &DriveParams, t: f64, noise: [f64; 2], dt: f64) -> Result<(f64, f64)> {
    if drive.noise_d > 0.0 && !(dt > 0.0) {
        return Err(Error::param("dt", "must be > 0 when noise_d > 0"));
    }
    let base = drive.deterministic(t);
    let s = drive.noise_scale(dt);
    Ok((base + s * noise[0], base + s * noise[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, SQRT_2};

    fn sorted_eigenvalues(h: &Matrix4<C64>) -> Vec<f64> {
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }

    fn pairwise_gaps(ev: &[f64]) -> Vec<f64> {
        let mut gaps = Vec::new();
        for i in 0..ev.len() {
            for j in i + 1..ev.len() {
                gaps.push((ev[j] - ev[i]).abs());
            }
        }
        gaps
    }

    #[test]
    fn uncoupled_frequencies_collapse() {
        let w = transition_frequencies(1.0, 0.0).unwrap();
        assert_eq!(w.as_array(), [2.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn unit_coupling_frequencies_match_eigen_gaps() {
        let w = transition_frequencies(1.0, 1.0).unwrap();
        let expected = [2.8284271, 0.4142136, 2.4142136, 2.0];
        for (a, b) in w.as_array().iter().zip(expected) {
            assert!((a - b).abs() < 1e-7, "{a} vs {b}");
        }
        let ev = sorted_eigenvalues(&hamiltonian_matrix(&QubitPairParams::undamped(1.0, 1.0), 0.0, 0.0));
        let gaps = pairwise_gaps(&ev);
        for w in w.as_array() {
            assert!(gaps.iter().any(|gap| (gap - w).abs() < 1e-10), "{w} not in {gaps:?}");
        }
    }

    #[test]
    fn small_coupling_is_continuous() {
        let w0 = transition_frequencies(1.0, 0.0).unwrap();
        let w = transition_frequencies(1.0, 1e-9).unwrap();
        for (a, b) in w.as_array().iter().zip(w0.as_array()) {
            assert!((a - b).abs() < 1e-8);
        }
        assert!(w.omega4 > 0.0 && w.omega4 < 1e-8);
    }

    #[test]
    fn frequency_errors() {
        assert!(transition_frequencies(0.0, 1.0).is_err());
        assert!(transition_frequencies(-1.0, 1.0).is_err());
        assert!(transition_frequencies(f64::NAN, 1.0).is_err());
        assert!(transition_frequencies(f64::INFINITY, 1.0).is_err());
    }

    #[test]
    fn uncoupled_hamiltonian_is_diagonal() {
        let h = hamiltonian_matrix(&QubitPairParams::undamped(1.0, 0.0), 0.0, 0.0);
        let expected = Matrix4::from_diagonal(&nalgebra::Vector4::new(-1.0, 0.0, 0.0, 1.0)).map(|v| C64::new(v, 0.0));
        assert_eq!(h, expected);
    }

    #[test]
    fn coupled_hamiltonian_block_eigenvalues() {
        // {|00>,|11>} block: [[-1, g], [g, 1]] -> +-sqrt(2); {|01>,|10>} block: [[0, g], [g, 0]] -> +-1.
        let ev = sorted_eigenvalues(&hamiltonian_matrix(&QubitPairParams::undamped(1.0, 1.0), 0.0, 0.0));
        let expected = [-SQRT_2, -1.0, 1.0, SQRT_2];
        for (a, b) in ev.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn bias_only_hamiltonian() {
        let mut p = QubitPairParams::undamped(1.0, 0.0);
        p.delta1 = 0.0;
        p.delta2 = 0.0;
        let ev = sorted_eigenvalues(&hamiltonian_matrix(&p, 2.0, 0.0));
        for (a, b) in ev.iter().zip([-1.0, -1.0, 1.0, 1.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn drive_examples() {
        let d = DriveParams::new(1.0, 1.0, 0.0, 0.0, 0.0);
        let (a, b) = drive_value(&d, FRAC_PI_2, [0.3, -0.7], 1e-3).unwrap();
        assert!((a - 1.0).abs() < 1e-15 && (b - 1.0).abs() < 1e-15);

        let (a, b) = drive_value(&DriveParams::none(), 12.3, [0.0, 0.0], 1e-3).unwrap();
        assert_eq!((a, b), (0.0, 0.0));

        let w = transition_frequencies(1.0, 1.0).unwrap();
        let d = DriveParams::new(15.0, w.omega2, 0.1, w.omega3, 0.0);
        assert_eq!(drive_value(&d, 0.0, [0.0, 0.0], 1e-4).unwrap(), (0.0, 0.0));
        assert!((d.amp_weak / d.amp_pump - 1.0 / 150.0).abs() < 1e-15);
    }

    #[test]
    fn drive_noise_is_scaled_per_qubit() {
        let d = DriveParams::new(0.0, 0.0, 0.0, 0.0, 0.5);
        let (a, b) = drive_value(&d, 0.0, [1.0, -2.0], 0.25).unwrap();
        assert!((a - 2.0).abs() < 1e-15);
        assert!((b + 4.0).abs() < 1e-15);
        assert!(drive_value(&d, 0.0, [1.0, 1.0], 0.0).is_err());
    }

    #[test]
    fn parameter_validation() {
        let mut p = QubitPairParams::identical(1.0, 1.0, 1e-3, 1e-3, 1.0);
        assert!(p.validate().is_ok());
        p.gamma_r2 = -1.0;
        assert!(p.validate().is_err());
        p = QubitPairParams::identical(1.0, 1.0, 1e-3, 1e-3, 1.5);
        assert!(p.validate().is_err());
        let mut d = DriveParams::new(1.0, 0.0, 0.0, 0.0, 0.0);
        assert!(d.validate().is_err());
        d.omega_pump = 1.0;
        assert!(d.validate().is_ok());
    }

    proptest! {
        #[test]
        fn outermost_gap_is_sum_of_inner_gaps(delta in 1e-3f64..5.0, g in 0.0f64..5.0) {
            let w = transition_frequencies(delta, g).unwrap();
            prop_assert!(w.as_array().iter().all(|v| *v >= 0.0));
            prop_assert!((w.omega1 - (w.omega2 + w.omega3)).abs() < 1e-12);
        }

        #[test]
        fn eigen_gaps_contain_transition_frequencies(delta in 1e-3f64..5.0, g in 1e-3f64..5.0) {
            let ev = sorted_eigenvalues(&hamiltonian_matrix(&QubitPairParams::undamped(delta, g), 0.0, 0.0));
            let gaps = pairwise_gaps(&ev);
            for w in transition_frequencies(delta, g).unwrap().as_array() {
                prop_assert!(gaps.iter().any(|gap| (gap - w).abs() < 1e-10));
            }
        }

        #[test]
        fn hamiltonian_is_hermitian(delta in 0.1f64..5.0, g in -5.0f64..5.0, e1 in -20.0f64..20.0, e2 in -20.0f64..20.0) {
            let mut p = QubitPairParams::undamped(delta, g);
            p.delta2 = delta * 1.3;
            let h = hamiltonian_matrix(&p, e1, e2);
            prop_assert_eq!(h, h.adjoint());
        }
    }
}
