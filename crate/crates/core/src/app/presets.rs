//! Named scenarios. All share `delta = 1`, `gamma_phi = gamma_r = 1e-3`,
//! `zt = 1`, pump at `omega2`, weak tone at `omega3` unless noted.

use crate::error::{Error, Result};
use crate::integrate::Method;

use super::config::{FreqSpec, ScenarioConfig};

pub const PRESET_NAMES: [&str; 7] = [
    "pump-only",
    "signal-only",
    "mixed",
    "noise-0.066",
    "noise-0.2",
    "off-resonance",
    "weak-coupling",
];

/// Ensemble size used by the noisy presets.
pub const NOISE_REALIZATIONS: usize = 8;

fn base(name: &str) -> ScenarioConfig {
    ScenarioConfig {
        name: name.into(),
        ..ScenarioConfig::default()
    }
}

/// Two-tone run at `A = 15`, `eps = 0.1`, with white noise of strength
/// `sqrt(D) / eps = noise_over_eps`.
pub fn noisy(noise_over_eps: f64) -> ScenarioConfig {
    let mut cfg = preset("mixed").expect("mixed preset");
    cfg.name = format!("noise-{noise_over_eps}");
    cfg.noise_d = (noise_over_eps * cfg.amp_weak).powi(2);
    cfg.integrator.method = Method::Rk4Held;
    cfg.integrator.n_realizations = NOISE_REALIZATIONS;
    cfg
}

pub fn preset(name: &str) -> Result<ScenarioConfig> {
    let cfg = match name {
        "pump-only" => ScenarioConfig {
            amp_pump: 15.0,
            ..base(name)
        },
        "signal-only" => ScenarioConfig {
            amp_weak: 0.1,
            ..base(name)
        },
        "mixed" => ScenarioConfig {
            amp_pump: 15.0,
            amp_weak: 0.1,
            ..base(name)
        },
        "noise-0.066" => noisy(0.066),
        "noise-0.2" => noisy(0.2),
        "off-resonance" => ScenarioConfig {
            amp_pump: 15.0,
            amp_weak: 0.1,
            omega_weak: FreqSpec::scaled(1.113, 3),
            ..base(name)
        },
        "weak-coupling" => ScenarioConfig {
            g: 0.1,
            amp_pump: 12.0,
            amp_weak: 0.5,
            ..base(name)
        },
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_validates() {
        for name in PRESET_NAMES {
            let cfg = preset(name).unwrap();
            cfg.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(cfg.name, name);
        }
        assert!(matches!(preset("fig9"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn preset_numbers() {
        let all = |c: &ScenarioConfig| (c.delta, c.g, c.amp_pump, c.amp_weak, c.gamma_phi, c.gamma_r);
        assert_eq!(all(&preset("pump-only").unwrap()), (1.0, 1.0, 15.0, 0.0, 1e-3, 1e-3));
        assert_eq!(all(&preset("signal-only").unwrap()), (1.0, 1.0, 0.0, 0.1, 1e-3, 1e-3));
        assert_eq!(all(&preset("mixed").unwrap()), (1.0, 1.0, 15.0, 0.1, 1e-3, 1e-3));
        assert_eq!(all(&preset("weak-coupling").unwrap()), (1.0, 0.1, 12.0, 0.5, 1e-3, 1e-3));
        for (name, r) in [("noise-0.066", 0.066), ("noise-0.2", 0.2)] {
            let c = preset(name).unwrap();
            assert!((c.noise_d.sqrt() / c.amp_weak - r).abs() < 1e-12);
            assert_eq!(c.integrator.n_realizations, NOISE_REALIZATIONS);
        }
        let off = preset("off-resonance").unwrap().drive().unwrap();
        assert!((off.omega_weak - 1.113 * (2f64.sqrt() + 1.0)).abs() < 1e-12);
        let wc = preset("weak-coupling").unwrap();
        assert!((wc.amp_weak / wc.amp_pump - 1.0 / 24.0).abs() < 1e-15);
    }
}
