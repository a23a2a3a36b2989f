use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use twoqubit_amp::spectrum::{classify_peaks, compute_spectrum, ensemble_spectrum, find_peaks, labelled_peaks, PeakSettings};
use twoqubit_amp::{TimeSeries, Window};

fn series(values: Vec<f64>, dt: f64) -> TimeSeries {
    let times = (0..values.len()).map(|i| i as f64 * dt).collect();
    let mut ch = BTreeMap::new();
    ch.insert("Z1".to_string(), values);
    TimeSeries::new(times, ch).unwrap()
}

fn tones(parts: &[(f64, f64)], dt: f64, n: usize) -> TimeSeries {
    series(
        (0..n)
            .map(|i| {
                let t = i as f64 * dt;
                parts.iter().map(|(a, w)| a * (w * t).sin()).sum()
            })
            .collect(),
        dt,
    )
}

#[test]
fn parseval_with_rect_window() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [1024usize, 4096, 5000] {
        let x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let mean = x.iter().sum::<f64>() / n as f64;
        let power = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
        let s = compute_spectrum(&series(x, 0.1), "Z1", 0.0, Window::Rect).unwrap();
        assert!((s.parseval_power() - power).abs() < 1e-6 * power, "n = {n}");
    }
}

#[test]
fn grid_runs_from_zero_to_nyquist() {
    let s = compute_spectrum(&tones(&[(1.0, 1.0)], 0.1, 4096), "Z1", 0.0, Window::Hann).unwrap();
    assert_eq!(s.omegas[0], 0.0);
    assert!(s.omegas.windows(2).all(|w| w[1] > w[0]));
    assert!((s.omegas.last().unwrap() - std::f64::consts::PI / 0.1).abs() < 1e-9);
    assert!(s.magnitudes.iter().all(|m| *m >= 0.0));
}

#[test]
fn averaging_reduces_floor_variance() {
    let spectra: Vec<_> = (0..8)
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = (0..8192).map(|_| StandardNormal.sample(&mut rng)).collect();
            compute_spectrum(&series(x, 0.1), "Z1", 0.0, Window::Rect).unwrap()
        })
        .collect();
    let var = |m: &[f64]| {
        let mean = m.iter().sum::<f64>() / m.len() as f64;
        m.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / m.len() as f64
    };
    let single = var(&spectra[0].magnitudes[1..]);
    let avg = ensemble_spectrum(&spectra).unwrap();
    assert_eq!(avg.realizations, 8);
    let averaged = var(&avg.magnitudes[1..]);
    // independent bins: variance falls roughly as 1/8
    assert!(averaged < single / 5.0, "{single} {averaged}");
}

fn settings(bin: f64) -> PeakSettings {
    PeakSettings {
        rel_threshold: 0.01,
        min_prominence: 0.005,
        omega_pump: 0.7,
        omega_weak: 2.9,
        k_max: 10,
        l_max: 2,
        tol_match: 3.0 * bin,
    }
}

#[test]
fn classification_is_deterministic() {
    let ts = tones(&[(0.4, 1.4), (0.2, 3.6), (0.1, 2.2), (0.05, 5.0)], 0.1, 16384);
    let s = compute_spectrum(&ts, "Z1", 0.0, Window::Rect).unwrap();
    let cfg = settings(s.bin_width());
    let a = labelled_peaks(&s, &cfg).unwrap();
    let b = classify_peaks(&a, cfg.omega_pump, cfg.omega_weak, cfg.k_max, cfg.l_max, cfg.tol_match).unwrap();
    assert_eq!(a, b);
    let labels: Vec<_> = a.peaks.iter().map(|p| p.label.map(|c| (c.k, c.l))).collect();
    assert_eq!(labels, vec![Some((2, 0)), Some((-1, 1)), Some((1, 1)), Some((3, 1))]);
    for p in &a.peaks {
        let c = p.label.unwrap();
        assert!((p.omega - c.frequency(cfg.omega_pump, cfg.omega_weak)).abs() <= cfg.tol_match);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn off_bin_tone_height_is_recovered(a in 0.05f64..2.0, w in 0.5f64..12.0, hann in any::<bool>()) {
        let window = if hann { Window::Hann } else { Window::Rect };
        let s = compute_spectrum(&tones(&[(a, w)], 0.1, 8192), "Z1", 0.0, window).unwrap();
        let peaks = find_peaks(&s, 0.2, 0.1).unwrap();
        let p = peaks.highest().unwrap();
        prop_assert!((p.height - a / 2.0).abs() < 0.02 * a / 2.0, "height {} for {}", p.height, a / 2.0);
        prop_assert!((p.omega - w).abs() < 0.1 * s.bin_width());
    }

    #[test]
    fn analysis_is_scale_covariant(c in 0.01f64..100.0) {
        let parts = [(0.4, 1.4), (0.2, 3.6), (0.1, 2.2)];
        let base = tones(&parts, 0.1, 8192);
        let scaled = series(base.channels["Z1"].iter().map(|v| c * v).collect(), 0.1);
        let s0 = compute_spectrum(&base, "Z1", 0.0, Window::Rect).unwrap();
        let s1 = compute_spectrum(&scaled, "Z1", 0.0, Window::Rect).unwrap();
        let cfg = settings(s0.bin_width());
        let p0 = labelled_peaks(&s0, &cfg).unwrap();
        let p1 = labelled_peaks(&s1, &cfg).unwrap();
        prop_assert_eq!(p0.len(), p1.len());
        for (x, y) in p0.peaks.iter().zip(&p1.peaks) {
            prop_assert!((y.height - c * x.height).abs() <= 1e-9 * c * x.height);
            prop_assert!((x.omega - y.omega).abs() < 1e-9);
            prop_assert_eq!(x.label, y.label);
        }
    }
}
