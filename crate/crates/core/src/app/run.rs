//! Scenario and sweep execution.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::bloch::thermal_product_state;
use crate::error::{Error, Result};
use crate::integrate::{run_ensemble, Method, TimeSeries};
use crate::model::DriveParams;
use crate::spectrum::{
    amplification_metrics, beta_from_sweep, compute_spectrum, ensemble_spectrum, labelled_peaks, AmplificationMetrics,
    BetaFit, BetaScale, PeakSet, Spectrum, Window,
};

use super::config::{FreqSpec, ScenarioConfig};
use super::output;

/// Relative change allowed between the `dt` and `dt / 2` runs.
pub const CONVERGENCE_TOL: f64 = 0.02;
/// Relative disagreement between windows above which a run is flagged.
pub const WINDOW_TOL: f64 = 0.10;

/// Trajectories of one configuration, realization 0 first.
pub fn simulate(cfg: &ScenarioConfig) -> Result<Vec<TimeSeries>> {
    cfg.validate()?;
    let params = cfg.params();
    let drive = cfg.drive()?;
    run_ensemble(&params, &drive, &cfg.integrator, &thermal_product_state(&params))
}

/// Ensemble-averaged spectrum of `channel`.
pub fn ensemble_channel(runs: &[TimeSeries], channel: &str, transient: f64, window: Window) -> Result<Spectrum> {
    let spectra = runs
        .iter()
        .map(|ts| compute_spectrum(ts, channel, transient, window))
        .collect::<Result<Vec<_>>>()?;
    ensemble_spectrum(&spectra)
}

/// Same configuration without the weak tone.
pub fn reference_config(cfg: &ScenarioConfig) -> ScenarioConfig {
    ScenarioConfig {
        name: format!("{}-reference", cfg.name),
        amp_weak: 0.0,
        ..cfg.clone()
    }
}

fn needs_reference(cfg: &ScenarioConfig) -> bool {
    cfg.amp_pump > 0.0 && cfg.amp_weak > 0.0
}

/// Spectra and labelled peaks of the two recorded qubit-1 channels.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub spectrum_z: Spectrum,
    pub spectrum_x: Spectrum,
    pub peaks_z: PeakSet,
    pub peaks_x: PeakSet,
    pub reference_z: Option<Spectrum>,
    pub metrics: Option<AmplificationMetrics>,
}

impl Analysis {
    pub fn compute(
        cfg: &ScenarioConfig,
        drive: &DriveParams,
        runs: &[TimeSeries],
        reference: Option<&[TimeSeries]>,
        window: Window,
    ) -> Result<Self> {
        let transient = cfg.integrator.t_transient;
        let spectrum_z = ensemble_channel(runs, "Z1", transient, window)?;
        let spectrum_x = ensemble_channel(runs, "X1", transient, window)?;
        let mut settings = cfg
            .spectrum
            .peak_settings(drive.omega_pump, drive.omega_weak, spectrum_z.bin_width());
        if drive.amp_weak == 0.0 {
            // no weak tone, so no mixed labels; pump harmonics are then
            // spaced omega_pump apart and can be labelled up to Nyquist
            settings.l_max = 0;
            if drive.amp_pump > 0.0 {
                let nyquist = spectrum_z.omegas.last().copied().unwrap_or(0.0);
                settings.k_max = settings.k_max.max((nyquist / drive.omega_pump).ceil() as i32);
            }
        }
        let peaks_z = labelled_peaks(&spectrum_z, &settings)?;
        let peaks_x = labelled_peaks(&spectrum_x, &settings)?;
        let reference_z = reference
            .map(|r| ensemble_channel(r, "Z1", transient, window))
            .transpose()?;
        let metrics = reference_z
            .as_ref()
            .map(|r| amplification_metrics(&spectrum_z, r, &settings))
            .transpose()?;
        Ok(Self {
            spectrum_z,
            spectrum_x,
            peaks_z,
            peaks_x,
            reference_z,
            metrics,
        })
    }

    /// Ratio-free headline numbers, keyed by name.
    pub fn headline(&self, cfg: &ScenarioConfig) -> BTreeMap<String, f64> {
        let mut h = BTreeMap::new();
        if let Some(p) = self.peaks_z.highest() {
            h.insert("S_Z max".into(), p.height);
        }
        if let Some(p) = self.peaks_x.highest() {
            h.insert("S_X max".into(), p.height);
        }
        if let Some(m) = &self.metrics {
            h.insert("I_eps".into(), m.i_eps);
            h.insert("I_A".into(), m.i_a);
            h.insert("ratio".into(), m.ratio);
            h.insert("I_pm".into(), m.i_pm);
            h.insert("I_eps/I_pm".into(), m.i_eps_over_i_pm());
            h.insert("beta_point".into(), m.ratio / (cfg.amp_weak / cfg.amp_pump));
        }
        h
    }
}

fn max_relative_change(a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>) -> (f64, Option<String>) {
    let mut worst = (0.0, None);
    for (k, va) in a {
        let rel = match b.get(k) {
            Some(vb) if va.is_finite() && vb.is_finite() => {
                let scale = va.abs().max(vb.abs());
                if scale == 0.0 {
                    0.0
                } else {
                    (va - vb).abs() / scale
                }
            }
            _ => f64::INFINITY,
        };
        if rel > worst.0 || worst.1.is_none() {
            worst = (rel, Some(k.clone()));
        }
    }
    worst
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub other: BTreeMap<String, f64>,
    pub max_rel_change: f64,
    pub worst_metric: Option<String>,
    pub pass: bool,
}

impl Comparison {
    fn new(base: &BTreeMap<String, f64>, other: BTreeMap<String, f64>, tol: f64) -> Self {
        let (max_rel_change, worst_metric) = max_relative_change(base, &other);
        Self {
            pass: max_rel_change < tol,
            other,
            max_rel_change,
            worst_metric,
        }
    }
}

/// Everything a scenario run produces.
#[derive(Clone, Debug)]
pub struct ScenarioReport {
    pub config: ScenarioConfig,
    pub drive: DriveParams,
    /// Realization 0.
    pub trajectory: TimeSeries,
    pub analysis: Analysis,
    pub headline: BTreeMap<String, f64>,
    /// Headline recomputed with the other window.
    pub window_check: Comparison,
    /// Headline recomputed at `dt / 2`.
    pub convergence: Option<Comparison>,
    pub physicality_warnings: u64,
}

impl ScenarioReport {
    pub fn summary(&self) -> String {
        let cfg = &self.config;
        let it = &cfg.integrator;
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("scenario", cfg.name.clone());
        kv("omega_pump_resolved", output::fmt_num(self.drive.omega_pump / cfg.delta));
        kv("omega_weak_resolved", output::fmt_num(self.drive.omega_weak / cfg.delta));
        kv("method", it.method.to_string());
        kv("dt", it.dt.to_string());
        kv("realizations", it.n_realizations.to_string());
        kv("seed", it.seed.to_string());
        kv("t_transient", it.t_transient.to_string());
        kv("analysis_samples", self.analysis.spectrum_z.n_samples.to_string());
        kv("bin_width", output::fmt_num(self.analysis.spectrum_z.bin_width() / cfg.delta));
        kv("window", self.analysis.spectrum_z.window.to_string());
        if let Some(p) = self.analysis.peaks_z.highest() {
            let label = p.label.map(|c| c.to_string()).unwrap_or_else(|| "unlabeled".into());
            kv("S_Z_max_label", label);
        }
        for (k, v) in &self.headline {
            kv(&k.replace([' ', '/'], "_"), output::fmt_num(*v));
        }
        if let Some(m) = &self.analysis.metrics {
            kv("no_mixed_peaks", m.no_mixed_peaks.to_string());
            if let Some(l) = m.i_eps_label {
                kv("I_eps_label", l.to_string());
            }
        }
        let w = &self.window_check;
        kv("window_check_max_rel_diff", format!("{:.4}", w.max_rel_change));
        kv("window_check", if w.pass { "agree".into() } else { format!("FLAGGED ({})", w.worst_metric.clone().unwrap_or_default()) });
        match &self.convergence {
            Some(c) => {
                kv("dt_half_max_rel_change", format!("{:.4}", c.max_rel_change));
                kv("dt_half_check", if c.pass { "pass".into() } else { format!("FAIL ({})", c.worst_metric.clone().unwrap_or_default()) });
            }
            None => kv("dt_half_check", "skipped".into()),
        }
        kv("physicality_warnings", self.physicality_warnings.to_string());
        s
    }

    /// Writes CSV, SVG and summary files into `dir` (created if needed).
    pub fn write_artifacts(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let delta = self.config.delta;
        let out = &self.config.output;
        let a = &self.analysis;
        let mut written = Vec::new();
        let mut put = |name: &str, f: &dyn Fn(&Path) -> Result<()>| -> Result<()> {
            let p = dir.join(name);
            f(&p)?;
            written.push(p);
            Ok(())
        };
        if out.csv {
            put("timeseries.csv", &|p| output::write_timeseries_csv(p, &self.trajectory, delta))?;
            put("spectrum_Z1.csv", &|p| output::write_spectrum_csv(p, &a.spectrum_z, delta))?;
            put("spectrum_X1.csv", &|p| output::write_spectrum_csv(p, &a.spectrum_x, delta))?;
            put("peaks_Z1.csv", &|p| output::write_peaks_csv(p, &a.peaks_z, delta))?;
            put("peaks_X1.csv", &|p| output::write_peaks_csv(p, &a.peaks_x, delta))?;
            if let Some(r) = &a.reference_z {
                put("reference_spectrum_Z1.csv", &|p| output::write_spectrum_csv(p, r, delta))?;
            }
        }
        if out.svg {
            let name = &self.config.name;
            put("spectrum_Z1.svg", &|p| {
                output::write_text(p, &output::spectrum_svg(&a.spectrum_z, &a.peaks_z, delta, &format!("{name}: S_Z")))
            })?;
            put("spectrum_X1.svg", &|p| {
                output::write_text(p, &output::spectrum_svg(&a.spectrum_x, &a.peaks_x, delta, &format!("{name}: S_X")))
            })?;
            put("trajectory.svg", &|p| {
                output::write_text(p, &output::trajectory_svg(&self.trajectory, delta, &format!("{name}: qubit 1")))
            })?;
        }
        put("scenario.cfg", &|p| output::write_text(p, &self.config.to_config_string()))?;
        put("summary.txt", &|p| output::write_text(p, &self.summary()))?;
        Ok(written)
    }
}

fn simulate_with_reference(cfg: &ScenarioConfig) -> Result<(Vec<TimeSeries>, Option<Vec<TimeSeries>>)> {
    if needs_reference(cfg) {
        let (runs, reference) = rayon::join(|| simulate(cfg), || simulate(&reference_config(cfg)));
        Ok((runs?, Some(reference?)))
    } else {
        Ok((simulate(cfg)?, None))
    }
}

/// Integrate, analyse and cross-check one scenario. Nothing is written.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioReport> {
    cfg.validate()?;
    let drive = cfg.drive()?;
    let (runs, reference) = simulate_with_reference(cfg)?;
    let window = cfg.spectrum.window;
    let analysis = Analysis::compute(cfg, &drive, &runs, reference.as_deref(), window)?;
    let headline = analysis.headline(cfg);

    let other_window = match window {
        Window::Rect => Window::Hann,
        Window::Hann => Window::Rect,
    };
    let other = Analysis::compute(cfg, &drive, &runs, reference.as_deref(), other_window)?;
    let window_check = Comparison::new(&headline, other.headline(cfg), WINDOW_TOL);
    if !window_check.pass {
        log::warn!(
            "{}: {} and {} windows disagree by {:.1}% on {}",
            cfg.name,
            window,
            other_window,
            100.0 * window_check.max_rel_change,
            window_check.worst_metric.as_deref().unwrap_or("?")
        );
    }

    let convergence = if cfg.convergence_check {
        let mut fine = cfg.clone();
        fine.integrator = cfg.integrator.halved();
        let (fine_runs, fine_ref) = simulate_with_reference(&fine)?;
        let fine_analysis = Analysis::compute(&fine, &drive, &fine_runs, fine_ref.as_deref(), window)?;
        Some(Comparison::new(&headline, fine_analysis.headline(&fine), CONVERGENCE_TOL))
    } else {
        None
    };

    let physicality_warnings = runs
        .iter()
        .filter_map(|ts| ts.metadata.as_ref())
        .map(|m| m.physicality_warnings)
        .sum();
    let trajectory = runs.into_iter().next().expect("at least one realization");
    Ok(ScenarioReport {
        config: cfg.clone(),
        drive,
        trajectory,
        analysis,
        headline,
        window_check,
        convergence,
        physicality_warnings,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    Epsilon,
    NoiseD,
    OmegaWeak,
    G,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Epsilon => "epsilon",
            SweepAxis::NoiseD => "D",
            SweepAxis::OmegaWeak => "omega_weak",
            SweepAxis::G => "g",
        }
    }

    /// `base` with this axis set to `value`.
    pub fn apply(self, base: &ScenarioConfig, value: f64) -> ScenarioConfig {
        let mut cfg = base.clone();
        cfg.name = format!("{}-{}-{value}", base.name, self.name());
        match self {
            SweepAxis::Epsilon => cfg.amp_weak = value,
            SweepAxis::NoiseD => {
                cfg.noise_d = value;
                if value > 0.0 && cfg.integrator.method == Method::Rk4 {
                    cfg.integrator.method = Method::Rk4Held;
                }
            }
            SweepAxis::OmegaWeak => cfg.omega_weak = FreqSpec::value(value),
            SweepAxis::G => cfg.g = value,
        }
        cfg
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "epsilon" | "eps" => Ok(SweepAxis::Epsilon),
            "D" | "d" | "noise_d" => Ok(SweepAxis::NoiseD),
            "omega_weak" => Ok(SweepAxis::OmegaWeak),
            "g" => Ok(SweepAxis::G),
            other => Err(Error::param("axis", format!("expected epsilon, D, omega_weak or g, got `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointMetrics {
    pub i_eps: f64,
    pub i_a: f64,
    pub ratio: f64,
    pub i_pm: f64,
}

#[derive(Clone, Debug)]
pub struct SweepPoint {
    pub value: f64,
    /// Per-point outcome; a failed point does not abort the sweep.
    pub result: std::result::Result<PointMetrics, String>,
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub axis: SweepAxis,
    pub base: ScenarioConfig,
    pub points: Vec<SweepPoint>,
    /// Only for the epsilon axis.
    pub beta: Option<std::result::Result<BetaFit, String>>,
}

impl SweepReport {
    pub fn table_csv(&self) -> String {
        let mut s = format!("{} [delta],I_eps [1],I_A [1],ratio [1],status\n", self.axis.name());
        for p in &self.points {
            let v = output::fmt_num(p.value);
            match &p.result {
                Ok(m) => {
                    let _ = writeln!(
                        s,
                        "{v},{},{},{},ok",
                        output::fmt_num(m.i_eps),
                        output::fmt_num(m.i_a),
                        output::fmt_num(m.ratio)
                    );
                }
                Err(e) => {
                    let _ = writeln!(s, "{v},,,,\"error: {}\"", e.replace('"', "'"));
                }
            }
        }
        s
    }

    pub fn beta_summary(&self) -> String {
        match &self.beta {
            None => "beta = not applicable\n".into(),
            Some(Err(e)) => format!("beta = unavailable\nreason = {e}\n"),
            Some(Ok(fit)) => {
                let mut s = format!("beta = {}\nn_used = {}\n", output::fmt_num(fit.beta), fit.n_used);
                match fit.saturation_onset {
                    Some(e) => {
                        let _ = writeln!(s, "saturation_onset_eps = {}", output::fmt_num(e));
                    }
                    None => s.push_str("saturation_onset_eps = none\n"),
                }
                for (eps, r) in &fit.residuals {
                    let _ = writeln!(s, "residual[{}] = {}", output::fmt_num(*eps), output::fmt_num(*r));
                }
                s
            }
        }
    }

    pub fn write_artifacts(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let table = dir.join("sweep.csv");
        output::write_text(&table, &self.table_csv())?;
        let beta = dir.join("beta.txt");
        output::write_text(&beta, &self.beta_summary())?;
        Ok(vec![table, beta])
    }
}

/// Runs every sweep point concurrently. Each point is compared against its
/// own weak-tone-free reference, shared between points when identical.
/// The `dt / 2` check of [`run_scenario`] is not repeated per point.
pub fn run_sweep(base: &ScenarioConfig, axis: SweepAxis, values: &[f64]) -> Result<SweepReport> {
    if values.is_empty() {
        return Err(Error::param("values", "sweep needs at least one value"));
    }
    base.validate()?;
    if base.amp_pump <= 0.0 {
        return Err(Error::param("amp_pump", "sweeps compare against the pump-only reference and need A > 0"));
    }
    let configs: Vec<ScenarioConfig> = values.iter().map(|v| axis.apply(base, *v)).collect();

    let mut refs: Vec<ScenarioConfig> = Vec::new();
    let ref_index: Vec<usize> = configs
        .iter()
        .map(|c| {
            let mut r = reference_config(c);
            r.name = String::new();
            match refs.iter().position(|x| *x == r) {
                Some(i) => i,
                None => {
                    refs.push(r);
                    refs.len() - 1
                }
            }
        })
        .collect();
    let ref_runs: Vec<std::result::Result<Vec<TimeSeries>, String>> =
        refs.par_iter().map(|r| simulate(r).map_err(|e| e.to_string())).collect();

    let points: Vec<SweepPoint> = configs
        .par_iter()
        .zip(values.par_iter())
        .zip(ref_index.par_iter())
        .map(|((cfg, value), ri)| {
            let result = (|| -> std::result::Result<PointMetrics, String> {
                let reference = ref_runs[*ri].as_ref().map_err(|e| format!("reference: {e}"))?;
                let drive = cfg.drive().map_err(|e| e.to_string())?;
                let runs = if cfg.amp_weak > 0.0 {
                    simulate(cfg).map_err(|e| e.to_string())?
                } else {
                    reference.clone()
                };
                let a = Analysis::compute(cfg, &drive, &runs, Some(reference), cfg.spectrum.window)
                    .map_err(|e| e.to_string())?;
                let m = a.metrics.expect("reference supplied");
                Ok(PointMetrics {
                    i_eps: m.i_eps,
                    i_a: m.i_a,
                    ratio: m.ratio,
                    i_pm: m.i_pm,
                })
            })();
            if let Err(e) = &result {
                log::warn!("{} = {value}: {e}", axis.name());
            }
            SweepPoint { value: *value, result }
        })
        .collect();

    let beta = (axis == SweepAxis::Epsilon).then(|| {
        let ok: Vec<(f64, PointMetrics)> = points
            .iter()
            .filter_map(|p| p.result.as_ref().ok().map(|m| (p.value, *m)))
            .collect();
        let i_a = ok.first().map(|(_, m)| m.i_a).unwrap_or(0.0);
        let pts: Vec<(f64, f64)> = ok.iter().map(|(v, m)| (*v, m.i_eps)).collect();
        if i_a > 0.0 {
            beta_from_sweep(&pts, base.amp_pump, BetaScale::PumpRelative { i_a }).map_err(|e| e.to_string())
        } else {
            Err("no pump-only reference peak".to_string())
        }
    });

    Ok(SweepReport {
        axis,
        base: base.clone(),
        points,
        beta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(mut cfg: ScenarioConfig) -> ScenarioConfig {
        cfg.integrator.dt = 2e-3;
        cfg.integrator.sample_stride = 50;
        cfg.integrator.t_transient = 100.0;
        cfg.convergence_check = false;
        // short window, so keep the label grid coarse enough for 3-bin matching
        cfg.spectrum.k_max = 12;
        cfg.spectrum.l_max = 1;
        cfg.with_analysis_samples(8192)
    }

    #[test]
    fn axis_apply() {
        let base = super::super::presets::preset("mixed").unwrap();
        assert_eq!(SweepAxis::Epsilon.apply(&base, 0.05).amp_weak, 0.05);
        assert_eq!(SweepAxis::G.apply(&base, 0.5).g, 0.5);
        let d = SweepAxis::NoiseD.apply(&base, 1e-4);
        assert_eq!(d.integrator.method, Method::Rk4Held);
        let w = SweepAxis::OmegaWeak.apply(&base, 2.5).drive().unwrap();
        assert_eq!(w.omega_weak, 2.5);
        assert!("theta".parse::<SweepAxis>().is_err());
    }

    #[test]
    fn g_sweep_re_resolves_symbolic_pump() {
        let base = super::super::presets::preset("mixed").unwrap();
        let cfg = SweepAxis::G.apply(&base, 0.1);
        let w = cfg.drive().unwrap().omega_pump;
        assert!((w - (1.01f64.sqrt() - 0.1)).abs() < 1e-12);
    }

    #[test]
    fn failed_points_keep_their_status() {
        let base = quick(super::super::presets::preset("mixed").unwrap());
        let report = run_sweep(&base, SweepAxis::G, &[-1.0, 1.0]).unwrap();
        assert!(report.points[0].result.is_err());
        assert!(report.points[1].result.is_ok(), "{:?}", report.points[1].result);
        let csv = report.table_csv();
        assert!(csv.lines().nth(1).unwrap().contains("error"));
        assert!(report.beta.is_none());
    }

    #[test]
    fn epsilon_zero_gives_zero_ratio() {
        let base = quick(super::super::presets::preset("mixed").unwrap());
        let report = run_sweep(&base, SweepAxis::Epsilon, &[0.0]).unwrap();
        let m = report.points[0].result.as_ref().unwrap();
        assert_eq!(m.i_eps, 0.0);
        assert_eq!(m.ratio, 0.0);
        assert!(m.i_a > 0.0);
    }
}
