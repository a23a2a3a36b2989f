//! Magnitude spectra of recorded trajectories, peak detection, combination
//! frequency labelling and amplification metrics.

use std::fmt;
use std::str::FromStr;

use rustfft::{num_complex::Complex64, FftPlanner};

use crate::error::{Error, Result};
use crate::integrate::TimeSeries;

/// Minimum number of post-transient samples accepted by [`compute_spectrum`].
pub const MIN_SAMPLES: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Window {
    Rect,
    Hann,
}

impl Window {
    pub fn name(self) -> &'static str {
        match self {
            Window::Rect => "rect",
            Window::Hann => "hann",
        }
    }

    fn coefficients(self, n: usize) -> Vec<f64> {
        match self {
            Window::Rect => vec![1.0; n],
            // periodic Hann: exact coherent gain n/2
            Window::Hann => (0..n)
                .map(|i| 0.5 - 0.5 * (std::f64::consts::TAU * i as f64 / n as f64).cos())
                .collect(),
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Window {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rect" => Ok(Window::Rect),
            "hann" => Ok(Window::Hann),
            other => Err(Error::param("window", format!("expected rect or hann, got `{other}`"))),
        }
    }
}

/// One-sided amplitude spectrum on the angular-frequency grid `k * 2 pi / T`.
///
/// A unit-amplitude sinusoid centred on a bin has height 1/2.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub omegas: Vec<f64>,
    pub magnitudes: Vec<f64>,
    pub window: Window,
    pub channel: String,
    pub transient: f64,
    pub n_samples: usize,
    pub realizations: usize,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    pub fn bin_width(&self) -> f64 {
        if self.omegas.len() < 2 {
            0.0
        } else {
            self.omegas[1] - self.omegas[0]
        }
    }

    pub fn max_magnitude(&self) -> f64 {
        self.magnitudes.iter().copied().fold(0.0, f64::max)
    }

    /// Two-sided Parseval sum, equal to the mean power of the windowed,
    /// mean-removed signal for the rect window.
    pub fn parseval_power(&self) -> f64 {
        let n = self.n_samples;
        let mut total = 0.0;
        for (k, m) in self.magnitudes.iter().enumerate() {
            let twice = k != 0 && !(n % 2 == 0 && k == n / 2);
            total += if twice { 2.0 * m * m } else { m * m };
        }
        total
    }

    /// Largest refined local height within `tol` of `omega`, or the largest
    /// magnitude there when no local maximum falls inside the band.
    pub fn height_near(&self, omega: f64, tol: f64) -> f64 {
        let dw = self.bin_width();
        if dw == 0.0 {
            return 0.0;
        }
        let lo = (((omega - tol) / dw).floor().max(0.0)) as usize;
        let hi = (((omega + tol) / dw).ceil() as usize).min(self.len().saturating_sub(1));
        if lo > hi {
            return 0.0;
        }
        let (best, _) = (lo..=hi)
            .map(|i| (i, self.magnitudes[i]))
            .fold((lo, f64::NEG_INFINITY), |acc, (i, m)| if m > acc.1 { (i, m) } else { acc });
        refine(&self.magnitudes, best, dw, self.window).1
    }

    fn same_grid(&self, other: &Spectrum) -> bool {
        self.window == other.window
            && self.omegas.len() == other.omegas.len()
            && self.n_samples == other.n_samples
            && self
                .omegas
                .iter()
                .zip(&other.omegas)
                .all(|(a, b)| (a - b).abs() <= 1e-12 * a.abs().max(1.0))
    }
}

pub fn compute_spectrum(ts: &TimeSeries, channel: &str, transient: f64, window: Window) -> Result<Spectrum> {
    let values = ts.channel(channel)?;
    let start = ts.times.partition_point(|t| *t < transient);
    let x = &values[start..];
    if x.len() < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            needed: MIN_SAMPLES,
            got: x.len(),
        });
    }
    let n = x.len();
    let dt = ts.sample_interval();
    let mean = x.iter().sum::<f64>() / n as f64;
    let w = window.coefficients(n);
    let gain: f64 = w.iter().sum();
    let mut buf: Vec<Complex64> = x
        .iter()
        .zip(&w)
        .map(|(v, wi)| Complex64::new((v - mean) * wi, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let half = n / 2;
    let d_omega = std::f64::consts::TAU / (n as f64 * dt);
    Ok(Spectrum {
        omegas: (0..=half).map(|k| k as f64 * d_omega).collect(),
        magnitudes: buf[..=half].iter().map(|c| c.norm() / gain).collect(),
        window,
        channel: channel.to_string(),
        transient,
        n_samples: n,
        realizations: 1,
    })
}

fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => pairwise_sum(&values[..n / 2]) + pairwise_sum(&values[n / 2..]),
    }
}

/// Pointwise mean of the magnitudes (average of moduli).
pub fn ensemble_spectrum(spectra: &[Spectrum]) -> Result<Spectrum> {
    let first = spectra.first().ok_or(Error::EmptySpectrum)?;
    if spectra.iter().any(|s| !first.same_grid(s)) {
        return Err(Error::GridMismatch);
    }
    let count = spectra.len() as f64;
    let mut column = vec![0.0; spectra.len()];
    let magnitudes = (0..first.len())
        .map(|k| {
            for (slot, s) in column.iter_mut().zip(spectra) {
                *slot = s.magnitudes[k];
            }
            pairwise_sum(&column) / count
        })
        .collect();
    Ok(Spectrum {
        magnitudes,
        realizations: spectra.iter().map(|s| s.realizations).sum(),
        ..first.clone()
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CombinationLabel {
    pub k: i32,
    pub l: i32,
}

impl CombinationLabel {
    pub fn frequency(&self, omega_pump: f64, omega_weak: f64) -> f64 {
        self.k as f64 * omega_pump + self.l as f64 * omega_weak
    }

    /// Mixed peaks carry a weak-tone contribution.
    pub fn is_mixed(&self) -> bool {
        self.l != 0
    }
}

impl fmt::Display for CombinationLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.k, self.l)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Peak {
    pub omega: f64,
    pub height: f64,
    pub bin: usize,
    pub label: Option<CombinationLabel>,
    pub residual: Option<f64>,
}

impl Peak {
    pub fn is_mixed(&self) -> bool {
        self.label.is_some_and(|l| l.is_mixed())
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct PeakSet {
    pub peaks: Vec<Peak>,
}

impl PeakSet {
    pub fn len(&self) -> usize {
        self.peaks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.peaks.is_empty()
    }

    pub fn highest(&self) -> Option<&Peak> {
        self.peaks.iter().max_by(|a, b| a.height.total_cmp(&b.height))
    }

    pub fn highest_mixed(&self) -> Option<&Peak> {
        self.peaks
            .iter()
            .filter(|p| p.is_mixed())
            .max_by(|a, b| a.height.total_cmp(&b.height))
    }

    pub fn with_label(&self, label: CombinationLabel) -> Option<&Peak> {
        self.peaks.iter().find(|p| p.label == Some(label))
    }

    /// Peak nearest to `omega` within `tol`.
    pub fn near(&self, omega: f64, tol: f64) -> Option<&Peak> {
        self.peaks
            .iter()
            .filter(|p| (p.omega - omega).abs() <= tol)
            .min_by(|a, b| (a.omega - omega).abs().total_cmp(&(b.omega - omega).abs()))
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}

impl Window {
    /// Magnitude response to a tone `delta` bins off-centre, 1 at `delta = 0`.
    fn kernel(self, delta: f64) -> f64 {
        match self {
            Window::Rect => sinc(delta).abs(),
            Window::Hann => (sinc(delta) / (1.0 - delta * delta)).abs(),
        }
    }

    /// Tone offset in bins from the ratio of the larger neighbour to the maximum.
    fn offset_from_ratio(self, r: f64) -> f64 {
        let d = match self {
            Window::Rect => r / (1.0 + r),
            Window::Hann => (2.0 * r - 1.0) / (1.0 + r),
        };
        d.clamp(0.0, 0.5)
    }
}

/// Sub-bin frequency and height of the local maximum at bin `i`, from the
/// three bins around it. The tone offset follows from the ratio of the
/// larger neighbour to the centre bin, and the height is the centre value
/// divided by the window's response at that offset. Exact for an isolated
/// sinusoid.
fn refine(m: &[f64], i: usize, d_omega: f64, window: Window) -> (f64, f64) {
    if i == 0 || i + 1 >= m.len() || m[i] <= 0.0 {
        return (i as f64 * d_omega, m[i]);
    }
    let (left, right) = (m[i - 1], m[i + 1]);
    let (nb, sign) = if right >= left { (right, 1.0) } else { (left, -1.0) };
    let delta = window.offset_from_ratio((nb / m[i]).min(1.0));
    ((i as f64 + sign * delta) * d_omega, m[i] / window.kernel(delta))
}

/// Local maxima above `rel_threshold * max` whose prominence exceeds
/// `min_prominence * max`, sorted by frequency. The DC bin is never a peak.
pub fn find_peaks(spec: &Spectrum, rel_threshold: f64, min_prominence: f64) -> Result<PeakSet> {
    if spec.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    if !(rel_threshold > 0.0 && rel_threshold < 1.0) {
        return Err(Error::param("rel_threshold", "must lie in (0, 1)"));
    }
    let m = &spec.magnitudes;
    let global = spec.max_magnitude();
    if global <= 0.0 {
        return Ok(PeakSet::default());
    }
    let floor = rel_threshold * global;
    let min_prom = min_prominence * global;
    let d_omega = spec.bin_width();
    let n = m.len();

    let mut peaks = Vec::new();
    for i in 1..n {
        let h = m[i];
        if h < floor || h <= m[i - 1] || (i + 1 < n && h < m[i + 1]) {
            continue;
        }
        // skip the left edge of a plateau that continues to the right
        if i + 1 < n && h == m[i + 1] {
            continue;
        }
        if prominence(m, i) < min_prom {
            continue;
        }
        let (omega, height) = refine(m, i, d_omega, spec.window);
        peaks.push(Peak {
            omega,
            height,
            bin: i,
            label: None,
            residual: None,
        });
    }
    Ok(PeakSet { peaks })
}

fn prominence(m: &[f64], i: usize) -> f64 {
    let h = m[i];
    let mut left_min = h;
    for j in (0..i).rev() {
        if m[j] > h {
            break;
        }
        left_min = left_min.min(m[j]);
    }
    let mut right_min = h;
    for &v in &m[i + 1..] {
        if v > h {
            break;
        }
        right_min = right_min.min(v);
    }
    h - left_min.max(right_min)
}

/// Smallest separation between distinct positive combination frequencies
/// `k * omega_pump + l * omega_weak` with `|k| <= k_max`, `|l| <= l_max`
/// and frequency at most `omega_max`.
pub fn min_combination_spacing(omega_pump: f64, omega_weak: f64, k_max: i32, l_max: i32, omega_max: f64) -> f64 {
    let mut freqs: Vec<f64> = combinations(k_max, l_max)
        .map(|c| c.frequency(omega_pump, omega_weak))
        .filter(|f| *f > 0.0 && *f <= omega_max)
        .collect();
    freqs.sort_by(f64::total_cmp);
    freqs
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|d| *d > 1e-9)
        .fold(f64::INFINITY, f64::min)
}

fn combinations(k_max: i32, l_max: i32) -> impl Iterator<Item = CombinationLabel> {
    (-l_max..=l_max).flat_map(move |l| (-k_max..=k_max).map(move |k| CombinationLabel { k, l }))
}

/// Settings shared by peak detection and labelling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeakSettings {
    pub rel_threshold: f64,
    pub min_prominence: f64,
    pub omega_pump: f64,
    pub omega_weak: f64,
    pub k_max: i32,
    pub l_max: i32,
    pub tol_match: f64,
}

/// Label each peak with the combination `(k, l)` closest in frequency.
///
/// Equal residuals are resolved by smallest `|l|`, then smallest `|k|`,
/// then smallest `k`. Peaks farther than `tol_match` from every candidate
/// stay unlabeled.
pub fn classify_peaks(
    peaks: &PeakSet,
    omega_pump: f64,
    omega_weak: f64,
    k_max: i32,
    l_max: i32,
    tol_match: f64,
) -> Result<PeakSet> {
    if !(omega_pump > 0.0 && omega_pump.is_finite()) {
        return Err(Error::param("omega_pump", "must be > 0"));
    }
    if !(omega_weak > 0.0 && omega_weak.is_finite()) {
        return Err(Error::param("omega_weak", "must be > 0"));
    }
    if k_max < 0 || l_max < 0 {
        return Err(Error::param("k_max", "combination ranges must be non-negative"));
    }
    if !(tol_match > 0.0 && tol_match.is_finite()) {
        return Err(Error::param("tol_match", "must be > 0"));
    }
    let omega_max = peaks.peaks.iter().map(|p| p.omega).fold(0.0, f64::max) + tol_match;
    let spacing = min_combination_spacing(omega_pump, omega_weak, k_max, l_max, omega_max);
    if tol_match >= 0.5 * spacing {
        return Err(Error::param(
            "tol_match",
            format!("{tol_match} is not below half the minimal combination spacing {spacing}"),
        ));
    }

    let candidates: Vec<(CombinationLabel, f64)> = combinations(k_max, l_max)
        .map(|c| (c, c.frequency(omega_pump, omega_weak)))
        .filter(|(_, f)| *f > 0.0)
        .collect();

    let mut out = peaks.clone();
    for peak in &mut out.peaks {
        let mut best: Option<(CombinationLabel, f64)> = None;
        for &(c, f) in &candidates {
            let r = (peak.omega - f).abs();
            best = match best {
                None => Some((c, r)),
                Some((b, br)) => {
                    let tie = (r - br).abs() <= 1e-12 * f.abs().max(1.0);
                    let better = if tie {
                        (c.l.abs(), c.k.abs(), c.k) < (b.l.abs(), b.k.abs(), b.k)
                    } else {
                        r < br
                    };
                    if better {
                        Some((c, r))
                    } else {
                        Some((b, br))
                    }
                }
            };
        }
        match best {
            Some((c, r)) if r <= tol_match => {
                peak.label = Some(c);
                peak.residual = Some(r);
            }
            _ => {
                peak.label = None;
                peak.residual = None;
            }
        }
    }
    Ok(out)
}

/// Detect and label peaks in one call.
pub fn labelled_peaks(spec: &Spectrum, settings: &PeakSettings) -> Result<PeakSet> {
    let peaks = find_peaks(spec, settings.rel_threshold, settings.min_prominence)?;
    classify_peaks(
        &peaks,
        settings.omega_pump,
        settings.omega_weak,
        settings.k_max,
        settings.l_max,
        settings.tol_match,
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct AmplificationMetrics {
    /// Highest mixed (`l != 0`) peak of the two-tone spectrum.
    pub i_eps: f64,
    pub i_eps_label: Option<CombinationLabel>,
    /// Highest peak of the pump-only spectrum.
    pub i_a: f64,
    pub ratio: f64,
    /// Larger of the heights at `omega_weak + omega_pump` and `omega_weak - omega_pump`.
    pub i_pm: f64,
    pub no_mixed_peaks: bool,
    pub mixed_peaks: PeakSet,
}

impl AmplificationMetrics {
    pub fn i_eps_over_i_pm(&self) -> f64 {
        if self.i_pm > 0.0 {
            self.i_eps / self.i_pm
        } else {
            f64::NAN
        }
    }
}

pub fn amplification_metrics(
    spec_mixed: &Spectrum,
    spec_pump_only: &Spectrum,
    settings: &PeakSettings,
) -> Result<AmplificationMetrics> {
    let pump_peaks = find_peaks(spec_pump_only, settings.rel_threshold, settings.min_prominence)?;
    let i_a = pump_peaks.highest().map(|p| p.height).unwrap_or(0.0);

    let mixed = labelled_peaks(spec_mixed, settings)?;
    let (i_eps, i_eps_label) = match mixed.highest_mixed() {
        Some(p) => (p.height, p.label),
        None => (0.0, None),
    };
    let no_mixed_peaks = i_eps_label.is_none();
    let i_pm = if no_mixed_peaks {
        0.0
    } else {
        [1, -1]
            .into_iter()
            .map(|k| {
                let f = CombinationLabel { k, l: 1 }.frequency(settings.omega_pump, settings.omega_weak);
                spec_mixed.height_near(f.abs(), settings.tol_match)
            })
            .fold(0.0, f64::max)
    };
    Ok(AmplificationMetrics {
        i_eps,
        i_eps_label,
        i_a,
        ratio: if i_a > 0.0 { i_eps / i_a } else { 0.0 },
        i_pm,
        no_mixed_peaks,
        mixed_peaks: mixed,
    })
}

/// How sweep heights are scaled before fitting the amplification slope.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BetaScale {
    /// Slope of `I_eps` against `eps` as given.
    Raw,
    /// Slope of `I_eps / i_a` against `eps / A`: gain relative to the pump.
    PumpRelative { i_a: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct BetaFit {
    pub beta: f64,
    pub n_used: usize,
    /// `(eps, residual)` for every point in the linear window.
    pub residuals: Vec<(f64, f64)>,
    /// First `eps` whose height falls more than 20% below the fitted line.
    pub saturation_onset: Option<f64>,
}

/// Upper end of the linear window, in `eps / A`.
pub const LINEAR_WINDOW: f64 = 0.005;

/// Least-squares slope through the origin of the points with `eps / A < 0.005`.
pub fn beta_from_sweep(points: &[(f64, f64)], amp_pump: f64, scale: BetaScale) -> Result<BetaFit> {
    if !(amp_pump > 0.0) {
        return Err(Error::param("amp_pump", "must be > 0"));
    }
    let to_xy = |&(eps, h): &(f64, f64)| match scale {
        BetaScale::Raw => (eps, h),
        BetaScale::PumpRelative { i_a } => (eps / amp_pump, h / i_a),
    };
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let window: Vec<(f64, f64)> = sorted
        .iter()
        .filter(|(eps, _)| *eps > 0.0 && eps / amp_pump < LINEAR_WINDOW)
        .copied()
        .collect();
    if window.len() < 3 {
        return Err(Error::InsufficientPoints {
            needed: 3,
            got: window.len(),
            limit: LINEAR_WINDOW,
        });
    }
    let (sxy, sxx) = window.iter().map(to_xy).fold((0.0, 0.0), |(sxy, sxx), (x, y)| (sxy + x * y, sxx + x * x));
    let beta = sxy / sxx;
    let residuals = window
        .iter()
        .map(|p| {
            let (x, y) = to_xy(p);
            (p.0, y - beta * x)
        })
        .collect();
    let saturation_onset = sorted
        .iter()
        .find(|p| {
            let (x, y) = to_xy(p);
            x > 0.0 && y < 0.8 * beta * x
        })
        .map(|p| p.0);
    Ok(BetaFit {
        beta,
        n_used: window.len(),
        residuals,
        saturation_onset,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn synthetic(f: impl Fn(f64) -> f64, dt: f64, n: usize) -> TimeSeries {
        let times: Vec<f64> = (0..n).map(|i| i as f64 * dt).collect();
        let z = times.iter().map(|t| f(*t)).collect();
        let mut ch = BTreeMap::new();
        ch.insert("Z1".to_string(), z);
        TimeSeries::new(times, ch).unwrap()
    }

    #[test]
    fn single_sinusoid_has_half_height() {
        let ts = synthetic(|t| (2.0 * t).sin(), 0.1, 65536);
        let s = compute_spectrum(&ts, "Z1", 0.0, Window::Rect).unwrap();
        assert!((s.bin_width() - std::f64::consts::TAU / 6553.6).abs() < 1e-12);
        let peaks = find_peaks(&s, 0.1, 0.05).unwrap();
        assert_eq!(peaks.len(), 1);
        let p = peaks.peaks[0];
        assert!((p.omega - 2.0).abs() < s.bin_width());
        assert!((p.height - 0.5).abs() < 0.01, "{}", p.height);
    }

    #[test]
    fn two_sinusoids() {
        let ts = synthetic(|t| 0.3 * t.sin() + 0.1 * (2.5 * t).sin(), 0.1, 65536);
        for window in [Window::Rect, Window::Hann] {
            let s = compute_spectrum(&ts, "Z1", 0.0, window).unwrap();
            let peaks = find_peaks(&s, 0.1, 0.05).unwrap();
            assert_eq!(peaks.len(), 2, "{window}");
            assert!((peaks.peaks[0].omega - 1.0).abs() < s.bin_width());
            assert!((peaks.peaks[1].omega - 2.5).abs() < s.bin_width());
            assert!((peaks.peaks[0].height - 0.15).abs() < 0.15 * 0.02);
            assert!((peaks.peaks[1].height - 0.05).abs() < 0.05 * 0.02);
        }
    }

    #[test]
    fn hann_window_normalization_on_bin() {
        let n = 4096;
        let dt = 0.1;
        let w0 = 100.0 * std::f64::consts::TAU / (n as f64 * dt);
        let ts = synthetic(|t| 0.8 * (w0 * t).cos(), dt, n);
        let s = compute_spectrum(&ts, "Z1", 0.0, Window::Hann).unwrap();
        assert!((s.magnitudes[100] - 0.4).abs() < 1e-12);
    }

    #[test]
    fn spectrum_errors() {
        let ts = synthetic(|t| t.sin(), 0.1, 2000);
        assert!(matches!(compute_spectrum(&ts, "X1", 0.0, Window::Rect), Err(Error::ChannelMissing(_))));
        assert!(matches!(
            compute_spectrum(&ts, "Z1", 150.0, Window::Rect),
            Err(Error::TooFewSamples { .. })
        ));
        assert!(compute_spectrum(&ts, "Z1", 50.0, Window::Rect).is_ok());
    }

    #[test]
    fn ensemble_of_one_and_of_copies() {
        let ts = synthetic(|t| t.sin() + 0.1 * (3.0 * t).cos(), 0.1, 4096);
        let s = compute_spectrum(&ts, "Z1", 0.0, Window::Rect).unwrap();
        let one = ensemble_spectrum(std::slice::from_ref(&s)).unwrap();
        assert_eq!(one, s);
        let two = ensemble_spectrum(&[s.clone(), s.clone()]).unwrap();
        assert_eq!(two.magnitudes, s.magnitudes);
        assert_eq!(two.realizations, 2);

        let other = compute_spectrum(&synthetic(|t| t.sin(), 0.1, 2048), "Z1", 0.0, Window::Rect).unwrap();
        assert!(matches!(ensemble_spectrum(&[s.clone(), other]), Err(Error::GridMismatch)));
        let hann = compute_spectrum(&ts, "Z1", 0.0, Window::Hann).unwrap();
        assert!(matches!(ensemble_spectrum(&[s, hann]), Err(Error::GridMismatch)));
        assert!(ensemble_spectrum(&[]).is_err());
    }

    #[test]
    fn classify_examples() {
        let wp = 2f64.sqrt() - 1.0;
        let ww = 2f64.sqrt() + 1.0;
        let mk = |omega| Peak {
            omega,
            height: 1.0,
            bin: 0,
            label: None,
            residual: None,
        };
        let set = PeakSet {
            peaks: vec![mk(2.0 * wp), mk(wp + ww), mk(ww - wp), mk(7.77777)],
        };
        let out = classify_peaks(&set, wp, ww, 30, 3, 3e-3).unwrap();
        assert_eq!(out.peaks[0].label, Some(CombinationLabel { k: 2, l: 0 }));
        assert_eq!(out.peaks[1].label, Some(CombinationLabel { k: 1, l: 1 }));
        // omega4 = 2g = omega3 - omega2
        assert_eq!(out.peaks[2].label, Some(CombinationLabel { k: -1, l: 1 }));
        assert!(out.peaks[1].is_mixed() && !out.peaks[0].is_mixed());
        assert_eq!(out.peaks[3].label, None);
        assert_eq!(classify_peaks(&set, wp, ww, 30, 3, 3e-3).unwrap(), out);

        assert!(classify_peaks(&set, wp, ww, 30, 3, 0.0).is_err());
        assert!(classify_peaks(&set, wp, ww, 30, 3, 0.01).is_err(), "tolerance above half spacing");
    }

    #[test]
    fn tie_break_prefers_small_l_then_small_k() {
        // omega_weak = 2 omega_pump makes (2, 0) and (0, 1) coincide.
        let set = PeakSet {
            peaks: vec![Peak {
                omega: 2.0,
                height: 1.0,
                bin: 0,
                label: None,
                residual: None,
            }],
        };
        let candidates: Vec<CombinationLabel> = combinations(4, 2)
            .filter(|c| (c.frequency(1.0, 2.0) - 2.0).abs() < 1e-12)
            .collect();
        assert!(candidates.len() > 1);
        let out = classify_peaks(&set, 1.0, 2.0, 4, 2, 0.1).unwrap();
        assert_eq!(out.peaks[0].label, Some(CombinationLabel { k: 2, l: 0 }));
    }

    #[test]
    fn beta_examples() {
        let pts: Vec<(f64, f64)> = [0.01, 0.02, 0.03, 0.05].iter().map(|e| (*e, 100.0 * e)).collect();
        let fit = beta_from_sweep(&pts, 15.0, BetaScale::Raw).unwrap();
        assert!((fit.beta - 100.0).abs() < 1e-9);
        assert_eq!(fit.n_used, 4);
        assert_eq!(fit.saturation_onset, None);

        let mut pts = pts;
        pts.push((0.1, 3.0)); // eps/A = 0.0067: outside the window, far below the line
        let fit = beta_from_sweep(&pts, 15.0, BetaScale::Raw).unwrap();
        assert!((fit.beta - 100.0).abs() < 1e-9);
        assert_eq!(fit.saturation_onset, Some(0.1));

        let rel = beta_from_sweep(&pts, 15.0, BetaScale::PumpRelative { i_a: 0.3 }).unwrap();
        assert!((rel.beta - 100.0 * 15.0 / 0.3).abs() < 1e-6);

        assert!(matches!(
            beta_from_sweep(&pts[3..], 15.0, BetaScale::Raw),
            Err(Error::InsufficientPoints { .. })
        ));
    }

    #[test]
    fn metrics_with_identical_spectra_have_no_mixed_peaks() {
        let ts = synthetic(|t| 0.3 * (0.5 * t).sin() + 0.1 * (1.0 * t).sin(), 0.1, 16384);
        let s = compute_spectrum(&ts, "Z1", 0.0, Window::Rect).unwrap();
        let settings = PeakSettings {
            rel_threshold: 0.01,
            min_prominence: 0.005,
            omega_pump: 0.5,
            omega_weak: 1.3,
            k_max: 10,
            l_max: 2,
            tol_match: 3.0 * s.bin_width(),
        };
        let m = amplification_metrics(&s, &s, &settings).unwrap();
        assert!(m.no_mixed_peaks);
        assert_eq!(m.i_eps, 0.0);
        assert_eq!(m.ratio, 0.0);
        assert!((m.i_a - 0.15).abs() < 0.01);
    }
}
