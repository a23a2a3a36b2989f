//! Scenario configuration and its flat `key = value` file format.
//!
//! ```text
//! # optimal two-tone run
//! delta = 1
//! g = 1
//! amp_pump = 15
//! omega_pump = "omega2"
//! amp_weak = 0.1
//! omega_weak = "1.113*omega3"
//! tol_match = "3 bins"
//! ```
//!
//! Blank lines and `#` comments are ignored. Values may be quoted. Keys not
//! present keep the defaults of [`ScenarioConfig::default`].

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::integrate::IntegratorConfig;
use crate::model::{transition_frequencies, DriveParams, QubitPairParams};
use crate::spectrum::{PeakSettings, Window};

pub const KEYS: [&str; 21] = [
    "delta",
    "g",
    "gamma_phi",
    "gamma_r",
    "zt",
    "amp_pump",
    "omega_pump",
    "amp_weak",
    "omega_weak",
    "noise_d",
    "dt",
    "t_total",
    "t_transient",
    "sample_stride",
    "method",
    "seed",
    "realizations",
    "window",
    "k_max",
    "l_max",
    "tol_match",
];

/// A frequency given either as a number or as a multiple of one of the
/// transition frequencies, e.g. `omega2` or `1.113*omega3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FreqSpec {
    pub scale: f64,
    /// Transition index 1..=4, or `None` for a plain number.
    pub transition: Option<usize>,
}

impl FreqSpec {
    pub fn value(v: f64) -> Self {
        Self { scale: v, transition: None }
    }

    pub fn transition(index: usize) -> Self {
        Self::scaled(1.0, index)
    }

    pub fn scaled(scale: f64, index: usize) -> Self {
        Self {
            scale,
            transition: Some(index),
        }
    }

    pub fn resolve(&self, delta: f64, g: f64) -> Result<f64> {
        match self.transition {
            None => Ok(self.scale),
            Some(i) => {
                let freqs = transition_frequencies(delta, g)?;
                freqs
                    .get(i)
                    .map(|w| self.scale * w)
                    .ok_or_else(|| Error::InvalidConfig(format!("no transition frequency omega{i}")))
            }
        }
    }
}

impl fmt::Display for FreqSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.transition, self.scale) {
            (None, v) => write!(f, "{v}"),
            (Some(i), s) if s == 1.0 => write!(f, "omega{i}"),
            (Some(i), s) => write!(f, "{s}*omega{i}"),
        }
    }
}

impl FromStr for FreqSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Ok(v) = s.parse::<f64>() {
            return Ok(Self::value(v));
        }
        let symbol = |t: &str| -> Result<usize, String> {
            let idx = t
                .trim()
                .strip_prefix("omega")
                .ok_or_else(|| format!("cannot resolve frequency `{s}`"))?;
            match idx.parse::<usize>() {
                Ok(i @ 1..=4) => Ok(i),
                _ => Err(format!("unknown transition frequency `{}` (expected omega1..omega4)", t.trim())),
            }
        };
        match s.split_once('*') {
            None => Ok(Self::transition(symbol(s)?)),
            Some((a, b)) => {
                let (num, sym) = match a.trim().parse::<f64>() {
                    Ok(v) => (v, b),
                    Err(_) => (
                        b.trim().parse::<f64>().map_err(|_| format!("cannot resolve frequency `{s}`"))?,
                        a,
                    ),
                };
                Ok(Self::scaled(num, symbol(sym)?))
            }
        }
    }
}

/// Peak-matching tolerance, absolute or in spectral bins.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TolMatch {
    Bins(f64),
    Absolute(f64),
}

impl TolMatch {
    pub fn resolve(&self, bin_width: f64) -> f64 {
        match *self {
            TolMatch::Bins(n) => n * bin_width,
            TolMatch::Absolute(w) => w,
        }
    }

    fn amount(&self) -> f64 {
        match *self {
            TolMatch::Bins(v) | TolMatch::Absolute(v) => v,
        }
    }
}

impl fmt::Display for TolMatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TolMatch::Bins(n) => write!(f, "{n} bins"),
            TolMatch::Absolute(w) => write!(f, "{w}"),
        }
    }
}

impl FromStr for TolMatch {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some(n) = s.strip_suffix("bins").or_else(|| s.strip_suffix("bin")) {
            return n
                .trim()
                .parse()
                .map(TolMatch::Bins)
                .map_err(|_| format!("bad bin count in `{s}`"));
        }
        s.parse().map(TolMatch::Absolute).map_err(|_| format!("expected a number or `N bins`, got `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumSettings {
    pub window: Window,
    pub k_max: i32,
    pub l_max: i32,
    pub tol_match: TolMatch,
    /// Peak threshold relative to the spectrum maximum.
    pub rel_threshold: f64,
    /// Minimum prominence relative to the spectrum maximum.
    pub min_prominence: f64,
}

impl Default for SpectrumSettings {
    fn default() -> Self {
        Self {
            window: Window::Rect,
            k_max: 30,
            l_max: 3,
            tol_match: TolMatch::Bins(3.0),
            rel_threshold: 0.005,
            min_prominence: 0.002,
        }
    }
}

impl SpectrumSettings {
    pub fn peak_settings(&self, omega_pump: f64, omega_weak: f64, bin_width: f64) -> PeakSettings {
        PeakSettings {
            rel_threshold: self.rel_threshold,
            min_prominence: self.min_prominence,
            omega_pump,
            omega_weak,
            k_max: self.k_max,
            l_max: self.l_max,
            tol_match: self.tol_match.resolve(bin_width),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputSettings {
    pub dir: PathBuf,
    pub csv: bool,
    pub svg: bool,
}

impl Default for OutputSettings {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            csv: true,
            svg: true,
        }
    }
}

/// Everything needed to run one scenario. Both qubits share `delta`,
/// `gamma_phi`, `gamma_r` and `zt`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub delta: f64,
    pub g: f64,
    pub gamma_phi: f64,
    pub gamma_r: f64,
    pub zt: f64,
    pub amp_pump: f64,
    pub omega_pump: FreqSpec,
    pub amp_weak: f64,
    pub omega_weak: FreqSpec,
    pub noise_d: f64,
    /// Phase of the weak tone in radians; not exposed in files.
    pub phase_weak: f64,
    pub integrator: IntegratorConfig,
    pub spectrum: SpectrumSettings,
    pub output: OutputSettings,
    /// Repeat the run at `dt / 2` and compare the headline metrics.
    pub convergence_check: bool,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            name: "custom".into(),
            delta: 1.0,
            g: 1.0,
            gamma_phi: 1e-3,
            gamma_r: 1e-3,
            zt: 1.0,
            amp_pump: 0.0,
            omega_pump: FreqSpec::transition(2),
            amp_weak: 0.0,
            omega_weak: FreqSpec::transition(3),
            noise_d: 0.0,
            phase_weak: 0.0,
            integrator: IntegratorConfig::rk4(),
            spectrum: SpectrumSettings::default(),
            output: OutputSettings::default(),
            convergence_check: true,
        }
    }
}

impl ScenarioConfig {
    pub fn params(&self) -> QubitPairParams {
        QubitPairParams::identical(self.delta, self.g, self.gamma_phi, self.gamma_r, self.zt)
    }

    /// Drive with symbolic frequencies resolved against the current `delta` and `g`.
    pub fn drive(&self) -> Result<DriveParams> {
        let omega_pump = self.omega_pump.resolve(self.delta, self.g)?;
        let omega_weak = self.omega_weak.resolve(self.delta, self.g)?;
        Ok(DriveParams {
            phase_weak: self.phase_weak,
            ..DriveParams::new(self.amp_pump, omega_pump, self.amp_weak, omega_weak, self.noise_d)
        })
    }

    /// Checks every field, naming the offending key on failure.
    pub fn validate(&self) -> Result<()> {
        let positive = [("delta", self.delta), ("dt", self.integrator.dt), ("t_total", self.integrator.t_total)];
        for (key, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(key, format!("must be finite and > 0, got {v}")));
            }
        }
        let non_negative = [
            ("g", self.g),
            ("gamma_phi", self.gamma_phi),
            ("gamma_r", self.gamma_r),
            ("amp_pump", self.amp_pump),
            ("amp_weak", self.amp_weak),
            ("noise_d", self.noise_d),
            ("t_transient", self.integrator.t_transient),
        ];
        for (key, v) in non_negative {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::param(key, format!("must be finite and >= 0, got {v}")));
            }
        }
        if !(self.zt.is_finite() && self.zt.abs() <= 1.0) {
            return Err(Error::param("zt", format!("must satisfy |zt| <= 1, got {}", self.zt)));
        }
        if self.integrator.t_transient >= self.integrator.t_total {
            return Err(Error::param("t_transient", "must be below t_total"));
        }
        if self.integrator.sample_stride == 0 {
            return Err(Error::param("sample_stride", "must be >= 1"));
        }
        if self.integrator.n_realizations == 0 {
            return Err(Error::param("realizations", "must be >= 1"));
        }
        if self.spectrum.k_max < 0 {
            return Err(Error::param("k_max", "must be >= 0"));
        }
        if self.spectrum.l_max < 0 {
            return Err(Error::param("l_max", "must be >= 0"));
        }
        let tol = self.spectrum.tol_match.amount();
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::param("tol_match", "must be > 0"));
        }
        for (key, spec) in [("omega_pump", self.omega_pump), ("omega_weak", self.omega_weak)] {
            let w = spec.resolve(self.delta, self.g)?;
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::param(key, format!("must resolve to a positive frequency, got {w}")));
            }
        }
        if self.noise_d > 0.0 && !self.integrator.method.supports_noise() {
            return Err(Error::param(
                "method",
                format!("{} is deterministic but noise_d = {}", self.integrator.method, self.noise_d),
            ));
        }
        self.integrator.validate(&self.params(), &self.drive()?)
    }

    /// Shortens the run to `transient + samples * sample_interval`.
    pub fn with_analysis_samples(mut self, samples: usize) -> Self {
        let span = samples as f64 * self.integrator.sample_interval();
        self.integrator.t_total = self.integrator.t_transient + span;
        self
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num<T: FromStr>(v: &str) -> Result<T, String> {
            v.parse().map_err(|_| format!("cannot parse `{v}` as a number"))
        }
        let it = &mut self.integrator;
        match key {
            "delta" => self.delta = num(value)?,
            "g" => self.g = num(value)?,
            "gamma_phi" => self.gamma_phi = num(value)?,
            "gamma_r" => self.gamma_r = num(value)?,
            "zt" => self.zt = num(value)?,
            "amp_pump" => self.amp_pump = num(value)?,
            "omega_pump" => self.omega_pump = value.parse()?,
            "amp_weak" => self.amp_weak = num(value)?,
            "omega_weak" => self.omega_weak = value.parse()?,
            "noise_d" => self.noise_d = num(value)?,
            "dt" => it.dt = num(value)?,
            "t_total" => it.t_total = num(value)?,
            "t_transient" => it.t_transient = num(value)?,
            "sample_stride" => it.sample_stride = num(value)?,
            "method" => it.method = value.parse().map_err(|e: Error| e.to_string())?,
            "seed" => it.seed = num(value)?,
            "realizations" => it.n_realizations = num(value)?,
            "window" => self.spectrum.window = value.parse().map_err(|e: Error| e.to_string())?,
            "k_max" => self.spectrum.k_max = num(value)?,
            "l_max" => self.spectrum.l_max = num(value)?,
            "tol_match" => self.spectrum.tol_match = value.parse()?,
            other => return Err(format!("unknown key `{other}`")),
        }
        Ok(())
    }

    /// Parses the file format on top of `self`, then validates.
    pub fn parse_onto(mut self, text: &str) -> Result<Self> {
        let mut seen: Vec<&str> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let parse_err = |message: String| Error::Parse { line: line_no, message };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected `key = value`, got `{line}`")))?;
            let key = key.trim();
            let value = unquote(value.trim());
            if !KEYS.contains(&key) {
                return Err(parse_err(format!("unknown key `{key}`")));
            }
            if seen.contains(&key) {
                return Err(parse_err(format!("duplicate key `{key}`")));
            }
            seen.push(key);
            self.set(key, value).map_err(parse_err)?;
        }
        self.validate()?;
        Ok(self)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::default().parse_onto(text)
    }

    /// Serializes every file key, so `parse(to_config_string())` round-trips.
    pub fn to_config_string(&self) -> String {
        let it = &self.integrator;
        let mut s = format!("# scenario {}\n", self.name);
        let mut kv = |k: &str, v: String| s.push_str(&format!("{k} = {v}\n"));
        kv("delta", self.delta.to_string());
        kv("g", self.g.to_string());
        kv("gamma_phi", self.gamma_phi.to_string());
        kv("gamma_r", self.gamma_r.to_string());
        kv("zt", self.zt.to_string());
        kv("amp_pump", self.amp_pump.to_string());
        kv("omega_pump", format!("\"{}\"", self.omega_pump));
        kv("amp_weak", self.amp_weak.to_string());
        kv("omega_weak", format!("\"{}\"", self.omega_weak));
        kv("noise_d", self.noise_d.to_string());
        kv("dt", it.dt.to_string());
        kv("t_total", it.t_total.to_string());
        kv("t_transient", it.t_transient.to_string());
        kv("sample_stride", it.sample_stride.to_string());
        kv("method", it.method.to_string());
        kv("seed", it.seed.to_string());
        kv("realizations", it.n_realizations.to_string());
        kv("window", self.spectrum.window.to_string());
        kv("k_max", self.spectrum.k_max.to_string());
        kv("l_max", self.spectrum.l_max.to_string());
        kv("tol_match", format!("\"{}\"", self.spectrum.tol_match));
        s
    }
}

fn unquote(v: &str) -> &str {
    v.strip_prefix('"')
        .and_then(|v| v.strip_suffix('"'))
        .or_else(|| v.strip_prefix('\'').and_then(|v| v.strip_suffix('\'')))
        .unwrap_or(v)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<ScenarioConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut cfg = ScenarioConfig::parse(&text)?;
    if let Some(stem) = path.file_stem() {
        cfg.name = stem.to_string_lossy().into_owned();
    }
    Ok(cfg)
}
