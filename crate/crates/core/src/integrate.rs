//! Fixed-step time evolution of the Bloch tensor.
//!
//! Three steppers are available:
//!
//! * `Euler`: forward Euler on the deterministic field, Euler-Maruyama (Ito)
//!   when noise is present. Cheap, first order, and unstable for long
//!   strongly driven runs since it inflates every rotation by `1 + (w dt)^2 / 2`.
//! * `Rk4`: classical four-stage Runge-Kutta on the deterministic field.
//!   Rejects `noise_d > 0`.
//! * `Rk4Held`: Runge-Kutta with each step's noise sample held constant over
//!   the step (Wong-Zakai, i.e. the Stratonovich limit). Used for long noisy
//!   runs where plain Euler-Maruyama is not stable.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::bloch::{physicality_check, rhs_raw, BlochTensor, Component, DEFAULT_PHYSICALITY_TOL, N_COMPONENTS};
use crate::error::{Error, Result};
use crate::model::{DriveParams, QubitPairParams};

/// Upper bound on `dt * (fastest rate)` accepted by [`IntegratorConfig::validate`].
pub const STABILITY_BOUND: f64 = 0.05;

/// Squared Bloch-tensor norm above which a trajectory counts as diverged.
/// Physical states satisfy `sum P^2 <= 3`.
const RUNAWAY_NORM_SQ: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Euler,
    Rk4,
    Rk4Held,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Euler => "euler",
            Method::Rk4 => "rk4",
            Method::Rk4Held => "rk4-held",
        }
    }

    pub fn supports_noise(self) -> bool {
        !matches!(self, Method::Rk4)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euler" => Ok(Method::Euler),
            "rk4" => Ok(Method::Rk4),
            "rk4-held" | "rk4_held" => Ok(Method::Rk4Held),
            other => Err(Error::param("method", format!("expected euler, rk4 or rk4-held, got `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_total: f64,
    pub t_transient: f64,
    pub sample_stride: usize,
    pub method: Method,
    pub seed: u64,
    pub n_realizations: usize,
    /// Recorded components, in output order.
    pub channels: Vec<Component>,
    /// Steps between physicality checks; 0 disables them.
    pub check_every: u64,
    pub physicality_tol: f64,
    /// Brownian-bridge levels applied to the noise stream (see [`NoiseStream`]).
    pub noise_refinement: u32,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            dt: 1e-4,
            t_total: 1.05e5,
            t_transient: 5000.0,
            sample_stride: 1000,
            method: Method::Euler,
            seed: 0,
            n_realizations: 1,
            channels: vec![Component::Z1, Component::X1],
            check_every: 10_000,
            physicality_tol: DEFAULT_PHYSICALITY_TOL,
            noise_refinement: 0,
        }
    }
}

impl IntegratorConfig {
    /// Deterministic Runge-Kutta defaults: `dt = 1e-3`, samples every 0.1.
    pub fn rk4() -> Self {
        Self {
            dt: 1e-3,
            sample_stride: 100,
            method: Method::Rk4,
            ..Self::default()
        }
    }

    pub fn n_steps(&self) -> u64 {
        (self.t_total / self.dt).round() as u64
    }

    pub fn sample_interval(&self) -> f64 {
        self.dt * self.sample_stride as f64
    }

    /// Same run with half the step and twice the stride, so the sample grid is unchanged.
    pub fn halved(&self) -> Self {
        Self {
            dt: self.dt / 2.0,
            sample_stride: self.sample_stride * 2,
            check_every: self.check_every * 2,
            noise_refinement: self.noise_refinement + 1,
            ..self.clone()
        }
    }

    pub fn validate(&self, params: &QubitPairParams, drive: &DriveParams) -> Result<()> {
        params.validate()?;
        drive.validate()?;
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidConfig(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.t_total.is_finite() && self.t_transient >= 0.0 && self.t_transient < self.t_total) {
            return Err(Error::InvalidConfig(format!(
                "need 0 <= t_transient < t_total, got t_transient = {}, t_total = {}",
                self.t_transient, self.t_total
            )));
        }
        if self.sample_stride == 0 {
            return Err(Error::InvalidConfig("sample_stride must be >= 1".into()));
        }
        if self.n_realizations == 0 {
            return Err(Error::InvalidConfig("n_realizations must be >= 1".into()));
        }
        if self.channels.is_empty() {
            return Err(Error::InvalidConfig("at least one channel must be recorded".into()));
        }
        if drive.noise_d > 0.0 && !self.method.supports_noise() {
            return Err(Error::InvalidConfig(format!(
                "method {} is deterministic; noise_d = {} needs euler or rk4-held",
                self.method, drive.noise_d
            )));
        }
        let drive_rate = drive.amp_pump + drive.amp_weak + 4.0 * drive.noise_scale(self.dt);
        let level_rate = 2.0 * params.max_delta().hypot(params.g);
        let bound = self.dt * drive_rate.max(level_rate);
        if bound > STABILITY_BOUND {
            return Err(Error::InvalidConfig(format!(
                "step too large: dt * max(A + eps + 4 sqrt(2D/dt), 2 sqrt(delta^2 + g^2)) = {bound:.4} exceeds {STABILITY_BOUND}"
            )));
        }
        Ok(())
    }
}

/// Seeded source of the two independent standard-normal noise channels.
///
/// With `refinement = r` each coarse sample is split into `2^r` samples by
/// Brownian-bridge subdivision, so a run at `dt / 2^r` sees a refinement of
/// the same Wiener path as the run at `dt`.
#[derive(Clone, Debug)]
pub struct NoiseStream {
    /// `rngs[0]` draws the coarse samples, `rngs[j]` the bridge midpoints of level `j`.
    rngs: Vec<ChaCha8Rng>,
    pending: Vec<[f64; 2]>,
}

impl NoiseStream {
    pub fn new(seed: u64) -> Self {
        Self::for_realization(seed, 0)
    }

    /// Independent child stream `realization` of `seed`.
    pub fn for_realization(seed: u64, realization: u64) -> Self {
        Self::refined(seed, realization, 0)
    }

    /// Each level owns its own ChaCha stream, so the first `r` levels are
    /// identical for every refinement `>= r`. `realization` must stay below `2^56`.
    pub fn refined(seed: u64, realization: u64, refinement: u32) -> Self {
        let rngs = (0..=refinement as u64)
            .map(|level| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(realization | (level << 56));
                rng
            })
            .collect();
        Self {
            rngs,
            pending: Vec::new(),
        }
    }

    #[inline]
    fn draw(&mut self, level: usize) -> [f64; 2] {
        let rng = &mut self.rngs[level];
        [StandardNormal.sample(rng), StandardNormal.sample(rng)]
    }

    #[inline]
    pub fn next_pair(&mut self) -> [f64; 2] {
        if self.rngs.len() == 1 {
            return self.draw(0);
        }
        if let Some(v) = self.pending.pop() {
            return v;
        }
        let mut level = vec![self.draw(0)];
        for depth in 1..self.rngs.len() {
            let mut next = Vec::with_capacity(level.len() * 2);
            for v in &level {
                let z = self.draw(depth);
                next.push([(v[0] + z[0]) * FRAC_1_SQRT_2, (v[1] + z[1]) * FRAC_1_SQRT_2]);
                next.push([(v[0] - z[0]) * FRAC_1_SQRT_2, (v[1] - z[1]) * FRAC_1_SQRT_2]);
            }
            level = next;
        }
        // consumed from the back
        level.reverse();
        self.pending = level;
        self.pending.pop().unwrap()
    }
}

/// Advances one trajectory, keeping the step counter for diagnostics.
#[derive(Clone, Debug)]
pub struct Stepper<'a> {
    params: &'a QubitPairParams,
    drive: &'a DriveParams,
    method: Method,
    dt: f64,
    noise_scale: f64,
    noise: NoiseStream,
    steps: u64,
    // deterministic bias at the end of the previous step
    cached_end: Option<(u64, f64)>,
}

impl<'a> Stepper<'a> {
    pub fn new(
        params: &'a QubitPairParams,
        drive: &'a DriveParams,
        method: Method,
        dt: f64,
        noise: NoiseStream,
    ) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidConfig(format!("dt must be > 0, got {dt}")));
        }
        if drive.noise_d > 0.0 && !method.supports_noise() {
            return Err(Error::InvalidConfig(format!(
                "method {method} is deterministic; noise_d = {} needs euler or rk4-held",
                drive.noise_d
            )));
        }
        Ok(Self {
            params,
            drive,
            method,
            dt,
            noise_scale: drive.noise_scale(dt),
            noise,
            steps: 0,
            cached_end: None,
        })
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps
    }

    pub fn time(&self) -> f64 {
        self.steps as f64 * self.dt
    }

    #[inline]
    fn bias_at_step(&mut self, n: u64) -> f64 {
        match self.cached_end {
            Some((m, v)) if m == n => v,
            _ => self.drive.deterministic(n as f64 * self.dt),
        }
    }

    /// Advance `state` by one step from `t = steps_taken() * dt`.
    pub fn step(&mut self, state: &mut BlochTensor) -> Result<()> {
        let n = self.steps;
        let dt = self.dt;
        let p = self.params;
        let [n1, n2] = if self.noise_scale > 0.0 {
            let pair = self.noise.next_pair();
            [self.noise_scale * pair[0], self.noise_scale * pair[1]]
        } else {
            [0.0, 0.0]
        };
        let e0 = self.bias_at_step(n);
        let s = &mut state.0;
        match self.method {
            Method::Euler => {
                let k = rhs_raw(s, e0 + n1, e0 + n2, p);
                axpy(s, dt, &k);
            }
            Method::Rk4 | Method::Rk4Held => {
                let t = n as f64 * dt;
                let e_mid = self.drive.deterministic(t + 0.5 * dt);
                let e_end = self.drive.deterministic((n + 1) as f64 * dt);
                self.cached_end = Some((n + 1, e_end));
                let k1 = rhs_raw(s, e0 + n1, e0 + n2, p);
                let k2 = rhs_raw(&offset(s, 0.5 * dt, &k1), e_mid + n1, e_mid + n2, p);
                let k3 = rhs_raw(&offset(s, 0.5 * dt, &k2), e_mid + n1, e_mid + n2, p);
                let k4 = rhs_raw(&offset(s, dt, &k3), e_end + n1, e_end + n2, p);
                let w = dt / 6.0;
                for i in 0..N_COMPONENTS {
                    s[i] += w * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
                }
            }
        }
        self.steps += 1;
        let norm_sq: f64 = s.iter().map(|v| v * v).sum();
        if !norm_sq.is_finite() || norm_sq > RUNAWAY_NORM_SQ {
            return Err(Error::Divergence {
                step: n,
                time: n as f64 * dt,
            });
        }
        Ok(())
    }
}

#[inline(always)]
fn axpy(y: &mut [f64; N_COMPONENTS], a: f64, x: &[f64; N_COMPONENTS]) {
    for i in 0..N_COMPONENTS {
        y[i] += a * x[i];
    }
}

#[inline(always)]
fn offset(y: &[f64; N_COMPONENTS], a: f64, x: &[f64; N_COMPONENTS]) -> [f64; N_COMPONENTS] {
    let mut out = *y;
    axpy(&mut out, a, x);
    out
}

/// One step from time `t` (must be a multiple of `dt`).
pub fn step(
    state: &BlochTensor,
    t: f64,
    dt: f64,
    params: &QubitPairParams,
    drive: &DriveParams,
    method: Method,
    noise: &mut NoiseStream,
) -> Result<BlochTensor> {
    let mut stepper = Stepper::new(params, drive, method, dt, noise.clone())?;
    stepper.steps = (t / dt).round() as u64;
    let mut next = *state;
    stepper.step(&mut next)?;
    *noise = stepper.noise;
    Ok(next)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunMetadata {
    pub params: QubitPairParams,
    pub drive: DriveParams,
    pub config: IntegratorConfig,
    pub realization: u64,
    pub physicality_warnings: u64,
    pub worst_min_eigenvalue: f64,
    pub max_purity: f64,
}

/// Sampled trajectory on a uniform time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub channels: BTreeMap<String, Vec<f64>>,
    pub metadata: Option<RunMetadata>,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>, channels: BTreeMap<String, Vec<f64>>) -> Result<Self> {
        for (name, v) in &channels {
            if v.len() != times.len() {
                return Err(Error::param(
                    name,
                    format!("channel has {} samples, grid has {}", v.len(), times.len()),
                ));
            }
        }
        Ok(Self {
            times,
            channels,
            metadata: None,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn sample_interval(&self) -> f64 {
        if self.times.len() < 2 {
            return 0.0;
        }
        (self.times[self.times.len() - 1] - self.times[0]) / (self.times.len() - 1) as f64
    }

    pub fn channel(&self, name: &str) -> Result<&[f64]> {
        self.channels
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::ChannelMissing(name.to_string()))
    }

    pub fn span(&self) -> f64 {
        match (self.times.first(), self.times.last()) {
            (Some(a), Some(b)) => b - a,
            _ => 0.0,
        }
    }
}

/// Name under which a component is recorded (`Z1`, `X1`, or e.g. `Pxy`).
pub fn channel_name(c: Component) -> String {
    match c {
        Component::P0z => "Z1".into(),
        Component::P0x => "X1".into(),
        other => other.to_string(),
    }
}

fn run_realization(
    params: &QubitPairParams,
    drive: &DriveParams,
    config: &IntegratorConfig,
    initial: &BlochTensor,
    realization: u64,
) -> Result<TimeSeries> {
    let noise = NoiseStream::refined(config.seed, realization, config.noise_refinement);
    let mut stepper = Stepper::new(params, drive, config.method, config.dt, noise)?;
    let n_steps = config.n_steps();
    let stride = config.sample_stride as u64;
    let n_samples = (n_steps / stride + 1) as usize;
    let mut times = Vec::with_capacity(n_samples);
    let mut data: Vec<Vec<f64>> = vec![Vec::with_capacity(n_samples); config.channels.len()];
    let mut state = *initial;

    let mut warnings = 0u64;
    let mut worst_min_eigenvalue = f64::INFINITY;
    let mut max_purity = crate::bloch::purity(&state);

    let record = |state: &BlochTensor, n: u64, times: &mut Vec<f64>, data: &mut Vec<Vec<f64>>| {
        times.push(n as f64 * config.dt);
        for (buf, c) in data.iter_mut().zip(&config.channels) {
            buf.push(state.get(*c));
        }
    };

    record(&state, 0, &mut times, &mut data);
    for n in 1..=n_steps {
        stepper.step(&mut state)?;
        if n % stride == 0 {
            record(&state, n, &mut times, &mut data);
        }
        if config.check_every > 0 && n % config.check_every == 0 {
            let report = physicality_check(&state, config.physicality_tol);
            worst_min_eigenvalue = worst_min_eigenvalue.min(report.min_eigenvalue);
            max_purity = max_purity.max(report.purity);
            if !report.pass {
                if warnings == 0 {
                    log::warn!(
                        "unphysical state at t = {:.3}: purity {:.6}, min eigenvalue {:.3e}",
                        n as f64 * config.dt,
                        report.purity,
                        report.min_eigenvalue
                    );
                }
                warnings += 1;
            }
        }
    }
    if warnings > 1 {
        log::warn!("{warnings} physicality checks failed in realization {realization}");
    }

    let channels = config
        .channels
        .iter()
        .map(|c| channel_name(*c))
        .zip(data)
        .collect();
    Ok(TimeSeries {
        times,
        channels,
        metadata: Some(RunMetadata {
            params: *params,
            drive: *drive,
            config: config.clone(),
            realization,
            physicality_warnings: warnings,
            worst_min_eigenvalue,
            max_purity,
        }),
    })
}

/// Integrate a single trajectory (realization 0 of the configured seed).
pub fn integrate(
    params: &QubitPairParams,
    drive: &DriveParams,
    config: &IntegratorConfig,
    initial: &BlochTensor,
) -> Result<TimeSeries> {
    config.validate(params, drive)?;
    run_realization(params, drive, config, initial, 0)
}

/// `config.n_realizations` independent trajectories, ordered by realization index.
pub fn run_ensemble(
    params: &QubitPairParams,
    drive: &DriveParams,
    config: &IntegratorConfig,
    initial: &BlochTensor,
) -> Result<Vec<TimeSeries>> {
    config.validate(params, drive)?;
    (0..config.n_realizations as u64)
        .into_par_iter()
        .map(|r| run_realization(params, drive, config, initial, r))
        .collect()
}
