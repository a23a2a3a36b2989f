use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use twoqubit_amp::app::{self, output, ScenarioConfig, SweepAxis};
use twoqubit_amp::spectrum::{compute_spectrum, labelled_peaks};
use twoqubit_amp::{transition_frequencies, Result, Window};

#[derive(Parser)]
#[command(name = "twoqubit-amp", version, about = "Two-coupled-qubit parametric amplifier simulator")]
struct Cli {
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[arg(long, global = true)]
    dt: Option<f64>,
    #[arg(long = "t-total", global = true)]
    t_total: Option<f64>,
    #[arg(long, global = true)]
    realizations: Option<usize>,
    #[arg(long = "no-svg", global = true)]
    no_svg: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset (pump-only, signal-only, mixed, noise-0.066, noise-0.2,
    /// off-resonance, weak-coupling) or a config file.
    Scenario {
        name: String,
        /// Skip the dt/2 re-run.
        #[arg(long)]
        no_check: bool,
    },
    /// Sweep one parameter of a base scenario.
    Sweep {
        #[arg(long, default_value = "mixed")]
        base: String,
        /// epsilon, D, omega_weak or g.
        #[arg(long)]
        axis: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
    /// Spectrum and peaks of a time-series CSV.
    Spectrum {
        input: PathBuf,
        #[arg(long, default_value = "Z1")]
        channel: String,
        #[arg(long, default_value_t = 0.0)]
        transient: f64,
        #[arg(long, default_value = "rect")]
        window: Window,
        /// Pump frequency used for labelling (number or omegaN at delta = 1).
        #[arg(long, default_value = "omega2")]
        omega_pump: String,
        #[arg(long, default_value = "omega3")]
        omega_weak: String,
        #[arg(long, default_value_t = 1.0)]
        g: f64,
        #[arg(long, default_value_t = 30)]
        k_max: i32,
        #[arg(long, default_value_t = 3)]
        l_max: i32,
        /// Matching tolerance, e.g. "3 bins" or 0.005.
        #[arg(long, default_value = "3 bins")]
        tol_match: app::TolMatch,
    },
    /// Transition frequencies of the static pair.
    Freqs {
        #[arg(allow_negative_numbers = true)]
        delta: f64,
        #[arg(allow_negative_numbers = true)]
        g: f64,
    },
}

impl Cli {
    fn apply_overrides(&self, cfg: &mut ScenarioConfig) {
        let it = &mut cfg.integrator;
        if let Some(seed) = self.seed {
            it.seed = seed;
        }
        if let Some(dt) = self.dt {
            // keep the sample interval
            let interval = it.sample_interval();
            it.dt = dt;
            it.sample_stride = ((interval / dt).round() as usize).max(1);
        }
        if let Some(t) = self.t_total {
            it.t_total = t;
        }
        if let Some(r) = self.realizations {
            it.n_realizations = r;
        }
        cfg.output.dir = self.out.clone();
        cfg.output.svg = !self.no_svg;
    }
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Freqs { delta, g } => {
            let f = transition_frequencies(*delta, *g)?;
            for (i, w) in f.as_array().iter().enumerate() {
                println!("omega{} = {}", i + 1, output::fmt_num(*w));
            }
        }
        Command::Scenario { name, no_check } => {
            let mut cfg = app::resolve_scenario(name)?;
            cli.apply_overrides(&mut cfg);
            cfg.convergence_check = !no_check;
            cfg.validate()?;
            let report = app::run_scenario(&cfg)?;
            let files = report.write_artifacts(&cfg.output.dir)?;
            print!("{}", report.summary());
            for f in files {
                log::info!("wrote {}", f.display());
            }
        }
        Command::Sweep { base, axis, values } => {
            let mut cfg = app::resolve_scenario(base)?;
            cli.apply_overrides(&mut cfg);
            let axis: SweepAxis = axis.parse()?;
            let report = app::run_sweep(&cfg, axis, values)?;
            report.write_artifacts(&cfg.output.dir)?;
            print!("{}", report.table_csv());
            print!("{}", report.beta_summary());
        }
        Command::Spectrum {
            input,
            channel,
            transient,
            window,
            omega_pump,
            omega_weak,
            g,
            k_max,
            l_max,
            tol_match,
        } => {
            let ts = output::read_timeseries_csv(input)?;
            let spec = compute_spectrum(&ts, channel, *transient, *window)?;
            let resolve = |key: &str, s: &str| -> Result<f64> {
                let f: app::FreqSpec = s.parse().map_err(|e: String| twoqubit_amp::Error::InvalidParameter {
                    name: key.into(),
                    reason: e,
                })?;
                f.resolve(1.0, *g)
            };
            let settings = app::SpectrumSettings {
                window: *window,
                k_max: *k_max,
                l_max: *l_max,
                tol_match: *tol_match,
                ..Default::default()
            }
            .peak_settings(
                resolve("omega_pump", omega_pump)?,
                resolve("omega_weak", omega_weak)?,
                spec.bin_width(),
            );
            let peaks = labelled_peaks(&spec, &settings)?;
            std::fs::create_dir_all(&cli.out).map_err(|e| twoqubit_amp::Error::Io {
                path: cli.out.clone(),
                source: e,
            })?;
            output::write_spectrum_csv(&cli.out.join(format!("spectrum_{channel}.csv")), &spec, 1.0)?;
            output::write_peaks_csv(&cli.out.join(format!("peaks_{channel}.csv")), &peaks, 1.0)?;
            if !cli.no_svg {
                let svg = output::spectrum_svg(&spec, &peaks, 1.0, &format!("S_{channel}"));
                output::write_text(&cli.out.join(format!("spectrum_{channel}.svg")), &svg)?;
            }
            print!("{}", output::peaks_csv(&peaks, 1.0));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // usage errors are validation errors; exit code 2 means divergence
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
