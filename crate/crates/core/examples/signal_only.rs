//! The weak tone alone barely moves the qubits: its response sits far below
//! the pump-only harmonics.
//!
//! ```text
//! cargo run --release --example signal_only
//! ```

use twoqubit_amp::app::{preset, run_scenario, ScenarioConfig};

fn highest(name: &str) -> twoqubit_amp::Result<f64> {
    let mut cfg: ScenarioConfig = preset(name)?;
    cfg.convergence_check = false;
    let report = run_scenario(&cfg.with_analysis_samples(1 << 16))?;
    let p = report.analysis.peaks_z.highest().expect("spectrum has a peak");
    println!("{name:>12}: highest S_Z peak {:.4e} at omega = {:.4}", p.height, p.omega);
    Ok(p.height)
}

fn main() -> twoqubit_amp::Result<()> {
    let pump = highest("pump-only")?;
    let signal = highest("signal-only")?;
    println!("suppression: {:.1}x", pump / signal);
    Ok(())
}
