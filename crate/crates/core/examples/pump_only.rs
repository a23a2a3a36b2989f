//! Strong pump alone: harmonics of the pump with parity selection rules.
//! `Z1` carries even multiples of omega2, `X1` odd ones.
//!
//! ```text
//! cargo run --release --example pump_only
//! ```

use twoqubit_amp::app::{preset, run_scenario};

fn main() -> twoqubit_amp::Result<()> {
    let mut cfg = preset("pump-only")?;
    cfg.convergence_check = false;
    let cfg = cfg.with_analysis_samples(1 << 16);
    let report = run_scenario(&cfg)?;
    let a = &report.analysis;
    let w = report.drive.omega_pump;
    let tol = cfg.spectrum.tol_match.resolve(a.spectrum_z.bin_width());

    println!("{:>3} {:>12} {:>12}", "m", "S_Z(m w)", "S_X(m w)");
    for m in 1..=30 {
        let f = m as f64 * w;
        println!("{m:>3} {:>12.3e} {:>12.3e}", a.spectrum_z.height_near(f, tol), a.spectrum_x.height_near(f, tol));
    }
    if let Some(p) = a.peaks_z.highest() {
        println!("\nhighest S_Z peak at {:.4} = {}", p.omega, p.label.map(|l| l.to_string()).unwrap_or_default());
    }
    Ok(())
}
