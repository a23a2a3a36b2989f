//! Amplification away from the optimal point: a detuned weak tone, and a
//! weakly coupled pair.
//!
//! ```text
//! cargo run --release --example off_optimal
//! ```

use twoqubit_amp::app::{preset, run_scenario};

fn main() -> twoqubit_amp::Result<()> {
    for name in ["mixed", "off-resonance", "weak-coupling"] {
        let mut cfg = preset(name)?;
        cfg.convergence_check = false;
        let cfg = cfg.with_analysis_samples(1 << 16);
        let report = run_scenario(&cfg)?;
        let m = report.analysis.metrics.as_ref().expect("two-tone run has metrics");
        println!(
            "{name:>14}: g = {}, A = {}, eps = {}, weak tone {:.4}; I_eps/I_A = {:.4}, beta = {:.1}",
            cfg.g,
            cfg.amp_pump,
            cfg.amp_weak,
            report.drive.omega_weak,
            m.ratio,
            report.headline["beta_point"]
        );
    }
    Ok(())
}
