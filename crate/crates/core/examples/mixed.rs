//! Two-tone run at the optimal point: pump at omega2, weak tone at omega3.
//!
//! ```text
//! cargo run --release --example mixed            # 2^16-sample analysis window
//! cargo run --release --example mixed -- full    # preset length, writes artifacts
//! ```

use twoqubit_amp::app::{preset, run_scenario};

fn main() -> twoqubit_amp::Result<()> {
    let full = std::env::args().any(|a| a == "full");
    let mut cfg = preset("mixed")?;
    if !full {
        cfg = cfg.with_analysis_samples(1 << 16);
    }
    let report = run_scenario(&cfg)?;
    let m = report.analysis.metrics.as_ref().expect("two-tone run has metrics");

    println!("I_A   = {:.5}  (highest pump-only peak)", m.i_a);
    match m.i_eps_label {
        Some(l) => println!("I_eps = {:.5}  at {l}", m.i_eps),
        None => println!("no mixed peaks found"),
    }
    println!("I_eps / I_A        = {:.4}", m.ratio);
    println!("I_eps / I_pm       = {:.3}", m.i_eps_over_i_pm());
    println!("beta (single point) = {:.1}", report.headline["beta_point"]);

    let mixed: Vec<_> = m.mixed_peaks.peaks.iter().filter(|p| p.is_mixed()).collect();
    println!("\n{} mixed peaks, largest first:", mixed.len());
    let mut sorted = mixed.clone();
    sorted.sort_by(|a, b| b.height.total_cmp(&a.height));
    for p in sorted.iter().take(10) {
        println!("  omega = {:8.4}  {:>8}  height {:.5}", p.omega, p.label.unwrap().to_string(), p.height);
    }
    if let Some(c) = &report.convergence {
        println!("\ndt/2 check: max change {:.3}% ({})", 100.0 * c.max_rel_change, if c.pass { "pass" } else { "FAIL" });
    }
    if full {
        let dir = std::env::temp_dir().join("twoqubit-mixed");
        report.write_artifacts(&dir)?;
        println!("artifacts in {}", dir.display());
    }
    Ok(())
}
