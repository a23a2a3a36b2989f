//! Gain curve: the highest mixed peak against the weak amplitude, and the
//! amplification factor fitted over its linear part.
//!
//! ```text
//! cargo run --release --example epsilon_sweep
//! ```

use twoqubit_amp::app::{preset, run_sweep, SweepAxis};

fn main() -> twoqubit_amp::Result<()> {
    let base = preset("mixed")?.with_analysis_samples(1 << 16);
    let ratios = [0.001, 0.002, 0.003, 0.004, 0.005, 0.007, 0.01, 0.02, 0.05];
    let values: Vec<f64> = ratios.iter().map(|r| r * base.amp_pump).collect();
    let report = run_sweep(&base, SweepAxis::Epsilon, &values)?;
    print!("{}", report.table_csv());
    print!("{}", report.beta_summary());
    let dir = std::env::temp_dir().join("twoqubit-sweep");
    report.write_artifacts(&dir)?;
    println!("sweep.csv and beta.txt in {}", dir.display());
    Ok(())
}
