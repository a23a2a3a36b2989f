//! White noise on both qubits: the combination peaks of the two-tone run
//! survive, averaged over an ensemble of realizations.
//!
//! ```text
//! cargo run --release --example noise            # sqrt(D)/eps = 0.2
//! cargo run --release --example noise -- 0.066
//! ```

use twoqubit_amp::app::presets::noisy;
use twoqubit_amp::app::{preset, run_scenario};

fn main() -> twoqubit_amp::Result<()> {
    let level: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.2);
    let mut clean = preset("mixed")?;
    let mut loud = noisy(level);
    for cfg in [&mut clean, &mut loud] {
        cfg.convergence_check = false;
        *cfg = cfg.clone().with_analysis_samples(1 << 16);
    }
    let quiet = run_scenario(&clean)?;
    let rough = run_scenario(&loud)?;
    println!(
        "sqrt(D)/eps = {level}, D = {:.2e}, {} realizations ({})",
        loud.noise_d, loud.integrator.n_realizations, loud.integrator.method
    );

    let mut floor = rough.analysis.spectrum_z.magnitudes[1..].to_vec();
    floor.sort_by(f64::total_cmp);
    let median = floor[floor.len() / 2];
    println!("median spectral floor {median:.2e}\n");
    println!("{:>8} {:>12} {:>12}", "peak", "D = 0", "noisy");
    let mut mixed: Vec<_> = quiet.analysis.peaks_z.peaks.iter().filter(|p| p.is_mixed()).collect();
    mixed.sort_by(|a, b| b.height.total_cmp(&a.height));
    for p in mixed.iter().take(8) {
        let label = p.label.unwrap();
        let noisy_h = rough.analysis.peaks_z.with_label(label).map(|q| q.height);
        let shown = noisy_h.map(|h| format!("{h:.3e}")).unwrap_or_else(|| "lost".into());
        println!("{:>8} {:>12.3e} {shown:>12}", label.to_string(), p.height);
    }
    Ok(())
}
