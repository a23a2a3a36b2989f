//! The spectral pipeline on its own: write a synthetic two-tone response as
//! CSV, read it back, then find and label its peaks.
//!
//! ```text
//! cargo run --example spectrum_from_csv
//! ```

use std::collections::BTreeMap;

use twoqubit_amp::app::output;
use twoqubit_amp::spectrum::{compute_spectrum, labelled_peaks, PeakSettings};
use twoqubit_amp::{TimeSeries, Window};

fn main() -> twoqubit_amp::Result<()> {
    let (wp, ww) = (0.7, 2.9);
    let dt = 0.1;
    let times: Vec<f64> = (0..32768).map(|i| i as f64 * dt).collect();
    let z = times
        .iter()
        .map(|t| 0.4 * (2.0 * wp * t).cos() + 0.05 * ((ww - wp) * t).sin() + 0.02 * ((ww + wp) * t).sin())
        .collect();
    let x = times.iter().map(|t| 0.3 * (wp * t).cos()).collect();
    let channels = BTreeMap::from([("Z1".to_string(), z), ("X1".to_string(), x)]);
    let ts = TimeSeries::new(times, channels)?;

    let path = std::env::temp_dir().join("twoqubit-synthetic.csv");
    output::write_timeseries_csv(&path, &ts, 1.0)?;
    let back = output::read_timeseries_csv(&path)?;

    let spec = compute_spectrum(&back, "Z1", 0.0, Window::Hann)?;
    let settings = PeakSettings {
        rel_threshold: 0.01,
        min_prominence: 0.005,
        omega_pump: wp,
        omega_weak: ww,
        k_max: 10,
        l_max: 2,
        tol_match: 3.0 * spec.bin_width(),
    };
    let peaks = labelled_peaks(&spec, &settings)?;
    println!("read {} samples from {}", back.len(), path.display());
    print!("{}", output::peaks_csv(&peaks, 1.0));
    Ok(())
}
