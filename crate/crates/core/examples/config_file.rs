//! Scenario files: flat `key = value` text with symbolic frequencies.
//!
//! ```text
//! cargo run --example config_file
//! ```

use twoqubit_amp::app::load_config;

const TEXT: &str = "\
# weak tone detuned from omega3
delta = 1
g = 1
amp_pump = 15
omega_pump = omega2
amp_weak = 0.1
omega_weak = \"1.113*omega3\"
method = rk4
dt = 0.001
window = hann
tol_match = 3 bins
";

fn main() -> twoqubit_amp::Result<()> {
    let path = std::env::temp_dir().join("detuned.cfg");
    std::fs::write(&path, TEXT).map_err(|e| twoqubit_amp::Error::Io { path: path.clone(), source: e })?;
    let cfg = load_config(&path)?;
    let d = cfg.drive()?;
    println!("scenario `{}`: pump {:.7}, weak {:.7}", cfg.name, d.omega_pump, d.omega_weak);
    println!("\nevery key, as written back:\n{}", cfg.to_config_string());

    let bad = std::env::temp_dir().join("bad.cfg");
    std::fs::write(&bad, "delta = 1\ngamma_r = -1\n").map_err(|e| twoqubit_amp::Error::Io { path: bad.clone(), source: e })?;
    match load_config(&bad) {
        Err(e) => println!("rejected: {e} (exit code {})", e.exit_code()),
        Ok(_) => unreachable!("negative rates are invalid"),
    }
    Ok(())
}
