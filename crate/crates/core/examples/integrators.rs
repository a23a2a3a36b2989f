//! Forward Euler against classical Runge-Kutta on the optimal two-tone drive.
//!
//! Euler inflates every rotation by `1 + (w dt)^2 / 2` per step, so its error
//! grows with the horizon even at small `dt`. Runge-Kutta at ten times the
//! step stays on the exact trajectory.

use twoqubit_amp::bloch::thermal_product_state;
use twoqubit_amp::integrate::{NoiseStream, Stepper};
use twoqubit_amp::{transition_frequencies, Component, DriveParams, Method, QubitPairParams};

fn trajectory(method: Method, dt: f64, horizon: f64, every: f64) -> twoqubit_amp::Result<Vec<f64>> {
    let p = QubitPairParams::identical(1.0, 1.0, 1e-3, 1e-3, 1.0);
    let f = transition_frequencies(1.0, 1.0).unwrap();
    let d = DriveParams::new(15.0, f.omega2, 0.1, f.omega3, 0.0);
    let mut s = thermal_product_state(&p);
    let mut stepper = Stepper::new(&p, &d, method, dt, NoiseStream::new(0)).unwrap();
    let stride = (every / dt).round() as u64;
    let mut out = vec![s.get(Component::Z1)];
    for n in 1..=(horizon / dt).round() as u64 {
        stepper.step(&mut s)?;
        if n % stride == 0 {
            out.push(s.get(Component::Z1));
        }
    }
    Ok(out)
}

fn main() {
    let horizon: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1000.0);
    let reference = trajectory(Method::Rk4, 1e-4, horizon, 1.0).expect("reference run");
    println!("max |Z1 - Z1_ref| over t <= {horizon}");
    for (method, dt) in [
        (Method::Rk4, 1e-3),
        (Method::Rk4, 2e-3),
        (Method::Euler, 1e-4),
        (Method::Euler, 5e-5),
    ] {
        match trajectory(method, dt, horizon, 1.0) {
            Ok(z) => {
                let err = z.iter().zip(&reference).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                println!("  {method:<6} dt = {dt:e}: {err:.3e}");
            }
            Err(e) => println!("  {method:<6} dt = {dt:e}: {e}"),
        }
    }
}
