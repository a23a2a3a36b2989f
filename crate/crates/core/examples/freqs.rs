//! Transition frequencies of the static pair as the coupling grows.
//!
//! ```text
//! cargo run --example freqs
//! ```

use twoqubit_amp::transition_frequencies;

fn main() -> twoqubit_amp::Result<()> {
    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "g", "omega1", "omega2", "omega3", "omega4");
    for g in [0.0, 0.1, 0.25, 0.5, 1.0, 2.0] {
        let f = transition_frequencies(1.0, g)?;
        println!("{g:>6} {:>10.6} {:>10.6} {:>10.6} {:>10.6}", f.omega1, f.omega2, f.omega3, f.omega4);
    }
    // the optimal pump and weak tone at delta = g = 1
    let f = transition_frequencies(1.0, 1.0)?;
    println!("\npump omega2 = sqrt(2) - 1 = {:.7}, weak omega3 = sqrt(2) + 1 = {:.7}", f.omega2, f.omega3);
    Ok(())
}
