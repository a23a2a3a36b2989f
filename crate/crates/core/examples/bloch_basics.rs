//! The Bloch tensor: density matrices, purity, the equations of motion and
//! the thermal state they relax to.
//!
//! ```text
//! cargo run --example bloch_basics
//! ```

use twoqubit_amp::bloch::{from_density_matrix, physicality_check, purity, rhs, thermal_product_state, to_density_matrix};
use twoqubit_amp::{BlochTensor, Component, QubitPairParams};

fn main() {
    let p = QubitPairParams::identical(1.0, 1.0, 1e-3, 1e-3, 1.0);

    let ground = thermal_product_state(&p);
    println!("thermal product state, nonzero components:");
    for c in Component::ALL {
        if ground.get(c) != 0.0 {
            println!("  {c} = {}", ground.get(c));
        }
    }
    println!("purity {:.3}", purity(&ground));

    // a mixed product state survives the round trip through the 4x4 matrix
    let s = BlochTensor::product([0.3, -0.2, 0.8], [-0.5, 0.1, 0.6]);
    let back = from_density_matrix(&to_density_matrix(&s));
    let err = s.0.iter().zip(&back.0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let check = physicality_check(&s, 1e-9);
    println!("\nproduct state: purity {:.4}, min eigenvalue {:.4}, round trip error {err:.1e}", check.purity, check.min_eigenvalue);

    // the coupling feeds correlators: at g = 1 the undriven ground state is not stationary
    let d = rhs(&ground, 0.0, 0.0, &p);
    println!("\nd/dt at the thermal product state with g = 1, no drive:");
    for c in Component::ALL {
        if d.get(c).abs() > 1e-15 {
            println!("  d{c}/dt = {:+.3}", d.get(c));
        }
    }
}
