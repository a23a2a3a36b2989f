//! Single-qubit Pauli matrices and two-qubit tensor products.
//!
//! Two-qubit operators act on the computational product basis
//! `|q1 q2>` ordered `|00>, |01>, |10>, |11>`, where `|0>` is the +1
//! eigenstate of `sigma_z` and qubit 1 occupies the left tensor slot.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64 as C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> Matrix2<C64> {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        match self {
            Pauli::I => Matrix2::new(l, o, o, l),
            Pauli::X => Matrix2::new(o, l, l, o),
            Pauli::Y => Matrix2::new(o, -i, i, o),
            Pauli::Z => Matrix2::new(l, o, o, -l),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => '0',
            Pauli::X => 'x',
            Pauli::Y => 'y',
            Pauli::Z => 'z',
        }
    }
}

pub fn kron(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Matrix4<C64> {
    Matrix4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

/// `sigma^1_a (x) sigma^2_b`.
pub fn pauli_product(a: Pauli, b: Pauli) -> Matrix4<C64> {
    kron(&a.matrix(), &b.matrix())
}
