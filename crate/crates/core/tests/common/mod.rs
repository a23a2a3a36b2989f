//! Reference implementations shared by the integration tests. Nothing here
//! calls into the equations of motion of the crate.

#![allow(dead_code)]

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64 as C;
use rand::Rng;
use twoqubit_amp::{BlochTensor, Component, QubitPairParams};

fn c(v: f64) -> C {
    C::new(v, 0.0)
}

fn sigma(k: usize) -> Matrix2<C> {
    let (o, l, i) = (c(0.0), c(1.0), C::new(0.0, 1.0));
    match k {
        0 => Matrix2::new(l, o, o, l),
        1 => Matrix2::new(o, l, l, o),
        2 => Matrix2::new(o, -i, i, o),
        _ => Matrix2::new(l, o, o, -l),
    }
}

fn kron(a: &Matrix2<C>, b: &Matrix2<C>) -> Matrix4<C> {
    let mut m = Matrix4::zeros();
    for r in 0..4 {
        for col in 0..4 {
            m[(r, col)] = a[(r / 2, col / 2)] * b[(r % 2, col % 2)];
        }
    }
    m
}

/// `sigma_a (x) sigma_b` with indices 0..4 = I, x, y, z.
fn pp(a: usize, b: usize) -> Matrix4<C> {
    kron(&sigma(a), &sigma(b))
}

fn index_of(ch: char) -> usize {
    match ch {
        '0' => 0,
        'x' => 1,
        'y' => 2,
        _ => 3,
    }
}

/// Pauli indices of a component, read off its label (e.g. `Pxz`).
fn slots(comp: Component) -> (usize, usize) {
    let s = comp.to_string();
    let b = s.as_bytes();
    (index_of(b[1] as char), index_of(b[2] as char))
}

pub fn density(s: &BlochTensor) -> Matrix4<C> {
    let mut rho = pp(0, 0);
    for comp in Component::ALL {
        let (a, b) = slots(comp);
        rho += pp(a, b) * c(s.get(comp));
    }
    rho * c(0.25)
}

pub fn coefficients(m: &Matrix4<C>) -> BlochTensor {
    let mut s = BlochTensor::zero();
    for comp in Component::ALL {
        let (a, b) = slots(comp);
        s.set(comp, (m * pp(a, b)).trace().re);
    }
    s
}

pub fn hamiltonian(p: &QubitPairParams, e1: f64, e2: f64) -> Matrix4<C> {
    (pp(3, 0) * c(p.delta1) + pp(0, 3) * c(p.delta2) + pp(1, 0) * c(e1) + pp(0, 1) * c(e2)) * c(-0.5)
        + pp(1, 1) * c(p.g)
}

/// `d rho / dt` from the commutator and the phenomenological damping:
/// transverse components of qubit j decay at `gamma_phi_j`, longitudinal
/// ones at `gamma_r_j` towards `zt_j`.
pub fn drho(p: &QubitPairParams, rho: &Matrix4<C>, e1: f64, e2: f64) -> Matrix4<C> {
    let h = hamiltonian(p, e1, e2);
    let i = C::new(0.0, 1.0);
    let mut out = (h * rho - rho * h) * (-i);
    let qubits = [
        (p.gamma_phi1, p.gamma_r1, [pp(1, 0), pp(2, 0), pp(3, 0)]),
        (p.gamma_phi2, p.gamma_r2, [pp(0, 1), pp(0, 2), pp(0, 3)]),
    ];
    for (gphi, gr, [x, y, z]) in &qubits {
        out += (z * rho * z - rho) * c(gphi / 2.0);
        out += (x * rho * x + y * rho * y - z * rho * z - rho) * c(gr / 4.0);
    }
    out += (pp(3, 0) * c(p.gamma_r1 * p.zt1)
        + pp(0, 3) * c(p.gamma_r2 * p.zt2)
        + pp(3, 3) * c((p.gamma_r1 + p.gamma_r2) * p.zt1 * p.zt2))
        * c(0.25);
    out
}

pub fn matrix_rhs(s: &BlochTensor, e1: f64, e2: f64, p: &QubitPairParams) -> BlochTensor {
    coefficients(&drho(p, &density(s), e1, e2))
}

pub fn max_abs_diff(a: &BlochTensor, b: &BlochTensor) -> f64 {
    a.0.iter().zip(&b.0).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn max_abs(a: &BlochTensor) -> f64 {
    a.0.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

pub fn random_params(rng: &mut impl Rng) -> QubitPairParams {
    QubitPairParams {
        delta1: rng.gen_range(0.2..3.0),
        delta2: rng.gen_range(0.2..3.0),
        g: rng.gen_range(0.0..2.0),
        gamma_phi1: rng.gen_range(0.0..0.1),
        gamma_phi2: rng.gen_range(0.0..0.1),
        gamma_r1: rng.gen_range(0.0..0.1),
        gamma_r2: rng.gen_range(0.0..0.1),
        zt1: rng.gen_range(-1.0..1.0),
        zt2: rng.gen_range(-1.0..1.0),
    }
}

pub fn random_state(rng: &mut impl Rng) -> BlochTensor {
    let mut s = BlochTensor::zero();
    for v in s.0.iter_mut() {
        *v = rng.gen_range(-1.0..1.0);
    }
    s
}

/// Single-qubit Bloch vector `(x, y, z)` under bias `eps`.
pub fn single_qubit_rhs(r: [f64; 3], delta: f64, eps: f64, gphi: f64, gr: f64, zt: f64) -> [f64; 3] {
    let [x, y, z] = r;
    [delta * y - gphi * x, -delta * x + eps * z - gphi * y, -eps * y - gr * (z - zt)]
}

/// Classical RK4 for one qubit driven by `bias(t)`.
pub struct SingleQubit {
    pub r: [f64; 3],
    pub delta: f64,
    pub gphi: f64,
    pub gr: f64,
    pub zt: f64,
}

impl SingleQubit {
    pub fn step(&mut self, t: f64, dt: f64, bias: &dyn Fn(f64) -> f64) {
        let f = |r: [f64; 3], t: f64| single_qubit_rhs(r, self.delta, bias(t), self.gphi, self.gr, self.zt);
        let add = |r: [f64; 3], k: [f64; 3], h: f64| [r[0] + h * k[0], r[1] + h * k[1], r[2] + h * k[2]];
        let k1 = f(self.r, t);
        let k2 = f(add(self.r, k1, dt / 2.0), t + dt / 2.0);
        let k3 = f(add(self.r, k2, dt / 2.0), t + dt / 2.0);
        let k4 = f(add(self.r, k3, dt), t + dt);
        for i in 0..3 {
            self.r[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
}
