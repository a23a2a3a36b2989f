//! Bloch-tensor representation of the two-qubit density matrix and its
//! equations of motion.
//!
//! The density matrix is `rho = 1/4 sum_ab P_ab s1_a (x) s2_b` with
//! `P_00 = 1`. The remaining fifteen real coefficients are the state.
//! The first label refers to the left tensor slot. Components with a `0`
//! on the left (`P_0x`, `P_0y`, `P_0z`) evolve with the qubit-2 tunnelling
//! amplitude, bias and damping rates.

use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix4;
use num_complex::Complex64 as C64;

use crate::error::Error;
use crate::model::QubitPairParams;
use crate::pauli::{pauli_product, Pauli};

pub const N_COMPONENTS: usize = 15;

/// Default tolerance for physicality warnings during integration.
pub const DEFAULT_PHYSICALITY_TOL: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    P0x,
    P0y,
    P0z,
    Px0,
    Py0,
    Pz0,
    Pxx,
    Pxy,
    Pyx,
    Pxz,
    Pzx,
    Pyy,
    Pyz,
    Pzy,
    Pzz,
}

impl Component {
    pub const ALL: [Component; N_COMPONENTS] = [
        Component::P0x,
        Component::P0y,
        Component::P0z,
        Component::Px0,
        Component::Py0,
        Component::Pz0,
        Component::Pxx,
        Component::Pxy,
        Component::Pyx,
        Component::Pxz,
        Component::Pzx,
        Component::Pyy,
        Component::Pyz,
        Component::Pzy,
        Component::Pzz,
    ];

    /// The observable `Z1`.
    pub const Z1: Component = Component::P0z;
    /// The observable `X1`.
    pub const X1: Component = Component::P0x;

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn paulis(self) -> (Pauli, Pauli) {
        use Pauli::*;
        match self {
            Component::P0x => (I, X),
            Component::P0y => (I, Y),
            Component::P0z => (I, Z),
            Component::Px0 => (X, I),
            Component::Py0 => (Y, I),
            Component::Pz0 => (Z, I),
            Component::Pxx => (X, X),
            Component::Pxy => (X, Y),
            Component::Pyx => (Y, X),
            Component::Pxz => (X, Z),
            Component::Pzx => (Z, X),
            Component::Pyy => (Y, Y),
            Component::Pyz => (Y, Z),
            Component::Pzy => (Z, Y),
            Component::Pzz => (Z, Z),
        }
    }

    pub fn from_paulis(a: Pauli, b: Pauli) -> Option<Component> {
        Component::ALL.into_iter().find(|c| c.paulis() == (a, b))
    }

    /// Two-letter label such as `0z` or `xy`.
    pub fn label(self) -> String {
        let (a, b) = self.paulis();
        [a.symbol(), b.symbol()].iter().collect()
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.label())
    }
}

impl FromStr for Component {
    type Err = Error;

    /// Accepts `Z1`, `X1`, `0z`, `P0z`, `Pi_0z`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Z1" => return Ok(Component::Z1),
            "X1" => return Ok(Component::X1),
            _ => {}
        }
        let tail = s
            .strip_prefix("Pi_")
            .or_else(|| s.strip_prefix('P'))
            .unwrap_or(s)
            .replace('o', "0");
        Component::ALL
            .into_iter()
            .find(|c| c.label() == tail)
            .ok_or_else(|| Error::ChannelMissing(s.to_string()))
    }
}

/// The fifteen dynamical Bloch-tensor components.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct BlochTensor(pub [f64; N_COMPONENTS]);

impl BlochTensor {
    pub fn zero() -> Self {
        Self([0.0; N_COMPONENTS])
    }

    #[inline]
    pub fn get(&self, c: Component) -> f64 {
        self.0[c.index()]
    }

    #[inline]
    pub fn set(&mut self, c: Component, v: f64) {
        self.0[c.index()] = v;
    }

    pub fn with(mut self, c: Component, v: f64) -> Self {
        self.set(c, v);
        self
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }

    pub fn dot(&self, other: &BlochTensor) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Product state built from the Bloch vectors `(x, y, z)` of each tensor slot.
    pub fn product(left: [f64; 3], right: [f64; 3]) -> Self {
        let mut s = Self::zero();
        let paulis = [Pauli::X, Pauli::Y, Pauli::Z];
        for c in Component::ALL {
            let (a, b) = c.paulis();
            let pick = |p: Pauli, v: &[f64; 3]| match p {
                Pauli::I => 1.0,
                _ => v[paulis.iter().position(|q| *q == p).unwrap()],
            };
            s.set(c, pick(a, &left) * pick(b, &right));
        }
        s
    }
}

/// Time derivative of the Bloch tensor for biases `eps1`, `eps2`.
///
/// Coherent terms follow from `-i[H, rho]`; damping is the linear
/// dephasing/relaxation model, relaxing `P_0z`, `P_z0`, `P_zz` towards
/// `zt2`, `zt1`, `zt1 * zt2`.
pub fn rhs(state: &BlochTensor, eps1: f64, eps2: f64, params: &QubitPairParams) -> BlochTensor {
    BlochTensor(rhs_raw(&state.0, eps1, eps2, params))
}

#[inline(always)]
pub(crate) fn rhs_raw(s: &[f64; N_COMPONENTS], e1: f64, e2: f64, p: &QubitPairParams) -> [f64; N_COMPONENTS] {
    let [p0x, p0y, p0z, px0, py0, pz0, pxx, pxy, pyx, pxz, pzx, pyy, pyz, pzy, pzz] = *s;
    let d1 = p.delta1;
    let d2 = p.delta2;
    let g2 = 2.0 * p.g;
    let (gp1, gp2, gr1, gr2) = (p.gamma_phi1, p.gamma_phi2, p.gamma_r1, p.gamma_r2);
    let gpp = gp1 + gp2;

    [
        d2 * p0y - gp2 * p0x,
        -d2 * p0x + e2 * p0z - g2 * pxz - gp2 * p0y,
        -e2 * p0y + g2 * pxy - gr2 * (p0z - p.zt2),
        d1 * py0 - gp1 * px0,
        -d1 * px0 + e1 * pz0 - g2 * pzx - gp1 * py0,
        -e1 * py0 + g2 * pyx - gr1 * (pz0 - p.zt1),
        d2 * pxy + d1 * pyx - gpp * pxx,
        -g2 * p0z - d2 * pxx + d1 * pyy + e2 * pxz - gpp * pxy,
        -g2 * pz0 - d1 * pxx + d2 * pyy + e1 * pzx - gpp * pyx,
        g2 * p0y - e2 * pxy + d1 * pyz - (gp1 + gr2) * pxz,
        g2 * py0 - e1 * pyx + d2 * pzy - (gp2 + gr1) * pzx,
        -d1 * pxy - d2 * pyx + e2 * pyz + e1 * pzy - gpp * pyy,
        -d1 * pxz - e2 * pyy + e1 * pzz - (gp1 + gr2) * pyz,
        -d2 * pzx - e1 * pyy + e2 * pzz - (gr1 + gp2) * pzy,
        -e1 * pyz - e2 * pzy - (gr1 + gr2) * (pzz - p.zt1 * p.zt2),
    ]
}

pub fn to_density_matrix(state: &BlochTensor) -> Matrix4<C64> {
    let mut rho = Matrix4::<C64>::identity();
    for c in Component::ALL {
        let (a, b) = c.paulis();
        rho += pauli_product(a, b) * C64::new(state.get(c), 0.0);
    }
    rho * C64::new(0.25, 0.0)
}

/// Project a (trace-one) density matrix back onto the Pauli products.
pub fn from_density_matrix(rho: &Matrix4<C64>) -> BlochTensor {
    let mut s = BlochTensor::zero();
    for c in Component::ALL {
        let (a, b) = c.paulis();
        s.set(c, (rho * pauli_product(a, b)).trace().re);
    }
    s
}

/// `Tr rho^2 = (1 + sum P^2) / 4`.
pub fn purity(state: &BlochTensor) -> f64 {
    (1.0 + state.norm_sq()) / 4.0
}

/// Uncorrelated thermal equilibrium of the two qubits.
pub fn thermal_product_state(params: &QubitPairParams) -> BlochTensor {
    BlochTensor::zero()
        .with(Component::P0z, params.zt2)
        .with(Component::Pz0, params.zt1)
        .with(Component::Pzz, params.zt1 * params.zt2)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalityReport {
    pub purity: f64,
    pub min_eigenvalue: f64,
    pub pass: bool,
}

pub fn physicality_check(state: &BlochTensor, tol: f64) -> PhysicalityReport {
    let purity = purity(state);
    let min_eigenvalue = to_density_matrix(state)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    PhysicalityReport {
        purity,
        min_eigenvalue,
        pass: min_eigenvalue >= -tol && purity <= 1.0 + tol,
    }
}
