//! The normal geodesic Hamiltonian `H_sR = ½(P1² + P2² + P20² + P11² + P02²)` on the
//! cotangent bundle, written in canonical coordinates `(x, y, θ1…θ6; p_x, p_y, p1…p6)`.

use crate::carnot::{frame_at, GroupPoint};
use crate::reduction::{Mu, ReducedState};

/// A covector at a group point, with momenta conjugate to the exponential coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CotangentState {
    pub base: GroupPoint,
    pub px: f64,
    pub py: f64,
    /// `(p1, …, p6)`, conjugate to `(θ1, …, θ6)`.
    pub p_theta: [f64; 6],
}

/// Values of the five horizontal momentum functions `λ(X1), λ(X2), λ(Y20), λ(Y11), λ(Y02)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MomentumFive {
    pub p1: f64,
    pub p2: f64,
    pub p20: f64,
    pub p11: f64,
    pub p02: f64,
}

impl MomentumFive {
    pub fn to_array(&self) -> [f64; 5] {
        [self.p1, self.p2, self.p20, self.p11, self.p02]
    }
}

impl CotangentState {
    pub fn new(base: GroupPoint, px: f64, py: f64, p_theta: [f64; 6]) -> Self {
        CotangentState {
            base,
            px,
            py,
            p_theta,
        }
    }

    /// Full state from a reduced state, a momentum-map level and vertical coordinates.
    pub fn from_reduced(s: &ReducedState, mu: &Mu, theta: [f64; 6]) -> Self {
        CotangentState::new(GroupPoint::new(s.x, s.y, theta), s.px, s.py, mu.0)
    }

    /// The `(x, y, p_x, p_y)` block.
    pub fn reduced(&self) -> ReducedState {
        ReducedState::new(self.base.x, self.base.y, self.px, self.py)
    }

    /// Momentum covector in the order `(p_x, p_y, p1, …, p6)`.
    pub fn momenta(&self) -> [f64; 8] {
        let p = self.p_theta;
        [self.px, self.py, p[0], p[1], p[2], p[3], p[4], p[5]]
    }

    /// Layout `(x, y, θ1…θ6, p_x, p_y, p1…p6)`.
    pub fn to_array(&self) -> [f64; 16] {
        let mut out = [0.0; 16];
        out[..8].copy_from_slice(&self.base.to_array());
        out[8..].copy_from_slice(&self.momenta());
        out
    }

    pub fn from_array(a: [f64; 16]) -> Self {
        let mut q = [0.0; 8];
        q.copy_from_slice(&a[..8]);
        CotangentState {
            base: GroupPoint::from_array(q),
            px: a[8],
            py: a[9],
            p_theta: [a[10], a[11], a[12], a[13], a[14], a[15]],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

/// Pair the momentum covector with the horizontal frame at the base point.
pub fn momentum_five(s: &CotangentState) -> MomentumFive {
    let p = s.momenta();
    let pair = |v: &[f64; 8]| v.iter().zip(&p).map(|(a, b)| a * b).sum::<f64>();
    let [x1, x2, y20, y11, y02] = frame_at(&s.base);
    MomentumFive {
        p1: pair(&x1),
        p2: pair(&x2),
        p20: pair(&y20),
        p11: pair(&y11),
        p02: pair(&y02),
    }
}

/// `H_sR`.
pub fn energy(s: &CotangentState) -> f64 {
    0.5 * momentum_five(s).to_array().iter().map(|v| v * v).sum::<f64>()
}

/// The momentum map `J : T*J² → 𝔞*`, which reads off `(p1, …, p6)`.
pub fn momentum_map(s: &CotangentState) -> Mu {
    Mu(s.p_theta)
}

/// Hamilton's equations `(∂H/∂p, −∂H/∂q)` in the layout of [`CotangentState::to_array`].
pub fn full_vector_field(s: &CotangentState) -> [f64; 16] {
    let (x, y) = (s.base.x, s.base.y);
    let [_, _, _, p4, p5, p6] = s.p_theta;
    let m = momentum_five(s);
    let (a, b, c) = (m.p20, m.p11, m.p02);

    let mut out = [0.0; 16];
    out[0] = m.p1;
    out[1] = m.p2;
    out[2] = a;
    out[3] = b;
    out[4] = c;
    out[5] = x * a + y * b;
    out[6] = x * b + y * c;
    out[7] = 0.5 * x * x * a + x * y * b + 0.5 * y * y * c;
    // ∂P20/∂x = p4 + x p6, ∂P11/∂x = p5 + y p6, ∂P11/∂y = p4 + x p6, ∂P02/∂y = p5 + y p6.
    out[8] = -(a * (p4 + x * p6) + b * (p5 + y * p6));
    out[9] = -(b * (p4 + x * p6) + c * (p5 + y * p6));
    // p1 … p6 are conjugate to cyclic coordinates; out[10..16] stays zero.
    out
}
