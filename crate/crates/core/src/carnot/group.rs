//! Group law, exponential map and left-invariant frame in exponential coordinates of the
//! second kind, `g = exp(θ1 Y20 + θ2 Y11 + θ3 Y02 + θ4 Y10 + θ5 Y01 + θ6 Y) · exp(y X2) · exp(x X1)`.

use super::algebra::{AlgebraVector, Basis, StructureConstants, DIM};

/// A point of J²(ℝ²,ℝ) in exponential coordinates of the second kind.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GroupPoint {
    pub x: f64,
    pub y: f64,
    pub theta: [f64; 6],
}

/// A tangent vector in the coordinate basis `(∂x, ∂y, ∂θ1, …, ∂θ6)`.
pub type CoordVector = [f64; DIM];

impl GroupPoint {
    pub const IDENTITY: GroupPoint = GroupPoint {
        x: 0.0,
        y: 0.0,
        theta: [0.0; 6],
    };

    pub fn new(x: f64, y: f64, theta: [f64; 6]) -> Self {
        GroupPoint { x, y, theta }
    }

    pub fn to_array(&self) -> [f64; DIM] {
        let t = self.theta;
        [self.x, self.y, t[0], t[1], t[2], t[3], t[4], t[5]]
    }

    pub fn from_array(a: [f64; DIM]) -> Self {
        GroupPoint {
            x: a[0],
            y: a[1],
            theta: [a[2], a[3], a[4], a[5], a[6], a[7]],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    /// Group exponential. The one-parameter subgroup of a left-invariant field has
    /// `x(t) = a t`, `y(t) = b t`, and the θ-components integrate exactly as polynomials in `t`.
    pub fn exp(v: &AlgebraVector) -> GroupPoint {
        let [a, b, c20, c11, c02, c10, c01, c] = v.0;
        GroupPoint {
            x: a,
            y: b,
            theta: [
                c20,
                c11,
                c02,
                c10 + 0.5 * (c20 * a + c11 * b),
                c01 + 0.5 * (c11 * a + c02 * b),
                c + 0.5 * (c10 * a + c01 * b)
                    + (c20 * a * a + 2.0 * c11 * a * b + c02 * b * b) / 6.0,
            ],
        }
    }

    /// Inverse of [`GroupPoint::exp`].
    pub fn log(&self) -> AlgebraVector {
        let (a, b) = (self.x, self.y);
        let [c20, c11, c02, t4, t5, t6] = self.theta;
        let c10 = t4 - 0.5 * (c20 * a + c11 * b);
        let c01 = t5 - 0.5 * (c11 * a + c02 * b);
        let c = t6
            - 0.5 * (c10 * a + c01 * b)
            - (c20 * a * a + 2.0 * c11 * a * b + c02 * b * b) / 6.0;
        AlgebraVector([a, b, c20, c11, c02, c10, c01, c])
    }

    /// Group product via the Baker–Campbell–Hausdorff formula, exact at step three.
    pub fn multiply(&self, other: &GroupPoint) -> GroupPoint {
        group_multiply_with(&StructureConstants::jet_space(), self, other)
    }

    pub fn inverse(&self) -> GroupPoint {
        GroupPoint::exp(&-self.log())
    }

    /// Whether the point lies in the abelian normal subgroup `A` (x = y = 0).
    pub fn in_abelian_subgroup(&self) -> bool {
        self.x == 0.0 && self.y == 0.0
    }
}

/// `g · h`.
pub fn group_multiply(g: &GroupPoint, h: &GroupPoint) -> GroupPoint {
    g.multiply(h)
}

/// Group product computed from a given bracket table.
pub fn group_multiply_with(sc: &StructureConstants, g: &GroupPoint, h: &GroupPoint) -> GroupPoint {
    GroupPoint::exp(&sc.bch(&g.log(), &h.log()))
}

/// Coordinate expression at `(x, y)` of the left-invariant field generated by a basis
/// vector. Components depend only on the horizontal coordinates.
pub fn left_invariant_field(b: Basis, x: f64, y: f64) -> CoordVector {
    let mut v = [0.0; DIM];
    // θ-slot k of the coordinate vector lives at index k + 1 (θ1 ↦ 2).
    let th = |k: usize| k + 1;
    match b {
        Basis::X1 => v[0] = 1.0,
        Basis::X2 => v[1] = 1.0,
        Basis::Y20 => {
            v[th(1)] = 1.0;
            v[th(4)] = x;
            v[th(6)] = 0.5 * x * x;
        }
        Basis::Y11 => {
            v[th(2)] = 1.0;
            v[th(4)] = y;
            v[th(5)] = x;
            v[th(6)] = x * y;
        }
        Basis::Y02 => {
            v[th(3)] = 1.0;
            v[th(5)] = y;
            v[th(6)] = 0.5 * y * y;
        }
        Basis::Y10 => {
            v[th(4)] = 1.0;
            v[th(6)] = x;
        }
        Basis::Y01 => {
            v[th(5)] = 1.0;
            v[th(6)] = y;
        }
        Basis::Y => v[th(6)] = 1.0,
    }
    v
}

/// The orthonormal horizontal frame `(X1, X2, Y20, Y11, Y02)` evaluated at `g`.
pub fn frame_at(g: &GroupPoint) -> [CoordVector; 5] {
    [Basis::X1, Basis::X2, Basis::Y20, Basis::Y11, Basis::Y02]
        .map(|b| left_invariant_field(b, g.x, g.y))
}
