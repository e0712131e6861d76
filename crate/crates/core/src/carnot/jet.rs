//! Conversion between exponential coordinates and the jet coordinates
//! `(x, y, u20, u11, u02, u10, u01, u)` of a 2-jet.
//!
//! In jet coordinates the layer-two and layer-three fields are `Y10 = -∂u10`,
//! `Y01 = -∂u01`, `Y = ∂u`. The map below sends the exponential-coordinate frame to the
//! jet frame `X1 = ∂x + u10 ∂u + u20 ∂u10 + u11 ∂u01`, `X2 = ∂y + u01 ∂u + u11 ∂u10 + u02 ∂u01`,
//! `Y20 = ∂u20`, `Y11 = ∂u11`, `Y02 = ∂u02`.

use super::group::GroupPoint;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JetPoint {
    pub x: f64,
    pub y: f64,
    pub u20: f64,
    pub u11: f64,
    pub u02: f64,
    pub u10: f64,
    pub u01: f64,
    pub u: f64,
}

impl JetPoint {
    pub fn to_array(&self) -> [f64; 8] {
        [
            self.x, self.y, self.u20, self.u11, self.u02, self.u10, self.u01, self.u,
        ]
    }

    pub fn from_array(a: [f64; 8]) -> Self {
        JetPoint {
            x: a[0],
            y: a[1],
            u20: a[2],
            u11: a[3],
            u02: a[4],
            u10: a[5],
            u01: a[6],
            u: a[7],
        }
    }

    /// The contact frame `(X1, X2, Y20, Y11, Y02)` in jet coordinates.
    pub fn frame(&self) -> [[f64; 8]; 5] {
        let mut x1 = [0.0; 8];
        x1[0] = 1.0;
        x1[7] = self.u10;
        x1[5] = self.u20;
        x1[6] = self.u11;
        let mut x2 = [0.0; 8];
        x2[1] = 1.0;
        x2[7] = self.u01;
        x2[5] = self.u11;
        x2[6] = self.u02;
        let unit = |k: usize| {
            let mut v = [0.0; 8];
            v[k] = 1.0;
            v
        };
        [x1, x2, unit(2), unit(3), unit(4)]
    }

    /// Values of the three Pfaffian contact forms on a tangent vector at this point:
    /// `u10 dx + u01 dy − du`, `u20 dx + u11 dy − du10`, `u11 dx + u02 dy − du01`.
    pub fn contact_forms(&self, v: &[f64; 8]) -> [f64; 3] {
        [
            self.u10 * v[0] + self.u01 * v[1] - v[7],
            self.u20 * v[0] + self.u11 * v[1] - v[5],
            self.u11 * v[0] + self.u02 * v[1] - v[6],
        ]
    }
}

pub fn to_jet(g: &GroupPoint) -> JetPoint {
    let (x, y) = (g.x, g.y);
    let [t1, t2, t3, t4, t5, t6] = g.theta;
    JetPoint {
        x,
        y,
        u20: t1,
        u11: t2,
        u02: t3,
        u10: t1 * x + t2 * y - t4,
        u01: t2 * x + t3 * y - t5,
        u: t6 - t5 * y + 0.5 * t3 * y * y + (t2 * y - t4) * x + 0.5 * t1 * x * x,
    }
}

pub fn from_jet(j: &JetPoint) -> GroupPoint {
    let (x, y) = (j.x, j.y);
    let (t1, t2, t3) = (j.u20, j.u11, j.u02);
    let t4 = t1 * x + t2 * y - j.u10;
    let t5 = t2 * x + t3 * y - j.u01;
    let t6 = j.u + t5 * y - 0.5 * t3 * y * y - (t2 * y - t4) * x - 0.5 * t1 * x * x;
    GroupPoint::new(x, y, [t1, t2, t3, t4, t5, t6])
}
