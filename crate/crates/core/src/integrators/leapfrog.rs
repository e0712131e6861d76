use crate::reduction::{phi_grad, phi_hess, Mu, ReducedState};

/// One kick–drift–kick step of the separable Hamiltonian `H_μ`, with force `−½∇φ_μ`.
#[derive(Debug, Clone, Copy)]
pub struct Leapfrog {
    pub mu: Mu,
    pub step: f64,
}

impl Leapfrog {
    pub fn new(mu: Mu, step: f64) -> Self {
        Leapfrog { mu, step }
    }

    #[inline]
    fn force(&self, x: f64, y: f64) -> [f64; 2] {
        let [gx, gy] = phi_grad(&self.mu, x, y);
        [-0.5 * gx, -0.5 * gy]
    }

    /// Advance by `self.step`.
    #[inline]
    pub fn step(&self, s: &mut ReducedState) {
        self.step_by(s, self.step);
    }

    /// Advance by an arbitrary `h` (used for crossing refinement).
    #[inline]
    pub fn step_by(&self, s: &mut ReducedState, h: f64) {
        let half = 0.5 * h;
        let [fx, fy] = self.force(s.x, s.y);
        s.px += half * fx;
        s.py += half * fy;
        s.x += h * s.px;
        s.y += h * s.py;
        let [fx, fy] = self.force(s.x, s.y);
        s.px += half * fx;
        s.py += half * fy;
    }

    /// Advance the state together with a tangent vector `(δx, δy, δp_x, δp_y)`,
    /// using the exact linearization of the discrete step.
    #[inline]
    pub fn step_with_tangent(&self, s: &mut ReducedState, v: &mut [f64; 4]) {
        self.step_with_tangents(s, std::slice::from_mut(v));
    }

    /// As [`Leapfrog::step_with_tangent`] for several tangent vectors at once.
    pub fn step_with_tangents(&self, s: &mut ReducedState, vs: &mut [[f64; 4]]) {
        let h = self.step;
        let quarter = 0.25 * h;
        let half = 0.5 * h;

        let [[hxx, hxy], [_, hyy]] = phi_hess(&self.mu, s.x, s.y);
        for v in vs.iter_mut() {
            v[2] -= quarter * (hxx * v[0] + hxy * v[1]);
            v[3] -= quarter * (hxy * v[0] + hyy * v[1]);
        }
        let [fx, fy] = self.force(s.x, s.y);
        s.px += half * fx;
        s.py += half * fy;

        s.x += h * s.px;
        s.y += h * s.py;
        for v in vs.iter_mut() {
            v[0] += h * v[2];
            v[1] += h * v[3];
        }

        let [[hxx, hxy], [_, hyy]] = phi_hess(&self.mu, s.x, s.y);
        for v in vs.iter_mut() {
            v[2] -= quarter * (hxx * v[0] + hxy * v[1]);
            v[3] -= quarter * (hxy * v[0] + hyy * v[1]);
        }
        let [fx, fy] = self.force(s.x, s.y);
        s.px += half * fx;
        s.py += half * fy;
    }
}
