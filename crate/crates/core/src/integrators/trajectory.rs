use crate::hamiltonian::{energy, momentum_map, CotangentState};
use crate::reduction::{h_mu, Mu, ReducedState};

/// Conserved quantities evaluated at one sample.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    pub energy: f64,
    pub momentum_map: Mu,
    pub angular_momentum: f64,
}

/// A phase-space state that can report its conserved quantities.
pub trait PhaseState: Copy + std::fmt::Debug {
    fn planar(&self) -> ReducedState;
    fn diagnostics(&self, mu: &Mu) -> Diagnostics;
}

impl PhaseState for ReducedState {
    fn planar(&self) -> ReducedState {
        *self
    }

    fn diagnostics(&self, mu: &Mu) -> Diagnostics {
        Diagnostics {
            energy: h_mu(mu, self),
            momentum_map: *mu,
            angular_momentum: self.angular_momentum(),
        }
    }
}

impl PhaseState for CotangentState {
    fn planar(&self) -> ReducedState {
        self.reduced()
    }

    fn diagnostics(&self, _mu: &Mu) -> Diagnostics {
        Diagnostics {
            energy: energy(self),
            momentum_map: momentum_map(self),
            angular_momentum: self.reduced().angular_momentum(),
        }
    }
}

/// Sampled flow output.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<S> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
    pub diagnostics: Vec<Diagnostics>,
    /// The momentum-map level the trajectory was computed at.
    pub mu: Mu,
}

impl<S> Default for Trajectory<S> {
    fn default() -> Self {
        Trajectory {
            times: Vec::new(),
            states: Vec::new(),
            diagnostics: Vec::new(),
            mu: Mu::ZERO,
        }
    }
}

impl<S: PhaseState> Trajectory<S> {
    pub fn with_mu(mu: Mu) -> Self {
        Trajectory {
            mu,
            ..Default::default()
        }
    }

    pub fn push(&mut self, t: f64, s: S) {
        self.times.push(t);
        self.diagnostics.push(s.diagnostics(&self.mu));
        self.states.push(s);
    }
}

impl<S> Trajectory<S> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&S> {
        self.states.last()
    }
}
