use crate::integrators::{PhaseState, Trajectory};

/// Maximum deviation of each first integral from its initial value.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConservationReport {
    pub samples: usize,
    pub max_energy_drift: f64,
    /// Energy drift restricted to the first half of the time span.
    pub first_half_energy_drift: f64,
    /// Energy drift restricted to the second half of the time span.
    pub second_half_energy_drift: f64,
    /// Over all six components of the momentum map.
    pub max_momentum_drift: f64,
    /// Angular momentum `x p_y − y p_x`; reported only for rotationally symmetric levels.
    pub max_angular_momentum_drift: Option<f64>,
}

impl ConservationReport {
    /// Ratio of second-half to first-half energy drift. Values near one mean the error
    /// oscillates instead of growing.
    pub fn energy_trend_ratio(&self) -> f64 {
        if self.first_half_energy_drift == 0.0 {
            if self.second_half_energy_drift == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            self.second_half_energy_drift / self.first_half_energy_drift
        }
    }
}

pub fn conservation_report<S: PhaseState>(traj: &Trajectory<S>) -> ConservationReport {
    let mut report = ConservationReport {
        samples: traj.len(),
        ..Default::default()
    };
    let (Some(d0), Some(&t0), Some(&t1)) = (
        traj.diagnostics.first(),
        traj.times.first(),
        traj.times.last(),
    ) else {
        return report;
    };
    let mid = t0 + 0.5 * (t1 - t0);
    let track_l = traj.mu.is_rotationally_symmetric();
    let mut max_l = 0.0f64;
    for (t, d) in traj.times.iter().zip(&traj.diagnostics) {
        let de = (d.energy - d0.energy).abs();
        report.max_energy_drift = report.max_energy_drift.max(de);
        if *t <= mid {
            report.first_half_energy_drift = report.first_half_energy_drift.max(de);
        }
        if *t >= mid {
            report.second_half_energy_drift = report.second_half_energy_drift.max(de);
        }
        for (a, b) in d.momentum_map.0.iter().zip(d0.momentum_map.0) {
            report.max_momentum_drift = report.max_momentum_drift.max((a - b).abs());
        }
        if track_l {
            max_l = max_l.max((d.angular_momentum - d0.angular_momentum).abs());
        }
    }
    if track_l {
        report.max_angular_momentum_drift = Some(max_l);
    }
    report
}
