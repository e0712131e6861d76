//! Poincaré sections, Lyapunov exponents and first-integral audits.

mod conservation;
mod lyapunov;
mod section;

pub use conservation::{conservation_report, ConservationReport};
pub use lyapunov::{
    lyapunov_mle, plateau_reached, LyapunovError, LyapunovEstimate, INITIAL_TANGENT,
    PLATEAU_FRACTION, PLATEAU_REL_TOL,
};
pub use section::{
    poincare_section, poincare_section_with_tolerance, seed_on_shell, shell_py, SectionError, SectionPoint, SeedSection,
    SeedStatus, CROSSING_TOLERANCE, SHELL_TOLERANCE,
};
