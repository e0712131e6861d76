//! Acceptance suite. Prints one PASS/FAIL line per criterion, followed by the estimator
//! properties of the Lyapunov analysis, and exits nonzero if any line fails.

use std::process::ExitCode;
use std::time::Instant;

use jetflow::analysis::{conservation_report, lyapunov_mle, seed_on_shell, LyapunovEstimate};
use jetflow::bvp::{shoot, ShootingProblem};
use jetflow::carnot::Basis;
use jetflow::integrators::{integrate_full, integrate_reduced, integrate_with_tangent, IntegratorConfig};
use jetflow::reduction::{phi_grad, phi_hess, reconstruct_vertical, reduced_jacobian, reduced_vector_field};
use jetflow::verify::{fd_gradient16, run_structure_checks};
use jetflow::{
    energy, full_vector_field, h_mu, momentum_map, phi, AlgebraVector, CotangentState, Mu, ReducedState,
    StructureConstants,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Quartic states used by the projection, conservation and reconstruction criteria.
const SEEDS: [[f64; 4]; 5] = [
    [0.1, 0.0, 0.3, 0.9],
    [0.5, 0.2, -0.3, 0.4],
    [-0.7, 0.3, 0.1, -0.5],
    [0.0, 0.8, 0.6, 0.0],
    [1.0, -0.5, 0.2, 0.3],
];

/// Documented chaotic seed on the quartic shell `H = ½`: `(x, y, p_x) = (0.1, 0, 0.05)`
/// with `p_y > 0` completed from the shell.
const CHAOS_SEED: (f64, f64, f64) = (0.1, 0.0, 0.05);
const CHAOS_ENERGY: f64 = 0.5;
const CHAOS_T: f64 = 1e5;
const CHAOS_STEP: f64 = 1e-3;
/// Value of the quartic estimate from the first verified run, enforced within ±10%.
const PINNED_MLE: f64 = 4.207e-2;

struct Line {
    label: String,
    passed: bool,
    detail: String,
    seconds: f64,
}

fn timed(label: &str, f: impl FnOnce() -> (bool, String)) -> Line {
    let start = Instant::now();
    let (passed, detail) = f();
    Line {
        label: label.to_string(),
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

fn vec_rel_err(got: &[f64], want: &[f64]) -> f64 {
    let scale = want.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    got.iter().zip(want).fold(0.0f64, |m, (g, w)| m.max((g - w).abs() / scale))
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x6163_6365_7074 ^ tag)
}

fn quartic() -> Mu {
    Mu::quartic(1.0)
}

fn criterion_structure() -> (bool, String) {
    use Basis::*;
    let expected = [
        (X1, Y20, Y10),
        (X2, Y11, Y10),
        (X1, Y11, Y01),
        (X2, Y02, Y01),
        (X1, Y10, Y),
        (X2, Y01, Y),
    ];
    let sc = StructureConstants::jet_space();
    let mut table_exact = true;
    for a in Basis::ALL {
        for b in Basis::ALL {
            let mut want = AlgebraVector::ZERO;
            for &(l, r, res) in &expected {
                if (a, b) == (l, r) {
                    want = AlgebraVector::basis(res);
                } else if (a, b) == (r, l) {
                    want = -AlgebraVector::basis(res);
                }
            }
            table_exact &= sc.basis_bracket(a, b) == want;
        }
    }
    let report = run_structure_checks(&sc);
    let worst = report
        .checks
        .iter()
        .filter(|c| c.name != "bracket_table")
        .map(|c| format!("{}={:.1e}", c.name, c.max_residual))
        .collect::<Vec<_>>()
        .join(" ");
    (
        table_exact && report.all_passed(),
        format!("table exact={table_exact}, {} checks passed={} ({worst})", report.checks.len(), report.all_passed()),
    )
}

fn criterion_reduction() -> (bool, String) {
    let mut r = rng(2);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let s = CotangentState::from_array(std::array::from_fn(|_| r.gen_range(-1.0..1.0)));
        let mu = momentum_map(&s);
        worst = worst.max((energy(&s) - h_mu(&mu, &s.reduced())).abs());
    }
    (worst < 1e-14, format!("max |H_sR - H_mu| = {worst:.2e} over 10^4 states (bound 1e-14)"))
}

fn criterion_projection() -> (bool, String) {
    let mu = quartic();
    let mut worst_rk = 0.0f64;
    let mut worst_lf = 0.0f64;
    for seed in SEEDS {
        let s = ReducedState::from_array(seed);
        let s0 = CotangentState::from_reduced(&s, &mu, [0.0; 6]);
        for (rk, worst) in [(true, &mut worst_rk), (false, &mut worst_lf)] {
            let cfg = if rk {
                IntegratorConfig::reference(1e-12, 1e-3, 10.0)
            } else {
                IntegratorConfig::leapfrog(1e-3, 10.0)
            }
            .with_stride(10);
            let full = integrate_full(&s0, &cfg).unwrap();
            let reduced = integrate_reduced(&mu, &s, &cfg).unwrap();
            for (f, red) in full.states.iter().zip(&reduced.states) {
                *worst = worst.max(sup_dist(&f.reduced().to_array(), &red.to_array()));
            }
        }
    }
    let worst = worst_rk.max(worst_lf);
    (
        worst < 1e-8,
        format!("sup-norm gap: 16-dim RK vs reduced RK {worst_rk:.2e}, leapfrog routes {worst_lf:.2e} (bound 1e-8, 5 seeds, T=10)"),
    )
}

fn criterion_conservation() -> (bool, String) {
    let mu = quartic();
    let cfg = IntegratorConfig::leapfrog(1e-3, 100.0);
    let (mut drift, mut ratio_ok, mut worst_ratio, mut momentum) = (0.0f64, true, 1.0f64, 0.0f64);
    for seed in SEEDS {
        let s = ReducedState::from_array(seed);
        let full = integrate_full(&CotangentState::from_reduced(&s, &mu, [0.0; 6]), &cfg).unwrap();
        let rep = conservation_report(&full);
        drift = drift.max(rep.max_energy_drift);
        momentum = momentum.max(rep.max_momentum_drift);
        let ratio = rep.energy_trend_ratio();
        ratio_ok &= (0.5..2.0).contains(&ratio);
        if (ratio - 1.0).abs() > (worst_ratio - 1.0).abs() {
            worst_ratio = ratio;
        }
    }
    let harmonic = integrate_reduced(&Mu::harmonic(1.0), &ReducedState::new(0.3, 0.1, 0.2, 0.6), &cfg).unwrap();
    let ang = conservation_report(&harmonic).max_angular_momentum_drift.unwrap_or(f64::INFINITY);
    let energy_ok = drift < 1e-8;
    (
        energy_ok && ratio_ok && momentum == 0.0 && ang < 1e-8,
        format!(
            "energy drift {drift:.2e} (bound 1e-8: {}), half-span ratio {worst_ratio:.3} (within 2x: {ratio_ok}), \
             momentum drift {momentum:e}, harmonic angular drift {ang:.2e}",
            if energy_ok { "ok" } else { "exceeded" }
        ),
    )
}

fn criterion_derivatives() -> (bool, String) {
    let mut r = rng(5);
    let eps = 1e-5;
    let random_mu = |r: &mut ChaCha8Rng| Mu(std::array::from_fn(|_| r.gen_range(-1.0..1.0)));
    let (mut full, mut red, mut grad, mut hess, mut jac, mut tangent) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let s16 = CotangentState::from_array(std::array::from_fn(|_| r.gen_range(-1.0..1.0)));
        let g = fd_gradient16(&s16, eps);
        let want: Vec<f64> = (0..16).map(|i| if i < 8 { g[8 + i] } else { -g[i - 8] }).collect();
        full = full.max(vec_rel_err(&full_vector_field(&s16), &want));

        let mu = random_mu(&mut r);
        let s = ReducedState::from_array(std::array::from_fn(|_| r.gen_range(-1.5..1.5)));
        let base = s.to_array();
        let shifted = |i: usize, d: f64| {
            let mut a = base;
            a[i] += d;
            ReducedState::from_array(a)
        };
        let dh: Vec<f64> = (0..4)
            .map(|i| (h_mu(&mu, &shifted(i, eps)) - h_mu(&mu, &shifted(i, -eps))) / (2.0 * eps))
            .collect();
        red = red.max(vec_rel_err(&reduced_vector_field(&mu, &s), &[dh[2], dh[3], -dh[0], -dh[1]]));

        let (x, y) = (s.x, s.y);
        let fd_g = [
            (phi(&mu, x + eps, y) - phi(&mu, x - eps, y)) / (2.0 * eps),
            (phi(&mu, x, y + eps) - phi(&mu, x, y - eps)) / (2.0 * eps),
        ];
        grad = grad.max(vec_rel_err(&phi_grad(&mu, x, y), &fd_g));
        let h = phi_hess(&mu, x, y);
        let (gxp, gxm) = (phi_grad(&mu, x + eps, y), phi_grad(&mu, x - eps, y));
        let (gyp, gym) = (phi_grad(&mu, x, y + eps), phi_grad(&mu, x, y - eps));
        let fd_h = [
            (gxp[0] - gxm[0]) / (2.0 * eps),
            (gyp[0] - gym[0]) / (2.0 * eps),
            (gxp[1] - gxm[1]) / (2.0 * eps),
            (gyp[1] - gym[1]) / (2.0 * eps),
        ];
        hess = hess.max(vec_rel_err(&[h[0][0], h[0][1], h[1][0], h[1][1]], &fd_h));

        let j = reduced_jacobian(&mu, &s);
        let (mut got, mut fd) = (Vec::new(), Vec::new());
        for col in 0..4 {
            let (fp, fm) = (
                reduced_vector_field(&mu, &shifted(col, eps)),
                reduced_vector_field(&mu, &shifted(col, -eps)),
            );
            for (row, jrow) in j.iter().enumerate() {
                got.push(jrow[col]);
                fd.push((fp[row] - fm[row]) / (2.0 * eps));
            }
        }
        jac = jac.max(vec_rel_err(&got, &fd));

        let v: [f64; 4] = std::array::from_fn(|_| r.gen_range(-1.0..1.0));
        let cfg = IntegratorConfig::leapfrog(1e-2, 0.5);
        let out = integrate_with_tangent(&mu, &s, &v, &cfg).unwrap();
        let flow = |sign: f64| {
            let st = ReducedState::from_array(std::array::from_fn(|i| base[i] + sign * 1e-6 * v[i]));
            integrate_reduced(&mu, &st, &cfg).unwrap().last().unwrap().to_array()
        };
        let (p, m) = (flow(1.0), flow(-1.0));
        let fd_t: Vec<f64> = (0..4).map(|i| (p[i] - m[i]) / 2e-6).collect();
        tangent = tangent.max(vec_rel_err(out.tangents.last().unwrap(), &fd_t));
    }
    let worst = [full, red, grad, hess, jac, tangent].into_iter().fold(0.0f64, f64::max);
    (
        worst < 1e-6,
        format!(
            "max rel err: full field {full:.1e}, reduced field {red:.1e}, grad phi {grad:.1e}, \
             hess phi {hess:.1e}, jacobian {jac:.1e}, tangent flow {tangent:.1e} (bound 1e-6, 100 points each)"
        ),
    )
}

fn chaos_seed() -> ReducedState {
    let (x, y, px) = CHAOS_SEED;
    seed_on_shell(&quartic(), CHAOS_ENERGY, x, y, px).expect("documented seed lies inside the shell")
}

fn chaos_run(step: f64, renorm: f64) -> LyapunovEstimate {
    lyapunov_mle(&quartic(), &chaos_seed(), &IntegratorConfig::leapfrog(step, CHAOS_T), renorm).unwrap()
}

/// Largest relative deviation from the final value over the last 20% of the run.
fn plateau_band(e: &LyapunovEstimate) -> f64 {
    let (t_end, last) = *e.history.last().unwrap();
    e.history
        .iter()
        .filter(|(t, _)| *t >= 0.8 * t_end)
        .map(|(_, v)| ((v - last) / last).abs())
        .fold(0.0, f64::max)
}

fn criterion_contrast(quartic_run: &LyapunovEstimate) -> (bool, String) {
    let cfg = IntegratorConfig::leapfrog(1e-3, 1e4);
    let free = lyapunov_mle(&Mu::ZERO, &ReducedState::new(0.2, -0.1, 0.6, 0.8), &cfg, 1.0).unwrap();
    let harmonic = lyapunov_mle(&Mu::harmonic(1.0), &ReducedState::new(0.3, 0.1, 0.2, 0.6), &cfg, 1.0).unwrap();
    let q = quartic_run.mle;
    let pinned = ((q - PINNED_MLE) / PINNED_MLE).abs() <= 0.10;
    let ok = free.mle <= 1e-3 && harmonic.mle <= 1e-3 && q > 0.0 && quartic_run.converged && pinned;
    (
        ok,
        format!(
            "mu=0 {:.2e}, harmonic {:.2e} (bound 1e-3 at T=1e4); quartic {q:.4e} at T={CHAOS_T:e}, \
             plateau band {:.1}% (converged={}, needs 1%), pinned {PINNED_MLE:e} within 10%: {pinned}",
            free.mle,
            harmonic.mle,
            100.0 * plateau_band(quartic_run),
            quartic_run.converged
        ),
    )
}

fn criterion_reconstruction() -> (bool, String) {
    let mu = quartic();
    let (mut gap, mut refine, mut halving) = (0.0f64, 0.0f64, 0.0f64);
    for seed in SEEDS {
        let s = ReducedState::from_array(seed);
        let cfg = IntegratorConfig::reference(1e-12, 1e-3, 10.0);
        let path = reconstruct_vertical(&mu, &integrate_reduced(&mu, &s, &cfg).unwrap()).unwrap();
        let full = integrate_full(&CotangentState::from_reduced(&s, &mu, [0.0; 6]), &cfg).unwrap();
        for (t, f) in path.theta.iter().zip(&full.states) {
            gap = gap.max(sup_dist(t, &f.base.theta));
        }
        refine = refine.max(path.refinement_delta);
        // The same trajectory sampled twice as densely; compare on the shared grid.
        let fine_cfg = IntegratorConfig::reference(1e-12, 5e-4, 10.0);
        let fine = reconstruct_vertical(&mu, &integrate_reduced(&mu, &s, &fine_cfg).unwrap()).unwrap();
        for (c, f) in path.theta.iter().zip(fine.theta.iter().step_by(2)) {
            halving = halving.max(sup_dist(c, f));
        }
    }
    (
        gap < 1e-6 && refine < 1e-8 && halving < 1e-8,
        format!(
            "theta gap vs 16-dim flow {gap:.2e} (bound 1e-6); step change: same samples {refine:.2e}, \
             half-step samples {halving:.2e} (bound 1e-8)"
        ),
    )
}

fn criterion_shooting() -> (bool, String) {
    let free = ShootingProblem::new(Mu::ZERO, [0.2, -0.3], [1.0, 0.5], 2.0).with_tolerance(1e-12);
    let free_sol = shoot(&free);
    let free_ok = matches!(&free_sol, Ok(s) if s.residual < 1e-12 && s.iterations <= 2);

    let (a, b, tau) = (0.3, -0.7, 1.2f64);
    let harmonic = ShootingProblem::new(
        Mu::harmonic(1.0),
        [1.0, 0.0],
        [tau.cos() + a * tau.sin(), b * tau.sin()],
        tau,
    )
    .with_step(1e-4);
    let harm_err = shoot(&harmonic).map_or(f64::INFINITY, |s| (s.momenta[0] - a).abs().max((s.momenta[1] - b).abs()));

    let quartic_problem = ShootingProblem::new(quartic(), [0.0, 0.0], [0.5, 0.2], 1.0).with_step(1e-4);
    let (q_ok, miss) = match shoot(&quartic_problem) {
        Ok(sol) => {
            let s0 = ReducedState::new(0.0, 0.0, sol.momenta[0], sol.momenta[1]);
            let end = *integrate_reduced(&quartic_problem.mu, &s0, &IntegratorConfig::leapfrog(5e-5, 1.0))
                .unwrap()
                .last()
                .unwrap();
            let miss = (end.x - 0.5).hypot(end.y - 0.2);
            (miss < 10.0 * quartic_problem.tolerance, miss)
        }
        Err(_) => (false, f64::INFINITY),
    };
    (
        free_ok && harm_err < 1e-8 && q_ok,
        format!(
            "free: {}; harmonic momentum error {harm_err:.2e} (bound 1e-8); quartic half-step miss {miss:.2e} (bound {:.0e})",
            match &free_sol {
                Ok(s) => format!("residual {:.1e} in {} steps", s.residual, s.iterations),
                Err(e) => e.to_string(),
            },
            10.0 * quartic_problem.tolerance
        ),
    )
}

fn criterion_homogeneity() -> (bool, String) {
    // (x, p, t) ↦ (λx, λ²p, t/λ) maps quartic orbits at energy E onto energy λ⁴E. Step and
    // renormalization interval scale with time, so the two runs sample the same orbit.
    let base_t = 1e4;
    let run = |l: f64| {
        let s = chaos_seed();
        let scaled = ReducedState::new(l * s.x, l * s.y, l * l * s.px, l * l * s.py);
        let cfg = IntegratorConfig::leapfrog(1e-3 / l, base_t / l);
        lyapunov_mle(&quartic(), &scaled, &cfg, 1.0 / l).unwrap().mle
    };
    let reference = run(1.0);
    let mut ok = true;
    let mut parts = vec![format!("E=0.5 mle {reference:.4e}")];
    for l in [2.0, 0.5] {
        let got = run(l);
        let rel = (got / (l * reference) - 1.0).abs();
        ok &= rel < 0.05;
        parts.push(format!("lambda={l} E={:e} ratio/lambda deviation {:.2}%", 0.5 * l.powi(4), 100.0 * rel));
    }
    (ok, parts.join(", "))
}

fn main() -> ExitCode {
    let mut lines = vec![
        timed("1 structure suite", criterion_structure),
        timed("2 reduction identity", criterion_reduction),
        timed("3 projection equivalence", criterion_projection),
        timed("4 conservation", criterion_conservation),
        timed("5 derivative oracles", criterion_derivatives),
    ];
    let start = Instant::now();
    let quartic_run = chaos_run(CHAOS_STEP, 1.0);
    let quartic_seconds = start.elapsed().as_secs_f64();
    let mut contrast = timed("6 integrable/chaotic contrast", || criterion_contrast(&quartic_run));
    contrast.seconds += quartic_seconds;
    lines.push(contrast);
    lines.push(timed("7 reconstruction", criterion_reconstruction));
    lines.push(timed("8 shooting", criterion_shooting));
    lines.push(timed("9 homogeneity scaling", criterion_homogeneity));

    // Estimator properties of the Lyapunov analysis on the same documented seed.
    lines.push(timed("P1 time reversal", || {
        let e = quartic_run.final_state;
        let back = ReducedState::new(e.x, e.y, -e.px, -e.py);
        let b = lyapunov_mle(&quartic(), &back, &IntegratorConfig::leapfrog(CHAOS_STEP, CHAOS_T), 1.0).unwrap();
        let d = (quartic_run.mle - b.mle).abs();
        (d < 0.005, format!("forward {:.4e}, backward {:.4e}, gap {d:.2e} (bound 5e-3)", quartic_run.mle, b.mle))
    }));
    lines.push(timed("P2 renormalization halving", || {
        let h = chaos_run(CHAOS_STEP, 0.5);
        let rel = ((h.mle - quartic_run.mle) / quartic_run.mle).abs();
        (rel < 0.02, format!("{:.4e} vs {:.4e}, change {:.2}% (bound 2%)", h.mle, quartic_run.mle, 100.0 * rel))
    }));
    lines.push(timed("P3 step halving", || {
        let h = chaos_run(CHAOS_STEP / 2.0, 1.0);
        let rel = ((h.mle - quartic_run.mle) / quartic_run.mle).abs();
        (rel < 0.02, format!("{:.4e} vs {:.4e}, change {:.2}% (bound 2%)", h.mle, quartic_run.mle, 100.0 * rel))
    }));

    for l in &lines {
        println!(
            "{} [{}] {} ({:.1}s)",
            if l.passed { "PASS" } else { "FAIL" },
            l.label,
            l.detail,
            l.seconds
        );
    }
    let failed = lines.iter().filter(|l| !l.passed).count();
    println!("acceptance: {} of {} passed", lines.len() - failed, lines.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
