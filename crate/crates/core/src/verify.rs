//! Structure verification suite: bracket table, Jacobi identity, frame commutators,
//! left-invariance of the frame, α consistency and the reduction identity.
//!
//! Random samples come from a fixed-seed generator, so a report is byte-identical across
//! runs.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::carnot::group::{group_multiply_with, left_invariant_field};
use crate::carnot::{alpha_at, frame_at, AlgebraVector, Basis, GroupPoint, StructureConstants};
use crate::hamiltonian::{energy, full_vector_field, momentum_five, momentum_map, CotangentState};
use crate::reduction::{h_mu, phi, vertical_momenta, Mu};

pub const SEED: u64 = 0x4A32_5232;
/// Residual bound for checks that hold exactly or through central differences of
/// polynomials of degree at most two.
pub const STRUCTURE_TOL: f64 = 1e-10;
/// Relative bound for central differences of the (quartic) Hamiltonian.
pub const FD_REL_TOL: f64 = 1e-6;
pub const RANDOM_SAMPLES: usize = 1000;
pub const REDUCTION_SAMPLES: usize = 10_000;
pub const REDUCTION_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub max_residual: f64,
    pub threshold: f64,
    pub samples: usize,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<28} max_residual={:.3e} threshold={:.1e} samples={}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.max_residual,
            self.threshold,
            self.samples
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.failed().count();
        write!(
            f,
            "{} checks, {} failed: {}",
            self.checks.len(),
            failed,
            if failed == 0 { "OK" } else { "FAILED" }
        )
    }
}

fn check(name: &'static str, max_residual: f64, threshold: f64, samples: usize) -> CheckResult {
    CheckResult {
        name,
        // NaN residuals fail.
        passed: max_residual <= threshold,
        max_residual,
        threshold,
        samples,
    }
}

/// The defining relations, listed independently of [`StructureConstants::jet_space`].
const RELATIONS: [(Basis, Basis, Basis); 6] = [
    (Basis::X1, Basis::Y20, Basis::Y10),
    (Basis::X2, Basis::Y11, Basis::Y10),
    (Basis::X1, Basis::Y11, Basis::Y01),
    (Basis::X2, Basis::Y02, Basis::Y01),
    (Basis::X1, Basis::Y10, Basis::Y),
    (Basis::X2, Basis::Y01, Basis::Y),
];

fn expected_bracket(a: Basis, b: Basis) -> AlgebraVector {
    let mut out = AlgebraVector::ZERO;
    for (l, r, res) in RELATIONS {
        if (a, b) == (l, r) {
            out.0[res.index()] += 1.0;
        } else if (a, b) == (r, l) {
            out.0[res.index()] -= 1.0;
        }
    }
    out
}

fn random_vector(rng: &mut ChaCha8Rng) -> AlgebraVector {
    AlgebraVector(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)))
}

fn random_point(rng: &mut ChaCha8Rng, r: f64) -> GroupPoint {
    GroupPoint::from_array(std::array::from_fn(|_| rng.gen_range(-r..r)))
}

fn random_state(rng: &mut ChaCha8Rng) -> CotangentState {
    CotangentState::from_array(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)))
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Commutator `[V, W](p) = DW(p) V(p) − DV(p) W(p)` of two coordinate vector fields on
/// ℝ⁸ by central differences.
pub fn fd_commutator<V, W>(v: V, w: W, p: &[f64; 8], eps: f64) -> [f64; 8]
where
    V: Fn(&[f64; 8]) -> [f64; 8],
    W: Fn(&[f64; 8]) -> [f64; 8],
{
    let directional = |field: &dyn Fn(&[f64; 8]) -> [f64; 8], dir: &[f64; 8]| {
        let plus: [f64; 8] = std::array::from_fn(|i| p[i] + eps * dir[i]);
        let minus: [f64; 8] = std::array::from_fn(|i| p[i] - eps * dir[i]);
        let (fp, fm) = (field(&plus), field(&minus));
        std::array::from_fn::<f64, 8, _>(|i| (fp[i] - fm[i]) / (2.0 * eps))
    };
    let dw_v = directional(&w, &v(p));
    let dv_w = directional(&v, &w(p));
    std::array::from_fn(|i| dw_v[i] - dv_w[i])
}

/// Run every structure check against the given bracket table.
pub fn run_structure_checks(sc: &StructureConstants) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checks = Vec::new();

    // Bracket table against the defining relations, all 64 ordered pairs.
    let mut r = 0.0f64;
    for a in Basis::ALL {
        for b in Basis::ALL {
            let got = sc.basis_bracket(a, b);
            r = r.max(max_abs_diff(&got.0, &expected_bracket(a, b).0));
        }
    }
    checks.push(check("bracket_table", r, 0.0, 64));

    // Grading: [layer i, layer j] ⊆ layer i + j.
    let mut r = 0.0f64;
    for a in Basis::ALL {
        for b in Basis::ALL {
            let got = sc.basis_bracket(a, b);
            let target = a.layer() + b.layer();
            for c in Basis::ALL {
                if c.layer() != target {
                    r = r.max(got.coeff(c).abs());
                }
            }
        }
    }
    checks.push(check("grading", r, 0.0, 64));

    // Antisymmetry and Jacobi on basis triples and random triples.
    let mut anti = 0.0f64;
    let mut jac = 0.0f64;
    let jacobi = |a: &AlgebraVector, b: &AlgebraVector, c: &AlgebraVector| {
        let t = sc.bracket(a, &sc.bracket(b, c))
            + sc.bracket(b, &sc.bracket(c, a))
            + sc.bracket(c, &sc.bracket(a, b));
        t.max_abs()
    };
    for a in Basis::ALL {
        for b in Basis::ALL {
            let (va, vb) = (AlgebraVector::basis(a), AlgebraVector::basis(b));
            anti = anti.max((sc.bracket(&va, &vb) + sc.bracket(&vb, &va)).max_abs());
            for c in Basis::ALL {
                jac = jac.max(jacobi(&va, &vb, &AlgebraVector::basis(c)));
            }
        }
    }
    for _ in 0..RANDOM_SAMPLES {
        let (a, b, c) = (random_vector(&mut rng), random_vector(&mut rng), random_vector(&mut rng));
        anti = anti.max((sc.bracket(&a, &b) + sc.bracket(&b, &a)).max_abs());
        jac = jac.max(jacobi(&a, &b, &c));
    }
    checks.push(check("antisymmetry", anti, STRUCTURE_TOL, 64 + RANDOM_SAMPLES));
    checks.push(check("jacobi", jac, STRUCTURE_TOL, 512 + RANDOM_SAMPLES));

    // Commutators of the coordinate frame reproduce the table.
    let mut r = 0.0f64;
    for _ in 0..100 {
        let p = random_point(&mut rng, 2.0).to_array();
        for a in Basis::ALL {
            for b in Basis::ALL {
                let fa = |q: &[f64; 8]| left_invariant_field(a, q[0], q[1]);
                let fb = |q: &[f64; 8]| left_invariant_field(b, q[0], q[1]);
                let got = fd_commutator(fa, fb, &p, 1e-3);
                let coeffs = sc.basis_bracket(a, b);
                let mut want = [0.0; 8];
                for c in Basis::ALL {
                    let field = left_invariant_field(c, p[0], p[1]);
                    for i in 0..8 {
                        want[i] += coeffs.coeff(c) * field[i];
                    }
                }
                r = r.max(max_abs_diff(&got, &want));
            }
        }
    }
    checks.push(check("frame_commutators", r, STRUCTURE_TOL, 100));

    // Left-invariance: dL_g(V(h)) = V(g·h) for every horizontal frame field.
    let mut r = 0.0f64;
    let eps = 1e-3;
    for _ in 0..RANDOM_SAMPLES {
        let g = random_point(&mut rng, 1.0);
        let h = random_point(&mut rng, 1.0);
        let gh = group_multiply_with(sc, &g, &h);
        let frame_h = frame_at(&h);
        let frame_gh = frame_at(&gh);
        for (vh, vgh) in frame_h.iter().zip(&frame_gh) {
            let ha = h.to_array();
            let plus = GroupPoint::from_array(std::array::from_fn(|i| ha[i] + eps * vh[i]));
            let minus = GroupPoint::from_array(std::array::from_fn(|i| ha[i] - eps * vh[i]));
            let (mp, mm) = (
                group_multiply_with(sc, &g, &plus).to_array(),
                group_multiply_with(sc, &g, &minus).to_array(),
            );
            let push: [f64; 8] = std::array::from_fn(|i| (mp[i] - mm[i]) / (2.0 * eps));
            r = r.max(max_abs_diff(&push, vgh));
        }
    }
    checks.push(check("left_invariance", r, STRUCTURE_TOL, RANDOM_SAMPLES));

    // The vertical subgroup A is abelian.
    let mut r = 0.0f64;
    for _ in 0..RANDOM_SAMPLES {
        let mut a = random_point(&mut rng, 2.0);
        let mut b = random_point(&mut rng, 2.0);
        (a.x, a.y, b.x, b.y) = (0.0, 0.0, 0.0, 0.0);
        let ab = group_multiply_with(sc, &a, &b).to_array();
        let ba = group_multiply_with(sc, &b, &a).to_array();
        r = r.max(max_abs_diff(&ab, &ba));
    }
    checks.push(check("abelian_subgroup", r, STRUCTURE_TOL, RANDOM_SAMPLES));

    // Coframe duality: the first five coordinate pairings of the frame form the identity,
    // and the frame does not depend on θ.
    let mut r = 0.0f64;
    for _ in 0..RANDOM_SAMPLES {
        let g = random_point(&mut rng, 2.0);
        let mut g2 = random_point(&mut rng, 2.0);
        (g2.x, g2.y) = (g.x, g.y);
        let f = frame_at(&g);
        for (i, v) in f.iter().enumerate() {
            for (j, c) in v[..5].iter().enumerate() {
                r = r.max((c - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
        r = r.max(max_abs_diff(&f.concat(), &frame_at(&g2).concat()));
    }
    checks.push(check("frame_duality", r, 0.0, RANDOM_SAMPLES));

    // α contracted with μ gives the three terms of φ_μ.
    let mut r = 0.0f64;
    for _ in 0..RANDOM_SAMPLES {
        let x = rng.gen_range(-2.0..2.0);
        let y = rng.gen_range(-2.0..2.0);
        let mu = Mu(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
        let terms = alpha_at(x, y).contract(&mu.0);
        r = r.max(max_abs_diff(&terms, &vertical_momenta(&mu, x, y)));
        let sq: f64 = terms.iter().map(|t| t * t).sum();
        r = r.max((sq - phi(&mu, x, y)).abs() / phi(&mu, x, y).max(1.0));
    }
    checks.push(check("alpha_potential", r, 1e-14, RANDOM_SAMPLES));

    // Momentum functions agree with the α route.
    let mut r = 0.0f64;
    for _ in 0..RANDOM_SAMPLES {
        let s = random_state(&mut rng);
        let m = momentum_five(&s);
        let v = alpha_at(s.base.x, s.base.y).contract(&s.p_theta);
        let want = [s.px, s.py, v[0], v[1], v[2]];
        r = r.max(max_abs_diff(&m.to_array(), &want));
    }
    checks.push(check("momentum_functions", r, 1e-12, RANDOM_SAMPLES));

    // H_sR = H_μ with μ = J.
    let mut r = 0.0f64;
    for _ in 0..REDUCTION_SAMPLES {
        let s = random_state(&mut rng);
        r = r.max((energy(&s) - h_mu(&momentum_map(&s), &s.reduced())).abs());
    }
    checks.push(check("reduction_identity", r, REDUCTION_TOL, REDUCTION_SAMPLES));

    // Hamilton's equations against central differences of H_sR.
    let mut r = 0.0f64;
    for _ in 0..100 {
        let s = random_state(&mut rng);
        let field = full_vector_field(&s);
        let grad = fd_gradient16(&s, 1e-6);
        // (q̇, ṗ) = (∂H/∂p, −∂H/∂q)
        for i in 0..8 {
            r = r.max(rel_err(field[i], grad[8 + i]));
            r = r.max(rel_err(field[8 + i], -grad[i]));
        }
    }
    checks.push(check("hamilton_equations", r, FD_REL_TOL, 100));

    VerifyReport { checks }
}

/// Relative error with a unit floor on the scale, so vanishing components compare in
/// absolute terms.
pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1.0)
}

/// Central-difference gradient of `H_sR` in the layout of [`CotangentState::to_array`].
pub fn fd_gradient16(s: &CotangentState, eps: f64) -> [f64; 16] {
    let a = s.to_array();
    std::array::from_fn(|i| {
        let mut p = a;
        let mut m = a;
        p[i] += eps;
        m[i] -= eps;
        (energy(&CotangentState::from_array(p)) - energy(&CotangentState::from_array(m))) / (2.0 * eps)
    })
}
