//! Adaptive Dormand–Prince 5(4) for autonomous systems.

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between the fifth- and fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Adaptive integrator state. Keeps the last accepted step size between calls.
#[derive(Debug, Clone, Copy)]
pub struct DormandPrince {
    pub tolerance: f64,
    pub step: f64,
    pub min_step: f64,
}

fn lin<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        if *c != 0.0 {
            for i in 0..N {
                out[i] += h * c * k[i];
            }
        }
    }
    out
}

impl DormandPrince {
    pub fn new(tolerance: f64, initial_step: f64) -> Self {
        DormandPrince {
            tolerance,
            step: initial_step,
            min_step: 1e-14,
        }
    }

    /// Integrate `ẏ = f(y)` over a time span `duration > 0`, landing exactly on its end.
    /// Returns the time offset of the failure on step-size underflow or non-finite values.
    pub fn advance<const N: usize, F>(&mut self, f: &F, y: [f64; N], duration: f64) -> Result<[f64; N], f64>
    where
        F: Fn(&[f64; N]) -> [f64; N],
    {
        let tol = self.tolerance;
        let mut t = 0.0;
        let mut y = y;
        let mut k1 = f(&y);
        while t < duration {
            let mut h = self.step.min(duration - t);
            let last = h >= duration - t;
            if h < self.min_step && !last {
                return Err(t);
            }
            let k2 = f(&lin(&y, h, &[(A21, &k1)]));
            let k3 = f(&lin(&y, h, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(&lin(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = f(&lin(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
            let k6 = f(&lin(
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ));
            let y_new = lin(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
            let k7 = f(&y_new);

            let mut err = 0.0;
            for i in 0..N {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let scale = tol + tol * y[i].abs().max(y_new[i].abs());
                err += (e / scale) * (e / scale);
            }
            let err = (err / N as f64).sqrt();
            if !err.is_finite() || !y_new.iter().all(|v| v.is_finite()) {
                if h <= self.min_step {
                    return Err(t);
                }
                self.step = 0.2 * h;
                continue;
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if err <= 1.0 {
                t = if last { duration } else { t + h };
                y = y_new;
                k1 = k7;
                // A truncated final step says nothing about the natural step size.
                if !last || factor < 1.0 {
                    self.step = h * factor;
                }
            } else {
                h *= factor.min(1.0);
                self.step = h;
                if h < self.min_step {
                    return Err(t);
                }
            }
        }
        Ok(y)
    }
}
