//! The 𝔞*-valued one-form α on the horizontal layer.

/// Rows are the dθ1, dθ2, dθ3 components, each a vector over the dual basis `e1 … e6` of 𝔞*.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaForm {
    pub rows: [[f64; 6]; 3],
}

/// Evaluate α at `(x, y)`:
/// `dθ1 ⊗ (e1 + x e4 + x²/2 e6) + dθ2 ⊗ (e2 + x e5 + y e4 + xy e6) + dθ3 ⊗ (e3 + y e5 + y²/2 e6)`.
pub fn alpha_at(x: f64, y: f64) -> AlphaForm {
    AlphaForm {
        rows: [
            [1.0, 0.0, 0.0, x, 0.0, 0.5 * x * x],
            [0.0, 1.0, 0.0, y, x, x * y],
            [0.0, 0.0, 1.0, 0.0, y, 0.5 * y * y],
        ],
    }
}

impl AlphaForm {
    /// Pair each row with a covector in 𝔞*. With `mu = (p1 … p6)` this yields
    /// `(P20, P11, P02)`.
    pub fn contract(&self, mu: &[f64; 6]) -> [f64; 3] {
        self.rows
            .map(|row| row.iter().zip(mu).map(|(r, m)| r * m).sum())
    }

    /// Transpose action `αᵀ w`, mapping `(P20, P11, P02)` to the six θ-velocities.
    pub fn transpose_apply(&self, w: &[f64; 3]) -> [f64; 6] {
        let mut out = [0.0; 6];
        for (row, wi) in self.rows.iter().zip(w) {
            for (o, r) in out.iter_mut().zip(row) {
                *o += r * wi;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_rows_are_unit_covectors() {
        let a = alpha_at(0.0, 0.0);
        assert_eq!(a.rows[0], [1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(a.rows[1], [0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(a.rows[2], [0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn second_row_at_one_one() {
        assert_eq!(alpha_at(1.0, 1.0).rows[1], [0.0, 1.0, 0.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn transpose_is_adjoint_of_contract() {
        let a = alpha_at(0.3, -1.7);
        let mu = [0.1, -0.4, 2.0, 0.7, -1.1, 0.25];
        let w = [1.5, -0.5, 0.2];
        let lhs: f64 = a.contract(&mu).iter().zip(w).map(|(c, w)| c * w).sum();
        let rhs: f64 = a.transpose_apply(&w).iter().zip(mu).map(|(t, m)| t * m).sum();
        assert!((lhs - rhs).abs() < 1e-14);
    }
}
