//! The graded Lie algebra of J²(ℝ²,ℝ).
//!
//! Basis order is `(X1, X2, Y20, Y11, Y02, Y10, Y01, Y)`. Layer one is spanned by the
//! first five vectors, layer two by `Y10, Y01` and layer three by `Y`, giving growth
//! vector (5, 7, 8).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Dimension of the algebra.
pub const DIM: usize = 8;

/// Basis vectors of the algebra, in storage order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    X1,
    X2,
    Y20,
    Y11,
    Y02,
    Y10,
    Y01,
    Y,
}

impl Basis {
    pub const ALL: [Basis; DIM] = [
        Basis::X1,
        Basis::X2,
        Basis::Y20,
        Basis::Y11,
        Basis::Y02,
        Basis::Y10,
        Basis::Y01,
        Basis::Y,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Basis> {
        Self::ALL.get(i).copied()
    }

    /// Stratification layer (1, 2 or 3).
    pub fn layer(self) -> usize {
        match self {
            Basis::X1 | Basis::X2 | Basis::Y20 | Basis::Y11 | Basis::Y02 => 1,
            Basis::Y10 | Basis::Y01 => 2,
            Basis::Y => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Basis::X1 => "X1",
            Basis::X2 => "X2",
            Basis::Y20 => "Y20",
            Basis::Y11 => "Y11",
            Basis::Y02 => "Y02",
            Basis::Y10 => "Y10",
            Basis::Y01 => "Y01",
            Basis::Y => "Y",
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Number of basis vectors in each layer.
pub const GROWTH: [usize; 3] = [5, 2, 1];

/// An element of the algebra, stored as coefficients over [`Basis::ALL`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AlgebraVector(pub [f64; DIM]);

impl AlgebraVector {
    pub const ZERO: AlgebraVector = AlgebraVector([0.0; DIM]);

    pub fn basis(b: Basis) -> Self {
        let mut c = [0.0; DIM];
        c[b.index()] = 1.0;
        AlgebraVector(c)
    }

    pub fn coeff(&self, b: Basis) -> f64 {
        self.0[b.index()]
    }

    /// Projection onto a single layer.
    pub fn layer_part(&self, layer: usize) -> AlgebraVector {
        let mut out = AlgebraVector::ZERO;
        for b in Basis::ALL {
            if b.layer() == layer {
                out.0[b.index()] = self.0[b.index()];
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0.0)
    }
}

impl Add for AlgebraVector {
    type Output = AlgebraVector;
    fn add(self, rhs: Self) -> Self {
        let mut c = self.0;
        for (a, b) in c.iter_mut().zip(rhs.0) {
            *a += b;
        }
        AlgebraVector(c)
    }
}

impl Sub for AlgebraVector {
    type Output = AlgebraVector;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for AlgebraVector {
    type Output = AlgebraVector;
    fn neg(self) -> Self {
        AlgebraVector(self.0.map(|v| -v))
    }
}

impl Mul<AlgebraVector> for f64 {
    type Output = AlgebraVector;
    fn mul(self, rhs: AlgebraVector) -> AlgebraVector {
        AlgebraVector(rhs.0.map(|v| self * v))
    }
}

/// One nonzero structure constant `[lhs, rhs] = coeff * result`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketEntry {
    pub lhs: Basis,
    pub rhs: Basis,
    pub result: Basis,
    pub coeff: f64,
}

/// Sparse table of structure constants. Only pairs with `lhs < rhs` are stored; the
/// antisymmetric partner is implied.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    entries: Vec<BracketEntry>,
}

impl StructureConstants {
    /// The bracket relations of J²(ℝ²,ℝ):
    /// `[X1,Y20] = [X2,Y11] = Y10`, `[X1,Y11] = [X2,Y02] = Y01`, `[X1,Y10] = [X2,Y01] = Y`.
    pub fn jet_space() -> Self {
        use Basis::*;
        let rel = |lhs, rhs, result| BracketEntry {
            lhs,
            rhs,
            result,
            coeff: 1.0,
        };
        StructureConstants {
            entries: vec![
                rel(X1, Y20, Y10),
                rel(X2, Y11, Y10),
                rel(X1, Y11, Y01),
                rel(X2, Y02, Y01),
                rel(X1, Y10, Y),
                rel(X2, Y01, Y),
            ],
        }
    }

    /// Build a table from arbitrary entries. Entries with `lhs > rhs` are normalized to
    /// the stored orientation; `lhs == rhs` entries are dropped.
    pub fn from_entries(entries: impl IntoIterator<Item = BracketEntry>) -> Self {
        let entries = entries
            .into_iter()
            .filter(|e| e.lhs != e.rhs)
            .map(|e| {
                if e.lhs < e.rhs {
                    e
                } else {
                    BracketEntry {
                        lhs: e.rhs,
                        rhs: e.lhs,
                        result: e.result,
                        coeff: -e.coeff,
                    }
                }
            })
            .collect();
        StructureConstants { entries }
    }

    pub fn entries(&self) -> &[BracketEntry] {
        &self.entries
    }

    /// Mutable access, used by fault-injection tests of the verification suite.
    pub fn entries_mut(&mut self) -> &mut Vec<BracketEntry> {
        &mut self.entries
    }

    /// Bracket of two basis vectors.
    pub fn basis_bracket(&self, a: Basis, b: Basis) -> AlgebraVector {
        let mut out = AlgebraVector::ZERO;
        if a == b {
            return out;
        }
        let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
        for e in self.entries.iter().filter(|e| e.lhs == lo && e.rhs == hi) {
            out.0[e.result.index()] += sign * e.coeff;
        }
        out
    }

    /// Bilinear extension of the table.
    pub fn bracket(&self, a: &AlgebraVector, b: &AlgebraVector) -> AlgebraVector {
        let mut out = [0.0; DIM];
        for e in &self.entries {
            let (i, j) = (e.lhs.index(), e.rhs.index());
            let w = a.0[i] * b.0[j] - a.0[j] * b.0[i];
            if w != 0.0 {
                out[e.result.index()] += e.coeff * w;
            }
        }
        AlgebraVector(out)
    }

    /// Baker–Campbell–Hausdorff product `log(exp(a) exp(b))`, truncated after the
    /// triple brackets. Exact for algebras of step at most three.
    pub fn bch(&self, a: &AlgebraVector, b: &AlgebraVector) -> AlgebraVector {
        let ab = self.bracket(a, b);
        let a_ab = self.bracket(a, &ab);
        let b_ab = self.bracket(b, &ab);
        *a + *b + 0.5 * ab + (1.0 / 12.0) * (a_ab - b_ab)
    }
}

impl Default for StructureConstants {
    fn default() -> Self {
        Self::jet_space()
    }
}

/// Bracket with the J²(ℝ²,ℝ) structure constants.
pub fn bracket(a: &AlgebraVector, b: &AlgebraVector) -> AlgebraVector {
    StructureConstants::jet_space().bracket(a, b)
}
