//! Streaming composite Simpson quadrature on a uniform grid.
//!
//! Even nodes use the composite Simpson rule. Odd nodes are filled in one sample later
//! with the three-point rule `h/12 (5 f0 + 8 f1 − f2)`; a trailing odd node uses the
//! mirrored rule `h/12 (−f0 + 8 f1 + 5 f2)`.

#[derive(Debug, Clone)]
pub struct SimpsonAccumulator<const N: usize> {
    step: f64,
    // Integral at the most recent even node.
    base: [f64; N],
    // Last (up to) three integrand samples, oldest first.
    window: Vec<[f64; N]>,
    count: usize,
}

/// Node index and the integral value there.
pub type Node<const N: usize> = (usize, [f64; N]);

impl<const N: usize> SimpsonAccumulator<N> {
    pub fn new(step: f64, initial: [f64; N]) -> Self {
        SimpsonAccumulator {
            step,
            base: initial,
            window: Vec::with_capacity(3),
            count: 0,
        }
    }

    /// Number of samples pushed so far.
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Push the integrand at the next node. Returns the nodes whose integral became
    /// final, in increasing order.
    pub fn push(&mut self, f: [f64; N]) -> [Option<Node<N>>; 2] {
        let n = self.count;
        self.count += 1;
        if self.window.len() == 3 {
            self.window.remove(0);
        }
        self.window.push(f);
        if n == 0 {
            return [Some((0, self.base)), None];
        }
        if n % 2 == 1 {
            return [None, None];
        }
        let h = self.step;
        let [f0, f1, f2] = [self.window[0], self.window[1], self.window[2]];
        let mut odd = self.base;
        let mut even = self.base;
        for k in 0..N {
            odd[k] += h / 12.0 * (5.0 * f0[k] + 8.0 * f1[k] - f2[k]);
            even[k] += h / 3.0 * (f0[k] + 4.0 * f1[k] + f2[k]);
        }
        self.base = even;
        [Some((n - 1, odd)), Some((n, even))]
    }

    /// Close the grid, emitting a trailing odd node if one is pending.
    pub fn finish(self) -> Option<Node<N>> {
        let n = self.count;
        if n < 2 || (n - 1).is_multiple_of(2) {
            return None;
        }
        let h = self.step;
        let mut last = self.base;
        if n == 2 {
            let [f0, f1] = [self.window[0], self.window[1]];
            for k in 0..N {
                last[k] += 0.5 * h * (f0[k] + f1[k]);
            }
        } else {
            let [f0, f1, f2] = [self.window[0], self.window[1], self.window[2]];
            for k in 0..N {
                last[k] += h / 12.0 * (-f0[k] + 8.0 * f1[k] + 5.0 * f2[k]);
            }
        }
        Some((n - 1, last))
    }
}

/// Integrate uniformly sampled values, returning the running integral at every node.
pub fn cumulative_simpson<const N: usize>(step: f64, values: &[[f64; N]]) -> Vec<[f64; N]> {
    let mut out = vec![[0.0; N]; values.len()];
    let mut acc = SimpsonAccumulator::new(step, [0.0; N]);
    for f in values {
        for (i, v) in acc.push(*f).into_iter().flatten() {
            out[i] = v;
        }
    }
    if let Some((i, v)) = acc.finish() {
        out[i] = v;
    }
    out
}
