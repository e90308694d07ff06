//! Exhaustive enumeration of coefficient vectors under linear positivity
//! constraints.
//!
//! The search assigns a coefficient `c_x` (drawn from a fixed choice list)
//! to every exponent `x` in `0..=bound` and tracks, for each registered
//! constraint, the polynomial `base + sum_x c_x a^x kernel`. Exponents are
//! decided from the top down; once every `x` that can reach exponent `e`
//! is decided the coefficient at `e` is final, and a negative final value
//! on a required constraint prunes the whole subtree. Leaves are therefore
//! exactly the assignments for which every required constraint is
//! nonnegative.

use std::ops::ControlFlow;

use super::{ExpPoly, IntSet};

struct Track {
    kernel: Vec<i64>,
    required: bool,
    base: Vec<i64>,
}

impl Track {
    fn kernel_deg(&self) -> usize {
        self.kernel.len().saturating_sub(1)
    }
}

/// Pruned search over assignments `x -> c_x`, `0 <= x <= bound`.
pub struct CoefficientSearch {
    bound: u32,
    choices: Vec<i64>,
    tracks: Vec<Track>,
}

impl CoefficientSearch {
    /// Search over subsets of `{0, ..., bound}` (choices `0` and `1`).
    pub fn subsets(bound: u32) -> Self {
        Self::with_choices(bound, vec![0, 1])
    }

    /// Search over pairs of disjoint subsets `(X, X')`, encoded as choices
    /// `1` (in `X`), `-1` (in `X'`) and `0`.
    pub fn signed(bound: u32) -> Self {
        Self::with_choices(bound, vec![0, 1, -1])
    }

    pub fn with_choices(bound: u32, choices: Vec<i64>) -> Self {
        CoefficientSearch {
            bound,
            choices,
            tracks: Vec::new(),
        }
    }

    /// Adds a constraint `base + sum_x c_x a^x kernel >= 0`.
    pub fn require_nonneg(mut self, kernel: &ExpPoly, base: &ExpPoly) -> Self {
        self.tracks.push(Track {
            kernel: kernel.to_dense(),
            required: true,
            base: base.to_dense(),
        });
        self
    }

    /// Tracks `base + sum_x c_x a^x kernel` without constraining it; the
    /// value is handed to the visitor at each leaf.
    pub fn observe(mut self, kernel: &ExpPoly, base: &ExpPoly) -> Self {
        self.tracks.push(Track {
            kernel: kernel.to_dense(),
            required: false,
            base: base.to_dense(),
        });
        self
    }

    /// Visits every admissible assignment in a fixed order. The visitor gets
    /// the assignment (indexed by exponent) and the dense values of all
    /// tracks in registration order.
    pub fn for_each<F>(&self, mut visit: F) -> ControlFlow<()>
    where
        F: FnMut(&[i64], &[Vec<i64>]) -> ControlFlow<()>,
    {
        let width = self.bound as usize + 1;
        let mut values: Vec<Vec<i64>> = self
            .tracks
            .iter()
            .map(|t| {
                let len = (width + t.kernel.len()).max(t.base.len()) + 1;
                let mut v = vec![0i64; len];
                v[..t.base.len()].copy_from_slice(&t.base);
                v
            })
            .collect();
        // Exponents above bound + deg(kernel) only ever see the base.
        for (t, v) in self.tracks.iter().zip(&values) {
            if t.required && v[width + t.kernel_deg()..].iter().any(|&c| c < 0) {
                return ControlFlow::Continue(());
            }
        }
        let mut assignment = vec![0i64; width];
        self.descend(width as isize - 1, &mut assignment, &mut values, &mut visit)
    }

    fn descend<F>(
        &self,
        x: isize,
        assignment: &mut [i64],
        values: &mut [Vec<i64>],
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[i64], &[Vec<i64>]) -> ControlFlow<()>,
    {
        if x < 0 {
            for (t, v) in self.tracks.iter().zip(values.iter()) {
                if t.required && v[..t.kernel_deg()].iter().any(|&c| c < 0) {
                    return ControlFlow::Continue(());
                }
            }
            return visit(assignment, values);
        }
        let xu = x as usize;
        for &c in &self.choices {
            if c != 0 {
                self.apply(xu, c, values);
            }
            assignment[xu] = c;
            let alive = self
                .tracks
                .iter()
                .zip(values.iter())
                .all(|(t, v)| !t.required || v[xu + t.kernel_deg()] >= 0);
            let flow = if alive {
                self.descend(x - 1, assignment, values, visit)
            } else {
                ControlFlow::Continue(())
            };
            if c != 0 {
                self.apply(xu, -c, values);
            }
            assignment[xu] = 0;
            flow?;
        }
        ControlFlow::Continue(())
    }

    fn apply(&self, x: usize, c: i64, values: &mut [Vec<i64>]) {
        for (t, v) in self.tracks.iter().zip(values.iter_mut()) {
            for (k, &kc) in t.kernel.iter().enumerate() {
                if kc != 0 {
                    v[x + k] += c * kc;
                }
            }
        }
    }

    /// All admissible assignments.
    pub fn collect(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let _ = self.for_each(|a, _| {
            out.push(a.to_vec());
            ControlFlow::Continue(())
        });
        out
    }

    pub fn count(&self) -> usize {
        let mut n = 0usize;
        let _ = self.for_each(|_, _| {
            n += 1;
            ControlFlow::Continue(())
        });
        n
    }
}

/// Exponents carrying a positive choice.
pub fn positive_part(assignment: &[i64]) -> IntSet {
    assignment
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(x, _)| x as u32)
        .collect()
}

/// Exponents carrying a negative choice.
pub fn negative_part(assignment: &[i64]) -> IntSet {
    assignment
        .iter()
        .enumerate()
        .filter(|(_, &c)| c < 0)
        .map(|(x, _)| x as u32)
        .collect()
}

/// Every set `X ⊆ {0..bound}` with `base + a^X kernel >= 0`.
pub fn nonneg_sets(kernel: &ExpPoly, base: &ExpPoly, bound: u32) -> Vec<IntSet> {
    CoefficientSearch::subsets(bound)
        .require_nonneg(kernel, base)
        .collect()
        .iter()
        .map(|a| positive_part(a))
        .collect()
}
