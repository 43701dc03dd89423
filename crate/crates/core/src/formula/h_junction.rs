//! Closed forms for the H-junction.
//!
//! Edges e1, e2, e3 meet at `A` and e3, e4, e5 at `B`. Births at `A` from a
//! start at `A` are seven weak counts (plus a constant); births at `B` are
//! four weak counts at the shifted bound `T - t3`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::count_weak_with;

/// Propagation times `t1..t5` of an H-junction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HTimes(pub [f64; 5]);

impl HTimes {
    pub fn new(t: [f64; 5]) -> Result<Self> {
        if let Some(&bad) = t.iter().find(|&&x| !(x.is_finite() && x > 0.0)) {
            return Err(Error::NonPositiveTime(bad.to_string()));
        }
        Ok(HTimes(t))
    }

    /// `t_i` for `i` in `1..=5`.
    pub fn t(&self, i: usize) -> f64 {
        self.0[i - 1]
    }

    /// Times of the graph with e1 and e5 exchanged.
    pub fn swap15(&self) -> Self {
        let [t1, t2, t3, t4, t5] = self.0;
        HTimes([t5, t2, t3, t4, t1])
    }

    /// Relabels so that `B` plays the role of `A` (e1↔e4, e2↔e5).
    pub fn mirrored(&self) -> Self {
        let [t1, t2, t3, t4, t5] = self.0;
        HTimes([t4, t5, t3, t1, t2])
    }

    fn weak(&self, edges: &[usize], bound: f64, epsilon: f64) -> Result<i64> {
        let c: Vec<f64> = edges.iter().map(|&i| 2.0 * self.t(i)).collect();
        i64::try_from(count_weak_with(&c, bound, epsilon)?).map_err(|_| Error::Overflow("H-junction count"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HStart {
    A,
    B,
}

/// Births at `A` from a start at `A`, with the free constant set to zero.
pub fn h_births_a(t: &HTimes, horizon: f64, epsilon: f64) -> Result<i64> {
    let w = |edges: &[usize]| t.weak(edges, horizon, epsilon);
    Ok(w(&[1, 3, 4, 5])? + w(&[2, 3, 4, 5])? - w(&[1, 4, 5])? - w(&[2, 4, 5])? + w(&[1, 2])? + w(&[1])? + w(&[2])?)
}

/// Births at `B` from a start at `A`.
pub fn h_births_b(t: &HTimes, horizon: f64, epsilon: f64) -> Result<i64> {
    let bound = horizon - t.t(3);
    let w = |edges: &[usize]| t.weak(edges, bound, epsilon);
    Ok(w(&[1, 2, 3, 4])? + w(&[1, 2, 3, 5])? + w(&[1, 2, 4, 5])? - w(&[1, 2])?)
}

/// Total births from either inner vertex; a start at `B` is the start at
/// `A` of the mirrored junction.
pub fn h_total(t: &HTimes, start: HStart, horizon: f64, epsilon: f64) -> Result<i64> {
    let t = match start {
        HStart::A => *t,
        HStart::B => t.mirrored(),
    };
    Ok(h_births_a(&t, horizon, epsilon)? + h_births_b(&t, horizon, epsilon)?)
}
