//! Exact event times over the edge-time basis.
//!
//! An event time is stored as the number of traversals of each edge. Two
//! times are equal exactly when their multiplicity vectors are equal; the
//! floating-point value is used only to order distinct vectors.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::MetricTree;

/// Default relative separation guard.
pub const DEFAULT_EPSILON: f64 = 1e-12;

/// True when `a` and `b` are within the relative guard band of each other.
pub(crate) fn within_guard(a: f64, b: f64, epsilon: f64) -> bool {
    (a - b).abs() <= epsilon * a.abs().max(b.abs()).max(1.0)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TimeVector(Vec<u32>);

impl TimeVector {
    pub fn zero(edge_count: usize) -> Result<Self> {
        if edge_count == 0 {
            return Err(Error::PreconditionViolated("time vector needs at least one edge".into()));
        }
        Ok(TimeVector(vec![0; edge_count]))
    }

    pub fn from_multiplicities(m: Vec<u32>) -> Self {
        TimeVector(m)
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&m| m == 0)
    }

    /// Adds `count` traversals of `edge`.
    pub fn bump(&self, edge: usize, count: u32) -> Result<Self> {
        if count == 0 {
            return Err(Error::PreconditionViolated("bump count must be positive".into()));
        }
        if edge >= self.0.len() {
            return Err(Error::IndexOutOfRange { index: edge, len: self.0.len() });
        }
        let mut m = self.0.clone();
        m[edge] = m[edge].checked_add(count).ok_or(Error::Overflow("time vector multiplicity"))?;
        Ok(TimeVector(m))
    }

    pub fn value(&self, basis: &Basis) -> f64 {
        self.0.iter().zip(&basis.values).map(|(&m, &t)| m as f64 * t).sum()
    }
}

impl fmt::Display for TimeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, ")")
    }
}

/// Edge propagation times evaluated to `f64`, plus the separation guard.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    values: Vec<f64>,
    epsilon: f64,
}

impl Basis {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|&&v| !(v.is_finite() && v > 0.0)) {
            return Err(Error::NonPositiveTime(bad.to_string()));
        }
        Ok(Basis { values, epsilon: DEFAULT_EPSILON })
    }

    pub fn from_tree(tree: &MetricTree) -> Self {
        Basis { values: tree.times(), epsilon: DEFAULT_EPSILON }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::PreconditionViolated(format!("epsilon must be positive, got {epsilon}")));
        }
        self.epsilon = epsilon;
        Ok(self)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Orders two event times. Identical vectors are `Equal` whatever the
    /// basis; distinct vectors whose values fall inside the guard band raise
    /// `BasisCollision` instead of being ordered by rounding noise.
    pub fn compare(&self, a: &TimeVector, b: &TimeVector) -> Result<Ordering> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch(a.len(), b.len()));
        }
        if a.len() != self.values.len() {
            return Err(Error::LengthMismatch(a.len(), self.values.len()));
        }
        if a == b {
            return Ok(Ordering::Equal);
        }
        let (va, vb) = (a.value(self), b.value(self));
        self.order_distinct(a, va, b, vb)
    }

    pub(crate) fn order_distinct(&self, a: &TimeVector, va: f64, b: &TimeVector, vb: f64) -> Result<Ordering> {
        if within_guard(va, vb, self.epsilon) {
            return Err(Error::BasisCollision { a: a.0.clone(), b: b.0.clone(), value: va });
        }
        Ok(va.total_cmp(&vb))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tv(m: &[u32]) -> TimeVector {
        TimeVector::from_multiplicities(m.to_vec())
    }

    #[test]
    fn zero_vectors() {
        let z = TimeVector::zero(5).unwrap();
        assert_eq!(z.multiplicities(), &[0, 0, 0, 0, 0]);
        let basis = Basis::new(vec![1.0; 5]).unwrap();
        assert_eq!(z.value(&basis), 0.0);
        assert_eq!(TimeVector::zero(1).unwrap().multiplicities(), &[0]);
        assert_eq!(basis.compare(&z, &z).unwrap(), Ordering::Equal);
        assert!(TimeVector::zero(0).is_err());
    }

    #[test]
    fn bumping() {
        let z = TimeVector::zero(2).unwrap();
        assert_eq!(z.bump(0, 2).unwrap(), tv(&[2, 0]));
        assert_eq!(z.bump(0, 1).unwrap().bump(1, 1).unwrap(), z.bump(1, 1).unwrap().bump(0, 1).unwrap());
        assert!(matches!(z.bump(0, 0), Err(Error::PreconditionViolated(_))));
        assert!(matches!(z.bump(2, 1), Err(Error::IndexOutOfRange { index: 2, len: 2 })));
        assert!(matches!(tv(&[u32::MAX]).bump(0, 1), Err(Error::Overflow(_))));
    }

    #[test]
    fn comparisons() {
        let basis = Basis::new(vec![1.0, 2f64.sqrt()]).unwrap();
        assert_eq!(basis.compare(&tv(&[2, 0]), &tv(&[0, 2])).unwrap(), Ordering::Less);
        assert_eq!(basis.compare(&tv(&[2, 2]), &tv(&[2, 2])).unwrap(), Ordering::Equal);
        // equality never consults the basis
        let degenerate = Basis::new(vec![1.0, 1.0]).unwrap();
        assert_eq!(degenerate.compare(&tv(&[2, 2]), &tv(&[2, 2])).unwrap(), Ordering::Equal);

        let close = Basis::new(vec![1.0, 1.0 + 1e-15]).unwrap();
        assert!(matches!(close.compare(&tv(&[1, 0]), &tv(&[0, 1])), Err(Error::BasisCollision { .. })));
        assert!(matches!(basis.compare(&tv(&[1]), &tv(&[0, 1])), Err(Error::LengthMismatch(1, 2))));
    }

    #[test]
    fn basis_validation() {
        assert!(Basis::new(vec![1.0, 0.0]).is_err());
        assert!(Basis::new(vec![1.0]).unwrap().with_epsilon(0.0).is_err());
    }

    proptest! {
        #[test]
        fn bump_adds_value(m in prop::collection::vec(0u32..1000, 5), edge in 0usize..5, c in 1u32..100) {
            let basis = Basis::new(vec![1.0, 2f64.sqrt(), 3f64.sqrt(), 5f64.sqrt(), 7f64.sqrt()]).unwrap();
            let t = tv(&m);
            let bumped = t.bump(edge, c).unwrap();
            let expect = t.value(&basis) + c as f64 * basis.values()[edge];
            prop_assert!((bumped.value(&basis) - expect).abs() <= 4.0 * f64::EPSILON * expect.max(1.0));
        }

        #[test]
        fn total_order_on_independent_basis(vs in prop::collection::vec(prop::collection::vec(0u32..20, 3), 3)) {
            let basis = Basis::new(vec![1.0, 2f64.sqrt(), 3f64.sqrt()]).unwrap();
            let (a, b, c) = (tv(&vs[0]), tv(&vs[1]), tv(&vs[2]));
            let ab = basis.compare(&a, &b).unwrap();
            prop_assert_eq!(basis.compare(&b, &a).unwrap(), ab.reverse());
            prop_assert_eq!(ab == Ordering::Equal, a == b);
            if ab != Ordering::Greater && basis.compare(&b, &c).unwrap() != Ordering::Greater {
                prop_assert_ne!(basis.compare(&a, &c).unwrap(), Ordering::Greater);
            }
        }
    }
}
