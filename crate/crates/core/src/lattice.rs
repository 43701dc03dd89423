//! Counting non-negative integer points under a linear form.
//!
//! `count_weak(c, T)` is the number of `n >= 0` with `sum c_i n_i <= T`, the
//! number of lattice points in an expanding simplex. Enumeration is exact;
//! coefficients are positive reals, so the only numerical hazard is a lattice
//! point sitting on the boundary, which is guarded the same way event times
//! are.

use crate::chrono::DEFAULT_EPSILON;
use crate::error::{Error, Result};

/// `sum c_i n_i <= bound` with each variable either `n_i >= 0` or `n_i >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalitySystem {
    pub coefficients: Vec<f64>,
    pub bound: f64,
    pub strict: Vec<bool>,
}

impl InequalitySystem {
    pub fn weak(coefficients: Vec<f64>, bound: f64) -> Self {
        let strict = vec![false; coefficients.len()];
        InequalitySystem { coefficients, bound, strict }
    }

    pub fn strict(coefficients: Vec<f64>, bound: f64) -> Self {
        let strict = vec![true; coefficients.len()];
        InequalitySystem { coefficients, bound, strict }
    }

    /// Number of solutions. A variable with `n_i >= 1` is substituted by
    /// `n_i - 1 >= 0`, which moves `c_i` into the bound.
    pub fn count(&self, epsilon: f64) -> Result<u64> {
        if self.strict.len() != self.coefficients.len() {
            return Err(Error::LengthMismatch(self.strict.len(), self.coefficients.len()));
        }
        let shift: f64 = self.coefficients.iter().zip(&self.strict).filter(|(_, &s)| s).map(|(c, _)| c).sum();
        count_weak_with(&self.coefficients, self.bound - shift, epsilon)
    }
}

fn check_coefficients(coefficients: &[f64]) -> Result<()> {
    match coefficients.iter().find(|&&c| !(c.is_finite() && c > 0.0)) {
        Some(&c) => Err(Error::NonPositiveCoefficient(c)),
        None => Ok(()),
    }
}

pub fn count_weak(coefficients: &[f64], bound: f64) -> Result<u64> {
    count_weak_with(coefficients, bound, DEFAULT_EPSILON)
}

pub fn count_weak_with(coefficients: &[f64], bound: f64, epsilon: f64) -> Result<u64> {
    check_coefficients(coefficients)?;
    let guard = epsilon * bound.abs().max(1.0);
    if bound < 0.0 {
        if -bound <= guard {
            return Err(Error::BoundaryAmbiguity { bound, slack: bound });
        }
        return Ok(0);
    }
    if coefficients.is_empty() {
        return Ok(1);
    }
    let mut sorted = coefficients.to_vec();
    // largest coefficient outermost: fewest iterations at the top level
    sorted.sort_by(|a, b| b.total_cmp(a));
    count_level(&sorted, bound, bound, guard)
}

fn count_level(coefficients: &[f64], slack: f64, bound: f64, guard: f64) -> Result<u64> {
    let (&c, rest) = coefficients.split_first().expect("non-empty");
    let q = guarded_floor(slack, c, bound, guard)?;
    if rest.is_empty() {
        return Ok(q + 1);
    }
    let mut total = 0u64;
    for n in 0..=q {
        let inner = count_level(rest, slack - n as f64 * c, bound, guard)?;
        total = total.checked_add(inner).ok_or(Error::Overflow("lattice count"))?;
    }
    Ok(total)
}

/// `floor(slack / c)` for `slack >= 0`, refusing to decide when the nearest
/// lattice point is inside the guard band without landing on it exactly.
fn guarded_floor(slack: f64, c: f64, bound: f64, guard: f64) -> Result<u64> {
    let mut q = (slack / c).floor();
    let mut r = slack - q * c;
    if r < 0.0 {
        q -= 1.0;
        r += c;
    } else if r >= c {
        q += 1.0;
        r -= c;
    }
    if (r != 0.0 && r <= guard) || (c - r <= guard) {
        return Err(Error::BoundaryAmbiguity { bound, slack: r.min(r - c) });
    }
    if q > u64::MAX as f64 / 2.0 {
        return Err(Error::Overflow("lattice count"));
    }
    Ok(q.max(0.0) as u64)
}

/// Solutions with every `n_i >= 1`.
pub fn count_strict(coefficients: &[f64], bound: f64) -> Result<u64> {
    check_coefficients(coefficients)?;
    InequalitySystem::strict(coefficients.to_vec(), bound).count(DEFAULT_EPSILON)
}

/// Strict count as an alternating sum of weak counts over all subsets of
/// the variables.
pub fn strict_via_inclusion_exclusion(coefficients: &[f64], bound: f64) -> Result<i64> {
    check_coefficients(coefficients)?;
    let k = coefficients.len();
    if k >= 63 {
        return Err(Error::PreconditionViolated(format!("{k} variables is too many for subset expansion")));
    }
    let mut total: i64 = 0;
    let mut picked = Vec::with_capacity(k);
    for mask in 0u64..1 << k {
        picked.clear();
        picked.extend((0..k).filter(|i| mask >> i & 1 == 1).map(|i| coefficients[i]));
        let weak = i64::try_from(count_weak(&picked, bound)?).map_err(|_| Error::Overflow("inclusion-exclusion"))?;
        let sign = if (k - picked.len()) % 2 == 0 { 1 } else { -1 };
        total = total.checked_add(sign * weak).ok_or(Error::Overflow("inclusion-exclusion"))?;
    }
    Ok(total)
}

/// `1 / (m! * prod c_i)`, the coefficient of `T^m` in `count_weak(c, T)`.
pub fn volume_leading_coeff(coefficients: &[f64]) -> Result<f64> {
    check_coefficients(coefficients)?;
    if coefficients.is_empty() {
        return Err(Error::EmptySystem);
    }
    let factorial: f64 = (1..=coefficients.len()).map(|i| i as f64).product();
    Ok(1.0 / (factorial * coefficients.iter().product::<f64>()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const R2: f64 = std::f64::consts::SQRT_2;

    /// Exhaustive enumeration over a box that contains the simplex.
    fn brute_weak(c: &[f64], bound: f64) -> u64 {
        if bound < 0.0 {
            return 0;
        }
        let maxes: Vec<u64> = c.iter().map(|ci| (bound / ci) as u64 + 1).collect();
        let mut n = vec![0u64; c.len()];
        let mut count = 0;
        loop {
            let s: f64 = n.iter().zip(c).map(|(&ni, ci)| ni as f64 * ci).sum();
            if s <= bound {
                count += 1;
            }
            let mut i = 0;
            loop {
                if i == n.len() {
                    return count;
                }
                n[i] += 1;
                if n[i] <= maxes[i] {
                    break;
                }
                n[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn weak_examples() {
        assert_eq!(count_weak(&[2.0], 5.0).unwrap(), 3);
        assert_eq!(count_weak(&[2.0, 2.0 * R2], 6.0).unwrap(), 7);
        assert_eq!(brute_weak(&[2.0, 2.0 * R2], 6.0), 7);
        assert_eq!(count_weak(&[], 0.0).unwrap(), 1);
        assert_eq!(count_weak(&[], -3.0).unwrap(), 0);
        assert_eq!(count_weak(&[2.0], -1.0).unwrap(), 0);
        assert!(matches!(count_weak(&[2.0, 0.0], 1.0), Err(Error::NonPositiveCoefficient(_))));
    }

    #[test]
    fn boundary_hits() {
        // exact hit counts
        assert_eq!(count_weak(&[2.0], 4.0).unwrap(), 3);
        assert_eq!(count_weak(&[2.0], 0.0).unwrap(), 1);
        // a point a hair outside the bound is ambiguous
        assert!(matches!(count_weak(&[2.0], 4.0 - 1e-14), Err(Error::BoundaryAmbiguity { .. })));
        assert!(matches!(count_weak(&[2.0], 4.0 + 1e-14), Err(Error::BoundaryAmbiguity { .. })));
        assert!(matches!(count_weak(&[2.0], -1e-15), Err(Error::BoundaryAmbiguity { .. })));
    }

    #[test]
    fn strict_examples() {
        assert_eq!(count_strict(&[2.0, 2.0 * R2], 6.0).unwrap(), 1);
        assert_eq!(count_strict(&[2.0], 5.0).unwrap(), 2);
        assert_eq!(count_strict(&[2.0, 3.0], 4.9).unwrap(), 0);
        assert_eq!(strict_via_inclusion_exclusion(&[2.0, 2.0 * R2], 6.0).unwrap(), 1);
        // the four subset terms: 7 - 4 - 3 + 1
        assert_eq!(count_weak(&[2.0], 6.0).unwrap(), 4);
        assert_eq!(count_weak(&[2.0 * R2], 6.0).unwrap(), 3);
        assert_eq!(strict_via_inclusion_exclusion(&[], 0.5).unwrap(), 1);
    }

    #[test]
    fn mixed_system() {
        let sys = InequalitySystem { coefficients: vec![2.0, 2.0 * R2], bound: 6.0, strict: vec![true, false] };
        // n1 >= 1, n2 >= 0: (1,0),(2,0),(3,0),(1,1)
        assert_eq!(sys.count(DEFAULT_EPSILON).unwrap(), 4);
    }

    #[test]
    fn volume_coefficient() {
        assert!((volume_leading_coeff(&[2.0; 4]).unwrap() - 1.0 / 384.0).abs() < 1e-18);
        let sqrt_basis = [2.0 * R2, 2.0 * 3f64.sqrt(), 2.0 * 5f64.sqrt(), 2.0 * 7f64.sqrt()];
        let direct = 1.0 / (384.0 * (2.0f64 * 3.0 * 5.0 * 7.0).sqrt());
        assert!((volume_leading_coeff(&sqrt_basis).unwrap() - direct).abs() < 1e-15);
        assert!((direct - 1.797e-4).abs() < 1e-7);
        assert!(matches!(volume_leading_coeff(&[]), Err(Error::EmptySystem)));
    }

    #[test]
    fn ratio_approaches_volume() {
        let c = [2.0, 2.0 * R2];
        let p = volume_leading_coeff(&c).unwrap();
        let dist: Vec<f64> = [50.0, 100.0, 200.0, 400.0, 800.0]
            .iter()
            .map(|&t| (count_weak(&c, t).unwrap() as f64 / (t * t) - p).abs())
            .collect();
        for w in dist.windows(2) {
            assert!(w[1] < w[0], "{dist:?}");
        }
    }

    fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
        let radicals = [2.0f64, 3.0, 5.0, 7.0, 11.0];
        prop::collection::vec((0usize..5, 1u32..4), 0..=max_len)
            .prop_map(move |v| v.into_iter().map(|(i, s)| s as f64 * radicals[i].sqrt()).collect())
    }

    proptest! {
        #[test]
        fn weak_matches_brute_force(c in coeffs(4), bound in 0.0f64..15.0) {
            prop_assert_eq!(count_weak(&c, bound).unwrap(), brute_weak(&c, bound));
        }

        #[test]
        fn inclusion_exclusion_is_exact(c in coeffs(5), bound in 0.0f64..25.0) {
            let strict = count_strict(&c, bound).unwrap() as i64;
            prop_assert_eq!(strict_via_inclusion_exclusion(&c, bound).unwrap(), strict);
        }

        #[test]
        fn monotone_and_dominating(c in coeffs(3), a in 0.0f64..20.0, b in 0.0f64..20.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(count_weak(&c, lo).unwrap() <= count_weak(&c, hi).unwrap());
            prop_assert!(count_weak(&c, hi).unwrap() >= count_strict(&c, hi).unwrap());
            let shift: f64 = c.iter().sum();
            prop_assert_eq!(count_strict(&c, hi).unwrap(), count_weak(&c, hi - shift).unwrap());
        }
    }
}
