//! Fixtures shared by the benchmarks.

use edgewalk::{build_tree, make_h_junction, MetricTree, TimeSpec};

pub const REFERENCE_TIMES: [&str; 5] = ["1", "sqrt(2)", "sqrt(3)", "sqrt(5)", "sqrt(7)"];

pub fn h_junction() -> MetricTree {
    make_h_junction(REFERENCE_TIMES.map(|s| s.parse().expect("static time"))).expect("static tree")
}

/// A caterpillar: a spine of `spine` edges with one leg hanging from every
/// spine vertex, times `sqrt` of successive primes.
pub fn caterpillar(spine: usize) -> MetricTree {
    let mut primes = (2u64..).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0));
    let mut edges = Vec::new();
    for i in 0..spine {
        edges.push((format!("s{i}"), format!("s{}", i + 1), TimeSpec::sqrt(primes.next().unwrap()).unwrap()));
    }
    for i in 0..=spine {
        edges.push((format!("s{i}"), format!("l{i}"), TimeSpec::sqrt(primes.next().unwrap()).unwrap()));
    }
    build_tree(edges).expect("caterpillar is a tree")
}

/// Coefficients `2 sqrt(p)` for the first `k` primes.
pub fn simplex(k: usize) -> Vec<f64> {
    [2.0f64, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0].iter().take(k).map(|p| 2.0 * p.sqrt()).collect()
}
