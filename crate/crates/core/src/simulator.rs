//! Event-driven execution of the point-splitting dynamics.
//!
//! A point reaching a leaf is reflected. When `k` points reach an inner
//! vertex of valence `d` at the same instant, `d` points leave it, one per
//! incident edge, so the vertex gains `d - k` points. Simultaneity is decided
//! by exact equality of [`TimeVector`]s.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::chrono::{within_guard, Basis, TimeVector};
use crate::error::{Error, Result};
use crate::graph::{MetricTree, Vertex};

/// A point travelling along one edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Flight {
    pub edge: usize,
    pub heading: Vertex,
    pub arrival: TimeVector,
}

impl Flight {
    pub fn departure(&self) -> TimeVector {
        let mut m = self.arrival.multiplicities().to_vec();
        m[self.edge] -= 1;
        TimeVector::from_multiplicities(m)
    }
}

#[derive(Debug)]
struct Pending {
    value: f64,
    flight: Flight,
}

impl Pending {
    fn new(flight: Flight, basis: &Basis) -> Self {
        // always evaluated from the vector so equal vectors get equal values
        Pending { value: flight.arrival.value(basis), flight }
    }

    fn same_event(&self, other: &Pending) -> bool {
        self.flight.heading == other.flight.heading && self.flight.arrival == other.flight.arrival
    }
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Pending {}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then_with(|| self.flight.arrival.cmp(&other.flight.arrival))
            .then_with(|| self.flight.heading.cmp(&other.flight.heading))
            .then_with(|| self.flight.edge.cmp(&other.flight.edge))
    }
}

/// One processed vertex event.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EventRecord {
    pub vertex: Vertex,
    pub time: TimeVector,
    pub arrivals: u32,
    pub births: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub horizon: f64,
    pub start: Vertex,
    /// Points released at time zero: one per edge incident to the start.
    pub initial_departures: u64,
    /// Points on edges at the horizon.
    pub total_points: u64,
    /// Net points created at each vertex up to and including the horizon.
    pub births: Vec<u64>,
    /// Event times at each vertex, ascending, excluding time zero.
    pub return_times: Vec<Vec<TimeVector>>,
    pub event_count: u64,
}

impl SimulationReport {
    pub fn births_at(&self, vertex: Vertex) -> Result<u64> {
        self.births.get(vertex).copied().ok_or_else(|| Error::UnknownVertex(format!("#{vertex}")))
    }

    pub fn return_times_at(&self, vertex: Vertex) -> Result<&[TimeVector]> {
        self.return_times.get(vertex).map(Vec::as_slice).ok_or_else(|| Error::UnknownVertex(format!("#{vertex}")))
    }

    pub fn total_births(&self) -> u64 {
        self.births.iter().sum()
    }
}

/// Runs the dynamics from `start` up to `horizon` with the tree's own basis
/// and the default guard.
pub fn simulate(tree: &MetricTree, start: Vertex, horizon: f64) -> Result<SimulationReport> {
    run(tree, start, horizon, &Basis::from_tree(tree), None)
}

pub fn simulate_with_basis(tree: &MetricTree, start: Vertex, horizon: f64, basis: &Basis) -> Result<SimulationReport> {
    run(tree, start, horizon, basis, None)
}

/// Like [`simulate_with_basis`], also returning every processed event in
/// time order.
pub fn simulate_traced(
    tree: &MetricTree,
    start: Vertex,
    horizon: f64,
    basis: &Basis,
) -> Result<(SimulationReport, Vec<EventRecord>)> {
    let mut trace = Vec::new();
    let report = run(tree, start, horizon, basis, Some(&mut trace))?;
    Ok((report, trace))
}

fn run(
    tree: &MetricTree,
    start: Vertex,
    horizon: f64,
    basis: &Basis,
    mut trace: Option<&mut Vec<EventRecord>>,
) -> Result<SimulationReport> {
    tree.check_vertex(start)?;
    if !(horizon >= 0.0) {
        return Err(Error::HorizonNegative(horizon));
    }
    if basis.values().len() != tree.edge_count() {
        return Err(Error::LengthMismatch(basis.values().len(), tree.edge_count()));
    }
    let n = tree.vertex_count();
    let mut births = vec![0u64; n];
    let mut return_times: Vec<Vec<TimeVector>> = vec![Vec::new(); n];
    let mut event_count = 0u64;

    let mut queue: BinaryHeap<Reverse<Pending>> = BinaryHeap::new();
    if tree.edge_count() > 0 {
        let zero = TimeVector::zero(tree.edge_count())?;
        release(tree, start, &zero, basis, &mut queue)?;
    }
    let initial_departures = queue.len() as u64;

    let mut last: Option<(f64, TimeVector)> = None;
    while let Some(Reverse(head)) = queue.peek() {
        if let Some((last_value, last_time)) = &last {
            if *last_time != head.flight.arrival {
                basis.order_distinct(last_time, *last_value, &head.flight.arrival, head.value)?;
            }
        }
        if head.value != horizon && within_guard(head.value, horizon, basis.epsilon()) {
            return Err(Error::BoundaryAmbiguity { bound: horizon, slack: horizon - head.value });
        }
        if head.value > horizon {
            break;
        }

        let Reverse(head) = queue.pop().expect("peeked");
        let mut arrivals = 1u32;
        while queue.peek().is_some_and(|Reverse(next)| next.same_event(&head)) {
            queue.pop();
            arrivals += 1;
        }
        let vertex = head.flight.heading;
        let time = head.flight.arrival;
        let degree = tree.degree(vertex) as u32;
        debug_assert!(arrivals <= degree);
        let born = degree - arrivals;
        births[vertex] += born as u64;
        event_count += 1;
        release(tree, vertex, &time, basis, &mut queue)?;
        if let Some(trace) = trace.as_deref_mut() {
            trace.push(EventRecord { vertex, time: time.clone(), arrivals, births: born });
        }
        return_times[vertex].push(time.clone());
        last = Some((head.value, time));
    }

    let report = SimulationReport {
        horizon,
        start,
        initial_departures,
        total_points: queue.len() as u64,
        births,
        return_times,
        event_count,
    };
    debug_assert_eq!(report.total_points, report.initial_departures + report.total_births());
    Ok(report)
}

fn release(
    tree: &MetricTree,
    vertex: Vertex,
    time: &TimeVector,
    basis: &Basis,
    queue: &mut BinaryHeap<Reverse<Pending>>,
) -> Result<()> {
    for &edge in tree.incident(vertex) {
        let flight = Flight { edge, heading: tree.edge(edge).other(vertex), arrival: time.bump(edge, 1)? };
        queue.push(Reverse(Pending::new(flight, basis)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_tree, make_h_junction, TimeSpec};

    fn spec(s: &str) -> TimeSpec {
        s.parse().unwrap()
    }

    fn tv(m: &[u32]) -> TimeVector {
        TimeVector::from_multiplicities(m.to_vec())
    }

    fn reference_h() -> MetricTree {
        make_h_junction(["1", "sqrt(2)", "sqrt(3)", "sqrt(5)", "sqrt(7)"].map(spec)).unwrap()
    }

    #[test]
    fn lone_bouncing_point() {
        let tree = build_tree([("A", "B", spec("1"))]).unwrap();
        for horizon in [0.0, 0.5, 5.0, 37.3] {
            let r = simulate(&tree, 0, horizon).unwrap();
            assert_eq!(r.total_points, 1);
            assert_eq!(r.births, vec![0, 0]);
        }
        let r = simulate(&tree, 0, 5.0).unwrap();
        assert_eq!(r.return_times_at(0).unwrap(), &[tv(&[2]), tv(&[4])]);
    }

    #[test]
    fn path_with_simultaneous_return() {
        let tree = build_tree([("B1", "A", spec("1")), ("A", "B2", spec("sqrt(2)"))]).unwrap();
        let a = tree.vertex("A").unwrap();
        let r = simulate(&tree, a, 5.0).unwrap();
        assert_eq!(r.births_at(a).unwrap(), 3);
        assert_eq!(r.total_points, 5);
        assert_eq!(r.return_times_at(a).unwrap(), &[tv(&[2, 0]), tv(&[0, 2]), tv(&[4, 0]), tv(&[2, 2])]);
        // leaves never gain points
        assert_eq!(r.births_at(tree.vertex("B1").unwrap()).unwrap(), 0);
        assert!(!r.return_times_at(tree.vertex("B2").unwrap()).unwrap().is_empty());
        // independently: floor(T / 2 t1) + floor(T / 2 t2)
        assert_eq!(r.births_at(a).unwrap(), (5.0f64 / 2.0).floor() as u64 + (5.0 / (2.0 * 2f64.sqrt())).floor() as u64);
        assert!(r.births_at(99).is_err());
    }

    #[test]
    fn causality_on_h_junction() {
        let h = reference_h();
        let b = h.vertex("B").unwrap();
        let r = simulate(&h, h.vertex("A").unwrap(), 1.5).unwrap();
        assert_eq!(r.births_at(b).unwrap(), 0);
        // a leaf two edges away has not been reached and returned from
        let l4 = h.vertex("L4").unwrap();
        assert!(r.return_times_at(l4).unwrap().is_empty());
    }

    #[test]
    fn birth_exactly_at_horizon_counts() {
        let tree = build_tree([("A", "B", spec("1")), ("A", "C", spec("sqrt(2)"))]).unwrap();
        let r = simulate(&tree, 0, 2.0).unwrap();
        assert_eq!(r.births_at(0).unwrap(), 1);
        let r = simulate(&tree, 0, 1.999).unwrap();
        assert_eq!(r.births_at(0).unwrap(), 0);
    }

    #[test]
    fn commensurate_times_collide() {
        let tree = build_tree([("A", "B", spec("1")), ("A", "C", spec("2"))]).unwrap();
        // (4,0) and (0,2) are both at time 4
        assert!(matches!(simulate(&tree, 0, 10.0), Err(Error::BasisCollision { .. })));
        assert!(matches!(simulate(&tree, 0, -1.0), Err(Error::HorizonNegative(_))));
    }

    #[test]
    fn conservation_and_monotonicity() {
        let h = reference_h();
        let mut prev: Option<SimulationReport> = None;
        for start in ["A", "B", "L2"] {
            let s = h.vertex(start).unwrap();
            for horizon in [0.0, 3.0, 7.5, 12.0, 20.0] {
                let r = simulate(&h, s, horizon).unwrap();
                assert_eq!(r.total_points, h.degree(s) as u64 + r.total_births());
                for leaf in ["L1", "L2", "L4", "L5"] {
                    assert_eq!(r.births_at(h.vertex(leaf).unwrap()).unwrap(), 0);
                }
                for times in &r.return_times {
                    for w in times.windows(2) {
                        assert!(w[0].value(&Basis::from_tree(&h)) < w[1].value(&Basis::from_tree(&h)));
                    }
                }
                if let Some(p) = prev.filter(|p| p.start == s) {
                    assert!(r.total_points >= p.total_points);
                    for v in 0..h.vertex_count() {
                        assert!(r.births[v] >= p.births[v]);
                    }
                }
                prev = Some(r);
            }
        }
    }

    #[test]
    fn deterministic() {
        let h = reference_h();
        let a = simulate(&h, 0, 25.0).unwrap();
        let b = simulate(&h, 0, 25.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn flight_departure() {
        let f = Flight { edge: 1, heading: 0, arrival: tv(&[2, 3]) };
        assert_eq!(f.departure(), tv(&[2, 2]));
    }
}
