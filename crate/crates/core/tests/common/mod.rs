#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use edgewalk::{build_tree, MetricTree, TimeSpec};
use rand::Rng;

pub const PRIMES: [u64; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

/// Random tree on `edges + 1` vertices labelled `v0..`, edge `i` joining
/// `v{i+1}` to an earlier vertex, with times `sqrt(p)` for distinct primes.
pub fn random_tree<R: Rng>(rng: &mut R, edges: usize) -> MetricTree {
    let mut pool = PRIMES.to_vec();
    let mut list = Vec::with_capacity(edges);
    for i in 0..edges {
        let parent = rng.random_range(0..=i);
        let p = pool.swap_remove(rng.random_range(0..pool.len()));
        list.push((format!("v{parent}"), format!("v{}", i + 1), TimeSpec::sqrt(p).unwrap()));
    }
    build_tree(list).unwrap()
}

/// Tree from a parent array (`parent[i]` is the parent of vertex `i + 1`),
/// every edge taking time 1.
pub fn tree_from_parents(parents: &[usize]) -> MetricTree {
    if parents.is_empty() {
        return MetricTree::single_vertex("v0");
    }
    let unit = TimeSpec::decimal(1.0).unwrap();
    build_tree(parents.iter().enumerate().map(|(i, &p)| (format!("v{p}"), format!("v{}", i + 1), unit.clone())))
        .unwrap()
}

fn canonical(children: &[Vec<usize>], v: usize) -> String {
    let mut parts: Vec<String> = children[v].iter().map(|&c| canonical(children, c)).collect();
    parts.sort();
    format!("({})", parts.concat())
}

/// Every rooted tree with at most `max_edges` edges, one per isomorphism
/// class, as parent arrays rooted at vertex 0.
pub fn rooted_shapes(max_edges: usize) -> Vec<Vec<usize>> {
    let mut all = vec![Vec::new()];
    let mut level: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_edges {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for parents in &level {
            for attach in 0..=parents.len() {
                let mut grown = parents.clone();
                grown.push(attach);
                let mut children = vec![Vec::new(); grown.len() + 1];
                for (i, &p) in grown.iter().enumerate() {
                    children[p].push(i + 1);
                }
                if seen.insert(canonical(&children, 0)) {
                    next.push(grown);
                }
            }
        }
        all.extend(next.iter().cloned());
        level = next;
    }
    all
}

/// Plain minimax on the descend-the-tree game: the mover must step to a
/// neighbour farther from `root`; a player with no move loses. Returns 1
/// when the position at `root` is lost for the mover.
pub fn minimax_label(tree: &MetricTree, root: usize) -> u8 {
    fn mover_wins(tree: &MetricTree, v: usize, from: Option<usize>) -> bool {
        tree.incident(v)
            .iter()
            .map(|&e| tree.edge(e).other(v))
            .filter(|&w| Some(w) != from)
            .any(|w| !mover_wins(tree, w, Some(v)))
    }
    u8::from(!mover_wins(tree, root, None))
}

/// Outcome of the naive reference simulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaiveRun {
    pub births: Vec<i64>,
    pub total_points: usize,
    /// `(vertex, multiplicities, arrivals)` for every event, sorted.
    pub events: Vec<(usize, Vec<u32>, u32)>,
}

/// Point-by-point simulation on integer clocks: edge times are rounded to
/// multiples of 1e-12, so simultaneity is integer equality. Each step scans
/// every live point for the next arrival.
pub fn naive_simulate(tree: &MetricTree, start: usize, horizon: f64) -> NaiveRun {
    const SCALE: f64 = 1e12;
    let ticks: Vec<i128> = tree.times().iter().map(|t| (t * SCALE).round() as i128).collect();
    let limit = (horizon * SCALE).round() as i128;
    let m = tree.edge_count();

    // (edge, heading, arrival ticks, multiplicities)
    let mut points: Vec<(usize, usize, i128, Vec<u32>)> = Vec::new();
    let depart = |points: &mut Vec<_>, v: usize, now: i128, mult: &[u32]| {
        for &e in tree.incident(v) {
            let mut next = mult.to_vec();
            next[e] += 1;
            points.push((e, tree.edge(e).other(v), now + ticks[e], next));
        }
    };
    depart(&mut points, start, 0, &vec![0; m]);

    let mut births = vec![0i64; tree.vertex_count()];
    let mut events = Vec::new();
    while let Some(now) = points.iter().map(|p| p.2).min().filter(|&t| t <= limit) {
        let mut arriving: BTreeMap<usize, (u32, Vec<u32>)> = BTreeMap::new();
        points.retain(|p| {
            if p.2 == now {
                let slot = arriving.entry(p.1).or_insert((0, p.3.clone()));
                assert_eq!(slot.1, p.3, "equal clocks with different multiplicities");
                slot.0 += 1;
                false
            } else {
                true
            }
        });
        for (v, (k, mult)) in arriving {
            births[v] += tree.degree(v) as i64 - k as i64;
            depart(&mut points, v, now, &mult);
            events.push((v, mult, k));
        }
    }
    events.sort();
    NaiveRun { births, total_points: points.len(), events }
}
