mod common;

use common::{naive_simulate, random_tree};
use edgewalk::asymptotics::{grid, reference_times, total_series};
use edgewalk::simulator::simulate_traced;
use edgewalk::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn simulator_matches_naive_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..25 {
        let edges = rng.random_range(1..=5);
        let tree = random_tree(&mut rng, edges);
        let start = rng.random_range(0..tree.vertex_count());
        let horizon = rng.random_range(5.0..18.0);
        let basis = Basis::from_tree(&tree);
        let (report, trace) = simulate_traced(&tree, start, horizon, &basis).unwrap();
        let naive = naive_simulate(&tree, start, horizon);

        let births: Vec<i64> = report.births.iter().map(|&b| b as i64).collect();
        assert_eq!(births, naive.births, "{}", tree.to_edge_list());
        assert_eq!(report.total_points as usize, naive.total_points);
        let mut events: Vec<_> =
            trace.iter().map(|r| (r.vertex, r.time.multiplicities().to_vec(), r.arrivals)).collect();
        events.sort();
        assert_eq!(events, naive.events);
    }
}

#[test]
fn births_formula_offset_is_root_degree() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..30 {
        let edges = rng.random_range(1..=5);
        let tree = random_tree(&mut rng, edges);
        let root = rng.random_range(0..tree.vertex_count());
        let basis = Basis::from_tree(&tree);
        for horizon in [0.5, 7.0, 13.3, 21.0] {
            let sim = simulate_with_basis(&tree, root, horizon, &basis).unwrap();
            let formula = births_formula(&tree, root, &basis, horizon).unwrap();
            assert_eq!(formula - sim.births[root] as i64, tree.degree(root) as i64, "{}", tree.to_edge_list());
        }
    }
}

#[test]
fn return_count_expansion_is_exact_at_leaves() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..30 {
        let edges = rng.random_range(1..=5);
        let tree = random_tree(&mut rng, edges);
        let leaves: Vec<_> = (0..tree.vertex_count()).filter(|&v| tree.degree(v) == 1).collect();
        let root = leaves[rng.random_range(0..leaves.len())];
        let basis = Basis::from_tree(&tree);
        for horizon in [1.0, 9.5, 17.0, 24.0] {
            let sim = simulate_with_basis(&tree, root, horizon, &basis).unwrap();
            let f = f_return_count(&tree, root, &basis, horizon).unwrap();
            assert_eq!(f, sim.return_times_at(root).unwrap().len() as i64, "{}", tree.to_edge_list());
        }
    }
}

#[test]
fn h_junction_closed_forms_against_simulation() {
    let t = reference_times();
    let h = make_h_junction(["1", "sqrt(2)", "sqrt(3)", "sqrt(5)", "sqrt(7)"].map(|s| s.parse().unwrap())).unwrap();
    let (a, b) = (h.vertex("A").unwrap(), h.vertex("B").unwrap());
    for horizon in [4.0, 11.0, 19.5, 30.0] {
        let from_a = simulate(&h, a, horizon).unwrap();
        let from_b = simulate(&h, b, horizon).unwrap();
        assert_eq!(h_births_a(&t, horizon, DEFAULT_EPSILON).unwrap(), from_a.births[a] as i64 + 3);
        assert_eq!(h_births_b(&t, horizon, DEFAULT_EPSILON).unwrap(), from_a.births[b] as i64);
        assert_eq!(h_total(&t, HStart::A, horizon, DEFAULT_EPSILON).unwrap(), from_a.total_points as i64);
        assert_eq!(h_total(&t, HStart::B, horizon, DEFAULT_EPSILON).unwrap(), from_b.total_points as i64);
    }
}

#[test]
fn series_do_not_depend_on_evaluation_order() {
    let t = reference_times();
    let horizons = grid(100.0, 25.0, 400.0).unwrap();
    let series = total_series(&t, horizons.clone(), Engine::Formula, DEFAULT_EPSILON).unwrap();

    let mut order: Vec<usize> = (0..horizons.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(14));
    let mut shuffled = vec![0; horizons.len()];
    for i in order {
        shuffled[i] = h_total(&t, HStart::A, horizons[i], DEFAULT_EPSILON).unwrap();
    }
    assert_eq!(series.values, shuffled);
}
