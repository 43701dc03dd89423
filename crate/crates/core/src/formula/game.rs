//! The win/loss label `z0` and the descend-the-tree game it solves.
//!
//! `z0(Γ, A) = 1 + z(Γ, ∅, A)` obeys two rules: it is multiplicative over
//! subtrees glued at `A`, and for a single edge `(A, B)` it is `1 - z0` of
//! what hangs below `B`. A vertex with label 1 is a loss for the player to
//! move when two players alternately step away from the root and whoever
//! reaches a valence-one vertex makes the last move.

use serde::Serialize;

use crate::error::Result;
use crate::graph::{MetricTree, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GameOutcome {
    FirstPlayerWins,
    SecondPlayerWins,
}

/// Children of every vertex when the tree hangs from `root`, plus a
/// pre-order listing.
fn hang(tree: &MetricTree, root: Vertex) -> (Vec<Vec<Vertex>>, Vec<Vertex>) {
    let mut children = vec![Vec::new(); tree.vertex_count()];
    let mut order = Vec::with_capacity(tree.vertex_count());
    let mut stack = vec![(root, usize::MAX)];
    while let Some((v, via)) = stack.pop() {
        order.push(v);
        for &e in tree.incident(v) {
            if e != via {
                let w = tree.edge(e).other(v);
                children[v].push(w);
                stack.push((w, e));
            }
        }
    }
    (children, order)
}

/// `z0` of the subtree below each vertex, with the tree hanging from
/// `root`. Every label is 0 or 1.
pub fn z0_labels(tree: &MetricTree, root: Vertex) -> Result<Vec<u8>> {
    tree.check_vertex(root)?;
    let (children, order) = hang(tree, root);
    let mut label = vec![1u8; tree.vertex_count()];
    for &v in order.iter().rev() {
        // product over glued branches, each branch contributing 1 - z0(child)
        label[v] = children[v].iter().map(|&c| 1 - label[c]).product();
    }
    Ok(label)
}

pub fn z0(tree: &MetricTree, root: Vertex) -> Result<u8> {
    Ok(z0_labels(tree, root)?[root])
}

/// Backward induction on the descend-the-tree game.
pub fn game_outcome(tree: &MetricTree, root: Vertex) -> Result<GameOutcome> {
    tree.check_vertex(root)?;
    let (children, order) = hang(tree, root);
    let mut mover_wins = vec![false; tree.vertex_count()];
    for &v in order.iter().rev() {
        mover_wins[v] = children[v].iter().any(|&c| !mover_wins[c]);
    }
    Ok(if mover_wins[root] { GameOutcome::FirstPlayerWins } else { GameOutcome::SecondPlayerWins })
}
