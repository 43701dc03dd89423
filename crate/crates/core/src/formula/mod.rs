//! Birth counts at the root as signed sums of lattice-point counts.
//!
//! For a tree with root `A` split into branches `B_1..B_n`, the number of
//! points born at `A` by time `T` is, up to an additive constant,
//!
//! ```text
//! sum over G ⊆ E of  c_G * #[ sum_{e in G} 2 t_e n_e <= T ]
//! c_G = prod_{i<=k} z(B_i, G ∩ B_i) * sum_{j=0}^{n-k-1} (n-k-j) sigma_j(z_{k+1}, .., z_n)
//! ```
//!
//! where `B_1..B_k` are the branches that `G` meets, `z(B, G)` is the signed
//! count of nonempty rooted subtrees of `B` containing `G`, and `z_i =
//! z(B_i, ∅)`. With the bracket as written the constant works out to
//! `deg(A)`.

mod game;
mod h_junction;

pub use game::{game_outcome, z0, z0_labels, GameOutcome};
pub use h_junction::{h_births_a, h_births_b, h_total, HStart, HTimes};

use serde::Serialize;

use crate::chrono::Basis;
use crate::error::{Error, Result};
use crate::graph::{branch_decomposition, rooted_subtrees_within, Branch, EdgeSubset, MetricTree, Vertex};
use crate::lattice::count_weak_with;

/// Largest branch for which a dense z-table is built.
const MAX_BRANCH_EDGES: usize = 24;
/// Largest tree for which all `2^|E|` subsets are scanned.
const MAX_TERM_EDGES: usize = 26;

fn sign(len: usize) -> i64 {
    if len % 2 == 0 {
        1
    } else {
        -1
    }
}

/// z over a set of rooted subtrees, straight from the definition: the
/// signed count of nonempty subtrees of `domain` rooted at `root` that
/// contain `g`.
pub fn z_direct_within(tree: &MetricTree, root: Vertex, domain: EdgeSubset, g: EdgeSubset) -> Result<i64> {
    if !g.fits(tree.edge_count()) {
        return Err(Error::InvalidSubset { mask: g.0, reason: "bits beyond edge count".into() });
    }
    let total: i64 = rooted_subtrees_within(tree, root, domain, g)?
        .into_iter()
        .filter(|s| !s.is_empty())
        .map(|s| sign(s.len()))
        .sum();
    Ok(sign(g.len()) * total)
}

pub fn z_direct(tree: &MetricTree, root: Vertex, g: EdgeSubset) -> Result<i64> {
    z_direct_within(tree, root, tree.all_edges(), g)
}

#[derive(Debug, Clone)]
struct BranchTable {
    branch: Branch,
    /// Local bit position of each tree edge in this branch.
    local_of: Vec<Option<u32>>,
    z: Vec<i64>,
}

impl BranchTable {
    fn build(tree: &MetricTree, branch: Branch) -> Result<Self> {
        let b = branch.edges.len();
        if b > MAX_BRANCH_EDGES {
            return Err(Error::PreconditionViolated(format!(
                "branch with {b} edges exceeds the z-table limit of {MAX_BRANCH_EDGES}"
            )));
        }
        let mut local_of = vec![None; tree.edge_count()];
        for (i, e) in branch.edges.iter().enumerate() {
            local_of[e] = Some(i as u32);
        }
        let mut f = vec![0i64; 1 << b];
        for s in rooted_subtrees_within(tree, branch.root, branch.edges, EdgeSubset::EMPTY)? {
            if !s.is_empty() {
                f[to_local(&local_of, s)] += sign(s.len());
            }
        }
        // superset sums: f[G] = sum over S ⊇ G
        for bit in 0..b {
            for mask in 0..f.len() {
                if mask >> bit & 1 == 0 {
                    f[mask] += f[mask | 1 << bit];
                }
            }
        }
        for (mask, v) in f.iter_mut().enumerate() {
            *v *= sign(mask.count_ones() as usize);
        }
        Ok(BranchTable { branch, local_of, z: f })
    }

    fn z(&self, g: EdgeSubset) -> i64 {
        self.z[to_local(&self.local_of, g)]
    }
}

fn to_local(local_of: &[Option<u32>], s: EdgeSubset) -> usize {
    s.iter().map(|e| 1usize << local_of[e].expect("edge in branch")).sum()
}

/// z-values of every branch at a root, memoized per (branch, subset).
#[derive(Debug, Clone)]
pub struct ZTable {
    root: Vertex,
    edge_count: usize,
    branches: Vec<BranchTable>,
}

impl ZTable {
    pub fn new(tree: &MetricTree, root: Vertex) -> Result<Self> {
        let branches = branch_decomposition(tree, root)?
            .into_iter()
            .map(|b| BranchTable::build(tree, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(ZTable { root, edge_count: tree.edge_count(), branches })
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn branches(&self) -> impl Iterator<Item = &Branch> {
        self.branches.iter().map(|t| &t.branch)
    }

    /// `z(B_i, g)`; `g` must lie inside branch `i`.
    pub fn z(&self, branch: usize, g: EdgeSubset) -> Result<i64> {
        let t = self.branches.get(branch).ok_or(Error::IndexOutOfRange { index: branch, len: self.branches.len() })?;
        if !g.is_subset_of(t.branch.edges) {
            return Err(Error::InvalidSubset { mask: g.0, reason: format!("not inside branch {branch}") });
        }
        Ok(t.z(g))
    }

    /// `z_i = z(B_i, ∅)`, one per branch.
    pub fn z_empty(&self) -> Vec<i64> {
        self.branches.iter().map(|t| t.z[0]).collect()
    }

    /// The coefficient of `#[g]`.
    pub fn c(&self, g: EdgeSubset) -> Result<i64> {
        if !g.fits(self.edge_count) {
            return Err(Error::InvalidSubset { mask: g.0, reason: "bits beyond edge count".into() });
        }
        let n = self.branches.len();
        let mut product: i64 = 1;
        let mut others: Vec<i64> = Vec::with_capacity(n);
        for t in &self.branches {
            let part = g.intersection(t.branch.edges);
            if part.is_empty() {
                others.push(t.z[0]);
            } else {
                product = product.checked_mul(t.z(part)).ok_or(Error::Overflow("c_G product"))?;
            }
        }
        if product == 0 {
            return Ok(0);
        }
        let k = n - others.len();
        let sigma = elementary_symmetric(&others)?;
        let mut bracket: i64 = 0;
        for (j, &s) in sigma.iter().enumerate().take(n - k) {
            let weight = (n - k - j) as i64;
            bracket =
                weight.checked_mul(s).and_then(|w| bracket.checked_add(w)).ok_or(Error::Overflow("c_G bracket"))?;
        }
        product.checked_mul(bracket).ok_or(Error::Overflow("c_G"))
    }

    /// Return-count expansion for a root of valence one:
    /// `F = sum_G z(B_1, G) #[G]`.
    pub fn f_terms(&self) -> Result<TermList> {
        let [t] = self.branches.as_slice() else {
            return Err(Error::InvalidBranch(format!(
                "root has valence {}, return counts need valence 1",
                self.branches.len()
            )));
        };
        let mut terms = Vec::new();
        for local in 0..t.z.len() {
            if t.z[local] != 0 {
                let g = EdgeSubset::from_edges(
                    t.branch.edges.iter().enumerate().filter(|(i, _)| local >> i & 1 == 1).map(|(_, e)| e),
                );
                terms.push(Term { subset: g, coefficient: t.z[local] });
            }
        }
        terms.sort_by_key(|t| t.subset);
        Ok(TermList { terms })
    }
}

/// `sigma_0..sigma_m` of the given integers.
fn elementary_symmetric(values: &[i64]) -> Result<Vec<i64>> {
    let mut e = vec![0i64; values.len() + 1];
    e[0] = 1;
    for (i, &v) in values.iter().enumerate() {
        for j in (1..=i + 1).rev() {
            e[j] = v
                .checked_mul(e[j - 1])
                .and_then(|p| e[j].checked_add(p))
                .ok_or(Error::Overflow("elementary symmetric polynomial"))?;
        }
    }
    Ok(e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Term {
    pub subset: EdgeSubset,
    pub coefficient: i64,
}

/// Nonzero `(G, c_G)` pairs in ascending mask order. Each edge `e` in `G`
/// contributes the coefficient `2 t_e` to the inequality `#[G]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TermList {
    pub terms: Vec<Term>,
}

impl TermList {
    /// `sum c_G * #[G]` at horizon `horizon`.
    pub fn evaluate(&self, basis: &Basis, horizon: f64) -> Result<i64> {
        let mut total: i64 = 0;
        let mut coeffs = Vec::new();
        for term in &self.terms {
            coeffs.clear();
            coeffs.extend(term.subset.iter().map(|e| 2.0 * basis.values()[e]));
            let count = count_weak_with(&coeffs, horizon, basis.epsilon())?;
            let count = i64::try_from(count).map_err(|_| Error::Overflow("term count"))?;
            total = count
                .checked_mul(term.coefficient)
                .and_then(|v| total.checked_add(v))
                .ok_or(Error::Overflow("term sum"))?;
        }
        Ok(total)
    }

    /// The T^m coefficient contributed by terms with `|G| = m`.
    pub fn leading_coefficient(&self, basis: &Basis) -> f64 {
        let m = self.terms.iter().map(|t| t.subset.len()).max().unwrap_or(0);
        let factorial: f64 = (1..=m).map(|i| i as f64).product();
        self.terms
            .iter()
            .filter(|t| t.subset.len() == m)
            .map(|t| {
                let prod: f64 = t.subset.iter().map(|e| 2.0 * basis.values()[e]).product();
                t.coefficient as f64 / (factorial * prod)
            })
            .sum()
    }
}

pub fn c_coefficient(tree: &MetricTree, root: Vertex, g: EdgeSubset) -> Result<i64> {
    ZTable::new(tree, root)?.c(g)
}

/// All nonzero lattice-count terms for births at `root`.
pub fn birth_terms(tree: &MetricTree, root: Vertex) -> Result<TermList> {
    let table = ZTable::new(tree, root)?;
    let e = tree.edge_count();
    if e > MAX_TERM_EDGES {
        return Err(Error::PreconditionViolated(format!("{e} edges exceed the term-list limit of {MAX_TERM_EDGES}")));
    }
    let mut terms = Vec::new();
    for mask in 0u64..1 << e {
        let g = EdgeSubset(mask);
        let c = table.c(g)?;
        if c != 0 {
            terms.push(Term { subset: g, coefficient: c });
        }
    }
    Ok(TermList { terms })
}

/// Births at `root` by time `horizon` from the lattice-count formula. This
/// exceeds the simulated ledger by a constant.
pub fn births_formula(tree: &MetricTree, root: Vertex, basis: &Basis, horizon: f64) -> Result<i64> {
    birth_terms(tree, root)?.evaluate(basis, horizon)
}

/// Number of return times to `root` in `(0, horizon]`, for a tree in which
/// `root` is a leaf.
pub fn f_return_count(tree: &MetricTree, root: Vertex, basis: &Basis, horizon: f64) -> Result<i64> {
    tree.check_vertex(root)?;
    if tree.degree(root) != 1 {
        return Err(Error::InvalidBranch(format!("root {} has valence {}", tree.label(root), tree.degree(root))));
    }
    ZTable::new(tree, root)?.f_terms()?.evaluate(basis, horizon)
}
