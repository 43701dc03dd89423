use super::{EdgeSubset, MetricTree, Vertex};
use crate::error::{Error, Result};

/// All connected edge sets that contain `root` and include `required`,
/// in ascending mask order. The empty set (the root alone) is included when
/// `required` is empty.
pub fn rooted_subtrees(tree: &MetricTree, root: Vertex, required: EdgeSubset) -> Result<Vec<EdgeSubset>> {
    rooted_subtrees_within(tree, root, tree.all_edges(), required)
}

/// Like [`rooted_subtrees`], restricted to edges in `domain`.
///
/// Each child edge of a vertex contributes its own family of options
/// independently, so the result is built as a product of per-edge families
/// rather than by filtering all `2^|E|` masks.
pub fn rooted_subtrees_within(
    tree: &MetricTree,
    root: Vertex,
    domain: EdgeSubset,
    required: EdgeSubset,
) -> Result<Vec<EdgeSubset>> {
    tree.check_vertex(root)?;
    if !required.fits(tree.edge_count()) {
        return Err(Error::InvalidSubset { mask: required.0, reason: "bits beyond edge count".into() });
    }
    if !domain.fits(tree.edge_count()) {
        return Err(Error::InvalidSubset { mask: domain.0, reason: "bits beyond edge count".into() });
    }
    if !required.is_subset_of(domain) {
        return Ok(Vec::new());
    }
    let (mut family, _) = grow(tree, root, None, domain, required);
    family.sort_unstable();
    Ok(family.into_iter().map(EdgeSubset).collect())
}

/// Returns the rooted families below `v` and the mask of all domain edges
/// below `v`.
fn grow(tree: &MetricTree, v: Vertex, via: Option<usize>, domain: EdgeSubset, required: EdgeSubset) -> (Vec<u64>, u64) {
    let mut family = vec![0u64];
    let mut region = 0u64;
    for &e in tree.incident(v) {
        if Some(e) == via || !domain.contains(e) {
            continue;
        }
        let (below, below_region) = grow(tree, tree.edge(e).other(v), Some(e), domain, required);
        let edge_region = below_region | 1 << e;
        region |= edge_region;
        let need = required.0 & edge_region;
        let mut options: Vec<u64> = Vec::with_capacity(below.len() + 1);
        if need == 0 {
            options.push(0);
        }
        options.extend(below.iter().map(|s| s | 1 << e).filter(|s| s & need == need));
        family = family.iter().flat_map(|&f| options.iter().map(move |&o| f | o)).collect();
    }
    (family, region)
}
