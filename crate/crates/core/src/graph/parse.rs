use super::{build_tree, MetricTree, TimeSpec};
use crate::error::{Error, Result};

/// Parses the edge-list text format: one `<vertexA> <vertexB> <time-spec>`
/// per line; blank lines and lines starting with `#` are skipped.
pub fn parse_edge_list(text: &str) -> Result<MetricTree> {
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("expected `<vertexA> <vertexB> <time>`, got `{line}`"),
            });
        }
        let time: TimeSpec = fields[2].parse().map_err(|e| match e {
            Error::Parse { message, .. } => Error::Parse { line: i + 1, message },
            other => other,
        })?;
        edges.push((fields[0].to_string(), fields[1].to_string(), time));
    }
    build_tree(edges)
}
