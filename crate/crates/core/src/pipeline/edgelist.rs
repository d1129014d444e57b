use std::collections::HashMap;

use crate::adjacency::SparseAdjacency;
use crate::error::{Error, Result};

/// Parses a `src<TAB>dst` edge list (any whitespace accepted). Node ids are
/// arbitrary strings, indexed in order of first appearance and kept as labels.
/// Blank lines and `#` comments are skipped; any other malformed line is fatal.
pub fn parse_edge_list(text: &str, directed: bool) -> Result<SparseAdjacency> {
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: i + 1,
                reason: format!("expected `src<TAB>dst`, found {} fields", fields.len()),
            });
        }
        let mut id = |s| {
            *index.entry(s).or_insert_with(|| {
                labels.push(s.to_string());
                labels.len() - 1
            })
        };
        let src = id(fields[0]);
        let dst = id(fields[1]);
        edges.push((src, dst));
    }
    if edges.is_empty() {
        return Err(Error::Parse {
            line: 0,
            reason: "edge list contains no edges".into(),
        });
    }
    SparseAdjacency::from_edges(labels.len(), &edges, directed)?.with_labels(labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_follow_first_appearance() {
        let a = parse_edge_list("# comment\nx\ty\ny z\n\nz\tx\n", false).unwrap();
        assert_eq!(a.n_nodes(), 3);
        assert_eq!(a.edge_count(), 3);
        assert_eq!(a.labels().unwrap(), &["x", "y", "z"]);
    }

    #[test]
    fn malformed_and_empty() {
        assert!(matches!(
            parse_edge_list("a\tb\nc\n", false),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_edge_list("", false).is_err());
    }
}
