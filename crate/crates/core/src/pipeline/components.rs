use std::collections::VecDeque;

use crate::adjacency::SparseAdjacency;
use crate::error::Result;

/// Weakly connected components, each sorted ascending, ordered by their
/// smallest node index.
pub fn connected_components(a: &SparseAdjacency) -> Vec<Vec<usize>> {
    let n = a.n_nodes();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    let mut queue = VecDeque::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        queue.push_back(root);
        let mut comp = Vec::new();
        while let Some(v) = queue.pop_front() {
            comp.push(v);
            for &w in a.neighbors(v).iter().chain(a.in_neighbors(v)) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    components
}

/// Nodes of the largest component; ties go to the component holding the
/// smallest node index.
pub fn giant_component_nodes(a: &SparseAdjacency) -> Vec<usize> {
    connected_components(a)
        .into_iter()
        .fold(
            Vec::new(),
            |best, c| if c.len() > best.len() { c } else { best },
        )
}

/// Induced subgraph on the largest (weakly) connected component.
pub fn giant_component(a: &SparseAdjacency) -> Result<SparseAdjacency> {
    a.induced_subgraph(&giant_component_nodes(a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tie_goes_to_smallest_index() {
        // Triangle {1,2,3}, triangle {4,5,6}, isolated 0.
        let a = SparseAdjacency::from_edges(
            7,
            &[(4, 5), (5, 6), (6, 4), (1, 2), (2, 3), (3, 1)],
            false,
        )
        .unwrap();
        assert_eq!(giant_component_nodes(&a), vec![1, 2, 3]);
        assert_eq!(giant_component(&a).unwrap().edge_count(), 3);
    }

    #[test]
    fn connected_graph_is_returned_unchanged() {
        let a = SparseAdjacency::from_edges(4, &[(0, 1), (1, 2), (2, 3)], false).unwrap();
        assert_eq!(giant_component(&a).unwrap(), a);
    }

    #[test]
    fn larger_component_wins() {
        let a = SparseAdjacency::from_edges(5, &[(0, 1), (1, 2), (3, 4)], false).unwrap();
        assert_eq!(giant_component_nodes(&a), vec![0, 1, 2]);
    }

    #[test]
    fn directed_uses_weak_connectivity() {
        let a = SparseAdjacency::from_edges(4, &[(1, 0), (2, 0), (3, 2)], true).unwrap();
        assert_eq!(giant_component_nodes(&a), vec![0, 1, 2, 3]);
    }
}
