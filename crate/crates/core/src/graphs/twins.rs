use std::collections::{BTreeMap, BTreeSet};

use super::graph::Graph;
use super::linegraph::{line_graph_root, LineGraphRoot};

/// Twin partition: vertices with equal open neighbourhoods (non-adjacent
/// twins) are grouped first; the remaining singletons are then grouped by
/// closed neighbourhood (adjacent twins). Classes are sorted by least member.
pub fn twin_classes(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut by_open: BTreeMap<&BTreeSet<usize>, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        by_open.entry(g.neighbors(v)).or_default().push(v);
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut singles = Vec::new();
    for (_, vs) in by_open {
        if vs.len() > 1 {
            classes.push(vs);
        } else {
            singles.push(vs[0]);
        }
    }
    let mut by_closed: BTreeMap<BTreeSet<usize>, Vec<usize>> = BTreeMap::new();
    for v in singles {
        let mut closed = g.neighbors(v).clone();
        closed.insert(v);
        by_closed.entry(closed).or_default().push(v);
    }
    classes.extend(by_closed.into_values());
    for c in &mut classes {
        c.sort_unstable();
    }
    classes.sort();
    classes
}

/// Classes of vertices with identical open neighbourhoods only.
pub fn false_twin_classes(g: &Graph) -> Vec<Vec<usize>> {
    let mut by_open: BTreeMap<&BTreeSet<usize>, Vec<usize>> = BTreeMap::new();
    for v in 0..g.vertex_count() {
        by_open.entry(g.neighbors(v)).or_default().push(v);
    }
    let mut classes: Vec<Vec<usize>> = by_open.into_values().collect();
    classes.sort();
    classes
}

/// Quotient by a vertex partition: one vertex per class, adjacent when any
/// members of distinct classes are adjacent.
pub fn quotient(g: &Graph, classes: &[Vec<usize>]) -> Graph {
    let mut class_of = vec![0; g.vertex_count()];
    for (i, c) in classes.iter().enumerate() {
        for &v in c {
            class_of[v] = i;
        }
    }
    let mut q = Graph::with_labels(
        classes
            .iter()
            .map(|c| c.iter().map(|&v| g.label(v)).collect::<Vec<_>>().join("|"))
            .collect(),
    );
    for (u, v) in g.edges() {
        let (a, b) = (class_of[u], class_of[v]);
        if a != b {
            q.add_edge(a, b).expect("distinct classes");
        }
    }
    q
}

/// Root of `g`, of its non-adjacent-twin quotient, or of its full twin
/// quotient, whichever is found first.
pub fn line_graph_root_up_to_twins(g: &Graph) -> Option<(Vec<Vec<usize>>, LineGraphRoot)> {
    if let Some(r) = line_graph_root(g) {
        return Some(((0..g.vertex_count()).map(|v| vec![v]).collect(), r));
    }
    for classes in [false_twin_classes(g), twin_classes(g)] {
        if classes.len() == g.vertex_count() {
            continue;
        }
        if let Some(r) = line_graph_root(&quotient(g, &classes)) {
            return Some((classes, r));
        }
    }
    None
}

pub fn is_line_graph_up_to_twins(g: &Graph) -> bool {
    line_graph_root_up_to_twins(g).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(twin_classes(&Graph::new(4)), vec![vec![0, 1, 2, 3]]);
        assert_eq!(twin_classes(&Graph::complete(4)), vec![vec![0, 1, 2, 3]]);
        assert_eq!(twin_classes(&Graph::path(3)), vec![vec![0, 2], vec![1]]);
    }

    #[test]
    fn claw_is_line_graph_up_to_twins() {
        let claw = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(is_line_graph_up_to_twins(&claw));
    }
}
