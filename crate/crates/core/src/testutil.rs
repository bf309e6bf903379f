//! Shared graph builders for unit tests.

use crate::graph::Graph;

pub(crate) fn complete_graph(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::new(n, &edges).unwrap()
}

pub(crate) fn cycle_graph(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::new(n, &edges).unwrap()
}

pub(crate) fn path_graph(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    Graph::new(n, &edges).unwrap()
}

pub(crate) fn star_graph(leaves: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (1..=leaves).map(|v| (0, v)).collect();
    Graph::new(leaves + 1, &edges).unwrap()
}

/// Two disjoint cliques of size `s` joined by the single edge (0, s).
pub(crate) fn two_cliques_bridged(s: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..s {
        for v in u + 1..s {
            edges.push((u, v));
            edges.push((s + u, s + v));
        }
    }
    edges.push((0, s));
    Graph::new(2 * s, &edges).unwrap()
}
