//! Undirected simple graphs with dense integer labels, plus the search
//! primitives everything else is built on: spheres, balls, shortest cycles
//! and set-to-set shortest paths, all deterministic.

use crate::error::{input_err, Result};
use crate::rational::Rational;
use serde::{Deserialize, Serialize};

/// Undirected simple graph on vertices `0..n`. Immutable after construction;
/// adjacency lists are sorted so every traversal order is reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    m: usize,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges are collapsed;
    /// self-loops and out-of-range labels are rejected.
    pub fn new(n: usize, edge_list: &[(usize, usize)]) -> Result<Graph> {
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(edge_list.len());
        for &(u, v) in edge_list {
            if u >= n || v >= n {
                return input_err(format!(
                    "edge ({u}, {v}) references a vertex out of range for n={n}"
                ));
            }
            if u == v {
                return input_err(format!("self-loop at vertex {u}"));
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        edges.dedup();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph {
            n,
            m: edges.len(),
            adj,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as (u, v) with u < v, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Average, minimum and maximum degree. The average is exact.
    pub fn degree_stats(&self) -> Result<(Rational, usize, usize)> {
        if self.n == 0 {
            return input_err("degree stats of the empty graph");
        }
        let avg = Rational::average_degree(self.m, self.n);
        let min = (0..self.n).map(|v| self.degree(v)).min().unwrap();
        let max = (0..self.n).map(|v| self.degree(v)).max().unwrap();
        Ok((avg, min, max))
    }

    pub fn average_degree(&self) -> Rational {
        Rational::average_degree(self.m, self.n)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Induced subgraph on `vertices` (original labels). The returned
    /// subgraph carries the new-to-original label map so results can be
    /// reported in the input graph's labelling.
    pub fn induced(&self, vertices: &VertexSet) -> Subgraph {
        let to_original: Vec<usize> = vertices.iter().collect();
        let mut to_new = vec![usize::MAX; self.n];
        for (new, &old) in to_original.iter().enumerate() {
            to_new[old] = new;
        }
        let mut adj = vec![Vec::new(); to_original.len()];
        let mut m = 0;
        for (new, &old) in to_original.iter().enumerate() {
            for &w in &self.adj[old] {
                let nw = to_new[w];
                if nw != usize::MAX {
                    adj[new].push(nw);
                    if new < nw {
                        m += 1;
                    }
                }
            }
        }
        // Neighbor order is preserved by the monotone relabelling.
        Subgraph {
            graph: Graph {
                n: to_original.len(),
                m,
                adj,
            },
            to_original,
        }
    }

    /// Multi-source BFS distances in G - avoid. `usize::MAX` marks
    /// unreachable or avoided vertices. Sources must not be avoided.
    pub(crate) fn bfs_distances(&self, sources: &[usize], avoid: &[bool]) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = std::collections::VecDeque::new();
        for &s in sources {
            debug_assert!(!avoid[s], "BFS source {s} is in the avoid set");
            if dist[s] == usize::MAX {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if !avoid[y] && dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub(crate) fn mask(&self, set: &VertexSet) -> Vec<bool> {
        let mut mask = vec![false; self.n];
        for v in set.iter() {
            mask[v] = true;
        }
        mask
    }

    /// N^i(X) in G - avoid: vertices at distance exactly `i` from X.
    pub fn sphere(&self, x: &VertexSet, i: usize, avoid: &VertexSet) -> VertexSet {
        let avoid_mask = self.mask(avoid);
        let sources: Vec<usize> = x.iter().collect();
        for &s in &sources {
            assert!(!avoid_mask[s], "sphere source overlaps avoid set");
        }
        let dist = self.bfs_distances(&sources, &avoid_mask);
        VertexSet::from_sorted((0..self.n).filter(|&v| dist[v] == i).collect())
    }

    /// B^i(X) in G - avoid: vertices at distance at most `i` from X.
    pub fn ball(&self, x: &VertexSet, i: usize, avoid: &VertexSet) -> VertexSet {
        let avoid_mask = self.mask(avoid);
        let sources: Vec<usize> = x.iter().collect();
        for &s in &sources {
            assert!(!avoid_mask[s], "ball source overlaps avoid set");
        }
        let dist = self.bfs_distances(&sources, &avoid_mask);
        VertexSet::from_sorted((0..self.n).filter(|&v| dist[v] <= i).collect())
    }

    /// Girth of the graph, or None for a forest.
    pub fn girth(&self) -> Option<usize> {
        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        let mut touched: Vec<usize> = Vec::new();
        for root in 0..self.n {
            for &v in &touched {
                dist[v] = usize::MAX;
                parent[v] = usize::MAX;
            }
            touched.clear();
            dist[root] = 0;
            touched.push(root);
            let mut queue = std::collections::VecDeque::new();
            queue.push_back(root);
            while let Some(x) = queue.pop_front() {
                if best != usize::MAX && 2 * dist[x] >= best {
                    continue;
                }
                for &y in &self.adj[x] {
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        parent[y] = x;
                        touched.push(y);
                        queue.push_back(y);
                    } else if parent[x] != y && parent[y] != x {
                        // Non-tree edge: the closed walk root..x, xy, y..root
                        // contains a cycle no shorter than the girth.
                        let cand = dist[x] + dist[y] + 1;
                        if cand < best {
                            best = cand;
                        }
                    }
                }
            }
        }
        if best == usize::MAX {
            None
        } else {
            Some(best)
        }
    }

    /// A shortest cycle, with ties broken by lexicographically smallest
    /// canonical vertex sequence. None if the graph is a forest.
    pub fn shortest_cycle(&self) -> Option<Cycle> {
        let g = self.girth()?;
        let mut best: Option<Vec<usize>> = None;
        // Enumerate every cycle of length exactly g, rooted at its smallest
        // vertex, and keep the lexicographically least canonical form.
        for root in 0..self.n {
            self.girth_cycles_from_root(root, g, &mut best);
        }
        best.map(Cycle::from_canonical)
    }

    fn girth_cycles_from_root(&self, root: usize, g: usize, best: &mut Option<Vec<usize>>) {
        // Distances from root using only vertices >= root, for pruning.
        let avoid: Vec<bool> = (0..self.n).map(|v| v < root).collect();
        if avoid[root] {
            return;
        }
        let dist = self.bfs_distances(&[root], &avoid);
        let mut on_path = vec![false; self.n];
        let mut path = vec![root];
        on_path[root] = true;
        self.girth_dfs(root, g, &dist, &mut path, &mut on_path, best);
    }

    fn girth_dfs(
        &self,
        root: usize,
        g: usize,
        dist: &[usize],
        path: &mut Vec<usize>,
        on_path: &mut Vec<bool>,
        best: &mut Option<Vec<usize>>,
    ) {
        let last = *path.last().unwrap();
        if path.len() == g {
            if self.has_edge(last, root) {
                let canon = canonical_cycle(path);
                if best.as_ref().map_or(true, |b| canon < *b) {
                    *best = Some(canon);
                }
            }
            return;
        }
        for &w in &self.adj[last] {
            if w <= root || on_path[w] {
                continue;
            }
            // w would sit at position path.len(); the return trip around the
            // cycle to the root needs g - path.len() steps, so w must be that
            // close to the root or a length-g closure is impossible.
            if dist[w] == usize::MAX || dist[w] + path.len() > g {
                continue;
            }
            path.push(w);
            on_path[w] = true;
            self.girth_dfs(root, g, dist, path, on_path, best);
            on_path[w] = false;
            path.pop();
        }
    }

    /// Shortest path in G - avoid from some vertex of `x1` to some vertex of
    /// `x2`. Ties broken by lexicographically smallest vertex sequence. If
    /// the sets intersect, the result is a zero-length path.
    pub fn shortest_path_between_sets(
        &self,
        x1: &VertexSet,
        x2: &VertexSet,
        avoid: &VertexSet,
    ) -> Option<Path> {
        assert!(!x1.is_empty() && !x2.is_empty(), "endpoint sets are empty");
        let avoid_mask = self.mask(avoid);
        self.shortest_path_masked(x1, x2, &avoid_mask)
    }

    pub(crate) fn shortest_path_masked(
        &self,
        x1: &VertexSet,
        x2: &VertexSet,
        avoid_mask: &[bool],
    ) -> Option<Path> {
        let targets: Vec<usize> = x2.iter().collect();
        for &t in &targets {
            assert!(!avoid_mask[t], "target endpoint {t} is in the avoid set");
        }
        let back = self.bfs_distances(&targets, avoid_mask);
        let mut start = usize::MAX;
        let mut len = usize::MAX;
        for v in x1.iter() {
            assert!(!avoid_mask[v], "source endpoint {v} is in the avoid set");
            if back[v] < len {
                len = back[v];
                start = v;
            }
        }
        if len == usize::MAX {
            return None;
        }
        let mut vertices = vec![start];
        let mut cur = start;
        while back[cur] > 0 {
            let next = self.adj[cur]
                .iter()
                .copied()
                .find(|&w| !avoid_mask[w] && back[w] + 1 == back[cur])
                .expect("BFS layer structure broken");
            vertices.push(next);
            cur = next;
        }
        Some(Path::from_unchecked(vertices))
    }

    /// Connected component of `start` in G - avoid, in BFS discovery order
    /// (deterministic: sorted adjacency), with the start's eccentricity.
    pub(crate) fn component_bfs_order(
        &self,
        start: usize,
        avoid: &[bool],
    ) -> (Vec<usize>, usize) {
        let dist = self.bfs_distances(&[start], avoid);
        let mut order: Vec<(usize, usize)> = Vec::new();
        let mut radius = 0;
        // Order by (distance, label): every prefix contains each member's
        // BFS parent, so prefixes induce connected subgraphs.
        for v in 0..self.n {
            if dist[v] != usize::MAX {
                radius = radius.max(dist[v]);
                order.push((dist[v], v));
            }
        }
        order.sort_unstable();
        (order.into_iter().map(|(_, v)| v).collect(), radius)
    }
}

/// Sorted set of vertex labels of some ambient graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct VertexSet {
    members: Vec<usize>,
}

impl VertexSet {
    pub fn new(mut members: Vec<usize>) -> VertexSet {
        members.sort_unstable();
        members.dedup();
        VertexSet { members }
    }

    pub(crate) fn from_sorted(members: Vec<usize>) -> VertexSet {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        VertexSet { members }
    }

    pub fn empty() -> VertexSet {
        VertexSet {
            members: Vec::new(),
        }
    }

    pub fn singleton(v: usize) -> VertexSet {
        VertexSet { members: vec![v] }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.members
    }

    pub fn insert(&mut self, v: usize) {
        if let Err(pos) = self.members.binary_search(&v) {
            self.members.insert(pos, v);
        }
    }

    pub fn remove(&mut self, v: usize) {
        if let Ok(pos) = self.members.binary_search(&v) {
            self.members.remove(pos);
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.members.clone();
        out.extend(other.iter());
        VertexSet::new(out)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet::from_sorted(
            self.members
                .iter()
                .copied()
                .filter(|&v| !other.contains(v))
                .collect(),
        )
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet::from_sorted(
            self.members
                .iter()
                .copied()
                .filter(|&v| other.contains(v))
                .collect(),
        )
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.members.iter().all(|&v| !other.contains(v))
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.members.iter().all(|&v| other.contains(v))
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> VertexSet {
        VertexSet::new(iter.into_iter().collect())
    }
}

/// Path v0..vl: distinct vertices, consecutive ones adjacent in the ambient
/// graph. Length is the edge count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Path {
    vertices: Vec<usize>,
}

impl Path {
    pub fn new(g: &Graph, vertices: Vec<usize>) -> Result<Path> {
        if vertices.is_empty() {
            return input_err("empty path");
        }
        let mut seen = VertexSet::empty();
        for &v in &vertices {
            if v >= g.vertex_count() {
                return input_err(format!("path vertex {v} out of range"));
            }
            if seen.contains(v) {
                return input_err(format!("repeated path vertex {v}"));
            }
            seen.insert(v);
        }
        for w in vertices.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                return input_err(format!("path step {}-{} is not an edge", w[0], w[1]));
            }
        }
        Ok(Path { vertices })
    }

    pub(crate) fn from_unchecked(vertices: Vec<usize>) -> Path {
        Path { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn first(&self) -> usize {
        self.vertices[0]
    }

    pub fn last(&self) -> usize {
        *self.vertices.last().unwrap()
    }

    pub fn reversed(&self) -> Path {
        let mut v = self.vertices.clone();
        v.reverse();
        Path { vertices: v }
    }

    pub fn interior(&self) -> &[usize] {
        if self.vertices.len() <= 2 {
            &[]
        } else {
            &self.vertices[1..self.vertices.len() - 1]
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    pub fn is_valid_in(&self, g: &Graph) -> bool {
        Path::new(g, self.vertices.clone()).is_ok()
    }
}

/// Rotates/reflects a cyclic sequence into canonical form: starts at the
/// minimum vertex, and of the two directions takes the smaller second
/// element. Canonicalization is rotation- and reflection-invariant.
pub(crate) fn canonical_cycle(vertices: &[usize]) -> Vec<usize> {
    let k = vertices.len();
    let min_pos = (0..k)
        .min_by_key(|&i| vertices[i])
        .expect("empty cycle sequence");
    let forward: Vec<usize> = (0..k).map(|i| vertices[(min_pos + i) % k]).collect();
    let backward: Vec<usize> = (0..k).map(|i| vertices[(min_pos + k - i) % k]).collect();
    if forward[1] <= backward[1] {
        forward
    } else {
        backward
    }
}

/// Cycle stored in canonical form (k >= 3, distinct vertices, cyclically
/// consecutive vertices adjacent).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cycle {
    vertices: Vec<usize>,
}

impl Cycle {
    pub fn new(g: &Graph, vertices: Vec<usize>) -> Result<Cycle> {
        if vertices.len() < 3 {
            return input_err("cycle needs at least 3 vertices");
        }
        let mut seen = VertexSet::empty();
        for &v in &vertices {
            if v >= g.vertex_count() {
                return input_err(format!("cycle vertex {v} out of range"));
            }
            if seen.contains(v) {
                return input_err(format!("repeated cycle vertex {v}"));
            }
            seen.insert(v);
        }
        let k = vertices.len();
        for i in 0..k {
            let (u, v) = (vertices[i], vertices[(i + 1) % k]);
            if !g.has_edge(u, v) {
                return input_err(format!("cycle step {u}-{v} is not an edge"));
            }
        }
        Ok(Cycle {
            vertices: canonical_cycle(&vertices),
        })
    }

    pub(crate) fn from_canonical(vertices: Vec<usize>) -> Cycle {
        Cycle { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::new(self.vertices.clone())
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    /// Edges of the cycle as sorted (u, v) pairs with u < v.
    pub fn edge_set(&self) -> Vec<(usize, usize)> {
        let k = self.vertices.len();
        let mut edges: Vec<(usize, usize)> = (0..k)
            .map(|i| {
                let (a, b) = (self.vertices[i], self.vertices[(i + 1) % k]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        edges
    }

    /// Distance between two member vertices measured along the cycle.
    pub fn cycle_distance(&self, u: usize, v: usize) -> usize {
        let k = self.vertices.len();
        let pu = self.vertices.iter().position(|&x| x == u).unwrap();
        let pv = self.vertices.iter().position(|&x| x == v).unwrap();
        let d = pu.abs_diff(pv);
        d.min(k - d)
    }
}

/// Induced subgraph together with the new-to-original label map.
#[derive(Debug, Clone)]
pub struct Subgraph {
    pub graph: Graph,
    pub to_original: Vec<usize>,
}

impl Subgraph {
    pub fn map_vertex(&self, v: usize) -> usize {
        self.to_original[v]
    }

    pub fn map_vertices(&self, vs: &[usize]) -> Vec<usize> {
        vs.iter().map(|&v| self.to_original[v]).collect()
    }
}
