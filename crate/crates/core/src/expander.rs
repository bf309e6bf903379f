//! Sublinear-expansion toolkit: the expansion rate, expansion witness
//! checks, one-sided violator search, expander-subgraph extraction, thin
//! sets, robust ball growth past thin sets, short linking, and large-ball
//! finding under deletions.

use crate::error::{input_err, Result};
use crate::graph::{Graph, Path, Subgraph, VertexSet};
use crate::rational::Rational;
use serde::{Deserialize, Serialize};

/// Absolute tolerance for all real comparisons in this crate.
pub const TOL: f64 = 1e-12;

/// Subsets up to this vertex count are enumerated exhaustively when
/// searching for expansion violators.
pub const DEFAULT_EXHAUSTIVE_THRESHOLD: usize = 18;

/// Default node-visit budget for the violator search.
pub const DEFAULT_SEARCH_BUDGET: usize = 200_000;

/// Parameters of the sublinear expansion rate. The conventional coupling is
/// k = eps1 * d for a graph of degree around d.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpanderParams {
    pub eps1: f64,
    pub k: f64,
}

impl ExpanderParams {
    pub fn new(eps1: f64, k: f64) -> Result<ExpanderParams> {
        if !(eps1 > 0.0 && eps1 < 1.0) {
            return input_err(format!("eps1 must be in (0, 1), got {eps1}"));
        }
        if !(k > 0.0) {
            return input_err(format!("k must be positive, got {k}"));
        }
        Ok(ExpanderParams { eps1, k })
    }

    /// Instantiates k = eps1 * d from a degree scale d.
    pub fn with_degree(eps1: f64, d: f64) -> Result<ExpanderParams> {
        ExpanderParams::new(eps1, (eps1 * d).max(1.0))
    }
}

/// Expansion rate: 0 below k/5, otherwise eps1 / ln^2(15x/k).
pub fn epsilon(x: f64, p: &ExpanderParams) -> f64 {
    assert!(x >= 0.0, "epsilon of negative size");
    if x < p.k / 5.0 {
        0.0
    } else {
        p.eps1 / (15.0 * x / p.k).ln().powi(2)
    }
}

/// Outcome of a single expansion witness check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ExpansionVerdict {
    Pass {
        boundary: usize,
        required: f64,
    },
    Fail {
        boundary: usize,
        required: f64,
    },
    NotApplicable {
        reason: String,
    },
}

impl ExpansionVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, ExpansionVerdict::Pass { .. })
    }

    pub fn failed(&self) -> bool {
        matches!(self, ExpansionVerdict::Fail { .. })
    }
}

/// Checks |N_{G\F}(X)| >= eps(|X|)|X| for one witness pair (X, F).
/// Out-of-range |X| or an oversized F is "not applicable", not a failure.
pub fn expansion_witness_check(
    g: &Graph,
    p: &ExpanderParams,
    x: &VertexSet,
    f_edges: &[(usize, usize)],
) -> Result<ExpansionVerdict> {
    let mut removed: Vec<(usize, usize)> = Vec::with_capacity(f_edges.len());
    for &(a, b) in f_edges {
        if !g.has_edge(a, b) {
            return input_err(format!("edge ({a}, {b}) of F is not an edge of G"));
        }
        removed.push((a.min(b), a.max(b)));
    }
    removed.sort_unstable();
    removed.dedup();

    let size = x.len() as f64;
    if size + TOL < p.k / 2.0 || size > g.vertex_count() as f64 / 2.0 + TOL {
        return Ok(ExpansionVerdict::NotApplicable {
            reason: format!(
                "|X|={} outside [k/2, n/2] = [{}, {}]",
                x.len(),
                p.k / 2.0,
                g.vertex_count() as f64 / 2.0
            ),
        });
    }
    let eps = epsilon(size, p);
    let d = g.average_degree().to_f64();
    if removed.len() as f64 > d * eps * size + TOL {
        return Ok(ExpansionVerdict::NotApplicable {
            reason: format!(
                "e(F)={} exceeds the allowance d(G)*eps(|X|)*|X| = {}",
                removed.len(),
                d * eps * size
            ),
        });
    }

    let in_x = g.mask(x);
    let mut boundary = 0usize;
    let mut counted = vec![false; g.vertex_count()];
    for u in x.iter() {
        for &v in g.neighbors(u) {
            if in_x[v] || counted[v] {
                continue;
            }
            let key = (u.min(v), u.max(v));
            if removed.binary_search(&key).is_ok() {
                continue;
            }
            counted[v] = true;
            boundary += 1;
        }
    }
    let required = eps * size;
    if (boundary as f64) + TOL >= required {
        Ok(ExpansionVerdict::Pass { boundary, required })
    } else {
        Ok(ExpansionVerdict::Fail { boundary, required })
    }
}

struct ViolatorScan<'a> {
    g: &'a Graph,
    p: ExpanderParams,
    budget: usize,
    best: Option<VertexSet>,
}

impl<'a> ViolatorScan<'a> {
    fn spend(&mut self, cost: usize) -> bool {
        if self.budget < cost {
            self.budget = 0;
            false
        } else {
            self.budget -= cost;
            true
        }
    }

    fn in_range(&self, size: usize) -> bool {
        let s = size as f64;
        s + TOL >= self.p.k / 2.0 && s <= self.g.vertex_count() as f64 / 2.0 + TOL
    }

    /// Candidate with known boundary size; records it when it violates.
    fn offer(&mut self, members: impl FnOnce() -> Vec<usize>, size: usize, boundary: usize) {
        if !self.in_range(size) {
            return;
        }
        let required = epsilon(size as f64, &self.p) * size as f64;
        if (boundary as f64) + TOL >= required {
            return;
        }
        let set = VertexSet::new(members());
        debug_assert_eq!(set.len(), size);
        if self.best.as_ref().map_or(true, |b| set < *b) {
            self.best = Some(set);
        }
    }

    /// BFS balls around every vertex at every radius. The boundary of the
    /// radius-r ball is the sphere at r+1, so one BFS serves all radii.
    fn scan_balls(&mut self) {
        let n = self.g.vertex_count();
        let no_avoid = vec![false; n];
        for root in 0..n {
            if self.budget == 0 {
                return;
            }
            let dist = self.g.bfs_distances(&[root], &no_avoid);
            let reach: usize = dist.iter().filter(|&&d| d != usize::MAX).count();
            if !self.spend(reach) {
                return;
            }
            let max_d = dist
                .iter()
                .filter(|&&d| d != usize::MAX)
                .max()
                .copied()
                .unwrap_or(0);
            let mut layer_sizes = vec![0usize; max_d + 1];
            for &d in dist.iter().filter(|&&d| d != usize::MAX) {
                layer_sizes[d] += 1;
            }
            let mut ball = 0usize;
            for r in 0..=max_d {
                ball += layer_sizes[r];
                let boundary = if r + 1 <= max_d { layer_sizes[r + 1] } else { 0 };
                let members = || {
                    (0..n)
                        .filter(|&v| dist[v] != usize::MAX && dist[v] <= r)
                        .collect()
                };
                self.offer(members, ball, boundary);
            }
        }
    }

    /// Prefixes of the iterative min-degree peeling order.
    fn scan_peeling_prefixes(&mut self) {
        let n = self.g.vertex_count();
        if !self.spend(n) {
            return;
        }
        let mut deg: Vec<usize> = (0..n).map(|v| self.g.degree(v)).collect();
        let mut removed = vec![false; n];
        let mut queue: std::collections::BTreeSet<(usize, usize)> =
            (0..n).map(|v| (deg[v], v)).collect();
        let mut prefix: Vec<usize> = Vec::new();
        let mut on_boundary = vec![false; n];
        let mut boundary = 0usize;
        while prefix.len() + 1 < n {
            let &(_, v) = queue.iter().next().unwrap();
            queue.remove(&(deg[v], v));
            removed[v] = true;
            prefix.push(v);
            if on_boundary[v] {
                on_boundary[v] = false;
                boundary -= 1;
            }
            for &w in self.g.neighbors(v) {
                if removed[w] {
                    continue;
                }
                queue.remove(&(deg[w], w));
                deg[w] -= 1;
                queue.insert((deg[w], w));
                if !on_boundary[w] {
                    on_boundary[w] = true;
                    boundary += 1;
                }
            }
            let members = || prefix.clone();
            self.offer(members, prefix.len(), boundary);
            if self.budget == 0 {
                return;
            }
        }
    }

    /// Exhaustive subset scan for tiny graphs.
    fn scan_exhaustive(&mut self) {
        let n = self.g.vertex_count();
        for mask in 1u32..(1u32 << n) {
            let size = mask.count_ones() as usize;
            if !self.in_range(size) {
                continue;
            }
            if !self.spend(size) {
                return;
            }
            let mut boundary = 0usize;
            for v in 0..n {
                if mask & (1 << v) != 0 {
                    continue;
                }
                if self
                    .g
                    .neighbors(v)
                    .iter()
                    .any(|&u| mask & (1 << u) != 0)
                {
                    boundary += 1;
                }
            }
            let members = || (0..n).filter(|&v| mask & (1 << v) != 0).collect();
            self.offer(members, size, boundary);
        }
    }
}

/// One-sided refutation search with F = 0: a returned set provably fails the
/// expansion witness check; absence proves nothing. Candidates are BFS balls
/// around every vertex, min-degree peeling prefixes, and (for tiny graphs)
/// all subsets. The lexicographically least violator found wins.
pub fn find_violating_set(g: &Graph, p: &ExpanderParams, budget: usize) -> Option<VertexSet> {
    find_violating_set_with_threshold(g, p, budget, DEFAULT_EXHAUSTIVE_THRESHOLD)
}

pub fn find_violating_set_with_threshold(
    g: &Graph,
    p: &ExpanderParams,
    budget: usize,
    exhaustive_threshold: usize,
) -> Option<VertexSet> {
    let mut scan = ViolatorScan {
        g,
        p: *p,
        budget,
        best: None,
    };
    scan.scan_balls();
    scan.scan_peeling_prefixes();
    if g.vertex_count() <= exhaustive_threshold.min(25) {
        scan.scan_exhaustive();
    }
    scan.best
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtractionReport {
    pub iterations: usize,
    pub peeled_total: usize,
    pub splits: usize,
    pub heuristically_expanding: bool,
    pub d_input: Rational,
    pub d_output: Rational,
    pub min_degree_output: usize,
    pub trace: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtractionFailure {
    pub trace: Vec<String>,
}

/// Peels the current vertex set down to minimum degree >= half its average
/// degree. Removing a vertex of degree < d/2 strictly increases the average
/// degree, so peeling never lowers it and never empties a graph with edges.
fn peel_to_half_average(g: &Graph, current: &mut Vec<bool>) -> usize {
    let n_total = g.vertex_count();
    let mut deg = vec![0usize; n_total];
    let mut n_cur = 0usize;
    let mut m2 = 0usize; // twice the edge count
    for v in 0..n_total {
        if !current[v] {
            continue;
        }
        n_cur += 1;
        deg[v] = g.neighbors(v).iter().filter(|&&w| current[w]).count();
        m2 += deg[v];
    }
    let mut m_cur = m2 / 2;
    let mut queue: std::collections::BTreeSet<(usize, usize)> = (0..n_total)
        .filter(|&v| current[v])
        .map(|v| (deg[v], v))
        .collect();
    let mut peeled = 0usize;
    // delta < d/2  <=>  delta * n < m, exactly in integers.
    while let Some(&(dmin, v)) = queue.iter().next() {
        if n_cur == 0 || dmin.saturating_mul(n_cur) >= m_cur {
            break;
        }
        queue.remove(&(dmin, v));
        current[v] = false;
        n_cur -= 1;
        m_cur -= deg[v];
        for &w in g.neighbors(v) {
            if current[w] {
                queue.remove(&(deg[w], w));
                deg[w] -= 1;
                queue.insert((deg[w], w));
            }
        }
        deg[v] = 0;
        peeled += 1;
    }
    peeled
}

/// Extracts a subgraph H with d(H) >= d(G)/2 and min degree >= d(H)/2, both
/// asserted exactly, alternating min-degree peeling with violator splits
/// until the violator search comes up empty.
pub fn extract_expander_subgraph(
    g: &Graph,
    p: &ExpanderParams,
    budget: usize,
) -> std::result::Result<(Subgraph, ExtractionReport), ExtractionFailure> {
    if g.edge_count() == 0 {
        return Err(ExtractionFailure {
            trace: vec!["input graph has no edges".into()],
        });
    }
    let d_input = g.average_degree();
    let floor = d_input.halved();
    let mut current = vec![true; g.vertex_count()];
    let mut trace = Vec::new();
    let mut iterations = 0usize;
    let mut peeled_total = 0usize;
    let mut splits = 0usize;

    loop {
        iterations += 1;
        let peeled = peel_to_half_average(g, &mut current);
        peeled_total += peeled;
        if peeled > 0 {
            trace.push(format!("iteration {iterations}: peeled {peeled} vertices"));
        }
        let members: Vec<usize> = (0..g.vertex_count()).filter(|&v| current[v]).collect();
        if members.is_empty() {
            trace.push("peeling exhausted the graph".into());
            return Err(ExtractionFailure { trace });
        }
        let sub = g.induced(&VertexSet::from_sorted(members));
        if sub.graph.edge_count() == 0 {
            trace.push("current subgraph has no edges".into());
            return Err(ExtractionFailure { trace });
        }
        match find_violating_set(&sub.graph, p, budget) {
            None => {
                let d_output = sub.graph.average_degree();
                let min_degree_output = sub.graph.min_degree();
                // Exact checks of the extraction contract.
                if d_output < floor {
                    trace.push(format!(
                        "average degree floor violated: d(H)={d_output} < d(G)/2={floor}"
                    ));
                    return Err(ExtractionFailure { trace });
                }
                if min_degree_output * sub.graph.vertex_count() < sub.graph.edge_count() {
                    trace.push(format!(
                        "min degree {} below d(H)/2 = {}",
                        min_degree_output,
                        d_output.halved()
                    ));
                    return Err(ExtractionFailure { trace });
                }
                trace.push(format!(
                    "fixpoint: no violator found; |H|={}, d(H)={}, delta(H)={}",
                    sub.graph.vertex_count(),
                    d_output,
                    min_degree_output
                ));
                let report = ExtractionReport {
                    iterations,
                    peeled_total,
                    splits,
                    heuristically_expanding: true,
                    d_input,
                    d_output,
                    min_degree_output,
                    trace,
                };
                return Ok((sub, report));
            }
            Some(x) => {
                splits += 1;
                let x_orig: VertexSet = x.iter().map(|v| sub.map_vertex(v)).collect();
                let x_mask = sub.graph.mask(&x);
                let mut with_hull: Vec<usize> = x.iter().map(|v| sub.map_vertex(v)).collect();
                for v in 0..sub.graph.vertex_count() {
                    if !x_mask[v]
                        && sub.graph.neighbors(v).iter().any(|&u| x_mask[u])
                    {
                        with_hull.push(sub.map_vertex(v));
                    }
                }
                let side_hull = VertexSet::new(with_hull);
                let side_rest: VertexSet = (0..g.vertex_count())
                    .filter(|&v| current[v] && !x_orig.contains(v))
                    .collect();
                let sub_hull = g.induced(&side_hull);
                let sub_rest = g.induced(&side_rest);
                let d_hull = sub_hull.graph.average_degree();
                let d_rest = sub_rest.graph.average_degree();
                let keep = if d_hull > d_rest {
                    &side_hull
                } else if d_rest > d_hull {
                    &side_rest
                } else if side_hull <= side_rest {
                    &side_hull
                } else {
                    &side_rest
                };
                trace.push(format!(
                    "iteration {iterations}: violator of size {} split; kept side of {} vertices (d={})",
                    x.len(),
                    keep.len(),
                    if keep == &side_hull { d_hull } else { d_rest },
                ));
                current = vec![false; g.vertex_count()];
                for v in keep.iter() {
                    current[v] = true;
                }
            }
        }
    }
}

/// Thinness parameters: the set must touch the i-th expanding sphere in at
/// most lambda * i^power vertices, checked for radii up to the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThinnessParams {
    pub lambda: f64,
    pub power: u32,
    pub horizon: usize,
}

impl ThinnessParams {
    pub fn new(lambda: f64, power: u32, horizon: usize) -> Result<ThinnessParams> {
        if horizon < 1 {
            return input_err("thinness horizon must be at least 1");
        }
        if !(lambda > 0.0) {
            return input_err("thinness lambda must be positive");
        }
        Ok(ThinnessParams {
            lambda,
            power,
            horizon,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ThinnessVerdict {
    Pass,
    Fail {
        radius: usize,
        boundary_hits: usize,
        allowed: f64,
    },
}

impl ThinnessVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, ThinnessVerdict::Pass)
    }
}

/// Checks whether U is (lambda, power)-thin around A: the number of U-vertices
/// adjacent to the radius-(i-1) ball of A grown in G-U stays below
/// lambda * i^power for every radius i up to the horizon.
pub fn is_thin_around(
    g: &Graph,
    u: &VertexSet,
    a: &VertexSet,
    t: &ThinnessParams,
) -> Result<ThinnessVerdict> {
    if !u.is_disjoint(a) {
        return input_err("thin set overlaps the center set");
    }
    let hits = thinness_hit_counts(g, u, a, t.horizon);
    for (idx, &lhs) in hits.iter().enumerate() {
        let i = idx + 1;
        let allowed = t.lambda * (i as f64).powi(t.power as i32);
        if lhs as f64 > allowed + TOL {
            return Ok(ThinnessVerdict::Fail {
                radius: i,
                boundary_hits: lhs,
                allowed,
            });
        }
    }
    Ok(ThinnessVerdict::Pass)
}

/// hits[i-1] = |N_G(B^{i-1}_{G-U}(A)) intersect U| for i = 1..=horizon.
pub(crate) fn thinness_hit_counts(
    g: &Graph,
    u: &VertexSet,
    a: &VertexSet,
    horizon: usize,
) -> Vec<usize> {
    let u_mask = g.mask(u);
    let sources: Vec<usize> = a.iter().collect();
    let dist = g.bfs_distances(&sources, &u_mask);
    // First radius at which each U-vertex becomes adjacent to the ball.
    let mut first_hit: Vec<usize> = Vec::new();
    for v in u.iter() {
        let nearest = g
            .neighbors(v)
            .iter()
            .filter(|&&w| dist[w] != usize::MAX)
            .map(|&w| dist[w])
            .min();
        if let Some(d) = nearest {
            first_hit.push(d + 1);
        }
    }
    let mut hits = vec![0usize; horizon];
    for &h in &first_hit {
        if h <= horizon {
            hits[h - 1] += 1;
        }
    }
    // A vertex adjacent to the ball at radius i stays adjacent afterwards.
    for i in 1..horizon {
        hits[i] += hits[i - 1];
    }
    hits
}

/// Hypothesis and conclusion flags of a robust-growth run: recorded for
/// inspection, never enforced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthHypotheses {
    pub y_small: bool,
    pub w_thin_10_2: bool,
    pub r_within_log_n: bool,
    pub conclusion_exp_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthTrace {
    /// |Z_0|, |Z_1|, ..., recorded until radius r or saturation.
    pub sizes: Vec<usize>,
    /// boundary_hits[i-1] = |N_{G-Y}(Z_{i-1}) intersect W| for step i.
    pub boundary_hits: Vec<usize>,
    pub requested_radius: usize,
    pub hypotheses: GrowthHypotheses,
}

impl GrowthTrace {
    /// Whether the recorded contact counts satisfy (lambda, power)-thinness.
    pub fn hits_within(&self, lambda: f64, power: u32) -> bool {
        self.boundary_hits.iter().enumerate().all(|(idx, &h)| {
            h as f64 <= lambda * ((idx + 1) as f64).powi(power as i32) + TOL
        })
    }
}

/// Grows the ball of radius r around X in G - W - Y and records the full
/// per-step trace together with the hypothesis flags of the almost-
/// exponential growth bound. A measurement tool as much as a constructor.
pub fn grow_ball_robust(
    g: &Graph,
    x: &VertexSet,
    y: &VertexSet,
    w: &VertexSet,
    r: usize,
) -> (VertexSet, GrowthTrace) {
    assert!(!x.is_empty(), "growth needs a nonempty start set");
    assert!(x.is_disjoint(y) && x.is_disjoint(w), "start set overlaps deletions");
    let n = g.vertex_count();
    let mut blocked = g.mask(y);
    let w_mask = g.mask(w);
    let y_mask = blocked.clone();
    for v in 0..n {
        if w_mask[v] {
            blocked[v] = true;
        }
    }
    let sources: Vec<usize> = x.iter().collect();
    let dist = g.bfs_distances(&sources, &blocked);

    let max_reached = dist
        .iter()
        .filter(|&&d| d != usize::MAX)
        .max()
        .copied()
        .unwrap_or(0);
    let r_eff = r.min(max_reached);
    let mut layer = vec![0usize; max_reached + 1];
    for &d in dist.iter().filter(|&&d| d != usize::MAX) {
        layer[d] += 1;
    }
    let mut sizes = Vec::with_capacity(r_eff + 1);
    let mut acc = 0usize;
    for radius in 0..=r_eff {
        acc += layer[radius];
        sizes.push(acc);
    }

    // Contact with W per step: first radius at which each W-vertex (outside
    // Y) becomes adjacent to the growing ball, accumulated.
    let mut boundary_hits = vec![0usize; r_eff];
    for v in w.iter() {
        if y_mask[v] {
            continue;
        }
        let nearest = g
            .neighbors(v)
            .iter()
            .filter(|&&z| !y_mask[z] && dist[z] != usize::MAX)
            .map(|&z| dist[z])
            .min();
        if let Some(d) = nearest {
            if d + 1 <= r_eff {
                boundary_hits[d] += 1;
            }
        }
    }
    for i in 1..r_eff {
        boundary_hits[i] += boundary_hits[i - 1];
    }

    let ball: VertexSet = (0..n).filter(|&v| dist[v] <= r).collect();
    let size_x = x.len() as f64;
    let mut trace = GrowthTrace {
        sizes,
        boundary_hits,
        requested_radius: r,
        hypotheses: GrowthHypotheses {
            y_small: false,
            w_thin_10_2: false,
            r_within_log_n: (r as f64) <= (n.max(1) as f64).ln() + TOL,
            conclusion_exp_bound: ball.len() as f64 + TOL >= (r as f64).powf(0.25).exp(),
        },
    };
    trace.hypotheses.w_thin_10_2 = trace.hits_within(10.0, 2);
    // |Y| <= eps(|X|) |X| / 4, with the expansion rate left to the caller's
    // parameters; evaluated lazily by the wrapper below.
    trace.hypotheses.y_small = y.len() as f64 <= size_x / 4.0 + TOL;
    (ball, trace)
}

/// As `grow_ball_robust`, with the |Y| hypothesis evaluated against a
/// concrete expansion rate.
pub fn grow_ball_robust_with_params(
    g: &Graph,
    x: &VertexSet,
    y: &VertexSet,
    w: &VertexSet,
    r: usize,
    p: &ExpanderParams,
) -> (VertexSet, GrowthTrace) {
    let (ball, mut trace) = grow_ball_robust(g, x, y, w, r);
    let size_x = x.len() as f64;
    trace.hypotheses.y_small = (y.len() as f64) <= epsilon(size_x, p) * size_x / 4.0 + TOL;
    (ball, trace)
}

/// Shortest path between two sets in G - avoid, capped at `max_len`.
pub fn link_sets(
    g: &Graph,
    x1: &VertexSet,
    x2: &VertexSet,
    avoid: &VertexSet,
    max_len: usize,
) -> Option<Path> {
    let path = g.shortest_path_between_sets(x1, x2, avoid)?;
    if path.len() <= max_len {
        Some(path)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LargeBall {
    pub vertices: VertexSet,
    pub radius: usize,
    pub start: usize,
    pub size_ok: bool,
    pub radius_ok: bool,
}

/// Largest BFS ball in G - W over all start vertices (ties to the smallest
/// start label), with its radius from that start. Success flags compare the
/// size against n/25 and the radius against 100 * ln^3(n) / eps1.
pub fn find_large_ball_avoiding(g: &Graph, w: &VertexSet, p: &ExpanderParams) -> Option<LargeBall> {
    let n = g.vertex_count();
    let w_mask = g.mask(w);
    let mut seen = vec![false; n];
    let mut best: Option<(Vec<usize>, usize, usize)> = None;
    for start in 0..n {
        if w_mask[start] || seen[start] {
            continue;
        }
        let (order, radius) = g.component_bfs_order(start, &w_mask);
        for &v in &order {
            seen[v] = true;
        }
        if best.as_ref().map_or(true, |(b, _, _)| order.len() > b.len()) {
            best = Some((order, radius, start));
        }
    }
    let (order, radius, start) = best?;
    let size = order.len();
    let ln_n = (n.max(2) as f64).ln();
    Some(LargeBall {
        vertices: VertexSet::new(order),
        radius,
        start,
        size_ok: size as f64 + TOL >= n as f64 / 25.0,
        radius_ok: (radius as f64) <= 100.0 * ln_n.powi(3) / p.eps1 + TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;

    fn params(eps1: f64, k: f64) -> ExpanderParams {
        ExpanderParams::new(eps1, k).unwrap()
    }

    #[test]
    fn epsilon_below_cutoff_is_zero() {
        let p = params(0.5, 6.0);
        assert_eq!(epsilon(1.0, &p), 0.0); // k/6 < k/5
        assert!(epsilon(1.2, &p) > 0.0); // exactly k/5
    }

    #[test]
    fn epsilon_matches_direct_evaluation() {
        let p = params(1.0 - 1e-9, 5.0);
        // At x = k/5 the rate is eps1 / ln^2(3).
        let expected = (1.0 - 1e-9) / 3f64.ln().powi(2);
        assert!((epsilon(1.0, &p) - expected).abs() < 1e-12);
        assert!((expected - 0.8286).abs() < 1e-4);

        let p = params(0.5, 10.0);
        let expected = 0.5 / 150f64.ln().powi(2);
        assert!((epsilon(100.0, &p) - expected).abs() < 1e-15);
        assert!((expected - 0.01992).abs() < 1e-5);
    }

    #[test]
    fn epsilon_monotone_in_range() {
        let p = params(0.37, 8.0);
        let mut x = p.k / 2.0;
        let mut last_eps = epsilon(x, &p);
        let mut last_prod = x * last_eps;
        for _ in 0..200 {
            x *= 1.07;
            let e = epsilon(x, &p);
            assert!(e <= last_eps + TOL);
            assert!(x * e + TOL >= last_prod);
            last_eps = e;
            last_prod = x * e;
        }
    }

    #[test]
    fn witness_check_complete_graph_passes() {
        let g = complete_graph(20);
        let p = params(0.1, 4.0);
        let x: VertexSet = (0..10).collect();
        let v = expansion_witness_check(&g, &p, &x, &[]).unwrap();
        match v {
            ExpansionVerdict::Pass { boundary, required } => {
                assert_eq!(boundary, 10);
                assert!(required < 1.0);
            }
            other => panic!("expected pass, got {other:?}"),
        }
    }

    #[test]
    fn witness_check_small_set_not_applicable() {
        let g = complete_graph(20);
        let p = params(0.1, 4.0);
        let x = VertexSet::singleton(3);
        assert!(matches!(
            expansion_witness_check(&g, &p, &x, &[]).unwrap(),
            ExpansionVerdict::NotApplicable { .. }
        ));
    }

    #[test]
    fn witness_check_rejects_foreign_edges() {
        let g = cycle_graph(6);
        let p = params(0.5, 2.0);
        let x: VertexSet = (0..3).collect();
        assert!(expansion_witness_check(&g, &p, &x, &[(0, 3)]).is_err());
    }

    #[test]
    fn witness_check_long_cycle_arc_fails() {
        // A long cycle is the canonical non-expander: a 42-arc has boundary 2
        // but needs eps(42)*42 ~ 2.017 at these parameters.
        let g = cycle_graph(100);
        let p = params(0.5, 25.0);
        let x: VertexSet = (0..42).collect();
        match expansion_witness_check(&g, &p, &x, &[]).unwrap() {
            ExpansionVerdict::Fail { boundary, required } => {
                assert_eq!(boundary, 2);
                assert!(required > 2.0 && required < 2.1);
            }
            other => panic!("expected fail, got {other:?}"),
        }
    }

    #[test]
    fn violator_found_on_bridged_cliques() {
        let g = two_cliques_bridged(10);
        let p = params(0.9, 10.0);
        let x = find_violating_set(&g, &p, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(x, (0..10).collect::<VertexSet>());
        assert!(expansion_witness_check(&g, &p, &x, &[]).unwrap().failed());
    }

    #[test]
    fn violator_found_on_long_cycle_is_an_arc() {
        let g = cycle_graph(100);
        let p = params(0.5, 25.0);
        let x = find_violating_set(&g, &p, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(x, (0..42).collect::<VertexSet>());
        assert!(expansion_witness_check(&g, &p, &x, &[]).unwrap().failed());
    }

    #[test]
    fn no_violator_in_complete_graph() {
        let g = complete_graph(20);
        let p = params(0.9, 10.0);
        assert!(find_violating_set(&g, &p, DEFAULT_SEARCH_BUDGET).is_none());
        // Independent check by size: in K20 every candidate size s in the
        // checkable range has boundary 20 - s, and vertex-transitivity makes
        // size the only degree of freedom.
        for s in 5..=10 {
            let boundary = (20 - s) as f64;
            assert!(boundary + TOL >= epsilon(s as f64, &p) * s as f64);
        }
    }

    #[test]
    fn extraction_keeps_complete_graph() {
        let g = complete_graph(20);
        let p = params(0.1, 4.0);
        let (sub, report) = extract_expander_subgraph(&g, &p, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(sub.graph.vertex_count(), 20);
        assert_eq!(report.splits, 0);
        assert!(report.heuristically_expanding);
    }

    #[test]
    fn extraction_splits_bridged_cliques() {
        let g = two_cliques_bridged(20);
        let p = params(0.9, 10.0);
        let (sub, report) = extract_expander_subgraph(&g, &p, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(report.splits, 1);
        assert_eq!(sub.graph.vertex_count(), 20);
        assert_eq!(sub.graph.edge_count(), 190);
        // The hull side keeps the bridge vertex and has the lower average
        // degree, so the far clique survives.
        assert_eq!(sub.to_original, (20..40).collect::<Vec<_>>());
    }

    #[test]
    fn extraction_guarantees_hold_on_star() {
        let g = star_graph(50);
        let p = params(0.9, 10.0);
        let (sub, report) = extract_expander_subgraph(&g, &p, DEFAULT_SEARCH_BUDGET).unwrap();
        let d_h = sub.graph.average_degree();
        assert!(d_h >= g.average_degree().halved());
        assert!(sub.graph.min_degree() * sub.graph.vertex_count() >= sub.graph.edge_count());
        assert!(report.d_output >= report.d_input.halved());
        assert!(sub.graph.vertex_count() <= 6);
    }

    #[test]
    fn extraction_fails_on_edgeless() {
        let g = Graph::new(4, &[]).unwrap();
        let p = params(0.1, 4.0);
        assert!(extract_expander_subgraph(&g, &p, 1000).is_err());
    }

    #[test]
    fn thinness_empty_set_passes() {
        let g = complete_graph(8);
        let t = ThinnessParams::new(0.1, 1, 5).unwrap();
        let v = is_thin_around(&g, &VertexSet::empty(), &VertexSet::singleton(0), &t).unwrap();
        assert!(v.passed());
    }

    #[test]
    fn thinness_on_short_path() {
        let g = path_graph(3);
        let t = ThinnessParams::new(10.0, 2, 3).unwrap();
        let v = is_thin_around(
            &g,
            &VertexSet::singleton(1),
            &VertexSet::singleton(0),
            &t,
        )
        .unwrap();
        assert!(v.passed());
    }

    #[test]
    fn thinness_fails_on_star_center() {
        let g = star_graph(6);
        let t = ThinnessParams::new(0.5, 1, 4).unwrap();
        let v = is_thin_around(
            &g,
            &VertexSet::singleton(0),
            &VertexSet::singleton(1),
            &t,
        )
        .unwrap();
        match v {
            ThinnessVerdict::Fail {
                radius,
                boundary_hits,
                allowed,
            } => {
                assert_eq!(radius, 1);
                assert_eq!(boundary_hits, 1);
                assert!((allowed - 0.5).abs() < TOL);
            }
            ThinnessVerdict::Pass => panic!("expected failure at radius 1"),
        }
    }

    #[test]
    fn thinness_rejects_overlap() {
        let g = path_graph(3);
        let t = ThinnessParams::new(1.0, 1, 2).unwrap();
        assert!(is_thin_around(&g, &VertexSet::singleton(0), &VertexSet::singleton(0), &t).is_err());
    }

    #[test]
    fn growth_without_deletions_is_plain_ball() {
        let g = two_cliques_bridged(6);
        for r in [0, 1, 2, 3] {
            let x = VertexSet::singleton(2);
            let (ball, trace) =
                grow_ball_robust(&g, &x, &VertexSet::empty(), &VertexSet::empty(), r);
            assert_eq!(ball, g.ball(&x, r, &VertexSet::empty()));
            assert_eq!(trace.sizes[0], 1);
            if r == 0 {
                assert_eq!(trace.sizes, vec![1]);
            }
        }
    }

    #[test]
    fn growth_trace_matches_independent_recount() {
        // Recompute |N_{G-Y}(Z_{i-1}) \cap W| from scratch at every step.
        let g = cycle_graph(12);
        let x = VertexSet::singleton(0);
        let y = VertexSet::new(vec![6]);
        let w = VertexSet::new(vec![3, 4, 9]);
        let (_, trace) = grow_ball_robust(&g, &x, &y, &w, 5);
        for i in 1..=trace.boundary_hits.len() {
            let avoid = y.union(&w);
            let z_prev = g.ball(&x, i - 1, &avoid);
            let mut count = 0;
            for cand in w.iter() {
                if y.contains(cand) {
                    continue;
                }
                if g.neighbors(cand)
                    .iter()
                    .any(|&q| z_prev.contains(q) && !y.contains(q))
                {
                    count += 1;
                }
            }
            assert_eq!(trace.boundary_hits[i - 1], count, "step {i}");
        }
        // Growth equation: |Z_{i+1}| = |Z_i| + |N(Z_i) \ (Y u W)|.
        for i in 0..trace.sizes.len() - 1 {
            let avoid = y.union(&w);
            let z_i = g.ball(&x, i, &avoid);
            let fresh = g.sphere(&x, i + 1, &avoid);
            assert_eq!(trace.sizes[i + 1], z_i.len() + fresh.len());
        }
    }

    #[test]
    fn growth_conclusion_flag_on_regular_graph() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(42);
        let g = crate::generate::random_regular(4096, 8, &mut rng).unwrap();
        let (ball, trace) = grow_ball_robust(
            &g,
            &VertexSet::singleton(0),
            &VertexSet::empty(),
            &VertexSet::empty(),
            9,
        );
        assert!(ball.len() as f64 >= (9f64).powf(0.25).exp());
        assert!(trace.hypotheses.conclusion_exp_bound);
    }

    #[test]
    fn link_sets_respects_cap() {
        let g = cycle_graph(6);
        let x1 = VertexSet::singleton(0);
        let x2 = VertexSet::singleton(3);
        assert!(link_sets(&g, &x1, &x2, &VertexSet::empty(), 2).is_none());
        let p = link_sets(&g, &x1, &x2, &VertexSet::empty(), 3).unwrap();
        assert_eq!(p.len(), 3);
        let shared = VertexSet::new(vec![2, 4]);
        let z = link_sets(&g, &shared, &VertexSet::new(vec![4, 5]), &VertexSet::empty(), 9)
            .unwrap();
        assert_eq!(z.len(), 0);
    }

    #[test]
    fn link_sets_through_depleted_complete_graph() {
        let g = complete_graph(20);
        let avoid: VertexSet = (10..15).collect();
        let p = link_sets(&g, &VertexSet::singleton(0), &VertexSet::singleton(1), &avoid, 2)
            .unwrap();
        assert!(p.len() <= 2);
    }

    #[test]
    fn large_ball_whole_graph_without_deletions() {
        let g = complete_graph(20);
        let p = params(0.3, 4.0);
        let ball = find_large_ball_avoiding(&g, &VertexSet::empty(), &p).unwrap();
        assert_eq!(ball.vertices.len(), 20);
        assert_eq!(ball.radius, 1);
        assert!(ball.size_ok && ball.radius_ok);

        let w: VertexSet = (0..5).collect();
        let ball = find_large_ball_avoiding(&g, &w, &p).unwrap();
        assert_eq!(ball.vertices.len(), 15);
        assert_eq!(ball.radius, 1);
    }

    #[test]
    fn large_ball_on_broken_cycle() {
        let g = cycle_graph(100);
        let p = params(0.3, 4.0);
        let ball = find_large_ball_avoiding(&g, &VertexSet::singleton(0), &p).unwrap();
        assert_eq!(ball.vertices.len(), 99);
        assert_eq!(ball.start, 1);
        assert_eq!(ball.radius, 98);
        assert!(ball.size_ok);
    }

    #[test]
    fn large_ball_absent_when_everything_deleted() {
        let g = complete_graph(4);
        let p = params(0.3, 2.0);
        let all: VertexSet = (0..4).collect();
        assert!(find_large_ball_avoiding(&g, &all, &p).is_none());
    }
}
