//! Ground truth: the crossing-freeness checker, nested-pair verification,
//! exhaustive simple-cycle enumeration, brute-force search for nested
//! crossing-free pairs, and tiny-n extremal scans.

use crate::error::{input_err, Result};
use crate::generate;
use crate::graph::{canonical_cycle, Cycle, Graph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Two chords of an outer cycle of length `outer_length`, given as 1-based
/// index pairs into the outer's linear order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChordPair {
    pub outer_length: usize,
    pub e: (usize, usize),
    pub f: (usize, usize),
}

/// Cyclic interleaving test: the chords cross iff exactly one endpoint of
/// one chord lies strictly inside the arc spanned by the other. Chords
/// sharing an endpoint never cross. Invariant under rotation and reflection
/// of the outer indexing.
pub fn chords_cross(p: &ChordPair) -> bool {
    let l = p.outer_length;
    let (mut a, mut b) = p.e;
    let (c, d) = p.f;
    for idx in [a, b, c, d] {
        assert!(idx >= 1 && idx <= l, "chord index {idx} outside 1..={l}");
    }
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    if a == c || a == d || b == c || b == d {
        return false;
    }
    let inside = |x: usize| a < x && x < b;
    inside(c) != inside(d)
}

/// One itemized reason a nested-pair certificate fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum NestedFailure {
    OuterNotACycle { reason: String },
    InnerNotACycle { reason: String },
    InnerVertexNotOnOuter { vertex: usize },
    SharedEdge { edge: (usize, usize) },
    Crossing {
        first_edge: (usize, usize),
        second_edge: (usize, usize),
        chords: ChordPair,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedVerdict {
    pub failures: Vec<NestedFailure>,
}

impl NestedVerdict {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

fn validate_cycle_sequence(g: &Graph, seq: &[usize]) -> std::result::Result<(), String> {
    if seq.len() < 3 {
        return Err(format!("cycle has {} vertices, need at least 3", seq.len()));
    }
    let mut seen = vec![];
    for &v in seq {
        if v >= g.vertex_count() {
            return Err(format!("vertex {v} out of range"));
        }
        if seen.contains(&v) {
            return Err(format!("vertex {v} repeats"));
        }
        seen.push(v);
    }
    for i in 0..seq.len() {
        let (u, v) = (seq[i], seq[(i + 1) % seq.len()]);
        if !g.has_edge(u, v) {
            return Err(format!("step {u}-{v} is not an edge"));
        }
    }
    Ok(())
}

/// Full nested-pair verification: (a) both sequences are cycles of G,
/// (b) the inner's vertices all lie on the outer, (c) the edge sets are
/// disjoint, (d) no two inner edges cross under the outer's indexing.
/// Every failed clause is reported with a witness.
pub fn verify_nested_no_crossings(g: &Graph, outer: &[usize], inner: &[usize]) -> NestedVerdict {
    let mut failures = Vec::new();
    let outer_ok = match validate_cycle_sequence(g, outer) {
        Ok(()) => true,
        Err(reason) => {
            failures.push(NestedFailure::OuterNotACycle { reason });
            false
        }
    };
    let inner_ok = match validate_cycle_sequence(g, inner) {
        Ok(()) => true,
        Err(reason) => {
            failures.push(NestedFailure::InnerNotACycle { reason });
            false
        }
    };
    if !outer_ok || !inner_ok {
        return NestedVerdict { failures };
    }

    let mut position = vec![usize::MAX; g.vertex_count()];
    for (idx, &v) in outer.iter().enumerate() {
        position[v] = idx + 1; // 1-based positions along the outer order
    }
    let mut all_on_outer = true;
    for &v in inner {
        if position[v] == usize::MAX {
            failures.push(NestedFailure::InnerVertexNotOnOuter { vertex: v });
            all_on_outer = false;
        }
    }

    let edge_key = |u: usize, v: usize| (u.min(v), u.max(v));
    let outer_edges: Vec<(usize, usize)> = {
        let mut e: Vec<_> = (0..outer.len())
            .map(|i| edge_key(outer[i], outer[(i + 1) % outer.len()]))
            .collect();
        e.sort_unstable();
        e
    };
    let inner_edges: Vec<(usize, usize)> = (0..inner.len())
        .map(|i| edge_key(inner[i], inner[(i + 1) % inner.len()]))
        .collect();
    for &e in &inner_edges {
        if outer_edges.binary_search(&e).is_ok() {
            failures.push(NestedFailure::SharedEdge { edge: e });
        }
    }

    if all_on_outer {
        let chords: Vec<((usize, usize), (usize, usize))> = inner_edges
            .iter()
            .map(|&(u, v)| ((u, v), (position[u], position[v])))
            .collect();
        for i in 0..chords.len() {
            for j in i + 1..chords.len() {
                let pair = ChordPair {
                    outer_length: outer.len(),
                    e: chords[i].1,
                    f: chords[j].1,
                };
                if chords_cross(&pair) {
                    failures.push(NestedFailure::Crossing {
                        first_edge: chords[i].0,
                        second_edge: chords[j].0,
                        chords: pair,
                    });
                }
            }
        }
    }
    NestedVerdict { failures }
}

/// Caps for enumeration and the brute-force pair search. The time budget is
/// off by default: time-based truncation is not reproducible, count-based
/// truncation is.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchCaps {
    pub max_cycles: usize,
    pub max_cycle_length: usize,
    pub time_budget_ms: Option<u64>,
}

impl SearchCaps {
    pub fn new(max_cycles: usize, max_cycle_length: usize) -> Result<SearchCaps> {
        if max_cycles == 0 || max_cycle_length == 0 {
            return input_err("search caps must be positive");
        }
        Ok(SearchCaps {
            max_cycles,
            max_cycle_length,
            time_budget_ms: None,
        })
    }

    pub fn exhaustive_for(n: usize) -> SearchCaps {
        SearchCaps {
            max_cycles: usize::MAX,
            max_cycle_length: n.max(3),
            time_budget_ms: None,
        }
    }
}

impl Default for SearchCaps {
    fn default() -> SearchCaps {
        SearchCaps {
            max_cycles: 100_000,
            max_cycle_length: usize::MAX,
            time_budget_ms: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CycleEnumeration {
    /// Every simple cycle within the caps, canonical, sorted by
    /// (length, canonical sequence), each exactly once.
    pub cycles: Vec<Cycle>,
    pub truncated: bool,
}

impl CycleEnumeration {
    pub fn certifies_completeness(&self, g: &Graph, caps: &SearchCaps) -> bool {
        !self.truncated && caps.max_cycle_length >= g.vertex_count()
    }
}

struct EnumState {
    found: Vec<Vec<usize>>,
    cap: usize,
    truncated: bool,
    deadline: Option<std::time::Instant>,
}

impl EnumState {
    fn out_of_time(&mut self) -> bool {
        if let Some(d) = self.deadline {
            if std::time::Instant::now() >= d {
                self.truncated = true;
                return true;
            }
        }
        false
    }
}

fn enum_cycles_dfs(
    g: &Graph,
    root: usize,
    len: usize,
    dist: &[usize],
    path: &mut Vec<usize>,
    on_path: &mut Vec<bool>,
    state: &mut EnumState,
) {
    if state.truncated {
        return;
    }
    let last = *path.last().unwrap();
    if path.len() == len {
        // Each cycle arises once per direction; keep the one where the
        // second vertex is smaller than the last.
        if path[1] < path[len - 1] && g.has_edge(last, root) {
            if state.found.len() >= state.cap {
                state.truncated = true;
                return;
            }
            state.found.push(canonical_cycle(path));
        }
        return;
    }
    for &w in g.neighbors(last) {
        if w <= root || on_path[w] {
            continue;
        }
        if dist[w] == usize::MAX || dist[w] + path.len() > len {
            continue;
        }
        path.push(w);
        on_path[w] = true;
        enum_cycles_dfs(g, root, len, dist, path, on_path, state);
        on_path[w] = false;
        path.pop();
        if state.truncated {
            return;
        }
    }
}

/// Enumerates simple cycles of length at most `caps.max_cycle_length`, each
/// exactly once in canonical form, shortest lengths first, deterministic.
/// Hitting `max_cycles` (or the optional time budget) truncates the stream
/// and sets the flag.
pub fn enumerate_cycles(g: &Graph, caps: &SearchCaps) -> CycleEnumeration {
    let n = g.vertex_count();
    let max_len = caps.max_cycle_length.min(n);
    let mut state = EnumState {
        found: Vec::new(),
        cap: caps.max_cycles,
        truncated: false,
        deadline: caps
            .time_budget_ms
            .map(|ms| std::time::Instant::now() + std::time::Duration::from_millis(ms)),
    };
    'outer: for len in 3..=max_len {
        for root in 0..n {
            if state.out_of_time() || state.truncated {
                break 'outer;
            }
            if g.degree(root) < 2 {
                continue;
            }
            let avoid: Vec<bool> = (0..n).map(|v| v < root).collect();
            let dist = g.bfs_distances(&[root], &avoid);
            let mut path = vec![root];
            let mut on_path = vec![false; n];
            on_path[root] = true;
            enum_cycles_dfs(g, root, len, &dist, &mut path, &mut on_path, &mut state);
        }
    }
    let mut cycles: Vec<Cycle> = state
        .found
        .into_iter()
        .map(Cycle::from_canonical)
        .collect();
    cycles.sort_by(|a, b| (a.len(), a.vertices()).cmp(&(b.len(), b.vertices())));
    CycleEnumeration {
        cycles,
        truncated: state.truncated,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleOutcome {
    pub pair: Option<(Cycle, Cycle)>,
    /// True only when the enumeration covered every simple cycle; only then
    /// does an absent pair certify non-existence.
    pub exhaustive: bool,
    pub cycles_enumerated: usize,
}

/// Brute-force search over ordered pairs of enumerated cycles, in
/// (outer length, inner length, canonical forms) order; returns the first
/// pair that verifies.
pub fn oracle_find_nested_pair(g: &Graph, caps: &SearchCaps) -> OracleOutcome {
    let en = enumerate_cycles(g, caps);
    let exhaustive = en.certifies_completeness(g, caps);
    let n = g.vertex_count();
    let masks: Vec<u128> = if n <= 128 {
        en.cycles
            .iter()
            .map(|c| c.vertices().iter().fold(0u128, |m, &v| m | (1u128 << v)))
            .collect()
    } else {
        Vec::new()
    };
    for (oi, outer) in en.cycles.iter().enumerate() {
        let outer_set = outer.vertex_set();
        for (ii, inner) in en.cycles.iter().enumerate() {
            if inner.len() > outer.len() {
                break;
            }
            if !masks.is_empty() {
                if masks[ii] & !masks[oi] != 0 {
                    continue;
                }
            } else if !inner.vertex_set().is_subset(&outer_set) {
                continue;
            }
            if verify_nested_no_crossings(g, outer.vertices(), inner.vertices()).pass() {
                return OracleOutcome {
                    pair: Some((outer.clone(), inner.clone())),
                    exhaustive,
                    cycles_enumerated: en.cycles.len(),
                };
            }
        }
    }
    OracleOutcome {
        pair: None,
        exhaustive,
        cycles_enumerated: en.cycles.len(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanRow {
    pub n: usize,
    pub m: usize,
    pub samples: usize,
    pub fraction: f64,
    pub exhaustive: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanResult {
    pub rows: Vec<ScanRow>,
    /// Smallest edge count at which some sampled graph contained the pattern.
    pub min_m_with_pattern: Option<usize>,
}

pub const DEFAULT_SCAN_MAX_N: usize = 12;

/// Samples G(n, m) for each m in range and reports the fraction of samples
/// containing a nested crossing-free pair. Rows where some undecided sample
/// had a truncated enumeration are marked non-exhaustive.
pub fn extremal_scan(
    n: usize,
    m_range: std::ops::RangeInclusive<usize>,
    samples: usize,
    seed: u64,
    caps: &SearchCaps,
) -> Result<ScanResult> {
    if n < 3 || n > DEFAULT_SCAN_MAX_N {
        return input_err(format!(
            "extremal scan supports 3 <= n <= {DEFAULT_SCAN_MAX_N}, got {n}"
        ));
    }
    if samples == 0 {
        return input_err("need at least one sample per edge count");
    }
    let max_m = n * (n - 1) / 2;
    if *m_range.end() > max_m {
        return input_err(format!("edge budget {} exceeds C(n,2)={max_m}", m_range.end()));
    }
    let mut rows = Vec::new();
    let mut min_m = None;
    for m in m_range {
        let mut found = 0usize;
        let mut exhaustive = true;
        for s in 0..samples {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(((m as u64) << 32) | s as u64);
            let g = generate::gnm(n, m, &mut rng)?;
            let outcome = oracle_find_nested_pair(&g, caps);
            if outcome.pair.is_some() {
                found += 1;
            } else if !outcome.exhaustive {
                exhaustive = false;
            }
        }
        if found > 0 && min_m.is_none() {
            min_m = Some(m);
        }
        rows.push(ScanRow {
            n,
            m,
            samples,
            fraction: found as f64 / samples as f64,
            exhaustive,
        });
    }
    Ok(ScanResult {
        rows,
        min_m_with_pattern: min_m,
    })
}

/// CSV rendering of a scan: header `n,m,samples,fraction,exhaustive`.
pub fn scan_to_csv(result: &ScanResult) -> String {
    let mut out = String::from("n,m,samples,fraction,exhaustive\n");
    for row in &result.rows {
        out.push_str(&format!(
            "{},{},{},{:.4},{}\n",
            row.n, row.m, row.samples, row.fraction, row.exhaustive
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexSet;
    use crate::testutil::*;

    /// Naive linear-pattern scan: the chords cross iff the four endpoints
    /// can be labelled i < j < i' < j' with {i,i'} one chord and {j,j'} the
    /// other. Independent oracle for the cyclic test.
    fn naive_chords_cross(e: (usize, usize), f: (usize, usize)) -> bool {
        let assignments = [
            (e.0, f.0, e.1, f.1),
            (e.0, f.1, e.1, f.0),
            (e.1, f.0, e.0, f.1),
            (e.1, f.1, e.0, f.0),
            (f.0, e.0, f.1, e.1),
            (f.0, e.1, f.1, e.0),
            (f.1, e.0, f.0, e.1),
            (f.1, e.1, f.0, e.0),
        ];
        assignments
            .iter()
            .any(|&(i, j, ip, jp)| i < j && j < ip && ip < jp)
    }

    fn octagon_with_chords(chords: &[(usize, usize)]) -> Graph {
        let mut edges: Vec<(usize, usize)> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
        edges.extend_from_slice(chords);
        Graph::new(8, &edges).unwrap()
    }

    #[test]
    fn crossing_pairs_on_an_octagon() {
        let cross = |e, f| {
            chords_cross(&ChordPair {
                outer_length: 8,
                e,
                f,
            })
        };
        assert!(cross((1, 3), (2, 4)));
        assert!(!cross((1, 3), (3, 5))); // shared endpoint
        assert!(!cross((1, 3), (5, 7))); // disjoint arcs
    }

    #[test]
    fn crossing_agrees_with_linear_pattern_scan() {
        for l in 4..=10 {
            for a in 1..=l {
                for b in a + 1..=l {
                    for c in 1..=l {
                        for d in c + 1..=l {
                            let pair = ChordPair {
                                outer_length: l,
                                e: (a, b),
                                f: (c, d),
                            };
                            assert_eq!(
                                chords_cross(&pair),
                                naive_chords_cross((a, b), (c, d)),
                                "l={l} e=({a},{b}) f=({c},{d})"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn crossing_invariant_under_rotation_and_reflection() {
        let l = 12;
        let rotate = |x: usize, r: usize| (x - 1 + r) % l + 1;
        let reflect = |x: usize| l + 1 - x;
        let base = ChordPair {
            outer_length: l,
            e: (2, 7),
            f: (4, 11),
        };
        let expect = chords_cross(&base);
        for r in 0..l {
            let rot = ChordPair {
                outer_length: l,
                e: (rotate(2, r), rotate(7, r)),
                f: (rotate(4, r), rotate(11, r)),
            };
            assert_eq!(chords_cross(&rot), expect);
            let refl = ChordPair {
                outer_length: l,
                e: (reflect(rot.e.0), reflect(rot.e.1)),
                f: (reflect(rot.f.0), reflect(rot.f.1)),
            };
            assert_eq!(chords_cross(&refl), expect);
        }
    }

    #[test]
    fn nested_without_crossings_on_alternating_square() {
        // Outer octagon, inner square on alternating vertices via chords.
        let g = octagon_with_chords(&[(0, 2), (2, 4), (4, 6), (0, 6)]);
        let outer: Vec<usize> = (0..8).collect();
        let inner = vec![0, 2, 4, 6];
        let verdict = verify_nested_no_crossings(&g, &outer, &inner);
        assert!(verdict.pass(), "{:?}", verdict.failures);
    }

    #[test]
    fn crossing_five_cycle_fails_with_witness() {
        // Inner 5-cycle whose chords interleave.
        let g = octagon_with_chords(&[(0, 2), (2, 6), (1, 6), (1, 3), (0, 3)]);
        let outer: Vec<usize> = (0..8).collect();
        let inner = vec![0, 2, 6, 1, 3];
        let verdict = verify_nested_no_crossings(&g, &outer, &inner);
        assert!(!verdict.pass());
        assert!(verdict
            .failures
            .iter()
            .any(|f| matches!(f, NestedFailure::Crossing { .. })));
    }

    #[test]
    fn shared_edge_fails() {
        let g = octagon_with_chords(&[(0, 2), (2, 4), (0, 4)]);
        let outer: Vec<usize> = (0..8).collect();
        let inner = vec![0, 1, 2]; // edge 0-1 and 1-2 belong to the outer
        let verdict = verify_nested_no_crossings(&g, &outer, &inner);
        assert!(verdict
            .failures
            .iter()
            .any(|f| matches!(f, NestedFailure::SharedEdge { .. })));
    }

    #[test]
    fn tampered_outer_reports_not_a_cycle() {
        let g = octagon_with_chords(&[(0, 2), (2, 4), (4, 6), (0, 6)]);
        let mut outer: Vec<usize> = (0..8).collect();
        outer.swap(2, 5);
        let verdict = verify_nested_no_crossings(&g, &outer, &[0, 2, 4, 6]);
        assert!(verdict
            .failures
            .iter()
            .any(|f| matches!(f, NestedFailure::OuterNotACycle { .. })));
    }

    #[test]
    fn verify_passes_in_supergraphs() {
        let g = octagon_with_chords(&[(0, 2), (2, 4), (4, 6), (0, 6)]);
        let outer: Vec<usize> = (0..8).collect();
        let inner = vec![0, 2, 4, 6];
        assert!(verify_nested_no_crossings(&g, &outer, &inner).pass());
        let denser = octagon_with_chords(&[(0, 2), (2, 4), (4, 6), (0, 6), (1, 5), (3, 7), (1, 4)]);
        assert!(verify_nested_no_crossings(&denser, &outer, &inner).pass());
    }

    #[test]
    fn enumerate_k4_has_seven_cycles() {
        let g = complete_graph(4);
        let en = enumerate_cycles(&g, &SearchCaps::exhaustive_for(4));
        assert!(!en.truncated);
        assert_eq!(en.cycles.len(), 7); // 4 triangles + 3 squares
        assert_eq!(en.cycles.iter().filter(|c| c.len() == 3).count(), 4);
        assert_eq!(en.cycles.iter().filter(|c| c.len() == 4).count(), 3);
    }

    #[test]
    fn enumerate_c6_and_tree() {
        let g = cycle_graph(6);
        let en = enumerate_cycles(&g, &SearchCaps::exhaustive_for(6));
        assert_eq!(en.cycles.len(), 1);
        let t = path_graph(5);
        assert!(enumerate_cycles(&t, &SearchCaps::exhaustive_for(5))
            .cycles
            .is_empty());
    }

    #[test]
    fn enumeration_truncates_deterministically() {
        let g = complete_graph(7);
        let caps = SearchCaps {
            max_cycles: 10,
            max_cycle_length: 7,
            time_budget_ms: None,
        };
        let a = enumerate_cycles(&g, &caps);
        let b = enumerate_cycles(&g, &caps);
        assert!(a.truncated);
        assert_eq!(a.cycles.len(), 10);
        assert_eq!(
            a.cycles.iter().map(|c| c.vertices().to_vec()).collect::<Vec<_>>(),
            b.cycles.iter().map(|c| c.vertices().to_vec()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn girth_consistent_with_enumeration() {
        let g = two_cliques_bridged(5);
        let girth_cycle = g.shortest_cycle().unwrap();
        let en = enumerate_cycles(&g, &SearchCaps::exhaustive_for(10));
        assert!(en
            .cycles
            .iter()
            .all(|c| c.len() >= girth_cycle.len()));
        assert!(en.cycles.contains(&girth_cycle));
    }

    #[test]
    fn oracle_absent_for_k4_and_k5() {
        for n in [4, 5] {
            let g = complete_graph(n);
            let out = oracle_find_nested_pair(&g, &SearchCaps::exhaustive_for(n));
            assert!(out.pair.is_none(), "K{n} should have no pair");
            assert!(out.exhaustive, "K{n} enumeration should be exhaustive");
        }
    }

    #[test]
    fn oracle_finds_pair_in_k6() {
        let g = complete_graph(6);
        let out = oracle_find_nested_pair(&g, &SearchCaps::exhaustive_for(6));
        let (outer, inner) = out.pair.expect("K6 has a nested crossing-free pair");
        assert!(out.exhaustive);
        assert_eq!(outer.vertices(), &[0, 1, 2, 3, 4, 5]);
        assert_eq!(inner.vertices(), &[0, 2, 4]);
        assert!(verify_nested_no_crossings(&g, outer.vertices(), inner.vertices()).pass());
    }

    #[test]
    fn scan_small_n() {
        let caps = SearchCaps::exhaustive_for(6);
        let result = extremal_scan(6, 6..=6, 4, 7, &caps).unwrap();
        assert_eq!(result.rows.len(), 1);
        assert_eq!(result.rows[0].fraction, 0.0);
        assert!(result.rows[0].exhaustive);
        let full = extremal_scan(6, 15..=15, 2, 7, &caps).unwrap();
        assert_eq!(full.rows[0].fraction, 1.0);
        assert_eq!(full.min_m_with_pattern, Some(15));
        assert!(extremal_scan(20, 1..=2, 1, 0, &caps).is_err());
    }

    #[test]
    fn scan_csv_shape() {
        let caps = SearchCaps::exhaustive_for(5);
        let result = extremal_scan(5, 4..=6, 2, 3, &caps).unwrap();
        let csv = scan_to_csv(&result);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("n,m,samples,fraction,exhaustive"));
        assert_eq!(csv.lines().count(), 4);
        // K5 subgraphs never contain the pattern.
        for row in &result.rows {
            assert_eq!(row.fraction, 0.0);
        }
    }

    #[test]
    fn oracle_subset_masks_match_slow_path() {
        let g = complete_graph(6);
        let en = enumerate_cycles(&g, &SearchCaps::exhaustive_for(6));
        for outer in en.cycles.iter().take(40) {
            let outer_set = outer.vertex_set();
            for inner in en.cycles.iter().take(40) {
                let mask_sub = inner
                    .vertices()
                    .iter()
                    .all(|v| outer.vertices().contains(v));
                assert_eq!(
                    mask_sub,
                    inner.vertex_set().is_subset(&outer_set)
                );
            }
        }
        let _ = VertexSet::empty();
    }
}
