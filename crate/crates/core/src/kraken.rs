//! The kraken: a shortest cycle with two blob-anchored arms per cycle
//! vertex. Validation is independent of construction; the builder works in
//! two phases (hub links, then far-apart blob links for whatever is left).

use crate::error::{Error, Result};
use crate::expander::{find_large_ball_avoiding, ExpanderParams};
use crate::graph::{Cycle, Graph, Path, VertexSet};
use crate::linker::{
    build_path_system, shorten_and_audit, AuditReport, PathCaps, PathSystem, TargetRef, TargetSet,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KrakenParams {
    /// Inner cycle length.
    pub k: usize,
    /// Link-length unit: blobs have diameter <= m, arms length <= 10m.
    pub m: usize,
    /// Blob size.
    pub s: usize,
    /// Degree cutoff defining the hub set.
    pub hub_threshold: f64,
    /// Required pairwise distance between far-apart blobs.
    pub separation: usize,
    /// Size the far-ball blobs are trimmed to before sub-blob selection.
    pub blob_size_target: usize,
    /// Arm length cap (10m unless overridden).
    pub arm_len_cap: usize,
}

impl KrakenParams {
    pub fn validate(&self) -> Result<()> {
        if self.k < 3 || self.s < 1 || self.m < 1 {
            return Err(Error::Input(format!(
                "kraken params need k >= 3, s >= 1, m >= 1; got k={}, s={}, m={}",
                self.k, self.s, self.m
            )));
        }
        if self.blob_size_target < self.s {
            return Err(Error::Input(
                "blob size target below the blob size".into(),
            ));
        }
        Ok(())
    }
}

/// Optional overrides; anything unset is instantiated from the graph at
/// build time and logged in the report.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct KrakenConfig {
    pub hub_threshold: Option<f64>,
    pub blob_size: Option<usize>,
    pub m: Option<usize>,
    pub separation: Option<usize>,
    pub blob_size_target: Option<usize>,
    pub max_arm_len: Option<usize>,
}

impl KrakenConfig {
    /// Desk-scale defaults. The hub threshold is the average degree capped
    /// at the maximum degree, so regular and complete graphs keep a usable
    /// hub set; the blob size is ln n clamped by what the graph can host
    /// (2k disjoint blobs off the cycle, drawn from hub neighborhoods).
    pub fn instantiate(&self, g: &Graph, cycle_len: usize) -> Result<KrakenParams> {
        let n = g.vertex_count();
        let ln_n = (n.max(3) as f64).ln();
        let m = self.m.unwrap_or_else(|| (ln_n.ceil() as usize).max(2));
        let hub_threshold = self
            .hub_threshold
            .unwrap_or_else(|| g.average_degree().to_f64().ceil().min(g.max_degree() as f64));
        let s = self.blob_size.unwrap_or_else(|| {
            let by_log = ln_n.ceil() as usize;
            let by_room = n.saturating_sub(cycle_len) / (2 * cycle_len);
            let by_degree = (hub_threshold as usize / 2).max(1);
            by_log.min(by_room).min(by_degree).max(1)
        });
        let separation = self
            .separation
            .unwrap_or_else(|| (4.0 * ln_n.sqrt()).ceil() as usize);
        let blob_size_target = self
            .blob_size_target
            .unwrap_or_else(|| s.max((n as f64).powf(0.125).ceil() as usize));
        let params = KrakenParams {
            k: cycle_len,
            m,
            s,
            hub_threshold,
            separation: separation.max(1),
            blob_size_target,
            arm_len_cap: self.max_arm_len.unwrap_or(10 * m),
        };
        params.validate()?;
        Ok(params)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    Hubs,
    Blobs,
}

/// The kraken structure, indexed by cycle position: entry i belongs to the
/// i-th vertex of the (canonical) inner cycle, sides j in {0, 1}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Kraken {
    pub cycle: Cycle,
    pub anchors: Vec<[usize; 2]>,
    pub blobs: Vec<[VertexSet; 2]>,
    /// Arms run from the cycle vertex to the anchor.
    pub arms: Vec<[Path; 2]>,
    /// Whether each anchor is a hub (meets the degree threshold).
    pub anchor_is_hub: Vec<[bool; 2]>,
    pub case_tag: CaseTag,
}

impl Kraken {
    pub fn arm_vertices(&self) -> VertexSet {
        self.arms
            .iter()
            .flat_map(|pair| pair.iter())
            .flat_map(|p| p.vertices().iter().copied())
            .collect()
    }

    pub fn blob_vertices(&self) -> VertexSet {
        self.blobs
            .iter()
            .flat_map(|pair| pair.iter())
            .fold(VertexSet::empty(), |acc, b| acc.union(b))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrakenClauseFailure {
    pub clause: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrakenVerdict {
    pub failures: Vec<KrakenClauseFailure>,
}

impl KrakenVerdict {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

fn induced_diameter(g: &Graph, set: &VertexSet) -> Option<usize> {
    let sub = g.induced(set);
    let n = sub.graph.vertex_count();
    let no_avoid = vec![false; n];
    let mut diam = 0;
    for v in 0..n {
        let dist = sub.graph.bfs_distances(&[v], &no_avoid);
        for &d in &dist {
            if d == usize::MAX {
                return None; // disconnected
            }
            diam = diam.max(d);
        }
    }
    Some(diam)
}

/// Machine check of every kraken clause: cycle validity and length, anchors
/// off the cycle and inside their blobs, pairwise disjoint size-s blobs of
/// induced diameter <= m, arms of length <= 10m from cycle vertex to anchor
/// with interiors avoiding the cycle and all other blobs, pairwise
/// internally disjoint.
pub fn validate_kraken(g: &Graph, k: &Kraken, params: &KrakenParams) -> KrakenVerdict {
    let mut failures = Vec::new();
    let mut fail = |clause: &str, detail: String| {
        failures.push(KrakenClauseFailure {
            clause: clause.into(),
            detail,
        });
    };
    let cyc_vs = k.cycle.vertex_set();
    if Cycle::new(g, k.cycle.vertices().to_vec()).is_err() {
        fail("cycle", "inner cycle is not a cycle of the graph".into());
    }
    if k.cycle.len() != params.k {
        fail(
            "cycle-length",
            format!("cycle has {} vertices, params say {}", k.cycle.len(), params.k),
        );
    }
    let kk = k.cycle.len();
    if k.anchors.len() != kk || k.blobs.len() != kk || k.arms.len() != kk {
        fail("shape", "per-vertex arrays do not match the cycle length".into());
        return KrakenVerdict { failures };
    }

    for i in 0..kk {
        for j in 0..2 {
            let u = k.anchors[i][j];
            let blob = &k.blobs[i][j];
            let tag = format!("({}, {})", i + 1, j + 1);
            if cyc_vs.contains(u) {
                fail("anchor-off-cycle", format!("anchor {tag} = {u} lies on the cycle"));
            }
            if !blob.contains(u) {
                fail("anchor-in-blob", format!("anchor {tag} = {u} not in its blob"));
            }
            if blob.len() != params.s {
                fail(
                    "blob-size",
                    format!("blob {tag} has {} vertices, expected {}", blob.len(), params.s),
                );
            }
            if !blob.is_disjoint(&cyc_vs) {
                fail("blob-off-cycle", format!("blob {tag} touches the cycle"));
            }
            match induced_diameter(g, blob) {
                None => fail("blob-diameter", format!("blob {tag} is disconnected")),
                Some(d) if d > params.m => {
                    fail(
                        "blob-diameter",
                        format!("blob {tag} has diameter {d} > m = {}", params.m),
                    );
                }
                _ => {}
            }
            let arm = &k.arms[i][j];
            if !arm.is_valid_in(g) {
                fail("arm-path", format!("arm {tag} is not a path of the graph"));
            }
            if arm.first() != k.cycle.vertices()[i] || arm.last() != u {
                fail(
                    "arm-endpoints",
                    format!("arm {tag} does not run from its cycle vertex to its anchor"),
                );
            }
            if arm.len() > params.arm_len_cap {
                fail(
                    "arm-length",
                    format!("arm {tag} has length {} > {}", arm.len(), params.arm_len_cap),
                );
            }
            for &x in arm.interior() {
                if cyc_vs.contains(x) {
                    fail("arm-interior-cycle", format!("arm {tag} passes through cycle vertex {x}"));
                }
            }
        }
    }

    // Pairwise blob disjointness and arm interiors against other blobs.
    let flat: Vec<(usize, usize)> = (0..kk).flat_map(|i| [(i, 0), (i, 1)]).collect();
    for (a, &(i, j)) in flat.iter().enumerate() {
        for &(i2, j2) in flat.iter().skip(a + 1) {
            let x = k.blobs[i][j].intersection(&k.blobs[i2][j2]);
            if !x.is_empty() {
                fail(
                    "blobs-disjoint",
                    format!(
                        "blobs ({}, {}) and ({}, {}) share {:?}",
                        i + 1,
                        j + 1,
                        i2 + 1,
                        j2 + 1,
                        x.as_slice()
                    ),
                );
            }
        }
    }
    for &(i, j) in &flat {
        for &x in k.arms[i][j].interior() {
            for &(i2, j2) in &flat {
                if (i2, j2) != (i, j) && k.blobs[i2][j2].contains(x) {
                    fail(
                        "arm-interior-blob",
                        format!(
                            "arm ({}, {}) passes through blob ({}, {}) at {x}",
                            i + 1,
                            j + 1,
                            i2 + 1,
                            j2 + 1
                        ),
                    );
                }
            }
        }
    }
    for (a, &(i, j)) in flat.iter().enumerate() {
        for &(i2, j2) in flat.iter().skip(a + 1) {
            for &x in k.arms[i][j].interior() {
                if k.arms[i2][j2].interior().contains(&x) {
                    fail(
                        "arms-internally-disjoint",
                        format!(
                            "arms ({}, {}) and ({}, {}) share interior vertex {x}",
                            i + 1,
                            j + 1,
                            i2 + 1,
                            j2 + 1
                        ),
                    );
                }
            }
        }
    }
    KrakenVerdict { failures }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlobFamily {
    pub blobs: Vec<VertexSet>,
    pub separation: usize,
    pub diameter_bound: usize,
}

/// Greedy maximality loop: repeatedly find the largest ball avoiding the
/// forbidden set plus a separation-radius halo around the cycle and all
/// previously chosen blobs, trim it to the target size along its BFS order
/// (prefixes stay connected), and stop at the count target or exhaustion.
pub fn find_far_apart_blobs(
    g: &Graph,
    forbidden: &VertexSet,
    cycle: &Cycle,
    params: &KrakenParams,
    p: &ExpanderParams,
    count_target: usize,
) -> BlobFamily {
    let mut blobs: Vec<VertexSet> = Vec::new();
    while blobs.len() < count_target {
        let mut halo_core = cycle.vertex_set();
        for b in &blobs {
            halo_core = halo_core.union(b);
        }
        let halo = g.ball(&halo_core, params.separation, &VertexSet::empty());
        let avoid = forbidden.union(&halo);
        let Some(ball) = find_large_ball_avoiding(g, &avoid, p) else {
            break;
        };
        let avoid_mask = g.mask(&avoid);
        let (order, _) = g.component_bfs_order(ball.start, &avoid_mask);
        if order.len() < params.s {
            break;
        }
        let take = order.len().min(params.blob_size_target);
        blobs.push(VertexSet::new(order[..take].to_vec()));
    }
    BlobFamily {
        blobs,
        separation: params.separation,
        diameter_bound: params.blob_size_target.saturating_sub(1),
    }
}

/// Connected sub-blob of size s: a BFS-order prefix inside the blob from its
/// smallest vertex.
pub fn connected_sub_blob(g: &Graph, blob: &VertexSet, s: usize) -> Option<VertexSet> {
    if blob.len() < s {
        return None;
    }
    let sub = g.induced(blob);
    let no_avoid = vec![false; sub.graph.vertex_count()];
    let (order, _) = sub.graph.component_bfs_order(0, &no_avoid);
    if order.len() < s {
        return None;
    }
    Some(VertexSet::new(
        order[..s].iter().map(|&v| sub.map_vertex(v)).collect(),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum KrakenFailureKind {
    NoCycle,
    ArmShortfall { vertex: usize, arms: usize },
    BlobShortage { anchor: usize },
    ValidationFailed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrakenFailure {
    pub kind: KrakenFailureKind,
    pub stage: String,
    pub detail: String,
    pub params: Option<KrakenParams>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SideConditionReport {
    pub case_tag: CaseTag,
    pub all_anchors_hubs: bool,
    pub hub_count: usize,
    /// |L| <= 2|C|, the "few hubs" side of the dichotomy.
    pub hub_count_small: bool,
    /// Pairwise distance between non-hub anchors measured in G - L.
    pub nonhub_anchor_min_separation: Option<usize>,
    pub nonhub_separation_ok: bool,
    /// Audit outcomes for free cycle vertices before the blob phase.
    pub audits_all_pass: bool,
    pub audit_failures: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KrakenBuild {
    pub kraken: Kraken,
    pub params: KrakenParams,
    pub hub_set: VertexSet,
    pub side: SideConditionReport,
}

const AUDIT_REPAIR_ROUNDS: usize = 50;

fn audits_summary(audits: &[(usize, AuditReport)]) -> (bool, usize) {
    let fails = audits.iter().filter(|(_, a)| !a.all_pass()).count();
    (fails == 0, fails)
}

/// Builds a kraken: shortest cycle, hub links, then far-apart blob links for
/// unsaturated cycle vertices, blob assembly, and a final validation gate.
pub fn build_kraken(
    g: &Graph,
    p: &ExpanderParams,
    config: &KrakenConfig,
) -> std::result::Result<KrakenBuild, KrakenFailure> {
    build_kraken_impl(g, p, config).map_err(|e| match e {
        BuildError::Failure(f) => f,
        BuildError::Bug(err) => KrakenFailure {
            kind: KrakenFailureKind::ValidationFailed,
            stage: "internal".into(),
            detail: err.to_string(),
            params: None,
        },
    })
}

enum BuildError {
    Failure(KrakenFailure),
    Bug(Error),
}

impl From<Error> for BuildError {
    fn from(e: Error) -> BuildError {
        BuildError::Bug(e)
    }
}

fn build_kraken_impl(
    g: &Graph,
    p: &ExpanderParams,
    config: &KrakenConfig,
) -> std::result::Result<KrakenBuild, BuildError> {
    let fail = |kind, stage: &str, detail: String, params: Option<KrakenParams>| {
        Err(BuildError::Failure(KrakenFailure {
            kind,
            stage: stage.into(),
            detail,
            params,
        }))
    };

    let Some(cycle) = g.shortest_cycle() else {
        return fail(KrakenFailureKind::NoCycle, "shortest-cycle", "graph is a forest".into(), None);
    };
    let params = config.instantiate(g, cycle.len())?;
    let n = g.vertex_count();
    let radius = n; // ball growth saturates at the component
    let hub_set: VertexSet = (0..n)
        .filter(|&v| g.degree(v) as f64 >= params.hub_threshold)
        .collect();
    let cyc_vs = cycle.vertex_set();
    let hub_targets = hub_set.difference(&cyc_vs);

    // Phase 1: link cycle vertices to hubs.
    let phase1 = build_path_system(
        g,
        &cycle,
        TargetSet::Hubs(hub_targets.clone()),
        PathCaps::with_max_len(params.arm_len_cap),
        &[],
        VertexSet::empty(),
        radius,
        p,
    )?;
    let (phase1, audits1, audits1_ok) = shorten_and_audit(g, phase1, None, AUDIT_REPAIR_ROUNDS)?;

    let unsaturated: Vec<usize> = cycle
        .vertices()
        .iter()
        .copied()
        .filter(|&v| phase1.usage_of(v) < 2)
        .collect();

    let mut phase2: Option<PathSystem> = None;
    let mut audits_ok = audits1_ok;
    let mut audit_fail_count = audits_summary(&audits1).1;
    if !unsaturated.is_empty() {
        // Phase 2: first-phase vertices (minus the still-open cycle
        // vertices) are off limits; blobs stay clear of hubs and arms.
        let v_prime: VertexSet = unsaturated.iter().copied().collect();
        let forbidden2 = phase1.vertex_set().difference(&v_prime);
        let blob_forbidden = phase1
            .vertex_set()
            .union(&hub_set)
            .union(&cyc_vs);
        let needed: usize = unsaturated.iter().map(|&v| 2 - phase1.usage_of(v)).sum();
        let family = find_far_apart_blobs(g, &blob_forbidden, &cycle, &params, p, needed);
        let sub_blobs: Vec<VertexSet> = family
            .blobs
            .iter()
            .filter_map(|b| connected_sub_blob(g, b, params.s))
            .collect();
        let initial_usage: Vec<(usize, usize)> = cycle
            .vertices()
            .iter()
            .map(|&v| (v, phase1.usage_of(v)))
            .collect();
        let built = build_path_system(
            g,
            &cycle,
            TargetSet::Blobs(sub_blobs),
            PathCaps::with_max_len(params.arm_len_cap),
            &initial_usage,
            forbidden2,
            radius,
            p,
        )?;
        let (built, audits2, audits2_ok) =
            shorten_and_audit(g, built, Some(&phase1), AUDIT_REPAIR_ROUNDS)?;
        audits_ok &= audits2_ok;
        audit_fail_count += audits_summary(&audits2).1;
        phase2 = Some(built);
    }

    // Saturation check: every cycle vertex needs exactly two arms.
    for &v in cycle.vertices() {
        let arms = phase1.usage_of(v) + phase2.as_ref().map_or(0, |s| s.usage_of(v));
        if arms < 2 {
            return fail(
                KrakenFailureKind::ArmShortfall { vertex: v, arms },
                "augmentation",
                format!("cycle vertex {v} has {arms} arms after both phases"),
                Some(params),
            );
        }
    }

    // Assemble arms per cycle vertex in canonical cycle order; within a
    // vertex, sides are ordered by anchor label.
    let kk = cycle.len();
    let mut arms: Vec<Vec<(Path, TargetRef, bool)>> = vec![Vec::new(); kk];
    let pos_of = |v: usize| cycle.vertices().iter().position(|&x| x == v).unwrap();
    for sp in phase1
        .paths
        .iter()
        .chain(phase2.iter().flat_map(|s| s.paths.iter()))
    {
        let is_hub = matches!(sp.target, TargetRef::Hub(_));
        arms[pos_of(sp.cycle_vertex)].push((sp.path.clone(), sp.target, is_hub));
    }
    let mut anchors = Vec::with_capacity(kk);
    let mut arm_pairs = Vec::with_capacity(kk);
    let mut hub_flags = Vec::with_capacity(kk);
    let mut blob_targets: Vec<[Option<VertexSet>; 2]> = Vec::with_capacity(kk);
    let phase2_blobs = phase2.as_ref().map(|s| match &s.targets {
        TargetSet::Blobs(b) => b.clone(),
        _ => Vec::new(),
    });
    for i in 0..kk {
        let mut pair = std::mem::take(&mut arms[i]);
        debug_assert_eq!(pair.len(), 2);
        pair.sort_by_key(|(path, _, _)| path.last());
        let (a0, t0, h0) = pair[0].clone();
        let (a1, t1, h1) = pair[1].clone();
        anchors.push([a0.last(), a1.last()]);
        hub_flags.push([h0, h1]);
        let blob_of = |t: &TargetRef| match t {
            TargetRef::Blob(idx) => phase2_blobs.as_ref().map(|bs| bs[*idx].clone()),
            TargetRef::Hub(_) => None,
        };
        blob_targets.push([blob_of(&t0), blob_of(&t1)]);
        arm_pairs.push([a0, a1]);
    }

    // Blob assembly: blob-anchored arms keep their sub-blob; hub anchors get
    // s-sized neighborhood blobs chosen disjoint from everything in use.
    let mut used: VertexSet = cyc_vs.clone();
    for pair in &arm_pairs {
        for arm in pair {
            for &x in arm.vertices() {
                used.insert(x);
            }
        }
    }
    for row in &blob_targets {
        for b in row.iter().flatten() {
            used = used.union(b);
        }
    }
    let mut blobs: Vec<[VertexSet; 2]> = Vec::with_capacity(kk);
    for i in 0..kk {
        let mut row: [VertexSet; 2] = [VertexSet::empty(), VertexSet::empty()];
        for j in 0..2 {
            if let Some(b) = &blob_targets[i][j] {
                row[j] = b.clone();
                continue;
            }
            let u = anchors[i][j];
            let mut blob = VertexSet::singleton(u);
            for &w in g.neighbors(u) {
                if blob.len() >= params.s {
                    break;
                }
                if !used.contains(w) {
                    blob.insert(w);
                    used.insert(w);
                }
            }
            if blob.len() < params.s {
                return fail(
                    KrakenFailureKind::BlobShortage { anchor: u },
                    "blob-assembly",
                    format!(
                        "anchor {u} has only {} free vertices for a blob of size {}",
                        blob.len() - 1,
                        params.s
                    ),
                    Some(params),
                );
            }
            row[j] = blob;
        }
        blobs.push(row);
    }

    let all_anchors_hubs = hub_flags.iter().all(|r| r[0] && r[1]);
    let kraken = Kraken {
        cycle: cycle.clone(),
        anchors,
        blobs,
        arms: arm_pairs,
        anchor_is_hub: hub_flags,
        case_tag: if all_anchors_hubs {
            CaseTag::Hubs
        } else {
            CaseTag::Blobs
        },
    };

    let verdict = validate_kraken(g, &kraken, &params);
    if !verdict.pass() {
        return fail(
            KrakenFailureKind::ValidationFailed,
            "validate",
            format!("{:?}", verdict.failures),
            Some(params),
        );
    }

    // Side conditions of the hub/blob dichotomy.
    let nonhub_anchors: Vec<usize> = (0..kk)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .filter(|&(i, j)| !kraken.anchor_is_hub[i][j])
        .map(|(i, j)| kraken.anchors[i][j])
        .collect();
    let min_sep = if nonhub_anchors.len() >= 2 {
        let hub_mask = g.mask(&hub_set);
        let mut best = usize::MAX;
        for (a, &u) in nonhub_anchors.iter().enumerate() {
            let dist = g.bfs_distances(&[u], &hub_mask);
            for &w in nonhub_anchors.iter().skip(a + 1) {
                best = best.min(dist[w]);
            }
        }
        Some(best)
    } else {
        None
    };
    let side = SideConditionReport {
        case_tag: kraken.case_tag,
        all_anchors_hubs,
        hub_count: hub_set.len(),
        hub_count_small: hub_set.len() <= 2 * kk,
        nonhub_anchor_min_separation: min_sep,
        nonhub_separation_ok: min_sep.map_or(true, |d| d >= params.separation),
        audits_all_pass: audits_ok,
        audit_failures: audit_fail_count,
    };
    Ok(KrakenBuild {
        kraken,
        params,
        hub_set,
        side,
    })
}
