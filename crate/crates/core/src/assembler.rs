//! Outer-cycle assembly around a kraken: expand anchor blobs into disjoint
//! landing zones, link consecutive arms with internally disjoint paths, walk
//! the arms and links into the outer cycle, and gate everything behind the
//! independent verifier.

use crate::error::{Error, Result};
use crate::expander::{extract_expander_subgraph, ExpanderParams, TOL, epsilon};
use crate::graph::{canonical_cycle, Cycle, Graph, Path, VertexSet};
use crate::kraken::{build_kraken, CaseTag, Kraken, KrakenConfig, KrakenParams};
use crate::verifier::{verify_nested_no_crossings, NestedVerdict};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SegmentKind {
    /// Arm between cycle vertex i and an anchor (side 0 or 1), walked in the
    /// direction the outer cycle passes it.
    Arm { cycle_index: usize, side: u8 },
    /// Piece of a link inside an expanded blob.
    BlobTraverse { cycle_index: usize, side: u8 },
    /// The blob-to-blob core of link i.
    LinkCore { index: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OuterSegment {
    pub kind: SegmentKind,
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateProvenance {
    pub case_tag: CaseTag,
    pub kraken_cycle_len: usize,
    pub segments: Vec<OuterSegment>,
}

/// Outer cycle, inner cycle, the positions of inner vertices along the
/// outer, and where each outer stretch came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedCertificate {
    pub outer: Cycle,
    pub inner: Cycle,
    /// (vertex, index into the outer's canonical sequence), sorted by index.
    pub inner_positions: Vec<(usize, usize)>,
    pub provenance: CertificateProvenance,
}

impl NestedCertificate {
    /// Re-checks every certificate invariant against a graph: both cycles
    /// valid, V(inner) within V(outer), edge-disjointness, crossing-freeness,
    /// position-map consistency, and cyclic order preservation.
    pub fn validate(&self, g: &Graph) -> std::result::Result<(), String> {
        let verdict = verify_nested_no_crossings(g, self.outer.vertices(), self.inner.vertices());
        if !verdict.pass() {
            return Err(format!("verifier failures: {:?}", verdict.failures));
        }
        let outer = self.outer.vertices();
        for &(v, idx) in &self.inner_positions {
            if idx >= outer.len() || outer[idx] != v {
                return Err(format!("position map wrong for vertex {v}"));
            }
        }
        if self.inner_positions.len() != self.inner.len() {
            return Err("position map size mismatch".into());
        }
        // Inner vertices must appear along the outer in inner-cycle order
        // (up to rotation/reflection).
        let by_outer_order: Vec<usize> = self.inner_positions.iter().map(|&(v, _)| v).collect();
        if !cyclically_equal(&by_outer_order, self.inner.vertices()) {
            return Err("inner order does not match outer traversal order".into());
        }
        Ok(())
    }
}

fn cyclically_equal(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len() && canonical_cycle(a) == canonical_cycle(b)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssemblyFailure {
    pub stage: String,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct AssemblyConfig {
    /// Expansion radius for non-hub anchor blobs; shrunk per colliding pair
    /// until the expanded blobs are pairwise disjoint.
    pub expand_radius: Option<usize>,
    /// Target size for hub-anchor landing zones.
    pub expand_target: Option<usize>,
    /// Cap for the blob-to-blob link core (default m).
    pub q_len: Option<usize>,
    /// Cap for a whole anchor-to-anchor link (default 30m).
    pub p_len: Option<usize>,
}

fn default_expand_radius(n: usize) -> usize {
    let ll = (n.max(3) as f64).ln().ln().max(0.0);
    (ll.powi(10).ceil() as usize).clamp(1, n)
}

/// Expanded landing zones, one per anchor, pairwise disjoint. Non-hub
/// anchors get the ball around their blob grown off-hubs and off-kraken;
/// hub anchors get their anchor plus free neighbors. Collisions shrink the
/// radius of the colliding pair down to 0, where kraken validity guarantees
/// disjointness.
pub fn expand_anchor_blobs(
    g: &Graph,
    k: &Kraken,
    hub_set: &VertexSet,
    cfg: &AssemblyConfig,
    params: &KrakenParams,
) -> std::result::Result<Vec<[VertexSet; 2]>, AssemblyFailure> {
    let n = g.vertex_count();
    let kk = k.cycle.len();
    let r0 = cfg.expand_radius.unwrap_or_else(|| default_expand_radius(n));
    let expand_target = cfg.expand_target.unwrap_or(2 * params.s);
    let cyc_vs = k.cycle.vertex_set();
    let arm_vs = k.arm_vertices();

    let flat: Vec<(usize, usize)> = (0..kk).flat_map(|i| [(i, 0), (i, 1)]).collect();
    let mut radii = vec![r0; flat.len()];
    let grow_one = |idx: usize, radius: usize| -> VertexSet {
        let (i, j) = flat[idx];
        let anchor = k.anchors[i][j];
        let blob = &k.blobs[i][j];
        // Avoid the cycle, every arm vertex except the own anchor, and all
        // hubs; the own blob is exempt so it can seed the ball.
        let mut avoid = cyc_vs
            .union(&arm_vs)
            .union(hub_set)
            .difference(blob);
        avoid.remove(anchor);
        g.ball(blob, radius, &avoid)
    };

    let mut expanded: Vec<VertexSet> = Vec::with_capacity(flat.len());
    for (idx, &(i, j)) in flat.iter().enumerate() {
        if k.anchor_is_hub[i][j] {
            expanded.push(VertexSet::empty()); // assigned below
        } else {
            expanded.push(grow_one(idx, radii[idx]));
        }
    }
    // Shrink colliding non-hub pairs until pairwise disjoint.
    loop {
        let mut collision = None;
        'scan: for a in 0..flat.len() {
            for b in a + 1..flat.len() {
                if !expanded[a].is_empty()
                    && !expanded[b].is_empty()
                    && !expanded[a].is_disjoint(&expanded[b])
                {
                    collision = Some((a, b));
                    break 'scan;
                }
            }
        }
        let Some((a, b)) = collision else { break };
        if radii[a] == 0 && radii[b] == 0 {
            return Err(AssemblyFailure {
                stage: "expand-blobs".into(),
                detail: format!(
                    "expanded blobs {:?} and {:?} overlap even at radius 0",
                    flat[a], flat[b]
                ),
            });
        }
        radii[a] = radii[a].saturating_sub(1);
        radii[b] = radii[b].saturating_sub(1);
        expanded[a] = grow_one(a, radii[a]);
        expanded[b] = grow_one(b, radii[b]);
    }

    // Hub anchors: the anchor itself plus free neighbors, claimed in index
    // order, disjoint from everything above and from each other.
    let mut used = cyc_vs.union(&arm_vs);
    for e in &expanded {
        used = used.union(e);
    }
    for (idx, &(i, j)) in flat.iter().enumerate() {
        if !k.anchor_is_hub[i][j] {
            continue;
        }
        let u = k.anchors[i][j];
        let mut zone = VertexSet::singleton(u);
        for &w in g.neighbors(u) {
            if zone.len() >= expand_target {
                break;
            }
            if !used.contains(w) {
                zone.insert(w);
                used.insert(w);
            }
        }
        expanded[idx] = zone;
    }

    let mut out = Vec::with_capacity(kk);
    for i in 0..kk {
        out.push([expanded[2 * i].clone(), expanded[2 * i + 1].clone()]);
    }
    Ok(out)
}

/// A link with the boundaries of its blob-to-blob core, so provenance can
/// distinguish blob traversal from the core.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkPath {
    /// Runs from anchor (i, 2) to anchor (i+1, 1).
    pub path: Path,
    /// Index range [q_start, q_end] of the core inside `path.vertices()`.
    pub q_start: usize,
    pub q_end: usize,
    pub avoid_within_allowance: bool,
}

/// Links consecutive arms: for each i, a path from anchor (i, 2) to anchor
/// (i+1, 1) through the expanded blobs, avoiding the cycle, all arms, all
/// previous links, and every other expanded blob. Built in ascending order.
pub fn link_arms(
    g: &Graph,
    k: &Kraken,
    expanded: &[[VertexSet; 2]],
    cfg: &AssemblyConfig,
    params: &KrakenParams,
    p: &ExpanderParams,
) -> std::result::Result<Vec<LinkPath>, AssemblyFailure> {
    let kk = k.cycle.len();
    let q_len = cfg.q_len.unwrap_or(params.m);
    let p_len = cfg.p_len.unwrap_or(30 * params.m);
    let cyc_vs = k.cycle.vertex_set();
    let arm_vs = k.arm_vertices();
    let mut links: Vec<LinkPath> = Vec::with_capacity(kk);

    for i in 0..kk {
        let inext = (i + 1) % kk;
        let from_anchor = k.anchors[i][1];
        let to_anchor = k.anchors[inext][0];
        let zone_from = &expanded[i][1];
        let zone_to = &expanded[inext][0];

        let mut avoid = cyc_vs.union(&arm_vs);
        for l in &links {
            for &x in l.path.vertices() {
                avoid.insert(x);
            }
        }
        for (a, row) in expanded.iter().enumerate() {
            for (b, zone) in row.iter().enumerate() {
                if (a, b) != (i, 1) && (a, b) != (inext, 0) {
                    avoid = avoid.union(zone);
                }
            }
        }
        avoid = avoid.difference(zone_from).difference(zone_to);
        avoid.remove(from_anchor);
        avoid.remove(to_anchor);

        let x1 = zone_from.difference(&avoid);
        let x2 = zone_to.difference(&avoid);
        if x1.is_empty() || x2.is_empty() {
            return Err(AssemblyFailure {
                stage: format!("link-{}", i + 1),
                detail: "landing zones exhausted by earlier links".into(),
            });
        }
        let Some(core) = crate::expander::link_sets(g, &x1, &x2, &avoid, q_len) else {
            return Err(AssemblyFailure {
                stage: format!("link-{}", i + 1),
                detail: format!(
                    "no path of length <= {q_len} between landing zones of anchors {from_anchor} and {to_anchor}"
                ),
            });
        };

        // Extend the core through each zone to its anchor, inside the zone.
        let head = extend_inside_zone(g, zone_from, &core, core.first(), from_anchor).map_err(
            |detail| AssemblyFailure {
                stage: format!("link-{}", i + 1),
                detail,
            },
        )?;
        let tail = extend_inside_zone(g, zone_to, &core, core.last(), to_anchor).map_err(
            |detail| AssemblyFailure {
                stage: format!("link-{}", i + 1),
                detail,
            },
        )?;

        // from_anchor .. core.first .. core.last .. to_anchor
        let mut verts: Vec<usize> = Vec::new();
        verts.extend(head.iter().rev().copied());
        let q_start = verts.len();
        verts.extend(core.vertices().iter().copied());
        let q_end = verts.len() - 1;
        verts.extend(tail.iter().copied());
        let path = Path::new(g, verts).map_err(|e| AssemblyFailure {
            stage: format!("link-{}", i + 1),
            detail: format!("assembled link is not a simple path: {e}"),
        })?;
        if path.len() > p_len {
            return Err(AssemblyFailure {
                stage: format!("link-{}", i + 1),
                detail: format!("link length {} exceeds cap {p_len}", path.len()),
            });
        }
        let zone_size = zone_from.len().min(zone_to.len());
        let allowance = epsilon(zone_size as f64, p) * zone_size as f64 / 4.0;
        links.push(LinkPath {
            path,
            q_start,
            q_end,
            avoid_within_allowance: (avoid.len() as f64) <= allowance + TOL,
        });
    }
    Ok(links)
}

/// Path from the zone endpoint of the core to the anchor, strictly inside
/// the zone (the core touches the zone only at that endpoint). Returns the
/// vertices strictly between the core endpoint and the far end, plus the
/// anchor, ordered from the core endpoint outward (exclusive of it).
fn extend_inside_zone(
    g: &Graph,
    zone: &VertexSet,
    core: &Path,
    zone_endpoint: usize,
    anchor: usize,
) -> std::result::Result<Vec<usize>, String> {
    if zone_endpoint == anchor {
        return Ok(Vec::new());
    }
    let mut mask = vec![true; g.vertex_count()];
    for x in zone.iter() {
        mask[x] = false;
    }
    for &x in core.vertices() {
        if x != zone_endpoint {
            mask[x] = true;
        }
    }
    let ext = g
        .shortest_path_masked(
            &VertexSet::singleton(zone_endpoint),
            &VertexSet::singleton(anchor),
            &mask,
        )
        .ok_or_else(|| format!("zone around anchor {anchor} is not internally connected"))?;
    Ok(ext.vertices()[1..].to_vec())
}

/// Walks arms and links into the outer cycle: v_i, arm (i,2) out to its
/// anchor, link i, arm (i+1,1) back in, around the whole inner cycle. The
/// inner vertices appear along the outer in inner-cycle order, which is what
/// makes the inner edges non-crossing.
pub fn assemble(
    g: &Graph,
    k: &Kraken,
    links: &[LinkPath],
) -> Result<NestedCertificate> {
    let kk = k.cycle.len();
    if links.len() != kk {
        return Err(Error::Internal(format!(
            "need {kk} links, got {}",
            links.len()
        )));
    }
    let vs = k.cycle.vertices();
    let mut walk: Vec<usize> = vec![vs[0]];
    let mut segments: Vec<OuterSegment> = Vec::new();
    for i in 0..kk {
        let inext = (i + 1) % kk;
        let out_arm = &k.arms[i][1];
        segments.push(OuterSegment {
            kind: SegmentKind::Arm {
                cycle_index: i,
                side: 1,
            },
            vertices: out_arm.vertices().to_vec(),
        });
        walk.extend(out_arm.vertices()[1..].iter().copied());

        let link = &links[i];
        let lv = link.path.vertices();
        if link.q_start > 0 {
            segments.push(OuterSegment {
                kind: SegmentKind::BlobTraverse {
                    cycle_index: i,
                    side: 1,
                },
                vertices: lv[..=link.q_start].to_vec(),
            });
        }
        segments.push(OuterSegment {
            kind: SegmentKind::LinkCore { index: i },
            vertices: lv[link.q_start..=link.q_end].to_vec(),
        });
        if link.q_end + 1 < lv.len() {
            segments.push(OuterSegment {
                kind: SegmentKind::BlobTraverse {
                    cycle_index: inext,
                    side: 0,
                },
                vertices: lv[link.q_end..].to_vec(),
            });
        }
        walk.extend(lv[1..].iter().copied());

        let in_arm = &k.arms[inext][0];
        let rev = in_arm.reversed();
        segments.push(OuterSegment {
            kind: SegmentKind::Arm {
                cycle_index: inext,
                side: 0,
            },
            vertices: rev.vertices().to_vec(),
        });
        walk.extend(rev.vertices()[1..].iter().copied());
    }
    let last = walk.pop();
    if last != Some(vs[0]) {
        return Err(Error::Internal("outer walk did not close at the start".into()));
    }
    let outer = Cycle::new(g, walk).map_err(|e| {
        Error::Internal(format!("assembled outer walk is not a cycle: {e}"))
    })?;

    let cert = finish_certificate(g, outer, k.cycle.clone(), k.case_tag, segments)?;
    Ok(cert)
}

fn finish_certificate(
    g: &Graph,
    outer: Cycle,
    inner: Cycle,
    case_tag: CaseTag,
    segments: Vec<OuterSegment>,
) -> Result<NestedCertificate> {
    let mut inner_positions: Vec<(usize, usize)> = inner
        .vertices()
        .iter()
        .map(|&v| {
            let idx = outer
                .vertices()
                .iter()
                .position(|&x| x == v)
                .ok_or_else(|| Error::Internal(format!("inner vertex {v} missing from outer")))?;
            Ok((v, idx))
        })
        .collect::<Result<_>>()?;
    inner_positions.sort_by_key(|&(_, idx)| idx);
    let cert = NestedCertificate {
        inner_positions,
        provenance: CertificateProvenance {
            case_tag,
            kraken_cycle_len: inner.len(),
            segments,
        },
        outer,
        inner,
    };
    cert.validate(g).map_err(Error::Internal)?;
    Ok(cert)
}

/// Maps a certificate into another labelling (e.g. expander-subgraph labels
/// back to the input graph), re-canonicalizing and re-validating against the
/// target graph.
impl NestedCertificate {
    pub fn relabel(&self, g: &Graph, to_original: &[usize]) -> Result<NestedCertificate> {
        let map = |v: usize| to_original[v];
        let outer = Cycle::new(g, self.outer.vertices().iter().map(|&v| map(v)).collect())?;
        let inner = Cycle::new(g, self.inner.vertices().iter().map(|&v| map(v)).collect())?;
        let segments = self
            .provenance
            .segments
            .iter()
            .map(|s| OuterSegment {
                kind: s.kind,
                vertices: s.vertices.iter().map(|&v| map(v)).collect(),
            })
            .collect();
        finish_certificate(g, outer, inner, self.provenance.case_tag, segments)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageOutcome {
    pub stage: String,
    pub ok: bool,
    pub summary: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineFailure {
    pub stage: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineRun {
    pub stages: Vec<StageOutcome>,
    pub certificate: Option<NestedCertificate>,
    pub failure: Option<PipelineFailure>,
    pub verifier: Option<NestedVerdict>,
    pub params: Option<KrakenParams>,
    /// Wall-clock per stage; excluded from canonical serializations.
    pub timings_ms: Vec<(String, f64)>,
}

impl PipelineRun {
    pub fn succeeded(&self) -> bool {
        self.certificate.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub eps1: f64,
    /// Expansion-scale k; defaults to eps1 * d(G).
    pub k: Option<f64>,
    pub search_budget: usize,
    pub kraken: KrakenConfig,
    pub assembly: AssemblyConfig,
}

impl Default for PipelineConfig {
    fn default() -> PipelineConfig {
        PipelineConfig {
            eps1: 0.1,
            k: None,
            search_budget: crate::expander::DEFAULT_SEARCH_BUDGET,
            kraken: KrakenConfig::default(),
            assembly: AssemblyConfig::default(),
        }
    }
}

/// The whole route: expander extraction, kraken construction, blob
/// expansion, arm linking, assembly, and a final independent verification.
/// Certificates come out in the input graph's labels; a certificate is never
/// returned without the verifier passing it.
pub fn run_pipeline(g: &Graph, config: &PipelineConfig) -> Result<PipelineRun> {
    let mut run = PipelineRun {
        stages: Vec::new(),
        certificate: None,
        failure: None,
        verifier: None,
        params: None,
        timings_ms: Vec::new(),
    };
    let mut clock = std::time::Instant::now();
    let mut tick = |run: &mut PipelineRun, stage: &str| {
        let dt = clock.elapsed().as_secs_f64() * 1e3;
        run.timings_ms.push((stage.to_string(), dt));
        clock = std::time::Instant::now();
    };

    if g.edge_count() == 0 {
        run.stages.push(StageOutcome {
            stage: "extract".into(),
            ok: false,
            summary: "graph has no edges".into(),
        });
        run.failure = Some(PipelineFailure {
            stage: "extract".into(),
            detail: "graph has no edges".into(),
        });
        return Ok(run);
    }
    let d = g.average_degree().to_f64();
    let p = match config.k {
        Some(k) => ExpanderParams::new(config.eps1, k)?,
        None => ExpanderParams::with_degree(config.eps1, d)?,
    };

    let sub = match extract_expander_subgraph(g, &p, config.search_budget) {
        Ok((sub, report)) => {
            run.stages.push(StageOutcome {
                stage: "extract".into(),
                ok: true,
                summary: format!(
                    "|H|={}, d(H)={}, delta(H)={}, splits={}",
                    sub.graph.vertex_count(),
                    report.d_output,
                    report.min_degree_output,
                    report.splits
                ),
            });
            tick(&mut run, "extract");
            sub
        }
        Err(failure) => {
            run.stages.push(StageOutcome {
                stage: "extract".into(),
                ok: false,
                summary: failure.trace.join("; "),
            });
            tick(&mut run, "extract");
            run.failure = Some(PipelineFailure {
                stage: "extract".into(),
                detail: failure.trace.join("; "),
            });
            return Ok(run);
        }
    };
    let h = &sub.graph;

    let build = match build_kraken(h, &p, &config.kraken) {
        Ok(build) => {
            run.stages.push(StageOutcome {
                stage: "kraken".into(),
                ok: true,
                summary: format!(
                    "k={}, case={:?}, s={}, m={}, hubs={}",
                    build.params.k,
                    build.kraken.case_tag,
                    build.params.s,
                    build.params.m,
                    build.side.hub_count
                ),
            });
            tick(&mut run, "kraken");
            run.params = Some(build.params);
            build
        }
        Err(failure) => {
            run.stages.push(StageOutcome {
                stage: "kraken".into(),
                ok: false,
                summary: format!("{}: {}", failure.stage, failure.detail),
            });
            tick(&mut run, "kraken");
            run.params = failure.params;
            run.failure = Some(PipelineFailure {
                stage: format!("kraken/{}", failure.stage),
                detail: failure.detail,
            });
            return Ok(run);
        }
    };

    let expanded = match expand_anchor_blobs(h, &build.kraken, &build.hub_set, &config.assembly, &build.params)
    {
        Ok(e) => {
            run.stages.push(StageOutcome {
                stage: "expand-blobs".into(),
                ok: true,
                summary: format!(
                    "zones sized {:?}",
                    e.iter()
                        .flat_map(|r| r.iter().map(|z| z.len()))
                        .collect::<Vec<_>>()
                ),
            });
            tick(&mut run, "expand-blobs");
            e
        }
        Err(failure) => {
            run.stages.push(StageOutcome {
                stage: "expand-blobs".into(),
                ok: false,
                summary: failure.detail.clone(),
            });
            tick(&mut run, "expand-blobs");
            run.failure = Some(PipelineFailure {
                stage: failure.stage,
                detail: failure.detail,
            });
            return Ok(run);
        }
    };

    let links = match link_arms(h, &build.kraken, &expanded, &config.assembly, &build.params, &p) {
        Ok(l) => {
            run.stages.push(StageOutcome {
                stage: "link-arms".into(),
                ok: true,
                summary: format!(
                    "link lengths {:?}",
                    l.iter().map(|x| x.path.len()).collect::<Vec<_>>()
                ),
            });
            tick(&mut run, "link-arms");
            l
        }
        Err(failure) => {
            run.stages.push(StageOutcome {
                stage: "link-arms".into(),
                ok: false,
                summary: failure.detail.clone(),
            });
            tick(&mut run, "link-arms");
            run.failure = Some(PipelineFailure {
                stage: failure.stage,
                detail: failure.detail,
            });
            return Ok(run);
        }
    };

    let cert_local = assemble(h, &build.kraken, &links)?;
    let cert = cert_local.relabel(g, &sub.to_original)?;
    tick(&mut run, "assemble");

    let verdict = verify_nested_no_crossings(g, cert.outer.vertices(), cert.inner.vertices());
    tick(&mut run, "verify");
    if !verdict.pass() {
        // The pipeline must never emit an unverified certificate.
        return Err(Error::Internal(format!(
            "pipeline produced a certificate the verifier rejects: {:?}",
            verdict.failures
        )));
    }
    run.stages.push(StageOutcome {
        stage: "assemble".into(),
        ok: true,
        summary: format!(
            "outer length {}, inner length {}",
            cert.outer.len(),
            cert.inner.len()
        ),
    });
    run.verifier = Some(verdict);
    run.certificate = Some(cert);
    Ok(run)
}
