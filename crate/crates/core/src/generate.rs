//! Seeded graph generators. Identical (spec, seed) pairs produce identical
//! graphs; the pairing-model regular generator resamples on defect.

use crate::error::{input_err, Error, Result};
use crate::graph::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GenSpec {
    Complete(usize),
    Gnp(usize, f64),
    Gnm(usize, usize),
    RandomRegular(usize, usize),
    Hypercube(u32),
    TorusGrid(usize, usize),
}

impl FromStr for GenSpec {
    type Err = Error;

    /// Accepts `complete:N`, `gnp:N:P`, `gnm:N:M`, `random_regular:N:D`,
    /// `hypercube:DIM`, `torus_grid:R:C`.
    fn from_str(s: &str) -> Result<GenSpec> {
        let parts: Vec<&str> = s.split(':').collect();
        let usize_arg = |idx: usize| -> Result<usize> {
            parts
                .get(idx)
                .ok_or_else(|| Error::Input(format!("generator spec `{s}` is missing arguments")))?
                .parse()
                .map_err(|_| Error::Input(format!("bad integer in generator spec `{s}`")))
        };
        match parts[0] {
            "complete" => Ok(GenSpec::Complete(usize_arg(1)?)),
            "gnp" => {
                let n = usize_arg(1)?;
                let p: f64 = parts
                    .get(2)
                    .ok_or_else(|| Error::Input(format!("gnp needs a probability in `{s}`")))?
                    .parse()
                    .map_err(|_| Error::Input(format!("bad probability in `{s}`")))?;
                Ok(GenSpec::Gnp(n, p))
            }
            "gnm" => Ok(GenSpec::Gnm(usize_arg(1)?, usize_arg(2)?)),
            "random_regular" => Ok(GenSpec::RandomRegular(usize_arg(1)?, usize_arg(2)?)),
            "hypercube" => Ok(GenSpec::Hypercube(usize_arg(1)? as u32)),
            "torus_grid" => Ok(GenSpec::TorusGrid(usize_arg(1)?, usize_arg(2)?)),
            other => input_err(format!("unknown generator `{other}`")),
        }
    }
}

impl std::fmt::Display for GenSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GenSpec::Complete(n) => write!(f, "complete:{n}"),
            GenSpec::Gnp(n, p) => write!(f, "gnp:{n}:{p}"),
            GenSpec::Gnm(n, m) => write!(f, "gnm:{n}:{m}"),
            GenSpec::RandomRegular(n, d) => write!(f, "random_regular:{n}:{d}"),
            GenSpec::Hypercube(d) => write!(f, "hypercube:{d}"),
            GenSpec::TorusGrid(r, c) => write!(f, "torus_grid:{r}:{c}"),
        }
    }
}

/// Generates the graph for a spec. The RNG stream is fixed per stage so
/// later pipeline stages cannot perturb generation.
pub fn generate_graph(spec: &GenSpec, seed: u64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    match *spec {
        GenSpec::Complete(n) => complete(n),
        GenSpec::Gnp(n, p) => gnp(n, p, &mut rng),
        GenSpec::Gnm(n, m) => gnm(n, m, &mut rng),
        GenSpec::RandomRegular(n, d) => random_regular(n, d, &mut rng),
        GenSpec::Hypercube(dim) => hypercube(dim),
        GenSpec::TorusGrid(r, c) => torus_grid(r, c),
    }
}

pub fn complete(n: usize) -> Result<Graph> {
    if n == 0 {
        return input_err("complete graph needs at least one vertex");
    }
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::new(n, &edges)
}

pub fn gnp(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return input_err(format!("edge probability {p} outside [0, 1]"));
    }
    if n == 0 {
        return input_err("gnp needs at least one vertex");
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges)
}

pub fn gnm(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    if n == 0 {
        return input_err("gnm needs at least one vertex");
    }
    let max_m = n * (n - 1) / 2;
    if m > max_m {
        return input_err(format!("m={m} exceeds C({n},2)={max_m}"));
    }
    // Rejection-sample distinct pairs; sample the complement when m is
    // above half of the possible edges.
    let complement = m > max_m / 2;
    let want = if complement { max_m - m } else { m };
    let mut picked: Vec<(usize, usize)> = Vec::with_capacity(want);
    let mut seen = std::collections::HashSet::new();
    while picked.len() < want {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        let e = (u.min(v), u.max(v));
        if seen.insert(e) {
            picked.push(e);
        }
    }
    if complement {
        let mut edges = Vec::with_capacity(m);
        for u in 0..n {
            for v in u + 1..n {
                if !seen.contains(&(u, v)) {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(n, &edges)
    } else {
        Graph::new(n, &picked)
    }
}

/// Pairing-model d-regular graph: d stubs per vertex are matched; defective
/// matchings (loops or parallel edges) are resampled, locally first, with a
/// full restart when a step dead-ends.
pub fn random_regular(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    if d >= n {
        return input_err(format!("degree {d} needs more than {n} vertices"));
    }
    if (n * d) % 2 != 0 {
        return input_err(format!("n*d = {}*{} is odd; no {d}-regular graph", n, d));
    }
    if d == 0 {
        return Graph::new(n, &[]);
    }
    const MAX_RESTARTS: usize = 1000;
    'attempt: for _ in 0..MAX_RESTARTS {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
        // Fisher-Yates shuffle, driven by the seeded stream.
        for i in (1..stubs.len()).rev() {
            let j = rng.gen_range(0..=i);
            stubs.swap(i, j);
        }
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(n * d / 2);
        let mut present = std::collections::HashSet::new();
        while stubs.len() > 1 {
            let u = stubs[0];
            let mut matched = None;
            // A few random partner draws, then a deterministic sweep.
            for _ in 0..64 {
                let j = rng.gen_range(1..stubs.len());
                let w = stubs[j];
                if w != u && !present.contains(&(u.min(w), u.max(w))) {
                    matched = Some(j);
                    break;
                }
            }
            if matched.is_none() {
                matched = (1..stubs.len()).find(|&j| {
                    let w = stubs[j];
                    w != u && !present.contains(&(u.min(w), u.max(w)))
                });
            }
            match matched {
                Some(j) => {
                    let w = stubs[j];
                    present.insert((u.min(w), u.max(w)));
                    edges.push((u, w));
                    stubs.swap_remove(j);
                    stubs.swap_remove(0);
                }
                None => continue 'attempt,
            }
        }
        return Graph::new(n, &edges);
    }
    input_err(format!(
        "pairing model failed to produce a simple {d}-regular graph on {n} vertices"
    ))
}

pub fn hypercube(dim: u32) -> Result<Graph> {
    if dim == 0 || dim > 20 {
        return input_err(format!("hypercube dimension {dim} outside 1..=20"));
    }
    let n = 1usize << dim;
    let mut edges = Vec::with_capacity(n * dim as usize / 2);
    for v in 0..n {
        for b in 0..dim {
            let w = v ^ (1 << b);
            if v < w {
                edges.push((v, w));
            }
        }
    }
    Graph::new(n, &edges)
}

pub fn torus_grid(rows: usize, cols: usize) -> Result<Graph> {
    if rows < 3 || cols < 3 {
        return input_err("torus grid needs both dimensions at least 3");
    }
    let n = rows * cols;
    let mut edges = Vec::with_capacity(2 * n);
    for i in 0..rows {
        for j in 0..cols {
            let v = i * cols + j;
            edges.push((v, ((i + 1) % rows) * cols + j));
            edges.push((v, i * cols + (j + 1) % cols));
        }
    }
    Graph::new(n, &edges)
}
