//! Certificate records: the stable, versioned JSON envelope a run persists,
//! keyed by an FNV-1a hash of the canonical edge list. Timings are volatile
//! and stay out of the serialized record unless explicitly requested.

use crate::assembler::{NestedCertificate, PipelineRun};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::verifier::NestedVerdict;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// 64-bit FNV-1a over the canonical edge-list text of the graph.
pub fn graph_hash(g: &Graph) -> u64 {
    fnv1a64(crate::io::format_graph(g).as_bytes())
}

pub fn graph_hash_hex(g: &Graph) -> String {
    format!("{:016x}", graph_hash(g))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: String,
    pub ok: bool,
    pub summary: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub schema_version: u32,
    pub graph_hash: String,
    pub config: serde_json::Value,
    pub stages: Vec<StageRecord>,
    pub certificate: Option<NestedCertificate>,
    pub verifier: Option<NestedVerdict>,
    pub failure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<Vec<(String, f64)>>,
}

impl CertificateRecord {
    /// Builds the record from a pipeline run, enforcing the gate: a record
    /// never carries a certificate without a passing verdict.
    pub fn from_run(
        g: &Graph,
        config: serde_json::Value,
        run: &PipelineRun,
        include_timings: bool,
    ) -> Result<CertificateRecord> {
        if run.certificate.is_some() && !run.verifier.as_ref().map_or(false, |v| v.pass()) {
            return Err(Error::Internal(
                "refusing to record a certificate without a passing verdict".into(),
            ));
        }
        Ok(CertificateRecord {
            schema_version: SCHEMA_VERSION,
            graph_hash: graph_hash_hex(g),
            config,
            stages: run
                .stages
                .iter()
                .map(|s| StageRecord {
                    stage: s.stage.clone(),
                    ok: s.ok,
                    summary: s.summary.clone(),
                })
                .collect(),
            certificate: run.certificate.clone(),
            verifier: run.verifier.clone(),
            failure: run
                .failure
                .as_ref()
                .map(|f| format!("{}: {}", f.stage, f.detail)),
            timings_ms: include_timings.then(|| run.timings_ms.clone()),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Internal(format!("record serialization failed: {e}")))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<CertificateRecord> {
        serde_json::from_str(text)
            .map_err(|e| Error::Input(format!("certificate record does not parse: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_vectors() {
        // Reference values for the 64-bit FNV-1a function.
        assert_eq!(fnv1a64(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a64(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv1a64(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn graph_hash_tracks_canonical_edges() {
        let a = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let b = Graph::new(3, &[(1, 2), (0, 1), (1, 0)]).unwrap();
        assert_eq!(graph_hash(&a), graph_hash(&b));
        let c = Graph::new(3, &[(0, 1), (0, 2)]).unwrap();
        assert_ne!(graph_hash(&a), graph_hash(&c));
    }
}
