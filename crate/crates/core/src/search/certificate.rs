use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coverability::FourCycle;
use crate::error::{Error, Result};
use crate::hypergraph::Vertex;
use crate::io::Labels;

pub const CERT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Ktt(usize),
    Torus,
    ProjectivePlane,
    Sphere,
}

impl Target {
    pub fn name(&self) -> &'static str {
        match self {
            Target::Ktt(_) => "ktt",
            Target::Torus => "torus",
            Target::ProjectivePlane => "rp2",
            Target::Sphere => "sphere",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Ktt(t) => write!(f, "ktt{t}"),
            other => f.write_str(other.name()),
        }
    }
}

/// A witness for a homeomorph: named pattern vertices, boundary cycles and
/// one triangle list per cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomeomorphCertificate {
    pub target: Target,
    pub embedding: BTreeMap<String, Vertex>,
    pub cycles: Vec<FourCycle>,
    /// Triangles of disk `i`, bounded by `cycles[i]`. Kept as raw lists so
    /// that a verifier sees repeated or degenerate triangles.
    pub disks: Vec<Vec<[Vertex; 3]>>,
    pub seed: u64,
    pub retries: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct CertificateDoc {
    cert_version: u32,
    target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t: Option<usize>,
    embedding: BTreeMap<String, String>,
    cycles: Vec<Vec<String>>,
    disks: Vec<Vec<Vec<String>>>,
    seed: u64,
    retries: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    verification: Option<serde_json::Value>,
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedCertificate(msg.into())
}

impl HomeomorphCertificate {
    /// JSON document with vertex labels; `verification` is attached verbatim.
    pub fn to_json(
        &self,
        labels: &Labels,
        verification: Option<serde_json::Value>,
    ) -> serde_json::Value {
        let name = |v: Vertex| labels.name(v).to_string();
        let doc = CertificateDoc {
            cert_version: CERT_VERSION,
            target: self.target.name().into(),
            t: match self.target {
                Target::Ktt(t) => Some(t),
                _ => None,
            },
            embedding: self
                .embedding
                .iter()
                .map(|(k, &v)| (k.clone(), name(v)))
                .collect(),
            cycles: self
                .cycles
                .iter()
                .map(|c| c.0.iter().map(|&v| name(v)).collect())
                .collect(),
            disks: self
                .disks
                .iter()
                .map(|d| {
                    d.iter()
                        .map(|t| t.iter().map(|&v| name(v)).collect())
                        .collect()
                })
                .collect(),
            seed: self.seed,
            retries: self.retries,
            verification,
        };
        serde_json::to_value(doc).expect("certificate serializes")
    }

    pub fn from_json(value: &serde_json::Value, labels: &Labels) -> Result<Self> {
        let doc: CertificateDoc =
            serde_json::from_value(value.clone()).map_err(|e| malformed(e.to_string()))?;
        if doc.cert_version != CERT_VERSION {
            return Err(malformed(format!(
                "unsupported cert_version {}",
                doc.cert_version
            )));
        }
        let target = match (doc.target.as_str(), doc.t) {
            ("ktt", Some(t)) if t >= 3 => Target::Ktt(t),
            ("ktt", _) => return Err(malformed("ktt target needs t >= 3")),
            ("torus", _) => Target::Torus,
            ("rp2", _) => Target::ProjectivePlane,
            ("sphere", _) => Target::Sphere,
            (other, _) => return Err(malformed(format!("unknown target {other:?}"))),
        };
        let id = |s: &String| {
            labels
                .id(s)
                .ok_or_else(|| malformed(format!("unknown vertex {s:?}")))
        };
        let embedding = doc
            .embedding
            .iter()
            .map(|(k, v)| Ok((k.clone(), id(v)?)))
            .collect::<Result<_>>()?;
        let cycles = doc
            .cycles
            .iter()
            .map(|c| {
                let vs: Vec<Vertex> = c.iter().map(id).collect::<Result<_>>()?;
                let arr: [Vertex; 4] = vs
                    .try_into()
                    .map_err(|_| malformed("every cycle must list 4 vertices"))?;
                Ok(FourCycle(arr))
            })
            .collect::<Result<_>>()?;
        let disks = doc
            .disks
            .iter()
            .map(|d| {
                d.iter()
                    .map(|t| {
                        let vs: Vec<Vertex> = t.iter().map(id).collect::<Result<_>>()?;
                        vs.try_into()
                            .map_err(|_| malformed("every triangle must list 3 vertices"))
                    })
                    .collect::<Result<Vec<[Vertex; 3]>>>()
            })
            .collect::<Result<_>>()?;
        let cert = Self {
            target,
            embedding,
            cycles,
            disks,
            seed: doc.seed,
            retries: doc.retries,
        };
        cert.check_shape()?;
        Ok(cert)
    }

    /// Structural sanity independent of the hypergraph.
    pub fn check_shape(&self) -> Result<()> {
        if self.cycles.is_empty() {
            return Err(malformed("no cycles"));
        }
        if self.cycles.len() != self.disks.len() {
            return Err(malformed(format!(
                "{} cycles but {} disks",
                self.cycles.len(),
                self.disks.len()
            )));
        }
        Ok(())
    }
}
