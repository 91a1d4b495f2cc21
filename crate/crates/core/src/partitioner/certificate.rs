use std::fmt;

use serde::{Deserialize, Serialize};

use super::Mode;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::refinement::RefineTrace;
use crate::RationalParam;

pub const CERT_FORMAT: &str = "spg-cert/1";

/// A finished partition with the evidence needed to re-check it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub format: String,
    pub epsilon: RationalParam,
    pub r: usize,
    pub mode: Mode,
    pub seed: u64,
    /// Sorted vertex ids per part; parts ordered by smallest id.
    pub parts: Vec<Vec<VertexId>>,
    pub per_part_max_degree: Vec<usize>,
    pub part_count: usize,
    /// `C_r · log2(1/ε)`: the part count bound is `2^bound_value_log2`.
    pub bound_value_log2: f64,
    pub traces: Vec<TraceRecord>,
}

impl Certificate {
    pub fn escalations(&self) -> usize {
        self.traces
            .iter()
            .filter(|t| matches!(t, TraceRecord::Escalation(_)))
            .count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("certificate: {e}")))
    }
}

/// Intermediate assertions checked during an escalation step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// `|Y_i| >= 100` and `|R'| <= (ε/300)|Y_i|`, so every split applies.
    SplitSizes,
    /// Finished parts within `k(1/ε)^{a_0+2r} + k^2`.
    PartCount,
    /// The new sequence is full at the `ε^{13r-8k-1}` threshold.
    SequenceFullness,
    /// Each `S_i` is `ε^{8(r-k)+1}`-sparse.
    SequenceSparsity,
    /// `|R| <= (ε/100)|S_i|`.
    LeftoverSize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Passed,
    Failed,
    Unverified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: Check,
    pub status: CheckStatus,
    pub detail: String,
}

impl CheckRecord {
    pub fn checked(check: Check, ok: bool, detail: String) -> Self {
        let status = if ok {
            CheckStatus::Passed
        } else {
            CheckStatus::Failed
        };
        Self {
            check,
            status,
            detail,
        }
    }

    pub fn unverified(check: Check, detail: String) -> Self {
        Self {
            check,
            status: CheckStatus::Unverified,
            detail,
        }
    }
}

/// Sizes and outcomes of one escalation step.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EscalationTrace {
    /// `k` before the step.
    pub k: usize,
    pub z0_size: usize,
    pub z0_descent: Vec<VertexId>,
    pub refinements: Vec<RefineTrace>,
    pub y_sizes: Vec<usize>,
    pub greedy_parts: usize,
    pub r_prime: usize,
    pub b_sizes: Vec<usize>,
    pub r_tilde: usize,
    pub split_retries: Vec<u32>,
    pub checks: Vec<CheckRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceRecord {
    Escalation(EscalationTrace),
    /// Search for a spanning clique once `k = r`.
    Clique { found: bool, level: Option<usize> },
    Fallback { k: usize, reason: String },
    Finish {
        k: usize,
        leftover: usize,
        parts: usize,
        descents: usize,
    },
}

/// Why a certificate was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub part: Option<usize>,
    pub vertex: Option<VertexId>,
    pub reason: String,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "certificate rejected")?;
        if let Some(p) = self.part {
            write!(f, " at part {p}")?;
        }
        if let Some(v) = self.vertex {
            write!(f, ", vertex {v}")?;
        }
        write!(f, ": {}", self.reason)
    }
}

impl std::error::Error for Rejection {}

fn reject(part: Option<usize>, vertex: Option<VertexId>, reason: String) -> Rejection {
    Rejection {
        part,
        vertex,
        reason,
    }
}

/// Re-checks a certificate against `g` from the adjacency lists alone.
///
/// Accepts iff the parts partition `V(G)`, every part is `ε`-sparse, the
/// recorded maximum degrees are the true ones and `part_count` matches.
pub fn verify_certificate(g: &Graph, cert: &Certificate) -> std::result::Result<(), Rejection> {
    if cert.format != CERT_FORMAT {
        return Err(reject(None, None, format!("unknown format {:?}", cert.format)));
    }
    let (num, den) = (cert.epsilon.num() as u128, cert.epsilon.den() as u128);
    if num == 0 || num > den {
        return Err(reject(None, None, format!("epsilon {} not in (0, 1]", cert.epsilon)));
    }
    if cert.part_count != cert.parts.len() {
        return Err(reject(
            None,
            None,
            format!("part_count {} but {} parts", cert.part_count, cert.parts.len()),
        ));
    }
    if cert.per_part_max_degree.len() != cert.parts.len() {
        return Err(reject(None, None, "per_part_max_degree length mismatch".into()));
    }
    let n = g.n();
    let mut owner = vec![usize::MAX; n];
    for (i, part) in cert.parts.iter().enumerate() {
        for (j, &v) in part.iter().enumerate() {
            if v >= n {
                return Err(reject(Some(i), Some(v), format!("vertex out of range (n = {n})")));
            }
            if j > 0 && part[j - 1] >= v {
                return Err(reject(Some(i), Some(v), "part not strictly sorted".into()));
            }
            if owner[v] != usize::MAX {
                return Err(reject(Some(i), Some(v), format!("vertex also in part {}", owner[v])));
            }
            owner[v] = i;
        }
    }
    if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(reject(None, Some(v), "vertex in no part".into()));
    }
    for (i, part) in cert.parts.iter().enumerate() {
        let mut max = 0;
        for &v in part {
            let d = g.neighbors(v).iter().filter(|&&u| owner[u as usize] == i).count();
            if d as u128 * den > num * part.len() as u128 {
                return Err(reject(
                    Some(i),
                    Some(v),
                    format!("degree {d} above {} * {}", cert.epsilon, part.len()),
                ));
            }
            max = max.max(d);
        }
        if max != cert.per_part_max_degree[i] {
            return Err(reject(
                Some(i),
                None,
                format!("recorded max degree {} but found {max}", cert.per_part_max_degree[i]),
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn cert(parts: Vec<Vec<usize>>, degs: Vec<usize>) -> Certificate {
        Certificate {
            format: CERT_FORMAT.into(),
            epsilon: "3/10".parse().unwrap(),
            r: 2,
            mode: Mode::Practical,
            seed: 0,
            part_count: parts.len(),
            parts,
            per_part_max_degree: degs,
            bound_value_log2: 1.0,
            traces: Vec::new(),
        }
    }

    #[test]
    fn empty_graph_empty_certificate() {
        let g = Graph::from_edge_list(0, &[]).unwrap();
        assert!(verify_certificate(&g, &cert(vec![], vec![])).is_ok());
    }

    #[test]
    fn petersen_whole_and_tampered() {
        let g = petersen();
        let good = cert(vec![(0..10).collect()], vec![3]);
        assert!(verify_certificate(&g, &good).is_ok());

        let split = cert(vec![vec![0, 2, 3, 4, 5, 6, 7, 8, 9], vec![1]], vec![3, 0]);
        // degree 3 > 0.3 * 9
        let err = verify_certificate(&g, &split).unwrap_err();
        assert_eq!(err.part, Some(0));
        assert!(err.vertex.is_some());

        let mut missing = good.clone();
        missing.parts[0].pop();
        assert_eq!(verify_certificate(&g, &missing).unwrap_err().vertex, Some(9));

        let mut wrong_count = good.clone();
        wrong_count.part_count = 2;
        assert!(verify_certificate(&g, &wrong_count).is_err());

        let mut wrong_degree = good;
        wrong_degree.per_part_max_degree = vec![2];
        assert!(verify_certificate(&g, &wrong_degree).is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut c = cert(vec![vec![0, 1]], vec![0]);
        c.traces.push(TraceRecord::Finish {
            k: 0,
            leftover: 2,
            parts: 1,
            descents: 0,
        });
        let text = c.to_json();
        assert!(text.contains("\"spg-cert/1\""));
        assert!(text.contains("\"3/10\""));
        assert!(text.contains("\"kind\": \"finish\""));
        assert_eq!(Certificate::from_json(&text).unwrap(), c);
        assert!(Certificate::from_json("{").is_err());
    }
}
