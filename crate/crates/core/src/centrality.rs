//! Centrality reports and the classical PageRank baseline.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;

/// Absolute score difference under which two vertices share a rank.
pub const DEFAULT_TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Pagerank,
    Ctqw,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Pagerank => "pagerank",
            Method::Ctqw => "ctqw",
        })
    }
}

/// Per-vertex scores normalized to sum 1, with the induced ranking.
///
/// `ranking` lists tie groups from the most to the least central; each group
/// holds 0-based vertex indices in ascending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityReport {
    pub method: Method,
    pub scores: Vec<f64>,
    pub ranking: Vec<Vec<usize>>,
    pub tie_tolerance: f64,
}

impl CentralityReport {
    /// Normalizes non-negative raw scores and groups ties.
    pub fn from_scores(method: Method, raw: &[f64], tie_tolerance: f64) -> Result<Self> {
        if raw.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidArgument(
                "scores must be finite and non-negative".into(),
            ));
        }
        let total: f64 = raw.iter().sum();
        if total <= 0.0 {
            return Err(Error::ZeroProbability);
        }
        let scores: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let ranking = rank_groups(&scores, tie_tolerance);
        Ok(Self {
            method,
            scores,
            ranking,
            tie_tolerance,
        })
    }

    /// 0-based rank group of every vertex.
    pub fn group_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.scores.len()];
        for (g, members) in self.ranking.iter().enumerate() {
            for &v in members {
                out[v] = g;
            }
        }
        out
    }
}

fn rank_groups(scores: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));

    let mut groups: Vec<Vec<usize>> = Vec::new();
    for v in order {
        match groups.last_mut() {
            // compared against the group's leader, so every pair stays within tol
            Some(g) if scores[g[0]] - scores[v] <= tol => g.push(v),
            _ => groups.push(vec![v]),
        }
    }
    for g in &mut groups {
        g.sort_unstable();
    }
    groups
}

#[derive(Debug, Clone, Copy)]
pub struct PageRankOptions {
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub tie_tolerance: f64,
}

impl Default for PageRankOptions {
    fn default() -> Self {
        Self {
            damping: 0.85,
            tol: 1e-12,
            max_iter: 100_000,
            tie_tolerance: DEFAULT_TIE_TOLERANCE,
        }
    }
}

/// Power iteration on the damped column-stochastic walk matrix
/// `r ← d·M·r + (1 − d)/n`, where `M_ji = A_ij / outdeg(i)` and dangling
/// vertices spread their mass uniformly. Stops when the L1 change drops
/// below `tol`.
pub fn pagerank(g: &DirectedGraph, opts: &PageRankOptions) -> Result<CentralityReport> {
    let n = g.vertex_count();
    let d = opts.damping;
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::InvalidArgument(format!(
            "damping {d} outside [0, 1]"
        )));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }

    let out_deg: Vec<usize> = (0..n).map(|i| g.out_degree(i)).collect();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let teleport = (1.0 - d) / n as f64;

    let mut rank = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..opts.max_iter {
        let dangling: f64 = (0..n).filter(|&i| out_deg[i] == 0).map(|i| rank[i]).sum();
        next.fill(teleport + d * dangling / n as f64);
        for &(i, j) in &edges {
            next[j] += d * rank[i] / out_deg[i] as f64;
        }
        residual = rank.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut rank, &mut next);
        if residual < opts.tol {
            return CentralityReport::from_scores(Method::Pagerank, &rank, opts.tie_tolerance);
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        residual,
    })
}
