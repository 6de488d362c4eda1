//! Directed graphs, their adjacency matrices and walk Hamiltonians.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A directed graph on vertices `0..n` with a set of ordered edges
/// `(source, target)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

/// A graph together with the non-fatal diagnostics raised while reading it.
#[derive(Debug, Clone)]
pub struct ParsedGraph {
    pub graph: DirectedGraph,
    pub warnings: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl DirectedGraph {
    /// Builds a graph, rejecting out-of-range endpoints. Duplicate edges
    /// collapse silently; use [`parse_graph`] to get them reported.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("vertex count must be positive".into()));
        }
        let mut set = BTreeSet::new();
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({i}, {j}) has an endpoint outside 0..{n}"
                )));
            }
            set.insert((i, j));
        }
        Ok(Self { n, edges: set })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i, j))
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.edges.range((i, 0)..(i + 1, 0)).count()
    }

    pub fn has_self_loops(&self) -> bool {
        self.edges.iter().any(|&(i, j)| i == j)
    }

    /// Renames vertex `v` to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: perm.len(),
            });
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument(
                    "relabeling is not a permutation".into(),
                ));
            }
        }
        Self::new(self.n, self.edges().map(|(i, j)| (perm[i], perm[j])))
    }

    /// `A_ij = 1` iff `(i, j)` is an edge.
    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for &(i, j) in &self.edges {
            a[(i, j)] = 1.0;
        }
        a
    }

    /// Graph Laplacian `L_ij = (Σ_k A_ik) δ_ij − A_ij`.
    pub fn laplacian(&self) -> DMatrix<f64> {
        let a = self.adjacency_matrix();
        let mut l = -a.clone();
        for i in 0..self.n {
            l[(i, i)] += a.row(i).sum();
        }
        l
    }

    /// Walk Hamiltonian `H = L†`. Real, so the adjoint is the transpose.
    pub fn hamiltonian(&self) -> DMatrix<f64> {
        self.laplacian().transpose()
    }

    pub fn to_json(&self) -> String {
        let g = GraphJson {
            n: self.n,
            edges: self.edges().map(|(i, j)| [i, j]).collect(),
        };
        serde_json::to_string(&g).expect("graph json serialization cannot fail")
    }
}

/// Parses the edge-list text format or its JSON equivalent.
///
/// Text format: `#` starts a comment, the first non-empty line is the vertex
/// count, every later non-empty line is `src dst` (0-based). JSON format:
/// `{"n": 3, "edges": [[0, 1], ...]}`.
pub fn parse_graph(text: &str) -> Result<ParsedGraph> {
    if text.trim_start().starts_with('{') {
        let g: GraphJson = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        return build(g.n, g.edges.into_iter().map(|[i, j]| (i, j, 1)));
    }

    let mut n = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match n {
            None => {
                if fields.len() != 1 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("expected a vertex count, found '{line}'"),
                    });
                }
                let count = fields[0].parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("invalid vertex count '{}'", fields[0]),
                })?;
                n = Some(count);
            }
            Some(_) => {
                if fields.len() != 2 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("expected 'src dst', found '{line}'"),
                    });
                }
                let parse = |s: &str| {
                    s.parse::<usize>().map_err(|_| Error::Parse {
                        line: line_no,
                        msg: format!("invalid vertex index '{s}'"),
                    })
                };
                edges.push((parse(fields[0])?, parse(fields[1])?, line_no));
            }
        }
    }
    let n = n.ok_or(Error::Parse {
        line: 0,
        msg: "missing vertex count".into(),
    })?;
    build(n, edges.into_iter())
}

fn build(n: usize, edges: impl Iterator<Item = (usize, usize, usize)>) -> Result<ParsedGraph> {
    if n == 0 {
        return Err(Error::Parse {
            line: 1,
            msg: "vertex count must be positive".into(),
        });
    }
    let mut warnings = Vec::new();
    let mut set = BTreeSet::new();
    for (i, j, line) in edges {
        if i >= n || j >= n {
            return Err(Error::Parse {
                line,
                msg: format!("edge ({i}, {j}) has an endpoint outside 0..{n}"),
            });
        }
        if i == j {
            warnings.push(format!(
                "line {line}: self-loop on vertex {i} counts toward its out-degree"
            ));
        }
        if !set.insert((i, j)) {
            warnings.push(format!("line {line}: duplicate edge ({i}, {j}) ignored"));
        }
    }
    Ok(ParsedGraph {
        graph: DirectedGraph { n, edges: set },
        warnings,
    })
}
