//! Finite directed graphs without multiple edges.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("vertex {0} out of range 1..={1}")]
    VertexOutOfRange(usize, usize),
    #[error("graph has loops")]
    LoopsPresent,
    #[error("graph file: {0}")]
    Parse(String),
}

/// Vertices are `1..=n`; edge `e_j` is `edges[j - 1]` as `(source, range)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopsMode {
    WithLoops,
    WithoutLoops,
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    n: usize,
    edges: Vec<[usize; 2]>,
}

pub type AdjacencyMatrix = Vec<Vec<u8>>;

pub fn build_graph(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
    let mut seen = HashSet::new();
    for &(s, r) in edges {
        for v in [s, r] {
            if v < 1 || v > n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
        }
        if !seen.insert((s, r)) {
            return Err(GraphError::DuplicateEdge(s, r));
        }
    }
    Ok(Graph {
        n,
        edges: edges.to_vec(),
    })
}

impl Graph {
    /// Symmetric directed graph from undirected pairs; `(a, b)` then `(b, a)`.
    pub fn undirected(n: usize, pairs: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut edges = Vec::new();
        for &(a, b) in pairs {
            edges.push((a, b));
            if a != b {
                edges.push((b, a));
            }
        }
        build_graph(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edge `e_j`, 1-based.
    pub fn edge(&self, j: usize) -> (usize, usize) {
        self.edges[j - 1]
    }

    pub fn source(&self, j: usize) -> usize {
        self.edges[j - 1].0
    }

    pub fn range(&self, j: usize) -> usize {
        self.edges[j - 1].1
    }

    pub fn has_edge(&self, s: usize, r: usize) -> bool {
        self.edges.contains(&(s, r))
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(|&(s, r)| s == r)
    }

    pub fn is_undirected(&self) -> bool {
        self.edges.iter().all(|&(s, r)| self.has_edge(r, s))
    }

    /// Edge indices (1-based) leaving `v`.
    pub fn out_edges(&self, v: usize) -> Vec<usize> {
        (1..=self.m()).filter(|&j| self.source(j) == v).collect()
    }

    /// Edge indices (1-based) entering `v`.
    pub fn in_edges(&self, v: usize) -> Vec<usize> {
        (1..=self.m()).filter(|&j| self.range(j) == v).collect()
    }

    /// Vertices emitting no edge.
    pub fn sinks(&self) -> Vec<usize> {
        (1..=self.n)
            .filter(|&v| self.out_edges(v).is_empty())
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GraphFile {
            n: self.n,
            edges: self.edges.iter().map(|&(s, r)| [s, r]).collect(),
        })
        .expect("graph serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Graph, GraphError> {
        let f: GraphFile = serde_json::from_str(s).map_err(|e| GraphError::Parse(e.to_string()))?;
        let edges: Vec<(usize, usize)> = f.edges.iter().map(|e| (e[0], e[1])).collect();
        build_graph(f.n, &edges)
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let s = serde_json::to_string(&self.to_json()).expect("graph serializes");
        hex::encode(Sha256::digest(s.as_bytes()))
    }
}

pub fn adjacency(g: &Graph) -> AdjacencyMatrix {
    let mut a = vec![vec![0u8; g.n]; g.n];
    for &(s, r) in &g.edges {
        a[s - 1][r - 1] = 1;
    }
    a
}

/// Edges listed in row-major order of the complementary adjacency matrix.
pub fn complement(g: &Graph, mode: LoopsMode) -> Result<Graph, GraphError> {
    if mode == LoopsMode::WithoutLoops && g.has_loops() {
        return Err(GraphError::LoopsPresent);
    }
    let a = adjacency(g);
    let mut edges = Vec::new();
    for i in 1..=g.n {
        for j in 1..=g.n {
            if mode == LoopsMode::WithoutLoops && i == j {
                continue;
            }
            if a[i - 1][j - 1] == 0 {
                edges.push((i, j));
            }
        }
    }
    build_graph(g.n, &edges)
}

pub fn add_loops(g: &Graph) -> Result<Graph, GraphError> {
    if g.has_loops() {
        return Err(GraphError::LoopsPresent);
    }
    let mut edges = g.edges.clone();
    edges.extend((1..=g.n).map(|i| (i, i)));
    build_graph(g.n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_rejects_bad_input() {
        assert_eq!(
            build_graph(4, &[(1, 2), (1, 2)]),
            Err(GraphError::DuplicateEdge(1, 2))
        );
        assert_eq!(
            build_graph(2, &[(1, 3)]),
            Err(GraphError::VertexOutOfRange(3, 2))
        );
        let g = build_graph(1, &[]).unwrap();
        assert_eq!((g.n(), g.m()), (1, 0));
        let g = build_graph(4, &[(1, 2), (2, 1)]).unwrap();
        assert_eq!(g.m(), 2);
        assert!(g.is_undirected());
    }

    #[test]
    fn adjacency_matches_definition() {
        let g = build_graph(4, &[(1, 2), (2, 1)]).unwrap();
        let a = adjacency(&g);
        for (i, row) in a.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                let want = u8::from((i, j) == (0, 1) || (i, j) == (1, 0));
                assert_eq!(x, want);
            }
        }
        let e = build_graph(4, &[]).unwrap();
        assert!(adjacency(&e).iter().flatten().all(|&x| x == 0));
        let all: Vec<_> = (1..=4).flat_map(|i| (1..=4).map(move |j| (i, j))).collect();
        let k = build_graph(4, &all).unwrap();
        assert!(adjacency(&k).iter().flatten().all(|&x| x == 1));
    }

    #[test]
    fn complement_examples() {
        let g = Graph::undirected(4, &[(1, 2)]).unwrap();
        let c = complement(&g, LoopsMode::WithoutLoops).unwrap();
        assert_eq!(c.m(), 10);
        assert!(c.is_undirected());

        let k = Graph::undirected(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap();
        assert_eq!(complement(&k, LoopsMode::WithoutLoops).unwrap().m(), 0);

        let looped = add_loops(&g).unwrap();
        assert_eq!(
            complement(&looped, LoopsMode::WithoutLoops),
            Err(GraphError::LoopsPresent)
        );
    }

    #[test]
    fn path_is_self_complementary() {
        let p = Graph::undirected(4, &[(3, 1), (1, 2), (2, 4)]).unwrap();
        let c = complement(&p, LoopsMode::WithoutLoops).unwrap();
        // 3-1-2-4 complements to 1-4-3-2; relabel 3→1, 1→4, 2→3, 4→2.
        let sigma = [0, 4, 3, 1, 2];
        let mapped: HashSet<_> = p
            .edges()
            .iter()
            .map(|&(s, r)| (sigma[s], sigma[r]))
            .collect();
        let ce: HashSet<_> = c.edges().iter().copied().collect();
        assert_eq!(mapped, ce);
    }

    #[test]
    fn add_loops_examples() {
        let e = build_graph(2, &[]).unwrap();
        assert_eq!(add_loops(&e).unwrap().edges(), &[(1, 1), (2, 2)]);
        let g = build_graph(2, &[(1, 2)]).unwrap();
        assert_eq!(add_loops(&g).unwrap().edges(), &[(1, 2), (1, 1), (2, 2)]);
        let h = Graph::undirected(4, &[(1, 2)]).unwrap();
        assert_eq!(add_loops(&h).unwrap().m(), 6);
    }

    #[test]
    fn json_round_trip_and_hash() {
        let g = build_graph(3, &[(1, 2), (3, 3)]).unwrap();
        let s = g.to_json().to_string();
        let back = Graph::from_json_str(&s).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.hash(), g.hash());
        assert_eq!(g.hash().len(), 64);
        assert!(Graph::from_json_str("{\"n\": 2, \"edges\": [[1, 1], [1, 1]]}").is_err());
    }
}
