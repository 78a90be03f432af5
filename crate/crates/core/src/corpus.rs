//! A fixed sample of small directed graphs: named cases plus seeded random
//! graphs on at most four vertices.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{build_graph, Graph};
use crate::table4::row_graph;

pub const CORPUS_SIZE: usize = 50;
pub const CORPUS_SEED: u64 = 0x51a7_e5ee_d000_0004;

#[derive(Debug, Clone)]
pub struct CorpusGraph {
    pub name: String,
    pub graph: Graph,
}

fn key(g: &Graph) -> (usize, Vec<(usize, usize)>) {
    let mut e = g.edges().to_vec();
    e.sort();
    (g.n(), e)
}

fn named() -> Vec<CorpusGraph> {
    let mut out = vec![
        ("one vertex", build_graph(1, &[])),
        ("one loop", build_graph(1, &[(1, 1)])),
        ("single edge", build_graph(2, &[(1, 2)])),
        ("2-cycle", build_graph(2, &[(1, 2), (2, 1)])),
        ("edge with loops", build_graph(2, &[(1, 2), (1, 1), (2, 2)])),
        ("directed path 3", build_graph(3, &[(1, 2), (2, 3)])),
        (
            "directed 3-cycle",
            build_graph(3, &[(1, 2), (2, 3), (3, 1)]),
        ),
        (
            "transitive triangle",
            build_graph(3, &[(1, 2), (2, 3), (1, 3)]),
        ),
        ("out-star 3", build_graph(3, &[(1, 2), (1, 3)])),
        (
            "directed 4-cycle",
            build_graph(4, &[(1, 2), (2, 3), (3, 4), (4, 1)]),
        ),
    ]
    .into_iter()
    .map(|(name, g)| CorpusGraph {
        name: name.to_string(),
        graph: g.expect("named graphs are valid"),
    })
    .collect::<Vec<_>>();
    for r in 1..=6 {
        out.push(CorpusGraph {
            name: format!("table row {r}"),
            graph: row_graph(r),
        });
    }
    out
}

fn random_graph(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.gen_range(1..=4);
    let mut edges = Vec::new();
    for s in 1..=n {
        for r in 1..=n {
            let p = if s == r { 0.15 } else { 0.35 };
            if rng.gen_bool(p) {
                edges.push((s, r));
            }
        }
    }
    build_graph(n, &edges).expect("pairs are distinct and in range")
}

/// Named graphs first, then distinct random graphs until the corpus has
/// [`CORPUS_SIZE`] members. Deterministic.
pub fn corpus() -> Vec<CorpusGraph> {
    let mut out = named();
    let mut seen: BTreeSet<_> = out.iter().map(|c| key(&c.graph)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    let mut k = 0;
    while out.len() < CORPUS_SIZE {
        let g = random_graph(&mut rng);
        if seen.insert(key(&g)) {
            k += 1;
            out.push(CorpusGraph {
                name: format!("random {k}"),
                graph: g,
            });
        }
    }
    out
}

pub fn loopless_corpus() -> Vec<CorpusGraph> {
    corpus()
        .into_iter()
        .filter(|c| !c.graph.has_loops())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_size_distinct_and_deterministic() {
        let a = corpus();
        assert_eq!(a.len(), CORPUS_SIZE);
        let keys: BTreeSet<_> = a.iter().map(|c| key(&c.graph)).collect();
        assert_eq!(keys.len(), CORPUS_SIZE);
        let b = corpus();
        assert!(a.iter().zip(&b).all(|(x, y)| x.graph == y.graph));
        assert!(a.iter().all(|c| c.graph.n() <= 4));
        assert!(loopless_corpus().len() >= 25);
    }
}
