//! Classical automorphism groups by brute force, with small-group labels.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{adjacency, Graph};

pub const DEFAULT_MAX_VERTICES: usize = 10;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("{0} vertices exceeds the brute-force limit of {1}")]
    TooLarge(usize, usize),
}

/// Bijection of `1..=n`, stored as the image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    /// `None` unless `images` is a bijection of `1..=images.len()`.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &x in &images {
            if x < 1 || x > n || seen[x] {
                return None;
            }
            seen[x] = true;
        }
        Some(Permutation(images))
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&x| self.0[x - 1]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x - 1] = i + 1;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| x == i + 1)
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = self.compose(&p);
            k += 1;
        }
        k
    }

    /// Cycle notation with fixed points omitted; `()` for the identity.
    pub fn cycle_notation(&self) -> String {
        let n = self.n();
        let mut seen = vec![false; n + 1];
        let mut out = String::new();
        for start in 1..=n {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cyc.push(x);
                x = self.apply(x);
            }
            let parts: Vec<String> = cyc.iter().map(|v| v.to_string()).collect();
            out.push('(');
            out.push_str(&parts.join(" "));
            out.push(')');
        }
        if out.is_empty() {
            "()".to_string()
        } else {
            out
        }
    }
}

/// All permutations of `1..=n` in lexicographic order of image lists.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=n).collect();
    loop {
        out.push(Permutation(cur.clone()));
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// `P_σ ε = ε P_σ`, with `(P_σ)_{σ(i), i} = 1`.
pub fn commutes_with_adjacency(sigma: &Permutation, eps: &[Vec<u8>]) -> bool {
    let n = sigma.n();
    (1..=n)
        .all(|i| (1..=n).all(|j| eps[sigma.apply(i) - 1][sigma.apply(j) - 1] == eps[i - 1][j - 1]))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PermGroup {
    pub n: usize,
    pub elements: Vec<Permutation>,
    pub order: usize,
    pub abelian: bool,
    /// Element order to number of elements of that order.
    pub order_multiset: BTreeMap<usize, usize>,
    pub label: String,
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.cycle_notation())
    }
}

impl PermGroup {
    /// Group invariants and label for a list of elements assumed to be a group.
    pub fn from_elements(n: usize, mut elements: Vec<Permutation>) -> Self {
        elements.sort();
        let abelian = elements
            .iter()
            .all(|a| elements.iter().all(|b| a.compose(b) == b.compose(a)));
        let mut order_multiset = BTreeMap::new();
        for e in &elements {
            *order_multiset.entry(e.order()).or_insert(0) += 1;
        }
        let order = elements.len();
        let label = identify(order, abelian, &order_multiset).to_string();
        PermGroup {
            n,
            elements,
            order,
            abelian,
            order_multiset,
            label,
        }
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn is_closed(&self) -> bool {
        self.contains(&Permutation::identity(self.n))
            && self.elements.iter().all(|a| {
                self.contains(&a.inverse())
                    && self.elements.iter().all(|b| self.contains(&a.compose(b)))
            })
    }

    pub fn report(&self) -> AutReport {
        AutReport {
            order: self.order,
            label: self.label.clone(),
            elements: self.elements.iter().map(|e| e.cycle_notation()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct AutReport {
    pub order: usize,
    pub label: String,
    pub elements: Vec<String>,
}

pub fn automorphisms(g: &Graph) -> Result<PermGroup, PermError> {
    automorphisms_capped(g, DEFAULT_MAX_VERTICES)
}

pub fn automorphisms_capped(g: &Graph, max_n: usize) -> Result<PermGroup, PermError> {
    let n = g.n();
    if n > max_n {
        return Err(PermError::TooLarge(n, max_n));
    }
    let eps = adjacency(g);
    let elements: Vec<Permutation> = all_permutations(n)
        .into_par_iter()
        .filter(|s| commutes_with_adjacency(s, &eps))
        .collect();
    Ok(PermGroup::from_elements(n, elements))
}

fn ms(pairs: &[(usize, usize)]) -> BTreeMap<usize, usize> {
    pairs.iter().copied().collect()
}

fn identify(order: usize, abelian: bool, m: &BTreeMap<usize, usize>) -> &'static str {
    let has = |k: usize| m.contains_key(&k);
    match (order, abelian) {
        (1, _) => "trivial",
        (2, _) => "Z2",
        (3, _) => "Z3",
        (4, true) if has(4) => "Z4",
        (4, true) => "Z2×Z2",
        (6, true) => "Z6",
        (6, false) => "S3",
        (8, true) if has(8) => "Z8",
        (8, true) if has(4) => "Z4×Z2",
        (8, true) => "Z2^3",
        (8, false) if *m == ms(&[(1, 1), (2, 5), (4, 2)]) => "D4",
        (12, false) if *m == ms(&[(1, 1), (2, 3), (3, 8)]) => "A4",
        (24, false) if *m == ms(&[(1, 1), (2, 9), (3, 8), (4, 6)]) => "S4",
        _ => "unknown",
    }
}

/// Label from a group's invariants.
pub fn identify_group(g: &PermGroup) -> String {
    identify(g.order, g.abelian, &g.order_multiset).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, complement, LoopsMode};

    #[test]
    fn table_groups() {
        let cases = [
            (vec![], 24, "S4"),
            (vec![(1, 2)], 4, "Z2×Z2"),
            (vec![(1, 2), (1, 3)], 2, "Z2"),
            (vec![(1, 2), (3, 4)], 8, "D4"),
            (vec![(1, 2), (1, 3), (2, 3)], 6, "S3"),
            (vec![(3, 1), (1, 2), (2, 4)], 2, "Z2"),
        ];
        for (pairs, order, label) in cases {
            let g = Graph::undirected(4, &pairs).unwrap();
            let a = automorphisms(&g).unwrap();
            assert_eq!(a.order, order, "{pairs:?}");
            assert_eq!(a.label, label, "{pairs:?}");
            assert!(a.is_closed());
        }
    }

    #[test]
    fn d4_multiset() {
        let g = Graph::undirected(4, &[(1, 2), (3, 4)]).unwrap();
        let a = automorphisms(&g).unwrap();
        assert_eq!(a.order_multiset, ms(&[(1, 1), (2, 5), (4, 2)]));
        assert!(!a.abelian);
    }

    #[test]
    fn direct_definition_agrees() {
        let g = build_graph(5, &[(1, 2), (2, 3), (3, 1), (4, 5), (5, 5)]).unwrap();
        let eps = adjacency(&g);
        for s in all_permutations(5) {
            let direct = (1..=5)
                .all(|i| (1..=5).all(|j| g.has_edge(s.apply(i), s.apply(j)) == g.has_edge(i, j)));
            assert_eq!(commutes_with_adjacency(&s, &eps), direct);
        }
    }

    #[test]
    fn complement_has_same_group() {
        let g = Graph::undirected(4, &[(1, 2), (1, 3)]).unwrap();
        let c = complement(&g, LoopsMode::WithoutLoops).unwrap();
        assert_eq!(
            automorphisms(&g).unwrap().elements,
            automorphisms(&c).unwrap().elements
        );
    }

    #[test]
    fn cycle_notation_and_limits() {
        assert_eq!(Permutation::identity(3).cycle_notation(), "()");
        let p = Permutation::from_images(vec![2, 3, 1, 4]).unwrap();
        assert_eq!(p.cycle_notation(), "(1 2 3)");
        assert_eq!(p.order(), 3);
        assert!(Permutation::from_images(vec![1, 1]).is_none());
        assert_eq!(all_permutations(4).len(), 24);
        let big = build_graph(11, &[]).unwrap();
        assert_eq!(automorphisms(&big), Err(PermError::TooLarge(11, 10)));
        let trivial = automorphisms(&build_graph(1, &[]).unwrap()).unwrap();
        assert_eq!(trivial.label, "trivial");
    }
}
