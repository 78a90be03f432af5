//! Generators, small rewrite systems and oracles shared by the property
//! suites and the acceptance run.
#![allow(dead_code)]

use std::sync::{Arc, OnceLock};

use num::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use quaut::graph::{adjacency, build_graph, complement, Graph, LoopsMode};
use quaut::ncstar::{
    check_certificate, prove_zero, q, CompletionConfig, GenAlphabet, NCPoly, Presentation,
    RewriteSystem, Sym, Word, ZeroProof, Q,
};
use quaut::presentations::{graph_cstar_presentation, snplus_presentation};

pub type PropResult = Result<(), TestCaseError>;

fn complete(pres: Presentation, bound: usize) -> RewriteSystem {
    RewriteSystem::complete(Arc::new(pres), &CompletionConfig::with_bound(bound))
        .expect("bound covers the relations")
}

/// Free algebra on `k` self-adjoint idempotents `x1..xk`.
pub fn idempotents(k: usize) -> Presentation {
    let mut a = GenAlphabet::new();
    let syms: Vec<Sym> = (1..=k)
        .map(|i| a.add_self_adjoint(&format!("x{i}")).unwrap())
        .collect();
    let raw = syms.iter().map(|&s| {
        let x = NCPoly::var(s);
        (format!("x{s}^2"), &(&x * &x) - &x)
    });
    Presentation::new("idempotents", Arc::new(a), raw).unwrap()
}

pub fn s3_plus() -> &'static RewriteSystem {
    static SYS: OnceLock<RewriteSystem> = OnceLock::new();
    SYS.get_or_init(|| complete(snplus_presentation(3), 8))
}

/// Graph C*-algebra of the 2-cycle: generators are not self-adjoint.
pub fn two_cycle_cstar() -> &'static RewriteSystem {
    static SYS: OnceLock<RewriteSystem> = OnceLock::new();
    SYS.get_or_init(|| {
        let g = build_graph(2, &[(1, 2), (2, 1)]).unwrap();
        complete(graph_cstar_presentation(&g), 8)
    })
}

pub fn one_idempotent() -> &'static RewriteSystem {
    static SYS: OnceLock<RewriteSystem> = OnceLock::new();
    SYS.get_or_init(|| complete(idempotents(1), 4))
}

pub fn two_idempotents() -> &'static RewriteSystem {
    static SYS: OnceLock<RewriteSystem> = OnceLock::new();
    SYS.get_or_init(|| complete(idempotents(2), 4))
}

pub fn word(syms: usize, max_len: usize) -> impl Strategy<Value = Vec<Sym>> {
    prop::collection::vec(0..syms as Sym, 0..=max_len)
}

pub fn poly(syms: usize, max_len: usize, max_terms: usize) -> impl Strategy<Value = NCPoly> {
    prop::collection::vec((word(syms, max_len), -4i64..=4), 0..=max_terms)
        .prop_map(|ts| NCPoly::from_terms(ts.into_iter().map(|(w, c)| (Word::from_syms(w), q(c)))))
}

/// `Σ c · a · r · b` over relations of `pres`, optionally plus noise.
pub fn ideal_element(
    pres: &Presentation,
    words: usize,
    noise: bool,
) -> impl Strategy<Value = NCPoly> {
    let rels: Vec<NCPoly> = pres.relations().iter().map(|r| r.poly.clone()).collect();
    let syms = pres.alphabet().len();
    let summand = (
        0..rels.len(),
        word(syms, words),
        word(syms, words),
        -3i64..=3,
    );
    let noise_part = if noise {
        poly(syms, 2, 2).boxed()
    } else {
        Just(NCPoly::zero()).boxed()
    };
    (prop::collection::vec(summand, 1..=3), noise_part).prop_map(move |(ts, extra)| {
        let mut p = extra;
        for (i, l, r, c) in ts {
            p.add_shifted(&q(c), &l, &rels[i], &r);
        }
        p
    })
}

pub fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(any::<bool>(), n * n)))
        .prop_map(|(n, bits)| {
            let edges: Vec<(usize, usize)> = bits
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(k, _)| (k / n + 1, k % n + 1))
                .collect();
            build_graph(n, &edges).unwrap()
        })
}

pub fn normal_form_idempotent(sys: &RewriteSystem, p: &NCPoly) -> PropResult {
    let once = sys.normalize(p);
    prop_assert_eq!(sys.normalize(&once), once);
    Ok(())
}

/// Proved implies the adjoint is proved too, and both certificates replay.
pub fn star_coherent(sys: &RewriteSystem, p: &NCPoly) -> PropResult {
    let pres = sys.presentation();
    let ps = p.star(pres.alphabet());
    let (a, b) = (prove_zero(sys, p), prove_zero(sys, &ps));
    prop_assert_eq!(a.is_proved(), b.is_proved());
    for (target, proof) in [(p, &a), (&ps, &b)] {
        if let ZeroProof::Proved(c) = proof {
            prop_assert!(check_certificate(pres, target, c));
        }
    }
    Ok(())
}

pub fn complement_involution(g: &Graph) -> PropResult {
    let c = complement(g, LoopsMode::WithLoops).unwrap();
    prop_assert_eq!(&complement(&c, LoopsMode::WithLoops).unwrap(), g);
    let (a, b) = (adjacency(g), adjacency(&c));
    for i in 0..g.n() {
        for j in 0..g.n() {
            prop_assert_eq!(a[i][j] + b[i][j], 1);
        }
    }
    if !g.has_loops() {
        let c = complement(g, LoopsMode::WithoutLoops).unwrap();
        prop_assert!(!c.has_loops());
        prop_assert_eq!(&complement(&c, LoopsMode::WithoutLoops).unwrap(), g);
    }
    Ok(())
}

/// Exhaustive span of `{a · r · b : deg ≤ d}` in the free algebra, kept in
/// row-echelon form over the monomials of degree at most `d`.
pub struct SpanOracle {
    monomials: Vec<Word>,
    rows: Vec<(usize, Vec<Q>)>,
}

fn words_up_to(syms: usize, d: usize) -> Vec<Word> {
    let mut out = vec![Word::unit()];
    let mut layer = vec![Vec::<Sym>::new()];
    for _ in 0..d {
        let mut next = Vec::new();
        for w in &layer {
            for s in 0..syms as Sym {
                let mut v = w.clone();
                v.push(s);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned().map(Word::from_syms));
        layer = next;
    }
    out
}

impl SpanOracle {
    pub fn new(pres: &Presentation, d: usize) -> Self {
        let syms = pres.alphabet().len();
        let monomials = words_up_to(syms, d);
        let mut oracle = SpanOracle {
            monomials,
            rows: Vec::new(),
        };
        let shifts = words_up_to(syms, d);
        for r in pres.relations() {
            let k = r.poly.degree();
            for a in shifts.iter().filter(|a| a.len() + k <= d) {
                for b in shifts.iter().filter(|b| a.len() + b.len() + k <= d) {
                    let mut p = NCPoly::zero();
                    p.add_shifted(&Q::one(), a.syms(), &r.poly, b.syms());
                    let v = oracle.vector(&p).expect("degree within the bound");
                    oracle.insert(v);
                }
            }
        }
        oracle
    }

    fn vector(&self, p: &NCPoly) -> Option<Vec<Q>> {
        let mut v = vec![Q::zero(); self.monomials.len()];
        for (w, c) in p.terms() {
            let i = self.monomials.iter().position(|m| m == w)?;
            v[i] = c.clone();
        }
        Some(v)
    }

    fn reduce(&self, mut v: Vec<Q>) -> Vec<Q> {
        for (pivot, row) in &self.rows {
            if !v[*pivot].is_zero() {
                let f = v[*pivot].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &f * y;
                }
            }
        }
        v
    }

    fn insert(&mut self, v: Vec<Q>) {
        let v = self.reduce(v);
        let Some(pivot) = v.iter().position(|c| !c.is_zero()) else {
            return;
        };
        let inv = Q::one() / &v[pivot];
        let v: Vec<Q> = v.iter().map(|c| c * &inv).collect();
        for (_, row) in self.rows.iter_mut() {
            if !row[pivot].is_zero() {
                let f = row[pivot].clone();
                for (x, y) in row.iter_mut().zip(&v) {
                    *x -= &f * y;
                }
            }
        }
        self.rows.push((pivot, v));
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    /// `None` if `p` has a monomial beyond the degree bound.
    pub fn contains(&self, p: &NCPoly) -> Option<bool> {
        let v = self.vector(p)?;
        Some(self.reduce(v).iter().all(Zero::is_zero))
    }
}

pub fn oracle_agrees(sys: &RewriteSystem, oracle: &SpanOracle, p: &NCPoly) -> PropResult {
    let Some(expected) = oracle.contains(p) else {
        return Err(TestCaseError::reject("degree beyond the oracle"));
    };
    let proof = prove_zero(sys, p);
    prop_assert_eq!(proof.is_proved(), expected, "{:?}", p);
    if let ZeroProof::Proved(c) = &proof {
        prop_assert!(check_certificate(sys.presentation(), p, c));
    }
    Ok(())
}
