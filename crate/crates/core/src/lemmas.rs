//! Per-graph instance checks of the standalone lemmas, each reduced to a
//! batch of ideal-membership proofs.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{add_loops, complement, Graph, GraphError, LoopsMode};
use crate::ncstar::{
    check_certificate, commutator, prove_zero, CompletionConfig, EngineError, NCPoly, Presentation,
    ProofCertificate, RewriteSystem, Sym, ZeroProof,
};
use crate::presentations::{
    banica_presentation, banica_presentation_combined, banica_presentation_qa14,
    bichon_presentation, h2_sym, h2plus_presentation, half_square_split, qa5_relations,
    qa7_relations, u, u_name,
};

pub const DEFAULT_LEMMA_BOUND: usize = 6;
pub const DEFAULT_COMMUTATIVITY_BOUND: usize = 8;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum LemmaError {
    #[error("graph has no vertex without outgoing edges")]
    NoSourcelessVertex,
    #[error("graph has no edges")]
    NoEdges,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Proved,
    Inconclusive,
}

/// One target polynomial proved (or not) modulo one presentation.
#[derive(Debug, Clone)]
pub struct LemmaItem {
    pub label: String,
    pub target: NCPoly,
    pub presentation: Arc<Presentation>,
    pub proof: ZeroProof,
}

impl LemmaItem {
    pub fn certificate(&self) -> Option<&ProofCertificate> {
        self.proof.certificate()
    }

    /// Independent replay of the certificate, if any.
    pub fn replays(&self) -> bool {
        match self.proof.certificate() {
            Some(c) => check_certificate(&self.presentation, &self.target, c),
            None => false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LemmaReport {
    pub lemma: String,
    pub graph_hash: Option<String>,
    pub bound: usize,
    pub items: Vec<LemmaItem>,
    pub wall_ms: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaItemSummary {
    pub label: String,
    pub presentation: String,
    pub target: String,
    pub status: Status,
    pub certificate_terms: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaReportSummary {
    pub lemma: String,
    pub graph_hash: Option<String>,
    pub status: Status,
    pub bound: usize,
    pub wall_ms: u128,
    pub items: Vec<LemmaItemSummary>,
}

impl LemmaReport {
    pub fn status(&self) -> Status {
        if self.items.iter().all(|i| i.proof.is_proved()) {
            Status::Proved
        } else {
            Status::Inconclusive
        }
    }

    pub fn is_proved(&self) -> bool {
        self.status() == Status::Proved
    }

    /// Every proved item's certificate replays.
    pub fn all_certificates_replay(&self) -> bool {
        self.items
            .par_iter()
            .filter(|i| i.proof.is_proved())
            .all(|i| i.replays())
    }

    pub fn first_failure(&self) -> Option<&LemmaItem> {
        self.items.iter().find(|i| !i.proof.is_proved())
    }

    pub fn summary(&self) -> LemmaReportSummary {
        LemmaReportSummary {
            lemma: self.lemma.clone(),
            graph_hash: self.graph_hash.clone(),
            status: self.status(),
            bound: self.bound,
            wall_ms: self.wall_ms,
            items: self
                .items
                .iter()
                .map(|i| LemmaItemSummary {
                    label: i.label.clone(),
                    presentation: i.presentation.name().to_string(),
                    target: i.target.display(i.presentation.alphabet()),
                    status: if i.proof.is_proved() {
                        Status::Proved
                    } else {
                        Status::Inconclusive
                    },
                    certificate_terms: i.certificate().map_or(0, |c| c.len()),
                })
                .collect(),
        }
    }
}

/// Completes `pres` once and proves every target against it.
pub fn prove_targets(
    pres: Arc<Presentation>,
    bound: usize,
    targets: Vec<(String, NCPoly)>,
) -> Result<Vec<LemmaItem>, EngineError> {
    let sys = RewriteSystem::complete(pres.clone(), &CompletionConfig::with_bound(bound))?;
    Ok(prove_targets_in(&sys, targets))
}

pub fn prove_targets_in(sys: &RewriteSystem, targets: Vec<(String, NCPoly)>) -> Vec<LemmaItem> {
    targets
        .into_par_iter()
        .map(|(label, target)| {
            let proof = prove_zero(sys, &target);
            LemmaItem {
                label,
                target,
                presentation: sys.presentation().clone(),
                proof,
            }
        })
        .collect()
}

struct Run {
    lemma: String,
    graph_hash: Option<String>,
    bound: usize,
    start: Instant,
    items: Vec<LemmaItem>,
}

impl Run {
    fn new(lemma: &str, g: Option<&Graph>, bound: usize) -> Self {
        Run {
            lemma: lemma.to_string(),
            graph_hash: g.map(|g| g.hash()),
            bound,
            start: Instant::now(),
            items: Vec::new(),
        }
    }

    fn add(
        &mut self,
        pres: Presentation,
        targets: Vec<(String, NCPoly)>,
    ) -> Result<(), EngineError> {
        if targets.is_empty() {
            return Ok(());
        }
        self.items
            .extend(prove_targets(Arc::new(pres), self.bound, targets)?);
        Ok(())
    }

    fn finish(self) -> LemmaReport {
        LemmaReport {
            lemma: self.lemma,
            graph_hash: self.graph_hash,
            bound: self.bound,
            items: self.items,
            wall_ms: self.start.elapsed().as_millis(),
        }
    }
}

fn nonzero(raw: Vec<(String, NCPoly)>) -> Vec<(String, NCPoly)> {
    raw.into_iter().filter(|(_, p)| !p.is_zero()).collect()
}

/// Both sums `Σ_l u_{s(e_l)s(e_j)} u_{r(e_l)r(e_j)} − 1` and the mirrored one,
/// modulo QA1–QA4.
pub fn prove_qa6_implied(g: &Graph, bound: usize) -> Result<LemmaReport, LemmaError> {
    if g.m() == 0 {
        return Err(LemmaError::NoEdges);
    }
    let n = g.n();
    let mut targets = Vec::new();
    for j in 1..=g.m() {
        let mut a = -&NCPoly::one();
        let mut b = -&NCPoly::one();
        for l in 1..=g.m() {
            a = &a + &(&u(n, g.source(l), g.source(j)) * &u(n, g.range(l), g.range(j)));
            b = &b + &(&u(n, g.source(j), g.source(l)) * &u(n, g.range(j), g.range(l)));
        }
        targets.push((format!("QA6 e{j} left"), a));
        targets.push((format!("QA6 e{j} right"), b));
    }
    let mut run = Run::new("qa6-implied", Some(g), bound);
    run.add(banica_presentation_qa14(g), targets)?;
    Ok(run.finish())
}

/// `u_{q s(e_j)} = 0 = u_{s(e_j) q}` for every vertex `q` emitting no edge.
pub fn prove_eqzero(g: &Graph, bound: usize) -> Result<LemmaReport, LemmaError> {
    let sinks = g.sinks();
    if sinks.is_empty() || g.m() == 0 {
        return Err(LemmaError::NoSourcelessVertex);
    }
    let n = g.n();
    let mut targets = Vec::new();
    for &qv in &sinks {
        for j in 1..=g.m() {
            let s = g.source(j);
            targets.push((format!("{} (q={qv}, e{j})", u_name(n, qv, s)), u(n, qv, s)));
            targets.push((format!("{} (q={qv}, e{j})", u_name(n, s, qv)), u(n, s, qv)));
        }
    }
    targets.sort_by(|a, b| a.0.cmp(&b.0));
    targets.dedup_by(|a, b| a.1 == b.1);
    let mut run = Run::new("eqzero", Some(g), bound);
    run.add(banica_presentation_qa14(g), targets)?;
    Ok(run.finish())
}

/// QA7 of the complement modulo Banica of `g`, and conversely.
pub fn prove_banica_complement_invariance(
    g: &Graph,
    mode: LoopsMode,
    bound: usize,
) -> Result<LemmaReport, LemmaError> {
    let c = complement(g, mode)?;
    let mut run = Run::new("banica-complement", Some(g), bound);
    run.add(
        banica_presentation(g),
        tag("complement ", nonzero(qa7_relations(&c))),
    )?;
    run.add(
        banica_presentation(&c),
        tag("graph ", nonzero(qa7_relations(g))),
    )?;
    Ok(run.finish())
}

fn tag(prefix: &str, raw: Vec<(String, NCPoly)>) -> Vec<(String, NCPoly)> {
    raw.into_iter()
        .map(|(l, p)| (format!("{prefix}{l}"), p))
        .collect()
}

/// Part (i): QA7 with and without loops generate the same relations. Part
/// (ii): QA5 instances of the looped graph that involve a loop edge hold in
/// Bichon's algebra of `g`.
pub fn prove_loops_invariance(g: &Graph, bound: usize) -> Result<LemmaReport, LemmaError> {
    let gl = add_loops(g)?;
    let m = g.m();
    let mut run = Run::new("loops", Some(g), bound);
    run.add(
        banica_presentation(g),
        tag("(i) looped ", nonzero(qa7_relations(&gl))),
    )?;
    run.add(
        banica_presentation(&gl),
        tag("(i) plain ", nonzero(qa7_relations(g))),
    )?;
    let loop_qa5: Vec<(String, NCPoly)> = qa5_relations(&gl)
        .into_iter()
        .enumerate()
        .filter(|(idx, (_, p))| {
            let (j, l) = (idx / gl.m() + 1, idx % gl.m() + 1);
            (j > m || l > m) && !p.is_zero()
        })
        .map(|(_, x)| x)
        .collect();
    run.add(bichon_presentation(g), tag("(ii) ", loop_qa5))?;
    Ok(run.finish())
}

fn all_commutators(pres: &Presentation) -> Vec<(String, NCPoly)> {
    let alpha = pres.alphabet();
    let k = alpha.len() as Sym;
    let mut out = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            out.push((
                format!("[{}, {}]", alpha.name(a), alpha.name(b)),
                commutator(&NCPoly::var(a), &NCPoly::var(b)),
            ));
        }
    }
    out
}

/// Commutativity of all generators modulo Bichon of `g` together with QA5 of
/// the loopless complement.
pub fn prove_lemma_same_instance(g: &Graph, bound: usize) -> Result<LemmaReport, LemmaError> {
    let c = complement(g, LoopsMode::WithoutLoops)?;
    let pres = bichon_presentation(g).extended(
        "QBic + QA5(complement)",
        tag("complement ", qa5_relations(&c)),
    )?;
    let targets = all_commutators(&pres);
    let mut run = Run::new("lemma-same", Some(g), bound);
    run.add(pres, targets)?;
    Ok(run.finish())
}

/// QA5 modulo Banica's algebra, so that the Bichon and Banica ideals agree.
pub fn prove_banica_equals_bichon(g: &Graph, bound: usize) -> Result<LemmaReport, LemmaError> {
    let mut run = Run::new("banica-equals-bichon", Some(g), bound);
    run.add(banica_presentation_combined(g), nonzero(qa5_relations(g)))?;
    Ok(run.finish())
}

/// Each magic-unitary entry equals its normal form modulo Banica of `g`;
/// returns the entries where that normal form differs from the generator.
pub fn derive_matrix_shape(g: &Graph, bound: usize) -> Result<LemmaReport, LemmaError> {
    let n = g.n();
    let pres = Arc::new(banica_presentation(g));
    let sys = RewriteSystem::complete(pres.clone(), &CompletionConfig::with_bound(bound))?;
    let mut targets = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let x = u(n, i, j);
            let nf = sys.normalize(&x);
            if nf != x {
                targets.push((
                    format!("{} = {}", u_name(n, i, j), nf.display(pres.alphabet())),
                    &x - &nf,
                ));
            }
        }
    }
    let mut run = Run::new("matrix-shape", Some(g), bound);
    run.items = prove_targets_in(&sys, targets);
    Ok(run.finish())
}

/// Proves `u_ij = expected[i][j]` modulo Banica of `g` for every entry where
/// the two differ as polynomials.
pub fn verify_matrix_shape(
    g: &Graph,
    expected: &[Vec<NCPoly>],
    bound: usize,
) -> Result<LemmaReport, LemmaError> {
    let n = g.n();
    let pres = banica_presentation(g);
    let mut targets = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let x = u(n, i, j);
            let e = &expected[i - 1][j - 1];
            if *e != x {
                targets.push((
                    format!("{} = {}", u_name(n, i, j), e.display(pres.alphabet())),
                    &x - e,
                ));
            }
        }
    }
    let mut run = Run::new("displayed-matrix", Some(g), bound);
    run.add(pres, targets)?;
    Ok(run.finish())
}

/// The graph with two disjoint undirected edges `1–2`, `3–4`.
pub fn two_edge_graph() -> Graph {
    Graph::undirected(4, &[(1, 2), (3, 4)]).expect("valid")
}

/// `v_ij` in terms of the `u_kl` of the two-edge graph.
pub fn h2_to_u(s: Sym) -> NCPoly {
    let n = 4;
    let (a, b, c) = match s {
        x if x == h2_sym(1, 1) => (1, 1, 2),
        x if x == h2_sym(1, 2) => (1, 3, 4),
        x if x == h2_sym(2, 1) => (3, 1, 2),
        _ => (3, 3, 4),
    };
    &u(n, a, b) - &u(n, a, c)
}

/// `u_kl` in terms of the `v_ij`, via `(v² ± v)/2`.
pub fn u_to_h2(s: Sym) -> NCPoly {
    let i = s as usize / 4 + 1;
    let j = s as usize % 4 + 1;
    // Row and column block of the entry, and whether it is the "+" half.
    let bi = if i <= 2 { 1 } else { 2 };
    let bj = if j <= 2 { 1 } else { 2 };
    let plus = (i - 1) % 2 == (j - 1) % 2;
    let v = NCPoly::var(h2_sym(bi, bj));
    let (p, m) = half_square_split(&v);
    if plus {
        p
    } else {
        m
    }
}

/// Both directions of the isomorphism between the hyperoctahedral algebra
/// and Banica's algebra of the two-edge graph, the entry identities, and the
/// edge-wise commutation relations that follow.
pub fn verify_h2plus_isomorphism(bound: usize) -> Result<LemmaReport, LemmaError> {
    let g = two_edge_graph();
    let n = 4;
    let h2 = h2plus_presentation();
    let ban = banica_presentation(&g);
    let mut run = Run::new("h2plus-isomorphism", Some(&g), bound);

    let mut to_ban: Vec<(String, NCPoly)> = h2
        .relations()
        .iter()
        .map(|r| (format!("phi({})", r.label), r.poly.substitute(&h2_to_u)))
        .collect();
    let v11 = h2_to_u(h2_sym(1, 1));
    to_ban.push((
        "phi(v11)^3 - phi(v11)".into(),
        &(&(&v11 * &v11) * &v11) - &v11,
    ));
    for (i, j, k, l) in [
        (1, 1, 2, 2),
        (1, 2, 2, 1),
        (1, 3, 2, 4),
        (1, 4, 2, 3),
        (3, 1, 4, 2),
        (3, 2, 4, 1),
        (3, 3, 4, 4),
        (3, 4, 4, 3),
    ] {
        to_ban.push((
            format!("{} = {}", u_name(n, i, j), u_name(n, k, l)),
            &u(n, i, j) - &u(n, k, l),
        ));
    }
    for (label, p) in qa5_relations(&g) {
        if !p.is_zero() {
            to_ban.push((format!("step 3 {label}"), p));
        }
    }
    for s in 0..16 as Sym {
        let back = u_to_h2(s).substitute(&h2_to_u);
        to_ban.push((
            format!(
                "phi(psi({})) = {}",
                u_name(n, s as usize / 4 + 1, s as usize % 4 + 1),
                u_name(n, s as usize / 4 + 1, s as usize % 4 + 1)
            ),
            &back - &NCPoly::var(s),
        ));
    }
    run.add(ban.clone(), to_ban)?;

    let mut to_h2: Vec<(String, NCPoly)> = ban
        .relations()
        .iter()
        .map(|r| (format!("psi({})", r.label), r.poly.substitute(&u_to_h2)))
        .filter(|(_, p)| !p.is_zero())
        .collect();
    let row_sum = &(&u_to_h2(u_sym4(1, 1)) + &u_to_h2(u_sym4(1, 2)))
        - &(&NCPoly::var(h2_sym(1, 1)) * &NCPoly::var(h2_sym(1, 1)));
    to_h2.push(("psi(u11 + u12) - v11^2".into(), row_sum));
    for s in 0..4 as Sym {
        let back = h2_to_u(s).substitute(&u_to_h2);
        to_h2.push((
            format!("psi(phi({}))", h2.alphabet().name(s)),
            &back - &NCPoly::var(s),
        ));
    }
    run.add(h2, to_h2)?;
    Ok(run.finish())
}

fn u_sym4(i: usize, j: usize) -> Sym {
    crate::presentations::u_sym(4, i, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn row(pairs: &[(usize, usize)]) -> Graph {
        Graph::undirected(4, pairs).unwrap()
    }

    #[test]
    fn qa6_on_small_graphs() {
        for g in [row(&[(1, 2)]), build_graph(2, &[(1, 2), (2, 1)]).unwrap()] {
            let r = prove_qa6_implied(&g, 6).unwrap();
            assert!(r.is_proved());
            assert!(r.all_certificates_replay());
        }
        assert_eq!(
            prove_qa6_implied(&build_graph(3, &[]).unwrap(), 6).unwrap_err(),
            LemmaError::NoEdges
        );
    }

    #[test]
    fn eqzero_examples() {
        let r = prove_eqzero(&row(&[(1, 2), (1, 3)]), 6).unwrap();
        assert!(r.is_proved());
        let labels: Vec<_> = r.items.iter().map(|i| i.target.clone()).collect();
        assert!(labels.contains(&u(4, 4, 1)) && labels.contains(&u(4, 1, 4)));
        let all: Vec<_> = (1..=3).flat_map(|i| (1..=3).map(move |j| (i, j))).collect();
        assert_eq!(
            prove_eqzero(&build_graph(3, &all).unwrap(), 6).unwrap_err(),
            LemmaError::NoSourcelessVertex
        );
    }

    #[test]
    fn complement_and_loops() {
        let g = row(&[(1, 2)]);
        assert!(
            prove_banica_complement_invariance(&g, LoopsMode::WithoutLoops, 6)
                .unwrap()
                .is_proved()
        );
        assert!(prove_loops_invariance(&g, 6).unwrap().is_proved());
        let e2 = build_graph(2, &[]).unwrap();
        assert!(prove_loops_invariance(&e2, 6).unwrap().is_proved());
    }

    #[test]
    fn lemma_same_on_path() {
        let r = prove_lemma_same_instance(&row(&[(3, 1), (1, 2), (2, 4)]), 8).unwrap();
        assert!(r.is_proved());
    }

    #[test]
    fn matrix_shape_row2() {
        let r = derive_matrix_shape(&row(&[(1, 2)]), 6).unwrap();
        assert!(r.is_proved());
        let zeros = r.items.iter().filter(|i| i.label.ends_with("= 0")).count();
        assert_eq!(zeros, 8);
        assert_eq!(r.items.len(), 14);
    }

    #[test]
    fn h2plus_isomorphism() {
        let r = verify_h2plus_isomorphism(8).unwrap();
        if let Some(f) = r.first_failure() {
            panic!("{} failed", f.label);
        }
        assert!(r.all_certificates_replay());
    }
}
