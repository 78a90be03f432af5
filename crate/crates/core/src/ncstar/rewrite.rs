//! Degree-bounded overlap completion for presented *-algebras.
//!
//! Rules are oriented by the degree-lexicographic order over a chosen symbol
//! order. Every rule is stored as a *fact*: a monic polynomial in the ideal
//! together with its derivation from input relations and earlier facts, so
//! any reduction to zero can be turned into a flat [`ProofCertificate`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, OnceLock};

use num::{One, Zero};
use serde::Serialize;

use super::certificate::{
    check_certificate, check_layered_certificate, LayeredCertificate, ProofCertificate,
};
use super::poly::NCPoly;
use super::presentation::Presentation;
use super::word::{Sym, Word};
use super::{EngineError, Q};

/// Which generator counts as smallest in the word order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum SymbolOrder {
    /// First declared generator is smallest.
    #[default]
    Declaration,
    /// First declared generator is largest.
    Reverse,
    /// Explicit order, smallest first; must list every generator once.
    Custom(Vec<String>),
}

impl SymbolOrder {
    fn ranks(&self, pres: &Presentation) -> Result<(Vec<Sym>, Vec<Sym>), EngineError> {
        let n = pres.alphabet().len();
        let sym_of: Vec<Sym> = match self {
            SymbolOrder::Declaration => (0..n as Sym).collect(),
            SymbolOrder::Reverse => (0..n as Sym).rev().collect(),
            SymbolOrder::Custom(names) => {
                if names.len() != n {
                    return Err(EngineError::BadSymbolOrder(format!(
                        "expected {n} symbols, got {}",
                        names.len()
                    )));
                }
                let mut v = Vec::with_capacity(n);
                for name in names {
                    let s = pres
                        .alphabet()
                        .sym(name)
                        .ok_or_else(|| EngineError::UnknownGenerator(name.clone()))?;
                    if v.contains(&s) {
                        return Err(EngineError::BadSymbolOrder(format!("'{name}' repeated")));
                    }
                    v.push(s);
                }
                v
            }
        };
        let mut rank_of = vec![0; n];
        for (r, &s) in sym_of.iter().enumerate() {
            rank_of[s as usize] = r as Sym;
        }
        Ok((rank_of, sym_of))
    }
}

#[derive(Debug, Clone)]
pub struct CompletionConfig {
    pub degree_bound: usize,
    pub max_rules: usize,
    pub symbol_order: SymbolOrder,
}

impl Default for CompletionConfig {
    fn default() -> Self {
        CompletionConfig {
            degree_bound: 8,
            max_rules: 20_000,
            symbol_order: SymbolOrder::Declaration,
        }
    }
}

impl CompletionConfig {
    pub fn with_bound(degree_bound: usize) -> Self {
        CompletionConfig {
            degree_bound,
            ..Default::default()
        }
    }

    pub fn order(mut self, order: SymbolOrder) -> Self {
        self.symbol_order = order;
        self
    }
}

#[derive(Debug, Clone, Copy)]
enum Source {
    Relation(usize),
    Fact(usize),
}

#[derive(Debug, Clone)]
struct DerivTerm {
    coeff: Q,
    left: Vec<Sym>,
    src: Source,
    right: Vec<Sym>,
}

#[derive(Debug)]
struct Fact {
    /// Monic, in rank space.
    poly: NCPoly,
    deriv: Vec<DerivTerm>,
}

#[derive(Debug, Clone)]
struct RankStep {
    left: Vec<Sym>,
    fact: usize,
    right: Vec<Sym>,
    coeff: Q,
}

/// One rewrite `coeff · left · (lhs − rhs) · right` subtracted during
/// normalization, in the presentation's own symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub left: Word,
    pub rule: usize,
    pub right: Word,
    pub coeff: Q,
}

#[derive(Debug, Clone, Default, Serialize, PartialEq, Eq)]
pub struct CompletionStats {
    pub facts: usize,
    pub pairs_processed: usize,
    pub pairs_discarded: usize,
    pub zero_reductions: usize,
}

/// A completed (possibly truncated) rewrite system. Immutable and shareable.
pub struct RewriteSystem {
    presentation: Arc<Presentation>,
    rank_of: Vec<Sym>,
    sym_of: Vec<Sym>,
    facts: Vec<Fact>,
    rules: HashMap<Word, usize>,
    lhs_lens: BTreeMap<usize, usize>,
    degree_bound: usize,
    max_rules: usize,
    saturated: bool,
    stats: CompletionStats,
    flat: Vec<OnceLock<Arc<ProofCertificate>>>,
}

impl std::fmt::Debug for RewriteSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RewriteSystem")
            .field("presentation", &self.presentation.name())
            .field("rules", &self.rules.len())
            .field("degree_bound", &self.degree_bound)
            .field("saturated", &self.saturated)
            .finish()
    }
}

type PairQueue = BTreeSet<(Word, Word, Word, usize)>;

impl RewriteSystem {
    /// Runs truncated overlap completion on `pres`.
    pub fn complete(
        pres: Arc<Presentation>,
        cfg: &CompletionConfig,
    ) -> Result<RewriteSystem, EngineError> {
        let needed = pres.max_degree();
        if cfg.degree_bound < needed.max(1) {
            return Err(EngineError::DegreeTooSmall {
                bound: cfg.degree_bound,
                needed,
            });
        }
        let (rank_of, sym_of) = cfg.symbol_order.ranks(&pres)?;
        let mut sys = RewriteSystem {
            presentation: pres.clone(),
            rank_of,
            sym_of,
            facts: Vec::new(),
            rules: HashMap::new(),
            lhs_lens: BTreeMap::new(),
            degree_bound: cfg.degree_bound,
            max_rules: cfg.max_rules,
            saturated: true,
            stats: CompletionStats::default(),
            flat: Vec::new(),
        };
        let mut pairs = PairQueue::new();
        for (i, rel) in pres.relations().iter().enumerate() {
            let p = sys.to_rank(&rel.poly);
            let d = vec![DerivTerm {
                coeff: Q::one(),
                left: Vec::new(),
                src: Source::Relation(i),
                right: Vec::new(),
            }];
            sys.adopt(p, d, &mut pairs);
        }
        while let Some((_, a, b, k)) = pairs.pop_first() {
            if sys.rules.len() > sys.max_rules {
                sys.saturated = false;
                break;
            }
            let (Some(&fa), Some(&fb)) = (sys.rules.get(&a), sys.rules.get(&b)) else {
                continue;
            };
            sys.stats.pairs_processed += 1;
            let x = &a.0[..a.len() - k];
            let y = &b.0[k..];
            let mut s = NCPoly::zero();
            s.add_shifted(&Q::one(), &[], &sys.facts[fa].poly, y);
            s.add_shifted(&-Q::one(), x, &sys.facts[fb].poly, &[]);
            let d = vec![
                DerivTerm {
                    coeff: Q::one(),
                    left: Vec::new(),
                    src: Source::Fact(fa),
                    right: y.to_vec(),
                },
                DerivTerm {
                    coeff: -Q::one(),
                    left: x.to_vec(),
                    src: Source::Fact(fb),
                    right: Vec::new(),
                },
            ];
            sys.adopt(s, d, &mut pairs);
        }
        if sys.stats.pairs_discarded > 0 {
            sys.saturated = false;
        }
        sys.stats.facts = sys.facts.len();
        sys.flat = (0..sys.facts.len()).map(|_| OnceLock::new()).collect();
        Ok(sys)
    }

    fn to_rank(&self, p: &NCPoly) -> NCPoly {
        p.map_syms(|s| self.rank_of[s as usize])
    }

    fn unrank(&self, p: &NCPoly) -> NCPoly {
        p.map_syms(|s| self.sym_of[s as usize])
    }

    fn word_from_rank(&self, w: &[Sym]) -> Vec<Sym> {
        w.iter().map(|&s| self.sym_of[s as usize]).collect()
    }

    fn insert_rule(&mut self, lhs: Word, id: usize) {
        *self.lhs_lens.entry(lhs.len()).or_insert(0) += 1;
        self.rules.insert(lhs, id);
    }

    fn remove_rule(&mut self, lhs: &Word) {
        if self.rules.remove(lhs).is_some() {
            let len = lhs.len();
            if let Some(c) = self.lhs_lens.get_mut(&len) {
                *c -= 1;
                if *c == 0 {
                    self.lhs_lens.remove(&len);
                }
            }
        }
    }

    fn find_reducer(&self, w: &[Sym]) -> Option<(usize, usize, usize)> {
        for pos in 0..w.len() {
            for &len in self.lhs_lens.keys() {
                if pos + len > w.len() {
                    break;
                }
                if let Some(&f) = self.rules.get(&w[pos..pos + len]) {
                    return Some((pos, len, f));
                }
            }
        }
        None
    }

    /// Full reduction in rank space; largest word first.
    fn reduce_rank(&self, p: NCPoly, steps: &mut Vec<RankStep>) -> NCPoly {
        let mut work = p.terms;
        let mut out = BTreeMap::new();
        while let Some((w, c)) = work.pop_last() {
            match self.find_reducer(&w.0) {
                Some((pos, len, f)) => {
                    let left = &w.0[..pos];
                    let right = &w.0[pos + len..];
                    let fact = &self.facts[f].poly;
                    // fact = lhs + tail; the lhs occurrence is the popped term.
                    for (t, tc) in fact.terms.iter().rev().skip(1) {
                        let key = Word::wrap(left, &t.0, right);
                        let delta = -(&c * tc);
                        match work.entry(key) {
                            std::collections::btree_map::Entry::Vacant(e) => {
                                e.insert(delta);
                            }
                            std::collections::btree_map::Entry::Occupied(mut e) => {
                                *e.get_mut() += delta;
                                if e.get().is_zero() {
                                    e.remove();
                                }
                            }
                        }
                    }
                    steps.push(RankStep {
                        left: left.to_vec(),
                        fact: f,
                        right: right.to_vec(),
                        coeff: c,
                    });
                }
                None => {
                    out.insert(w, c);
                }
            }
        }
        NCPoly { terms: out }
    }

    fn adopt(&mut self, poly: NCPoly, deriv: Vec<DerivTerm>, pairs: &mut PairQueue) {
        let mut work = vec![(poly, deriv)];
        while let Some((p, mut d)) = work.pop() {
            let mut steps = Vec::new();
            let nf = self.reduce_rank(p, &mut steps);
            if nf.is_zero() {
                self.stats.zero_reductions += 1;
                continue;
            }
            d.extend(steps.into_iter().map(|s| DerivTerm {
                coeff: -s.coeff,
                left: s.left,
                src: Source::Fact(s.fact),
                right: s.right,
            }));
            let inv = nf.leading().map(|(_, c)| c.recip()).unwrap_or_else(Q::one);
            let poly = nf.scale(&inv);
            for t in &mut d {
                t.coeff *= &inv;
            }
            let lhs = poly.leading().map(|(w, _)| w.clone()).unwrap_or_default();
            let id = self.facts.len();
            self.facts.push(Fact { poly, deriv: d });

            let mut collapsed: Vec<(Word, usize)> = self
                .rules
                .iter()
                .filter(|(m, _)| m.find_factor(&lhs.0).is_some())
                .map(|(m, &j)| (m.clone(), j))
                .collect();
            collapsed.sort();
            for (m, j) in collapsed {
                self.remove_rule(&m);
                let again = self.facts[j].poly.clone();
                work.push((
                    again,
                    vec![DerivTerm {
                        coeff: Q::one(),
                        left: Vec::new(),
                        src: Source::Fact(j),
                        right: Vec::new(),
                    }],
                ));
            }
            self.insert_rule(lhs.clone(), id);

            let mut affected: Vec<(Word, usize)> = self
                .rules
                .iter()
                .filter(|(m, &j)| {
                    j != id
                        && self.facts[j]
                            .poly
                            .terms
                            .keys()
                            .rev()
                            .skip(1)
                            .any(|t| t.len() >= lhs.len() && t.find_factor(&lhs.0).is_some())
                        && !m.is_empty()
                })
                .map(|(m, &j)| (m.clone(), j))
                .collect();
            affected.sort();
            for (m, j) in affected {
                let mut tail = self.facts[j].poly.clone();
                let lead = tail.terms.pop_last().expect("rule has a leading term");
                let mut steps = Vec::new();
                let nf_tail = self.reduce_rank(tail, &mut steps);
                let mut newp = nf_tail;
                newp.terms.insert(lead.0, lead.1);
                let mut d = vec![DerivTerm {
                    coeff: Q::one(),
                    left: Vec::new(),
                    src: Source::Fact(j),
                    right: Vec::new(),
                }];
                d.extend(steps.into_iter().map(|s| DerivTerm {
                    coeff: -s.coeff,
                    left: s.left,
                    src: Source::Fact(s.fact),
                    right: s.right,
                }));
                let nid = self.facts.len();
                self.facts.push(Fact {
                    poly: newp,
                    deriv: d,
                });
                self.rules.insert(m, nid);
            }

            self.add_pairs(&lhs, pairs);
        }
    }

    fn add_pairs(&mut self, l: &Word, pairs: &mut PairQueue) {
        let bound = self.degree_bound;
        let mut push = |a: &Word, b: &Word, stats: &mut CompletionStats| {
            let max_k = a.len().min(b.len());
            for k in 1..max_k {
                if a.0[a.len() - k..] == b.0[..k] {
                    let total = a.len() + b.len() - k;
                    if total <= bound {
                        let w = Word::wrap(&a.0, &b.0[k..], &[]);
                        pairs.insert((w, a.clone(), b.clone(), k));
                    } else {
                        stats.pairs_discarded += 1;
                    }
                }
            }
        };
        let lhs_list: Vec<Word> = self.rules.keys().cloned().collect();
        for m in &lhs_list {
            push(l, m, &mut self.stats);
            if m != l {
                push(m, l, &mut self.stats);
            }
        }
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    /// True when no overlap was skipped for exceeding the bound and the rule
    /// cap was never hit.
    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn stats(&self) -> &CompletionStats {
        &self.stats
    }

    /// Active rules as `(leading word, rule polynomial)`, sorted by leading word
    /// in the system's order. Each polynomial is monic: `lhs − rhs`.
    pub fn rules(&self) -> Vec<(Word, NCPoly)> {
        let mut v: Vec<(&Word, usize)> = self.rules.iter().map(|(w, &f)| (w, f)).collect();
        v.sort();
        v.into_iter()
            .map(|(w, f)| {
                (
                    Word(self.word_from_rank(&w.0)),
                    self.unrank(&self.facts[f].poly),
                )
            })
            .collect()
    }

    pub fn normalize(&self, p: &NCPoly) -> NCPoly {
        let mut steps = Vec::new();
        let nf = self.reduce_rank(self.to_rank(p), &mut steps);
        self.unrank(&nf)
    }

    /// Normal form plus every rewrite step: `p = nf + Σ coeff·left·rule·right`.
    pub fn normalize_traced(&self, p: &NCPoly) -> (NCPoly, Vec<TraceStep>) {
        let mut steps = Vec::new();
        let nf = self.reduce_rank(self.to_rank(p), &mut steps);
        let trace = steps
            .into_iter()
            .map(|s| TraceStep {
                left: Word(self.word_from_rank(&s.left)),
                rule: s.fact,
                right: Word(self.word_from_rank(&s.right)),
                coeff: s.coeff,
            })
            .collect();
        (self.unrank(&nf), trace)
    }

    /// Polynomial of a rule id appearing in a trace.
    pub fn rule_poly(&self, rule: usize) -> NCPoly {
        self.unrank(&self.facts[rule].poly)
    }

    /// Derivation of one fact flattened to input relations.
    fn flat_fact(&self, k: usize) -> Arc<ProofCertificate> {
        if let Some(c) = self.flat.get(k).and_then(|c| c.get()) {
            return c.clone();
        }
        // Facts only depend on lower ids: collect the missing closure, then
        // fill it bottom-up so no recursion is needed.
        let mut need = BTreeSet::new();
        let mut stack = vec![k];
        while let Some(f) = stack.pop() {
            if self.flat[f].get().is_some() || !need.insert(f) {
                continue;
            }
            for d in &self.facts[f].deriv {
                if let Source::Fact(j) = d.src {
                    stack.push(j);
                }
            }
        }
        for f in need {
            let mut acc = HashMap::new();
            for d in &self.facts[f].deriv {
                let l = self.word_from_rank(&d.left);
                let r = self.word_from_rank(&d.right);
                match d.src {
                    Source::Relation(i) => {
                        *acc.entry((l, i, r)).or_insert_with(Q::zero) += &d.coeff;
                    }
                    Source::Fact(j) => {
                        let sub = self.flat[j].get().expect("dependency flattened first");
                        sub.accumulate_into(&mut acc, &d.coeff, &l, &r);
                    }
                }
            }
            let _ = self.flat[f].set(Arc::new(ProofCertificate::from_accumulator(acc)));
        }
        self.flat[k].get().expect("just computed").clone()
    }

    /// Certificate for `Σ coeff·left·rule·right` over a trace.
    pub fn certificate(&self, trace: &[TraceStep]) -> ProofCertificate {
        let mut acc = HashMap::new();
        for s in trace {
            let flat = self.flat_fact(s.rule);
            flat.accumulate_into(&mut acc, &s.coeff, &s.left.0, &s.right.0);
        }
        ProofCertificate::from_accumulator(acc)
    }

    /// Like [`Self::certificate`], but every fact the trace depends on becomes
    /// a lemma with its own one-level derivation. Size grows with the number
    /// of facts used instead of the length of the derivation chains.
    pub fn layered_certificate(&self, trace: &[TraceStep]) -> LayeredCertificate {
        let mut need = BTreeSet::new();
        let mut stack: Vec<usize> = trace.iter().map(|s| s.rule).collect();
        while let Some(f) = stack.pop() {
            if !need.insert(f) {
                continue;
            }
            for d in &self.facts[f].deriv {
                if let Source::Fact(j) = d.src {
                    stack.push(j);
                }
            }
        }
        let base = self.presentation.relations().len();
        let index: HashMap<usize, usize> = need
            .iter()
            .enumerate()
            .map(|(k, &f)| (f, base + k))
            .collect();
        let lemmas = need
            .iter()
            .map(|&f| {
                let mut acc = HashMap::new();
                for d in &self.facts[f].deriv {
                    let rel = match d.src {
                        Source::Relation(i) => i,
                        Source::Fact(j) => index[&j],
                    };
                    let key = (
                        self.word_from_rank(&d.left),
                        rel,
                        self.word_from_rank(&d.right),
                    );
                    *acc.entry(key).or_insert_with(Q::zero) += &d.coeff;
                }
                (self.rule_poly(f), ProofCertificate::from_accumulator(acc))
            })
            .collect();
        let mut acc = HashMap::new();
        for s in trace {
            let key = (s.left.0.clone(), index[&s.rule], s.right.0.clone());
            *acc.entry(key).or_insert_with(Q::zero) += &s.coeff;
        }
        LayeredCertificate {
            lemmas,
            last: ProofCertificate::from_accumulator(acc),
        }
    }

    /// Normal form and a certificate for `p − nf`.
    pub fn reduce_with_certificate(&self, p: &NCPoly) -> (NCPoly, ProofCertificate) {
        let (nf, trace) = self.normalize_traced(p);
        (nf, self.certificate(&trace))
    }

    pub fn max_rules(&self) -> usize {
        self.max_rules
    }
}

/// Outcome of a zero test. `Inconclusive` never asserts non-membership.
#[derive(Debug, Clone)]
pub enum ZeroProof {
    Proved(ProofCertificate),
    Inconclusive { normal_form: NCPoly },
}

impl ZeroProof {
    pub fn is_proved(&self) -> bool {
        matches!(self, ZeroProof::Proved(_))
    }

    pub fn certificate(&self) -> Option<&ProofCertificate> {
        match self {
            ZeroProof::Proved(c) => Some(c),
            ZeroProof::Inconclusive { .. } => None,
        }
    }
}

/// Proves `p = 0` in the quotient when its normal form vanishes. The
/// certificate is replayed before `Proved` is returned.
pub fn prove_zero(sys: &RewriteSystem, p: &NCPoly) -> ZeroProof {
    let (nf, trace) = sys.normalize_traced(p);
    if !nf.is_zero() {
        return ZeroProof::Inconclusive { normal_form: nf };
    }
    let cert = sys.certificate(&trace);
    if check_certificate(sys.presentation(), p, &cert) {
        ZeroProof::Proved(cert)
    } else {
        ZeroProof::Inconclusive { normal_form: nf }
    }
}

#[derive(Debug, Clone)]
pub enum LayeredProof {
    Proved(LayeredCertificate),
    Inconclusive { normal_form: NCPoly },
}

impl LayeredProof {
    pub fn is_proved(&self) -> bool {
        matches!(self, LayeredProof::Proved(_))
    }
}

/// [`prove_zero`] with a layered certificate, replayed before `Proved` is
/// returned.
pub fn prove_zero_layered(sys: &RewriteSystem, p: &NCPoly) -> LayeredProof {
    let (nf, trace) = sys.normalize_traced(p);
    if nf.is_zero() {
        let cert = sys.layered_certificate(&trace);
        if check_layered_certificate(sys.presentation(), p, &cert) {
            return LayeredProof::Proved(cert);
        }
    }
    LayeredProof::Inconclusive { normal_form: nf }
}

/// Commutator `ab − ba`.
pub fn commutator(a: &NCPoly, b: &NCPoly) -> NCPoly {
    &(a * b) - &(b * a)
}

/// One proved commutator.
#[derive(Debug, Clone)]
pub struct CommutatorProof {
    pub a: String,
    pub b: String,
    pub target: NCPoly,
    pub certificate: ProofCertificate,
}

#[derive(Debug, Clone)]
pub enum CommutativityResult {
    Proved(Vec<CommutatorProof>),
    Inconclusive {
        a: String,
        b: String,
        normal_form: NCPoly,
    },
}

impl CommutativityResult {
    pub fn is_proved(&self) -> bool {
        matches!(self, CommutativityResult::Proved(_))
    }
}

/// Tries to prove every pairwise generator commutator zero in `sys`.
pub fn prove_commutativity_in(sys: &RewriteSystem) -> CommutativityResult {
    let alpha = sys.presentation().alphabet().clone();
    let n = alpha.len() as Sym;
    let mut proofs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let target = commutator(&NCPoly::var(a), &NCPoly::var(b));
            match prove_zero(sys, &target) {
                ZeroProof::Proved(certificate) => proofs.push(CommutatorProof {
                    a: alpha.name(a).to_string(),
                    b: alpha.name(b).to_string(),
                    target,
                    certificate,
                }),
                ZeroProof::Inconclusive { normal_form } => {
                    return CommutativityResult::Inconclusive {
                        a: alpha.name(a).to_string(),
                        b: alpha.name(b).to_string(),
                        normal_form,
                    }
                }
            }
        }
    }
    CommutativityResult::Proved(proofs)
}

pub fn prove_commutativity(
    pres: Arc<Presentation>,
    cfg: &CompletionConfig,
) -> Result<CommutativityResult, EngineError> {
    let sys = RewriteSystem::complete(pres, cfg)?;
    Ok(prove_commutativity_in(&sys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncstar::{q, GenAlphabet};
    use crate::presentations::{snplus_presentation, u};

    fn idempotent() -> (Arc<Presentation>, NCPoly) {
        let mut a = GenAlphabet::new();
        let s = a.add_self_adjoint("u").unwrap();
        let x = NCPoly::var(s);
        let pres = Presentation::new("idem", Arc::new(a), [("u2".into(), &(&x * &x) - &x)]);
        (Arc::new(pres.unwrap()), x)
    }

    fn system(pres: Presentation, bound: usize) -> RewriteSystem {
        RewriteSystem::complete(Arc::new(pres), &CompletionConfig::with_bound(bound)).unwrap()
    }

    #[test]
    fn idempotent_collapses_cubes() {
        let (pres, x) = idempotent();
        let sys = RewriteSystem::complete(pres, &CompletionConfig::with_bound(4)).unwrap();
        assert_eq!(sys.rule_count(), 1);
        assert!(sys.is_saturated());
        assert_eq!(sys.normalize(&(&(&x * &x) * &x)), x);
        let (nf, trace) = sys.normalize_traced(&NCPoly::zero());
        assert!(nf.is_zero() && trace.is_empty());
    }

    #[test]
    fn bound_below_relation_degree_is_rejected() {
        let err = RewriteSystem::complete(
            Arc::new(snplus_presentation(2)),
            &CompletionConfig::with_bound(1),
        );
        assert!(matches!(
            err,
            Err(EngineError::DegreeTooSmall { needed: 2, .. })
        ));
    }

    #[test]
    fn row_orthogonality_and_row_sum() {
        let sys = system(snplus_presentation(3), 4);
        assert!(sys.normalize(&(&u(3, 1, 1) * &u(3, 1, 2))).is_zero());
        let mut sum = NCPoly::constant(q(-1));
        for l in 1..=3 {
            sum = &sum + &u(3, 1, l);
        }
        match prove_zero(&sys, &sum) {
            ZeroProof::Proved(c) => assert_eq!(c.len(), 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn s3_plus_is_commutative_and_s4_plus_is_not() {
        let s3 = prove_commutativity(
            Arc::new(snplus_presentation(3)),
            &CompletionConfig::default(),
        );
        assert!(s3.unwrap().is_proved());
        let sys = system(snplus_presentation(4), 6);
        let c = commutator(&u(4, 1, 1), &u(4, 3, 3));
        assert!(!prove_zero(&sys, &c).is_proved());
    }

    #[test]
    fn reverse_order_reproduces_s3_plus() {
        let cfg = CompletionConfig::default().order(SymbolOrder::Reverse);
        let r = prove_commutativity(Arc::new(snplus_presentation(3)), &cfg).unwrap();
        assert!(r.is_proved());
    }

    #[test]
    fn certificates_replay_and_reject_perturbation() {
        let sys = system(snplus_presentation(3), 8);
        let c = commutator(&u(3, 1, 1), &u(3, 2, 2));
        let ZeroProof::Proved(mut cert) = prove_zero(&sys, &c) else {
            panic!("commutator should vanish");
        };
        let pres = sys.presentation();
        assert!(check_certificate(pres, &c, &cert));
        cert.terms[0].coeff += Q::one();
        assert!(!check_certificate(pres, &c, &cert));
        assert!(check_certificate(
            pres,
            &NCPoly::zero(),
            &ProofCertificate::empty()
        ));
    }

    #[test]
    fn layered_certificates_agree_with_flat_ones() {
        let sys = system(snplus_presentation(3), 8);
        let c = commutator(&u(3, 1, 2), &u(3, 2, 3));
        let LayeredProof::Proved(mut layered) = prove_zero_layered(&sys, &c) else {
            panic!("commutator should vanish");
        };
        let pres = sys.presentation();
        assert!(!layered.lemmas.is_empty());
        let file = layered.to_file(pres, &c);
        let (target, back) = LayeredCertificate::from_file(&file, pres).unwrap();
        assert_eq!(target, c);
        assert_eq!(back, layered);
        assert!(ProofCertificate::from_file(&file, pres).is_err());
        layered.lemmas[0].1.terms[0].coeff += Q::one();
        assert!(!check_layered_certificate(pres, &c, &layered));
    }

    #[test]
    fn layered_lemma_may_not_use_itself() {
        let (pres, x) = idempotent();
        let base = pres.relations().len();
        let rel = pres.relation(0).unwrap().clone();
        let mut cert = LayeredCertificate {
            lemmas: vec![(
                rel.clone(),
                ProofCertificate::from_accumulator(
                    [((vec![], base, vec![]), Q::one())].into_iter().collect(),
                ),
            )],
            last: ProofCertificate::from_accumulator(
                [((vec![], base, vec![]), Q::one())].into_iter().collect(),
            ),
        };
        assert!(!check_layered_certificate(&pres, &rel, &cert));
        cert.lemmas[0].1 = ProofCertificate {
            terms: vec![crate::ncstar::CertTerm::unit(0)],
        };
        assert!(check_layered_certificate(&pres, &rel, &cert));
        assert!(!check_layered_certificate(&pres, &x, &cert));
    }
}
