//! Tensor products of presented *-algebras with legs kept as word tuples.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num::{One, Zero};

use serde::{Deserialize, Serialize};

use crate::ncstar::{
    parse_rational, EngineError, NCPoly, Presentation, ProofCertificate, RewriteSystem, Word, Q,
};

/// The legs of a tensor product, one presentation each.
#[derive(Debug)]
pub struct TensorSpace {
    pub legs: Vec<Arc<Presentation>>,
}

impl TensorSpace {
    pub fn new(legs: Vec<Arc<Presentation>>) -> Arc<Self> {
        Arc::new(TensorSpace { legs })
    }

    pub fn len(&self) -> usize {
        self.legs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.legs.is_empty()
    }
}

/// Finite sum of elementary tensors `c · w_1 ⊗ … ⊗ w_k`.
#[derive(Clone)]
pub struct TensorPoly {
    space: Arc<TensorSpace>,
    terms: BTreeMap<Vec<Word>, Q>,
}

impl PartialEq for TensorPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for TensorPoly {}

impl std::fmt::Debug for TensorPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.display())
    }
}

fn add_into(map: &mut BTreeMap<Vec<Word>, Q>, key: Vec<Word>, c: Q) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

impl TensorPoly {
    pub fn zero(space: &Arc<TensorSpace>) -> Self {
        TensorPoly {
            space: space.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(space: &Arc<TensorSpace>) -> Self {
        let mut t = Self::zero(space);
        t.terms.insert(vec![Word::unit(); space.len()], Q::one());
        t
    }

    /// `p_1 ⊗ … ⊗ p_k`.
    pub fn tensor(space: &Arc<TensorSpace>, factors: &[NCPoly]) -> Self {
        assert_eq!(factors.len(), space.len(), "one factor per leg");
        let mut t = Self::one(space);
        for (leg, p) in factors.iter().enumerate() {
            t = &t * &Self::on_leg(space, leg, p);
        }
        t
    }

    /// `1 ⊗ … ⊗ p ⊗ … ⊗ 1` with `p` on `leg`.
    pub fn on_leg(space: &Arc<TensorSpace>, leg: usize, p: &NCPoly) -> Self {
        let mut t = Self::zero(space);
        for (w, c) in p.terms() {
            let mut key = vec![Word::unit(); space.len()];
            key[leg] = w.clone();
            add_into(&mut t.terms, key, c.clone());
        }
        t
    }

    pub fn space(&self) -> &Arc<TensorSpace> {
        &self.space
    }

    pub fn legs(&self) -> usize {
        self.space.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Word>, &Q)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, words: Vec<Word>, c: Q) {
        assert_eq!(words.len(), self.legs());
        add_into(&mut self.terms, words, c);
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut t = Self::zero(&self.space);
        if c.is_zero() {
            return t;
        }
        t.terms = self.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect();
        t
    }

    /// Star every leg; legs keep their positions.
    pub fn star(&self) -> Self {
        let mut t = Self::zero(&self.space);
        for (k, c) in &self.terms {
            let key = k
                .iter()
                .enumerate()
                .map(|(leg, w)| self.space.legs[leg].alphabet().star_word(w))
                .collect();
            add_into(&mut t.terms, key, c.clone());
        }
        t
    }

    /// Renames the symbols on one leg.
    pub fn map_leg(
        &self,
        leg: usize,
        f: &dyn Fn(crate::ncstar::Sym) -> crate::ncstar::Sym,
    ) -> Self {
        let mut t = Self::zero(&self.space);
        for (k, c) in &self.terms {
            let mut key = k.clone();
            key[leg] = key[leg].map(f);
            add_into(&mut t.terms, key, c.clone());
        }
        t
    }

    /// Replaces leg `leg` by the legs of `target` through the algebra map
    /// sending each generator `s` of that leg to `image(s)`. The new legs are
    /// inserted at position `leg`.
    pub fn expand_leg(
        &self,
        leg: usize,
        target: &Arc<TensorSpace>,
        image: &dyn Fn(crate::ncstar::Sym) -> TensorPoly,
    ) -> TensorPoly {
        let k = self.legs();
        let m = target.len() - (k - 1);
        let mut cache: HashMap<Word, TensorPoly> = HashMap::new();
        let mut out = TensorPoly::zero(target);
        for (words, c) in &self.terms {
            let img = cache.entry(words[leg].clone()).or_insert_with(|| {
                let mut acc = None::<TensorPoly>;
                for &s in words[leg].syms() {
                    let x = image(s);
                    acc = Some(match acc {
                        None => x,
                        Some(a) => &a * &x,
                    });
                }
                acc.unwrap_or_else(|| {
                    let sub = TensorSpace::new(target.legs[leg..leg + m].to_vec());
                    TensorPoly::one(&sub)
                })
            });
            for (iw, ic) in &img.terms {
                let mut key = Vec::with_capacity(target.len());
                key.extend_from_slice(&words[..leg]);
                key.extend(iw.iter().cloned());
                key.extend_from_slice(&words[leg + 1..]);
                add_into(&mut out.terms, key, c * ic);
            }
        }
        out
    }

    /// Human-readable form, legs joined by `⊗`.
    pub fn display(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(k, c)| {
                let legs: Vec<String> = k
                    .iter()
                    .enumerate()
                    .map(|(leg, w)| {
                        self.space.legs[leg]
                            .alphabet()
                            .format_word(w)
                            .replace(' ', "·")
                    })
                    .collect();
                format!("({c}) {}", legs.join(" ⊗ "))
            })
            .collect();
        parts.join(" + ")
    }

    /// Leg `leg` coefficient grouping: map from the other legs' words to the
    /// polynomial on `leg`.
    pub fn group_by_others(&self, leg: usize) -> BTreeMap<Vec<Word>, NCPoly> {
        let mut out: BTreeMap<Vec<Word>, NCPoly> = BTreeMap::new();
        for (k, c) in &self.terms {
            let mut rest = k.clone();
            let w = std::mem::take(&mut rest[leg]);
            out.entry(rest).or_default().add_term(w, c.clone());
        }
        out
    }
}

impl<'a> std::ops::Add<&'a TensorPoly> for &'a TensorPoly {
    type Output = TensorPoly;
    fn add(self, rhs: &TensorPoly) -> TensorPoly {
        let mut t = self.clone();
        for (k, c) in &rhs.terms {
            add_into(&mut t.terms, k.clone(), c.clone());
        }
        t
    }
}

impl<'a> std::ops::Sub<&'a TensorPoly> for &'a TensorPoly {
    type Output = TensorPoly;
    fn sub(self, rhs: &TensorPoly) -> TensorPoly {
        let mut t = self.clone();
        for (k, c) in &rhs.terms {
            add_into(&mut t.terms, k.clone(), -c.clone());
        }
        t
    }
}

impl<'a> std::ops::Mul<&'a TensorPoly> for &'a TensorPoly {
    type Output = TensorPoly;
    fn mul(self, rhs: &TensorPoly) -> TensorPoly {
        assert_eq!(self.legs(), rhs.legs(), "leg counts differ");
        let mut t = TensorPoly::zero(&self.space);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let key = a.iter().zip(b).map(|(x, y)| x.concat(y)).collect();
                add_into(&mut t.terms, key, ca * cb);
            }
        }
        t
    }
}

/// `coeff · (context with leg replaced by left · relation · right)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorCertTerm {
    pub leg: usize,
    pub left: Word,
    pub rel: usize,
    pub right: Word,
    /// Words on the other legs; the entry at `leg` is the unit.
    pub context: Vec<Word>,
    pub coeff: Q,
}

/// Witness that a tensor polynomial lies in the sum of the leg ideals.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TensorCertificate {
    pub terms: Vec<TensorCertTerm>,
}

impl TensorCertificate {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Expansion in the free tensor algebra.
    pub fn expand(&self, space: &Arc<TensorSpace>) -> Option<TensorPoly> {
        let mut out = TensorPoly::zero(space);
        for t in &self.terms {
            let rel = space.legs.get(t.leg)?.relation(t.rel)?;
            for (w, c) in rel.terms() {
                let mut key = t.context.clone();
                key[t.leg] = Word::wrap(t.left.syms(), w.syms(), t.right.syms());
                add_into(&mut out.terms, key, &t.coeff * c);
            }
        }
        Some(out)
    }
}

/// On-disk tensor certificate. Words are lists of generator names, one list
/// per leg; the presentations of the legs are stored separately.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TensorCertificateFile {
    pub target: Vec<TensorTermFile>,
    pub terms: Vec<TensorCertTermFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TensorTermFile {
    pub words: Vec<Vec<String>>,
    pub coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TensorCertTermFile {
    pub leg: usize,
    pub left: Vec<String>,
    pub rel: usize,
    pub right: Vec<String>,
    pub context: Vec<Vec<String>>,
    pub coeff: String,
}

fn names(space: &TensorSpace, words: &[Word]) -> Vec<Vec<String>> {
    words
        .iter()
        .zip(&space.legs)
        .map(|(w, p)| p.alphabet().word_names(w))
        .collect()
}

fn parse_words(space: &TensorSpace, names: &[Vec<String>]) -> Result<Vec<Word>, EngineError> {
    if names.len() != space.len() {
        return Err(EngineError::Parse(format!(
            "expected {} legs, got {}",
            space.len(),
            names.len()
        )));
    }
    names
        .iter()
        .zip(&space.legs)
        .map(|(n, p)| p.alphabet().parse_word_names(n))
        .collect()
}

impl TensorCertificate {
    pub fn to_file(&self, target: &TensorPoly) -> TensorCertificateFile {
        let space = target.space();
        TensorCertificateFile {
            target: target
                .terms()
                .map(|(w, c)| TensorTermFile {
                    words: names(space, w),
                    coeff: c.to_string(),
                })
                .collect(),
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let alpha = space.legs[t.leg].alphabet();
                    TensorCertTermFile {
                        leg: t.leg,
                        left: alpha.word_names(&t.left),
                        rel: t.rel,
                        right: alpha.word_names(&t.right),
                        context: names(space, &t.context),
                        coeff: t.coeff.to_string(),
                    }
                })
                .collect(),
        }
    }

    pub fn from_file(
        f: &TensorCertificateFile,
        space: &Arc<TensorSpace>,
    ) -> Result<(TensorPoly, TensorCertificate), EngineError> {
        let mut target = TensorPoly::zero(space);
        for t in &f.target {
            target.add_term(parse_words(space, &t.words)?, parse_rational(&t.coeff)?);
        }
        let terms = f
            .terms
            .iter()
            .map(|t| {
                let alpha = space
                    .legs
                    .get(t.leg)
                    .ok_or_else(|| EngineError::Parse(format!("leg {} out of range", t.leg)))?
                    .alphabet();
                Ok(TensorCertTerm {
                    leg: t.leg,
                    left: alpha.parse_word_names(&t.left)?,
                    rel: t.rel,
                    right: alpha.parse_word_names(&t.right)?,
                    context: parse_words(space, &t.context)?,
                    coeff: parse_rational(&t.coeff)?,
                })
            })
            .collect::<Result<Vec<_>, EngineError>>()?;
        Ok((target, TensorCertificate { terms }))
    }
}

/// True iff the certificate expands to exactly `p` in the free tensor algebra.
pub fn check_tensor_certificate(p: &TensorPoly, cert: &TensorCertificate) -> bool {
    cert.expand(p.space()).is_some_and(|e| e == *p)
}

type CertKey = (usize, Vec<u16>, usize, Vec<u16>, Vec<Word>);

/// Result of reducing some legs to normal form: `input − normal = expand(cert)`.
#[derive(Debug, Clone)]
pub struct TensorNormalized {
    pub normal: TensorPoly,
    pub certificate: TensorCertificate,
}

/// Reduces each leg that has a system, last leg first, recording a certificate.
/// A zero result proves the input is zero in the tensor product of the
/// quotient algebras.
pub fn tensor_normalize(t: &TensorPoly, systems: &[Option<&RewriteSystem>]) -> TensorNormalized {
    assert_eq!(systems.len(), t.legs(), "one entry per leg");
    let mut cur = t.terms.clone();
    let mut acc: HashMap<CertKey, Q> = HashMap::new();
    // Later legs first: the graph algebra sits last and kills most terms
    // cheaply, so fewer words reach the costlier legs.
    for (leg, sys) in systems.iter().enumerate().rev() {
        let Some(sys) = sys else { continue };
        let mut cache: HashMap<Word, (NCPoly, ProofCertificate)> = HashMap::new();
        let mut next = BTreeMap::new();
        for (words, c) in cur {
            let (nf, cert) = cache
                .entry(words[leg].clone())
                .or_insert_with(|| sys.reduce_with_certificate(&NCPoly::word(words[leg].clone())));
            let mut ctx = words.clone();
            ctx[leg] = Word::unit();
            for ct in &cert.terms {
                let key = (
                    leg,
                    ct.left.syms().to_vec(),
                    ct.rel,
                    ct.right.syms().to_vec(),
                    ctx.clone(),
                );
                *acc.entry(key).or_insert_with(Q::zero) += &c * &ct.coeff;
            }
            for (w, wc) in nf.terms() {
                let mut key = ctx.clone();
                key[leg] = w.clone();
                add_into(&mut next, key, &c * wc);
            }
        }
        cur = next;
    }
    let mut terms: Vec<TensorCertTerm> = acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((leg, l, rel, r, context), coeff)| TensorCertTerm {
            leg,
            left: Word::from_syms(l),
            rel,
            right: Word::from_syms(r),
            context,
            coeff,
        })
        .collect();
    terms.sort_by(|a, b| {
        (a.leg, a.rel, &a.context, &a.left, &a.right)
            .cmp(&(b.leg, b.rel, &b.context, &b.left, &b.right))
    });
    TensorNormalized {
        normal: TensorPoly {
            space: t.space.clone(),
            terms: cur,
        },
        certificate: TensorCertificate { terms },
    }
}

/// Writes `t` (already normalized on `leg`) as `Σ_k a_k ⊗ basis_k`, where
/// the `a_k` live on the other legs' free algebra and the basis elements are
/// normal forms on `leg`. Only two-leg spaces are supported. Returns `None`
/// when `t` is not in the span.
pub fn extract_coefficients(t: &TensorPoly, leg: usize, basis: &[NCPoly]) -> Option<Vec<NCPoly>> {
    assert_eq!(t.legs(), 2, "extraction is defined for two legs");
    let other = 1 - leg;
    // Column per basis element, row per normal word on `leg`.
    let mut words: Vec<Word> = basis
        .iter()
        .flat_map(|b| b.terms().map(|(w, _)| w.clone()))
        .chain(t.terms.keys().map(|k| k[leg].clone()))
        .collect();
    words.sort();
    words.dedup();
    let row_of: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let nb = basis.len();
    let mut mat: Vec<Vec<Q>> = vec![vec![Q::zero(); nb]; words.len()];
    for (k, b) in basis.iter().enumerate() {
        for (w, c) in b.terms() {
            mat[row_of[w]][k] = c.clone();
        }
    }
    let mut rhs: Vec<NCPoly> = vec![NCPoly::zero(); words.len()];
    for (key, c) in &t.terms {
        rhs[row_of[&key[leg]]].add_term(key[other].clone(), c.clone());
    }
    // Gaussian elimination carrying polynomial right-hand sides.
    let rows = words.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..nb {
        let p = (r..rows).find(|&i| !mat[i][col].is_zero())?;
        mat.swap(r, p);
        rhs.swap(r, p);
        let inv = mat[r][col].recip();
        for x in mat[r].iter_mut() {
            *x *= &inv;
        }
        rhs[r] = rhs[r].scale(&inv);
        for i in 0..rows {
            if i != r && !mat[i][col].is_zero() {
                let f = mat[i][col].clone();
                let pivot_row = mat[r].clone();
                for (x, y) in mat[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
                let sub = rhs[r].scale(&f);
                rhs[i] = &rhs[i] - &sub;
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rhs[r..].iter().any(|p| !p.is_zero()) {
        return None;
    }
    Some(rhs.into_iter().take(nb).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::ncstar::CompletionConfig;
    use crate::presentations::{banica_presentation, cstar_alphabet, graph_cstar_presentation, u};

    fn setup() -> (Arc<TensorSpace>, RewriteSystem, RewriteSystem) {
        let g = build_graph(2, &[(1, 2), (2, 1)]).unwrap();
        let a = Arc::new(banica_presentation(&g));
        let b = Arc::new(graph_cstar_presentation(&g));
        let sa = RewriteSystem::complete(a.clone(), &CompletionConfig::with_bound(6)).unwrap();
        let sb = RewriteSystem::complete(b.clone(), &CompletionConfig::with_bound(6)).unwrap();
        (TensorSpace::new(vec![a, b]), sa, sb)
    }

    #[test]
    fn annihilating_legs() {
        let (space, sa, sb) = setup();
        let c = cstar_alphabet(&build_graph(2, &[(1, 2), (2, 1)]).unwrap()).1;
        let t = TensorPoly::tensor(&space, &[&u(2, 1, 1) * &u(2, 1, 2), c.p(1)]);
        let r = tensor_normalize(&t, &[Some(&sa), Some(&sb)]);
        assert!(r.normal.is_zero());
        assert!(check_tensor_certificate(&t, &r.certificate));

        let t = TensorPoly::tensor(&space, &[NCPoly::one(), &c.p(1) * &c.p(2)]);
        let r = tensor_normalize(&t, &[Some(&sa), Some(&sb)]);
        assert!(r.normal.is_zero());
        assert!(check_tensor_certificate(&t, &r.certificate));

        let x = &TensorPoly::tensor(&space, &[u(2, 1, 1), c.p(1)])
            + &TensorPoly::tensor(&space, &[u(2, 1, 2), c.p(2)]);
        assert!((&x - &x).is_zero());
    }

    #[test]
    fn mutated_certificate_rejected() {
        let (space, sa, sb) = setup();
        let t = TensorPoly::tensor(&space, &[&u(2, 1, 1) * &u(2, 1, 1), NCPoly::one()]);
        let r = tensor_normalize(&t, &[Some(&sa), Some(&sb)]);
        let mut bad = r.certificate.clone();
        bad.terms[0].coeff += Q::one();
        let diff = &t - &r.normal;
        assert!(check_tensor_certificate(&diff, &r.certificate));
        assert!(!check_tensor_certificate(&diff, &bad));
    }

    #[test]
    fn extraction_round_trip() {
        let (space, _, sb) = setup();
        let basis: Vec<NCPoly> = (0..2).map(|v| sb.normalize(&NCPoly::var(v))).collect();
        let a0 = &u(2, 1, 1) * &u(2, 2, 2);
        let a1 = &u(2, 1, 2) - &NCPoly::one();
        let t = &TensorPoly::tensor(&space, &[a0.clone(), basis[0].clone()])
            + &TensorPoly::tensor(&space, &[a1.clone(), basis[1].clone()]);
        assert_eq!(extract_coefficients(&t, 1, &basis).unwrap(), vec![a0, a1]);
        let stray = TensorPoly::tensor(&space, &[NCPoly::one(), NCPoly::var(2)]);
        assert!(extract_coefficients(&(&t + &stray), 1, &basis).is_none());
    }
}
