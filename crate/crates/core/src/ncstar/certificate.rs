use std::collections::HashMap;

use num::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::poly::{parse_rational, NCPoly};
use super::presentation::Presentation;
use super::word::{Sym, Word};
use super::{EngineError, Q};

/// One summand `coeff · left · relation[rel] · right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertTerm {
    pub left: Word,
    pub rel: usize,
    pub right: Word,
    pub coeff: Q,
}

/// Witness that a polynomial lies in the two-sided ideal of a presentation:
/// the target equals the sum of its terms in the free algebra.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProofCertificate {
    pub terms: Vec<CertTerm>,
}

impl ProofCertificate {
    pub fn empty() -> Self {
        ProofCertificate { terms: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Merge terms with equal `(left, rel, right)` and drop zeros. Output is
    /// sorted, so equal certificates have equal term lists.
    pub fn from_accumulator(acc: HashMap<(Vec<Sym>, usize, Vec<Sym>), Q>) -> Self {
        let mut terms: Vec<CertTerm> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((l, rel, r), coeff)| CertTerm {
                left: Word(l),
                rel,
                right: Word(r),
                coeff,
            })
            .collect();
        terms.sort_by(|a, b| (a.rel, &a.left, &a.right).cmp(&(b.rel, &b.left, &b.right)));
        ProofCertificate { terms }
    }

    /// Sum of the terms in the free algebra.
    pub fn expand(&self, pres: &Presentation) -> Result<NCPoly, EngineError> {
        let mut out = NCPoly::zero();
        for t in &self.terms {
            let rel = pres
                .relation(t.rel)
                .ok_or(EngineError::BadRelationIndex(t.rel))?;
            out.add_shifted(&t.coeff, &t.left.0, rel, &t.right.0);
        }
        Ok(out)
    }

    /// `Σ c · l · cert · r` with the same relation indices.
    pub fn accumulate_into(
        &self,
        acc: &mut HashMap<(Vec<Sym>, usize, Vec<Sym>), Q>,
        c: &Q,
        left: &[Sym],
        right: &[Sym],
    ) {
        for t in &self.terms {
            let key = (
                Word::wrap(left, &t.left.0, &[]).0,
                t.rel,
                Word::wrap(&[], &t.right.0, right).0,
            );
            let v = c * &t.coeff;
            let e = acc.entry(key).or_insert_with(Q::zero);
            *e += v;
        }
    }

    pub fn to_file(&self, pres: &Presentation, target: &NCPoly) -> CertificateFile {
        let alpha = pres.alphabet();
        CertificateFile {
            target: target.to_json(alpha),
            terms: self
                .terms
                .iter()
                .map(|t| CertTermFile {
                    left: alpha.word_names(&t.left),
                    rel: t.rel,
                    right: alpha.word_names(&t.right),
                    coeff: t.coeff.to_string(),
                })
                .collect(),
            lemmas: Vec::new(),
        }
    }

    /// Reads a flat file. Layered files are rejected here.
    pub fn from_file(
        f: &CertificateFile,
        pres: &Presentation,
    ) -> Result<(NCPoly, ProofCertificate), EngineError> {
        if !f.lemmas.is_empty() {
            return Err(EngineError::Parse("certificate has lemmas".into()));
        }
        Self::from_terms(&f.target, &f.terms, pres)
    }

    fn from_terms(
        target: &Value,
        terms: &[CertTermFile],
        pres: &Presentation,
    ) -> Result<(NCPoly, ProofCertificate), EngineError> {
        let alpha = pres.alphabet();
        let target = NCPoly::from_json(target, alpha)?;
        let terms = terms
            .iter()
            .map(|t| {
                Ok(CertTerm {
                    left: alpha.parse_word_names(&t.left)?,
                    rel: t.rel,
                    right: alpha.parse_word_names(&t.right)?,
                    coeff: parse_rational(&t.coeff)?,
                })
            })
            .collect::<Result<Vec<_>, EngineError>>()?;
        Ok((target, ProofCertificate { terms }))
    }
}

/// Replays the certificate in the free algebra. Does not touch any rewrite
/// system.
pub fn check_certificate(pres: &Presentation, p: &NCPoly, cert: &ProofCertificate) -> bool {
    match cert.expand(pres) {
        Ok(sum) => &sum == p,
        Err(_) => false,
    }
}

/// Certificate split into lemmas. A relation index `r` at or above the
/// number of presentation relations `base` refers to lemma `r - base`.
/// Lemma `k` may use only lemmas before it; `last` may use all of them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LayeredCertificate {
    pub lemmas: Vec<(NCPoly, ProofCertificate)>,
    pub last: ProofCertificate,
}

fn expand_with(
    cert: &ProofCertificate,
    pres: &Presentation,
    lemmas: &[(NCPoly, ProofCertificate)],
) -> Result<NCPoly, EngineError> {
    let base = pres.relations().len();
    let mut out = NCPoly::zero();
    for t in &cert.terms {
        let rel = if t.rel < base {
            pres.relation(t.rel)
        } else {
            lemmas.get(t.rel - base).map(|(p, _)| p)
        }
        .ok_or(EngineError::BadRelationIndex(t.rel))?;
        out.add_shifted(&t.coeff, &t.left.0, rel, &t.right.0);
    }
    Ok(out)
}

impl LayeredCertificate {
    /// Total number of terms over all layers.
    pub fn len(&self) -> usize {
        self.last.len() + self.lemmas.iter().map(|(_, c)| c.len()).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Replays every lemma in order, then expands `last`.
    pub fn expand(&self, pres: &Presentation) -> Result<NCPoly, EngineError> {
        for (k, (poly, cert)) in self.lemmas.iter().enumerate() {
            if expand_with(cert, pres, &self.lemmas[..k])? != *poly {
                return Err(EngineError::BadLemma(k));
            }
        }
        expand_with(&self.last, pres, &self.lemmas)
    }

    pub fn to_file(&self, pres: &Presentation, target: &NCPoly) -> CertificateFile {
        let alpha = pres.alphabet();
        let mut f = self.last.to_file(pres, target);
        f.lemmas = self
            .lemmas
            .iter()
            .map(|(p, c)| LemmaFile {
                poly: p.to_json(alpha),
                terms: c.to_file(pres, p).terms,
            })
            .collect();
        f
    }

    /// Reads flat and layered files alike.
    pub fn from_file(
        f: &CertificateFile,
        pres: &Presentation,
    ) -> Result<(NCPoly, LayeredCertificate), EngineError> {
        let (target, last) = ProofCertificate::from_terms(&f.target, &f.terms, pres)?;
        let lemmas = f
            .lemmas
            .iter()
            .map(|l| ProofCertificate::from_terms(&l.poly, &l.terms, pres))
            .collect::<Result<Vec<_>, EngineError>>()?;
        Ok((target, LayeredCertificate { lemmas, last }))
    }
}

impl From<ProofCertificate> for LayeredCertificate {
    fn from(last: ProofCertificate) -> Self {
        LayeredCertificate {
            lemmas: Vec::new(),
            last,
        }
    }
}

pub fn check_layered_certificate(
    pres: &Presentation,
    p: &NCPoly,
    cert: &LayeredCertificate,
) -> bool {
    match cert.expand(pres) {
        Ok(sum) => &sum == p,
        Err(_) => false,
    }
}

/// On-disk certificate:
/// `{"target": poly, "terms": [{"left": [...], "rel": i, "right": [...], "coeff": "p/q"}]}`,
/// plus `"lemmas": [{"poly": poly, "terms": [...]}]` for layered certificates.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CertificateFile {
    pub target: Value,
    pub terms: Vec<CertTermFile>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lemmas: Vec<LemmaFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LemmaFile {
    pub poly: Value,
    pub terms: Vec<CertTermFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CertTermFile {
    pub left: Vec<String>,
    pub rel: usize,
    pub right: Vec<String>,
    pub coeff: String,
}

impl CertTerm {
    pub fn unit(rel: usize) -> Self {
        CertTerm {
            left: Word::unit(),
            rel,
            right: Word::unit(),
            coeff: Q::one(),
        }
    }
}
