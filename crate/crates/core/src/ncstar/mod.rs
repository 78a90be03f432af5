//! Free *-algebras over the rationals, presentations, and certified ideal
//! membership by truncated overlap completion.

mod alphabet;
mod certificate;
mod poly;
mod presentation;
mod rewrite;
mod word;

pub use alphabet::{GenAlphabet, GeneratorTag};
pub use certificate::{
    check_certificate, check_layered_certificate, CertTerm, CertTermFile, CertificateFile,
    LayeredCertificate, LemmaFile, ProofCertificate,
};
pub use poly::{parse_rational, q, qr, NCPoly};
pub use presentation::{Presentation, PresentationDump, Relation, RelationDump};
pub use rewrite::{
    commutator, prove_commutativity, prove_commutativity_in, prove_zero, prove_zero_layered,
    CommutativityResult, CommutatorProof, CompletionConfig, CompletionStats, LayeredProof,
    RewriteSystem, SymbolOrder, TraceStep, ZeroProof,
};
pub use word::{Sym, Word};

pub type Q = num::BigRational;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("duplicate generator '{0}'")]
    DuplicateGenerator(String),
    #[error("too many generators")]
    AlphabetTooLarge,
    #[error("generator '{0}' has no matching adjoint entry")]
    BadInvolution(String),
    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),
    #[error("symbol {0} is outside the alphabet")]
    UnknownSymbol(Sym),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("lemma {0} does not replay")]
    BadLemma(usize),
    #[error("relation index {0} out of range")]
    BadRelationIndex(usize),
    #[error("degree bound {bound} is below the largest relation degree {needed}")]
    DegreeTooSmall { bound: usize, needed: usize },
    #[error("bad symbol order: {0}")]
    BadSymbolOrder(String),
}
