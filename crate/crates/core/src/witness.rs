//! Exact rational matrix representations as witnesses of noncommutativity.

use std::collections::BTreeMap;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::graph::{adjacency, Graph};
use crate::ncstar::{parse_rational, qr, NCPoly, Presentation, Sym, Q};
use crate::presentations::{h2_name, u_name, z2free_block_matrix};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("no matrix for generator '{0}'")]
    MissingGenerator(String),
    #[error("matrix for '{0}' is not {1}x{1}")]
    DimensionMismatch(String, usize),
    #[error("matrix for '{0}' does not respect the involution")]
    InvolutionMismatch(String),
    #[error("representation does not satisfy relation {0} ('{1}')")]
    RepInvalid(usize, String),
    #[error("rep file: {0}")]
    Parse(String),
}

pub type Matrix = Vec<Vec<Q>>;

pub fn zero_matrix(d: usize) -> Matrix {
    vec![vec![Q::zero(); d]; d]
}

pub fn identity_matrix(d: usize) -> Matrix {
    let mut m = zero_matrix(d);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Q::one();
    }
    m
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let d = a.len();
    let mut out = zero_matrix(d);
    for i in 0..d {
        for k in 0..d {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..d {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

pub fn mat_add_scaled(acc: &mut Matrix, c: &Q, b: &Matrix) {
    for (ra, rb) in acc.iter_mut().zip(b) {
        for (x, y) in ra.iter_mut().zip(rb) {
            *x += c * y;
        }
    }
}

pub fn transpose(a: &Matrix) -> Matrix {
    let d = a.len();
    (0..d)
        .map(|i| (0..d).map(|j| a[j][i].clone()).collect())
        .collect()
}

pub fn is_zero_matrix(a: &Matrix) -> bool {
    a.iter().flatten().all(|x| x.is_zero())
}

/// Assignment of `d × d` rational matrices to generator names. A starred
/// generator without its own entry maps to the transpose of its partner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixRep {
    pub dim: usize,
    pub assign: BTreeMap<String, Matrix>,
}

#[derive(Serialize, Deserialize)]
struct RepFile {
    dim: usize,
    assign: BTreeMap<String, Vec<Vec<String>>>,
}

impl MatrixRep {
    pub fn new(dim: usize) -> Self {
        MatrixRep {
            dim,
            assign: BTreeMap::new(),
        }
    }

    pub fn with(mut self, name: impl Into<String>, m: Matrix) -> Self {
        self.assign.insert(name.into(), m);
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        let f = RepFile {
            dim: self.dim,
            assign: self
                .assign
                .iter()
                .map(|(k, m)| {
                    (
                        k.clone(),
                        m.iter()
                            .map(|r| r.iter().map(|x| x.to_string()).collect())
                            .collect(),
                    )
                })
                .collect(),
        };
        serde_json::to_value(f).expect("rep serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self, WitnessError> {
        let f: RepFile = serde_json::from_str(s).map_err(|e| WitnessError::Parse(e.to_string()))?;
        let mut assign = BTreeMap::new();
        for (k, rows) in f.assign {
            let m = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|x| parse_rational(x).map_err(|e| WitnessError::Parse(e.to_string())))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            assign.insert(k, m);
        }
        Ok(MatrixRep { dim: f.dim, assign })
    }

    /// One matrix per symbol of the presentation's alphabet.
    fn matrices(&self, pres: &Presentation) -> Result<Vec<Matrix>, WitnessError> {
        let alpha = pres.alphabet();
        let d = self.dim;
        for (name, m) in &self.assign {
            if m.len() != d || m.iter().any(|r| r.len() != d) {
                return Err(WitnessError::DimensionMismatch(name.clone(), d));
            }
        }
        let mut out = Vec::with_capacity(alpha.len());
        for s in 0..alpha.len() as Sym {
            let name = alpha.name(s);
            let partner = alpha.name(alpha.star_of(s));
            let m = match (self.assign.get(name), self.assign.get(partner)) {
                (Some(m), Some(p)) => {
                    if *m != transpose(p) {
                        return Err(WitnessError::InvolutionMismatch(name.to_string()));
                    }
                    m.clone()
                }
                (Some(m), None) => m.clone(),
                (None, Some(p)) => transpose(p),
                (None, None) => return Err(WitnessError::MissingGenerator(name.to_string())),
            };
            out.push(m);
        }
        Ok(out)
    }
}

fn eval(p: &NCPoly, mats: &[Matrix], d: usize) -> Matrix {
    let mut out = zero_matrix(d);
    for (w, c) in p.terms() {
        let mut m = identity_matrix(d);
        for &s in w.syms() {
            m = mat_mul(&m, &mats[s as usize]);
        }
        mat_add_scaled(&mut out, c, &m);
    }
    out
}

/// Image of a polynomial under the representation.
pub fn evaluate(pres: &Presentation, rep: &MatrixRep, p: &NCPoly) -> Result<Matrix, WitnessError> {
    let mats = rep.matrices(pres)?;
    Ok(eval(p, &mats, rep.dim))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepCheck {
    pub ok: bool,
    pub first_failing: Option<(usize, String)>,
}

/// Exact check that every relation maps to the zero matrix.
pub fn verify_representation(
    pres: &Presentation,
    rep: &MatrixRep,
) -> Result<RepCheck, WitnessError> {
    let mats = rep.matrices(pres)?;
    for (i, r) in pres.relations().iter().enumerate() {
        if !is_zero_matrix(&eval(&r.poly, &mats, rep.dim)) {
            return Ok(RepCheck {
                ok: false,
                first_failing: Some((i, r.label.clone())),
            });
        }
    }
    Ok(RepCheck {
        ok: true,
        first_failing: None,
    })
}

/// True iff the representation is valid and `[a, b]` maps to a nonzero matrix.
pub fn certify_noncommutative(
    pres: &Presentation,
    rep: &MatrixRep,
    a: &NCPoly,
    b: &NCPoly,
) -> Result<bool, WitnessError> {
    let check = verify_representation(pres, rep)?;
    if let Some((i, label)) = check.first_failing {
        return Err(WitnessError::RepInvalid(i, label));
    }
    let mats = rep.matrices(pres)?;
    let ab = eval(&(a * b), &mats, rep.dim);
    let ba = eval(&(b * a), &mats, rep.dim);
    Ok(ab != ba)
}

/// `diag(1, 0)`.
pub fn projection_p() -> Matrix {
    vec![vec![qr(1, 1), qr(0, 1)], vec![qr(0, 1), qr(0, 1)]]
}

/// Rank-one projection onto `(3/5, 4/5)`.
pub fn projection_q() -> Matrix {
    vec![vec![qr(9, 25), qr(12, 25)], vec![qr(12, 25), qr(16, 25)]]
}

/// `p ↦ diag(1,0)`, `q ↦` projection onto `(3/5, 4/5)`.
pub fn two_projection_rep() -> MatrixRep {
    MatrixRep::new(2)
        .with("p", projection_p())
        .with("q", projection_q())
}

fn affine(c: &Q, m: &Matrix, shift: &Q) -> Matrix {
    let d = m.len();
    let mut out = identity_matrix(d);
    for row in out.iter_mut() {
        for x in row.iter_mut() {
            *x *= shift;
        }
    }
    mat_add_scaled(&mut out, c, m);
    out
}

/// `v11 ↦ 2p − 1`, `v22 ↦ 2q − 1`, off-diagonal entries zero.
pub fn h2plus_rep() -> MatrixRep {
    let two = qr(2, 1);
    let m1 = -Q::one();
    MatrixRep::new(2)
        .with(h2_name(1, 1), affine(&two, &projection_p(), &m1))
        .with(h2_name(2, 2), affine(&two, &projection_q(), &m1))
        .with(h2_name(1, 2), zero_matrix(2))
        .with(h2_name(2, 1), zero_matrix(2))
}

/// The 4 × 4 block magic unitary with entries in `p, q`, evaluated at the
/// canonical projection pair.
pub fn block_magic_rep() -> MatrixRep {
    let pq = crate::presentations::z2freedual_presentation();
    let two = two_projection_rep();
    let u = z2free_block_matrix();
    let mut rep = MatrixRep::new(2);
    for (i, row) in u.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let m = evaluate(&pq, &two, x).expect("two-projection rep covers p, q");
            rep.assign.insert(u_name(4, i + 1, j + 1), m);
        }
    }
    rep
}

/// The block witness when the block magic unitary commutes with the
/// adjacency matrix of `g` as polynomials in `p, q`.
pub fn builtin_block_witness(g: &Graph) -> Option<MatrixRep> {
    if g.n() != 4 {
        return None;
    }
    let u = z2free_block_matrix();
    let eps = adjacency(g);
    for i in 0..4 {
        for j in 0..4 {
            let mut d = NCPoly::zero();
            for k in 0..4 {
                if eps[k][j] == 1 {
                    d = &d + &u[i][k];
                }
                if eps[i][k] == 1 {
                    d = &d - &u[k][j];
                }
            }
            if !d.is_zero() {
                return None;
            }
        }
    }
    Some(block_magic_rep())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{
        banica_presentation, h2plus_presentation, snplus_presentation, u, z2freedual_presentation,
    };

    #[test]
    fn two_projections_are_projections() {
        let pres = z2freedual_presentation();
        assert!(
            verify_representation(&pres, &two_projection_rep())
                .unwrap()
                .ok
        );
        let mut bad = projection_q();
        bad[0][1] = qr(11, 25);
        bad[1][0] = qr(11, 25);
        let rep = MatrixRep::new(2).with("p", projection_p()).with("q", bad);
        assert!(!verify_representation(&pres, &rep).unwrap().ok);
    }

    #[test]
    fn commutator_of_projections() {
        // Independent oracle: pq − qp = [[0, 12/25], [−12/25, 0]].
        let p = projection_p();
        let q = projection_q();
        let mut c = mat_mul(&p, &q);
        mat_add_scaled(&mut c, &-Q::one(), &mat_mul(&q, &p));
        assert_eq!(
            c,
            vec![vec![qr(0, 1), qr(12, 25)], vec![qr(-12, 25), qr(0, 1)]]
        );
        let pres = z2freedual_presentation();
        let (a, b) = (NCPoly::var(0), NCPoly::var(1));
        assert!(certify_noncommutative(&pres, &two_projection_rep(), &a, &b).unwrap());
        assert!(!certify_noncommutative(&pres, &two_projection_rep(), &a, &a).unwrap());
    }

    #[test]
    fn block_witness_applicability() {
        let row2 = Graph::undirected(4, &[(1, 2)]).unwrap();
        let row4 = Graph::undirected(4, &[(1, 2), (3, 4)]).unwrap();
        let row6 = Graph::undirected(4, &[(3, 1), (1, 2), (2, 4)]).unwrap();
        assert!(builtin_block_witness(&row6).is_none());
        for g in [&row2, &row4] {
            let rep = builtin_block_witness(g).expect("applies");
            let pres = banica_presentation(g);
            assert!(verify_representation(&pres, &rep).unwrap().ok);
            assert!(certify_noncommutative(&pres, &rep, &u(4, 1, 1), &u(4, 3, 3)).unwrap());
        }
        assert!(
            verify_representation(&snplus_presentation(4), &block_magic_rep())
                .unwrap()
                .ok
        );
    }

    #[test]
    fn h2plus_witness() {
        let pres = h2plus_presentation();
        let rep = h2plus_rep();
        assert!(verify_representation(&pres, &rep).unwrap().ok);
        let a = NCPoly::var(crate::presentations::h2_sym(1, 1));
        let b = NCPoly::var(crate::presentations::h2_sym(2, 2));
        assert!(certify_noncommutative(&pres, &rep, &a, &b).unwrap());
    }

    #[test]
    fn errors_and_json() {
        let pres = z2freedual_presentation();
        let rep = MatrixRep::new(2).with("p", projection_p());
        assert_eq!(
            verify_representation(&pres, &rep),
            Err(WitnessError::MissingGenerator("q".into()))
        );
        let rep = MatrixRep::new(3)
            .with("p", projection_p())
            .with("q", projection_q());
        assert!(matches!(
            verify_representation(&pres, &rep),
            Err(WitnessError::DimensionMismatch(_, 3))
        ));
        let s = two_projection_rep().to_json().to_string();
        assert_eq!(MatrixRep::from_json_str(&s).unwrap(), two_projection_rep());
    }
}
