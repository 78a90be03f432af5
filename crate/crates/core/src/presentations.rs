//! The presented *-algebras attached to a graph: quantum permutation and
//! quantum automorphism algebras, the hyperoctahedral and two-projection
//! algebras, and the graph C*-algebra.

use std::sync::Arc;

use num::One;

use crate::graph::{adjacency, Graph};
use crate::ncstar::{q, GenAlphabet, NCPoly, Presentation, Sym, Q};

/// Name of the magic-unitary generator in row `i`, column `j` (1-based).
pub fn u_name(n: usize, i: usize, j: usize) -> String {
    if n <= 9 {
        format!("u{i}{j}")
    } else {
        format!("u{i}_{j}")
    }
}

/// Symbol of `u_ij` in any presentation built on [`MagicUnitarySpec`].
pub fn u_sym(n: usize, i: usize, j: usize) -> Sym {
    ((i - 1) * n + (j - 1)) as Sym
}

pub fn u(n: usize, i: usize, j: usize) -> NCPoly {
    NCPoly::var(u_sym(n, i, j))
}

/// `n × n` grid of self-adjoint generators, declared row by row.
#[derive(Debug, Clone)]
pub struct MagicUnitarySpec {
    pub n: usize,
    pub alphabet: Arc<GenAlphabet>,
}

impl MagicUnitarySpec {
    pub fn new(n: usize) -> Self {
        let mut a = GenAlphabet::new();
        for i in 1..=n {
            for j in 1..=n {
                a.add_self_adjoint(&u_name(n, i, j))
                    .expect("grid names are distinct");
            }
        }
        MagicUnitarySpec {
            n,
            alphabet: Arc::new(a),
        }
    }

    pub fn u(&self, i: usize, j: usize) -> NCPoly {
        u(self.n, i, j)
    }
}

type Raw = Vec<(String, NCPoly)>;

fn prod(a: &NCPoly, b: &NCPoly) -> NCPoly {
    a * b
}

/// Projections plus row and column orthogonality; `n²(2n−1)` polynomials.
pub fn qa1_relations(n: usize) -> Raw {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            out.push((
                format!("QA1 proj {}", u_name(n, i, j)),
                &prod(&u(n, i, j), &u(n, i, j)) - &u(n, i, j),
            ));
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if j != k {
                    out.push((
                        format!("QA1 row {} {}", u_name(n, i, j), u_name(n, i, k)),
                        prod(&u(n, i, j), &u(n, i, k)),
                    ));
                }
            }
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if j != k {
                    out.push((
                        format!("QA1 col {} {}", u_name(n, j, i), u_name(n, k, i)),
                        prod(&u(n, j, i), &u(n, k, i)),
                    ));
                }
            }
        }
    }
    out
}

/// Row and column sums; `2n` polynomials.
pub fn qa2_relations(n: usize) -> Raw {
    let mut out = Vec::new();
    for i in 1..=n {
        let mut row = -&NCPoly::one();
        let mut col = -&NCPoly::one();
        for l in 1..=n {
            row = &row + &u(n, i, l);
            col = &col + &u(n, l, i);
        }
        out.push((format!("QA2 row {i}"), row));
        out.push((format!("QA2 col {i}"), col));
    }
    out
}

/// Entries of `uε − εu`; one polynomial per matrix entry.
pub fn qa7_relations(g: &Graph) -> Raw {
    let n = g.n();
    let eps = adjacency(g);
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let mut p = NCPoly::zero();
            for k in 1..=n {
                if eps[k - 1][j - 1] == 1 {
                    p = &p + &u(n, i, k);
                }
                if eps[i - 1][k - 1] == 1 {
                    p = &p - &u(n, k, j);
                }
            }
            out.push((format!("QA7 ({i},{j})"), p));
        }
    }
    out
}

fn non_edges(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.n();
    (1..=n)
        .flat_map(|i| (1..=n).map(move |k| (i, k)))
        .filter(|&(i, k)| !g.has_edge(i, k))
        .collect()
}

/// `u_{s(e)i} u_{r(e)k}` and the reversed product, for every edge and
/// non-edge `(i, k)` (diagonal pairs included).
pub fn qa3_relations(g: &Graph) -> Raw {
    let n = g.n();
    let mut out = Vec::new();
    for j in 1..=g.m() {
        let (s, r) = g.edge(j);
        for (i, k) in non_edges(g) {
            out.push((
                format!("QA3 e{j} ({i},{k})"),
                prod(&u(n, s, i), &u(n, r, k)),
            ));
            out.push((
                format!("QA3 e{j} ({i},{k}) rev"),
                prod(&u(n, r, k), &u(n, s, i)),
            ));
        }
    }
    out
}

/// `u_{i s(e)} u_{k r(e)}` and the reversed product.
pub fn qa4_relations(g: &Graph) -> Raw {
    let n = g.n();
    let mut out = Vec::new();
    for j in 1..=g.m() {
        let (s, r) = g.edge(j);
        for (i, k) in non_edges(g) {
            out.push((
                format!("QA4 e{j} ({i},{k})"),
                prod(&u(n, i, s), &u(n, k, r)),
            ));
            out.push((
                format!("QA4 e{j} ({i},{k}) rev"),
                prod(&u(n, k, r), &u(n, i, s)),
            ));
        }
    }
    out
}

/// `[u_{s(e_j)s(e_l)}, u_{r(e_j)r(e_l)}]` for all edge pairs.
pub fn qa5_relations(g: &Graph) -> Raw {
    let n = g.n();
    let mut out = Vec::new();
    for j in 1..=g.m() {
        for l in 1..=g.m() {
            let a = u(n, g.source(j), g.source(l));
            let b = u(n, g.range(j), g.range(l));
            out.push((format!("QA5 e{j} e{l}"), &prod(&a, &b) - &prod(&b, &a)));
        }
    }
    out
}

fn build(name: String, n: usize, parts: Vec<Raw>) -> Presentation {
    let spec = MagicUnitarySpec::new(n);
    Presentation::new(name, spec.alphabet, parts.into_iter().flatten())
        .expect("relations use grid symbols only")
}

pub fn snplus_presentation(n: usize) -> Presentation {
    build(
        format!("S{n}+"),
        n,
        vec![qa1_relations(n), qa2_relations(n)],
    )
}

/// QA1, QA2 and `uε = εu`.
pub fn banica_presentation(g: &Graph) -> Presentation {
    let n = g.n();
    build(
        "QBan".to_string(),
        n,
        vec![qa1_relations(n), qa2_relations(n), qa7_relations(g)],
    )
}

/// QA1 to QA4.
pub fn banica_presentation_qa14(g: &Graph) -> Presentation {
    let n = g.n();
    build(
        "QBan(QA1-QA4)".to_string(),
        n,
        vec![
            qa1_relations(n),
            qa2_relations(n),
            qa3_relations(g),
            qa4_relations(g),
        ],
    )
}

/// QA1, QA2, QA7, QA3 and QA4 together; same ideal as either Banica form.
pub fn banica_presentation_combined(g: &Graph) -> Presentation {
    let n = g.n();
    build(
        "QBan(combined)".to_string(),
        n,
        vec![
            qa1_relations(n),
            qa2_relations(n),
            qa7_relations(g),
            qa3_relations(g),
            qa4_relations(g),
        ],
    )
}

/// QA1 to QA5.
pub fn bichon_presentation(g: &Graph) -> Presentation {
    let n = g.n();
    build(
        "QBic".to_string(),
        n,
        vec![
            qa1_relations(n),
            qa2_relations(n),
            qa3_relations(g),
            qa4_relations(g),
            qa5_relations(g),
        ],
    )
}

pub fn h2_name(i: usize, j: usize) -> String {
    format!("v{i}{j}")
}

/// Symbol of `v_ij` in [`h2plus_presentation`].
pub fn h2_sym(i: usize, j: usize) -> Sym {
    ((i - 1) * 2 + (j - 1)) as Sym
}

/// The hyperoctahedral quantum group on 2 points: `v` orthogonal with
/// self-adjoint entries, and entries in a common row or column annihilating
/// each other.
pub fn h2plus_presentation() -> Presentation {
    let mut a = GenAlphabet::new();
    for i in 1..=2 {
        for j in 1..=2 {
            a.add_self_adjoint(&h2_name(i, j)).expect("distinct");
        }
    }
    let v = |i, j| NCPoly::var(h2_sym(i, j));
    let mut raw = Vec::new();
    for i in 1..=2 {
        for j in 1..=2 {
            for k in 1..=2 {
                if j != k {
                    raw.push((
                        format!("row {}{}", h2_name(i, j), h2_name(i, k)),
                        &v(i, j) * &v(i, k),
                    ));
                    raw.push((
                        format!("col {}{}", h2_name(j, i), h2_name(k, i)),
                        &v(j, i) * &v(k, i),
                    ));
                }
            }
        }
    }
    for i in 1..=2 {
        let mut row = -&NCPoly::one();
        let mut col = -&NCPoly::one();
        for k in 1..=2 {
            row = &row + &(&v(i, k) * &v(i, k));
            col = &col + &(&v(k, i) * &v(k, i));
        }
        raw.push((format!("orth row {i}"), row));
        raw.push((format!("orth col {i}"), col));
    }
    Presentation::new("H2+", Arc::new(a), raw).expect("valid")
}

/// Two projections `p`, `q` with no further relation.
pub fn z2freedual_presentation() -> Presentation {
    let mut a = GenAlphabet::new();
    let p = a.add_self_adjoint("p").expect("distinct");
    let qs = a.add_self_adjoint("q").expect("distinct");
    let raw = [p, qs].map(|s| {
        let x = NCPoly::var(s);
        (format!("proj {}", a.name(s)), &(&x * &x) - &x)
    });
    Presentation::new("Z2*Z2 dual", Arc::new(a), raw).expect("valid")
}

/// `blockdiag([[p, 1−p], [1−p, p]], [[q, 1−q], [1−q, q]])` over the
/// generators of [`z2freedual_presentation`].
pub fn z2free_block_matrix() -> Vec<Vec<NCPoly>> {
    let p = NCPoly::var(0);
    let qq = NCPoly::var(1);
    let one = NCPoly::one();
    let z = NCPoly::zero();
    let block = |x: &NCPoly| (x.clone(), &one - x);
    let (a, b) = block(&p);
    let (c, d) = block(&qq);
    vec![
        vec![a.clone(), b.clone(), z.clone(), z.clone()],
        vec![b, a, z.clone(), z.clone()],
        vec![z.clone(), z.clone(), c.clone(), d.clone()],
        vec![z.clone(), z, d, c],
    ]
}

/// Which relations of the graph C*-algebra to include.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CstarRelations {
    /// Projections, orthogonality, the two Cuntz–Krieger relations,
    /// `s s* s = s` and `Σ p_v = 1`.
    Defining,
    /// Defining relations plus `s_e* s_f = 0` for `e ≠ f` and
    /// `p_{s(e)} s_e = s_e`, which hold in the C*-algebra by positivity.
    #[default]
    Full,
}

/// Generators of the graph C*-algebra, in declaration order.
#[derive(Debug, Clone)]
pub struct CstarSymbols {
    pub n: usize,
    pub m: usize,
}

impl CstarSymbols {
    pub fn p_sym(&self, v: usize) -> Sym {
        (v - 1) as Sym
    }

    pub fn s_sym(&self, j: usize) -> Sym {
        (self.n + 2 * (j - 1)) as Sym
    }

    pub fn s_star_sym(&self, j: usize) -> Sym {
        self.s_sym(j) + 1
    }

    pub fn p(&self, v: usize) -> NCPoly {
        NCPoly::var(self.p_sym(v))
    }

    pub fn s(&self, j: usize) -> NCPoly {
        NCPoly::var(self.s_sym(j))
    }

    pub fn s_star(&self, j: usize) -> NCPoly {
        NCPoly::var(self.s_star_sym(j))
    }
}

pub fn cstar_alphabet(g: &Graph) -> (GenAlphabet, CstarSymbols) {
    let mut a = GenAlphabet::new();
    for v in 1..=g.n() {
        a.add_self_adjoint(&format!("p{v}")).expect("distinct");
    }
    for j in 1..=g.m() {
        a.add_pair(&format!("s{j}"), &format!("s{j}*"))
            .expect("distinct");
    }
    (a, CstarSymbols { n: g.n(), m: g.m() })
}

pub fn graph_cstar_presentation(g: &Graph) -> Presentation {
    graph_cstar_presentation_with(g, CstarRelations::Full)
}

pub fn graph_cstar_presentation_with(g: &Graph, which: CstarRelations) -> Presentation {
    let (a, c) = cstar_alphabet(g);
    let mut raw = Vec::new();
    for v in 1..=g.n() {
        raw.push((format!("proj p{v}"), &(&c.p(v) * &c.p(v)) - &c.p(v)));
    }
    for v in 1..=g.n() {
        for w in 1..=g.n() {
            if v != w {
                raw.push((format!("orth p{v} p{w}"), &c.p(v) * &c.p(w)));
            }
        }
    }
    for j in 1..=g.m() {
        raw.push((
            format!("CK1 s{j}"),
            &(&c.s_star(j) * &c.s(j)) - &c.p(g.range(j)),
        ));
    }
    for v in 1..=g.n() {
        let out = g.out_edges(v);
        if out.is_empty() {
            continue;
        }
        let mut p = -&c.p(v);
        for j in out {
            p = &p + &(&c.s(j) * &c.s_star(j));
        }
        raw.push((format!("CK2 p{v}"), p));
    }
    for j in 1..=g.m() {
        raw.push((
            format!("pi s{j}"),
            &(&(&c.s(j) * &c.s_star(j)) * &c.s(j)) - &c.s(j),
        ));
    }
    let mut unit = -&NCPoly::one();
    for v in 1..=g.n() {
        unit = &unit + &c.p(v);
    }
    raw.push(("unit".to_string(), unit));
    if which == CstarRelations::Full {
        for e in 1..=g.m() {
            for f in 1..=g.m() {
                if e != f {
                    raw.push((format!("orth s{e}* s{f}"), &c.s_star(e) * &c.s(f)));
                }
            }
        }
        for j in 1..=g.m() {
            raw.push((
                format!("src s{j}"),
                &(&c.p(g.source(j)) * &c.s(j)) - &c.s(j),
            ));
        }
    }
    Presentation::new("C*(graph)", Arc::new(a), raw).expect("valid")
}

/// `(x² + x)/2` and `(x² − x)/2`.
pub fn half_square_split(x: &NCPoly) -> (NCPoly, NCPoly) {
    let half = Q::one() / q(2);
    let sq = x * x;
    ((&sq + x).scale(&half), (&sq - x).scale(&half))
}
