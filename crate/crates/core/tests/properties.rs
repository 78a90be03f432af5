mod support;

use std::sync::OnceLock;

use proptest::prelude::*;

use quaut::graph::{add_loops, adjacency, complement, LoopsMode};
use quaut::ncstar::{check_certificate, prove_commutativity_in, q, CommutativityResult, NCPoly};
use quaut::perm::{all_permutations, automorphisms};
use quaut::presentations::{banica_presentation, bichon_presentation, snplus_presentation};

use support::*;

fn one_idempotent_oracle() -> &'static SpanOracle {
    static O: OnceLock<SpanOracle> = OnceLock::new();
    O.get_or_init(|| SpanOracle::new(&idempotents(1), 4))
}

fn two_idempotents_oracle() -> &'static SpanOracle {
    static O: OnceLock<SpanOracle> = OnceLock::new();
    O.get_or_init(|| SpanOracle::new(&idempotents(2), 4))
}

#[test]
fn oracle_dimensions_match_hand_counts() {
    // One variable up to degree 4: the ideal is spanned by u^2-u, u^3-u^2
    // and u^4-u^3, so only 1 and u survive in the quotient.
    assert_eq!(one_idempotent_oracle().dimension(), 3);
    // Two idempotents: the quotient of degree ≤ 4 is spanned by the
    // alternating words 1, x, y, xy, yx, xyx, yxy, xyxy, yxyx (9 of 31).
    assert_eq!(two_idempotents_oracle().dimension(), 31 - 9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_forms_are_idempotent_in_s3_plus(p in poly(9, 4, 5)) {
        normal_form_idempotent(s3_plus(), &p)?;
    }

    #[test]
    fn normal_forms_are_idempotent_in_graph_cstar(p in poly(6, 4, 5)) {
        normal_form_idempotent(two_cycle_cstar(), &p)?;
    }

    #[test]
    fn star_coherence_on_ideal_elements(p in ideal_element(s3_plus().presentation(), 2, false)) {
        prop_assert!(quaut::ncstar::prove_zero(s3_plus(), &p).is_proved());
        star_coherent(s3_plus(), &p)?;
    }

    #[test]
    fn star_coherence_with_adjoint_pairs(
        p in ideal_element(two_cycle_cstar().presentation(), 2, true)
    ) {
        star_coherent(two_cycle_cstar(), &p)?;
    }

    #[test]
    fn one_idempotent_matches_span_oracle(
        p in prop_oneof![
            poly(1, 4, 4),
            ideal_element(&idempotents(1), 1, false),
            ideal_element(&idempotents(1), 1, true),
        ]
    ) {
        oracle_agrees(one_idempotent(), one_idempotent_oracle(), &p)?;
    }

    #[test]
    fn two_idempotents_match_span_oracle(
        p in prop_oneof![
            poly(2, 4, 4),
            ideal_element(&idempotents(2), 1, false),
            ideal_element(&idempotents(2), 1, true),
        ]
    ) {
        oracle_agrees(two_idempotents(), two_idempotents_oracle(), &p)?;
    }

    #[test]
    fn complement_is_an_involution(g in graph(5)) {
        complement_involution(&g)?;
    }

    #[test]
    fn add_loops_adds_the_identity(g in graph(5).prop_filter("loopless", |g| !g.has_loops())) {
        let l = add_loops(&g).unwrap();
        prop_assert_eq!(l.m(), g.m() + g.n());
        let (a, b) = (adjacency(&g), adjacency(&l));
        for i in 0..g.n() {
            for j in 0..g.n() {
                prop_assert_eq!(b[i][j], a[i][j] + u8::from(i == j));
            }
        }
    }

    #[test]
    fn automorphisms_match_direct_definition(g in graph(4)) {
        let group = automorphisms(&g).unwrap();
        prop_assert!(group.is_closed());
        for s in all_permutations(g.n()) {
            let direct = (1..=g.n()).all(|i| {
                (1..=g.n()).all(|j| g.has_edge(i, j) == g.has_edge(s.apply(i), s.apply(j)))
            });
            prop_assert_eq!(group.contains(&s), direct);
        }
        let c = complement(&g, LoopsMode::WithLoops).unwrap();
        prop_assert_eq!(automorphisms(&c).unwrap().report(), group.report());
    }

    #[test]
    fn presentations_are_star_closed(g in graph(3)) {
        prop_assert!(banica_presentation(&g).is_star_closed());
        prop_assert!(bichon_presentation(&g).is_star_closed());
    }

    #[test]
    fn perturbed_certificates_are_rejected(pick in any::<prop::sample::Index>(), delta in 1i64..5) {
        let CommutativityResult::Proved(proofs) = prove_commutativity_in(s3_plus()) else {
            panic!("S3+ is commutative");
        };
        let p = &proofs[pick.index(proofs.len())];
        let pres = s3_plus().presentation();
        prop_assert!(check_certificate(pres, &p.target, &p.certificate));
        let mut bad = p.certificate.clone();
        let k = pick.index(bad.terms.len());
        bad.terms[k].coeff += q(delta);
        prop_assert!(!check_certificate(pres, &p.target, &bad));
        let shifted = &p.target + &NCPoly::var(0);
        prop_assert!(!check_certificate(pres, &shifted, &p.certificate));
    }
}

#[test]
fn s3_plus_order_invariance() {
    use quaut::ncstar::{prove_commutativity, CompletionConfig, SymbolOrder};
    use std::sync::Arc;
    let pres = Arc::new(snplus_presentation(3));
    let names: Vec<String> = pres.alphabet().names().iter().rev().cloned().collect();
    let mut shuffled = names.clone();
    shuffled.rotate_left(4);
    for order in [
        SymbolOrder::Declaration,
        SymbolOrder::Reverse,
        SymbolOrder::Custom(shuffled),
    ] {
        let cfg = CompletionConfig::with_bound(8).order(order.clone());
        let r = prove_commutativity(pres.clone(), &cfg).unwrap();
        assert!(r.is_proved(), "{order:?}");
    }
}
