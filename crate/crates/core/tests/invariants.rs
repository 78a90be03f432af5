//! Cross-module invariants checked on the fixed corpus.

use std::sync::Arc;

use quaut::corpus::corpus;
use quaut::graph::Graph;
use quaut::lemmas::{prove_targets, LemmaItem};
use quaut::ncstar::{
    commutator, prove_commutativity, prove_zero, CompletionConfig, NCPoly, Presentation,
    RewriteSystem,
};
use quaut::presentations::{
    banica_presentation, banica_presentation_qa14, bichon_presentation, qa7_relations,
};
use quaut::table4::{row_graph, run_row};
use quaut::witness::{builtin_block_witness, certify_noncommutative, verify_representation};

fn relations_of(p: &Presentation) -> Vec<(String, NCPoly)> {
    p.relations()
        .iter()
        .map(|r| (r.label.clone(), r.poly.clone()))
        .collect()
}

fn all_replay(items: &[LemmaItem]) -> bool {
    items.iter().all(|i| i.proof.is_proved() && i.replays())
}

fn small_corpus() -> Vec<Graph> {
    corpus()
        .into_iter()
        .map(|c| c.graph)
        .filter(|g| g.n() <= 3)
        .collect()
}

#[test]
fn both_banica_forms_generate_the_same_ideal() {
    for c in corpus() {
        let a = banica_presentation(&c.graph);
        let b = banica_presentation_qa14(&c.graph);
        let forward = prove_targets(Arc::new(b.clone()), 6, relations_of(&a)).unwrap();
        let back = prove_targets(Arc::new(a), 6, relations_of(&b)).unwrap();
        assert!(all_replay(&forward), "{}: QA7 from QA1-QA4", c.name);
        assert!(all_replay(&back), "{}: QA1-QA4 from QA7", c.name);
    }
}

#[test]
fn bichon_ideal_contains_banica_ideal() {
    for c in corpus() {
        let targets: Vec<_> = qa7_relations(&c.graph)
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .collect();
        let items = prove_targets(Arc::new(bichon_presentation(&c.graph)), 6, targets).unwrap();
        assert!(all_replay(&items), "{}", c.name);
    }
}

#[test]
fn block_witnesses_satisfy_banica_relations() {
    let mut applied = 0;
    for c in corpus() {
        if let Some(rep) = builtin_block_witness(&c.graph) {
            applied += 1;
            let check = verify_representation(&banica_presentation(&c.graph), &rep).unwrap();
            assert!(check.ok, "{}: {:?}", c.name, check.first_failing);
        }
    }
    assert!(applied >= 3);
}

#[test]
fn certified_noncommutativity_is_never_proved_zero() {
    let cfg = CompletionConfig::with_bound(8);
    for row in [1, 2, 4] {
        let g = row_graph(row);
        let pres = Arc::new(banica_presentation(&g));
        let rep = builtin_block_witness(&g).expect("block witness applies");
        let x = pres.gen("u11").unwrap();
        let y = pres.gen("u33").unwrap();
        assert!(certify_noncommutative(&pres, &rep, &x, &y).unwrap());
        let sys = RewriteSystem::complete(pres.clone(), &cfg).unwrap();
        assert!(
            !prove_zero(&sys, &commutator(&x, &y)).is_proved(),
            "row {row}"
        );
    }
}

#[test]
fn banica_commutative_implies_bichon_commutative() {
    let cfg = CompletionConfig::with_bound(8);
    for g in small_corpus() {
        let ban = prove_commutativity(Arc::new(banica_presentation(&g)), &cfg).unwrap();
        if ban.is_proved() {
            let bic = prove_commutativity(Arc::new(bichon_presentation(&g)), &cfg).unwrap();
            assert!(bic.is_proved(), "{:?}", g.edges());
        }
    }
}

#[test]
fn table_rows_are_deterministic() {
    let cfg = CompletionConfig::with_bound(8);
    let a = run_row(3, &cfg, None).unwrap();
    let b = run_row(3, &cfg, None).unwrap();
    assert!(a.pass);
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}
