//! Replays the derivation of QA1 to QA4 from an abstract coaction.
//!
//! The matrix entries start as free non-self-adjoint generators. Requiring
//! `α'` and `β'` to respect the graph relations yields polynomial
//! constraints by coefficient extraction along the `p_k`. QA1 and QA2 follow
//! by rewriting. QA3 and QA4 additionally use the positivity rule: if
//! `Σ w_i* w_i = 0` holds then each `w_i = 0`. Every use of that rule is logged.

use std::path::PathBuf;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::{action_image, apply_map, extract_coefficients, tensor_normalize};
use super::{CoactionError, Side, TensorPoly, TensorSpace};
use crate::graph::Graph;
use crate::ncstar::{
    prove_zero_layered, CompletionConfig, GenAlphabet, LayeredProof, NCPoly, Presentation,
    RewriteSystem, Sym,
};
use crate::presentations::{
    banica_presentation_combined, cstar_alphabet, graph_cstar_presentation, qa1_relations,
    qa2_relations, qa3_relations, qa4_relations, u_name, u_sym,
};
use crate::store::CertificateStore;

pub const PHASES: [&str; 4] = ["QA1", "QA2", "QA3", "QA4"];

/// `n × n` grid of generators `u_ij` with independent adjoints `u_ij*`.
#[derive(Debug, Clone)]
pub struct FreeMagic {
    pub n: usize,
    pub alphabet: Arc<GenAlphabet>,
}

impl FreeMagic {
    pub fn new(n: usize) -> Self {
        let mut a = GenAlphabet::new();
        for i in 1..=n {
            for j in 1..=n {
                let name = u_name(n, i, j);
                a.add_pair(&name, &format!("{name}*"))
                    .expect("grid names are distinct");
            }
        }
        FreeMagic {
            n,
            alphabet: Arc::new(a),
        }
    }

    pub fn sym(&self, i: usize, j: usize) -> Sym {
        2 * u_sym(self.n, i, j)
    }

    pub fn u(&self, i: usize, j: usize) -> NCPoly {
        NCPoly::var(self.sym(i, j))
    }

    pub fn u_star(&self, i: usize, j: usize) -> NCPoly {
        NCPoly::var(self.sym(i, j) + 1)
    }

    /// Grid polynomial with self-adjoint entries, lifted to the free grid.
    pub fn lift(&self, p: &NCPoly) -> NCPoly {
        p.map_syms(|s| 2 * s)
    }

    /// Identifies `u_ij*` with `u_ij`.
    pub fn collapse(&self, p: &NCPoly) -> NCPoly {
        p.map_syms(|s| s / 2)
    }
}

/// Constraints on the free grid extracted from one abstract coaction.
#[derive(Debug, Clone)]
pub struct ActionAxioms {
    pub side: Side,
    pub relations: Vec<(String, NCPoly)>,
}

/// Applies `α'` (or `β'`) to the star, projection, unit and CK1 relations and
/// reads off the leg-one coefficient of every `p_k`. The `p_k` are taken to
/// be linearly independent in the graph C*-algebra.
pub fn derive_action_constraints(
    g: &Graph,
    side: Side,
    free: &FreeMagic,
    cstar_sys: &RewriteSystem,
) -> Result<ActionAxioms, CoactionError> {
    let n = g.n();
    let cstar = cstar_sys.presentation().clone();
    let free_pres = Arc::new(Presentation::new("free grid*", free.alphabet.clone(), [])?);
    let space = TensorSpace::new(vec![free_pres, cstar]);
    let c = cstar_alphabet(g).1;
    let image = |x: Sym| action_image(g, side, &c, x, &space, &|i, j| free.u(i, j));
    let apply = |p: &NCPoly| apply_map(&space, p, &image);
    let basis: Vec<NCPoly> = (1..=n).map(|v| cstar_sys.normalize(&c.p(v))).collect();

    let mut axioms: Vec<(String, TensorPoly)> = Vec::new();
    for i in 1..=n {
        let a = apply(&c.p(i));
        axioms.push((format!("star p{i}"), &a.star() - &a));
    }
    for j in 1..=n {
        for k in 1..=n {
            let mut t = apply(&(&c.p(j) * &c.p(k)));
            if j == k {
                t = &t - &apply(&c.p(j));
            }
            axioms.push((format!("p{j} p{k}"), t));
        }
    }
    let mut unit = NCPoly::zero();
    for v in 1..=n {
        unit = &unit + &c.p(v);
    }
    axioms.push(("unit".into(), &apply(&unit) - &TensorPoly::one(&space)));
    for j in 1..=g.m() {
        let t = &apply(&(&c.s_star(j) * &c.s(j))) - &apply(&c.p(g.range(j)));
        axioms.push((format!("CK1 s{j}"), t));
    }

    let mut relations = Vec::new();
    for (label, t) in axioms {
        let r = tensor_normalize(&t, &[None, Some(cstar_sys)]);
        let coeffs = extract_coefficients(&r.normal, 1, &basis)
            .ok_or_else(|| CoactionError::Extraction(format!("{} {label}", side.name())))?;
        for (k, a) in coeffs.into_iter().enumerate() {
            if !a.is_zero() {
                relations.push((format!("{} {label} @p{}", side.name(), k + 1), a));
            }
        }
    }
    Ok(ActionAxioms { side, relations })
}

/// Result of one zero test. Certificates are not kept in memory; they are
/// replayed when produced and optionally written to disk.
#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub label: String,
    pub proved: bool,
    pub certificate_terms: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal_form: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate_file: Option<PathBuf>,
}

/// One application of the positivity rule.
#[derive(Debug, Clone)]
pub struct PosStep {
    pub phase: String,
    pub family: String,
    pub members: Vec<NCPoly>,
    /// `Σ w_i* w_i`, proved zero before the members are adopted.
    pub sum: NCPoly,
    pub outcome: Outcome,
    pub adopted: bool,
}

#[derive(Debug, Clone)]
pub struct PhaseReport {
    pub phase: String,
    /// Name of the presentation the targets were proved in.
    pub presentation: String,
    pub targets: Vec<Outcome>,
    pub pos_steps: Vec<PosStep>,
}

impl PhaseReport {
    pub fn is_proved(&self) -> bool {
        self.targets.iter().all(|o| o.proved)
    }

    pub fn first_failure(&self) -> Option<&str> {
        self.targets
            .iter()
            .find(|o| !o.proved)
            .map(|o| o.label.as_str())
    }
}

/// Both directions of the ideal comparison with the Banica presentation.
#[derive(Debug, Clone, Default, Serialize)]
pub struct CrossCheck {
    pub forward_checked: usize,
    pub forward_failures: Vec<String>,
    pub converse_checked: usize,
    pub converse_failures: Vec<String>,
}

impl CrossCheck {
    pub fn ok(&self) -> bool {
        self.forward_failures.is_empty() && self.converse_failures.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct MaximalityReport {
    pub bound: usize,
    pub allow_pos: bool,
    pub axiom_count: usize,
    pub phases: Vec<PhaseReport>,
    pub cross_check: CrossCheck,
}

impl MaximalityReport {
    pub fn is_proved(&self) -> bool {
        self.phases.iter().all(|p| p.is_proved()) && self.cross_check.ok()
    }

    pub fn pos_steps(&self) -> impl Iterator<Item = &PosStep> {
        self.phases.iter().flat_map(|p| p.pos_steps.iter())
    }

    pub fn summary(&self) -> MaximalitySummary {
        MaximalitySummary {
            bound: self.bound,
            allow_pos: self.allow_pos,
            axiom_count: self.axiom_count,
            phases: self
                .phases
                .iter()
                .map(|p| PhaseSummary {
                    phase: p.phase.clone(),
                    presentation: p.presentation.clone(),
                    targets: p.targets.len(),
                    proved: p.targets.iter().filter(|o| o.proved).count(),
                    pos_steps: p.pos_steps.len(),
                    pos_adopted: p.pos_steps.iter().filter(|s| s.adopted).count(),
                    first_failure: p.first_failure().map(str::to_string),
                })
                .collect(),
            cross_check: self.cross_check.clone(),
            proved: self.is_proved(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseSummary {
    pub phase: String,
    pub presentation: String,
    pub targets: usize,
    pub proved: usize,
    pub pos_steps: usize,
    pub pos_adopted: usize,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MaximalitySummary {
    pub bound: usize,
    pub allow_pos: bool,
    pub axiom_count: usize,
    pub phases: Vec<PhaseSummary>,
    pub cross_check: CrossCheck,
    pub proved: bool,
}

#[derive(Debug, Clone)]
pub struct MaximalityOptions {
    pub bound: usize,
    pub allow_pos: bool,
    /// Receives one certificate per proved target, one group per stage.
    pub store: Option<Arc<CertificateStore>>,
}

impl MaximalityOptions {
    pub fn new(bound: usize, allow_pos: bool) -> Self {
        MaximalityOptions {
            bound,
            allow_pos,
            store: None,
        }
    }
}

/// One presentation with its completion and an optional output group.
struct Stage<'a> {
    sys: RewriteSystem,
    out: Option<(&'a CertificateStore, PathBuf)>,
}

impl<'a> Stage<'a> {
    fn new(
        pres: Presentation,
        cfg: &CompletionConfig,
        opts: &'a MaximalityOptions,
        name: &str,
    ) -> Result<Self, CoactionError> {
        let out = match &opts.store {
            Some(store) => {
                let dir = store.group(&format!("maximality/{name}"), &pres)?;
                Some((store.as_ref(), dir))
            }
            None => None,
        };
        let sys = RewriteSystem::complete(Arc::new(pres), cfg)?;
        Ok(Stage { sys, out })
    }

    fn presentation(&self) -> &Presentation {
        self.sys.presentation()
    }

    fn prove(&self, label: &str, p: &NCPoly) -> Result<Outcome, CoactionError> {
        Ok(match prove_zero_layered(&self.sys, p) {
            LayeredProof::Proved(cert) => {
                let certificate_file = match &self.out {
                    Some((store, dir)) => {
                        Some(store.write_layered(dir, label, self.presentation(), p, &cert)?)
                    }
                    None => None,
                };
                Outcome {
                    label: label.to_string(),
                    proved: true,
                    certificate_terms: cert.len(),
                    normal_form: None,
                    certificate_file,
                }
            }
            LayeredProof::Inconclusive { normal_form } => Outcome {
                label: label.to_string(),
                proved: false,
                certificate_terms: 0,
                normal_form: Some(normal_form.display(self.presentation().alphabet())),
                certificate_file: None,
            },
        })
    }

    fn prove_all(&self, targets: &[(String, NCPoly)]) -> Result<Vec<Outcome>, CoactionError> {
        targets.par_iter().map(|(l, p)| self.prove(l, p)).collect()
    }
}

/// Families `{w_i}` whose vanishing gives QA3 (from `α'`) or QA4 (from `β'`).
fn pos_families(g: &Graph, side: Side, free: &FreeMagic) -> Vec<(String, Vec<NCPoly>)> {
    let n = g.n();
    let mut out = Vec::new();
    for j in 1..=g.m() {
        let (s, r) = g.edge(j);
        for k in 1..=n {
            let members: Vec<NCPoly> = (1..=n)
                .filter(|&i| !g.has_edge(i, k))
                .map(|i| match side {
                    Side::Alpha => &free.u(s, i) * &free.u(r, k),
                    Side::Beta => &free.u(i, s) * &free.u(k, r),
                })
                .collect();
            if !members.is_empty() {
                out.push((format!("e{j} k={k}"), members));
            }
        }
    }
    out
}

fn pos_phase(
    phase: &str,
    g: &Graph,
    side: Side,
    free: &FreeMagic,
    stage: &Stage,
    allow_pos: bool,
) -> Result<Vec<PosStep>, CoactionError> {
    pos_families(g, side, free)
        .into_par_iter()
        .map(|(family, members)| {
            let mut sum = NCPoly::zero();
            for w in &members {
                sum = &sum + &(&w.star(&free.alphabet) * w);
            }
            let outcome = stage.prove(&format!("POS {phase} {family}"), &sum)?;
            Ok(PosStep {
                phase: phase.to_string(),
                family,
                adopted: allow_pos && outcome.proved,
                members,
                sum,
                outcome,
            })
        })
        .collect()
}

fn adopted(steps: &[PosStep]) -> Vec<(String, NCPoly)> {
    steps
        .iter()
        .filter(|s| s.adopted)
        .flat_map(|s| {
            s.members
                .iter()
                .enumerate()
                .map(move |(i, w)| (format!("POS {} {} #{i}", s.phase, s.family), w.clone()))
        })
        .collect()
}

/// Targets that were proved, as relations for the next stage.
fn lemmas(targets: &[(String, NCPoly)], outcomes: &[Outcome]) -> Vec<(String, NCPoly)> {
    targets
        .iter()
        .zip(outcomes)
        .filter(|(_, o)| o.proved)
        .map(|((l, p), _)| (format!("lemma {l}"), p.clone()))
        .collect()
}

/// See [`replay_maximality_with`].
pub fn replay_maximality(
    g: &Graph,
    bound: usize,
    allow_pos: bool,
) -> Result<MaximalityReport, CoactionError> {
    replay_maximality_with(g, &MaximalityOptions::new(bound, allow_pos))
}

/// Derives QA1 to QA4 from the coaction axioms, then compares the resulting
/// ideal with the Banica presentation in both directions.
///
/// Work is staged: relations proved in one stage become named relations of
/// the next presentation, so each certificate replays against the
/// presentation of its own stage and stays short.
pub fn replay_maximality_with(
    g: &Graph,
    opts: &MaximalityOptions,
) -> Result<MaximalityReport, CoactionError> {
    let n = g.n();
    let free = FreeMagic::new(n);
    let cfg = CompletionConfig::with_bound(opts.bound);
    let cstar_sys = RewriteSystem::complete(Arc::new(graph_cstar_presentation(g)), &cfg)?;
    let mut axioms = derive_action_constraints(g, Side::Alpha, &free, &cstar_sys)?.relations;
    axioms.extend(derive_action_constraints(g, Side::Beta, &free, &cstar_sys)?.relations);
    drop(cstar_sys);
    let axiom_count = axioms.len();
    let lift = |raw: Vec<(String, NCPoly)>| -> Vec<(String, NCPoly)> {
        raw.into_iter().map(|(l, p)| (l, free.lift(&p))).collect()
    };

    let base = Presentation::new("action axioms", free.alphabet.clone(), axioms)?;
    let stage = Stage::new(base, &cfg, opts, "1 action axioms")?;
    let mut qa1 = lift(qa1_relations(n));
    for i in 1..=n {
        for j in 1..=n {
            qa1.push((
                format!("QA1 self-adjoint {}", u_name(n, i, j)),
                &free.u(i, j) - &free.u_star(i, j),
            ));
        }
    }
    let qa2 = lift(qa2_relations(n));
    let p1 = PhaseReport {
        phase: PHASES[0].into(),
        presentation: stage.presentation().name().to_string(),
        targets: stage.prove_all(&qa1)?,
        pos_steps: Vec::new(),
    };
    let p2 = PhaseReport {
        phase: PHASES[1].into(),
        presentation: stage.presentation().name().to_string(),
        targets: stage.prove_all(&qa2)?,
        pos_steps: Vec::new(),
    };
    let mut new_rels = lemmas(&qa1, &p1.targets);
    new_rels.extend(lemmas(&qa2, &p2.targets));
    let pres = stage
        .presentation()
        .extended("axioms + QA1 + QA2", new_rels)?;
    drop(stage);

    let mut phases = vec![p1, p2];
    let mut pres = pres;
    for (idx, side, targets) in [
        (2, Side::Alpha, lift(qa3_relations(g))),
        (3, Side::Beta, lift(qa4_relations(g))),
    ] {
        let phase = PHASES[idx];
        let lemma_stage = Stage::new(pres, &cfg, opts, &format!("{} before {phase}", idx))?;
        let steps = pos_phase(phase, g, side, &free, &lemma_stage, opts.allow_pos)?;
        let name = format!("{} + POS {phase}", lemma_stage.presentation().name());
        let with_pos = lemma_stage
            .presentation()
            .extended(&name, adopted(&steps))?;
        drop(lemma_stage);
        let stage = Stage::new(with_pos, &cfg, opts, &format!("{} {phase}", idx + 1))?;
        let outcomes = stage.prove_all(&targets)?;
        let name = format!("{} + {phase}", stage.presentation().name());
        pres = stage
            .presentation()
            .extended(&name, lemmas(&targets, &outcomes))?;
        phases.push(PhaseReport {
            phase: phase.into(),
            presentation: stage.presentation().name().to_string(),
            targets: outcomes,
            pos_steps: steps,
        });
    }

    let final_stage = Stage::new(pres, &cfg, opts, "5 derived ideal")?;
    let qban = banica_presentation_combined(g);
    let forward_targets: Vec<_> = qban
        .relations()
        .iter()
        .map(|r| (r.label.clone(), free.lift(&r.poly)))
        .collect();
    let converse_targets: Vec<_> = final_stage
        .presentation()
        .relations()
        .iter()
        .map(|r| (r.label.clone(), free.collapse(&r.poly)))
        .collect();
    let forward = final_stage.prove_all(&forward_targets)?;
    drop(final_stage);
    let qban_stage = Stage::new(qban, &cfg, opts, "6 banica")?;
    let converse = qban_stage.prove_all(&converse_targets)?;
    let failures = |v: &[Outcome]| -> Vec<String> {
        v.iter()
            .filter(|o| !o.proved)
            .map(|o| o.label.clone())
            .collect()
    };
    let cross_check = CrossCheck {
        forward_checked: forward.len(),
        forward_failures: failures(&forward),
        converse_checked: converse.len(),
        converse_failures: failures(&converse),
    };
    Ok(MaximalityReport {
        bound: opts.bound,
        allow_pos: opts.allow_pos,
        axiom_count,
        phases,
        cross_check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    #[test]
    fn two_cycle_replay() {
        let g = build_graph(2, &[(1, 2), (2, 1)]).unwrap();
        let r = replay_maximality(&g, 6, true).unwrap();
        assert!(r.is_proved(), "{:?}", r.summary());
        for p in &r.phases {
            let expect_pos = p.phase == "QA3" || p.phase == "QA4";
            assert_eq!(!p.pos_steps.is_empty(), expect_pos, "{}", p.phase);
            assert!(p.pos_steps.iter().all(|s| s.phase == p.phase));
        }
    }

    #[test]
    fn without_pos_nothing_is_adopted() {
        let g = build_graph(3, &[(1, 2), (2, 3), (3, 1)]).unwrap();
        let r = replay_maximality(&g, 6, false).unwrap();
        assert!(r.pos_steps().all(|s| !s.adopted));
        assert!(r.phases[0].is_proved() && r.phases[1].is_proved());
        let with = replay_maximality(&g, 6, true).unwrap();
        assert!(with.is_proved(), "{:?}", with.summary());
        assert!(with.pos_steps().all(|s| s.adopted && s.outcome.proved));
    }

    #[test]
    fn constraints_include_self_adjointness() {
        let g = build_graph(2, &[(1, 2)]).unwrap();
        let free = FreeMagic::new(2);
        let sys = RewriteSystem::complete(
            Arc::new(graph_cstar_presentation(&g)),
            &CompletionConfig::with_bound(4),
        )
        .unwrap();
        let ax = derive_action_constraints(&g, Side::Alpha, &free, &sys).unwrap();
        let target = &free.u_star(1, 2) - &free.u(1, 2);
        assert!(ax
            .relations
            .iter()
            .any(|(_, p)| *p == target || *p == -&target));
    }
}
