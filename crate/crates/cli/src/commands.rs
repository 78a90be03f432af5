use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use quaut::coaction::{
    replay_maximality_with, verify_coaction_with, MaximalityOptions, MaximalitySummary, Outcome,
    SectionReport,
};
use quaut::graph::Graph;
use quaut::ncstar::{Presentation, SymbolOrder};
use quaut::perm::{automorphisms, AutReport};
use quaut::presentations::{
    banica_presentation, banica_presentation_qa14, bichon_presentation, graph_cstar_presentation,
};
use quaut::store::{check_file, verify_store, CertificateStore, StoreCheck};
use quaut::table4::{decide_commutativity, run_table4, Kind, Verdict};

use crate::{Cli, Command, Definition, EXIT_MISMATCH, EXIT_OK, EXIT_UNKNOWN};

/// Stated in every main-theorem report: coefficient comparison along the
/// `p_v` relies on it and it is not proved.
const INDEPENDENCE_ASSUMPTION: &str =
    "the vertex projections p_v are linearly independent in the graph C*-algebra";

fn read_graph(path: &Path) -> Result<Graph> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Graph::from_json_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn presentation(g: &Graph, d: Definition) -> Presentation {
    match d {
        Definition::Banica => banica_presentation(g),
        Definition::Bichon => bichon_presentation(g),
        Definition::Qa14 => banica_presentation_qa14(g),
        Definition::Cstar => graph_cstar_presentation(g),
    }
}

fn definition_name(d: Definition) -> &'static str {
    match d {
        Definition::Banica => "banica",
        Definition::Bichon => "bichon",
        Definition::Qa14 => "qa14",
        Definition::Cstar => "cstar",
    }
}

/// Output directory with its certificate store, if `--out` was given.
struct Sink {
    dir: PathBuf,
    store: Arc<CertificateStore>,
}

impl Sink {
    fn open(out: &Option<PathBuf>) -> Result<Option<Sink>> {
        let Some(dir) = out else {
            return Ok(None);
        };
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let store = CertificateStore::new(dir.join("certificates"))?;
        Ok(Some(Sink {
            dir: dir.clone(),
            store,
        }))
    }

    fn verify(&self) -> Result<StoreCheck> {
        Ok(verify_store(self.store.root())?)
    }

    fn finish<T: Serialize>(&self, report: &T, text: &str) -> Result<()> {
        let json = serde_json::to_string_pretty(report)?;
        std::fs::write(self.dir.join("report.json"), json + "\n")?;
        std::fs::write(self.dir.join("report.txt"), text)?;
        Ok(())
    }
}

fn emit<T: Serialize>(cli: &Cli, sink: &Option<Sink>, report: &T, text: &str) -> Result<()> {
    if cli.run.json {
        println!("{}", serde_json::to_string_pretty(report)?);
    } else {
        print!("{text}");
    }
    if let Some(s) = sink {
        s.finish(report, text)?;
    }
    Ok(())
}

/// Appends the replay result of the written certificates, if any.
fn certificate_line(check: &Option<StoreCheck>) -> String {
    match check {
        Some(c) if c.ok() => format!("certificates: {} written, all replay\n", c.checked),
        Some(c) => format!(
            "certificates: {} written, {} FAIL to replay\n",
            c.checked,
            c.failures.len()
        ),
        None => String::new(),
    }
}

pub fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Aut { graph } => aut(cli, graph),
        Command::Qaut { graph, definition } => qaut(cli, graph, *definition),
        Command::Table4 => table4(cli),
        Command::Maintheorem { graph, allow_pos } => maintheorem(cli, graph, *allow_pos),
        Command::Presentation { graph, definition } => {
            let pres = presentation(&read_graph(graph)?, *definition);
            let json = serde_json::to_string_pretty(&pres.dump())?;
            match &cli.run.out {
                Some(dir) => {
                    std::fs::create_dir_all(dir)?;
                    std::fs::write(dir.join(PRESENTATION_DUMP), json + "\n")?;
                }
                None => println!("{json}"),
            }
            Ok(EXIT_OK)
        }
        Command::Check { path } => check(path),
    }
}

const PRESENTATION_DUMP: &str = "presentation.json";

#[derive(Serialize)]
struct AutOutput {
    graph: serde_json::Value,
    #[serde(flatten)]
    aut: AutReport,
}

fn aut(cli: &Cli, path: &Path) -> Result<u8> {
    let g = read_graph(path)?;
    let aut = automorphisms(&g)?.report();
    let mut text = format!("order {}, {}\n", aut.order, aut.label);
    for e in &aut.elements {
        text.push_str(&format!("  {e}\n"));
    }
    let sink = Sink::open(&cli.run.out)?;
    let out = AutOutput {
        graph: g.to_json(),
        aut,
    };
    emit(cli, &sink, &out, &text)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct QautOutput {
    graph: serde_json::Value,
    definition: &'static str,
    bound: usize,
    verdict: Verdict,
    certificates: Option<StoreCheck>,
}

fn verdict_code(kind: Kind) -> u8 {
    match kind {
        Kind::Unknown => EXIT_UNKNOWN,
        _ => EXIT_OK,
    }
}

fn qaut(cli: &Cli, path: &Path, d: Definition) -> Result<u8> {
    let g = read_graph(path)?;
    if d == Definition::Cstar {
        bail!("the graph C*-algebra is not a quantum automorphism algebra");
    }
    let cfg = cli.run.config();
    let sink = Sink::open(&cli.run.out)?;
    let name = definition_name(d);
    let out = sink.as_ref().map(|s| (s.store.as_ref(), name));
    let verdict = decide_commutativity(Arc::new(presentation(&g, d)), &g, &cfg, out)?;
    let certificates = sink.as_ref().map(Sink::verify).transpose()?;
    let mut text = format!("{name}: {}\n", verdict.text());
    if let Verdict::Unknown {
        first_open_commutator,
    } = &verdict
    {
        text.push_str(&format!(
            "  first open commutator {first_open_commutator}\n"
        ));
    }
    text.push_str(&certificate_line(&certificates));
    let mut code = verdict_code(verdict.kind());
    if certificates.as_ref().is_some_and(|c| !c.ok()) {
        code = EXIT_MISMATCH;
    }
    let report = QautOutput {
        graph: g.to_json(),
        definition: name,
        bound: cfg.degree_bound,
        verdict,
        certificates,
    };
    emit(cli, &sink, &report, &text)?;
    Ok(code)
}

fn table4(cli: &Cli) -> Result<u8> {
    let cfg = cli.run.config();
    if cfg.symbol_order != SymbolOrder::Declaration && cfg.symbol_order != SymbolOrder::Reverse {
        bail!("table4 runs many presentations; use 'declaration' or 'reverse'");
    }
    let sink = Sink::open(&cli.run.out)?;
    let report = run_table4(&cfg, sink.as_ref().map(|s| s.store.as_ref()))?;
    let certificates = sink.as_ref().map(Sink::verify).transpose()?;
    let text = report.render() + &certificate_line(&certificates);
    let unknown = report
        .rows
        .iter()
        .flat_map(|r| &r.cells)
        .any(|c| c.verdict.kind() == Kind::Unknown);
    let code = if certificates.as_ref().is_some_and(|c| !c.ok()) || !report.pass && !unknown {
        EXIT_MISMATCH
    } else if unknown {
        EXIT_UNKNOWN
    } else {
        EXIT_OK
    };
    emit(cli, &sink, &report, &text)?;
    Ok(code)
}

#[derive(Serialize)]
struct IdentityLine {
    label: String,
    status: &'static str,
    certificate_terms: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate_file: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual: Option<String>,
}

#[derive(Serialize)]
struct SectionOutput {
    section: String,
    proved: bool,
    wall_ms: u128,
    identities: Vec<IdentityLine>,
}

#[derive(Serialize)]
struct PosLine {
    phase: String,
    family: String,
    members: Vec<String>,
    sum: String,
    adopted: bool,
    proof: Outcome,
}

#[derive(Serialize)]
struct MaximalityOutput {
    #[serde(flatten)]
    summary: MaximalitySummary,
    targets: Vec<(String, Vec<Outcome>)>,
    pos_log: Vec<PosLine>,
    wall_ms: u128,
}

#[derive(Serialize)]
struct MainOutput {
    graph: serde_json::Value,
    graph_hash: String,
    bound: usize,
    allow_pos: bool,
    assumptions: Vec<&'static str>,
    sections: Vec<SectionOutput>,
    maximality: Option<MaximalityOutput>,
    certificates: Option<StoreCheck>,
    proved: bool,
}

fn section_output(r: &SectionReport, files: &[PathBuf]) -> SectionOutput {
    let mut files = files.iter();
    SectionOutput {
        section: r.section.clone(),
        proved: r.all_proved(),
        wall_ms: r.wall_ms,
        identities: r
            .checks
            .iter()
            .map(|c| IdentityLine {
                label: c.label.clone(),
                status: match (c.proved, c.structural) {
                    (true, true) => "Proved (structural)",
                    (true, false) => "Proved",
                    (false, _) => "Inconclusive",
                },
                certificate_terms: c.certificate.as_ref().map_or(0, |x| x.len()),
                certificate_file: if c.proved {
                    files.next().cloned()
                } else {
                    None
                },
                residual: c.residual.as_ref().map(|r| r.display()),
            })
            .collect(),
    }
}

fn maintheorem(cli: &Cli, path: &Path, allow_pos: bool) -> Result<u8> {
    let g = read_graph(path)?;
    let cfg = cli.run.config();
    if let SymbolOrder::Custom(_) = cfg.symbol_order {
        bail!("maintheorem runs several alphabets; use 'declaration' or 'reverse'");
    }
    let sink = Sink::open(&cli.run.out)?;
    let reports = verify_coaction_with(&g, &cfg)?;
    let mut sections = Vec::new();
    for r in &reports {
        let files = match &sink {
            Some(s) => s
                .store
                .save_section(&format!("coaction/{}", r.section), r)?,
            None => Vec::new(),
        };
        sections.push(section_output(r, &files));
    }
    drop(reports);

    let maximality = if allow_pos {
        let started = Instant::now();
        let opts = MaximalityOptions {
            bound: cfg.degree_bound,
            allow_pos: true,
            store: sink.as_ref().map(|s| s.store.clone()),
        };
        let m = replay_maximality_with(&g, &opts)?;
        let pos_log = m
            .pos_steps()
            .map(|s| PosLine {
                phase: s.phase.clone(),
                family: s.family.clone(),
                members: s
                    .members
                    .iter()
                    .map(|w| w.display(&quaut::coaction::FreeMagic::new(g.n()).alphabet))
                    .collect(),
                sum: s
                    .sum
                    .display(&quaut::coaction::FreeMagic::new(g.n()).alphabet),
                adopted: s.adopted,
                proof: s.outcome.clone(),
            })
            .collect();
        Some(MaximalityOutput {
            summary: m.summary(),
            targets: m
                .phases
                .iter()
                .map(|p| (p.phase.clone(), p.targets.clone()))
                .collect(),
            pos_log,
            wall_ms: started.elapsed().as_millis(),
        })
    } else {
        None
    };
    let certificates = sink.as_ref().map(Sink::verify).transpose()?;

    let sections_ok = sections.iter().all(|s| s.proved);
    let maximality_ok = maximality.as_ref().is_none_or(|m| m.summary.proved);
    let proved = sections_ok && maximality_ok;

    let mut text = format!(
        "main theorem, graph n={} m={} (degree bound {})\n",
        g.n(),
        g.m(),
        cfg.degree_bound
    );
    for s in &sections {
        let done = s
            .identities
            .iter()
            .filter(|i| i.status != "Inconclusive")
            .count();
        text.push_str(&format!(
            "  {:<28} {}/{} {}\n",
            s.section,
            done,
            s.identities.len(),
            if s.proved { "Proved" } else { "Inconclusive" }
        ));
        for i in s.identities.iter().filter(|i| i.status == "Inconclusive") {
            text.push_str(&format!(
                "    open {}: {}\n",
                i.label,
                i.residual.as_deref().unwrap_or("?")
            ));
        }
    }
    match &maximality {
        Some(m) => {
            for p in &m.summary.phases {
                text.push_str(&format!(
                    "  maximality {:<17} {}/{} {}  POS {} logged, {} adopted\n",
                    p.phase,
                    p.proved,
                    p.targets,
                    if p.proved == p.targets {
                        "Proved"
                    } else {
                        "Inconclusive"
                    },
                    p.pos_steps,
                    p.pos_adopted
                ));
            }
            let cc = &m.summary.cross_check;
            text.push_str(&format!(
                "  ideal comparison            forward {}/{} converse {}/{}\n",
                cc.forward_checked - cc.forward_failures.len(),
                cc.forward_checked,
                cc.converse_checked - cc.converse_failures.len(),
                cc.converse_checked
            ));
        }
        None => text.push_str("  maximality skipped (needs --allow-pos)\n"),
    }
    text.push_str(&format!("  assumption: {INDEPENDENCE_ASSUMPTION}\n"));
    text.push_str(&certificate_line(&certificates));
    text.push_str(if proved {
        "overall Proved\n"
    } else {
        "overall Inconclusive\n"
    });

    let code = if certificates.as_ref().is_some_and(|c| !c.ok()) {
        EXIT_MISMATCH
    } else if proved {
        EXIT_OK
    } else {
        EXIT_UNKNOWN
    };
    let report = MainOutput {
        graph_hash: g.hash(),
        graph: g.to_json(),
        bound: cfg.degree_bound,
        allow_pos,
        assumptions: vec![INDEPENDENCE_ASSUMPTION],
        sections,
        maximality,
        certificates,
        proved,
    };
    emit(cli, &sink, &report, &text)?;
    Ok(code)
}

fn check(path: &Path) -> Result<u8> {
    let report = if path.is_dir() {
        verify_store(path)?
    } else {
        let ok = check_file(path)?;
        StoreCheck {
            checked: 1,
            failures: if ok {
                Vec::new()
            } else {
                vec![path.to_path_buf()]
            },
        }
    };
    for f in &report.failures {
        println!("FAIL {}", f.display());
    }
    println!(
        "{} certificates checked, {} failed",
        report.checked,
        report.failures.len()
    );
    Ok(if report.ok() { EXIT_OK } else { EXIT_MISMATCH })
}
