//! Command-line front end: automorphism groups, commutativity verdicts, the
//! four-vertex table, the coaction checks and certificate replay.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use quaut::ncstar::{CompletionConfig, SymbolOrder};

/// Every requested check was proved or certified.
pub const EXIT_OK: u8 = 0;
/// Bad input or an I/O failure.
pub const EXIT_ERROR: u8 = 1;
/// Some check stayed inconclusive.
pub const EXIT_UNKNOWN: u8 = 3;
/// Everything was decided but a result disagrees with the expected one, or
/// a written certificate failed to replay.
pub const EXIT_MISMATCH: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "quaut",
    version,
    about = "Quantum automorphisms of finite graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, clap::Args)]
pub struct RunArgs {
    /// Degree bound for completion (at least 2).
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(u16).range(2..))]
    pub degree_bound: u16,
    /// `declaration`, `reverse`, or a comma-separated generator list, smallest first.
    #[arg(long, global = true, default_value = "declaration")]
    pub symbol_order: String,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Directory for report.json, report.txt and certificates/.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print the JSON report instead of the text report.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Definition {
    Banica,
    Bichon,
    /// Banica's algebra in the QA1 to QA4 form.
    Qa14,
    /// The graph C*-algebra.
    Cstar,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classical automorphism group.
    Aut { graph: PathBuf },
    /// Commutativity verdict for a quantum automorphism algebra.
    Qaut {
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "banica")]
        definition: Definition,
    },
    /// Regenerates the four-vertex table and compares it with the published one.
    Table4,
    /// Homomorphism, coassociativity and span checks, plus the maximality
    /// replay when the positivity rule is allowed.
    Maintheorem {
        graph: PathBuf,
        /// Enables the positivity rule for the maximality replay.
        #[arg(long)]
        allow_pos: bool,
    },
    /// Prints a presentation as JSON.
    Presentation {
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "banica")]
        definition: Definition,
    },
    /// Replays a certificate file or every certificate below a directory.
    Check { path: PathBuf },
}

impl RunArgs {
    pub fn symbol_order(&self) -> SymbolOrder {
        match self.symbol_order.as_str() {
            "declaration" => SymbolOrder::Declaration,
            "reverse" => SymbolOrder::Reverse,
            list => SymbolOrder::Custom(list.split(',').map(|s| s.trim().to_string()).collect()),
        }
    }

    pub fn config(&self) -> CompletionConfig {
        CompletionConfig::with_bound(self.degree_bound as usize).order(self.symbol_order())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.run.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_ERROR);
        }
    }
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn symbol_orders_parse() {
        let cli = Cli::parse_from(["quaut", "table4", "--symbol-order", "b, a"]);
        assert_eq!(
            cli.run.symbol_order(),
            SymbolOrder::Custom(vec!["b".into(), "a".into()])
        );
        let cli = Cli::parse_from(["quaut", "table4", "--symbol-order", "reverse"]);
        assert_eq!(cli.run.symbol_order(), SymbolOrder::Reverse);
        assert!(Cli::try_parse_from(["quaut", "table4", "--degree-bound", "1"]).is_err());
    }
}
