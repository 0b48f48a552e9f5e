use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ipalg::{CliError, GambleSpec, Model, ModelError, Query, EXAMPLE_MODEL};
use ipalg_lp::{with_limits, Limits};

/// Exact reasoning with coherent sets of desirable gambles and lower previsions.
#[derive(Parser)]
#[command(name = "ipalg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Model document (JSON).
    #[arg(long, global = true)]
    model: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Lower the limit on the number of cells of any scope.
    #[arg(long, global = true)]
    max_cells: Option<usize>,
    /// Lower the limit on the number of enumerated extreme rays.
    #[arg(long, global = true)]
    max_rays: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the queries listed in the model.
    Run,
    /// Print the canonical form of the model.
    Canonical,
    /// Print the bundled example model.
    Example,
    /// Whether a piece is coherent.
    CheckCoherence { piece: String },
    /// Lower prevision of a gamble, given as a JSON object keyed by cells.
    Prevision { piece: String, gamble: String },
    /// Upper prevision of a gamble.
    Upper { piece: String, gamble: String },
    /// Whether a gamble is desirable under a piece.
    Contains { piece: String, gamble: String },
    /// Combine pieces of one kind.
    #[command(arg_required_else_help = true)]
    Combine { pieces: Vec<String> },
    /// Marginalize onto comma-separated variables (empty for the empty scope).
    Marginalize { piece: String, scope: String },
    /// Extreme points of the credal set of a prevision piece.
    CredalVertices { piece: String },
    /// Whether the pieces are marginals of one joint piece.
    #[command(arg_required_else_help = true)]
    Compatible { pieces: Vec<String> },
    /// Compatibility by local computation when the labels allow it.
    #[command(arg_required_else_help = true)]
    SolveMarginal { pieces: Vec<String> },
    /// Running intersection property of comma-separated scopes, in order.
    #[command(arg_required_else_help = true)]
    Rip { scopes: Vec<String> },
    /// Lower prevision of a cone piece, optionally evaluated at a gamble.
    Sigma {
        piece: String,
        gamble: Option<String>,
    },
}

fn scope(text: &str) -> Vec<String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

fn gamble(text: &str) -> Result<GambleSpec, CliError> {
    serde_json::from_str(text).map_err(|e| {
        CliError::Model(ModelError::Semantic(vec![ipalg::Diagnostic::new(
            "gamble",
            format!("{e}"),
        )]))
    })
}

fn query(command: Command) -> Result<Option<Query>, CliError> {
    Ok(Some(match command {
        Command::Run | Command::Canonical | Command::Example => return Ok(None),
        Command::CheckCoherence { piece } => Query::CheckCoherence { piece },
        Command::Prevision { piece, gamble: g } => Query::Prevision {
            piece,
            gamble: gamble(&g)?,
        },
        Command::Upper { piece, gamble: g } => Query::Upper {
            piece,
            gamble: gamble(&g)?,
        },
        Command::Contains { piece, gamble: g } => Query::Contains {
            piece,
            gamble: gamble(&g)?,
        },
        Command::Combine { pieces } => Query::Combine { pieces },
        Command::Marginalize { piece, scope: s } => Query::Marginalize {
            piece,
            scope: scope(&s),
        },
        Command::CredalVertices { piece } => Query::CredalVertices { piece },
        Command::Compatible { pieces } => Query::Compatible { pieces },
        Command::SolveMarginal { pieces } => Query::SolveMarginal { pieces },
        Command::Rip { scopes } => Query::Rip {
            scopes: scopes.iter().map(|s| scope(s)).collect(),
        },
        Command::Sigma { piece, gamble: g } => Query::Sigma {
            piece,
            gamble: g.as_deref().map(gamble).transpose()?,
        },
    }))
}

fn execute(cli: Cli) -> Result<String, CliError> {
    if matches!(cli.command, Command::Example) {
        return Ok(EXAMPLE_MODEL.to_string());
    }
    let path = cli.model.ok_or_else(|| CliError::Io {
        path: "--model".into(),
        message: "a model file is required".into(),
    })?;
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let model = Model::parse(&text)?;
    let canonical = matches!(cli.command, Command::Canonical);
    match query(cli.command)? {
        Some(q) => Ok(ipalg::Report {
            queries: vec![model.run(&q)?],
        }
        .to_json()),
        None if canonical => Ok(model.document().to_canonical_json()),
        None => Ok(model.run_all()?.to_json()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limits = Limits {
        max_cells: cli.max_cells.unwrap_or(usize::MAX),
        max_rays: cli.max_rays.unwrap_or(usize::MAX),
        ..Limits::DESK
    };
    let out = cli.out.clone();
    match with_limits(limits, || execute(cli)) {
        Ok(text) => {
            let written = match &out {
                Some(path) => std::fs::write(path, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: cannot write report: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
