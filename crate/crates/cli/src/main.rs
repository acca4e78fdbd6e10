//! Command-line front end: parses a spec file, runs the requested
//! computation, and renders a deterministic report as text or JSON.
//!
//! Exit codes: 0 success, 1 usage, 2 parse, 3 violated precondition,
//! 4 internal.

mod commands;
mod report;
mod specfile;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{CliError, CommandOutput, Options, RingMode};
use report::Report;

#[derive(Parser, Debug)]
#[command(
    name = "hypertoric",
    version,
    about = "Exact invariants of toric hyperkähler varieties from integer subtorus data"
)]
struct Cli {
    /// Emit the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for face enumeration (falls back to
    /// HYPERTORIC_THREADS, default 1). Output does not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the basis matrix and show the derived subtorus data.
    Validate { spec: PathBuf },
    /// Enumerate the walls of the weight configuration.
    Walls { spec: PathBuf },
    /// Test whether (alpha, beta) is a regular value.
    Regular { spec: PathBuf },
    /// Test smoothness of the quotient (unimodularity of all minors).
    Smooth { spec: PathBuf },
    /// Build the hyperplane arrangement and enumerate its faces.
    Arrangement {
        spec: PathBuf,
        /// Write an SVG figure (quotient dimension 2 only).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Betti numbers of the quotient at the file's alpha.
    Betti { spec: PathBuf },
    /// Cohomology ring presentation.
    Ring {
        spec: PathBuf,
        /// Monomial generators: wall circuits or minimal empty intersections.
        #[arg(long, value_enum, default_value = "circuits")]
        mode: RingMode,
        /// Also eliminate the linear relations.
        #[arg(long)]
        reduced: bool,
    },
    /// Core components (compact chambers) and their intersections.
    Core { spec: PathBuf },
    /// Chamber structure of the parameter space for the file's beta.
    Chambers {
        spec: PathBuf,
        /// Write an SVG figure (subtorus rank 2 only).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Classify the wall-crossing from the file's alpha to another one.
    Cross {
        spec: PathBuf,
        /// Target alpha as comma-separated rationals, e.g. "1,3/2".
        #[arg(long, allow_hyphen_values = true)]
        to: String,
    },
    /// Exact semistability and closed-orbit oracles for the file's point.
    Stability { spec: PathBuf },
    /// Numerical minimization of the orbit function for the file's point.
    Flow {
        spec: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        max_iter: usize,
    },
    /// Cohomology classes of the quotient's Kähler forms.
    Period { spec: PathBuf },
    /// Run every applicable computation.
    Report { spec: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Walls { .. } => "walls",
            Command::Regular { .. } => "regular",
            Command::Smooth { .. } => "smooth",
            Command::Arrangement { .. } => "arrangement",
            Command::Betti { .. } => "betti",
            Command::Ring { .. } => "ring",
            Command::Core { .. } => "core",
            Command::Chambers { .. } => "chambers",
            Command::Cross { .. } => "cross",
            Command::Stability { .. } => "stability",
            Command::Flow { .. } => "flow",
            Command::Period { .. } => "period",
            Command::Report { .. } => "report",
        }
    }

    fn spec_path(&self) -> &PathBuf {
        match self {
            Command::Validate { spec }
            | Command::Walls { spec }
            | Command::Regular { spec }
            | Command::Smooth { spec }
            | Command::Arrangement { spec, .. }
            | Command::Betti { spec }
            | Command::Ring { spec, .. }
            | Command::Core { spec }
            | Command::Chambers { spec, .. }
            | Command::Cross { spec, .. }
            | Command::Stability { spec }
            | Command::Flow { spec, .. }
            | Command::Period { spec }
            | Command::Report { spec } => spec,
        }
    }

    fn svg_path(&self) -> Option<&PathBuf> {
        match self {
            Command::Arrangement { svg, .. } | Command::Chambers { svg, .. } => svg.as_ref(),
            _ => None,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let is_help = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if is_help {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match std::panic::catch_unwind(|| execute(&cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
        Err(_) => {
            eprintln!("internal error (panic), see above");
            ExitCode::from(4)
        }
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let threads = cli
        .threads
        .or_else(|| {
            std::env::var("HYPERTORIC_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(1)
        .max(1);
    let opts = Options { threads };

    let path = cli.command.spec_path();
    let file = specfile::parse_spec(path).map_err(CliError::Parse)?;

    let out: CommandOutput = match &cli.command {
        Command::Validate { .. } => commands::validate(&file)?,
        Command::Walls { .. } => commands::walls(&file)?,
        Command::Regular { .. } => commands::regular(&file)?,
        Command::Smooth { .. } => commands::smooth(&file)?,
        Command::Arrangement { svg, .. } => commands::arrangement(&file, opts, svg.is_some())?,
        Command::Betti { .. } => commands::betti(&file, opts)?,
        Command::Ring { mode, reduced, .. } => commands::ring(&file, *mode, *reduced)?,
        Command::Core { .. } => commands::core(&file, opts)?,
        Command::Chambers { svg, .. } => commands::chambers(&file, svg.is_some())?,
        Command::Cross { to, .. } => {
            let target = specfile::parse_rational_csv(to)
                .map_err(|e| CliError::Usage(format!("--to: {e:#}")))?;
            commands::cross(&file, &target)?
        }
        Command::Stability { .. } => commands::stability(&file)?,
        Command::Flow { tol, max_iter, .. } => commands::flow(&file, *tol, *max_iter)?,
        Command::Period { .. } => commands::period_cmd(&file)?,
        Command::Report { .. } => commands::full_report(&file, opts)?,
    };

    // echo the file name only: reports stay byte-identical no matter where
    // the file lives
    let shown_path = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    let mut report = Report::new(
        cli.command.name(),
        commands::inputs_json(&shown_path, &file),
    );
    report.results = out.results;
    report.warnings = out.warnings;
    report.human = out.human;

    if let (Some(svg_text), Some(svg_path)) = (&out.svg, cli.command.svg_path()) {
        std::fs::write(svg_path, svg_text)
            .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", svg_path.display())))?;
        report
            .human
            .push(format!("wrote figure to {}", svg_path.display()));
    }

    if cli.json {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    Ok(())
}
