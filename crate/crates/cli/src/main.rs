mod commands;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{CliError, Report};

/// Parity, biquandle and parity-biquandle bracket invariants of virtual
/// knots and links given as signed Gauss codes.
#[derive(Parser, Debug)]
#[command(name = "pbbracket", version)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Coefficient ring, e.g. Z5, Z or LaurentZ.
    #[arg(long, global = true)]
    ring: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy, Default)]
#[group(multiple = false)]
pub struct ParityFlags {
    /// Gaussian parity.
    #[arg(long)]
    pub gp: bool,
    /// Component parity of a 2-component link.
    #[arg(long)]
    pub comp: bool,
    /// Flip-biquandle parity of a knot.
    #[arg(long)]
    pub bp: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a Gauss code and print it in normal form.
    Parse { file: String },
    /// Sum of crossing signs.
    Writhe { file: String },
    /// Parity bit of each crossing.
    Parity {
        #[command(flatten)]
        sel: ParityFlags,
        file: String,
    },
    /// Whether the diagram is a classical (planar) one.
    Realizable { file: String },
    /// Apply a seeded random walk of Reidemeister moves.
    Perturb {
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        max_crossings: Option<usize>,
        /// Only insert second-move bigons inside faces.
        #[arg(long)]
        planar: bool,
        file: String,
    },
    /// Check the biquandle axioms of a table file.
    BiquandleCheck { file: String },
    /// Count (or list) colorings by a biquandle.
    Colorings {
        /// Biquandle file or builtin:flip, builtin:dihedral3, builtin:singleton.
        #[arg(long = "biquandle", short = 'X')]
        biquandle: String,
        #[arg(long)]
        list: bool,
        file: String,
    },
    /// Parity bracket as a graph polynomial over Z2.
    Paritybracket {
        #[command(flatten)]
        sel: ParityFlags,
        file: String,
    },
    /// Scalar biquandle bracket multiset from the A, B tables of a coefficient file.
    NorBracket {
        #[arg(long)]
        coeffs: String,
        /// Print the generating polynomial in u instead of multiset lines.
        #[arg(long)]
        poly: bool,
        file: String,
    },
    /// Parity-biquandle bracket multiset.
    Pbracket {
        #[arg(long)]
        coeffs: String,
        file: String,
    },
    /// Check a coefficient file against the bracket relations.
    VerifyCoeffs {
        file: String,
        /// Use the literal printed form of two irregular third-move relations.
        #[arg(long)]
        strict_printed: bool,
        /// Check only the scalar-bracket relations on A and B.
        #[arg(long)]
        nor: bool,
    },
    /// Enumerate coefficient tables over a finite ring.
    SearchCoeffs {
        #[arg(long = "biquandle", short = 'X')]
        biquandle: String,
        #[arg(long)]
        delta: Option<String>,
        #[arg(long)]
        w: Option<String>,
        /// Pin entries: T:x:y=value, or T=value for a whole table.
        #[arg(long = "fix")]
        fix: Vec<String>,
        #[arg(long, default_value_t = pbbracket::search::DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// Print at most this many solutions.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Compare two multiset files.
    Compare { first: String, second: String },
    /// Compare an invariant on seeded random move-equivalent diagrams.
    EquivTest {
        file: String,
        /// Use this coefficient file's parity-biquandle bracket.
        #[arg(long)]
        coeffs: Option<String>,
        /// With --coeffs, use the scalar bracket instead.
        #[arg(long)]
        nor: bool,
        #[command(flatten)]
        sel: ParityFlags,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_crossings: usize,
    },
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let ring = cli.ring.as_deref();
    match &cli.command {
        Command::Parse { file } => commands::parse(file),
        Command::Writhe { file } => commands::writhe(file),
        Command::Parity { sel, file } => commands::parity(file, *sel),
        Command::Realizable { file } => commands::realizable(file),
        Command::Perturb {
            steps,
            seed,
            max_crossings,
            planar,
            file,
        } => commands::perturb(file, *steps, *seed, *max_crossings, *planar),
        Command::BiquandleCheck { file } => commands::biquandle_check(file),
        Command::Colorings {
            biquandle,
            list,
            file,
        } => commands::colorings(file, biquandle, *list),
        Command::Paritybracket { sel, file } => commands::paritybracket(file, *sel),
        Command::NorBracket { coeffs, poly, file } => commands::nor_bracket(file, coeffs, *poly),
        Command::Pbracket { coeffs, file } => commands::pbracket(file, coeffs),
        Command::VerifyCoeffs {
            file,
            strict_printed,
            nor,
        } => commands::verify_coeffs(file, *strict_printed, *nor),
        Command::SearchCoeffs {
            biquandle,
            delta,
            w,
            fix,
            budget,
            limit,
        } => commands::search_coeffs(
            ring,
            biquandle,
            delta.as_deref(),
            w.as_deref(),
            fix,
            *budget,
            *limit,
        ),
        Command::Compare { first, second } => commands::compare(ring, first, second),
        Command::EquivTest {
            file,
            coeffs,
            nor,
            sel,
            samples,
            steps,
            seed,
            max_crossings,
        } => commands::equiv_test(
            file,
            coeffs.as_deref(),
            *nor,
            *sel,
            commands::WalkPlan {
                samples: *samples,
                steps: *steps,
                seed: *seed,
                max_crossings: *max_crossings,
            },
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let mut out = io::stdout().lock();
            // Broken pipes are ignored.
            let _ = if cli.json {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&report.json).expect("serializable")
                )
            } else {
                report.lines.iter().try_for_each(|l| writeln!(out, "{l}"))
            };
            if report.findings {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
