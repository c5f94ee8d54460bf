//! Command-line interface: analyze, transfer, gain, sample, verify.

use clap::{Parser, Subcommand};
use std::collections::BTreeSet;
use std::io::Read;
use std::path::PathBuf;
use symrigid::cli::commands::{self, CommandOutput, TransferOp};
use symrigid::cli::{tolerance_from_env, EXIT_BAD_INPUT};
use symrigid::frameworks::SpaceKind;

#[derive(Parser)]
#[command(
    name = "symrigid",
    about = "Rigidity analysis of symmetric bar-joint, spherical and point-hyperplane frameworks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a framework document: ranks, rigidity, isostaticity, and
    /// the forced-symmetric verdict when a group is attached.
    Analyze {
        /// Input framework JSON (`-` for stdin)
        input: PathBuf,
        /// Output path (stdout when omitted)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Apply a geometric transfer operator.
    Transfer {
        input: PathBuf,
        /// invert | to-sphere | to-ph | pair | double-cover | rotate | pair-fixed
        #[arg(long)]
        op: String,
        /// Comma-separated vertex ids for `--op invert`
        #[arg(long)]
        set: Option<String>,
        /// Subgroup selector for `--op pair`: trivial | rotations | INDEX
        #[arg(long, default_value = "trivial")]
        subgroup: String,
        /// Coordinate plane `a,b` for `--op rotate`
        #[arg(long)]
        plane: Option<String>,
        /// Rotation angle in radians for `--op rotate`
        #[arg(long)]
        angle: Option<f64>,
        /// Re-analyze both sides and assert the preservation contract
        #[arg(long)]
        check: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Gain-sparsity verdict for a gain-graph document.
    Gain {
        input: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        l: usize,
        #[arg(short)]
        m: usize,
        /// Also search for a spanning (k,l,m)-gain-tight subgraph
        #[arg(long)]
        find_tight: bool,
    },
    /// Sample a (symmetric) realization of a graph document.
    Sample {
        input: PathBuf,
        #[arg(long)]
        space: String,
        #[arg(long, short = 'd')]
        dim: usize,
        /// Comma-separated equator / hyperplane vertex ids
        #[arg(long)]
        x: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Keep the best of this many seeds (regular witness)
        #[arg(long, default_value_t = 3)]
        tries: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a named verification suite.
    Verify {
        /// inversion | transfer | pairing | combinatorial | doublecover | epsilon
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Relative rank tolerance override
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn read_input(path: &PathBuf) -> std::io::Result<String> {
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
    }
}

fn parse_id_set(s: &Option<String>) -> Result<BTreeSet<usize>, String> {
    match s {
        None => Ok(BTreeSet::new()),
        Some(s) if s.trim().is_empty() => Ok(BTreeSet::new()),
        Some(s) => s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|_| format!("bad vertex id `{part}`"))
            })
            .collect(),
    }
}

fn emit(out: CommandOutput, output: Option<&PathBuf>) -> i32 {
    let text = serde_json::to_string_pretty(&out.document).expect("report serializes");
    match output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_BAD_INPUT;
            }
        }
        None => println!("{text}"),
    }
    out.exit_code
}

fn run() -> i32 {
    let cli = Cli::parse();
    let tol = tolerance_from_env();
    match cli.command {
        Command::Analyze { input, output } => {
            let text = match read_input(&input) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", input.display());
                    return EXIT_BAD_INPUT;
                }
            };
            emit(commands::cmd_analyze(&text, &tol), output.as_ref())
        }
        Command::Transfer {
            input,
            op,
            set,
            subgroup,
            plane,
            angle,
            check,
            output,
        } => {
            let text = match read_input(&input) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", input.display());
                    return EXIT_BAD_INPUT;
                }
            };
            let op = match op.as_str() {
                "invert" => match parse_id_set(&set) {
                    Ok(set) => TransferOp::Invert { set },
                    Err(e) => {
                        eprintln!("error: {e}");
                        return EXIT_BAD_INPUT;
                    }
                },
                "to-sphere" => TransferOp::ToSphere,
                "to-ph" => TransferOp::ToPh,
                "pair" => TransferOp::Pair { subgroup },
                "double-cover" => TransferOp::DoubleCover,
                "rotate" => {
                    let plane = plane.as_deref().unwrap_or("0,1");
                    let parts: Vec<usize> = plane
                        .split(',')
                        .filter_map(|p| p.trim().parse().ok())
                        .collect();
                    if parts.len() != 2 {
                        eprintln!("error: --plane wants two comma-separated axes");
                        return EXIT_BAD_INPUT;
                    }
                    TransferOp::Rotate {
                        plane: (parts[0], parts[1]),
                        angle: angle.unwrap_or(std::f64::consts::FRAC_PI_2),
                    }
                }
                "pair-fixed" => TransferOp::PairFixed,
                other => {
                    eprintln!("error: unknown transfer op `{other}`");
                    return EXIT_BAD_INPUT;
                }
            };
            emit(commands::cmd_transfer(&text, &op, check, &tol), output.as_ref())
        }
        Command::Gain {
            input,
            k,
            l,
            m,
            find_tight,
        } => {
            let text = match read_input(&input) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", input.display());
                    return EXIT_BAD_INPUT;
                }
            };
            emit(commands::cmd_gain(&text, k, l, m, find_tight), None)
        }
        Command::Sample {
            input,
            space,
            dim,
            x,
            seed,
            tries,
            output,
        } => {
            let text = match read_input(&input) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", input.display());
                    return EXIT_BAD_INPUT;
                }
            };
            let space = match space.as_str() {
                "euclidean" => SpaceKind::Euclidean,
                "spherical" => SpaceKind::Spherical,
                "ph" => SpaceKind::Ph,
                other => {
                    eprintln!("error: unknown space `{other}`");
                    return EXIT_BAD_INPUT;
                }
            };
            let x_set = match parse_id_set(&x) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_BAD_INPUT;
                }
            };
            emit(
                commands::cmd_sample(&text, space, dim, &x_set, seed, tries),
                output.as_ref(),
            )
        }
        Command::Verify {
            suite,
            trials,
            seed,
            tol: tol_override,
        } => {
            let tol = match tol_override {
                Some(t) if t > 0.0 => symrigid::numerics::TolerancePolicy::new(t),
                _ => tol,
            };
            let out = commands::cmd_verify(&suite, trials, seed, &tol);
            // human-readable summary on stderr, document on stdout
            if let Some(suites) = out.document.get("suites").and_then(|s| s.as_array()) {
                for s in suites {
                    eprintln!(
                        "{}: {}/{} passed",
                        s["name"].as_str().unwrap_or("?"),
                        s["passes"],
                        s["trials"]
                    );
                }
            }
            emit(out, None)
        }
    }
}

fn main() {
    std::process::exit(run());
}
