mod commands;
mod input;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use report::{Failure, Output};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(name = "trop-morse", version, about = "Exact local Morse data and the identities they satisfy")]
struct Cli {
    /// Print the run report as canonical JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for random instances.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print nothing on stdout; only the exit code reports the outcome.
    #[arg(long, short, global = true)]
    quiet: bool,
    /// List the built-in fixture ids and exit.
    #[arg(long)]
    fixtures: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tropical curves with piecewise linear derivative profiles.
    #[command(subcommand)]
    Curve(CurveCommand),
    /// Quadratic divisors on the standard torus.
    #[command(subcommand)]
    Torus(TorusCommand),
    /// Bohr-Sommerfeld points of a lattice quotient.
    #[command(subcommand)]
    Bs(BsCommand),
    /// Ehrhart polynomial and reciprocity of lattice polytopes.
    Ehrhart {
        #[command(flatten)]
        inputs: Inputs,
        /// Largest dilation factor checked.
        #[arg(long, default_value_t = 4)]
        kmax: i64,
    },
    /// Toric manifolds of lattice polytopes.
    #[command(subcommand)]
    Toric(ToricCommand),
    /// Products, covers and symmetric powers of point data.
    #[command(subcommand)]
    Compose(ComposeCommand),
}

#[derive(Subcommand, Debug)]
enum CurveCommand {
    /// Validate a divisor and check the Riemann-Roch identity.
    Check {
        /// Curve JSON file.
        #[arg(requires = "divisor")]
        curve: Option<String>,
        /// Divisor JSON file.
        divisor: Option<String>,
        /// Built-in (curve, divisor) pair; may be repeated.
        #[arg(long = "fixture")]
        fixtures: Vec<String>,
    },
    /// Check the identity on seeded random curves.
    Random {
        #[arg(long, default_value_t = 2)]
        genus: usize,
        #[arg(long, default_value_t = 1)]
        leaves: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 12)]
        max_edges: usize,
        /// Bound on the integer slopes at vertices.
        #[arg(long, default_value_t = 5)]
        max_slope: i64,
        /// Random interior breakpoints per edge, at most.
        #[arg(long, default_value_t = 3)]
        breakpoints: usize,
    },
}

#[derive(Subcommand, Debug)]
enum TorusCommand {
    /// Intersection points, local Morse data and the determinant identity.
    Check(Inputs),
}

#[derive(Subcommand, Debug)]
enum BsCommand {
    /// Count Bohr-Sommerfeld points and compare with |det L|.
    Count(Inputs),
}

#[derive(Subcommand, Debug)]
enum ToricCommand {
    /// Local Morse data of the divisor of the polytope and of its negative.
    Lmd(Inputs),
}

#[derive(Subcommand, Debug)]
enum ComposeCommand {
    /// Pointwise tensor product of two point sets.
    Product { left: String, right: String },
    /// Points of a finite cover.
    Cover {
        base: String,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = CoverMode::Cyclic)]
        mode: CoverMode,
    },
    /// Euler number of a symmetric power against the series oracle.
    Sym {
        /// Point set operand; omit when using --chi.
        #[arg(required_unless_present = "chi", conflicts_with = "chi")]
        points: Option<String>,
        /// Use |chi| points of index sign(chi) instead of an operand.
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<i64>,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CoverMode {
    Cyclic,
    Disjoint,
}

#[derive(Args, Debug)]
struct Inputs {
    /// JSON input files.
    files: Vec<String>,
    /// Built-in fixture id; may be repeated.
    #[arg(long = "fixture")]
    fixtures: Vec<String>,
}

fn configure_threads() {
    if let Some(n) = std::env::var("TROP_MORSE_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            // only fails if a pool already exists
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn run(cli: &Cli, command: &Command) -> Result<Output, Failure> {
    match command {
        Command::Curve(CurveCommand::Check { curve, divisor, fixtures }) => {
            let files = curve.as_deref().zip(divisor.as_deref());
            commands::curve::check(files, fixtures)
        }
        Command::Curve(CurveCommand::Random { genus, leaves, count, max_edges, max_slope, breakpoints }) => {
            let params = commands::curve::RandomRun {
                genus: *genus,
                leaves: *leaves,
                count: *count,
                max_edges: *max_edges,
                max_slope: *max_slope,
                breakpoints: *breakpoints,
                seed: cli.seed,
            };
            commands::curve::random(&params)
        }
        Command::Torus(TorusCommand::Check(inputs)) => commands::torus::check(&inputs.files, &inputs.fixtures),
        Command::Bs(BsCommand::Count(inputs)) => commands::torus::bs_count(&inputs.files, &inputs.fixtures),
        Command::Ehrhart { inputs, kmax } => commands::toric::ehrhart(&inputs.files, &inputs.fixtures, *kmax),
        Command::Toric(ToricCommand::Lmd(inputs)) => commands::toric::lmd(&inputs.files, &inputs.fixtures),
        Command::Compose(ComposeCommand::Product { left, right }) => commands::compose::product(left, right),
        Command::Compose(ComposeCommand::Cover { base, degree, mode }) => {
            commands::compose::cover(base, *degree, *mode == CoverMode::Cyclic)
        }
        Command::Compose(ComposeCommand::Sym { points, chi, n }) => commands::compose::sym(points.as_deref(), *chi, *n),
    }
}

fn print_fixtures(json: bool) {
    if json {
        let list: serde_json::Map<String, serde_json::Value> = trop_morse::fixtures::CATALOG
            .iter()
            .map(|(id, about)| (id.to_string(), serde_json::Value::from(*about)))
            .collect();
        println!("{}", serde_json::to_string_pretty(&list).expect("json"));
    } else {
        for (id, about) in trop_morse::fixtures::CATALOG {
            println!("{id:<22} {about}");
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(report::EXIT_INPUT);
        }
    };
    if cli.fixtures {
        if !cli.quiet {
            print_fixtures(cli.json);
        }
        return ExitCode::SUCCESS;
    }
    let Some(command) = &cli.command else {
        eprintln!("error: a subcommand is required (see --help)");
        return ExitCode::from(report::EXIT_INPUT);
    };
    configure_threads();

    let start = Instant::now();
    let outcome = run(&cli, command);
    let elapsed = start.elapsed();
    match outcome {
        Ok(output) => {
            let argv: Vec<String> = std::env::args().skip(1).collect();
            let code = output.emit(argv, cli.json, cli.quiet);
            if !cli.quiet {
                eprintln!("wall time: {:.3} ms", elapsed.as_secs_f64() * 1e3);
            }
            ExitCode::from(code)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
