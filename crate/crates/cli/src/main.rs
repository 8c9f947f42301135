use clap::{Parser, Subcommand, ValueEnum};
use rittcalc::commands::{
    cmd_analyze, cmd_apply, cmd_demo_angle_growth, cmd_improve_check, cmd_verify, DemoArgs, Format, Globals, Output,
};
use rittcalc::error::{CliError, EXIT_INPUT};
use rittcalc_core::diagnostics::GridConfig;
use rittcalc_core::funclasses::SamplingConfig;
use rittcalc_core::suites::DEFAULT_SEED;
use std::path::PathBuf;
use std::process::ExitCode;

/// Numerical diagnostics for Ritt operators and their functional calculus.
#[derive(Parser, Debug)]
#[command(name = "ritt-calc", version)]
struct Cli {
    /// Comparison tolerance for angle and bound checks
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    /// Angular nodes per half circle on the coarsest resolvent grid
    #[arg(long, global = true)]
    grid_nodes: Option<usize>,
    /// Comma separated circle radii (> 1) for resolvent sampling
    #[arg(long, global = true, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    /// Write output here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Power, resolvent, Stolz and angle diagnostics of a matrix
    Analyze { matrix: PathBuf },
    /// Form h(T) and compare its diagnostics with those of T
    Apply { matrix: PathBuf, function: PathBuf },
    /// Sampled covering sector angle of 1 - h on the disc
    ImproveCheck {
        function: PathBuf,
        /// Circles of radius 1 - 10^-k
        #[arg(long, default_value_t = SamplingConfig::default().circles)]
        circles: usize,
        /// Points per circle
        #[arg(long, default_value_t = SamplingConfig::default().angular)]
        angular: usize,
        /// Interior points
        #[arg(long, default_value_t = SamplingConfig::default().interior)]
        interior: usize,
    },
    /// Angle growth of T versus T^2 and the Cayley transform for a diagonal example
    DemoAngleGrowth {
        #[arg(long, default_value_t = DemoArgs::default().phi)]
        phi: f64,
        #[arg(long, default_value_t = DemoArgs::default().delta)]
        delta: f64,
        /// Grid size
        #[arg(long, default_value_t = DemoArgs::default().n)]
        n: usize,
        /// Also run the scenario tan(beta) >= tan(phi)/eps
        #[arg(long)]
        eps: Option<f64>,
        /// Write the diagonal matrix as a matrix file
        #[arg(long)]
        emit_matrix: Option<PathBuf>,
    },
    /// Run a seeded property suite
    Verify {
        /// appendix_a, appendix_b, measures, calculus, geometry or all
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn globals(cli: &Cli) -> Result<Globals, CliError> {
    let mut grid = GridConfig::default();
    if let Some(n) = cli.grid_nodes {
        grid.angular_nodes = n;
    }
    if let Some(r) = &cli.radii {
        grid.radii = r.clone();
    }
    let g = Globals {
        tol: cli.tol,
        grid,
        format: match cli.format {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        },
    };
    g.validate()?;
    Ok(g)
}

fn threads() -> Result<usize, CliError> {
    match std::env::var("RITT_CALC_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::input(format!("RITT_CALC_THREADS must be a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(0),
    }
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let g = globals(cli)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads()?)
        .build()
        .map_err(|e| CliError::Numerical(format!("thread pool: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Analyze { matrix } => cmd_analyze(matrix, &g),
        Command::Apply { matrix, function } => cmd_apply(matrix, function, &g),
        Command::ImproveCheck { function, circles, angular, interior } => {
            cmd_improve_check(function, SamplingConfig { circles: *circles, angular: *angular, interior: *interior }, &g)
        }
        Command::DemoAngleGrowth { phi, delta, n, eps, emit_matrix } => cmd_demo_angle_growth(
            &DemoArgs { phi: *phi, delta: *delta, n: *n, eps: *eps, emit_matrix: emit_matrix.clone() },
            &g,
        ),
        Command::Verify { suite, seed } => cmd_verify(suite, *seed, &g),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { 0 });
        }
    };
    let out = run(&cli).and_then(|o| {
        match &cli.out {
            Some(p) => std::fs::write(p, &o.body).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?,
            None => print!("{}", o.body),
        }
        Ok(o.code)
    });
    match out {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("ritt-calc: {e}");
            ExitCode::from(e.code() as u8)
        }
    }
}
