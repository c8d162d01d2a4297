use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod output;

use commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "minitwistor", version, about = "Tangent hyperplane families and minitwistor lines for hyperelliptic spectral curves")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GlobalOpts {
    /// JSON run configuration; the built-in (-3, -1, 1, 3) example when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (a directory for plot-data); standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long = "tol-root", global = true)]
    pub tol_root: Option<f64>,
    #[arg(long = "tol-newton", global = true)]
    pub tol_newton: Option<f64>,
    #[arg(long = "tol-abel", global = true)]
    pub tol_abel: Option<f64>,
    #[arg(long = "tol-quadrature", global = true)]
    pub tol_quadrature: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every verification suite and write a JSON report.
    Verify,
    /// Solve the family of tangent hyperplanes over a grid on the quarter.
    Family {
        /// Points per side of the interior grid and per boundary arc.
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, value_enum, default_value_t = commands::Region::All)]
        region: commands::Region,
    },
    /// Trace the discriminant of one pencil over s > 0 (CSV).
    Trace {
        /// Branch indices (1-based) of one half of the equal division.
        #[arg(long, value_delimiter = ',')]
        division: Option<Vec<usize>>,
        /// Number of grid points.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Image of a twistor line in the minitwistor model.
    TwistorImage {
        /// Interval index 0..=2n; n selects the central component.
        #[arg(long)]
        index: usize,
        /// Use the invariant line L_i (1..=2n) instead of a chain line.
        #[arg(long, conflicts_with_all = ["lambda", "modulus", "param"])]
        invariant: bool,
        /// Position of the chain line inside its interval.
        #[arg(long, conflicts_with = "modulus")]
        lambda: Option<f64>,
        /// Squared modulus |c|^2 of the chain line coordinate.
        #[arg(long)]
        modulus: Option<f64>,
        /// Pencil parameter for the central component: a real number or `inf`.
        #[arg(long)]
        param: Option<String>,
    },
    /// Period lattice, Riemann relations and the Jacobian checks.
    Jacobian,
    /// CSV tables of circle samples and their images for external plotting.
    PlotData {
        /// Samples per circle.
        #[arg(long)]
        grid: Option<usize>,
    },
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let rc = commands::load_config(&cli.global)?;
    let g = &cli.global;
    match cli.command {
        Command::Verify => commands::verify(&rc, g),
        Command::Family { grid, region } => commands::family(&rc, g, grid, region),
        Command::Trace { division, grid } => commands::trace(&rc, g, division, grid),
        Command::TwistorImage {
            index,
            invariant,
            lambda,
            modulus,
            param,
        } => {
            let sel = commands::ImageSelect {
                index,
                invariant,
                lambda,
                modulus,
                param,
            };
            commands::twistor_image(&rc, g, &sel)
        }
        Command::Jacobian => commands::jacobian(&rc, g),
        Command::PlotData { grid } => commands::plot_data(&rc, g, grid),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
