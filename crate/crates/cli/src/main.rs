//! `berezin`: verification suites and tables for magnetic Berezin transforms.
//!
//! Exit codes: 0 every row passed, 1 some row failed its tolerance,
//! 2 usage error, 3 numerical failure.

mod commands;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use magnetic_berezin::QuadratureSpec;
use num_complex::Complex64;

use commands::{Config, Output, Rule, Symbol};

#[derive(Parser, Debug)]
#[command(name = "berezin", version, about = "Verify and tabulate magnetic Berezin transforms on the complex ball")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Berezin transform of spherical functions against the closed-form multiplier.
    VerifyMultiplier(Common),
    /// The m = 0 multiplier against its Gamma-quotient form.
    VerifyPeetre(Common),
    /// Randomized hypergeometric identity suite.
    VerifyIdentities(Common),
    /// Ball automorphisms, invariant distance and Jacobians at random points.
    VerifyGeometry(Common),
    /// Eigenfunctions of the magnetic operator at n = 1.
    VerifyEigen(Common),
    /// Quadrature transform of the radial profile against the closed-form multiplier.
    TabulateMultiplier(Common),
    /// Berezin kernel from its spectral integral against the closed form.
    TabulateKernel(Common),
    /// Berezin transform of a built-in symbol at a point, by two routes.
    Apply(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Complex dimension of the ball.
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Magnetic field strength; requires m < nu - n/2.
    #[arg(long, default_value_t = 2.0)]
    nu: f64,
    /// Landau level.
    #[arg(long, default_value_t = 0)]
    m: usize,
    /// Comma-separated spectral parameters.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.5,1,2,5", allow_hyphen_values = true)]
    lambda_grid: Vec<f64>,
    /// Comma-separated geodesic distances (tabulate-kernel).
    #[arg(long, value_delimiter = ',', default_value = "0,0.25,0.5,1", allow_hyphen_values = true)]
    rho_grid: Vec<f64>,
    /// Pass threshold for each row.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Relative tolerance of the quadratures.
    #[arg(long, default_value_t = 1e-11)]
    quad_tol: f64,
    /// Initial truncation of semi-infinite integrals.
    #[arg(long, default_value_t = 8.0)]
    truncation: f64,
    /// Initial number of Gauss-Legendre panels.
    #[arg(long, default_value_t = 16)]
    panels: usize,
    /// Gauss-Legendre points per panel.
    #[arg(long, default_value_t = 16)]
    points: usize,
    /// Seed for randomized suites and Monte Carlo.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random draws (identities, geometry, eigen points, Monte Carlo samples).
    #[arg(long, default_value_t = 20)]
    draws: usize,
    /// Finite-difference step of the magnetic operator.
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    /// Symbol for `apply`.
    #[arg(long, value_enum, default_value_t = Symbol::Gaussian)]
    symbol: Symbol,
    /// Point for `apply` as `re,im` pairs separated by `;`.
    #[arg(long, default_value = "0.3,0.1", allow_hyphen_values = true)]
    z: String,
    /// Ball quadrature for `apply`.
    #[arg(long, value_enum, default_value_t = Rule::Grid)]
    rule: Rule,
    /// Initial angular resolution of the grid rule.
    #[arg(long, default_value_t = 16)]
    angular: usize,
}

fn parse_point(s: &str) -> Result<Vec<Complex64>, String> {
    s.split(';')
        .map(|pair| {
            let parts: Vec<&str> = pair.split(',').map(str::trim).collect();
            match parts.as_slice() {
                [re, im] => {
                    let re = re.parse::<f64>().map_err(|e| format!("bad real part {re:?}: {e}"))?;
                    let im = im.parse::<f64>().map_err(|e| format!("bad imaginary part {im:?}: {e}"))?;
                    Ok(Complex64::new(re, im))
                }
                _ => Err(format!("expected `re,im`, got {pair:?}")),
            }
        })
        .collect()
}

impl Common {
    fn into_config(self) -> Result<(Config, Option<PathBuf>), String> {
        if self.lambda_grid.is_empty() || self.rho_grid.is_empty() {
            return Err("grids must be non-empty".into());
        }
        if let Some(bad) = self.lambda_grid.iter().chain(&self.rho_grid).find(|x| !x.is_finite()) {
            return Err(format!("grid values must be finite, got {bad}"));
        }
        if !(self.tol > 0.0) {
            return Err(format!("tol must be > 0, got {}", self.tol));
        }
        let quad = QuadratureSpec {
            truncation_t: self.truncation,
            panels: self.panels,
            points_per_panel: self.points,
            tol: self.quad_tol,
        };
        quad.validate().map_err(|e| e.to_string())?;
        let z = parse_point(&self.z)?;
        let config = Config {
            n: self.n,
            nu: self.nu,
            m: self.m,
            lambda_grid: self.lambda_grid,
            rho_grid: self.rho_grid,
            quad,
            tol: self.tol,
            seed: self.seed,
            draws: self.draws,
            step: self.step,
            symbol: self.symbol,
            z,
            rule: self.rule,
            angular: self.angular,
        };
        Ok((config, self.out))
    }
}

fn write_output(out: &Option<PathBuf>, output: &Output) -> io::Result<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            report::write_csv(&mut w, output.layout, &output.rows)?;
            w.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            report::write_csv(&mut w, output.layout, &output.rows)?;
            w.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (run, common): (fn(&Config) -> magnetic_berezin::Result<Output>, Common) = match cli.command {
        Command::VerifyMultiplier(c) => (commands::verify_multiplier, c),
        Command::VerifyPeetre(c) => (commands::verify_peetre, c),
        Command::VerifyIdentities(c) => (commands::verify_identities, c),
        Command::VerifyGeometry(c) => (commands::verify_geometry, c),
        Command::VerifyEigen(c) => (commands::verify_eigen, c),
        Command::TabulateMultiplier(c) => (commands::tabulate_multiplier, c),
        Command::TabulateKernel(c) => (commands::tabulate_kernel, c),
        Command::Apply(c) => (commands::apply, c),
    };
    let (config, out) = match common.into_config() {
        Ok(v) => v,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let output = match run(&config) {
        Ok(o) => o,
        Err(e) if e.is_usage() => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("numerical failure: {e}");
            return ExitCode::from(3);
        }
    };
    if let Err(e) = write_output(&out, &output) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(2);
    }
    let failed = output.rows.iter().filter(|(_, r)| !r.pass).count();
    eprintln!("{} rows, {failed} failed", output.rows.len());
    if failed > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
