//! One function per subcommand, each producing report rows.

use clap::ValueEnum;
use magnetic_berezin::berezin::{
    berezin_profile, eigenvalue, multiplier_f, multiplier_f0_peetre, MultiplierTable, Params,
};
use magnetic_berezin::geometry::{
    geodesic_distance, inner, jacobian_closed_form, jacobian_finite_difference, moebius_involution,
};
use magnetic_berezin::identities::run_identity_suite;
use magnetic_berezin::operator::{
    apply_berezin_radial, apply_berezin_routes, eigenfunction_inner, eigenfunction_norm_sq, eigenfunction_value,
    kernel_from_spectral, magnetic_operator_apply, reproduce, BallRule, Eigenfunction1D, RadialFunction,
};
use magnetic_berezin::{BallPoint, Error, QuadratureSpec, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::{float, Judge, Layout, ReportRow};

/// Built-in symbols for `apply`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Symbol {
    Constant,
    /// `exp(-|w|²)`.
    Gaussian,
    /// `cos(3 Re w₁)`.
    Cosine,
    /// The spherical function `φ_λ^{(n-1,0)}(d(0,w))`, one row per `λ`.
    Spherical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rule {
    Grid,
    MonteCarlo,
}

/// Everything a subcommand may read; unused fields are ignored.
#[derive(Debug, Clone)]
pub struct Config {
    pub n: usize,
    pub nu: f64,
    pub m: usize,
    pub lambda_grid: Vec<f64>,
    pub rho_grid: Vec<f64>,
    pub quad: QuadratureSpec,
    pub tol: f64,
    pub seed: u64,
    pub draws: usize,
    pub step: f64,
    pub symbol: Symbol,
    pub z: Vec<Complex64>,
    pub rule: Rule,
    pub angular: usize,
}

pub struct Output {
    pub layout: Layout,
    /// `λ` for the multiplier layout.
    pub rows: Vec<(Option<f64>, ReportRow)>,
}

impl Output {
    fn generic(rows: Vec<ReportRow>) -> Self {
        Output {
            layout: Layout::Generic,
            rows: rows.into_iter().map(|r| (None, r)).collect(),
        }
    }
}

impl Config {
    fn params(&self) -> Result<Params> {
        Params::new(self.n, self.nu, self.m)
    }
}

/// Operator oracle: `𝔅_m` applied to the spherical function at the origin
/// against the closed-form multiplier.
pub fn verify_multiplier(c: &Config) -> Result<Output> {
    let p = c.params()?;
    let mut rows = Vec::with_capacity(c.lambda_grid.len());
    for &lambda in &c.lambda_grid {
        let numeric = apply_berezin_radial(&p, &RadialFunction::spherical(p.n, lambda)?, &c.quad)?.value;
        let closed = multiplier_f(&p, lambda)?;
        rows.push((Some(lambda), ReportRow::compare(String::new(), numeric, closed, Judge::Relative, c.tol)));
    }
    Ok(Output {
        layout: Layout::Multiplier,
        rows,
    })
}

/// Fourier-Jacobi transform of the radial profile against the closed form.
pub fn tabulate_multiplier(c: &Config) -> Result<Output> {
    let p = c.params()?;
    let numeric = MultiplierTable::numeric(&p, &c.lambda_grid, &c.quad)?;
    let closed = MultiplierTable::closed_form(&p, &c.lambda_grid)?;
    let rows = c
        .lambda_grid
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            let row = ReportRow::compare(String::new(), numeric.values[i], closed.values[i], Judge::Relative, c.tol);
            (Some(l), row)
        })
        .collect();
    Ok(Output {
        layout: Layout::Multiplier,
        rows,
    })
}

/// The `m = 0` multiplier against the Gamma-quotient form.
pub fn verify_peetre(c: &Config) -> Result<Output> {
    let p = Params::new(c.n, c.nu, 0)?;
    let mut rows = Vec::new();
    for &lambda in &c.lambda_grid {
        let computed = multiplier_f(&p, lambda)?;
        let reference = multiplier_f0_peetre(p.n, p.nu, lambda)?;
        let inputs = format!("n={};nu={};lambda={lambda}", p.n, p.nu);
        rows.push(ReportRow::compare(inputs, computed, reference, Judge::Relative, c.tol));
    }
    Ok(Output::generic(rows))
}

pub fn verify_identities(c: &Config) -> Result<Output> {
    let checks = run_identity_suite(c.draws, c.seed, &c.quad)?;
    let rows = checks
        .into_iter()
        .map(|k| {
            let inputs = format!("identity={};{}", k.identity.name(), k.inputs);
            ReportRow::new(inputs, k.computed, k.reference, k.abs_err, Judge::Relative, c.tol)
        })
        .collect();
    Ok(Output::generic(rows))
}

fn random_point(rng: &mut ChaCha8Rng, n: usize, r_max: f64) -> Result<BallPoint> {
    let coords: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
    let r = r_max * rng.gen::<f64>();
    BallPoint::new(coords.into_iter().map(|z| z * (r / norm)).collect())
}

fn show(z: &BallPoint) -> String {
    z.coords()
        .iter()
        .map(|c| format!("{}{:+}i", c.re, c.im))
        .collect::<Vec<_>>()
        .join(" ")
}

fn max_dev(a: &BallPoint, b: &BallPoint) -> f64 {
    a.coords().iter().zip(b.coords()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Involution, the inner-product identity, distance invariance and the
/// Jacobian at seeded random points.
pub fn verify_geometry(c: &Config) -> Result<Output> {
    if c.n == 0 {
        return Err(Error::InvalidParams("n must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let one = Complex64::new(1.0, 0.0);
    let mut rows = Vec::new();
    for draw in 0..c.draws {
        let a = random_point(&mut rng, c.n, 0.9)?;
        let z = random_point(&mut rng, c.n, 0.9)?;
        let w = random_point(&mut rng, c.n, 0.9)?;
        let key = |check: &str| format!("check={check};n={};draw={draw}", c.n);

        let (az, aw) = (moebius_involution(&a, &z)?, moebius_involution(&a, &w)?);
        let back = moebius_involution(&a, &az)?;
        rows.push(ReportRow::new(key("involution"), max_dev(&back, &z), 0.0, max_dev(&back, &z), Judge::Mixed, c.tol));

        let lhs = one - inner(&az, &aw)?;
        let rhs = (one - inner(&a, &a)?) * (one - inner(&z, &w)?) / ((one - inner(&z, &a)?) * (one - inner(&a, &w)?));
        rows.push(ReportRow::new(key("inner_identity"), lhs.norm(), rhs.norm(), (lhs - rhs).norm(), Judge::Mixed, c.tol));

        let d = geodesic_distance(&z, &w)?;
        let d_inv = geodesic_distance(&az, &aw)?;
        rows.push(ReportRow::compare(key("distance"), d_inv, d, Judge::Mixed, c.tol));

        let fd = jacobian_finite_difference(&a, &z, 1e-4)?;
        let exact = jacobian_closed_form(&a, &z)?;
        rows.push(ReportRow::compare(key("jacobian"), fd, exact, Judge::Relative, c.tol));
    }
    Ok(Output::generic(rows))
}

/// Rayleigh quotients, reproduction, norms and orthogonality of the `n = 1`
/// eigenfunctions with `p ≤ 2`, `q ≤ m`.
pub fn verify_eigen(c: &Config) -> Result<Output> {
    let p = c.params()?;
    let mut funcs = Vec::new();
    for a in 0..=2 {
        for b in 0..=p.m {
            if a == 0 || b == 0 {
                funcs.push(Eigenfunction1D::new(a, b, p)?);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let points: Vec<BallPoint> = (0..c.draws.max(1))
        .map(|_| random_point(&mut rng, 1, 0.8))
        .collect::<Result<_>>()?;
    let eps = eigenvalue(&p);
    let mut rows = Vec::new();
    for e in &funcs {
        let tag = format!("p={};q={}", e.p, e.q);
        for z in &points {
            let psi = eigenfunction_value(e, z)?;
            if psi.norm() == 0.0 {
                continue;
            }
            let f = |w: &BallPoint| eigenfunction_value(e, w).unwrap_or(Complex64::new(f64::NAN, 0.0));
            let quotient = magnetic_operator_apply(&p, &f, z, c.step)? / psi;
            let inputs = format!("check=eigen;{tag};z={}", show(z));
            rows.push(ReportRow::new(inputs, quotient.re, eps, (quotient - eps).norm(), Judge::Relative, c.tol));
        }
        for z in points.iter().take(2) {
            let got = reproduce(&p, e, z, &c.quad)?;
            let want = eigenfunction_value(e, z)?;
            let inputs = format!("check=reproduce;{tag};z={}", show(z));
            rows.push(ReportRow::new(inputs, got.norm(), want.norm(), (got - want).norm(), Judge::Mixed, c.tol));
        }
        let norm = eigenfunction_inner(e, e, &c.quad)?.re;
        rows.push(ReportRow::compare(format!("check=norm;{tag}"), norm, eigenfunction_norm_sq(e), Judge::Relative, c.tol));
    }
    for (i, a) in funcs.iter().enumerate() {
        for b in &funcs[i + 1..] {
            let cosine = eigenfunction_inner(a, b, &c.quad)?.norm() / (eigenfunction_norm_sq(a) * eigenfunction_norm_sq(b)).sqrt();
            let inputs = format!("check=orthogonality;p={};q={};p2={};q2={}", a.p, a.q, b.p, b.q);
            rows.push(ReportRow::new(inputs, cosine, 0.0, cosine, Judge::Mixed, c.tol));
        }
    }
    Ok(Output::generic(rows))
}

/// `B_m(0, w)` at geodesic distance `ρ` by the spectral integral, against
/// the closed-form profile.
pub fn tabulate_kernel(c: &Config) -> Result<Output> {
    let p = c.params()?;
    let origin = BallPoint::origin(p.n);
    let mut rows = Vec::new();
    for &rho in &c.rho_grid {
        let mut coords = vec![Complex64::new(0.0, 0.0); p.n];
        coords[0] = Complex64::new(rho.tanh(), 0.0);
        let w = BallPoint::new(coords)?;
        let spectral = kernel_from_spectral(&p, &origin, &w, &c.quad)?.value;
        let inputs = format!("rho={rho}");
        rows.push(ReportRow::compare(inputs, spectral, berezin_profile(&p, rho), Judge::Relative, c.tol));
    }
    Ok(Output::generic(rows))
}

/// `𝔅_m[φ](z)` by the pullback route, against the direct route.
pub fn apply(c: &Config) -> Result<Output> {
    let p = c.params()?;
    let z = BallPoint::new(c.z.clone())?;
    if z.dim() != p.n {
        return Err(Error::DimensionMismatch { left: p.n, right: z.dim() });
    }
    let rule = match c.rule {
        Rule::Grid => BallRule::Grid { angular: c.angular },
        Rule::MonteCarlo => BallRule::MonteCarlo {
            draws: c.draws,
            seed: c.seed,
        },
    };
    let one_row = |phi: &(dyn Fn(&BallPoint) -> f64 + Sync), inputs: String| -> Result<ReportRow> {
        let r = apply_berezin_routes(&p, &phi, &z, &c.quad, rule)?;
        let (value, reference, gap) = (r.pullback.value, r.direct.value, r.discrepancy());
        let mut row = ReportRow::new(inputs, value, reference, gap, Judge::Mixed, c.tol);
        if c.rule == Rule::MonteCarlo {
            // sampling noise of both estimates is allowed on top of the tolerance
            let noise = 5.0 * r.direct.abs_err.hypot(r.pullback.abs_err);
            row.pass = gap <= c.tol * reference.abs().max(1.0) + noise;
        }
        Ok(row)
    };
    let symbol = c.symbol.to_possible_value().expect("no skipped variants");
    let base = format!("symbol={};z={}", symbol.get_name(), show(&z));
    let rows = match c.symbol {
        Symbol::Constant => vec![one_row(&|_| 1.0, base)?],
        Symbol::Gaussian => vec![one_row(&|w| (-w.norm_sqr()).exp(), base)?],
        Symbol::Cosine => vec![one_row(&|w| (3.0 * w.coords()[0].re).cos(), base)?],
        Symbol::Spherical => {
            let origin = BallPoint::origin(p.n);
            let mut rows = Vec::new();
            for &lambda in &c.lambda_grid {
                let sph = RadialFunction::spherical(p.n, lambda)?;
                let phi = |w: &BallPoint| geodesic_distance(&origin, w).map(|d| sph.eval(d)).unwrap_or(f64::NAN);
                rows.push(one_row(&phi, format!("{base};lambda={}", float(lambda)))?);
            }
            rows
        }
    };
    Ok(Output::generic(rows))
}
