//! The generalized Berezin transform as an integral operator on the ball,
//! the spectral route to its kernel, and eigenfunction checks at `n = 1`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::berezin::{
    berezin_kernel, berezin_profile, eigenvalue, kernel_diagonal, multiplier_f, psi_density, reproducing_kernel, Params,
    ProfileEval,
};
use crate::error::{Error, Result};
use crate::fourier_jacobi::{jacobi_function_re, JacobiParams};
use crate::geometry::{
    from_geodesic_polar, geodesic_distance, jacobian_closed_form, measure_weight, radial_measure_density, sinh2_distance,
    transvection,
    BallPoint,
};
use crate::quadrature::{
    choose_truncation, choose_truncation_sampled, integrate_even_trapezoid, integrate_interval, integrate_interval_generic, ErrorSlot, Estimate,
    GaussLegendre, QuadratureSpec, Scalar,
};
use crate::special::{jacobi_poly, ln_gamma_real};

/// A real function of the geodesic radius.
#[derive(Clone)]
pub struct RadialFunction {
    evaluator: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    /// Exponential growth rate bound (`|f(ρ)| ≲ e^{decay_hint·ρ}`); informational.
    pub decay_hint: f64,
}

impl std::fmt::Debug for RadialFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialFunction").field("decay_hint", &self.decay_hint).finish()
    }
}

impl RadialFunction {
    pub fn new<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        RadialFunction {
            evaluator: Arc::new(f),
            decay_hint: 0.0,
        }
    }

    pub fn with_decay_hint(mut self, hint: f64) -> Self {
        self.decay_hint = hint;
        self
    }

    pub fn constant(c: f64) -> Self {
        RadialFunction::new(move |_| c)
    }

    /// The spherical function `ρ ↦ φ_λ^{(n-1,0)}(ρ)`.
    pub fn spherical(n: usize, lambda: f64) -> Result<Self> {
        let jp = JacobiParams::new(n as f64 - 1.0, 0.0, lambda)?;
        Ok(RadialFunction::new(move |rho| jacobi_function_re(&jp, rho).unwrap_or(f64::NAN)))
    }

    pub fn eval(&self, rho: f64) -> f64 {
        (self.evaluator)(rho)
    }
}

/// `𝔅_m[φ](0)` for a radial symbol:
/// `∫_0^∞ B_m(ρ) φ(ρ) (2πⁿ/Γ(n)) sinh^{2n-1}ρ cosh ρ dρ`.
pub fn apply_berezin_radial(p: &Params, phi: &RadialFunction, q: &QuadratureSpec) -> Result<Estimate> {
    let integrand = |rho: f64| -> f64 {
        let b = berezin_profile(p, rho);
        if b == 0.0 {
            return 0.0;
        }
        let v = phi.eval(rho);
        if v == 0.0 {
            return 0.0;
        }
        b * v * radial_measure_density(p.n, rho)
    };
    let upper = choose_truncation(&integrand, q)?;
    integrate_interval(&integrand, 0.0, upper, q)
}

/// How the ball integral in [`apply_berezin_at`] is discretized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BallRule {
    /// Geodesic-polar tensor grid (`n ∈ {1, 2}`): Gauss-Legendre panels in
    /// the radius, trapezoid in the angles, Gauss-Legendre in the Hopf
    /// angle for `n = 2`. Angular resolution is doubled from `angular`
    /// until stable.
    Grid { angular: usize },
    /// Seeded Monte Carlo with radii drawn from the kernel mass and
    /// uniform directions; any `n`.
    MonteCarlo { draws: usize, seed: u64 },
}

impl BallRule {
    /// Grid for `n ≤ 2`, otherwise 20 000 Monte Carlo draws with seed 0.
    pub fn default_for(n: usize) -> Self {
        if n <= 2 {
            BallRule::Grid { angular: 16 }
        } else {
            BallRule::MonteCarlo { draws: 20_000, seed: 0 }
        }
    }
}

/// Values of `𝔅_m[φ](z)` by the two integration routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RouteValues {
    /// `∫ B_m(z,w) φ(w) (1-|w|²)^{-n-1} dV(w)`.
    pub direct: Estimate,
    /// `∫ B_m(0,ξ) φ(φ_z(ξ)) (1-|ξ|²)^{-n-1} dV(ξ)` with `φ_z` the transvection.
    pub pullback: Estimate,
}

impl RouteValues {
    pub fn discrepancy(&self) -> f64 {
        (self.direct.value - self.pullback.value).abs()
    }
}

const MAX_ANGULAR: usize = 1024;
/// Beyond this geodesic radius `1-|w|²` has fewer than nine significant
/// digits left.
const GRID_MAX_RADIUS: f64 = 11.0;
/// Angular refinement stops at this fraction of the radial tolerance.
const ANGULAR_TOL_FRACTION: f64 = 0.1;

/// Evaluates `𝔅_m[φ](z)` by both routes.
pub fn apply_berezin_routes<F: Fn(&BallPoint) -> f64 + Sync>(
    p: &Params,
    phi: &F,
    z: &BallPoint,
    q: &QuadratureSpec,
    rule: BallRule,
) -> Result<RouteValues> {
    if z.dim() != p.n {
        return Err(Error::DimensionMismatch { left: p.n, right: z.dim() });
    }
    match rule {
        BallRule::Grid { angular } => {
            if p.n > 2 {
                return Err(Error::InvalidParams(format!(
                    "tensor-grid quadrature supports n = 1 or 2, got n = {}",
                    p.n
                )));
            }
            if angular < 4 {
                return Err(Error::InvalidParams(format!("angular resolution must be >= 4, got {angular}")));
            }
            let profile = ProfileEval::new(p);
            let direct = grid_integral(p.n, q, angular, |_| 1.0, |w| Ok(profile.at_sinh2(sinh2_distance(z, w)?) * phi(w)))?;
            // B_m(0, ξ) is constant on each sphere
            let pullback = grid_integral(p.n, q, angular, |rho| berezin_profile(p, rho), |xi| Ok(phi(&transvection(z, xi)?)))?;
            Ok(RouteValues { direct, pullback })
        }
        BallRule::MonteCarlo { draws, seed } => monte_carlo_routes(p, phi, z, q, draws, seed),
    }
}

/// `𝔅_m[φ](z)`, failing with [`Error::RouteDisagreement`] when the two
/// routes differ by more than `route_tol · max(1, |value|)` (for Monte Carlo,
/// additionally five combined standard errors).
pub fn apply_berezin_at<F: Fn(&BallPoint) -> f64 + Sync>(
    p: &Params,
    phi: &F,
    z: &BallPoint,
    q: &QuadratureSpec,
    rule: BallRule,
    route_tol: f64,
) -> Result<f64> {
    let r = apply_berezin_routes(p, phi, z, q, rule)?;
    let mut allowed = route_tol * r.pullback.value.abs().max(1.0);
    if matches!(rule, BallRule::MonteCarlo { .. }) {
        allowed += 5.0 * r.direct.abs_err.hypot(r.pullback.abs_err);
    }
    if r.discrepancy() > allowed {
        return Err(Error::RouteDisagreement {
            direct: r.direct.value,
            pullback: r.pullback.value,
        });
    }
    Ok(r.pullback.value)
}

/// `∫ r(ρ(w)) g(w) (1-|w|²)^{-n-1} dV(w)` over the ball on a
/// geodesic-polar grid, with `r` a radial factor.
fn grid_integral<R: Fn(f64) -> f64, G: Fn(&BallPoint) -> Result<f64>>(
    n: usize,
    q: &QuadratureSpec,
    angular: usize,
    r: R,
    g: G,
) -> Result<Estimate> {
    let slot = ErrorSlot::new();
    let radial = |rho: f64| -> f64 {
        let weight = r(rho);
        if weight == 0.0 {
            return 0.0;
        }
        let sph = slot.catch(sphere_average(n, rho, angular, ANGULAR_TOL_FRACTION * q.tol, &g));
        if sph == 0.0 {
            return 0.0;
        }
        weight * sph * radial_measure_density(n, rho)
    };
    let capped = |rho: f64| if rho > GRID_MAX_RADIUS { 0.0 } else { radial(rho) };
    // sphere averages are smooth in ρ and costly, so scan coarsely
    let upper = slot.check(choose_truncation_sampled(&capped, q, 8.0))?.min(GRID_MAX_RADIUS);
    // each node is a whole sphere average; start the panel refinement coarse
    let coarse = QuadratureSpec { panels: 4, ..*q };
    let mut est = slot.check(integrate_interval(&radial, 0.0, upper, &coarse))?;
    if upper == GRID_MAX_RADIUS {
        // past the cap, extrapolate the local exponential decay, doubled
        // since the decay rate is only estimated
        let f1 = radial(upper).abs();
        let f0 = radial(upper - 0.5).abs();
        slot.check(Ok(()))?;
        est.abs_err += if f0 > f1 && f1 > 0.0 { f1 / (f0 / f1).ln() } else { 2.0 * f1 * upper };
    }
    Ok(est)
}

/// Average of `g(tanh(ρ) ζ)` over the unit sphere `ζ ∈ S^{2n-1}`.
fn sphere_average<G: Fn(&BallPoint) -> Result<f64>>(n: usize, rho: f64, angular: usize, tol: f64, g: &G) -> Result<f64> {
    let mut k = angular;
    let (mut prev, _) = sphere_average_fixed(n, rho, k, g)?;
    while k < MAX_ANGULAR {
        k *= 2;
        let (cur, cur_abs) = sphere_average_fixed(n, rho, k, g)?;
        // measured against the average of |g|, since the signed average may
        // vanish; 1-|w|² = sech²ρ loses digits, which sets a noise floor.
        // Both rules converge geometrically on analytic integrands, so the
        // finer level's error is about the square of the relative change.
        let floor = 64.0 * f64::EPSILON * rho.cosh().powi(2);
        let scale = cur_abs.max(f64::MIN_POSITIVE);
        let change = (cur - prev).abs() / scale;
        if change * change <= 0.01 * tol || change <= tol + floor || cur == prev {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NonConvergence(format!(
        "angular quadrature at radius {rho} not converged with {k} nodes"
    )))
}

fn sphere_average_fixed<G: Fn(&BallPoint) -> Result<f64>>(n: usize, rho: f64, k: usize, g: &G) -> Result<(f64, f64)> {
    let step = 2.0 * PI / k as f64;
    match n {
        1 => {
            let (mut s, mut a) = (0.0, 0.0);
            for i in 0..k {
                let dir = [Complex64::from_polar(1.0, step * i as f64)];
                let v = g(&from_geodesic_polar(rho, &dir)?)?;
                s += v;
                a += v.abs();
            }
            Ok((s / k as f64, a / k as f64))
        }
        2 => {
            // ζ = (cos η e^{iθ₁}, sin η e^{iθ₂}), dσ ∝ cos η sin η dη dθ₁ dθ₂
            // averaged over the torus, the integrand is analytic in sin²η,
            // so fewer Hopf nodes than torus nodes suffice
            let rule = GaussLegendre::new((k / 4).max(4));
            let (mut s, mut a) = (0.0, 0.0);
            for (x, wgt) in rule.nodes.iter().zip(&rule.weights) {
                let eta = PI / 4.0 * (x + 1.0);
                let ew = wgt * PI / 4.0 * eta.cos() * eta.sin();
                let (mut inner_sum, mut inner_abs) = (0.0, 0.0);
                for i in 0..k {
                    for j in 0..k {
                        let dir = [
                            Complex64::from_polar(eta.cos(), step * i as f64),
                            Complex64::from_polar(eta.sin(), step * j as f64),
                        ];
                        let v = g(&from_geodesic_polar(rho, &dir)?)?;
                        inner_sum += v;
                        inner_abs += v.abs();
                    }
                }
                s += ew * inner_sum;
                a += ew * inner_abs;
            }
            // ∫ cos η sin η dη over [0, π/2] is 1/2
            let norm = 2.0 / (k * k) as f64;
            Ok((norm * s, norm * a))
        }
        _ => unreachable!("grid quadrature is limited to n <= 2"),
    }
}

fn monte_carlo_routes<F: Fn(&BallPoint) -> f64>(
    p: &Params,
    phi: &F,
    z: &BallPoint,
    q: &QuadratureSpec,
    draws: usize,
    seed: u64,
) -> Result<RouteValues> {
    if draws < 2 {
        return Err(Error::InvalidParams(format!("Monte Carlo needs at least 2 draws, got {draws}")));
    }
    let n = p.n;
    // Tabulate the radial kernel mass and sample radii by inverse CDF.
    let mass_density = |rho: f64| berezin_profile(p, rho) * radial_measure_density(n, rho);
    let upper = choose_truncation(&mass_density, q)?;
    let cells = 4096;
    let h = upper / cells as f64;
    let mut cdf = Vec::with_capacity(cells + 1);
    cdf.push(0.0);
    let mut acc = 0.0;
    for i in 0..cells {
        let (a, b) = (h * i as f64, h * (i + 1) as f64);
        acc += 0.5 * h * (mass_density(a) + mass_density(b));
        cdf.push(acc);
    }
    let total = acc;
    let origin = BallPoint::origin(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut direct = Welford::default();
    let mut pullback = Welford::default();
    for _ in 0..draws {
        let u: f64 = rng.gen::<f64>() * total;
        let idx = cdf.partition_point(|&c| c < u).clamp(1, cells);
        let (c0, c1) = (cdf[idx - 1], cdf[idx]);
        let frac = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.5 };
        let rho = h * (idx as f64 - 1.0 + frac);
        let dir = random_direction(n, &mut rng);
        let xi = from_geodesic_polar(rho, &dir)?;
        // sampling density of ξ against (1-|ξ|²)^{-n-1} dV, up to the trapezoid tabulation
        let density = mass_density(rho) / (total * radial_measure_density(n, rho));
        if !(density > 0.0) {
            continue;
        }
        let w = transvection(z, &xi)?;
        pullback.push(berezin_profile(p, geodesic_distance(&origin, &xi)?) * phi(&w) / density);
        // the same draw read as a sample of w: the invariant measure is
        // preserved, which the Jacobian makes explicit. φ_z(ξ) is the
        // involution at z applied to -ξ.
        let jac = jacobian_closed_form(z, &xi.neg())? * measure_weight(&w) / measure_weight(&xi);
        direct.push(berezin_kernel(p, z, &w)? * phi(&w) * jac / density);
    }
    Ok(RouteValues {
        direct: direct.estimate(),
        pullback: pullback.estimate(),
    })
}

fn random_direction(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| Complex64::new(gaussian(rng), gaussian(rng))).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

#[derive(Default)]
struct Welford {
    count: usize,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    fn estimate(&self) -> Estimate {
        let var = if self.count > 1 { self.m2 / (self.count - 1) as f64 } else { 0.0 };
        Estimate {
            value: self.mean,
            abs_err: (var / self.count.max(1) as f64).sqrt(),
        }
    }
}

/// Eigenfunction `ψ_{p,q}` of the `m`-th Landau level at `n = 1`:
/// `(1-|z|²)^{ν-m} P_{m-q}^{(p+q, 2(ν-m)-1)}(1-2|z|²) z^p z̄^q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenfunction1D {
    pub p: usize,
    pub q: usize,
    pub params: Params,
}

impl Eigenfunction1D {
    /// Requires `n = 1`, `q ≤ m`, and `p = 0` or `q = 0` (the only
    /// monomials `z^p z̄^q` that are harmonic in one variable).
    pub fn new(p: usize, q: usize, params: Params) -> Result<Self> {
        if params.n != 1 {
            return Err(Error::InvalidParams(format!(
                "eigenfunctions are available for n = 1 only, got n = {}",
                params.n
            )));
        }
        if q > params.m {
            return Err(Error::InvalidParams(format!("q must satisfy q <= m (got q = {q}, m = {})", params.m)));
        }
        if p > 0 && q > 0 {
            return Err(Error::InvalidParams(format!(
                "z^p conj(z)^q is harmonic only when p = 0 or q = 0 (got p = {p}, q = {q})"
            )));
        }
        Ok(Eigenfunction1D { p, q, params })
    }
}

/// `ψ_{p,q}(z)`.
pub fn eigenfunction_value(e: &Eigenfunction1D, z: &BallPoint) -> Result<Complex64> {
    if z.dim() != 1 {
        return Err(Error::DimensionMismatch { left: 1, right: z.dim() });
    }
    let zz = z.coords()[0];
    Ok(eigenfunction_at(e, zz))
}

fn eigenfunction_at(e: &Eigenfunction1D, zz: Complex64) -> Complex64 {
    let pr = &e.params;
    let r2 = zz.norm_sqr();
    let (m, p, q) = (pr.m, e.p, e.q);
    let radial = (1.0 - r2).powf(pr.nu - m as f64)
        * jacobi_poly(m - q, (p + q) as f64, pr.two_nu_m() - 1.0, 1.0 - 2.0 * r2);
    radial * zz.powu(p as u32) * zz.conj().powu(q as u32)
}

/// Closed-form `‖ψ_{p,q}‖²` in `L²((1-|z|²)^{-n-1} dV)`:
/// `πⁿ Γ(n+m+p) Γ(2ν-n-m-q+1) / (n! (2(ν-m)-n) (m-q)! Γ(2ν-m+p))`.
pub fn eigenfunction_norm_sq(e: &Eigenfunction1D) -> f64 {
    let pr = &e.params;
    let (n, m, p, q, nu) = (pr.n as f64, pr.m as f64, e.p as f64, e.q as f64, pr.nu);
    let lg = |x: f64| ln_gamma_real(x).expect("positive on the admissible set");
    let ln = n * PI.ln() + lg(n + m + p) + lg(2.0 * nu - n - m - q + 1.0) - lg(n + 1.0) - lg(m - q + 1.0) - lg(2.0 * nu - m + p);
    ln.exp() / (pr.two_nu_m() - n)
}

/// Integrand value paired with a magnitude bound, so that refinement of an
/// integral that vanishes by symmetry still has a scale to converge against.
#[derive(Debug, Clone, Copy)]
struct WithScale {
    value: Complex64,
    scale: f64,
}

impl std::ops::Add for WithScale {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        WithScale { value: self.value + o.value, scale: self.scale + o.scale }
    }
}

impl std::ops::Sub for WithScale {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        WithScale { value: self.value - o.value, scale: self.scale - o.scale }
    }
}

impl std::ops::Mul<f64> for WithScale {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        WithScale { value: self.value * k, scale: self.scale * k }
    }
}

impl Scalar for WithScale {
    fn zero() -> Self {
        WithScale { value: Complex64::new(0.0, 0.0), scale: 0.0 }
    }
    fn magnitude(self) -> f64 {
        self.value.norm() + self.scale.abs()
    }
}

/// `⟨ψ₁, ψ₂⟩ = ∫ ψ₁ conj(ψ₂) (1-|z|²)^{-2} dV` by geodesic-polar quadrature.
pub fn eigenfunction_inner(a: &Eigenfunction1D, b: &Eigenfunction1D, q: &QuadratureSpec) -> Result<Complex64> {
    // angular integrand is a trigonometric polynomial of degree ≤ p+q+p'+q'
    let k = 4 * (a.p + a.q + b.p + b.q) + 16;
    let radial = |rho: f64| -> WithScale {
        let r = rho.tanh();
        let mut acc = WithScale::zero();
        for i in 0..k {
            let zz = Complex64::from_polar(r, 2.0 * PI * i as f64 / k as f64);
            let (fa, fb) = (eigenfunction_at(a, zz), eigenfunction_at(b, zz));
            // (|ψ₁|² + |ψ₂|²)/2 is smooth where |ψ₁ψ₂| has kinks at radial nodes
            acc = acc + WithScale { value: fa * fb.conj(), scale: 0.5 * (fa.norm_sqr() + fb.norm_sqr()) };
        }
        acc * ((2.0 * PI / k as f64) * rho.sinh() * rho.cosh())
    };
    let upper = choose_truncation(&radial, q)?;
    integrate_interval_generic(&radial, 0.0, upper, q).map(|(v, _)| v.value)
}

/// `H_ν f(z)` by central differences in the real coordinates with one
/// Richardson level, where
/// `H_ν = -4(1-|z|²){Σ(δ_ij - z_i z̄_j)∂_i∂̄_j + ν Σ(z_j∂_j - z̄_j∂̄_j) + ν²} + 4ν²`.
pub fn magnetic_operator_apply<F: Fn(&BallPoint) -> Complex64>(
    p: &Params,
    f: &F,
    z: &BallPoint,
    step: f64,
) -> Result<Complex64> {
    if z.dim() != p.n {
        return Err(Error::DimensionMismatch { left: p.n, right: z.dim() });
    }
    if !(step >= 1e-6 && step <= 0.05) {
        return Err(Error::BadStep(step));
    }
    let n = p.n;
    let nu = p.nu;
    let d1 = wirtinger(f, z, step)?;
    let d2 = wirtinger(f, z, 2.0 * step)?;
    let rich = |a: Complex64, b: Complex64| (a * 4.0 - b) / 3.0;
    let zc = z.coords();
    let r2 = z.norm_sqr();
    let mut second = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let delta = if i == j { 1.0 } else { 0.0 };
            let coef = Complex64::new(delta, 0.0) - zc[i] * zc[j].conj();
            second += coef * rich(d1.mixed[i][j], d2.mixed[i][j]);
        }
    }
    let mut first = Complex64::new(0.0, 0.0);
    for j in 0..n {
        first += zc[j] * rich(d1.dz[j], d2.dz[j]) - zc[j].conj() * rich(d1.dzb[j], d2.dzb[j]);
    }
    let f0 = f(z);
    Ok(-4.0 * (1.0 - r2) * (second + nu * first + nu * nu * f0) + 4.0 * nu * nu * f0)
}

struct Wirtinger {
    dz: Vec<Complex64>,
    dzb: Vec<Complex64>,
    /// `∂_i ∂̄_j f`.
    mixed: Vec<Vec<Complex64>>,
}

fn wirtinger<F: Fn(&BallPoint) -> Complex64>(f: &F, z: &BallPoint, h: f64) -> Result<Wirtinger> {
    let n = z.dim();
    let dim = 2 * n;
    let at = |shifts: &[(usize, f64)]| -> Result<Complex64> {
        let mut c = z.coords().to_vec();
        for &(k, s) in shifts {
            if k % 2 == 0 {
                c[k / 2].re += s;
            } else {
                c[k / 2].im += s;
            }
        }
        let pt = BallPoint::new(c).map_err(|_| Error::BadStep(h))?;
        Ok(f(&pt))
    };
    let f0 = f(z);
    let mut grad = vec![Complex64::new(0.0, 0.0); dim];
    let mut hess = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for a in 0..dim {
        let fp = at(&[(a, h)])?;
        let fm = at(&[(a, -h)])?;
        grad[a] = (fp - fm) / (2.0 * h);
        hess[a][a] = (fp - f0 * 2.0 + fm) / (h * h);
        for b in (a + 1)..dim {
            let v = (at(&[(a, h), (b, h)])? - at(&[(a, h), (b, -h)])? - at(&[(a, -h), (b, h)])? + at(&[(a, -h), (b, -h)])?)
                / (4.0 * h * h);
            hess[a][b] = v;
            hess[b][a] = v;
        }
    }
    let i = Complex64::i();
    let dz = (0..n).map(|k| (grad[2 * k] - i * grad[2 * k + 1]) * 0.5).collect();
    let dzb = (0..n).map(|k| (grad[2 * k] + i * grad[2 * k + 1]) * 0.5).collect();
    let mixed = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let (xa, ya, xb, yb) = (2 * a, 2 * a + 1, 2 * b, 2 * b + 1);
                    (hess[xa][xb] + i * hess[xa][yb] - i * hess[ya][xb] + hess[ya][yb]) * 0.25
                })
                .collect()
        })
        .collect();
    Ok(Wirtinger { dz, dzb, mixed })
}

/// `H_ν ψ - ε_m ψ` relative to `|ψ(z)|` (absolute when `ψ(z) = 0`).
pub fn eigen_residual(e: &Eigenfunction1D, z: &BallPoint, step: f64) -> Result<f64> {
    let f = |w: &BallPoint| eigenfunction_at(e, w.coords()[0]);
    let h = magnetic_operator_apply(&e.params, &f, z, step)?;
    let psi = f(z);
    let res = (h - psi * eigenvalue(&e.params)).norm();
    Ok(if psi.norm() > 0.0 { res / psi.norm() } else { res })
}

/// `∫ K_m(z,w) f(w) (1-|w|²)^{-2} dV(w)` at `n = 1` by geodesic-polar quadrature.
pub fn reproduce(kernel: &Params, f: &Eigenfunction1D, z: &BallPoint, q: &QuadratureSpec) -> Result<Complex64> {
    if kernel.n != 1 {
        return Err(Error::InvalidParams("reproducing check is implemented for n = 1".into()));
    }
    if z.dim() != 1 {
        return Err(Error::DimensionMismatch { left: 1, right: z.dim() });
    }
    let k = 256;
    let slot = ErrorSlot::new();
    // (c|K|² + |ψ|²/c)/2 ≥ |Kψ| is smooth and integrates to the
    // Cauchy-Schwarz bound √(K(z,z)‖ψ‖²)
    let c = (eigenfunction_norm_sq(f) / kernel_diagonal(kernel)).sqrt();
    let nan = WithScale { value: Complex64::new(f64::NAN, 0.0), scale: f64::NAN };
    let radial = |rho: f64| -> WithScale {
        let r = rho.tanh();
        let mut s = WithScale::zero();
        for i in 0..k {
            let wz = Complex64::from_polar(r, 2.0 * PI * i as f64 / k as f64);
            let w = match BallPoint::scalar(wz) {
                Ok(w) => w,
                Err(e) => {
                    slot.catch(Err(e));
                    return nan;
                }
            };
            let kv = match reproducing_kernel(kernel, z, &w) {
                Ok(v) => v,
                Err(e) => {
                    slot.catch(Err(e));
                    return nan;
                }
            };
            let fv = eigenfunction_at(f, wz);
            s = s + WithScale { value: kv * fv, scale: 0.5 * (c * kv.norm_sqr() + fv.norm_sqr() / c) };
        }
        s * ((2.0 * PI / k as f64) * rho.sinh() * rho.cosh())
    };
    let upper = slot.check(choose_truncation(&radial, q))?;
    slot.check(integrate_interval_generic(&radial, 0.0, upper, q)).map(|(v, _)| v.value)
}

/// Relative error `|∫K_m(z,·)ψ - ψ(z)| / |ψ(z)|` (absolute when `ψ(z) = 0`),
/// using the kernel of `e`'s own Landau level.
pub fn reproducing_check(p: &Params, e: &Eigenfunction1D, z: &BallPoint, q: &QuadratureSpec) -> Result<f64> {
    let got = reproduce(p, e, z, q)?;
    let want = eigenfunction_value(e, z)?;
    let err = (got - want).norm();
    Ok(if want.norm() > 0.0 { err / want.norm() } else { err })
}

/// `∫_0^∞ Ψ(z,w;λ) f_m(λ) dλ`, which reconstructs `B_m(z,w)`.
pub fn kernel_from_spectral(p: &Params, z: &BallPoint, w: &BallPoint, q: &QuadratureSpec) -> Result<Estimate> {
    if z.dim() != p.n {
        return Err(Error::DimensionMismatch { left: p.n, right: z.dim() });
    }
    let d = geodesic_distance(z, w)?;
    let jp_alpha = p.n as f64 - 1.0;
    let integrand = |lambda: f64| -> Result<f64> {
        let dens = psi_density(p.n, lambda)?;
        if dens == 0.0 {
            return Ok(0.0);
        }
        let jp = JacobiParams::new(jp_alpha, 0.0, lambda)?;
        Ok(dens * jacobi_function_re(&jp, d)? * multiplier_f(p, lambda)?)
    };
    integrate_even_trapezoid(&integrand, q)
}
