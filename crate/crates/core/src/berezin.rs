//! Landau levels, reproducing and Berezin kernels, and the closed-form
//! spectral multiplier of the generalized Berezin transform.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier_jacobi::{forward_transform, jacobi_function_re, plancherel_density, JacobiParams};
use crate::geometry::{cosh2_distance, inner, sinh2_distance, BallPoint};
use crate::quadrature::{Estimate, QuadratureSpec};
use crate::special::{hyp_3f2_unit, jacobi_poly, ln_gamma_real, log_gamma};
use crate::twofold::Twofold;

/// Residual imaginary parts of the multiplier above this (relative to the
/// magnitude of its terms) are reported as errors.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-10;

/// Dimension `n`, field strength `ν` and Landau level `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub n: usize,
    pub nu: f64,
    pub m: usize,
}

impl Params {
    /// Requires `n ≥ 1`, `ν > n/2` and `m < ν - n/2`.
    pub fn new(n: usize, nu: f64, m: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("dimension n must be at least 1".into()));
        }
        if !nu.is_finite() {
            return Err(Error::InvalidParams(format!("nu must be finite, got {nu}")));
        }
        let half = n as f64 / 2.0;
        if !(nu > half) {
            return Err(Error::InvalidParams(format!(
                "nu must satisfy nu > n/2 (got nu = {nu}, n/2 = {half})"
            )));
        }
        if !((m as f64) < nu - half) {
            return Err(Error::InvalidParams(format!(
                "Landau level must satisfy m < nu - n/2 (got m = {m}, nu - n/2 = {})",
                nu - half
            )));
        }
        Ok(Params { n, nu, m })
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }

    fn mf(&self) -> f64 {
        self.m as f64
    }

    /// `2(ν - m)`.
    pub fn two_nu_m(&self) -> f64 {
        2.0 * (self.nu - self.mf())
    }

    /// Jacobi indices `(n-1, 2(ν-m)-n)` of the kernel polynomial.
    pub fn jacobi_indices(&self) -> (f64, f64) {
        (self.nf() - 1.0, self.two_nu_m() - self.nf())
    }
}

fn ln_factorial(k: usize) -> f64 {
    ln_gamma_real(k as f64 + 1.0).expect("positive argument")
}

fn lg(x: f64) -> f64 {
    ln_gamma_real(x).expect("argument is positive on the admissible set")
}

/// Landau level `ε_m = 4ν(2m+n) - 4m(m+n)`.
pub fn eigenvalue(p: &Params) -> f64 {
    let (n, m) = (p.nf(), p.mf());
    4.0 * p.nu * (2.0 * m + n) - 4.0 * m * (m + n)
}

/// Kernel constant `(2(ν-m)-n) Γ(2ν-m) / (πⁿ Γ(2ν-m-n+1))`.
pub fn gamma_coeff(p: &Params) -> f64 {
    let (n, m, nu) = (p.nf(), p.mf(), p.nu);
    let ln = lg(2.0 * nu - m) - n * PI.ln() - lg(2.0 * nu - m - n + 1.0);
    (p.two_nu_m() - n) * ln.exp()
}

/// `P_m^{(n-1, 2(ν-m)-n)}(1 - 2tanh²d)` with `s2 = sinh²d`.
fn kernel_poly(p: &Params, s2: f64) -> f64 {
    let (a, b) = p.jacobi_indices();
    jacobi_poly(p.m, a, b, (1.0 - s2) / (1.0 + s2))
}

/// Reproducing kernel of the `m`-th Landau level:
/// `γ · phase^ν · cosh^{-2(ν-m)}d · P_m^{(n-1,2(ν-m)-n)}(1 - 2tanh²d)` with
/// `phase = (1 - conj⟨z,w⟩)/(1 - ⟨z,w⟩)`.
pub fn reproducing_kernel(p: &Params, z: &BallPoint, w: &BallPoint) -> Result<Complex64> {
    check_dim(p, z)?;
    let u = inner(z, w)?;
    let one_minus = Complex64::new(1.0, 0.0) - u;
    // phase = e^{-2i arg(1-u)}, and Re(1-u) > 0 on the ball
    let phase_nu = Complex64::from_polar(1.0, -2.0 * p.nu * one_minus.arg());
    let s2 = sinh2_distance(z, w)?;
    let modulus = gamma_coeff(p) * (1.0 + s2).powf(-(p.nu - p.mf())) * kernel_poly(p, s2);
    Ok(phase_nu * modulus)
}

fn check_dim(p: &Params, z: &BallPoint) -> Result<()> {
    if z.dim() != p.n {
        return Err(Error::DimensionMismatch {
            left: p.n,
            right: z.dim(),
        });
    }
    Ok(())
}

/// `K_m(z, z) = γ (n)_m / m!`, independent of `z`.
pub fn kernel_diagonal(p: &Params) -> f64 {
    let (n, m) = (p.nf(), p.m);
    gamma_coeff(p) * (lg(n + m as f64) - lg(n) - ln_factorial(m)).exp()
}

/// Berezin kernel `B_m(z, w) = |K_m(z,w)|² / K_m(z,z)`.
pub fn berezin_kernel(p: &Params, z: &BallPoint, w: &BallPoint) -> Result<f64> {
    let k = reproducing_kernel(p, z, w)?;
    let kzz = reproducing_kernel(p, z, z)?;
    Ok(k.norm_sqr() / kzz.re)
}

/// `B_m` as a function of the geodesic distance `ρ`:
/// `(m! Γ(n)/Γ(n+m)) γ cosh^{-4(ν-m)}ρ (P_m(1 - 2tanh²ρ))²`.
pub fn berezin_profile(p: &Params, rho: f64) -> f64 {
    let sh = rho.sinh();
    berezin_profile_sinh2(p, sh * sh)
}

fn berezin_profile_sinh2(p: &Params, s2: f64) -> f64 {
    ProfileEval::new(p).at_sinh2(s2)
}

/// [`berezin_profile`] with the Gamma-function prefactor computed once,
/// for integrands that sample the profile many times.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ProfileEval {
    params: Params,
    pre: f64,
}

impl ProfileEval {
    pub(crate) fn new(p: &Params) -> Self {
        let (n, m) = (p.nf(), p.m);
        let pre = (ln_factorial(m) + lg(n) - lg(n + m as f64)).exp() * gamma_coeff(p);
        ProfileEval { params: *p, pre }
    }

    pub(crate) fn at_sinh2(&self, s2: f64) -> f64 {
        let poly = kernel_poly(&self.params, s2);
        self.pre * (1.0 + s2).powf(-self.params.two_nu_m()) * poly * poly
    }
}

/// [`berezin_kernel`] through the distance-only closed form.
pub fn berezin_kernel_explicit(p: &Params, z: &BallPoint, w: &BallPoint) -> Result<f64> {
    check_dim(p, z)?;
    let c2 = cosh2_distance(z, w)?;
    Ok(berezin_profile_sinh2(p, c2 - 1.0))
}

/// Radial profile `h(ρ) = 4π^{n+1} Γ(n) B_m(ρ)` whose Fourier-Jacobi
/// transform gives the multiplier.
pub fn radial_profile_h(p: &Params, rho: f64) -> f64 {
    let n = p.nf();
    4.0 * PI.powf(n + 1.0) * lg(n).exp() * berezin_profile(p, rho)
}

/// `2π · 2^{2n} Γ(n)²`, the factor between the transform of `h` and the
/// multiplier.
pub fn transform_normalization(n: usize) -> f64 {
    let nf = n as f64;
    2.0 * PI * (2.0 * nf * std::f64::consts::LN_2 + 2.0 * lg(nf)).exp()
}

/// Coefficient `A_j`, `0 ≤ j ≤ 2m`, of the expansion of the squared kernel
/// polynomial in powers of `2tanh²ρ`:
/// `A_j = 2^{-j} Σ_p (m!)² Γ(2ν-m+p) Γ(2ν-m+j-p) /
///   ((j-p)! (m+p-j)! p! (m-p)! Γ(n+j-p) Γ(n+p))`.
pub fn multiplier_coeff_a(p: &Params, j: usize) -> Result<f64> {
    let m = p.m;
    if j > 2 * m {
        return Err(Error::IndexOutOfRange { index: j, max: 2 * m });
    }
    let (n, two_nu) = (p.nf(), 2.0 * p.nu);
    let lo = j.saturating_sub(m);
    let hi = m.min(j);
    let mut sum = 0.0;
    for q in lo..=hi {
        let ln_term = 2.0 * ln_factorial(m) + lg(two_nu - m as f64 + q as f64) + lg(two_nu - m as f64 + (j - q) as f64)
            - ln_factorial(j - q)
            - ln_factorial(m + q - j)
            - ln_factorial(q)
            - ln_factorial(m - q)
            - lg(n + (j - q) as f64)
            - lg(n + q as f64);
        sum += ln_term.exp();
    }
    Ok(sum * 0.5_f64.powi(j as i32))
}

/// `(P_m^{(n-1,2(ν-m)-n)}((1-x)/(1+x)))²` through the `A_j` expansion:
/// `Γ(n+m)² / ((m!)² Γ(2ν-m)²) Σ_j (-1)^j A_j (2x/(1+x))^j`.
///
/// The alternating sum cancels by many orders of magnitude, so the scaled
/// coefficients are formed as exact Pochhammer products and summed in
/// double-double arithmetic.
pub fn jacobi_square_expansion(p: &Params, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::InvalidParams(format!("x must be >= 0, got {x}")));
    }
    let xt = Twofold::from(x);
    let y = Twofold::from(2.0) * xt / (Twofold::ONE + xt);
    let mut sum = Twofold::ZERO;
    for j in 0..=2 * p.m {
        let term = scaled_coeff_a(p, j) * y.powi(j as u32);
        sum = if j % 2 == 0 { sum + term } else { sum - term };
    }
    Ok(sum.to_f64())
}

/// `Γ(n+m)² / ((m!)² Γ(2ν-m)²) · A_j`, written as
/// `2^{-j} Σ_p C(m,p) C(m,j-p) (n+p)_{m-p} (n+j-p)_{m-j+p} (2ν-m)_p (2ν-m)_{j-p} / (m!)²`.
fn scaled_coeff_a(p: &Params, j: usize) -> Twofold {
    let (n, m) = (p.nf(), p.m);
    let base = 2.0 * p.nu - m as f64;
    let rising = |a: f64, k: usize| (0..k).fold(Twofold::ONE, |acc, i| acc * Twofold::from(a + i as f64));
    let binom = |k: usize| rising(k as f64 + 1.0, m - k) / rising(1.0, m - k);
    let mut sum = Twofold::ZERO;
    for q in j.saturating_sub(m)..=m.min(j) {
        let r = j - q;
        sum = sum
            + binom(q) * binom(r) * rising(n + q as f64, m - q) * rising(n + r as f64, m - r)
                / (rising(1.0, m) * rising(1.0, m))
                * rising(base, q)
                * rising(base, r);
    }
    sum * Twofold::from(0.5_f64.powi(j as i32))
}

/// Closed form of the radial integral
/// `I_j(λ) = B(n+j, 2(ν-m) + (iλ-n)/2) ·
///   ₃F₂(a, n+j, a; a + 2(ν-m) + j, n; 1)`, `a = (n+iλ)/2`.
pub fn i_integral_closed(p: &Params, j: usize, lambda: f64) -> Result<Complex64> {
    if j > 2 * p.m {
        return Err(Error::IndexOutOfRange { index: j, max: 2 * p.m });
    }
    let (n, jf) = (p.nf(), j as f64);
    let il = Complex64::new(0.0, lambda);
    let a = (il + n) * 0.5;
    let second = (il - n) * 0.5 + p.two_nu_m();
    let ln_beta = lg(n + jf) + log_gamma(second)? - log_gamma(second + n + jf)?;
    let f = hyp_3f2_unit(
        a,
        Complex64::new(n + jf, 0.0),
        a,
        a + p.two_nu_m() + jf,
        Complex64::new(n, 0.0),
    )?;
    Ok(ln_beta.exp() * f.value)
}

/// Prefactor `(2(ν-m)-n) Γ(n+m) / (m! Γ(2ν-n-m+1) Γ(2ν-m))`.
pub fn multiplier_prefactor(p: &Params) -> f64 {
    let (n, m, nu) = (p.nf(), p.mf(), p.nu);
    let ln = lg(n + m) - ln_factorial(p.m) - lg(2.0 * nu - n - m + 1.0) - lg(2.0 * nu - m);
    (p.two_nu_m() - n) * ln.exp()
}

/// Closed-form spectral multiplier
/// `f_m(λ) = C Σ_{j=0}^{2m} (-2)^j A_j I_j(λ)`.
///
/// The chain is complex; an imaginary part above
/// [`IMAGINARY_RESIDUE_TOL`] times the largest term is an error.
pub fn multiplier_f(p: &Params, lambda: f64) -> Result<f64> {
    multiplier_f_complex(p, lambda).map(|(v, _)| v)
}

/// [`multiplier_f`] together with the discarded imaginary part.
pub fn multiplier_f_complex(p: &Params, lambda: f64) -> Result<(f64, f64)> {
    if !lambda.is_finite() {
        return Err(Error::InvalidParams(format!("lambda must be finite, got {lambda}")));
    }
    let c = multiplier_prefactor(p);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut scale = 0.0_f64;
    for j in 0..=2 * p.m {
        let term = c * (-2.0_f64).powi(j as i32) * multiplier_coeff_a(p, j)? * i_integral_closed(p, j, lambda)?;
        scale = scale.max(term.norm());
        sum += term;
    }
    let allowed = IMAGINARY_RESIDUE_TOL * scale.max(f64::MIN_POSITIVE);
    if sum.im.abs() > allowed {
        return Err(Error::ImaginaryResidue {
            residue: sum.im.abs(),
            allowed,
        });
    }
    Ok((sum.re, sum.im.abs()))
}

/// Multiplier at `m = 0`: `|Γ(2ν - (n-iλ)/2)|² / (Γ(2ν-n) Γ(2ν))`.
pub fn multiplier_f0_peetre(n: usize, nu: f64, lambda: f64) -> Result<f64> {
    Params::new(n, nu, 0)?;
    let nf = n as f64;
    let g = log_gamma(Complex64::new(2.0 * nu - nf / 2.0, lambda / 2.0))?.re;
    Ok((2.0 * g - lg(2.0 * nu - nf) - lg(2.0 * nu)).exp())
}

/// The same multiplier written with `α = 2ν - n - 1`:
/// `|Γ(α+1+n/2+iλ/2)|² / (Γ(α+1) Γ(α+n+1))`.
pub fn multiplier_f0_peetre_alpha(n: usize, alpha: f64, lambda: f64) -> Result<f64> {
    if !(alpha > -1.0) {
        return Err(Error::InvalidParams(format!("alpha must be > -1, got {alpha}")));
    }
    let nf = n as f64;
    let g = log_gamma(Complex64::new(alpha + 1.0 + nf / 2.0, lambda / 2.0))?.re;
    Ok((2.0 * g - lg(alpha + 1.0) - lg(alpha + nf + 1.0)).exp())
}

/// `|Γ((n+iλ)/2)|⁴ / (4π^{n+1} Γ(n) |Γ(iλ)|²)`, continuous at `λ = 0`.
pub(crate) fn psi_density(n: usize, lambda: f64) -> Result<f64> {
    let nf = n as f64;
    let ln = 2.0 * nf * std::f64::consts::LN_2 + lg(nf) - (4.0 * PI.powf(nf + 1.0)).ln();
    Ok(ln.exp() * plancherel_density(nf - 1.0, 0.0, lambda)?)
}

/// Spectral kernel
/// `Ψ(z,w;λ) = |Γ((n+iλ)/2)|⁴ / (4π^{n+1} Γ(n) |Γ(iλ)|²) ·
///   ₂F₁((n+iλ)/2, (n-iλ)/2; n; -sinh²d(z,w))`.
pub fn spectral_kernel_psi(n: usize, z: &BallPoint, w: &BallPoint, lambda: f64) -> Result<f64> {
    if lambda == 0.0 {
        return Err(Error::Pole {
            function: "spectral kernel",
            at: "lambda = 0".into(),
        });
    }
    if z.dim() != n {
        return Err(Error::DimensionMismatch { left: n, right: z.dim() });
    }
    let d = crate::geometry::geodesic_distance(z, w)?;
    spectral_kernel_radial(n, d, lambda)
}

/// [`spectral_kernel_psi`] as a function of the geodesic distance.
pub fn spectral_kernel_radial(n: usize, d: f64, lambda: f64) -> Result<f64> {
    let jp = JacobiParams::new(n as f64 - 1.0, 0.0, lambda.abs())?;
    Ok(psi_density(n, lambda)? * jacobi_function_re(&jp, d)?)
}

/// The multiplier by quadrature: the Fourier-Jacobi transform of
/// [`radial_profile_h`] divided by [`transform_normalization`].
pub fn multiplier_f_numeric(p: &Params, lambda: f64, q: &QuadratureSpec) -> Result<Estimate> {
    let h = |rho: f64| radial_profile_h(p, rho);
    let e = forward_transform(&h, p.nf() - 1.0, 0.0, lambda, q)?;
    let norm = transform_normalization(p.n);
    Ok(Estimate {
        value: e.value / norm,
        abs_err: e.abs_err / norm,
    })
}

/// Samples of `λ ↦ f_m(λ)` with per-sample error estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierTable {
    pub lambdas: Vec<f64>,
    pub values: Vec<f64>,
    pub abs_err: Vec<f64>,
}

impl MultiplierTable {
    /// Closed-form samples; `abs_err` holds the discarded imaginary part.
    pub fn closed_form(p: &Params, lambdas: &[f64]) -> Result<Self> {
        let rows: Vec<(f64, f64)> = lambdas
            .par_iter()
            .map(|&l| multiplier_f_complex(p, l))
            .collect::<Result<_>>()?;
        Ok(MultiplierTable {
            lambdas: lambdas.to_vec(),
            values: rows.iter().map(|r| r.0).collect(),
            abs_err: rows.iter().map(|r| r.1).collect(),
        })
    }

    /// Quadrature samples from [`multiplier_f_numeric`].
    pub fn numeric(p: &Params, lambdas: &[f64], q: &QuadratureSpec) -> Result<Self> {
        let rows: Vec<Estimate> = lambdas
            .par_iter()
            .map(|&l| multiplier_f_numeric(p, l, q))
            .collect::<Result<_>>()?;
        Ok(MultiplierTable {
            lambdas: lambdas.to_vec(),
            values: rows.iter().map(|r| r.value).collect(),
            abs_err: rows.iter().map(|r| r.abs_err).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pt(coords: &[(f64, f64)]) -> BallPoint {
        BallPoint::new(coords.iter().map(|&(a, b)| Complex64::new(a, b)).collect()).unwrap()
    }

    #[test]
    fn params_validation_names_constraint() {
        assert!(Params::new(2, 3.0, 1).is_ok());
        let e = Params::new(2, 3.0, 2).unwrap_err();
        assert!(e.to_string().contains("m < nu - n/2"), "{e}");
        let e = Params::new(2, 1.0, 0).unwrap_err();
        assert!(e.to_string().contains("nu > n/2"), "{e}");
        assert!(Params::new(0, 3.0, 0).is_err());
        assert!(Params::new(1, 1.5, 1).is_err());
        assert!(e.is_usage());
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(eigenvalue(&Params::new(3, 2.5, 0).unwrap()), 4.0 * 2.5 * 3.0);
        assert_eq!(eigenvalue(&Params::new(2, 3.0, 1).unwrap()), 36.0);
        assert_eq!(eigenvalue(&Params::new(1, 2.0, 1).unwrap()), 16.0);
    }

    #[test]
    fn gamma_coeff_examples() {
        assert_abs_diff_eq!(gamma_coeff(&Params::new(1, 1.0, 0).unwrap()), 1.0 / PI, epsilon = 1e-15);
        let p = Params::new(2, 3.0, 0).unwrap();
        let want = (6.0 - 2.0) * 120.0 / (PI * PI * 24.0);
        assert_abs_diff_eq!(gamma_coeff(&p), want, epsilon = 1e-12);
    }

    #[test]
    fn kernel_diagonal_and_hermitian() {
        let p = Params::new(2, 3.3, 1).unwrap();
        let z = pt(&[(0.2, -0.1), (0.3, 0.4)]);
        let w = pt(&[(-0.5, 0.2), (0.1, 0.0)]);
        let kzz = reproducing_kernel(&p, &z, &z).unwrap();
        assert!(kzz.im == 0.0);
        assert_abs_diff_eq!(kzz.re, kernel_diagonal(&p), epsilon = 1e-13);
        assert_abs_diff_eq!(kernel_diagonal(&p), gamma_coeff(&p) * 2.0, epsilon = 1e-13);
        let kzw = reproducing_kernel(&p, &z, &w).unwrap();
        let kwz = reproducing_kernel(&p, &w, &z).unwrap();
        assert!((kzw - kwz.conj()).norm() < 1e-14);
    }

    #[test]
    fn berezin_kernel_two_routes() {
        let p = Params::new(2, 4.0, 2).unwrap();
        let z = pt(&[(0.2, -0.1), (0.3, 0.4)]);
        let w = pt(&[(-0.5, 0.2), (0.1, 0.0)]);
        let a = berezin_kernel(&p, &z, &w).unwrap();
        let b = berezin_kernel_explicit(&p, &z, &w).unwrap();
        assert!((a - b).abs() < 1e-12 * b.max(1e-300));
        assert_abs_diff_eq!(berezin_kernel(&p, &z, &z).unwrap(), kernel_diagonal(&p), epsilon = 1e-13);
    }

    #[test]
    fn profile_relation_and_decay() {
        let p = Params::new(3, 4.0, 0).unwrap();
        // m = 0, ρ = 0: 4π^{n+1} Γ(n) γ
        let want = 4.0 * PI.powi(4) * 2.0 * gamma_coeff(&p);
        assert_abs_diff_eq!(radial_profile_h(&p, 0.0), want, epsilon = 1e-9);
        let p = Params::new(1, 2.0, 1).unwrap();
        let ratio = radial_profile_h(&p, 10.0) / radial_profile_h(&p, 5.0);
        let asym = (-4.0 * 1.0 * 5.0_f64).exp();
        assert!((ratio / asym - 1.0).abs() < 1e-3);
    }

    #[test]
    fn coefficient_a_examples() {
        let p = Params::new(2, 3.0, 0).unwrap();
        assert_abs_diff_eq!(multiplier_coeff_a(&p, 0).unwrap(), 120.0_f64.powi(2), epsilon = 1e-9);
        let p = Params::new(2, 4.0, 2).unwrap();
        // j = 0: (Γ(2ν-m)/Γ(n))²
        assert_abs_diff_eq!(multiplier_coeff_a(&p, 0).unwrap(), 120.0_f64.powi(2), epsilon = 1e-8);
        assert!(matches!(multiplier_coeff_a(&p, 5), Err(Error::IndexOutOfRange { index: 5, max: 4 })));
    }

    #[test]
    fn square_expansion_matches_recurrence() {
        let p = Params::new(1, 2.5, 1).unwrap();
        let want = jacobi_poly(1, 0.0, 2.0, 0.0).powi(2);
        assert_abs_diff_eq!(jacobi_square_expansion(&p, 1.0).unwrap(), want, epsilon = 1e-12);
        let p = Params::new(2, 4.0, 2).unwrap();
        for &x in &[0.0, 0.3, 1.0, 7.0] {
            let got = jacobi_square_expansion(&p, x).unwrap();
            let want = jacobi_poly(2, 1.0, 2.0, (1.0 - x) / (1.0 + x)).powi(2);
            assert!((got - want).abs() < 1e-10, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn peetre_examples() {
        assert_abs_diff_eq!(multiplier_f0_peetre(2, 2.0, 0.0).unwrap(), 2.0 / 3.0, epsilon = 1e-14);
        let p = Params::new(2, 2.0, 0).unwrap();
        assert_abs_diff_eq!(multiplier_f(&p, 0.0).unwrap(), 2.0 / 3.0, epsilon = 1e-13);
        for &l in &[0.5, 3.0, 10.0] {
            let a = multiplier_f0_peetre(3, 4.0, l).unwrap();
            let b = multiplier_f0_peetre_alpha(3, 8.0 - 3.0 - 1.0, l).unwrap();
            assert!((a - b).abs() <= 1e-12 * a);
        }
    }

    #[test]
    fn multiplier_is_real_and_bounded() {
        let p = Params::new(2, 3.0, 1).unwrap();
        for &l in &[0.0, 0.1, 1.0, 5.0, 20.0, 50.0] {
            let f = multiplier_f(&p, l).unwrap();
            assert!(f > 0.0 && f <= 1.0, "λ={l}: {f}");
        }
    }

    #[test]
    fn multiplier_against_extended_precision() {
        // 30-digit quadrature of the Berezin kernel against the spherical function
        let cases = [
            (2, 3.0, 1, 2.0, 0.264_472_692_343_740_6),
            (1, 2.0, 1, 0.5, 0.527_642_458_557_391_3),
            (2, 4.0, 2, 5.0, 0.068_386_283_233_796_93),
            (3, 4.0, 1, 1.0, 0.391_856_969_450_457_2),
            (1, 2.7, 1, 3.0, 0.026_338_955_649_221_95),
        ];
        for (n, nu, m, l, want) in cases {
            let got = multiplier_f(&Params::new(n, nu, m).unwrap(), l).unwrap();
            assert!((got - want).abs() < 1e-12 * want, "({n},{nu},{m}) λ={l}: {got} vs {want}");
        }
    }

    #[test]
    fn spectral_kernel_at_coincidence() {
        let z = pt(&[(0.1, 0.2), (0.0, -0.3)]);
        let l = 1.3;
        let il = Complex64::new(0.0, l);
        let g = crate::special::gamma((il + 2.0) * 0.5).unwrap().norm_sqr();
        let gi = crate::special::gamma(il).unwrap().norm_sqr();
        let want = g * g / (4.0 * PI.powi(3) * gi);
        assert_abs_diff_eq!(spectral_kernel_psi(2, &z, &z, l).unwrap(), want, epsilon = 1e-14);
        assert!(spectral_kernel_psi(2, &z, &z, 0.0).is_err());
    }

    #[test]
    fn table_is_ordered() {
        let p = Params::new(1, 2.0, 1).unwrap();
        let grid: Vec<f64> = (0..20).map(|k| 0.5 * k as f64).collect();
        let t = MultiplierTable::closed_form(&p, &grid).unwrap();
        assert_eq!(t.lambdas, grid);
        for (l, v) in grid.iter().zip(&t.values) {
            assert_eq!(*v, multiplier_f(&p, *l).unwrap());
        }
    }
}
