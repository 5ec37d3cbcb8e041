//! Jacobi functions, the Harish-Chandra c-function and the Fourier-Jacobi
//! transform pair.
//!
//! `φ_λ^{(α,β)}(t) = ₂F₁(½(ρ+iλ), ½(ρ-iλ); α+1; -sinh²t)` with
//! `ρ = α+β+1`. Near the origin it is summed after a Pfaff transformation,
//! and far out through the Harish-Chandra expansion in `sech²t`. Both series
//! cancel badly once `λ` is large compared with `1/tanh t` or `1/sech²t`;
//! in between, the hypergeometric equation is integrated by Taylor steps
//! in `z = -sinh²t`, each covering O(1) of the oscillation.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{
    choose_truncation, integrate_even_trapezoid, integrate_interval, ErrorSlot, Estimate, QuadratureSpec,
};
use crate::special::{gauss_2f1, gauss_2f1_tol, ln_gamma_real, log_gamma, recip_gamma};

// Pfaff series is used while tanh²t ≤ PFAFF_MAX_Z and λ·tanh t ≤ PFAFF_MAX_OSC.
const PFAFF_MAX_Z: f64 = 0.5;
const PFAFF_MAX_OSC: f64 = 6.0;
// Harish-Chandra series is used while sech²t ≤ HC_MAX_Z and λ·sech²t ≤ HC_MAX_OSC.
const HC_MAX_Z: f64 = 0.5;
const HC_MAX_OSC: f64 = 24.0;
// Phase advance λ·Δt allowed per Taylor step.
const STEP_PHASE: f64 = 2.0;
const MAX_TAYLOR_TERMS: usize = 400;
// Below this |λ| the expansion's pole at λ = 0 is bridged by interpolation.
const SMALL_LAMBDA: f64 = 1e-4;
const SERIES_TOL: f64 = 1e-15;

/// Parameters `(α, β, λ)` of a Jacobi function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
}

impl JacobiParams {
    /// Requires `α > -1`, `|β| ≤ α + 1` and `λ ≥ 0`.
    pub fn new(alpha: f64, beta: f64, lambda: f64) -> Result<Self> {
        if !(alpha > -1.0) || !alpha.is_finite() {
            return Err(Error::InvalidParams(format!("alpha must be > -1, got {alpha}")));
        }
        if !(beta.abs() <= alpha + 1.0) {
            return Err(Error::InvalidParams(format!(
                "|beta| must be <= alpha + 1, got beta = {beta}, alpha = {alpha}"
            )));
        }
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParams(format!("lambda must be finite and >= 0, got {lambda}")));
        }
        Ok(JacobiParams { alpha, beta, lambda })
    }
}

/// The Jacobi function `φ_λ^{(α,β)}(t)`; even in `t` and in `λ`.
pub fn jacobi_function(p: &JacobiParams, t: f64) -> Result<Complex64> {
    let t = t.abs();
    if t == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let lambda = p.lambda.abs();
    let th = t.tanh();
    if th * th <= PFAFF_MAX_Z && lambda * th <= PFAFF_MAX_OSC {
        return pfaff_route(p.alpha, p.beta, lambda, t);
    }
    let sech2 = 1.0 - th * th;
    if sech2 > HC_MAX_Z || lambda * sech2 > HC_MAX_OSC {
        return taylor_route(p.alpha, p.beta, lambda, t);
    }
    if lambda < SMALL_LAMBDA {
        let d = SMALL_LAMBDA;
        let f1 = harish_chandra_route(p.alpha, p.beta, d, t)?;
        let f2 = harish_chandra_route(p.alpha, p.beta, 2.0 * d, t)?;
        let f0 = (f1 * 4.0 - f2) / 3.0;
        let r = lambda / d;
        return Ok(f0 + (f1 - f0) * (r * r));
    }
    harish_chandra_route(p.alpha, p.beta, lambda, t)
}

/// Real part of [`jacobi_function`], which is real for real `λ`.
pub fn jacobi_function_re(p: &JacobiParams, t: f64) -> Result<f64> {
    jacobi_function(p, t).map(|z| z.re)
}

/// `₂F₁(½(ρ+iλ), ½(ρ-iλ); α+1; -sinh²t)` for complex `λ`.
///
/// No restriction on `β`: this is the analytic continuation used for the
/// polynomial cases `iλ = -(2k + ρ)`.
pub fn jacobi_function_analytic(alpha: f64, beta: f64, lambda: Complex64, t: f64) -> Result<Complex64> {
    // ±λ only swap the upper parameters; fix a representative so evenness is exact
    let lambda = if lambda.re < 0.0 || (lambda.re == 0.0 && lambda.im < 0.0) { -lambda } else { lambda };
    let rho = alpha + beta + 1.0;
    let i_lambda = Complex64::i() * lambda;
    let a = (i_lambda + rho) * 0.5;
    let b = (-i_lambda + rho) * 0.5;
    let sh = t.sinh();
    Ok(gauss_2f1(a, b, Complex64::new(alpha + 1.0, 0.0), -sh * sh)?.value)
}

/// `cosh^{-2A}t · ₂F₁(A, α+1-B; α+1; tanh²t)`, `A, B = ½(ρ ± iλ)`.
pub(crate) fn pfaff_route(alpha: f64, beta: f64, lambda: f64, t: f64) -> Result<Complex64> {
    let rho = alpha + beta + 1.0;
    let a = Complex64::new(0.5 * rho, 0.5 * lambda);
    let b = Complex64::new(0.5 * rho, -0.5 * lambda);
    let cc = Complex64::new(alpha + 1.0, 0.0);
    let th = t.tanh();
    let f = gauss_2f1_tol(a, cc - b, cc, th * th, SERIES_TOL)?;
    Ok((-2.0 * a * ln_cosh(t)).exp() * f.value)
}

/// `₂F₁(a, b; c; z)` at `z = -sinh²t` by stepping the hypergeometric
/// equation `z(1-z)w'' + (c - (a+b+1)z)w' - ab w = 0` along the negative
/// axis with local Taylor expansions.
pub(crate) fn taylor_route(alpha: f64, beta: f64, lambda: f64, t: f64) -> Result<Complex64> {
    let rho = alpha + beta + 1.0;
    let a = Complex64::new(0.5 * rho, 0.5 * lambda);
    let b = Complex64::new(0.5 * rho, -0.5 * lambda);
    let cc = Complex64::new(alpha + 1.0, 0.0);
    let target = -t.sinh().powi(2);

    // start from the series at the origin where it neither cancels nor converges slowly
    let s1 = (0.5_f64.sqrt()).min(STEP_PHASE / lambda.max(1e-300));
    let mut z = (-s1 * s1).max(target);
    let (mut w, mut dw) = series_at_origin(a, b, cc, z)?;
    while z > target {
        let zs = -z;
        let reach = (0.5 * zs).min(2.0 * STEP_PHASE * (zs * (1.0 + zs)).sqrt() / lambda.max(1e-300));
        let h = -(reach.min(z - target));
        let (w1, dw1) = taylor_step(a, b, cc, z, w, dw, h)?;
        z = if z + h < target || (z + h - target).abs() < 1e-15 * target.abs() { target } else { z + h };
        w = w1;
        dw = dw1;
    }
    Ok(w)
}

fn series_at_origin(a: Complex64, b: Complex64, cc: Complex64, z: f64) -> Result<(Complex64, Complex64)> {
    let mut term = Complex64::new(1.0, 0.0);
    let (mut w, mut dw) = (term, Complex64::new(0.0, 0.0));
    let mut peak = 1.0_f64;
    for k in 0..MAX_TAYLOR_TERMS {
        let kf = k as f64;
        let next = term * (a + kf) * (b + kf) / ((cc + kf) * (kf + 1.0)) * z;
        dw += next * ((kf + 1.0) / z);
        w += next;
        peak = peak.max(next.norm());
        if next.norm() < 1e-17 * peak && term.norm() < 1e-17 * peak {
            return Ok((w, dw));
        }
        term = next;
    }
    Err(Error::NonConvergence(format!("Jacobi function series at z = {z} did not converge")))
}

/// Advances `(w, w')` from `z0` to `z0 + h` using the Taylor coefficients
/// generated by the hypergeometric equation.
fn taylor_step(
    a: Complex64,
    b: Complex64,
    cc: Complex64,
    z0: f64,
    w0: Complex64,
    dw0: Complex64,
    h: f64,
) -> Result<(Complex64, Complex64)> {
    let p0 = z0 * (1.0 - z0);
    let p1 = 1.0 - 2.0 * z0;
    let q0 = cc - (a + b + 1.0) * z0;
    let q1 = -(a + b + 1.0);
    let r = -(a * b);
    // coefficients of h^k, scaled by h^k as they are produced
    let (mut prev, mut cur) = (w0, dw0 * h);
    let (mut w, mut dw) = (prev, dw0);
    let mut peak = prev.norm().max(cur.norm());
    w += cur;
    for k in 0..MAX_TAYLOR_TERMS {
        let kf = k as f64;
        let next = -((q0 * (kf + 1.0) + p1 * kf * (kf + 1.0)) * cur * h
            + (r - kf * (kf - 1.0) + q1 * kf) * prev * (h * h))
            / (p0 * (kf + 1.0) * (kf + 2.0));
        w += next;
        dw += next * ((kf + 2.0) / h);
        peak = peak.max(next.norm());
        if next.norm() < 1e-17 * peak && cur.norm() < 1e-17 * peak {
            return Ok((w, dw));
        }
        prev = cur;
        cur = next;
    }
    Err(Error::NonConvergence(format!("Taylor step from z = {z0} did not converge")))
}

/// `c(λ)Φ_λ(t) + c(-λ)Φ_{-λ}(t)`, `λ ≠ 0`, with
/// `Φ_λ(t) = (2cosh t)^{iλ-ρ} ₂F₁(½(ρ-iλ), ½(α-β+1-iλ); 1-iλ; sech²t)`.
pub(crate) fn harish_chandra_route(alpha: f64, beta: f64, lambda: f64, t: f64) -> Result<Complex64> {
    let term = |l: f64| -> Result<Complex64> {
        let rho = alpha + beta + 1.0;
        let il = Complex64::new(0.0, l);
        let a = (rho - il) * 0.5;
        let b = (alpha - beta + 1.0 - il) * 0.5;
        let cc = 1.0 - il;
        let sech = 1.0 / t.cosh();
        let f = gauss_2f1_tol(a, b, cc, sech * sech, SERIES_TOL)?;
        let pre = ((il - rho) * (t + (-2.0 * t).exp().ln_1p())).exp();
        Ok(c_function_signed(alpha, beta, l)? * pre * f.value)
    };
    Ok(term(lambda)? + term(-lambda)?)
}

fn ln_cosh(t: f64) -> f64 {
    let t = t.abs();
    t + (-2.0 * t).exp().ln_1p() - std::f64::consts::LN_2
}

/// Weight `Δ_{α,β}(t) = (2 sinh|t|)^{2α+1} (2 cosh|t|)^{2β+1}`.
pub fn weight_delta(alpha: f64, beta: f64, t: f64) -> f64 {
    let t = t.abs();
    (2.0 * t.sinh()).powf(2.0 * alpha + 1.0) * (2.0 * t.cosh()).powf(2.0 * beta + 1.0)
}

/// Harish-Chandra c-function
/// `c(λ) = 2^{ρ-iλ} Γ(α+1) Γ(iλ) / (Γ(½(ρ+iλ)) Γ(½(α-β+1+iλ)))`.
///
/// Defined for any real `λ ≠ 0`; `c(-λ) = conj c(λ)`.
pub fn c_function(alpha: f64, beta: f64, lambda: f64) -> Result<Complex64> {
    c_function_signed(alpha, beta, lambda)
}

fn c_function_signed(alpha: f64, beta: f64, lambda: f64) -> Result<Complex64> {
    if lambda == 0.0 {
        return Err(Error::Pole {
            function: "c-function",
            at: "lambda = 0".into(),
        });
    }
    let rho = alpha + beta + 1.0;
    let il = Complex64::new(0.0, lambda);
    let log_num = (rho - il) * std::f64::consts::LN_2 + ln_gamma_real(alpha + 1.0)? + log_gamma(il)?;
    Ok(log_num.exp() * recip_gamma((rho + il) * 0.5) * recip_gamma((alpha - beta + 1.0 + il) * 0.5))
}

/// Plancherel density `|c(λ)|^{-2}`, continuous at `λ = 0` where it vanishes.
pub fn plancherel_density(alpha: f64, beta: f64, lambda: f64) -> Result<f64> {
    let lambda = lambda.abs();
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let rho = alpha + beta + 1.0;
    let il = Complex64::new(0.0, lambda);
    let g1 = log_gamma((rho + il) * 0.5)?.re;
    let g2 = log_gamma((alpha - beta + 1.0 + il) * 0.5)?.re;
    // ln(1/|Γ(iλ)|²) = ln(λ sinh(πλ)/π)
    let ln_inv_gamma_sq = lambda.ln() + PI * lambda + (-(-2.0 * PI * lambda).exp()).ln_1p() - 2.0_f64.ln() - PI.ln();
    let ln_val = 2.0 * (g1 + g2) + ln_inv_gamma_sq - 2.0 * rho * std::f64::consts::LN_2 - 2.0 * ln_gamma_real(alpha + 1.0)?;
    Ok(ln_val.exp())
}

/// `g(λ) = ∫_0^∞ h(t) φ_λ^{(α,β)}(t) Δ_{α,β}(t) dt`.
pub fn forward_transform<H: Fn(f64) -> f64>(
    h: &H,
    alpha: f64,
    beta: f64,
    lambda: f64,
    q: &QuadratureSpec,
) -> Result<Estimate> {
    let p = JacobiParams::new(alpha, beta, lambda)?;
    let slot = ErrorSlot::new();
    let integrand = |t: f64| -> f64 {
        let hv = h(t);
        if hv == 0.0 {
            return 0.0;
        }
        hv * slot.catch(jacobi_function_re(&p, t)) * weight_delta(alpha, beta, t)
    };
    let upper = slot.check(choose_truncation(&integrand, q))?;
    slot.check(integrate_interval(&integrand, 0.0, upper, q))
}

/// `h(t) = (2π)^{-1} ∫_0^∞ g(λ) φ_λ^{(α,β)}(t) |c(λ)|^{-2} dλ`.
pub fn inverse_transform<G: Fn(f64) -> f64 + Sync>(
    g: &G,
    alpha: f64,
    beta: f64,
    t: f64,
    q: &QuadratureSpec,
) -> Result<Estimate> {
    JacobiParams::new(alpha, beta, 0.0)?;
    let integrand = |lambda: f64| -> Result<f64> {
        let gv = g(lambda);
        if gv == 0.0 {
            return Ok(0.0);
        }
        let p = JacobiParams::new(alpha, beta, lambda)?;
        Ok(gv * jacobi_function_re(&p, t)? * plancherel_density(alpha, beta, lambda)?)
    };
    let e = integrate_even_trapezoid(&integrand, q)?;
    Ok(Estimate {
        value: e.value / (2.0 * PI),
        abs_err: e.abs_err / (2.0 * PI),
    })
}
