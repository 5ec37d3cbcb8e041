//! Randomized checks of the classical hypergeometric identities behind the
//! closed-form multiplier. Each check evaluates one side with the special
//! function routines and the other side by an independent route (partial
//! sums or quadrature).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::quadrature::{integrate_semi_infinite, tanh_sinh_unit, QuadratureSpec};
use crate::special::{beta_fn, gauss_2f1, hyp_3f2_unit_series_tol, ln_gamma_real};

/// Floor for relative errors against a vanishing reference.
pub const REL_ERR_FLOOR: f64 = 1e-300;

/// Identities in the suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    /// `₂F₁(a,b;c;1) = Γ(c)Γ(c-a-b)/(Γ(c-a)Γ(c-b))` against 10⁵-term partial sums.
    GaussSummation,
    /// `₂F₁(a,b;c;x) = Γ(c)/(Γ(b)Γ(c-b)) ∫_0^1 t^{b-1}(1-t)^{c-b-1}(1-xt)^{-a} dt`.
    EulerIntegral,
    /// `∫_0^∞ x^{l-1}(1+x)^a(1+αx)^b dx = B(l, -(a+b)-l) ₂F₁(-b, l; -(a+b); 1-α)`.
    BetaTypeIntegral,
    /// `∫_0^1 u^{a-1}(1-u)^{b-1} ₂F₁(α,β;γ;u) du = B(a,b) ₃F₂(α,β,a; γ,a+b; 1)`.
    BetaIntegral2F1,
    /// `₃F₂(a₁,a₂,e; c,e; 1) = ₂F₁(a₁,a₂; c; 1)` with the ₃F₂ summed directly.
    Collapse3F2,
}

impl Identity {
    pub const ALL: [Identity; 5] = [
        Identity::GaussSummation,
        Identity::EulerIntegral,
        Identity::BetaTypeIntegral,
        Identity::BetaIntegral2F1,
        Identity::Collapse3F2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Identity::GaussSummation => "gauss_summation",
            Identity::EulerIntegral => "euler_integral",
            Identity::BetaTypeIntegral => "beta_type_integral",
            Identity::BetaIntegral2F1 => "beta_integral_2f1",
            Identity::Collapse3F2 => "collapse_3f2",
        }
    }
}

/// One evaluated instance of an identity.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub identity: Identity,
    /// `key=value` pairs separated by `;`.
    pub inputs: String,
    pub computed: f64,
    pub reference: f64,
    pub abs_err: f64,
    pub rel_err: f64,
}

impl IdentityCheck {
    fn new(identity: Identity, inputs: String, computed: Complex64, reference: Complex64) -> Self {
        let abs_err = (computed - reference).norm();
        IdentityCheck {
            identity,
            inputs,
            computed: computed.re,
            reference: reference.re,
            abs_err,
            rel_err: abs_err / reference.norm().max(REL_ERR_FLOOR),
        }
    }
}

fn r(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

const PARTIAL_SUM_TERMS: usize = 100_000;

/// Gauss' sum against a 10⁵-term partial sum.
pub fn gauss_summation(a: f64, b: f64, c: f64) -> Result<IdentityCheck> {
    let closed = gauss_2f1(r(a), r(b), r(c), 1.0)?.value;
    let mut term = 1.0;
    let (mut sum, mut comp) = (0.0_f64, 0.0_f64);
    for k in 0..PARTIAL_SUM_TERMS {
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0));
    }
    Ok(IdentityCheck::new(
        Identity::GaussSummation,
        format!("a={a};b={b};c={c}"),
        closed,
        r(sum),
    ))
}

/// Euler's integral representation, evaluated with a tanh-sinh rule.
pub fn euler_integral(a: f64, b: f64, c: f64, x: f64) -> Result<IdentityCheck> {
    let series = gauss_2f1(r(a), r(b), r(c), x)?.value;
    let integral = tanh_sinh_unit(
        &|t: f64, one_minus_t: f64| r(t.powf(b - 1.0) * one_minus_t.powf(c - b - 1.0) * (1.0 - x * t).powf(-a)),
        1e-13,
    )?;
    let pre = (ln_gamma_real(c)? - ln_gamma_real(b)? - ln_gamma_real(c - b)?).exp();
    Ok(IdentityCheck::new(
        Identity::EulerIntegral,
        format!("a={a};b={b};c={c};x={x}"),
        series,
        integral * pre,
    ))
}

/// The half-line Beta-type integral, evaluated after `x = e^s`.
pub fn beta_type_integral(l: f64, a: f64, b: f64, alpha: f64, q: &QuadratureSpec) -> Result<IdentityCheck> {
    let closed = beta_fn(r(l), r(-(a + b) - l))? * gauss_2f1(r(-b), r(l), r(-(a + b)), 1.0 - alpha)?.value;
    let f = |s: f64| (l * s).exp() * (1.0 + s.exp()).powf(a) * (1.0 + alpha * s.exp()).powf(b);
    let right = integrate_semi_infinite(&f, q)?.value;
    let left = integrate_semi_infinite(&|s: f64| f(-s), q)?.value;
    Ok(IdentityCheck::new(
        Identity::BetaTypeIntegral,
        format!("l={l};a={a};b={b};alpha={alpha}"),
        closed,
        r(left + right),
    ))
}

/// The Beta integral of a ₂F₁, which produces a ₃F₂ at unit argument.
pub fn beta_integral_2f1(a: f64, b: f64, al: f64, be: f64, ga: f64) -> Result<IdentityCheck> {
    let closed = beta_fn(r(a), r(b))? * hyp_3f2_unit_series_tol(r(al), r(be), r(a), r(ga), r(a + b), 1e-14)?.value;
    let integral = tanh_sinh_unit(
        &|u: f64, one_minus_u: f64| {
            let f = gauss_2f1(r(al), r(be), r(ga), u).map(|s| s.value).unwrap_or(r(f64::NAN));
            f * (u.powf(a - 1.0) * one_minus_u.powf(b - 1.0))
        },
        1e-13,
    )?;
    Ok(IdentityCheck::new(
        Identity::BetaIntegral2F1,
        format!("a={a};b={b};alpha={al};beta={be};gamma={ga}"),
        closed,
        integral,
    ))
}

/// Direct ₃F₂ summation with a repeated parameter against Gauss' sum.
pub fn collapse_3f2(a1: f64, a2: f64, e: f64, c: f64) -> Result<IdentityCheck> {
    let direct = hyp_3f2_unit_series_tol(r(a1), r(a2), r(e), r(c), r(e), 1e-14)?.value;
    let gauss = (ln_gamma_real(c)? + ln_gamma_real(c - a1 - a2)? - ln_gamma_real(c - a1)? - ln_gamma_real(c - a2)?).exp();
    Ok(IdentityCheck::new(
        Identity::Collapse3F2,
        format!("a1={a1};a2={a2};e={e};c={c}"),
        direct,
        r(gauss),
    ))
}

/// Draws `draws` admissible parameter sets per identity from a seeded
/// generator and evaluates them in a fixed order.
pub fn run_identity_suite(draws: usize, seed: u64, q: &QuadratureSpec) -> Result<Vec<IdentityCheck>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(draws * Identity::ALL.len());
    for id in Identity::ALL {
        for _ in 0..draws {
            let check = match id {
                Identity::GaussSummation => {
                    let a = rng.gen_range(0.2..1.5);
                    let b = rng.gen_range(0.2..1.5);
                    let s = rng.gen_range(2.5..4.0);
                    gauss_summation(a, b, a + b + s)?
                }
                Identity::EulerIntegral => {
                    let b = rng.gen_range(0.3..2.0);
                    let c = b + rng.gen_range(0.3..2.0);
                    let a = rng.gen_range(-1.0..2.0);
                    let x = rng.gen_range(-0.95..0.95);
                    euler_integral(a, b, c, x)?
                }
                Identity::BetaTypeIntegral => {
                    let l = rng.gen_range(0.5..3.0);
                    let margin = rng.gen_range(0.5..2.0);
                    let b = -rng.gen_range(0.2..2.0);
                    let a = -(l + margin) - b;
                    let alpha = rng.gen_range(0.1..1.9);
                    beta_type_integral(l, a, b, alpha, q)?
                }
                Identity::BetaIntegral2F1 => {
                    let a = rng.gen_range(0.5..2.0);
                    let b = rng.gen_range(0.5..2.0);
                    let al = rng.gen_range(0.2..1.5);
                    let be = rng.gen_range(0.2..1.5);
                    let ga = al + be + rng.gen_range(0.3..2.0);
                    beta_integral_2f1(a, b, al, be, ga)?
                }
                Identity::Collapse3F2 => {
                    let a1 = rng.gen_range(-0.8..1.5);
                    let a2 = rng.gen_range(0.1..1.5);
                    let e = rng.gen_range(0.5..3.0);
                    let c = a1 + a2 + rng.gen_range(1.0..3.0);
                    collapse_3f2(a1, a2, e, c)?
                }
            };
            out.push(check);
        }
    }
    Ok(out)
}
