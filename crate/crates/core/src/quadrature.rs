//! One-dimensional quadrature used by the transform and operator code.
//!
//! Integrals over `[0, ∞)` are truncated at a point where the integrand has
//! decayed below `tol` times its peak, then evaluated with composite
//! Gauss-Legendre panels whose count is doubled until two successive
//! levels agree.

use std::ops::{Add, Mul, Sub};
use std::sync::Mutex;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

const MAX_TRUNCATION: f64 = 400.0;
const MAX_DOUBLINGS: usize = 8;

/// Scheme, truncation and tolerance for 1-D integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Initial upper limit replacing infinity; grown automatically.
    pub truncation_t: f64,
    pub panels: usize,
    pub points_per_panel: usize,
    /// Relative tolerance, measured against the integral of `|f|`.
    pub tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            truncation_t: 8.0,
            panels: 16,
            points_per_panel: 16,
            tol: 1e-11,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = self.truncation_t > 0.0
            && self.truncation_t.is_finite()
            && self.panels > 0
            && self.points_per_panel > 0
            && self.tol > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!("quadrature spec must be positive: {self:?}")))
        }
    }

    pub fn with_tol(self, tol: f64) -> Self {
        QuadratureSpec { tol, ..self }
    }
}

/// A quadrature value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub abs_err: f64,
}

/// Values that can be integrated: reals and complex numbers.
pub trait Scalar: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite rule on `[a, b]`; returns `(∫f, ∫|f|)`.
pub fn panel_sum<T: Scalar, F: Fn(f64) -> T>(f: &F, a: f64, b: f64, panels: usize, rule: &GaussLegendre) -> (T, f64) {
    let h = (b - a) / panels as f64;
    let mut sum = T::zero();
    let mut abs = 0.0;
    for p in 0..panels {
        let lo = a + h * p as f64;
        let mid = lo + 0.5 * h;
        let mut panel = T::zero();
        let mut panel_abs = 0.0;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let v = f(mid + 0.5 * h * x);
            panel = panel + v * *w;
            panel_abs += v.magnitude() * w;
        }
        sum = sum + panel * (0.5 * h);
        abs += panel_abs * 0.5 * h;
    }
    (sum, abs)
}

/// Integrates over `[a, b]`, doubling the panel count until converged.
pub fn integrate_interval_generic<T: Scalar, F: Fn(f64) -> T>(f: &F, a: f64, b: f64, q: &QuadratureSpec) -> Result<(T, f64)> {
    q.validate()?;
    let rule = GaussLegendre::new(q.points_per_panel);
    let mut panels = q.panels;
    let (mut prev, _) = panel_sum(f, a, b, panels, &rule);
    for _ in 0..MAX_DOUBLINGS {
        panels *= 2;
        let (cur, cur_abs) = panel_sum(f, a, b, panels, &rule);
        let err = (cur - prev).magnitude();
        if err <= q.tol * cur_abs {
            return Ok((cur, err));
        }
        prev = cur;
    }
    Err(Error::NonConvergence(format!(
        "panel refinement on [{a}, {b}] did not reach tol {} with {panels} panels",
        q.tol
    )))
}

/// Real-valued [`integrate_interval_generic`].
pub fn integrate_interval<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, q: &QuadratureSpec) -> Result<Estimate> {
    integrate_interval_generic(f, a, b, q).map(|(value, abs_err)| Estimate { value, abs_err })
}

/// Picks an upper limit `T ≥ q.truncation_t` where `f` has decayed to
/// `tol` times its peak on `[0, T]`.
pub fn choose_truncation<T: Scalar, F: Fn(f64) -> T>(f: &F, q: &QuadratureSpec) -> Result<f64> {
    choose_truncation_sampled(f, q, 512.0 / q.truncation_t)
}

/// [`choose_truncation`] with the peak scanned at `density` samples per
/// unit length; growing `T` only scans the new stretch.
pub fn choose_truncation_sampled<T: Scalar, F: Fn(f64) -> T>(f: &F, q: &QuadratureSpec, density: f64) -> Result<f64> {
    q.validate()?;
    let scan = |lo: f64, hi: f64| -> f64 {
        let k = ((hi - lo) * density).ceil().max(1.0) as usize;
        (1..=k)
            .map(|i| f(lo + (hi - lo) * i as f64 / k as f64).magnitude())
            .fold(0.0_f64, f64::max)
    };
    let mut t = q.truncation_t;
    let mut peak = scan(0.0, t);
    loop {
        if peak == 0.0 {
            return Ok(t);
        }
        if !peak.is_finite() {
            return Err(Error::NonConvergence(format!("integrand is not finite on [0, {t}]")));
        }
        let tail = (0..8)
            .map(|k| f(t - 0.125 * k as f64).magnitude())
            .fold(0.0_f64, f64::max);
        let ratio = tail / peak;
        if ratio <= q.tol {
            return Ok(t);
        }
        if t >= MAX_TRUNCATION {
            return Err(Error::Truncation { t, ratio });
        }
        let next = (t * 1.25).min(MAX_TRUNCATION);
        peak = peak.max(scan(t, next));
        t = next;
    }
}

/// `∫_0^∞ f` by automatic truncation and panel refinement.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: &F, q: &QuadratureSpec) -> Result<Estimate> {
    let t = choose_truncation(f, q)?;
    integrate_interval(f, 0.0, t, q)
}

/// Complex-valued [`integrate_semi_infinite`].
pub fn integrate_semi_infinite_complex<F: Fn(f64) -> Complex64>(f: &F, q: &QuadratureSpec) -> Result<(Complex64, f64)> {
    let t = choose_truncation(f, q)?;
    integrate_interval_generic(f, 0.0, t, q)
}

/// Holds the first error raised inside an integrand that must be infallible.
#[derive(Debug, Default)]
pub struct ErrorSlot(Mutex<Option<Error>>);

impl ErrorSlot {
    pub fn new() -> Self {
        ErrorSlot(Mutex::new(None))
    }

    /// Unwraps `r`, recording the error and returning NaN on failure.
    pub fn catch(&self, r: Result<f64>) -> f64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                let mut slot = self.0.lock().expect("error slot poisoned");
                slot.get_or_insert(e);
                f64::NAN
            }
        }
    }

    /// Returns the recorded error, if any, ahead of `r`.
    pub fn check<T>(&self, r: Result<T>) -> Result<T> {
        match self.0.lock().expect("error slot poisoned").take() {
            Some(e) => Err(e),
            None => r,
        }
    }
}

const MAX_TRAPEZOID_NODES: usize = 1 << 16;

/// `∫_0^∞ f` for a smooth integrand that is even in its variable.
///
/// The upper limit is chosen by decay, then the trapezoid rule on a uniform
/// grid is refined by halving the step until two levels agree to `tol`
/// relative to `∫|f|`. For even, rapidly decaying integrands the rule
/// converges geometrically. Nodes are evaluated in parallel and summed in
/// index order.
pub fn integrate_even_trapezoid<F: Fn(f64) -> Result<f64> + Sync>(f: &F, q: &QuadratureSpec) -> Result<Estimate> {
    let slot = ErrorSlot::new();
    // λ-integrands are smooth on the scale of the grid, so a coarse peak scan suffices
    let upper = slot.check(choose_truncation_sampled(&|x: f64| slot.catch(f(x)), q, 8.0))?;
    let mut nodes = 64usize;
    let eval_all = |idx: Vec<usize>, h: f64| -> Result<Vec<f64>> {
        idx.par_iter().map(|&k| f(k as f64 * h)).collect()
    };
    let h0 = upper / nodes as f64;
    let first = eval_all((0..=nodes).collect(), h0)?;
    let mut sum = first.iter().sum::<f64>() - 0.5 * (first[0] + first[nodes]);
    let mut abs = first.iter().map(|v| v.abs()).sum::<f64>();
    let mut prev = sum * h0;
    while nodes < MAX_TRAPEZOID_NODES {
        nodes *= 2;
        let h = upper / nodes as f64;
        let odd = eval_all((1..nodes).step_by(2).collect(), h)?;
        sum += odd.iter().sum::<f64>();
        abs += odd.iter().map(|v| v.abs()).sum::<f64>();
        let cur = sum * h;
        let err = (cur - prev).abs();
        if err <= q.tol * abs * h {
            return Ok(Estimate { value: cur, abs_err: err });
        }
        prev = cur;
    }
    Err(Error::NonConvergence(format!(
        "trapezoid rule on [0, {upper}] did not reach tol {} with {nodes} nodes",
        q.tol
    )))
}

/// Tanh-sinh rule on `[0, 1]` for integrands with endpoint singularities.
///
/// The integrand receives both `u` and `1 - u`, the latter computed without
/// cancellation near the right endpoint.
pub fn tanh_sinh_unit<F: Fn(f64, f64) -> Complex64>(f: &F, tol: f64) -> Result<Complex64> {
    use std::f64::consts::FRAC_PI_2;
    let t_max = 4.0;
    let mut h = 0.5;
    let eval = |t: f64| -> Complex64 {
        let s = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * s.abs()).exp();
        // distance from the nearer endpoint
        let near = e / (1.0 + e);
        let (u, v) = if s < 0.0 { (near, 1.0 - near) } else { (1.0 - near, near) };
        if near <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let w = FRAC_PI_2 * t.cosh() / (s.cosh() * s.cosh()) * 0.5;
        f(u, v) * w
    };
    let mut sum = eval(0.0);
    let mut k = 1;
    while k as f64 * h <= t_max {
        sum += eval(k as f64 * h) + eval(-(k as f64) * h);
        k += 1;
    }
    let mut prev = sum * h;
    for _ in 0..10 {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= t_max {
            sum += eval(k as f64 * h) + eval(-(k as f64) * h);
            k += 2;
        }
        let cur = sum * h;
        if (cur - prev).norm() <= tol * cur.norm().max(1e-300) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NonConvergence("tanh-sinh rule did not converge".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(8);
        let total: f64 = rule.weights.iter().sum();
        assert_abs_diff_eq!(total, 2.0, epsilon = 1e-14);
        let x14: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * x.powi(14)).sum();
        assert_abs_diff_eq!(x14, 2.0 / 15.0, epsilon = 1e-14);
    }

    #[test]
    fn semi_infinite_exponential() {
        let q = QuadratureSpec::default();
        let e = integrate_semi_infinite(&|x: f64| (-x).exp() * x.cos(), &q).unwrap();
        assert_abs_diff_eq!(e.value, 0.5, epsilon = 1e-10);
    }

    #[test]
    fn zero_integrand() {
        let e = integrate_semi_infinite(&|_x: f64| 0.0, &QuadratureSpec::default()).unwrap();
        assert_eq!(e.value, 0.0);
    }

    #[test]
    fn non_decaying_integrand_is_rejected() {
        let r = integrate_semi_infinite(&|_x: f64| 1.0, &QuadratureSpec::default());
        assert!(matches!(r, Err(Error::Truncation { .. })));
    }

    #[test]
    fn even_trapezoid_gaussian() {
        let q = QuadratureSpec::default();
        let e = integrate_even_trapezoid(&|x: f64| Ok((-x * x).exp()), &q).unwrap();
        assert_abs_diff_eq!(e.value, 0.5 * std::f64::consts::PI.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn even_trapezoid_propagates_integrand_errors() {
        let q = QuadratureSpec::default();
        let r = integrate_even_trapezoid(&|_x: f64| Err(Error::Divergence("boom".into())), &q);
        assert!(matches!(r, Err(Error::Divergence(_))));
    }

    #[test]
    fn tanh_sinh_beta_integral() {
        // ∫ u^{-1/2} (1-u)^{-1/2} du = π
        let v = tanh_sinh_unit(&|u: f64, v: f64| Complex64::new(1.0 / (u * v).sqrt(), 0.0), 1e-12).unwrap();
        assert_abs_diff_eq!(v.re, std::f64::consts::PI, epsilon = 1e-9);
    }
}
