//! Points, automorphisms, distance and invariant measure of the unit ball
//! in `Cⁿ` with its Bergman metric.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::ln_gamma_real;

/// Points with `1 - |z|²` below this are rejected.
pub const BOUNDARY_GUARD: f64 = 1e-12;

/// A point of the open unit ball of `Cⁿ`, `n ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallPoint {
    coords: Vec<Complex64>,
}

impl BallPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParams("ball dimension must be at least 1".into()));
        }
        if coords.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParams("ball point has non-finite coordinates".into()));
        }
        let slack = 1.0 - coords.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if slack < BOUNDARY_GUARD {
            return Err(Error::OutsideBall { slack });
        }
        Ok(BallPoint { coords })
    }

    pub fn origin(n: usize) -> Self {
        assert!(n >= 1, "ball dimension must be at least 1");
        BallPoint {
            coords: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// Point of `C¹`.
    pub fn scalar(z: Complex64) -> Result<Self> {
        BallPoint::new(vec![z])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    /// `|z|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.coords.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `1 - |z|²`.
    pub fn slack(&self) -> f64 {
        1.0 - self.norm_sqr()
    }

    pub fn neg(&self) -> BallPoint {
        BallPoint {
            coords: self.coords.iter().map(|z| -z).collect(),
        }
    }
}

fn check_dims(z: &BallPoint, w: &BallPoint) -> Result<()> {
    if z.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            left: z.dim(),
            right: w.dim(),
        });
    }
    Ok(())
}

fn raw_inner(z: &[Complex64], w: &[Complex64]) -> Complex64 {
    z.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

/// Hermitian inner product `⟨z, w⟩ = Σ z_k conj(w_k)`.
pub fn inner(z: &BallPoint, w: &BallPoint) -> Result<Complex64> {
    check_dims(z, w)?;
    Ok(raw_inner(&z.coords, &w.coords))
}

/// The involutive automorphism exchanging `0` and `a`:
/// `φ_a(z) = (a - P_a z - s Q_a z) / (1 - ⟨z, a⟩)` with `s = √(1 - |a|²)`.
pub fn moebius_involution(a: &BallPoint, z: &BallPoint) -> Result<BallPoint> {
    check_dims(a, z)?;
    let aa = a.norm_sqr();
    let s = (1.0 - aa).sqrt();
    let za = raw_inner(&z.coords, &a.coords);
    let denom = Complex64::new(1.0, 0.0) - za;
    let coords = a
        .coords
        .iter()
        .zip(&z.coords)
        .map(|(&ak, &zk)| {
            let proj = if aa > 0.0 { za * ak / aa } else { Complex64::new(0.0, 0.0) };
            (ak - proj - s * (zk - proj)) / denom
        })
        .collect();
    BallPoint::new(coords)
}

/// The transvection moving the origin to `z`:
/// `φ_z(w) = (A_z w + z) / (1 + ⟨w, z⟩)` with
/// `A_z = √(1-|z|²) I + z z* / (1 + √(1-|z|²))`.
pub fn transvection(z: &BallPoint, w: &BallPoint) -> Result<BallPoint> {
    check_dims(z, w)?;
    let s = z.slack().sqrt();
    let wz = raw_inner(&w.coords, &z.coords);
    let denom = Complex64::new(1.0, 0.0) + wz;
    let coords = z
        .coords
        .iter()
        .zip(&w.coords)
        .map(|(&zk, &wk)| (s * wk + zk * wz / (1.0 + s) + zk) / denom)
        .collect();
    BallPoint::new(coords)
}

/// Inverse of [`transvection`]: `φ_z⁻¹ = φ_{-z}`.
pub fn transvection_inverse(z: &BallPoint, xi: &BallPoint) -> Result<BallPoint> {
    transvection(&z.neg(), xi)
}

/// `sinh² d(z, w)`, computed without cancellation for nearby points.
///
/// Uses `|1-⟨z,w⟩|² - (1-|z|²)(1-|w|²) = |z-w|² - Σ_{i<j} |z_i w_j - z_j w_i|²`.
pub fn sinh2_distance(z: &BallPoint, w: &BallPoint) -> Result<f64> {
    check_dims(z, w)?;
    let diff: f64 = z.coords.iter().zip(&w.coords).map(|(a, b)| (a - b).norm_sqr()).sum();
    let mut wedge = 0.0;
    let n = z.dim();
    for i in 0..n {
        for j in (i + 1)..n {
            wedge += (z.coords[i] * w.coords[j] - z.coords[j] * w.coords[i]).norm_sqr();
        }
    }
    Ok(((diff - wedge) / (z.slack() * w.slack())).max(0.0))
}

/// `cosh² d(z, w) = |1-⟨z,w⟩|² / ((1-|z|²)(1-|w|²))`.
pub fn cosh2_distance(z: &BallPoint, w: &BallPoint) -> Result<f64> {
    Ok(1.0 + sinh2_distance(z, w)?)
}

/// `tanh² d(z, w)`.
pub fn tanh2_distance(z: &BallPoint, w: &BallPoint) -> Result<f64> {
    let s2 = sinh2_distance(z, w)?;
    Ok(s2 / (1.0 + s2))
}

/// Bergman geodesic distance.
pub fn geodesic_distance(z: &BallPoint, w: &BallPoint) -> Result<f64> {
    Ok(sinh2_distance(z, w)?.sqrt().asinh())
}

/// Density `(1-|z|²)^{-(n+1)}` of the invariant measure against Lebesgue measure.
pub fn measure_weight(z: &BallPoint) -> f64 {
    z.slack().powi(-(z.dim() as i32 + 1))
}

/// The constant `n!/πⁿ` relating the invariant measure `dg` to
/// `(1-|z|²)^{-(n+1)} dV`.
pub fn invariant_measure_normalization(n: usize) -> f64 {
    (ln_gamma_real(n as f64 + 1.0).expect("n + 1 > 0") - n as f64 * std::f64::consts::PI.ln()).exp()
}

/// Density of `(1-|w|²)^{-n-1} dV(w)` in geodesic polar coordinates
/// `w = tanh(ρ) ζ`, integrated over the sphere:
/// `(2πⁿ/Γ(n)) sinh^{2n-1}ρ cosh ρ`.
pub fn radial_measure_density(n: usize, rho: f64) -> f64 {
    let ln_sphere = std::f64::consts::LN_2 + n as f64 * std::f64::consts::PI.ln()
        - ln_gamma_real(n as f64).expect("n >= 1");
    ln_sphere.exp() * rho.sinh().powi(2 * n as i32 - 1) * rho.cosh()
}

/// Real Jacobian determinant `((1-|a|²)/|1-⟨a,ξ⟩|²)^{n+1}` of the
/// involution `ξ ↦ φ_a(ξ)` at `ξ`.
pub fn jacobian_closed_form(a: &BallPoint, xi: &BallPoint) -> Result<f64> {
    let ax = inner(a, xi)?;
    let base = a.slack() / (Complex64::new(1.0, 0.0) - ax).norm_sqr();
    Ok(base.powi(a.dim() as i32 + 1))
}

/// Real Jacobian determinant of `ξ ↦ φ_a(ξ)` at `ξ` by central differences
/// of the underlying map on `R^{2n}`.
pub fn jacobian_finite_difference(a: &BallPoint, xi: &BallPoint, step: f64) -> Result<f64> {
    check_dims(a, xi)?;
    if !(step > 0.0 && step < 0.1) {
        return Err(Error::BadStep(step));
    }
    let n = xi.dim();
    let dim = 2 * n;
    let mut mat = vec![vec![0.0; dim]; dim];
    for col in 0..dim {
        let shifted = |h: f64| -> Result<Vec<f64>> {
            let mut coords = xi.coords.clone();
            if col % 2 == 0 {
                coords[col / 2].re += h;
            } else {
                coords[col / 2].im += h;
            }
            let img = moebius_involution(a, &BallPoint::new(coords)?)?;
            Ok(img.coords.iter().flat_map(|z| [z.re, z.im]).collect())
        };
        let plus = shifted(step)?;
        let minus = shifted(-step)?;
        for row in 0..dim {
            mat[row][col] = (plus[row] - minus[row]) / (2.0 * step);
        }
    }
    Ok(determinant(mat).abs())
}

fn determinant(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs()))
            .expect("non-empty range");
        if m[piv][k] == 0.0 {
            return 0.0;
        }
        if piv != k {
            m.swap(piv, k);
            det = -det;
        }
        det *= m[k][k];
        for i in (k + 1)..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    det
}

/// Map from geodesic polar coordinates to the ball: `tanh(ρ) ζ` with `|ζ| = 1`.
pub fn from_geodesic_polar(rho: f64, direction: &[Complex64]) -> Result<BallPoint> {
    let r = rho.tanh();
    BallPoint::new(direction.iter().map(|z| z * r).collect())
}
