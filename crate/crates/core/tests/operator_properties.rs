use magnetic_berezin::berezin::{eigenvalue, Params};
use magnetic_berezin::geometry::{geodesic_distance, BallPoint};
use magnetic_berezin::operator::{
    apply_berezin_at, apply_berezin_radial, apply_berezin_routes, eigenfunction_inner, magnetic_operator_apply,
    reproduce, BallRule, Eigenfunction1D, RadialFunction,
};
use magnetic_berezin::QuadratureSpec;
use num_complex::Complex64;

fn p1(re: f64, im: f64) -> BallPoint {
    BallPoint::scalar(Complex64::new(re, im)).unwrap()
}

fn grid() -> BallRule {
    BallRule::Grid { angular: 16 }
}

#[test]
fn grid_routes_agree_in_one_dimension() {
    let p = Params::new(1, 2.0, 1).unwrap();
    let q = QuadratureSpec::default().with_tol(1e-9);
    let symbols: [&(dyn Fn(&BallPoint) -> f64 + Sync); 2] = [
        &|w: &BallPoint| (3.0 * w.coords()[0].re).cos(),
        &|w: &BallPoint| 1.0 / (1.0 + 4.0 * w.norm_sqr()),
    ];
    for z in [p1(0.4, 0.0), p1(0.0, -0.4), p1(-0.2828, 0.2828)] {
        for phi in symbols {
            let r = apply_berezin_routes(&p, &phi, &z, &q, grid()).unwrap();
            assert!(r.discrepancy() <= 1e-5, "z={:?}: {r:?}", z.coords());
        }
    }
}

#[test]
fn constants_are_preserved_at_translated_points() {
    let q = QuadratureSpec::default().with_tol(1e-9);
    let one = |_: &BallPoint| 1.0;
    for (p, z) in [
        (Params::new(1, 2.2, 1).unwrap(), p1(0.5, 0.3)),
        (Params::new(2, 2.5, 1).unwrap(), BallPoint::new(vec![Complex64::new(0.3, 0.0), Complex64::new(0.0, -0.4)]).unwrap()),
    ] {
        let v = apply_berezin_at(&p, &one, &z, &q, grid(), 1e-6).unwrap();
        assert!((v - 1.0).abs() < 1e-8, "n={}: {v}", p.n);
    }
}

#[test]
fn heavy_tails_are_reported_in_the_error_estimate() {
    // 2(ν-m) - n = 0.6: the kernel mass decays like e^{-1.2ρ}, slower than
    // the grid can follow before 1-|w|² runs out of digits
    let p = Params::new(1, 1.8, 1).unwrap();
    let q = QuadratureSpec::default().with_tol(1e-9);
    let r = apply_berezin_routes(&p, &|_: &BallPoint| 1.0, &p1(0.5, 0.3), &q, grid()).unwrap();
    for e in [r.direct, r.pullback] {
        assert!(e.abs_err > 1e-7, "{r:?}");
        assert!((e.value - 1.0).abs() <= e.abs_err, "{r:?}");
    }
}

#[test]
fn origin_reduces_to_the_radial_integral() {
    let q = QuadratureSpec::default().with_tol(1e-10);
    for p in [Params::new(1, 1.8, 0).unwrap(), Params::new(2, 3.0, 1).unwrap()] {
        let origin = BallPoint::origin(p.n);
        let phi = |w: &BallPoint| (-geodesic_distance(&BallPoint::origin(w.dim()), w).unwrap().tanh().powi(2)).exp();
        let ball = apply_berezin_routes(&p, &phi, &origin, &q, grid()).unwrap();
        let radial = apply_berezin_radial(&p, &RadialFunction::new(|rho: f64| (-rho.tanh().powi(2)).exp()), &q).unwrap();
        assert!((ball.direct.value - radial.value).abs() < 1e-8, "{ball:?} vs {radial:?}");
        assert!((ball.pullback.value - radial.value).abs() < 1e-8);
    }
}

#[test]
fn monte_carlo_smoke_in_three_dimensions() {
    let p = Params::new(3, 3.0, 1).unwrap();
    let q = QuadratureSpec::default().with_tol(1e-8);
    let z = BallPoint::new(vec![Complex64::new(0.2, 0.1), Complex64::new(0.0, 0.3), Complex64::new(-0.1, 0.0)]).unwrap();
    let rule = BallRule::MonteCarlo { draws: 20_000, seed: 3 };
    let mass = apply_berezin_routes(&p, &|_: &BallPoint| 1.0, &z, &q, rule).unwrap();
    // the radii are drawn from a tabulated kernel mass, so the mean carries
    // the tabulation error on top of the sampling error
    for e in [mass.direct, mass.pullback] {
        assert!((e.value - 1.0).abs() <= 5.0 * e.abs_err + q.tol, "{mass:?}");
    }
    let phi = |w: &BallPoint| w.coords()[1].re.cos();
    let again = apply_berezin_routes(&p, &phi, &z, &q, rule).unwrap();
    assert_eq!(again, apply_berezin_routes(&p, &phi, &z, &q, rule).unwrap());
    apply_berezin_at(&p, &phi, &z, &q, rule, 1e-3).unwrap();
}

#[test]
fn ground_state_in_two_dimensions() {
    // (1-|z|²)^ν spans the lowest level for every n
    let p = Params::new(2, 2.5, 0).unwrap();
    let nu = p.nu;
    let f = |w: &BallPoint| Complex64::new((1.0 - w.norm_sqr()).powf(nu), 0.0);
    for z in [
        BallPoint::origin(2),
        BallPoint::new(vec![Complex64::new(0.3, -0.2), Complex64::new(0.1, 0.4)]).unwrap(),
    ] {
        let h = magnetic_operator_apply(&p, &f, &z, 1e-3).unwrap();
        let want = f(&z) * eigenvalue(&p);
        assert!((h - want).norm() < 1e-6 * want.norm().max(1.0), "{h} vs {want}");
    }
}

#[test]
fn higher_angular_modes_vanish_at_the_origin() {
    let p = Params::new(1, 3.0, 1).unwrap();
    let q = QuadratureSpec::default().with_tol(1e-10);
    for (a, b) in [(1, 0), (2, 0), (0, 1)] {
        let e = Eigenfunction1D::new(a, b, p).unwrap();
        let v = reproduce(&p, &e, &BallPoint::origin(1), &q).unwrap();
        assert!(v.norm() < 1e-10, "(p,q)=({a},{b}): {v}");
    }
}

#[test]
fn levels_are_mutually_orthogonal() {
    let q = QuadratureSpec::default().with_tol(1e-10);
    let low = Eigenfunction1D::new(1, 0, Params::new(1, 3.0, 0).unwrap()).unwrap();
    let high = Eigenfunction1D::new(1, 0, Params::new(1, 3.0, 1).unwrap()).unwrap();
    let v = eigenfunction_inner(&low, &high, &q).unwrap();
    assert!(v.norm() < 1e-9, "{v}");
}
