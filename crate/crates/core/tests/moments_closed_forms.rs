use std::f64::consts::PI;

use mgfm_core::mgf::{exponential_mgf, gamma_real, nig_from_standardized, nig_mgf, normal_mgf, poisson_mgf, Complex64};
use mgfm_core::moments::{
    absolute_moment, cdf, default_abscissa, expected_shortfall, integer_moment, moment_summary, nonneg_moment,
    quantile, reciprocal_gamma, tail_moment, two_sided_abscissa, vanishing_integral, MomentSpec, Side,
};
use mgfm_core::quadrature::QuadConfig;
use mgfm_core::Error;

fn q() -> QuadConfig {
    QuadConfig::default()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn normal_abs(r: f64) -> f64 {
    gamma_real(0.5 * (r + 1.0)).unwrap() * 2f64.powf(0.5 * r) / PI.sqrt()
}

#[test]
fn abscissa_defaults() {
    assert_eq!(default_abscissa(&normal_mgf(0.0, 1.0).unwrap()), 1.0);
    assert_eq!(default_abscissa(&exponential_mgf(1.0).unwrap()), 0.5);
    let nig = nig_mgf(nig_from_standardized(0.5, -1.0 / 3.0).unwrap()).unwrap();
    assert!((default_abscissa(&nig) - 0.519_615_242_3).abs() < 1e-9);
    assert!((two_sided_abscissa(&nig) - 0.519_615_242_3).abs() < 1e-9);
}

#[test]
fn normal_absolute_moments() {
    let m = normal_mgf(0.0, 1.0).unwrap();
    for r in [-0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0] {
        let v = absolute_moment(&m, &MomentSpec::new(r)).unwrap();
        assert!(rel(v.re(), normal_abs(r)) < 1e-10, "r={r}: {} vs {}", v.re(), normal_abs(r));
    }
    assert!((absolute_moment(&m, &MomentSpec::new(1.0)).unwrap().re() - (2.0 / PI).sqrt()).abs() < 1e-10);
}

#[test]
fn nig_known_moments() {
    for (xi, chi) in [(0.5, -1.0 / 3.0), (0.125, -0.0625)] {
        let m = nig_mgf(nig_from_standardized(xi, chi).unwrap()).unwrap();
        let e2 = absolute_moment(&m, &MomentSpec::new(2.0)).unwrap().re();
        let e4 = absolute_moment(&m, &MomentSpec::new(4.0)).unwrap().re();
        let k4 = 3.0 * (1.0 + 4.0 * chi * chi) / (1.0 - xi * xi);
        assert!(rel(e2, 1.0) < 1e-10, "{e2}");
        assert!(rel(e4, k4) < 1e-10, "{e4} vs {k4}");
    }
}

#[test]
fn exponential_nonneg_moments() {
    for lambda in [0.5, 1.0, 2.0] {
        let m = exponential_mgf(lambda).unwrap();
        for k in 1..=6 {
            let v = nonneg_moment(&m, &MomentSpec::new(k as f64)).unwrap().re();
            let exact = gamma_real(k as f64 + 1.0).unwrap() / lambda.powi(k);
            assert!(rel(v, exact) < 1e-10, "lambda={lambda} k={k}: {v} vs {exact}");
        }
    }
    let m2 = exponential_mgf(2.0).unwrap();
    let v = nonneg_moment(&m2, &MomentSpec::new(0.5)).unwrap().re();
    assert!(rel(v, PI.sqrt() / (2.0 * 2f64.sqrt())) < 1e-10, "{v}");
    let m1 = exponential_mgf(1.0).unwrap();
    let v = nonneg_moment(&m1, &MomentSpec::new(-0.5)).unwrap().re();
    assert!(rel(v, PI.sqrt()) < 1e-9, "{v}");
}

#[test]
fn poisson_moments_through_the_lattice() {
    let m = poisson_mgf(3.2).unwrap();
    let v = nonneg_moment(&m, &MomentSpec::new(1.0)).unwrap().re();
    assert!(rel(v, 3.2) < 1e-10, "{v}");
    let v = nonneg_moment(&m, &MomentSpec::new(2.0)).unwrap().re();
    assert!(rel(v, 3.2 + 3.2 * 3.2) < 1e-10, "{v}");
    // fractional order against the pmf sum
    let direct: f64 = (1..200)
        .map(|k| {
            let k = k as f64;
            let lp = k * 3.2f64.ln() - 3.2 - mgfm_core::mgf::ln_gamma_complex(Complex64::new(k + 1.0, 0.0)).unwrap().re;
            k.powf(0.5) * lp.exp()
        })
        .sum();
    let v = nonneg_moment(&m, &MomentSpec::new(0.5)).unwrap().re();
    assert!(rel(v, direct) < 1e-10, "{v} vs {direct}");
    let v = absolute_moment(&m, &MomentSpec::new(0.5)).unwrap().re();
    assert!(rel(v, direct) < 1e-10, "{v} vs {direct}");
    // atom at zero forbids r <= 0
    assert!(matches!(nonneg_moment(&m, &MomentSpec::new(0.0)), Err(Error::Domain(_))));
    assert!(matches!(nonneg_moment(&m, &MomentSpec::new(-0.5)), Err(Error::Domain(_))));
    // shifted below the support there is no atom
    let shifted: f64 = (0..200)
        .map(|k| {
            let kf = k as f64;
            let lp = kf * 3.2f64.ln() - 3.2 - mgfm_core::mgf::ln_gamma_complex(Complex64::new(kf + 1.0, 0.0)).unwrap().re;
            (kf + 1.0).powf(-0.5) * lp.exp()
        })
        .sum();
    let v = nonneg_moment(&m, &MomentSpec::new(-0.5).shift(-1.0)).unwrap().re();
    assert!(rel(v, shifted) < 1e-9, "{v} vs {shifted}");
}

#[test]
fn integer_moments() {
    let n = normal_mgf(0.0, 1.0).unwrap();
    assert!(integer_moment(&n, 1, 0.0, &q(), None).unwrap().re().abs() < 1e-12);
    assert!(rel(integer_moment(&n, 4, 0.0, &q(), None).unwrap().re(), 3.0) < 1e-10);
    let e = exponential_mgf(1.0).unwrap();
    let v = integer_moment(&e, 2, 1.0, &q(), None).unwrap().re();
    assert!(rel(v, 1.0) < 1e-9, "{v}");
    assert!(matches!(integer_moment(&e, 0, 0.0, &q(), None), Err(Error::Domain(_))));
}

#[test]
fn tail_moments() {
    let n = normal_mgf(0.0, 1.0).unwrap();
    let above = tail_moment(&n, 1, 0.0, Side::Above, &q(), None).unwrap().re();
    let below = tail_moment(&n, 1, 0.0, Side::Below, &q(), None).unwrap().re();
    assert!((above - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-10);
    assert!((above + below).abs() < 1e-10);
    let e = exponential_mgf(1.0).unwrap();
    assert!(rel(tail_moment(&e, 1, 0.0, Side::Above, &q(), None).unwrap().re(), 1.0) < 1e-10);
    assert!(tail_moment(&e, 1, 0.0, Side::Below, &q(), None).unwrap().re().abs() < 1e-10);
    assert!(tail_moment(&n, 2, 0.0, Side::Above, &q(), None).is_err());
    // E[X 1{X < xi}] = -phi(xi)
    for xi in [-1.0, 0.0, 1.0] {
        let b = tail_moment(&n, 1, xi, Side::Below, &q(), None).unwrap().re();
        let f = cdf(&n, xi, &q()).unwrap().value;
        let phi = (-0.5 * xi * xi).exp() / (2.0 * PI).sqrt();
        assert!((b + xi * f + phi).abs() < 1e-8, "xi={xi}");
    }
}

#[test]
fn order_preconditions() {
    let n = normal_mgf(0.0, 1.0).unwrap();
    match absolute_moment(&n, &MomentSpec::new(-1.5)) {
        Err(Error::Domain(msg)) => assert!(msg.contains("Re(r) > -1 required"), "{msg}"),
        other => panic!("{other:?}"),
    }
    let e = exponential_mgf(1.0).unwrap();
    assert!(matches!(absolute_moment(&e, &MomentSpec::new(1.0).at(1.5)), Err(Error::Domain(_))));
    assert!(matches!(nonneg_moment(&n, &MomentSpec::new(1.0)), Err(Error::Domain(_))));
}

#[test]
fn complex_order_matches_gamma() {
    // E[X^r] for Exp(1) is Gamma(r + 1)
    let e = exponential_mgf(1.0).unwrap();
    let r = Complex64::new(1.5, 0.5);
    let v = nonneg_moment(&e, &MomentSpec::complex(r)).unwrap().value;
    let exact = mgfm_core::mgf::gamma_complex(r + 1.0).unwrap();
    assert!((v - exact).norm() < 1e-9 * exact.norm(), "{v} vs {exact}");
    let v = absolute_moment(&e, &MomentSpec::complex(r)).unwrap().value;
    assert!((v - exact).norm() < 1e-9 * exact.norm(), "{v} vs {exact}");
}

#[test]
fn reciprocal_gamma_identity() {
    for r in [-0.5, 0.0, 1.0, 2.0, 2.5] {
        let v = reciprocal_gamma(r, &q()).unwrap();
        let exact = 1.0 / gamma_real(0.5 * r + 1.0).unwrap();
        assert!((v - exact).abs() < 1e-10, "r={r}: {v} vs {exact}");
    }
    assert!((reciprocal_gamma(1.0, &q()).unwrap() - 2.0 / PI.sqrt()).abs() < 1e-10);
}

#[test]
fn vanishing_integrals() {
    for x in [-0.5, -2.0] {
        for s in [0.5, 1.0] {
            for r in [0.5, 2.0] {
                let v = vanishing_integral(x, s, r, &q()).unwrap();
                assert!(v.value.abs() < 1e-9, "x={x} s={s} r={r}: {}", v.value);
            }
        }
    }
    // positive side reproduces x^r pi / Gamma(r+1)
    let v = vanishing_integral(1.5, 1.0, 0.5, &q()).unwrap().value;
    let exact = 1.5f64.powf(0.5) * PI / gamma_real(1.5).unwrap();
    assert!((v - exact).abs() < 1e-9, "{v} vs {exact}");
}

#[test]
fn risk_layer_standard_normal() {
    let n = normal_mgf(0.0, 1.0).unwrap();
    let c = cdf(&n, 1.96, &q()).unwrap();
    assert!((c.value - 0.975_002_104_851_779_5).abs() < 1e-10);
    let cases = [
        (0.01, -2.326_347_874_040_840_8, 2.665_214_220_345_808),
        (0.05, -1.644_853_626_951_472_9, 2.062_712_807_507_425_3),
        (0.5, 0.0, 0.797_884_560_802_865_4),
    ];
    for (alpha, zq, es) in cases {
        let r = expected_shortfall(&n, alpha, &q()).unwrap();
        assert!((r.quantile - zq).abs() < 1e-8, "alpha={alpha}: {}", r.quantile);
        assert!((r.expected_shortfall - es).abs() < 1e-8, "alpha={alpha}: {}", r.expected_shortfall);
    }
    assert!(quantile(&n, 0.0, &q()).is_err());
    assert!(quantile(&n, 1.0, &q()).is_err());
    let e = exponential_mgf(2.0).unwrap();
    let med = quantile(&e, 0.5, &q()).unwrap();
    assert!((med - 2f64.ln() / 2.0).abs() < 1e-8, "{med}");
    assert!(cdf(&poisson_mgf(1.0).unwrap(), 0.5, &q()).is_err());
}

#[test]
fn summaries() {
    let s = moment_summary(&normal_mgf(0.0, 1.0).unwrap(), &q()).unwrap();
    assert!(s.mean.abs() < 1e-10 && (s.stdev - 1.0).abs() < 1e-10 && s.skew.abs() < 1e-9 && (s.kurt - 3.0).abs() < 1e-9);
    let s = moment_summary(&exponential_mgf(1.0).unwrap(), &q()).unwrap();
    assert!((s.mean - 1.0).abs() < 1e-9 && (s.stdev - 1.0).abs() < 1e-9);
    assert!((s.skew - 2.0).abs() < 1e-8 && (s.kurt - 9.0).abs() < 1e-7, "{s:?}");
}

fn poisson_brute(lambda: f64, xi: f64, r: f64) -> f64 {
    let mut p = (-lambda).exp();
    let mut acc = 0.0;
    for k in 0..600 {
        if k > 0 {
            p *= lambda / k as f64;
        }
        acc += p * (k as f64 - xi).abs().powf(r);
    }
    acc
}

#[test]
fn poisson_off_lattice_shifts() {
    for lambda in [0.7, 3.2, 18.1] {
        let m = poisson_mgf(lambda).unwrap();
        for xi in [0.5, 2.3, -0.5] {
            for r in [-0.5, 0.0, 0.5, 2.0, 3.5] {
                let v = absolute_moment(&m, &MomentSpec::new(r).shift(xi)).unwrap().re();
                let b = poisson_brute(lambda, xi, r);
                assert!(rel(v, b) < 1e-10, "lambda={lambda} xi={xi} r={r}: {v} vs {b}");
            }
        }
    }
}

#[test]
fn wide_laws_move_the_default_abscissa() {
    // the integrand peak at s = 1 is e^{sigma^2 / 2}; the default shrinks
    let m = normal_mgf(0.0, 8.0).unwrap();
    for r in [0.0, 0.5, 2.0] {
        let v = absolute_moment(&m, &MomentSpec::new(r)).unwrap();
        assert!(v.abscissa < 1.0);
        let exact = normal_abs(r) * 8f64.powf(r);
        assert!(rel(v.re(), exact) < 1e-9, "r={r}: {} vs {exact}", v.re());
    }
    // narrow laws keep the documented default
    let v = absolute_moment(&normal_mgf(0.0, 1.0).unwrap(), &MomentSpec::new(0.5)).unwrap();
    assert_eq!(v.abscissa, 1.0);
}
