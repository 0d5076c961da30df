use approx::assert_relative_eq;
use mgfm_core::mgf::{nig_from_standardized, nig_mgf, NigParams};
use mgfm_core::moments::{absolute_moment, MomentKind, MomentSpec};
use mgfm_core::oracle::{accurate_digits, density_moment, mc_moment, nig_density, sample_nig, Samples};
use mgfm_core::quadrature::{integrate_half_line, QuadConfig};
use mgfm_core::Error;
use rand::SeedableRng;
use rand_distr::{Distribution, Exp, StandardNormal};

fn standardized() -> NigParams {
    nig_from_standardized(0.5, -1.0 / 3.0).unwrap()
}

fn samples(values: Vec<f64>) -> Samples {
    Samples { values, seed: 0 }
}

#[test]
fn density_integrates_to_one() {
    let p = standardized();
    assert_relative_eq!(density_moment(&p, 0.0, 0.0, &QuadConfig::default()).unwrap(), 1.0, epsilon = 1e-9);
    let shifted = NigParams::new(0.3, 0.7, 2.0, 1.2).unwrap();
    assert_relative_eq!(density_moment(&shifted, 0.0, 0.3, &QuadConfig::default()).unwrap(), 1.0, epsilon = 1e-9);
}

#[test]
fn symmetric_density_is_even() {
    let p = NigParams::new(0.0, 1.3, 2.0, 0.0).unwrap();
    for x in [0.1, 1.0, 3.7, 12.0] {
        assert_relative_eq!(nig_density(&p, x).unwrap(), nig_density(&p, -x).unwrap(), max_relative = 1e-15);
    }
}

#[test]
fn density_skews_like_the_mgf() {
    // mean from the density equals the mean implied by the MGF
    let p = NigParams::new(0.2, 0.9, 2.5, 1.1).unwrap();
    let cfg = QuadConfig::default();
    let up = integrate_half_line(|u| u * nig_density(&p, u).unwrap(), &cfg).unwrap().value;
    let down = integrate_half_line(|u| u * nig_density(&p, -u).unwrap(), &cfg).unwrap().value;
    assert_relative_eq!(up - down, p.mean(), max_relative = 1e-9);
}

#[test]
fn standardized_density_moments() {
    let p = standardized();
    let quad = QuadConfig::default();
    assert!((density_moment(&p, 2.0, 0.0, &quad).unwrap() - 1.0).abs() < 1e-8);
    assert!((density_moment(&p, 4.0, 0.0, &quad).unwrap() - 52.0 / 9.0).abs() < 1e-7);
    assert!((density_moment(&p, 0.0, 0.0, &quad).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn density_and_contour_moments_agree() {
    let p = standardized();
    let m = nig_mgf(p).unwrap();
    let quad = QuadConfig::default();
    for r in [-0.5, 0.5, 1.0, 2.0, 3.0, 4.0] {
        let d = density_moment(&p, r, 0.0, &quad).unwrap();
        let c = absolute_moment(&m, &MomentSpec::new(r)).unwrap().re();
        assert!(((d - c) / c).abs() < 1e-7, "r = {r}: density {d}, contour {c}");
    }
}

#[test]
fn density_moment_rejects_low_order() {
    assert!(matches!(density_moment(&standardized(), -1.0, 0.0, &QuadConfig::default()), Err(Error::Domain(_))));
}

#[test]
fn nig_sampler_mean_and_variance() {
    let p = standardized();
    let n = 1_000_000;
    let s = sample_nig(&p, n, 2024).unwrap();
    let mean = mc_moment(&s, 1.0, 0.0, MomentKind::Integer).unwrap();
    assert!(mean.estimate.abs() < 4.0 / (n as f64).sqrt(), "{mean:?}");
    let second = mc_moment(&s, 2.0, mean.estimate, MomentKind::Integer).unwrap();
    assert!(second.z_score(1.0) < 4.0, "{second:?}");
}

#[test]
fn nig_sampler_is_reproducible() {
    let p = standardized();
    let a = sample_nig(&p, 1000, 7).unwrap();
    let b = sample_nig(&p, 1000, 7).unwrap();
    let c = sample_nig(&p, 1000, 8).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.values, c.values);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let d = pool.install(|| sample_nig(&p, 1000, 7).unwrap());
    assert_eq!(a, d);
}

#[test]
fn mc_moment_trivial_cases() {
    let r = mc_moment(&samples(vec![1.5; 100]), 2.0, 0.0, MomentKind::Absolute).unwrap();
    assert_eq!(r.estimate, 2.25);
    assert_eq!(r.std_err, 0.0);
    assert_eq!(r.n, 100);

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let exp = Exp::new(1.0).unwrap();
    let xs: Vec<f64> = (0..200_000).map(|_| exp.sample(&mut rng)).collect();
    let r = mc_moment(&samples(xs), 1.0, 0.0, MomentKind::NonNegative).unwrap();
    assert!(r.z_score(1.0) < 4.0);

    let zs: Vec<f64> = (0..200_000).map(|_| StandardNormal.sample(&mut rng)).collect();
    let r = mc_moment(&samples(zs.clone()), 4.0, 0.0, MomentKind::Absolute).unwrap();
    assert!(r.z_score(3.0) < 4.0);
    assert!(matches!(mc_moment(&samples(zs), 0.5, 0.0, MomentKind::NonNegative), Err(Error::Domain(_))));
}

#[test]
fn accurate_digits_examples() {
    assert_relative_eq!(accurate_digits(1.0, 1_000_000).unwrap(), 3.0, epsilon = 1e-12);
    assert_relative_eq!(accurate_digits(0.99, 1_000_000).unwrap(), 3.004364805402450, epsilon = 1e-12);
    assert_relative_eq!(accurate_digits(10.0, 100).unwrap(), 0.0, epsilon = 1e-12);
    assert!(matches!(accurate_digits(0.0, 10), Err(Error::Domain(_))));
}
