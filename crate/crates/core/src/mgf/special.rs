use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_P: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

// ln(2*pi)/2
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Principal-branch log-gamma via Lanczos (g = 7, n = 9), with reflection
/// for Re(z) < 1/2.
pub fn ln_gamma_complex(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain(format!("gamma of non-finite argument {z}")));
    }
    if is_pole(z) {
        return Err(Error::domain(format!("gamma pole at {}", z.re)));
    }
    if z.re < 0.5 {
        // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        let s = (Complex64::from(PI) * z).sin();
        let rest = ln_gamma_complex(Complex64::new(1.0, 0.0) - z)?;
        return Ok(Complex64::from(PI.ln()) - s.ln() - rest);
    }
    let z = z - 1.0;
    let mut x = Complex64::from(LANCZOS_P[0]);
    for (i, &p) in LANCZOS_P.iter().enumerate().skip(1) {
        x += p / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Ok(Complex64::from(HALF_LN_2PI) + (z + 0.5) * t.ln() - t + x.ln())
}

/// Gamma function for complex arguments.
pub fn gamma_complex(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 {
        return gamma_real(z.re).map(Complex64::from);
    }
    let g = ln_gamma_complex(z)?.exp();
    if g.re.is_finite() && g.im.is_finite() {
        Ok(g)
    } else {
        Err(Error::domain(format!("gamma overflow at {z}")))
    }
}

/// Gamma function for real arguments.
///
/// Integers up to 171 are exact products; elsewhere the Lanczos sum is
/// evaluated directly (not through the log) to keep the sign for negative
/// arguments.
pub fn gamma_real(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("gamma of non-finite argument {x}")));
    }
    if x <= 0.0 && x == x.round() {
        return Err(Error::domain(format!("gamma pole at {x}")));
    }
    if x == x.round() && x <= 171.0 {
        let mut acc = 1.0;
        let mut k = 2.0;
        while k < x {
            acc *= k;
            k += 1.0;
        }
        return Ok(acc);
    }
    if x < 0.5 {
        let g = gamma_real(1.0 - x)?;
        return Ok(PI / ((PI * x).sin() * g));
    }
    if x > 171.7 {
        return Err(Error::domain(format!("gamma overflow at {x}")));
    }
    let z = x - 1.0;
    let mut sum = LANCZOS_P[0];
    for (i, &p) in LANCZOS_P.iter().enumerate().skip(1) {
        sum += p / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    // t^(z+0.5) e^-t split in two halves to delay overflow
    let half = t.powf(0.5 * (z + 0.5));
    Ok((2.0 * PI).sqrt() * half * (half * (-t).exp()) * sum)
}

/// Principal-branch power `z^w = exp(w (ln|z| + i Arg z))`.
pub fn complex_power(z: Complex64, w: Complex64) -> Result<Complex64> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::domain("complex power with zero base"));
    }
    if w.im == 0.0 && w.re == w.re.round() && w.re.abs() <= 16.0 {
        return Ok(z.powi(w.re as i32));
    }
    Ok((w * z.ln()).exp())
}

/// `exp(w) - 1` without cancellation for small |w|.
pub(crate) fn expm1_complex(w: Complex64) -> Complex64 {
    if w.norm() < 1e-3 {
        w * (1.0 + w / 2.0 * (1.0 + w / 3.0 * (1.0 + w / 4.0 * (1.0 + w / 5.0))))
    } else {
        w.exp() - 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_small_integers_and_half() {
        assert_eq!(gamma_real(5.0).unwrap(), 24.0);
        assert_eq!(gamma_real(1.0).unwrap(), 1.0);
        assert_relative_eq!(gamma_real(0.5).unwrap(), PI.sqrt(), max_relative = 1e-14);
        // 3.5 = 2.5 * 1.5 * 0.5 * sqrt(pi)
        assert_relative_eq!(
            gamma_real(3.5).unwrap(),
            2.5 * 1.5 * 0.5 * PI.sqrt(),
            max_relative = 1e-14
        );
        assert_relative_eq!(gamma_real(3.5).unwrap(), 3.323_350_970_4, epsilon = 1e-10);
    }

    #[test]
    fn gamma_negative_non_integers() {
        // Gamma(-1/2) = -2 sqrt(pi)
        assert_relative_eq!(gamma_real(-0.5).unwrap(), -2.0 * PI.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(
            gamma_real(-1.5).unwrap(),
            4.0 / 3.0 * PI.sqrt(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn gamma_poles_rejected() {
        for x in [0.0, -1.0, -7.0] {
            assert!(matches!(gamma_real(x), Err(Error::Domain(_))));
            assert!(gamma_complex(Complex64::new(x, 0.0)).is_err());
        }
    }

    #[test]
    fn gamma_complex_matches_recurrence() {
        let z = Complex64::new(1.5, 0.5);
        let g = gamma_complex(z).unwrap();
        let g1 = gamma_complex(z + 1.0).unwrap();
        assert_relative_eq!((g1 - z * g).norm(), 0.0, epsilon = 1e-13 * g1.norm());
        // |Gamma(i y)|^2 = pi / (y sinh(pi y))
        let y = 0.7;
        let gi = gamma_complex(Complex64::new(0.0, y)).unwrap();
        assert_relative_eq!(gi.norm_sqr(), PI / (y * (PI * y).sinh()), max_relative = 1e-12);
        // conjugate symmetry
        let gc = gamma_complex(z.conj()).unwrap();
        assert_relative_eq!((gc - g.conj()).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn gamma_large_real() {
        // Gamma(100.5) via ln: lgamma(100.5) = 361.1322...
        let g = gamma_real(100.5).unwrap();
        let lg = ln_gamma_complex(Complex64::new(100.5, 0.0)).unwrap().re;
        assert_relative_eq!(g.ln(), lg, max_relative = 1e-13);
    }

    #[test]
    fn power_examples() {
        let one = Complex64::new(1.0, 0.0);
        assert_relative_eq!(
            (complex_power(one, Complex64::new(2.5, 0.0)).unwrap() - one).norm(),
            0.0,
            epsilon = 1e-15
        );
        let i = Complex64::new(0.0, 1.0);
        let m = complex_power(i, Complex64::new(2.0, 0.0)).unwrap();
        assert_relative_eq!((m + one).norm(), 0.0, epsilon = 1e-15);
        let w = complex_power(Complex64::new(1.0, 1.0), Complex64::new(0.5, 0.0)).unwrap();
        let expected = Complex64::from_polar(2f64.powf(0.25), PI / 8.0);
        assert_relative_eq!((w - expected).norm(), 0.0, epsilon = 1e-15);
        assert!(complex_power(Complex64::new(0.0, 0.0), one).is_err());
    }

    #[test]
    fn expm1_small_and_large() {
        let w = Complex64::new(1e-6, -2e-6);
        let direct = Complex64::new(
            (1e-6f64).exp() * (2e-6f64).cos() - 1.0,
            -(1e-6f64).exp() * (2e-6f64).sin(),
        );
        assert_relative_eq!((expm1_complex(w) - direct).norm(), 0.0, epsilon = 1e-17);
        let w = Complex64::new(0.5, 1.0);
        assert_relative_eq!((expm1_complex(w) - (w.exp() - 1.0)).norm(), 0.0, epsilon = 1e-15);
    }
}
