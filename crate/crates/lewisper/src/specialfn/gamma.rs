use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_pole(z: C64) -> bool {
    z.im.abs() < 1e-14 && z.re <= 0.0 && (z.re - z.re.round()).abs() < 1e-14
}

/// log Gamma on Re z >= 1/2 (Lanczos).
fn ln_gamma_right(z: C64) -> C64 {
    let z = z - 1.0;
    let mut acc = C64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Complex Gamma function.
pub fn gamma(z: C64) -> Result<C64> {
    if is_pole(z) {
        return Err(Error::Pole(format!("Gamma({z})")));
    }
    if z.re < 0.5 {
        let s = (PI * z).sin();
        Ok(PI / (s * ln_gamma_right(1.0 - z).exp()))
    } else {
        Ok(ln_gamma_right(z).exp())
    }
}

/// Principal-ish log Gamma, adequate for magnitudes and ratios.
pub fn ln_gamma(z: C64) -> Result<C64> {
    if is_pole(z) {
        return Err(Error::Pole(format!("lnGamma({z})")));
    }
    if z.re < 0.5 {
        Ok(C64::new(PI.ln(), 0.0) - (PI * z).sin().ln() - ln_gamma_right(1.0 - z))
    } else {
        Ok(ln_gamma_right(z))
    }
}

/// 1/Gamma(z), entire.
pub fn rgamma(z: C64) -> C64 {
    if z.re < 0.5 {
        (PI * z).sin() * ln_gamma_right(1.0 - z).exp() / PI
    } else {
        (-ln_gamma_right(z)).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn factorials() {
        let mut f = 1.0;
        for n in 1..15 {
            assert!(rel(gamma(C64::new(n as f64, 0.0)).unwrap(), C64::new(f, 0.0)) < 1e-13);
            f *= n as f64;
        }
    }

    #[test]
    fn reflection_and_duplication() {
        let z = C64::new(0.3, 0.4);
        let lhs = gamma(z).unwrap() * gamma(1.0 - z).unwrap();
        assert!(rel(lhs, PI / (PI * z).sin()) < 1e-12);
        let x = C64::new(1.7, 0.0);
        let lhs = gamma(x / 2.0).unwrap() * gamma((x + 1.0) / 2.0).unwrap();
        let rhs = gamma(x).unwrap() * C64::new(2.0, 0.0).powc(1.0 - x) * PI.sqrt();
        assert!(rel(lhs, rhs) < 1e-12);
    }

    #[test]
    fn half_and_large_imaginary() {
        assert!(rel(gamma(C64::new(0.5, 0.0)).unwrap(), C64::new(PI.sqrt(), 0.0)) < 1e-14);
        // |Gamma(1/2 + iy)|^2 = pi / cosh(pi y)
        for y in [1.0, 10.0, 40.0] {
            let g = gamma(C64::new(0.5, y)).unwrap();
            let want = PI / (PI * y).cosh();
            assert!((g.norm_sqr() - want).abs() / want < 1e-12, "y={y}");
        }
    }

    #[test]
    fn poles_and_rgamma() {
        assert!(matches!(gamma(C64::new(-3.0, 0.0)), Err(Error::Pole(_))));
        assert!(rgamma(C64::new(-3.0, 0.0)).norm() < 1e-13);
        let z = C64::new(-2.3, 0.7);
        assert!(rel(rgamma(z), 1.0 / gamma(z).unwrap()) < 1e-12);
    }
}
