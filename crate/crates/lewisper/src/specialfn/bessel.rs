use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest |Im nu| the integral representation is tuned for.
pub const MAX_IM_NU: f64 = 50.0;

/// K_nu(t) for complex order and t > 0.
pub fn bessel_k(nu: C64, t: f64) -> Result<C64> {
    bessel_k_with_derivative(nu, t).map(|(k, _)| k)
}

/// Returns (K_nu(t), d/dt K_nu(t)).
pub fn bessel_k_with_derivative(nu: C64, t: f64) -> Result<(C64, C64)> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("K_nu(t) needs t > 0, got {t}")));
    }
    if nu.im.abs() > MAX_IM_NU {
        return Err(Error::Domain(format!("|Im nu| = {} exceeds {MAX_IM_NU}", nu.im.abs())));
    }
    // K is even in nu; fold to Im nu >= 0.
    let nu = if nu.im < 0.0 { -nu } else { nu };
    if t >= 40.0 {
        if let Some(v) = asymptotic(nu, t) {
            return Ok(v);
        }
    }
    shifted_trapezoid(nu, t)
}

// Hankel expansion; None when the terms stop shrinking before convergence.
fn asymptotic(nu: C64, t: f64) -> Option<(C64, C64)> {
    let mu = 4.0 * nu * nu;
    let mut a = C64::new(1.0, 0.0);
    let mut sum = a;
    let mut dsum = -a * (1.0 + 0.5 / t);
    let mut prev = f64::INFINITY;
    for k in 1..80 {
        let kf = k as f64;
        a *= (mu - (2.0 * kf - 1.0).powi(2)) / (8.0 * kf * t);
        let an = a.norm();
        if an > prev {
            return None;
        }
        prev = an;
        sum += a;
        dsum += -a * (1.0 + (kf + 0.5) / t);
        if an < 1e-17 * sum.norm() {
            let pre = (PI / (2.0 * t)).sqrt() * (-t).exp();
            return Some((pre * sum, pre * dsum));
        }
    }
    None
}

// K_nu(t) = 1/2 int_R exp(-t cosh u + nu u) du on the line Im u = theta,
// which passes close to the saddle so the oscillatory cancellation for
// nu = iR stays bounded.
fn shifted_trapezoid(nu: C64, t: f64) -> Result<(C64, C64)> {
    let r = nu.im;
    let half_pi = PI / 2.0;
    let theta = if r == 0.0 {
        0.0
    } else {
        let saddle = if t > r { (r / t).asin() } else { half_pi };
        let eps = (PI / 4.0).min(6.0 / r);
        saddle.min(half_pi - eps)
    };
    let d = (0.9 * (half_pi - theta)).min(1.4);
    let h = (2.0 * PI * d / (40.0 + r * d + nu.re.abs() * d)).min(0.25);
    let shift = C64::new(0.0, theta);
    let eval = |w: f64| {
        let u = C64::new(w, 0.0) + shift;
        let c = u.cosh();
        let g = (-t * c + nu * u).exp();
        (g, -c * g)
    };
    let (g0, dg0) = eval(0.0);
    let mut sum = g0;
    let mut dsum = dg0;
    let mut scale = g0.norm();
    let mut peak = g0.norm();
    let ct = t * theta.cos();
    for dir in [1.0, -1.0] {
        let mut j = 1;
        loop {
            let w = dir * j as f64 * h;
            let (g, dg) = eval(w);
            let gn = g.norm();
            sum += g;
            dsum += dg;
            scale += gn;
            peak = peak.max(gn);
            let past_peak = ct * w.cosh() > nu.re.abs() * w.abs() + 60.0;
            if (past_peak && gn < 1e-22 * peak) || w.abs() > 60.0 {
                break;
            }
            j += 1;
        }
    }
    let k = 0.5 * h * sum;
    let dk = 0.5 * h * dsum;
    scale *= 0.5 * h;
    let envelope = if t < r {
        (2.0 * PI).sqrt() * (r * r - t * t + 1.0).powf(-0.25) * (-half_pi * r).exp()
    } else {
        k.norm()
    };
    let est = 1e-16 * scale / envelope.max(f64::MIN_POSITIVE);
    if est > 1e-8 {
        return Err(Error::Precision {
            msg: format!("K_nu({t}) with nu = {nu}"),
            estimate: est,
        });
    }
    Ok((k, dk))
}

#[cfg(test)]
mod tests {
    use super::*;

    // (Re nu, Im nu, t, Re K, Im K, Re K', Im K') from a 30-digit reference.
    const TABLE: &[(f64, f64, f64, f64, f64, f64, f64)] = &[
        (0.0, 0.0, 1.0, 0.421_024_438_240_708_33, 0.0, -0.601_907_230_197_234_6, 0.0),
        (0.5, 0.0, 1.0, 0.461_068_504_447_894_56, 0.0, -0.691_602_756_671_841_8, 0.0),
        (0.3, 0.2, 2.0, 0.115_047_653_878_057_74, 0.002_859_906_036_778_139_4, -0.141_764_043_458_102_36, -0.004_742_159_487_813_822_2),
        (0.0, 9.53369, 1.3, -2.366_733_108_955_882_4e-7, 0.0, 7.012_488_232_695_997e-7, 0.0),
        (0.0, 9.53369, 0.05, -1.798_238_360_390_320_6e-7, 0.0, 3.433_920_936_063_164e-5, 0.0),
        (0.0, 9.53369, 20.0, 6.002_646_333_235_965e-11, 0.0, -5.464_907_626_668_758e-11, 0.0),
        (0.0, 9.53369, 45.0, 1.957_114_962_900_164_6e-21, 0.0, -1.935_300_889_338_659_9e-21, 0.0),
        (0.0, 50.0, 0.001, -2.693_064_873_378_196_3e-35, 0.0, -2.915_606_535_556_068_6e-31, 0.0),
        (0.0, 50.0, 30.0, -9.384_634_503_293_753e-38, 0.0, 4.108_119_667_895_782e-35, 0.0),
        (0.0, 50.0, 50.0, 2.964_787_215_150_615_3e-35, 0.0, -7.510_849_334_272_057e-36, 0.0),
        (1.0, 2.0, 5.0, 0.002_616_474_842_903_417_3, 0.001_019_786_111_183_374, -0.002_664_845_802_065_769, -0.001_250_547_159_398_041_7),
        (0.0, 15.0, 41.0, 1.967_530_179_653_396_6e-20, 0.0, -1.858_520_689_278_765e-20, 0.0),
        (2.5, 0.0, 0.01, 375_987.974_779_794_8, 0.0, -93_998_246.946_836_52, 0.0),
        (0.0, 0.5, 0.5, 0.791_734_305_412_618_1, 0.0, -1.242_873_687_972_042_5, 0.0),
        (0.0, 25.0, 24.9, 4.373_097_681_354_291e-18, 0.0, -1.368_595_326_875_189_6e-18, 0.0),
    ];

    #[test]
    fn reference_values() {
        for &(a, b, t, kr, ki, dr, di) in TABLE {
            let (k, dk) = bessel_k_with_derivative(C64::new(a, b), t).unwrap();
            let want = C64::new(kr, ki);
            let dwant = C64::new(dr, di);
            // oscillatory zone values near a zero are compared to the envelope
            let scale = if t < b { (-PI * b / 2.0).exp() } else { want.norm() };
            let dscale = if t < b { (-PI * b / 2.0).exp() * b / t } else { dwant.norm() };
            assert!((k - want).norm() / scale < 1e-10, "K nu={a}+{b}i t={t}: {k} vs {want}");
            assert!((dk - dwant).norm() / dscale < 1e-9, "K' nu={a}+{b}i t={t}: {dk} vs {dwant}");
        }
    }

    #[test]
    fn half_order_closed_form() {
        let k = bessel_k(C64::new(0.5, 0.0), 1.0).unwrap();
        let want = (PI / 2.0).sqrt() * (-1.0f64).exp();
        assert!((k.re - want).abs() < 1e-14 && k.im.abs() < 1e-15);
    }

    #[test]
    fn symmetric_in_order() {
        for nu in [C64::new(0.1, 0.0), C64::new(0.0, 0.5), C64::new(1.0, 2.0), C64::new(0.3, 0.2)] {
            for t in [0.5, 1.0, 2.0, 5.0] {
                let a = bessel_k(nu, t).unwrap();
                let b = bessel_k(-nu, t).unwrap();
                assert!((a - b).norm() <= 1e-10 * a.norm());
            }
        }
    }

    #[test]
    fn large_argument_law() {
        // the leading-term law only holds while R^2 << t
        for r in [0.0, 0.3, 0.5] {
            for t in [40.0, 55.0, 80.0] {
                let k = bessel_k(C64::new(0.0, r), t).unwrap();
                let lead = (-t).exp() * (PI / (2.0 * t)).sqrt();
                assert!((k.re / lead - 1.0).abs() < 0.01, "R={r} t={t}");
            }
        }
        // R = 15 at t = 41 is far from the leading term
        let k = bessel_k(C64::new(0.0, 15.0), 41.0).unwrap();
        let lead = (-41.0f64).exp() * (PI / 82.0).sqrt();
        assert!((k.re / lead - 1.0).abs() > 0.5);
    }

    #[test]
    fn bad_argument() {
        assert!(matches!(bessel_k(C64::new(0.0, 1.0), 0.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_k(C64::new(0.0, 60.0), 1.0), Err(Error::Domain(_))));
    }
}
