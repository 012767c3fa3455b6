//! Eigenvalue search for even or odd level-one cusp forms by collocation
//! on a low horocycle pulled back into the fundamental domain.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::{automorphy_residual, reduce, standard_samples, CVec, MaassForm};
use crate::error::{Error, Result};
use crate::finrep::{FiniteRep, GroupWord};
use crate::specialfn::{bessel_k, SpectralParameter};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone)]
pub struct HejhalOptions {
    pub k_max: usize,
    pub y0: f64,
    pub scan_step: f64,
    pub r_tol: f64,
    pub accept: f64,
    pub max_condition: f64,
}

impl Default for HejhalOptions {
    fn default() -> Self {
        Self { k_max: 25, y0: 0.2, scan_step: 0.01, r_tol: 1e-12, accept: 1e-6, max_condition: 1e13 }
    }
}

#[derive(Debug, Clone)]
pub struct HejhalSolution {
    pub form: MaassForm,
    pub r: f64,
    pub automorphy: f64,
    pub condition: f64,
}

struct System {
    matrix: DMatrix<f64>,
}

fn k_real(r: f64, t: f64) -> Result<f64> {
    Ok(bessel_k(C64::new(0.0, r), t)?.re)
}

fn build(r: f64, parity: Parity, m: usize, y0: f64) -> Result<System> {
    let q = 2 * m;
    let trivial = FiniteRep::trivial();
    let mut pts = Vec::with_capacity(q);
    for j in 1..=q {
        let x = (j as f64 - 0.5) / (2.0 * q as f64);
        let w = reduce(C64::new(x, y0), &trivial)?.w;
        pts.push((x, w));
    }
    let basis = |a: f64| match parity {
        Parity::Even => a.cos(),
        Parity::Odd => a.sin(),
    };
    let mut a = DMatrix::<f64>::zeros(m, m);
    for (x, w) in &pts {
        let sy = w.im.sqrt();
        for n in 1..=m {
            let kn = sy * k_real(r, 2.0 * PI * n as f64 * w.im)? * 2.0 * basis(2.0 * PI * n as f64 * w.re);
            for l in 1..=m {
                a[(l - 1, n - 1)] += kn * basis(2.0 * PI * l as f64 * x) / q as f64;
            }
        }
    }
    for l in 1..=m {
        a[(l - 1, l - 1)] -= y0.sqrt() * k_real(r, 2.0 * PI * l as f64 * y0)?;
    }
    Ok(System { matrix: a })
}

/// Solves rows 2..M with c₁ = 1; returns the row-1 defect (scaled by
/// e^{πR/2}), the coefficients and a condition estimate.
pub fn solve_at(r: f64, parity: Parity, m: usize, y0: f64) -> Result<(f64, Vec<f64>, f64)> {
    let sys = build(r, parity, m, y0)?.matrix;
    // columns decay like K(2πn y0); equilibrate before solving
    let scale: Vec<f64> = (1..m).map(|n| sys.column(n).amax().max(f64::MIN_POSITIVE)).collect();
    let mut sub = sys.view((1, 1), (m - 1, m - 1)).into_owned();
    for (j, s) in scale.iter().enumerate() {
        sub.column_mut(j).scale_mut(1.0 / s);
    }
    let rhs = -sys.view((1, 0), (m - 1, 1)).into_owned();
    let sv = sub.clone().svd(false, false).singular_values;
    let cond = sv.max() / sv.min().max(f64::MIN_POSITIVE);
    let mut sol = sub.full_piv_lu().solve(&rhs).ok_or(Error::Conditioning(f64::INFINITY))?;
    for (j, s) in scale.iter().enumerate() {
        sol[j] /= s;
    }
    let mut c = vec![1.0];
    c.extend(sol.iter());
    let defect: f64 = (0..m).map(|n| sys[(0, n)] * c[n]).sum();
    Ok((defect * (PI * r / 2.0).exp(), c, cond))
}

fn make_form(r: f64, parity: Parity, c: &[f64]) -> Result<MaassForm> {
    let mut map = BTreeMap::new();
    let sgn = if parity == Parity::Even { 1.0 } else { -1.0 };
    for (i, &cn) in c.iter().enumerate() {
        let k = (i + 1) as i64;
        map.insert(k, CVec::from_element(1, C64::new(cn, 0.0)));
        map.insert(-k, CVec::from_element(1, C64::new(sgn * cn, 0.0)));
    }
    MaassForm::new(SpectralParameter::cusp(r), FiniteRep::trivial(), map)
}

/// Illinois-modified regula falsi on a bracketing interval.
fn refine(f: &mut impl FnMut(f64) -> Result<f64>, mut a: f64, mut fa: f64, mut b: f64, mut fb: f64, tol: f64) -> Result<f64> {
    let mut side = 0;
    for _ in 0..200 {
        let c = (a * fb - b * fa) / (fb - fa);
        if (b - a).abs() < tol {
            return Ok(c);
        }
        let fc = f(c)?;
        if fc == 0.0 {
            return Ok(c);
        }
        if (fc > 0.0) == (fb > 0.0) {
            b = c;
            fb = fc;
            if side == -1 {
                fa /= 2.0;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb /= 2.0;
            }
            side = 1;
        }
        if (b - a).abs() < tol {
            return Ok((a * fb - b * fa) / (fb - fa));
        }
    }
    Ok(0.5 * (a + b))
}

pub fn hejhal_solve(window: (f64, f64), parity: Parity, k_max: usize, y0: f64) -> Result<HejhalSolution> {
    hejhal_solve_with(window, parity, &HejhalOptions { k_max, y0, ..Default::default() })
}

/// Scans the window for sign changes of the defect, refines each and keeps
/// the first root whose form passes the S-automorphy check.
pub fn hejhal_solve_with(window: (f64, f64), parity: Parity, opts: &HejhalOptions) -> Result<HejhalSolution> {
    let (lo, hi) = window;
    if !(lo > 1.0 && hi < 20.0 && lo < hi) {
        return Err(Error::Input(format!("window [{lo}, {hi}] must lie inside (1, 20)")));
    }
    if !(opts.y0 > 0.0 && opts.y0 < 3f64.sqrt() / 2.0) || opts.k_max < 3 {
        return Err(Error::Input("need 0 < y0 < sqrt(3)/2 and K_max >= 3".into()));
    }
    let m = opts.k_max;
    let mut f = |r: f64| solve_at(r, parity, m, opts.y0).map(|t| t.0);
    let steps = ((hi - lo) / opts.scan_step).ceil().max(1.0) as usize;
    let grid: Vec<f64> = (0..=steps).map(|i| lo + (hi - lo) * i as f64 / steps as f64).collect();
    let vals: Vec<f64> = grid.iter().map(|&r| f(r)).collect::<Result<_>>()?;
    let s = GroupWord::new(vec![crate::finrep::Gen::S]);
    let samples = standard_samples();
    let mut worst_cond: f64 = 0.0;
    for i in 0..steps {
        if (vals[i] > 0.0) == (vals[i + 1] > 0.0) {
            continue;
        }
        let r = refine(&mut f, grid[i], vals[i], grid[i + 1], vals[i + 1], opts.r_tol)?;
        let (_, c, cond) = solve_at(r, parity, m, opts.y0)?;
        worst_cond = worst_cond.max(cond);
        if cond > opts.max_condition {
            continue;
        }
        let form = make_form(r, parity, &c)?;
        let res = automorphy_residual(&form, &s, &samples)?.value;
        if res < opts.accept {
            return Ok(HejhalSolution { form, r, automorphy: res, condition: cond });
        }
    }
    if worst_cond > opts.max_condition {
        return Err(Error::Conditioning(worst_cond));
    }
    Err(Error::NotFound(format!("no eigenvalue R in [{lo}, {hi}] for {parity:?} forms")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_validation() {
        assert!(hejhal_solve((0.5, 2.0), Parity::Even, 25, 0.2).is_err());
        assert!(hejhal_solve((9.0, 21.0), Parity::Even, 25, 0.2).is_err());
    }

    fn first_odd() -> &'static HejhalSolution {
        static S: std::sync::OnceLock<HejhalSolution> = std::sync::OnceLock::new();
        S.get_or_init(|| hejhal_solve((9.4, 9.7), Parity::Odd, 25, 0.2).unwrap())
    }

    #[test]
    fn first_cusp_form() {
        let s = first_odd();
        assert!((s.r - 9.53369).abs() < 1e-3);
        assert!(s.automorphy < 1e-6);
        let a = |k| s.form.scalar_coeff(k).re;
        assert_eq!(a(1), 1.0);
        assert!((a(2) * a(3) - a(6)).abs() < 1e-4);
        assert!((a(2) * a(5) - a(10)).abs() < 1e-4);
        // T_2 on a prime power: a(4) = a(2)^2 - 1
        assert!((a(4) - (a(2) * a(2) - 1.0)).abs() < 1e-4);
    }

    #[test]
    fn even_form_not_in_first_window() {
        assert!(matches!(hejhal_solve((9.4, 9.7), Parity::Even, 25, 0.2), Err(Error::NotFound(_))));
        let s = hejhal_solve((13.6, 13.9), Parity::Even, 25, 0.2).unwrap();
        assert!((s.r - 13.7798).abs() < 1e-3 && s.automorphy < 1e-6);
        // even forms are real on the imaginary axis
        for y in [0.9, 1.3, 2.0] {
            assert!(s.form.evaluate(C64::new(0.0, y)).unwrap()[0].im.abs() < 1e-10 * (PI * s.r / 2.0).exp().recip());
        }
    }

    #[test]
    fn parity_of_solved_form() {
        let f = &first_odd().form;
        for z in [C64::new(0.0, 1.0), C64::new(0.0, 0.7)] {
            assert!(f.evaluate(z).unwrap().norm() < 1e-22);
        }
        let z = C64::new(0.23, 0.9);
        let u = f.evaluate(z).unwrap()[0];
        let v = f.evaluate(C64::new(-z.re, z.im)).unwrap()[0];
        assert!((u + v).norm() < 1e-12 * u.norm() && u.re.abs() < 1e-12 * u.norm());
    }

    #[test]
    fn perturbation_breaks_automorphy() {
        let f = first_odd().form.perturbed(2, 1.1).perturbed(-2, 1.1);
        let s = GroupWord::new(vec![crate::finrep::Gen::S]);
        assert!(automorphy_residual(&f, &s, &standard_samples()).unwrap().value > 1e-3);
    }

    #[test]
    fn equal_words_give_equal_residuals() {
        let f = &first_odd().form;
        let a: GroupWord = "T S".parse().unwrap();
        let b: GroupWord = "S T^-1 S T^-1".parse().unwrap();
        let ra = automorphy_residual(f, &a, &standard_samples()).unwrap().value;
        let rb = automorphy_residual(f, &b, &standard_samples()).unwrap().value;
        assert!(ra < 1e-6 && rb < 1e-6 && (ra - rb).abs() < 1e-9);
    }

    #[test]
    fn truncation_is_sound() {
        let f = &first_odd().form;
        let g = hejhal_solve((9.4, 9.7), Parity::Odd, 50, 0.2).unwrap().form;
        let mut scale: f64 = 0.0;
        let mut diff: f64 = 0.0;
        for z in [C64::new(0.1, 0.5), C64::new(-0.4, 0.6), C64::new(0.3, 1.5)] {
            let u = f.evaluate(z).unwrap();
            diff = diff.max((&u - g.evaluate(z).unwrap()).norm());
            scale = scale.max(u.norm());
        }
        assert!(diff < 1e-10 * scale, "{diff:e} {scale:e}");
    }

    #[test]
    fn poisson_transform_on_solved_form() {
        let f = &first_odd().form;
        let lhs = super::super::poisson_sum(f, 0.1, 1.2).unwrap();
        let rhs = f.evaluate(C64::new(0.1, 1.2)).unwrap() * super::super::poisson_constant(f.nu(), 1);
        assert!((&lhs - &rhs).norm() < 1e-7 * rhs.norm());
    }

    #[test]
    fn empty_window() {
        let e = hejhal_solve((9.0, 9.2), Parity::Even, 25, 0.2).unwrap_err();
        assert!(matches!(e, Error::NotFound(_)), "{e:?}");
    }
}
