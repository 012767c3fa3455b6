//! Dirichlet series of the Fourier coefficients, completed L-functions by
//! series and by Mellin quadrature, and the converse construction.

use num_complex::Complex64 as C64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::finrep::{CMat, FiniteRep, Gen, GroupWord};
use crate::maass::{automorphy_residual, standard_samples, CVec, MaassForm, EIGEN_TOL};
use crate::quad::panel_rule;
use crate::specialfn::{gamma_nu, SpectralParameter};

pub const SIGMA_MARGIN: f64 = 0.5;
pub const CONVERSE_THRESHOLD: f64 = 1e-5;
pub const DEFAULT_SPLIT: f64 = 1.0;
pub const FE_SPLIT: f64 = 0.8;

#[derive(Debug, Clone)]
pub struct DirichletData {
    coeffs: BTreeMap<i64, CVec>,
    nu: SpectralParameter,
    rep: FiniteRep,
    sigma0: f64,
}

/// Value of a truncated Dirichlet series with a bound for the omitted terms.
#[derive(Debug, Clone)]
pub struct LValue {
    pub value: CVec,
    pub tail_bound: f64,
}

impl DirichletData {
    pub fn new(nu: SpectralParameter, rep: FiniteRep, coeffs: BTreeMap<i64, CVec>) -> Result<Self> {
        let n = rep.order_t() as f64;
        for (&k, v) in &coeffs {
            if v.len() != rep.dim() {
                return Err(Error::Dimension(format!("v_{k} has length {}", v.len())));
            }
            let lam = C64::from_polar(1.0, 2.0 * PI * k as f64 / n);
            let defect = (rep.mat_t() * v - v * lam).norm();
            if defect > EIGEN_TOL * v.norm().max(1e-300) && v.norm() > 0.0 {
                return Err(Error::Input(format!("v_{k} violates eta(T) v_k = exp(2 pi i k/N) v_k (defect {defect:.2e})")));
            }
        }
        let sigma0 = 1.0 + growth_exponent(&coeffs);
        Ok(Self { coeffs, nu, rep, sigma0 })
    }

    pub fn from_form(form: &MaassForm) -> Self {
        let coeffs = form.coeffs().clone();
        let sigma0 = 1.0 + growth_exponent(&coeffs);
        Self { coeffs, nu: form.nu(), rep: form.rep().clone(), sigma0 }
    }

    pub fn sigma0(&self) -> f64 {
        self.sigma0
    }
    pub fn nu(&self) -> SpectralParameter {
        self.nu
    }
    pub fn rep(&self) -> &FiniteRep {
        &self.rep
    }
    pub fn coeffs(&self) -> &BTreeMap<i64, CVec> {
        &self.coeffs
    }
    pub fn period(&self) -> usize {
        self.rep.order_t()
    }

    fn sup(&self) -> f64 {
        self.coeffs.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn k_max(&self) -> f64 {
        self.coeffs.keys().map(|k| k.unsigned_abs()).max().unwrap_or(0) as f64
    }
}

/// Least-squares slope of log‖v_k‖ against log|k|, floored at zero.
fn growth_exponent(coeffs: &BTreeMap<i64, CVec>) -> f64 {
    let pts: Vec<(f64, f64)> = coeffs
        .iter()
        .filter(|(_, v)| v.norm() > 0.0)
        .map(|(k, v)| ((k.unsigned_abs() as f64).ln(), v.norm().ln()))
        .collect();
    if pts.len() < 3 {
        return 0.0;
    }
    // running maximum of log‖v_k‖ so sign changes and zeros do not bias the fit
    let mut by_k = pts.clone();
    by_k.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut best = f64::NEG_INFINITY;
    let env: Vec<(f64, f64)> = by_k
        .into_iter()
        .map(|(x, y)| {
            best = best.max(y);
            (x, best)
        })
        .collect();
    let n = env.len() as f64;
    let mx = env.iter().map(|p| p.0).sum::<f64>() / n;
    let my = env.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = env.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = env.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        (sxy / sxx).max(0.0)
    }
}

/// L_ε(s) = Σ_{k≠0} sign(k)^ε (N/|k|)^s v_k
pub fn dirichlet_l(d: &DirichletData, eps: u8, s: C64) -> Result<LValue> {
    if s.re <= d.sigma0 + SIGMA_MARGIN {
        return Err(Error::Divergent(format!(
            "Re s = {} is below the abscissa estimate {:.3} plus margin {SIGMA_MARGIN}",
            s.re, d.sigma0
        )));
    }
    let n = d.period() as f64;
    let mut acc = CVec::zeros(d.rep.dim());
    for (&k, v) in &d.coeffs {
        let sign = if eps == 1 && k < 0 { -1.0 } else { 1.0 };
        acc += v * (sign * C64::new(n / k.unsigned_abs() as f64, 0.0).powc(s));
    }
    let km = d.k_max().max(1.0);
    let sig = s.re - (d.sigma0 - 1.0);
    let tail = 2.0 * d.sup() * n.powf(s.re) * km.powf(1.0 - sig) / (sig - 1.0);
    Ok(LValue { value: acc, tail_bound: tail })
}

/// Γ_ν(s+ε)·L_ε(s)
pub fn completed_l_series(d: &DirichletData, eps: u8, s: C64) -> Result<LValue> {
    let l = dirichlet_l(d, eps, s)?;
    let g = gamma_nu(d.nu, s + eps as f64)?;
    Ok(LValue { value: l.value * g, tail_bound: l.tail_bound * g.norm() })
}

/// u₀ and u₁ sampled for the Mellin integrals, split at y = A:
/// L̂_ε(s) = ∫_A^∞ u_ε y^{s−1} dy + (−1)^ε η(S) ∫_{1/A}^∞ u_ε y^{−s} dy.
#[derive(Debug, Clone)]
pub struct MellinTable {
    split: f64,
    eta_s: CMat,
    upper: Vec<(f64, f64, CVec, CVec)>,
    lower: Vec<(f64, f64, CVec, CVec)>,
}

const PANEL: f64 = 0.125;

impl MellinTable {
    pub fn new(form: &MaassForm, split: f64) -> Result<Self> {
        if !(split > 0.0) {
            return Err(Error::Input(format!("split point must be positive, got {split}")));
        }
        let n = form.period() as f64;
        let y_max = 45.0 * n / (2.0 * PI) + 1.0;
        let sample = |lo: f64| -> Result<Vec<(f64, f64, CVec, CVec)>> {
            let (rs, ws) = panel_rule(lo.ln(), y_max.ln(), PANEL);
            rs.iter()
                .zip(&ws)
                .map(|(&r, &w)| {
                    let y = r.exp();
                    let j = form.jet(C64::new(0.0, y))?;
                    let u0 = j.u / C64::new(y.sqrt(), 0.0);
                    let u1 = j.ux * (C64::new(y.sqrt(), 0.0) / C64::new(0.0, 2.0 * PI));
                    Ok((r, w, u0, u1))
                })
                .collect()
        };
        for lo in [split, 1.0 / split] {
            if !form.coeffs().is_empty() && form.tail_bound(lo) > 1e-13 * form.sup_norm().max(1.0) {
                return Err(Error::Precision {
                    msg: format!("Fourier truncation too coarse at y = {lo}"),
                    estimate: form.tail_bound(lo),
                });
            }
        }
        Ok(Self { split, eta_s: form.rep().mat_s().clone(), upper: sample(split)?, lower: sample(1.0 / split)? })
    }

    pub fn split(&self) -> f64 {
        self.split
    }

    pub fn completed(&self, eps: u8, s: C64) -> CVec {
        let pick = |t: &(f64, f64, CVec, CVec)| if eps == 0 { t.2.clone() } else { t.3.clone() };
        let d = self.eta_s.nrows();
        let mut up = CVec::zeros(d);
        for t in &self.upper {
            up += pick(t) * (t.1 * (t.0 * s).exp());
        }
        let mut lo = CVec::zeros(d);
        for t in &self.lower {
            lo += pick(t) * (t.1 * (t.0 * (1.0 - s)).exp());
        }
        let sign = if eps == 0 { 1.0 } else { -1.0 };
        up + &self.eta_s * lo * C64::new(sign, 0.0)
    }

    /// The same quadrature with |u_ε| and |y^s|, a scale for cancellation.
    pub fn absolute(&self, eps: u8, sigma: f64) -> f64 {
        let pick = |t: &(f64, f64, CVec, CVec)| if eps == 0 { t.2.norm() } else { t.3.norm() };
        let up: f64 = self.upper.iter().map(|t| t.1 * pick(t) * (t.0 * sigma).exp()).sum();
        let lo: f64 = self.lower.iter().map(|t| t.1 * pick(t) * (t.0 * (1.0 - sigma)).exp()).sum();
        up + lo
    }
}

/// L̂_ε(s) by Mellin quadrature of u_ε, split at y = 1.
pub fn completed_l_mellin(form: &MaassForm, eps: u8, s: C64) -> Result<CVec> {
    Ok(MellinTable::new(form, DEFAULT_SPLIT)?.completed(eps, s))
}

/// max over the grid of ‖L̂_ε(s) − (−1)^ε η(S) L̂_ε(1−s)‖, relative to the
/// larger of the two values. The scale is floored at 1e-6 of the absolute
/// integrals of both parities, so a parity that vanishes identically reports
/// rounding rather than 0/0. The Mellin integrals are split at y = 0.8 so
/// that the two sides use different samples of u.
pub fn functional_equation_residual(form: &MaassForm, eps: u8, s_grid: &[C64]) -> Result<f64> {
    let table = MellinTable::new(form, FE_SPLIT)?;
    let sign = if eps == 0 { 1.0 } else { -1.0 };
    let mut worst: f64 = 0.0;
    for &s in s_grid {
        let a = table.completed(eps, s);
        let b = table.completed(eps, 1.0 - s);
        let floor = 1e-6
            * [0, 1, 0, 1]
                .iter()
                .zip([s.re, s.re, 1.0 - s.re, 1.0 - s.re])
                .map(|(&e, x)| table.absolute(e, x))
                .fold(0.0, f64::max);
        let scale = a.norm().max(b.norm()).max(floor);
        if scale == 0.0 {
            continue;
        }
        let r = (&a - form.rep().mat_s() * b * C64::new(sign, 0.0)).norm() / scale;
        worst = worst.max(r);
    }
    Ok(worst)
}

pub fn default_fe_grid() -> Vec<C64> {
    vec![C64::new(0.8, 0.0), C64::new(1.0, 0.5), C64::new(1.3, 0.0)]
}

#[derive(Debug, Clone)]
pub struct ConverseReport {
    pub fe_residual: [f64; 2],
    pub automorphy: f64,
    pub hypothesis_ok: bool,
}

#[derive(Debug, Clone)]
pub struct ConverseOutcome {
    pub form: MaassForm,
    pub report: ConverseReport,
}

/// Assembles the candidate u from Dirichlet data, checks both functional
/// equations on a probe grid and the automorphy of the result under S.
pub fn converse_build(d: &DirichletData) -> Result<ConverseOutcome> {
    let form = MaassForm::new(d.nu, d.rep.clone(), d.coeffs.clone())?;
    let grid = default_fe_grid();
    let fe = [functional_equation_residual(&form, 0, &grid)?, functional_equation_residual(&form, 1, &grid)?];
    let s = GroupWord::new(vec![Gen::S]);
    let automorphy = automorphy_residual(&form, &s, &standard_samples())?.value;
    let hypothesis_ok = fe.iter().all(|&r| r < CONVERSE_THRESHOLD);
    Ok(ConverseOutcome { form, report: ConverseReport { fe_residual: fe, automorphy, hypothesis_ok } })
}
