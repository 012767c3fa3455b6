//! Maass cusp forms stored as truncated Fourier data.

mod hejhal;

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::finrep::{format_complex, CMat, FiniteRep, GroupWord};
use crate::specialfn::{bessel_k, bessel_k_with_derivative, rgamma, SpectralParameter};

pub use hejhal::{solve_at, hejhal_solve, hejhal_solve_with, HejhalOptions, HejhalSolution, Parity};

pub type CVec = DVector<C64>;

pub const EIGEN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct MaassForm {
    nu: SpectralParameter,
    rep: FiniteRep,
    coeffs: BTreeMap<i64, CVec>,
    k_max: usize,
    sup_norm: f64,
}

/// Value with the x and y partial derivatives.
#[derive(Debug, Clone)]
pub struct Jet {
    pub u: CVec,
    pub ux: CVec,
    pub uy: CVec,
}

impl MaassForm {
    pub fn new(nu: SpectralParameter, rep: FiniteRep, coeffs: BTreeMap<i64, CVec>) -> Result<Self> {
        let d = rep.dim();
        let n = rep.order_t() as f64;
        let mut sup_norm: f64 = 0.0;
        for (&k, v) in &coeffs {
            if k == 0 {
                return Err(Error::Input("constant Fourier term must vanish for a cusp form".into()));
            }
            if v.len() != d {
                return Err(Error::Dimension(format!("v_{k} has length {}, representation has dimension {d}", v.len())));
            }
            let phase = C64::from_polar(1.0, 2.0 * PI * k as f64 / n);
            let defect = (rep.mat_t() * v - v * phase).norm();
            if defect > EIGEN_TOL * v.norm().max(f64::MIN_POSITIVE) && v.norm() > 0.0 {
                return Err(Error::Input(format!("v_{k} is not an eigenvector of eta(T) for exp(2 pi i {k}/{n}): defect {defect:.2e}")));
            }
            sup_norm = sup_norm.max(v.norm());
        }
        let k_max = coeffs.keys().map(|k| k.unsigned_abs() as usize).max().unwrap_or(0);
        Ok(Self { nu, rep, coeffs, k_max, sup_norm })
    }

    /// Trivial representation with scalar coefficients.
    pub fn scalar(nu: SpectralParameter, coeffs: &[(i64, C64)]) -> Result<Self> {
        let map = coeffs.iter().map(|&(k, c)| (k, CVec::from_element(1, c))).collect();
        Self::new(nu, FiniteRep::trivial(), map)
    }

    pub fn zero(nu: SpectralParameter, rep: FiniteRep) -> Self {
        Self::new(nu, rep, BTreeMap::new()).unwrap()
    }

    pub fn nu(&self) -> SpectralParameter {
        self.nu
    }
    pub fn rep(&self) -> &FiniteRep {
        &self.rep
    }
    pub fn period(&self) -> usize {
        self.rep.order_t()
    }
    pub fn k_max(&self) -> usize {
        self.k_max
    }
    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }
    pub fn coeffs(&self) -> &BTreeMap<i64, CVec> {
        &self.coeffs
    }
    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn coeff(&self, k: i64) -> CVec {
        self.coeffs.get(&k).cloned().unwrap_or_else(|| CVec::zeros(self.dim()))
    }

    /// First component of v_k.
    pub fn scalar_coeff(&self, k: i64) -> C64 {
        self.coeffs.get(&k).map(|v| v[0]).unwrap_or_default()
    }

    pub fn map_coeffs(&self, f: impl Fn(i64, &CVec) -> CVec) -> Result<Self> {
        let map = self.coeffs.iter().map(|(&k, v)| (k, f(k, v))).collect();
        Self::new(self.nu, self.rep.clone(), map)
    }

    /// Linear combination a·self + b·other.
    pub fn combine(&self, a: C64, other: &MaassForm, b: C64) -> Result<Self> {
        if other.dim() != self.dim() || other.period() != self.period() {
            return Err(Error::Dimension("forms live on different representations".into()));
        }
        let mut map = BTreeMap::new();
        for k in self.coeffs.keys().chain(other.coeffs.keys()) {
            map.insert(*k, self.coeff(*k) * a + other.coeff(*k) * b);
        }
        Self::new(self.nu, self.rep.clone(), map)
    }

    /// Same coefficients with v_k multiplied by `factor`.
    pub fn perturbed(&self, k: i64, factor: f64) -> Self {
        let mut c = self.clone();
        if let Some(v) = c.coeffs.get_mut(&k) {
            *v *= C64::new(factor, 0.0);
        }
        c.sup_norm = c.coeffs.values().map(|v| v.norm()).fold(0.0, f64::max);
        c
    }

    /// Bound on the omitted modes |k| > K_max at height y, assuming the
    /// missing coefficients stay below the recorded sup norm.
    pub fn tail_bound(&self, y: f64) -> f64 {
        let n = self.period() as f64;
        let k1 = (self.k_max + 1) as f64;
        let q = (-2.0 * PI * y / n).exp();
        let lead = (n / (4.0 * k1)).sqrt() * (-2.0 * PI * k1 * y / n).exp() * (1.0 + 1.0 / (2.0 * PI * k1 * y / n));
        2.0 * self.sup_norm.max(1.0) * lead / (1.0 - q)
    }

    /// A_k(y) = √y K_ν(2π|k|y/N)
    pub fn mode(&self, k: i64, y: f64) -> Result<C64> {
        let t = 2.0 * PI * k.unsigned_abs() as f64 * y / self.period() as f64;
        Ok(y.sqrt() * bessel_k(self.nu.nu, t)?)
    }

    /// Fourier sum at z with Im z > 0.
    pub fn evaluate(&self, z: C64) -> Result<CVec> {
        if !(z.im > 0.0) {
            return Err(Error::Domain(format!("Im z must be positive, got {z}")));
        }
        let n = self.period() as f64;
        let mut out = CVec::zeros(self.dim());
        let mut cache: BTreeMap<u64, C64> = BTreeMap::new();
        for (&k, v) in &self.coeffs {
            let a = match cache.get(&k.unsigned_abs()) {
                Some(&a) => a,
                None => {
                    let a = self.mode(k, z.im)?;
                    cache.insert(k.unsigned_abs(), a);
                    a
                }
            };
            out += v * (a * C64::from_polar(1.0, 2.0 * PI * k as f64 * z.re / n));
        }
        Ok(out)
    }

    /// Fourier sum with termwise x and y derivatives.
    pub fn jet(&self, z: C64) -> Result<Jet> {
        if !(z.im > 0.0) {
            return Err(Error::Domain(format!("Im z must be positive, got {z}")));
        }
        let n = self.period() as f64;
        let d = self.dim();
        let (mut u, mut ux, mut uy) = (CVec::zeros(d), CVec::zeros(d), CVec::zeros(d));
        let y = z.im;
        let sy = y.sqrt();
        let mut cache: BTreeMap<u64, (C64, C64)> = BTreeMap::new();
        for (&k, v) in &self.coeffs {
            let w = 2.0 * PI * k.unsigned_abs() as f64 / n;
            let (kv, kd) = match cache.get(&k.unsigned_abs()) {
                Some(&p) => p,
                None => {
                    let p = bessel_k_with_derivative(self.nu.nu, w * y)?;
                    cache.insert(k.unsigned_abs(), p);
                    p
                }
            };
            let e = C64::from_polar(1.0, 2.0 * PI * k as f64 * z.re / n);
            let a = sy * kv;
            let ay = kv / (2.0 * sy) + sy * w * kd;
            u += v * (a * e);
            ux += v * (a * e * C64::new(0.0, 2.0 * PI * k as f64 / n));
            uy += v * (ay * e);
        }
        Ok(Jet { u, ux, uy })
    }

    /// Value anywhere in the upper half-plane via reduction to the standard
    /// fundamental domain, u(z) = η(γ)⁻¹ u(γz).
    pub fn evaluate_anywhere(&self, z: C64) -> Result<CVec> {
        let red = reduce(z, &self.rep)?;
        Ok(&red.eta_inv * self.evaluate(red.w)?)
    }

    /// Value and partial derivatives anywhere in the upper half-plane.
    pub fn jet_anywhere(&self, z: C64) -> Result<Jet> {
        let red = reduce(z, &self.rep)?;
        let j = self.jet(red.w)?;
        // d(γz)/dz = (cz+d)^{-2}
        let m = red.matrix;
        let dw = 1.0 / (z * m[1][0] as f64 + m[1][1] as f64).powi(2);
        let uw = (&j.ux - &j.uy * C64::i()) * C64::new(0.5, 0.0);
        let uwb = (&j.ux + &j.uy * C64::i()) * C64::new(0.5, 0.0);
        let dz = &uw * dw;
        let dzb = &uwb * dw.conj();
        let ux = &red.eta_inv * (&dz + &dzb);
        let uy = &red.eta_inv * ((dz - dzb) * C64::i());
        Ok(Jet { u: &red.eta_inv * j.u, ux, uy })
    }
}

pub(crate) struct Reduction {
    pub w: C64,
    pub matrix: [[i64; 2]; 2],
    pub eta_inv: CMat,
}

/// Finds γ with γz in the standard fundamental domain.
pub(crate) fn reduce(z: C64, rep: &FiniteRep) -> Result<Reduction> {
    if !(z.im > 0.0) || !z.re.is_finite() {
        return Err(Error::Domain(format!("Im z must be positive, got {z}")));
    }
    let mut w = z;
    let mut m = [[1i64, 0], [0, 1]];
    let mut eta = rep.identity();
    let s = rep.mat_s();
    for _ in 0..10_000 {
        let n = w.re.round();
        if n != 0.0 {
            w -= n;
            let ni = n as i64;
            m = [[m[0][0] - ni * m[1][0], m[0][1] - ni * m[1][1]], m[1]];
            eta = rep.t_power(-ni) * eta;
        }
        if w.norm_sqr() < 1.0 - 1e-15 {
            w = -1.0 / w;
            m = [[-m[1][0], -m[1][1]], [m[0][0], m[0][1]]];
            eta = s * eta;
        } else {
            let eta_inv = eta.adjoint();
            return Ok(Reduction { w, matrix: m, eta_inv });
        }
    }
    Err(Error::Domain(format!("reduction of {z} did not terminate")))
}

/// Outcome of an automorphy check.
#[derive(Debug, Clone, PartialEq)]
pub struct AutomorphyResidual {
    pub value: f64,
    /// Samples whose image or preimage is too low for the truncation.
    pub low_points: usize,
}

pub const TRUNCATION_TOL: f64 = 1e-14;

/// max ‖u(γz) − η(γ)u(z)‖ over the samples, relative to the largest sample
/// value ‖u(z)‖ (the forms are normalized by v₁ = 1 and are tiny in absolute
/// terms when R is large).
pub fn automorphy_residual(form: &MaassForm, w: &GroupWord, samples: &[C64]) -> Result<AutomorphyResidual> {
    let eta = form.rep.of_word(w);
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    let mut low = 0;
    for &z in samples {
        let gz = w.act(z);
        if form.tail_bound(gz.im.min(z.im)) > TRUNCATION_TOL * form.sup_norm.max(1.0) {
            low += 1;
        }
        let u = form.evaluate(z)?;
        let ug = form.evaluate(gz)?;
        worst = worst.max((ug - &eta * &u).norm());
        scale = scale.max(u.norm());
    }
    let value = if scale > 0.0 { worst / scale } else { worst };
    Ok(AutomorphyResidual { value, low_points: low })
}

/// Twenty points z with Im z and Im(−1/z) at least 0.45.
pub fn standard_samples() -> Vec<C64> {
    (0..20)
        .map(|j| {
            let r = 0.8 + 0.45 * ((j * 7) % 20) as f64 / 19.0;
            let th = 0.6 + (PI - 1.2) * j as f64 / 19.0;
            C64::from_polar(r, th)
        })
        .collect()
}

/// ∫₀^N u(z+t) dt by the trapezoid rule with 64·N nodes.
pub fn cusp_integral_with(eval: impl Fn(C64) -> Result<CVec>, period: usize, z: C64) -> Result<CVec> {
    let nodes = 64 * period;
    let h = period as f64 / nodes as f64;
    let mut acc = eval(z)?;
    for j in 1..nodes {
        acc += eval(z + j as f64 * h)?;
    }
    Ok(acc * C64::new(h, 0.0))
}

pub fn cusp_integral(form: &MaassForm, z: C64) -> Result<CVec> {
    if !(z.im > 0.0) {
        return Err(Error::Domain(format!("Im z must be positive, got {z}")));
    }
    cusp_integral_with(|w| form.evaluate(w), form.period(), z)
}

/// 2 sign(k) (N/|k|)^ν π^{−ν−½} / Γ(½−ν) · √b K_ν(2π|k|b/N) e^{2πika/N}
pub fn poisson_basis(k: i64, nu: SpectralParameter, a: f64, b: f64, n: usize) -> Result<C64> {
    if k == 0 {
        return Err(Error::Input("k must be nonzero".into()));
    }
    if !(b > 0.0) {
        return Err(Error::Domain(format!("b must be positive, got {b}")));
    }
    let half = C64::new(0.5, 0.0) - nu.nu;
    if half.im == 0.0 && half.re <= 0.0 && half.re.fract() == 0.0 {
        return Err(Error::Pole(format!("Gamma(1/2 - nu) at nu = {}", nu.nu)));
    }
    let nf = n as f64;
    let kf = k.unsigned_abs() as f64;
    let sign = if k > 0 { 1.0 } else { -1.0 };
    let pref = 2.0 * sign * C64::new(nf / kf, 0.0).powc(nu.nu) * C64::new(PI, 0.0).powc(-nu.nu - 0.5) * rgamma(half);
    Ok(pref * b.sqrt() * bessel_k(nu.nu, 2.0 * PI * kf * b / nf)? * C64::from_polar(1.0, 2.0 * PI * k as f64 * a / nf))
}

/// 2 N^ν / (π^{ν+½} Γ(½−ν)), the constant relating the Poisson transform of
/// the boundary data to u.
pub fn poisson_constant(nu: SpectralParameter, n: usize) -> C64 {
    2.0 * C64::new(n as f64, 0.0).powc(nu.nu) * C64::new(PI, 0.0).powc(-nu.nu - 0.5) * rgamma(0.5 - nu.nu)
}

/// Poisson transform of the boundary data (coefficients |k|^ν v_k) at a + ib.
/// The lower half-plane part enters the boundary value with a minus sign,
/// which cancels the sign(k) of `poisson_basis` for k < 0.
pub fn poisson_sum(form: &MaassForm, a: f64, b: f64) -> Result<CVec> {
    let mut out = CVec::zeros(form.dim());
    for (&k, v) in form.coeffs() {
        let sign = if k > 0 { 1.0 } else { -1.0 };
        let kv = C64::new(k.unsigned_abs() as f64, 0.0).powc(form.nu().nu);
        out += v * (sign * kv * poisson_basis(k, form.nu(), a, b, form.period())?);
    }
    Ok(out)
}

/// Header values and coefficient lines of a coefficient file.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffFile {
    pub nu: C64,
    pub period: usize,
    pub dim: usize,
    pub coeffs: BTreeMap<i64, CVec>,
}

impl CoeffFile {
    pub fn into_form(self, rep: FiniteRep) -> Result<MaassForm> {
        if rep.dim() != self.dim {
            return Err(Error::Dimension(format!("file has dim = {}, representation has {}", self.dim, rep.dim())));
        }
        if rep.order_t() != self.period {
            return Err(Error::Input(format!("file has N = {}, representation has N = {}", self.period, rep.order_t())));
        }
        MaassForm::new(SpectralParameter::new(self.nu), rep, self.coeffs)
    }
}

pub fn write_coefficients(form: &MaassForm) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "nu = {:e} {:e}", form.nu.nu.re, form.nu.nu.im);
    let _ = writeln!(out, "N = {}", form.period());
    let _ = writeln!(out, "dim = {}", form.dim());
    for (k, v) in &form.coeffs {
        let _ = write!(out, "{k}");
        for z in v.iter() {
            let _ = write!(out, " {:e} {:e}", z.re, z.im);
        }
        out.push('\n');
    }
    out
}

pub fn parse_coefficients(text: &str) -> Result<CoeffFile> {
    let (mut nu, mut period, mut dim) = (None, None, None);
    let mut coeffs = BTreeMap::new();
    let perr = |line: usize, msg: String| Error::Parse { line, msg };
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some((key, val)) = line.split_once('=') {
            let val = val.trim();
            match key.trim() {
                "nu" => {
                    let p: Vec<f64> = val
                        .split_whitespace()
                        .map(|s| s.parse().map_err(|_| perr(ln, format!("bad number `{s}`"))))
                        .collect::<Result<_>>()?;
                    if p.len() != 2 {
                        return Err(perr(ln, "nu needs real and imaginary parts".into()));
                    }
                    nu = Some(C64::new(p[0], p[1]));
                }
                "N" => period = Some(val.parse().map_err(|_| perr(ln, format!("bad N `{val}`")))?),
                "dim" => dim = Some(val.parse().map_err(|_| perr(ln, format!("bad dim `{val}`")))?),
                k => return Err(perr(ln, format!("unknown key `{k}`"))),
            }
            continue;
        }
        let d: usize = dim.ok_or_else(|| perr(ln, "coefficient line before `dim =`".into()))?;
        let mut it = line.split_whitespace();
        let k: i64 = it
            .next()
            .unwrap()
            .parse()
            .map_err(|_| perr(ln, "bad index".into()))?;
        let vals: Vec<f64> = it
            .map(|s| s.parse().map_err(|_| perr(ln, format!("bad number `{s}`"))))
            .collect::<Result<_>>()?;
        if vals.len() != 2 * d {
            return Err(perr(ln, format!("expected {} numbers after the index, found {}", 2 * d, vals.len())));
        }
        if coeffs.insert(k, CVec::from_iterator(d, vals.chunks(2).map(|p| C64::new(p[0], p[1])))).is_some() {
            return Err(perr(ln, format!("duplicate index {k}")));
        }
    }
    Ok(CoeffFile {
        nu: nu.ok_or_else(|| perr(0, "missing `nu =` header".into()))?,
        period: period.ok_or_else(|| perr(0, "missing `N =` header".into()))?,
        dim: dim.ok_or_else(|| perr(0, "missing `dim =` header".into()))?,
        coeffs,
    })
}

pub fn describe(form: &MaassForm) -> String {
    format!(
        "nu = {}, N = {}, dim = {}, K_max = {}, sup |v_k| = {:.3e}",
        format_complex(form.nu.nu),
        form.period(),
        form.dim(),
        form.k_max,
        form.sup_norm
    )
}
