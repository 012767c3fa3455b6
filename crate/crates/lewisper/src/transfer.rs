//! The transfer operators ℒ₀ and ℒ∞, the obstructions Q₀ and Q∞, the
//! coefficients C*ₘ and Taylor-basis discretizations with their spectra.
//!
//! ℒ₀ψ(x) = x^{−a} Σ_{n≥0} (n+1/x)^{−a} η(T(T′)ⁿ)⁻¹ ψ(1 + 1/(n+1/x))
//! ℒ∞ψ(x) = Σ_{n≥1} (n+x)^{−a} η(T′Tⁿ⁻¹)⁻¹ ψ(1 − 1/(n+x))
//! with a = 2ν+1. The Gauss kind uses the ℒ∞ weights with the argument
//! 1/(n+x); it is the classical continued-fraction operator for trivial η.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::finrep::{CMat, FiniteRep, Gen};
use crate::lewis::Evaluator;
use crate::maass::CVec;
use crate::specialfn::{bernoulli_f64, hurwitz_continued, hurwitz_zeta, SpectralParameter};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransferKind {
    L0,
    Linf,
    Gauss,
}

impl std::str::FromStr for TransferKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l0" => Ok(Self::L0),
            "linf" => Ok(Self::Linf),
            "gauss" => Ok(Self::Gauss),
            _ => Err(Error::Input(format!("unknown operator kind {s:?} (expected L0, Linf or Gauss)"))),
        }
    }
}

pub const TAYLOR_ORDER: usize = 12;
pub const DEFAULT_N_MAX: usize = 10_000;
const REG_TERMS: usize = 200;
const REG_START: f64 = 4.0;
const TAIL_TOL: f64 = 1e-6;

/// The matrices A_n, periodic in n with period N.
struct Classes {
    n0: usize,
    mats: Vec<CMat>,
}

impl Classes {
    fn new(kind: TransferKind, rep: &FiniteRep) -> Self {
        let n = rep.order_t();
        let t = rep.generator(Gen::T);
        let tp = rep.generator(Gen::TP);
        let mut mats = Vec::with_capacity(n);
        let n0 = if kind == TransferKind::L0 { 0 } else { 1 };
        let mut acc = rep.identity();
        for _ in 0..n {
            let word = match kind {
                TransferKind::L0 => &t * &acc,
                _ => &tp * &acc,
            };
            mats.push(word.adjoint());
            acc = match kind {
                TransferKind::L0 => acc * &tp,
                _ => acc * &t,
            };
        }
        Self { n0, mats }
    }

    fn period(&self) -> usize {
        self.mats.len()
    }

    fn get(&self, n: usize) -> &CMat {
        &self.mats[(n - self.n0) % self.period()]
    }

    /// First n ≥ start in each class, in class order.
    fn starts(&self, start: usize) -> Vec<usize> {
        let p = self.period();
        (0..p)
            .map(|i| {
                let base = start.max(self.n0);
                let off = (i + p - (base - self.n0) % p) % p;
                base + off
            })
            .collect()
    }
}

/// Expansion point p and sign σ with argument p + σ/(n+c).
fn argument(kind: TransferKind) -> (f64, f64) {
    match kind {
        TransferKind::L0 => (1.0, 1.0),
        TransferKind::Linf => (1.0, -1.0),
        TransferKind::Gauss => (0.0, 1.0),
    }
}

/// Taylor coefficients of ψ at `center` from a Cauchy integral.
pub fn taylor_coefficients(psi: &dyn Evaluator, center: f64, radius: f64, order: usize) -> Result<Vec<CVec>> {
    let m = 64.max(2 * order + 16);
    let mut out: Vec<CVec> = Vec::new();
    for j in 0..m {
        let th = 2.0 * PI * j as f64 / m as f64;
        let v = psi.eval(C64::new(center, 0.0) + C64::from_polar(radius, th))?;
        if out.is_empty() {
            out = vec![CVec::zeros(v.len()); order + 1];
        }
        for (k, c) in out.iter_mut().enumerate() {
            *c += &v * (C64::from_polar(radius.powi(-(k as i32)), -(k as f64) * th) / m as f64);
        }
    }
    Ok(out)
}

fn default_taylor(psi: &dyn Evaluator, kind: TransferKind) -> Result<Vec<CVec>> {
    let (p, _) = argument(kind);
    let r = if p == 0.0 { 0.25 } else { 0.5 };
    taylor_coefficients(psi, p, r, TAYLOR_ORDER + 1)
}

fn power(base: C64, expo: C64) -> C64 {
    (-expo * base.ln()).exp()
}

/// Σ_{n≥n0} (n+c)^{−a} A_n ψ(p + σ/(n+c)): n < n_max directly, the rest from
/// the Taylor data through Hurwitz zeta values.
fn series_direct(psi: &dyn Evaluator, nu: SpectralParameter, kind: TransferKind, cls: &Classes, c: C64, n_max: usize, taylor: &[CVec]) -> Result<(CVec, f64)> {
    let a = nu.s_weight();
    let (p, sigma) = argument(kind);
    let d = taylor[0].len();
    let mut acc = CVec::zeros(d);
    for n in cls.n0..n_max.max(cls.n0) {
        let w = c + n as f64;
        acc += cls.get(n) * psi.eval(p + sigma / w)? * power(w, a);
    }
    let nn = cls.period() as f64;
    let order = taylor.len() - 1;
    let mut err = 0.0;
    for start in cls.starts(n_max) {
        let mut part = CVec::zeros(d);
        for (m, dm) in taylor.iter().enumerate() {
            let b = a + m as f64;
            let z = hurwitz_zeta(b, (c + start as f64) / nn)? * power(C64::new(nn, 0.0), b);
            let term = dm * (z * sigma.powi(m as i32));
            if m == order {
                err += term.norm();
            } else {
                part += term;
            }
        }
        acc += cls.get(start) * part;
    }
    Ok((acc, err))
}

/// The same series with the Taylor polynomial subtracted termwise and
/// restored through the continued Hurwitz zeta; meaningful for any ν.
fn series_regularized(psi: &dyn Evaluator, nu: SpectralParameter, kind: TransferKind, cls: &Classes, c: C64, taylor: &[CVec]) -> Result<(CVec, f64)> {
    let a = nu.s_weight();
    let (p, sigma) = argument(kind);
    let d = taylor[0].len();
    let order = taylor.len() - 1;
    let used = &taylor[..order];
    let mut acc = CVec::zeros(d);
    // the first terms have |h| too large for the Taylor polynomial
    let first = cls.n0.max((REG_START - c.re).ceil().max(0.0) as usize);
    for n in cls.n0..first {
        let w = c + n as f64;
        acc += cls.get(n) * psi.eval(p + sigma / w)? * power(w, a);
    }
    for n in first..REG_TERMS.max(first + 1) {
        let w = c + n as f64;
        let h = sigma / w;
        let mut poly = CVec::zeros(d);
        let mut hp = C64::new(1.0, 0.0);
        for dm in used {
            poly += dm * hp;
            hp *= h;
        }
        acc += cls.get(n) * (psi.eval(p + h)? - poly) * power(w, a);
    }
    let nn = cls.period() as f64;
    for start in cls.starts(first) {
        let mut part = CVec::zeros(d);
        for (m, dm) in used.iter().enumerate() {
            let b = a + m as f64;
            if (b - 1.0).norm() < 1e-12 {
                return Err(Error::Pole(format!("zeta({b}, .)")));
            }
            let z = hurwitz_continued(b, (c + start as f64) / nn) * power(C64::new(nn, 0.0), b);
            part += dm * (z * sigma.powi(m as i32));
        }
        acc += cls.get(start) * part;
    }
    // omitted terms behave like D_M h^M (n+c)^{−a}
    let b = a.re + order as f64 - 1.0;
    let err = taylor[order].norm() * (REG_TERMS as f64).powf(-b) / b;
    Ok((acc, err))
}

fn require_convergent(nu: SpectralParameter) -> Result<()> {
    if nu.nu.re <= 0.0 {
        return Err(Error::Divergent(format!("the transfer series needs Re nu > 0, got {}", nu.nu)));
    }
    Ok(())
}

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("x must be positive, got {x}")));
    }
    Ok(())
}

fn apply(kind: TransferKind, psi: &dyn Evaluator, nu: SpectralParameter, rep: &FiniteRep, x: f64, n_max: usize) -> Result<CVec> {
    require_convergent(nu)?;
    check_x(x)?;
    let taylor = default_taylor(psi, kind)?;
    let cls = Classes::new(kind, rep);
    let c = if kind == TransferKind::L0 { 1.0 / x } else { x };
    let (v, err) = series_direct(psi, nu, kind, &cls, C64::new(c, 0.0), n_max, &taylor)?;
    if err > TAIL_TOL * v.norm().max(1.0) {
        return Err(Error::Precision { msg: format!("series tail at n_max = {n_max}"), estimate: err });
    }
    Ok(if kind == TransferKind::L0 { v * power(C64::new(x, 0.0), nu.s_weight()) } else { v })
}

pub fn apply_l0(psi: &dyn Evaluator, nu: SpectralParameter, rep: &FiniteRep, x: f64, n_max: usize) -> Result<CVec> {
    apply(TransferKind::L0, psi, nu, rep, x, n_max)
}

pub fn apply_linf(psi: &dyn Evaluator, nu: SpectralParameter, rep: &FiniteRep, x: f64, n_max: usize) -> Result<CVec> {
    apply(TransferKind::Linf, psi, nu, rep, x, n_max)
}

pub fn apply_gauss(psi: &dyn Evaluator, nu: SpectralParameter, rep: &FiniteRep, x: f64, n_max: usize) -> Result<CVec> {
    apply(TransferKind::Gauss, psi, nu, rep, x, n_max)
}

pub fn apply_kind(kind: TransferKind, psi: &dyn Evaluator, nu: SpectralParameter, rep: &FiniteRep, x: f64, n_max: usize) -> Result<CVec> {
    apply(kind, psi, nu, rep, x, n_max)
}

/// ℒ₀ψ or ℒ∞ψ at any ν through the Hurwitz-regularized series; agrees with
/// the plain series when Re ν > 0.
pub fn apply_regularized(kind: TransferKind, psi: &dyn Evaluator, nu: SpectralParameter, rep: &FiniteRep, x: f64, order: usize) -> Result<CVec> {
    check_x(x)?;
    let (p, _) = argument(kind);
    let r = if p == 0.0 { 0.25 } else { 0.5 };
    let taylor = taylor_coefficients(psi, p, r, order + 1)?;
    let cls = Classes::new(kind, rep);
    let c = if kind == TransferKind::L0 { 1.0 / x } else { x };
    let (v, err) = series_regularized(psi, nu, kind, &cls, C64::new(c, 0.0), &taylor)?;
    if err > TAIL_TOL * v.norm().max(1.0) {
        return Err(Error::Precision { msg: "regularized series tail".into(), estimate: err });
    }
    Ok(if kind == TransferKind::L0 { v * power(C64::new(x, 0.0), nu.s_weight()) } else { v })
}

/// Q₀(x) = x^{−a}ψ(1/x) − Σ_{n≥0} (n+x)^{−a} η(T(T′)ⁿ)⁻¹ ψ(1+1/(n+x)),
/// Hurwitz-regularized so that it is defined for every ν.
pub fn q0_with_taylor(psi: &dyn Evaluator, nu: SpectralParameter, rep: &FiniteRep, x: f64, taylor: &[CVec]) -> Result<CVec> {
    check_x(x)?;
    let cls = Classes::new(TransferKind::L0, rep);
    let (s, err) = series_regularized(psi, nu, TransferKind::L0, &cls, C64::new(x, 0.0), taylor)?;
    let head = psi.eval(C64::new(1.0 / x, 0.0))? * power(C64::new(x, 0.0), nu.s_weight());
    if err > TAIL_TOL * head.norm().max(1.0) {
        return Err(Error::Precision { msg: "regularized series tail".into(), estimate: err });
    }
    Ok(head - s)
}

/// Q∞(x) = ψ(x) − Σ_{n≥1} (n+x)^{−a} η(T′Tⁿ⁻¹)⁻¹ ψ(1−1/(n+x)), regularized.
pub fn qinf_with_taylor(psi: &dyn Evaluator, nu: SpectralParameter, rep: &FiniteRep, x: f64, taylor: &[CVec]) -> Result<CVec> {
    check_x(x)?;
    let cls = Classes::new(TransferKind::Linf, rep);
    let (s, err) = series_regularized(psi, nu, TransferKind::Linf, &cls, C64::new(x, 0.0), taylor)?;
    let head = psi.eval(C64::new(x, 0.0))?;
    if err > TAIL_TOL * head.norm().max(1.0) {
        return Err(Error::Precision { msg: "regularized series tail".into(), estimate: err });
    }
    Ok(head - s)
}

pub fn q0_compute(psi: &dyn Evaluator, nu: SpectralParameter, rep: &FiniteRep, x: f64, order: usize) -> Result<CVec> {
    q0_with_taylor(psi, nu, rep, x, &taylor_coefficients(psi, 1.0, 0.5, order + 1)?)
}

pub fn qinf_compute(psi: &dyn Evaluator, nu: SpectralParameter, rep: &FiniteRep, x: f64, order: usize) -> Result<CVec> {
    qinf_with_taylor(psi, nu, rep, x, &taylor_coefficients(psi, 1.0, 0.5, order + 1)?)
}

/// Q₀ and Q∞ by plain summation, for Re ν > 0.
pub fn q0_direct(psi: &dyn Evaluator, nu: SpectralParameter, rep: &FiniteRep, x: f64, n_max: usize) -> Result<CVec> {
    let head = psi.eval(C64::new(1.0 / x, 0.0))? * power(C64::new(x, 0.0), nu.s_weight());
    Ok(head - apply_l0(psi, nu, rep, 1.0 / x, n_max)? * power(C64::new(1.0 / x, 0.0), -nu.s_weight()))
}

pub fn qinf_direct(psi: &dyn Evaluator, nu: SpectralParameter, rep: &FiniteRep, x: f64, n_max: usize) -> Result<CVec> {
    Ok(psi.eval(C64::new(x, 0.0))? - apply_linf(psi, nu, rep, x, n_max)?)
}

fn binomial(z: C64, k: usize) -> C64 {
    (0..k).fold(C64::new(1.0, 0.0), |acc, i| acc * (z - i as f64) / (i + 1) as f64)
}

fn bernoulli_poly(k: usize, x: f64) -> Result<f64> {
    let mut s = 0.0;
    for j in 0..=k {
        s += binomial(C64::new(k as f64, 0.0), j).re * bernoulli_f64(j)? * x.powi((k - j) as i32);
    }
    Ok(s)
}

/// C*ₘ for m = −1..=M−1 from C₀..C_M (entry i is m = i−1):
/// C*ₘ = 1/(m+a) Σ_{k=0}^{m+1} (−1)^k binom(m+a, k) β_k C_{m+1−k},
/// β_k = N^{k−1} Σ_r η(T(T′)^r)⁻¹ B_k(r/N), which is B_k for trivial η.
pub fn cstar_coeffs(taylor: &[CVec], nu: SpectralParameter, rep: &FiniteRep) -> Result<Vec<CVec>> {
    if taylor.is_empty() {
        return Ok(Vec::new());
    }
    let a = nu.s_weight();
    let cls = Classes::new(TransferKind::L0, rep);
    let nn = cls.period();
    let top = taylor.len() - 1;
    let mut beta = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let mut b = CMat::zeros(rep.dim(), rep.dim());
        for r in 0..nn {
            b += cls.get(r) * C64::new(bernoulli_poly(k, r as f64 / nn as f64)?, 0.0);
        }
        beta.push(b * C64::new((nn as f64).powi(k as i32 - 1), 0.0));
    }
    let mut out = Vec::with_capacity(top + 1);
    for i in 0..=top {
        let m = i as i64 - 1;
        let z = a + m as f64;
        if z.norm() < 1e-14 {
            return Err(Error::Degenerate(format!("m + 2nu + 1 = 0 at m = {m}")));
        }
        let mut acc = CVec::zeros(rep.dim());
        for k in 0..=i {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            acc += &beta[k] * &taylor[i - k] * (binomial(z, k) * sign);
        }
        out.push(acc / z);
    }
    Ok(out)
}

/// A transfer operator on the Taylor basis ((x−c)/ρ)^k ⊗ e_j.
#[derive(Debug, Clone)]
pub struct TransferOperatorDisc {
    pub kind: TransferKind,
    pub nu: SpectralParameter,
    pub rep: FiniteRep,
    pub basis_size: usize,
    pub n_max: usize,
    pub center: f64,
    pub radius: f64,
    pub matrix: CMat,
}

pub const DEFAULT_BASIS: usize = 40;
const DISC_N_MAX: usize = 64;

impl TransferOperatorDisc {
    pub fn new(kind: TransferKind, nu: SpectralParameter, rep: &FiniteRep, basis_size: usize) -> Result<Self> {
        require_convergent(nu)?;
        if basis_size == 0 {
            return Err(Error::Input("basis size must be positive".into()));
        }
        let radius = if kind == TransferKind::Gauss { 1.5 } else { 0.75 };
        let center = 1.0;
        let cls = Classes::new(kind, rep);
        let d = rep.dim();
        let np = 2 * basis_size + 32;
        // DFT of each class's scalar image over the circle |x − c| = ρ
        let mut spec = vec![vec![vec![C64::new(0.0, 0.0); basis_size]; basis_size]; cls.period()];
        for p in 0..np {
            let th = 2.0 * PI * p as f64 / np as f64;
            let x = center + C64::from_polar(radius, th);
            let img = class_images(kind, nu, &cls, x, radius, basis_size)?;
            for (r, rows) in img.iter().enumerate() {
                for (k, &v) in rows.iter().enumerate() {
                    for m in 0..basis_size {
                        spec[r][m][k] += v * C64::from_polar(1.0 / np as f64, -(m as f64) * th);
                    }
                }
            }
        }
        let mut matrix: CMat = DMatrix::zeros(basis_size * d, basis_size * d);
        for (r, s) in spec.iter().enumerate() {
            let a = &cls.mats[r];
            for m in 0..basis_size {
                for k in 0..basis_size {
                    let coef = s[m][k];
                    for i in 0..d {
                        for j in 0..d {
                            matrix[(m * d + i, k * d + j)] += a[(i, j)] * coef;
                        }
                    }
                }
            }
        }
        if matrix.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Precision { msg: "non-finite matrix entry".into(), estimate: f64::INFINITY });
        }
        Ok(Self { kind, nu, rep: rep.clone(), basis_size, n_max: DISC_N_MAX, center, radius, matrix })
    }

    /// The function with coefficient vector `v` at x.
    pub fn basis_eval(&self, v: &CVec, x: C64) -> CVec {
        let d = self.rep.dim();
        let t = (x - self.center) / self.radius;
        let mut out = CVec::zeros(d);
        let mut tp = C64::new(1.0, 0.0);
        for k in 0..self.basis_size {
            for j in 0..d {
                out[j] += v[k * d + j] * tp;
            }
            tp *= t;
        }
        out
    }
}

/// For each class r, the scalar s_r(x, k) with
/// L[((·−c)/ρ)^k e_j](x) = Σ_r A_r e_j s_r(x, k).
fn class_images(kind: TransferKind, nu: SpectralParameter, cls: &Classes, x: C64, rho: f64, kmax: usize) -> Result<Vec<Vec<C64>>> {
    let a = nu.s_weight();
    let nn = cls.period() as f64;
    let starts = cls.starts(cls.n0);
    let mut out = vec![vec![C64::new(0.0, 0.0); kmax]; cls.period()];
    match kind {
        TransferKind::Linf | TransferKind::L0 => {
            // both reduce to Hurwitz zeta values: (∓1/ρ)^k Σ (n+c)^{−a−k}
            let (c, pre, sign) = match kind {
                TransferKind::L0 => (1.0 / x, power(x, a), 1.0),
                _ => (x, C64::new(1.0, 0.0), -1.0),
            };
            for (r, &st) in starts.iter().enumerate() {
                for k in 0..kmax {
                    let b = a + k as f64;
                    let z = hurwitz_zeta(b, (c + st as f64) / nn)? * power(C64::new(nn, 0.0), b);
                    out[r][k] = pre * z * (sign / rho).powi(k as i32);
                }
            }
        }
        TransferKind::Gauss => {
            for n in cls.n0..DISC_N_MAX {
                let r = (n - cls.n0) % cls.period();
                let w = x + n as f64;
                let wa = power(w, a);
                let q = (1.0 / w - 1.0) / rho;
                let mut qk = C64::new(1.0, 0.0);
                for k in 0..kmax {
                    out[r][k] += wa * qk;
                    qk *= q;
                }
            }
            // tail: ((h−1)/ρ)^k = ρ^{−k} Σ_j binom(k,j) (−1)^{k−j} h^j with h = 1/(n+x)
            for (r, &st) in cls.starts(DISC_N_MAX).iter().enumerate() {
                let mut zs = Vec::with_capacity(kmax);
                for j in 0..kmax {
                    let b = a + j as f64;
                    zs.push(hurwitz_zeta(b, (x + st as f64) / nn)? * power(C64::new(nn, 0.0), b));
                }
                for k in 0..kmax {
                    let mut s = C64::new(0.0, 0.0);
                    let mut bin = 1.0;
                    for j in 0..=k {
                        let sign = if (k - j) % 2 == 0 { 1.0 } else { -1.0 };
                        s += zs[j] * (sign * bin);
                        bin *= (k - j) as f64 / (j + 1) as f64;
                    }
                    out[r][k] += s * rho.powi(-(k as i32));
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Descending modulus.
    pub eigenvalues: Vec<C64>,
    /// Coefficient vectors in the fine discretization's basis.
    pub eigenvectors: Vec<CVec>,
    pub coarse: Vec<C64>,
    pub drift: f64,
    pub converged: bool,
    pub fine: TransferOperatorDisc,
}

pub const CONVERGENCE_TOL: f64 = 1e-6;

fn sorted_eigenvalues(m: &CMat) -> Result<Vec<C64>> {
    let ev = m
        .clone()
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::NotFound("Schur decomposition did not converge".into()))?;
    let mut v: Vec<C64> = ev.iter().copied().collect();
    v.sort_by(|a, b| b.norm().partial_cmp(&a.norm()).unwrap());
    Ok(v)
}

fn inverse_iteration(m: &CMat, lambda: C64) -> Result<CVec> {
    let n = m.nrows();
    let shift = lambda + C64::new(1e-10 * lambda.norm().max(1e-3), 0.0);
    let lu = (m - CMat::identity(n, n) * shift).lu();
    let mut v = CVec::from_fn(n, |i, _| C64::new(1.0 / (1.0 + i as f64), 0.3));
    for _ in 0..4 {
        v = lu.solve(&v).ok_or(Error::Conditioning(f64::INFINITY))?;
        let s = v.norm();
        v /= C64::new(s, 0.0);
    }
    Ok(v)
}

/// Eigenvalues at basis sizes M and 2M; the top `how_many` must agree.
pub fn spectrum(disc: &TransferOperatorDisc, how_many: usize) -> Result<Spectrum> {
    let fine = TransferOperatorDisc::new(disc.kind, disc.nu, &disc.rep, 2 * disc.basis_size)?;
    let coarse_ev = sorted_eigenvalues(&disc.matrix)?;
    let fine_ev = sorted_eigenvalues(&fine.matrix)?;
    let k = how_many.min(coarse_ev.len()).max(1);
    let mut drift: f64 = 0.0;
    for &l in &fine_ev[..k] {
        let best = coarse_ev.iter().map(|&c| (c - l).norm()).fold(f64::INFINITY, f64::min);
        drift = drift.max(best);
    }
    let coarse: Vec<C64> = coarse_ev[..k].to_vec();
    let top: Vec<C64> = fine_ev[..k].to_vec();
    if !(drift < CONVERGENCE_TOL) {
        return Err(Error::NotConverged { drift, coarse, fine: top });
    }
    let eigenvectors = top.iter().map(|&l| inverse_iteration(&fine.matrix, l)).collect::<Result<Vec<_>>>()?;
    Ok(Spectrum { eigenvalues: top, eigenvectors, coarse, drift, converged: true, fine })
}

/// max over the points of ‖L h − λ h‖ / max‖h‖, with L applied by its series.
pub fn eigenfunction_residual(disc: &TransferOperatorDisc, lambda: C64, v: &CVec, points: &[f64]) -> Result<f64> {
    let h = crate::lewis::FnEval(|z: C64| Ok(disc.basis_eval(v, z)));
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for &x in points {
        let lh = apply_kind(disc.kind, &h, disc.nu, &disc.rep, x, disc.n_max)?;
        let hx = disc.basis_eval(v, C64::new(x, 0.0));
        scale = scale.max(hx.norm());
        worst = worst.max((lh - hx * lambda).norm());
    }
    Ok(worst / scale.max(1e-300))
}
