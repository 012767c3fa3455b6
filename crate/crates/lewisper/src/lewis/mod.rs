//! Boundary data f_u, the period function ψ_u, the inverse transform and the
//! checks of the three-term equation and its side conditions.

mod mellin;
mod path;

use num_complex::Complex64 as C64;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::finrep::{FiniteRep, Gen, GroupWord, IntMat};
use crate::maass::{CVec, MaassForm};
use crate::specialfn::SpectralParameter;

use mellin::MellinRoute;
use path::{angle_index, RayPath, ANGLES};

/// Anything that maps a point of ℂ∖(−∞,0] to a vector.
pub trait Evaluator: Send + Sync {
    fn eval(&self, z: C64) -> Result<CVec>;
}

impl<E: Evaluator + ?Sized> Evaluator for &E {
    fn eval(&self, z: C64) -> Result<CVec> {
        (**self).eval(z)
    }
}

impl<E: Evaluator + ?Sized> Evaluator for Arc<E> {
    fn eval(&self, z: C64) -> Result<CVec> {
        (**self).eval(z)
    }
}

impl<E: Evaluator + ?Sized> Evaluator for Box<E> {
    fn eval(&self, z: C64) -> Result<CVec> {
        (**self).eval(z)
    }
}

/// Closure adapter.
pub struct FnEval<F>(pub F);

impl<F: Fn(C64) -> Result<CVec> + Send + Sync> Evaluator for FnEval<F> {
    fn eval(&self, z: C64) -> Result<CVec> {
        (self.0)(z)
    }
}

/// The identically zero function of the given dimension.
pub fn zero_evaluator(dim: usize) -> FnEval<impl Fn(C64) -> Result<CVec> + Send + Sync> {
    FnEval(move |_| Ok(CVec::zeros(dim)))
}

pub fn on_cut(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0
}

/// z^{−2ν−1} with the principal logarithm.
pub fn weight_power(z: C64, nu: SpectralParameter) -> Result<C64> {
    if on_cut(z) {
        return Err(Error::Domain(format!("{z} lies on the cut (-inf, 0]")));
    }
    Ok((-nu.s_weight() * z.ln()).exp())
}

const F_TOL: f64 = 1e-14;

/// f_u: Σ_{k>0} k^ν e^{2πikz/N} v_k above the real axis and
/// −Σ_{k<0} |k|^ν e^{2πikz/N} v_k below it.
#[derive(Debug, Clone)]
pub struct BoundaryData {
    form: Arc<MaassForm>,
}

impl BoundaryData {
    pub fn new(form: Arc<MaassForm>) -> Self {
        Self { form }
    }

    pub fn form(&self) -> &MaassForm {
        &self.form
    }

    /// Bound on the omitted |k| > K_max terms at |Im z| = y.
    pub fn tail_bound(&self, y: f64) -> f64 {
        let f = &self.form;
        if f.coeffs().is_empty() {
            return 0.0;
        }
        let n = f.period() as f64;
        let k1 = (f.k_max() + 1) as f64;
        let q = (-2.0 * PI * y / n).exp();
        let growth = f.nu().nu.re.max(0.0);
        2.0 * f.sup_norm().max(1.0) * k1.powf(growth) * (-2.0 * PI * k1 * y / n).exp() / (1.0 - q) / (1.0 - q)
    }

    /// Smallest |Im z| at which the truncated sums meet the tolerance.
    pub fn min_height(&self) -> f64 {
        let (mut lo, mut hi) = (1e-6, 50.0);
        if self.tail_bound(lo) <= F_TOL {
            return lo;
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if self.tail_bound(mid) <= F_TOL {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    pub fn f_eval(&self, z: C64) -> Result<CVec> {
        if z.im == 0.0 || !z.re.is_finite() {
            return Err(Error::Domain(format!("f_u is defined off the real axis, got {z}")));
        }
        let bound = self.tail_bound(z.im.abs());
        if bound > F_TOL {
            return Err(Error::Precision { msg: format!("truncation tail at Im z = {}", z.im), estimate: bound });
        }
        let f = &self.form;
        let n = f.period() as f64;
        let nu = f.nu().nu;
        let upper = z.im > 0.0;
        let mut out = CVec::zeros(f.dim());
        for (&k, v) in f.coeffs() {
            if (k > 0) != upper {
                continue;
            }
            let kn = (nu * (k.unsigned_abs() as f64).ln()).exp();
            let e = (C64::new(0.0, 2.0 * PI * k as f64 / n) * z).exp();
            out += v * (kn * e);
        }
        Ok(if upper { out } else { -out })
    }
}

impl Evaluator for BoundaryData {
    fn eval(&self, z: C64) -> Result<CVec> {
        self.f_eval(z)
    }
}

/// How psi_eval reaches a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Direct off the axis when the sums converge, the ray integral
    /// otherwise, and on (0,∞) the mean of the ray and Mellin-Barnes values.
    Auto,
    Direct,
    Ray,
    MellinBarnes,
}

/// ψ_u(z) = f_u(z) − z^{−2ν−1} η(S) f_u(−1/z), continued to ℂ∖(−∞,0].
pub struct PeriodFunction {
    source: BoundaryData,
    taylor_at_1: Option<Vec<CVec>>,
    height: f64,
    paths: [OnceLock<std::result::Result<Arc<RayPath>, Error>>; ANGLES.len()],
    mellin: OnceLock<std::result::Result<Arc<MellinRoute>, Error>>,
}

impl std::fmt::Debug for PeriodFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PeriodFunction").field("nu", &self.nu().nu).field("height", &self.height).finish()
    }
}

impl PeriodFunction {
    pub fn new(source: BoundaryData) -> Result<Self> {
        if source.form.nu().nu.re <= -0.5 {
            return Err(Error::Input("period functions need Re nu > -1/2".into()));
        }
        let height = source.min_height();
        Ok(Self { source, taylor_at_1: None, height, paths: Default::default(), mellin: OnceLock::new() })
    }

    pub fn from_form(form: MaassForm) -> Result<Self> {
        Self::new(BoundaryData::new(Arc::new(form)))
    }

    pub fn source(&self) -> &BoundaryData {
        &self.source
    }
    pub fn form(&self) -> &MaassForm {
        &self.source.form
    }
    pub fn nu(&self) -> SpectralParameter {
        self.source.form.nu()
    }
    pub fn rep(&self) -> &FiniteRep {
        self.source.form.rep()
    }
    pub fn dim(&self) -> usize {
        self.source.form.dim()
    }
    pub fn taylor_at_1(&self) -> Option<&[CVec]> {
        self.taylor_at_1.as_deref()
    }

    /// Stores C_m, m = 0..=order, with ψ(1+t) = Σ C_m t^m, from a Cauchy
    /// integral on |t| = ½.
    pub fn with_taylor(mut self, order: usize) -> Result<Self> {
        self.taylor_at_1 = Some(self.taylor_coefficients(order)?);
        Ok(self)
    }

    pub fn taylor_coefficients(&self, order: usize) -> Result<Vec<CVec>> {
        let m = 64.max(2 * order + 16);
        let r = 0.5;
        let mut out = vec![CVec::zeros(self.dim()); order + 1];
        for j in 0..m {
            let th = 2.0 * PI * j as f64 / m as f64;
            let v = self.eval(1.0 + C64::from_polar(r, th))?;
            for (k, c) in out.iter_mut().enumerate() {
                *c += &v * (C64::from_polar(r.powi(-(k as i32)), -(k as f64) * th) / m as f64);
            }
        }
        Ok(out)
    }

    fn path(&self, idx: usize) -> Result<Arc<RayPath>> {
        self.paths[idx].get_or_init(|| RayPath::new(&self.source.form, ANGLES[idx]).map(Arc::new)).clone()
    }

    fn mellin_route(&self) -> Result<Arc<MellinRoute>> {
        self.mellin.get_or_init(|| MellinRoute::new(&self.source.form).map(Arc::new)).clone()
    }

    fn direct_ok(&self, z: C64) -> bool {
        z.im.abs() >= self.height && (-1.0 / z).im.abs() >= self.height
    }

    pub fn eval_with(&self, z: C64, route: Route) -> Result<CVec> {
        if on_cut(z) || !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::Domain(format!("{z} lies on the cut (-inf, 0]")));
        }
        if self.form().coeffs().is_empty() {
            return Ok(CVec::zeros(self.dim()));
        }
        match route {
            Route::Direct => {
                let a = weight_power(z, self.nu())?;
                let f = self.source.f_eval(z)?;
                let g = self.source.f_eval(-1.0 / z)?;
                Ok(f - self.rep().mat_s() * g * a)
            }
            Route::Ray => Ok(self.path(angle_index(z)?)?.eval(z, self.dim())),
            Route::MellinBarnes => self.mellin_route()?.eval(z, self.dim()),
            Route::Auto => {
                if z.im == 0.0 {
                    let a = self.eval_with(z, Route::Ray)?;
                    let b = self.eval_with(z, Route::MellinBarnes)?;
                    Ok((a + b) * C64::new(0.5, 0.0))
                } else if self.direct_ok(z) {
                    self.eval_with(z, Route::Direct)
                } else {
                    self.eval_with(z, Route::Ray)
                }
            }
        }
    }

    /// Relative gap between the ray-integral and Mellin-Barnes values at x > 0.
    pub fn two_sided_gap(&self, x: f64) -> Result<f64> {
        let a = self.eval_with(C64::new(x, 0.0), Route::Ray)?;
        let b = self.eval_with(C64::new(x, 0.0), Route::MellinBarnes)?;
        Ok((&a - &b).norm() / a.norm().max(1.0))
    }
}

impl Evaluator for PeriodFunction {
    fn eval(&self, z: C64) -> Result<CVec> {
        self.eval_with(z, Route::Auto)
    }
}

/// 100 log-spaced points in [0.1, 10].
pub fn real_grid() -> Vec<C64> {
    log_points(0.1, 10.0, 100).into_iter().map(|x| C64::new(x, 0.0)).collect()
}

/// Rays at arg z = ±π/3 with |z| in [0.2, 50].
pub fn ray_grid(per_ray: usize) -> Vec<C64> {
    let mut out = Vec::new();
    for sign in [1.0, -1.0] {
        for r in log_points(0.2, 50.0, per_ray) {
            out.push(C64::from_polar(r, sign * PI / 3.0));
        }
    }
    out
}

pub fn standard_grid() -> Vec<C64> {
    let mut g = real_grid();
    g.extend(ray_grid(20));
    g
}

fn log_points(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a * (b / a).powf(i as f64 / (n - 1).max(1) as f64)).collect()
}

/// max over the grid of ‖η(T)ψ(z) − ψ(z+1) − (z+1)^{−2ν−1}η(ST⁻¹)ψ(z/(z+1))‖ / max(1,‖ψ(z)‖).
pub fn lewis_residual(psi: &dyn Evaluator, nu: SpectralParameter, rep: &FiniteRep, grid: &[C64]) -> Result<f64> {
    Ok(lewis_residuals(psi, nu, rep, grid)?.into_iter().fold(0.0, f64::max))
}

/// The per-point residuals behind lewis_residual.
pub fn lewis_residuals(psi: &dyn Evaluator, nu: SpectralParameter, rep: &FiniteRep, grid: &[C64]) -> Result<Vec<f64>> {
    let eta_t = rep.mat_t();
    let eta_st = rep.of_word(&GroupWord::new(vec![Gen::S, Gen::TInv]));
    grid.iter()
        .map(|&z| {
            let p = psi.eval(z)?;
            let q = psi.eval(z + 1.0)?;
            let r = psi.eval(z / (z + 1.0))?;
            let w = weight_power(z + 1.0, nu)?;
            let d = eta_t * &p - q - &eta_st * r * w;
            Ok(d.norm() / p.norm().max(1.0))
        })
        .collect()
}

/// f(z) = (ψ(z) + z^{−2ν−1}η(S)ψ(−1/z)) / (1 + e^{∓2πiν}) for z in the
/// upper (lower) half-plane, principal branches throughout.
pub fn bruggeman_invert(psi: &dyn Evaluator, nu: SpectralParameter, rep: &FiniteRep, z: C64) -> Result<CVec> {
    if nu.is_half_integer_shift() {
        return Err(Error::Degenerate(format!("nu = {} lies in 1/2 + Z", nu.nu)));
    }
    if z.im == 0.0 {
        return Err(Error::Domain(format!("inversion needs z off the real axis, got {z}")));
    }
    let sign = if z.im > 0.0 { -1.0 } else { 1.0 };
    let denom = 1.0 + (C64::new(0.0, sign * 2.0 * PI) * nu.nu).exp();
    let sum = psi.eval(z)? + rep.mat_s() * psi.eval(-1.0 / z)? * weight_power(z, nu)?;
    Ok(sum / denom)
}

/// ψ|γ for γ in the semigroup generated by T and T′.
pub struct Slashed<E> {
    psi: E,
    matrix: IntMat,
    eta_inv: crate::finrep::CMat,
    nu: SpectralParameter,
}

impl<E: Evaluator> Evaluator for Slashed<E> {
    fn eval(&self, z: C64) -> Result<CVec> {
        let m = &self.matrix;
        let gz = (z * m[0][0] as f64 + m[0][1] as f64) / (z * m[1][0] as f64 + m[1][1] as f64);
        let j = weight_power(z * m[1][0] as f64 + m[1][1] as f64, self.nu)?;
        Ok(&self.eta_inv * self.psi.eval(gz)? * j)
    }
}

/// (ψ|γ)(z) = (cz+d)^{−2ν−1} η(γ)⁻¹ ψ(γz).
pub fn slash<E: Evaluator>(psi: E, w: &GroupWord, nu: SpectralParameter, rep: &FiniteRep) -> Result<Slashed<E>> {
    if !w.is_positive() {
        return Err(Error::Domain(format!("{w} is not in the semigroup generated by T and T'")));
    }
    Ok(Slashed { psi, matrix: w.int_matrix(), eta_inv: rep.of_word(w).adjoint(), nu })
}

/// All 2ⁿ words of length n in T and T′.
pub fn positive_words(n: usize) -> Vec<GroupWord> {
    (0..1usize << n)
        .map(|bits| GroupWord::new((0..n).map(|i| if bits >> i & 1 == 0 { Gen::T } else { Gen::TP }).collect()))
        .collect()
}

pub const MAX_DEPTH: usize = 20;
const EIGEN_CHECK: f64 = 1e-6;

/// Σ_{|γ|=n} (ψ|γ)(z). The input must satisfy the three-term equation on
/// (0,∞); it is checked at x ∈ {0.5, 1, 2}.
pub fn continue_by_semigroup(psi: &dyn Evaluator, nu: SpectralParameter, rep: &FiniteRep, n: usize, z: C64) -> Result<CVec> {
    if n > MAX_DEPTH {
        return Err(Error::Input(format!("word length {n} exceeds {MAX_DEPTH}")));
    }
    let probe: Vec<C64> = [0.5, 1.0, 2.0].iter().map(|&x| C64::new(x, 0.0)).collect();
    let r = lewis_residual(psi, nu, rep, &probe)?;
    if r > EIGEN_CHECK {
        return Err(Error::NotEigenfunction(r));
    }
    if on_cut(z) {
        return Err(Error::Domain(format!("{z} lies on the cut (-inf, 0]")));
    }
    let gens = [(Gen::T.matrix(), rep.generator(Gen::T)), (Gen::TP.matrix(), rep.generator(Gen::TP))];
    let mut acc = None;
    let mut stack = vec![([[1i64, 0], [0, 1]], rep.identity(), 0usize)];
    while let Some((m, eta, depth)) = stack.pop() {
        if depth == n {
            let cz = z * m[1][0] as f64 + m[1][1] as f64;
            let gz = (z * m[0][0] as f64 + m[0][1] as f64) / cz;
            let term = eta.adjoint() * psi.eval(gz)? * weight_power(cz, nu)?;
            acc = Some(match acc {
                None => term,
                Some(a) => a + term,
            });
            continue;
        }
        for (g, e) in &gens {
            stack.push((crate::finrep::mat_mul(&m, g), &eta * e, depth + 1));
        }
    }
    Ok(acc.expect("at least one word"))
}

/// e^{πiν}B(iY) + e^{−πiν}B(−iY) with B(z) = ψ(z) + z^{−2ν−1}η(S)ψ(−1/z),
/// at Y = 40, plus its change from Y = 20. Under principal branches
/// B(±iY) = (1 + e^{∓2πiν}) f(±iY), so both weighted terms equal
/// 2cos(πν) f(±iY).
pub fn boundary_limit_residual(psi: &dyn Evaluator, nu: SpectralParameter, rep: &FiniteRep) -> Result<f64> {
    let combo = |y: f64| -> Result<CVec> {
        let b = |z: C64| -> Result<CVec> { Ok(psi.eval(z)? + rep.mat_s() * psi.eval(-1.0 / z)? * weight_power(z, nu)?) };
        let w = (C64::new(0.0, PI) * nu.nu).exp();
        Ok(b(C64::new(0.0, y))? * w + b(C64::new(0.0, -y))? / w)
    };
    let e20 = combo(20.0)?;
    let e40 = combo(40.0)?;
    Ok(e40.norm() + (e40 - e20).norm())
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticReport {
    /// Largest fitted slope of log‖ψ‖ against log|z| over the rays.
    pub exponent: f64,
    /// sup ‖ψ‖ for |z| in [0.01, 1] on the rays.
    pub sup_small: f64,
    pub pass: bool,
}

/// Fits the decay of ψ on |z| ∈ [10, 100] along arg z ∈ {0, ±π/3}.
pub fn asymptotic_bound_check(psi: &dyn Evaluator, nu: SpectralParameter, c: f64, bound: Option<f64>) -> Result<AsymptoticReport> {
    let top = 2.0 * nu.nu.re + 1.0;
    if !(c > 0.0 && c < top) {
        return Err(Error::Input(format!("C must lie in (0, {top}), got {c}")));
    }
    let rays = [0.0, PI / 3.0, -PI / 3.0];
    let mut exponent = f64::NEG_INFINITY;
    let mut sup_small: f64 = 0.0;
    for &th in &rays {
        let pts = log_points(10.0, 100.0, 12)
            .into_iter()
            .map(|r| Ok((r.ln(), psi.eval(C64::from_polar(r, th))?.norm().ln())))
            .collect::<Result<Vec<_>>>()?;
        exponent = exponent.max(slope(&pts));
        for r in log_points(0.01, 1.0, 12) {
            sup_small = sup_small.max(psi.eval(C64::from_polar(r, th))?.norm());
        }
    }
    let pass = exponent <= -c + 0.1 && sup_small.is_finite() && bound.is_none_or(|b| sup_small <= b);
    Ok(AsymptoticReport { exponent, sup_small, pass })
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if my == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    sxy / sxx
}

#[cfg(test)]
mod tests;
