//! ψ near the real axis from u on a ray through 0: the Green form of u and
//! the point-pair invariant (Im τ/((τ−z)(τ̄−z)))^{ν+½} is closed, so its
//! integral from 0 to i∞ is analytic in z off the cut.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::maass::{CVec, Jet, MaassForm};
use crate::quad::panel_rule;
use crate::specialfn::rgamma;

/// Ray angles; the path is taken at the first angle clearing |arg z| by the margin.
pub(crate) const ANGLES: [f64; 5] = [PI / 2.0, 2.0 * PI / 3.0, 3.0 * PI / 4.0, 5.0 * PI / 6.0, 11.0 * PI / 12.0];
const MARGIN: f64 = PI / 12.0;
const PANEL: f64 = 0.125;

pub(crate) fn angle_index(z: C64) -> Result<usize> {
    let th = z.arg().abs();
    ANGLES
        .iter()
        .position(|&phi| phi >= th + MARGIN)
        .ok_or_else(|| Error::Domain(format!("{z} is too close to the cut for the ray integral")))
}

pub(crate) struct RayPath {
    nodes: Vec<(C64, f64, Jet)>,
    nu: C64,
    constant: C64,
}

impl RayPath {
    pub(crate) fn new(form: &MaassForm, phi: f64) -> Result<Self> {
        let n = form.period() as f64;
        // |v| can reach e^{|Im ν|·|arg D|} with |arg D| < 2π, so the cutoff
        // grows with |Im ν| to keep the dropped tail of u below rounding
        let y_cut = (40.0 + 2.0 * PI * form.nu().nu.im.abs()) * n / (2.0 * PI);
        let sin = phi.sin();
        let (rs, ws) = panel_rule((sin / y_cut).ln(), (y_cut / sin).ln(), PANEL);
        let dir = C64::from_polar(1.0, phi);
        let nodes = rs
            .iter()
            .zip(ws)
            .map(|(&r, w)| {
                let tau = dir * r.exp();
                Ok((tau, w, form.jet_anywhere(tau)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let nu = form.nu().nu;
        let constant = C64::i() * C64::new(n, 0.0).powc(nu) * C64::new(PI, 0.0).powc(-nu - 0.5) * rgamma(0.5 - nu);
        Ok(Self { nodes, nu, constant })
    }

    pub(crate) fn eval(&self, z: C64, dim: usize) -> CVec {
        let s = self.nu + 0.5;
        let mut acc = CVec::zeros(dim);
        let mut prev = 0.0;
        for (tau, w, jet) in self.nodes.iter().rev() {
            let (x, y) = (tau.re, tau.im);
            let d = (tau - z) * (tau.conj() - z);
            // continuous branch of ln D, starting from arg D ≈ 0 at the far end
            let mut arg = d.arg();
            arg += 2.0 * PI * ((prev - arg) / (2.0 * PI)).round();
            prev = arg;
            let ln_d = C64::new(d.norm().ln(), arg);
            let v = (s * (y.ln() - ln_d)).exp();
            let vx = -s * v * 2.0 * (x - z) / d;
            let vy = s * v * (1.0 / y - 2.0 * y / d);
            let term = (&jet.u * vx - &jet.ux * v) * C64::new(y, 0.0) - (&jet.u * vy - &jet.uy * v) * C64::new(x, 0.0);
            acc += term * C64::new(*w, 0.0);
        }
        acc * self.constant
    }
}
