//! ψ on (0,∞) as an inverse Mellin integral of the completed L-functions
//! along Re s = Re ν + ½.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::lfunc::{MellinTable, DEFAULT_SPLIT};
use crate::maass::{CVec, MaassForm};
use crate::specialfn::ln_gamma;

const STEP: f64 = 0.04;
const HALF_WIDTH: f64 = 16.0;
pub(crate) const MAX_ARG: f64 = PI / 6.0;

pub(crate) struct MellinRoute {
    nodes: Vec<(C64, CVec)>,
}

impl MellinRoute {
    pub(crate) fn new(form: &MaassForm) -> Result<Self> {
        let nu = form.nu().nu;
        let table = MellinTable::new(form, DEFAULT_SPLIT)?;
        let c = nu.re + 0.5;
        let t_max = 2.0 * nu.im.abs() + HALF_WIDTH;
        let steps = (t_max / STEP).ceil() as i64;
        let lead = C64::new(form.period() as f64, 0.0).powc(nu) * (PI * nu).cos();
        let lpi = PI.ln();
        let mut nodes = Vec::with_capacity(2 * steps as usize + 1);
        for j in -steps..=steps {
            let s = C64::new(c, j as f64 * STEP);
            let g0 = (ln_gamma((s + 1.0) / 2.0)? + ln_gamma((2.0 * nu + 2.0 - s) / 2.0)? - (nu + 1.5) * lpi).exp();
            let g1 = (ln_gamma(s / 2.0)? + ln_gamma((2.0 * nu + 1.0 - s) / 2.0)? - (nu + 0.5) * lpi).exp();
            let l0 = table.completed(0, s - nu);
            let l1 = table.completed(1, s - nu);
            let g = (l0 * (g0 * C64::i()) + l1 * g1) * (lead * STEP / (2.0 * PI));
            nodes.push((s, g));
        }
        Ok(Self { nodes })
    }

    pub(crate) fn eval(&self, z: C64, dim: usize) -> Result<CVec> {
        if z.arg().abs() > MAX_ARG || z.norm() == 0.0 {
            return Err(Error::Domain(format!("Mellin-Barnes route needs |arg z| <= pi/6, got {z}")));
        }
        let lz = z.ln();
        let mut acc = CVec::zeros(dim);
        for (s, g) in &self.nodes {
            acc += g * (-s * lz).exp();
        }
        Ok(acc)
    }
}
