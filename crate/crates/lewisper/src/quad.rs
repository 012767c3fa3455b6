//! Gauss-Legendre rules and adaptive Gauss-Kronrod integration.

use num_complex::Complex64 as C64;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

pub const PANEL_ORDER: usize = 16;

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    type Rule = (Vec<f64>, Vec<f64>);
    static CACHE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().unwrap().get(&n) {
        return r.clone();
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * p - pm) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    cache.lock().unwrap().insert(n, (x.clone(), w.clone()));
    (x, w)
}

/// Nodes and weights of a composite 16-point rule on [a, b] with panels no
/// wider than `width`.
pub fn panel_rule(a: f64, b: f64, width: f64) -> (Vec<f64>, Vec<f64>) {
    let (gx, gw) = gauss_legendre(PANEL_ORDER);
    let np = (((b - a) / width).ceil() as usize).max(1);
    let h = (b - a) / np as f64;
    let mut xs = Vec::with_capacity(np * PANEL_ORDER);
    let mut ws = Vec::with_capacity(np * PANEL_ORDER);
    for p in 0..np {
        let c = a + (p as f64 + 0.5) * h;
        for (x, w) in gx.iter().zip(&gw) {
            xs.push(c + 0.5 * h * x);
            ws.push(0.5 * h * w);
        }
    }
    (xs, ws)
}

pub fn integrate_panels<F: FnMut(f64) -> C64>(mut f: F, a: f64, b: f64, width: f64) -> C64 {
    let (xs, ws) = panel_rule(a, b, width);
    xs.iter().zip(&ws).map(|(&x, &w)| w * f(x)).sum()
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> C64>(f: &mut F, a: f64, b: f64) -> (C64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let s = f(c - h * XGK[j]) + f(c + h * XGK[j]);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// Adaptive Gauss-Kronrod (7/15) integration. Returns (value, error estimate).
pub fn adaptive<F: FnMut(f64) -> C64>(mut f: F, a: f64, b: f64, tol: f64, max_depth: usize) -> (C64, f64) {
    let mut stack = vec![(a, b, 0usize)];
    let mut total = C64::new(0.0, 0.0);
    let mut err = 0.0;
    let span = (b - a).abs();
    while let Some((lo, hi, d)) = stack.pop() {
        let (v, e) = gk15(&mut f, lo, hi);
        let local = tol * ((hi - lo).abs() / span).max(1e-3);
        if e <= local || d >= max_depth {
            total += v;
            err += e;
        } else {
            let m = 0.5 * (lo + hi);
            stack.push((lo, m, d + 1));
            stack.push((m, hi, d + 1));
        }
    }
    (total, err)
}
