use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const MAX_BERNOULLI: usize = 60;
const SHIFT: usize = 30;

fn table() -> &'static Vec<BigRational> {
    static T: OnceLock<Vec<BigRational>> = OnceLock::new();
    T.get_or_init(|| {
        let mut b: Vec<BigRational> = Vec::with_capacity(MAX_BERNOULLI + 1);
        b.push(BigRational::one());
        for k in 1..=MAX_BERNOULLI {
            // sum_{j<=k} C(k+1, j) B_j = 0
            let mut acc = BigRational::zero();
            let mut binom = BigInt::one();
            for (j, bj) in b.iter().enumerate() {
                acc += BigRational::from_integer(binom.clone()) * bj;
                binom = binom * BigInt::from(k + 1 - j) / BigInt::from(j + 1);
            }
            b.push(-acc / BigRational::from_integer(BigInt::from(k + 1)));
        }
        b
    })
}

/// Exact Bernoulli number with B_1 = -1/2.
pub fn bernoulli(k: usize) -> Result<BigRational> {
    if k > MAX_BERNOULLI {
        return Err(Error::Range { k, max: MAX_BERNOULLI });
    }
    Ok(table()[k].clone())
}

pub fn bernoulli_f64(k: usize) -> Result<f64> {
    let b = bernoulli(k)?;
    Ok(b.numer().to_f64().unwrap_or(f64::NAN) / b.denom().to_f64().unwrap_or(f64::NAN))
}

fn on_cut(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0
}

/// Hurwitz zeta sum_{n>=0} (n+z)^{-a} for Re a > 1.
pub fn hurwitz_zeta(a: C64, z: C64) -> Result<C64> {
    if a.re <= 1.0 {
        return Err(Error::Domain(format!("Hurwitz zeta needs Re a > 1, got a = {a}")));
    }
    if on_cut(z) {
        return Err(Error::Domain(format!("z = {z} lies on (-inf, 0]")));
    }
    Ok(hurwitz_continued(a, z))
}

/// Same algorithm without the Re a > 1 guard; valid for any a != 1 since
/// the Euler-Maclaurin form is the analytic continuation in a.
pub(crate) fn hurwitz_continued(a: C64, z: C64) -> C64 {
    let need = (SHIFT as f64 - z.re).ceil().max(SHIFT as f64) as usize;
    let mut sum = C64::new(0.0, 0.0);
    for n in 0..need {
        sum += (z + n as f64).powc(-a);
    }
    let (tail, _) = asymptotic_series(a, z + need as f64, None);
    sum + tail
}

// z^{1-a}/(a-1) + z^{-a}/2 + sum_n B_2n (a)_{2n-1}/(2n)! z^{1-2n-a}.
// With Some(n) truncates after n Bernoulli terms, else runs to convergence.
// Returns (value, size of the first omitted term).
fn asymptotic_series(a: C64, z: C64, terms: Option<usize>) -> (C64, f64) {
    let lz = z.ln();
    let zpow = |e: C64| (e * lz).exp();
    let mut val = zpow(1.0 - a) / (a - 1.0) + 0.5 * zpow(-a);
    let z2inv = 1.0 / (z * z);
    // running factor (a)_{2n-1}/(2n)! z^{1-2n-a}
    let mut f = a * zpow(-a - 1.0) / 2.0;
    let limit = terms.unwrap_or(MAX_BERNOULLI / 2);
    let mut prev = f64::INFINITY;
    for n in 1..=MAX_BERNOULLI / 2 {
        let b = bernoulli_f64(2 * n).unwrap();
        let term = b * f;
        if n > limit {
            return (val, term.norm());
        }
        let tn = term.norm();
        if terms.is_none() && (tn < 1e-18 * val.norm() || tn > prev) {
            return (val, tn);
        }
        prev = tn;
        val += term;
        let nf = n as f64;
        f *= (a + 2.0 * nf - 1.0) * (a + 2.0 * nf) / ((2.0 * nf + 1.0) * (2.0 * nf + 2.0)) * z2inv;
    }
    (val, 0.0)
}

/// Truncated large-|z| expansion with `num_terms` Bernoulli corrections and
/// an error estimate of order |z|^{-2N-1-a}.
pub fn hurwitz_asymptotic(a: C64, z: C64, num_terms: usize) -> Result<(C64, f64)> {
    if z.norm() <= 1.0 {
        return Err(Error::Divergent(format!("|z| = {} <= 1", z.norm())));
    }
    if a.re <= 1.0 {
        return Err(Error::Domain(format!("Re a must exceed 1, got {a}")));
    }
    if on_cut(z) {
        return Err(Error::Domain(format!("z = {z} lies on (-inf, 0]")));
    }
    let n = num_terms.min(MAX_BERNOULLI / 2 - 1);
    Ok(asymptotic_series(a, z, Some(n)))
}
