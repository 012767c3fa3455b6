use super::*;
use crate::maass::{hejhal_solve, Parity};
use std::collections::BTreeMap;

fn odd() -> &'static PeriodFunction {
    static P: OnceLock<PeriodFunction> = OnceLock::new();
    P.get_or_init(|| PeriodFunction::from_form(hejhal_solve((9.4, 9.7), Parity::Odd, 25, 0.2).unwrap().form).unwrap())
}

fn even() -> &'static PeriodFunction {
    static P: OnceLock<PeriodFunction> = OnceLock::new();
    P.get_or_init(|| PeriodFunction::from_form(hejhal_solve((13.6, 13.9), Parity::Even, 25, 0.2).unwrap().form).unwrap())
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn trivial() -> FiniteRep {
    FiniteRep::trivial()
}

fn scalar(f: impl Fn(C64) -> C64 + Send + Sync) -> FnEval<impl Fn(C64) -> Result<CVec> + Send + Sync> {
    FnEval(move |z| Ok(CVec::from_element(1, f(z))))
}

#[test]
fn f_single_mode() {
    let form = MaassForm::scalar(SpectralParameter::new(c(0.25, 0.0)), &[(1, c(1.0, 0.0))]).unwrap();
    let bd = BoundaryData::new(Arc::new(form));
    // the tail bound allows for unseen modes up to the sup norm, so stay high
    for z in [c(0.3, 6.0), c(-1.2, 6.5)] {
        let want = (C64::new(0.0, 2.0 * PI) * z).exp();
        assert!((bd.f_eval(z).unwrap()[0] - want).norm() < 1e-15 * want.norm());
    }
    assert!(bd.f_eval(c(0.3, -6.0)).unwrap()[0].norm() == 0.0);
    assert!(matches!(bd.f_eval(c(0.3, 0.0)), Err(Error::Domain(_))));
    assert!(matches!(bd.f_eval(c(0.3, 0.01)), Err(Error::Precision { .. })));
}

#[test]
fn f_periodic_and_vanishing_at_cusps() {
    let bd = odd().source();
    let z = c(0.3, 0.8);
    let d = bd.f_eval(z + 1.0).unwrap() - odd().rep().mat_t() * bd.f_eval(z).unwrap();
    assert!(d.norm() < 1e-10);
    let up = bd.f_eval(c(0.0, 8.0)).unwrap();
    let down = bd.f_eval(c(0.0, -8.0)).unwrap();
    assert!(up.norm() < 1e-20 && (up + down).norm() < 1e-20);
}

#[test]
fn routes_agree() {
    let p = odd();
    for z in [c(0.5, 0.6), c(-0.3, 0.9), c(1.0, -0.7), c(0.2, 1.3), c(-0.6, -0.5)] {
        let a = p.eval_with(z, Route::Direct).unwrap();
        let b = p.eval_with(z, Route::Ray).unwrap();
        assert!((&a - &b).norm() < 1e-9 * a.norm().max(1.0), "{z}: {a} {b}");
    }
}

#[test]
fn two_sided_agreement() {
    for p in [odd(), even()] {
        for x in [0.1, 1.0, 10.0] {
            assert!(p.two_sided_gap(x).unwrap() < 1e-7);
        }
    }
}

#[test]
fn zero_form() {
    let p = PeriodFunction::from_form(MaassForm::zero(SpectralParameter::cusp(9.5), trivial())).unwrap();
    for z in [c(0.5, 0.0), c(1.0, 1.0), c(0.3, -0.01)] {
        assert_eq!(p.eval(z).unwrap().norm(), 0.0);
    }
    assert!(matches!(p.eval(c(-1.0, 0.0)), Err(Error::Domain(_))));
    assert!(matches!(p.eval(c(0.0, 0.0)), Err(Error::Domain(_))));
}

#[test]
fn decay_at_infinity() {
    // with trivial η, ψ(1) = f(1) − f(−1) = 0 by periodicity, so compare with the sup
    assert!(odd().eval(c(1.0, 0.0)).unwrap().norm() < 1e-12);
    assert!(even().eval(c(1.0, 0.0)).unwrap().norm() < 1e-10);
    let sup = real_grid().iter().map(|&z| odd().eval(z).unwrap().norm()).fold(0.0, f64::max);
    assert!(odd().eval(c(50.0, 0.0)).unwrap().norm() < 0.02 * sup);
}

#[test]
fn lewis_equation_on_grids() {
    for p in [odd(), even()] {
        let r = lewis_residual(p, p.nu(), p.rep(), &real_grid()).unwrap();
        assert!(r < 1e-7, "{r}");
        let r = lewis_residual(p, p.nu(), p.rep(), &ray_grid(20)).unwrap();
        assert!(r < 1e-7, "{r}");
    }
}

#[test]
fn lewis_residual_trivial_cases() {
    let nu = SpectralParameter::new(c(0.25, 0.0));
    let grid = real_grid();
    assert_eq!(lewis_residual(&zero_evaluator(1), nu, &trivial(), &grid).unwrap(), 0.0);
    let pw = scalar(move |z| weight_power(z, nu).unwrap());
    let r = lewis_residual(&pw, nu, &trivial(), &[c(1.0, 0.0)]).unwrap();
    // 1 − 2^{−a} − 2^{−a}(½)^{−a} at a = 3/2
    let want = (1.0 - 2f64.powf(-1.5) - 1.0f64).abs();
    assert!((r - want).abs() < 1e-14 && r > 0.1);
}

#[test]
fn inversion_round_trip() {
    let p = odd();
    let f = p.source();
    let z = c(0.2, 1.3);
    let back = bruggeman_invert(p, p.nu(), p.rep(), z).unwrap();
    let want = f.f_eval(z).unwrap();
    assert!((&back - &want).norm() < 1e-8 * want.norm().max(1.0), "{back} {want}");
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for _ in 0..10 {
        // keeps −1/z at least 30° from the cut
        let z = c(rng.gen_range(-0.8..0.8), rng.gen_range(0.6..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 });
        let back = bruggeman_invert(p, p.nu(), p.rep(), z).unwrap();
        let want = f.f_eval(z).unwrap();
        assert!((&back - &want).norm() < 1e-8 * want.norm().max(1.0), "{z}: {back} {want}");
    }
}

#[test]
fn inversion_edge_cases() {
    let nu = SpectralParameter::new(c(0.5, 0.0));
    assert!(matches!(bruggeman_invert(&zero_evaluator(1), nu, &trivial(), c(0.0, 1.0)), Err(Error::Degenerate(_))));
    let nu = SpectralParameter::cusp(2.0);
    assert_eq!(bruggeman_invert(&zero_evaluator(1), nu, &trivial(), c(0.3, 1.0)).unwrap().norm(), 0.0);
    assert!(matches!(bruggeman_invert(&zero_evaluator(1), nu, &trivial(), c(0.3, 0.0)), Err(Error::Domain(_))));
}

#[test]
fn slash_action() {
    let p = odd();
    let (nu, rep) = (p.nu(), p.rep());
    let e = slash(p, &GroupWord::identity(), nu, rep).unwrap();
    let z = c(0.7, 0.2);
    assert!((e.eval(z).unwrap() - p.eval(z).unwrap()).norm() == 0.0);
    assert!(matches!(slash(p, &"S".parse().unwrap(), nu, rep), Err(Error::Domain(_))));
    let t = slash(p, &"T".parse().unwrap(), nu, rep).unwrap();
    let tp = slash(p, &"T'".parse().unwrap(), nu, rep).unwrap();
    for x in log_points(0.5, 5.0, 20) {
        let z = c(x, 0.0);
        let lhs = p.eval(z).unwrap();
        let d = &lhs - t.eval(z).unwrap() - tp.eval(z).unwrap();
        assert!(d.norm() < 1e-7 * lhs.norm().max(1.0));
    }
}

#[test]
fn slash_composes() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    let rep = crate::finrep::builtin_rep("s3-std").unwrap();
    let nu = SpectralParameter::new(c(0.3, 1.7));
    let psi = FnEval(|z: C64| Ok(CVec::from_vec(vec![1.0 / (1.0 + z), z.sqrt() / (z * z + 2.0)])));
    let word = |rng: &mut rand::rngs::StdRng| {
        let n = rng.gen_range(0..=4);
        GroupWord::new((0..n).map(|_| if rng.gen_bool(0.5) { Gen::T } else { Gen::TP }).collect())
    };
    for _ in 0..20 {
        let (w1, w2) = (word(&mut rng), word(&mut rng));
        let lhs = slash(slash(&psi, &w1, nu, &rep).unwrap(), &w2, nu, &rep).unwrap();
        let rhs = slash(&psi, &w1.concat(&w2), nu, &rep).unwrap();
        for z in [c(0.4, 0.0), c(1.3, 2.1), c(2.0, -0.5)] {
            let (a, b) = (lhs.eval(z).unwrap(), rhs.eval(z).unwrap());
            assert!((&a - &b).norm() < 1e-9 * a.norm().max(1.0), "{w1} {w2}");
        }
    }
}

#[test]
fn semigroup_continuation() {
    assert_eq!(positive_words(5).len(), 32);
    let p = odd();
    let (nu, rep) = (p.nu(), p.rep());
    let x = c(0.8, 0.0);
    let one = continue_by_semigroup(p, nu, rep, 1, x).unwrap();
    assert!((&one - p.eval(x).unwrap()).norm() < 1e-7);
    let z = C64::from_polar(1.0, PI / 3.0);
    let a = continue_by_semigroup(p, nu, rep, 6, z).unwrap();
    let b = continue_by_semigroup(p, nu, rep, 7, z).unwrap();
    assert!((&a - &b).norm() < 1e-6 * a.norm().max(1.0));
    assert!((&a - p.eval(z).unwrap()).norm() < 1e-6 * a.norm().max(1.0));
    let bad = scalar(|z| 1.0 / (1.0 + z));
    assert!(matches!(continue_by_semigroup(&bad, nu, rep, 3, z), Err(Error::NotEigenfunction(_))));
    assert!(matches!(continue_by_semigroup(p, nu, rep, 21, z), Err(Error::Input(_))));
}

#[test]
fn boundary_limits() {
    let p = odd();
    assert!(boundary_limit_residual(p, p.nu(), p.rep()).unwrap() < 1e-6);
    let nu = SpectralParameter::new(c(0.25, 0.0));
    assert_eq!(boundary_limit_residual(&zero_evaluator(1), nu, &trivial()).unwrap(), 0.0);
    // f = ½v₀ on both half-planes: the limits do not cancel
    let v0 = 1.0;
    let same = scalar(move |z| 0.5 * v0 * (1.0 - weight_power(z, nu).unwrap()));
    let r = boundary_limit_residual(&same, nu, &trivial()).unwrap();
    assert!((r - 2.0 * (PI * 0.25).cos() * v0).abs() < 1e-12 && r > 1e-3);
    // f = ±½v₀ as in the Fourier expansion of a boundary hyperfunction: they do
    let split = scalar(move |z| {
        let s = if z.im >= 0.0 { 0.5 } else { -0.5 };
        s * v0 * (1.0 - weight_power(z, nu).unwrap())
    });
    assert!(boundary_limit_residual(&split, nu, &trivial()).unwrap() < 1e-14);
}

#[test]
fn asymptotic_bounds() {
    let p = odd();
    for cc in [0.1, 0.5, 0.9] {
        let rep = asymptotic_bound_check(p, p.nu(), cc, None).unwrap();
        assert!(rep.pass, "{rep:?}");
    }
    let nu = SpectralParameter::new(c(0.25, 0.0));
    let one = scalar(|_| c(1.0, 0.0));
    assert!(!asymptotic_bound_check(&one, nu, 0.5, None).unwrap().pass);
    let rat = scalar(|z| 1.0 / (1.0 + z));
    let rep = asymptotic_bound_check(&rat, nu, 0.99, Some(1.0)).unwrap();
    assert!(rep.pass, "{rep:?}");
    assert!(asymptotic_bound_check(&rat, nu, 1.6, None).is_err());
}

#[test]
fn linearity() {
    let nu = SpectralParameter::cusp(4.0);
    let mk = |seed: f64| {
        let mut m = BTreeMap::new();
        for k in 1..=20i64 {
            let v = c((seed * k as f64).sin(), (seed + k as f64).cos());
            m.insert(k, CVec::from_element(1, v));
            m.insert(-k, CVec::from_element(1, v * 0.5));
        }
        MaassForm::new(nu, trivial(), m).unwrap()
    };
    let (f, g) = (mk(0.3), mk(1.7));
    let (a, b) = (c(0.4, -1.1), c(2.0, 0.3));
    let h = f.combine(a, &g, b).unwrap();
    let (pf, pg, ph) = (PeriodFunction::from_form(f).unwrap(), PeriodFunction::from_form(g).unwrap(), PeriodFunction::from_form(h).unwrap());
    for z in [c(0.7, 0.0), c(0.3, 0.9), c(2.0, -0.1)] {
        let lhs = ph.eval(z).unwrap();
        let rhs = pf.eval(z).unwrap() * a + pg.eval(z).unwrap() * b;
        assert!((&lhs - &rhs).norm() < 1e-10 * lhs.norm().max(1.0));
        if z.im != 0.0 {
            let lhs = ph.source().f_eval(z * 3.0).unwrap();
            let rhs = pf.source().f_eval(z * 3.0).unwrap() * a + pg.source().f_eval(z * 3.0).unwrap() * b;
            assert!((&lhs - &rhs).norm() < 1e-10 * lhs.norm().max(1.0));
        }
    }
}

#[test]
fn branch_consistency() {
    let nu = SpectralParameter::cusp(9.5);
    for x in [0.1, 1.0, 7.0] {
        let up = weight_power(c(x, 1e-12), nu).unwrap();
        let down = weight_power(c(x, -1e-12), nu).unwrap();
        assert!((up - down).norm() < 1e-9 * up.norm());
    }
}

#[test]
fn taylor_at_one() {
    let p = PeriodFunction::from_form(odd().form().clone()).unwrap().with_taylor(16).unwrap();
    let cm = p.taylor_at_1().unwrap();
    assert!(cm[0].norm() < 1e-11);
    let t: f64 = 0.1;
    let series: CVec = cm.iter().enumerate().fold(CVec::zeros(1), |acc, (m, v)| acc + v * C64::new(t.powi(m as i32), 0.0));
    let direct = p.eval(c(1.0 + t, 0.0)).unwrap();
    assert!((&series - &direct).norm() < 1e-6 * direct.norm(), "{series} {direct}");
}

#[test]
fn restriction_continues_to_admissible_function() {
    // a function passing the real checks, continued by words, meets the bound
    let p = odd();
    let cont = FnEval(|z: C64| continue_by_semigroup(p, p.nu(), p.rep(), 4, z));
    let rep = asymptotic_bound_check(&cont, p.nu(), 0.5, None).unwrap();
    assert!(rep.pass, "{rep:?}");
}

