use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use lewisper::finrep::{builtin_rep, format_complex, parse_rep, FiniteRep};
use lewisper::lewis::{asymptotic_bound_check, lewis_residuals, BoundaryData, PeriodFunction, Route};
use lewisper::lfunc::{completed_l_series, converse_build, default_fe_grid, functional_equation_residual, DirichletData, MellinTable, DEFAULT_SPLIT};
use lewisper::maass::{describe, hejhal_solve_with, parse_coefficients, write_coefficients, HejhalOptions, MaassForm, Parity};
use lewisper::specialfn::SpectralParameter;
use lewisper::transfer::{spectrum, TransferKind, TransferOperatorDisc};
use lewisper::{Complex64 as C64, Error, Result};

use crate::grid::{parse_c64, parse_grid, parse_window};
use crate::output::{cnum, num, Outcome, Table};
use crate::{Command, FormArgs, RepArgs};

#[derive(Debug, Clone, Copy, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityArg {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RouteArg {
    Auto,
    Direct,
    Ray,
    Mellin,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Self {
        match r {
            RouteArg::Auto => Route::Auto,
            RouteArg::Direct => Route::Direct,
            RouteArg::Ray => Route::Ray,
            RouteArg::Mellin => Route::MellinBarnes,
        }
    }
}

pub fn run(cmd: &Command) -> Result<(&'static str, Outcome)> {
    Ok(match cmd {
        Command::Repinfo(a) => ("repinfo", repinfo(a)?),
        Command::Solve(a) => ("solve", solve(a)?),
        Command::Eval(a) => ("eval", eval(a)?),
        Command::Period(a) => ("period", period(a)?),
        Command::LewisCheck(a) => ("lewis-check", lewis_check(a)?),
        Command::TransferSpec(a) => ("transfer-spec", transfer_spec(a)?),
        Command::Lfunc(a) => ("lfunc", lfunc(a)?),
        Command::Converse(a) => ("converse", converse(a)?),
        Command::Asymptotics(a) => ("asymptotics", asymptotics(a)?),
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("reading {}: {e}", path.display())))
}

fn load_rep(a: &RepArgs) -> Result<FiniteRep> {
    let p = Path::new(&a.rep);
    if p.is_file() {
        parse_rep(&read(p)?)
    } else {
        builtin_rep(&a.rep)
    }
}

fn load_form(a: &FormArgs) -> Result<MaassForm> {
    parse_coefficients(&read(&a.form)?)?.into_form(load_rep(&a.rep)?)
}

fn vec_cells(v: &lewisper::maass::CVec) -> Vec<String> {
    v.iter().flat_map(|z| cnum(*z)).collect()
}

fn component_header(base: &[&str], dim: usize) -> Table {
    let mut h: Vec<String> = base.iter().map(|s| s.to_string()).collect();
    for j in 0..dim {
        h.push(format!("re{j}"));
        h.push(format!("im{j}"));
    }
    Table { header: h, rows: Vec::new() }
}

fn repinfo(a: &RepArgs) -> Result<Outcome> {
    let rep = load_rep(a)?;
    let v = rep.validate();
    let mut out = Outcome::new(v.pass, json!({
        "dim": rep.dim(), "N": rep.order_t(), "s_squared": v.s_squared, "st_cubed": v.st_cubed,
        "unitary_s": v.unitary_s, "unitary_t": v.unitary_t,
    }));
    out.lines.extend(v.to_string().lines().map(String::from));
    out.lines.push(format!("dim            = {}", rep.dim()));
    let mut t = Table::new(&["matrix", "row", "col", "re", "im"]);
    for (name, m) in [("S", rep.mat_s()), ("T", rep.mat_t())] {
        for i in 0..rep.dim() {
            for j in 0..rep.dim() {
                let [re, im] = cnum(m[(i, j)]);
                t.push(vec![name.into(), i.to_string(), j.to_string(), re, im]);
            }
        }
    }
    out.table = Some(t);
    if !v.pass {
        out.failures.push("defining relations or unitarity violated".into());
    }
    Ok(out)
}

fn solve(a: &crate::SolveArgs) -> Result<Outcome> {
    let window = parse_window(&a.window)?;
    let parity = match a.parity {
        ParityArg::Even => Parity::Even,
        ParityArg::Odd => Parity::Odd,
    };
    let opts = HejhalOptions { k_max: a.kmax, y0: a.y0, accept: a.tol, ..Default::default() };
    match hejhal_solve_with(window, parity, &opts) {
        Ok(sol) => {
            let pass = sol.automorphy < a.tol;
            let mut out = Outcome::new(pass, json!({"R": sol.r, "automorphy": sol.automorphy, "condition": sol.condition}));
            out.lines.push(format!("R              = {:.12}", sol.r));
            out.lines.push(format!("automorphy     = {:.3e}", sol.automorphy));
            out.lines.push(format!("condition      = {:.3e}", sol.condition));
            out.lines.push(describe(&sol.form));
            let mut t = component_header(&["k"], 1);
            for (k, v) in sol.form.coeffs() {
                let mut row = vec![k.to_string()];
                row.extend(vec_cells(v));
                t.push(row);
            }
            out.table = Some(t);
            if let Some(p) = &a.out {
                std::fs::write(p, write_coefficients(&sol.form)).map_err(|e| Error::Input(format!("writing {}: {e}", p.display())))?;
                out.lines.push(format!("coefficients written to {}", p.display()));
            }
            if !pass {
                out.failures.push(format!("automorphy residual {:.3e} >= {:.1e}", sol.automorphy, a.tol));
            }
            Ok(out)
        }
        Err(Error::NotFound(msg)) => {
            let mut out = Outcome::new(false, json!({"R": null}));
            out.lines.push(format!("no cusp form found: {msg}"));
            out.failures.push(format!("no {:?} form in [{}, {}]", a.parity, window.0, window.1).to_lowercase());
            Ok(out)
        }
        Err(e) => Err(e),
    }
}

fn eval(a: &crate::EvalArgs) -> Result<Outcome> {
    let form = load_form(&a.form)?;
    let pts = a.points.iter().map(|s| parse_c64(s)).collect::<Result<Vec<_>>>()?;
    let vals = pts.par_iter().map(|&z| form.evaluate_anywhere(z)).collect::<Vec<_>>();
    let mut t = component_header(&["x", "y"], form.dim());
    for (z, v) in pts.iter().zip(vals) {
        let mut row = cnum(*z).to_vec();
        row.extend(vec_cells(&v?));
        t.push(row);
    }
    let mut out = Outcome::new(true, json!({"points": pts.len()}));
    out.lines.push(describe(&form));
    out.table = Some(t);
    Ok(out)
}

fn period(a: &crate::PeriodArgs) -> Result<Outcome> {
    let form = load_form(&a.form)?;
    let psi = PeriodFunction::from_form(form)?;
    let mut pts: Vec<C64> = parse_grid(&a.grid)?.into_iter().map(|x| C64::new(x, 0.0)).collect();
    for s in &a.points {
        pts.push(parse_c64(s)?);
    }
    let route: Route = a.route.into();
    let vals = pts.par_iter().map(|&z| psi.eval_with(z, route)).collect::<Vec<_>>();
    let mut t = component_header(&["x", "y"], psi.dim());
    let mut sup: f64 = 0.0;
    for (z, v) in pts.iter().zip(vals) {
        let v = v?;
        sup = sup.max(v.norm());
        let mut row = cnum(*z).to_vec();
        row.extend(vec_cells(&v));
        t.push(row);
    }
    let mut out = Outcome::new(true, json!({"points": pts.len(), "sup": sup}));
    out.lines.push(describe(psi.form()));
    out.lines.push(format!("sup |psi|      = {sup:.6e}"));
    out.table = Some(t);
    Ok(out)
}

fn lewis_check(a: &crate::LewisCheckArgs) -> Result<Outcome> {
    let form = load_form(&a.form)?;
    let psi = PeriodFunction::from_form(form)?;
    let xs = parse_grid(&a.grid)?;
    if xs.iter().any(|&x| x <= 0.0) {
        return Err(Error::Input("lewis-check needs a grid in (0, inf)".into()));
    }
    let res = xs
        .par_iter()
        .map(|&x| lewis_residuals(&psi, psi.nu(), psi.rep(), &[C64::new(x, 0.0)]).map(|r| r[0]))
        .collect::<Result<Vec<f64>>>()?;
    let max = res.iter().cloned().fold(0.0, f64::max);
    let mut t = Table::new(&["x", "residual"]);
    for (x, r) in xs.iter().zip(&res) {
        t.push(vec![num(*x), num(*r)]);
    }
    let pass = max < a.tol;
    let mut out = Outcome::new(pass, json!({"max_residual": max, "tol": a.tol, "points": xs.len()}));
    out.lines.push(describe(psi.form()));
    out.lines.push(format!("max residual   = {max:.3e} (tol {:.1e})", a.tol));
    out.table = Some(t);
    if !pass {
        for (x, r) in xs.iter().zip(&res).filter(|(_, r)| **r >= a.tol) {
            out.failures.push(format!("x = {x:.6e}: residual {r:.3e}"));
        }
    }
    Ok(out)
}

fn transfer_spec(a: &crate::TransferArgs) -> Result<Outcome> {
    let kind: TransferKind = a.kind.parse()?;
    let nu = SpectralParameter::new(parse_c64(&a.nu)?);
    let rep = load_rep(&a.rep)?;
    let disc = TransferOperatorDisc::new(kind, nu, &rep, a.basis)?;
    let mut t = Table::new(&["stage", "index", "re", "im", "abs"]);
    let push = |t: &mut Table, stage: &str, ev: &[C64]| {
        for (i, l) in ev.iter().enumerate() {
            let [re, im] = cnum(*l);
            t.push(vec![stage.into(), i.to_string(), re, im, num(l.norm())]);
        }
    };
    let mut out;
    match spectrum(&disc, a.count) {
        Ok(sp) => {
            push(&mut t, "fine", &sp.eigenvalues);
            out = Outcome::new(true, json!({"converged": true, "drift": sp.drift, "basis": [a.basis, 2 * a.basis]}));
            out.lines.push(format!("converged      = yes (drift {:.3e} between M = {} and {})", sp.drift, a.basis, 2 * a.basis));
            for l in &sp.eigenvalues {
                out.lines.push(format!("lambda         = {}", format_complex(*l)));
            }
        }
        Err(Error::NotConverged { drift, coarse, fine }) => {
            push(&mut t, "coarse", &coarse);
            push(&mut t, "fine", &fine);
            out = Outcome::new(false, json!({"converged": false, "drift": drift, "basis": [a.basis, 2 * a.basis]}));
            out.lines.push(format!("converged      = no (drift {drift:.3e})"));
            out.failures.push(format!("top eigenvalues drift by {drift:.3e} under basis doubling"));
        }
        Err(e) => return Err(e),
    }
    out.table = Some(t);
    Ok(out)
}

fn lfunc(a: &crate::LfuncArgs) -> Result<Outcome> {
    let form = load_form(&a.form)?;
    let pts = if a.points.is_empty() {
        default_fe_grid()
    } else {
        a.points.iter().map(|s| parse_c64(s)).collect::<Result<Vec<_>>>()?
    };
    let table = MellinTable::new(&form, DEFAULT_SPLIT)?;
    let data = DirichletData::from_form(&form);
    let mut t = component_header(&["eps", "s_re", "s_im", "source"], form.dim());
    for eps in 0..2u8 {
        for &s in &pts {
            let mut row = vec![eps.to_string(), num(s.re), num(s.im), "mellin".into()];
            row.extend(vec_cells(&table.completed(eps, s)));
            t.push(row);
            if let Ok(v) = completed_l_series(&data, eps, s) {
                let mut row = vec![eps.to_string(), num(s.re), num(s.im), "series".into()];
                row.extend(vec_cells(&v.value));
                t.push(row);
            }
        }
    }
    let fe = [functional_equation_residual(&form, 0, &pts)?, functional_equation_residual(&form, 1, &pts)?];
    let pass = fe.iter().all(|&r| r < a.tol);
    let mut out = Outcome::new(pass, json!({"fe_residual": fe, "tol": a.tol, "sigma0": data.sigma0()}));
    out.lines.push(describe(&form));
    out.lines.push(format!("FE residual    = {:.3e} (eps 0), {:.3e} (eps 1)", fe[0], fe[1]));
    out.lines.push(format!("series abscissa sigma0 = {:.3}", data.sigma0()));
    out.table = Some(t);
    for (e, r) in fe.iter().enumerate() {
        if *r >= a.tol {
            out.failures.push(format!("functional equation eps = {e}: residual {r:.3e}"));
        }
    }
    Ok(out)
}

fn converse(a: &FormArgs) -> Result<Outcome> {
    let file = parse_coefficients(&read(&a.form)?)?;
    let rep = load_rep(&a.rep)?;
    if rep.dim() != file.dim || rep.order_t() != file.period {
        return Err(Error::Dimension(format!("file has dim {} and N {}, representation {} and {}", file.dim, file.period, rep.dim(), rep.order_t())));
    }
    let data = DirichletData::new(SpectralParameter::new(file.nu), rep, file.coeffs)?;
    let r = converse_build(&data)?.report;
    let mut out = Outcome::new(r.hypothesis_ok, json!({"fe_residual": r.fe_residual, "automorphy": r.automorphy, "hypothesis_ok": r.hypothesis_ok}));
    out.lines.push(format!("FE residual    = {:.3e} (eps 0), {:.3e} (eps 1)", r.fe_residual[0], r.fe_residual[1]));
    out.lines.push(format!("automorphy     = {:.3e}", r.automorphy));
    out.lines.push(format!("hypotheses     = {}", if r.hypothesis_ok { "satisfied" } else { "violated" }));
    if !r.hypothesis_ok {
        out.failures.push(format!("functional equations fail: {:.3e}, {:.3e}", r.fe_residual[0], r.fe_residual[1]));
    }
    Ok(out)
}

fn asymptotics(a: &crate::AsymptoticsArgs) -> Result<Outcome> {
    let form = load_form(&a.form)?;
    let psi = PeriodFunction::new(BoundaryData::new(Arc::new(form)))?;
    let r = asymptotic_bound_check(&psi, psi.nu(), a.c, None)?;
    let mut out = Outcome::new(r.pass, json!({"exponent": r.exponent, "sup_small": r.sup_small, "c": a.c}));
    out.lines.push(format!("decay exponent = {:.4}", r.exponent));
    out.lines.push(format!("sup near 0     = {:.4e}", r.sup_small));
    if !r.pass {
        out.failures.push(format!("decay exponent {:.4} does not reach -{}", r.exponent, a.c));
    }
    Ok(out)
}
