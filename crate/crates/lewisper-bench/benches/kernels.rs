use criterion::{black_box, criterion_group, criterion_main, Criterion};

use lewisper::finrep::FiniteRep;
use lewisper::lewis::{lewis_residual, real_grid, PeriodFunction, Route};
use lewisper::lfunc::MellinTable;
use lewisper::maass::{solve_at, Parity};
use lewisper::specialfn::{bessel_k, hurwitz_zeta, SpectralParameter};
use lewisper::transfer::{TransferKind, TransferOperatorDisc};
use lewisper::Complex64 as C64;
use lewisper_bench::odd_form;

fn special(c: &mut Criterion) {
    let nu = C64::new(0.0, 9.533695261354);
    c.bench_function("bessel_k/small_x", |b| b.iter(|| bessel_k(black_box(nu), black_box(0.7))));
    c.bench_function("bessel_k/large_x", |b| b.iter(|| bessel_k(black_box(nu), black_box(35.0))));
    c.bench_function("hurwitz_zeta", |b| b.iter(|| hurwitz_zeta(black_box(C64::new(1.5, 19.0)), black_box(C64::new(0.3, 0.0)))));
}

fn forms(c: &mut Criterion) {
    c.bench_function("hejhal/solve_at", |b| b.iter(|| solve_at(black_box(9.5337), Parity::Odd, 25, 0.2)));
    let form = odd_form();
    c.bench_function("form/evaluate", |b| b.iter(|| form.evaluate(black_box(C64::new(0.21, 0.9)))));
    c.bench_function("lfunc/mellin_table", |b| b.iter(|| MellinTable::new(black_box(&form), 1.0)));
}

fn period(c: &mut Criterion) {
    let psi = PeriodFunction::from_form(odd_form()).unwrap();
    // build the cached ray paths outside the timed loop
    let _ = psi.eval_with(C64::new(0.7, 0.0), Route::Ray);
    let _ = psi.eval_with(C64::new(0.7, 0.0), Route::MellinBarnes);
    c.bench_function("psi/direct", |b| b.iter(|| psi.eval_with(black_box(C64::new(0.3, 0.8)), Route::Direct)));
    c.bench_function("psi/ray", |b| b.iter(|| psi.eval_with(black_box(C64::new(0.7, 0.0)), Route::Ray)));
    c.bench_function("psi/mellin_barnes", |b| b.iter(|| psi.eval_with(black_box(C64::new(0.7, 0.0)), Route::MellinBarnes)));
    let grid = real_grid();
    let mut g = c.benchmark_group("lewis");
    g.sample_size(10);
    g.bench_function("residual_real_grid", |b| b.iter(|| lewis_residual(&psi, psi.nu(), psi.rep(), black_box(&grid))));
    g.finish();
}

fn transfer(c: &mut Criterion) {
    let mut g = c.benchmark_group("transfer");
    g.sample_size(10);
    let nu = SpectralParameter::new(C64::new(0.5, 0.0));
    g.bench_function("gauss_disc_40", |b| b.iter(|| TransferOperatorDisc::new(TransferKind::Gauss, nu, &FiniteRep::trivial(), black_box(40))));
    g.finish();
}

criterion_group!(benches, special, forms, period, transfer);
criterion_main!(benches);
