use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use nplectic::classify::{flatness_report, hitchin_endomorphism, product_normal_form, split_product, standard_volume};
use nplectic::exterior::DiffForm;
use nplectic::hdw::multiphase_forms;
use nplectic::liesym::{obstruction_cochain, so3_gibbs_action};
use nplectic::linfty::{linfty_relation_residual, make_observable};
use nplectic::mover::{move_points, realify_and_check};
use nplectic_bench::{lattice_points, omega_x2};

fn classify(c: &mut Criterion) {
    let w = omega_x2();
    let vol = standard_volume(w.chart());
    c.bench_function("hitchin_endomorphism/omega_x2", |b| b.iter(|| hitchin_endomorphism(black_box(&w), &vol)));
    c.bench_function("split_product/omega_x2", |b| b.iter(|| split_product(black_box(&w))));
    c.bench_function("flatness_report/omega_x2", |b| b.iter(|| flatness_report(black_box(&w))));
}

fn linfty(c: &mut Criterion) {
    // Each block's part only involves that block's variables, so every form
    // is Hamiltonian for dx123 + dx456.
    let w = product_normal_form();
    let chart = w.chart().clone();
    let forms: [&[(&[usize], &str)]; 4] = [
        &[(&[1], "x2 x3"), (&[4], "x5^2")],
        &[(&[2], "x1^2"), (&[6], "x4 x5")],
        &[(&[3], "x1 + x2"), (&[5], "x6")],
        &[(&[1], "x3^2"), (&[2], "x1"), (&[4], "x4 x6")],
    ];
    let args: Vec<_> = forms
        .iter()
        .map(|t| make_observable(&w, &DiffForm::parse(&chart, 1, t).expect("valid")).expect("Hamiltonian"))
        .collect();
    c.bench_function("linfty_relation/k3_r6", |b| b.iter(|| linfty_relation_residual(&w, 3, black_box(&args))));
}

fn lie(c: &mut Criterion) {
    let (act, w) = so3_gibbs_action();
    c.bench_function("obstruction/so3_gibbs_i3", |b| b.iter(|| obstruction_cochain(&act, black_box(&w), 3)));
}

fn multiphase(c: &mut Criterion) {
    c.bench_function("multiphase_forms/3x3", |b| b.iter(|| multiphase_forms(black_box(3), 3)));
}

fn mover(c: &mut Criterion) {
    for (n, k) in [(2, 5), (3, 5)] {
        let src = lattice_points(n, k, 0);
        let dst = lattice_points(n, k, 7);
        c.bench_function(&format!("move_points/n{n}_k{k}"), |b| b.iter(|| move_points(black_box(&src), &dst, n)));
        let f = move_points(&src, &dst, n).expect("distinct points");
        c.bench_function(&format!("jacobian/n{n}_k{k}"), |b| b.iter(|| black_box(&f).jacobian_determinant()));
        c.bench_function(&format!("realify/n{n}_k{k}"), |b| b.iter(|| realify_and_check(black_box(&f))));
    }
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = classify, linfty, lie, multiphase, mover
}
criterion_main!(benches);
