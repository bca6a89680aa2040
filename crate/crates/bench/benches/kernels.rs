use criterion::{black_box, criterion_group, criterion_main, Criterion};

use cext_core::{
    delta_form_alpha, random_smooth_loop, random_tangent, second_cohomology, sphere_period, CyclicCoefficients,
    FiniteGroup, LoopSurface,
};

fn cohomology(c: &mut Criterion) {
    let klein = FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(2));
    let d4 = FiniteGroup::dihedral(4);
    let n2 = CyclicCoefficients::new(2).unwrap();
    let n4 = CyclicCoefficients::new(4).unwrap();
    c.bench_function("h2_klein_mod2", |b| b.iter(|| second_cohomology(black_box(&klein), n2).unwrap()));
    c.bench_function("h2_d4_mod4", |b| b.iter(|| second_cohomology(black_box(&d4), n4).unwrap()));
}

fn forms(c: &mut Criterion) {
    let g: Vec<_> = (0..3).map(|k| random_smooth_loop(k, 2, 128, 3).unwrap()).collect();
    let x: Vec<_> = (0..3).map(|k| random_tangent(k, 2, 128, 3).unwrap()).collect();
    let point = [g[0].clone(), g[1].clone(), g[2].clone()];
    let xi = [x[0].clone(), x[1].clone(), x[2].clone()];
    c.bench_function("delta_alpha_n2_N128", |b| b.iter(|| delta_form_alpha(black_box(&point), &xi).unwrap()));
}

fn period(c: &mut Criterion) {
    let surface = LoopSurface::standard(16, 16, 64).unwrap();
    c.bench_function("sphere_period_16x16_N64", |b| b.iter(|| sphere_period(black_box(&surface)).unwrap()));
}

criterion_group!(benches, cohomology, forms, period);
criterion_main!(benches);
