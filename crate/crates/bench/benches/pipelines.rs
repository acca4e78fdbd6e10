use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use hypertoric::arrangement::{bounded_complex, Arrangement};
use hypertoric::linalg::smith_normal_form;
use hypertoric::topology::{
    cohomology_presentation, hilbert_function, reduce_presentation, MonomialMode,
};
use hypertoric::torus::enumerate_walls;
use hypertoric::wallcross::enumerate_chambers;
use hypertoric_bench::{line_spec, rank2_spec, rat, snf_input};

fn bench_smith_normal_form(c: &mut Criterion) {
    let m = snf_input();
    c.bench_function("smith_normal_form 5x5", |b| {
        b.iter(|| smith_normal_form(black_box(&m)))
    });
}

fn bench_face_enumeration(c: &mut Criterion) {
    let spec = rank2_spec();
    let alpha = [rat(3), rat(1)];
    let arr = Arrangement::build(&spec, &alpha).unwrap();
    c.bench_function("enumerate_faces rank2", |b| {
        b.iter(|| black_box(&arr).enumerate_faces())
    });
    let line = line_spec(4);
    let arr_line = Arrangement::build(&line, &[rat(1)]).unwrap();
    c.bench_function("enumerate_faces 5 planes in dim 4", |b| {
        b.iter(|| black_box(&arr_line).enumerate_faces())
    });
}

fn bench_bounded_complex(c: &mut Criterion) {
    let spec = rank2_spec();
    let alpha = [rat(3), rat(1)];
    let arr = Arrangement::build(&spec, &alpha).unwrap();
    let faces = arr.enumerate_faces();
    c.bench_function("bounded_complex rank2", |b| {
        b.iter(|| bounded_complex(black_box(&arr), black_box(&faces)))
    });
}

fn bench_chambers(c: &mut Criterion) {
    let spec = rank2_spec();
    let walls = enumerate_walls(&spec);
    let zero = vec![rat(0), rat(0)];
    c.bench_function("enumerate_chambers rank2", |b| {
        b.iter(|| enumerate_chambers(black_box(&spec), black_box(&walls), &zero, &zero))
    });
}

fn bench_hilbert(c: &mut Criterion) {
    let spec = rank2_spec();
    let pres = cohomology_presentation(&spec, MonomialMode::Circuits, None).unwrap();
    let reduced = reduce_presentation(&spec, &pres);
    c.bench_function("hilbert_function rank2", |b| {
        b.iter(|| hilbert_function(black_box(&reduced), 4))
    });
}

criterion_group!(
    benches,
    bench_smith_normal_form,
    bench_face_enumeration,
    bench_bounded_complex,
    bench_chambers,
    bench_hilbert
);
criterion_main!(benches);
