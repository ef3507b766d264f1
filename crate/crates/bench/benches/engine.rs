use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use u3rb::catalog::{self, load_catalog, run_case, CaseOptions, CaseSpec, VerifyOptions};
use u3rb::groebner::buchberger;
use u3rb::Limits;
use u3rb_bench::{cyclic, preset_system};

fn residuals(c: &mut Criterion) {
    let entries = load_catalog();
    c.bench_function("catalog residuals", |b| {
        b.iter(|| {
            entries
                .iter()
                .filter(|e| black_box(&e.operator).rb_residual().is_zero())
                .count()
        })
    });
    c.bench_function("verify catalog, 10 samples", |b| {
        let opts = VerifyOptions {
            samples: 10,
            ..VerifyOptions::default()
        };
        b.iter(|| catalog::verify_all(black_box(&opts)).unwrap())
    });
}

fn groebner(c: &mut Criterion) {
    let mut group = c.benchmark_group("buchberger");
    group.sample_size(10);
    for n in [4, 5] {
        let sys = cyclic(n);
        group.bench_with_input(BenchmarkId::new("cyclic", n), &sys, |b, sys| {
            b.iter(|| buchberger(sys, &Limits::unlimited()).unwrap())
        });
    }
    for name in ["sec4.1", "sec5", "sec7"] {
        let sys = preset_system(name);
        group.bench_with_input(BenchmarkId::new("preset", name), &sys, |b, sys| {
            b.iter(|| buchberger(sys, &Limits::unlimited()).unwrap())
        });
    }
    group.finish();
}

fn cases(c: &mut Criterion) {
    let mut group = c.benchmark_group("case");
    group.sample_size(10);
    let spec = CaseSpec::preset("sec4.1").unwrap();
    group.bench_function("sec4.1", |b| {
        b.iter(|| run_case(&spec, &CaseOptions::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, residuals, groebner, cases);
criterion_main!(benches);
