use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tamecheck_core::closure::{arc_falsify, ArcCatalog};
use tamecheck_core::exec::ExecMode;
use tamecheck_core::parse::parse_in_ring;
use tamecheck_core::poly::{rat, Ring};

// x*y*z is integral over (x^3, y^3, z^3), so no arc refutes it and the whole catalog is scanned.
fn full_scan(c: &mut Criterion) {
    let ring = Ring::new(["x", "y", "z"]).unwrap();
    let f = parse_in_ring("x*y*z", &ring).unwrap();
    let gens: Vec<_> = ["x^3", "y^3", "z^3"]
        .iter()
        .map(|g| parse_in_ring(g, &ring).unwrap())
        .collect();
    let base = vec![rat(0); 3];
    let mut group = c.benchmark_group("arc_falsify");
    group.sample_size(10);
    for weight in [2u32, 3] {
        let catalog = ArcCatalog::new(3, weight, 3);
        for (label, mode) in [
            ("sequential", ExecMode::Sequential),
            ("parallel", ExecMode::Parallel),
        ] {
            group.bench_with_input(
                BenchmarkId::new(label, catalog.count(3)),
                &catalog,
                |b, cat| {
                    b.iter(|| {
                        let w = arc_falsify(&f, &gens, &base, cat, &[], mode).unwrap();
                        assert!(w.is_none());
                        black_box(w)
                    })
                },
            );
        }
    }
    group.finish();
}

criterion_group!(benches, full_scan);
criterion_main!(benches);
