//! Benchmarks across the pipeline: representation building, projections,
//! seminorm evaluation, the transport LP, and the cutting-plane solver.

use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};

use speclab_core::convergence::{convergence_experiment, ChainSpec, DensityState, MuRule};
use speclab_core::group::{distance_profile, make_catalog_group, parse_descriptor};
use speclab_core::metric::{
    kantorovich_w1, state_metric, AlgebraState, LipEvaluator, LipMode, MeasureState,
};
use speclab_core::peter_weyl::{build_irreps, build_projection};
use speclab_core::rng::Rng;
use speclab_core::truncation::{build_context, RealFunction};

fn group_of(desc: &str) -> Arc<speclab_core::FiniteMetricGroup> {
    let (f, m) = parse_descriptor(desc).unwrap();
    Arc::new(make_catalog_group(&f, m).unwrap())
}

fn bench_representations(c: &mut Criterion) {
    let s4 = group_of("symmetric:4:word");
    c.bench_function("build_irreps/symmetric_4", |b| {
        b.iter(|| build_irreps(&s4).unwrap());
    });

    let q8 = group_of("quaternion8:word");
    let set = build_irreps(&q8).unwrap();
    c.bench_function("build_projection/quaternion8_full", |b| {
        b.iter(|| build_projection(&set, &set.labels(), &q8).unwrap());
    });
}

fn bench_truncation(c: &mut Criterion) {
    let z12 = group_of("cyclic:12:geodesic");
    let set = build_irreps(&z12).unwrap();
    let labels: Vec<String> = ["chi_0", "chi_1", "chi_2", "chi_10", "chi_11"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let projection = build_projection(&set, &labels, &z12).unwrap();
    c.bench_function("build_context/cyclic_12_partial", |b| {
        b.iter(|| build_context(projection.clone(), z12.clone()));
    });

    let ctx = build_context(projection, z12.clone());
    let eval = LipEvaluator::new(&ctx, LipMode::OperatorBoth);
    let mut rng = Rng::new(1);
    let t = ctx.compress(&RealFunction(rng.uniform_vec(12)));
    c.bench_function("lip_seminorm/cyclic_12_partial", |b| {
        b.iter(|| eval.seminorm(&t));
    });
}

fn bench_metrics(c: &mut Criterion) {
    let z8 = group_of("cyclic:8:word");
    c.bench_function("kantorovich_w1/cyclic_8", |b| {
        b.iter(|| kantorovich_w1(&MeasureState::haar(8), &MeasureState::dirac(0, 8), &z8).unwrap());
    });

    let set = build_irreps(&z8).unwrap();
    let projection = build_projection(&set, &set.labels(), &z8).unwrap();
    let ctx = build_context(projection, z8.clone());
    let eval = LipEvaluator::new(&ctx, LipMode::OperatorBoth);
    let haar = AlgebraState::from_density(&ctx, &DensityState::maximally_mixed(&ctx).rho).unwrap();
    let dirac = AlgebraState::from_density(&ctx, &DensityState::dirac_vector(&ctx, 0).rho).unwrap();
    c.bench_function("state_metric/cyclic_8_full", |b| {
        b.iter(|| state_metric(&haar, &dirac, &eval, 1e-4).unwrap());
    });
}

fn bench_convergence(c: &mut Criterion) {
    let z12 = group_of("cyclic:12:geodesic");
    c.bench_function("converge_chain/cyclic_12_geodesic", |b| {
        b.iter(|| convergence_experiment(z12.clone(), ChainSpec::Auto, MuRule::Optimal).unwrap());
    });

    let d4 = group_of("dihedral:4:word");
    let set = build_irreps(&d4).unwrap();
    let projection = build_projection(&set, &set.labels(), &d4).unwrap();
    let ctx = build_context(projection, d4.clone());
    let profile = distance_profile(&d4);
    c.bench_function("optimal_liftable_state/dihedral_4_full", |b| {
        b.iter(|| speclab_core::convergence::optimal_liftable_state(&ctx, &profile));
    });
}

criterion_group!(
    benches,
    bench_representations,
    bench_truncation,
    bench_metrics,
    bench_convergence
);
criterion_main!(benches);
