use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hbf_core::harness::{ExperimentConfig, Scenario, SimContext};
use hbf_core::linalg::complex_gaussian_matrix;
use hbf_core::precoding::fully_digital_precoder;
use hbf_core::rng::{stream, Purpose};
use hbf_core::*;

fn default_channel() -> CMat {
    gen_scenario(&ScenarioConfig::new(256, 16, 1, 2017).unwrap(), 0)
        .unwrap()
        .serving(0)
        .spatial
        .clone()
}

fn bench_omp(c: &mut Criterion) {
    let mut rng = stream(1, 0, Purpose::Custom, 0);
    let sensing = complex_gaussian_matrix(&mut rng, 96, 256, 1.0);
    let x = complex_gaussian_matrix(&mut rng, 256, 1, 1.0)
        .column(0)
        .into_owned();
    let y = &sensing * x;
    let mut group = c.benchmark_group("omp_recover_96x256");
    for sparsity in [3, 8, 16] {
        group.bench_with_input(BenchmarkId::from_parameter(sparsity), &sparsity, |b, &k| {
            b.iter(|| omp_recover(black_box(&y), black_box(&sensing), k).unwrap())
        });
    }
    group.finish();
}

fn bench_estimators(c: &mut Criterion) {
    let h = default_channel();
    let geometry = ArrayGeometry::new(256).unwrap();
    let transform = dft_matrix(&geometry);
    let dictionary = DirectionDictionary::new(&geometry, 1024).unwrap();
    let budget = PilotBudget::default();
    let mut group = c.benchmark_group("estimate_16_users");
    group.sample_size(20);
    group.bench_function("adaptive_cs", |b| {
        let mut rng = stream(2, 0, Purpose::EstimatePahp, 0);
        b.iter(|| estimate_adaptive_cs(black_box(&h), &dictionary, &budget, 3, &mut rng).unwrap())
    });
    group.bench_function("beamspace_cs", |b| {
        let mut rng = stream(2, 0, Purpose::EstimateLahp, 0);
        let plan = build_sensing_plan(256, 16, &budget, &mut rng).unwrap();
        b.iter(|| {
            estimate_beamspace_cs(black_box(&h), &transform, &plan, &budget, 8, &mut rng).unwrap()
        })
    });
    group.finish();
}

fn bench_precoders(c: &mut Criterion) {
    let h = default_channel();
    let geometry = ArrayGeometry::new(256).unwrap();
    let transform = dft_matrix(&geometry);
    let hb = to_beamspace(&h, &transform).unwrap();
    let codebook = PhaseCodebook::new(&geometry, PhaseCodebookConfig::default()).unwrap();
    let mut group = c.benchmark_group("precoder_256x16");
    group.bench_function("fully_digital_zf", |b| {
        b.iter(|| fully_digital_precoder(black_box(&h)).unwrap())
    });
    group.bench_function("two_stage_pahp", |b| {
        b.iter(|| two_stage_full_pahp(black_box(&h), &codebook, 16).unwrap())
    });
    group.bench_function("select_beams_mm", |b| {
        b.iter(|| select_beams_mm(black_box(&hb), 16).unwrap())
    });
    group.bench_function("select_beams_ia", |b| {
        b.iter(|| select_beams_ia(black_box(&hb), 16, 20.0).unwrap())
    });
    group.finish();
}

fn bench_trial(c: &mut Criterion) {
    let mut config = ExperimentConfig::for_scenario(Scenario::Fig4);
    config.snr_db = vec![20.0];
    let ctx = SimContext::new(config).unwrap();
    let mut group = c.benchmark_group("run_trial");
    group.sample_size(10);
    group.bench_function("fig4_20db_both_csi", |b| {
        b.iter(|| ctx.run_trial(black_box(0)))
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_omp,
    bench_estimators,
    bench_precoders,
    bench_trial
);
criterion_main!(benches);
