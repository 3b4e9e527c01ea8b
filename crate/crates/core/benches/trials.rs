//! Sequential against rayon-parallel trial batches on one host.

use criterion::{criterion_group, criterion_main, Criterion};
use induced_embed::embed::{EmbedConfig, ThresholdRule};
use induced_embed::exec::{map_trials_par, map_trials_seq};
use induced_embed::experiments::{gnp, preprocess_random, GnpParams, PipelineConfig};
use induced_embed::tree::TreeFamily;
use induced_embed::trials::{run_trial, AdversarySpec, TreeSource, TrialPlan};

fn batches(c: &mut Criterion) {
    let raw = gnp(&GnpParams::with_average_degree(4000, 48, 7));
    let (view, _) = preprocess_random(&raw, 48, &PipelineConfig::default()).expect("preprocessing");
    let g = view.graph;
    let d = ThresholdRule::HubCount(8).resolve(&g);
    let plan = TrialPlan {
        trees: TreeSource::Family {
            family: TreeFamily::Random { delta: 3, nodes: 30, seed: 0 },
        },
        adversaries: AdversarySpec::standard(),
        seeds: (0..8).collect(),
        embed: EmbedConfig::practical(3, d, 0),
        oracle: None,
    };
    let n = plan.trial_count();
    let mut group = c.benchmark_group("trials");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| map_trials_seq(n, |id| run_trial(&g, &g, &plan, id)))
    });
    group.bench_function("parallel", |b| {
        b.iter(|| map_trials_par(n, |id| run_trial(&g, &g, &plan, id)))
    });
    group.finish();
}

criterion_group!(benches, batches);
criterion_main!(benches);
