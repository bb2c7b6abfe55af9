use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use ffgscon::harness::{tally, tally_sequential};
use ffgscon::instance::builtin_instance;
use ffgscon::verifier::compile_test;
use ffgscon::witness::{forge_adversary, AdversaryKind, AdversarySpec};

fn sampled_trials(c: &mut Criterion) {
    let f = builtin_instance("blockade-4q").unwrap();
    let spec = AdversarySpec::new(AdversaryKind::BrokenSequence, 0.2);
    let t = forge_adversary(&f.instance, f.certificate(), &spec).unwrap().tuple;
    let trials = 200_000;

    let mut group = c.benchmark_group("tally");
    group.throughput(Throughput::Elements(trials));
    group.sample_size(20);
    for id in [5usize, 8] {
        let tree = compile_test(id, &f.instance, &t).unwrap();
        group.bench_with_input(BenchmarkId::new("sequential", id), &tree, |b, tree| {
            b.iter(|| tally_sequential(tree, 7, id as u16, trials))
        });
        // Same as sequential when built without the `parallel` feature.
        group.bench_with_input(BenchmarkId::new("parallel", id), &tree, |b, tree| {
            b.iter(|| tally(tree, 7, id as u16, trials))
        });
    }
    group.finish();
}

criterion_group!(benches, sampled_trials);
criterion_main!(benches);
