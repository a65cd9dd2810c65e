use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pch_core::absorbing::{
    build_absorbing_cycle, count_absorbing_with, verify_universality, CycleOutcome, CycleParams, UniversalityCheck,
    VerifyAt,
};
use pch_core::constructions::{bollobas_erdos, random_bounded_mono, random_bounded_mono_with, RandomColouringParams};
use pch_core::exact::{exact_pc_ham_cycle_with, SearchBudget};
use pch_core::rotations::{find_pc_two_factor, TwoFactorConfig};
use pch_core::Exec;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn absorbing_count(c: &mut Criterion) {
    let g = random_bounded_mono(50, 20, 1).unwrap();
    let mut group = c.benchmark_group("count_absorbing_n50");
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| count_absorbing_with(&g, [0, 1, 2, 3], exec)));
    }
    group.finish();
}

fn exact_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_ham_cycle");
    group.sample_size(10);
    // No Hamiltonian cycle exists, so the whole tree is searched.
    for k in [2, 3] {
        let g = bollobas_erdos(k).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, g.n()), &g, |b, g| {
                b.iter(|| exact_pc_ham_cycle_with(g, SearchBudget::unlimited(), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn universality(c: &mut Criterion) {
    let mut p = RandomColouringParams::new(40, 14);
    p.palette = Some(20);
    let (g, ac) = (0..)
        .find_map(|seed| {
            let g = random_bounded_mono_with(p, seed).unwrap();
            let mut cp = CycleParams::new(8.0, seed);
            cp.verify_at = VerifyAt::Cycle;
            match build_absorbing_cycle(&g, &cp).unwrap() {
                CycleOutcome::Built(ac) => Some((g, ac)),
                CycleOutcome::Failed(_) => None,
            }
        })
        .unwrap();
    let mask = ac.vertex_mask(40);
    let scope: Vec<usize> = (0..40).filter(|&v| !mask[v]).collect();
    let mut group = c.benchmark_group("verify_universality_n40");
    group.sample_size(20);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| verify_universality(&g, &ac.family, &scope, UniversalityCheck::Exhaustive, exec))
        });
    }
    group.finish();
}

fn two_factor_sweep(c: &mut Criterion) {
    let graphs: Vec<_> = (0..8).map(|s| random_bounded_mono(24, 8, s).unwrap()).collect();
    let mut group = c.benchmark_group("two_factor_n24_8_seeds");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = TwoFactorConfig { exec, ..Default::default() };
        group.bench_function(name, |b| {
            b.iter(|| {
                graphs
                    .iter()
                    .filter(|g| find_pc_two_factor(g, &cfg).unwrap().certificate().is_some())
                    .count()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, absorbing_count, exact_oracle, universality, two_factor_sweep);
criterion_main!(benches);
