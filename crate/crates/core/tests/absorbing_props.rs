mod common;

use common::*;
use pch_core::absorbing::*;
use pch_core::constructions::{random_bounded_mono, random_bounded_mono_with, RandomColouringParams};
use pch_core::ColouredComplete;
use pch_core::Exec;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

/// The absorbing definition, spelled out on the colour table.
fn absorbs(g: &ColouredComplete, q: [usize; 4], z: [usize; 4]) -> bool {
    let all = [q[0], q[1], q[2], q[3], z[0], z[1], z[2], z[3]];
    let mut s = all.to_vec();
    s.sort();
    s.dedup();
    s.len() == 8 && pc_path(g, &z) && pc_path(g, &[z[0], z[1], q[0], q[1]]) && pc_path(g, &[q[2], q[3], z[2], z[3]])
}

fn quad_strategy(n: usize) -> impl Strategy<Value = [usize; 4]> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| [v[0], v[1], v[2], v[3]])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn counting_matches_brute_force(n in 8usize..12, k in 2u32..6, seed in any::<u64>(), q in quad_strategy(8)) {
        let g = random_graph(n, k, seed);
        let mut brute = 0u64;
        for a in 0..n { for b in 0..n { for c in 0..n { for d in 0..n {
            brute += absorbs(&g, q, [a, b, c, d]) as u64;
        }}}}
        prop_assert_eq!(count_absorbing_with(&g, q, Exec::Sequential), brute);
        prop_assert_eq!(count_absorbing_with(&g, q, Exec::Parallel), brute);
        prop_assert_eq!(absorbing_paths(&g, q).count() as u64, brute);
        prop_assert!(absorbing_paths(&g, q).all(|z| is_absorbing(&g, q, z)));
    }

    #[test]
    fn absorbing_paths_splice_any_connecting_path(n in 10usize..14, seed in any::<u64>()) {
        let g = random_graph(n, 5, seed);
        let mut r = rng(seed);
        // A random PC path through x1 x2 .. y1 y2 of order 4 or 5.
        let mut vs: Vec<usize> = (0..n).collect();
        vs.shuffle(&mut r);
        let len = r.random_range(4..=5);
        let p = &vs[..len];
        prop_assume!(pc_path(&g, p));
        let q = [p[0], p[1], p[len - 2], p[len - 1]];
        for z in absorbing_paths(&g, q).filter(|z| z.iter().all(|v| !p.contains(v))) {
            let mut spliced = vec![z[0], z[1]];
            spliced.extend(p);
            spliced.extend([z[2], z[3]]);
            prop_assert!(pc_path(&g, &spliced));
        }
    }

    #[test]
    fn joined_paths_are_proper_and_avoid(seed in any::<u64>(), k in 2u32..6) {
        let n = 20;
        let g = random_graph(n, k, seed);
        let avoid: Vec<usize> = (10..14).collect();
        if let Some(p) = join_ends(&g, [0, 1, 2, 3], &avoid, 6).unwrap() {
            prop_assert!((2..=6).contains(&p.len()));
            prop_assert!(p.iter().all(|v| !avoid.contains(v) && *v > 3));
            let mut full = vec![0, 1];
            full.extend(&p);
            full.extend([2, 3]);
            prop_assert!(pc_path(&g, &full));
        }
    }
}

#[test]
fn universality_check_matches_definition() {
    for seed in 0..5 {
        let g = random_graph(14, 4, seed);
        let fam = vec![[0, 1, 2, 3], [4, 5, 6, 7]];
        let fam: Vec<[usize; 4]> = fam.into_iter().filter(|z| pc_path(&g, z)).collect();
        let scope: Vec<usize> = (8..14).collect();
        let cov = verify_universality(&g, &fam, &scope, UniversalityCheck::Exhaustive, Exec::Sequential);
        let mut covered = 0;
        let mut checked = 0;
        for &a in &scope { for &b in &scope { for &c in &scope { for &d in &scope {
            let q = [a, b, c, d];
            let mut s = q.to_vec();
            s.sort();
            s.dedup();
            if s.len() < 4 { continue; }
            checked += 1;
            covered += fam.iter().any(|z| absorbs(&g, q, *z)) as u64;
        }}}}
        assert_eq!((cov.checked, cov.covered), (checked, covered));
    }
}

#[test]
fn short_joins_exist_at_thirty_vertices() {
    let mut worst = 0;
    for seed in 0..100 {
        let g = random_bounded_mono(30, 10, seed).unwrap();
        let mut vs: Vec<usize> = (0..30).collect();
        vs.shuffle(&mut rng(seed));
        let p = join_ends(&g, [vs[0], vs[1], vs[2], vs[3]], &[], 8)
            .unwrap()
            .unwrap_or_else(|| panic!("seed {seed}: no join of order <= 8"));
        worst = worst.max(p.len());
    }
    assert!(worst <= 8);
}

#[test]
fn cycles_absorb_paths_with_exact_vertex_sets() {
    let mut params = RandomColouringParams::new(40, 14);
    params.palette = Some(20);
    let g = random_bounded_mono_with(params, 3).unwrap();
    let mut cp = CycleParams::new(12.0, 3);
    cp.verify_at = VerifyAt::Cycle;
    cp.family.check = UniversalityCheck::Exhaustive;
    let CycleOutcome::Built(ac) = build_absorbing_cycle(&g, &cp).unwrap() else {
        panic!("no absorbing cycle");
    };
    assert!(pc_cycle(&g, &ac.cycle));
    assert!(ac.coverage.exhaustive && ac.coverage.is_universal());
    // Members sit on the cycle as consecutive arcs.
    for z in &ac.family {
        let i = ac.cycle.iter().position(|v| *v == z[0]).unwrap();
        let m = ac.cycle.len();
        assert_eq!((0..4).map(|j| ac.cycle[(i + j) % m]).collect::<Vec<_>>(), z.to_vec());
    }
    let outside: Vec<usize> = (0..40).filter(|v| !ac.cycle.contains(v)).collect();
    let mut r = rng(9);
    let mut done = 0;
    while done < 30 {
        let mut vs = outside.clone();
        vs.shuffle(&mut r);
        let len = r.random_range(4..=vs.len().min(8));
        let p = &vs[..len];
        if !pc_path(&g, p) {
            continue;
        }
        let out = absorb_path(&g, &ac, p).unwrap();
        assert!(pc_cycle(&g, &out));
        let mut want: Vec<usize> = ac.cycle.iter().chain(p).copied().collect();
        let mut got = out.clone();
        want.sort();
        got.sort();
        assert_eq!(got, want);
        done += 1;
    }
    // Overlapping or short paths are refused.
    assert!(absorb_path(&g, &ac, &ac.cycle[..4]).is_err());
    assert!(absorb_path(&g, &ac, &outside[..3]).is_err());
}

#[test]
fn family_members_are_disjoint_proper_paths() {
    for seed in 0..10 {
        let g = random_graph(20, 10, seed);
        let mut fp = FamilyParams::new(8.0, seed);
        fp.retry_budget = 3;
        let fam = match sample_absorbing_family(&g, &fp).unwrap() {
            FamilyOutcome::Universal(f) => f,
            FamilyOutcome::NotUniversal { best, .. } => best,
        };
        let vs = fam.vertices();
        let mut s = vs.clone();
        s.sort();
        s.dedup();
        assert_eq!(s.len(), vs.len());
        assert!(fam.paths.iter().all(|z| pc_path(&g, z)));
        assert!(fam.paths.len() <= fam.sampled);
    }
}
