#![allow(dead_code)]

use std::collections::BTreeSet;

use pch_core::rotations::{
    find_chords, maximal_path_cycle, rotation_outcomes, Chord, PathCycleSystem, Side,
};
use pch_core::{Colour, ColouredComplete};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform colouring from `k` colours.
pub fn random_graph(n: usize, k: Colour, seed: u64) -> ColouredComplete {
    let mut r = rng(seed);
    ColouredComplete::from_fn(n, |_, _| r.random_range(0..k))
}

pub fn edge_colour(g: &ColouredComplete, u: usize, v: usize) -> Colour {
    g.table()[if u < v { idx(g.n(), u, v) } else { idx(g.n(), v, u) }]
}

fn idx(n: usize, u: usize, v: usize) -> usize {
    u * n - u * (u + 1) / 2 + (v - u - 1)
}

fn distinct(vs: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    vs.iter().all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
}

/// Properly coloured path, checked straight from the colour table.
pub fn pc_path(g: &ColouredComplete, p: &[usize]) -> bool {
    distinct(p, g.n()) && p.windows(3).all(|w| edge_colour(g, w[0], w[1]) != edge_colour(g, w[1], w[2]))
}

pub fn pc_cycle(g: &ColouredComplete, c: &[usize]) -> bool {
    let m = c.len();
    m >= 3
        && distinct(c, g.n())
        && (0..m).all(|i| edge_colour(g, c[i], c[(i + 1) % m]) != edge_colour(g, c[(i + 1) % m], c[(i + 2) % m]))
}

pub fn check_system(g: &ColouredComplete, s: &PathCycleSystem) -> Result<(), String> {
    let mut all: Vec<usize> = s.cycles().iter().flatten().copied().collect();
    if let Some(p) = s.path() {
        if p.len() < 2 || !pc_path(g, p) {
            return Err(format!("bad path {p:?}"));
        }
        all.extend(p);
    }
    if !distinct(&all, g.n()) {
        return Err("parts overlap".into());
    }
    for c in s.cycles() {
        if !pc_cycle(g, c) {
            return Err(format!("bad cycle {c:?}"));
        }
    }
    Ok(())
}

/// Neighbour sets and the colours at each vertex, recomputed from parts.
pub fn adjacency(s: &PathCycleSystem) -> Vec<BTreeSet<usize>> {
    let n = s.host_order();
    let mut adj = vec![BTreeSet::new(); n];
    let mut add = |a: usize, b: usize| {
        adj[a].insert(b);
        adj[b].insert(a);
    };
    if let Some(p) = s.path() {
        for w in p.windows(2) {
            add(w[0], w[1]);
        }
    }
    for c in s.cycles() {
        for i in 0..c.len() {
            add(c[i], c[(i + 1) % c.len()]);
        }
    }
    adj
}

pub fn distances(s: &PathCycleSystem, from: usize) -> Vec<Option<usize>> {
    let adj = adjacency(s);
    let mut d = vec![None; adj.len()];
    d[from] = Some(0);
    let mut q = std::collections::VecDeque::from([from]);
    while let Some(u) = q.pop_front() {
        for &v in &adj[u] {
            if d[v].is_none() {
                d[v] = Some(d[u].unwrap() + 1);
                q.push_back(v);
            }
        }
    }
    d
}

/// End parameters `(x, c_x, y, c_y)`.
pub fn ends(g: &ColouredComplete, s: &PathCycleSystem) -> (usize, Colour, usize, Colour) {
    let p = s.path().expect("system has a path");
    let l = p.len();
    (p[0], edge_colour(g, p[0], p[1]), p[l - 1], edge_colour(g, p[l - 1], p[l - 2]))
}

/// Contract of one rotation along `chord` from `before` to `after`: a
/// valid system on the same vertices, the far end and its colour fixed, and
/// the new end a former neighbour `y'` of the chord target whose new end
/// edge goes to its other former neighbour.
pub fn rotation_contract(
    g: &ColouredComplete,
    before: &PathCycleSystem,
    chord: Chord,
    after: &PathCycleSystem,
) -> Result<(), String> {
    check_system(g, after)?;
    if before.vertex_set() != after.vertex_set() {
        return Err("vertex set changed".into());
    }
    let (b, a) = match chord.side {
        Side::Right => (before.clone(), after.clone()),
        Side::Left => (before.reversed(), after.reversed()),
    };
    let (x0, cx0, _, _) = ends(g, &b);
    let (x1, cx1, y1, _) = ends(g, &a);
    if (x0, cx0) != (x1, cx1) {
        return Err("opposite end moved".into());
    }
    let old = adjacency(&b);
    if !old[chord.w].contains(&y1) {
        return Err(format!("new end {y1} is not a neighbour of {}", chord.w));
    }
    let p = a.path().unwrap();
    let prev = p[p.len() - 2];
    if prev == chord.w || !old[y1].contains(&prev) {
        return Err(format!("new end edge {y1}{prev} is not the other old edge at {y1}"));
    }
    Ok(())
}

/// A random system: a greedy maximal path on a random subset, then a few
/// random rotations, which split off cycles along the way.
pub fn random_system(g: &ColouredComplete, seed: u64, rotations: usize) -> PathCycleSystem {
    let mut r = rng(seed ^ 0xabcd);
    let mut s = maximal_path_cycle(g, seed).expect("n >= 2");
    for _ in 0..rotations {
        let side = if r.random_bool(0.5) { Side::Right } else { Side::Left };
        let chords: Vec<Chord> = find_chords(&s, g, side)
            .unwrap()
            .into_iter()
            .filter(|c| rotation_outcomes(&s, g, *c).is_ok())
            .collect();
        let Some(&c) = chords.choose(&mut r) else { break };
        let outs = rotation_outcomes(&s, g, c).unwrap();
        let next = outs.choose(&mut r).unwrap().clone();
        if next.path().is_some_and(|p| p.len() >= 2) {
            s = next;
        }
    }
    s
}
