use std::collections::{HashSet, VecDeque};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::expansion::{expand_end_colours, EndState, ExpansionOptions};
use super::rotate::{combine_sequences, rotation_outcomes, within_distance, Chord, DEFAULT_SPREAD};
use super::system::{PathCycleSystem, Side};
use crate::certificate::{verify_certificate, Certificate};
use crate::error::{domain, Result};
use crate::graph::ColouredComplete;
use crate::par::Exec;

pub const DEFAULT_GREEDY_RESTARTS: usize = 50;

/// Longest path found by greedy end extension over `DEFAULT_GREEDY_RESTARTS`
/// random starts. No outside vertex can be appended at either end.
pub fn maximal_path_cycle(g: &ColouredComplete, seed: u64) -> Result<PathCycleSystem> {
    maximal_path_cycle_with(g, seed, DEFAULT_GREEDY_RESTARTS)
}

pub fn maximal_path_cycle_with(g: &ColouredComplete, seed: u64, restarts: usize) -> Result<PathCycleSystem> {
    let n = g.n();
    if n < 2 {
        return Err(domain("a path-cycle system needs n >= 2"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<Vec<usize>> = None;
    for _ in 0..restarts.max(1) {
        let u = rng.random_range(0..n);
        let mut v = rng.random_range(0..n - 1);
        if v >= u {
            v += 1;
        }
        let mut path = VecDeque::from([u, v]);
        let mut used = vec![false; n];
        used[u] = true;
        used[v] = true;
        loop {
            let l = path.len();
            let (x, y) = (path[0], path[l - 1]);
            let (cx, cy) = (g.colour(x, path[1]), g.colour(y, path[l - 2]));
            let options: Vec<(bool, usize)> = (0..n)
                .filter(|&w| !used[w])
                .flat_map(|w| {
                    let back = g.colour(y, w) != cy;
                    let front = g.colour(x, w) != cx;
                    [(true, w, back), (false, w, front)]
                })
                .filter(|&(_, _, ok)| ok)
                .map(|(b, w, _)| (b, w))
                .collect();
            let Some(&(back, w)) = options.choose(&mut rng) else {
                break;
            };
            used[w] = true;
            if back {
                path.push_back(w);
            } else {
                path.push_front(w);
            }
        }
        if best.as_ref().is_none_or(|b| path.len() > b.len()) {
            best = Some(path.into());
        }
    }
    Ok(PathCycleSystem::new_unchecked(n, best, Vec::new()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoFactorConfig {
    pub seed: u64,
    /// Independent attempts, each from its own greedy start.
    pub restarts: usize,
    pub greedy_restarts: usize,
    pub spread_distance: usize,
    /// When spread-out chord pairs are unavailable, search rotations
    /// validated against the current system instead.
    pub fallback: bool,
    pub max_depth: usize,
    /// Adopt any rotated state that can already grow or close instead of
    /// insisting on a two-colour pair at both ends.
    pub eager_states: bool,
    /// Cap on distinct end-parameter states visited by one fallback search.
    pub direct_state_limit: usize,
    pub exec: Exec,
}

impl Default for TwoFactorConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            restarts: 8,
            greedy_restarts: DEFAULT_GREEDY_RESTARTS,
            spread_distance: DEFAULT_SPREAD,
            fallback: true,
            max_depth: 9,
            eager_states: true,
            direct_state_limit: 20_000,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoFactorStats {
    /// Index of the attempt that produced the result.
    pub attempt: usize,
    pub extensions: usize,
    pub closures: usize,
    pub attachments: usize,
    /// Closures obtained by combining spread-out left and right sequences.
    pub spread_closures: usize,
    /// Steps obtained by the directly validated rotation search.
    pub direct_steps: usize,
    /// Rotations in the sequences that were actually adopted.
    pub rotations: usize,
    /// Level sizes of each spread-out right expansion.
    pub level_sizes: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TwoFactorOutcome {
    Found(Certificate),
    Failed { largest: PathCycleSystem },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoFactorReport {
    pub outcome: TwoFactorOutcome,
    pub stats: TwoFactorStats,
}

impl TwoFactorReport {
    pub fn certificate(&self) -> Option<&Certificate> {
        match &self.outcome {
            TwoFactorOutcome::Found(c) => Some(c),
            TwoFactorOutcome::Failed { .. } => None,
        }
    }
}

/// Searches for a properly coloured 2-factor by growing a path-cycle system
/// and closing its path with rotations.
///
/// Each attempt starts from a greedy path and loops: extend the path by an
/// outside vertex, close it when the end colours allow, or rotate the ends
/// until one of those applies. Closing first tries a spread-out right
/// sequence and a spread-out left sequence reaching a closable pair of end
/// colours; failing that, a breadth-first search over single rotations on
/// either side. Attempts run in batches on `cfg.exec`; the lowest-indexed
/// success wins.
pub fn find_pc_two_factor(g: &ColouredComplete, cfg: &TwoFactorConfig) -> Result<TwoFactorReport> {
    if g.n() < 3 {
        return Err(domain("a 2-factor needs n >= 3"));
    }
    let attempts = cfg.restarts.max(1);
    let width = cfg.exec.width().max(1);
    let mut best_failure: Option<TwoFactorReport> = None;
    let mut start = 0;
    while start < attempts {
        let len = width.min(attempts - start);
        let batch = cfg.exec.map_range(len, |i| attempt(g, cfg, start + i));
        for report in batch {
            match report.outcome {
                TwoFactorOutcome::Found(_) => return Ok(report),
                TwoFactorOutcome::Failed { ref largest } => {
                    let better = best_failure.as_ref().is_none_or(|b| match &b.outcome {
                        TwoFactorOutcome::Failed { largest: l } => largest.order() > l.order(),
                        TwoFactorOutcome::Found(_) => false,
                    });
                    if better {
                        best_failure = Some(report);
                    }
                }
            }
        }
        start += len;
    }
    Ok(best_failure.expect("at least one attempt ran"))
}

fn attempt(g: &ColouredComplete, cfg: &TwoFactorConfig, index: usize) -> TwoFactorReport {
    let seed = cfg.seed.wrapping_add(index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut stats = TwoFactorStats {
        attempt: index,
        ..Default::default()
    };
    let mut sys = maximal_path_cycle_with(g, seed, cfg.greedy_restarts).expect("n >= 3");
    let mut largest = sys.clone();
    let cap = 4 * g.n() + 8;

    for _ in 0..cap {
        if sys.order() > largest.order() {
            largest = sys.clone();
        }
        if sys.is_two_factor() {
            let cert = verify_certificate(g, &sys.to_certificate());
            if cert.is_valid() {
                return TwoFactorReport {
                    outcome: TwoFactorOutcome::Found(cert),
                    stats,
                };
            }
            debug_assert!(false, "2-factor failed verification: {:?}", cert.verdict);
            break;
        }
        if sys.path().is_none() {
            sys = attach(g, &sys);
            stats.attachments += 1;
            continue;
        }
        if let Some((next, closed)) = close_or_extend(g, &sys) {
            bump(&mut stats, closed);
            sys = next;
            continue;
        }
        if let Some(next) = spread_step(g, &sys, cfg, &mut stats) {
            sys = next;
            continue;
        }
        if cfg.fallback {
            if let Some(next) = direct_step(g, &sys, cfg, &mut stats) {
                sys = next;
                continue;
            }
        }
        break;
    }
    TwoFactorReport {
        outcome: TwoFactorOutcome::Failed { largest },
        stats,
    }
}

fn bump(stats: &mut TwoFactorStats, closed: bool) {
    if closed {
        stats.closures += 1;
    } else {
        stats.extensions += 1;
    }
}

/// Appends an outside vertex at either end, or else closes the path into a
/// cycle. The flag reports a closure.
fn close_or_extend(g: &ColouredComplete, sys: &PathCycleSystem) -> Option<(PathCycleSystem, bool)> {
    let p = sys.params(g)?;
    let path = sys.path()?;
    let inside = sys.vertex_mask();
    for v in (0..g.n()).filter(|&v| !inside[v]) {
        if g.colour(p.y, v) != p.cy {
            let mut q = path.to_vec();
            q.push(v);
            return Some((sys.with_parts(Some(q), sys.cycles().to_vec()), false));
        }
        if g.colour(p.x, v) != p.cx {
            let mut q = vec![v];
            q.extend_from_slice(path);
            return Some((sys.with_parts(Some(q), sys.cycles().to_vec()), false));
        }
    }
    let cxy = g.colour(p.x, p.y);
    if path.len() >= 3 && cxy != p.cx && cxy != p.cy {
        let mut cycles = sys.cycles().to_vec();
        cycles.push(path.to_vec());
        return Some((sys.with_parts(None, cycles), true));
    }
    None
}

/// Opens a cycle at one of its vertices `u` and hangs the lowest outside
/// vertex `v` in front, giving the path `v u ...` around the cycle.
fn attach(g: &ColouredComplete, sys: &PathCycleSystem) -> PathCycleSystem {
    let inside = sys.vertex_mask();
    let v = (0..g.n()).find(|&v| !inside[v]).expect("system is not spanning");
    let mut cycles = sys.cycles().to_vec();
    let cyc = cycles.remove(0);
    let m = cyc.len();
    let cvu = g.colour(v, cyc[0]);
    let mut path = vec![v];
    if g.colour(cyc[0], cyc[1]) != cvu {
        path.extend_from_slice(&cyc);
    } else {
        // The two cycle edges at cyc[0] differ, so the other direction fits.
        path.extend((0..m).map(|k| cyc[(m - k) % m]));
    }
    sys.with_parts(Some(path), cycles)
}

fn expansion_opts(cfg: &TwoFactorConfig) -> ExpansionOptions {
    ExpansionOptions {
        max_depth: cfg.max_depth,
        spread: Some(cfg.spread_distance),
        stop_at_two_colours: true,
    }
}

/// First state (in BFS order) whose system can grow or close directly.
fn extendable_state<'a>(
    g: &ColouredComplete,
    states: impl Iterator<Item = &'a EndState>,
) -> Option<(PathCycleSystem, bool, usize)> {
    states
        .filter(|s| !s.sequence.is_empty())
        .find_map(|s| close_or_extend(g, &s.system).map(|(next, closed)| (next, closed, s.sequence.len())))
}

/// Right expansion to a vertex `z` with two end colours, left expansion away
/// from everything near the right witnesses to a vertex `w` with two end
/// colours, then a combined system with ends `w`, `z` closed by `zw`.
fn spread_step(
    g: &ColouredComplete,
    sys: &PathCycleSystem,
    cfg: &TwoFactorConfig,
    stats: &mut TwoFactorStats,
) -> Option<PathCycleSystem> {
    let d = cfg.spread_distance;
    let p = sys.params(g)?;
    if sys.distance(p.x, p.y).is_some_and(|dist| dist <= d) {
        return None;
    }
    let right = expand_end_colours(sys, g, Side::Right, &[], expansion_opts(cfg)).ok()?;
    stats.level_sizes.push(right.level_sizes());
    if let Some((next, closed, rot)) = cfg.eager_states.then(|| extendable_state(g, right.states())).flatten() {
        stats.rotations += rot;
        bump(stats, closed);
        return Some(next);
    }
    let rw = right.two_colour?;

    let mut near = vec![p.x, p.y];
    for s in rw.first.sequence.steps.iter().chain(&rw.second.sequence.steps) {
        near.push(s.chord.endpoint);
        near.push(s.chord.w);
    }
    let mask = within_distance(sys, &near, d);
    let forbidden: Vec<usize> = (0..g.n())
        .filter(|&v| mask[v] && v != p.x && v != p.y)
        .collect();
    let left = expand_end_colours(sys, g, Side::Left, &forbidden, expansion_opts(cfg)).ok()?;
    if let Some((next, closed, rot)) = cfg.eager_states.then(|| extendable_state(g, left.states())).flatten() {
        stats.rotations += rot;
        bump(stats, closed);
        return Some(next);
    }
    let lw = left.two_colour?;
    let (z, w) = (rw.vertex, lw.vertex);
    if z == w {
        return None;
    }
    let czw = g.colour(z, w);
    let er = [&rw.first, &rw.second].into_iter().find(|s| s.colour != czw)?;
    let fl = [&lw.first, &lw.second].into_iter().find(|s| s.colour != czw)?;
    let g0 = combine_sequences(sys, g, &er.sequence, &fl.sequence).ok()?;
    let (path, mut cycles) = g0.clone().into_parts();
    cycles.push(path?);
    stats.rotations += er.sequence.len() + fl.sequence.len();
    stats.spread_closures += 1;
    stats.closures += 1;
    Some(g0.with_parts(None, cycles))
}

/// Breadth-first search over systems reachable by single rotations on
/// either side, each checked against the current system, until one can be
/// extended or closed. States are keyed by their end parameters.
fn direct_step(
    g: &ColouredComplete,
    sys: &PathCycleSystem,
    cfg: &TwoFactorConfig,
    stats: &mut TwoFactorStats,
) -> Option<PathCycleSystem> {
    let key = |s: &PathCycleSystem| s.params(g).map(|p| (p.x, p.cx, p.y, p.cy));
    let mut seen = HashSet::from([key(sys)?]);
    let mut queue = VecDeque::from([(sys.clone(), 0usize)]);
    while let Some((cur, depth)) = queue.pop_front() {
        let p = cur.params(g)?;
        for side in [Side::Right, Side::Left] {
            let (end, colour) = p.end(side);
            let (anchor, _) = p.end(side.opposite());
            let anchor_nbrs = cur.neighbours(anchor);
            for w in cur.vertex_set() {
                if w == end || w == anchor || anchor_nbrs.contains(&w) || g.colour(end, w) == colour {
                    continue;
                }
                let chord = Chord { side, endpoint: end, w };
                for next in rotation_outcomes(&cur, g, chord).ok()? {
                    if let Some((grown, closed)) = close_or_extend(g, &next) {
                        stats.rotations += depth + 1;
                        stats.direct_steps += 1;
                        bump(stats, closed);
                        return Some(grown);
                    }
                    if seen.len() < cfg.direct_state_limit && seen.insert(key(&next)?) {
                        queue.push_back((next, depth + 1));
                    }
                }
            }
        }
    }
    None
}
