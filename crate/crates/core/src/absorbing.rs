//! Absorbing paths and the absorbing cycle.
//!
//! An order-4 path `z1 z2 z3 z4` absorbs the ordered quadruple
//! `(x1, x2; y1, y2)` when it avoids those vertices, and both
//! `z1 z2 x1 x2` and `y1 y2 z3 z4` are properly coloured. Any properly
//! coloured path `x1 x2 .. y1 y2` can then be spliced in between `z2` and
//! `z3`. A short cycle threading a family of such paths, one for every
//! quadruple, swallows any disjoint path of order at least four.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::graph::{check_pair, ColouredComplete};
use crate::par::Exec;

/// Ordered quadruple `(x1, x2, y1, y2)`.
pub type Quad = [usize; 4];
/// Order-4 path `z1 z2 z3 z4`.
pub type Path4 = [usize; 4];

fn distinct<const N: usize>(vs: &[usize; N], n: usize) -> bool {
    vs.iter().enumerate().all(|(i, &a)| a < n && vs[i + 1..].iter().all(|&b| b != a))
}

/// The end-edge half of the absorbing condition: `z1 z2 x1 x2` is proper.
#[inline]
fn front_ok(g: &ColouredComplete, z: &Path4, x1: usize, x2: usize) -> bool {
    let c = g.colour(z[1], x1);
    c != g.colour(z[0], z[1]) && c != g.colour(x1, x2)
}

/// `y1 y2 z3 z4` is proper.
#[inline]
fn back_ok(g: &ColouredComplete, z: &Path4, y1: usize, y2: usize) -> bool {
    let c = g.colour(y2, z[2]);
    c != g.colour(y1, y2) && c != g.colour(z[2], z[3])
}

fn is_pc4(g: &ColouredComplete, z: &Path4) -> bool {
    g.colour(z[0], z[1]) != g.colour(z[1], z[2]) && g.colour(z[1], z[2]) != g.colour(z[2], z[3])
}

/// Exact check of the absorbing conditions. Repeated or out-of-range
/// vertices give `false`.
pub fn is_absorbing(g: &ColouredComplete, quad: Quad, path: Path4) -> bool {
    let all = [quad[0], quad[1], quad[2], quad[3], path[0], path[1], path[2], path[3]];
    distinct(&all, g.n())
        && is_pc4(g, &path)
        && front_ok(g, &path, quad[0], quad[1])
        && back_ok(g, &path, quad[2], quad[3])
}

/// A quadruple with one path certified to absorb it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsorbingRecord {
    pub quad: Quad,
    pub path: Path4,
}

impl AbsorbingRecord {
    pub fn new(g: &ColouredComplete, quad: Quad, path: Path4) -> Result<Self> {
        if !is_absorbing(g, quad, path) {
            return Err(domain(format!("{path:?} does not absorb {quad:?}")));
        }
        Ok(Self { quad, path })
    }
}

/// Every absorbing path for `quad`, lexicographically, by brute force.
pub fn absorbing_paths(g: &ColouredComplete, quad: Quad) -> impl Iterator<Item = Path4> + '_ {
    let n = g.n();
    let free: Vec<usize> = (0..n).filter(|v| !quad.contains(v)).collect();
    let f2 = free.clone();
    let f3 = free.clone();
    let f4 = free.clone();
    free.into_iter().flat_map(move |a| {
        let f3 = f3.clone();
        let f4 = f4.clone();
        f2.clone().into_iter().filter(move |&b| b != a).flat_map(move |b| {
            let f4 = f4.clone();
            f3.clone().into_iter().filter(move |&c| c != a && c != b).flat_map(move |c| {
                f4.clone()
                    .into_iter()
                    .filter(move |&d| d != a && d != b && d != c)
                    .map(move |d| [a, b, c, d])
                    .filter(move |z| is_absorbing(g, quad, *z))
            })
        })
    })
}

pub fn count_absorbing(g: &ColouredComplete, quad: Quad) -> u64 {
    count_absorbing_with(g, quad, Exec::default())
}

/// Exact number of absorbing paths for `quad` in `O(n^3)`.
///
/// For a fixed middle pair `(z2, z3)` the choices of `z1` and `z4` are
/// counted separately from colour histograms, then the choices with
/// `z1 = z4` are subtracted.
pub fn count_absorbing_with(g: &ColouredComplete, quad: Quad, exec: Exec) -> u64 {
    let n = g.n();
    if !distinct(&quad, n) {
        return 0;
    }
    let [x1, x2, y1, y2] = quad;
    let free: Vec<usize> = (0..n).filter(|v| !quad.contains(v)).collect();
    let k = g.colour_count() as usize;
    // hist[u][c]: free vertices v != u with c(uv) = c.
    let mut hist = vec![vec![0u32; k]; n];
    for &u in &free {
        for &v in &free {
            if u != v {
                hist[u][g.colour(u, v) as usize] += 1;
            }
        }
    }
    let m = free.len() as i64;
    let cx = g.colour(x1, x2);
    let cy = g.colour(y1, y2);
    exec.sum_range(free.len(), |i| {
        let z2 = free[i];
        let a_col = g.colour(z2, x1);
        if a_col == cx {
            return 0;
        }
        let mut total = 0i64;
        for &z3 in &free {
            if z3 == z2 {
                continue;
            }
            let b_col = g.colour(y2, z3);
            if b_col == cy {
                continue;
            }
            let mid = g.colour(z2, z3);
            // z1 ranges over free \ {z2, z3} with c(z1 z2) not in {a_col, mid}.
            let mut a = m - 1 - hist[z2][a_col as usize] as i64;
            if mid != a_col {
                a -= hist[z2][mid as usize] as i64;
            }
            // z4 over free \ {z2, z3} with c(z3 z4) not in {b_col, mid}.
            let mut b = m - 1 - hist[z3][b_col as usize] as i64;
            if mid != b_col {
                b -= hist[z3][mid as usize] as i64;
            }
            if a <= 0 || b <= 0 {
                continue;
            }
            let both = free
                .iter()
                .filter(|&&v| {
                    v != z2 && v != z3 && {
                        let c1 = g.colour(v, z2);
                        let c4 = g.colour(v, z3);
                        c1 != a_col && c1 != mid && c4 != b_col && c4 != mid
                    }
                })
                .count() as i64;
            total += a * b - both;
        }
        total as u64
    })
}

/// Fraction of quadruples that some family member absorbs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    pub checked: u64,
    pub covered: u64,
    pub exhaustive: bool,
}

impl Coverage {
    pub fn fraction(&self) -> f64 {
        if self.checked == 0 {
            1.0
        } else {
            self.covered as f64 / self.checked as f64
        }
    }

    pub fn is_universal(&self) -> bool {
        self.covered == self.checked
    }
}

/// How quadruples are checked for coverage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UniversalityCheck {
    /// Exhaustive when at most this many vertices are in scope, otherwise
    /// the given number of random quadruples.
    Auto { exhaustive_up_to: usize, samples: usize },
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

impl Default for UniversalityCheck {
    fn default() -> Self {
        UniversalityCheck::Auto {
            exhaustive_up_to: 120,
            samples: 100_000,
        }
    }
}

/// Bit sets over family members for each ordered pair of scope vertices.
struct PairMasks {
    words: usize,
    front: Vec<u64>,
    back: Vec<u64>,
}

impl PairMasks {
    fn new(g: &ColouredComplete, family: &[Path4], scope: &[usize]) -> Self {
        let s = scope.len();
        let words = family.len().div_ceil(64).max(1);
        let mut front = vec![0u64; s * s * words];
        let mut back = vec![0u64; s * s * words];
        for (a, &u) in scope.iter().enumerate() {
            for (b, &v) in scope.iter().enumerate() {
                if a == b {
                    continue;
                }
                let base = (a * s + b) * words;
                for (i, z) in family.iter().enumerate() {
                    if z.contains(&u) || z.contains(&v) {
                        continue;
                    }
                    if front_ok(g, z, u, v) {
                        front[base + i / 64] |= 1 << (i % 64);
                    }
                    if back_ok(g, z, u, v) {
                        back[base + i / 64] |= 1 << (i % 64);
                    }
                }
            }
        }
        Self { words, front, back }
    }

    fn covered(&self, s: usize, q: [usize; 4]) -> bool {
        let f = (q[0] * s + q[1]) * self.words;
        let b = (q[2] * s + q[3]) * self.words;
        (0..self.words).any(|w| self.front[f + w] & self.back[b + w] != 0)
    }
}

/// Checks every ordered quadruple of distinct vertices from `scope` (or a
/// random sample of them) for a family member absorbing it. Members must be
/// properly coloured order-4 paths.
pub fn verify_universality(
    g: &ColouredComplete,
    family: &[Path4],
    scope: &[usize],
    check: UniversalityCheck,
    exec: Exec,
) -> Coverage {
    let s = scope.len();
    if s < 4 {
        return Coverage {
            exhaustive: true,
            ..Default::default()
        };
    }
    let masks = PairMasks::new(g, family, scope);
    let (exhaustive, samples, seed) = match check {
        UniversalityCheck::Exhaustive => (true, 0, 0),
        UniversalityCheck::Sampled { samples, seed } => (false, samples, seed),
        UniversalityCheck::Auto {
            exhaustive_up_to,
            samples,
        } => (s <= exhaustive_up_to, samples, 0x5eed),
    };
    if exhaustive {
        let covered = exec.sum_range(s, |a| {
            let mut hit = 0;
            for b in (0..s).filter(|&b| b != a) {
                for c in (0..s).filter(|&c| c != a && c != b) {
                    for d in (0..s).filter(|&d| d != a && d != b && d != c) {
                        hit += masks.covered(s, [a, b, c, d]) as u64;
                    }
                }
            }
            hit
        });
        let checked = (s * (s - 1) * (s - 2) * (s - 3)) as u64;
        Coverage {
            checked,
            covered,
            exhaustive: true,
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut idx: Vec<usize> = (0..s).collect();
        let mut covered = 0;
        for _ in 0..samples {
            let (q, _) = idx.partial_shuffle(&mut rng, 4);
            covered += masks.covered(s, [q[0], q[1], q[2], q[3]]) as u64;
        }
        Coverage {
            checked: samples as u64,
            covered,
            exhaustive: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    /// Expected number of sampled 4-tuples before deletions.
    pub target_size: f64,
    /// Explicit per-tuple probability; overrides `target_size`.
    pub p: Option<f64>,
    pub retry_budget: usize,
    pub seed: u64,
    pub check: UniversalityCheck,
    pub exec: Exec,
}

impl FamilyParams {
    pub fn new(target_size: f64, seed: u64) -> Self {
        Self {
            target_size,
            p: None,
            retry_budget: 200,
            seed,
            check: UniversalityCheck::default(),
            exec: Exec::default(),
        }
    }
}

/// Selection probability `2^-8 ε² (n-4)!/(n-1)!` giving an expected
/// `2^-8 ε² n` tuples.
pub fn theoretical_probability(n: usize, eps: f64) -> f64 {
    let n = n as f64;
    2f64.powi(-8) * eps * eps / ((n - 1.0) * (n - 2.0) * (n - 3.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbsorbingFamily {
    pub paths: Vec<Path4>,
    /// Coverage of quadruples outside the family's vertices.
    pub coverage: Coverage,
    /// Tuples drawn before deletions.
    pub sampled: usize,
    /// Attempt index (0-based) that produced this family.
    pub attempt: usize,
}

impl AbsorbingFamily {
    pub fn vertices(&self) -> Vec<usize> {
        self.paths.iter().flatten().copied().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FamilyOutcome {
    Universal(AbsorbingFamily),
    NotUniversal { best: AbsorbingFamily, attempts: usize },
}

fn outside(n: usize, used: &[usize]) -> Vec<usize> {
    let mut mask = vec![false; n];
    for &v in used {
        mask[v] = true;
    }
    (0..n).filter(|&v| !mask[v]).collect()
}

fn sample_once(g: &ColouredComplete, params: &FamilyParams, attempt: usize, check: bool) -> AbsorbingFamily {
    let n = g.n();
    let total = (n * (n - 1) * (n - 2) * (n - 3)) as u64;
    let p = params
        .p
        .unwrap_or(params.target_size / total as f64)
        .clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ (attempt as u64).wrapping_mul(0xA076_1D64_78BD_642F));
    let count = Binomial::new(total, p).map_or(0, |b| b.sample(&mut rng)) as usize;
    let mut all: Vec<usize> = (0..n).collect();
    let drawn: Vec<Path4> = (0..count)
        .map(|_| {
            let (q, _) = all.partial_shuffle(&mut rng, 4);
            [q[0], q[1], q[2], q[3]]
        })
        .collect();
    // A tuple meeting any earlier draw is the later member of an
    // intersecting pair and is deleted.
    let mut seen = vec![false; n];
    let mut kept = Vec::new();
    for z in &drawn {
        if !z.iter().any(|&v| seen[v]) {
            kept.push(*z);
        }
        for &v in z {
            seen[v] = true;
        }
    }
    kept.retain(|z| is_pc4(g, z));
    let scope = outside(n, &kept.iter().flatten().copied().collect::<Vec<_>>());
    let coverage = if check {
        verify_universality(g, &kept, &scope, params.check, Exec::Sequential)
    } else {
        Coverage::default()
    };
    AbsorbingFamily {
        paths: kept,
        coverage,
        sampled: count,
        attempt,
    }
}

/// Draws every ordered 4-tuple independently with the configured
/// probability, deletes the later tuple of each intersecting pair and every
/// tuple that is not a properly coloured path, and accepts the result when
/// each quadruple outside its vertices is absorbed by some member. Retries
/// with fresh randomness up to `retry_budget` times.
pub fn sample_absorbing_family(g: &ColouredComplete, params: &FamilyParams) -> Result<FamilyOutcome> {
    if g.n() < 8 {
        return Err(domain("an absorbing family needs n >= 8"));
    }
    let budget = params.retry_budget.max(1);
    let width = params.exec.width().max(1);
    let mut best: Option<AbsorbingFamily> = None;
    let mut start = 0;
    while start < budget {
        let len = width.min(budget - start);
        let batch = params.exec.map_range(len, |i| sample_once(g, params, start + i, true));
        for fam in batch {
            if !fam.paths.is_empty() && fam.coverage.is_universal() {
                return Ok(FamilyOutcome::Universal(fam));
            }
            if best.as_ref().is_none_or(|b| fam.coverage.fraction() > b.coverage.fraction()) {
                best = Some(fam);
            }
        }
        start += len;
    }
    let mut best = best.expect("at least one attempt ran");
    if best.paths.is_empty() {
        best.coverage.covered = 0;
    }
    Ok(FamilyOutcome::NotUniversal { best, attempts: budget })
}

/// A properly coloured path `P` of order `2..=max_len` avoiding `avoid`
/// such that `v1 v2 P v1p v2p` is properly coloured; the shortest found by
/// iterative deepening. States `(vertex, colour of the arriving edge)` that
/// already failed at a given remaining depth are not expanded again, so the
/// search can miss a path; every returned path is re-verified.
pub fn join_ends(
    g: &ColouredComplete,
    ends: [usize; 4],
    avoid: &[usize],
    max_len: usize,
) -> Result<Option<Vec<usize>>> {
    let n = g.n();
    let [v1, v2, v1p, v2p] = ends;
    check_pair(n, v1, v2)?;
    check_pair(n, v1p, v2p)?;
    if !distinct(&ends, n) {
        return Err(domain(format!("join ends {ends:?} must be distinct")));
    }
    let mut blocked = vec![false; n];
    for &v in avoid.iter().chain(&ends) {
        if v < n {
            blocked[v] = true;
        }
    }
    let k = g.colour_count() as usize;
    let target_colour = g.colour(v1p, v2p);
    for order in 2..=max_len {
        let mut failed = vec![false; n * k * (order + 1)];
        let mut path = Vec::with_capacity(order);
        if dfs_join(g, &mut blocked, &mut failed, &mut path, v2, g.colour(v1, v2), order, [v1p, target_colour as usize], k) {
            let mut full = vec![v1, v2];
            full.extend(&path);
            full.extend([v1p, v2p]);
            if !g.is_properly_coloured_path(&full) {
                return Err(domain("join produced an improper path"));
            }
            return Ok(Some(path));
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn dfs_join(
    g: &ColouredComplete,
    blocked: &mut [bool],
    failed: &mut [bool],
    path: &mut Vec<usize>,
    last: usize,
    last_colour: u32,
    remaining: usize,
    target: [usize; 2],
    k: usize,
) -> bool {
    let [v1p, target_colour] = target;
    if remaining == 0 {
        let c = g.colour(last, v1p);
        return c != last_colour && c as usize != target_colour;
    }
    let n = g.n();
    for v in 0..n {
        if blocked[v] {
            continue;
        }
        let c = g.colour(last, v);
        if c == last_colour {
            continue;
        }
        let key = (v * k + c as usize) * (failed.len() / (n * k)) + remaining - 1;
        if failed[key] {
            continue;
        }
        blocked[v] = true;
        path.push(v);
        if dfs_join(g, blocked, failed, path, v, c, remaining - 1, target, k) {
            return true;
        }
        path.pop();
        blocked[v] = false;
        failed[key] = true;
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleParams {
    pub family: FamilyParams,
    /// Longest connector tried between consecutive family paths.
    pub max_len: usize,
    pub verify_at: VerifyAt,
}

impl CycleParams {
    pub fn new(target_size: f64, seed: u64) -> Self {
        Self {
            family: FamilyParams::new(target_size, seed),
            max_len: 8,
            verify_at: VerifyAt::Family,
        }
    }
}

/// Where universality is demanded before a sample is accepted.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerifyAt {
    /// The family must cover every quadruple outside its own vertices; the
    /// finished cycle is then checked again.
    #[default]
    Family,
    /// Any sampled family is stitched into a cycle, and the sample is kept
    /// only if the family covers every quadruple outside the cycle.
    Cycle,
}

/// A properly coloured cycle threading a universal absorbing family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbsorbingCycle {
    pub cycle: Vec<usize>,
    pub family: Vec<Path4>,
    /// `connectors[j]` joins `family[j]` to `family[j + 1]` (cyclically).
    pub connectors: Vec<Vec<usize>>,
    /// Coverage of quadruples outside the cycle.
    pub coverage: Coverage,
}

impl AbsorbingCycle {
    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    pub fn vertex_mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &v in &self.cycle {
            m[v] = true;
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CycleStage {
    Family { coverage: Coverage, attempts: usize },
    Join { index: usize },
    Verify { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CycleOutcome {
    Built(AbsorbingCycle),
    Failed(CycleStage),
}

/// Samples a family, joins each member's last edge to the next member's
/// first edge through unused vertices, wraps around, and verifies both
/// properness and universality over the vertices left outside.
///
/// With [`VerifyAt::Cycle`] the whole construction is retried up to the
/// family's retry budget until the cycle-level check passes.
pub fn build_absorbing_cycle(g: &ColouredComplete, params: &CycleParams) -> Result<CycleOutcome> {
    if params.verify_at == VerifyAt::Family {
        return match sample_absorbing_family(g, &params.family)? {
            FamilyOutcome::Universal(f) => stitch(g, params, f.paths),
            FamilyOutcome::NotUniversal { best, attempts } => Ok(CycleOutcome::Failed(CycleStage::Family {
                coverage: best.coverage,
                attempts,
            })),
        };
    }
    if g.n() < 8 {
        return Err(domain("an absorbing family needs n >= 8"));
    }
    let fam = &params.family;
    let budget = fam.retry_budget.max(1);
    let width = fam.exec.width().max(1);
    let mut last = None;
    let mut start = 0;
    while start < budget {
        let len = width.min(budget - start);
        let batch = fam.exec.map_range(len, |i| {
            let f = sample_once(g, fam, start + i, false);
            if f.paths.is_empty() {
                return Ok(CycleOutcome::Failed(CycleStage::Family {
                    coverage: f.coverage,
                    attempts: start + i + 1,
                }));
            }
            stitch(g, &CycleParams { family: FamilyParams { exec: Exec::Sequential, ..*fam }, ..*params }, f.paths)
        });
        for out in batch {
            match out? {
                built @ CycleOutcome::Built(_) => return Ok(built),
                failed => last = Some(failed),
            }
        }
        start += len;
    }
    Ok(last.expect("at least one attempt ran"))
}

fn stitch(g: &ColouredComplete, params: &CycleParams, members: Vec<Path4>) -> Result<CycleOutcome> {
    let m = members.len();
    let mut used: Vec<usize> = members.iter().flatten().copied().collect();
    let mut connectors = Vec::with_capacity(m);
    for j in 0..m {
        let (a, b) = (members[j], members[(j + 1) % m]);
        match join_ends(g, [a[2], a[3], b[0], b[1]], &used, params.max_len)? {
            Some(q) => {
                used.extend(&q);
                connectors.push(q);
            }
            None => return Ok(CycleOutcome::Failed(CycleStage::Join { index: j })),
        }
    }
    let mut cycle = Vec::with_capacity(used.len());
    for (z, q) in members.iter().zip(&connectors) {
        cycle.extend(z);
        cycle.extend(q);
    }
    if !g.is_properly_coloured_cycle(&cycle) {
        return Ok(CycleOutcome::Failed(CycleStage::Verify {
            reason: "cycle is not properly coloured".into(),
        }));
    }
    let scope = outside(g.n(), &cycle);
    let coverage = verify_universality(g, &members, &scope, params.family.check, params.family.exec);
    if !coverage.is_universal() {
        return Ok(CycleOutcome::Failed(CycleStage::Verify {
            reason: format!(
                "{} of {} quadruples uncovered",
                coverage.checked - coverage.covered,
                coverage.checked
            ),
        }));
    }
    Ok(CycleOutcome::Built(AbsorbingCycle {
        cycle,
        family: members,
        connectors,
        coverage,
    }))
}

/// Splices the properly coloured path `p` into the cycle through a member
/// absorbing `(p1, p2; p_{l-1}, p_l)`. The result is a properly coloured
/// cycle on `V(cycle) ∪ V(p)`.
pub fn absorb_path(g: &ColouredComplete, ac: &AbsorbingCycle, p: &[usize]) -> Result<Vec<usize>> {
    let n = g.n();
    let l = p.len();
    if l < 4 {
        return Err(domain(format!("only paths of order >= 4 can be absorbed, got {l}")));
    }
    if !g.is_properly_coloured_path(p) || p.iter().any(|&v| v >= n) {
        return Err(domain("path to absorb is not a properly coloured path"));
    }
    let on_cycle = ac.vertex_mask(n);
    let mut seen = vec![false; n];
    if p.iter().any(|&v| on_cycle[v] || std::mem::replace(&mut seen[v], true)) {
        return Err(domain("path must be simple and disjoint from the cycle"));
    }
    let quad = [p[0], p[1], p[l - 2], p[l - 1]];
    let z = ac
        .family
        .iter()
        .find(|z| is_absorbing(g, quad, **z))
        .ok_or_else(|| domain(format!("no family member absorbs {quad:?}")))?;
    let start = ac
        .cycle
        .iter()
        .position(|&v| v == z[0])
        .ok_or_else(|| domain("family member is not on the cycle"))?;
    let len = ac.cycle.len();
    let rotated: Vec<usize> = (0..len).map(|i| ac.cycle[(start + i) % len]).collect();
    if rotated[..4] != z[..] {
        return Err(domain("family member is not a consecutive arc of the cycle"));
    }
    let mut out = Vec::with_capacity(len + l);
    out.extend(&rotated[..2]);
    out.extend(p);
    out.extend(&rotated[2..]);
    if !g.is_properly_coloured_cycle(&out) {
        return Err(Error::Domain("absorbed cycle is not properly coloured".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rainbow_and_mono_membership() {
        let rb = ColouredComplete::rainbow(9);
        assert!(is_absorbing(&rb, [0, 1, 2, 3], [4, 5, 6, 7]));
        assert!(!is_absorbing(&rb, [0, 1, 2, 3], [4, 5, 6, 3]));
        assert!(!is_absorbing(&rb, [0, 1, 2, 2], [4, 5, 6, 7]));
        let mono = ColouredComplete::monochromatic(9);
        assert!(!is_absorbing(&mono, [0, 1, 2, 3], [4, 5, 6, 7]));
    }

    #[test]
    fn front_condition_matters() {
        // c(z2 x1) = c(x1 x2) breaks only the front condition.
        let g = ColouredComplete::from_fn(8, |u, v| match (u.min(v), u.max(v)) {
            (0, 1) | (0, 5) => 1,
            (a, b) => 2 + (a * 8 + b) as u32,
        });
        assert!(!is_absorbing(&g, [0, 1, 2, 3], [4, 5, 6, 7]));
        assert!(is_absorbing(&g, [0, 1, 2, 3], [5, 4, 6, 7]));
    }

    #[test]
    fn counts() {
        let rb = ColouredComplete::rainbow(9);
        assert_eq!(count_absorbing(&rb, [0, 1, 2, 3]), 120);
        assert_eq!(count_absorbing(&ColouredComplete::monochromatic(9), [0, 1, 2, 3]), 0);
        let g = ColouredComplete::from_fn(10, |u, v| ((u * 3 + v * 5) % 4) as u32);
        for quad in [[0, 1, 2, 3], [9, 4, 7, 1], [2, 5, 8, 6]] {
            assert_eq!(count_absorbing(&g, quad), absorbing_paths(&g, quad).count() as u64);
            assert_eq!(
                count_absorbing_with(&g, quad, Exec::Sequential),
                count_absorbing_with(&g, quad, Exec::Parallel)
            );
        }
    }

    #[test]
    fn join_examples() {
        let rb = ColouredComplete::rainbow(10);
        assert_eq!(join_ends(&rb, [0, 1, 2, 3], &[], 4).unwrap().map(|p| p.len()), Some(2));
        let mono = ColouredComplete::monochromatic(10);
        assert_eq!(join_ends(&mono, [0, 1, 2, 3], &[], 4).unwrap(), None);
        assert!(join_ends(&rb, [0, 1, 1, 3], &[], 4).is_err());
    }

    #[test]
    fn rainbow_family_and_cycle() {
        let rb = ColouredComplete::rainbow(20);
        let mut params = FamilyParams::new(2.0, 1);
        params.p = None;
        match sample_absorbing_family(&rb, &params).unwrap() {
            FamilyOutcome::Universal(f) => assert!(!f.paths.is_empty()),
            other => panic!("{other:?}"),
        }
        let mono = ColouredComplete::monochromatic(20);
        match sample_absorbing_family(&mono, &FamilyParams { retry_budget: 5, ..params }).unwrap() {
            FamilyOutcome::NotUniversal { best, .. } => assert_eq!(best.coverage.covered, 0),
            other => panic!("{other:?}"),
        }
        let rb30 = ColouredComplete::rainbow(30);
        let CycleOutcome::Built(ac) = build_absorbing_cycle(&rb30, &CycleParams::new(2.0, 3)).unwrap() else {
            panic!("rainbow cycle failed");
        };
        assert!(rb30.is_properly_coloured_cycle(&ac.cycle));
        assert!(ac.len() <= ac.family.len() * (4 + 8));
        let free: Vec<usize> = (0..30).filter(|v| !ac.cycle.contains(v)).take(5).collect();
        let out = absorb_path(&rb30, &ac, &free).unwrap();
        assert_eq!(out.len(), ac.len() + 5);
        assert!(absorb_path(&rb30, &ac, &free[..3]).is_err());
    }
}
