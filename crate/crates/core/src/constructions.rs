//! Extremal colourings (the `n = 4k+1` two-colouring, colourings derived
//! from oriented graphs, the layered X/Y colouring) and a seeded random
//! generator with a cap on monochromatic degree.

use std::collections::BTreeSet;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::graph::{Colour, ColouredComplete, EdgeColouring};

/// An antisymmetric digraph: at most one of `(u, v)`, `(v, u)` is an arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedGraph {
    n: usize,
    adj: Vec<bool>,
}

impl OrientedGraph {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            adj: vec![false; n * n],
        }
    }

    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut og = Self::new(n);
        for &(u, v) in arcs {
            og.add_arc(u, v)?;
        }
        Ok(og)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n || u == v {
            return Err(domain(format!("invalid arc ({u}, {v}) for n = {}", self.n)));
        }
        if self.has_arc(v, u) {
            return Err(domain(format!("arc ({v}, {u}) already present; graph must stay oriented")));
        }
        self.adj[u * self.n + v] = true;
        Ok(())
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u * self.n + v]
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| (0..self.n).filter(move |&v| self.has_arc(u, v)).map(move |v| (u, v)))
    }

    pub fn in_degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&u| self.has_arc(u, v)).count()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&u| self.has_arc(v, u)).count()
    }

    pub fn max_in_degree(&self) -> usize {
        (0..self.n).map(|v| self.in_degree(v)).max().unwrap_or(0)
    }

    pub fn is_tournament(&self) -> bool {
        (0..self.n).all(|u| (u + 1..self.n).all(|v| self.has_arc(u, v) || self.has_arc(v, u)))
    }

    /// Each pair is left out with probability `1 - density`, otherwise
    /// oriented uniformly at random.
    pub fn random(n: usize, density: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut og = Self::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(density.clamp(0.0, 1.0)) {
                    if rng.random_bool(0.5) {
                        og.adj[u * n + v] = true;
                    } else {
                        og.adj[v * n + u] = true;
                    }
                }
            }
        }
        og
    }

    /// All directed cycles, each listed once starting from its minimum vertex.
    pub fn directed_cycles(&self) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        let mut stack = Vec::new();
        let mut on = vec![false; self.n];
        for s in 0..self.n {
            stack.push(s);
            on[s] = true;
            self.cycles_from(s, &mut stack, &mut on, &mut out);
            on[s] = false;
            stack.pop();
        }
        out
    }

    fn cycles_from(&self, s: usize, stack: &mut Vec<usize>, on: &mut [bool], out: &mut BTreeSet<Vec<usize>>) {
        let last = *stack.last().unwrap();
        for v in s + 1..self.n {
            if self.has_arc(last, v) && !on[v] {
                stack.push(v);
                on[v] = true;
                if stack.len() >= 3 && self.has_arc(v, s) {
                    out.insert(stack.clone());
                }
                self.cycles_from(s, stack, on, out);
                on[v] = false;
                stack.pop();
            }
        }
    }
}

/// How pairs that are not arcs get a colour when a complete colouring is needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CompletionPolicy {
    /// Every missing pair gets its own new colour.
    FreshRainbow,
    /// All missing pairs share one new colour.
    SingleExtra,
}

/// An edge colouring where some pairs may be uncoloured.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialColouring {
    n: usize,
    colours: Vec<Option<Colour>>,
}

impl PartialColouring {
    pub fn n(&self) -> usize {
        self.n
    }

    fn slot(&self, u: usize, v: usize) -> usize {
        u * self.n + v
    }

    pub fn is_complete(&self) -> bool {
        (0..self.n).all(|u| (u + 1..self.n).all(|v| self.colours[self.slot(u, v)].is_some()))
    }

    pub fn complete_with(&self, policy: CompletionPolicy) -> ColouredComplete {
        let mut next = self
            .colours
            .iter()
            .flatten()
            .copied()
            .max()
            .map_or(0, |c| c + 1)
            .max(self.n as Colour);
        let extra = next;
        ColouredComplete::from_fn(self.n, |u, v| match self.colours[self.slot(u, v)] {
            Some(c) => c,
            None => match policy {
                CompletionPolicy::SingleExtra => extra,
                CompletionPolicy::FreshRainbow => {
                    let c = next;
                    next += 1;
                    c
                }
            },
        })
    }
}

impl EdgeColouring for PartialColouring {
    fn order(&self) -> usize {
        self.n
    }

    fn edge_colour(&self, u: usize, v: usize) -> Option<Colour> {
        if u >= self.n || v >= self.n || u == v {
            return None;
        }
        self.colours[self.slot(u, v)]
    }
}

/// Colour `c_v = v` for every vertex and give arc `u → v` colour `c_v`.
/// Pairs without an arc stay uncoloured.
pub fn from_oriented(og: &OrientedGraph) -> PartialColouring {
    let n = og.n();
    let mut colours = vec![None; n * n];
    for (u, v) in og.arcs() {
        colours[u * n + v] = Some(v as Colour);
        colours[v * n + u] = Some(v as Colour);
    }
    PartialColouring { n, colours }
}

/// [`from_oriented`] for tournaments, where the result is already complete.
pub fn from_tournament(og: &OrientedGraph) -> Result<ColouredComplete> {
    if !og.is_tournament() {
        return Err(domain("oriented graph is not a tournament; use complete_with"));
    }
    let pc = from_oriented(og);
    pc.complete_with(CompletionPolicy::SingleExtra)
        .with_colour_count(og.n().max(1) as Colour)
}

/// Circulant regular tournament on `2m − 1` vertices (`i → i + j` for
/// `j = 1..m−1`) plus a source vertex `2m − 1` beating everyone.
pub fn tournament_t2m(m: usize) -> Result<OrientedGraph> {
    if m < 2 {
        return Err(domain(format!("tournament_t2m needs m >= 2, got {m}")));
    }
    let odd = 2 * m - 1;
    let mut og = OrientedGraph::new(2 * m);
    for i in 0..odd {
        for j in 1..m {
            og.add_arc(i, (i + j) % odd)?;
        }
    }
    for v in 0..odd {
        og.add_arc(odd, v)?;
    }
    Ok(og)
}

/// The `n = 4k + 1` two-colouring: colour 0 on the circulant graph joining
/// vertices at cyclic distance at most `k`, colour 1 on its complement.
pub fn bollobas_erdos(k: usize) -> Result<ColouredComplete> {
    if k == 0 {
        return Err(domain("bollobas_erdos needs k >= 1"));
    }
    let n = 4 * k + 1;
    Ok(ColouredComplete::from_fn(n, |u, v| {
        let d = v - u;
        if d.min(n - d) <= k {
            0
        } else {
            1
        }
    }))
}

/// X = `0..l`, Y = `l..n`. Edge `x_i y` gets colour `i + 1`, edges inside Y
/// get colour 1, and X is rainbow on colours `l + 1, l + 2, ...`.
pub fn layered_xy(n: usize, l: usize) -> Result<ColouredComplete> {
    if l == 0 || 2 * l > n {
        return Err(domain(format!("layered_xy needs 1 <= l <= n/2, got n = {n}, l = {l}")));
    }
    let mut fresh = l as Colour;
    Ok(ColouredComplete::from_fn(n, |u, v| {
        // u < v always
        if v < l {
            fresh += 1;
            fresh
        } else if u < l {
            u as Colour + 1
        } else {
            1
        }
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomColouringParams {
    pub n: usize,
    pub dmax: usize,
    /// Number of colours to draw from; `None` picks [`default_palette`].
    pub palette: Option<u32>,
    pub restarts: usize,
}

impl RandomColouringParams {
    pub fn new(n: usize, dmax: usize) -> Self {
        Self {
            n,
            dmax,
            palette: None,
            restarts: 100,
        }
    }
}

/// Palette used when none is given: one colour more than the minimum that
/// makes the cap feasible.
pub fn default_palette(n: usize, dmax: usize) -> u32 {
    (n.saturating_sub(1)).div_ceil(dmax.max(1)) as u32 + 1
}

/// Seeded random colouring with `delta_mon ≤ dmax` using the default palette.
pub fn random_bounded_mono(n: usize, dmax: usize, seed: u64) -> Result<ColouredComplete> {
    random_bounded_mono_with(RandomColouringParams::new(n, dmax), seed)
}

/// Randomized greedy: pairs in random order, each gets a uniformly random
/// colour still below the cap at both ends; a dead end restarts the pass.
pub fn random_bounded_mono_with(p: RandomColouringParams, seed: u64) -> Result<ColouredComplete> {
    let RandomColouringParams { n, dmax, .. } = p;
    if n < 3 || dmax == 0 {
        return Err(domain(format!("random_bounded_mono needs n >= 3 and dmax >= 1, got n = {n}, dmax = {dmax}")));
    }
    let palette = p.palette.unwrap_or_else(|| default_palette(n, dmax)).max(1);
    if palette as usize * dmax < n - 1 {
        return Err(Error::Generation {
            attempts: 0,
            reason: format!("{palette} colours with cap {dmax} cannot cover {} edges per vertex", n - 1),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let k = palette as usize;
    let mut counts = vec![0usize; n * k];
    let mut colour = vec![0 as Colour; n * n];
    let mut options = Vec::with_capacity(k);
    let attempts = p.restarts.max(1);
    'attempt: for _ in 0..attempts {
        pairs.shuffle(&mut rng);
        counts.iter_mut().for_each(|c| *c = 0);
        for &(u, v) in &pairs {
            options.clear();
            options.extend((0..k).filter(|&c| counts[u * k + c] < dmax && counts[v * k + c] < dmax));
            let Some(&c) = options.choose(&mut rng) else {
                continue 'attempt;
            };
            counts[u * k + c] += 1;
            counts[v * k + c] += 1;
            colour[u * n + v] = c as Colour;
        }
        let g = ColouredComplete::from_fn(n, |u, v| colour[u * n + v]).with_colour_count(palette)?;
        debug_assert!(g.delta_mon() <= dmax);
        return Ok(g);
    }
    Err(Error::Generation {
        attempts,
        reason: format!("greedy colouring with {palette} colours and cap {dmax} kept dead-ending"),
    })
}
