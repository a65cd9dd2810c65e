//! Edge-coloured complete graphs and the colour predicates every other
//! module is built on.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Dense colour identifier, `0..k`.
pub type Colour = u32;

/// Read access to an edge colouring on vertices `0..order()`.
///
/// A missing edge (`None`) only occurs for partial colourings such as the
/// ones derived from non-tournament oriented graphs.
pub trait EdgeColouring {
    fn order(&self) -> usize;

    fn edge_colour(&self, u: usize, v: usize) -> Option<Colour>;

    /// Number of distinct colours on edges at `v`.
    fn colour_degree(&self, v: usize) -> usize {
        let mut seen = HashSet::new();
        for u in 0..self.order() {
            if u != v {
                if let Some(c) = self.edge_colour(u, v) {
                    seen.insert(c);
                }
            }
        }
        seen.len()
    }

    /// Largest number of same-coloured edges at `v`.
    fn mono_degree(&self, v: usize) -> usize {
        let mut hist = std::collections::HashMap::<Colour, usize>::new();
        for u in 0..self.order() {
            if u != v {
                if let Some(c) = self.edge_colour(u, v) {
                    *hist.entry(c).or_default() += 1;
                }
            }
        }
        hist.values().copied().max().unwrap_or(0)
    }

    fn delta_mon(&self) -> usize {
        (0..self.order())
            .map(|v| self.mono_degree(v))
            .max()
            .unwrap_or(0)
    }

    fn min_colour_degree(&self) -> usize {
        (0..self.order())
            .map(|v| self.colour_degree(v))
            .min()
            .unwrap_or(0)
    }

    /// Consecutive edges along `path` exist and carry different colours.
    /// Paths of order at most two are proper by convention.
    fn is_properly_coloured_path(&self, path: &[usize]) -> bool {
        let mut prev = None;
        for w in path.windows(2) {
            let Some(c) = self.edge_colour(w[0], w[1]) else {
                return false;
            };
            if prev == Some(c) {
                return false;
            }
            prev = Some(c);
        }
        true
    }

    /// Every vertex of the closed walk sees two different colours.
    fn is_properly_coloured_cycle(&self, cycle: &[usize]) -> bool {
        let len = cycle.len();
        if len < 3 {
            return false;
        }
        let mut colours = Vec::with_capacity(len);
        for i in 0..len {
            match self.edge_colour(cycle[i], cycle[(i + 1) % len]) {
                Some(c) => colours.push(c),
                None => return false,
            }
        }
        (0..len).all(|i| colours[i] != colours[(i + 1) % len])
    }
}

/// An edge-coloured complete graph stored as one colour per unordered pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColouredComplete {
    n: usize,
    k: Colour,
    table: Vec<Colour>,
}

#[inline]
fn pair_index(n: usize, u: usize, v: usize) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

impl ColouredComplete {
    /// Builds from a table listing c(u, v) for u < v in lexicographic order.
    pub fn new(n: usize, k: Colour, table: Vec<Colour>) -> Result<Self> {
        if n == 0 {
            return Err(domain("a coloured complete graph needs at least one vertex"));
        }
        let pairs = n * (n - 1) / 2;
        if table.len() != pairs {
            return Err(domain(format!(
                "expected {pairs} pair colours for n = {n}, got {}",
                table.len()
            )));
        }
        if let Some(bad) = table.iter().find(|&&c| c >= k) {
            return Err(domain(format!("colour {bad} exceeds declared count {k}")));
        }
        Ok(Self { n, k, table })
    }

    /// Builds from a colour function evaluated once per pair `u < v`. The
    /// colour count is one more than the largest colour used.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Colour) -> Self {
        assert!(n >= 1, "a coloured complete graph needs at least one vertex");
        let mut table = Vec::with_capacity(n * (n - 1) / 2);
        for u in 0..n {
            for v in u + 1..n {
                table.push(f(u, v));
            }
        }
        let k = table.iter().copied().max().map_or(1, |c| c + 1);
        Self { n, k, table }
    }

    pub fn monochromatic(n: usize) -> Self {
        Self::from_fn(n, |_, _| 0)
    }

    /// Every edge gets its own colour.
    pub fn rainbow(n: usize) -> Self {
        Self::from_fn(n, |u, v| pair_index(n, u, v) as Colour)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Declared colour count; every stored colour is below it.
    pub fn colour_count(&self) -> Colour {
        self.k
    }

    /// Raises the declared colour count.
    pub fn with_colour_count(mut self, k: Colour) -> Result<Self> {
        if self.table.iter().any(|&c| c >= k) {
            return Err(domain(format!("colour count {k} is below a used colour")));
        }
        self.k = k;
        Ok(self)
    }

    /// Colour of `uv`. Panics on `u == v` or out-of-range ids; use
    /// [`ColouredComplete::colour_of`] for checked access.
    #[inline]
    pub fn colour(&self, u: usize, v: usize) -> Colour {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.table[pair_index(self.n, u, v)]
    }

    pub fn colour_of(&self, u: usize, v: usize) -> Result<Colour> {
        if u >= self.n || v >= self.n {
            return Err(domain(format!(
                "vertex out of range: ({u}, {v}) with n = {}",
                self.n
            )));
        }
        if u == v {
            return Err(domain(format!("c({u},{u}) is undefined")));
        }
        Ok(self.colour(u, v))
    }

    /// Pair colours in row-major upper-triangle order.
    pub fn table(&self) -> &[Colour] {
        &self.table
    }

    /// Induced colouring on `keep` (in the given order). Vertex `i` of the
    /// result is `keep[i]` of `self`.
    pub fn restrict(&self, keep: &[usize]) -> Result<ColouredComplete> {
        if keep.is_empty() {
            return Err(domain("cannot restrict to an empty vertex set"));
        }
        let mut seen = vec![false; self.n];
        for &v in keep {
            if v >= self.n || std::mem::replace(&mut seen[v], true) {
                return Err(domain(format!("bad or repeated vertex {v} in restriction")));
            }
        }
        let sub = ColouredComplete::from_fn(keep.len(), |a, b| self.colour(keep[a], keep[b]));
        Ok(ColouredComplete { k: self.k, ..sub })
    }

    /// Per-vertex histogram maximum, O(n²) overall.
    pub fn delta_mon(&self) -> usize {
        EdgeColouring::delta_mon(self)
    }

    pub fn min_colour_degree(&self) -> usize {
        EdgeColouring::min_colour_degree(self)
    }

    pub fn is_properly_coloured_path(&self, path: &[usize]) -> bool {
        EdgeColouring::is_properly_coloured_path(self, path)
    }

    pub fn is_properly_coloured_cycle(&self, cycle: &[usize]) -> bool {
        EdgeColouring::is_properly_coloured_cycle(self, cycle)
    }

    fn histogram(&self, v: usize) -> Vec<usize> {
        let mut hist = vec![0usize; self.k as usize];
        for u in 0..self.n {
            if u != v {
                hist[self.colour(u, v) as usize] += 1;
            }
        }
        hist
    }
}

impl EdgeColouring for ColouredComplete {
    fn order(&self) -> usize {
        self.n
    }

    #[inline]
    fn edge_colour(&self, u: usize, v: usize) -> Option<Colour> {
        (u != v && u < self.n && v < self.n).then(|| self.colour(u, v))
    }

    fn colour_degree(&self, v: usize) -> usize {
        self.histogram(v).iter().filter(|&&h| h > 0).count()
    }

    fn mono_degree(&self, v: usize) -> usize {
        self.histogram(v).into_iter().max().unwrap_or(0)
    }
}

fn check_distinct(vertices: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for &v in vertices {
        if v >= n {
            return Err(domain(format!("vertex {v} out of range for n = {n}")));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(domain(format!("vertex {v} repeated")));
        }
    }
    Ok(())
}

/// A directed path: order matters, `v1..vl` and `vl..v1` differ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DirectedPath(Vec<usize>);

impl DirectedPath {
    pub fn new(vertices: Vec<usize>, n: usize) -> Result<Self> {
        if vertices.is_empty() {
            return Err(domain("a path needs at least one vertex"));
        }
        check_distinct(&vertices, n)?;
        Ok(Self(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

/// A directed cycle on at least three distinct vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DirectedCycle(Vec<usize>);

impl DirectedCycle {
    pub fn new(vertices: Vec<usize>, n: usize) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(domain(format!(
                "a cycle needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        check_distinct(&vertices, n)?;
        Ok(Self(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn position(&self, v: usize) -> Option<usize> {
        self.0.iter().position(|&u| u == v)
    }

    /// v₊, the vertex after `v`.
    pub fn successor(&self, v: usize) -> Option<usize> {
        let i = self.position(v)?;
        Some(self.0[(i + 1) % self.0.len()])
    }

    /// v₋, the vertex before `v`.
    pub fn ancestor(&self, v: usize) -> Option<usize> {
        let i = self.position(v)?;
        Some(self.0[(i + self.0.len() - 1) % self.0.len()])
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    /// Same cyclic order started at index `shift`.
    pub fn rotated(&self, shift: usize) -> Self {
        let mut v = self.0.clone();
        let len = v.len();
        v.rotate_left(shift % len);
        Self(v)
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

/// Rotation/reflection-free form of a vertex cycle: starts at its minimum
/// vertex and walks towards the smaller of the two neighbours.
pub fn canonical_cycle(cycle: &[usize]) -> Vec<usize> {
    let len = cycle.len();
    if len == 0 {
        return Vec::new();
    }
    let start = (0..len).min_by_key(|&i| cycle[i]).unwrap();
    let fwd: Vec<usize> = (0..len).map(|i| cycle[(start + i) % len]).collect();
    let bwd: Vec<usize> = (0..len).map(|i| cycle[(start + len - i) % len]).collect();
    if len > 1 && bwd[1] < fwd[1] {
        bwd
    } else {
        fwd
    }
}

/// Validates a pair of distinct in-range vertex ids.
pub(crate) fn check_pair(n: usize, u: usize, v: usize) -> Result<()> {
    if u >= n || v >= n || u == v {
        return Err(Error::Domain(format!("invalid vertex pair ({u}, {v}) for n = {n}")));
    }
    Ok(())
}
