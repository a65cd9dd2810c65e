use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::certificate::Certificate;
use crate::error::{domain, Result};
use crate::graph::{Colour, ColouredComplete};

/// Which end of the path a chord or expansion works on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// `(x, c_x; y, c_y)`: path ends and the colours of the path edges there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    pub x: usize,
    pub cx: Colour,
    pub y: usize,
    pub cy: Colour,
}

impl Params {
    pub fn end(&self, side: Side) -> (usize, Colour) {
        match side {
            Side::Left => (self.x, self.cx),
            Side::Right => (self.y, self.cy),
        }
    }
}

/// Where a vertex sits inside a system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Path(usize),
    Cycle { cycle: usize, index: usize },
}

/// A properly coloured 1-path-cycle: at most one path (order at least 2)
/// and any number of cycles, pairwise vertex-disjoint, inside a host of
/// order `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PathCycleSystem {
    n: usize,
    path: Option<Vec<usize>>,
    cycles: Vec<Vec<usize>>,
}

impl PathCycleSystem {
    /// Validates shape and properness against `g`.
    pub fn new(g: &ColouredComplete, path: Option<Vec<usize>>, cycles: Vec<Vec<usize>>) -> Result<Self> {
        let sys = Self::new_unchecked(g.n(), path, cycles);
        sys.validate(g)?;
        Ok(sys)
    }

    pub fn from_path(g: &ColouredComplete, path: Vec<usize>) -> Result<Self> {
        Self::new(g, Some(path), Vec::new())
    }

    pub(crate) fn new_unchecked(n: usize, path: Option<Vec<usize>>, cycles: Vec<Vec<usize>>) -> Self {
        Self { n, path, cycles }
    }

    pub fn validate(&self, g: &ColouredComplete) -> Result<()> {
        if g.n() != self.n {
            return Err(domain(format!("system lives in order {}, graph has {}", self.n, g.n())));
        }
        let mut seen = vec![false; self.n];
        for v in self.vertices() {
            if v >= self.n || std::mem::replace(&mut seen[v], true) {
                return Err(domain(format!("vertex {v} out of range or repeated")));
            }
        }
        if let Some(p) = &self.path {
            if p.len() < 2 {
                return Err(domain("the path of a 1-path-cycle needs at least one edge"));
            }
            if !g.is_properly_coloured_path(p) {
                return Err(domain("path is not properly coloured"));
            }
        }
        for c in &self.cycles {
            if c.len() < 3 || !g.is_properly_coloured_cycle(c) {
                return Err(domain(format!("cycle {c:?} is not a properly coloured cycle")));
            }
        }
        Ok(())
    }

    pub fn host_order(&self) -> usize {
        self.n
    }

    pub fn path(&self) -> Option<&[usize]> {
        self.path.as_deref()
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn into_parts(self) -> (Option<Vec<usize>>, Vec<Vec<usize>>) {
        (self.path, self.cycles)
    }

    pub fn order(&self) -> usize {
        self.path.as_ref().map_or(0, Vec::len) + self.cycles.iter().map(Vec::len).sum::<usize>()
    }

    pub fn is_spanning(&self) -> bool {
        self.order() == self.n
    }

    /// True when the system is a union of cycles covering every vertex.
    pub fn is_two_factor(&self) -> bool {
        self.path.is_none() && self.is_spanning()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.path.iter().flatten().chain(self.cycles.iter().flatten()).copied()
    }

    pub fn vertex_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.n];
        for v in self.vertices() {
            mask[v] = true;
        }
        mask
    }

    /// Sorted vertex set.
    pub fn vertex_set(&self) -> Vec<usize> {
        let mut vs: Vec<usize> = self.vertices().collect();
        vs.sort_unstable();
        vs
    }

    pub fn params(&self, g: &ColouredComplete) -> Option<Params> {
        let p = self.path.as_ref()?;
        let l = p.len();
        Some(Params {
            x: p[0],
            cx: g.colour(p[0], p[1]),
            y: p[l - 1],
            cy: g.colour(p[l - 1], p[l - 2]),
        })
    }

    pub fn slot(&self, v: usize) -> Option<Slot> {
        if let Some(i) = self.path.as_ref().and_then(|p| p.iter().position(|&u| u == v)) {
            return Some(Slot::Path(i));
        }
        self.cycles.iter().enumerate().find_map(|(ci, c)| {
            c.iter().position(|&u| u == v).map(|index| Slot::Cycle { cycle: ci, index })
        })
    }

    /// Neighbours of `v` inside the system (zero, one or two vertices).
    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        match self.slot(v) {
            None => Vec::new(),
            Some(Slot::Path(i)) => {
                let p = self.path.as_ref().unwrap();
                let mut out = Vec::with_capacity(2);
                if i > 0 {
                    out.push(p[i - 1]);
                }
                if i + 1 < p.len() {
                    out.push(p[i + 1]);
                }
                out
            }
            Some(Slot::Cycle { cycle, index }) => {
                let c = &self.cycles[cycle];
                let m = c.len();
                vec![c[(index + m - 1) % m], c[(index + 1) % m]]
            }
        }
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        let mut link = |a: usize, b: usize| {
            adj[a].push(b);
            adj[b].push(a);
        };
        if let Some(p) = &self.path {
            for w in p.windows(2) {
                link(w[0], w[1]);
            }
        }
        for c in &self.cycles {
            for i in 0..c.len() {
                link(c[i], c[(i + 1) % c.len()]);
            }
        }
        adj
    }

    /// Breadth-first distances along system edges; `None` means unreachable.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        self.multi_source_distances(&[source])
    }

    pub(crate) fn multi_source_distances(&self, sources: &[usize]) -> Vec<Option<usize>> {
        let adj = self.adjacency();
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        for &s in sources {
            if s < self.n && dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for &v in &adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn distance(&self, a: usize, b: usize) -> Option<usize> {
        self.distances_from(a)[b]
    }

    /// Same underlying graph with the path direction flipped, so `x` and
    /// `y` swap roles.
    pub fn reversed(&self) -> Self {
        let mut out = self.clone();
        if let Some(p) = &mut out.path {
            p.reverse();
        }
        out
    }

    pub(crate) fn with_parts(&self, path: Option<Vec<usize>>, cycles: Vec<Vec<usize>>) -> Self {
        Self::new_unchecked(self.n, path, cycles)
    }

    /// Certificate form: a 2-factor when there is no path and every vertex
    /// is covered, otherwise a path-cycle system.
    pub fn to_certificate(&self) -> Certificate {
        if self.is_two_factor() {
            Certificate::two_factor(self.cycles.clone())
        } else {
            Certificate::path_cycle_system(self.path.clone().unwrap_or_default(), self.cycles.clone())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_and_neighbours() {
        let g = ColouredComplete::rainbow(8);
        let sys = PathCycleSystem::new(&g, Some(vec![0, 1, 2, 3]), vec![vec![4, 5, 6]]).unwrap();
        let p = sys.params(&g).unwrap();
        assert_eq!((p.x, p.y), (0, 3));
        assert_eq!(p.cx, g.colour(0, 1));
        assert_eq!(p.cy, g.colour(3, 2));
        assert_eq!(sys.neighbours(0), vec![1]);
        assert_eq!(sys.neighbours(5), vec![4, 6]);
        assert_eq!(sys.neighbours(7), Vec::<usize>::new());
        assert_eq!(sys.distance(0, 3), Some(3));
        assert_eq!(sys.distance(4, 6), Some(1));
        assert_eq!(sys.distance(0, 4), None);
        assert_eq!(sys.order(), 7);
        assert!(!sys.is_spanning());
    }

    #[test]
    fn rejects_bad_shapes() {
        let g = ColouredComplete::rainbow(6);
        assert!(PathCycleSystem::new(&g, Some(vec![0]), vec![]).is_err());
        assert!(PathCycleSystem::new(&g, Some(vec![0, 1]), vec![vec![1, 2, 3]]).is_err());
        assert!(PathCycleSystem::new(&g, None, vec![vec![1, 2]]).is_err());
        let mono = ColouredComplete::monochromatic(6);
        assert!(PathCycleSystem::new(&mono, Some(vec![0, 1, 2]), vec![]).is_err());
        assert!(PathCycleSystem::new(&mono, Some(vec![0, 1]), vec![]).is_ok());
    }
}
