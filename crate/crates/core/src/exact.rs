//! Brute-force oracles for small `n`.
//!
//! Every search is a depth-first walk with colour-compatibility pruning
//! (the next edge must differ from the previous one). Searches fan out over
//! their first branching level through [`Exec`]; existence verdicts do not
//! depend on the strategy, but the witness may.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::certificate::{verify_certificate, Certificate};
use crate::error::{domain, Result};
use crate::graph::{canonical_cycle, Colour, ColouredComplete, EdgeColouring};
use crate::par::Exec;

/// Environment variable overriding [`SearchBudget::default`]'s node limit.
pub const BUDGET_ENV: &str = "PCH_BUDGET_NODES";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub node_limit: u64,
    pub time_limit: Option<Duration>,
}

impl SearchBudget {
    pub fn nodes(node_limit: u64) -> Self {
        Self {
            node_limit,
            time_limit: None,
        }
    }

    pub fn unlimited() -> Self {
        Self::nodes(u64::MAX)
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        let node_limit = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(20_000_000_000);
        Self {
            node_limit,
            time_limit: Some(Duration::from_secs(60)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchOutcome {
    Found(Certificate),
    NotExists,
    BudgetExhausted,
}

impl SearchOutcome {
    pub fn exists(&self) -> Option<bool> {
        match self {
            SearchOutcome::Found(_) => Some(true),
            SearchOutcome::NotExists => Some(false),
            SearchOutcome::BudgetExhausted => None,
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            SearchOutcome::Found(c) => Some(c),
            _ => None,
        }
    }
}

/// Best structure found by a longest-cycle/path search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Longest {
    /// Edge count for cycles, vertex count (order) for paths.
    pub value: usize,
    pub witness: Vec<usize>,
    /// True when the budget ran out, so `value` is only a lower bound.
    pub lower_bound_only: bool,
    pub nodes: u64,
}

struct Meter {
    nodes: AtomicU64,
    limit: u64,
    deadline: Option<Instant>,
    exhausted: AtomicBool,
    found: AtomicBool,
}

impl Meter {
    fn new(budget: SearchBudget) -> Self {
        Self {
            nodes: AtomicU64::new(0),
            limit: budget.node_limit,
            deadline: budget.time_limit.map(|d| Instant::now() + d),
            exhausted: AtomicBool::new(false),
            found: AtomicBool::new(false),
        }
    }

    /// Counts one node; false means stop.
    #[inline]
    fn tick(&self) -> bool {
        if self.found.load(Ordering::Relaxed) || self.exhausted.load(Ordering::Relaxed) {
            return false;
        }
        let k = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if k > self.limit {
            self.exhausted.store(true, Ordering::Relaxed);
            return false;
        }
        if k & 0xfff == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.exhausted.store(true, Ordering::Relaxed);
                    return false;
                }
            }
        }
        true
    }

    fn exhausted(&self) -> bool {
        self.exhausted.load(Ordering::Relaxed)
    }

    fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }
}

// Hamiltonian cycle -----------------------------------------------------------

/// Exists-or-not search for a properly coloured Hamiltonian cycle. Vertex 0
/// is fixed first and each cycle is only explored in the orientation whose
/// second vertex is smaller than its last.
pub fn exact_pc_ham_cycle(g: &ColouredComplete, budget: SearchBudget) -> Result<SearchOutcome> {
    exact_pc_ham_cycle_with(g, budget, Exec::default())
}

pub fn exact_pc_ham_cycle_with(g: &ColouredComplete, budget: SearchBudget, exec: Exec) -> Result<SearchOutcome> {
    let n = g.n();
    if n < 3 {
        return Err(domain(format!("Hamiltonian cycle search needs n >= 3, got {n}")));
    }
    let meter = Meter::new(budget);
    let found = exec.find_map_any(n - 1, |i| {
        let s = i + 1;
        let mut path = vec![0, s];
        let mut used = vec![false; n];
        used[0] = true;
        used[s] = true;
        let first = g.colour(0, s);
        ham_cycle_dfs(g, &meter, &mut path, &mut used, first, first).then(|| {
            meter.found.store(true, Ordering::Relaxed);
            path
        })
    });
    Ok(finish(g, &meter, found.map(Certificate::ham_cycle)))
}

fn ham_cycle_dfs(
    g: &ColouredComplete,
    meter: &Meter,
    path: &mut Vec<usize>,
    used: &mut [bool],
    first: Colour,
    prev: Colour,
) -> bool {
    if !meter.tick() {
        return false;
    }
    let n = g.n();
    let last = *path.last().unwrap();
    if path.len() == n {
        let close = g.colour(last, 0);
        return last > path[1] && close != prev && close != first;
    }
    for v in 1..n {
        if used[v] {
            continue;
        }
        let c = g.colour(last, v);
        if c == prev {
            continue;
        }
        used[v] = true;
        path.push(v);
        if ham_cycle_dfs(g, meter, path, used, first, c) {
            return true;
        }
        path.pop();
        used[v] = false;
    }
    false
}

fn finish(g: &ColouredComplete, meter: &Meter, found: Option<Certificate>) -> SearchOutcome {
    match found {
        Some(cert) => {
            let cert = verify_certificate(g, &cert);
            debug_assert!(cert.is_valid());
            SearchOutcome::Found(cert)
        }
        None if meter.exhausted() => SearchOutcome::BudgetExhausted,
        None => SearchOutcome::NotExists,
    }
}

// Hamiltonian path ------------------------------------------------------------

/// Properly coloured Hamiltonian path search; a path and its reverse are
/// explored once (first vertex below last).
pub fn exact_pc_ham_path(g: &ColouredComplete, budget: SearchBudget) -> Result<SearchOutcome> {
    exact_pc_ham_path_with(g, budget, Exec::default())
}

pub fn exact_pc_ham_path_with(g: &ColouredComplete, budget: SearchBudget, exec: Exec) -> Result<SearchOutcome> {
    let n = g.n();
    if n < 2 {
        return Err(domain(format!("Hamiltonian path search needs n >= 2, got {n}")));
    }
    let meter = Meter::new(budget);
    let found = exec.find_map_any(n, |s| {
        let mut path = vec![s];
        let mut used = vec![false; n];
        used[s] = true;
        ham_path_dfs(g, &meter, &mut path, &mut used, None).then(|| {
            meter.found.store(true, Ordering::Relaxed);
            path
        })
    });
    Ok(finish(g, &meter, found.map(Certificate::ham_path)))
}

fn ham_path_dfs(g: &ColouredComplete, meter: &Meter, path: &mut Vec<usize>, used: &mut [bool], prev: Option<Colour>) -> bool {
    if !meter.tick() {
        return false;
    }
    let n = g.n();
    let last = *path.last().unwrap();
    if path.len() == n {
        return path[0] < last;
    }
    for v in 0..n {
        if used[v] {
            continue;
        }
        let c = g.colour(last, v);
        if Some(c) == prev {
            continue;
        }
        used[v] = true;
        path.push(v);
        if ham_path_dfs(g, meter, path, used, Some(c)) {
            return true;
        }
        path.pop();
        used[v] = false;
    }
    false
}

// 2-factor --------------------------------------------------------------------

/// Search over cycle covers. Each cycle starts at its minimum vertex, is
/// explored in one orientation only, and cycles are opened in increasing
/// order of their minimum vertex.
pub fn exact_pc_two_factor(g: &ColouredComplete, budget: SearchBudget) -> Result<SearchOutcome> {
    exact_pc_two_factor_with(g, budget, Exec::default())
}

pub fn exact_pc_two_factor_with(g: &ColouredComplete, budget: SearchBudget, exec: Exec) -> Result<SearchOutcome> {
    let n = g.n();
    if n < 3 {
        return Err(domain(format!("2-factor search needs n >= 3, got {n}")));
    }
    let meter = Meter::new(budget);
    // fan out over the second vertex of the cycle through vertex 0
    let found = exec.find_map_any(n - 1, |i| {
        let s = i + 1;
        let mut used = vec![false; n];
        used[0] = true;
        used[s] = true;
        let mut cycles = Vec::new();
        let mut cur = vec![0, s];
        let c = g.colour(0, s);
        two_factor_extend(g, &meter, &mut used, n - 2, &mut cycles, &mut cur, c, c).then(|| {
            meter.found.store(true, Ordering::Relaxed);
            cycles
        })
    });
    Ok(finish(g, &meter, found.map(Certificate::two_factor)))
}

/// Extends the open cycle `cur`; `free` counts unused vertices.
#[allow(clippy::too_many_arguments)]
fn two_factor_extend(
    g: &ColouredComplete,
    meter: &Meter,
    used: &mut [bool],
    free: usize,
    cycles: &mut Vec<Vec<usize>>,
    cur: &mut Vec<usize>,
    first: Colour,
    prev: Colour,
) -> bool {
    if !meter.tick() {
        return false;
    }
    let n = g.n();
    let start = cur[0];
    let last = *cur.last().unwrap();
    if cur.len() >= 3 && last > cur[1] {
        let close = g.colour(last, start);
        if close != prev && close != first && (free == 0 || free >= 3) {
            cycles.push(cur.clone());
            if two_factor_open(g, meter, used, free, cycles) {
                return true;
            }
            cycles.pop();
        }
    }
    for v in start + 1..n {
        if used[v] {
            continue;
        }
        let c = g.colour(last, v);
        if c == prev {
            continue;
        }
        used[v] = true;
        cur.push(v);
        if two_factor_extend(g, meter, used, free - 1, cycles, cur, first, c) {
            return true;
        }
        cur.pop();
        used[v] = false;
    }
    false
}

fn two_factor_open(g: &ColouredComplete, meter: &Meter, used: &mut [bool], free: usize, cycles: &mut Vec<Vec<usize>>) -> bool {
    if free == 0 {
        return true;
    }
    let n = g.n();
    let start = (0..n).find(|&v| !used[v]).expect("free vertex");
    used[start] = true;
    for s in start + 1..n {
        if used[s] {
            continue;
        }
        used[s] = true;
        let c = g.colour(start, s);
        let mut cur = vec![start, s];
        if two_factor_extend(g, meter, used, free - 2, cycles, &mut cur, c, c) {
            return true;
        }
        used[s] = false;
    }
    used[start] = false;
    false
}

// Longest cycle / path --------------------------------------------------------

/// Longest properly coloured cycle (edge count), 0 when there is none.
pub fn longest_pc_cycle(g: &ColouredComplete, budget: SearchBudget) -> Result<Longest> {
    longest_pc_cycle_with(g, budget, Exec::default())
}

pub fn longest_pc_cycle_with(g: &ColouredComplete, budget: SearchBudget, exec: Exec) -> Result<Longest> {
    let n = g.n();
    if n < 3 {
        return Err(domain(format!("longest cycle search needs n >= 3, got {n}")));
    }
    let meter = Meter::new(budget);
    let best = AtomicUsize::new(0);
    let witness = Mutex::new(Vec::new());
    exec.map_range(n - 2, |s| {
        let mut used = vec![false; n];
        used[s] = true;
        let mut path = vec![s];
        longest_cycle_dfs(g, &meter, &best, &witness, &mut path, &mut used, None, None);
    });
    Ok(Longest {
        value: best.load(Ordering::Relaxed),
        witness: witness.into_inner().unwrap(),
        lower_bound_only: meter.exhausted(),
        nodes: meter.nodes(),
    })
}

#[allow(clippy::too_many_arguments)]
fn longest_cycle_dfs(
    g: &ColouredComplete,
    meter: &Meter,
    best: &AtomicUsize,
    witness: &Mutex<Vec<usize>>,
    path: &mut Vec<usize>,
    used: &mut [bool],
    first: Option<Colour>,
    prev: Option<Colour>,
) {
    if !meter.tick() {
        return;
    }
    let n = g.n();
    let s = path[0];
    let last = *path.last().unwrap();
    if path.len() >= 3 && last > path[1] {
        let close = g.colour(last, s);
        if Some(close) != prev && Some(close) != first {
            let len = path.len();
            let mut w = witness.lock().unwrap();
            if len > best.load(Ordering::Relaxed) {
                best.store(len, Ordering::Relaxed);
                *w = path.clone();
            }
        }
    }
    let reachable = path.len() + (s + 1..n).filter(|&v| !used[v]).count();
    if reachable <= best.load(Ordering::Relaxed) {
        return;
    }
    for v in s + 1..n {
        if used[v] {
            continue;
        }
        let c = g.colour(last, v);
        if Some(c) == prev {
            continue;
        }
        used[v] = true;
        path.push(v);
        longest_cycle_dfs(g, meter, best, witness, path, used, first.or(Some(c)), Some(c));
        path.pop();
        used[v] = false;
        if best.load(Ordering::Relaxed) == n {
            return;
        }
    }
}

/// Longest properly coloured path, measured by order (vertex count).
pub fn longest_pc_path(g: &ColouredComplete, budget: SearchBudget) -> Result<Longest> {
    longest_pc_path_with(g, budget, Exec::default())
}

pub fn longest_pc_path_with(g: &ColouredComplete, budget: SearchBudget, exec: Exec) -> Result<Longest> {
    let n = g.n();
    if n < 2 {
        return Err(domain(format!("longest path search needs n >= 2, got {n}")));
    }
    let meter = Meter::new(budget);
    let best = AtomicUsize::new(0);
    let witness = Mutex::new(Vec::new());
    exec.map_range(n, |s| {
        let mut used = vec![false; n];
        used[s] = true;
        let mut path = vec![s];
        longest_path_dfs(g, &meter, &best, &witness, &mut path, &mut used, None);
    });
    Ok(Longest {
        value: best.load(Ordering::Relaxed),
        witness: witness.into_inner().unwrap(),
        lower_bound_only: meter.exhausted(),
        nodes: meter.nodes(),
    })
}

fn longest_path_dfs(
    g: &ColouredComplete,
    meter: &Meter,
    best: &AtomicUsize,
    witness: &Mutex<Vec<usize>>,
    path: &mut Vec<usize>,
    used: &mut [bool],
    prev: Option<Colour>,
) {
    if !meter.tick() {
        return;
    }
    let n = g.n();
    if path.len() > best.load(Ordering::Relaxed) {
        let mut w = witness.lock().unwrap();
        if path.len() > best.load(Ordering::Relaxed) {
            best.store(path.len(), Ordering::Relaxed);
            *w = path.clone();
        }
    }
    if best.load(Ordering::Relaxed) == n || path.len() + used.iter().filter(|&&u| !u).count() <= best.load(Ordering::Relaxed) {
        return;
    }
    let last = *path.last().unwrap();
    for v in 0..n {
        if used[v] {
            continue;
        }
        let c = g.colour(last, v);
        if Some(c) == prev {
            continue;
        }
        used[v] = true;
        path.push(v);
        longest_path_dfs(g, meter, best, witness, path, used, Some(c));
        path.pop();
        used[v] = false;
    }
}

// Enumeration -----------------------------------------------------------------

/// Every properly coloured cycle of a (possibly partial) colouring, as
/// vertex cycles in [`canonical_cycle`] form. Exponential; meant for n ≤ 8.
pub fn all_pc_cycles<G: EdgeColouring + ?Sized>(g: &G) -> BTreeSet<Vec<usize>> {
    let n = g.order();
    let mut out = BTreeSet::new();
    for s in 0..n {
        let mut path = vec![s];
        let mut used = vec![false; n];
        used[s] = true;
        enumerate_cycles(g, &mut path, &mut used, &mut out);
    }
    out
}

fn enumerate_cycles<G: EdgeColouring + ?Sized>(g: &G, path: &mut Vec<usize>, used: &mut [bool], out: &mut BTreeSet<Vec<usize>>) {
    let s = path[0];
    let last = *path.last().unwrap();
    if path.len() >= 3 && g.edge_colour(last, s).is_some() && g.is_properly_coloured_cycle(path) {
        out.insert(canonical_cycle(path));
    }
    for v in s + 1..g.order() {
        if used[v] {
            continue;
        }
        if g.edge_colour(last, v).is_none() {
            continue;
        }
        path.push(v);
        if g.is_properly_coloured_path(path) {
            used[v] = true;
            enumerate_cycles(g, path, used, out);
            used[v] = false;
        }
        path.pop();
    }
}
