use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::rotate::{rotation_outcomes, within_distance, Chord, ChordSequence, RotationStep, DEFAULT_SPREAD};
use super::system::{PathCycleSystem, Side};
use crate::error::{domain, Result};
use crate::graph::{Colour, ColouredComplete};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionOptions {
    pub max_depth: usize,
    /// Require every witness sequence to be spread out at this distance.
    pub spread: Option<usize>,
    /// Stop at the first level holding some vertex with two end colours.
    pub stop_at_two_colours: bool,
}

impl Default for ExpansionOptions {
    fn default() -> Self {
        Self {
            max_depth: 9,
            spread: Some(DEFAULT_SPREAD),
            stop_at_two_colours: true,
        }
    }
}

/// A reachable end `(vertex, colour)` with one witness sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndState {
    pub vertex: usize,
    pub colour: Colour,
    pub sequence: ChordSequence,
    pub system: PathCycleSystem,
}

/// One vertex reached with two different end colours at the same depth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoColourWitness {
    pub level: usize,
    pub vertex: usize,
    pub first: EndState,
    pub second: EndState,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expansion {
    pub side: Side,
    /// `levels[l]` holds the states reachable by exactly `l` rotations,
    /// sorted by vertex then colour.
    pub levels: Vec<Vec<EndState>>,
    pub two_colour: Option<TwoColourWitness>,
}

impl Expansion {
    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    pub fn states(&self) -> impl Iterator<Item = &EndState> {
        self.levels.iter().flatten()
    }
}

/// Breadth-first search over the ends reachable by rotations on one side.
///
/// Chord targets avoid `forbidden` and its system neighbours, and new ends
/// avoid `forbidden`. Each state keeps the first witness found, scanning
/// states, targets and rotation outcomes in increasing order.
pub fn expand_end_colours(
    sys: &PathCycleSystem,
    g: &ColouredComplete,
    side: Side,
    forbidden: &[usize],
    opts: ExpansionOptions,
) -> Result<Expansion> {
    let params = sys.params(g).ok_or_else(|| domain("expansion needs a path"))?;
    let (z0, c0) = params.end(side);
    let (anchor, _) = params.end(side.opposite());

    let n = sys.host_order();
    let mut is_forbidden = vec![false; n];
    let mut avoid = vec![false; n];
    for &u in forbidden.iter().filter(|&&u| u < n) {
        is_forbidden[u] = true;
        avoid[u] = true;
        for v in sys.neighbours(u) {
            avoid[v] = true;
        }
    }
    let targets: Vec<usize> = sys.vertex_set().into_iter().filter(|&v| !avoid[v]).collect();
    let base = ChordSequence {
        spread_distance: opts.spread.unwrap_or(DEFAULT_SPREAD),
        track_spread: opts.spread.is_some(),
        ..ChordSequence::default()
    };

    let mut levels = vec![vec![EndState {
        vertex: z0,
        colour: c0,
        sequence: base,
        system: sys.clone(),
    }]];
    let mut two_colour = None;

    for depth in 0..opts.max_depth {
        let mut next: BTreeMap<(usize, Colour), EndState> = BTreeMap::new();
        for state in &levels[depth] {
            let blocked = opts.spread.map(|d| {
                let mut points = vec![params.x, params.y];
                points.extend(state.sequence.targets());
                within_distance(sys, &points, d)
            });
            let anchor_nbrs = state.system.neighbours(anchor);
            for &w in &targets {
                if w == state.vertex
                    || w == anchor
                    || anchor_nbrs.contains(&w)
                    || g.colour(state.vertex, w) == state.colour
                    || blocked.as_ref().is_some_and(|b| b[w])
                {
                    continue;
                }
                let chord = Chord {
                    side,
                    endpoint: state.vertex,
                    w,
                };
                for out in rotation_outcomes(&state.system, g, chord)? {
                    let (z, c) = out.params(g).expect("rotations keep the path").end(side);
                    if is_forbidden[z] {
                        continue;
                    }
                    next.entry((z, c)).or_insert_with(|| EndState {
                        vertex: z,
                        colour: c,
                        sequence: state.sequence.pushed(RotationStep {
                            chord,
                            new_end: Some(z),
                        }),
                        system: out,
                    });
                }
            }
        }
        if next.is_empty() {
            break;
        }
        let level: Vec<EndState> = next.into_values().collect();
        let witness = level
            .windows(2)
            .find(|p| p[0].vertex == p[1].vertex)
            .map(|p| TwoColourWitness {
                level: depth + 1,
                vertex: p[0].vertex,
                first: p[0].clone(),
                second: p[1].clone(),
            });
        levels.push(level);
        if two_colour.is_none() {
            two_colour = witness;
        }
        if opts.stop_at_two_colours && two_colour.is_some() {
            break;
        }
    }

    Ok(Expansion {
        side,
        levels,
        two_colour,
    })
}
