use serde::{Deserialize, Serialize};

use super::system::{PathCycleSystem, Side, Slot};
use crate::error::{domain, Error, Result};
use crate::graph::ColouredComplete;

/// Minimum pairwise distance for a spread-out chord sequence.
pub const DEFAULT_SPREAD: usize = 5;

/// An edge `endpoint w` from a path end whose colour differs from that
/// end's parameter colour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Chord {
    pub side: Side,
    pub endpoint: usize,
    pub w: usize,
}

impl Chord {
    pub fn left(x: usize, w: usize) -> Self {
        Self { side: Side::Left, endpoint: x, w }
    }

    pub fn right(y: usize, w: usize) -> Self {
        Self { side: Side::Right, endpoint: y, w }
    }
}

/// All chords at one end of the path, in increasing order of `w`.
pub fn find_chords(sys: &PathCycleSystem, g: &ColouredComplete, side: Side) -> Result<Vec<Chord>> {
    let params = sys.params(g).ok_or_else(|| domain("chords need a path"))?;
    let (end, colour) = params.end(side);
    Ok(sys
        .vertex_set()
        .into_iter()
        .filter(|&w| w != end && g.colour(end, w) != colour)
        .map(|w| Chord { side, endpoint: end, w })
        .collect())
}

/// Every system a single rotation along `chord` can produce, preferred
/// outcome first.
///
/// A chord into a cycle may be followed in either direction around the
/// cycle; a chord to a path vertex either rewires the path tail or splits
/// it off as a cycle. Each alternative whose colours fit is listed.
pub fn rotation_outcomes(
    sys: &PathCycleSystem,
    g: &ColouredComplete,
    chord: Chord,
) -> Result<Vec<PathCycleSystem>> {
    let params = sys.params(g).ok_or_else(|| domain("rotation needs a path"))?;
    let (end, end_colour) = params.end(chord.side);
    let (anchor, _) = params.end(chord.side.opposite());
    let w = chord.w;
    if chord.endpoint != end {
        return Err(domain(format!("chord starts at {}, but the path end is {end}", chord.endpoint)));
    }
    if w == end || sys.slot(w).is_none() {
        return Err(domain(format!("chord target {w} is not a system vertex other than the end")));
    }
    if g.colour(end, w) == end_colour {
        return Err(domain(format!("edge {end}{w} repeats the end colour {end_colour}")));
    }
    if w == anchor || sys.neighbours(anchor).contains(&w) {
        return Err(domain(format!("chord target {w} is the opposite end or next to it")));
    }

    let outcomes = match chord.side {
        Side::Right => right_outcomes(sys, g, w),
        Side::Left => right_outcomes(&sys.reversed(), g, w)
            .into_iter()
            .map(|s| s.reversed())
            .collect(),
    };
    assert!(!outcomes.is_empty(), "a valid chord always admits a rotation");
    Ok(outcomes)
}

fn right_outcomes(sys: &PathCycleSystem, g: &ColouredComplete, w: usize) -> Vec<PathCycleSystem> {
    let path = sys.path().expect("checked by caller");
    let y = *path.last().unwrap();
    let cyw = g.colour(y, w);
    let mut out = Vec::with_capacity(2);
    match sys.slot(w).expect("checked by caller") {
        Slot::Cycle { cycle, index } => {
            let cyc = &sys.cycles()[cycle];
            let m = cyc.len();
            let prev = cyc[(index + m - 1) % m];
            let next = cyc[(index + 1) % m];
            let rest: Vec<Vec<usize>> = sys
                .cycles()
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != cycle)
                .map(|(_, c)| c.clone())
                .collect();
            if cyw != g.colour(w, prev) {
                let mut p = path.to_vec();
                p.extend((0..m).map(|k| cyc[(index + m - k) % m]));
                out.push(sys.with_parts(Some(p), rest.clone()));
            }
            if cyw != g.colour(w, next) {
                let mut p = path.to_vec();
                p.extend((0..m).map(|k| cyc[(index + k) % m]));
                out.push(sys.with_parts(Some(p), rest));
            }
        }
        Slot::Path(j) => {
            if cyw != g.colour(w, path[j - 1]) {
                let mut p = path[..=j].to_vec();
                p.extend(path[j + 1..].iter().rev());
                out.push(sys.with_parts(Some(p), sys.cycles().to_vec()));
            }
            if cyw != g.colour(w, path[j + 1]) {
                let mut cycles = sys.cycles().to_vec();
                cycles.push(path[j..].to_vec());
                out.push(sys.with_parts(Some(path[..j].to_vec()), cycles));
            }
        }
    }
    out
}

/// One rotation, taking the preferred outcome.
pub fn rotate(sys: &PathCycleSystem, g: &ColouredComplete, chord: Chord) -> Result<PathCycleSystem> {
    Ok(rotation_outcomes(sys, g, chord)?.swap_remove(0))
}

/// One rotation whose new end on the chord's side is `new_end`.
pub fn rotate_towards(
    sys: &PathCycleSystem,
    g: &ColouredComplete,
    chord: Chord,
    new_end: usize,
) -> Result<PathCycleSystem> {
    rotation_outcomes(sys, g, chord)?
        .into_iter()
        .find(|s| s.params(g).map(|p| p.end(chord.side).0) == Some(new_end))
        .ok_or_else(|| domain(format!("no rotation along {chord:?} ends at {new_end}")))
}

/// A chord together with the end it is expected to produce (if pinned).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RotationStep {
    pub chord: Chord,
    pub new_end: Option<usize>,
}

impl From<Chord> for RotationStep {
    fn from(chord: Chord) -> Self {
        Self { chord, new_end: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChordSequence {
    pub steps: Vec<RotationStep>,
    pub spread_distance: usize,
    /// Check spreading before applying and the resulting end guarantees after.
    pub track_spread: bool,
}

impl Default for ChordSequence {
    fn default() -> Self {
        Self {
            steps: Vec::new(),
            spread_distance: DEFAULT_SPREAD,
            track_spread: false,
        }
    }
}

impl ChordSequence {
    pub fn new(steps: Vec<RotationStep>) -> Self {
        Self { steps, ..Self::default() }
    }

    pub fn tracked(steps: Vec<RotationStep>, spread_distance: usize) -> Self {
        Self {
            steps,
            spread_distance,
            track_spread: true,
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn targets(&self) -> impl Iterator<Item = usize> + '_ {
        self.steps.iter().map(|s| s.chord.w)
    }

    pub(crate) fn pushed(&self, step: RotationStep) -> Self {
        let mut out = self.clone();
        out.steps.push(step);
        out
    }
}

/// Distances in `sys` between the path ends and every chord target all
/// exceed `d`. Repeated vertices count as distance 0.
pub fn points_spread_out(sys: &PathCycleSystem, points: &[usize], d: usize) -> bool {
    points.iter().enumerate().all(|(i, &a)| {
        let dist = sys.distances_from(a);
        points[i + 1..].iter().all(|&b| dist[b].is_none_or(|x| x > d))
    })
}

pub fn is_spread_out(sys: &PathCycleSystem, g: &ColouredComplete, seq: &ChordSequence) -> bool {
    let Some(p) = sys.params(g) else {
        return false;
    };
    let mut points = vec![p.x, p.y];
    points.extend(seq.targets());
    points_spread_out(sys, &points, seq.spread_distance)
}

/// Vertices within distance `d` of `sources` along system edges.
pub(crate) fn within_distance(sys: &PathCycleSystem, sources: &[usize], d: usize) -> Vec<bool> {
    sys.multi_source_distances(sources)
        .into_iter()
        .map(|x| x.is_some_and(|x| x <= d))
        .collect()
}

fn apply_steps(
    sys: &PathCycleSystem,
    g: &ColouredComplete,
    steps: &[RotationStep],
    offset: usize,
) -> Result<PathCycleSystem> {
    let mut cur = sys.clone();
    for (i, step) in steps.iter().enumerate() {
        let next = match step.new_end {
            Some(t) => rotate_towards(&cur, g, step.chord, t),
            None => rotate(&cur, g, step.chord),
        };
        cur = next.map_err(|e| Error::Sequence {
            index: offset + i,
            reason: e.to_string(),
        })?;
    }
    Ok(cur)
}

/// Applies the chords in order. With spread tracking on, the sequence must
/// be spread out in `sys` and the result is checked against the end
/// guarantees: same vertex set, new ends among the old ends and the
/// original neighbours of chord targets, and the untouched end fixed when
/// every chord is on the same side.
pub fn apply_sequence(sys: &PathCycleSystem, g: &ColouredComplete, seq: &ChordSequence) -> Result<PathCycleSystem> {
    if seq.track_spread && !is_spread_out(sys, g, seq) {
        return Err(Error::NotSpreadOut(seq.spread_distance));
    }
    let out = apply_steps(sys, g, &seq.steps, 0)?;
    if seq.track_spread {
        check_guarantees(sys, g, seq, &out)?;
    }
    Ok(out)
}

fn check_guarantees(
    before: &PathCycleSystem,
    g: &ColouredComplete,
    seq: &ChordSequence,
    after: &PathCycleSystem,
) -> Result<()> {
    let broken = |what: &str| Err(domain(format!("spread-out guarantee broken: {what}")));
    if before.vertex_set() != after.vertex_set() {
        return broken("vertex set changed");
    }
    let (Some(p0), Some(p1)) = (before.params(g), after.params(g)) else {
        return broken("path disappeared");
    };
    let mut allowed = vec![p0.x, p0.y];
    for w in seq.targets() {
        allowed.extend(before.neighbours(w));
    }
    if !allowed.contains(&p1.x) || !allowed.contains(&p1.y) {
        return broken("new end outside the permitted set");
    }
    let Some(last) = seq.steps.last() else {
        return Ok(());
    };
    let last_nbrs = before.neighbours(last.chord.w);
    let all = |side| seq.steps.iter().all(|s| s.chord.side == side);
    if all(Side::Right) && (p1.x != p0.x || p1.cx != p0.cx || !last_nbrs.contains(&p1.y)) {
        return broken("right rotations moved the left end");
    }
    if all(Side::Left) && (p1.y != p0.y || p1.cy != p0.cy || !last_nbrs.contains(&p1.x)) {
        return broken("left rotations moved the right end");
    }
    Ok(())
}

/// Runs a right-only sequence and then a left-only sequence, where each was
/// found separately from `sys`. When the concatenation is spread out the
/// result carries the left end reached by `left` and the right end reached
/// by `right`, on the same vertex set.
pub fn combine_sequences(
    sys: &PathCycleSystem,
    g: &ColouredComplete,
    right: &ChordSequence,
    left: &ChordSequence,
) -> Result<PathCycleSystem> {
    if right.steps.iter().any(|s| s.chord.side != Side::Right) {
        return Err(domain("right sequence contains a left chord"));
    }
    if left.steps.iter().any(|s| s.chord.side != Side::Left) {
        return Err(domain("left sequence contains a right chord"));
    }
    let d = right.spread_distance.max(left.spread_distance);
    let mut joint = ChordSequence::tracked(right.steps.clone(), d);
    joint.steps.extend(left.steps.iter().copied());
    if !is_spread_out(sys, g, &joint) {
        return Err(Error::NotSpreadOut(d));
    }

    let right_alone = apply_steps(sys, g, &right.steps, 0)?;
    let mut pinned = Vec::with_capacity(left.len());
    let mut cur = sys.clone();
    for (i, step) in left.steps.iter().enumerate() {
        cur = apply_steps(&cur, g, std::slice::from_ref(step), right.len() + i)?;
        let end = cur.params(g).map(|p| p.x).expect("rotations keep the path");
        pinned.push(RotationStep {
            chord: step.chord,
            new_end: Some(end),
        });
    }
    let left_alone = cur;

    let combined = apply_steps(&right_alone, g, &pinned, right.len())?;
    let (pr, pl, pc) = (
        right_alone.params(g).unwrap(),
        left_alone.params(g).unwrap(),
        combined.params(g).unwrap(),
    );
    if (pc.x, pc.cx, pc.y, pc.cy) != (pl.x, pl.cx, pr.y, pr.cy) || combined.vertex_set() != sys.vertex_set() {
        return Err(domain("combined rotations did not reach the predicted parameters"));
    }
    Ok(combined)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Colour;

    fn coloured(n: usize, special: &[((usize, usize), Colour)]) -> ColouredComplete {
        ColouredComplete::from_fn(n, |u, v| {
            special
                .iter()
                .find(|((a, b), _)| (*a, *b) == (u, v) || (*a, *b) == (v, u))
                .map_or(100 + (u * n + v) as Colour, |&(_, c)| c)
        })
    }

    #[test]
    fn chords_on_rainbow_and_mono() {
        let g = ColouredComplete::rainbow(6);
        let sys = PathCycleSystem::from_path(&g, (0..6).collect()).unwrap();
        let ws: Vec<usize> = find_chords(&sys, &g, Side::Right).unwrap().iter().map(|c| c.w).collect();
        // y's own path edge to 4 carries c_y, so 4 is not a chord target.
        assert_eq!(ws, vec![0, 1, 2, 3]);
        let mono = ColouredComplete::monochromatic(5);
        let sys = PathCycleSystem::from_path(&mono, vec![0, 1]).unwrap();
        assert!(find_chords(&sys, &mono, Side::Right).unwrap().is_empty());
        let none = PathCycleSystem::new(&g, None, vec![vec![0, 1, 2]]).unwrap();
        assert!(find_chords(&none, &g, Side::Left).is_err());
    }

    #[test]
    fn chord_present_when_colours_differ() {
        let g = coloured(5, &[((4, 2), 1), ((4, 3), 2), ((3, 2), 3)]);
        let sys = PathCycleSystem::from_path(&g, vec![0, 1, 2, 3, 4]).unwrap();
        let chords = find_chords(&sys, &g, Side::Right).unwrap();
        assert!(chords.contains(&Chord::right(4, 2)));
    }

    #[test]
    fn path_rewire_case() {
        // c(v5 v3) differs from both c(v3 v2) and c(v3 v4): rewiring is preferred.
        let g = coloured(5, &[((4, 2), 1), ((2, 1), 2), ((2, 3), 3), ((3, 4), 4)]);
        let sys = PathCycleSystem::from_path(&g, vec![0, 1, 2, 3, 4]).unwrap();
        let out = rotate(&sys, &g, Chord::right(4, 2)).unwrap();
        assert_eq!(out.path(), Some(&[0, 1, 2, 4, 3][..]));
        assert!(out.cycles().is_empty());
        assert_eq!(out.params(&g).unwrap().y, 3);
    }

    #[test]
    fn split_off_cycle_case() {
        // c(v5 v3) = c(v3 v2) forces the cycle v3 v4 v5.
        let g = coloured(5, &[((4, 2), 1), ((2, 1), 1), ((2, 3), 3), ((3, 4), 4)]);
        let sys = PathCycleSystem::from_path(&g, vec![0, 1, 2, 3, 4]).unwrap();
        let outs = rotation_outcomes(&sys, &g, Chord::right(4, 2)).unwrap();
        assert_eq!(outs.len(), 1);
        assert_eq!(outs[0].path(), Some(&[0, 1][..]));
        assert_eq!(outs[0].cycles(), &[vec![2, 3, 4]]);
    }

    #[test]
    fn chord_into_cycle_absorbs_it() {
        let g = ColouredComplete::rainbow(8);
        let sys = PathCycleSystem::new(&g, Some(vec![0, 1, 2, 3]), vec![vec![4, 5, 6, 7]]).unwrap();
        let outs = rotation_outcomes(&sys, &g, Chord::right(3, 5)).unwrap();
        assert_eq!(outs.len(), 2);
        for o in &outs {
            o.validate(&g).unwrap();
            assert!(o.cycles().is_empty());
            assert_eq!(o.vertex_set(), sys.vertex_set());
        }
        assert_eq!(outs[0].path(), Some(&[0, 1, 2, 3, 5, 4, 7, 6][..]));
        assert_eq!(outs[1].path(), Some(&[0, 1, 2, 3, 5, 6, 7, 4][..]));
        let left = rotate(&sys, &g, Chord::left(0, 6)).unwrap();
        assert_eq!(left.params(&g).unwrap().y, 3);
        left.validate(&g).unwrap();
    }

    #[test]
    fn precondition_errors() {
        let g = ColouredComplete::rainbow(8);
        let sys = PathCycleSystem::from_path(&g, (0..8).collect()).unwrap();
        assert!(rotate(&sys, &g, Chord::right(7, 1)).is_err());
        assert!(rotate(&sys, &g, Chord::right(7, 0)).is_err());
        assert!(rotate(&sys, &g, Chord::right(6, 3)).is_err());
        assert!(rotate(&sys, &g, Chord::right(7, 6)).is_err());
        assert!(rotate(&sys, &g, Chord::right(7, 3)).is_ok());
    }

    #[test]
    fn spread_out_distances() {
        let g = ColouredComplete::rainbow(30);
        let sys = PathCycleSystem::from_path(&g, (0..30).collect()).unwrap();
        let seq = ChordSequence::tracked(vec![Chord::right(29, 14).into()], 5);
        assert!(is_spread_out(&sys, &g, &seq));
        let near = ChordSequence::tracked(vec![Chord::right(29, 2).into()], 5);
        assert!(!is_spread_out(&sys, &g, &near));
        let short = PathCycleSystem::from_path(&g, (0..7).collect()).unwrap();
        assert!(is_spread_out(&short, &g, &ChordSequence::default()));
        let shorter = PathCycleSystem::from_path(&g, (0..6).collect()).unwrap();
        assert!(!is_spread_out(&shorter, &g, &ChordSequence::default()));
    }

    #[test]
    fn sequences_basic() {
        let g = ColouredComplete::rainbow(12);
        let sys = PathCycleSystem::from_path(&g, (0..12).collect()).unwrap();
        assert_eq!(apply_sequence(&sys, &g, &ChordSequence::default()).unwrap(), sys);
        let one = ChordSequence::new(vec![Chord::right(11, 5).into()]);
        assert_eq!(
            apply_sequence(&sys, &g, &one).unwrap(),
            rotate(&sys, &g, Chord::right(11, 5)).unwrap()
        );
        let bad = ChordSequence::new(vec![Chord::right(11, 5).into(), Chord::right(11, 3).into()]);
        assert!(matches!(apply_sequence(&sys, &g, &bad), Err(Error::Sequence { index: 1, .. })));
    }

    #[test]
    fn combine_with_empty_side() {
        let g = ColouredComplete::rainbow(30);
        let sys = PathCycleSystem::from_path(&g, (0..30).collect()).unwrap();
        let r = ChordSequence::tracked(vec![Chord::right(29, 14).into()], 5);
        let l = ChordSequence::tracked(vec![Chord::left(0, 14).into()], 5);
        let empty = ChordSequence::tracked(vec![], 5);
        assert_eq!(
            combine_sequences(&sys, &g, &r, &empty).unwrap(),
            apply_sequence(&sys, &g, &r).unwrap()
        );
        assert_eq!(
            combine_sequences(&sys, &g, &empty, &l).unwrap(),
            apply_sequence(&sys, &g, &l).unwrap()
        );
        assert!(matches!(
            combine_sequences(&sys, &g, &r, &l),
            Err(Error::NotSpreadOut(5))
        ));
    }
}
