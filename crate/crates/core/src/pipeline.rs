//! End-to-end search for a properly coloured Hamiltonian cycle.
//!
//! 1. Build an absorbing cycle `C`.
//! 2. Restrict to the vertices outside `C`.
//! 3. Find a properly coloured 2-factor of the restriction.
//! 4. Turn it into a Hamiltonian path, by rotations first and exact search
//!    second.
//! 5. Absorb that path into `C`.
//!
//! Every stage result is re-verified. On failure the optional exact
//! fallback decides existence directly.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::absorbing::{
    absorb_path, build_absorbing_cycle, AbsorbingCycle, CycleOutcome, CycleParams, CycleStage, UniversalityCheck,
    VerifyAt,
};
use crate::certificate::{verify_certificate, Certificate};
use crate::error::{domain, Result};
use crate::exact::{exact_pc_ham_cycle_with, exact_pc_ham_path_with, SearchBudget, SearchOutcome};
use crate::graph::ColouredComplete;
use crate::par::Exec;
use crate::rotations::{
    find_chords, find_pc_two_factor, rotation_outcomes, PathCycleSystem, Side, Slot, TwoFactorConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fallback {
    None,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub eps: f64,
    /// Largest fraction of the vertices the absorbing cycle may occupy.
    pub gamma: f64,
    /// Expected family size before deletions; `None` means `n / 5`.
    pub family_target: Option<f64>,
    pub family_retries: usize,
    pub join_len: usize,
    pub two_factor: TwoFactorConfig,
    /// Rotations tried per attempt when merging 2-factor cycles into a path.
    pub path_rotations: usize,
    pub path_attempts: usize,
    pub exact_budget: SearchBudget,
    pub fallback: Fallback,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            eps: 0.1,
            gamma: 0.8,
            family_target: None,
            family_retries: 300,
            join_len: 8,
            two_factor: TwoFactorConfig::default(),
            path_rotations: 200,
            path_attempts: 32,
            exact_budget: SearchBudget::default(),
            fallback: Fallback::None,
            seed: 0,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stage {
    AbsorbingCycle,
    Restrict,
    TwoFactor,
    HamPath,
    Absorb,
}

/// Where the pipeline stopped, with whatever it had built by then.
/// Vertex ids are those of the input graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StagedFailure {
    pub stage: Stage,
    pub reason: String,
    pub cycle: Option<AbsorbingCycle>,
    pub two_factor: Option<Vec<Vec<usize>>>,
    pub path: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PipelineOutcome {
    Success(Certificate),
    Failed(StagedFailure),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub outcome: PipelineOutcome,
    /// Exact verdict, present when the pipeline failed and the exact
    /// fallback was requested.
    pub fallback: Option<SearchOutcome>,
    /// How stage 4 obtained its path.
    pub path_by_rotation: bool,
}

impl PipelineReport {
    pub fn certificate(&self) -> Option<&Certificate> {
        match &self.outcome {
            PipelineOutcome::Success(c) => Some(c),
            PipelineOutcome::Failed(_) => self.fallback.as_ref().and_then(SearchOutcome::certificate),
        }
    }

    /// `Some(true)` on success, the fallback's answer on failure, `None`
    /// when nothing was decided.
    pub fn exists(&self) -> Option<bool> {
        match &self.outcome {
            PipelineOutcome::Success(_) => Some(true),
            PipelineOutcome::Failed(_) => self.fallback.as_ref().and_then(SearchOutcome::exists),
        }
    }

    pub fn failure(&self) -> Option<&StagedFailure> {
        match &self.outcome {
            PipelineOutcome::Failed(f) => Some(f),
            PipelineOutcome::Success(_) => None,
        }
    }
}

struct Partial {
    cycle: Option<AbsorbingCycle>,
    two_factor: Option<Vec<Vec<usize>>>,
    path: Option<Vec<usize>>,
}

impl Partial {
    fn fail(self, stage: Stage, reason: impl Into<String>) -> StagedFailure {
        StagedFailure {
            stage,
            reason: reason.into(),
            cycle: self.cycle,
            two_factor: self.two_factor,
            path: self.path,
        }
    }
}

pub fn run_pipeline(g: &ColouredComplete, cfg: &PipelineConfig) -> Result<PipelineReport> {
    let n = g.n();
    if n < 8 {
        return Err(domain(format!("the pipeline needs n >= 8, got {n}")));
    }
    if !(cfg.eps > 0.0 && cfg.eps < 0.5) {
        return Err(domain(format!("eps must lie in (0, 1/2), got {}", cfg.eps)));
    }
    let (outcome, path_by_rotation) = match stages(g, cfg)? {
        Ok((cert, rot)) => (PipelineOutcome::Success(cert), rot),
        Err(f) => (PipelineOutcome::Failed(f), false),
    };
    let fallback = match (&outcome, cfg.fallback) {
        (PipelineOutcome::Failed(_), Fallback::Exact) => {
            let out = exact_pc_ham_cycle_with(g, cfg.exact_budget, cfg.exec)?;
            Some(match out {
                SearchOutcome::Found(c) => SearchOutcome::Found(verify_certificate(g, &c)),
                other => other,
            })
        }
        _ => None,
    };
    Ok(PipelineReport {
        outcome,
        fallback,
        path_by_rotation,
    })
}

type StageResult = std::result::Result<(Certificate, bool), StagedFailure>;

fn stages(g: &ColouredComplete, cfg: &PipelineConfig) -> Result<StageResult> {
    let n = g.n();
    let mut partial = Partial {
        cycle: None,
        two_factor: None,
        path: None,
    };

    let mut cp = CycleParams::new(cfg.family_target.unwrap_or(n as f64 / 5.0), cfg.seed);
    cp.family.retry_budget = cfg.family_retries;
    cp.family.exec = cfg.exec;
    cp.family.check = UniversalityCheck::Exhaustive;
    cp.max_len = cfg.join_len;
    cp.verify_at = VerifyAt::Cycle;
    let ac = match build_absorbing_cycle(g, &cp)? {
        CycleOutcome::Built(ac) => ac,
        CycleOutcome::Failed(stage) => {
            let why = match stage {
                CycleStage::Family { .. } => "no properly coloured family member survived".to_string(),
                CycleStage::Join { index } => format!("could not join family paths {index} and {}", index + 1),
                CycleStage::Verify { reason } => reason,
            };
            return Ok(Err(partial.fail(Stage::AbsorbingCycle, why)));
        }
    };
    let cap = (cfg.gamma * n as f64).floor() as usize;
    let too_big = ac.len() > cap;
    let len = ac.len();
    partial.cycle = Some(ac.clone());
    if too_big {
        return Ok(Err(partial.fail(
            Stage::AbsorbingCycle,
            format!("absorbing cycle has {len} vertices, above the cap {cap}"),
        )));
    }

    let on_cycle = ac.vertex_mask(n);
    let keep: Vec<usize> = (0..n).filter(|&v| !on_cycle[v]).collect();
    if keep.len() < 4 {
        return Ok(Err(partial.fail(
            Stage::Restrict,
            format!("only {} vertices left outside the cycle", keep.len()),
        )));
    }
    let sub = g.restrict(&keep)?;

    let tf_cfg = TwoFactorConfig {
        seed: cfg.seed,
        exec: cfg.exec,
        ..cfg.two_factor
    };
    let report = find_pc_two_factor(&sub, &tf_cfg)?;
    let Some(tf) = report.certificate() else {
        return Ok(Err(partial.fail(Stage::TwoFactor, "no properly coloured 2-factor found")));
    };
    let cycles = tf.cycles.clone();
    partial.two_factor = Some(cycles.iter().map(|c| c.iter().map(|&v| keep[v]).collect()).collect());

    let (local_path, by_rotation) = match rotation_ham_path(&sub, &cycles, cfg) {
        Some(p) => (p, true),
        None => match exact_pc_ham_path_with(&sub, cfg.exact_budget, cfg.exec)? {
            SearchOutcome::Found(c) => (c.path, false),
            SearchOutcome::NotExists => {
                return Ok(Err(partial.fail(Stage::HamPath, "the restriction has no Hamiltonian path")))
            }
            SearchOutcome::BudgetExhausted => {
                return Ok(Err(partial.fail(Stage::HamPath, "exact path search ran out of budget")))
            }
        },
    };
    if !sub.is_properly_coloured_path(&local_path) || local_path.len() != keep.len() {
        return Ok(Err(partial.fail(Stage::HamPath, "stage 4 produced an invalid path")));
    }
    let path: Vec<usize> = local_path.iter().map(|&v| keep[v]).collect();
    partial.path = Some(path.clone());

    let cycle = match absorb_path(g, &ac, &path) {
        Ok(c) => c,
        Err(e) => return Ok(Err(partial.fail(Stage::Absorb, e.to_string()))),
    };
    let cert = verify_certificate(g, &Certificate::ham_cycle(cycle));
    if !cert.is_valid() {
        return Ok(Err(partial.fail(Stage::Absorb, format!("final cycle rejected: {:?}", cert.verdict))));
    }
    Ok(Ok((cert, by_rotation)))
}

/// Merges the cycles of a 2-factor into one Hamiltonian path.
///
/// One cycle is opened into a path. Chords from either end into another
/// cycle swallow that cycle; when no such chord exists, a random rewiring
/// rotation inside the path moves an end. Each attempt opens a different
/// cycle edge.
pub fn rotation_ham_path(g: &ColouredComplete, cycles: &[Vec<usize>], cfg: &PipelineConfig) -> Option<Vec<usize>> {
    if cycles.len() == 1 {
        let c = &cycles[0];
        for cut in 0..c.len() {
            let p: Vec<usize> = (0..c.len()).map(|i| c[(cut + i) % c.len()]).collect();
            if g.is_properly_coloured_path(&p) {
                return Some(p);
            }
        }
    }
    let attempts = cfg.path_attempts.max(1);
    cfg.exec.find_map_first(attempts, |a| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (a as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let first = a % cycles.len();
        let c = &cycles[first];
        let cut = (a / cycles.len()) % c.len();
        let path: Vec<usize> = (0..c.len()).map(|i| c[(cut + i) % c.len()]).collect();
        let rest: Vec<Vec<usize>> = cycles
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != first)
            .map(|(_, c)| c.clone())
            .collect();
        let mut sys = PathCycleSystem::new(g, Some(path), rest).ok()?;
        let mut budget = cfg.path_rotations;
        while !sys.cycles().is_empty() {
            if let Some(next) = swallow_cycle(&sys, g) {
                sys = next;
                continue;
            }
            if budget == 0 {
                return None;
            }
            budget -= 1;
            sys = random_rewire(&sys, g, &mut rng)?;
        }
        let p = sys.into_parts().0?;
        g.is_properly_coloured_path(&p).then_some(p)
    })
}

fn swallow_cycle(sys: &PathCycleSystem, g: &ColouredComplete) -> Option<PathCycleSystem> {
    for side in [Side::Right, Side::Left] {
        for chord in find_chords(sys, g, side).ok()? {
            if matches!(sys.slot(chord.w), Some(Slot::Cycle { .. })) {
                if let Ok(mut outs) = rotation_outcomes(sys, g, chord) {
                    return Some(outs.swap_remove(0));
                }
            }
        }
    }
    None
}

fn random_rewire(sys: &PathCycleSystem, g: &ColouredComplete, rng: &mut ChaCha8Rng) -> Option<PathCycleSystem> {
    let mut options = Vec::new();
    for side in [Side::Right, Side::Left] {
        for chord in find_chords(sys, g, side).ok()? {
            if let Ok(outs) = rotation_outcomes(sys, g, chord) {
                options.extend(outs.into_iter().filter(|o| o.cycles().len() == sys.cycles().len()));
            }
        }
    }
    options.shuffle(rng);
    options.pop()
}

/// Constants from the proof of the main theorem for a given `eps`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsReport {
    pub eps: f64,
    /// `2^-5 eps^(4/eps^2 + 2)`: largest fraction of vertices on the absorbing cycle.
    pub gamma: f64,
    /// `log10` of `gamma`, readable when `gamma` underflows.
    pub gamma_log10: f64,
    /// `(2 eps - gamma) / (2 - 2 gamma)`, the slack left for the 2-factor.
    pub eps_prime: f64,
    /// `2 eps^-2`, the longest connector between path ends.
    pub ifar_cap: f64,
    /// `ceil(1 / log2(1 + eps)) + 1`, the rotation depth.
    pub depth_cap: usize,
    /// `2^-8 eps^2`: expected absorbing family size as a fraction of `n`.
    pub family_fraction: f64,
    /// `ceil(11/eps * (ceil(1/log2(1+eps)) + 3))`, the rotation lemma threshold.
    pub n0_rotation: u64,
    /// `max(ceil(1000 / (eps log2(1+eps))), n0_rotation)`, the 2-factor threshold.
    pub n1: u64,
    /// The 2-factor threshold at `eps_prime`, scaled by `1 / (1 - gamma)`;
    /// a lower bound on the theorem's threshold.
    pub n_threshold_lower: u64,
    /// The absorbing cycle's threshold is only shown to exist.
    pub n0_abscycle: String,
}

fn rotation_depth(eps: f64) -> usize {
    (1.0 / (1.0 + eps).log2()).ceil() as usize + 1
}

fn n0_rotation(eps: f64) -> u64 {
    (11.0 / eps * ((1.0 / (1.0 + eps).log2()).ceil() + 3.0)).ceil() as u64
}

fn n1(eps: f64) -> u64 {
    ((1000.0 / (eps * (1.0 + eps).log2())).ceil() as u64).max(n0_rotation(eps))
}

pub fn check_constants(eps: f64) -> Result<ConstantsReport> {
    if !(eps > 0.0 && eps < 0.25) {
        return Err(domain(format!("eps must lie in (0, 1/4), got {eps}")));
    }
    let exponent = 4.0 / (eps * eps) + 2.0;
    let gamma_log10 = -5.0 * 2f64.log10() + exponent * eps.log10();
    let gamma = 10f64.powf(gamma_log10);
    let eps_prime = (2.0 * eps - gamma) / (2.0 - 2.0 * gamma);
    Ok(ConstantsReport {
        eps,
        gamma,
        gamma_log10,
        eps_prime,
        ifar_cap: 2.0 / (eps * eps),
        depth_cap: rotation_depth(eps),
        family_fraction: 2f64.powi(-8) * eps * eps,
        n0_rotation: n0_rotation(eps),
        n1: n1(eps),
        n_threshold_lower: (n1(eps_prime) as f64 / (1.0 - gamma)).ceil() as u64,
        n0_abscycle: "implicit (exists, no explicit value)".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_at_one_tenth() {
        let c = check_constants(0.1).unwrap();
        assert_eq!(c.depth_cap, 9);
        assert!((c.ifar_cap - 200.0).abs() < 1e-9);
        assert!(c.gamma_log10 < -400.0);
        assert!((c.eps_prime - 0.1).abs() < 1e-12);
        assert!(check_constants(0.25).is_err());
        assert!(check_constants(0.0).is_err());
    }

    #[test]
    fn rainbow_pipeline_succeeds() {
        let g = ColouredComplete::rainbow(30);
        let r = run_pipeline(&g, &PipelineConfig::default()).unwrap();
        let cert = r.certificate().expect("rainbow succeeds");
        assert!(cert.is_valid());
        assert_eq!(cert.cycles[0].len(), 30);
    }

    #[test]
    fn mono_pipeline_fails_at_stage_one() {
        let g = ColouredComplete::monochromatic(30);
        let cfg = PipelineConfig {
            fallback: Fallback::Exact,
            family_retries: 5,
            ..Default::default()
        };
        let r = run_pipeline(&g, &cfg).unwrap();
        assert_eq!(r.failure().unwrap().stage, Stage::AbsorbingCycle);
        assert_eq!(r.exists(), Some(false));
    }

    #[test]
    fn rotation_path_merges_rainbow_cycles() {
        let g = ColouredComplete::rainbow(12);
        let cycles = vec![vec![0, 1, 2, 3], vec![4, 5, 6], vec![7, 8, 9, 10, 11]];
        let p = rotation_ham_path(&g, &cycles, &PipelineConfig::default()).unwrap();
        assert_eq!(p.len(), 12);
        assert!(g.is_properly_coloured_path(&p));
    }
}
