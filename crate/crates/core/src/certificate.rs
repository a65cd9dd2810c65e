//! Claimed structures and their re-checkable verdicts.

use serde::{Deserialize, Serialize};

use crate::graph::ColouredComplete;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateKind {
    HamCycle,
    HamPath,
    TwoFactor,
    PathCycleSystem,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Verdict {
    #[default]
    Unchecked,
    Valid,
    Invalid(String),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

/// JSON shape: `{"kind": .., "cycles": [[..]], "path": [..], "verdict": ..}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    #[serde(default)]
    pub cycles: Vec<Vec<usize>>,
    #[serde(default)]
    pub path: Vec<usize>,
    #[serde(default)]
    pub verdict: Verdict,
}

impl Certificate {
    pub fn ham_cycle(cycle: Vec<usize>) -> Self {
        Self {
            kind: CertificateKind::HamCycle,
            cycles: vec![cycle],
            path: Vec::new(),
            verdict: Verdict::Unchecked,
        }
    }

    pub fn ham_path(path: Vec<usize>) -> Self {
        Self {
            kind: CertificateKind::HamPath,
            cycles: Vec::new(),
            path,
            verdict: Verdict::Unchecked,
        }
    }

    pub fn two_factor(cycles: Vec<Vec<usize>>) -> Self {
        Self {
            kind: CertificateKind::TwoFactor,
            cycles,
            path: Vec::new(),
            verdict: Verdict::Unchecked,
        }
    }

    pub fn path_cycle_system(path: Vec<usize>, cycles: Vec<Vec<usize>>) -> Self {
        Self {
            kind: CertificateKind::PathCycleSystem,
            cycles,
            path,
            verdict: Verdict::Unchecked,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.verdict.is_valid()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// Returns `cert` with its verdict recomputed from scratch. Malformed
/// structures produce `Invalid`, never a panic.
pub fn verify_certificate(g: &ColouredComplete, cert: &Certificate) -> Certificate {
    let mut out = cert.clone();
    out.verdict = match check(g, cert) {
        Ok(()) => Verdict::Valid,
        Err(reason) => Verdict::Invalid(reason),
    };
    out
}

fn check(g: &ColouredComplete, cert: &Certificate) -> Result<(), String> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut mark = |v: usize| -> Result<(), String> {
        if v >= n {
            return Err(format!("vertex {v} out of range for n = {n}"));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(format!("vertex {v} used twice"));
        }
        Ok(())
    };

    let check_cycle = |cyc: &[usize]| -> Result<(), String> {
        if cyc.len() < 3 {
            return Err(format!("cycle of length {} is too short", cyc.len()));
        }
        if !g.is_properly_coloured_cycle(cyc) {
            return Err(format!("adjacent same colour on cycle {cyc:?}"));
        }
        Ok(())
    };

    match cert.kind {
        CertificateKind::HamCycle => {
            if cert.cycles.len() != 1 || !cert.path.is_empty() {
                return Err("a Hamiltonian cycle certificate holds exactly one cycle".into());
            }
            for &v in &cert.cycles[0] {
                mark(v)?;
            }
            check_cycle(&cert.cycles[0])?;
            if cert.cycles[0].len() != n {
                return Err(format!("cycle covers {} of {n} vertices", cert.cycles[0].len()));
            }
        }
        CertificateKind::HamPath => {
            if !cert.cycles.is_empty() {
                return Err("a Hamiltonian path certificate holds no cycles".into());
            }
            for &v in &cert.path {
                mark(v)?;
            }
            if cert.path.len() != n {
                return Err(format!("path covers {} of {n} vertices", cert.path.len()));
            }
            if !g.is_properly_coloured_path(&cert.path) {
                return Err("adjacent same colour on path".into());
            }
        }
        CertificateKind::TwoFactor => {
            if !cert.path.is_empty() {
                return Err("a 2-factor certificate holds no path".into());
            }
            let mut covered = 0;
            for cyc in &cert.cycles {
                for &v in cyc {
                    mark(v)?;
                }
                check_cycle(cyc)?;
                covered += cyc.len();
            }
            if covered != n {
                return Err(format!("cycles cover {covered} of {n} vertices"));
            }
        }
        CertificateKind::PathCycleSystem => {
            for &v in &cert.path {
                mark(v)?;
            }
            if cert.path.len() == 1 {
                return Err("a 1-path-cycle path needs at least one edge".into());
            }
            if !g.is_properly_coloured_path(&cert.path) {
                return Err("adjacent same colour on path".into());
            }
            for cyc in &cert.cycles {
                for &v in cyc {
                    mark(v)?;
                }
                check_cycle(cyc)?;
            }
        }
    }
    Ok(())
}
