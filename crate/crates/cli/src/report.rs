use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use pch_core::ColouredComplete;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Serialize)]
pub struct Instance {
    pub n: usize,
    pub k: u32,
    pub delta_mon: usize,
    pub min_colour_degree: usize,
}

impl Instance {
    pub fn of(g: &ColouredComplete) -> Self {
        Self {
            n: g.n(),
            k: g.colour_count(),
            delta_mon: g.delta_mon(),
            min_colour_degree: g.min_colour_degree(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<Instance>,
    /// Wall-clock milliseconds per stage.
    pub timings: BTreeMap<String, f64>,
    pub verdict: String,
    pub result: Value,
}

impl RunReport {
    pub fn new(seed: u64) -> Self {
        Self {
            command: std::env::args().collect(),
            seed,
            instance: None,
            timings: BTreeMap::new(),
            verdict: String::new(),
            result: Value::Null,
        }
    }

    pub fn timed<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.timings
            .insert(stage.to_string(), t.elapsed().as_secs_f64() * 1e3);
        out
    }

    pub fn emit(&self, path: Option<&Path>) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        match path {
            Some(p) => std::fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display())),
            None => {
                println!("{text}");
                Ok(())
            }
        }
    }
}
