mod lemma;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use pch_core::absorbing::{
    build_absorbing_cycle, count_absorbing, CycleOutcome, CycleParams, UniversalityCheck, VerifyAt,
};
use pch_core::constructions::{
    bollobas_erdos, from_oriented, from_tournament, layered_xy, random_bounded_mono_with, tournament_t2m,
    CompletionPolicy, OrientedGraph, RandomColouringParams,
};
use pch_core::exact::{
    exact_pc_ham_cycle_with, exact_pc_ham_path_with, exact_pc_two_factor_with, longest_pc_cycle_with,
    longest_pc_path_with, SearchBudget, SearchOutcome,
};
use pch_core::io::{read_graph, write_graph};
use pch_core::pipeline::{check_constants, run_pipeline, Fallback, PipelineConfig, PipelineOutcome};
use pch_core::rotations::{find_pc_two_factor, TwoFactorConfig};
use pch_core::{verify_certificate, Certificate, ColouredComplete, Exec};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use report::{Instance, RunReport};

#[derive(Parser)]
#[command(name = "pch", version, about = "Properly coloured Hamiltonian cycles in edge-coloured complete graphs")]
struct Cli {
    /// Worker threads for independent seeds and instances (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Be,
    Oriented,
    T2m,
    Layered,
    Random,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Pipeline,
    Rotation,
    Exact,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FallbackArg {
    None,
    Exact,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Query {
    Hamcycle,
    Hampath,
    Twofactor,
    LongestCycle,
    LongestPath,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum LemmaName {
    Abspath,
    Ifar,
    Rotation3,
    #[value(name = "2factor")]
    TwoFactor,
    Abscycle,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a colouring and write it in the text format.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        dmax: Option<usize>,
        #[arg(long)]
        palette: Option<u32>,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate against a graph.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Search for a Hamiltonian cycle (pipeline, exact) or a 2-factor (rotation).
    Solve {
        #[arg(long, value_enum, default_value = "pipeline")]
        method: Method,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, value_enum, default_value = "none")]
        fallback: FallbackArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = pch_core::rotations::DEFAULT_SPREAD)]
        spread: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run an exact search.
    Oracle {
        #[arg(long, value_enum)]
        query: Query,
        #[arg(long)]
        input: PathBuf,
        /// Node budget; defaults to PCH_BUDGET_NODES or the library default.
        #[arg(long)]
        budget_nodes: Option<u64>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Count absorbing paths and try to build an absorbing cycle.
    AbsorbCheck {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// `all` or `sample:N`.
        #[arg(long, default_value = "sample:50")]
        quads: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run one lemma's property suite over random instances.
    LemmaCheck {
        #[arg(long, value_enum)]
        lemma: LemmaName,
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Cap on same-coloured edges per vertex; defaults to floor((1/2 - eps) n).
        #[arg(long)]
        dmax: Option<usize>,
        #[arg(long)]
        palette: Option<u32>,
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print the constants of the main argument for a given eps.
    Constants {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path) -> Result<ColouredComplete> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    read_graph(&text).map_err(|e| match e {
        pch_core::Error::Parse { line, column, message } => {
            anyhow!("{}:{line}:{column}: {message}", path.display())
        }
        other => anyhow!("{}: {other}", path.display()),
    })
}

fn verdict_code(ok: bool) -> u8 {
    if ok {
        0
    } else {
        1
    }
}

fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Gen {
            family,
            k,
            n,
            l,
            m,
            dmax,
            palette,
            density,
            seed,
            out,
        } => {
            let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| anyhow!("--family {family:?} needs --{flag}"));
            let g = match family {
                Family::Be => bollobas_erdos(need(k, "k")?)?,
                Family::Oriented => {
                    from_oriented(&OrientedGraph::random(need(n, "n")?, density, seed)).complete_with(CompletionPolicy::FreshRainbow)
                }
                Family::T2m => from_tournament(&tournament_t2m(need(m, "m")?)?)?,
                Family::Layered => layered_xy(need(n, "n")?, need(l, "l")?)?,
                Family::Random => {
                    let mut p = RandomColouringParams::new(need(n, "n")?, need(dmax, "dmax")?);
                    p.palette = palette;
                    random_bounded_mono_with(p, seed)?
                }
            };
            let text = write_graph(&g);
            match out {
                Some(p) => std::fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        Command::Verify { input, cert, report } => {
            let g = load(&input)?;
            let text = std::fs::read_to_string(&cert).with_context(|| format!("reading {}", cert.display()))?;
            let c = Certificate::from_json(&text).with_context(|| format!("parsing {}", cert.display()))?;
            let mut rep = RunReport::new(0);
            rep.instance = Some(Instance::of(&g));
            let checked = rep.timed("verify", || verify_certificate(&g, &c));
            let ok = checked.is_valid();
            rep.verdict = if ok { "valid".into() } else { "invalid".into() };
            rep.result = serde_json::to_value(&checked)?;
            rep.emit(report.as_deref())?;
            Ok(verdict_code(ok))
        }
        Command::Solve {
            method,
            input,
            eps,
            fallback,
            seed,
            spread,
            report,
        } => {
            let g = load(&input)?;
            let mut rep = RunReport::new(seed);
            rep.instance = Some(Instance::of(&g));
            let ok = match method {
                Method::Pipeline => {
                    let cfg = PipelineConfig {
                        eps,
                        seed,
                        fallback: match fallback {
                            FallbackArg::None => Fallback::None,
                            FallbackArg::Exact => Fallback::Exact,
                        },
                        ..Default::default()
                    };
                    let out = rep.timed("pipeline", || run_pipeline(&g, &cfg))?;
                    rep.verdict = match (&out.outcome, out.exists()) {
                        (PipelineOutcome::Success(_), _) => "found".into(),
                        (_, Some(true)) => "found by fallback".into(),
                        (_, Some(false)) => "not exists".into(),
                        (_, None) => "failed".into(),
                    };
                    rep.result = serde_json::to_value(&out)?;
                    out.exists() == Some(true)
                }
                Method::Rotation => {
                    let cfg = TwoFactorConfig {
                        seed,
                        spread_distance: spread,
                        ..Default::default()
                    };
                    let out = rep.timed("two_factor", || find_pc_two_factor(&g, &cfg))?;
                    let ok = out.certificate().is_some();
                    rep.verdict = if ok { "found".into() } else { "failed".into() };
                    rep.result = serde_json::to_value(&out)?;
                    ok
                }
                Method::Exact => {
                    let out = rep.timed("exact", || exact_pc_ham_cycle_with(&g, SearchBudget::default(), Exec::default()))?;
                    rep.verdict = outcome_word(&out).into();
                    rep.result = serde_json::to_value(&out)?;
                    out.exists() == Some(true)
                }
            };
            rep.emit(report.as_deref())?;
            Ok(verdict_code(ok))
        }
        Command::Oracle {
            query,
            input,
            budget_nodes,
            report,
        } => {
            let g = load(&input)?;
            let budget = match budget_nodes {
                Some(b) => SearchBudget { node_limit: b, ..SearchBudget::default() },
                None => SearchBudget::default(),
            };
            let exec = Exec::default();
            let mut rep = RunReport::new(0);
            rep.instance = Some(Instance::of(&g));
            let ok = match query {
                Query::Hamcycle | Query::Hampath | Query::Twofactor => {
                    let out = rep.timed("search", || match query {
                        Query::Hamcycle => exact_pc_ham_cycle_with(&g, budget, exec),
                        Query::Hampath => exact_pc_ham_path_with(&g, budget, exec),
                        _ => exact_pc_two_factor_with(&g, budget, exec),
                    })?;
                    rep.verdict = outcome_word(&out).into();
                    rep.result = serde_json::to_value(&out)?;
                    out.exists() == Some(true)
                }
                Query::LongestCycle | Query::LongestPath => {
                    let out = rep.timed("search", || match query {
                        Query::LongestCycle => longest_pc_cycle_with(&g, budget, exec),
                        _ => longest_pc_path_with(&g, budget, exec),
                    })?;
                    rep.verdict = if out.lower_bound_only { "lower bound".into() } else { "exact".into() };
                    rep.result = serde_json::to_value(&out)?;
                    !out.lower_bound_only
                }
            };
            rep.emit(report.as_deref())?;
            Ok(verdict_code(ok))
        }
        Command::AbsorbCheck {
            input,
            eps,
            quads,
            seed,
            report,
        } => {
            let g = load(&input)?;
            absorb_check(&g, eps, &quads, seed, report.as_deref())
        }
        Command::LemmaCheck {
            lemma,
            n,
            eps,
            dmax,
            palette,
            seeds,
            report,
        } => {
            if !(eps > 0.0 && eps < 0.5) {
                bail!("--eps must lie in (0, 1/2)");
            }
            let dmax = dmax.unwrap_or(((0.5 - eps) * n as f64).floor() as usize);
            let mut rep = RunReport::new(0);
            let (pass, result) = rep.timed("lemma", || lemma::run(lemma, n, eps, dmax, palette, seeds))?;
            rep.verdict = if pass { "pass".into() } else { "fail".into() };
            rep.result = result;
            rep.emit(report.as_deref())?;
            Ok(verdict_code(pass))
        }
        Command::Constants { eps, report } => {
            let c = check_constants(eps)?;
            let mut rep = RunReport::new(0);
            rep.verdict = "reported".into();
            rep.result = serde_json::to_value(&c)?;
            rep.emit(report.as_deref())?;
            Ok(0)
        }
    }
}

fn outcome_word(o: &SearchOutcome) -> &'static str {
    match o {
        SearchOutcome::Found(_) => "exists",
        SearchOutcome::NotExists => "not exists",
        SearchOutcome::BudgetExhausted => "budget exhausted",
    }
}

fn absorb_check(g: &ColouredComplete, eps: f64, quads: &str, seed: u64, report: Option<&Path>) -> Result<u8> {
    let n = g.n();
    if n < 8 {
        bail!("absorb-check needs n >= 8");
    }
    let mut rep = RunReport::new(seed);
    rep.instance = Some(Instance::of(g));
    let list: Vec<[usize; 4]> = match quads {
        "all" => {
            let mut out = Vec::new();
            for a in 0..n {
                for b in (0..n).filter(|&b| b != a) {
                    for c in (0..n).filter(|&c| c != a && c != b) {
                        for d in (0..n).filter(|&d| d != a && d != b && d != c) {
                            out.push([a, b, c, d]);
                        }
                    }
                }
            }
            out
        }
        s => {
            let count: usize = s
                .strip_prefix("sample:")
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| anyhow!("--quads must be `all` or `sample:N`, got `{s}`"))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut vs: Vec<usize> = (0..n).collect();
            (0..count)
                .map(|_| {
                    let (q, _) = vs.partial_shuffle(&mut rng, 4);
                    [q[0], q[1], q[2], q[3]]
                })
                .collect()
        }
    };
    let counts: Vec<u64> = rep.timed("count", || {
        use rayon::prelude::*;
        list.par_iter().map(|&q| count_absorbing(g, q)).collect()
    });
    let bound = eps * eps * (n as f64).powi(4) / 4.0;
    let hypothesis = (g.delta_mon() as f64) <= (0.5 - eps) * n as f64 && n as f64 >= 5.0 / eps && eps < 0.125;
    let violations = counts.iter().filter(|&&c| (c as f64) < bound).count();

    let mut cp = CycleParams::new(n as f64 / 5.0, seed);
    cp.verify_at = VerifyAt::Cycle;
    cp.family.check = UniversalityCheck::default();
    let cycle = rep.timed("absorbing_cycle", || build_absorbing_cycle(g, &cp))?;
    let (coverage, order) = match &cycle {
        CycleOutcome::Built(ac) => (Some(ac.coverage.fraction()), Some(ac.len())),
        CycleOutcome::Failed(_) => (None, None),
    };
    let per_quad: Vec<_> = list
        .iter()
        .zip(&counts)
        .take(1000)
        .map(|(q, c)| json!({"quad": q, "count": c}))
        .collect();
    rep.result = json!({
        "bound": bound,
        "hypothesis_met": hypothesis,
        "quads_checked": counts.len(),
        "min_count": counts.iter().min(),
        "violations": violations,
        "per_quad": per_quad,
        "family_coverage": coverage,
        "cycle_order": order,
        "cycle": cycle,
    });
    let ok = !(hypothesis && violations > 0);
    rep.verdict = if ok { "pass".into() } else { "bound violated".into() };
    rep.emit(report)?;
    Ok(verdict_code(ok))
}
