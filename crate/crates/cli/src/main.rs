//! `krev`: command-line front end for k-reversible process experiments.
//!
//! Exit codes: 0 success, 1 internal invariant violation, 2 usage or parse
//! error, 3 a checked claim was not reproduced.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use krev_core::dynamics::{default_max_steps, parse_config, run_trajectory, Configuration};
use krev_core::energy::{bound_report, delta_energy_breakdown};
use krev_core::extremal::{
    algorithm1_generate, cross_validate_algorithm1, max_transient_search, verify_conjecture, ExtremalError,
    SearchOptions, Verdict,
};
use krev_core::graph::{parse_edge_list, Graph};
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    Simulate,
    Bounds,
    EnergyTrace,
    Search,
    Conjecture,
    Generate,
    #[value(name = "validate-alg1")]
    ValidateAlg1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "krev", version, about = "k-reversible processes on graphs")]
struct RunSpec {
    #[arg(value_enum)]
    command: Command,
    /// Edge-list file (`n=<int>` header, then 1-based `u v` lines)
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Initial configuration, e.g. `+-+-` or `1010`
    #[arg(long)]
    config: Option<String>,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    /// Append-only ledger for resumable sweeps
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Emit the per-step trace as JSON lines
    #[arg(long)]
    trace: bool,
    /// Re-simulate generated trees and require tau = n - 3
    #[arg(long)]
    verify: bool,
}

enum Failure {
    Internal(String),
    Usage(String),
    Claim(String),
}

impl From<ExtremalError> for Failure {
    fn from(e: ExtremalError) -> Self {
        match e {
            ExtremalError::TooSmall { .. } | ExtremalError::OverLimit { .. } | ExtremalError::Graph(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Internal(other.to_string()),
        }
    }
}

type CmdResult = Result<String, Failure>;

impl RunSpec {
    fn validate(&self) -> Result<(), Failure> {
        let need = |present: bool, flag: &str| {
            if present {
                Ok(())
            } else {
                Err(Failure::Usage(format!("{:?} requires --{flag}", self.command)))
            }
        };
        match self.command {
            Command::Simulate | Command::EnergyTrace => {
                need(self.graph.is_some(), "graph")?;
                need(self.config.is_some(), "config")
            }
            Command::Bounds | Command::Search => need(self.graph.is_some(), "graph"),
            Command::Conjecture | Command::Generate | Command::ValidateAlg1 => {
                need(self.n.is_some(), "n")?;
                match self.n {
                    Some(n) if n < 5 => Err(Failure::Usage(format!("n = {n}: the tree claim needs n >= 5"))),
                    _ => Ok(()),
                }
            }
        }
    }

    fn workers(&self) -> usize {
        self.workers
            .map(|w| w as usize)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()))
    }

    fn load_graph(&self) -> Result<Graph, Failure> {
        let path = self.graph.as_ref().expect("validated");
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
        parse_edge_list(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }

    fn load_config(&self, g: &Graph) -> Result<Configuration, Failure> {
        let text = self.config.as_deref().expect("validated");
        parse_config(text, g.n()).map_err(|e| Failure::Usage(format!("--config: {e}")))
    }

    fn search_options(&self) -> SearchOptions {
        SearchOptions {
            k: self.k,
            workers: self.workers(),
            checkpoint: self.checkpoint.clone(),
            ..SearchOptions::default()
        }
    }
}

fn internal<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Internal(e.to_string())
}

fn cmd_simulate(spec: &RunSpec) -> CmdResult {
    let g = spec.load_graph()?;
    let x0 = spec.load_config(&g)?;
    let traj = run_trajectory(&g, &x0, spec.k, default_max_steps(&g)).map_err(internal)?;
    let bounds = bound_report(&g, spec.k, Some(&traj)).map_err(internal)?;
    if !(1..=2).contains(&traj.period) {
        return Err(Failure::Internal(format!("detected period {} > 2", traj.period)));
    }
    if traj.tau as u64 > bounds.best_tau_bound() {
        return Err(Failure::Internal(format!(
            "tau {} exceeds proved bound {}",
            traj.tau,
            bounds.best_tau_bound()
        )));
    }
    let mut out = String::new();
    if spec.trace {
        out.push_str(&traj.trace_json_lines());
    }
    match spec.format {
        Format::Json => {
            let summary = json!({
                "tau": traj.tau,
                "period": traj.period,
                "E_final": traj.plateau_energy,
            });
            let _ = writeln!(out, "{summary}");
        }
        Format::Csv => {
            let _ = writeln!(out, "tau,period,E_final\n{},{},{}", traj.tau, traj.period, traj.plateau_energy);
        }
        Format::Text => {
            let _ = writeln!(out, "tau={} period={} E_final={}", traj.tau, traj.period, traj.plateau_energy);
        }
    }
    Ok(out)
}

fn cmd_bounds(spec: &RunSpec) -> CmdResult {
    let g = spec.load_graph()?;
    let traj = match spec.config {
        Some(_) => {
            let x0 = spec.load_config(&g)?;
            Some(run_trajectory(&g, &x0, spec.k, default_max_steps(&g)).map_err(internal)?)
        }
        None => None,
    };
    let r = bound_report(&g, spec.k, traj.as_ref()).map_err(internal)?;
    Ok(match spec.format {
        Format::Json => serde_json::to_string_pretty(&r).map_err(internal)? + "\n",
        Format::Csv | Format::Text => {
            let opt = |v: Option<u64>| v.map_or_else(|| "-".to_string(), |v| v.to_string());
            format!(
                "n={} k={} max_degree={}\ngeneral_bound={}\nhigh_k_bound={}\ntree_bound={}\ntree_max_energy={}\ntheorem2_bound={}\n",
                r.n,
                r.k,
                r.max_degree,
                r.general_bound,
                opt(r.high_k_bound),
                opt(r.tree_bound),
                opt(r.tree_max_energy),
                opt(r.theorem2_bound)
            )
        }
    })
}

fn cmd_energy_trace(spec: &RunSpec) -> CmdResult {
    let g = spec.load_graph()?;
    let x0 = spec.load_config(&g)?;
    let traj = run_trajectory(&g, &x0, spec.k, default_max_steps(&g)).map_err(internal)?;
    let mut out = String::new();
    if spec.format == Format::Csv {
        out.push_str("t,x,E,E_aux,E_next,A,B,C\n");
    }
    for rec in &traj.trace[..traj.trace.len() - 1] {
        let b = delta_energy_breakdown(&g, &rec.config, spec.k).map_err(internal)?;
        match spec.format {
            Format::Json => {
                let mut v = serde_json::to_value(&b).map_err(internal)?;
                v["t"] = json!(rec.t);
                v["x"] = json!(rec.config.to_string());
                let _ = writeln!(out, "{v}");
            }
            Format::Csv => {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    rec.t, rec.config, b.energy, b.energy_aux, b.energy_next, b.a_size, b.b_size, b.c_size
                );
            }
            Format::Text => {
                let _ = writeln!(
                    out,
                    "t={} x={} E={} E'={} dE={} |A|={} |B|={} |C|={}",
                    rec.t,
                    rec.config,
                    b.energy,
                    b.energy_aux,
                    b.delta(),
                    b.a_size,
                    b.b_size,
                    b.c_size
                );
            }
        }
    }
    Ok(out)
}

fn cmd_search(spec: &RunSpec) -> CmdResult {
    let g = spec.load_graph()?;
    if !g.is_tree() {
        return Err(Failure::Usage("search needs a tree".into()));
    }
    let r = max_transient_search(&g, spec.k, krev_core::extremal::conjecture::DEFAULT_EXHAUSTIVE_LIMIT)?;
    if r.tally.violations() > 0 {
        return Err(Failure::Internal(format!("property violations: {:?}", r.tally)));
    }
    Ok(match spec.format {
        Format::Json => serde_json::to_string_pretty(&r).map_err(internal)? + "\n",
        Format::Csv => {
            let mut s = String::from("config,tau,period\n");
            for e in &r.extremal {
                let _ = writeln!(s, "{},{},{}", e.config, r.tau_max, e.period);
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "tau_max={} raw={} mod_negation={} mod_negation_and_automorphism={}\n",
                r.tau_max, r.count_raw, r.count_mod_negation, r.count_mod_negation_and_automorphism
            );
            for e in &r.extremal {
                let _ = writeln!(s, "{} period={}", e.config, e.period);
            }
            s
        }
    })
}

fn cmd_conjecture(spec: &RunSpec) -> CmdResult {
    let n = spec.n.expect("validated");
    let report = verify_conjecture(n, &spec.search_options())?;
    if report.properties.violations() > 0 {
        return Err(Failure::Internal(format!("property violations: {:?}", report.properties)));
    }
    let out = match spec.format {
        Format::Json => report.to_json(),
        Format::Csv => report.records_csv(),
        Format::Text => report.summary(),
    };
    match report.verdict {
        Verdict::Pass => Ok(out),
        Verdict::Fail => Err(Failure::Claim(out)),
    }
}

fn cmd_generate(spec: &RunSpec) -> CmdResult {
    let n = spec.n.expect("validated");
    let trees = algorithm1_generate(n)?;
    let mut out = String::new();
    let mut mismatches = Vec::new();
    let mut rows = Vec::new();
    for (j, (g, x)) in trees.iter().enumerate() {
        let tau = if spec.verify {
            let traj = run_trajectory(g, x, 2, default_max_steps(g)).map_err(internal)?;
            if traj.tau != n - 3 {
                mismatches.push(format!("T_{}: tau={} expected {}", j + 1, traj.tau, n - 3));
            }
            Some(traj.tau)
        } else {
            None
        };
        match spec.format {
            Format::Json => rows.push(json!({
                "index": j + 1,
                "edges": g.one_based_edges(),
                "config": x.to_string(),
                "tau": tau,
            })),
            Format::Csv => {
                if j == 0 {
                    out.push_str("index,edges,config,tau\n");
                }
                let tau = tau.map_or_else(String::new, |t| t.to_string());
                let _ = writeln!(out, "{},{},{},{}", j + 1, g.edge_string(), x, tau);
            }
            Format::Text => {
                let _ = writeln!(out, "# T_{}", j + 1);
                out.push_str(&g.to_edge_list());
                let _ = write!(out, "# config {x}");
                if let Some(t) = tau {
                    let _ = write!(out, " tau={t}");
                }
                out.push('\n');
            }
        }
    }
    if spec.format == Format::Json {
        out = serde_json::to_string_pretty(&rows).map_err(internal)? + "\n";
    }
    if mismatches.is_empty() {
        Ok(out)
    } else {
        Err(Failure::Claim(out + &mismatches.join("\n") + "\n"))
    }
}

fn cmd_validate_alg1(spec: &RunSpec) -> CmdResult {
    let n = spec.n.expect("validated");
    let v = cross_validate_algorithm1(n, &spec.search_options())?;
    let out = match spec.format {
        Format::Json | Format::Csv => serde_json::to_string_pretty(&v).map_err(internal)? + "\n",
        Format::Text => {
            let mut s = format!(
                "n={} pass={} tau_ok={} trees_equal={} configs_match={} configs_match_mod_negation={}\n",
                v.n, v.pass, v.all_reach_n_minus_3, v.tree_sets_equal, v.configs_match, v.configs_match_mod_negation
            );
            for f in &v.failures {
                let _ = writeln!(s, "  {f}");
            }
            s
        }
    };
    if v.pass {
        Ok(out)
    } else {
        Err(Failure::Claim(out))
    }
}

fn main() -> ExitCode {
    let spec = RunSpec::parse();
    let result = spec.validate().and_then(|()| match spec.command {
        Command::Simulate => cmd_simulate(&spec),
        Command::Bounds => cmd_bounds(&spec),
        Command::EnergyTrace => cmd_energy_trace(&spec),
        Command::Search => cmd_search(&spec),
        Command::Conjecture => cmd_conjecture(&spec),
        Command::Generate => cmd_generate(&spec),
        Command::ValidateAlg1 => cmd_validate_alg1(&spec),
    });
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Claim(out)) => {
            print!("{out}");
            eprintln!("claim not reproduced");
            ExitCode::from(3)
        }
    }
}
