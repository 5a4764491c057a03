//! Subcommands and their on-disk artifacts.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use skwv::diagnostics::{
    ball_cone_defect, charge_series, cone_decay_series, energy_series, flux_identity_defect,
};
use skwv::model::positivity_term;
use skwv::multiplier::ALL_PRESETS;
use skwv::soliton::{find_soliton_with, ode_residual};
use skwv::{
    concentration_series, evolve, gh_bounds_report, make_grid, multiplier_balance, DiagnosticSeries,
    EvolveOptions, EvolveReport, Singularity, SpacetimeRecord,
};

use crate::config::RunConfig;
use crate::snapshot::{load_record, save_record, snapshot_paths};
use crate::{CliError, EXIT_OK, EXIT_SINGULARITY, EXIT_VERIFY_FAILED};

/// Convergence ratios below this fail `converge` and `verify --refine`.
pub const MIN_RATIO: f64 = 3.5;

/// Residuals below this fraction of their scale count as exact.
const ROUND_OFF: f64 = 1e-12;

pub const FLUX_CONVENTION: &str = "tau = vertex - t; E(T) = energy of the ball r <= T at tau = T; \
     F(t0,t1) >= 0 is the flux through r = tau, t0 <= tau <= t1; E(t1) - E(t0) = F(t0,t1)";

#[derive(Debug, Parser)]
#[command(name = "skwv", version, about = "Equivariant wave-map and Adkins-Nappi evolutions")]
pub struct Cli {
    #[command(flatten)]
    pub flags: Flags,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Evolve the configured data; write snapshots, series and a summary.
    Evolve,
    /// Shoot for the static soliton; write its profile and energy.
    Static,
    /// Check the energy, flux and multiplier identities on a run or a loaded record.
    Verify,
    /// Local-energy series toward the vertex.
    Concentrate,
    /// Repeat the identity residuals on refined grids and report ratios.
    Converge,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Evolve => "evolve",
            Command::Static => "static",
            Command::Verify => "verify",
            Command::Concentrate => "concentrate",
            Command::Converge => "converge",
        }
    }
}

#[derive(Debug, Default, Args)]
pub struct Flags {
    /// key = value configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory (default: $SKWV_OUT, else ./skwv-out).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub n_cells: Option<usize>,
    #[arg(long, global = true)]
    pub r_max: Option<f64>,
    #[arg(long, global = true)]
    pub cfl: Option<f64>,
    #[arg(long, global = true)]
    pub t_end: Option<f64>,
    /// wavemap, adkins-nappi or linear.
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// zero, pulse, stereographic, soliton, soliton-perturbed or shatah.
    #[arg(long, global = true)]
    pub data: Option<String>,
    /// Cone vertex in simulation time, or `auto` for t_end.
    #[arg(long, global = true)]
    pub vertex: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory of snapshot files to analyse instead of running.
    #[arg(long, global = true, value_name = "DIR")]
    pub load: Option<PathBuf>,
    /// Also run at refined resolution and report convergence ratios.
    #[arg(long, global = true)]
    pub refine: bool,
    /// Any other config key, e.g. --set gradient_threshold=20.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

/// Defaults, then `SKWV_OUT`, then the config file, then `--set`, then the
/// named flags.
pub fn resolve_config(flags: &Flags) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::from_env();
    if let Some(path) = &flags.config {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        cfg.apply_file(&text)?;
    }
    for kv in &flags.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got '{kv}'")))?;
        cfg.set(k.trim(), v)?;
    }
    let mut named: Vec<(&str, String)> = Vec::new();
    if let Some(v) = &flags.out {
        named.push(("out", v.display().to_string()));
    }
    if let Some(v) = flags.n_cells {
        named.push(("n_cells", v.to_string()));
    }
    if let Some(v) = flags.r_max {
        named.push(("r_max", v.to_string()));
    }
    if let Some(v) = flags.cfl {
        named.push(("cfl", v.to_string()));
    }
    if let Some(v) = flags.t_end {
        named.push(("t_end", v.to_string()));
    }
    if let Some(v) = &flags.model {
        named.push(("model", v.clone()));
    }
    if let Some(v) = &flags.data {
        named.push(("data", v.clone()));
    }
    if let Some(v) = &flags.vertex {
        named.push(("vertex", v.clone()));
    }
    if let Some(v) = flags.seed {
        named.push(("seed", v.to_string()));
    }
    if let Some(v) = &flags.load {
        named.push(("load", v.display().to_string()));
    }
    if flags.refine {
        named.push(("refine", "true".into()));
    }
    for (k, v) in named {
        cfg.set(k, &v)?;
    }
    Ok(cfg)
}

pub fn run(cli: &Cli) -> Result<u8, CliError> {
    let cfg = resolve_config(&cli.flags)?;
    match cli.command {
        Command::Evolve => cmd_evolve(&cfg),
        Command::Static => cmd_static(&cfg),
        Command::Verify => cmd_verify(&cfg),
        Command::Concentrate => cmd_concentrate(&cfg),
        Command::Converge => cmd_converge(&cfg),
    }
}

// ---------------------------------------------------------------------------
// shared plumbing

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Content hash of everything that determines a command's output: the
/// configuration (output directory excluded) and any loaded snapshot files.
/// Hashed as a git blob, `sha256("blob <len>\0" + content)`.
pub fn input_hash(cfg: &RunConfig) -> Result<String, CliError> {
    let mut content: String = cfg
        .pairs()
        .into_iter()
        .filter(|(k, _)| k != "out")
        .map(|(k, v)| format!("{k} = {v}\n"))
        .collect();
    if let Some(dir) = &cfg.load {
        for path in snapshot_paths(dir)? {
            let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            content += &format!("snapshot {name} {}\n", sha256_hex(&fs::read(&path)?));
        }
    }
    let mut blob = format!("blob {}\0", content.len()).into_bytes();
    blob.extend_from_slice(content.as_bytes());
    Ok(sha256_hex(&blob))
}

fn write_file(dir: &Path, name: &str, text: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), text)?;
    Ok(())
}

fn write_summary(cfg: &RunConfig, command: Command, extra: Map<String, Value>) -> Result<(), CliError> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command.name()));
    m.insert("config".into(), json!(cfg.pairs()));
    m.insert("input_hash".into(), json!(input_hash(cfg)?));
    m.extend(extra);
    let text = serde_json::to_string_pretty(&Value::Object(m)).expect("json values serialise");
    write_file(&cfg.out, "summary.json", &(text + "\n"))
}

fn series_json(s: &DiagnosticSeries) -> Value {
    let (t, v): (Vec<f64>, Vec<f64>) = s.points.iter().copied().unzip();
    json!({ "param": t, "value": v })
}

fn singularity_json(s: &Option<Singularity>) -> Value {
    match s {
        None => Value::Null,
        Some(s) => json!({
            "time": s.time,
            "radius": s.radius,
            "trigger": s.trigger.as_str(),
            "value": s.value,
        }),
    }
}

fn simulate(cfg: &RunConfig, n_cells: usize) -> Result<(EvolveReport, SpacetimeRecord), CliError> {
    let grid = make_grid(cfg.r_max, n_cells)?;
    let s0 = cfg.initial_data().build(grid, cfg.model)?;
    let opts = EvolveOptions::new(cfg.t_end)
        .cfl(cfg.cfl)
        .record_every(cfg.record_every)
        .thresholds(cfg.thresholds());
    Ok(evolve(&s0, &opts)?)
}

fn report_singularity(s: &Singularity) {
    eprintln!(
        "singularity: {} trigger at t = {} r = {} (value {})",
        s.trigger.as_str(),
        s.time,
        s.radius,
        s.value
    );
}

/// A fresh run or the loaded record (without a report), and the vertex. An
/// `auto` vertex is `t_end` for runs and the last recorded time for loads.
fn obtain_record(cfg: &RunConfig) -> Result<(Option<EvolveReport>, SpacetimeRecord, f64), CliError> {
    match &cfg.load {
        Some(dir) => {
            let rec = load_record(dir)?;
            let vertex = cfg.vertex.unwrap_or(rec.last_time());
            Ok((None, rec, vertex))
        }
        None => {
            let (rep, rec) = simulate(cfg, cfg.n_cells)?;
            Ok((Some(rep), rec, cfg.vertex()))
        }
    }
}

// ---------------------------------------------------------------------------
// evolve

pub fn cmd_evolve(cfg: &RunConfig) -> Result<u8, CliError> {
    if cfg.load.is_some() {
        return Err(CliError::Usage("evolve starts from initial data; --load is not accepted".into()));
    }
    let (rep, rec) = simulate(cfg, cfg.n_cells)?;
    save_record(&rec, &cfg.out.join("snapshots"))?;
    let energy = energy_series(&rec);
    let charge = charge_series(&rec);
    write_file(&cfg.out, "energy.csv", &energy.to_csv())?;
    write_file(&cfg.out, "charge.csv", &charge.to_csv())?;
    let mut m = Map::new();
    m.insert("steps".into(), json!(rep.steps));
    m.insert("dt".into(), json!(rep.dt));
    m.insert("final_time".into(), json!(rep.final_state.t));
    m.insert("snapshots".into(), json!(rec.len()));
    m.insert("singularity".into(), singularity_json(&rep.singularity));
    m.insert("total_energy".into(), series_json(&energy));
    m.insert("charge".into(), series_json(&charge));
    m.insert("flux_convention".into(), json!(FLUX_CONVENTION));
    write_summary(cfg, Command::Evolve, m)?;
    println!(
        "evolve: {} steps, dt = {:.6e}, {} snapshots in {}",
        rep.steps,
        rep.dt,
        rec.len(),
        cfg.out.join("snapshots").display()
    );
    match &rep.singularity {
        Some(s) => {
            report_singularity(s);
            Ok(EXIT_SINGULARITY)
        }
        None => Ok(EXIT_OK),
    }
}

// ---------------------------------------------------------------------------
// static

pub fn cmd_static(cfg: &RunConfig) -> Result<u8, CliError> {
    let levels = if cfg.refine { cfg.levels.max(2) } else { 1 };
    let mut runs = Vec::new();
    for k in 0..levels {
        let dr = cfg.static_dr / f64::from(1u32 << k);
        let (p, iters) = find_soliton_with(cfg.model, cfg.a_lo, cfg.a_hi, cfg.static_r_max, dr, cfg.tol_a)?;
        runs.push((dr, p, iters));
    }
    let (_, p, iters) = &runs[0];
    write_file(&cfg.out, "soliton.csv", &p.to_csv())?;
    let mut m = Map::new();
    m.insert("slope".into(), json!(p.slope));
    m.insert("c3".into(), json!(p.c3));
    m.insert("bisections".into(), json!(iters));
    m.insert("r_end".into(), json!(p.r_end()));
    m.insert("gap".into(), json!(p.gap));
    m.insert("energy_midpoint".into(), json!(p.energy_midpoint()));
    m.insert("energy_simpson".into(), json!(p.energy_simpson()));
    m.insert("ode_residual".into(), json!(ode_residual(p)));
    println!("static: slope {:.12} after {iters} bisections, energy {:.10}", p.slope, p.energy_simpson());
    if runs.len() > 1 {
        let table: Vec<Value> = runs
            .iter()
            .map(|(dr, p, _)| json!({ "dr": dr, "slope": p.slope, "ode_residual": ode_residual(p) }))
            .collect();
        let diffs: Vec<f64> = runs.windows(2).map(|w| (w[1].1.slope - w[0].1.slope).abs()).collect();
        let ratios: Vec<f64> = diffs.windows(2).map(|d| d[0] / d[1]).collect();
        for (dr, p, _) in &runs {
            println!("  dr = {dr:<10} slope {:.12} ode residual {:.3e}", p.slope, ode_residual(p));
        }
        let list = |xs: &[f64], f: fn(&f64) -> String| xs.iter().map(f).collect::<Vec<_>>().join(", ");
        println!(
            "  slope differences [{}] ratios [{}]",
            list(&diffs, |x| format!("{x:.3e}")),
            list(&ratios, |x| format!("{x:.2}"))
        );
        m.insert("refinement".into(), json!(table));
        m.insert("slope_differences".into(), json!(diffs));
        m.insert("slope_ratios".into(), json!(ratios));
    }
    write_summary(cfg, Command::Static, m)?;
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// verify

/// One line of the verification table.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    /// `value >= limit` passes instead of `value <= limit`.
    pub at_least: bool,
}

impl Check {
    fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Check { name: name.into(), value, limit, at_least: false }
    }

    fn at_least(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Check { name: name.into(), value, limit, at_least: true }
    }

    pub fn pass(&self) -> bool {
        if self.at_least {
            self.value >= self.limit
        } else {
            self.value <= self.limit
        }
    }
}

/// Residuals of every identity on `rec`, each with its own scale.
#[derive(Debug, Clone)]
struct Residual {
    name: String,
    value: f64,
    scale: f64,
}

fn identity_residuals(rec: &SpacetimeRecord, cfg: &RunConfig, vertex: f64) -> Result<Vec<Residual>, CliError> {
    let (t0, t1) = (cfg.t0, cfg.t1);
    let e = energy_series(rec).values();
    let e0 = e[0];
    let res = |name: &str, value: f64, scale: f64| Residual { name: name.into(), value, scale };
    let local_scale = skwv::local_energy(rec, vertex, t1)?;
    std::thread::scope(|s| {
        let energy = s.spawn(|| {
            let drift = e.iter().map(|x| (x - e0).abs()).fold(0.0, f64::max);
            Ok::<_, CliError>(vec![res("energy drift", drift, e0)])
        });
        let flux = s.spawn(|| {
            let f = flux_identity_defect(rec, vertex, t0, t1)?.abs();
            let b = ball_cone_defect(rec, vertex, t0)?.abs().max(ball_cone_defect(rec, vertex, t1)?.abs());
            Ok::<_, CliError>(vec![res("flux identity", f, local_scale), res("ball = cone", b, local_scale)])
        });
        let presets: Vec<_> = ALL_PRESETS
            .into_iter()
            .map(|m| {
                s.spawn(move || {
                    let b = multiplier_balance(rec, vertex, t0, t1, m)?;
                    Ok::<_, CliError>(res(&format!("multiplier {}", m.label()), b.residual(), b.scale()))
                })
            })
            .collect();
        let mut out = energy.join().expect("energy check panicked")?;
        out.extend(flux.join().expect("flux check panicked")?);
        for h in presets {
            out.push(h.join().expect("multiplier check panicked")?);
        }
        Ok(out)
    })
}

fn pointwise_checks(rec: &SpacetimeRecord, cfg: &RunConfig, vertex: f64) -> Vec<Check> {
    std::thread::scope(|s| {
        let gh: Vec<_> = ALL_PRESETS
            .into_iter()
            .enumerate()
            .map(|(k, m)| {
                s.spawn(move || {
                    let r = gh_bounds_report(rec, vertex, m, cfg.samples, cfg.seed.wrapping_add(k as u64));
                    Check::at_most(format!("bounds {} ({} samples)", m.label(), r.checked), r.violations as f64, 0.0)
                })
            })
            .collect();
        let pos = s.spawn(|| {
            let min = rec
                .snapshots()
                .iter()
                .flat_map(|snap| snap.u.iter().map(|&u| positivity_term(u)))
                .fold(f64::INFINITY, f64::min);
            Check::at_least("positivity minimum", min, 0.0)
        });
        let charge = s.spawn(|| {
            let q = charge_series(rec).values();
            let dev = q.iter().map(|x| (x - q[0]).abs()).fold(0.0, f64::max);
            Check::at_most("charge conservation", dev, cfg.verify_tol)
        });
        let mut out: Vec<Check> = gh.into_iter().map(|h| h.join().expect("bounds check panicked")).collect();
        out.push(pos.join().expect("positivity check panicked"));
        out.push(charge.join().expect("charge check panicked"));
        out
    })
}

fn trivial(r: &Residual) -> bool {
    r.value <= ROUND_OFF * r.scale
}

fn convergence_checks(coarse: &[Residual], fine: &[Residual]) -> Vec<Check> {
    coarse
        .iter()
        .zip(fine)
        .map(|(c, f)| {
            let ratio = if trivial(c) && trivial(f) { f64::INFINITY } else { c.value / f.value };
            Check::at_least(format!("ratio {}", c.name), ratio, MIN_RATIO)
        })
        .collect()
}

/// CSV field, quoted when it holds a comma or a quote.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Check {
    fn status(&self) -> &'static str {
        if self.pass() {
            "pass"
        } else {
            "fail"
        }
    }

    fn bound(&self) -> String {
        format!("{}{:.6e}", if self.at_least { ">=" } else { "<=" }, self.limit)
    }
}

fn check_table(checks: &[Check]) -> String {
    let mut s = String::from("check,value,limit,status\n");
    for c in checks {
        s += &format!("{},{:.6e},{},{}\n", csv_field(&c.name), c.value, c.bound(), c.status());
    }
    s
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<u8, CliError> {
    if cfg.refine && cfg.load.is_some() {
        return Err(CliError::Usage("--refine needs a fresh run, not --load".into()));
    }
    let (rep, rec, vertex) = obtain_record(cfg)?;
    if let Some(s) = rep.as_ref().and_then(|r| r.singularity.as_ref()) {
        report_singularity(s);
        return Ok(EXIT_SINGULARITY);
    }
    let residuals = identity_residuals(&rec, cfg, vertex)?;
    let mut checks: Vec<Check> = residuals
        .iter()
        .map(|r| Check::at_most(r.name.clone(), r.value, cfg.verify_tol * r.scale))
        .collect();
    checks.extend(pointwise_checks(&rec, cfg, vertex));
    if cfg.refine {
        let (rep2, rec2) = simulate(cfg, 2 * cfg.n_cells)?;
        if let Some(s) = &rep2.singularity {
            report_singularity(s);
            return Ok(EXIT_SINGULARITY);
        }
        checks.extend(convergence_checks(&residuals, &identity_residuals(&rec2, cfg, vertex)?));
    }
    for c in &checks {
        println!("{:<4} {:<42} {:>13.6e}  {}", c.status().to_uppercase(), c.name, c.value, c.bound());
    }
    write_file(&cfg.out, "verify.csv", &check_table(&checks))?;
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass()).map(|c| c.name.as_str()).collect();
    let mut m = Map::new();
    m.insert("checks".into(), json!(checks.len()));
    m.insert("failed".into(), json!(failed));
    m.insert("flux_convention".into(), json!(FLUX_CONVENTION));
    write_summary(cfg, Command::Verify, m)?;
    Ok(if failed.is_empty() { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

// ---------------------------------------------------------------------------
// concentrate

pub fn cmd_concentrate(cfg: &RunConfig) -> Result<u8, CliError> {
    let (rep, rec, vertex) = obtain_record(cfg)?;
    let local = concentration_series(&rec, vertex, cfg.series_points)?;
    let cone = cone_decay_series(&rec, vertex, cfg.series_points)?;
    write_file(&cfg.out, "concentration.csv", &local.to_csv())?;
    write_file(&cfg.out, "cone_energy.csv", &cone.to_csv())?;
    let last = |s: &DiagnosticSeries| s.points.last().map_or(0.0, |p| p.1);
    println!(
        "concentrate: vertex {vertex}; E(T) from {:.6e} to {:.6e}; cone energy from {:.6e} to {:.6e}",
        local.points[0].1,
        last(&local),
        cone.points[0].1,
        last(&cone)
    );
    let mut m = Map::new();
    m.insert("vertex".into(), json!(vertex));
    m.insert("singularity".into(), singularity_json(&rep.and_then(|r| r.singularity)));
    m.insert("local_energy".into(), series_json(&local));
    m.insert("cone_weighted_energy".into(), series_json(&cone));
    m.insert("local_energy_monotone".into(), json!(local.is_monotone()));
    m.insert("flux_convention".into(), json!(FLUX_CONVENTION));
    write_summary(cfg, Command::Concentrate, m)?;
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// converge

pub fn cmd_converge(cfg: &RunConfig) -> Result<u8, CliError> {
    if cfg.load.is_some() {
        return Err(CliError::Usage("converge runs its own grids; --load is not accepted".into()));
    }
    let levels = cfg.levels.max(2);
    let sizes: Vec<usize> = (0..levels).map(|k| cfg.n_cells << k).collect();
    let runs = std::thread::scope(|s| {
        let handles: Vec<_> = sizes
            .iter()
            .map(|&n| {
                s.spawn(move || -> Result<Result<Vec<Residual>, Singularity>, CliError> {
                    let (rep, rec) = simulate(cfg, n)?;
                    match rep.singularity {
                        Some(sing) => Ok(Err(sing)),
                        None => Ok(Ok(identity_residuals(&rec, cfg, cfg.vertex())?)),
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("refinement level panicked"))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let mut table = Vec::new();
    for run in runs {
        match run {
            Ok(r) => table.push(r),
            Err(s) => {
                report_singularity(&s);
                return Ok(EXIT_SINGULARITY);
            }
        }
    }
    let mut csv = String::from("quantity,n_cells,value,ratio\n");
    let mut failed = Vec::new();
    let mut rows = Vec::new();
    for q in 0..table[0].len() {
        let name = &table[0][q].name;
        let values: Vec<f64> = table.iter().map(|r| r[q].value).collect();
        let mut line = format!("{name:<28}");
        for (k, &n) in sizes.iter().enumerate() {
            let ratio = if k == 0 {
                None
            } else {
                let c = convergence_checks(&[table[k - 1][q].clone()], &[table[k][q].clone()]);
                if !c[0].pass() {
                    failed.push(format!("{name} n={n}"));
                }
                Some(c[0].value)
            };
            csv += &format!(
                "{},{n},{:.6e},{}\n",
                csv_field(name),
                values[k],
                ratio.map_or(String::new(), |r| format!("{r:.4}"))
            );
            line += &format!(" {:.3e}", values[k]);
            if let Some(r) = ratio {
                line += &format!(" ({r:.2})");
            }
        }
        println!("{line}");
        rows.push(json!({ "quantity": name, "n_cells": sizes, "values": values }));
    }
    write_file(&cfg.out, "converge.csv", &csv)?;
    let mut m = Map::new();
    m.insert("table".into(), json!(rows));
    m.insert("min_ratio".into(), json!(MIN_RATIO));
    m.insert("failed".into(), json!(failed));
    write_summary(cfg, Command::Converge, m)?;
    Ok(if failed.is_empty() { EXIT_OK } else { EXIT_VERIFY_FAILED })
}
