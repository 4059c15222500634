//! Subcommand implementations. Each returns whether every diagnostic it ran
//! passed; errors propagate.

use std::path::{Path, PathBuf};

use effham::diagnose::{
    compare_flimit, discounted_consistency, evenness_defect, flat_part, levelset_convexity,
    quasiconvexity_check, DiagnosticReport, DiscountReport,
};
use effham::effective::{sweep, sweep_plan, EffectiveTable};
use effham::hamlib::{decompose_profile, validate_hypotheses};
use effham::minmax::compose_inductive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{LoadedConfig, Pipeline, RunConfig};
use crate::contour::contours;
use crate::error::{io_err, CliError, Result};
use crate::table_io::{load_table, save_table, TableFile};

/// Diagnostics selectable with `--check`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Evenness,
    Quasiconvexity,
    Levelset,
    Flatpart,
    Flimit,
}

pub const DEFAULT_CHECKS: &[Check] = &[Check::Evenness, Check::Quasiconvexity];

/// A table produced or loaded by a command, with its label and scale.
#[derive(Debug, Clone)]
pub struct NamedTable {
    pub name: String,
    pub scale: Option<f64>,
    pub table: EffectiveTable,
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n").map_err(io_err(path))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))
}

fn out_dir(cfg: &RunConfig, flag: Option<&Path>) -> PathBuf {
    flag.map(Path::to_path_buf)
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn save(dir: &Path, loaded: &LoadedConfig, named: &NamedTable, pipeline: &str) -> Result<PathBuf> {
    let path = dir.join(format!("{}.csv", named.name));
    let mut file = TableFile::new(named.table.clone())
        .with("config_hash", &loaded.hash)
        .with("pipeline", pipeline);
    if let Some(s) = named.scale {
        file = file.with("scale", format!("{s:?}"));
    }
    save_table(&path, &file)?;
    Ok(path)
}

/// Direct, composed and per-piece tables for every configured scale.
pub fn compute_tables(loaded: &LoadedConfig, dir: Option<&Path>) -> Result<Vec<NamedTable>> {
    let cfg = &loaded.config;
    let ham = cfg.hamiltonian()?;
    let (grid, pgrid) = (cfg.torus()?, cfg.p_grid()?);
    let plan = if cfg.has(Pipeline::Composed) || cfg.has(Pipeline::Duality) {
        let profile = cfg
            .profile()?
            .ok_or_else(|| CliError::Config("composition needs a radial Hamiltonian".into()))?;
        Some(decompose_profile(&profile, cfg.relaxed())?)
    } else {
        None
    };
    let mut out = Vec::new();
    for &s in &cfg.scales {
        let pot = cfg.potential(s)?;
        let mut produced: Vec<(NamedTable, &str)> = Vec::new();
        if cfg.has(Pipeline::Direct) || plan.is_none() {
            let table = sweep(&ham, &pot, &pgrid, grid, &cfg.solver)?;
            produced.push((NamedTable { name: format!("direct_S{s}"), scale: Some(s), table }, "direct"));
        }
        if let Some(plan) = &plan {
            let pieces = sweep_plan(plan, &pot, &pgrid, grid, &cfg.solver)?;
            if cfg.has(Pipeline::Duality) {
                for (j, t) in pieces.iter().enumerate() {
                    let name = format!("piece{j}_S{s}");
                    produced.push((NamedTable { name, scale: Some(s), table: t.clone() }, "duality"));
                }
            }
            if cfg.has(Pipeline::Composed) {
                let table = compose_inductive(plan, &pieces, &pot.extrema(&grid))?;
                produced.push((NamedTable { name: format!("composed_S{s}"), scale: Some(s), table }, "composed"));
            }
        }
        for (named, pipeline) in produced {
            if let Some(dir) = dir {
                save(dir, loaded, &named, pipeline)?;
            }
            out.push(named);
        }
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct CheckResult {
    table: String,
    scale: Option<f64>,
    check: Check,
    level: Option<f64>,
    report: Value,
}

fn run_check(
    check: Check,
    named: &NamedTable,
    cfg: Option<&RunConfig>,
    levels: &[f64],
    out: &mut Vec<(CheckResult, bool)>,
) -> Result<()> {
    let diag = cfg.map(|c| c.diagnostics.clone()).unwrap_or_default();
    let tol = diag.level_tolerance;
    let t = &named.table;
    let mut push = |level: Option<f64>, report: &DiagnosticReport, full: Value| {
        out.push((
            CheckResult {
                table: named.name.clone(),
                scale: named.scale,
                check,
                level,
                report: full,
            },
            report.pass,
        ));
    };
    match check {
        Check::Evenness => {
            let r = evenness_defect(t, tol)?;
            push(None, &r, serde_json::to_value(&r)?);
        }
        Check::Quasiconvexity => {
            let r = quasiconvexity_check(t, tol);
            push(None, &r, serde_json::to_value(&r)?);
        }
        Check::Levelset => {
            if levels.is_empty() {
                return Err(CliError::Config("--check levelset needs --levels".into()));
            }
            for &mu in levels {
                let r = levelset_convexity(t, mu, tol);
                push(Some(mu), &r, serde_json::to_value(&r)?);
            }
        }
        Check::Flatpart => {
            let r = flat_part(t, diag.flat_tolerance);
            // presence of a flat part is information, not a failure
            let mut shown = r.report.clone();
            shown.pass = true;
            push(None, &shown, serde_json::to_value(&r)?);
        }
        Check::Flimit => unreachable!("handled across tables"),
    }
    Ok(())
}

/// Runs `checks` on `tables`; returns the JSON results and the overall verdict.
pub fn diagnose_tables(
    tables: &[NamedTable],
    checks: &[Check],
    cfg: Option<&RunConfig>,
    levels: &[f64],
) -> Result<(Value, bool)> {
    let mut results = Vec::new();
    for named in tables {
        for &check in checks.iter().filter(|c| **c != Check::Flimit) {
            run_check(check, named, cfg, levels, &mut results)?;
        }
    }
    let mut all = results.iter().all(|(_, pass)| *pass);
    let mut value = json!({ "checks": results.into_iter().map(|(r, _)| r).collect::<Vec<_>>() });
    if checks.contains(&Check::Flimit) {
        let cfg = cfg.ok_or_else(|| CliError::Config("--check flimit needs --config".into()))?;
        let series: Vec<(f64, EffectiveTable)> = tables
            .iter()
            .filter(|t| t.name.starts_with("direct") || t.scale.is_some())
            .map(|t| {
                t.scale
                    .map(|s| (s, t.table.clone()))
                    .ok_or_else(|| CliError::Table(format!("{} has no scale", t.name)))
            })
            .collect::<Result<_>>()?;
        let ham = cfg.hamiltonian()?;
        let pot = cfg.potential(cfg.scales[0])?;
        let r = compare_flimit(&ham, &pot, &series, cfg.diagnostics.eps_num)?;
        all &= r.report.pass;
        value["flimit"] = serde_json::to_value(&r)?;
    }
    value["pass"] = Value::Bool(all);
    Ok((value, all))
}

pub fn sweep_command(loaded: &LoadedConfig, out: Option<&Path>) -> Result<bool> {
    let cfg = &loaded.config;
    let dir = out_dir(cfg, out);
    ensure_dir(&dir)?;
    let tables = compute_tables(loaded, Some(&dir))?;
    let summary: Vec<Value> = tables
        .iter()
        .map(|t| {
            json!({
                "table": t.name,
                "scale": t.scale,
                "converged": t.table.converged_count(),
                "nodes": t.table.len(),
                "min": t.table.min_value(),
                "max": t.table.max_value(),
            })
        })
        .collect();
    write_json(&dir.join("summary.json"), &json!({ "config_hash": loaded.hash, "tables": summary }))?;
    for t in &tables {
        println!(
            "{}: {}/{} converged, range [{:.6}, {:.6}]",
            t.name,
            t.table.converged_count(),
            t.table.len(),
            t.table.min_value(),
            t.table.max_value()
        );
    }
    let mut pass = true;
    if cfg.has(Pipeline::Diagnostics) {
        let (value, ok) = diagnose_tables(&tables, DEFAULT_CHECKS, Some(cfg), &[])?;
        write_json(&dir.join("diagnostics.json"), &value)?;
        println!("diagnostics: {}", if ok { "pass" } else { "FAIL" });
        pass &= ok;
    }
    if cfg.has(Pipeline::Discount) {
        let ok = discount_command(loaded, None, Some(&dir))?;
        pass &= ok;
    }
    Ok(pass)
}

/// Prints the hypothesis report and, when the profile admits one, the
/// decomposition. Returns `false` if the profile cannot be decomposed.
pub fn decompose_command(loaded: &LoadedConfig, out: Option<&Path>) -> Result<bool> {
    let cfg = &loaded.config;
    let profile = cfg
        .profile()?
        .ok_or_else(|| CliError::Config("decompose needs a radial Hamiltonian".into()))?;
    let report = validate_hypotheses(&profile);
    let (plan, ok) = match decompose_profile(&profile, cfg.relaxed()) {
        Ok(plan) => (serde_json::to_value(&plan)?, true),
        Err(e) => (json!({ "error": e.to_string() }), false),
    };
    let value = json!({ "hypotheses": report, "class": format!("{:?}", report.class()), "plan": plan });
    println!("{}", serde_json::to_string_pretty(&value)?);
    if let Some(dir) = out.map(Path::to_path_buf).or_else(|| cfg.output.clone()) {
        ensure_dir(&dir)?;
        write_json(&dir.join("decomposition.json"), &value)?;
    }
    Ok(ok)
}

pub fn diagnose_command(
    loaded: Option<&LoadedConfig>,
    table_paths: &[PathBuf],
    checks: &[Check],
    levels: &[f64],
    out: Option<&Path>,
) -> Result<bool> {
    let cfg = loaded.map(|l| &l.config);
    let tables = if table_paths.is_empty() {
        let loaded = loaded.ok_or_else(|| CliError::Config("diagnose needs --config or --table".into()))?;
        compute_tables(loaded, None)?
    } else {
        table_paths
            .iter()
            .map(|p| {
                let file = load_table(p)?;
                let scale = file.metadata.get("scale").and_then(|s| s.parse().ok());
                let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                Ok(NamedTable { name, scale, table: file.table })
            })
            .collect::<Result<_>>()?
    };
    let checks = if checks.is_empty() { DEFAULT_CHECKS } else { checks };
    let (value, pass) = diagnose_tables(&tables, checks, cfg, levels)?;
    println!("{}", serde_json::to_string_pretty(&value)?);
    if let Some(dir) = out.map(Path::to_path_buf).or_else(|| cfg.and_then(|c| c.output.clone())) {
        ensure_dir(&dir)?;
        write_json(&dir.join("diagnostics.json"), &value)?;
    }
    Ok(pass)
}

pub fn discount_command(loaded: &LoadedConfig, lambdas: Option<&[f64]>, out: Option<&Path>) -> Result<bool> {
    let cfg = &loaded.config;
    let ham = cfg.hamiltonian()?;
    let grid = cfg.torus()?;
    let p = cfg.diagnostics.p.clone().unwrap_or_else(|| vec![0.0; cfg.dim()]);
    let lambdas = lambdas.unwrap_or(&cfg.diagnostics.lambdas);
    let mut reports: Vec<(f64, DiscountReport)> = Vec::new();
    for &s in &cfg.scales {
        let pot = cfg.potential(s)?;
        let r = discounted_consistency(&ham, &pot, &p, lambdas, grid, &cfg.solver, cfg.diagnostics.discount_tolerance)?;
        println!(
            "S={s}: H(p)={:.6} defects={:?} {}",
            r.hbar,
            r.defects,
            if r.report.pass { "pass" } else { "FAIL" }
        );
        reports.push((s, r));
    }
    let pass = reports.iter().all(|(_, r)| r.report.pass);
    let value = json!({
        "p": p,
        "runs": reports.iter().map(|(s, r)| json!({ "scale": s, "result": r })).collect::<Vec<_>>(),
        "pass": pass,
    });
    if let Some(dir) = out.map(Path::to_path_buf).or_else(|| cfg.output.clone()) {
        ensure_dir(&dir)?;
        write_json(&dir.join("discount.json"), &value)?;
    }
    Ok(pass)
}

pub fn contour_command(table: &Path, levels: &[f64], out: Option<&Path>) -> Result<()> {
    let file = load_table(table)?;
    let sets = contours(&file.table, levels)?;
    let text = serde_json::to_string_pretty(&sets)?;
    match out {
        Some(path) => {
            let path = if path.is_dir() { path.join("contours.json") } else { path.to_path_buf() };
            std::fs::write(&path, text + "\n").map_err(io_err(path))?;
        }
        None => println!("{text}"),
    }
    Ok(())
}
