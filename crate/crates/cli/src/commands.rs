use std::fs::File;
use std::io::{self, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use rbf_adapt::adaptive::{run_adaptive_1d, run_adaptive_2d};
use rbf_adapt::mple::scan_cost;
use rbf_adapt::{
    linspace, preset, AdaptiveConfig, KernelFamily, NodeSet2D, NodeStructure, PointSet, Preset, RunResult,
    TargetFunction,
};

use crate::args::{parse_kernel, parse_target, resolve_n0, RunArgs, ScanArgs, TableArgs};
use crate::error::{CliError, Result, EXIT_NOT_CONVERGED, EXIT_OK};
use crate::report::{round_millis, RunReport};

/// Environment variable capping the worker threads of `table`.
pub const THREADS_ENV: &str = "RBF_ADAPT_THREADS";

/// Runs one adaptive experiment, timing only the adaptive loop.
pub fn run_experiment(
    target: TargetFunction,
    kernel: KernelFamily,
    cfg: &AdaptiveConfig,
    n0: usize,
) -> rbf_adapt::Result<(RunResult, f64)> {
    let f = |x: &[f64]| target.value(x);
    let start = Instant::now();
    let run = if target.dim() == 1 {
        run_adaptive_1d(f, target.domain(), n0, kernel, cfg)?
    } else {
        run_adaptive_2d(f, target.domain(), kernel, cfg)?
    };
    Ok((run, start.elapsed().as_secs_f64()))
}

pub fn cmd_run(args: &RunArgs, stdout: &mut dyn Write) -> Result<u8> {
    let target = parse_target(&args.target)?;
    let kernel = parse_kernel(&args.kernel)?;
    let cfg = args.config()?;
    let n0 = resolve_n0(target, args.n0)?;

    let (run, secs) = run_experiment(target, kernel, &cfg, n0)?;
    let report = RunReport::new(target, kernel, &cfg, n0, &run, secs);
    write_output(args.out.as_deref(), stdout, report.to_canonical_json()?.as_bytes())?;
    if let Some(path) = &args.nodes {
        write_output(Some(path), stdout, &node_csv(&run.final_nodes)?)?;
    }
    Ok(if run.converged { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

/// One row of a reproduced table.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub kernel: KernelFamily,
    pub theta_refine: f64,
    pub iter: usize,
    pub n_fin: usize,
    pub mae: f64,
    pub cond: f64,
    pub time_s: f64,
    pub converged: bool,
}

pub const TABLE_HEADER: [&str; 7] = ["kernel", "theta_refine", "iter", "n_fin", "mae", "cond", "time_s"];

/// Runs every row of `preset`, in parallel when allowed, keeping preset order.
pub fn table_rows(preset: &Preset, max_iter: usize, threads: Option<usize>) -> Result<Vec<TableRow>> {
    let run_row = |row: &rbf_adapt::PresetRow| -> Result<TableRow> {
        let cfg = AdaptiveConfig {
            max_iter,
            ..AdaptiveConfig::new(row.theta_refine, preset.theta_coarse)
        };
        let (run, secs) = run_experiment(preset.target, row.kernel, &cfg, preset.n0)?;
        Ok(TableRow {
            kernel: row.kernel,
            theta_refine: row.theta_refine,
            iter: run.iterations(),
            n_fin: run.final_nodes.len(),
            mae: run.mae,
            cond: run.cond,
            time_s: round_millis(secs),
            converged: run.converged,
        })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    pool.install(|| preset.rows.par_iter().map(run_row).collect())
}

pub fn table_csv(rows: &[TableRow]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TABLE_HEADER)?;
    for r in rows {
        w.write_record([
            r.kernel.name().to_string(),
            format!("{:e}", r.theta_refine),
            r.iter.to_string(),
            r.n_fin.to_string(),
            format!("{:e}", r.mae),
            format!("{:e}", r.cond),
            format!("{:.3}", r.time_s),
        ])?;
    }
    into_bytes(w)
}

/// Reads the thread cap from the environment.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            ))),
        },
    }
}

pub fn cmd_table(args: &TableArgs, stdout: &mut dyn Write) -> Result<u8> {
    let preset = preset(args.id)?;
    if args.max_iter == 0 {
        return Err(CliError::Usage("--max-iter must be at least 1".into()));
    }
    let rows = table_rows(&preset, args.max_iter, thread_cap()?)?;
    write_output(args.out.as_deref(), stdout, &table_csv(&rows)?)?;
    Ok(if rows.iter().all(|r| r.converged) {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    })
}

/// Initial nodes for `target`: equispaced in 1D, the standard layout in 2D.
pub fn initial_nodes(target: TargetFunction, n0: usize) -> Result<PointSet> {
    let (a, b) = target.domain();
    if target.dim() == 1 {
        Ok(PointSet::from_1d(&linspace(a, b, n0)))
    } else {
        Ok(NodeSet2D::initial(a, b)?.nodes())
    }
}

pub fn cmd_mple_scan(args: &ScanArgs, stdout: &mut dyn Write) -> Result<u8> {
    let target = parse_target(&args.target)?;
    let kernel = parse_kernel(&args.kernel)?;
    args.shape.validate()?;
    if args.points < 2 {
        return Err(CliError::Usage(format!(
            "--points must be at least 2, got {}",
            args.points
        )));
    }
    let n0 = resolve_n0(target, args.n0)?;
    let nodes = initial_nodes(target, n0)?;
    let values: Vec<f64> = nodes.iter().map(|p| target.value(p)).collect();
    let scan = scan_cost(
        kernel,
        &nodes,
        &values,
        args.shape.eps_min,
        args.shape.eps_max,
        args.points,
    )?;

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["eps", "cost"])?;
    for (eps, cost) in &scan {
        let cost = if cost.is_finite() {
            format!("{cost:e}")
        } else {
            "inf".into()
        };
        w.write_record([format!("{eps:e}"), cost])?;
    }
    write_output(args.out.as_deref(), stdout, &into_bytes(w)?)?;
    if scan.iter().all(|(_, c)| !c.is_finite()) {
        return Err(CliError::AllSingular);
    }
    Ok(EXIT_OK)
}

/// Final nodes as headerless CSV, one node per row.
pub fn node_csv(nodes: &PointSet) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for p in nodes.iter() {
        w.write_record(p.iter().map(|c| c.to_string()))?;
    }
    into_bytes(w)
}

fn into_bytes(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>> {
    w.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))
}

fn write_output(path: Option<&Path>, stdout: &mut dyn Write, bytes: &[u8]) -> Result<()> {
    let io_err = |source: io::Error| CliError::Io {
        path: path.map_or_else(|| "<stdout>".into(), Path::to_path_buf),
        source,
    };
    match path {
        Some(p) => File::create(p).and_then(|mut f| f.write_all(bytes)).map_err(io_err),
        None => stdout.write_all(bytes).map_err(io_err),
    }
}
