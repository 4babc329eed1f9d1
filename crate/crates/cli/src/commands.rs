use std::fs::File;

use cardspline::bandlimited_analysis::error_report;
use cardspline::{
    build_fundamental, compute_coefficients, target_gallery, Basis, DataSequence, ErrorReport, SplineError,
    SplineParams,
};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::output::{Artifact, Cell, Table};
use crate::{CliError, KRange, RunArgs};

/// The artifact to emit, and whether the run counts as a success once it is
/// written.
pub type Run = Result<(Artifact, Result<(), CliError>), CliError>;

const TOL_RANGE: (f64, f64) = (1e-14, 1e-2);

fn check_tol(tol: f64) -> Result<f64, CliError> {
    if !(TOL_RANGE.0..=TOL_RANGE.1).contains(&tol) {
        return Err(SplineError::InvalidTolerance {
            tol,
            min: TOL_RANGE.0,
            max: TOL_RANGE.1,
        }
        .into());
    }
    Ok(tol)
}

fn single_params(args: &RunArgs) -> Result<SplineParams, CliError> {
    let range = args.k.ok_or_else(|| CliError::Usage("--k is required".into()))?;
    let k = range
        .single()
        .ok_or_else(|| CliError::Usage("a range of orders is only accepted by `converge`".into()))?;
    Ok(SplineParams::new(args.alpha, k)?)
}

fn artifact(command: &'static str, args: &RunArgs, k: Value, table: Table) -> Artifact {
    Artifact {
        command,
        alpha: args.alpha,
        k,
        tol: args.tol,
        table,
        summary: Map::new(),
        achieved: Map::new(),
    }
}

fn opt(v: Option<f64>) -> Value {
    v.map_or(Value::Null, |x| json!(x))
}

pub fn coeffs(args: &RunArgs) -> Run {
    let params = single_params(args)?;
    let tol = check_tol(args.tol)?;
    let t = compute_coefficients(params, tol)?;
    let mut table = Table::new(&["j", "c_j"]);
    for (j, c) in t.entries() {
        table.push(vec![Cell::Int(j), Cell::Float(c)]);
    }
    let mut a = artifact("coeffs", args, json!(params.k()), table);
    let fit = t.decay();
    a.summary.insert("decay_rate".into(), opt(fit.map(|f| f.rate)));
    a.summary.insert("decay_amplitude".into(), opt(fit.map(|f| f.amplitude)));
    a.summary.insert("tail_bound".into(), json!(t.tail_bound()));
    a.achieved.insert("tail_bound".into(), json!(t.tail_bound()));
    a.achieved.insert("half_width".into(), json!(t.half_width()));
    a.achieved.insert("samples".into(), json!(t.samples()));
    Ok((a, Ok(())))
}

pub fn eval_l(args: &RunArgs) -> Run {
    let params = single_params(args)?;
    let l = build_fundamental(params, check_tol(args.tol)?)?;
    let mut table = Table::new(&["x", "L_k"]);
    for x in args.grid.points() {
        table.push(vec![Cell::Float(x), Cell::Float(l.eval(x))]);
    }
    let mut a = artifact("eval-L", args, json!(params.k()), table);
    a.summary.insert("decay_rate".into(), opt(l.decay_rate()));
    a.achieved.insert("cardinality_defect".into(), json!(l.cardinality_defect()));
    a.achieved.insert("truncation_bound".into(), json!(l.truncation_bound()));
    Ok((a, Ok(())))
}

pub fn interp(args: &RunArgs) -> Run {
    let params = single_params(args)?;
    let tol = check_tol(args.tol)?;
    let path = args.data.as_ref().ok_or_else(|| CliError::Usage("interp needs --data <csv>".into()))?;
    let file = File::open(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    let data = DataSequence::read_csv(file)?;
    let l = build_fundamental(params, tol)?;
    let mut table = Table::new(&["x", "f_b"]);
    let mut widest = 0;
    for x in args.grid.points() {
        widest = widest.max(l.window(x, data.growth(), tol)?);
        table.push(vec![Cell::Float(x), Cell::Float(l.interpolate_at(&data, x, tol)?)]);
    }
    let mut a = artifact("interp", args, json!(params.k()), table);
    a.summary.insert("data".into(), json!(path.display().to_string()));
    a.achieved.insert("cardinality_defect".into(), json!(l.cardinality_defect()));
    a.achieved.insert("max_window".into(), json!(widest));
    Ok((a, Ok(())))
}

pub fn reproduce(args: &RunArgs) -> Run {
    let params = single_params(args)?;
    let tol = check_tol(args.tol)?;
    let name = args.basis.as_deref().ok_or_else(|| CliError::Usage("reproduce needs --basis".into()))?;
    let basis = Basis::parse(name)?;
    let l = build_fundamental(params, tol)?;
    let mut table = Table::new(&["x", "g", "f_b", "abs_err"]);
    let (mut worst, mut peak): (f64, f64) = (0.0, 0.0);
    for x in args.grid.points() {
        let g = basis.eval(params.alpha(), x);
        let f = l.interpolate_basis(basis, x)?;
        let err = (f - g).abs();
        worst = worst.max(err);
        peak = peak.max(g.abs());
        table.push(vec![Cell::Float(x), Cell::Float(g), Cell::Float(f), Cell::Float(err)]);
    }
    let limit = tol * peak.max(1.0);
    let mut a = artifact("reproduce", args, json!(params.k()), table);
    a.summary.insert("basis".into(), json!(basis.name()));
    a.summary.insert("max_abs_err".into(), json!(worst));
    a.summary.insert("limit".into(), json!(limit));
    a.achieved.insert("max_abs_err".into(), json!(worst));
    a.achieved.insert("cardinality_defect".into(), json!(l.cardinality_defect()));
    let verdict = if worst < limit {
        Ok(())
    } else {
        Err(CliError::Reproduction { err: worst, limit })
    };
    Ok((a, verdict))
}

fn worker_pool() -> Result<rayon::ThreadPool, CliError> {
    let threads = match std::env::var("CARDSPLINE_THREADS") {
        Ok(v) => v
            .parse::<usize>()
            .ok()
            .filter(|n| *n >= 1)
            .ok_or_else(|| CliError::Usage(format!("CARDSPLINE_THREADS must be a positive integer, got `{v}`")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))
}

pub fn converge(args: &RunArgs) -> Run {
    let tol = check_tol(args.tol)?;
    let name = args.target.as_deref().ok_or_else(|| CliError::Usage("converge needs --target".into()))?;
    let target = target_gallery(name)?;
    let range = args.k.unwrap_or(KRange { first: 1, last: 10 });
    let all: Vec<SplineParams> = (range.first..=range.last)
        .map(|k| SplineParams::new(args.alpha, k))
        .collect::<Result<_, _>>()?;
    if !(args.width >= 0.0) || args.points < 2 {
        return Err(CliError::Usage("--width must be >= 0 and --points >= 2".into()));
    }
    let pool = worker_pool()?;
    let reports: Vec<ErrorReport> = pool.install(|| {
        all.par_iter()
            .map(|&p| error_report(p, &target, tol, args.width, args.points))
            .collect::<Result<_, _>>()
    })?;
    let columns: Vec<&'static str> = ErrorReport::CSV_HEADER.split(',').collect();
    let mut table = Table::new(&columns);
    let mut panels = Vec::new();
    for r in &reports {
        table.push(vec![
            Cell::Float(r.alpha),
            Cell::Int(r.k as i64),
            Cell::Text(r.target.to_string()),
            Cell::Float(r.l2_error),
            Cell::Float(r.l2_bound),
            Cell::Float(r.sup_error),
            Cell::Int(r.ell_trunc as i64),
            Cell::Int(r.quad_res as i64),
        ]);
        panels.push(json!({ "k": r.k, "quad_res": r.quad_res, "ell_trunc": r.ell_trunc }));
    }
    let k = json!([range.first, range.last]);
    let mut a = artifact("converge", args, k, table);
    a.summary.insert("target".into(), json!(target.name()));
    a.summary.insert("sup_grid".into(), json!({ "width": args.width, "points": args.points }));
    a.achieved.insert("per_k".into(), Value::Array(panels));
    Ok((a, Ok(())))
}
