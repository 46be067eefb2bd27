//! One function per subcommand: validate flags, compute, render.

use serde_json::{json, Value};
use shifted_schur::asymptotics::{bulk_kernel_entry_detailed, density, limit_shape_point, theta, LimitPoint};
use shifted_schur::correlation::{rho_pf, OracleTable};
use shifted_schur::process::{default_window, macmahon_coeffs, MqParams};
use shifted_schur::schur::verify_qpqp;
use shifted_schur::series::{Kernel, KernelSource};
use shifted_schur::stats::{VolumeMoments, MEAN_LIMIT, VARIANCE_LIMIT};
use shifted_schur::{PointConfiguration, Specialization};

use crate::parse::{self, QValue};
use crate::{selftest, Command, Common, Document, Failure, Mesh};

type Stop = (Option<Document>, Failure);
pub type Outcome = Result<Document, Stop>;

/// Tolerance behind the default window of the finite chain.
const WINDOW_TOLERANCE: f64 = 1e-16;

pub fn error_json(kind: &str, message: &str) -> String {
    json!({ "error": kind, "message": message }).to_string()
}

fn json_doc(value: &Value) -> Document {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    Document { text }
}

fn usage(msg: impl Into<String>) -> Stop {
    (None, Failure::Usage(msg.into()))
}

fn compute(e: shifted_schur::Error) -> Stop {
    (None, Failure::Compute(e))
}

fn required<T>(value: Option<T>, flag: &str) -> Result<T, Stop> {
    value.ok_or_else(|| usage(format!("the argument '--{flag}' is required")))
}

fn parsed<T>(value: Result<T, String>) -> Result<T, Stop> {
    value.map_err(usage)
}

pub fn run(command: Command) -> (Outcome, Common) {
    let (name, common) = match &command {
        Command::Macmahon { common, .. } => ("macmahon", common),
        Command::Corr { common, .. } => ("corr", common),
        Command::Oracle { common, .. } => ("oracle", common),
        Command::Kernel { common, .. } => ("kernel", common),
        Command::Density { common, .. } => ("density", common),
        Command::Shape { common, .. } => ("shape", common),
        Command::Volume { common, .. } => ("volume", common),
        Command::QpqpCheck { common, .. } => ("qpqp-check", common),
    };
    let common = common.clone();
    if common.self_test {
        return (self_test(name), common);
    }
    let outcome = match command {
        Command::Macmahon { max_n, .. } => macmahon(max_n),
        Command::Corr {
            q,
            points,
            check_oracle,
            vmax,
            ..
        } => corr(q, points, check_oracle, vmax),
        Command::Oracle { q, points, vmax, .. } => oracle(q, points, vmax),
        Command::Kernel {
            tau,
            chi,
            dt,
            dx,
            q,
            x,
            y,
            t1,
            t2,
            ..
        } => kernel(LimitArgs { tau, chi, dt, dx }, FiniteArgs { q, x, y, t1, t2 }),
        Command::Density { mesh, .. } => density_mesh(mesh),
        Command::Shape { mesh, .. } => shape_mesh(mesh),
        Command::Volume { q, r, r_grid, .. } => volume(q, r, r_grid),
        Command::QpqpCheck {
            mu, nu, x, y, cutoff, ..
        } => qpqp(mu, nu, x, y, cutoff),
    };
    (outcome, common)
}

fn self_test(name: &str) -> Outcome {
    let report = selftest::run(name);
    let doc = json_doc(&report.to_json(name));
    if report.passed() {
        Ok(doc)
    } else {
        let failed = report.failed_names().join(", ");
        Err((Some(doc), Failure::Checks(format!("{name} self-test failed: {failed}"))))
    }
}

fn macmahon(max_n: Option<u32>) -> Outcome {
    let n = required(max_n, "max-n")?;
    let coeffs = macmahon_coeffs(n).map_err(compute)?;
    let values: Vec<u64> = coeffs.into_iter().map(|c| c as u64).collect();
    Ok(json_doc(&json!(values)))
}

fn mq_source(q: f64, points: &PointConfiguration) -> Result<KernelSource, Stop> {
    let max_t = points.iter().map(|(t, _)| t.unsigned_abs() as u32).max().unwrap_or(0);
    let params = MqParams::new(q, default_window(max_t, q, WINDOW_TOLERANCE)).map_err(compute)?;
    Ok(KernelSource::Mq(params))
}

fn points_json(points: &PointConfiguration) -> Value {
    json!(points.to_vec().iter().map(|&(t, x)| [t, x as i64]).collect::<Vec<_>>())
}

fn oracle_part(table: &OracleTable, points: &PointConfiguration, q: &QValue) -> Result<Value, Stop> {
    let result = table.rho(points, q.value).map_err(compute)?;
    let mut value = serde_json::to_value(&result).expect("results serialize");
    if let Some(exact) = &q.exact {
        let rho = table.rho_exact(points, exact).map_err(compute)?;
        value["exact"] = json!(rho.to_string());
    }
    Ok(value)
}

fn corr(q: Option<String>, points: Option<String>, check_oracle: bool, vmax: u32) -> Outcome {
    let q = parsed(parse::q_value(&required(q, "q")?))?;
    let points = parsed(parse::points(&required(points, "points")?))?;
    let pf = rho_pf(&points, &mq_source(q.value, &points)?).map_err(compute)?;
    let mut doc = json!({
        "points": points_json(&points),
        "q": q.value,
        "pfaffian": pf,
    });
    if check_oracle {
        let table = OracleTable::new(vmax).map_err(compute)?;
        let oracle = oracle_part(&table, &points, &q)?;
        let difference = (pf.value - oracle["value"].as_f64().unwrap_or(f64::NAN)).abs();
        let bound = oracle["error_bound"].as_f64().unwrap_or(f64::INFINITY);
        doc["oracle"] = oracle;
        doc["difference"] = json!(difference);
        doc["within_bound"] = json!(difference <= bound + 1e-8);
    }
    Ok(json_doc(&doc))
}

fn oracle(q: Option<String>, points: Option<String>, vmax: u32) -> Outcome {
    let q = parsed(parse::q_value(&required(q, "q")?))?;
    let points = parsed(parse::points(&required(points, "points")?))?;
    let table = OracleTable::new(vmax).map_err(compute)?;
    let mut doc = oracle_part(&table, &points, &q)?;
    doc["points"] = points_json(&points);
    Ok(json_doc(&doc))
}

struct LimitArgs {
    tau: Option<f64>,
    chi: Option<f64>,
    dt: Option<i64>,
    dx: Option<i64>,
}

struct FiniteArgs {
    q: Option<String>,
    x: Option<i64>,
    y: Option<i64>,
    t1: Option<i64>,
    t2: Option<i64>,
}

fn kernel(limit: LimitArgs, finite: FiniteArgs) -> Outcome {
    let limit_mode = limit.tau.is_some() || limit.chi.is_some() || limit.dt.is_some() || limit.dx.is_some();
    let finite_mode =
        finite.q.is_some() || finite.x.is_some() || finite.y.is_some() || finite.t1.is_some() || finite.t2.is_some();
    match (limit_mode, finite_mode) {
        (true, true) => Err(usage(
            "limit flags (--tau --chi --dt --dx) and finite flags (--q --x --y --t1 --t2) cannot be mixed",
        )),
        (false, false) => Err(usage("give either --tau --chi --dt --dx or --q --x --y --t1 --t2")),
        (true, false) => {
            let tau = required(limit.tau, "tau")?;
            let chi = required(limit.chi, "chi")?;
            let (dt, dx) = (required(limit.dt, "dt")?, required(limit.dx, "dx")?);
            let p = parsed(LimitPoint::new(tau, chi).map_err(|e| e.to_string()))?;
            let entry = bulk_kernel_entry_detailed(dt, dx, p).map_err(compute)?;
            Ok(json_doc(&json!({
                "mode": "limit",
                "tau": tau,
                "chi": chi,
                "dt": dt,
                "dx": dx,
                "theta": theta(p),
                "value": entry.value,
                "imag_residual": entry.imag_residual,
                "error_estimate": entry.error_estimate,
            })))
        }
        (false, true) => {
            let q = parsed(parse::q_value(&required(finite.q, "q")?))?;
            let (x, y) = (required(finite.x, "x")?, required(finite.y, "y")?);
            let (t1, t2) = (required(finite.t1, "t1")?, required(finite.t2, "t2")?);
            let max_t = t1.unsigned_abs().max(t2.unsigned_abs()) as u32;
            let params = MqParams::new(q.value, default_window(max_t, q.value, WINDOW_TOLERANCE)).map_err(compute)?;
            let half_width = x.unsigned_abs().max(y.unsigned_abs()) as usize;
            let mut k = Kernel::new(KernelSource::Mq(params), half_width).map_err(compute)?;
            let value = k.coeff(x, y, t1, t2).map_err(compute)?;
            Ok(json_doc(&json!({
                "mode": "finite",
                "q": q.value,
                "x": x,
                "y": y,
                "t1": t1,
                "t2": t2,
                "value": value,
            })))
        }
    }
}

fn mesh_axes(mesh: Mesh) -> Result<(Vec<f64>, Vec<f64>), Stop> {
    let taus = match (mesh.tau, mesh.tau_grid) {
        (Some(t), None) => vec![t],
        (None, Some(g)) => parsed(parse::grid(&g))?,
        _ => return Err(usage("give exactly one of --tau and --tau-grid")),
    };
    if taus.iter().any(|t| !t.is_finite()) {
        return Err(usage("tau must be finite"));
    }
    let chis = parsed(parse::grid(&required(mesh.chi_grid, "chi-grid")?))?;
    if chis[0] < 0.0 {
        return Err(usage("the chi grid must start at a nonnegative value"));
    }
    Ok((taus, chis))
}

fn csv(header: &str, rows: Vec<Vec<f64>>) -> Document {
    let mut text = String::from(header);
    text.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    Document { text }
}

fn density_mesh(mesh: Mesh) -> Outcome {
    let (taus, chis) = mesh_axes(mesh)?;
    let mut rows = Vec::with_capacity(taus.len() * chis.len());
    for &tau in &taus {
        for &chi in &chis {
            let p = LimitPoint::new(tau, chi).map_err(compute)?;
            rows.push(vec![tau, chi, density(p)]);
        }
    }
    Ok(csv("tau,chi,density", rows))
}

fn shape_mesh(mesh: Mesh) -> Outcome {
    let (taus, chis) = mesh_axes(mesh)?;
    let mut rows = Vec::with_capacity(taus.len() * chis.len());
    for &tau in &taus {
        for &chi in &chis {
            let p = LimitPoint::new(tau, chi).map_err(compute)?;
            let (x, y, z) = limit_shape_point(p).map_err(compute)?;
            rows.push(vec![tau, chi, x, y, z]);
        }
    }
    Ok(csv("tau,chi,x,y,z", rows))
}

fn volume(q: Option<String>, r: Option<f64>, r_grid: Option<String>) -> Outcome {
    let qs: Vec<f64> = match (q, r, r_grid) {
        (Some(q), None, None) => vec![parsed(parse::q_value(&q))?.value],
        (None, Some(r), None) => vec![(-r).exp()],
        (None, None, Some(g)) => parsed(parse::grid(&g))?.into_iter().map(|r| (-r).exp()).collect(),
        _ => return Err(usage("give exactly one of --q, --r and --r-grid")),
    };
    if qs.iter().any(|&q| !(q > 0.0 && q < 1.0)) {
        return Err(usage("r must be positive"));
    }
    let mut rows = Vec::with_capacity(qs.len());
    for q in qs {
        let m = VolumeMoments::new(q).map_err(compute)?;
        rows.push(json!({
            "q": m.q,
            "r": m.r,
            "mean": m.mean,
            "variance": m.variance,
            "scaled_mean": m.scaled_mean(),
            "scaled_variance": m.scaled_variance(),
        }));
    }
    Ok(json_doc(&json!({
        "mean_limit": MEAN_LIMIT,
        "variance_limit": VARIANCE_LIMIT,
        "rows": rows,
    })))
}

fn qpqp(mu: Option<String>, nu: Option<String>, x: Option<String>, y: Option<String>, cutoff: u32) -> Outcome {
    let mu = parsed(parse::strict_partition(&required(mu, "mu")?))?;
    let nu = parsed(parse::strict_partition(&required(nu, "nu")?))?;
    let x = parsed(parse::values(&required(x, "x")?))?;
    let y = parsed(parse::values(&required(y, "y")?))?;
    let report = verify_qpqp(
        &mu,
        &nu,
        &Specialization::new(x.clone()),
        &Specialization::new(y.clone()),
        cutoff,
    )
    .map_err(compute)?;
    let mut doc = serde_json::to_value(&report).expect("reports serialize");
    doc["mu"] = json!(mu.parts());
    doc["nu"] = json!(nu.parts());
    doc["x"] = json!(x);
    doc["y"] = json!(y);
    Ok(json_doc(&doc))
}
