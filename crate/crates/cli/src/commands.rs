//! One function per subcommand; each returns the exit code.

use std::path::Path;

use serde_json::{json, Value};

use spectra_core::format::{parse_lambda, parse_omega, Lambda, OmegaFile};
use spectra_core::phi::PhiBasis;
use spectra_core::real::parse_real;
use spectra_core::verify::check_window_tiling;
use spectra_core::{
    check_tiling_condition, check_translational_tiling, check_zeros_condition, detect_period,
    eval_chi_hat, eval_g, find_generating_window, find_zeros, membership_test, search_spectra,
    verify_period, IntervalUnion, Real, SearchConfig, SpectrumWindow, Verdict, VerificationReport,
};

use crate::emit::{document, emit, num, svg_plot, Artifacts, Format};
use crate::{CliError, OmegaSource, Output, EXIT_FAIL, EXIT_INCONCLUSIVE};

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_omega(src: &OmegaSource) -> Result<IntervalUnion, CliError> {
    let text = match (&src.omega, &src.omega_inline) {
        (Some(path), _) => read(path)?,
        (None, Some(inline)) => inline.clone(),
        (None, None) => return Err(CliError::Usage("an interval union is required".into())),
    };
    Ok(parse_omega(&text)?)
}

fn load_lambda(path: &Path) -> Result<Lambda, CliError> {
    Ok(parse_lambda(&read(path)?)?)
}

fn lambda_json(lambda: &Lambda) -> Value {
    match lambda {
        Lambda::Window(w) => json!({ "points": w.points() }),
        Lambda::Periodic(p) => json!(p),
    }
}

/// The finite window a command works on; periodic sets are unrolled over
/// integer bounds covering `[−R, R]`.
fn window_of(lambda: &Lambda, radius: f64) -> SpectrumWindow {
    match lambda {
        Lambda::Window(w) => w.clone(),
        Lambda::Periodic(p) => {
            let r = radius.ceil() as i64;
            p.unroll(&Real::int(-r), &Real::int(r))
        }
    }
}

fn config(omega: &IntervalUnion, lambda: Option<&Lambda>, params: Value) -> Value {
    let mut c = json!({ "omega": OmegaFile::from_union(omega) });
    if let Some(l) = lambda {
        c["lambda"] = lambda_json(l);
    }
    if let (Value::Object(c), Value::Object(p)) = (&mut c, params) {
        c.extend(p);
    }
    c
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn exit_code(v: Verdict) -> u8 {
    match v {
        Verdict::Pass => 0,
        Verdict::Fail => EXIT_FAIL,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

/// Fail dominates inconclusive, which dominates pass.
fn worst(vs: &[Verdict]) -> Verdict {
    if vs.contains(&Verdict::Fail) {
        Verdict::Fail
    } else if vs.contains(&Verdict::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    }
}

fn samples_csv(report: &VerificationReport) -> Option<String> {
    if report.samples.is_empty() {
        return None;
    }
    let mut csv = String::from("x,F_lo,F_hi\n");
    for s in &report.samples {
        csv.push_str(&format!("{},{},{}\n", num(s.x), num(s.lo), num(s.hi)));
    }
    Some(csv)
}

pub fn zeros(src: &OmegaSource, radius: f64, tol: f64, out: &Output) -> Result<u8, CliError> {
    let omega = load_omega(src)?;
    let zs = find_zeros(&omega, radius, tol)?;
    let mut csv = String::from("zero,certified_radius\n");
    for z in zs.zeros() {
        csv.push_str(&format!("{},{}\n", num(z.value), num(z.radius)));
    }
    let uncertified = zs.zeros().iter().filter(|z| !z.certified).count();
    let body = json!({
        "zeros": zs.zeros(),
        "count": zs.zeros().len(),
        "uncertified": uncertified,
        "cosets": zs.cosets(),
    });
    let cfg = config(&omega, None, json!({ "radius": radius, "tol": tol }));
    let artifacts = Artifacts {
        json: document("zeros", cfg, body),
        csv: Some(csv),
        svg: None,
    };
    emit(out, "zeros", Format::Csv, &artifacts)?;
    Ok(0)
}

pub fn eval(src: &OmegaSource, xi: Vec<f64>, range: &[f64], out: &Output) -> Result<u8, CliError> {
    let omega = load_omega(src)?;
    let mut points = xi;
    if !range.is_empty() && range.len() != 3 {
        return Err(CliError::Usage("--range takes from,to,count".into()));
    }
    if let [from, to, count] = *range {
        if count < 1.0 || count.fract() != 0.0 {
            return Err(CliError::Usage("--range count must be a positive integer".into()));
        }
        let n = count as usize;
        let step = if n > 1 { (to - from) / (n - 1) as f64 } else { 0.0 };
        points.extend((0..n).map(|i| from + step * i as f64));
    }
    if points.is_empty() {
        return Err(CliError::Usage("give frequencies with --xi or --range".into()));
    }
    let mut csv = String::from("function,xi,re,im,abs\n");
    let mut values = Vec::with_capacity(points.len());
    for &x in &points {
        let c = eval_chi_hat(&omega, x);
        let g = eval_g(&omega, x);
        for (name, v) in [("chi_hat", c), ("g", g)] {
            csv.push_str(&format!("{name},{},{},{},{}\n", num(x), num(v.re), num(v.im), num(v.norm())));
        }
        values.push(json!({
            "xi": x,
            "chi_hat": [c.re, c.im],
            "chi_hat_abs": c.norm(),
            "g": [g.re, g.im],
            "g_abs": g.norm(),
        }));
    }
    let cfg = config(&omega, None, json!({ "xi": points }));
    let artifacts = Artifacts {
        json: document("eval", cfg, json!({ "values": values })),
        csv: Some(csv),
        svg: None,
    };
    emit(out, "eval", Format::Csv, &artifacts)?;
    Ok(0)
}

pub fn verify_spectrum(src: &OmegaSource, lambda: &Path, tol: f64, radius: f64, out: &Output) -> Result<u8, CliError> {
    let omega = load_omega(src)?;
    let lambda = load_lambda(lambda)?;
    let window = window_of(&lambda, radius);
    let report = check_zeros_condition(&window, &omega, tol)?;
    let cfg = config(&omega, Some(&lambda), json!({ "tol": tol, "radius": radius }));
    emit(out, "verify-spectrum", Format::Json, &Artifacts::json(document("verify-spectrum", cfg, to_value(&report))))?;
    Ok(exit_code(report.verdict))
}

pub fn verify_tile(
    src: &OmegaSource,
    lambda: &Path,
    tol: f64,
    grid_step: f64,
    translations: bool,
    out: &Output,
) -> Result<u8, CliError> {
    let omega = load_omega(src)?;
    let lambda = load_lambda(lambda)?;
    let report = match (&lambda, translations) {
        (Lambda::Periodic(p), false) => check_tiling_condition(&omega, p, grid_step, tol)?,
        (Lambda::Periodic(p), true) => check_translational_tiling(&omega, p, grid_step)?,
        (Lambda::Window(w), _) => check_window_tiling(&omega, w),
    };
    let cfg = config(
        &omega,
        Some(&lambda),
        json!({ "tol": tol, "grid_step": grid_step, "translations": translations }),
    );
    let svg = (!report.samples.is_empty()).then(|| {
        let pts: Vec<(f64, f64, f64)> = report.samples.iter().map(|s| (s.x, s.lo, s.hi)).collect();
        let level = report.parameter_f64("level").unwrap_or(omega.measure_f64().powi(2));
        svg_plot(&pts, level, "Σ |χ̂(x − λ)|² over one period")
    });
    let artifacts = Artifacts {
        csv: samples_csv(&report),
        svg,
        json: document("verify-tile", cfg, to_value(&report)),
    };
    emit(out, "verify-tile", Format::Json, &artifacts)?;
    Ok(exit_code(report.verdict))
}

pub fn membership(
    src: &OmegaSource,
    lambda: &Path,
    xs: &[String],
    tol: f64,
    rank_tol: f64,
    radius: f64,
    out: &Output,
) -> Result<u8, CliError> {
    let omega = load_omega(src)?;
    let lambda = load_lambda(lambda)?;
    let window = window_of(&lambda, radius);
    let points: Vec<Real> = xs
        .iter()
        .map(|s| parse_real(s).map_err(|e| CliError::Usage(format!("point {s}: {e}"))))
        .collect::<Result<_, _>>()?;
    let gw = find_generating_window(&omega, &window, rank_tol)?;
    let cfg = config(
        &omega,
        Some(&lambda),
        json!({ "x": points, "tol": tol, "rank_tol": rank_tol, "radius": radius }),
    );
    let Some(b) = gw.first_basis(&window) else {
        let body = json!({ "generating": false, "width": gw.width, "results": [] });
        emit(out, "membership", Format::Json, &Artifacts::json(document("membership", cfg, body)))?;
        return Ok(EXIT_INCONCLUSIVE);
    };
    let basis = PhiBasis::generating_for(&omega, b, &window, rank_tol)?;
    let results = points
        .iter()
        .map(|x| membership_test(&omega, &basis, x, tol))
        .collect::<Result<Vec<_>, _>>()?;
    let body = json!({
        "generating": basis.generating,
        "width": gw.width,
        "rank": basis.rank,
        "basis": basis,
        "results": results,
    });
    emit(out, "membership", Format::Json, &Artifacts::json(document("membership", cfg, body)))?;
    Ok(0)
}

pub fn generating_set(src: &OmegaSource, lambda: &Path, rank_tol: f64, radius: f64, out: &Output) -> Result<u8, CliError> {
    let omega = load_omega(src)?;
    let lambda = load_lambda(lambda)?;
    let window = window_of(&lambda, radius);
    let gw = find_generating_window(&omega, &window, rank_tol)?;
    let basis = gw.first_basis(&window);
    let body = json!({ "generating_window": gw, "basis": basis });
    let cfg = config(&omega, Some(&lambda), json!({ "rank_tol": rank_tol, "radius": radius }));
    emit(out, "generating-set", Format::Json, &Artifacts::json(document("generating-set", cfg, body)))?;
    Ok(if basis.is_some() { 0 } else { EXIT_INCONCLUSIVE })
}

#[allow(clippy::too_many_arguments)]
pub fn period(
    src: &OmegaSource,
    lambda: &Path,
    width: Option<&str>,
    tol: f64,
    rank_tol: f64,
    radius: f64,
    out: &Output,
) -> Result<u8, CliError> {
    let omega = load_omega(src)?;
    let lambda = load_lambda(lambda)?;
    let window = window_of(&lambda, radius);
    let width = match width {
        Some(s) => parse_real(s).map_err(|e| CliError::Usage(format!("width {s}: {e}")))?,
        None => find_generating_window(&omega, &window, rank_tol)?.width,
    };
    let cfg = config(
        &omega,
        Some(&lambda),
        json!({ "width": width, "tol": tol, "rank_tol": rank_tol, "radius": radius }),
    );
    let (body, code) = match detect_period(&window, &width, tol)? {
        None => (
            json!({ "period": null, "anchors": null, "integer": null, "verdict": Verdict::Inconclusive }),
            EXIT_INCONCLUSIVE,
        ),
        Some(c) => {
            let report = verify_period(&window, &c.value, tol, Some(omega.measure_f64()))?;
            let body = json!({
                "period": c.value,
                "anchors": c.anchors,
                "integer": report.metrics.get("integer"),
                "verdict": report.verdict,
                "report": report,
            });
            (body, exit_code(report.verdict))
        }
    };
    emit(out, "period", Format::Json, &Artifacts::json(document("period", cfg, body)))?;
    Ok(code)
}

pub fn search(
    src: &OmegaSource,
    max_period: u32,
    budget: u64,
    tol: f64,
    grid_step: f64,
    out: &Output,
) -> Result<u8, CliError> {
    let omega = load_omega(src)?;
    let cfg = SearchConfig {
        max_period,
        node_budget: budget,
        tiling_tol: tol,
        grid_step,
        ..SearchConfig::default()
    };
    let outcome = search_spectra(&omega, &cfg)?;
    let doc = document("search", config(&omega, None, json!({ "search": cfg })), to_value(&outcome));
    emit(out, "search", Format::Json, &Artifacts::json(doc))?;
    Ok(if outcome.budget_exhausted { EXIT_INCONCLUSIVE } else { 0 })
}

pub fn report(src: &OmegaSource, lambda: &Path, tol: f64, grid_step: f64, radius: f64, out: &Output) -> Result<u8, CliError> {
    let omega = load_omega(src)?;
    let lambda = load_lambda(lambda)?;
    let window = window_of(&lambda, radius);
    let orth_tol = spectra_core::verify::DEFAULT_ORTHOGONALITY_TOL;
    let orthogonality = check_zeros_condition(&window, &omega, orth_tol)?;
    let tiling = match &lambda {
        Lambda::Periodic(p) => check_tiling_condition(&omega, p, grid_step, tol)?,
        Lambda::Window(w) => check_window_tiling(&omega, w),
    };
    let period = find_generating_window(&omega, &window, spectra_core::phi::DEFAULT_RANK_TOL)
        .and_then(|gw| detect_period(&window, &gw.width, 1e-9))
        .ok()
        .flatten()
        .map(|c| verify_period(&window, &c.value, 1e-9, Some(omega.measure_f64())))
        .transpose()?;
    let mut verdicts = vec![orthogonality.verdict, tiling.verdict];
    verdicts.push(period.as_ref().map_or(Verdict::Inconclusive, |p| p.verdict));
    let verdict = worst(&verdicts);
    let body = json!({
        "verdict": verdict,
        "measure": omega.measure(),
        "orthogonality": orthogonality,
        "tiling": tiling,
        "period": period,
    });
    let cfg = config(
        &omega,
        Some(&lambda),
        json!({ "tol": tol, "orthogonality_tol": orth_tol, "grid_step": grid_step, "radius": radius }),
    );
    let artifacts = Artifacts {
        csv: samples_csv(&tiling),
        svg: None,
        json: document("report", cfg, body),
    };
    emit(out, "report", Format::Json, &artifacts)?;
    Ok(exit_code(verdict))
}
