//! One function per subcommand. Each returns the exit code on a normal run
//! and a [`CliError`] when the input cannot be processed.

use std::path::Path;

use matmoment::certificates::extract_squares;
use matmoment::moments::moments_of_measure;
use matmoment::poly::{mobius_inverse, mobius_transform};
use matmoment::random::{random_certificate_instance, random_measure, seeded};
use matmoment::{
    refute, search_certificate, solve, transform_certificate, verify_certificate, verify_measure, Direction,
    SearchOptions, SolverOptions, Status, TmmpInput, Tolerances,
};
use serde_json::{json, Value};

use crate::io::{
    emit, load, load_certificate, load_poly, matrix_to_doc, read_source, parse, to_json, CertDoc, InstanceDoc,
    MeasureDoc, MomentsDoc, PolyDoc, SetDoc,
};
use crate::{CliError, Cli, Command, DirectionArg, RandomKind, TolArgs, EXIT_NUMERICAL, EXIT_OK, EXIT_REJECTED};

/// Grid size for the refutation scan in `certify`.
const REFUTE_GRID: usize = 2000;

pub fn dispatch(cli: &Cli) -> Result<i32, CliError> {
    let out = cli.out.as_deref();
    let report = cli.report.as_deref();
    match &cli.command {
        Command::Moments { measure, n } => cmd_moments(measure, *n, out),
        Command::Solve { moments, set, tol, snap_tol } => cmd_solve(moments, set, tol, *snap_tol, out, report),
        Command::VerifyMeasure {
            measure,
            moments,
            set,
            tol,
            snap_tol,
        } => cmd_verify_measure(measure, moments, set, tol, *snap_tol, out),
        Command::Certify { poly, set, max_iter, tol } => cmd_certify(poly, set, *max_iter, tol, out, report),
        Command::VerifyCert { poly, cert, tol } => cmd_verify_cert(poly, cert, tol, out),
        Command::Transform { input, direction, a } => cmd_transform(input, *direction, *a, out),
        Command::Random {
            kind,
            set,
            seed,
            p,
            atoms,
            degree,
        } => cmd_random(*kind, set, *seed, *p, *atoms, *degree, out),
    }
}

fn tolerances(t: &TolArgs) -> Result<Tolerances, CliError> {
    Ok(Tolerances::new(t.tol_rank, t.tol_psd)?)
}

fn solver_options(t: &TolArgs, snap_tol: f64) -> Result<SolverOptions, CliError> {
    if !(snap_tol >= 0.0 && snap_tol.is_finite()) {
        return Err(CliError::invalid(format!("--snap-tol must be finite and nonnegative, got {snap_tol}")));
    }
    Ok(SolverOptions {
        tol: tolerances(t)?,
        snap_rel: snap_tol,
        ..SolverOptions::default()
    })
}

/// The report goes to `--report` when given, stderr otherwise.
fn write_report(path: Option<&Path>, value: &Value) -> Result<(), CliError> {
    let text = to_json(value);
    match path {
        Some(p) => emit(Some(p), &text),
        None => {
            eprint!("{text}");
            Ok(())
        }
    }
}

fn load_set(path: &str) -> Result<matmoment::SetDescription, CliError> {
    load::<SetDoc>(path, "set")?.to_set()
}

pub fn cmd_moments(measure: &str, n: usize, out: Option<&Path>) -> Result<i32, CliError> {
    let mu = load::<MeasureDoc>(measure, "measure")?.to_measure(&Tolerances::default())?;
    let gamma = moments_of_measure(&mu, n);
    emit(out, &to_json(&MomentsDoc::from_moments(&gamma)))?;
    Ok(EXIT_OK)
}

pub fn cmd_solve(
    moments: &str,
    set: &str,
    tol: &TolArgs,
    snap_tol: f64,
    out: Option<&Path>,
    report: Option<&Path>,
) -> Result<i32, CliError> {
    let gamma = load::<MomentsDoc>(moments, "moments")?.to_moments()?;
    let set = load_set(set)?;
    let options = solver_options(tol, snap_tol)?;
    let outcome = solve(&TmmpInput { gamma, set, options })?;
    log::info!("solve: {:?}, moment residual {:e}", outcome.status, outcome.moment_residual);
    for d in &outcome.diagnostics {
        log::debug!("{d}");
    }
    let status = match outcome.status {
        Status::Feasible => "feasible",
        Status::Infeasible => "infeasible",
        Status::NumericalFailure => "numerical_failure",
    };
    write_report(
        report,
        &json!({
            "status": status,
            "failed_conditions": outcome.failed_conditions,
            "diagnostics": outcome.diagnostics,
            "moment_residual": outcome.moment_residual,
            "gamma0_tilde": outcome.gamma0_tilde.as_ref().map(matrix_to_doc),
            "residual_mass": outcome.residual_mass.as_ref().map(matrix_to_doc),
            "atoms": outcome.measure.as_ref().map(|m| m.len()),
        }),
    )?;
    match outcome.status {
        Status::Feasible => {
            let mu = outcome.measure.as_ref().expect("feasible outcomes carry a measure");
            emit(out, &to_json(&MeasureDoc::from_measure(mu)))?;
            Ok(EXIT_OK)
        }
        Status::Infeasible => Ok(EXIT_REJECTED),
        Status::NumericalFailure => Ok(EXIT_NUMERICAL),
    }
}

pub fn cmd_verify_measure(
    measure: &str,
    moments: &str,
    set: &str,
    tol: &TolArgs,
    snap_tol: f64,
    out: Option<&Path>,
) -> Result<i32, CliError> {
    let options = solver_options(tol, snap_tol)?;
    let mu = load::<MeasureDoc>(measure, "measure")?.to_measure(&options.tol)?;
    let gamma = load::<MomentsDoc>(moments, "moments")?.to_moments()?;
    let set = load_set(set)?;
    let (ok, residual) = verify_measure(&mu, &gamma, &set, &options)?;
    emit(out, &to_json(&json!({ "valid": ok, "moment_residual": residual })))?;
    Ok(if ok { EXIT_OK } else { EXIT_REJECTED })
}

pub fn cmd_certify(
    poly: &str,
    set: &str,
    max_iter: usize,
    tol: &TolArgs,
    out: Option<&Path>,
    report: Option<&Path>,
) -> Result<i32, CliError> {
    let f = load_poly(poly)?;
    let set = load_set(set)?;
    if let Some(r) = refute(&f, &set, REFUTE_GRID) {
        log::info!("refuted at x = {}", r.point);
        write_report(
            report,
            &json!({
                "status": "refuted",
                "point": r.point,
                "min_eigenvalue": r.min_eig,
                "witness": r.witness.iter().copied().collect::<Vec<f64>>(),
            }),
        )?;
        return Ok(EXIT_REJECTED);
    }
    let opts = SearchOptions {
        max_iter,
        tol: tolerances(tol)?,
        ..SearchOptions::default()
    };
    match search_certificate(&f, &set, None, &opts) {
        Ok(found) => {
            // symmetric squares per gram; not asserted to be at most two
            let squares: Vec<Option<usize>> = found
                .certificate
                .terms
                .iter()
                .map(|t| extract_squares(&t.gram, t.basis_degree, f.p(), &opts.tol).ok().map(|s| s.len()))
                .collect();
            write_report(
                report,
                &json!({
                    "status": "certified",
                    "iterations": found.iterations,
                    "residual": found.residual,
                    "squares": squares,
                }),
            )?;
            emit(out, &to_json(&CertDoc::from_certificate(&found.certificate)))?;
            Ok(EXIT_OK)
        }
        Err(matmoment::Error::SearchFailure { iterations, residual, .. }) => {
            write_report(
                report,
                &json!({
                    "status": "search_failure",
                    "iterations": iterations,
                    "residual": residual,
                }),
            )?;
            Ok(EXIT_NUMERICAL)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn cmd_verify_cert(poly: &str, cert: &str, tol: &TolArgs, out: Option<&Path>) -> Result<i32, CliError> {
    let f = load_poly(poly)?;
    let cert = load_certificate(cert)?;
    let check = verify_certificate(&f, &cert, SearchOptions::default().residual_tol, &tolerances(tol)?)?;
    emit(
        out,
        &to_json(&json!({
            "valid": check.valid,
            "grams_psd": check.grams_psd,
            "degree_ok": check.degree_ok,
            "residual": check.residual,
        })),
    )?;
    Ok(if check.valid { EXIT_OK } else { EXIT_REJECTED })
}

/// Accepts a certificate or a polynomial document.
pub fn cmd_transform(input: &str, direction: DirectionArg, a: f64, out: Option<&Path>) -> Result<i32, CliError> {
    let text = read_source(input)?;
    let value: Value = parse(&text, "transform input")?;
    let direction = match direction {
        DirectionArg::ToUnbounded => Direction::ToUnbounded,
        DirectionArg::FromUnbounded => Direction::FromUnbounded,
    };
    let doc = if value.get("grams").is_some() {
        let cert = parse::<CertDoc>(&text, "certificate")?.to_certificate()?;
        to_json(&CertDoc::from_certificate(&transform_certificate(&cert, direction, a)?))
    } else {
        let f = parse::<PolyDoc>(&text, "polynomial")?.to_poly()?;
        let g = match direction {
            Direction::ToUnbounded => mobius_inverse(&f, a, f.degree())?,
            Direction::FromUnbounded => mobius_transform(&f, a)?,
        };
        to_json(&PolyDoc::from_poly(&g))
    };
    emit(out, &doc)?;
    Ok(EXIT_OK)
}

pub fn cmd_random(
    kind: RandomKind,
    set: &str,
    seed: u64,
    p: usize,
    atoms: usize,
    degree: usize,
    out: Option<&Path>,
) -> Result<i32, CliError> {
    let set = load_set(set)?;
    let mut rng = seeded(seed);
    let doc = match kind {
        RandomKind::Measure => to_json(&MeasureDoc::from_measure(&random_measure(&mut rng, &set, p, atoms)?)),
        RandomKind::CertificateInstance => {
            let (f, cert) = random_certificate_instance(&mut rng, &set, degree, p)?;
            to_json(&InstanceDoc {
                polynomial: PolyDoc::from_poly(&f),
                certificate: CertDoc::from_certificate(&cert),
            })
        }
    };
    emit(out, &doc)?;
    Ok(EXIT_OK)
}
