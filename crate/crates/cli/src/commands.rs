use std::fs;
use std::path::Path;

use num_traits::{One, Zero};
use pdmoments::bounds::{bound_report, vanishing_count};
use pdmoments::concomitant::epsilon_direct;
use pdmoments::corpus::{exact_moments, jump_data, legendre, series_moments};
use pdmoments::mgf::{verify_mgf_ode, MgfReport};
use pdmoments::momrec::{epsilon_from_moments, generate_moments, verify_recurrence, RecurrenceReport};
use pdmoments::reconstruct::{rebuild_signal, recover_jumps, residual_report};
use pdmoments::scalar::{powu, rat};
use pdmoments::{DiffOperator, Error, Exponent, JumpData, MomentSequence, PiecewiseSpec, Rat, ReconstructionConfig, Scalar};

use crate::output::{join, Report};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Precondition(_) => 2,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Precondition(e.to_string())
        }
    }
}

/// Text for stdout plus the reason a verification failed, if it did.
pub struct Output {
    pub text: String,
    pub failure: Option<String>,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, failure: None }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn in_file<T>(path: &Path, parsed: pdmoments::Result<T>) -> Result<T, CliError> {
    parsed.map_err(|e| match e {
        e if e.is_input_error() => CliError::Input(format!("{}: {e}", path.display())),
        e => e.into(),
    })
}

fn load_operator(path: &Path) -> Result<DiffOperator, CliError> {
    in_file(path, DiffOperator::parse(&read(path)?))
}

fn load_moments<S: Scalar>(path: &Path) -> Result<MomentSequence<S>, CliError> {
    in_file(path, MomentSequence::parse(&read(path)?))
}

fn load_jumps<S: Scalar>(path: &Path) -> Result<JumpData<S>, CliError> {
    in_file(path, JumpData::parse(&read(path)?))
}

fn load_signal(path: &Path) -> Result<PiecewiseSpec, CliError> {
    in_file(path, PiecewiseSpec::parse(&read(path)?))
}

/// `None` or zero selects exact arithmetic.
fn float_tol(tol: Option<f64>) -> Result<Option<f64>, CliError> {
    match tol {
        Some(t) if !(t.is_finite() && t >= 0.0) => Err(CliError::Input(format!("tolerance must be a finite nonnegative number, got {t}"))),
        Some(t) if t > 0.0 => Ok(Some(t)),
        _ => Ok(None),
    }
}

pub fn bound(operator: &Path, p: usize, signal: Option<&Path>, moments: Option<&Path>, porcelain: bool) -> Result<Output, CliError> {
    let op = load_operator(operator)?;
    let spec = signal.map(load_signal).transpose()?;
    let interval = spec.as_ref().map(|s| s.interval());
    let report = bound_report(&op, p, interval)?;
    let mut text = if porcelain { report.porcelain() } else { report.to_string() };
    if let Some(path) = moments {
        let m: MomentSequence<Rat> = load_moments(path)?;
        let count = vanishing_count(&m, 0.0);
        let mut r = Report::new();
        r.add("vanishing_count", count.count);
        r.add("vanishing_truncated", count.truncated);
        r.add("within_general_bound", count.count as i64 <= report.general);
        text.push_str(&r.render(porcelain));
    }
    Ok(Output::ok(text))
}

/// Largest absolute residual and the first index above `tol · max(1, scale)`.
fn judge(residuals: &[f64], scale: f64, tol: f64) -> (f64, Option<usize>) {
    let threshold = tol * scale.max(1.0);
    let max = residuals.iter().fold(0.0_f64, |m, r| m.max(r.abs()));
    (max, residuals.iter().position(|r| r.abs() > threshold))
}

fn recurrence_verdict<S: Scalar>(report: &RecurrenceReport<S>, tol: Option<f64>) -> (String, Option<usize>) {
    match tol {
        None => (report.max_abs_residual().to_string(), report.first_failure(0.0)),
        Some(t) => {
            let res: Vec<f64> = report.residuals.iter().map(Scalar::to_f64).collect();
            let scale = report.mu.iter().fold(0.0_f64, |m, v| m.max(v.magnitude()));
            let (max, first) = judge(&res, scale, t);
            (format!("{max:e}"), first)
        }
    }
}

pub fn verify(operator: &Path, moments: &Path, jumps: &Path, tol: Option<f64>, porcelain: bool) -> Result<Output, CliError> {
    let op = load_operator(operator)?;
    let tol = float_tol(tol)?;
    let (count, max, first) = if tol.is_none() {
        let m: MomentSequence<Rat> = load_moments(moments)?;
        let j: JumpData<Rat> = load_jumps(jumps)?;
        let report = verify_recurrence(&op, &m, &j)?;
        let (max, first) = recurrence_verdict(&report, None);
        (report.mu.len(), max, first)
    } else {
        let m: MomentSequence<f64> = load_moments(moments)?;
        let j: JumpData<f64> = load_jumps(jumps)?;
        let report = verify_recurrence(&op, &m, &j)?;
        let (max, first) = recurrence_verdict(&report, tol);
        (report.mu.len(), max, first)
    };
    let mut r = Report::new();
    r.add("mode", if tol.is_none() { "exact" } else { "double" });
    r.add("checked", format!("k=0..{}", count as i64 - 1));
    r.add("max_residual", max);
    r.add("first_failure", first.map_or("none".to_string(), |k| k.to_string()));
    r.add("status", if first.is_none() { "ok" } else { "FAIL" });
    Ok(Output {
        text: r.render(porcelain),
        failure: first.map(|k| format!("mu_{k} != eps_{k}")),
    })
}

pub fn moments(signal: &Path, operator: Option<&Path>, last: usize, tol: Option<f64>) -> Result<Output, CliError> {
    let spec = load_signal(signal)?;
    let op = operator.map(load_operator).transpose()?;
    if let Some(op) = &op {
        spec.check_against(op)?;
    }
    if spec.is_polynomial() {
        let m = exact_moments(&spec, last)?;
        return Ok(Output::ok(format!("# m_0 ..= m_{last}, exact\n{}", m.to_text())));
    }
    let op = op.ok_or_else(|| CliError::Input("initial-value pieces need --operator".into()))?;
    let tol = tol.unwrap_or(1e-12);
    let mut degree = 40;
    loop {
        match series_moments(&op, &spec, last, degree, tol) {
            Ok(s) => {
                return Ok(Output::ok(format!(
                    "# m_0 ..= m_{last}, series degree {degree}, error estimate {:.3e}\n{}",
                    s.error_estimate,
                    s.moments.to_text()
                )))
            }
            Err(Error::AccuracyNotMet { .. }) if degree < 640 => degree *= 2,
            Err(e) => return Err(e.into()),
        }
    }
}

fn exponent_list(exps: &[Exponent]) -> String {
    join(exps, ", ")
}

pub fn recurrence(operator: &Path, forward: Option<(&Path, &Path, usize)>, porcelain: bool) -> Result<Output, CliError> {
    let op = load_operator(operator)?;
    let analysis = op.infinity_analysis();
    let alpha = op.alpha();
    let lambda_cap = op.lambda_cap()?;
    let mut r = Report::new();
    r.add("order", op.order());
    r.add("alpha", alpha);
    for (ell, q) in op.q_polys() {
        r.add(format!("q[{ell}](k)"), q.display_in("k"));
    }
    r.add("lambda_cap", lambda_cap);
    r.add("fuchsian", analysis.fuchsian);
    r.add("indicial(s)", analysis.indicial.display_in("s"));
    r.add("exponents", format!("{{{}}}", exponent_list(&analysis.exponents)));
    r.add("lambda", analysis.lambda.map_or("none".to_string(), |l| l.to_string()));
    let mut text = r.render(porcelain);

    if let Some((moments, jumps, last)) = forward {
        let m: MomentSequence<Rat> = load_moments(moments)?;
        let j: JumpData<Rat> = load_jumps(jumps)?;
        j.check_order(&op)?;
        // The first instance solved must lie past every zero of q_alpha.
        let k0 = (lambda_cap as i64 + 1).max(-alpha).max(0);
        let seed_len = (k0 + alpha) as usize;
        if m.len() < seed_len {
            return Err(Error::InsufficientSeed(format!("need {seed_len} seed moments, got {}", m.len())).into());
        }
        let eps_last = (last as i64 - alpha).max(0) as usize;
        let eps: Vec<Rat> = (0..=eps_last).map(|k| epsilon_direct(&op, &j, k)).collect();
        let generated = generate_moments(&op, &eps, &m.values()[..seed_len], last)?;
        if porcelain {
            for (k, v) in generated.values().iter().enumerate() {
                text.push_str(&format!("m[{k}]={v}\n"));
            }
        } else {
            text.push_str(&format!("\n# m_0 ..= m_{last}, seeded with {seed_len} moments\n{}", generated.to_text()));
        }
    }
    Ok(Output::ok(text))
}

fn mgf_verdict<S: Scalar>(report: &MgfReport<S>, tol: Option<f64>) -> (String, Option<usize>) {
    match tol {
        None => (report.max_abs_residual().to_string(), report.first_failure(0.0)),
        Some(t) => {
            let res: Vec<f64> = report.residuals.iter().map(Scalar::to_f64).collect();
            let scale = report.lhs.iter().fold(0.0_f64, |m, v| m.max(v.magnitude()));
            let (max, first) = judge(&res, scale, t);
            (format!("{max:e}"), first.map(|i| i + 1))
        }
    }
}

fn mgf_rows<S: Scalar>(report: &MgfReport<S>, r: &mut Report) {
    let poly = if report.polynomial_part.is_empty() { "0".to_string() } else { join(&report.polynomial_part, " ") };
    r.add("polynomial_part", poly);
    for (xi, terms) in report.rational.poles.iter().zip(&report.rational.terms) {
        r.add(format!("pole[{xi}]"), join(terms, " "));
    }
}

pub fn mgf_check(operator: &Path, moments: &Path, jumps: &Path, order: usize, tol: Option<f64>, porcelain: bool) -> Result<Output, CliError> {
    let op = load_operator(operator)?;
    let tol = float_tol(tol)?;
    let mut r = Report::new();
    r.add("mode", if tol.is_none() { "exact" } else { "double" });
    r.add("order", order);
    let (max, first) = if tol.is_none() {
        let m: MomentSequence<Rat> = load_moments(moments)?;
        let j: JumpData<Rat> = load_jumps(jumps)?;
        let report = verify_mgf_ode(&op, &m, &j, order)?;
        mgf_rows(&report, &mut r);
        mgf_verdict(&report, None)
    } else {
        let m: MomentSequence<f64> = load_moments(moments)?;
        let j: JumpData<f64> = load_jumps(jumps)?;
        let report = verify_mgf_ode(&op, &m, &j, order)?;
        mgf_rows(&report, &mut r);
        mgf_verdict(&report, tol)
    };
    r.add("max_residual", max);
    r.add("first_failure", first.map_or("none".to_string(), |t| format!("z^-{t}")));
    r.add("status", if first.is_none() { "ok" } else { "FAIL" });
    Ok(Output {
        text: r.render(porcelain),
        failure: first.map(|t| format!("coefficient of z^-{t} differs")),
    })
}

/// `a:b:step`, inclusive of `b` up to rounding.
fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Input(format!("grid must be `a:b:step` with step > 0, got `{text}`"));
    let parts: Vec<f64> = text.split(':').map(|s| s.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_, _>>()?;
    let [a, b, step] = parts[..] else { return Err(bad()) };
    if !(a.is_finite() && b.is_finite() && step.is_finite() && step > 0.0 && b >= a) {
        return Err(bad());
    }
    let count = ((b - a) / step + 1e-9).floor() as usize;
    if count > 1_000_000 {
        return Err(CliError::Input(format!("grid `{text}` has more than a million points")));
    }
    Ok((0..=count).map(|i| a + step * i as f64).collect())
}

pub fn reconstruct(operator: &Path, moments: &Path, pmax: usize, grid: Option<&str>, porcelain: bool) -> Result<Output, CliError> {
    let op = load_operator(operator)?;
    let m: MomentSequence<f64> = load_moments(moments)?;
    let grid = grid.map(parse_grid).transpose()?;
    let rec = recover_jumps(&op, &m, pmax, &ReconstructionConfig::default())?;
    let check = residual_report(&op, &m, &rec.jumps)?;
    let est = &rec.estimate;
    let mut text = String::new();
    if porcelain {
        let mut r = Report::new();
        r.add("nodes", rec.jumps.nodes().len());
        r.add("rank", est.rank);
        r.add("multiplicities", join(&est.multiplicities, " "));
        r.add("condition", format!("{:e}", est.condition));
        r.add("fit_residual", format!("{:e}", rec.fit_residual));
        r.add("epsilon_residual", format!("{:e}", check.epsilon_residual));
        r.add("moment_residual", check.moment_residual.map_or("none".into(), |v| format!("{v:e}")));
        for (j, (xi, d)) in rec.jumps.nodes().iter().zip(rec.jumps.jumps()).enumerate() {
            r.add(format!("node[{j}]"), xi);
            r.add(format!("jump[{j}]"), join(d, " "));
        }
        text.push_str(&r.render(true));
    } else {
        // Diagnostics are comments, so the output is itself a jump file.
        text.push_str(&format!(
            "# {} nodes, Hankel rank {}, multiplicities [{}]\n",
            rec.jumps.nodes().len(),
            est.rank,
            join(&est.multiplicities, ", ")
        ));
        text.push_str(&format!(
            "# condition {:.3e}, fit residual {:.3e}, epsilon residual {:.3e}\n",
            est.condition, rec.fit_residual, check.epsilon_residual
        ));
        text.push_str(&rec.jumps.to_text());
    }
    if let Some(grid) = grid {
        let values = rebuild_signal(&op, &rec.jumps, &grid)?;
        for (i, (x, v)) in grid.iter().zip(&values).enumerate() {
            if porcelain {
                text.push_str(&format!("sample[{i}]={x} {v}\n"));
            } else {
                text.push_str(&format!("# f({x}) = {v}\n"));
            }
        }
    }
    Ok(Output::ok(text))
}

pub fn demo_legendre(m: usize, porcelain: bool) -> Result<Output, CliError> {
    let (op, pm) = legendre(m);
    let spec = PiecewiseSpec::polynomial(vec![rat(-1), rat(1)], vec![pm.clone()])?;
    let last = 2 * m + 12;
    let moments = exact_moments(&spec, last)?;
    let jumps = jump_data(&spec, op.order())?;
    let mu = epsilon_from_moments(&op, &moments)?;
    let eps: Vec<Rat> = (0..mu.len()).map(|k| epsilon_direct(&op, &jumps, k)).collect();
    let analysis = op.infinity_analysis();
    let lambda_cap = op.lambda_cap()?;
    let count = vanishing_count(&moments, 0.0).count;
    let report = bound_report(&op, 0, Some(spec.interval()))?;
    let fact = |k: usize| (1..=k).fold(Rat::one(), |acc, i| acc * rat(i as i64));
    let closed = powu(&rat(2), m as u64 + 1) * fact(m) * fact(m) / fact(2 * m + 1);

    let mut exps: Vec<Rat> = analysis
        .exponents
        .iter()
        .filter_map(|e| match e {
            Exponent::Rational(r) => Some(r.clone()),
            Exponent::Approximate(_) => None,
        })
        .collect();
    exps.sort_by(|a, b| b.cmp(a));
    let mut want_exps = vec![rat(m as i64 + 1), -rat(m as i64)];
    want_exps.dedup();

    let mut mismatches = Vec::new();
    let mut expect = |ok: bool, what: &str| {
        if !ok {
            mismatches.push(what.to_string());
        }
    };
    expect(mu.iter().all(Zero::is_zero), "mu_k not identically zero");
    expect(eps.iter().all(Zero::is_zero), "eps_k not identically zero");
    expect(lambda_cap == m as u64, "Lambda != m");
    expect(analysis.fuchsian, "operator not Fuchsian at infinity");
    expect(exps == want_exps && analysis.exponents.len() == want_exps.len(), "exponents != {m+1, -m}");
    expect(analysis.lambda == Some(m as u64 + 1), "lambda != m + 1");
    expect(count == m, "vanishing count != m");
    expect(moments.values()[m] == closed, "m_m differs from the closed form");
    expect(report.general == 3.max(m as i64), "general bound != max{3, m}");
    expect(m < 3 || report.general == count as i64, "bound not attained for m >= 3");

    let mut r = Report::new();
    r.add("operator", &op);
    r.add("signal", format!("P_{m}(x) = {pm} on [-1, 1]"));
    r.add("moments_checked", format!("m_0..m_{last}"));
    r.add("mu_identically_zero", mu.iter().all(Zero::is_zero));
    r.add("eps_identically_zero", eps.iter().all(Zero::is_zero));
    r.add("lambda_cap", lambda_cap);
    r.add("fuchsian", analysis.fuchsian);
    r.add("exponents", format!("{{{}}}", join(&exps, ", ")));
    r.add("vanishing_count", count);
    r.add(format!("m_{m}"), &moments.values()[m]);
    r.add("bound", report.general);
    r.add("status", if mismatches.is_empty() { "ok" } else { "FAIL" });
    Ok(Output {
        text: r.render(porcelain),
        failure: (!mismatches.is_empty()).then(|| mismatches.join("; ")),
    })
}
