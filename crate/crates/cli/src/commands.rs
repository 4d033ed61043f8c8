//! The data-producing commands: sweeps, kernel checks, norms, weight
//! certification, orbit export, Abel means and resolvents.

use std::io::Write;
use std::path::Path;

use cesaro_core::kernels::{doubling_check, kernel_semigroup_check, sharp_algebra_constant};
use cesaro_core::matrix::{DenseOperator, NormKind};
use cesaro_core::scalar::RealScalar;
use cesaro_core::weights::{certify_omega_alpha_loc, q_alpha_limit_check, q_norm, Weight};
use cesaro_core::{io as core_io, opcalc, special, FiniteSeq};

use crate::report::CheckRow;
use crate::CliError;

pub struct SweepRow {
    pub example: String,
    pub alpha: f64,
    pub n: usize,
    pub ratio: f64,
    pub norm: f64,
    pub bound: f64,
    pub pass: bool,
}

pub fn write_sweep_csv(rows: &[SweepRow], out: Option<&Path>) -> std::io::Result<()> {
    let mut body = String::from("example,alpha,n,ratio,norm,bound,pass\n");
    for r in rows {
        body.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.example, r.alpha, r.n, r.ratio, r.norm, r.bound, r.pass
        ));
    }
    match out {
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    }
}

pub fn parse_grid(grid: &Option<String>, default: &[f64]) -> Result<Vec<f64>, CliError> {
    let Some(text) = grid else {
        return Ok(default.to_vec());
    };
    let values: Result<Vec<f64>, _> =
        text.split(',').map(|t| t.trim().parse::<f64>()).collect();
    match values {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(CliError::Config(format!("malformed grid `{text}`"))),
    }
}

pub fn resolve_example(
    text: &str,
) -> Result<(String, DenseOperator<f64>), CliError> {
    if text == "assani" {
        return Ok(("assani".into(), opcalc::assani()));
    }
    if let Some(d_text) = text.strip_prefix("shiftblock:") {
        let d: usize = d_text
            .parse()
            .map_err(|_| CliError::Config(format!("bad shift block size `{d_text}`")))?;
        let m = opcalc::shift_block(d).map_err(CliError::from)?;
        return Ok((format!("shiftblock:{d}"), m));
    }
    Err(CliError::Config(format!(
        "unknown example `{text}` (expected assani or shiftblock:D)"
    )))
}

pub fn load_operator(
    example: &Option<String>,
    matrix: &Option<std::path::PathBuf>,
) -> Result<(String, DenseOperator<f64>), CliError> {
    match (example, matrix) {
        (Some(e), None) => resolve_example(e),
        (None, Some(path)) => {
            let file = std::fs::File::open(path).map_err(|e| CliError::Config(e.to_string()))?;
            let m = core_io::read_matrix_csv(std::io::BufReader::new(file))?;
            Ok((path.display().to_string(), m))
        }
        (None, None) => Ok(("assani".into(), opcalc::assani())),
        (Some(_), Some(_)) => {
            Err(CliError::Config("pass either --example or --matrix, not both".into()))
        }
    }
}

pub fn ratio_sweep_rows(
    example: &str,
    t: &DenseOperator<f64>,
    orders: &[f64],
    horizon: usize,
    kind: NormKind,
    bound: f64,
) -> Result<Vec<SweepRow>, CliError> {
    let mut rows = Vec::new();
    for &alpha in orders {
        let report = opcalc::cesaro_ratio_sweep(t, alpha, horizon, kind)?;
        let shifted = cesaro_core::KernelTable::new(&(alpha + 1.0), horizon)?;
        for (n, &ratio) in report.ratios.iter().enumerate() {
            rows.push(SweepRow {
                example: example.to_string(),
                alpha,
                n,
                ratio,
                norm: ratio * shifted.value(n),
                bound,
                pass: ratio <= bound,
            });
        }
    }
    Ok(rows)
}

pub fn abel_sweep_rows(
    example: &str,
    t: &DenseOperator<f64>,
    alpha: f64,
    gamma: f64,
    r_grid: &[f64],
    horizon: usize,
    kind: NormKind,
) -> Result<Vec<SweepRow>, CliError> {
    let rows = opcalc::abel_bound_check(t, alpha, gamma, r_grid, horizon.min(4096), 40_000, kind)?;
    Ok(rows
        .into_iter()
        .map(|row| SweepRow {
            example: format!("{example}:r={}", row.r),
            alpha,
            n: row.terms,
            ratio: row.norm / row.bound,
            norm: row.norm,
            bound: row.bound,
            pass: row.pass,
        })
        .collect())
}

pub fn resolvent_sweep_rows(
    example: &str,
    t: &DenseOperator<f64>,
    alpha: f64,
    lambda_grid: &[f64],
    horizon: usize,
) -> Result<Vec<SweepRow>, CliError> {
    let mut rows = Vec::new();
    for &lambda in lambda_grid {
        let report = opcalc::pseudo_resolvent(t, &alpha, &lambda, horizon)?;
        let bound = report.tail_bound + 1e-10;
        rows.push(SweepRow {
            example: format!("{example}:lambda={lambda}"),
            alpha,
            n: horizon,
            ratio: report.inverse_defect / bound,
            norm: report.inverse_defect,
            bound,
            pass: report.inverse_defect <= bound,
        });
    }
    Ok(rows)
}

pub fn weight_sweep_rows(
    alpha: f64,
    beta_grid: &[f64],
    p_max: usize,
) -> Result<Vec<SweepRow>, CliError> {
    let mut rows = Vec::new();
    for &beta in beta_grid {
        let phi = Weight::cesaro(&beta, 2 * p_max)?;
        let report = certify_omega_alpha_loc(&phi, &alpha, p_max)?;
        let growth = dyadic_growth(&report.dyadic_maxima);
        rows.push(SweepRow {
            example: format!("k^{beta}"),
            alpha,
            n: p_max,
            ratio: growth,
            norm: report.c_phi_estimate,
            bound: 1.5,
            pass: !report.violated,
        });
    }
    Ok(rows)
}

/// Growth of the running maximum across the last three doublings.
fn dyadic_growth(maxima: &[(usize, f64)]) -> f64 {
    if maxima.len() < 4 {
        return 1.0;
    }
    let tail = &maxima[maxima.len() - 4..];
    tail[3].1 / tail[0].1
}

pub fn kernel_checks<S: RealScalar>(
    alpha: &S,
    beta: &S,
    horizon: usize,
) -> cesaro_core::Result<Vec<CheckRow>> {
    let tolerance = if S::MODE == cesaro_core::ScalarMode::ExactRational { 0.0 } else { 1e-12 };
    let mut rows = Vec::new();
    let semigroup = kernel_semigroup_check(alpha, beta, horizon)?;
    rows.push(CheckRow::new(
        "kernel-semigroup",
        "k^a * k^b = k^(a+b)",
        semigroup.max_abs_defect.abs_f64(),
        tolerance,
    ));
    let doubling = doubling_check(alpha, horizon)?;
    rows.push(
        CheckRow::value(
            "doubling-ratio",
            "k^a(2n) <= C_a k^a(n)",
            doubling.max_ratio.to_f64(),
        )
        .with_pass(doubling.ratio_violations.is_empty() && doubling.sharp_violations.is_empty()),
    );
    Ok(rows)
}

pub fn norm_checks<S: RealScalar>(
    seq_text: &str,
    alpha: &S,
    phi_spec: &Option<String>,
    grid: &Option<String>,
) -> Result<Vec<CheckRow>, CliError> {
    let coeffs: Result<Vec<S>, CliError> = seq_text
        .split(',')
        .map(|t| {
            S::parse(t.trim()).ok_or_else(|| CliError::Config(format!("bad entry `{t}`")))
        })
        .collect();
    let f = FiniteSeq::from_coeffs(coeffs?);
    let end = f.support_end().unwrap_or(0);
    let phi = resolve_weight::<S>(phi_spec, alpha, end)?;
    let value = q_norm(&f, &phi, alpha)?;
    let mut rows = vec![CheckRow::value(
        "q-norm",
        "q_phi(f) = sum_n phi(n) |W^a f(n)|",
        value.to_f64(),
    )];
    if let Some(grid_text) = grid {
        if S::MODE != cesaro_core::ScalarMode::Float64 {
            return Err(CliError::Config(
                "--grid limit checks need --mode float".into(),
            ));
        }
        let orders = parse_grid(&Some(grid_text.clone()), &[])?;
        let f64_coeffs: Vec<f64> = f.coeffs().iter().map(|c| c.to_f64()).collect();
        let report = q_alpha_limit_check(&FiniteSeq::from_coeffs(f64_coeffs), &orders)?;
        let last = report.values.last().expect("grid nonempty").1;
        rows.push(
            CheckRow::new(
                "q-limit",
                "q_a(f) -> l1 norm of f as a -> 0",
                (last - report.l1).abs(),
                1e-6,
            )
            .with_pass(report.ok.unwrap_or(true)),
        );
    }
    Ok(rows)
}

pub fn resolve_weight<S: RealScalar>(
    phi_spec: &Option<String>,
    alpha: &S,
    horizon: usize,
) -> Result<Weight<S>, CliError> {
    let Some(spec) = phi_spec else {
        return Ok(Weight::cesaro(&(alpha.clone() + S::one()), horizon)?);
    };
    if let Some(gamma_text) = spec.strip_prefix("kernel:") {
        let gamma = S::parse(gamma_text)
            .ok_or_else(|| CliError::Config(format!("bad kernel order `{gamma_text}`")))?;
        return Ok(Weight::cesaro(&gamma, horizon)?);
    }
    if let Some(rest) = spec.strip_prefix("kernelexp:") {
        let (gamma_text, factor_text) = rest
            .split_once(':')
            .ok_or_else(|| CliError::Config("expected kernelexp:GAMMA:FACTOR".into()))?;
        let gamma = S::parse(gamma_text)
            .ok_or_else(|| CliError::Config(format!("bad kernel order `{gamma_text}`")))?;
        let factor = S::parse(factor_text)
            .ok_or_else(|| CliError::Config(format!("bad factor `{factor_text}`")))?;
        return Ok(Weight::kernel_times_factor(&gamma, &factor, horizon)?);
    }
    if let Some(path) = spec.strip_prefix("csv:") {
        let file = std::fs::File::open(path).map_err(|e| CliError::Config(e.to_string()))?;
        return Ok(core_io::read_weight_csv(std::io::BufReader::new(file))?);
    }
    Err(CliError::Config(format!(
        "unknown weight spec `{spec}` (kernel:G, kernelexp:G:R or csv:PATH)"
    )))
}

pub fn weights_checks<S: RealScalar>(
    phi_spec: &Option<String>,
    alpha: &S,
    p_max: usize,
) -> Result<Vec<CheckRow>, CliError> {
    let phi = resolve_weight::<S>(phi_spec, alpha, 2 * p_max)?;
    let report = certify_omega_alpha_loc(&phi, alpha, p_max)?;
    let growth: Vec<(usize, f64)> =
        report.dyadic_maxima.iter().map(|(h, v)| (*h, v.to_f64())).collect();
    let af = alpha.to_f64();
    let sharp = if af < 1.0 { sharp_algebra_constant(af) } else { f64::INFINITY };
    let rows = vec![
        CheckRow::value(
            "certified-constant",
            "(two-window k^a convolution) <= c phi(j) phi(p)",
            report.c_phi_estimate.to_f64(),
        )
        .with_pass(!report.violated && report.c_phi_estimate.to_f64() <= sharp),
        CheckRow::new(
            "dyadic-growth",
            "running max of c(j,p) stays bounded over doubling horizons",
            dyadic_growth(&growth),
            1.5,
        )
        .with_pass(!report.violated),
    ];
    Ok(rows)
}

pub fn orbit_csv(
    t: &DenseOperator<f64>,
    alpha: f64,
    horizon: usize,
    kind: NormKind,
    out: Option<&Path>,
) -> Result<opcalc::RatioReport, CliError> {
    let report = opcalc::cesaro_ratio_sweep(t, alpha, horizon, kind)?;
    let shifted = cesaro_core::KernelTable::new(&(alpha + 1.0), horizon)?;
    let rows: Vec<(usize, f64, f64)> = report
        .ratios
        .iter()
        .enumerate()
        .map(|(n, &ratio)| (n, ratio, ratio * shifted.value(n)))
        .collect();
    match out {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|e| CliError::Config(e.to_string()))?;
            core_io::write_orbit_csv(std::io::BufWriter::new(file), &rows)?;
        }
        None => core_io::write_orbit_csv(std::io::stdout().lock(), &rows)?,
    }
    Ok(report)
}

pub fn abel_checks(
    example: &str,
    t: &DenseOperator<f64>,
    alpha: f64,
    gamma: f64,
    r_grid: &[f64],
    horizon: usize,
    kind: NormKind,
) -> Result<Vec<CheckRow>, CliError> {
    let mut rows = Vec::new();
    for &r in r_grid {
        let report = opcalc::abel_subordination_defect(t, alpha, r, horizon)?;
        rows.push(CheckRow::new(
            format!("abel-subordination:r={r}"),
            "(1-r) sum r^n T^n = (1-r)^(a+1) sum r^n D^-a T(n)",
            report.defect,
            report.tail_bound + 1e-10,
        ));
    }
    for row in opcalc::abel_bound_check(t, alpha, gamma, r_grid, horizon.min(4096), 40_000, kind)? {
        rows.push(
            CheckRow::value(
                format!("abel-bound:{example}:r={}", row.r),
                "||A_r(T)|| <= C (1-r)^-(gamma-alpha)",
                row.norm,
            )
            .with_pass(row.pass),
        );
    }
    Ok(rows)
}

pub fn resolvent_checks(
    example: &str,
    t: &DenseOperator<f64>,
    alpha: f64,
    lambda_grid: &[f64],
    horizon: usize,
) -> Result<Vec<CheckRow>, CliError> {
    let mut rows = Vec::new();
    for &lambda in lambda_grid {
        let report = opcalc::pseudo_resolvent(t, &alpha, &lambda, horizon)?;
        rows.push(CheckRow::new(
            format!("resolvent-inverse:{example}:lambda={lambda}"),
            "R(lambda)(lambda I - T) = I",
            report.inverse_defect,
            report.tail_bound + 1e-10,
        ));
    }
    if lambda_grid.len() >= 2 {
        let (la, mu) = (lambda_grid[0], lambda_grid[1]);
        let pair = opcalc::pseudo_resolvent_hilbert_defect(t, &alpha, &la, &mu, horizon)?;
        rows.push(CheckRow::new(
            format!("resolvent-hilbert:lambda={la},mu={mu}"),
            "(mu-lambda) R(lambda) R(mu) = R(lambda) - R(mu)",
            pair.defect,
            pair.tail_bound + 1e-10,
        ));
    }
    for &lambda in lambda_grid {
        if lambda.abs() > t.max_row_norm() {
            let cross = opcalc::theta_p_lambda_check(t, alpha, lambda, horizon)?;
            rows.push(CheckRow::new(
                format!("theta-resolvent:lambda={lambda}"),
                "theta(p_lambda) = (lambda - T)^-1",
                cross.defect,
                cross.tail_bound + 1e-10,
            ));
        }
        if lambda.abs() > 1.0 {
            let eigen = special::p_lambda_weyl_check(lambda, alpha, horizon)?;
            rows.push(CheckRow::new(
                format!("weyl-eigenvalue:lambda={lambda}"),
                "W^a p_lambda = ((lambda-1)/lambda)^a p_lambda",
                eigen.max_defect,
                eigen.tail_bound + 1e-10,
            ));
        }
    }
    Ok(rows)
}

