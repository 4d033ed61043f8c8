//! The operator side: Cesaro orbits of a square matrix, the functional
//! equation characterizing them, the induced algebra homomorphism theta,
//! pseudo-resolvents, Abel means, growth diagnostics, and the example
//! gallery.
//!
//! Exact-mode defects use the max-row-sum norm so a zero defect is a
//! rational identity, not a float coincidence. Float-mode series
//! truncations extrapolate the observed step ratio of the table norms
//! geometrically beyond the horizon; that extrapolation is a recorded
//! finite-horizon assumption, and every report carries the tail bound it
//! produced.

// Index ranges over shared tables read better than iterator chains here.
#![allow(clippy::needless_range_loop)]

use crate::error::{Error, Result};
use crate::kernels::KernelTable;
use crate::matrix::{DenseOperator, NormKind};
use crate::scalar::{ensure_nonnegative_order, RealScalar, ScalarMode};
use crate::seq::{weyl_difference, FiniteSeq};
use crate::special::p_lambda_truncated;

/// The table `{D^{-a} T(n)}_{n=0..N}` for one operator and order.
#[derive(Clone, Debug)]
pub struct CesaroOrbit<S: RealScalar> {
    operator: DenseOperator<S>,
    alpha: S,
    table: Vec<DenseOperator<S>>,
    kernel: KernelTable<S>,
    norm_kind: NormKind,
}

impl<S: RealScalar> CesaroOrbit<S> {
    pub fn operator(&self) -> &DenseOperator<S> {
        &self.operator
    }

    pub fn alpha(&self) -> &S {
        &self.alpha
    }

    pub fn horizon(&self) -> usize {
        self.table.len() - 1
    }

    pub fn entry(&self, n: usize) -> &DenseOperator<S> {
        &self.table[n]
    }

    pub fn table(&self) -> &[DenseOperator<S>] {
        &self.table
    }

    pub fn kernel(&self) -> &KernelTable<S> {
        &self.kernel
    }

    pub fn norm_kind(&self) -> NormKind {
        self.norm_kind
    }

    pub fn with_norm_kind(mut self, kind: NormKind) -> Self {
        self.norm_kind = kind;
        self
    }

    /// Table norms under the orbit's norm kind.
    pub fn norms_f64(&self) -> Vec<f64> {
        self.table.iter().map(|m| m.norm_f64(self.norm_kind)).collect()
    }
}

/// Builds `D^{-a} T(n) = sum_{j<=n} k^a(n-j) T^j` for `n <= horizon`.
/// Powers are accumulated once; memory is one matrix per table entry.
pub fn cesaro_orbit<S: RealScalar>(
    t: &DenseOperator<S>,
    alpha: &S,
    horizon: usize,
) -> Result<CesaroOrbit<S>> {
    ensure_nonnegative_order(alpha)?;
    let kernel = KernelTable::new(alpha, horizon)?;
    let dim = t.dim();
    let mut table = vec![DenseOperator::zeros(dim); horizon + 1];
    let mut power = DenseOperator::identity(dim);
    for j in 0..=horizon {
        if j > 0 {
            power = t.matmul(&power);
        }
        for n in j..=horizon {
            table[n].axpy(kernel.value(n - j), &power);
        }
    }
    let norm_kind =
        if S::MODE == ScalarMode::ExactRational { NormKind::MaxRow } else { NormKind::Spectral };
    Ok(CesaroOrbit { operator: t.clone(), alpha: alpha.clone(), table, kernel, norm_kind })
}

/// Defect of the functional equation at one pair `(n, m)`:
/// `T_n T_m = sum_{u=m}^{n+m} k^a(n+m-u) T_u - sum_{u=0}^{n-1} k^a(n+m-u) T_u`.
/// Max-row norm of the difference; exactly zero for genuine orbits.
pub fn functional_equation_defect<S: RealScalar>(
    orbit: &CesaroOrbit<S>,
    n: usize,
    m: usize,
) -> Result<S> {
    functional_equation_defect_of(&orbit.table, &orbit.kernel, n, m)
}

fn functional_equation_defect_of<S: RealScalar>(
    table: &[DenseOperator<S>],
    kernel: &KernelTable<S>,
    n: usize,
    m: usize,
) -> Result<S> {
    let horizon = table.len() - 1;
    if n < 1 || n + m > horizon {
        return Err(Error::IndexOutOfRange(format!(
            "need 1 <= n and n+m <= {horizon}, got n={n}, m={m}"
        )));
    }
    let lhs = table[n].matmul(&table[m]);
    let dim = lhs.dim();
    let mut rhs = DenseOperator::zeros(dim);
    for u in m..=(n + m) {
        rhs.axpy(kernel.value(n + m - u), &table[u]);
    }
    for u in 0..n {
        let neg = -kernel.value(n + m - u).clone();
        rhs.axpy(&neg, &table[u]);
    }
    Ok(lhs.sub(&rhs).max_row_norm())
}

/// Max functional-equation defect over all `n >= 1`, `m >= 0` with
/// `n + m <= sum_max`.
pub fn functional_equation_max_defect<S: RealScalar>(
    orbit: &CesaroOrbit<S>,
    sum_max: usize,
) -> Result<S> {
    if sum_max > orbit.horizon() {
        return Err(Error::IndexOutOfRange(format!(
            "sweep bound {sum_max} exceeds orbit horizon {}",
            orbit.horizon()
        )));
    }
    let mut worst = S::zero();
    for n in 1..=sum_max {
        for m in 0..=(sum_max - n) {
            let d = functional_equation_defect(orbit, n, m)?;
            if d > worst {
                worst = d;
            }
        }
    }
    Ok(worst)
}

#[derive(Clone, Debug)]
pub struct GeneratorReport<S: RealScalar> {
    pub generator: DenseOperator<S>,
    /// Max of `||table[n] - rebuilt[n]||` over the table.
    pub max_defect: S,
}

/// Recovers the generator `T = T_1 - a I` from a table satisfying the
/// functional equation, rebuilds its orbit and reports the round-trip
/// defect; exactly zero when the table is a genuine orbit.
pub fn reconstruct_generator<S: RealScalar>(
    table: &[DenseOperator<S>],
    alpha: &S,
) -> Result<GeneratorReport<S>> {
    ensure_nonnegative_order(alpha)?;
    if table.is_empty() || !table[0].is_identity() {
        return Err(Error::NotIdentityAtZero);
    }
    if table.len() < 2 {
        return Err(Error::IndexOutOfRange("need at least indices 0 and 1".into()));
    }
    let dim = table[0].dim();
    let generator = table[1].sub(&DenseOperator::identity(dim).scale(alpha));
    let rebuilt = cesaro_orbit(&generator, alpha, table.len() - 1)?;
    let mut max_defect = S::zero();
    for (got, want) in rebuilt.table.iter().zip(table) {
        let d = got.sub(want).max_row_norm();
        if d > max_defect {
            max_defect = d;
        }
    }
    Ok(GeneratorReport { generator, max_defect })
}

/// Growth diagnostic of an orbit.
#[derive(Clone, Debug)]
pub struct RatioReport {
    /// `||table[n]|| / k^(a+1)(n)` for each n.
    pub ratios: Vec<f64>,
    pub sup: f64,
    /// Least-squares slope of `log ratio` against `log n` over the upper
    /// half of the window; near zero for bounded orbits.
    pub trend_slope: f64,
    pub norm_kind: NormKind,
}

fn ratio_report(norms: &[f64], normalizer: &[f64], kind: NormKind) -> RatioReport {
    let ratios: Vec<f64> = norms.iter().zip(normalizer).map(|(n, k)| n / k).collect();
    let sup = ratios.iter().cloned().fold(0.0f64, f64::max);
    let n_max = ratios.len() - 1;
    let mut pts = Vec::new();
    for n in (n_max / 2).max(1)..=n_max {
        if ratios[n] > 0.0 {
            pts.push(((n as f64).ln(), ratios[n].ln()));
        }
    }
    let trend_slope = if pts.len() < 2 {
        f64::NAN
    } else {
        let len = pts.len() as f64;
        let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / len;
        let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / len;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
        sxy / sxx
    };
    RatioReport { ratios, sup, trend_slope, norm_kind: kind }
}

/// Ratios `||D^{-a} T(n)|| / k^(a+1)(n)` with the orbit's norm kind; the
/// boundedness diagnostic for Cesaro-bounded operators.
pub fn c_alpha_ratio<S: RealScalar>(orbit: &CesaroOrbit<S>) -> Result<RatioReport> {
    let shifted = KernelTable::new(&(orbit.alpha.clone() + S::one()), orbit.horizon())?;
    let normalizer: Vec<f64> = shifted.values().iter().map(|v| v.to_f64()).collect();
    Ok(ratio_report(&orbit.norms_f64(), &normalizer, orbit.norm_kind))
}

/// Streaming ratio sweep for float orbits. Orders 0 and 1 run in constant
/// memory (powers, respectively running sums); other orders build the full
/// table and refuse when that would exceed roughly 1.5 GB.
pub fn cesaro_ratio_sweep(
    t: &DenseOperator<f64>,
    alpha: f64,
    horizon: usize,
    kind: NormKind,
) -> Result<RatioReport> {
    ensure_nonnegative_order(&alpha)?;
    let dim = t.dim();
    if alpha == 0.0 || alpha == 1.0 {
        let shifted = KernelTable::new(&(alpha + 1.0), horizon)?;
        let mut norms = Vec::with_capacity(horizon + 1);
        let mut power = DenseOperator::<f64>::identity(dim);
        let mut running = power.clone();
        norms.push(if alpha == 0.0 { power.norm_f64(kind) } else { running.norm_f64(kind) });
        for _ in 1..=horizon {
            power = t.matmul(&power);
            if alpha == 0.0 {
                norms.push(power.norm_f64(kind));
            } else {
                running = running.add(&power);
                norms.push(running.norm_f64(kind));
            }
        }
        let normalizer: Vec<f64> = shifted.values().iter().map(|v| v.to_f64()).collect();
        return Ok(ratio_report(&norms, &normalizer, kind));
    }
    let bytes = dim * dim * (horizon + 1) * std::mem::size_of::<f64>();
    if bytes > 1_500_000_000 {
        return Err(Error::ResourceLimit(format!(
            "orbit table would need {bytes} bytes; lower the horizon or dimension"
        )));
    }
    let orbit = cesaro_orbit(t, &alpha, horizon)?.with_norm_kind(kind);
    c_alpha_ratio(&orbit)
}

/// The homomorphism applied to a finitely supported sequence:
/// `theta(f) = sum_n W^a f(n) D^{-a} T(n)`, a finite sum.
pub fn theta_apply<S: RealScalar>(
    f: &FiniteSeq<S>,
    orbit: &CesaroOrbit<S>,
) -> Result<DenseOperator<S>> {
    if let Some(end) = f.support_end() {
        if end > orbit.horizon() {
            return Err(Error::HorizonTooShort { needed: end, have: orbit.horizon() });
        }
    }
    let w = weyl_difference(f, &orbit.alpha)?;
    let mut acc = DenseOperator::zeros(orbit.operator.dim());
    if let Some(end) = w.support_end() {
        for n in 0..=end {
            let c = w.coeff(n);
            acc.axpy(&c, &orbit.table[n]);
        }
    }
    Ok(acc)
}

/// `||theta(f*g) - theta(f) theta(g)||`; exactly zero in exact mode.
pub fn theta_multiplicativity_defect<S: RealScalar>(
    f: &FiniteSeq<S>,
    g: &FiniteSeq<S>,
    orbit: &CesaroOrbit<S>,
) -> Result<S> {
    let combined = theta_apply(&f.convolve(g), orbit)?;
    let split = theta_apply(f, orbit)?.matmul(&theta_apply(g, orbit)?);
    Ok(combined.sub(&split).max_row_norm())
}

/// Defect of `T theta(Df) = (I - T) theta(f) - f(0) I`.
pub fn theta_difference_identity_defect<S: RealScalar>(
    f: &FiniteSeq<S>,
    orbit: &CesaroOrbit<S>,
) -> Result<S> {
    let t = &orbit.operator;
    let dim = t.dim();
    let lhs = t.matmul(&theta_apply(&f.delta(), orbit)?);
    let identity = DenseOperator::identity(dim);
    let rhs = identity
        .sub(t)
        .matmul(&theta_apply(f, orbit)?)
        .sub(&identity.scale(&f.coeff(0)));
    Ok(lhs.sub(&rhs).max_row_norm())
}

/// Defect of representing theta at two different orders:
/// `sum_n W^a f(n) D^{-a} T(n) = sum_n W^b f(n) D^{-b} T(n)`.
pub fn theta_order_independence_defect<S: RealScalar>(
    f: &FiniteSeq<S>,
    t: &DenseOperator<S>,
    alpha: &S,
    beta: &S,
    horizon: usize,
) -> Result<S> {
    if !(S::zero() < alpha.clone() && alpha < beta) {
        return Err(Error::OrderOutOfRange(format!(
            "need 0 < alpha < beta, got alpha={alpha}, beta={beta}"
        )));
    }
    let low = cesaro_orbit(t, alpha, horizon)?;
    let high = cesaro_orbit(t, beta, horizon)?;
    Ok(theta_apply(f, &low)?.sub(&theta_apply(f, &high)?).max_row_norm())
}

/// Geometric envelope `norms[n] <= scale * rate^n` fitted to observed table
/// norms; `rate` is the worst step ratio over the upper half of the window.
#[derive(Clone, Copy, Debug)]
pub struct GrowthEnvelope {
    pub rate: f64,
    pub scale: f64,
    /// Norm of the last table entry, the anchor for tail extrapolation.
    pub last_norm: f64,
}

pub fn growth_envelope(norms: &[f64]) -> GrowthEnvelope {
    let n_max = norms.len() - 1;
    let mut rate = 1.0f64;
    for n in (n_max / 2).max(1)..n_max {
        if norms[n] > 0.0 {
            rate = rate.max(norms[n + 1] / norms[n]);
        }
    }
    let mut scale = 0.0f64;
    let mut pw = 1.0f64;
    for &v in norms {
        scale = scale.max(v / pw);
        pw *= rate;
    }
    GrowthEnvelope { rate, scale, last_norm: norms[n_max] }
}

/// The convergence-precondition bound `max(1, max_n ||T_n||^(1/n)) * 1.25`.
pub fn growth_bound(norms: &[f64]) -> f64 {
    let mut a = 1.0f64;
    for (n, &v) in norms.iter().enumerate().skip(1) {
        if v > 0.0 {
            a = a.max(v.powf(1.0 / n as f64));
        }
    }
    a * 1.25
}

/// Tail `sum_{n > N} scale^-n ||T_n||` extrapolated geometrically from the
/// last included term. Requires the extrapolated ratio below `scale`.
fn series_tail(env: &GrowthEnvelope, scale: f64, horizon: usize) -> Result<f64> {
    let q = env.rate / scale;
    if q >= 1.0 {
        return Err(Error::NotConvergent(format!(
            "table norms grow by {} per step, not dominated by {scale}",
            env.rate
        )));
    }
    Ok(env.last_norm * scale.powi(-(horizon as i32)) * q / (1.0 - q))
}

#[derive(Clone, Debug)]
pub struct ResolventReport<S: RealScalar> {
    pub resolvent: DenseOperator<S>,
    /// `||R (lambda I - T) - I||` of the truncated resolvent.
    pub inverse_defect: f64,
    pub tail_bound: f64,
    /// The growth bound the precondition `|lambda| > a` was checked against.
    pub growth_estimate: f64,
}

/// Truncated pseudo-resolvent
/// `R = (lambda-1)^a lambda^-(a+1) sum_{n<=N} lambda^-n D^{-a}T(n)`.
/// Exact mode needs an integer order for the prefactor.
pub fn pseudo_resolvent<S: RealScalar>(
    t: &DenseOperator<S>,
    alpha: &S,
    lambda: &S,
    horizon: usize,
) -> Result<ResolventReport<S>> {
    let orbit = cesaro_orbit(t, alpha, horizon)?;
    resolvent_from_orbit(&orbit, lambda)
}

fn resolvent_prefactor<S: RealScalar>(alpha: &S, lambda: &S) -> Result<S> {
    let base = lambda.clone() - S::one();
    let num = base.try_pow(alpha)?;
    let den = lambda.try_pow(&(alpha.clone() + S::one()))?;
    Ok(num / den)
}

fn resolvent_from_orbit<S: RealScalar>(
    orbit: &CesaroOrbit<S>,
    lambda: &S,
) -> Result<ResolventReport<S>> {
    let norms: Vec<f64> = orbit.table.iter().map(|m| m.max_row_norm().to_f64()).collect();
    let growth_estimate = growth_bound(&norms);
    let la = lambda.abs().to_f64();
    if la <= growth_estimate {
        return Err(Error::NotConvergent(format!(
            "|lambda| = {la} must exceed the growth estimate {growth_estimate}"
        )));
    }
    let prefactor = resolvent_prefactor(&orbit.alpha, lambda)?;
    let dim = orbit.operator.dim();
    let inv = S::one() / lambda.clone();
    let mut sum = DenseOperator::zeros(dim);
    let mut pw = S::one();
    for entry in &orbit.table {
        sum.axpy(&pw, entry);
        pw = pw * inv.clone();
    }
    let resolvent = sum.scale(&prefactor);

    let identity = DenseOperator::identity(dim);
    let shifted = identity.scale(lambda).sub(&orbit.operator);
    let inverse_defect = resolvent.matmul(&shifted).sub(&identity).max_row_norm().to_f64();

    let env = growth_envelope(&norms);
    let series_tail = series_tail(&env, la, orbit.horizon())?;
    let tail_bound =
        prefactor.abs_f64() * series_tail * shifted.max_row_norm().to_f64();

    Ok(ResolventReport { resolvent, inverse_defect, tail_bound, growth_estimate })
}

#[derive(Clone, Debug)]
pub struct HilbertPairReport {
    pub defect: f64,
    pub tail_bound: f64,
}

/// Defect of the Hilbert equation
/// `(mu - lambda) R(lambda) R(mu) = R(lambda) - R(mu)` for two truncated
/// resolvents of the same orbit, with the combined truncation tails.
pub fn pseudo_resolvent_hilbert_defect<S: RealScalar>(
    t: &DenseOperator<S>,
    alpha: &S,
    lambda: &S,
    mu: &S,
    horizon: usize,
) -> Result<HilbertPairReport> {
    if lambda == mu {
        return Err(Error::EqualParameters);
    }
    let orbit = cesaro_orbit(t, alpha, horizon)?;
    let r_lambda = resolvent_from_orbit(&orbit, lambda)?;
    let r_mu = resolvent_from_orbit(&orbit, mu)?;

    let factor = mu.clone() - lambda.clone();
    let lhs = r_lambda.resolvent.matmul(&r_mu.resolvent).scale(&factor);
    let rhs = r_lambda.resolvent.sub(&r_mu.resolvent);
    let defect = lhs.sub(&rhs).max_row_norm().to_f64();

    let norms: Vec<f64> = orbit.table.iter().map(|m| m.max_row_norm().to_f64()).collect();
    let env = growth_envelope(&norms);
    let e_lambda = resolvent_prefactor(&orbit.alpha, lambda)?.abs_f64()
        * series_tail(&env, lambda.abs().to_f64(), horizon)?;
    let e_mu = resolvent_prefactor(&orbit.alpha, mu)?.abs_f64()
        * series_tail(&env, mu.abs().to_f64(), horizon)?;
    let n_lambda = r_lambda.resolvent.max_row_norm().to_f64() + e_lambda;
    let n_mu = r_mu.resolvent.max_row_norm().to_f64() + e_mu;
    let tail_bound = factor.abs_f64() * (e_lambda * n_mu + n_lambda * e_mu + e_lambda * e_mu)
        + e_lambda
        + e_mu;

    Ok(HilbertPairReport { defect, tail_bound })
}

#[derive(Clone, Debug)]
pub struct ThetaResolventReport {
    pub defect: f64,
    pub tail_bound: f64,
}

/// Cross-check `theta(p_lambda) = (lambda I - T)^{-1}`: theta applied to a
/// truncation of `p_lambda` against the direct inverse.
pub fn theta_p_lambda_check(
    t: &DenseOperator<f64>,
    alpha: f64,
    lambda: f64,
    horizon: usize,
) -> Result<ThetaResolventReport> {
    let la = lambda.abs();
    if la <= t.max_row_norm() {
        return Err(Error::NotSummable(format!(
            "|lambda| = {la} must exceed the operator norm {}",
            t.max_row_norm()
        )));
    }
    let orbit = cesaro_orbit(t, &alpha, horizon)?;
    let truncated = p_lambda_truncated(&lambda, horizon)?.into_truncated();
    let theta = theta_apply(&truncated, &orbit)?;
    let dim = t.dim();
    let inverse = DenseOperator::identity(dim).scale(&lambda).sub(t).inverse()?;
    let defect = theta.sub(&inverse).max_row_norm().to_f64();

    // theta(p - p_truncated) summed against |W^a tail| <= 2^m
    // |lambda|^-(max(n,N+1)+1) / (1 - 1/|lambda|).
    let norms: Vec<f64> = orbit.table.iter().map(|m| m.max_row_norm().to_f64()).collect();
    let env = growth_envelope(&norms);
    let m = alpha.floor() as i32 + 1;
    let damping = 2f64.powi(m) / (1.0 - 1.0 / la);
    let head: f64 = norms.iter().sum::<f64>() * la.powi(-(horizon as i32 + 2));
    let q = env.rate / la;
    if q >= 1.0 {
        return Err(Error::NotConvergent(format!(
            "orbit grows by {} per step, not dominated by {la}",
            env.rate
        )));
    }
    let tail: f64 = env.last_norm * la.powi(-(horizon as i32 + 1)) * q / (1.0 - q);
    let tail_bound = damping * (head + tail);
    Ok(ThetaResolventReport { defect, tail_bound })
}

#[derive(Clone, Debug)]
pub struct DoubleZReport {
    pub defect: f64,
    pub tail_bound: f64,
    pub pass: bool,
}

/// Double-transform identity for a scalar sequence against an operator
/// table: `sum_n lambda^-n sum_m mu^-m (f * S(n+.))(m)` equals
/// `(mu f~(mu) S~(lambda) - lambda f~(mu) S~(mu)) / (mu - lambda)`, both
/// sides truncated at the table horizon.
pub fn double_z_identity_defect(
    f: &FiniteSeq<f64>,
    table: &[DenseOperator<f64>],
    lambda: f64,
    mu: f64,
) -> Result<DoubleZReport> {
    if table.is_empty() {
        return Err(Error::IndexOutOfRange("empty table".into()));
    }
    if lambda.abs() <= mu.abs() {
        return Err(Error::NotConvergent(format!(
            "need |lambda| > |mu|, got lambda={lambda}, mu={mu}"
        )));
    }
    let horizon = table.len() - 1;
    let dim = table[0].dim();
    let norms: Vec<f64> = table.iter().map(|m| m.max_row_norm().to_f64()).collect();
    let env = growth_envelope(&norms);
    let q = env.rate / mu.abs();
    if q >= 1.0 {
        return Err(Error::NotConvergent(format!(
            "table norms grow by {} per step, not dominated by |mu| = {}",
            env.rate,
            mu.abs()
        )));
    }

    let f_end = f.support_end().unwrap_or(0);
    // lhs = sum_{n+m <= N} lambda^-n mu^-m sum_{j <= min(m, end f)} f(j) S(n+m-j)
    let mut lhs = DenseOperator::<f64>::zeros(dim);
    let mut lam_pow = 1.0f64;
    for n in 0..=horizon {
        let mut mu_pow = 1.0f64;
        for m in 0..=(horizon - n) {
            let mut coeffs_times_table = DenseOperator::<f64>::zeros(dim);
            for j in 0..=m.min(f_end) {
                let c = f.coeff(j);
                if c != 0.0 {
                    coeffs_times_table.axpy(&c, &table[n + m - j]);
                }
            }
            lhs.axpy(&(lam_pow * mu_pow), &coeffs_times_table);
            mu_pow /= mu;
        }
        lam_pow /= lambda;
    }

    let transform = |z: f64| -> DenseOperator<f64> {
        let mut acc = DenseOperator::<f64>::zeros(dim);
        let mut pw = 1.0f64;
        for entry in table {
            acc.axpy(&pw, entry);
            pw /= z;
        }
        acc
    };
    let f_mu = crate::special::z_transform(f, &mu)?;
    let s_lambda = transform(lambda);
    let s_mu = transform(mu);
    let rhs = s_lambda
        .scale(&mu)
        .sub(&s_mu.scale(&lambda))
        .scale(&(f_mu / (mu - lambda)));

    let defect = lhs.sub(&rhs).max_row_norm().to_f64();

    // Dropped double-sum terms have n+m > N and are dominated by
    // ||f||_1 * envelope(n+m) |mu|^-(n+m) with n+m terms of multiplicity k+1.
    let l1 = f.l1_norm_f64();
    let n_f = horizon as f64;
    let drop_tail = l1
        * env.scale
        * q.powi(horizon as i32 + 1)
        * ((n_f + 2.0) - (n_f + 1.0) * q)
        / ((1.0 - q) * (1.0 - q));
    // Transform tails on the right-hand side.
    let tail_mu = series_tail(&env, mu.abs(), horizon)?;
    let tail_lambda = series_tail(&env, lambda.abs(), horizon)?;
    let rhs_tail = (f_mu.abs() / (mu - lambda).abs())
        * (mu.abs() * tail_lambda + lambda.abs() * tail_mu);
    let tail_bound = drop_tail + rhs_tail;

    Ok(DoubleZReport { defect, tail_bound, pass: defect <= tail_bound + 1e-8 })
}

#[derive(Clone, Debug)]
pub struct AbelReport {
    pub mean: DenseOperator<f64>,
    pub tail_bound: f64,
    pub terms: usize,
}

/// Truncated Abel mean `(1-r) sum_{n<=N} r^n T^n`.
pub fn abel_mean(t: &DenseOperator<f64>, r: f64, horizon: usize) -> Result<AbelReport> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::OrderOutOfRange(format!("need 0 <= r < 1, got {r}")));
    }
    let dim = t.dim();
    let mut power = DenseOperator::<f64>::identity(dim);
    let mut sum = power.clone();
    let mut norms = vec![1.0f64];
    let mut r_pow = 1.0f64;
    for _ in 1..=horizon {
        power = t.matmul(&power);
        r_pow *= r;
        sum.axpy(&r_pow, &power);
        norms.push(power.max_row_norm());
    }
    let mean = sum.scale(&(1.0 - r));
    let tail_bound = if r == 0.0 {
        0.0
    } else {
        let env = growth_envelope(&norms);
        let q = r * env.rate;
        if q >= 1.0 {
            return Err(Error::NotConvergent(format!(
                "power norms grow by {} per step; r = {r} does not damp them",
                env.rate
            )));
        }
        (1.0 - r) * env.last_norm * r.powi(horizon as i32) * q / (1.0 - q)
    };
    Ok(AbelReport { mean, tail_bound, terms: horizon + 1 })
}

/// Abel mean through the resolvent: `((1-r)/r) (I/r - T)^{-1}`.
pub fn abel_mean_via_resolvent(t: &DenseOperator<f64>, r: f64) -> Result<DenseOperator<f64>> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::OrderOutOfRange(format!("need 0 <= r < 1, got {r}")));
    }
    let dim = t.dim();
    if r == 0.0 {
        return Ok(DenseOperator::identity(dim));
    }
    let shifted = DenseOperator::identity(dim).scale(&(1.0 / r)).sub(t);
    Ok(shifted.inverse()?.scale(&((1.0 - r) / r)))
}

#[derive(Clone, Debug)]
pub struct AbelSubordinationReport {
    pub defect: f64,
    pub tail_bound: f64,
}

/// Subordination of Abel means to Cesaro sums:
/// `(1-r) sum r^n T^n = (1-r)^(a+1) sum r^n D^{-a} T(n)`, both sides
/// truncated at the horizon with combined tail bounds.
pub fn abel_subordination_defect(
    t: &DenseOperator<f64>,
    alpha: f64,
    r: f64,
    horizon: usize,
) -> Result<AbelSubordinationReport> {
    let abel = abel_mean(t, r, horizon)?;
    let orbit = cesaro_orbit(t, &alpha, horizon)?;
    let dim = t.dim();
    let mut sum = DenseOperator::<f64>::zeros(dim);
    let mut r_pow = 1.0f64;
    for entry in &orbit.table {
        sum.axpy(&r_pow, entry);
        r_pow *= r;
    }
    let subordinated = sum.scale(&(1.0 - r).powf(alpha + 1.0));
    let defect = abel.mean.sub(&subordinated).max_row_norm();

    let orbit_norms: Vec<f64> = orbit.table.iter().map(|m| m.max_row_norm()).collect();
    let orbit_tail = if r == 0.0 {
        0.0
    } else {
        let env = growth_envelope(&orbit_norms);
        let q = r * env.rate;
        if q >= 1.0 {
            return Err(Error::NotConvergent(format!(
                "orbit norms grow by {} per step; r = {r} does not damp them",
                env.rate
            )));
        }
        (1.0 - r).powf(alpha + 1.0) * env.last_norm * r.powi(horizon as i32) * q / (1.0 - q)
    };
    Ok(AbelSubordinationReport { defect, tail_bound: abel.tail_bound + orbit_tail })
}

#[derive(Clone, Debug)]
pub struct AbelBoundRow {
    pub r: f64,
    pub norm: f64,
    pub bound: f64,
    pub pass: bool,
    pub terms: usize,
}

/// Checks `||A_r(T)|| <= C (1-r)^-(gamma-alpha) (1 + margin)` over an
/// r-grid, with `C` measured as the sup of the order-alpha orbit ratios
/// against `k^(gamma+1)` on `[0, ratio_horizon]`.
pub fn abel_bound_check(
    t: &DenseOperator<f64>,
    alpha: f64,
    gamma: f64,
    r_grid: &[f64],
    ratio_horizon: usize,
    abel_horizon: usize,
    kind: NormKind,
) -> Result<Vec<AbelBoundRow>> {
    if gamma < alpha {
        return Err(Error::OrderOutOfRange(format!(
            "need gamma >= alpha, got gamma={gamma}, alpha={alpha}"
        )));
    }
    let orbit = cesaro_orbit(t, &alpha, ratio_horizon)?.with_norm_kind(kind);
    let shifted = KernelTable::new(&(gamma + 1.0), ratio_horizon)?;
    let mut c = 0.0f64;
    for (n, norm) in orbit.norms_f64().iter().enumerate() {
        c = c.max(norm / shifted.value(n));
    }
    const MARGIN: f64 = 0.05;
    let mut rows = Vec::with_capacity(r_grid.len());
    for &r in r_grid {
        let report = abel_mean(t, r, abel_horizon)?;
        let norm = report.mean.norm_f64(kind);
        let bound = c * (1.0 - r).powf(-(gamma - alpha));
        let pass = norm <= bound * (1.0 + MARGIN) + report.tail_bound;
        rows.push(AbelBoundRow { r, norm, bound, pass, terms: report.terms });
    }
    Ok(rows)
}

/// Named example operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GalleryExample {
    /// The 2x2 matrix `[[-1, 2], [0, -1]]`: not power bounded, Cesaro
    /// bounded of order one.
    Assani,
    /// Block matrix `[[S, S-I], [0, S]]` of size `2d` over the truncated
    /// backward shift `S` on `d` coordinates; power norms grow like `2n`
    /// while the order-one Cesaro ratios stay bounded, for `n` small
    /// against `d`.
    ShiftBlock(usize),
}

pub fn assani<S: RealScalar>() -> DenseOperator<S> {
    DenseOperator::from_rows(vec![
        vec![S::from_int(-1), S::from_int(2)],
        vec![S::zero(), S::from_int(-1)],
    ])
    .expect("static shape")
}

pub fn shift_block<S: RealScalar>(d: usize) -> Result<DenseOperator<S>> {
    if d < 2 {
        return Err(Error::DimensionTooSmall { needed: 2, got: d });
    }
    let mut m = DenseOperator::zeros(2 * d);
    for i in 0..d {
        if i + 1 < d {
            // Backward shift: ones on the superdiagonal, in both diagonal
            // blocks and in the shift part of the upper-right block.
            m.set(i, i + 1, S::one());
            m.set(d + i, d + i + 1, S::one());
            m.set(i, d + i + 1, S::one());
        }
        // The -I part of the upper-right block S - I.
        m.set(i, d + i, -S::one());
    }
    Ok(m)
}

pub fn gallery<S: RealScalar>(example: GalleryExample) -> Result<DenseOperator<S>> {
    match example {
        GalleryExample::Assani => Ok(assani()),
        GalleryExample::ShiftBlock(d) => shift_block(d),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Rational, Scalar};
    use num::Zero;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    /// Closed form of the Assani orbit at order one:
    /// table[2m] = [[1, -2m], [0, 1]], table[2m+1] = [[0, 2m+2], [0, 0]].
    fn assani_orbit_closed_form(n: usize) -> DenseOperator<Rational> {
        let m = (n / 2) as i64;
        if n.is_multiple_of(2) {
            DenseOperator::from_rows(vec![
                vec![rat(1, 1), rat(-2 * m, 1)],
                vec![rat(0, 1), rat(1, 1)],
            ])
            .unwrap()
        } else {
            DenseOperator::from_rows(vec![
                vec![rat(0, 1), rat(2 * m + 2, 1)],
                vec![rat(0, 1), rat(0, 1)],
            ])
            .unwrap()
        }
    }

    #[test]
    fn orbit_of_identity_is_the_shifted_kernel() {
        let t = DenseOperator::<Rational>::identity(3);
        let alpha = rat(1, 2);
        let orbit = cesaro_orbit(&t, &alpha, 12).unwrap();
        let shifted = KernelTable::new(&rat(3, 2), 12).unwrap();
        for n in 0..=12usize {
            assert_eq!(orbit.entry(n), &t.scale(shifted.value(n)), "n={n}");
        }
    }

    #[test]
    fn orbit_of_zero_is_the_kernel() {
        let t = DenseOperator::<Rational>::zeros(2);
        let alpha = rat(3, 4);
        let orbit = cesaro_orbit(&t, &alpha, 8).unwrap();
        for n in 0..=8usize {
            assert_eq!(
                orbit.entry(n),
                &DenseOperator::identity(2).scale(orbit.kernel().value(n)),
                "n={n}"
            );
        }
    }

    #[test]
    fn assani_orbit_matches_closed_form() {
        let orbit = cesaro_orbit(&assani::<Rational>(), &rat(1, 1), 64).unwrap();
        for n in 0..=64usize {
            assert_eq!(orbit.entry(n), &assani_orbit_closed_form(n), "n={n}");
        }
    }

    #[test]
    fn functional_equation_holds_exactly() {
        let orbit = cesaro_orbit(&assani::<Rational>(), &rat(1, 1), 64).unwrap();
        assert!(functional_equation_max_defect(&orbit, 64).unwrap().is_zero());

        // (n, m) = (1, 0) reduces to T_1 T_0 = T_1.
        assert!(functional_equation_defect(&orbit, 1, 0).unwrap().is_zero());
    }

    #[test]
    fn perturbed_orbit_is_detected() {
        let mut orbit = cesaro_orbit(&assani::<Rational>(), &rat(1, 1), 16).unwrap();
        let bumped = orbit.table[3].add(&DenseOperator::identity(2));
        orbit.table[3] = bumped;
        let defect = functional_equation_max_defect(&orbit, 16).unwrap();
        assert!(defect >= rat(1, 1), "injected fault must be visible, got {defect}");
    }

    #[test]
    fn generator_round_trip() {
        let t = DenseOperator::from_rows(vec![
            vec![rat(1, 2), rat(-1, 3)],
            vec![rat(2, 1), rat(0, 1)],
        ])
        .unwrap();
        let alpha = rat(1, 2);
        let orbit = cesaro_orbit(&t, &alpha, 24).unwrap();
        let report = reconstruct_generator(orbit.table(), &alpha).unwrap();
        assert_eq!(report.generator, t);
        assert!(report.max_defect.is_zero());
    }

    #[test]
    fn generator_of_kernel_table_is_identity() {
        let alpha = rat(1, 2);
        let shifted = KernelTable::new(&rat(3, 2), 10).unwrap();
        let table: Vec<_> =
            (0..=10).map(|n| DenseOperator::identity(2).scale(shifted.value(n))).collect();
        let report = reconstruct_generator(&table, &alpha).unwrap();
        assert_eq!(report.generator, DenseOperator::identity(2));
        assert!(report.max_defect.is_zero());

        let bad = vec![DenseOperator::identity(2).scale(&rat(2, 1))];
        assert!(matches!(
            reconstruct_generator(&bad, &alpha),
            Err(Error::NotIdentityAtZero)
        ));
    }

    #[test]
    fn ratio_diagnostics_identity() {
        let orbit = cesaro_orbit(&DenseOperator::<f64>::identity(2), &1.0, 256).unwrap();
        let report = c_alpha_ratio(&orbit).unwrap();
        assert!((report.sup - 1.0).abs() < 1e-12);
        assert!(report.trend_slope.abs() < 1e-10);
    }

    #[test]
    fn assani_ratio_bounded_at_order_one_growing_at_order_zero() {
        let t = assani::<f64>();
        let bounded = cesaro_ratio_sweep(&t, 1.0, 2000, NormKind::Spectral).unwrap();
        assert!(bounded.sup <= 2.5);
        assert!(bounded.trend_slope.abs() < 0.02, "slope {}", bounded.trend_slope);

        let powers = cesaro_ratio_sweep(&t, 0.0, 2000, NormKind::Spectral).unwrap();
        assert!((powers.trend_slope - 1.0).abs() < 0.05, "slope {}", powers.trend_slope);
    }

    #[test]
    fn theta_reproduces_table_and_powers() {
        let t = DenseOperator::from_rows(vec![
            vec![rat(1, 3), rat(1, 1)],
            vec![rat(-1, 2), rat(1, 4)],
        ])
        .unwrap();
        let alpha = rat(1, 2);
        let orbit = cesaro_orbit(&t, &alpha, 16).unwrap();

        // theta(h_n^a) is the n-th table entry.
        for n in [0usize, 1, 5, 9] {
            let h = crate::special::h_seq(&alpha, n).unwrap();
            assert_eq!(&theta_apply(&h, &orbit).unwrap(), orbit.entry(n), "n={n}");
        }

        // theta(e_0) = I, theta(e_1) = T, theta(e_n) = T^n.
        assert!(theta_apply(&FiniteSeq::unit(0), &orbit).unwrap().is_identity());
        assert_eq!(theta_apply(&FiniteSeq::unit(1), &orbit).unwrap(), t);
        let mut power = DenseOperator::identity(2);
        for n in 1..=8usize {
            power = t.matmul(&power);
            assert_eq!(theta_apply(&FiniteSeq::unit(n), &orbit).unwrap(), power, "n={n}");
        }
    }

    #[test]
    fn theta_is_multiplicative() {
        let orbit = cesaro_orbit(&assani::<Rational>(), &rat(1, 1), 20).unwrap();
        let e1 = FiniteSeq::<Rational>::unit(1);
        assert!(theta_multiplicativity_defect(&e1, &e1, &orbit).unwrap().is_zero());

        let f = FiniteSeq::from_coeffs(vec![rat(1, 2), rat(0, 1), rat(-2, 3)]);
        let g = FiniteSeq::from_coeffs(vec![rat(3, 1), rat(1, 5)]);
        assert!(theta_multiplicativity_defect(&f, &g, &orbit).unwrap().is_zero());

        let e0 = FiniteSeq::<Rational>::unit(0);
        assert!(theta_multiplicativity_defect(&e0, &g, &orbit).unwrap().is_zero());
    }

    #[test]
    fn theta_difference_identity() {
        let t = DenseOperator::from_rows(vec![
            vec![rat(2, 5), rat(1, 1)],
            vec![rat(0, 1), rat(-1, 3)],
        ])
        .unwrap();
        let alpha = rat(3, 2);
        let orbit = cesaro_orbit(&t, &alpha, 16).unwrap();

        // f = e_0: De_0 = -e_0, the identity reduces to -T = (I-T) - I.
        assert!(theta_difference_identity_defect(&FiniteSeq::unit(0), &orbit)
            .unwrap()
            .is_zero());

        let h = crate::special::h_seq(&alpha, 6).unwrap();
        assert!(theta_difference_identity_defect(&h, &orbit).unwrap().is_zero());

        let f = FiniteSeq::from_coeffs(vec![rat(1, 7), rat(-2, 1), rat(1, 1), rat(4, 9)]);
        assert!(theta_difference_identity_defect(&f, &orbit).unwrap().is_zero());
    }

    #[test]
    fn theta_is_order_independent() {
        let t = assani::<Rational>();
        let f = FiniteSeq::<Rational>::unit(3);
        assert!(theta_order_independence_defect(&f, &t, &rat(1, 2), &rat(3, 2), 16)
            .unwrap()
            .is_zero());
        let g = FiniteSeq::from_coeffs(vec![rat(1, 1), rat(-1, 4), rat(2, 7)]);
        assert!(theta_order_independence_defect(&g, &t, &rat(1, 1), &rat(2, 1), 16)
            .unwrap()
            .is_zero());
        assert!(theta_order_independence_defect(&g, &t, &rat(2, 1), &rat(1, 2), 16).is_err());
    }

    #[test]
    fn resolvent_of_zero_operator() {
        let t = DenseOperator::<f64>::zeros(2);
        let report = pseudo_resolvent(&t, &1.0, &3.0, 80).unwrap();
        // R(lambda) = I / lambda up to truncation.
        let expected = DenseOperator::identity(2).scale(&(1.0 / 3.0));
        let err = report.resolvent.sub(&expected).max_row_norm();
        assert!(err <= report.tail_bound + 1e-12, "err={err}");
        assert!(report.inverse_defect <= report.tail_bound + 1e-10);
    }

    #[test]
    fn resolvent_matches_direct_inverse() {
        let t = assani::<f64>();
        let report = pseudo_resolvent(&t, &1.0, &4.0, 200).unwrap();
        assert!(report.inverse_defect <= report.tail_bound + 1e-10);

        let inverse = DenseOperator::identity(2).scale(&4.0).sub(&t).inverse().unwrap();
        let err = report.resolvent.sub(&inverse).max_row_norm();
        assert!(err <= report.tail_bound / (4.0 - t.max_row_norm()) + 1e-9);

        // Exact rational resolvent at integer order.
        let tr = assani::<Rational>();
        let exact = pseudo_resolvent(&tr, &rat(1, 1), &rat(4, 1), 60).unwrap();
        assert!(exact.inverse_defect <= exact.tail_bound + 1e-12);
    }

    #[test]
    fn resolvent_rejects_small_lambda() {
        let t = assani::<f64>();
        assert!(matches!(
            pseudo_resolvent(&t, &1.0, &1.1, 40),
            Err(Error::NotConvergent(_))
        ));
    }

    #[test]
    fn hilbert_equation_for_truncated_resolvents() {
        let t = assani::<f64>();
        let report = pseudo_resolvent_hilbert_defect(&t, &1.0, &4.0, &8.0, 200).unwrap();
        assert!(report.defect <= report.tail_bound + 1e-10, "{report:?}");
    }

    #[test]
    fn theta_on_geometric_sequences_gives_the_resolvent() {
        let t = assani::<f64>();
        for alpha in [0.5f64, 1.0] {
            let report = theta_p_lambda_check(&t, alpha, 5.0, 220).unwrap();
            assert!(report.defect <= report.tail_bound + 1e-10, "alpha={alpha}: {report:?}");
        }
    }

    #[test]
    fn double_transform_identity() {
        // One-term table: S(0) = I.
        let table = vec![DenseOperator::<f64>::identity(2)];
        let f = FiniteSeq::from_coeffs(vec![0.5, -1.0, 0.25]);
        let report = double_z_identity_defect(&f, &table, 8.0, 4.0).unwrap();
        assert!(report.pass, "{report:?}");

        // Assani orbit at order one, f = e_1.
        let orbit = cesaro_orbit(&assani::<f64>(), &1.0, 300).unwrap();
        let report =
            double_z_identity_defect(&FiniteSeq::unit(1), orbit.table(), 8.0, 4.0).unwrap();
        assert!(report.pass, "{report:?}");

        // f = e_0 reduces to the shift form.
        let report =
            double_z_identity_defect(&FiniteSeq::unit(0), orbit.table(), 6.0, 3.0).unwrap();
        assert!(report.pass, "{report:?}");

        assert!(double_z_identity_defect(&f, orbit.table(), 4.0, 8.0).is_err());
    }

    #[test]
    fn abel_mean_examples() {
        // A_r(I) = I for every r, up to the reported tail.
        let id = DenseOperator::<f64>::identity(2);
        for r in [0.0f64, 0.5, 0.9] {
            let report = abel_mean(&id, r, 400).unwrap();
            let err = report.mean.sub(&id).max_row_norm();
            assert!(err <= report.tail_bound + 1e-12, "r={r} err={err}");
        }

        // r = 0 gives exactly the identity.
        let t = assani::<f64>();
        let report = abel_mean(&t, 0.0, 10).unwrap();
        assert!(report.mean.is_identity());

        // Cross-check against the resolvent form.
        for r in [0.3f64, 0.5, 0.9] {
            let direct = abel_mean(&t, r, 2000).unwrap();
            let via = abel_mean_via_resolvent(&t, r).unwrap();
            let err = direct.mean.sub(&via).max_row_norm();
            assert!(err <= direct.tail_bound + 1e-9, "r={r} err={err}");
        }
    }

    #[test]
    fn abel_subordination() {
        let t = assani::<f64>();
        let report = abel_subordination_defect(&t, 1.0, 0.5, 400).unwrap();
        assert!(report.defect <= report.tail_bound + 1e-10, "{report:?}");

        let id = DenseOperator::<f64>::identity(3);
        for alpha in [0.5f64, 2.0] {
            let report = abel_subordination_defect(&id, alpha, 0.5, 200).unwrap();
            assert!(report.defect <= report.tail_bound + 1e-10, "alpha={alpha}");
        }
    }

    #[test]
    fn abel_bound_over_r_grid() {
        let t = assani::<f64>();
        let rows =
            abel_bound_check(&t, 1.0, 1.0, &[0.9, 0.99, 0.999], 2000, 40_000, NormKind::MaxRow)
                .unwrap();
        for row in rows {
            assert!(row.pass, "{row:?}");
        }
    }

    #[test]
    fn gallery_matrices() {
        let a = assani::<Rational>();
        assert_eq!(a.entry(0, 0), &rat(-1, 1));
        assert_eq!(a.entry(0, 1), &rat(2, 1));
        assert_eq!(a.entry(1, 0), &rat(0, 1));
        assert_eq!(a.entry(1, 1), &rat(-1, 1));

        assert!(matches!(
            shift_block::<f64>(1),
            Err(Error::DimensionTooSmall { .. })
        ));

        // Row norms of powers grow like 2n + 1.
        let m = shift_block::<f64>(32).unwrap();
        let mut power = DenseOperator::identity(64);
        for n in 1..=8usize {
            power = m.matmul(&power);
            assert_eq!(power.max_row_norm(), 2.0 * n as f64 + 1.0, "n={n}");
        }
    }

    #[test]
    fn shift_block_spectral_growth_small_dim() {
        // At dimension 64 the Jacobi path certifies ||T^n|| >= 2n in the
        // spectral norm for n up to a quarter of the shift length.
        let m = shift_block::<f64>(32).unwrap();
        let mut power = DenseOperator::identity(64);
        for n in 1..=8usize {
            power = m.matmul(&power);
            let sigma = power.spectral_norm();
            assert!(sigma >= 2.0 * n as f64, "n={n}: sigma={sigma}");
        }
    }
}
