//! Closed-form sequence families and their transform identities: the
//! canonical family `h_n^a(j) = k^a(n-j)`, the geometric resolvent
//! sequences `p_lambda(n) = lambda^{-(n+1)}`, and the Z-transform with its
//! closed-form table. Every float-mode comparison against a closed form
//! reports the truncation tail bound it used; a check passes when
//! `|truncated - closed form| <= tail + 1e-10`.

use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::KernelTable;
use crate::scalar::{ensure_nonnegative_order, RealScalar, Scalar};
use crate::seq::{weyl_difference, FiniteSeq, WindowedSeq};
use crate::weights::{q_norm, Weight};

/// The sequence `h_n^a`: `j -> k^a(n-j)` for `j <= n`, zero beyond.
pub fn h_seq<S: RealScalar>(alpha: &S, n: usize) -> Result<FiniteSeq<S>> {
    let kernel = KernelTable::new(alpha, n)?;
    let mut coeffs = Vec::with_capacity(n + 1);
    for j in 0..=n {
        coeffs.push(kernel.value(n - j).clone());
    }
    Ok(FiniteSeq::from_coeffs(coeffs))
}

/// `p_lambda(n) = lambda^{-(n+1)}` on the window `[0, horizon]`.
pub fn p_lambda_truncated<S: Scalar>(lambda: &S, horizon: usize) -> Result<WindowedSeq<S>> {
    if lambda.is_zero() {
        return Err(Error::ZeroLambda);
    }
    let inv = S::one() / lambda.clone();
    let mut values = Vec::with_capacity(horizon + 1);
    let mut cur = inv.clone();
    for _ in 0..=horizon {
        values.push(cur.clone());
        cur = cur * inv.clone();
    }
    Ok(WindowedSeq::from_values(values))
}

/// Largest-magnitude defect of the Hilbert equation
/// `(mu - lambda)(p_lambda * p_mu)(n) = p_lambda(n) - p_mu(n)` on
/// `[0, horizon]`; exactly zero in exact mode.
pub fn hilbert_equation_defect<S: Scalar>(lambda: &S, mu: &S, horizon: usize) -> Result<S> {
    if lambda == mu {
        return Err(Error::EqualParameters);
    }
    let p = p_lambda_truncated(lambda, horizon)?;
    let q = p_lambda_truncated(mu, horizon)?;
    let factor = mu.clone() - lambda.clone();
    let mut worst = S::zero();
    for n in 0..=horizon {
        let mut conv = S::zero();
        for j in 0..=n {
            conv = conv + p.value(n - j).clone() * q.value(j).clone();
        }
        let defect = factor.clone() * conv - (p.value(n).clone() - q.value(n).clone());
        if defect.abs_f64() > worst.abs_f64() {
            worst = defect;
        }
    }
    Ok(worst)
}

/// Weyl eigenvalue of `p_lambda`: `W^a p_lambda = ((lambda-1)/lambda)^a
/// p_lambda` for `|lambda| > 1`. Exact mode needs an integer order.
pub fn p_lambda_weyl_eigenvalue<S: RealScalar>(lambda: &S, alpha: &S) -> Result<S> {
    ensure_nonnegative_order(alpha)?;
    if lambda.abs() <= S::one() {
        return Err(Error::NotSummable(format!("|lambda| must exceed 1, got {lambda}")));
    }
    let ratio = (lambda.clone() - S::one()) / lambda.clone();
    ratio.try_pow(alpha)
}

/// Complex variant of the Weyl eigenvalue, float mode only.
pub fn p_lambda_weyl_eigenvalue_c64(lambda: Complex64, alpha: f64) -> Result<Complex64> {
    ensure_nonnegative_order(&alpha)?;
    if lambda.norm() <= 1.0 {
        return Err(Error::NotSummable(format!("|lambda| must exceed 1, got {lambda}")));
    }
    Ok(((lambda - 1.0) / lambda).powf(alpha))
}

#[derive(Clone, Debug)]
pub struct EigenvalueCheck {
    pub eigenvalue: f64,
    pub max_defect: f64,
    pub tail_bound: f64,
    pub pass: bool,
}

/// Applies `W^a` to a truncation of `p_lambda` and compares against the
/// eigenvalue relation on the first half of the window. The truncated tail
/// perturbs each value by at most `2^m |lambda|^-(N+2) / (1 - 1/|lambda|)`.
pub fn p_lambda_weyl_check(lambda: f64, alpha: f64, horizon: usize) -> Result<EigenvalueCheck> {
    let ev = p_lambda_weyl_eigenvalue(&lambda, &alpha)?;
    let p = p_lambda_truncated(&lambda, horizon)?;
    let truncated = p.clone().into_truncated();
    let w = weyl_difference(&truncated, &alpha)?;
    let m = alpha.floor() as i32 + 1;
    let la = lambda.abs();
    let tail_bound = 2f64.powi(m) * la.powi(-(horizon as i32 + 2)) / (1.0 - 1.0 / la);
    let mut max_defect = 0.0f64;
    for n in 0..=horizon / 2 {
        let defect = (w.coeff(n) - ev * p.value(n)).abs();
        if defect > max_defect {
            max_defect = defect;
        }
    }
    Ok(EigenvalueCheck { eigenvalue: ev, max_defect, tail_bound, pass: max_defect <= tail_bound + 1e-10 })
}

/// Closed form `q_{k^gamma}(p_lambda) = |lambda-1|^a |lambda|^(gamma-a-1)
/// / (|lambda|-1)^gamma` for `|lambda| > 1`, `gamma >= a+1`.
pub fn p_lambda_q_norm<S: RealScalar>(lambda: &S, gamma: &S, alpha: &S) -> Result<S> {
    ensure_nonnegative_order(alpha)?;
    let la = lambda.abs();
    if la <= S::one() {
        return Err(Error::NotSummable(format!("|lambda| must exceed 1, got {lambda}")));
    }
    if gamma.clone() < alpha.clone() + S::one() {
        return Err(Error::OrderOutOfRange(format!(
            "need gamma >= alpha + 1, got gamma={gamma}, alpha={alpha}"
        )));
    }
    let num1 = (lambda.clone() - S::one()).abs().try_pow(alpha)?;
    let num2 = la.try_pow(&(gamma.clone() - alpha.clone() - S::one()))?;
    let den = (la - S::one()).try_pow(gamma)?;
    Ok(num1 * num2 / den)
}

#[derive(Clone, Debug)]
pub struct ClosedFormCheck {
    pub truncated: f64,
    pub closed_form: f64,
    pub tail_bound: f64,
    pub pass: bool,
}

impl ClosedFormCheck {
    fn evaluate(truncated: f64, closed_form: f64, tail_bound: f64) -> Self {
        let pass = (truncated - closed_form).abs() <= tail_bound + 1e-10;
        ClosedFormCheck { truncated, closed_form, tail_bound, pass }
    }
}

/// Upper bound for `sum_{j >= start} k^kappa(j) scale^-j` by a geometric
/// envelope; requires the step ratio to stay below `scale`.
pub fn kernel_tail_bound(kappa: f64, scale: f64, start: usize) -> Result<f64> {
    ensure_nonnegative_order(&kappa)?;
    let rho = 1f64.max((start as f64 + kappa) / (start as f64 + 1.0));
    if rho >= scale {
        return Err(Error::NotConvergent(format!(
            "kernel growth {rho} at index {start} is not dominated by scale {scale}"
        )));
    }
    let k_start = crate::kernels::cesaro_kernel(&kappa, start)?;
    Ok(k_start * scale.powi(-(start as i32)) / (1.0 - rho / scale))
}

/// Truncated `q_{k^gamma}` norm of `p_lambda` against the closed form.
pub fn p_lambda_q_norm_check(
    lambda: f64,
    gamma: f64,
    alpha: f64,
    horizon: usize,
) -> Result<ClosedFormCheck> {
    let closed = p_lambda_q_norm(&lambda, &gamma, &alpha)?;
    let phi = Weight::cesaro(&gamma, horizon)?;
    let truncated_seq = p_lambda_truncated(&lambda, horizon)?.into_truncated();
    let truncated = q_norm(&truncated_seq, &phi, &alpha)?;
    // |q(p) - q(p_truncated)| <= q(tail) <= 2^m sum_{j>N} k^(gamma+m-a)(j) |lambda|^-(j+1).
    let m = alpha.floor() as i32 + 1;
    let la = lambda.abs();
    let tail =
        2f64.powi(m) * kernel_tail_bound(gamma + m as f64 - alpha, la, horizon + 1)? / la;
    Ok(ClosedFormCheck::evaluate(truncated, closed, tail))
}

/// Z-transform `sum_n f(n) z^-n`, a finite sum for finitely supported `f`.
pub fn z_transform<S: Scalar>(f: &FiniteSeq<S>, z: &S) -> Result<S> {
    if z.is_zero() {
        return Err(Error::ZeroPoint);
    }
    let inv = S::one() / z.clone();
    let mut acc = S::zero();
    let mut pw = S::one();
    for c in f.coeffs() {
        acc = acc + c.clone() * pw.clone();
        pw = pw * inv.clone();
    }
    Ok(acc)
}

/// Z-transform of a window, truncated at its horizon.
pub fn z_transform_window<S: Scalar>(w: &WindowedSeq<S>, z: &S) -> Result<S> {
    if z.is_zero() {
        return Err(Error::ZeroPoint);
    }
    let inv = S::one() / z.clone();
    let mut acc = S::zero();
    let mut pw = S::one();
    for v in w.values() {
        acc = acc + v.clone() * pw.clone();
        pw = pw * inv.clone();
    }
    Ok(acc)
}

/// Closed form of the kernel transform: `(z/(z-1))^a` for `|z| > 1`.
pub fn z_kernel_closed<S: RealScalar>(alpha: &S, z: &S) -> Result<S> {
    ensure_nonnegative_order(alpha)?;
    if z.abs() <= S::one() {
        return Err(Error::NotConvergent(format!("|z| must exceed 1, got {z}")));
    }
    (z.clone() / (z.clone() - S::one())).try_pow(alpha)
}

/// Closed form of the resolvent transform: `z/(z lambda - 1)` for
/// `|z| > 1/|lambda|`.
pub fn z_p_lambda_closed<S: RealScalar>(lambda: &S, z: &S) -> Result<S> {
    if lambda.is_zero() {
        return Err(Error::ZeroLambda);
    }
    if (z.clone() * lambda.clone()).abs() <= S::one() {
        return Err(Error::NotConvergent(format!(
            "|z lambda| must exceed 1, got z={z}, lambda={lambda}"
        )));
    }
    Ok(z.clone() / (z.clone() * lambda.clone() - S::one()))
}

/// Truncated kernel transform against `(z/(z-1))^a`.
pub fn z_kernel_check(alpha: f64, z: f64, horizon: usize) -> Result<ClosedFormCheck> {
    let closed = z_kernel_closed(&alpha, &z)?;
    let table = KernelTable::new(&alpha, horizon)?;
    let w = WindowedSeq::from_values(table.values().to_vec());
    let truncated = z_transform_window(&w, &z)?;
    let tail = kernel_tail_bound(alpha, z.abs(), horizon + 1)?;
    Ok(ClosedFormCheck::evaluate(truncated, closed, tail))
}

/// Truncated resolvent transform against `z/(z lambda - 1)`.
pub fn z_p_lambda_check(lambda: f64, z: f64, horizon: usize) -> Result<ClosedFormCheck> {
    let closed = z_p_lambda_closed(&lambda, &z)?;
    let w = p_lambda_truncated(&lambda, horizon)?;
    let truncated = z_transform_window(&w, &z)?;
    let q = 1.0 / (lambda.abs() * z.abs());
    let tail = q.powi(horizon as i32 + 1) / (lambda.abs() * (1.0 - q));
    Ok(ClosedFormCheck::evaluate(truncated, closed, tail))
}

/// Transform rule for fractional sums: the truncated transform of
/// `D^{-a} f` approaches `(z/(z-1))^a f~(z)` for `|z| > 1`.
pub fn z_cesaro_rule_check(
    f: &FiniteSeq<f64>,
    alpha: f64,
    z: f64,
    horizon: usize,
) -> Result<ClosedFormCheck> {
    let closed = z_kernel_closed(&alpha, &z)? * z_transform(f, &z)?;
    let window = crate::seq::cesaro_sum(f, &alpha, horizon)?;
    let truncated = z_transform_window(&window, &z)?;
    // |D^-a f(n)| <= ||f||_1 max(1, k^a(n)), so the dropped tail is dominated
    // by the kernel tail at order a (plus the flat geometric part).
    let l1 = f.l1_norm_f64();
    let za = z.abs();
    let flat_tail = za.powi(-(horizon as i32 + 1)) / (1.0 - 1.0 / za);
    let kernel_tail = kernel_tail_bound(alpha, za, horizon + 1)?;
    let tail = l1 * (flat_tail + kernel_tail);
    Ok(ClosedFormCheck::evaluate(truncated, closed, tail))
}
