//! Cesaro kernels `k^a` and verification of their classical bounds.
//!
//! `k^a(n) = Gamma(n+a) / (Gamma(a) Gamma(n+1))` is evaluated by the
//! multiplicative recurrence `k^a(n+1) = k^a(n) (n+a)/(n+1)` rather than by
//! Gamma quotients: the recurrence never overflows, stays rational for
//! rational orders, and forces the defining identities `k^a(0) = 1`,
//! `k^0 = e_0`, `k^1 = 1` by construction.

use crate::error::{Error, Result};
use crate::gamma::gamma;
use crate::scalar::{ensure_nonnegative_order, RealScalar, ScalarMode};

/// Single kernel value `k^alpha(n)`.
pub fn cesaro_kernel<S: RealScalar>(alpha: &S, n: usize) -> Result<S> {
    ensure_nonnegative_order(alpha)?;
    let mut value = S::one();
    for i in 0..n {
        let num = alpha.clone() + S::from_int(i as i64);
        value = value * num / S::from_int(i as i64 + 1);
    }
    Ok(value)
}

/// Kernel values `k^alpha(0..=horizon)`.
#[derive(Clone, Debug)]
pub struct KernelTable<S: RealScalar> {
    alpha: S,
    values: Vec<S>,
}

impl<S: RealScalar> KernelTable<S> {
    pub fn new(alpha: &S, horizon: usize) -> Result<Self> {
        ensure_nonnegative_order(alpha)?;
        let mut values = Vec::with_capacity(horizon + 1);
        values.push(S::one());
        for n in 0..horizon {
            let num = alpha.clone() + S::from_int(n as i64);
            let next = values[n].clone() * num / S::from_int(n as i64 + 1);
            values.push(next);
        }
        Ok(KernelTable { alpha: alpha.clone(), values })
    }

    pub fn alpha(&self) -> &S {
        &self.alpha
    }

    pub fn horizon(&self) -> usize {
        self.values.len() - 1
    }

    pub fn value(&self, n: usize) -> &S {
        &self.values[n]
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn mode(&self) -> ScalarMode {
        S::MODE
    }
}

/// Result of the convolution semigroup check `k^a * k^b = k^(a+b)`.
#[derive(Clone, Debug)]
pub struct SemigroupReport<S> {
    pub max_abs_defect: S,
    pub horizon: usize,
}

/// Max over `n <= horizon` of `|(k^a * k^b)(n) - k^(a+b)(n)|`. Exact mode
/// yields a defect of exactly zero.
pub fn kernel_semigroup_check<S: RealScalar>(
    alpha: &S,
    beta: &S,
    horizon: usize,
) -> Result<SemigroupReport<S>> {
    let ka = KernelTable::new(alpha, horizon)?;
    let kb = KernelTable::new(beta, horizon)?;
    let kab = KernelTable::new(&(alpha.clone() + beta.clone()), horizon)?;
    let mut max_abs_defect = S::zero();
    for n in 0..=horizon {
        let mut conv = S::zero();
        for j in 0..=n {
            conv = conv + ka.value(n - j).clone() * kb.value(j).clone();
        }
        let defect = (conv - kab.value(n).clone()).abs();
        if defect > max_abs_defect {
            max_abs_defect = defect;
        }
    }
    Ok(SemigroupReport { max_abs_defect, horizon })
}

/// A Gautschi bound failure at one index.
#[derive(Clone, Debug)]
pub struct GautschiViolation {
    pub n: usize,
    pub kernel: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Debug)]
pub struct GautschiReport {
    pub violations: Vec<GautschiViolation>,
    pub checked: usize,
    pub relative_margin: f64,
}

/// Checks `(n+1)^(a-1)/Gamma(a) < k^a(n) < n^(a-1)/Gamma(a)` for
/// `1 <= n <= horizon`, strictness tested with a relative margin of 1e-12.
/// Float mode only since Gamma(a) is needed.
pub fn gautschi_bounds_check(alpha: f64, horizon: usize) -> Result<GautschiReport> {
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(Error::OrderOutOfRange(format!(
            "Gautschi bounds need 0 < alpha < 1, got {alpha}"
        )));
    }
    const MARGIN: f64 = 1e-12;
    let g = gamma(alpha);
    let table = KernelTable::new(&alpha, horizon)?;
    let mut violations = Vec::new();
    for n in 1..=horizon {
        let k = *table.value(n);
        let lower = ((n + 1) as f64).powf(alpha - 1.0) / g;
        let upper = (n as f64).powf(alpha - 1.0) / g;
        let strict_lower = k > lower * (1.0 + MARGIN);
        let strict_upper = k < upper * (1.0 - MARGIN);
        if !(strict_lower && strict_upper) {
            violations.push(GautschiViolation { n, kernel: k, lower, upper });
        }
    }
    Ok(GautschiReport { violations, checked: horizon, relative_margin: MARGIN })
}

/// Sharp doubling factor `2^a (1 + (1-a)/(2(1+a)))^a` valid for
/// `k^(a+1)(2n) < bound * k^(a+1)(n)` when `0 < a < 1`.
pub fn sharp_doubling_bound(alpha: f64) -> f64 {
    2.0f64.powf(alpha) * (1.0 + (1.0 - alpha) / (2.0 * (1.0 + alpha))).powf(alpha)
}

/// Submultiplicativity constant `2^(a+1) (1 + (1-a)/(2(1+a)))^a - 1` for the
/// weighted algebra norm `q_a`, `0 < a < 1`.
pub fn sharp_algebra_constant(alpha: f64) -> f64 {
    2.0 * sharp_doubling_bound(alpha) - 1.0
}

#[derive(Clone, Debug)]
pub struct DoublingReport<S> {
    /// Max of `k^a(2n)/k^a(n)` over `1 <= n <= horizon`.
    pub max_ratio: S,
    /// Bound the ratio is compared against: the sharp factor for
    /// `0 < a < 1`, `2^a` otherwise.
    pub constant_bound: f64,
    /// Indices violating `max_ratio <= constant_bound`.
    pub ratio_violations: Vec<usize>,
    /// For `0 < a < 1`: indices `n <= horizon` where the sharp inequality
    /// `k^(a+1)(2n) < 2^a k^(a+1)(n) (1+(1-a)/(2(1+a)))^a` fails.
    pub sharp_violations: Vec<usize>,
}

/// Doubling behaviour of `k^a`. Exact mode compares against a rational
/// strictly below the irrational bound (`bound * (1 - 1e-12)` embedded
/// exactly), so a pass certifies the true strict inequality.
pub fn doubling_check<S: RealScalar>(alpha: &S, horizon: usize) -> Result<DoublingReport<S>> {
    ensure_nonnegative_order(alpha)?;
    if alpha.is_zero() {
        return Err(Error::NegativeOrder("doubling needs alpha > 0".into()));
    }
    let af = alpha.to_f64();
    let table = KernelTable::new(alpha, 2 * horizon)?;
    let constant_bound = if af < 1.0 { sharp_doubling_bound(af) } else { 2.0f64.powf(af) };
    let bound_lowered = S::from_f64_exact(constant_bound * (1.0 - 1e-12));

    let mut max_ratio = S::zero();
    let mut ratio_violations = Vec::new();
    for n in 1..=horizon {
        let ratio = table.value(2 * n).clone() / table.value(n).clone();
        if ratio > bound_lowered {
            ratio_violations.push(n);
        }
        if ratio > max_ratio {
            max_ratio = ratio;
        }
    }

    let mut sharp_violations = Vec::new();
    if af < 1.0 {
        let sharp = S::from_f64_exact(sharp_doubling_bound(af) * (1.0 - 1e-12));
        let shifted = KernelTable::new(&(alpha.clone() + S::one()), 2 * horizon)?;
        for n in 0..=horizon {
            let lhs = shifted.value(2 * n).clone();
            let rhs = sharp.clone() * shifted.value(n).clone();
            if lhs >= rhs {
                sharp_violations.push(n);
            }
        }
    }

    Ok(DoublingReport { max_ratio, constant_bound, ratio_violations, sharp_violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Rational, Scalar};
    use num::Zero;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn kernel_point_values() {
        // k^1 is the constant one sequence.
        assert_eq!(cesaro_kernel(&rat(1, 1), 5).unwrap(), rat(1, 1));
        // Empty product at n = 0 for any order.
        assert_eq!(cesaro_kernel(&rat(7, 3), 0).unwrap(), rat(1, 1));
        // k^(1/2)(2) = (1/2)(3/2)/2 = 3/8.
        assert_eq!(cesaro_kernel(&rat(1, 2), 2).unwrap(), rat(3, 8));
        // k^2(n) = n + 1.
        assert_eq!(cesaro_kernel(&rat(2, 1), 3).unwrap(), rat(4, 1));
    }

    #[test]
    fn kernel_rejects_negative_order() {
        assert!(matches!(
            cesaro_kernel(&rat(-1, 2), 3),
            Err(Error::NegativeOrder(_))
        ));
    }

    #[test]
    fn order_zero_is_the_unit_sequence() {
        let t = KernelTable::new(&rat(0, 1), 8).unwrap();
        assert_eq!(t.value(0), &rat(1, 1));
        for n in 1..=8 {
            assert!(t.value(n).is_zero(), "k^0({n}) must vanish");
        }
    }

    #[test]
    fn table_matches_product_formula() {
        // Independent oracle: k^a(n) = prod_{j=1..n} (a + j - 1)/j.
        for (num, den) in [(1i64, 4i64), (1, 2), (1, 1), (3, 2), (2, 1), (3, 1)] {
            let a = rat(num, den);
            let t = KernelTable::new(&a, 128).unwrap();
            for n in 0..=128usize {
                let mut expected = rat(1, 1);
                for j in 1..=n {
                    expected = expected * (a.clone() + rat(j as i64 - 1, 1)) / rat(j as i64, 1);
                }
                assert_eq!(t.value(n), &expected, "alpha={a} n={n}");
            }
        }
    }

    #[test]
    fn kernel_matches_gamma_quotient_small_n() {
        for alpha in [0.3f64, 0.5, 0.75, 1.5, 2.5] {
            for n in 0..=20usize {
                let k = cesaro_kernel(&alpha, n).unwrap();
                let via_gamma = gamma(n as f64 + alpha) / (gamma(alpha) * gamma(n as f64 + 1.0));
                assert!(
                    (k - via_gamma).abs() <= 1e-11 * via_gamma.abs().max(1.0),
                    "alpha={alpha} n={n}: {k} vs {via_gamma}"
                );
            }
        }
    }

    #[test]
    fn semigroup_defect_is_exactly_zero() {
        // (k^1 * k^1)(n) = n + 1 = k^2(n), and the fractional cases.
        for (a, b) in [((1, 1), (1, 1)), ((1, 2), (1, 2)), ((0, 1), (3, 4))] {
            let report =
                kernel_semigroup_check(&rat(a.0, a.1), &rat(b.0, b.1), 64).unwrap();
            assert!(report.max_abs_defect.is_zero(), "a={a:?} b={b:?}");
        }
    }

    #[test]
    fn gautschi_bounds_hold_and_match_hand_values_at_n1() {
        let report = gautschi_bounds_check(0.5, 1000).unwrap();
        assert!(report.violations.is_empty());

        // At n = 1, alpha = 1/2: 2^(-1/2)/Gamma(1/2) < 1/2 < 1/Gamma(1/2).
        let g = gamma(0.5);
        let lower = 2f64.powf(-0.5) / g;
        let upper = 1.0 / g;
        assert!((lower - 0.398_942_280_401_432_7).abs() < 1e-13);
        assert!((upper - 0.564_189_583_547_756_3).abs() < 1e-13);
        assert!(lower < 0.5 && 0.5 < upper);
    }

    #[test]
    fn gautschi_sweep_near_the_endpoints() {
        assert!(gautschi_bounds_check(0.99, 100).unwrap().violations.is_empty());
        assert!(gautschi_bounds_check(0.1, 100).unwrap().violations.is_empty());
        assert!(gautschi_bounds_check(1.0, 10).is_err());
        assert!(gautschi_bounds_check(0.0, 10).is_err());
    }

    #[test]
    fn doubling_ratio_for_k2_stays_below_two() {
        // k^2(2n)/k^2(n) = (2n+1)/(n+1) < 2; the bound at alpha = 1 is 2.
        let report = doubling_check(&rat(1, 1), 512).unwrap();
        assert_eq!(report.constant_bound, 2.0);
        assert!(report.ratio_violations.is_empty());
        assert!(report.max_ratio < rat(2, 1));
    }

    #[test]
    fn doubling_sharp_inequality_exact_sweep() {
        let report = doubling_check(&rat(1, 2), 1000).unwrap();
        assert!(report.sharp_violations.is_empty());
        assert!(report.ratio_violations.is_empty());
    }

    #[test]
    fn doubling_order_three_bounded_by_eight() {
        let report = doubling_check(&rat(3, 1), 1000).unwrap();
        assert!(report.ratio_violations.is_empty());
        assert!(report.max_ratio <= rat(8, 1));
    }

    #[test]
    fn sharp_constants() {
        // 2 sqrt(7/3) - 1
        assert!((sharp_algebra_constant(0.5) - 2.055_050_463_303_893).abs() < 1e-12);
        assert!((sharp_algebra_constant(1.0) - 3.0).abs() < 1e-12);
    }
}
