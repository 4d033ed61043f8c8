//! Weight sequences, certification of the local weight classes that make
//! the `q` norms submultiplicative, and the norms themselves.
//!
//! A positive weight `phi` lies in the class `w_{a,loc}` when
//! `(sum_{n=0..j} + sum_{n=p+1..j+p}) k^a(n) phi(j+p-n) <= c phi(j) phi(p)`
//! for all `1 <= j <= p`. Membership cannot be decided from finitely many
//! pairs, so the certifier reports the running maximum of the constant over
//! dyadic horizons and flags divergence when that maximum keeps growing by
//! a factor of at least 1.5 across three consecutive doublings. A
//! certificate is finite evidence carrying its horizon, not a proof.

use crate::error::{Error, Result};
use crate::kernels::KernelTable;
use crate::scalar::{ensure_nonnegative_order, RealScalar};
use crate::seq::{weyl_difference, FiniteSeq};

/// How a weight table was produced; kept for report metadata.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightKind<S> {
    /// `phi = k^gamma`.
    CesaroKernel { gamma: S },
    /// `phi(n) = k^gamma(n) * factor^n`.
    KernelTimesFactor { gamma: S, factor: S },
    Tabulated,
}

/// Strictly positive weight on `[0, horizon]`, optionally stamped with the
/// order at which it was certified.
#[derive(Clone, Debug)]
pub struct Weight<S: RealScalar> {
    kind: WeightKind<S>,
    values: Vec<S>,
    alpha_class: Option<S>,
}

impl<S: RealScalar> Weight<S> {
    pub fn cesaro(gamma: &S, horizon: usize) -> Result<Self> {
        let table = KernelTable::new(gamma, horizon)?;
        let values = table.values().to_vec();
        for (n, v) in values.iter().enumerate() {
            if *v <= S::zero() {
                return Err(Error::NonpositiveWeight(n));
            }
        }
        Ok(Weight {
            kind: WeightKind::CesaroKernel { gamma: gamma.clone() },
            values,
            alpha_class: None,
        })
    }

    pub fn kernel_times_factor(gamma: &S, factor: &S, horizon: usize) -> Result<Self> {
        if *factor <= S::zero() {
            return Err(Error::NonpositiveWeight(1));
        }
        let table = KernelTable::new(gamma, horizon)?;
        let mut values = Vec::with_capacity(horizon + 1);
        let mut pw = S::one();
        for n in 0..=horizon {
            let v = table.value(n).clone() * pw.clone();
            if v <= S::zero() {
                return Err(Error::NonpositiveWeight(n));
            }
            values.push(v);
            pw = pw * factor.clone();
        }
        Ok(Weight {
            kind: WeightKind::KernelTimesFactor { gamma: gamma.clone(), factor: factor.clone() },
            values,
            alpha_class: None,
        })
    }

    pub fn tabulated(values: Vec<S>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::WeightTooShort { needed: 1, have: 0 });
        }
        for (n, v) in values.iter().enumerate() {
            if *v <= S::zero() {
                return Err(Error::NonpositiveWeight(n));
            }
        }
        Ok(Weight { kind: WeightKind::Tabulated, values, alpha_class: None })
    }

    pub fn kind(&self) -> &WeightKind<S> {
        &self.kind
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

    pub fn alpha_class(&self) -> Option<&S> {
        self.alpha_class.as_ref()
    }

    pub fn with_certified_class(mut self, alpha: S) -> Self {
        self.alpha_class = Some(alpha);
        self
    }
}

/// Certification evidence for the two-sided kernel convolution inequality.
#[derive(Clone, Debug)]
pub struct CertifyReport<S> {
    /// Max of `c(j,p)` over `1 <= j <= p <= horizon`.
    pub c_phi_estimate: S,
    pub worst_pair: (usize, usize),
    /// Divergence verdict from the dyadic growth heuristic.
    pub violated: bool,
    pub horizon: usize,
    /// Running maxima at dyadic horizons 16, 32, ...
    pub dyadic_maxima: Vec<(usize, S)>,
}

/// Evaluates `c(j,p) = lhs / (phi(j) phi(p))` over all `1 <= j <= p <= P`
/// and applies the dyadic divergence heuristic. The pairs with `j = 0` or
/// `p = 0` are unconstrained by the class definition and skipped.
pub fn certify_omega_alpha_loc<S: RealScalar>(
    phi: &Weight<S>,
    alpha: &S,
    p_max: usize,
) -> Result<CertifyReport<S>> {
    ensure_nonnegative_order(alpha)?;
    if alpha.is_zero() {
        return Err(Error::OrderOutOfRange("certification needs alpha > 0".into()));
    }
    if phi.horizon() < 2 * p_max {
        return Err(Error::WeightTooShort { needed: 2 * p_max + 1, have: phi.horizon() + 1 });
    }
    let kernel = KernelTable::new(alpha, 2 * p_max)?;

    let mut best = S::zero();
    let mut worst_pair = (1usize, 1usize);
    let mut dyadic_maxima: Vec<(usize, S)> = Vec::new();
    let mut next_checkpoint = 16usize;

    for p in 1..=p_max {
        for j in 1..=p {
            let mut lhs = S::zero();
            for n in 0..=j {
                lhs = lhs + kernel.value(n).clone() * phi.value(j + p - n).clone();
            }
            for n in (p + 1)..=(j + p) {
                lhs = lhs + kernel.value(n).clone() * phi.value(j + p - n).clone();
            }
            let c = lhs / (phi.value(j).clone() * phi.value(p).clone());
            if c > best {
                best = c;
                worst_pair = (j, p);
            }
        }
        if p == next_checkpoint {
            dyadic_maxima.push((p, best.clone()));
            next_checkpoint *= 2;
        } else if p == p_max && p > 16 && dyadic_maxima.last().is_none_or(|&(h, _)| h != p) {
            dyadic_maxima.push((p, best.clone()));
        }
    }

    // Divergent when some window of three doublings grew the running max by
    // a factor of 1.5 or more; calibrated so k^b with b < a+1 is rejected.
    let mut violated = false;
    let threshold = S::from_ratio(3, 2);
    for w in dyadic_maxima.windows(4) {
        let m0 = &w[0].1;
        let m3 = &w[3].1;
        if *m0 > S::zero() && m3.clone() >= threshold.clone() * m0.clone() {
            violated = true;
            break;
        }
    }

    Ok(CertifyReport { c_phi_estimate: best, worst_pair, violated, horizon: p_max, dyadic_maxima })
}

/// Weighted algebra norm `q_phi(f) = sum_n phi(n) |W^a f(n)|`.
pub fn q_norm<S: RealScalar>(f: &FiniteSeq<S>, phi: &Weight<S>, alpha: &S) -> Result<S> {
    let w = weyl_difference(f, alpha)?;
    let end = match w.support_end() {
        None => return Ok(S::zero()),
        Some(e) => e,
    };
    if phi.horizon() < end {
        return Err(Error::WeightTooShort { needed: end + 1, have: phi.horizon() + 1 });
    }
    let mut acc = S::zero();
    for n in 0..=end {
        acc = acc + phi.value(n).clone() * w.coeff(n).abs();
    }
    Ok(acc)
}

/// `q_a = q_phi` with the canonical weight `phi = k^(a+1)`.
pub fn q_alpha_norm<S: RealScalar>(f: &FiniteSeq<S>, alpha: &S) -> Result<S> {
    let end = f.support_end().unwrap_or(0);
    let phi = Weight::cesaro(&(alpha.clone() + S::one()), end)?;
    q_norm(f, &phi, alpha)
}

#[derive(Clone, Debug)]
pub struct SubmultReport<S> {
    pub lhs: S,
    pub rhs: S,
    pub ok: bool,
}

/// Checks `q_phi(f*g) <= c * q_phi(f) * q_phi(g)`.
pub fn submultiplicativity_check<S: RealScalar>(
    f: &FiniteSeq<S>,
    g: &FiniteSeq<S>,
    phi: &Weight<S>,
    alpha: &S,
    c: &S,
) -> Result<SubmultReport<S>> {
    let lhs = q_norm(&f.convolve(g), phi, alpha)?;
    let rhs = c.clone() * q_norm(f, phi, alpha)? * q_norm(g, phi, alpha)?;
    let ok = lhs <= rhs;
    Ok(SubmultReport { lhs, rhs, ok })
}

#[derive(Clone, Debug)]
pub struct LimitReport {
    pub values: Vec<(f64, f64)>,
    pub l1: f64,
    /// Set when the grid reaches 2^-20; true if the final value is within
    /// 1e-6 of the l1 norm.
    pub ok: Option<bool>,
}

/// `q_a(f)` along a descending grid of orders; the limit is the plain `l1`
/// norm. Float mode.
pub fn q_alpha_limit_check(f: &FiniteSeq<f64>, grid: &[f64]) -> Result<LimitReport> {
    if grid.is_empty() {
        return Err(Error::OrderOutOfRange("empty order grid".into()));
    }
    if grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::OrderOutOfRange("grid must be strictly decreasing".into()));
    }
    let l1 = f.l1_norm_f64();
    let mut values = Vec::with_capacity(grid.len());
    for &a in grid {
        ensure_nonnegative_order(&a)?;
        values.push((a, q_alpha_norm(f, &a)?));
    }
    let smallest = *grid.last().unwrap();
    let ok = if smallest <= 2f64.powi(-20) {
        Some((values.last().unwrap().1 - l1).abs() < 1e-6)
    } else {
        None
    };
    Ok(LimitReport { values, l1, ok })
}

#[derive(Clone, Debug)]
pub struct OrderingReport<S> {
    pub q_low: S,
    pub q_high: S,
    pub ok: bool,
}

/// Monotonicity in the order: `q_a(f) <= q_b(f)` for `0 < a < b`.
pub fn norm_ordering_check<S: RealScalar>(
    f: &FiniteSeq<S>,
    alpha: &S,
    beta: &S,
) -> Result<OrderingReport<S>> {
    if !(S::zero() < alpha.clone() && alpha < beta) {
        return Err(Error::OrderOutOfRange(format!(
            "need 0 < alpha < beta, got alpha={alpha}, beta={beta}"
        )));
    }
    let q_low = q_alpha_norm(f, alpha)?;
    let q_high = q_alpha_norm(f, beta)?;
    let ok = q_low <= q_high;
    Ok(OrderingReport { q_low, q_high, ok })
}
