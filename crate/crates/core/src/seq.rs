//! Finitely supported sequences with convolution, classical differences,
//! Weyl fractional sums/differences, Cesaro sums and the duality pairing.
//!
//! [`FiniteSeq`] models the space of sequences on the nonnegative integers
//! with finite support; every exact identity lives here. [`WindowedSeq`]
//! is deliberately a distinct type: a Cesaro sum `D^{-a} f` does not vanish
//! beyond the support of `f`, so its restriction to a window must never be
//! fed where genuine finite support is assumed.

use crate::error::{Error, Result};
use crate::kernels::KernelTable;
use crate::scalar::{ensure_nonnegative_order, RealScalar, Scalar, ScalarMode};

/// A scalar sequence with finite support; trailing zeros are trimmed so the
/// zero sequence has an empty coefficient vector.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSeq<S: Scalar> {
    coeffs: Vec<S>,
}

impl<S: Scalar> FiniteSeq<S> {
    pub fn from_coeffs(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        FiniteSeq { coeffs }
    }

    pub fn zero() -> Self {
        FiniteSeq { coeffs: Vec::new() }
    }

    /// The canonical sequence `e_n` (Kronecker delta at `n`).
    pub fn unit(n: usize) -> Self {
        let mut coeffs = vec![S::zero(); n + 1];
        coeffs[n] = S::one();
        FiniteSeq { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest index carrying a nonzero coefficient, `None` for zero.
    pub fn support_end(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Coefficient at `n`, zero beyond the support.
    pub fn coeff(&self, n: usize) -> S {
        self.coeffs.get(n).cloned().unwrap_or_else(S::zero)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn mode(&self) -> ScalarMode {
        S::MODE
    }

    pub fn scale(&self, c: &S) -> Self {
        FiniteSeq::from_coeffs(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for n in 0..len {
            out.push(self.coeff(n) + other.coeff(n));
        }
        FiniteSeq::from_coeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        FiniteSeq::from_coeffs(self.coeffs.iter().map(|x| -x.clone()).collect())
    }

    /// Convolution `(f*g)(n) = sum_{j<=n} f(n-j) g(j)`.
    pub fn convolve(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return FiniteSeq::zero();
        }
        let end = self.coeffs.len() + other.coeffs.len() - 2;
        let mut out = vec![S::zero(); end + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        FiniteSeq::from_coeffs(out)
    }

    /// Forward difference `Df(n) = f(n+1) - f(n)`; maps finitely supported
    /// sequences to finitely supported sequences.
    pub fn delta(&self) -> Self {
        if self.is_zero() {
            return FiniteSeq::zero();
        }
        let end = self.coeffs.len() - 1;
        let mut out = Vec::with_capacity(end + 1);
        for n in 0..=end {
            out.push(self.coeff(n + 1) - self.coeff(n));
        }
        FiniteSeq::from_coeffs(out)
    }

    /// `l1` mass as f64, used by float-mode tail bounds. Folded from +0.0
    /// so the zero sequence does not report -0.0.
    pub fn l1_norm_f64(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs_f64()).fold(0.0, |acc, x| acc + x)
    }
}

impl<S: RealScalar> FiniteSeq<S> {
    /// Exact `l1` norm.
    pub fn l1_norm(&self) -> S {
        let mut acc = S::zero();
        for c in &self.coeffs {
            acc = acc + c.abs();
        }
        acc
    }

    /// Largest coefficient magnitude.
    pub fn sup_norm(&self) -> S {
        let mut acc = S::zero();
        for c in &self.coeffs {
            let a = c.abs();
            if a > acc {
                acc = a;
            }
        }
        acc
    }
}

impl FiniteSeq<f64> {
    pub fn to_complex(&self) -> FiniteSeq<num::complex::Complex64> {
        FiniteSeq::from_coeffs(
            self.coeffs.iter().map(|&x| num::complex::Complex64::new(x, 0.0)).collect(),
        )
    }
}

/// Restriction of a sequence to the window `[0, horizon]`; the underlying
/// sequence need not vanish beyond the window.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowedSeq<S: Scalar> {
    coeffs: Vec<S>,
}

impl<S: Scalar> WindowedSeq<S> {
    pub fn from_values(coeffs: Vec<S>) -> Self {
        assert!(!coeffs.is_empty(), "window must contain index 0");
        WindowedSeq { coeffs }
    }

    pub fn horizon(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn value(&self, n: usize) -> &S {
        &self.coeffs[n]
    }

    pub fn values(&self) -> &[S] {
        &self.coeffs
    }

    pub fn mode(&self) -> ScalarMode {
        S::MODE
    }

    /// Reinterpret the window as a finitely supported sequence, i.e. truncate
    /// whatever lives beyond the horizon. Deliberately consuming and named
    /// after the truncation so it cannot happen by accident.
    pub fn into_truncated(self) -> FiniteSeq<S> {
        FiniteSeq::from_coeffs(self.coeffs)
    }
}

/// Duality pairing `<f, g> = sum_n f(n) g(n)`.
pub fn duality_pairing<S: Scalar>(f: &FiniteSeq<S>, g: &FiniteSeq<S>) -> S {
    let len = f.coeffs.len().min(g.coeffs.len());
    let mut acc = S::zero();
    for n in 0..len {
        acc = acc + f.coeff(n) * g.coeff(n);
    }
    acc
}

/// Pairing of a finitely supported sequence against a window; the window
/// must cover the support of `f`.
pub fn duality_pairing_window<S: Scalar>(f: &FiniteSeq<S>, w: &WindowedSeq<S>) -> Result<S> {
    if let Some(end) = f.support_end() {
        if end > w.horizon() {
            return Err(Error::HorizonTooShort { needed: end, have: w.horizon() });
        }
    }
    let mut acc = S::zero();
    for (n, c) in f.coeffs.iter().enumerate() {
        acc = acc + c.clone() * w.value(n).clone();
    }
    Ok(acc)
}

/// Weyl sum `W^{-a} f(n) = sum_{j>=n} k^a(j-n) f(j)`; finite because `f`
/// has finite support, and supported inside `[0, end(f)]`.
pub fn weyl_sum<S: RealScalar>(f: &FiniteSeq<S>, alpha: &S) -> Result<FiniteSeq<S>> {
    ensure_nonnegative_order(alpha)?;
    let Some(end) = f.support_end() else {
        return Ok(FiniteSeq::zero());
    };
    let kernel = KernelTable::new(alpha, end)?;
    let mut out = Vec::with_capacity(end + 1);
    for n in 0..=end {
        let mut acc = S::zero();
        for j in n..=end {
            acc = acc + kernel.value(j - n).clone() * f.coeff(j);
        }
        out.push(acc);
    }
    Ok(FiniteSeq::from_coeffs(out))
}

/// Weyl difference `W^a f = (-1)^m D^m W^{-(m-a)} f` with `m = floor(a)+1`;
/// the inverse of [`weyl_sum`] on finitely supported sequences.
pub fn weyl_difference<S: RealScalar>(f: &FiniteSeq<S>, alpha: &S) -> Result<FiniteSeq<S>> {
    ensure_nonnegative_order(alpha)?;
    if alpha.is_zero() {
        return Ok(f.clone());
    }
    let m = alpha.floor_int() + 1;
    let frac = S::from_int(m) - alpha.clone();
    let mut g = weyl_sum(f, &frac)?;
    for _ in 0..m {
        g = g.delta().neg(); // W = -D
    }
    Ok(g)
}

/// Signed Weyl operator: difference for `alpha >= 0`, sum of `-alpha`
/// otherwise. Makes the index law `W^a W^b = W^(a+b)` testable over signed
/// orders with one entry point.
pub fn weyl<S: RealScalar>(f: &FiniteSeq<S>, alpha: &S) -> Result<FiniteSeq<S>> {
    if *alpha < S::zero() {
        weyl_sum(f, &-alpha.clone())
    } else {
        weyl_difference(f, alpha)
    }
}

/// Cesaro sum `D^{-a} f = k^a * f` restricted to `[0, horizon]`.
pub fn cesaro_sum<S: RealScalar>(
    f: &FiniteSeq<S>,
    alpha: &S,
    horizon: usize,
) -> Result<WindowedSeq<S>> {
    ensure_nonnegative_order(alpha)?;
    let kernel = KernelTable::new(alpha, horizon)?;
    let mut out = Vec::with_capacity(horizon + 1);
    for n in 0..=horizon {
        let mut acc = S::zero();
        for (j, c) in f.coeffs.iter().enumerate().take(n + 1) {
            acc = acc + kernel.value(n - j).clone() * c.clone();
        }
        out.push(acc);
    }
    Ok(WindowedSeq::from_values(out))
}

/// Defect of the convolution identity
/// `W^a(f*g)(n) = sum_{j=0..n} W^a g(j) sum_{p=n-j..n} k^a(p-n+j) W^a f(p)
///              - sum_{j>n} W^a g(j) sum_{p>n} k^a(p-n+j) W^a f(p)`,
/// every sum finite by support. Exact mode returns zero.
pub fn weyl_product_identity_defect<S: RealScalar>(
    f: &FiniteSeq<S>,
    g: &FiniteSeq<S>,
    alpha: &S,
) -> Result<S> {
    ensure_nonnegative_order(alpha)?;
    let lhs_seq = weyl_difference(&f.convolve(g), alpha)?;
    let wf = weyl_difference(f, alpha)?;
    let wg = weyl_difference(g, alpha)?;
    let wf_end = wf.support_end().unwrap_or(0);
    let wg_end = wg.support_end().unwrap_or(0);
    let check_end = lhs_seq.support_end().unwrap_or(0).max(wf_end + wg_end);
    let kernel = KernelTable::new(alpha, wf_end + wg_end + 1)?;

    let mut max_defect = S::zero();
    for n in 0..=check_end {
        let mut rhs = S::zero();
        for j in 0..=n.min(wg_end) {
            let mut inner = S::zero();
            for p in n.saturating_sub(j)..=n.min(wf_end) {
                inner = inner + kernel.value(p + j - n).clone() * wf.coeff(p);
            }
            rhs = rhs + wg.coeff(j) * inner;
        }
        for j in (n + 1)..=wg_end {
            let mut inner = S::zero();
            for p in (n + 1)..=wf_end {
                inner = inner + kernel.value(p + j - n).clone() * wf.coeff(p);
            }
            rhs = rhs - wg.coeff(j) * inner;
        }
        let defect = (lhs_seq.coeff(n) - rhs).abs();
        if defect > max_defect {
            max_defect = defect;
        }
    }
    Ok(max_defect)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num::Zero;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn rseq(entries: &[(i64, i64)]) -> FiniteSeq<Rational> {
        FiniteSeq::from_coeffs(entries.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let f = FiniteSeq::from_coeffs(vec![rat(1, 1), rat(0, 1), rat(0, 1)]);
        assert_eq!(f.support_end(), Some(0));
        assert!(FiniteSeq::<Rational>::from_coeffs(vec![rat(0, 1)]).is_zero());
    }

    #[test]
    fn convolution_examples() {
        let e1 = FiniteSeq::<Rational>::unit(1);
        assert_eq!(e1.convolve(&e1), FiniteSeq::unit(2));

        let e0 = FiniteSeq::<Rational>::unit(0);
        let f = rseq(&[(2, 1), (-1, 3), (5, 7)]);
        assert_eq!(e0.convolve(&f), f);

        let ones = rseq(&[(1, 1), (1, 1)]);
        assert_eq!(ones.convolve(&ones), rseq(&[(1, 1), (2, 1), (1, 1)]));
    }

    #[test]
    fn weyl_sum_examples() {
        // W^{-1} e_2 is the running tail sum (1,1,1).
        let w = weyl_sum(&FiniteSeq::<Rational>::unit(2), &rat(1, 1)).unwrap();
        assert_eq!(w, rseq(&[(1, 1), (1, 1), (1, 1)]));

        // Single-point support: W^{-1/2} e_0 = e_0.
        let w = weyl_sum(&FiniteSeq::<Rational>::unit(0), &rat(1, 2)).unwrap();
        assert_eq!(w, FiniteSeq::unit(0));

        // Order zero is the identity.
        let f = rseq(&[(1, 2), (0, 1), (-3, 1)]);
        assert_eq!(weyl_sum(&f, &rat(0, 1)).unwrap(), f);
    }

    #[test]
    fn weyl_difference_hand_value() {
        // W^{1/2} e_1: W^{-1/2} e_1 = (1/2, 1), then one step of -D gives
        // (-1/2, 1).
        let w = weyl_difference(&FiniteSeq::<Rational>::unit(1), &rat(1, 2)).unwrap();
        assert_eq!(w, rseq(&[(-1, 2), (1, 1)]));
    }

    #[test]
    fn integer_weyl_difference_matches_binomial_formula() {
        // Oracle: W^m f(n) = sum_j (-1)^j C(m,j) f(n+j).
        let binom = |m: i64, j: i64| -> i64 {
            let mut acc = 1i64;
            for i in 0..j {
                acc = acc * (m - i) / (i + 1);
            }
            acc
        };
        for m in 1..=3i64 {
            for src in 0..=4usize {
                let f = FiniteSeq::<Rational>::unit(src);
                let got = weyl_difference(&f, &rat(m, 1)).unwrap();
                let mut expected = vec![rat(0, 1); src + 1];
                for (n, slot) in expected.iter_mut().enumerate() {
                    let j = (src - n) as i64;
                    if j <= m {
                        *slot = rat(if j % 2 == 0 { 1 } else { -1 } * binom(m, j), 1);
                    }
                }
                assert_eq!(got, FiniteSeq::from_coeffs(expected), "m={m} src={src}");
            }
        }
    }

    #[test]
    fn inversion_round_trip_exact() {
        let f = rseq(&[(3, 5), (-1, 2), (0, 1), (7, 3), (1, 1)]);
        for (n, d) in [(1i64, 4i64), (1, 2), (1, 1), (3, 2), (2, 1), (3, 1)] {
            let a = rat(n, d);
            let there = weyl_difference(&weyl_sum(&f, &a).unwrap(), &a).unwrap();
            assert_eq!(there, f, "W^a W^-a at a={a}");
            let back = weyl_sum(&weyl_difference(&f, &a).unwrap(), &a).unwrap();
            assert_eq!(back, f, "W^-a W^a at a={a}");
        }
    }

    #[test]
    fn signed_index_law_exact() {
        let f = rseq(&[(1, 1), (2, 3), (-5, 4), (1, 6)]);
        let grid: &[(i64, i64)] = &[(-3, 2), (-1, 1), (-1, 2), (1, 2), (1, 1), (3, 2), (2, 1)];
        for &(an, ad) in grid {
            for &(bn, bd) in grid {
                let a = rat(an, ad);
                let b = rat(bn, bd);
                let ab = a.clone() + b.clone();
                if ab < rat(-3, 1) {
                    continue;
                }
                let lhs = weyl(&weyl(&f, &b).unwrap(), &a).unwrap();
                let rhs = weyl(&f, &ab).unwrap();
                assert_eq!(lhs, rhs, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn cesaro_sum_examples() {
        // D^{-a} e_0 reproduces the kernel table.
        let w = cesaro_sum(&FiniteSeq::<Rational>::unit(0), &rat(1, 2), 6).unwrap();
        let k = KernelTable::new(&rat(1, 2), 6).unwrap();
        assert_eq!(w.values(), k.values());

        // D^{-1} of (1,1,1) is the running sum, 3 from index 2 on.
        let w = cesaro_sum(&rseq(&[(1, 1), (1, 1), (1, 1)]), &rat(1, 1), 5).unwrap();
        assert_eq!(w.value(5), &rat(3, 1));

        // Semigroup: D^{-1/2} D^{-1/2} f = D^{-1} f on the window.
        let f = rseq(&[(2, 1), (0, 1), (-1, 3)]);
        let half = cesaro_sum(&f, &rat(1, 2), 12).unwrap();
        let k = KernelTable::new(&rat(1, 2), 12).unwrap();
        let full = cesaro_sum(&f, &rat(1, 1), 12).unwrap();
        for n in 0..=12usize {
            let mut acc = rat(0, 1);
            for j in 0..=n {
                acc += k.value(n - j).clone() * half.value(j).clone();
            }
            assert_eq!(&acc, full.value(n), "n={n}");
        }
    }

    #[test]
    fn duality_examples() {
        let e3 = FiniteSeq::<Rational>::unit(3);
        assert_eq!(duality_pairing(&e3, &e3), rat(1, 1));

        let f = rseq(&[(1, 2), (-2, 1), (1, 3)]);
        let g = rseq(&[(3, 1), (0, 1), (1, 5), (7, 1)]);
        for (n, d) in [(1i64, 2i64), (1, 1), (3, 2)] {
            let a = rat(n, d);
            // <W^{-a} f, g> = <f, D^{-a} g>
            let lhs = duality_pairing(&weyl_sum(&f, &a).unwrap(), &g);
            let window = cesaro_sum(&g, &a, f.support_end().unwrap()).unwrap();
            let rhs = duality_pairing_window(&f, &window).unwrap();
            assert_eq!(lhs, rhs, "a={a}");

            // <f, g> = <D^{-a} f, W^a g> (pairing truncated at end of W^a g).
            let wg = weyl_difference(&g, &a).unwrap();
            let fa = cesaro_sum(&f, &a, wg.support_end().unwrap()).unwrap();
            let rhs2 = duality_pairing_window(&wg, &fa).unwrap();
            assert_eq!(duality_pairing(&f, &g), rhs2, "a={a}");
        }
    }

    #[test]
    fn product_identity_defect_is_zero() {
        let e0 = FiniteSeq::<Rational>::unit(0);
        let g = rseq(&[(1, 1), (1, 2), (0, 1), (2, 7)]);
        assert!(weyl_product_identity_defect(&e0, &g, &rat(1, 2)).unwrap().is_zero());

        let f = rseq(&[(1, 1), (-1, 1), (1, 4), (0, 1), (3, 1)]);
        for (n, d) in [(1i64, 2i64), (1, 1), (5, 4)] {
            assert!(
                weyl_product_identity_defect(&f, &g, &rat(n, d)).unwrap().is_zero(),
                "alpha={n}/{d}"
            );
        }
    }

    #[test]
    fn float_limits_under_vanishing_order() {
        // W^{+-a} f -> f as a -> 0, monotonically along a = 2^-k.
        let f = FiniteSeq::<f64>::from_coeffs(vec![0.7, -0.3, 0.9, 0.1, -1.0, 0.5]);
        let defect = |a: f64| -> (f64, f64) {
            let up = weyl_difference(&f, &a).unwrap().sub(&f).sup_norm();
            let down = weyl_sum(&f, &a).unwrap().sub(&f).sup_norm();
            (up, down)
        };
        let mut last = (f64::INFINITY, f64::INFINITY);
        for k in 1..=24 {
            let (u, d) = defect(0.5f64.powi(k));
            assert!(u <= last.0 && d <= last.1, "k={k}");
            last = (u, d);
        }
        assert!(last.0 < 1e-6 && last.1 < 1e-6);
    }
}
