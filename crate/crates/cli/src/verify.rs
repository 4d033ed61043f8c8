//! The `verify` command: the full identity suite over seeded instances.
//! In exact mode every defect must be exactly zero; in float mode the same
//! checks run against a 1e-9 tolerance. An injected orbit fault must flip
//! the functional-equation verdict.

use cesaro_core::kernels::kernel_semigroup_check;
use cesaro_core::matrix::DenseOperator;
use cesaro_core::scalar::{RealScalar, ScalarMode};
use cesaro_core::seq::{
    cesaro_sum, duality_pairing, duality_pairing_window, weyl, weyl_difference,
    weyl_product_identity_defect, weyl_sum,
};
use cesaro_core::special::h_seq;
use cesaro_core::{instances, opcalc, FiniteSeq};

use crate::report::CheckRow;

fn order_grid<S: RealScalar>() -> Vec<S> {
    [(1i64, 4i64), (1, 2), (1, 1), (3, 2), (2, 1)]
        .iter()
        .map(|&(n, d)| S::from_ratio(n, d))
        .collect()
}

fn rational_like_seq<S: RealScalar>(
    rng: &mut instances::ChaCha8Rng,
    max_end: usize,
) -> FiniteSeq<S> {
    instances::scalar_seq(rng, max_end, 4, 4)
}

fn rational_like_matrix<S: RealScalar>(
    rng: &mut instances::ChaCha8Rng,
    dim: usize,
) -> DenseOperator<S> {
    instances::scalar_matrix(rng, dim, 2, 2)
}

/// Runs the identity suite and returns its check rows. `inject_orbit_fault`
/// perturbs one orbit entry before the functional-equation checks.
pub fn identity_suite<S: RealScalar>(
    seed: u64,
    horizon: usize,
    inject_orbit_fault: bool,
) -> cesaro_core::Result<Vec<CheckRow>> {
    let tolerance = match S::MODE {
        ScalarMode::ExactRational => 0.0,
        ScalarMode::Float64 => 1e-9,
    };
    let mut rng = instances::seeded_rng(seed);
    let mut rows = Vec::new();

    // Kernel convolution semigroup.
    let orders: Vec<S> = order_grid();
    let mut worst = 0.0f64;
    for a in &orders {
        for b in &orders {
            let report = kernel_semigroup_check(a, b, horizon.min(128))?;
            worst = worst.max(report.max_abs_defect.abs_f64());
        }
    }
    rows.push(CheckRow::new("kernel-semigroup", "k^a * k^b = k^(a+b)", worst, tolerance));

    // Weyl inversion.
    let mut worst = 0.0f64;
    for a in &orders {
        let f: FiniteSeq<S> = rational_like_seq(&mut rng, 16);
        let there = weyl_difference(&weyl_sum(&f, a)?, a)?.sub(&f).l1_norm_f64();
        let back = weyl_sum(&weyl_difference(&f, a)?, a)?.sub(&f).l1_norm_f64();
        worst = worst.max(there).max(back);
    }
    rows.push(CheckRow::new("weyl-inversion", "W^a W^-a f = W^-a W^a f = f", worst, tolerance));

    // Signed index law.
    let signed: Vec<S> = [(-3i64, 2i64), (-1, 1), (-1, 2), (1, 2), (1, 1), (3, 2)]
        .iter()
        .map(|&(n, d)| S::from_ratio(n, d))
        .collect();
    let f: FiniteSeq<S> = rational_like_seq(&mut rng, 12);
    let mut worst = 0.0f64;
    for a in &signed {
        for b in &signed {
            let joint = weyl(&f, &(a.clone() + b.clone()))?;
            let split = weyl(&weyl(&f, b)?, a)?;
            worst = worst.max(split.sub(&joint).l1_norm_f64());
        }
    }
    rows.push(CheckRow::new("weyl-index-law", "W^a W^b f = W^(a+b) f", worst, tolerance));

    // Duality.
    let mut worst = 0.0f64;
    for a in orders.iter().take(3) {
        let f: FiniteSeq<S> = rational_like_seq(&mut rng, 12);
        let g: FiniteSeq<S> = rational_like_seq(&mut rng, 12);
        if f.is_zero() {
            continue;
        }
        let lhs = duality_pairing(&weyl_sum(&f, a)?, &g);
        let window = cesaro_sum(&g, a, f.support_end().unwrap())?;
        let rhs = duality_pairing_window(&f, &window)?;
        worst = worst.max((lhs - rhs).abs_f64());
    }
    rows.push(CheckRow::new("duality", "<W^-a f, g> = <f, D^-a g>", worst, tolerance));

    // Convolution identity under the Weyl difference.
    let mut worst = 0.0f64;
    for a in orders.iter().take(3) {
        let f: FiniteSeq<S> = rational_like_seq(&mut rng, 8);
        let g: FiniteSeq<S> = rational_like_seq(&mut rng, 8);
        worst = worst.max(weyl_product_identity_defect(&f, &g, a)?.abs_f64());
    }
    rows.push(CheckRow::new(
        "weyl-convolution-identity",
        "W^a(f*g)(n) = sum_j W^a g(j) [window sum of k^a W^a f] - tail part",
        worst,
        tolerance,
    ));

    // Operator side: functional equation, generator, homomorphism laws.
    let theta_orders: Vec<S> =
        [(1i64, 2i64), (1, 1), (2, 1)].iter().map(|&(n, d)| S::from_ratio(n, d)).collect();
    let mut fe_worst = 0.0f64;
    let mut gen_worst = 0.0f64;
    let mut mult_worst = 0.0f64;
    let mut unit_worst = 0.0f64;
    let mut diff_worst = 0.0f64;
    let mut order_worst = 0.0f64;
    for i in 0..6usize {
        let t: DenseOperator<S> = rational_like_matrix(&mut rng, 2 + i % 2);
        for a in &theta_orders {
            let orbit = opcalc::cesaro_orbit(&t, a, 16)?;
            if inject_orbit_fault && i == 0 {
                // Perturb one table entry; the round-trip must expose it.
                let mut table = orbit.table().to_vec();
                table[3] = table[3].add(&DenseOperator::identity(t.dim()));
                let report = opcalc::reconstruct_generator(&table, a)?;
                fe_worst = fe_worst.max(report.max_defect.abs_f64());
                gen_worst = gen_worst.max(report.max_defect.abs_f64());
            }
            fe_worst = fe_worst
                .max(opcalc::functional_equation_max_defect(&orbit, 16)?.abs_f64());
            let report = opcalc::reconstruct_generator(orbit.table(), a)?;
            gen_worst = gen_worst.max(report.max_defect.abs_f64());

            let f: FiniteSeq<S> = rational_like_seq(&mut rng, 4);
            let g: FiniteSeq<S> = rational_like_seq(&mut rng, 4);
            mult_worst =
                mult_worst.max(opcalc::theta_multiplicativity_defect(&f, &g, &orbit)?.abs_f64());
            unit_worst = unit_worst.max(
                opcalc::theta_apply(&FiniteSeq::unit(1), &orbit)?.sub(&t).max_row_norm().abs_f64(),
            );
            let h = h_seq(a, 5)?;
            unit_worst = unit_worst.max(
                opcalc::theta_apply(&h, &orbit)?.sub(orbit.entry(5)).max_row_norm().abs_f64(),
            );
            diff_worst =
                diff_worst.max(opcalc::theta_difference_identity_defect(&f, &orbit)?.abs_f64());
        }
        let f: FiniteSeq<S> = rational_like_seq(&mut rng, 4);
        order_worst = order_worst.max(
            opcalc::theta_order_independence_defect(
                &f,
                &t,
                &S::from_ratio(1, 2),
                &S::from_ratio(3, 2),
                16,
            )?
            .abs_f64(),
        );
    }
    rows.push(CheckRow::new(
        "functional-equation",
        "T_n T_m = sum_{u=m..n+m} k^a(n+m-u) T_u - sum_{u<n} k^a(n+m-u) T_u",
        fe_worst,
        tolerance,
    ));
    rows.push(CheckRow::new(
        "generator-roundtrip",
        "T = T_1 - a I regenerates the table",
        gen_worst,
        tolerance,
    ));
    rows.push(CheckRow::new(
        "theta-multiplicative",
        "theta(f*g) = theta(f) theta(g)",
        mult_worst,
        tolerance,
    ));
    rows.push(CheckRow::new(
        "theta-units",
        "theta(e_1) = T and theta(h_n^a) = D^-a T(n)",
        unit_worst,
        tolerance,
    ));
    rows.push(CheckRow::new(
        "theta-difference",
        "T theta(Df) = (I-T) theta(f) - f(0) I",
        diff_worst,
        tolerance,
    ));
    rows.push(CheckRow::new(
        "theta-order-independence",
        "sum_n W^a f(n) D^-a T(n) = sum_n W^b f(n) D^-b T(n)",
        order_worst,
        tolerance,
    ));

    Ok(rows)
}

/// Gautschi bound check, float mode only.
pub fn gautschi_row(alpha: f64, horizon: usize) -> cesaro_core::Result<CheckRow> {
    let report = cesaro_core::kernels::gautschi_bounds_check(alpha, horizon)?;
    Ok(CheckRow::new(
        "gautschi",
        "(n+1)^(a-1)/Gamma(a) < k^a(n) < n^(a-1)/Gamma(a)",
        report.violations.len() as f64,
        0.0,
    ))
}
