//! Single-bundle profit curves, optimal cutoffs, and optimal sales volumes.
//!
//! For a bundle b sold alone to a population endowed with b', the profit of
//! selling to exactly the types above t is
//!
//! ```text
//! π_b(t|b') = (1 - F(t)) * (v(b,t|b') - Σ_{i∈b} c_i)
//! ```
//!
//! The optimal cutoff t*(b|b') maximizes this curve; the optimal volume is
//! D*(b|b') = 1 - F(t*). These are the quantities the pure-bundling
//! characterization compares across bundles.

use crate::bundle::Bundle;
use crate::dist::TypeDistribution;
use crate::error::{Error, Result};
use crate::grid::{argmax_first, golden_max, linspace, single_peak_violation};
use crate::market::MarketInstance;

/// Default scan grid for cutoff optimization.
pub const DEFAULT_CUTOFF_GRID: usize = 4097;
/// Golden-section refinement stops once the bracket is narrower than this.
pub const DEFAULT_REFINE_XTOL: f64 = 1e-8;
/// Profits within this band of the maximum count as a plateau tie.
pub const PLATEAU_TOL: f64 = 1e-12;

/// An optimal single-bundle sale: cutoff type, volume, price, and profit.
#[derive(Clone, Debug, PartialEq)]
pub struct CutoffSolution {
    pub bundle: Bundle,
    pub endowment: Bundle,
    /// Marginal buyer type; buyers are the interval [t*, 1].
    pub t_star: f64,
    /// Optimal sales volume D* = 1 - F(t*).
    pub d_star: f64,
    /// Optimal price p* = v(b, t* | b').
    pub p_star: f64,
    /// d* × (p* - bundle cost), never negative.
    pub profit: f64,
    /// Set when no price yields strictly positive profit; then t* = 1, D* = 0.
    pub no_sale: bool,
    /// Set when the profit curve ties within `PLATEAU_TOL` across an interval;
    /// t* is then the interval midpoint.
    pub plateau: bool,
}

/// Cutoff solution over a raw margin curve, before bundle bookkeeping.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct RawCutoff {
    pub t_star: f64,
    pub d_star: f64,
    pub profit: f64,
    pub no_sale: bool,
    pub plateau: bool,
}

/// Maximizes t ↦ (1 - F(t)) * margin(t) by a dense grid scan followed by
/// golden-section refinement between the neighbors of the grid argmax.
pub(crate) fn maximize_margin_cutoff(
    dist: &TypeDistribution,
    margin: impl Fn(f64) -> f64,
    grid_size: usize,
    xtol: f64,
) -> RawCutoff {
    let grid_size = grid_size.max(3);
    let ts = linspace(0.0, 1.0, grid_size);
    let profit_at = |t: f64| (1.0 - dist.cdf(t)) * margin(t);
    let pis: Vec<f64> = ts.iter().map(|&t| profit_at(t)).collect();
    let imax = argmax_first(&pis);
    let pi_max = pis[imax];

    if !(pi_max > 0.0) {
        return RawCutoff { t_star: 1.0, d_star: 0.0, profit: 0.0, no_sale: true, plateau: false };
    }

    // Plateau: a tie band wider than the refinement bracket.
    let mut lo = imax;
    while lo > 0 && pis[lo - 1] >= pi_max - PLATEAU_TOL {
        lo -= 1;
    }
    let mut hi = imax;
    while hi + 1 < grid_size && pis[hi + 1] >= pi_max - PLATEAU_TOL {
        hi += 1;
    }
    if hi - lo >= 2 {
        let t_star = 0.5 * (ts[lo] + ts[hi]);
        return RawCutoff {
            t_star,
            d_star: 1.0 - dist.cdf(t_star),
            profit: profit_at(t_star),
            no_sale: false,
            plateau: true,
        };
    }

    let bracket_lo = ts[imax.saturating_sub(1)];
    let bracket_hi = ts[(imax + 1).min(grid_size - 1)];
    let (t_ref, pi_ref) = golden_max(profit_at, bracket_lo, bracket_hi, xtol);
    let (t_star, profit) =
        if pi_ref >= pi_max { (t_ref, pi_ref) } else { (ts[imax], pi_max) };
    RawCutoff {
        t_star,
        d_star: 1.0 - dist.cdf(t_star),
        profit,
        no_sale: false,
        plateau: false,
    }
}

/// π_b(t|b'): profit from selling b at the price that makes t the marginal
/// buyer, with every customer already endowed with b'.
pub fn profit_at_cutoff(
    instance: &MarketInstance,
    b: Bundle,
    t: f64,
    endowment: Bundle,
) -> Result<f64> {
    let margin = instance.conditional_value(b, t, endowment)? - instance.bundle_cost(b);
    Ok((1.0 - instance.dist().cdf(t)) * margin)
}

/// Computes the optimal cutoff for selling `b` alone under endowment `b'`,
/// using the default grid and refinement tolerance.
pub fn optimal_cutoff(
    instance: &MarketInstance,
    b: Bundle,
    endowment: Bundle,
) -> Result<CutoffSolution> {
    optimal_cutoff_with(instance, b, endowment, DEFAULT_CUTOFF_GRID, DEFAULT_REFINE_XTOL)
}

/// `optimal_cutoff` with explicit grid size and refinement tolerance.
pub fn optimal_cutoff_with(
    instance: &MarketInstance,
    b: Bundle,
    endowment: Bundle,
    grid_size: usize,
    xtol: f64,
) -> Result<CutoffSolution> {
    if b.is_empty() {
        return Err(Error::Precondition("cannot price the empty bundle".into()));
    }
    // Also validates disjointness and the evaluation domain up front.
    instance.conditional_value(b, 0.0, endowment)?;
    instance.conditional_value(b, 1.0, endowment)?;

    let cost = instance.bundle_cost(b);
    let margin =
        |t: f64| instance.conditional_value(b, t, endowment).expect("validated domain") - cost;
    let raw = maximize_margin_cutoff(instance.dist(), margin, grid_size, xtol);
    let p_star = instance.conditional_value(b, raw.t_star, endowment)?;
    let profit = if raw.no_sale { 0.0 } else { raw.d_star * (p_star - cost) };
    Ok(CutoffSolution {
        bundle: b,
        endowment,
        t_star: raw.t_star,
        d_star: raw.d_star,
        p_star,
        profit,
        no_sale: raw.no_sale,
        plateau: raw.plateau,
    })
}

/// D*(b|b'): the optimal sales volume.
pub fn optimal_volume(instance: &MarketInstance, b: Bundle, endowment: Bundle) -> Result<f64> {
    Ok(optimal_cutoff(instance, b, endowment)?.d_star)
}

/// Argmax ordering certificate for two single-peaked curves and their sum.
#[derive(Clone, Debug, PartialEq)]
pub struct ArgmaxOrder {
    pub argmax_f1: usize,
    pub argmax_f2: usize,
    pub argmax_sum: usize,
    /// True when the sum's argmax lies between the two argmaxes, up to one
    /// grid step.
    pub sandwiched: bool,
}

/// Checks the quasi-concave argmax sandwich: on a shared grid, the argmax of
/// f1 + f2 falls between the argmaxes of f1 and f2.
pub fn argmax_order(f1: &[f64], f2: &[f64]) -> Result<ArgmaxOrder> {
    if f1.len() != f2.len() || f1.len() < 3 {
        return Err(Error::Precondition(
            "argmax_order needs two equal-length curves with >= 3 points".into(),
        ));
    }
    let sum: Vec<f64> = f1.iter().zip(f2).map(|(a, b)| a + b).collect();
    for (name, ys) in [("f1", f1), ("f2", f2), ("f1+f2", &sum[..])] {
        if let Some((i, j, k)) = single_peak_violation(ys, 0.0) {
            return Err(Error::NotSinglePeaked(format!(
                "{name} dips at grid indices ({i}, {j}, {k}); see the quasi-concavity witness"
            )));
        }
    }
    let a1 = argmax_first(f1);
    let a2 = argmax_first(f2);
    let a12 = argmax_first(&sum);
    let (lo, hi) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
    let sandwiched = a12 + 1 >= lo && a12 <= hi + 1;
    Ok(ArgmaxOrder { argmax_f1: a1, argmax_f2: a2, argmax_sum: a12, sandwiched })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::TypeDistribution;
    use crate::value::ValueModel;
    use approx::assert_abs_diff_eq;

    fn addon(k1: f64, k2: f64) -> MarketInstance {
        MarketInstance::addon(k1, k2, [0.0, 0.0], TypeDistribution::Uniform01).unwrap()
    }

    fn b(bits: &str, n: usize) -> Bundle {
        Bundle::from_bitstring(bits, n).unwrap()
    }

    #[test]
    fn profit_at_cutoff_examples() {
        let m = addon(0.2, 0.5);
        let got = profit_at_cutoff(&m, b("01", 2), 0.4, Bundle::empty(2)).unwrap();
        assert_abs_diff_eq!(got, 0.36, epsilon = 1e-12);
        assert_eq!(profit_at_cutoff(&m, b("01", 2), 1.0, Bundle::empty(2)).unwrap(), 0.0);
        let m = addon(0.2, 2.0 / 3.0);
        let got = profit_at_cutoff(&m, Bundle::grand(2), 0.4, Bundle::empty(2)).unwrap();
        assert_abs_diff_eq!(got, 0.6 * (0.6 + 0.4f64.powf(2.0 / 3.0)), epsilon = 1e-12);
        assert_abs_diff_eq!(got, 0.6857, epsilon = 5e-5);
    }

    #[test]
    fn partial_bundle_optimum_is_flat_in_k2() {
        for &k2 in &[0.4, 0.5, 2.0 / 3.0, 0.8] {
            let m = addon(0.2, k2);
            let sol = optimal_cutoff(&m, b("01", 2), Bundle::empty(2)).unwrap();
            assert_abs_diff_eq!(sol.t_star, 0.4, epsilon = 1e-7);
            assert_abs_diff_eq!(sol.d_star, 0.6, epsilon = 1e-7);
            assert_abs_diff_eq!(sol.p_star, 0.6, epsilon = 1e-7);
            assert_abs_diff_eq!(sol.profit, 0.36, epsilon = 1e-7);
            assert!(!sol.no_sale && !sol.plateau);
        }
    }

    #[test]
    fn grand_bundle_at_the_threshold() {
        // At k2 = 2/3 the grand-bundle first-order condition balances exactly
        // at t = 0.4: (1-t) v'(t) = v(t) with v = t + 0.2 + t^(2/3).
        let m = addon(0.2, 2.0 / 3.0);
        let sol = optimal_cutoff(&m, Bundle::grand(2), Bundle::empty(2)).unwrap();
        assert_abs_diff_eq!(sol.t_star, 0.4, epsilon = 1e-6);
        assert_abs_diff_eq!(sol.d_star, 0.6, epsilon = 1e-6);
    }

    #[test]
    fn quality_root_flat_fee_point() {
        let m = MarketInstance::new(
            ValueModel::QualityRoot { q_levels: vec![2.0] },
            vec![0.0],
            TypeDistribution::Uniform01,
        )
        .unwrap();
        let sol = optimal_cutoff(&m, Bundle::grand(1), Bundle::empty(1)).unwrap();
        assert_abs_diff_eq!(sol.t_star, 1.0 / 3.0, epsilon = 1e-6);
        assert_abs_diff_eq!(sol.p_star, 2.0 / 3.0f64.sqrt(), epsilon = 1e-6);
        assert_abs_diff_eq!(sol.d_star, 2.0 / 3.0, epsilon = 1e-6);
    }

    #[test]
    fn quality_root_volume_formula() {
        for &q in &[0.5, 1.0, 2.0, 3.0] {
            let m = MarketInstance::new(
                ValueModel::QualityRoot { q_levels: vec![q] },
                vec![0.0],
                TypeDistribution::Uniform01,
            )
            .unwrap();
            let d = optimal_volume(&m, Bundle::grand(1), Bundle::empty(1)).unwrap();
            assert_abs_diff_eq!(d, q / (1.0 + q), epsilon = 1e-6);
        }
    }

    #[test]
    fn worthless_bundle_has_no_profitable_sale() {
        let m = addon(0.2, 0.5);
        let sol = optimal_cutoff(&m, b("10", 2), Bundle::empty(2)).unwrap();
        assert!(sol.no_sale);
        assert_eq!(sol.d_star, 0.0);
        assert_eq!(sol.t_star, 1.0);
        assert_eq!(sol.profit, 0.0);
    }

    #[test]
    fn cutoff_invariant_to_grid_doubling() {
        let m = addon(0.13, 0.9);
        let a = optimal_cutoff_with(&m, Bundle::grand(2), Bundle::empty(2), 4097, 1e-8).unwrap();
        let b_ = optimal_cutoff_with(&m, Bundle::grand(2), Bundle::empty(2), 8193, 1e-8).unwrap();
        assert_abs_diff_eq!(a.t_star, b_.t_star, epsilon = 1e-6);
        assert_abs_diff_eq!(a.profit, b_.profit, epsilon = 1e-10);
    }

    #[test]
    fn decomposition_identity_is_exact() {
        let m = addon(-0.1, 1.2);
        let grand = Bundle::grand(2);
        for bb in Bundle::all_nonempty(2) {
            let bc = bb.complement();
            for &t in &[0.0, 0.21, 0.5, 0.83, 1.0] {
                let whole = profit_at_cutoff(&m, grand, t, Bundle::empty(2)).unwrap();
                let part = profit_at_cutoff(&m, bb, t, Bundle::empty(2)).unwrap();
                let rest = if bc.is_empty() {
                    0.0
                } else {
                    profit_at_cutoff(&m, bc, t, bb).unwrap()
                };
                assert_abs_diff_eq!(whole, part + rest, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn empty_bundle_is_rejected() {
        let m = addon(0.2, 0.5);
        assert!(matches!(
            optimal_cutoff(&m, Bundle::empty(2), Bundle::empty(2)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn argmax_order_examples() {
        let ts = linspace(0.0, 1.0, 101);
        let f: Vec<f64> = ts.iter().map(|t| -(t - 0.5).powi(2)).collect();
        let ord = argmax_order(&f, &f).unwrap();
        assert_eq!(ord.argmax_f1, ord.argmax_f2);
        assert_eq!(ord.argmax_f1, ord.argmax_sum);
        assert!(ord.sandwiched);

        let f1: Vec<f64> = ts.iter().map(|t| -(t - 0.3).powi(2)).collect();
        let f2: Vec<f64> = ts.iter().map(|t| -(t - 0.7).powi(2)).collect();
        let ord = argmax_order(&f1, &f2).unwrap();
        assert!(ord.argmax_sum >= ord.argmax_f1 && ord.argmax_sum <= ord.argmax_f2);
        assert!(ord.sandwiched);
        // Quadratics with equal curvature: the sum peaks at the midpoint 0.5.
        assert_abs_diff_eq!(ts[ord.argmax_sum], 0.5, epsilon = 0.011);
    }

    #[test]
    fn argmax_order_rejects_dips() {
        let f1 = vec![0.0, 1.0, 0.0, 1.0, 0.0];
        let f2 = vec![0.0, 0.0, 0.0, 0.0, 0.0];
        assert!(matches!(argmax_order(&f1, &f2), Err(Error::NotSinglePeaked(_))));
    }
}
