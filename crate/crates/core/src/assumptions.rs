//! Numerical checks of the two model assumptions, the primitive-form
//! quasi-concavity condition, and type normalization.
//!
//! The checks are advisory gates: downstream verdicts run regardless of the
//! outcome but stamp their output with the report, since the brute-force
//! oracle remains valid without either assumption.

use rayon::prelude::*;
use serde::Serialize;

use crate::bundle::Bundle;
use crate::error::{Error, Result};
use crate::grid::{linspace, single_peak_violation};
use crate::market::MarketInstance;
use crate::value::{Pwl, ValueModel};

/// Default grid for assumption checks.
pub const DEFAULT_ASSUMPTION_GRID: usize = 4097;
/// Default absolute tolerance on value comparisons.
pub const DEFAULT_ASSUMPTION_TOL: f64 = 1e-9;

/// Outcome of checking both assumptions on one instance.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct AssumptionReport {
    pub monotonicity: MonotonicityCheck,
    pub quasiconcavity: QuasiConcavityCheck,
    pub grid_size: usize,
    pub tolerance: f64,
}

impl AssumptionReport {
    pub fn passes(&self) -> bool {
        self.monotonicity.pass && self.quasiconcavity.pass
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct MonotonicityCheck {
    pub pass: bool,
    pub witness: Option<MonotonicityWitness>,
}

/// A pair of types, ordered by v(b̄,·), at which some bundle value decreases
/// (or fails to increase strictly while positive).
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct MonotonicityWitness {
    pub bundle: Bundle,
    /// True when the failing curve is the conditional value v(b,·|b^C).
    pub conditional: bool,
    pub t_low: f64,
    pub t_high: f64,
    pub value_low: f64,
    pub value_high: f64,
    /// Set when v(b̄,·) is constant on the grid, leaving the ordering undefined.
    pub degenerate_ordering: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct QuasiConcavityCheck {
    pub pass: bool,
    pub witness: Option<QuasiConcavityWitness>,
}

/// A triple t1 < t2 < t3 with the middle profit below both ends.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct QuasiConcavityWitness {
    pub bundle: Bundle,
    pub conditional: bool,
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub profit1: f64,
    pub profit2: f64,
    pub profit3: f64,
}

/// Runs both checks with the given grid and tolerance.
pub fn check_assumptions(
    instance: &MarketInstance,
    grid_size: usize,
    tol: f64,
) -> AssumptionReport {
    AssumptionReport {
        monotonicity: check_monotonicity(instance, grid_size, tol),
        quasiconcavity: check_quasiconcavity(instance, grid_size, tol),
        grid_size,
        tolerance: tol,
    }
}

/// `check_assumptions` at the default grid and tolerance.
pub fn check_assumptions_default(instance: &MarketInstance) -> AssumptionReport {
    check_assumptions(instance, DEFAULT_ASSUMPTION_GRID, DEFAULT_ASSUMPTION_TOL)
}

/// Monotonicity (Assumption 1): sorting the grid by v(b̄,·), every bundle
/// value and every conditional value v(b,·|b^C) must be nondecreasing within
/// `tol`, and strictly increasing (by more than `tol`) on pairs where the
/// value exceeds `tol`.
pub fn check_monotonicity(
    instance: &MarketInstance,
    grid_size: usize,
    tol: f64,
) -> MonotonicityCheck {
    match monotonicity_witness(instance.model(), grid_size.max(3), tol) {
        None => MonotonicityCheck { pass: true, witness: None },
        Some(w) => MonotonicityCheck { pass: false, witness: Some(w) },
    }
}

/// Core of the monotonicity check, shared with `normalize_types`.
fn monotonicity_witness(
    model: &ValueModel,
    grid_size: usize,
    tol: f64,
) -> Option<MonotonicityWitness> {
    let n = model.products();
    let grand = Bundle::grand(n);
    let ts = linspace(0.0, 1.0, grid_size);
    let vbar: Vec<f64> =
        ts.iter().map(|&t| model.value(grand, t).expect("type grid in domain")).collect();

    let (vmin, vmax) = vbar.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    if vmax - vmin <= tol {
        // Constant v(b̄,·): the ordering the assumption relies on is undefined.
        return Some(MonotonicityWitness {
            bundle: grand,
            conditional: false,
            t_low: ts[0],
            t_high: *ts.last().unwrap(),
            value_low: vbar[0],
            value_high: *vbar.last().unwrap(),
            degenerate_ordering: true,
        });
    }

    let mut order: Vec<usize> = (0..ts.len()).collect();
    order.sort_by(|&i, &j| vbar[i].partial_cmp(&vbar[j]).unwrap().then(i.cmp(&j)));

    let curve_violation = |ws: &[f64], b: Bundle, conditional: bool| {
        for pair in order.windows(2) {
            let (i, j) = (pair[0], pair[1]);
            let dvbar = vbar[j] - vbar[i];
            let dw = ws[j] - ws[i];
            let bad = if dvbar <= tol {
                // Ties in v(b̄,·) must map to ties in v(b,·).
                dw.abs() > tol
            } else {
                dw < -tol || (ws[i] > tol && ws[j] > tol && dw <= tol)
            };
            if bad {
                return Some(MonotonicityWitness {
                    bundle: b,
                    conditional,
                    t_low: ts[i],
                    t_high: ts[j],
                    value_low: ws[i],
                    value_high: ws[j],
                    degenerate_ordering: false,
                });
            }
        }
        None
    };

    let witnesses: Vec<Option<MonotonicityWitness>> = Bundle::all_nonempty(n)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|b| {
            let ws: Vec<f64> =
                ts.iter().map(|&t| model.value(b, t).expect("type grid in domain")).collect();
            if let Some(w) = curve_violation(&ws, b, false) {
                return Some(w);
            }
            if !b.is_grand() {
                let bc = b.complement();
                let cond: Vec<f64> = ts
                    .iter()
                    .zip(&vbar)
                    .map(|(&t, &vb)| vb - model.value(bc, t).expect("type grid in domain"))
                    .collect();
                if let Some(w) = curve_violation(&cond, b, true) {
                    return Some(w);
                }
            }
            None
        })
        .collect();

    // Deterministic reporting: first by bundle mask, plain curve before conditional.
    witnesses.into_iter().flatten().min_by(|a, b| {
        (a.bundle.mask(), a.conditional).cmp(&(b.bundle.mask(), b.conditional))
    })
}

/// Quasi-concavity (Assumption 2): traces π_b(t|·) on the grid over the
/// price range with strictly positive demand (t < 1) and looks for an
/// interior dip deeper than `tol`, for both the plain and the
/// complement-endowed profit curve of every bundle.
pub fn check_quasiconcavity(
    instance: &MarketInstance,
    grid_size: usize,
    tol: f64,
) -> QuasiConcavityCheck {
    let n = instance.products();
    let ts = linspace(0.0, 1.0, grid_size.max(3));
    // t = 1 prices the bundle at v(b,1), which yields zero demand; drop it.
    let ts = &ts[..ts.len() - 1];

    let profit_curve = |b: Bundle, endowment: Bundle| -> Vec<f64> {
        let cost = instance.bundle_cost(b);
        ts.iter()
            .map(|&t| {
                let margin = instance
                    .conditional_value(b, t, endowment)
                    .expect("type grid in domain")
                    - cost;
                (1.0 - instance.dist().cdf(t)) * margin
            })
            .collect()
    };

    let witnesses: Vec<Option<QuasiConcavityWitness>> = Bundle::all_nonempty(n)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|b| {
            for conditional in [false, true] {
                if conditional && b.is_grand() {
                    continue;
                }
                let endowment = if conditional { b.complement() } else { Bundle::empty(n) };
                let pis = profit_curve(b, endowment);
                if let Some((i, j, k)) = single_peak_violation(&pis, tol) {
                    return Some(QuasiConcavityWitness {
                        bundle: b,
                        conditional,
                        t1: ts[i],
                        t2: ts[j],
                        t3: ts[k],
                        profit1: pis[i],
                        profit2: pis[j],
                        profit3: pis[k],
                    });
                }
            }
            None
        })
        .collect();

    let witness = witnesses.into_iter().flatten().min_by(|a, b| {
        (a.bundle.mask(), a.conditional).cmp(&(b.bundle.mask(), b.conditional))
    });
    QuasiConcavityCheck { pass: witness.is_none(), witness }
}

/// Result of the primitive-form single-crossing check.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct PrimitiveConditionReport {
    pub pass: bool,
    pub crossings: usize,
    /// Approximate location of the first crossing, if any.
    pub first_crossing: Option<f64>,
}

/// Primitive form of Assumption 2: g(t) = d/dt log(v(b,t) - Σc) - f/(1-F)
/// must cross zero exactly once, from above, on the positive-margin range.
pub fn check_primitive_condition(
    instance: &MarketInstance,
    b: Bundle,
    grid_size: usize,
) -> Result<PrimitiveConditionReport> {
    let grid_size = grid_size.max(5);
    let ts = linspace(0.0, 1.0, grid_size);
    let cost = instance.bundle_cost(b);
    let margins: Vec<f64> =
        ts.iter().map(|&t| instance.value(b, t).map(|v| v - cost)).collect::<Result<_>>()?;

    // Central differences of log-margin need both neighbors strictly positive,
    // and the hazard needs t < 1.
    let mut gs: Vec<(f64, f64)> = Vec::new();
    for i in 1..grid_size - 1 {
        if margins[i - 1] > 0.0 && margins[i] > 0.0 && margins[i + 1] > 0.0 && ts[i] < 1.0 {
            let h = ts[i + 1] - ts[i - 1];
            let dlog = (margins[i + 1].ln() - margins[i - 1].ln()) / h;
            let f = instance.dist().density(ts[i]);
            let big_f = instance.dist().cdf(ts[i]);
            gs.push((ts[i], dlog - f / (1.0 - big_f)));
        }
    }
    if gs.is_empty() {
        return Err(Error::Precondition(format!(
            "v({b},t) - cost is not strictly positive on any interior sub-interval"
        )));
    }

    let mut crossings = 0usize;
    let mut first_crossing = None;
    let mut first_from_above = false;
    let mut prev: Option<(f64, f64)> = None;
    for &(t, g) in &gs {
        if g == 0.0 {
            continue;
        }
        if let Some((tp, gp)) = prev {
            if (g > 0.0) != (gp > 0.0) {
                crossings += 1;
                if first_crossing.is_none() {
                    first_crossing = Some(0.5 * (tp + t));
                    first_from_above = gp > 0.0;
                }
            }
        }
        prev = Some((t, g));
    }
    Ok(PrimitiveConditionReport {
        pass: crossings == 1 && first_from_above,
        crossings,
        first_crossing,
    })
}

/// A model re-indexed on the normalized type τ, with the mapping itself.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedModel {
    /// τ(t) tabulated on the sampling grid.
    pub tau: Pwl,
    /// The model re-parameterized on τ ∈ [0,1].
    pub model: ValueModel,
}

/// Builds τ(t) = (v(b̄,t) - min v(b̄,·)) / (max - min) and re-indexes the
/// model on τ, preserving the v(b̄) order. Requires monotonicity.
pub fn normalize_types(model: &ValueModel, grid_size: usize) -> Result<NormalizedModel> {
    let grid_size = grid_size.max(3);
    if let Some(w) = monotonicity_witness(model, grid_size, DEFAULT_ASSUMPTION_TOL) {
        if w.degenerate_ordering {
            return Err(Error::Degenerate(
                "v(b̄,·) is constant; the normalized type is undefined".into(),
            ));
        }
        return Err(Error::Precondition(format!(
            "monotonicity fails at bundle {} (t = {}, {}); normalization needs it",
            w.bundle, w.t_low, w.t_high
        )));
    }

    let n = model.products();
    let grand = Bundle::grand(n);
    let ts = linspace(0.0, 1.0, grid_size);
    let vbar: Vec<f64> = ts.iter().map(|&t| model.value(grand, t).unwrap()).collect();
    let (vmin, vmax) = vbar.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    let span = vmax - vmin;
    let tau_of = |v: f64| ((v - vmin) / span).clamp(0.0, 1.0);

    let mut order: Vec<usize> = (0..ts.len()).collect();
    order.sort_by(|&i, &j| vbar[i].partial_cmp(&vbar[j]).unwrap().then(i.cmp(&j)));

    // Collapse exactly-tied v(b̄) knots; monotonicity makes their bundle
    // values agree.
    let mut taus: Vec<f64> = Vec::with_capacity(order.len());
    let mut kept: Vec<usize> = Vec::with_capacity(order.len());
    for &i in &order {
        let tau = tau_of(vbar[i]);
        if let Some(&last) = taus.last() {
            if tau <= last {
                continue;
            }
        }
        taus.push(tau);
        kept.push(i);
    }
    if taus.len() < 2 {
        return Err(Error::Degenerate("normalized grid collapsed to a point".into()));
    }
    *taus.first_mut().unwrap() = 0.0;
    *taus.last_mut().unwrap() = 1.0;

    let bundles: Vec<Vec<f64>> = Bundle::all_nonempty(n)
        .map(|b| kept.iter().map(|&i| model.value(b, ts[i]).unwrap()).collect())
        .collect();
    let normalized = ValueModel::Tabulated { ts: taus, bundles };
    normalized.validate()?;
    let tau = Pwl::new(ts.clone(), vbar.iter().map(|&v| tau_of(v)).collect())?;
    Ok(NormalizedModel { tau, model: normalized })
}
