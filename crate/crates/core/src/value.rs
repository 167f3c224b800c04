//! Value functions v(b,t) over normalized types t in [0,1].
//!
//! Four families are supported: the two-product add-on family used throughout
//! the parametric examples, additive values built from per-product component
//! curves, a quality-ladder family for the nonlinear-pricing translation, and
//! tabulated per-bundle grids evaluated by piecewise-linear interpolation.
//! Every family satisfies v(∅,t) = 0.

use crate::bundle::Bundle;
use crate::error::{Error, Result};

/// A scalar curve of the type index, used for additive components and
/// synthetic single-good problems.
#[derive(Clone, Debug, PartialEq)]
pub enum Curve {
    /// `coef * t^exponent` with `exponent >= 0`.
    Power { coef: f64, exponent: f64 },
    /// `intercept + slope * t`.
    Affine { intercept: f64, slope: f64 },
    /// Piecewise-linear interpolation between knots.
    Pwl(Pwl),
}

impl Curve {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Curve::Power { coef, exponent } => {
                if *exponent == 0.0 {
                    *coef
                } else {
                    coef * t.powf(*exponent)
                }
            }
            Curve::Affine { intercept, slope } => intercept + slope * t,
            Curve::Pwl(p) => p.eval_clamped(t),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Curve::Power { coef, exponent } => {
                if !coef.is_finite() || !exponent.is_finite() || *exponent < 0.0 {
                    return Err(Error::Model(
                        "power curve requires finite coefficient and exponent >= 0".into(),
                    ));
                }
            }
            Curve::Affine { intercept, slope } => {
                if !intercept.is_finite() || !slope.is_finite() {
                    return Err(Error::Model("affine curve requires finite parameters".into()));
                }
            }
            Curve::Pwl(p) => p.validate()?,
        }
        Ok(())
    }
}

/// Piecewise-linear function on a knot grid.
///
/// Knots are nondecreasing; a duplicated knot with distinct values encodes a
/// jump discontinuity and is evaluated right-continuously. Evaluation at a
/// knot returns the knot value exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct Pwl {
    ts: Vec<f64>,
    vs: Vec<f64>,
}

impl Pwl {
    pub fn new(ts: Vec<f64>, vs: Vec<f64>) -> Result<Self> {
        let p = Pwl { ts, vs };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if self.ts.len() < 2 || self.ts.len() != self.vs.len() {
            return Err(Error::Model(
                "piecewise-linear grid needs >= 2 knots and matching value count".into(),
            ));
        }
        if !self.ts.iter().all(|x| x.is_finite()) || !self.vs.iter().all(|x| x.is_finite()) {
            return Err(Error::Model("piecewise-linear knots and values must be finite".into()));
        }
        if self.ts.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Model("piecewise-linear knots must be nondecreasing".into()));
        }
        if self.ts.first() == self.ts.last() {
            return Err(Error::Model("piecewise-linear grid spans a single point".into()));
        }
        Ok(())
    }

    pub fn knots(&self) -> &[f64] {
        &self.ts
    }

    pub fn values(&self) -> &[f64] {
        &self.vs
    }

    pub fn hull(&self) -> (f64, f64) {
        (self.ts[0], *self.ts.last().unwrap())
    }

    /// Evaluates at `t`, which must lie inside the knot hull.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let (lo, hi) = self.hull();
        if !(t >= lo && t <= hi) {
            return Err(Error::Domain(format!(
                "t = {t} outside the tabulated grid hull [{lo}, {hi}]"
            )));
        }
        Ok(self.eval_clamped(t))
    }

    /// Evaluates at `t` clamped to the hull; callers check the hull themselves.
    pub fn eval_clamped(&self, t: f64) -> f64 {
        pwl_eval(&self.ts, &self.vs, t)
    }
}

/// Piecewise-linear evaluation over borrowed knot/value slices, clamped to the
/// hull. Duplicated knots are right-continuous; exact knots return exactly.
pub(crate) fn pwl_eval(ts: &[f64], vs: &[f64], t: f64) -> f64 {
    let t = t.clamp(ts[0], *ts.last().unwrap());
    // Last knot <= t keeps duplicated knots right-continuous and exact at knots.
    let j = match ts.partition_point(|&x| x <= t) {
        0 => 0,
        k => k - 1,
    };
    if ts[j] == t || j + 1 == ts.len() {
        return vs[j];
    }
    let (t0, t1) = (ts[j], ts[j + 1]);
    let (v0, v1) = (vs[j], vs[j + 1]);
    if t1 == t0 {
        return v1;
    }
    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
}

/// Value of the quality ladder at level `q`: `q * t^(1/q)`, zero at `q = 0`.
pub fn quality_value(q: f64, t: f64) -> f64 {
    if q <= 0.0 {
        0.0
    } else {
        q * t.powf(1.0 / q)
    }
}

/// Family of bundle value functions.
#[derive(Clone, Debug, PartialEq)]
pub enum ValueModel {
    /// Two products: a base good worth `t + k1` and an add-on worth nothing
    /// alone but `t^k2` on top of the base, so `v(b̄,t) = t + k1 + t^k2`.
    AddOn { k1: f64, k2: f64 },
    /// `v(b,t) = Σ_{i∈b} component_i(t)`.
    Additive { components: Vec<Curve> },
    /// Quality ladder: product i is the increment from level i-1 to level i.
    /// A bundle is worth the highest level whose increments it fully owns,
    /// i.e. `v(b,t) = q_k * t^(1/q_k)` where k is the longest prefix {1..k} ⊆ b.
    QualityRoot { q_levels: Vec<f64> },
    /// Per-bundle value grids on a shared knot vector; `bundles[mask-1]` holds
    /// the values for the bundle with that mask.
    Tabulated { ts: Vec<f64>, bundles: Vec<Vec<f64>> },
}

impl ValueModel {
    /// Number of products the family is defined over.
    pub fn products(&self) -> usize {
        match self {
            ValueModel::AddOn { .. } => 2,
            ValueModel::Additive { components } => components.len(),
            ValueModel::QualityRoot { q_levels } => q_levels.len(),
            ValueModel::Tabulated { bundles, .. } => {
                (bundles.len() + 1).trailing_zeros() as usize
            }
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match self {
            ValueModel::AddOn { k1, k2 } => {
                if !k1.is_finite() {
                    return Err(Error::Model("addon family requires finite k1".into()));
                }
                if !(k2.is_finite() && *k2 > 0.0) {
                    return Err(Error::Model("addon family requires k2 > 0".into()));
                }
            }
            ValueModel::Additive { components } => {
                if components.is_empty() {
                    return Err(Error::Model("additive family needs >= 1 component".into()));
                }
                for c in components {
                    c.validate()?;
                }
            }
            ValueModel::QualityRoot { q_levels } => {
                if q_levels.is_empty()
                    || q_levels.windows(2).any(|w| w[1] <= w[0])
                    || q_levels.iter().any(|q| !(q.is_finite() && *q > 0.0))
                {
                    return Err(Error::Model(
                        "quality levels must be finite, positive, strictly increasing".into(),
                    ));
                }
            }
            ValueModel::Tabulated { ts, bundles } => {
                let n = self.products();
                if bundles.is_empty() || bundles.len() != (1usize << n) - 1 {
                    return Err(Error::Model(format!(
                        "tabulated family needs one value array per nonempty bundle (got {})",
                        bundles.len()
                    )));
                }
                let grid = Pwl::new(ts.clone(), bundles[0].clone())?;
                let (lo, hi) = grid.hull();
                if lo != 0.0 || hi != 1.0 {
                    return Err(Error::Model(
                        "tabulated grid must span exactly [0, 1] in normalized types".into(),
                    ));
                }
                for vs in bundles {
                    if vs.len() != ts.len() {
                        return Err(Error::Model(
                            "every tabulated bundle array must match the knot grid length".into(),
                        ));
                    }
                    if !vs.iter().all(|v| v.is_finite()) {
                        return Err(Error::Model("tabulated values must be finite".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// The valuation v(b,t) of bundle `b` by type `t ∈ [0,1]`; v(∅,t) = 0.
    pub fn value(&self, b: Bundle, t: f64) -> Result<f64> {
        if !(t >= 0.0 && t <= 1.0) {
            return Err(Error::Domain(format!("type t = {t} outside [0, 1]")));
        }
        if b.is_empty() {
            return Ok(0.0);
        }
        debug_assert_eq!(b.product_count(), self.products());
        Ok(match self {
            ValueModel::AddOn { k1, k2 } => match b.mask() {
                0b01 => t + k1,
                0b10 => 0.0,
                _ => t + k1 + t.powf(*k2),
            },
            ValueModel::Additive { components } => {
                b.products().map(|i| components[i - 1].eval(t)).sum()
            }
            ValueModel::QualityRoot { q_levels } => {
                let prefix = b.mask().trailing_ones() as usize;
                if prefix == 0 {
                    0.0
                } else {
                    quality_value(q_levels[prefix - 1], t)
                }
            }
            ValueModel::Tabulated { ts, bundles } => {
                let (lo, hi) = (ts[0], *ts.last().unwrap());
                if !(t >= lo && t <= hi) {
                    return Err(Error::Domain(format!(
                        "t = {t} outside the tabulated grid hull [{lo}, {hi}]"
                    )));
                }
                pwl_eval(ts, &bundles[b.mask() as usize - 1], t)
            }
        })
    }

    /// Conditional valuation v(b,t|b') = v(b ∪ b', t) - v(b', t) for disjoint
    /// bundles.
    pub fn conditional_value(&self, b: Bundle, t: f64, endowment: Bundle) -> Result<f64> {
        if b.overlaps(endowment) {
            return Err(Error::Overlap {
                bundle: b.to_string(),
                endowment: endowment.to_string(),
            });
        }
        Ok(self.value(b.union(endowment), t)? - self.value(endowment, t)?)
    }
}
