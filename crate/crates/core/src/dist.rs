//! Type distributions on [0,1] with positive density and no atoms.

use crate::error::{Error, Result};
use crate::value::pwl_eval;

/// Distribution of the normalized type index.
///
/// The cdf is strictly increasing with F(0) = 0 and F(1) = 1; tabulated cdfs
/// are piecewise linear with strictly increasing knots, so the density is
/// piecewise constant and strictly positive.
#[derive(Clone, Debug, PartialEq)]
pub enum TypeDistribution {
    Uniform01,
    TabulatedCdf { ts: Vec<f64>, cdf: Vec<f64> },
}

impl TypeDistribution {
    pub fn tabulated(ts: Vec<f64>, cdf: Vec<f64>) -> Result<Self> {
        let d = TypeDistribution::TabulatedCdf { ts, cdf };
        d.validate()?;
        Ok(d)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if let TypeDistribution::TabulatedCdf { ts, cdf } = self {
            if ts.len() < 2 || ts.len() != cdf.len() {
                return Err(Error::Model(
                    "tabulated cdf needs >= 2 knots and matching value count".into(),
                ));
            }
            if !ts.iter().chain(cdf.iter()).all(|x| x.is_finite()) {
                return Err(Error::Model("tabulated cdf entries must be finite".into()));
            }
            if ts[0] != 0.0 || *ts.last().unwrap() != 1.0 {
                return Err(Error::Model("tabulated cdf knots must span exactly [0, 1]".into()));
            }
            if ts.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::Model("tabulated cdf knots must be strictly increasing".into()));
            }
            if cdf[0] != 0.0 || *cdf.last().unwrap() != 1.0 {
                return Err(Error::Model("tabulated cdf must satisfy F(0) = 0 and F(1) = 1".into()));
            }
            if cdf.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::Model(
                    "tabulated cdf must be strictly increasing (no atoms, f > 0)".into(),
                ));
            }
        }
        Ok(())
    }

    /// Cumulative distribution F(t).
    pub fn cdf(&self, t: f64) -> f64 {
        match self {
            TypeDistribution::Uniform01 => t.clamp(0.0, 1.0),
            TypeDistribution::TabulatedCdf { ts, cdf } => pwl_eval(ts, cdf, t),
        }
    }

    /// Density f(t); for tabulated cdfs this is the segment slope, taken
    /// right-continuously at interior knots.
    pub fn density(&self, t: f64) -> f64 {
        match self {
            TypeDistribution::Uniform01 => 1.0,
            TypeDistribution::TabulatedCdf { ts, cdf } => {
                let t = t.clamp(0.0, 1.0);
                let j = match ts.partition_point(|&x| x <= t) {
                    0 => 0,
                    k => (k - 1).min(ts.len() - 2),
                };
                (cdf[j + 1] - cdf[j]) / (ts[j + 1] - ts[j])
            }
        }
    }

    /// Inverse cdf: the t with F(t) = u.
    pub fn quantile(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        match self {
            TypeDistribution::Uniform01 => u,
            TypeDistribution::TabulatedCdf { ts, cdf } => pwl_eval(cdf, ts, u),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn uniform_basics() {
        let d = TypeDistribution::Uniform01;
        assert_eq!(d.cdf(0.4), 0.4);
        assert_eq!(d.density(0.9), 1.0);
        assert_eq!(d.quantile(0.25), 0.25);
    }

    #[test]
    fn tabulated_cdf_round_trip() {
        let d = TypeDistribution::tabulated(vec![0.0, 0.5, 1.0], vec![0.0, 0.8, 1.0]).unwrap();
        assert_abs_diff_eq!(d.cdf(0.25), 0.4, epsilon = 1e-12);
        assert_abs_diff_eq!(d.density(0.25), 1.6, epsilon = 1e-12);
        assert_abs_diff_eq!(d.density(0.75), 0.4, epsilon = 1e-12);
        for &u in &[0.0, 0.3, 0.8, 0.95, 1.0] {
            assert_abs_diff_eq!(d.cdf(d.quantile(u)), u, epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_flat_or_decreasing_cdf() {
        assert!(TypeDistribution::tabulated(vec![0.0, 0.5, 1.0], vec![0.0, 0.0, 1.0]).is_err());
        assert!(TypeDistribution::tabulated(vec![0.0, 0.5, 1.0], vec![0.0, 0.9, 0.8]).is_err());
        assert!(TypeDistribution::tabulated(vec![0.1, 1.0], vec![0.0, 1.0]).is_err());
    }
}
