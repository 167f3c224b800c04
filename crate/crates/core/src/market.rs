//! Market instances: a value model, per-product costs, and a type
//! distribution, plus the JSON document format the CLI consumes.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::bundle::{Bundle, MAX_PRODUCTS};
use crate::dist::TypeDistribution;
use crate::error::{Error, Result};
use crate::value::{Curve, Pwl, ValueModel};

/// A complete pricing problem: values, costs, and the type distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct MarketInstance {
    model: ValueModel,
    costs: Vec<f64>,
    dist: TypeDistribution,
}

impl MarketInstance {
    pub fn new(model: ValueModel, costs: Vec<f64>, dist: TypeDistribution) -> Result<Self> {
        model.validate()?;
        dist.validate()?;
        let n = model.products();
        if n > MAX_PRODUCTS {
            return Err(Error::UnsupportedProducts { n, max: MAX_PRODUCTS });
        }
        if costs.len() != n {
            return Err(Error::Model(format!(
                "cost vector has {} entries but the model has {n} products",
                costs.len()
            )));
        }
        if costs.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(Error::Model("per-product costs must satisfy c_i >= 0".into()));
        }
        Ok(MarketInstance { model, costs, dist })
    }

    /// The add-on family on uniform types; the workhorse of the examples.
    pub fn addon(k1: f64, k2: f64, costs: [f64; 2], dist: TypeDistribution) -> Result<Self> {
        Self::new(ValueModel::AddOn { k1, k2 }, costs.to_vec(), dist)
    }

    pub fn products(&self) -> usize {
        self.model.products()
    }

    pub fn model(&self) -> &ValueModel {
        &self.model
    }

    pub fn dist(&self) -> &TypeDistribution {
        &self.dist
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn grand(&self) -> Bundle {
        Bundle::grand(self.products())
    }

    /// Σ_{i∈b} c_i; zero for the empty bundle.
    pub fn bundle_cost(&self, b: Bundle) -> f64 {
        b.products().map(|i| self.costs[i - 1]).sum()
    }

    /// v(b,t) under this instance's model.
    pub fn value(&self, b: Bundle, t: f64) -> Result<f64> {
        self.model.value(b, t)
    }

    /// v(b,t|b') under this instance's model.
    pub fn conditional_value(&self, b: Bundle, t: f64, endowment: Bundle) -> Result<f64> {
        self.model.conditional_value(b, t, endowment)
    }

    /// Parses and validates the JSON model document.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDoc = serde_json::from_str(text)?;
        doc.build()
    }
}

#[derive(Deserialize)]
struct ModelDoc {
    products: usize,
    costs: Vec<f64>,
    distribution: DistDoc,
    values: ValuesDoc,
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum DistDoc {
    Uniform,
    Tabulated { t: Vec<f64>, cdf: Vec<f64> },
}

#[derive(Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
enum ValuesDoc {
    Addon { k1: f64, k2: f64 },
    Additive { components: (Vec<f64>, Vec<Vec<f64>>) },
    Tabulated { t: Vec<f64>, bundles: BTreeMap<String, Vec<f64>> },
}

impl ModelDoc {
    fn build(self) -> Result<MarketInstance> {
        let n = self.products;
        if n < 1 || n > MAX_PRODUCTS {
            return Err(Error::UnsupportedProducts { n, max: MAX_PRODUCTS });
        }
        let dist = match self.distribution {
            DistDoc::Uniform => TypeDistribution::Uniform01,
            DistDoc::Tabulated { t, cdf } => TypeDistribution::tabulated(t, cdf)?,
        };
        let model = match self.values {
            ValuesDoc::Addon { k1, k2 } => {
                if n != 2 {
                    return Err(Error::Model(
                        "the addon family is defined for exactly 2 products".into(),
                    ));
                }
                ValueModel::AddOn { k1, k2 }
            }
            ValuesDoc::Additive { components: (grid, per_product) } => {
                if per_product.len() != n {
                    return Err(Error::Model(format!(
                        "additive components hold {} products but the document declares {n}",
                        per_product.len()
                    )));
                }
                let components = per_product
                    .into_iter()
                    .map(|vs| Ok(Curve::Pwl(Pwl::new(grid.clone(), vs)?)))
                    .collect::<Result<Vec<_>>>()?;
                ValueModel::Additive { components }
            }
            ValuesDoc::Tabulated { t, bundles } => {
                let want = (1usize << n) - 1;
                if bundles.len() != want {
                    return Err(Error::Model(format!(
                        "tabulated values need all {want} nonempty bundle keys, got {}",
                        bundles.len()
                    )));
                }
                let mut by_mask = vec![Vec::new(); want];
                for (key, vs) in bundles {
                    let b = Bundle::from_bitstring(&key, n)?;
                    if b.is_empty() {
                        return Err(Error::Model(
                            "the empty bundle is implicit (v(∅,t) = 0) and must not be tabulated"
                                .into(),
                        ));
                    }
                    by_mask[b.mask() as usize - 1] = vs;
                }
                if by_mask.iter().any(|vs| vs.is_empty()) {
                    return Err(Error::Model("duplicate or missing tabulated bundle key".into()));
                }
                ValueModel::Tabulated { ts: t, bundles: by_mask }
            }
        };
        MarketInstance::new(model, self.costs, dist)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bundle_cost_examples() {
        let m = MarketInstance::addon(0.2, 0.5, [0.0, 0.0], TypeDistribution::Uniform01).unwrap();
        assert_eq!(m.bundle_cost(Bundle::grand(2)), 0.0);
        let m = MarketInstance::addon(0.2, 0.5, [0.1, 0.3], TypeDistribution::Uniform01).unwrap();
        assert_abs_diff_eq!(
            m.bundle_cost(Bundle::from_bitstring("10", 2).unwrap()),
            0.3,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(m.bundle_cost(Bundle::grand(2)), 0.4, epsilon = 1e-15);
        assert_eq!(m.bundle_cost(Bundle::empty(2)), 0.0);
    }

    #[test]
    fn parses_addon_document() {
        let doc = r#"{
            "products": 2,
            "costs": [0.0, 0.0],
            "distribution": {"type": "uniform"},
            "values": {"family": "addon", "k1": 0.2, "k2": 0.5}
        }"#;
        let m = MarketInstance::from_json(doc).unwrap();
        assert_eq!(m.products(), 2);
        assert_abs_diff_eq!(
            m.value(Bundle::from_bitstring("01", 2).unwrap(), 0.4).unwrap(),
            0.6,
            epsilon = 1e-12
        );
    }

    #[test]
    fn parses_tabulated_document_with_bitstring_keys() {
        let doc = r#"{
            "products": 2,
            "costs": [0.0, 0.0],
            "distribution": {"type": "tabulated", "t": [0.0, 1.0], "cdf": [0.0, 1.0]},
            "values": {"family": "tabulated", "t": [0.0, 1.0],
                       "bundles": {"01": [0.0, 1.0], "10": [0.0, 0.5], "11": [0.0, 2.0]}}
        }"#;
        let m = MarketInstance::from_json(doc).unwrap();
        let b1 = Bundle::from_bitstring("01", 2).unwrap();
        assert_abs_diff_eq!(m.value(b1, 0.5).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn parses_additive_document() {
        let doc = r#"{
            "products": 2,
            "costs": [0.0, 0.0],
            "distribution": {"type": "uniform"},
            "values": {"family": "additive",
                       "components": [[0.0, 0.5, 1.0], [[0.0, 0.5, 1.0], [0.0, 1.0, 2.0]]]}
        }"#;
        let m = MarketInstance::from_json(doc).unwrap();
        assert_abs_diff_eq!(m.value(Bundle::grand(2), 0.5).unwrap(), 1.5, epsilon = 1e-12);
    }

    #[test]
    fn rejects_negative_costs_and_bad_counts() {
        let m = MarketInstance::addon(0.2, 0.5, [-0.1, 0.0], TypeDistribution::Uniform01);
        assert!(matches!(m, Err(Error::Model(_))));
        let doc = r#"{
            "products": 2,
            "costs": [0.0],
            "distribution": {"type": "uniform"},
            "values": {"family": "addon", "k1": 0.2, "k2": 0.5}
        }"#;
        assert!(MarketInstance::from_json(doc).is_err());
    }

    #[test]
    fn rejects_missing_tabulated_bundle() {
        let doc = r#"{
            "products": 2,
            "costs": [0.0, 0.0],
            "distribution": {"type": "uniform"},
            "values": {"family": "tabulated", "t": [0.0, 1.0],
                       "bundles": {"01": [0.0, 1.0], "11": [0.0, 2.0]}}
        }"#;
        assert!(MarketInstance::from_json(doc).is_err());
    }
}
