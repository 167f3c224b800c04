//! When should a multi-product monopolist sell everything as one package?
//!
//! This crate decides when pure bundling is profit-optimal for a monopolist
//! whose customers have non-additive values over product bundles. The
//! decision rule compares optimal sales volumes: pure bundling is optimal
//! exactly when the grand bundle, sold alone at its best price, would sell
//! strictly more than any smaller bundle sold alone at its best price.
//!
//! The crate provides:
//!
//! - bundle algebra, value-function families, and type distributions
//!   ([`bundle`], [`value`], [`dist`], [`market`]);
//! - numerical checks of the monotonicity and quasi-concavity assumptions the
//!   volume rule relies on ([`assumptions`]);
//! - optimal cutoffs, prices, and sales volumes per bundle ([`volumes`]);
//! - the pure-bundling verdict, ratio-monotonicity tests, and additive-value
//!   results ([`characterize`]);
//! - an exhaustive brute-force oracle over bundling strategies and price
//!   grids that validates every verdict from first principles ([`oracle`]);
//! - the nonlinear-pricing translation: recursive construction of optimal
//!   quantity tariffs ([`tariff`]);
//! - seeded instance generators for randomized test suites ([`gen`]) and the
//!   command-line front end ([`cli`]).

pub mod assumptions;
pub mod bundle;
pub mod characterize;
pub mod cli;
pub mod dist;
pub mod error;
pub mod gen;
pub mod grid;
pub mod market;
pub mod oracle;
pub mod tariff;
pub mod value;
pub mod volumes;

pub use bundle::Bundle;
pub use dist::TypeDistribution;
pub use error::{Error, Result};
pub use market::MarketInstance;
pub use value::{Curve, Pwl, ValueModel};
