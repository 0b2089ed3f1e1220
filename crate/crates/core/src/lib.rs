//! Numerical laboratory for central limit theorems measured in Rényi, Tsallis, χ²,
//! relative-entropy and D_∞ distances.
//!
//! Densities live on uniform grids ([`density`]); distances between them are computed in
//! [`divergence`]; [`hermite`] and [`edgeworth`] provide the series side, [`subgauss`] the
//! log-Laplace machinery, and [`zoo`] the named example laws everything is tested on.

// `!(x > 0.0)` is used on purpose: it rejects NaN along with the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod density;
pub mod divergence;
pub mod edgeworth;
pub mod error;
pub mod experiment;
pub mod hermite;
pub mod model;
pub mod moments;
pub mod report;
pub mod special;
pub mod subgauss;
pub mod trig;
pub mod zoo;

pub use density::{discretize, normalized_sum_density, GridConfig, GridDensity};
pub use divergence::{DivValue, RenyiResult};
pub use error::{Error, Result};
pub use model::AnalyticModel;
pub use report::{CheckReport, Verdict};
pub use zoo::{make_model, ModelSpec};
