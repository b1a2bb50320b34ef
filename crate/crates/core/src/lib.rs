//! Shared numerical substrate for velocity-space kinetic computations.
//!
//! Everything that can underflow is carried as a log-magnitude: densities of
//! the form `e^{-alpha n^2}` with `n ~ 50` are far below the smallest positive
//! `f64`, so weights, Maxwellians, moments and norms all evaluate in log space
//! and only leave it for quantities of moderate size (temperatures, ratios,
//! normalized means).

pub mod density;
mod error;
pub mod extreal;
pub mod fields;
pub mod logspace;
pub mod moments;
pub mod norms;
pub mod quad;
pub mod special;
pub mod stats;
pub mod tail;
pub mod weight;

pub use density::{Density, Shape, Tail};
pub use error::{CoreError, Result};
pub use extreal::ExtReal;
pub use fields::{MacroFields, Maxwellian};
pub use moments::{combine_raw, maxwellian_from_moments, moments, raw_moments, RawMoments};
pub use norms::{weighted_lp_norm, weighted_lp_norm_truncated, Lp};
pub use quad::{QuadratureSpec, RadialCutoff, SphereRule};
pub use weight::Weight;
