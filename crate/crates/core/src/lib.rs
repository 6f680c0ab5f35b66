//! K-means seeding from minimum-spanning-tree skeleton points and a hybrid
//! distance/density criterion, with baseline seeders, Lloyd iteration and
//! external validation indices.
//!
//! The AIMK pipeline runs in five stages:
//!
//! 1. [`distance::DistanceMatrix`] over all point pairs.
//! 2. [`mst::prim_mst`], then [`mst::skeleton_points`] and [`mst::threshold`].
//! 3. [`density::build_tcg`] and [`density::densities`].
//! 4. [`seeding::HybridStats`] normalisers for the hybrid distance.
//! 5. Greedy max-min selection in [`seeding::AimkModel::select`].
//!
//! [`seeding::aimk_rs_seeds`] runs the same pipeline on a `floor(sqrt(n))`
//! random sample, which keeps the distance work linear in `n`.

pub mod dataset;
pub mod density;
pub mod distance;
pub mod error;
pub mod eval;
pub mod lloyd;
pub mod mst;
pub mod seeding;

#[cfg(any(test, feature = "oracles"))]
pub mod oracle;

pub use dataset::{Dataset, LabelColumn, MixtureSpec};
pub use error::{Error, Result};
pub use lloyd::{lloyd, ClusteringResult, LloydConfig};
pub use mst::ThresholdMode;
pub use seeding::{AimkModel, SeedMethod, SeedSet};
