// `!(x > 0.0)` checks deliberately reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assignment;
pub mod centers;
pub mod datagen;
pub mod error;
pub mod estimators;
pub mod experiment;
pub mod instance;
pub mod io;
pub mod maxcut;
pub mod oracle;
pub mod rng;
pub mod single_linkage;
pub mod stability;

pub use error::{Error, Result};
pub use instance::{Clustering, ClusteringInstance};
pub use oracle::{DistanceOracle, GroundTruthOracle};
pub use rng::RandomStream;
