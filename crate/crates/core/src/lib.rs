//! The shifted Schur process on strict plane partitions.
//!
//! Exact combinatorics (strict plane partitions, alternation, shifted
//! MacMahon coefficients), skew Schur P/Q evaluations, the process weights and
//! partition function, Pfaffian correlation functions with a brute-force
//! enumeration oracle, and the bulk scaling limits (sine kernel, limiting
//! density, limit shape).

pub mod asymptotics;
pub mod correlation;
pub mod error;
pub mod partitions;
pub mod pfaffian;
pub mod process;
mod quadrature;
pub mod scalar;
pub mod schur;
pub mod series;
pub mod stats;

pub use error::{Error, Result};
pub use partitions::{
    plane_diagram, skew_strip_stats, validate_spp, AlternationMethod, PointConfiguration, SkewStats, StrictPartition,
    StrictPlanePartition,
};
pub use pfaffian::{pfaffian, pfaffian_reference, SkewSymmetricMatrix};
pub use process::{MqParams, SpecializationChain};
pub use scalar::{QSeries, Scalar};
pub use schur::{Kind, Specialization};
pub use series::LaurentSeries;
