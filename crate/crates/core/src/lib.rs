pub mod bounds;
pub mod combinatorics;
pub mod error;
pub mod graph;
pub mod index_coding;
pub mod lp;
pub mod minrank;
pub mod scalar;
pub mod theta;

pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};

/// Exact scalar used throughout.
pub type Rational = num_rational::BigRational;
/// Exact LP problem and certificate.
pub type LpProblemQ = lp::LpProblem<Rational>;
pub type LpCertificateQ = lp::LpCertificate<Rational>;
/// Double-precision ϑ result.
pub type ThetaResult64 = theta::ThetaResult<f64>;
