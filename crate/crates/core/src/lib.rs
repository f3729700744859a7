//! Invariant Einstein metrics on classical flag manifolds.
//!
//! Root data ([`rootsys`]), the isotropy decomposition ([`flagspace`]), the
//! Ricci components and Einstein systems ([`einstein`]) and a multistart
//! solver ([`solver`]). Evaluators are generic over [`Scalar`]: `f32`, `f64`
//! or exact [`BigRational`](num_rational::BigRational).
//!
//! ```
//! use flagric_core::solver::{classify, multistart};
//! use flagric_core::{EinsteinSystem64, FlagManifold, SolverConfig};
//!
//! # fn main() -> flagric_core::Result<()> {
//! let spec = "C:2,1".parse()?;
//! let m = FlagManifold::new(spec)?;
//! let sys = EinsteinSystem64::generate(&m);
//! assert_eq!(sys.unknowns(), 3);
//!
//! let report = multistart(m.spec(), &SolverConfig { starts: 100, ..Default::default() })?;
//! for s in &report.solutions {
//!     assert_eq!(s.kaehler, classify(&m, &s.lambda));
//! }
//! # Ok(())
//! # }
//! ```

pub mod einstein;
pub mod error;
pub mod flagspace;
pub mod rootsys;
pub mod sampling;
pub mod scalar;
pub mod solver;

pub use einstein::{EinsteinSystem, MetricVector};
pub use error::{Error, Result, SpecErrorCode};
pub use flagspace::{all_specs, FlagManifold, FlagSpec, TRoot, TRootClass};
pub use rootsys::{LieType, Root, RootSystem};
pub use scalar::Scalar;
pub use solver::{multistart, newton_solve, MultistartReport, Solution, SolverConfig};

pub type Rational = num_rational::BigRational;

pub type MetricVector32 = MetricVector<f32>;
pub type MetricVector64 = MetricVector<f64>;
pub type ExactMetricVector = MetricVector<Rational>;

pub type EinsteinSystem32 = EinsteinSystem<f32>;
pub type EinsteinSystem64 = EinsteinSystem<f64>;
pub type ExactEinsteinSystem = EinsteinSystem<Rational>;
