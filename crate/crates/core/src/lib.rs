//! Exact solver for piecewise linear vector optimization problems
//!
//! ```text
//! Min_K { f(x) | x ∈ D }
//! ```
//!
//! where `D` is a polyhedron, `f` is continuous and piecewise affine over a
//! polyhedral cover, and `K` is a polyhedral ordering cone. The efficient
//! solution set comes out as a finite union of semi-closed polyhedra and the
//! weakly efficient set as a finite union of closed polyhedra.
//!
//! The geometry is generic over [`exactmath::Scalar`]; the aliases at the crate
//! root fix the scalar to [`Rat`], which is what the file formats and the CLI use.

pub mod cone;
pub mod error;
pub mod exactmath;
pub mod io;
pub mod oracle;
pub mod polyhedron;
pub mod pwl;
pub mod semiclosed;
pub mod solver;

pub use error::{Error, Result};
pub use exactmath::{LinConstraint, Matrix, Relation, Scalar, Subspace};

/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rat = num_rational::BigRational;

pub type RatVector = Vec<Rat>;
pub type RatMatrix = exactmath::Matrix<Rat>;
pub type RatConstraint = exactmath::LinConstraint<Rat>;
pub type HPolyhedron = polyhedron::HPolyhedron<Rat>;
pub type VPolyhedron = polyhedron::VPolyhedron<Rat>;
pub type SemiClosedPolyhedron = semiclosed::SemiClosedPolyhedron<Rat>;
pub type Region = semiclosed::Region<Rat>;
pub type OrderingCone = cone::OrderingCone<Rat>;
pub type Piece = pwl::Piece<Rat>;
pub type PiecewiseLinearFn = pwl::PiecewiseLinearFn<Rat>;
pub type Problem = pwl::Problem<Rat>;
pub type SolveReport = solver::SolveReport<Rat>;
pub type GridSpec = oracle::GridSpec<Rat>;
