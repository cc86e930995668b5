//! Quantum-topological invariants and exact positive geometry.

pub mod posgeom;
pub mod recoupling;
pub mod scalar;
pub mod spinnet;
pub mod surgery;
pub mod triangulate;
pub mod text;

pub use posgeom::{Matrix, PlueckerVector, PosGeomError};
pub use recoupling::{Color, RecouplingError, RecouplingTable, RootParams};
pub use scalar::{DoubleDouble, Exact, Real};
pub use spinnet::{SpinGraph, SpinNetError};
pub use surgery::FramedSurgery;
pub use text::ParseError;
pub use triangulate::{SurfaceTriangulation, Triangulation, TriangulationError};

pub type RootParams64 = RootParams<f64>;
pub type RecouplingTable64 = RecouplingTable<f64>;
pub type Rational = num_rational::BigRational;
pub type RationalMatrix = Matrix<Rational>;
