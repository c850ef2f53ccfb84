//! Numerical engine for the one-parameter family `F_θ`, θ ∈ (0, π/4), of
//! continuous, piecewise affine, area-preserving homeomorphisms of the unit
//! square that fix its boundary pointwise.
//!
//! * [`geometry`]: parameters and the nine-piece partition.
//! * [`map`]: evaluation of `F`, `F⁻¹`, `dF`, the symmetries and the
//!   invariant quadratic form of the corner piece.
//! * [`circles`]: special parameters θ_K, the invariant polygons `Γ_K^N`,
//!   cancellation orbits, rotation numbers, foliation and return-map checks.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below name the double-precision instantiations used by the CLI.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circles;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod map;
pub mod scalar;

pub use error::{Error, Result};
pub use geometry::{build_partition, params_from_theta, Params, Partition, RegionId, RegionKind};
pub use linalg::{Mat2, Point};
pub use map::{AffinePiece, MapF, QuadForm, Symmetry};
pub use scalar::Scalar;

pub type Point64 = Point<f64>;
pub type Mat64 = Mat2<f64>;
pub type Params64 = Params<f64>;
pub type Partition64 = Partition<f64>;
pub type Map64 = MapF<f64>;
pub type PolyCircle64 = circles::PolyCircle<f64>;
pub type OrbitTrace64 = circles::OrbitTrace<f64>;
pub type SpectralData64 = circles::SpectralData<f64>;

pub type Point32 = Point<f32>;
pub type Params32 = Params<f32>;
pub type Map32 = MapF<f32>;
