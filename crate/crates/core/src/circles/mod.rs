//! Invariant circles of the map: spectral data of the corner piece, the
//! special parameters θ_K, the polygonal circles Γ_K^N and their
//! certifiers (invariance, cancellation orbits, rotation numbers, foliation
//! and return-map checks).

pub mod cancellation;
pub mod foliation;
pub mod golden;
pub mod polycircle;
pub mod return_map;
pub mod rotation;
pub mod special;
pub mod spectral;

pub use cancellation::{
    check_cancellation, default_step_bound, BreakKind, BreakPoint, CancellationReport, HitOrbit,
};
pub use foliation::{foliation_circle, foliation_scan, FoliationSample, FoliationScan};
pub use golden::{theta_k_table, ThetaKRow};
pub use polycircle::{verify_invariant_circle, CircleReport, PolyCircle, Rho};
pub use return_map::{return_map_check, ReturnCell, ReturnReport};
pub use rotation::{rotation_number, OrbitTrace};
pub use special::{build_gamma, solve_theta_k, x_point, y_point};
pub use spectral::{k_of_t, spectral, SpectralData};
