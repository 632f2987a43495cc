//! Symplectic polar duality for centered ellipsoids.
//!
//! The numerical core is generic over the scalar type (`f32` or `f64`);
//! the crate root re-exports the `f64` instantiations under short names.
//!
//! Phase space is `ℝ²ⁿ` with points `z = (x, p)`, `J = [[0, I], [−I, 0]]`
//! and `ω(z, w) = (Jz)·w`.

pub mod duality;
pub mod ellipsoid;
pub mod error;
pub mod lagrangian;
pub mod matops;
pub mod matrix;
pub mod oracle;
pub mod quantum;
pub mod rng;
pub mod scalar;
pub mod symplectic;

pub use duality::{
    dual_pair_verdict, form_pair_verdict, lagrangian_polar_dual, product_capacity,
    reconstruct_ball, thm1_check, thm1_trials, DualStatus,
};
pub use ellipsoid::{
    capacity, john_of_dual_product, lagrangian_projection, linear_image, mahler_volume,
    orthogonal_projection, polar_dual, Coordinate, SupportFunction,
};
pub use error::{Error, Result};
pub use lagrangian::{
    frame_from_bases, frame_symplectic, is_transverse, plane_from_ab, plane_from_basis, Side,
};
pub use matops::{psd_margin, schur_complement, spd_roots, sym_eig, Eliminate};
pub use matrix::{dot, norm};
pub use oracle::{
    mc_polar_membership, mc_projection_support, random_spd, wigner_quadrature, Generator,
};
pub use quantum::{
    certify, gaussian_state_wigner_form, gaussian_wigner_eval, hardy_verdict, joint_diagonalize,
    uncertainty_ellipsoid, wigner_subgaussian_check, UncertaintyVerdict,
};
pub use rng::Stream;
pub use scalar::Real;
pub use symplectic::{
    is_symplectic, omega, random_symplectic, standard_j, symp_product, symplectic_eigenvalues,
    symplectic_residual, williamson,
};

pub type Mat = matrix::Mat<f64>;
pub type SymMatrix = matops::SymMatrix<f64>;
pub type SpdMatrix = matops::SpdMatrix<f64>;
pub type BlockSplit = matops::BlockSplit<f64>;
pub type SymplecticMatrix = symplectic::SymplecticMatrix<f64>;
pub type WilliamsonForm = symplectic::WilliamsonForm<f64>;
pub type PhaseVector = symplectic::PhaseVector<f64>;
pub type LagrangianPlane = lagrangian::LagrangianPlane<f64>;
pub type TransversePair = lagrangian::TransversePair<f64>;
pub type AmbientEllipsoid = ellipsoid::AmbientEllipsoid<f64>;
pub type PlaneEllipsoid = ellipsoid::PlaneEllipsoid<f64>;
pub type DualPairVerdict = duality::DualPairVerdict<f64>;
pub type Thm1Report = duality::Thm1Report<f64>;
pub type CovarianceMatrix = quantum::CovarianceMatrix<f64>;
pub type GaussianState = quantum::GaussianState<f64>;
pub type CertificationReport = quantum::CertificationReport<f64>;
pub type SampleCloud = oracle::SampleCloud<f64>;
pub type QuadratureGrid = oracle::QuadratureGrid<f64>;
