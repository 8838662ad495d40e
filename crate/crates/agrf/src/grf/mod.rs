//! Locally anisotropic Gaussian random fields on a triangulated grid.
//!
//! The pipeline: build a [`mesh::Mesh`], attach an
//! [`anisotropy::AnisotropyField`], assemble [`fem::FemOperators`], pick a
//! [`spectral::SpectralDensity`], then draw fields with
//! [`sample::sample_prior`] or build exact covariances with
//! [`sample::dense_covariance`].

pub mod anisotropy;
pub mod chebyshev;
pub mod fem;
pub mod mesh;
pub mod sample;
pub mod spectral;
pub mod tps;

pub use anisotropy::{anisotropy_from_potential, AnisotropyField};
pub use chebyshev::{chebyshev_apply, chebyshev_apply_fn, chebyshev_coeffs};
pub use fem::{assemble_operators, FemOperators};
pub use mesh::{build_mesh, Mesh};
pub use sample::{
    dense_covariance, dense_covariance_with_cap, sample_prior, sample_prior_extended, FieldSample,
    DEFAULT_DENSE_CAP,
};
pub use spectral::{calibrate_tau, SpectralDensity};
pub use tps::{grid_nodes, thin_plate_spline, ThinPlateSpline};
