//! Numeric stable densities, the stable jump measure and the
//! principal-value quadrature engine.

mod density;
mod isotropic;
mod jump;
pub(crate) mod pv;
mod subordinator;

pub use density::{stable_density_1d, stable_density_1d_derivative, FourierInversionConfig, StableDensity, NEG_CLIP};
pub use isotropic::{gaussian_radial_density, isotropic_stable_density, isotropic_stable_radial_density, subordinate};
pub use jump::stable_jump_measure;
pub use pv::{pv_integral, PvConfig, PvEstimate};
pub use subordinator::{subordinator_density, PositiveStable};
