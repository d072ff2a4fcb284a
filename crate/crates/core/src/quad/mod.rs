//! Sphere and radial quadrature, integral means and mixed norms.

pub mod eval;
pub mod gauss;
pub mod norms;
pub mod profile;
pub mod sphere;

pub use eval::{hardy_norm, rule_for_degree, sphere_mean, sphere_mean_mixed, Combine, MeanEvaluator, SliceTable};
pub use norms::{
    golden_max, mixed_norm, mixed_norm_profile, phi_seminorm, phi_seminorm_profile,
    power_weight_integral, NormSpec, PhiWeight, RadialRule, Weight,
};
pub use profile::L2Profile;
pub use sphere::SphereRule;
