//! Asymptotically flat metrics, their connection forms, the ADM mass and the
//! boundary term of a Weitzenböck formula evaluated by sphere quadrature.

pub mod boundary;
pub mod chart;
pub mod frame;
pub mod gauge;
pub mod identity;
pub mod mass;
pub mod poly;
pub mod quadrature;

pub use boundary::{
    boundary_report, boundary_term, theorem_check, BoundaryKernel, BoundaryReport, FrameMode, TheoremReport,
};
pub use chart::{ChartInfo, DecayFit, MetricChart, MetricField, MetricPoint};
pub use frame::{
    connection_form_asymptotic, connection_form_exact, connection_form_three_term, embed, h_map, pi_projection,
    FrameData,
};
pub use identity::{pi_identity_check, PiIdentityReport};
pub use mass::{adm_covector, adm_integrand, extrapolate, mass_quadrature, Extrapolation, MassReport};
pub use quadrature::SphereQuadrature;
