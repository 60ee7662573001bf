//! Pointwise tensor calculus for metrics and general linear connections.
//!
//! Every derivative comes from order-2 jet arithmetic ([`Jet2`]), never
//! from finite differences. Sign conventions follow the metric-affine
//! literature this crate implements rather than the usual textbook ones:
//! with Γ the standard Levi-Civita symbols,
//!
//! * `{_{μνα}} = -Γ_{ν,μα}` and the Levi-Civita connection is
//!   `K_λ{}^μ{}_ν = -Γ^μ_{λν}`;
//! * `R_{λμ}{}^α{}_β = -Riem^α{}_{βλμ}`, so the contraction
//!   `R_{λα}{}^λ{}_β` is minus the textbook Ricci tensor and the scalar
//!   curvature of the unit 2-sphere is -2.

mod field;
mod jet;
mod polynomial;
pub mod presets;
mod tensors;
mod tetrad;

pub use field::{
    ComponentFn, ConnectionField, ConnectionJet, MetricField, MetricJet, DEGENERACY_THRESHOLD,
};
pub use jet::{Jet2, Real};
pub use polynomial::{random_point, random_polynomial_connection, random_polynomial_metric, Polynomial};
pub use presets::Preset;
pub use tensors::{
    christoffel_lower, contorsion, curvature, decompose_reconstruct, jet_splitting, levi_civita,
    lower_middle, max_abs3, max_abs4, metric_connection, metric_connection_jet, nonmetricity,
    raise_middle, torsion, torsion_antisymmetry_defect, Decomposition,
};
pub use tetrad::{lowered_antisymmetry_defect, tetrad_coefficients, TetradField, TetradJet};
