//! Statistical harness: cube functions, small-ball estimates, lattice counting, exact
//! expectations, and the scale probes.

mod cube;
mod expectation;
mod halasz;
mod lattice;
mod scale;

pub use cube::{
    delta_profile, small_ball_estimate, sup_norm_distance, ConstantCube, CubeFunction, DeltaProfile, LinearCube,
    SubgraphCountCube,
};
pub use expectation::{exact_mu, exact_nu, mu_average, EXPECTATION_TERM_BUDGET};
pub use halasz::{
    halasz_report, scaling_verdict, HalaszConfig, HalaszReport, HypothesisCheck, NoiseRadius, ScalingVerdict,
    DEFAULT_HYPOTHESIS_THRESHOLD, HYPOTHESIS_NOTE,
};
pub use lattice::{lattice_count, LATTICE_BOX_BUDGET};
pub use scale::{
    concentration_probe, kappa_gamma_check, log_scale, nu_gamma_check, scale_probe, ConcentrationReport,
    KappaGammaReport, NuGammaReport, ProbeScale, ScaleProbeSystem,
};
