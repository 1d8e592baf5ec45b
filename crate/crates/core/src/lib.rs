//! Link-level Monte Carlo simulator for large-array millimeter-wave MIMO
//! downlinks.
//!
//! Three transmitter architectures are modelled end to end:
//!
//! - fully digital zero-forcing precoding with one RF chain per antenna,
//! - phased-array hybrid precoding (full-PAHP) with quantized phase shifters
//!   and a two-stage analog/digital design,
//! - lens-array hybrid precoding (LAHP) that selects beamspace beams through a
//!   switching network and precodes the dimension-reduced channel.
//!
//! Each architecture comes with its channel estimator and its hardware power
//! model, and [`harness`] runs seeded sweeps that persist results as CSV.

pub mod channel;
pub mod error;
pub mod estimation;
pub mod harness;
pub mod linalg;
pub mod metrics;
pub mod precoding;
pub mod rng;

pub use channel::{
    dft_matrix, gen_scenario, gen_user_channel, steering_vector, to_beamspace, ArrayGeometry,
    BeamspaceTransform, ChannelRealization, PathComponent, ScenarioConfig,
};
pub use error::{Error, Result};
pub use estimation::{
    build_sensing_plan, estimate_adaptive_cs, estimate_beamspace_cs, estimate_coarse_cs,
    estimate_ls_effective, estimate_ls_full_digital, omp_recover, DirectionDictionary,
    EstimationReport, OmpSolution, PilotBudget, SensingPlan,
};
pub use linalg::{CMat, CVec};
pub use metrics::{
    hardware_power, noise_variance, power_efficiency, sum_rate, Architecture, Interferer,
    PowerConstants, RateResult,
};
pub use precoding::{
    hybrid_factorize_omp, lahp_precoder, select_beams_exhaustive, select_beams_ia,
    select_beams_incremental, select_beams_mm, two_stage_full_pahp, zf_precoder, BeamSet,
    HybridFactorization, PhaseCodebook, PhaseCodebookConfig, PrecoderPair, ZfPrecoder,
};
