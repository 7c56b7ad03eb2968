//! Phase estimation of the overlap `y` and the counting problem.

pub mod counting;
pub mod distribution;
pub mod estimate;
pub mod qft;

pub use counting::{
    counting_register_size, counting_scenario, disjointify, estimate_count, run_counting,
    CountReport, CountingConfig, DEFAULT_REGISTER_SIZE,
};
pub use distribution::{
    alpha_sq, build_psi1, build_psi1_from_overlap, circle_distance, measurement_distribution,
    near_bound, sample_phase_register, simulated_register_distribution, tail_bound_report,
    walk_operator, AncillaState, Branch, MeasurementDistribution, TailBoundReport, TailRow,
};
pub use estimate::{
    estimate_on_device, estimate_y, resolve_with_verification, verification_hits, Disambiguation,
    PhaseEstimate, SearchDevice, VerificationConfig,
};
pub use qft::{inverse_qft, qft, qft_gate_count};
