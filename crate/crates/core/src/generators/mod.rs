//! Hard-instance families, reductions, and random instances.

pub mod exp_compromise;
pub mod random;
pub mod reductions;
pub mod slow;

pub use exp_compromise::{
    calibrate_beta, exp_compromise_shape, gen_exp_compromise, sweep_exp_compromise,
    types_per_cp, verify_exp_compromise, CheckOutcome, ExpCompromiseInstance, ExpParams,
    ExpReport, ExpViolation, SweepReport, TypeMeta,
};
pub use random::gen_random;
pub use reductions::{
    check_reduction, independent_set_proposal, parse_dimacs, parse_edge_list, reduce_3sat_to_euc,
    reduce_is_to_hyp, sat_witness_proposal, Cnf, Graph, ReductionCertificate, ReductionCheck,
    ReductionSource, ReductionTarget,
};
pub use slow::{gen_euc_slow, gen_hyp_slow, slow_lower_bound, SlowFamilyInstance, SlowOracle};
