//! Twisted group rings `C(Γ, σ)` over small discrete groups.
//!
//! The crate builds cocycles and twisted convolutions, constructs and searches
//! for zero divisors on truncated Følner windows, estimates kernel dimensions
//! from finite sections, and checks linear independence of time-frequency
//! translates through Gram matrices.

pub mod cocycle;
pub mod degree;
pub mod descriptor;
pub mod error;
pub mod exact;
pub mod experiment;
pub mod folner;
pub mod gabor;
pub mod group;
pub mod linalg;
pub mod phase;
pub mod ring;
pub mod zero_divisor;

pub use cocycle::{check_cocycle_identity, random_triples, Cocycle, CocycleFamily, CocycleReport};
pub use degree::{
    commutator_phase, degree_nonneg, homogeneous_decompose, verify_leading_step, CommutatorPhase, DegreeMap,
    DegreeRule, LeadingStepReport,
};
pub use descriptor::{CocycleSpec, Descriptor, GroupSpec};
pub use error::{LabError, Result};
pub use folner::{
    folner_ratio_diagnostic, interior, rank_nullity_check, vn_dim_estimate, DimensionEstimate, FolnerSequence,
    RankNullityReport, RatioPoint,
};
pub use gabor::{
    ambiguity_gaussian, gram_matrix, independence_witness, stft, tf_translate, AnalyticWindow, GramResult, GramWindow,
    Grid, IndependenceWitness, SampledSignal, TfPoint,
};
pub use group::{Group, GroupKind, GroupPoint};
pub use num_complex::Complex64;
pub use phase::Turn;
pub use ring::{convolve, power, RingElement, TermRecord, ToleranceConfig};
pub use zero_divisor::{
    build_truncated_operator, kernel_search, search_zero_divisor, torsion_zero_divisor, KernelReport,
    TorsionZeroDivisor, TruncatedOperator, WindowSpec, ZeroDivisorSearch,
};
