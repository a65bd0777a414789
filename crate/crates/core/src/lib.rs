//! Exact enumeration of Harder-Narasimhan (Shatz) strata and
//! Bialynicki-Birula fixed-point components for the moduli space of
//! rank 2 and rank 3 Higgs bundles on a curve of genus `g >= 2`, together
//! with a decision procedure for the limit of the `C*`-flow
//! `z -> (E, z * Phi)` as `z -> 0`.
//!
//! Everything is numeric: bundles are represented only through ranks,
//! degrees and slopes, and every slope is an exact fraction. No floating
//! point is used anywhere.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, the CLI and
//! the verification driver live in the `hnbb` companion crate.
//!
//! Modules:
//! - [`types`]: slopes, genus, HN types and polygons, fixed-point labels,
//!   limit outcomes and their canonical text encodings.
//! - [`admissibility`]: slope bounds on HN types, stratum enumeration and
//!   the feasible range of the auxiliary invariant.
//! - [`fixed_points`]: fixed-point component labels and the type (1,1,1)
//!   invariant dictionary.
//! - [`classifier`]: the limit decision procedure and its stability audit.
//! - [`oracle`]: block-pattern gauge scaling, an independent check on the
//!   classifier's limit shapes.
//! - [`incidence`]: the Shatz x Bialynicki-Birula incidence relation.
#![no_std]
#![deny(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;

pub mod admissibility;
pub mod classifier;
pub mod fixed_points;
pub mod incidence;
pub mod oracle;
pub mod types;

pub use admissibility::{
    enumerate_strata, invariant_range, validate, AdmissibilityError, AdmissibleStratum, CaseFamily,
    InvariantRange,
};
pub use classifier::{
    audit_passes, case_one_threshold, classify, classify_rank2, classify_rank3,
    classify_semistable, stability_audit, AuditEntry, ClassifierInput, ClassifyError,
};
pub use fixed_points::{
    enumerate_fixed_components, enumerate_type111, l_to_m, m_to_l, validate_fixed_111,
    FixedPointError, LInvariants, MInvariants,
};
pub use incidence::{
    build_table, check_hn_bb_theorem, check_rank2_coincidence, IncidenceError, IncidenceRow,
    IncidenceTable,
};
pub use oracle::{oracle_check, scale_exponents, take_limit, Block, BlockPattern, LimitPattern};
pub use types::{
    format_rational, slope, CaseTag, FixedComponent, Genus, HNPolygon, HNType, HodgeSummand,
    Invariant, LimitOutcome, Rank, Rational, Step, TypeError,
};
