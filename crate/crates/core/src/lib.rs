//! Spectral truncations of finite metric groups.
//!
//! Starting from a finite group with a bi-invariant metric, this crate
//! builds the Peter–Weyl decomposition of its regular representation,
//! compresses the function algebra by projections onto finite sets of
//! irreducibles, equips both sides with the Lipschitz seminorms induced by
//! the translation actions, and computes certified metrics between states.
//! The headline quantity is an upper bound on the Gromov–Hausdorff distance
//! between the truncated and untruncated state spaces, which shrinks to zero
//! as the truncation grows.
//!
//! Module map:
//! - [`group`]: finite metric groups, catalog families, validation.
//! - [`peter_weyl`]: irreducible representations, regular actions,
//!   projections onto blocks of the decomposition.
//! - [`truncation`]: the compressed algebra, its Hermitian basis, the
//!   compression and reverse maps.
//! - [`metric`]: operator norms, Lip seminorms, the Kantorovich distance,
//!   and the certified state-space metric solver.
//! - [`convergence`]: liftable states, Gromov–Hausdorff bounds, and the
//!   truncation-chain experiment.
//! - [`format`](mod@format): group-spec documents and state files.

pub mod convergence;
pub mod format;
pub mod group;
pub mod linalg;
pub mod lp;
pub mod metric;
pub mod peter_weyl;
pub mod rng;
pub mod truncation;

pub use group::{
    distance_profile, make_catalog_group, parse_descriptor, standard_catalog_descriptors,
    validate_group, DistanceProfile, Family, FiniteMetricGroup, GroupError, HaarMeasure,
    MetricKind, ValidationReport, Violation,
};
pub use linalg::{CMat, CVec, C64};
