//! Concrete finite groups and the subgroup computations built on them.

mod group;
mod hall;
mod lattice;
mod pgroup;
pub mod preset;
mod subgroup;

use thiserror::Error;

pub use group::{Elem, FiniteGroup, ORDER_CAP, TABLE_CAP};
pub use hall::{complements, conjugator, hall, schur_zassenhaus, sylow};
pub use lattice::{all_subgroups, is_solvable, maximal_subgroups, subgroups_up_to_index, ENUMERATION_CAP};
pub use pgroup::{
    frattini, frattini_p, is_powerful, is_powerfully_embedded, lower_p_series, min_generators,
    minimal_generating_set, p_group_prime, rank, theta_map, v_subgroup, PSeries, ThetaMap, VSubgroup,
};
pub use preset::GroupPreset;
pub use subgroup::Subgroup;

pub(crate) use group::{mat_identity, mat_mul};
pub(crate) use pgroup::theta_from_series;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group is not a {p}-group")]
    NotPGroup { p: u64 },
    #[error("p = 2 is not supported for powerful/uniform computations")]
    EvenPrime,
    #[error("group is not powerful")]
    NotPowerful,
    #[error("{what} exceeds cap {limit}")]
    CapExceeded { what: &'static str, limit: usize },
    #[error("subgroup is not a Hall subgroup (order and index not coprime)")]
    NotHall,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("invalid group preset: {0}")]
    InvalidPreset(String),
    #[error("index {i} is outside the lower p-series (length {len})")]
    SeriesIndex { i: usize, len: usize },
}
