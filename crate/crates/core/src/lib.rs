//! Exact finite-precision computation with p-adic integers, finite p-groups,
//! uniform pro-p groups, good bases and VC-dimension bounds on subgroup growth.

pub mod fingroup;
pub mod goodbasis;
pub mod invsys;
mod linalg;
pub mod oracle;
pub mod padic;
pub mod suite;
pub mod uniform;
pub mod vc;

pub use fingroup::{FiniteGroup, GroupError, GroupPreset, Subgroup};
pub use goodbasis::{GoodBasis, OpenSubgroup};
pub use padic::{Exponent, PAdicInt, PadicError, Supernatural, Valuation};
pub use uniform::{GElement, UniformGroup};
