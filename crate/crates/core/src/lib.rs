//! Permutation groups, subgroup lattices of small symmetric groups and
//! minimal faithful permutation degrees.
//!
//! The crate searches every minimally embedded subgroup `G` of `Sym(m)`
//! for a nontrivial subgroup of its centralizer meeting `G` trivially, and
//! certifies the degree-10 example `G(2,2,5)`.

pub mod cache;
pub mod elements;
pub mod error;
pub mod group;
pub mod group_ops;
pub mod iso;
pub mod mindeg;
pub mod perm;
pub mod pipeline;
pub mod stabchain;
pub mod subgroups;

pub use error::{Error, Result};
pub use group::{direct_product_disjoint, make_gppq, make_named, NamedKind, PermGroup};
pub use perm::{format_perm, parse_perm, Permutation};
pub use stabchain::StabChain;
