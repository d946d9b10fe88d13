//! Independent realizations used to cross-check the cumulant engine.
pub mod brute;
pub mod fock;
pub mod free_group;

pub use brute::{brute_moment, brute_moment_star};
pub use fock::{fock_moment, fock_moment_star, fock_operator_norm_estimate, FockKind, FockSpace};
pub use free_group::{free_group_moment, GroupAlgebraElement};
