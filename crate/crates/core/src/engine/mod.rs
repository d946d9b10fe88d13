//! Coefficient families, block matrices `M_l`, trace sums and the bounds they feed.
pub mod bounds;
pub mod family;
pub mod matrices;
pub mod prime;
pub mod sums;

pub use bounds::{holo_rhs_bound, holo_rhs_bound_operator, ml_norms, ml_operator_norms, nonholo_rhs_bound};
pub use family::{CMat, CoefficientFamily, StarCoefficientFamily};
pub use prime::{max_entry_diff, prime_gram_closed_form, prime_norm_bound};
pub use matrices::{build_ml, schatten_norm, schatten_pow, sigma_max, BlockMatrixView};
pub use sums::{holo_norm_2m, nonholo_norm_2m, s_eval, s_eval_star, NonHoloFamily, NormReport, SValue};
