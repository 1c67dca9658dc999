//! Truncated Booth radix-4 multipliers with constant compensation:
//! construction, simulation, error analysis, verification and HDL emission.

pub mod booth;
mod decimal;
pub mod error;
pub mod exec;
pub mod params;
pub mod rtl;
pub mod verify;
pub mod word;

pub use booth::{
    build_commutative_truncated_array, build_standard_array, build_truncated_array,
    double_booth_product, evaluate_array, round_output, split_m_delta, ArrayEvaluator, PPArray,
    TruncScheme,
};
pub use exec::Exec;
pub use word::{BoothDigit, Word};
