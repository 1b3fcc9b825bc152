//! Generation and exact verification of two-dimensional Golay complementary
//! array sets (GCASs) built directly from 2-D extended generalized Boolean
//! functions.
//!
//! The pipeline is: describe an EGBF ([`egbf`]), build a candidate set of
//! offset variants ([`construct`]), and decide complementarity exactly with
//! cyclotomic integer arithmetic ([`verify`], [`cyclotomic`]).

pub mod catalog;
pub mod cli;
pub mod construct;
pub mod cyclotomic;
pub mod digits;
pub mod document;
pub mod egbf;
pub mod error;
pub mod sweep;
pub mod verify;

pub use construct::{
    build_t1_base_set, build_t1_set, build_t2_set, example1_params, validate_t1, validate_t2, ArraySet,
    OffsetStrategy, Theorem1Params, Theorem2Params,
};
pub use cyclotomic::{cyclotomic_polynomial, CyclotomicSum, IntPolynomial};
pub use digits::{digits_to_index, index_to_digits, mod_pow, unified_digits, DigitVector, Modulus};
pub use egbf::{eval_t1, eval_t2, materialize, ExponentArray, Theorem1Function, Theorem2Function};
pub use error::{GcasError, Result};
pub use verify::{aacf, aacf_set_sum, check_conjugate_symmetry, check_gcas, Shift, VerificationReport};
