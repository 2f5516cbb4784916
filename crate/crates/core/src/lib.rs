//! p-adic diaphony of point sequences in the unit cube.
//!
//! The crate provides exact digit arithmetic for the p-adic function
//! system ([`padic`]), the diaphony weights ([`weights`]), the closed-form
//! reproducing kernel ([`kernel`]), exact Halton points ([`halton`]) and
//! the diaphony itself by a kernel route and a spectral route, together
//! with checks of the Halton diaphony bound ([`diaphony`]).
//!
//! The data-parallel loops use rayon when the default `parallel` feature
//! is enabled and fall back to sequential loops otherwise; results are
//! bit-identical either way.

pub mod diaphony;
pub mod error;
pub mod exec;
pub mod halton;
pub mod kernel;
pub mod padic;
pub mod primes;
pub mod summation;
pub mod weights;

pub use diaphony::{
    diaphony_kernel, diaphony_spectral, lemma_bound, theorem1_bound, verify_lemma, weyl_sum,
    worst_case_error, BoundReport, DiaphonyReport, Engine, FunctionSystem, KernelMode, LemmaReport,
    Method, SpectralSweep,
};
pub use error::{Error, Result};
pub use exec::Strategy;
pub use halton::{halton_point, halton_prefix, halton_stream, validate_bases};
pub use kernel::{kernel_point, theta};
pub use padic::{
    default_depth, float_to_digits, gamma_phase, gamma_vec, monna, monna_inverse, walsh_phase,
    DigitVector, IndexVector, PhaseRational, Point, PrimeBases,
};
pub use weights::{rho, rho_vec, sigma, sigma_g, ExactRational, TruncationBox};
