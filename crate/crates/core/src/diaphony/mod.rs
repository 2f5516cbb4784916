//! The p-adic diaphony, computed two independent ways, together with the
//! Halton bound checks.
//!
//! * [`diaphony_kernel`] sums the closed-form kernel over all point pairs.
//! * [`diaphony_spectral`] sums weighted squared Weyl sums over a finite
//!   box of indices and encloses the true value with the analytic tail.
//!
//! Heavy loops run through an [`Engine`], which carries the execution
//! [`Strategy`] and the enumeration cap for truncation boxes.

mod bound;
mod kernel_sum;
mod spectral;
mod weyl;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::padic::{IndexVector, Point, PrimeBases};
use crate::weights::{sigma, TruncationBox};

pub use bound::{lemma_bound, theorem1_bound, worst_case_error, BoundReport, LemmaReport};
pub use spectral::{FunctionSystem, SpectralSweep};
pub use weyl::weyl_sum;

/// Default cap on the number of index vectors in a truncation box.
pub const DEFAULT_BOX_CAP: u64 = 1 << 22;

/// Ratio tolerance used by the lemma check.
pub const LEMMA_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Kernel,
    Spectral,
}

/// Accumulation mode of the kernel method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelMode {
    /// Double precision with compensated summation.
    #[default]
    Fast,
    /// Exact rational accumulation, converted to double once.
    Exact,
}

/// Result of a diaphony computation.
///
/// For the spectral method `f_squared` is the truncated sum, i.e. the lower
/// end of the enclosure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiaphonyReport {
    pub n_points: usize,
    pub f: f64,
    pub f_squared: f64,
    pub method: Method,
    /// `(lower, upper)` on `F_N^2`.
    pub enclosure: Option<(f64, f64)>,
    #[serde(rename = "g")]
    pub truncation: Option<TruncationBox>,
}

impl DiaphonyReport {
    pub(crate) fn from_raw(
        n_points: usize,
        raw_f_squared: f64,
        method: Method,
        enclosure: Option<(f64, f64)>,
        truncation: Option<TruncationBox>,
    ) -> Self {
        let f_squared = clamp_unit(raw_f_squared);
        Self {
            n_points,
            f: f_squared.sqrt(),
            f_squared,
            method,
            enclosure,
            truncation,
        }
    }
}

/// Clamps a squared diaphony into `[0, 1]`; excursions are rounding noise.
pub(crate) fn clamp_unit(v: f64) -> f64 {
    if v < 0.0 {
        log::debug!("clamped negative F^2 of magnitude {:e}", -v);
        0.0
    } else if v > 1.0 {
        log::debug!("clamped F^2 excess of {:e} above one", v - 1.0);
        1.0
    } else {
        v
    }
}

/// Scheduling and resource settings for the heavy computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Engine {
    strategy: Strategy,
    box_cap: u64,
}

impl Default for Engine {
    fn default() -> Self {
        Self { strategy: Strategy::default(), box_cap: DEFAULT_BOX_CAP }
    }
}

impl Engine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_box_cap(mut self, cap: u64) -> Self {
        self.box_cap = cap;
        self
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn box_cap(&self) -> u64 {
        self.box_cap
    }

    /// Checks the box against the bases and the cap; returns the
    /// per-dimension extents `p_i^{g_i}`.
    pub(crate) fn box_extents(&self, bases: &PrimeBases, g: &TruncationBox) -> Result<Vec<u64>> {
        let size = g.size(bases)?;
        if size > u128::from(self.box_cap) {
            return Err(Error::BoxTooLarge { size, cap: self.box_cap });
        }
        Ok(g.extents(bases)?.expect("box below cap fits u64"))
    }
}

pub(crate) fn check_points(points: &[Point], bases: &PrimeBases) -> Result<()> {
    if points.is_empty() {
        return Err(Error::EmptyPoints);
    }
    points.iter().try_for_each(|x| x.check_bases(bases))
}

/// `sigma_p - 1` as a double.
pub(crate) fn sigma_minus_one(bases: &PrimeBases) -> f64 {
    (sigma(bases) - 1) as f64
}

/// Diaphony by the closed-form kernel.
pub fn diaphony_kernel(points: &[Point], bases: &PrimeBases, mode: KernelMode) -> Result<DiaphonyReport> {
    Engine::default().kernel(points, bases, mode)
}

/// Truncated spectral diaphony with its rigorous enclosure.
pub fn diaphony_spectral(points: &[Point], bases: &PrimeBases, g: &TruncationBox) -> Result<DiaphonyReport> {
    Engine::default().spectral(points, bases, g)
}

/// Checks the Halton Weyl-sum bound over every nonzero index in the box.
pub fn verify_lemma(n_points: usize, bases: &PrimeBases, g: &TruncationBox) -> Result<LemmaReport> {
    Engine::default().verify_lemma(n_points, bases, g)
}

/// Decodes a flat mixed-radix index (dimension 0 fastest).
#[inline]
pub(crate) fn decode_index(mut flat: u64, extents: &[u64], out: &mut [u64]) {
    for (k, &e) in out.iter_mut().zip(extents) {
        *k = flat % e;
        flat /= e;
    }
}

pub(crate) fn index_vector(flat: u64, extents: &[u64]) -> IndexVector {
    let mut k = vec![0; extents.len()];
    decode_index(flat, extents, &mut k);
    IndexVector(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamp_behaviour() {
        assert_eq!(clamp_unit(-1e-12), 0.0);
        assert_eq!(clamp_unit(1.0 + 1e-15), 1.0);
        assert_eq!(clamp_unit(0.25), 0.25);
    }

    #[test]
    fn index_decoding() {
        let extents = [4, 3];
        assert_eq!(index_vector(0, &extents), IndexVector(vec![0, 0]));
        assert_eq!(index_vector(5, &extents), IndexVector(vec![1, 1]));
        assert_eq!(index_vector(11, &extents), IndexVector(vec![3, 2]));
    }

    #[test]
    fn box_cap_enforced() {
        let bases = PrimeBases::new(vec![2, 3]).unwrap();
        let g = TruncationBox::new(vec![4, 3]).unwrap();
        assert_eq!(Engine::new().box_extents(&bases, &g).unwrap(), vec![16, 27]);
        assert_eq!(
            Engine::new().with_box_cap(100).box_extents(&bases, &g),
            Err(Error::BoxTooLarge { size: 432, cap: 100 })
        );
    }
}
