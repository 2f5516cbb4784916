//! Worst-case error identity, the Halton diaphony bound and the Weyl-sum
//! lemma check.

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::weyl::WeylEvaluator;
use super::{decode_index, index_vector, DiaphonyReport, Engine, FunctionSystem, LEMMA_TOLERANCE};
use crate::error::{Error, Result};
use crate::halton::halton_prefix;
use crate::padic::{monna_sum, IndexVector, PrimeBases};
use crate::weights::{sigma, to_f64, ExactRational, TruncationBox};

/// Worst-case integration error `sqrt(sigma - 1) F_N` of the equal-weight
/// rule in the kernel's Hilbert space.
pub fn worst_case_error(report: &DiaphonyReport, bases: &PrimeBases) -> f64 {
    ((sigma(bases) - 1) as f64).sqrt() * report.f
}

/// Constants and value of the Halton diaphony bound
/// `F_N^2 <= c (ln N)^s / N^2 + d / N^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n_points: u64,
    pub c: f64,
    pub d: f64,
    pub bound_f_squared: f64,
}

impl BoundReport {
    pub fn bound_f(&self) -> f64 {
        self.bound_f_squared.sqrt()
    }
}

/// Evaluates the bound with natural logarithms throughout.
pub fn theorem1_bound(bases: &PrimeBases, n_points: u64) -> Result<BoundReport> {
    bases.ensure_distinct()?;
    if n_points == 0 {
        return Err(Error::EmptyPoints);
    }
    let product: f64 = bases
        .as_slice()
        .iter()
        .map(|&p| {
            let p = f64::from(p);
            1.0 + 2.0 * p * p / p.ln()
        })
        .product();
    let pi2_3 = std::f64::consts::PI.powi(2) / 3.0;
    let c = pi2_3 * product / ((sigma(bases) - 1) as f64);
    let d = 2.0 * bases.dim() as f64 * f64::from(bases.max());
    let n = n_points as f64;
    let bound_f_squared = (c * n.ln().powi(bases.dim() as i32) + d) / (n * n);
    Ok(BoundReport { n_points, c, d, bound_f_squared })
}

/// `|| sum_j phi_{p_j}(k_j) ||`, the exact distance to the nearest integer.
pub(crate) fn nearest_integer_distance(k: &IndexVector, bases: &PrimeBases) -> Result<ExactRational> {
    let x = monna_sum(k, bases)?;
    let frac = &x - x.floor();
    let other = ExactRational::one() - &frac;
    Ok(if frac <= other { frac } else { other }.abs())
}

/// `1 / || sum_j phi_{p_j}(k_j) ||`, the bound on `|sum_n gamma_k(x_n)|`
/// for Halton points.
pub fn lemma_bound(k: &IndexVector, bases: &PrimeBases) -> Result<f64> {
    bases.ensure_distinct()?;
    bases.check_dim(k.dim())?;
    if k.is_zero() {
        return Err(Error::ZeroIndex);
    }
    let dist = nearest_integer_distance(k, bases)?;
    Ok(to_f64(&dist.recip()))
}

/// Outcome of [`Engine::verify_lemma`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub n_points: usize,
    #[serde(rename = "g")]
    pub truncation: TruncationBox,
    /// Largest `|S(k)| * ||sum phi(k_j)||` over the box.
    pub worst_ratio: f64,
    pub worst_index: IndexVector,
    /// Indices with ratio above `1 + LEMMA_TOLERANCE`.
    pub violations: u64,
    pub checked: u64,
}

impl Engine {
    /// Compares every Halton Weyl sum in the box (except `k = 0`) with its
    /// lemma bound.
    pub fn verify_lemma(&self, n_points: usize, bases: &PrimeBases, g: &TruncationBox) -> Result<LemmaReport> {
        bases.ensure_distinct()?;
        if n_points == 0 {
            return Err(Error::EmptyPoints);
        }
        let extents = self.box_extents(bases, g)?;
        let points = halton_prefix(n_points, bases);
        let eval = WeylEvaluator::new(&points, bases, &extents, FunctionSystem::PAdic, self.strategy)?;
        let size: u64 = extents.iter().product();

        // (worst ratio, its flat index, violations) per chunk
        let partials = self.strategy.map_chunks(size as usize, |lo, hi| {
            let mut k = vec![0u64; extents.len()];
            let mut worst = (f64::NEG_INFINITY, 0u64);
            let mut violations = 0u64;
            for flat in (lo as u64).max(1)..hi as u64 {
                decode_index(flat, &extents, &mut k);
                let kv = IndexVector(k.clone());
                let dist = to_f64(&nearest_integer_distance(&kv, bases)?);
                let ratio = eval.weyl(&k)?.norm() * dist;
                if ratio > worst.0 {
                    worst = (ratio, flat);
                }
                if ratio > 1.0 + LEMMA_TOLERANCE {
                    violations += 1;
                }
            }
            Ok((worst, violations))
        });

        let mut worst = (f64::NEG_INFINITY, 0u64);
        let mut violations = 0;
        for part in partials {
            let (w, v) = part?;
            if w.0 > worst.0 {
                worst = w;
            }
            violations += v;
        }
        let (worst_ratio, worst_index) = if size > 1 {
            (worst.0, index_vector(worst.1, &extents))
        } else {
            (0.0, IndexVector(vec![0; extents.len()]))
        };
        Ok(LemmaReport {
            n_points,
            truncation: g.clone(),
            worst_ratio,
            worst_index,
            violations,
            checked: size - 1,
        })
    }
}
