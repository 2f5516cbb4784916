//! Weights `rho_p(k)` of the diaphony and the normalisation constants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{IndexVector, PrimeBases};
use crate::primes::is_prime;

/// Exact rational in lowest terms with a positive denominator.
pub type ExactRational = BigRational;

/// Truncation box `g = (g_1, ..., g_s)`: the index vectors with
/// `0 <= k_i < p_i^{g_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncationBox(Vec<u32>);

impl TruncationBox {
    pub fn new(g: Vec<u32>) -> Result<Self> {
        if g.is_empty() || g.contains(&0) {
            return Err(Error::InvalidBox);
        }
        Ok(Self(g))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Per-dimension index counts `p_i^{g_i}`, or `None` if one does not
    /// fit in a `u64`.
    pub fn extents(&self, bases: &PrimeBases) -> Result<Option<Vec<u64>>> {
        bases.check_dim(self.dim())?;
        Ok(self
            .0
            .iter()
            .zip(bases.as_slice())
            .map(|(&g, &p)| u64::from(p).checked_pow(g))
            .collect())
    }

    /// Number of index vectors in the box, saturating.
    pub fn size(&self, bases: &PrimeBases) -> Result<u128> {
        bases.check_dim(self.dim())?;
        Ok(self
            .0
            .iter()
            .zip(bases.as_slice())
            .fold(1u128, |acc, (&g, &p)| {
                acc.saturating_mul(u128::from(p).checked_pow(g).unwrap_or(u128::MAX))
            }))
    }
}

impl std::fmt::Display for TruncationBox {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Number of base-p digits of `k`; zero for `k = 0`. For `k >= 1` this is
/// `t + 1` where `p^t <= k < p^(t+1)`.
pub fn digit_count(mut k: u64, p: u32) -> u32 {
    let p = u64::from(p);
    let mut t = 0;
    while k > 0 {
        k /= p;
        t += 1;
    }
    t
}

/// `rho_p(k)`: one for `k = 0`, else `p^(-2t)` with `p^t <= k < p^(t+1)`.
pub fn rho(k: u64, p: u32) -> Result<ExactRational> {
    if !is_prime(u64::from(p)) {
        return Err(Error::NonPrimeBase(u64::from(p)));
    }
    if k == 0 {
        return Ok(ExactRational::one());
    }
    let t = digit_count(k, p) - 1;
    let den = num_traits::pow(BigInt::from(p), 2 * t as usize);
    Ok(ExactRational::new(BigInt::one(), den))
}

/// Product weight over the coordinates of `k`.
pub fn rho_vec(k: &IndexVector, bases: &PrimeBases) -> Result<ExactRational> {
    bases.check_dim(k.dim())?;
    k.as_slice()
        .iter()
        .zip(bases.as_slice())
        .try_fold(ExactRational::one(), |acc, (&ki, &p)| Ok(acc * rho(ki, p)?))
}

/// `rho_p(k)` in double precision, from the digit count of `k`.
#[inline]
pub(crate) fn rho_f64_level(level: u32, p: u32) -> f64 {
    if level == 0 {
        1.0
    } else {
        f64::from(p).powi(-2 * (level as i32 - 1))
    }
}

/// `sigma_p = prod (p_i + 1)`.
pub fn sigma(bases: &PrimeBases) -> u64 {
    bases.as_slice().iter().map(|&p| u64::from(p) + 1).product()
}

/// Truncated normalisation `sigma_p(g) = prod (p_i + 1 - p_i^(1 - g_i))`.
pub fn sigma_g(bases: &PrimeBases, g: &TruncationBox) -> Result<ExactRational> {
    bases.check_dim(g.dim())?;
    Ok(g.as_slice()
        .iter()
        .zip(bases.as_slice())
        .map(|(&gi, &p)| {
            let pb = BigInt::from(p);
            let tail = ExactRational::new(BigInt::one(), num_traits::pow(pb.clone(), gi as usize - 1));
            ExactRational::from_integer(pb + 1) - tail
        })
        .fold(ExactRational::one(), |acc, f| acc * f))
}

/// Analytic tail `(sigma_p - sigma_p(g)) / (sigma_p - 1)` of the
/// truncated spectral sum.
pub fn tail_mass(bases: &PrimeBases, g: &TruncationBox) -> Result<ExactRational> {
    let s = ExactRational::from_integer(BigInt::from(sigma(bases)));
    let sg = sigma_g(bases, g)?;
    Ok((&s - sg) / (s - ExactRational::one()))
}

/// Nearest double to an exact rational.
pub fn to_f64(r: &ExactRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
