//! Closed form of the reproducing kernel.
//!
//! For `x != y` with first differing digit at position `i0`,
//! `theta_p(x, y) = p - p^(1 - i0) (p + 1)`, and `theta_p(x, x) = p`. The
//! one-dimensional kernel is `1 + theta_p` and the s-dimensional kernel is
//! the product over coordinates.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::padic::{DigitVector, Point, PrimeBases};
use crate::weights::ExactRational;

/// `theta_p(x, y)` given the first differing digit position.
pub(crate) fn theta_from_position(p: u32, first_difference: Option<usize>) -> ExactRational {
    let pb = BigInt::from(p);
    match first_difference {
        None => ExactRational::from_integer(pb),
        Some(i0) => {
            let scale = ExactRational::new(BigInt::one(), num_traits::pow(pb.clone(), i0 - 1));
            ExactRational::from_integer(pb.clone()) - scale * (pb + 1)
        }
    }
}

/// `1 + theta_p` in double precision.
#[inline]
pub(crate) fn kernel_factor_f64(p: u32, first_difference: Option<usize>) -> f64 {
    let pf = f64::from(p);
    match first_difference {
        None => pf + 1.0,
        Some(i0) => (pf + 1.0) * (1.0 - pf.powi(1 - i0 as i32)),
    }
}

/// `theta_p(x, y)`, exactly. Equality is decided on canonical digits.
pub fn theta(x: &DigitVector, y: &DigitVector) -> Result<ExactRational> {
    if x.base() != y.base() {
        return Err(Error::BaseMismatch { left: x.base(), right: y.base() });
    }
    Ok(theta_from_position(x.base(), x.first_difference(y)))
}

/// `K_p(x, y) = prod_i (1 + theta_{p_i}(x_i, y_i))`, exactly.
pub fn kernel_point(x: &Point, y: &Point, bases: &PrimeBases) -> Result<ExactRational> {
    x.check_bases(bases)?;
    y.check_bases(bases)?;
    x.coords()
        .iter()
        .zip(y.coords())
        .try_fold(ExactRational::one(), |acc, (xi, yi)| {
            Ok(acc * (ExactRational::one() + theta(xi, yi)?))
        })
}

/// `K_p(x, y)` in double precision.
pub fn kernel_point_f64(x: &Point, y: &Point) -> f64 {
    x.coords()
        .iter()
        .zip(y.coords())
        .map(|(xi, yi)| kernel_factor_f64(xi.base(), xi.first_difference(yi)))
        .product()
}
