//! Diaphony as a double sum of the closed-form kernel.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{check_points, sigma_minus_one, DiaphonyReport, Engine, KernelMode, Method};
use crate::error::Result;
use crate::kernel::{kernel_factor_f64, kernel_point};
use crate::padic::{Point, PrimeBases};
use crate::summation::CompensatedSum;
use crate::weights::{sigma, to_f64, ExactRational};

/// Per-dimension lookup of `1 + theta_p` indexed by first differing digit.
struct FactorTable {
    /// `factors[i][j]` = `1 + theta` for `i0 = j`, and `[i][0]` for equality.
    factors: Vec<Vec<f64>>,
}

impl FactorTable {
    fn new(points: &[Point], bases: &PrimeBases) -> Self {
        let factors = bases
            .as_slice()
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let depth = points.iter().map(|x| x.coords()[i].digits().len()).max().unwrap_or(0);
                std::iter::once(kernel_factor_f64(p, None))
                    .chain((1..=depth).map(|i0| kernel_factor_f64(p, Some(i0))))
                    .collect()
            })
            .collect();
        Self { factors }
    }

    #[inline]
    fn kernel(&self, x: &Point, y: &Point) -> f64 {
        let mut k = 1.0;
        for ((xi, yi), table) in x.coords().iter().zip(y.coords()).zip(&self.factors) {
            k *= table[xi.first_difference(yi).unwrap_or(0)];
            if k == 0.0 {
                break;
            }
        }
        k
    }
}

/// `sum_{m in range} K(x_n, x_m)`.
fn row_sum(table: &FactorTable, points: &[Point], n: usize, range: std::ops::Range<usize>) -> f64 {
    let x = &points[n];
    let acc: CompensatedSum = points[range].iter().map(|y| table.kernel(x, y)).collect();
    acc.value()
}

fn f_squared_from_total(total: f64, n: usize, bases: &PrimeBases) -> f64 {
    let n2 = (n as f64) * (n as f64);
    (total / n2 - 1.0) / sigma_minus_one(bases)
}

impl Engine {
    /// Diaphony by the closed-form kernel, in double precision or exactly.
    pub fn kernel(&self, points: &[Point], bases: &PrimeBases, mode: KernelMode) -> Result<DiaphonyReport> {
        check_points(points, bases)?;
        let raw = match mode {
            KernelMode::Fast => self.kernel_raw(points, bases),
            KernelMode::Exact => to_f64(&self.kernel_exact(points, bases)?),
        };
        Ok(DiaphonyReport::from_raw(points.len(), raw, Method::Kernel, None, None))
    }

    /// Unclamped `F_N^2` from the double-precision kernel sum, using
    /// `sum_{n,m} K = N sigma + 2 sum_{n<m} K`. Points are not checked.
    pub fn kernel_raw(&self, points: &[Point], bases: &PrimeBases) -> f64 {
        let n = points.len();
        let table = FactorTable::new(points, bases);
        let partials = self.strategy.map_chunks(n, |lo, hi| {
            (lo..hi)
                .map(|i| row_sum(&table, points, i, i + 1..n))
                .collect::<CompensatedSum>()
                .value()
        });
        let cross: CompensatedSum = partials.into_iter().collect();
        let total = n as f64 * sigma(bases) as f64 + 2.0 * cross.value();
        f_squared_from_total(total, n, bases)
    }

    /// `F_N^2` exactly, accumulating [`kernel_point`] values as rationals.
    pub fn kernel_exact(&self, points: &[Point], bases: &PrimeBases) -> Result<ExactRational> {
        check_points(points, bases)?;
        let n = points.len();
        let partials = self.strategy.map_chunks(n, |lo, hi| {
            let mut acc = ExactRational::zero();
            for i in lo..hi {
                for y in &points[i + 1..] {
                    acc += kernel_point(&points[i], y, bases)?;
                }
            }
            Ok(acc)
        });
        let mut cross = ExactRational::zero();
        for part in partials {
            cross += part?;
        }
        let sig = ExactRational::from_integer(BigInt::from(sigma(bases)));
        let nn = ExactRational::from_integer(BigInt::from(n));
        let total = &nn * &sig + cross * BigInt::from(2);
        Ok((total / (&nn * &nn) - ExactRational::one()) / (sig - ExactRational::one()))
    }

    /// `F_N^2` for every prefix `N = 1, ..., points.len()`, clamped.
    ///
    /// Uses `S(N+1) = S(N) + sigma + 2 sum_{m<N} K(x_N, x_m)`, so the whole
    /// sweep costs one pass over the point pairs.
    pub fn kernel_prefix(&self, points: &[Point], bases: &PrimeBases) -> Result<Vec<f64>> {
        check_points(points, bases)?;
        let n = points.len();
        let table = FactorTable::new(points, bases);
        let sig = sigma(bases) as f64;
        let increments = self.strategy.map_chunks(n, |lo, hi| {
            (lo..hi)
                .map(|i| sig + 2.0 * row_sum(&table, points, i, 0..i))
                .collect::<Vec<_>>()
        });
        let mut total = CompensatedSum::new();
        Ok(increments
            .into_iter()
            .flatten()
            .enumerate()
            .map(|(i, inc)| {
                total.add(inc);
                super::clamp_unit(f_squared_from_total(total.value(), i + 1, bases))
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diaphony::diaphony_kernel;
    use crate::exec::Strategy;
    use crate::halton::{halton_prefix, validate_bases};
    use crate::padic::DigitVector;

    #[test]
    fn single_point_is_one() {
        for raw in [vec![2u32], vec![3], vec![2, 3], vec![2, 3, 5]] {
            let b = validate_bases(&raw).unwrap();
            let x = crate::halton::halton_point(17, &b);
            for mode in [KernelMode::Fast, KernelMode::Exact] {
                let r = diaphony_kernel(std::slice::from_ref(&x), &b, mode).unwrap();
                assert!((r.f - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn two_point_examples() {
        let b = validate_bases(&[2]).unwrap();
        let pts = halton_prefix(2, &b);
        let r = diaphony_kernel(&pts, &b, KernelMode::Fast).unwrap();
        assert!((r.f - 0.5).abs() < 1e-12);
        let exact = Engine::new().kernel_exact(&pts, &b).unwrap();
        assert_eq!(exact, ExactRational::new(BigInt::from(1), BigInt::from(4)));

        let b = validate_bases(&[2, 3]).unwrap();
        let x = crate::halton::halton_point(5, &b);
        let r = diaphony_kernel(&[x.clone(), x], &b, KernelMode::Fast).unwrap();
        assert!((r.f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn prefix_matches_direct() {
        let b = validate_bases(&[2, 3]).unwrap();
        let pts = halton_prefix(100, &b);
        let prefix = Engine::new().kernel_prefix(&pts, &b).unwrap();
        for n in [1usize, 2, 3, 10, 37, 64, 100] {
            let direct = diaphony_kernel(&pts[..n], &b, KernelMode::Fast).unwrap();
            assert!((prefix[n - 1] - direct.f_squared).abs() < 1e-13, "N={n}");
        }
    }

    #[test]
    fn strategies_bit_identical() {
        let b = validate_bases(&[2, 3, 5]).unwrap();
        let pts = halton_prefix(300, &b);
        let seq = Engine::new().with_strategy(Strategy::Sequential);
        let a = seq.kernel_raw(&pts, &b);
        let c = Engine::new().kernel_raw(&pts, &b);
        assert_eq!(a.to_bits(), c.to_bits());
    }

    #[test]
    fn base_mismatch_rejected() {
        let b = validate_bases(&[2]).unwrap();
        let x = Point::new(vec![DigitVector::new(3, vec![1]).unwrap()]).unwrap();
        assert!(diaphony_kernel(&[x], &b, KernelMode::Fast).is_err());
        assert!(diaphony_kernel(&[], &b, KernelMode::Fast).is_err());
    }
}
