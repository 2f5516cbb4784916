//! Weyl sums `sum_n w_k(x_n)` over a finite point set.

use num_complex::Complex64;

use super::spectral::FunctionSystem;
use crate::error::Result;
use crate::exec::Strategy;
use crate::padic::{gamma_vec, IndexVector, Point, PrimeBases};
use crate::summation::CompensatedComplexSum;

/// Above this many table entries the per-dimension values are recomputed
/// on demand instead of cached.
const TABLE_BUDGET: usize = 1 << 26;

/// `sum_n gamma_k(x_n)` with compensated accumulation.
pub fn weyl_sum(points: &[Point], k: &IndexVector, bases: &PrimeBases) -> Result<Complex64> {
    super::check_points(points, bases)?;
    let mut acc = CompensatedComplexSum::new();
    for x in points {
        acc.add(gamma_vec(k, x, bases)?);
    }
    Ok(acc.value())
}

/// Evaluates one-dimensional function values `w_{k_i}(x_{n,i})` for all
/// points, either from cached per-dimension tables or on demand.
pub(crate) struct WeylEvaluator<'a> {
    points: &'a [Point],
    bases: &'a [u32],
    system: FunctionSystem,
    /// `tables[i][k_i * N + n]`, when cached.
    tables: Option<Vec<Vec<Complex64>>>,
}

impl<'a> WeylEvaluator<'a> {
    /// Points must already be checked against the bases.
    pub fn new(
        points: &'a [Point],
        bases: &'a PrimeBases,
        extents: &[u64],
        system: FunctionSystem,
        strategy: Strategy,
    ) -> Result<Self> {
        let n = points.len();
        let entries: usize = extents.iter().map(|&e| e as usize).sum::<usize>().saturating_mul(n);
        let mut ev = Self { points, bases: bases.as_slice(), system, tables: None };
        if entries <= TABLE_BUDGET {
            let tables = extents
                .iter()
                .enumerate()
                .map(|(i, &extent)| ev.build_table(i, extent as usize, strategy))
                .collect::<Result<Vec<_>>>()?;
            ev.tables = Some(tables);
        }
        Ok(ev)
    }

    fn build_table(&self, dim: usize, extent: usize, strategy: Strategy) -> Result<Vec<Complex64>> {
        let rows = strategy.map_chunks(extent, |lo, hi| {
            let mut out = Vec::with_capacity((hi - lo) * self.points.len());
            for k in lo..hi {
                for x in self.points {
                    out.push(self.direct(dim, k as u64, x)?);
                }
            }
            Ok(out)
        });
        let mut table = Vec::with_capacity(extent * self.points.len());
        for chunk in rows {
            table.extend(chunk?);
        }
        Ok(table)
    }

    #[inline]
    fn direct(&self, dim: usize, k: u64, x: &Point) -> Result<Complex64> {
        let p = self.bases[dim];
        Ok(self.system.phase(k, &x.coords()[dim], p)?.value())
    }

    /// `sum_n prod_i w_{k_i}(x_{n,i})`.
    pub fn weyl(&self, k: &[u64]) -> Result<Complex64> {
        let n = self.points.len();
        let mut acc = CompensatedComplexSum::new();
        match &self.tables {
            Some(tables) => {
                let rows: Vec<&[Complex64]> = tables
                    .iter()
                    .zip(k)
                    .map(|(t, &ki)| &t[ki as usize * n..(ki as usize + 1) * n])
                    .collect();
                for j in 0..n {
                    let v = rows.iter().fold(Complex64::new(1.0, 0.0), |a, r| a * r[j]);
                    acc.add(v);
                }
            }
            None => {
                for x in self.points {
                    let mut v = Complex64::new(1.0, 0.0);
                    for (i, &ki) in k.iter().enumerate() {
                        v *= self.direct(i, ki, x)?;
                    }
                    acc.add(v);
                }
            }
        }
        Ok(acc.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::halton::{halton_prefix, validate_bases};

    #[test]
    fn weyl_examples() {
        let b2 = validate_bases(&[2]).unwrap();
        let pts = halton_prefix(5, &b2);
        let s = weyl_sum(&pts, &IndexVector(vec![0]), &b2).unwrap();
        assert!((s - Complex64::new(5.0, 0.0)).norm() < 1e-15);
        let s = weyl_sum(&pts[..2], &IndexVector(vec![1]), &b2).unwrap();
        assert!(s.norm() < 1e-15);
        let b = validate_bases(&[2, 3]).unwrap();
        let s = weyl_sum(&halton_prefix(1, &b), &IndexVector(vec![1, 1]), &b).unwrap();
        assert!((s - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(weyl_sum(&[], &IndexVector(vec![1]), &b2), Err(Error::EmptyPoints));
    }

    #[test]
    fn cached_and_direct_agree() {
        let b = validate_bases(&[2, 3]).unwrap();
        let pts = halton_prefix(20, &b);
        let extents = [8u64, 9];
        let ev = WeylEvaluator::new(&pts, &b, &extents, FunctionSystem::PAdic, Strategy::Sequential)
            .unwrap();
        assert!(ev.tables.is_some());
        let direct = WeylEvaluator { tables: None, ..ev };
        let ev = WeylEvaluator::new(&pts, &b, &extents, FunctionSystem::PAdic, Strategy::Sequential)
            .unwrap();
        for k1 in 0..8 {
            for k2 in 0..9 {
                let a = ev.weyl(&[k1, k2]).unwrap();
                let d = direct.weyl(&[k1, k2]).unwrap();
                let w = weyl_sum(&pts, &IndexVector(vec![k1, k2]), &b).unwrap();
                assert_eq!(a, d);
                assert!((a - w).norm() < 1e-12);
            }
        }
    }
}
