//! Truncated spectral form of the diaphony.
//!
//! `T(g) = 1/(sigma-1) sum_{k in box g, k != 0} rho(k) |S(k)/N|^2` never
//! exceeds `F_N^2`, and `T(g) + (sigma - sigma(g))/(sigma - 1)` never falls
//! below it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::weyl::WeylEvaluator;
use super::{check_points, decode_index, sigma_minus_one, DiaphonyReport, Engine, Method};
use crate::error::{Error, Result};
use crate::padic::{gamma_phase, walsh_phase, DigitVector, PhaseRational, Point, PrimeBases};
use crate::summation::CompensatedSum;
use crate::weights::{digit_count, rho_f64_level, tail_mass, to_f64, TruncationBox};

/// The one-dimensional function system used in Weyl sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionSystem {
    #[default]
    PAdic,
    Walsh,
}

impl FunctionSystem {
    pub fn phase(self, k: u64, x: &DigitVector, p: u32) -> Result<PhaseRational> {
        match self {
            FunctionSystem::PAdic => gamma_phase(k, x, p),
            FunctionSystem::Walsh => walsh_phase(k, x, p),
        }
    }
}

/// `rho_p(k)` for a flat index, from per-dimension digit counts.
#[inline]
fn weight(k: &[u64], bases: &[u32]) -> f64 {
    k.iter()
        .zip(bases)
        .map(|(&ki, &p)| rho_f64_level(digit_count(ki, p), p))
        .product()
}

impl Engine {
    /// `sum_{k in box g, k != 0} rho(k) |sum_n w_k(x_n)|^2` for the chosen
    /// function system, without normalisation.
    pub fn spectral_aggregate(
        &self,
        points: &[Point],
        bases: &PrimeBases,
        g: &TruncationBox,
        system: FunctionSystem,
    ) -> Result<f64> {
        check_points(points, bases)?;
        let extents = self.box_extents(bases, g)?;
        let eval = WeylEvaluator::new(points, bases, &extents, system, self.strategy)?;
        let size: u64 = extents.iter().product();
        let p = bases.as_slice();
        let partials = self.strategy.map_chunks(size as usize, |lo, hi| {
            let mut k = vec![0u64; extents.len()];
            let mut acc = CompensatedSum::new();
            for flat in (lo as u64).max(1)..hi as u64 {
                decode_index(flat, &extents, &mut k);
                acc.add(weight(&k, p) * eval.weyl(&k)?.norm_sqr());
            }
            Ok(acc.value())
        });
        let mut total = CompensatedSum::new();
        for part in partials {
            total.add(part?);
        }
        Ok(total.value())
    }

    /// Truncated spectral diaphony with the enclosure `lower <= F^2 <= upper`.
    pub fn spectral(&self, points: &[Point], bases: &PrimeBases, g: &TruncationBox) -> Result<DiaphonyReport> {
        let agg = self.spectral_aggregate(points, bases, g, FunctionSystem::PAdic)?;
        let n = points.len() as f64;
        let lower = agg / (n * n) / sigma_minus_one(bases);
        let upper = lower + to_f64(&tail_mass(bases, g)?);
        Ok(DiaphonyReport::from_raw(
            points.len(),
            lower,
            Method::Spectral,
            Some((lower, upper)),
            Some(g.clone()),
        ))
    }

    /// Truncated sums for every prefix of `points` and every sub-box of
    /// `g_max`, in one incremental pass over the index box.
    pub fn spectral_sweep(&self, points: &[Point], bases: &PrimeBases, g_max: &TruncationBox) -> Result<SpectralSweep> {
        check_points(points, bases)?;
        let extents = self.box_extents(bases, g_max)?;
        let p = bases.as_slice().to_vec();
        let s = p.len();
        let size = extents.iter().product::<u64>() as usize;

        // Level grid: one cell per digit-count tuple (0..=g_i per dimension).
        let levels: Vec<usize> = g_max.as_slice().iter().map(|&g| g as usize + 1).collect();
        let cells: usize = levels.iter().product();
        let level_of = |k: &[u64]| -> usize {
            let mut cell = 0;
            let mut stride = 1;
            for ((&ki, &pi), &l) in k.iter().zip(&p).zip(&levels) {
                cell += digit_count(ki, pi) as usize * stride;
                stride *= l;
            }
            cell
        };

        // Weight and level cell of every flat index, computed once.
        let (weights, cell_of): (Vec<f64>, Vec<usize>) = self
            .strategy
            .map_chunks(size, |lo, hi| {
                let mut k = vec![0u64; s];
                (lo..hi)
                    .map(|flat| {
                        decode_index(flat as u64, &extents, &mut k);
                        (weight(&k, &p), level_of(&k))
                    })
                    .collect::<Vec<_>>()
            })
            .into_iter()
            .flatten()
            .unzip();

        let mut sums = vec![Complex64::new(0.0, 0.0); size];
        let mut lower = Vec::with_capacity(points.len());
        let sm1 = sigma_minus_one(bases);
        for (idx, x) in points.iter().enumerate() {
            let values: Vec<Vec<Complex64>> = (0..s)
                .map(|i| {
                    (0..extents[i])
                        .map(|k| Ok(gamma_phase(k, &x.coords()[i], p[i])?.value()))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?;
            self.strategy.for_each_mut(&mut sums, |flat, acc| {
                let mut rem = flat as u64;
                let mut v = Complex64::new(1.0, 0.0);
                for (vals, &e) in values.iter().zip(&extents) {
                    v *= vals[(rem % e) as usize];
                    rem /= e;
                }
                *acc += v;
            });

            let hist = self.strategy.map_chunks(size, |lo, hi| {
                let mut h = vec![0.0; cells];
                for flat in lo.max(1)..hi {
                    h[cell_of[flat]] += weights[flat] * sums[flat].norm_sqr();
                }
                h
            });
            let mut grid = vec![0.0; cells];
            for h in hist {
                for (a, b) in grid.iter_mut().zip(h) {
                    *a += b;
                }
            }
            cumulate(&mut grid, &levels);
            let n2 = ((idx + 1) as f64).powi(2);
            lower.push(grid.into_iter().map(|v| v / n2 / sm1).collect());
        }
        Ok(SpectralSweep { bases: bases.clone(), g_max: g_max.clone(), levels, lower })
    }
}

/// In-place inclusive prefix sums along every axis of a mixed-radix grid.
fn cumulate(grid: &mut [f64], levels: &[usize]) {
    let mut stride = 1;
    for &l in levels {
        for idx in 0..grid.len() {
            if (idx / stride) % l != 0 {
                grid[idx] += grid[idx - stride];
            }
        }
        stride *= l;
    }
}

/// Truncated spectral sums for all prefixes `N` and all boxes `g <= g_max`.
#[derive(Debug, Clone)]
pub struct SpectralSweep {
    bases: PrimeBases,
    g_max: TruncationBox,
    levels: Vec<usize>,
    /// `lower[N-1][cell]` with cell the mixed-radix code of `g`.
    lower: Vec<Vec<f64>>,
}

impl SpectralSweep {
    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn g_max(&self) -> &TruncationBox {
        &self.g_max
    }

    /// Every box `g` with `1 <= g_i <= g_max_i`, dimension 0 fastest.
    pub fn boxes(&self) -> Vec<TruncationBox> {
        let maxes = self.g_max.as_slice();
        let count: usize = maxes.iter().map(|&g| g as usize).product();
        (0..count)
            .map(|mut c| {
                let g = maxes
                    .iter()
                    .map(|&m| {
                        let gi = (c % m as usize) as u32 + 1;
                        c /= m as usize;
                        gi
                    })
                    .collect();
                TruncationBox::new(g).expect("entries are >= 1")
            })
            .collect()
    }

    /// `T(g)` for the first `n` points.
    pub fn lower(&self, n: usize, g: &TruncationBox) -> Result<f64> {
        if g.dim() != self.levels.len() {
            return Err(Error::DimensionMismatch { expected: self.levels.len(), found: g.dim() });
        }
        if n == 0 || n > self.lower.len() {
            return Err(Error::EmptyPoints);
        }
        let mut cell = 0;
        let mut stride = 1;
        for ((&gi, &gm), &l) in g.as_slice().iter().zip(self.g_max.as_slice()).zip(&self.levels) {
            if gi > gm {
                return Err(Error::InvalidBox);
            }
            cell += gi as usize * stride;
            stride *= l;
        }
        Ok(self.lower[n - 1][cell])
    }

    /// `(lower, upper)` enclosure of `F_n^2` for box `g`.
    pub fn enclosure(&self, n: usize, g: &TruncationBox) -> Result<(f64, f64)> {
        let lower = self.lower(n, g)?;
        Ok((lower, lower + to_f64(&tail_mass(&self.bases, g)?)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diaphony::{diaphony_kernel, diaphony_spectral, KernelMode};
    use crate::halton::{halton_prefix, validate_bases};

    fn tb(v: &[u32]) -> TruncationBox {
        TruncationBox::new(v.to_vec()).unwrap()
    }

    #[test]
    fn two_point_enclosures() {
        let b = validate_bases(&[2]).unwrap();
        let pts = halton_prefix(2, &b);
        let r = diaphony_spectral(&pts, &b, &tb(&[1])).unwrap();
        let (lo, hi) = r.enclosure.unwrap();
        assert!(lo.abs() < 1e-15);
        assert!((hi - 0.5).abs() < 1e-15);
        let r = diaphony_spectral(&pts, &b, &tb(&[3])).unwrap();
        let (lo, hi) = r.enclosure.unwrap();
        assert!((lo - 0.1875).abs() < 1e-15);
        assert!((hi - 0.3125).abs() < 1e-15);
        assert!(lo <= r.f_squared && r.f_squared <= hi);
    }

    #[test]
    fn single_origin_point() {
        let b = validate_bases(&[2]).unwrap();
        let pts = halton_prefix(1, &b);
        let (lo, hi) = diaphony_spectral(&pts, &b, &tb(&[2])).unwrap().enclosure.unwrap();
        assert!((lo - 0.75).abs() < 1e-15);
        assert!((hi - 1.0).abs() < 1e-15);
    }

    #[test]
    fn box_cap_error() {
        let b = validate_bases(&[2]).unwrap();
        let pts = halton_prefix(2, &b);
        let e = Engine::new().with_box_cap(4).spectral(&pts, &b, &tb(&[3]));
        assert_eq!(e, Err(Error::BoxTooLarge { size: 8, cap: 4 }));
    }

    #[test]
    fn encloses_kernel_value() {
        let b = validate_bases(&[3, 5]).unwrap();
        let pts = halton_prefix(30, &b);
        let f2 = diaphony_kernel(&pts, &b, KernelMode::Exact).unwrap().f_squared;
        for g in [[1, 1], [2, 1], [3, 2], [4, 3]] {
            let (lo, hi) = diaphony_spectral(&pts, &b, &tb(&g)).unwrap().enclosure.unwrap();
            assert!(lo <= f2 + 1e-12 && f2 <= hi + 1e-12);
        }
    }

    #[test]
    fn sweep_matches_direct() {
        let b = validate_bases(&[2, 3]).unwrap();
        let pts = halton_prefix(12, &b);
        let sweep = Engine::new().spectral_sweep(&pts, &b, &tb(&[4, 3])).unwrap();
        assert_eq!(sweep.boxes().len(), 12);
        for n in [1usize, 2, 5, 12] {
            for g in sweep.boxes() {
                let direct = diaphony_spectral(&pts[..n], &b, &g).unwrap().enclosure.unwrap();
                let (lo, hi) = sweep.enclosure(n, &g).unwrap();
                assert!((lo - direct.0).abs() < 1e-13, "N={n} g={g}");
                assert!((hi - direct.1).abs() < 1e-13);
            }
        }
        assert!(sweep.lower(13, &tb(&[1, 1])).is_err());
        assert!(sweep.lower(3, &tb(&[5, 1])).is_err());
    }

    #[test]
    fn cumulate_two_axes() {
        let mut grid = vec![1.0; 6];
        cumulate(&mut grid, &[2, 3]);
        assert_eq!(grid, vec![1.0, 2.0, 2.0, 4.0, 3.0, 6.0]);
    }
}
