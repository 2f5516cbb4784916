//! Exact Halton sequence in pairwise distinct prime bases.

use crate::error::{Error, Result};
use crate::padic::{monna, DigitVector, Point, PrimeBases};

/// Validates a raw list of bases: every entry prime, no repeats.
pub fn validate_bases(raw: &[u32]) -> Result<PrimeBases> {
    PrimeBases::distinct(raw.to_vec())
}

/// `x_n = (phi_{p_1}(n), ..., phi_{p_s}(n))`.
pub fn halton_point(n: u64, bases: &PrimeBases) -> Point {
    let coords: Vec<DigitVector> = bases
        .as_slice()
        .iter()
        .map(|&p| monna(n, p).expect("bases are prime"))
        .collect();
    Point::new(coords).expect("bases are nonempty")
}

/// Iterator over `x_start, ..., x_{start+count-1}`.
#[derive(Debug, Clone)]
pub struct HaltonStream {
    bases: PrimeBases,
    next: u64,
    end: u64,
}

impl Iterator for HaltonStream {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        if self.next >= self.end {
            return None;
        }
        let p = halton_point(self.next, &self.bases);
        self.next += 1;
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next) as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for HaltonStream {}

/// Streams `count` consecutive Halton points starting at index `start`.
pub fn halton_stream(count: u64, bases: &PrimeBases, start: u64) -> Result<HaltonStream> {
    if count == 0 {
        return Err(Error::EmptyPoints);
    }
    // The last index generated is start + count - 1, which must fit a u64.
    let end = start
        .checked_add(count)
        .ok_or(Error::CountOverflow { start, count })?;
    Ok(HaltonStream { bases: bases.clone(), next: start, end })
}

/// The first `count` Halton points, collected.
pub fn halton_prefix(count: usize, bases: &PrimeBases) -> Vec<Point> {
    (0..count as u64).map(|n| halton_point(n, bases)).collect()
}
