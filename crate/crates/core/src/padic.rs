//! Exact base-p digit arithmetic.
//!
//! Points of the unit interval are held as finite digit expansions
//! `x = d_1 p^-1 + d_2 p^-2 + ...`, and values of the p-adic and Walsh
//! function systems are held as exact rational phases `q` standing for
//! `exp(2 pi i q)`. Conversion to floating point happens only when a
//! caller asks for a complex value.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::is_prime;
use crate::weights::ExactRational;

fn check_prime(p: u32) -> Result<()> {
    if is_prime(u64::from(p)) {
        Ok(())
    } else {
        Err(Error::NonPrimeBase(u64::from(p)))
    }
}

/// Base-p digits of `n`, least significant first.
pub(crate) fn base_digits(mut n: u64, p: u32) -> Vec<u32> {
    let p = u64::from(p);
    let mut out = Vec::new();
    while n > 0 {
        out.push((n % p) as u32);
        n /= p;
    }
    out
}

/// A point of `[0, 1)` given by a finite base-p expansion.
///
/// Trailing zero digits are always trimmed, so the empty list is zero and
/// equal values compare equal structurally.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DigitVector {
    base: u32,
    digits: Vec<u32>,
}

impl DigitVector {
    /// Builds a digit vector, checking the base and every digit.
    pub fn new(base: u32, digits: Vec<u32>) -> Result<Self> {
        check_prime(base)?;
        if let Some(&digit) = digits.iter().find(|&&d| d >= base) {
            return Err(Error::InvalidDigit { digit, base });
        }
        Ok(Self::from_trusted(base, digits))
    }

    pub fn zero(base: u32) -> Result<Self> {
        Self::new(base, Vec::new())
    }

    pub(crate) fn from_trusted(base: u32, mut digits: Vec<u32>) -> Self {
        while digits.last() == Some(&0) {
            digits.pop();
        }
        Self { base, digits }
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// Digits `d_1, d_2, ...` (most significant first).
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// Digit `d_j` for `j >= 1`, zero past the stored length.
    #[inline]
    pub fn digit(&self, j: usize) -> u32 {
        debug_assert!(j >= 1);
        self.digits.get(j - 1).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    /// Nearest double to the represented value.
    pub fn to_f64(&self) -> f64 {
        let p = f64::from(self.base);
        self.digits
            .iter()
            .rev()
            .fold(0.0, |acc, &d| (acc + f64::from(d)) / p)
    }

    /// The exact value `a / p^m` with `m` the number of stored digits.
    pub fn to_fraction(&self) -> (BigUint, BigUint) {
        let p = BigUint::from(self.base);
        let mut num = BigUint::zero();
        for &d in &self.digits {
            num = num * &p + BigUint::from(d);
        }
        let den = num_traits::pow(p, self.digits.len());
        (num, den)
    }

    pub fn to_rational(&self) -> ExactRational {
        let (n, d) = self.to_fraction();
        ExactRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// First index `j >= 1` at which the digits differ, or `None` if the
    /// two expansions are identical. Bases are not checked.
    #[inline]
    pub(crate) fn first_difference(&self, other: &Self) -> Option<usize> {
        let (a, b) = (&self.digits, &other.digits);
        let common = a.len().min(b.len());
        if let Some(i) = (0..common).find(|&i| a[i] != b[i]) {
            return Some(i + 1);
        }
        // Canonical form: the longer vector has a nonzero digit somewhere
        // in its tail, and its last digit is nonzero.
        let tail = if a.len() > common { &a[common..] } else { &b[common..] };
        tail.iter().position(|&d| d != 0).map(|i| common + i + 1)
    }
}

impl fmt::Display for DigitVector {
    /// Formats as the reduced fraction `a/p^m` (`0/1` for zero).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.to_fraction();
        write!(f, "{n}/{d}")
    }
}

/// A unit complex number `exp(2 pi i q)` stored as the exact phase
/// `q = numerator / denominator` in `[0, 1)`, in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhaseRational {
    numerator: u128,
    denominator: u128,
}

impl PhaseRational {
    pub const ZERO: Self = Self { numerator: 0, denominator: 1 };

    /// Reduces `numerator / denominator` modulo one and to lowest terms.
    pub fn new(numerator: u128, denominator: u128) -> Self {
        assert!(denominator > 0, "phase denominator must be positive");
        let numerator = numerator % denominator;
        let g = numerator.gcd(&denominator);
        Self {
            numerator: numerator / g,
            denominator: denominator / g,
        }
    }

    pub fn numerator(&self) -> u128 {
        self.numerator
    }

    pub fn denominator(&self) -> u128 {
        self.denominator
    }

    /// Phase of the product of the two unit numbers, or `None` on overflow.
    pub fn checked_add(self, other: Self) -> Option<Self> {
        let g = self.denominator.gcd(&other.denominator);
        let l = (self.denominator / g).checked_mul(other.denominator)?;
        let a = self.numerator.checked_mul(l / self.denominator)?;
        let b = other.numerator.checked_mul(l / other.denominator)?;
        // a, b < l, so reduce before adding to stay in range.
        let s = if a >= l - b { a - (l - b) } else { a + b };
        Some(Self::new(s, l))
    }

    /// Phase of the complex conjugate.
    pub fn conj(self) -> Self {
        Self::new(self.denominator - self.numerator, self.denominator)
    }

    pub fn as_f64(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    /// The unit complex number this phase stands for.
    pub fn value(&self) -> Complex64 {
        // Quarter turns are exact.
        match (self.numerator, self.denominator) {
            (0, _) => return Complex64::new(1.0, 0.0),
            (1, 2) => return Complex64::new(-1.0, 0.0),
            (1, 4) => return Complex64::new(0.0, 1.0),
            (3, 4) => return Complex64::new(0.0, -1.0),
            _ => {}
        }
        // Centre the phase on zero so the angle stays small.
        let q = self.as_f64();
        let q = if q > 0.5 { q - 1.0 } else { q };
        let (s, c) = (2.0 * std::f64::consts::PI * q).sin_cos();
        Complex64::new(c, s)
    }
}

impl fmt::Display for PhaseRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// A list of prime bases `p_1, ..., p_s`.
///
/// Primality is always enforced. Pairwise distinctness is only required by
/// the Halton-specific operations; see [`PrimeBases::distinct`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeBases(Vec<u32>);

impl PrimeBases {
    pub fn new(primes: Vec<u32>) -> Result<Self> {
        if primes.is_empty() {
            return Err(Error::EmptyBases);
        }
        for &p in &primes {
            check_prime(p)?;
        }
        Ok(Self(primes))
    }

    /// Prime and pairwise distinct bases.
    pub fn distinct(primes: Vec<u32>) -> Result<Self> {
        let bases = Self::new(primes)?;
        bases.ensure_distinct()?;
        Ok(bases)
    }

    pub fn ensure_distinct(&self) -> Result<()> {
        for (i, p) in self.0.iter().enumerate() {
            if self.0[..i].contains(p) {
                return Err(Error::DuplicateBase(*p));
            }
        }
        Ok(())
    }

    /// The first `s` primes.
    pub fn first(s: usize) -> Result<Self> {
        Self::new(crate::primes::first_primes(s))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn max(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub(crate) fn check_dim(&self, found: usize) -> Result<()> {
        if found == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim(), found })
        }
    }
}

/// A point of `[0, 1)^s`, one digit vector per coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point(Vec<DigitVector>);

impl Point {
    pub fn new(coords: Vec<DigitVector>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyPoint);
        }
        Ok(Self(coords))
    }

    pub fn coords(&self) -> &[DigitVector] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Converts doubles to digit vectors at the default ingestion depth.
    pub fn from_f64(values: &[f64], bases: &PrimeBases) -> Result<Self> {
        bases.check_dim(values.len())?;
        let coords = values
            .iter()
            .zip(bases.as_slice())
            .map(|(&x, &p)| float_to_digits(x, p, default_depth(p)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(coords)
    }

    /// Checks that coordinate `i` is expressed in base `p_i`.
    pub fn check_bases(&self, bases: &PrimeBases) -> Result<()> {
        bases.check_dim(self.dim())?;
        for (c, &p) in self.0.iter().zip(bases.as_slice()) {
            if c.base() != p {
                return Err(Error::BaseMismatch { left: c.base(), right: p });
            }
        }
        Ok(())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(DigitVector::to_f64).collect()
    }
}

/// An index vector `k = (k_1, ..., k_s)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexVector(pub Vec<u64>);

impl IndexVector {
    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }
}

impl From<Vec<u64>> for IndexVector {
    fn from(v: Vec<u64>) -> Self {
        Self(v)
    }
}

impl fmt::Display for IndexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// The Monna map on non-negative integers (the radical inverse): reflects
/// the base-p expansion of `n` across the radix point.
pub fn monna(n: u64, p: u32) -> Result<DigitVector> {
    check_prime(p)?;
    Ok(DigitVector::from_trusted(p, base_digits(n, p)))
}

/// Inverse of [`monna`] on finite expansions: `sum_j d_j p^(j-1)`.
pub fn monna_inverse(x: &DigitVector) -> BigUint {
    let p = BigUint::from(x.base());
    x.digits()
        .iter()
        .rev()
        .fold(BigUint::zero(), |acc, &d| acc * &p + BigUint::from(d))
}

/// Digits needed to capture a full double mantissa in base `p`.
pub fn default_depth(p: u32) -> usize {
    (53.0 * std::f64::consts::LN_2 / f64::from(p).ln()).ceil() as usize
}

/// Truncating base-p expansion of a double: `d_j = floor(x p^j) mod p`
/// for `j = 1..=depth`, evaluated in double precision.
///
/// Points ingested this way are only distinguished up to `depth` digits.
pub fn float_to_digits(x: f64, p: u32, depth: usize) -> Result<DigitVector> {
    check_prime(p)?;
    if depth == 0 {
        return Err(Error::InvalidDepth);
    }
    if !(0.0..1.0).contains(&x) {
        return Err(Error::OutOfUnitInterval(x));
    }
    let pf = f64::from(p);
    let mut scale = 1.0f64;
    let digits = (0..depth)
        .map(|_| {
            scale *= pf;
            (x * scale).floor().rem_euclid(pf) as u32
        })
        .collect();
    Ok(DigitVector::from_trusted(p, digits))
}

/// Phase of the `k`-th p-adic function at `x`, i.e. of
/// `exp(2 pi i phi_p(k) phi_p^+(x))`.
///
/// With `k = kappa_0 + ... + kappa_a p^a` only the digits `x_1..x_{a+1}`
/// matter, and the phase is `m / p^(a+1)` with
/// `m = sum_r kappa_r p^(a-r) (x_1 + x_2 p + ... + x_{r+1} p^r)`.
pub fn gamma_phase(k: u64, x: &DigitVector, p: u32) -> Result<PhaseRational> {
    check_prime(p)?;
    if x.base() != p {
        return Err(Error::BaseMismatch { left: x.base(), right: p });
    }
    if k == 0 {
        return Ok(PhaseRational::ZERO);
    }
    let kappa = base_digits(k, p);
    let a = kappa.len() - 1;
    let pw = u128::from(p);
    let overflow = || Error::PhaseOverflow(k);
    // powers[r] = p^r for r <= a + 1
    let mut powers = Vec::with_capacity(a + 2);
    powers.push(1u128);
    for r in 0..=a {
        powers.push(powers[r].checked_mul(pw).ok_or_else(overflow)?);
    }
    let modulus = powers[a + 1];
    let mut m = 0u128;
    let mut partial = 0u128; // x_1 + ... + x_{r+1} p^r
    for (r, &kr) in kappa.iter().enumerate() {
        partial += u128::from(x.digit(r + 1)) * powers[r];
        if kr == 0 {
            continue;
        }
        let term = u128::from(kr)
            .checked_mul(powers[a - r])
            .and_then(|t| t.checked_mul(partial))
            .ok_or_else(overflow)?
            % modulus;
        m = (m + term) % modulus;
    }
    Ok(PhaseRational::new(m, modulus))
}

/// `gamma_phase` as a complex number.
pub fn gamma_value(k: u64, x: &DigitVector, p: u32) -> Result<Complex64> {
    gamma_phase(k, x, p).map(|q| q.value())
}

/// Phase of the s-dimensional p-adic function: the sum of coordinate
/// phases modulo one.
pub fn gamma_vec_phase(k: &IndexVector, x: &Point, bases: &PrimeBases) -> Result<PhaseRational> {
    bases.check_dim(k.dim())?;
    x.check_bases(bases)?;
    let mut acc = PhaseRational::ZERO;
    for ((&ki, xi), &p) in k.as_slice().iter().zip(x.coords()).zip(bases.as_slice()) {
        let q = gamma_phase(ki, xi, p)?;
        acc = acc.checked_add(q).ok_or(Error::PhaseOverflow(ki))?;
    }
    Ok(acc)
}

/// Value of the s-dimensional p-adic function `gamma_k(x)`.
pub fn gamma_vec(k: &IndexVector, x: &Point, bases: &PrimeBases) -> Result<Complex64> {
    bases.check_dim(k.dim())?;
    x.check_bases(bases)?;
    let mut acc = Complex64::new(1.0, 0.0);
    for ((&ki, xi), &p) in k.as_slice().iter().zip(x.coords()).zip(bases.as_slice()) {
        acc *= gamma_phase(ki, xi, p)?.value();
    }
    Ok(acc)
}

/// Phase of the base-p Walsh function: `(sum_r kappa_r x_{r+1} mod p) / p`.
pub fn walsh_phase(k: u64, x: &DigitVector, p: u32) -> Result<PhaseRational> {
    check_prime(p)?;
    if x.base() != p {
        return Err(Error::BaseMismatch { left: x.base(), right: p });
    }
    let pw = u64::from(p);
    let s = base_digits(k, p)
        .iter()
        .enumerate()
        .fold(0u64, |acc, (r, &kr)| {
            (acc + u64::from(kr) * u64::from(x.digit(r + 1))) % pw
        });
    Ok(PhaseRational::new(u128::from(s), u128::from(pw)))
}

/// Sum of `phi_{p_j}(k_j)` as an exact rational.
pub(crate) fn monna_sum(k: &IndexVector, bases: &PrimeBases) -> Result<ExactRational> {
    bases.check_dim(k.dim())?;
    let mut acc = ExactRational::zero();
    for (&kj, &p) in k.as_slice().iter().zip(bases.as_slice()) {
        acc += monna(kj, p)?.to_rational();
    }
    Ok(acc)
}
