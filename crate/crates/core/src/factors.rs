//! Decomposition-factor supports of the twisted module on a normal crossing
//! arrangement, and the closed-form counts for general position.
//!
//! On a normal crossing arrangement each flat `F` carries exactly one factor
//! when every exponent indexed by its closure set is an integer, and none
//! otherwise. The ambient flat has an empty closure set and always qualifies.

use std::fmt;

use num_traits::Zero;

use crate::arrangement::{Arrangement, Limits};
use crate::error::{Error, Result};
use crate::exactla::{self, Scalar};
use crate::poset::{self, Flat};

/// Exponents `beta_1 .. beta_m`, one per hyperplane.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector(Vec<Scalar>);

impl ExponentVector {
    pub fn new(entries: Vec<Scalar>) -> Self {
        ExponentVector(entries)
    }

    /// From `(numerator, denominator)` pairs. Panics on a zero denominator.
    pub fn from_ratios(entries: &[(i64, i64)]) -> Self {
        ExponentVector(entries.iter().map(|&(p, q)| exactla::ratio(p, q)).collect())
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        ExponentVector(entries.iter().map(|&p| exactla::int(p)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.0
    }

    pub fn is_integer(&self, i: usize) -> bool {
        self.0[i].is_integer()
    }

    pub fn integer_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_integer(i)).collect()
    }

    pub fn integer_count(&self) -> usize {
        self.0.iter().filter(|b| b.is_integer()).count()
    }

    pub fn sum(&self) -> Scalar {
        self.0.iter().fold(Scalar::zero(), |acc, b| acc + b)
    }

    /// `sum_i c_i beta_i` for an integer linear form `c`.
    pub fn evaluate(&self, form: &[i64]) -> Scalar {
        debug_assert_eq!(form.len(), self.len());
        form.iter()
            .zip(&self.0)
            .filter(|(c, _)| **c != 0)
            .fold(Scalar::zero(), |acc, (&c, b)| acc + exactla::int(c) * b)
    }

    /// Position `k` of the result holds `self[perm[k]]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        ExponentVector(perm.iter().map(|&i| self.0[i].clone()).collect())
    }

    pub(crate) fn check_len(&self, m: usize) -> Result<()> {
        if self.len() != m {
            return Err(Error::malformed(format!(
                "beta has {} entries but the arrangement has {} hyperplanes",
                self.len(),
                m
            )));
        }
        Ok(())
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(exactla::format_scalar).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorReport {
    /// One flat per decomposition factor, in poset order.
    pub supports: Vec<Flat>,
    pub count: usize,
}

pub const NOT_NORMAL_CROSSING: &str =
    "factors requires a normal crossing arrangement; run `resolve`";

pub fn decomposition_factors(arr: &Arrangement, beta: &ExponentVector) -> Result<FactorReport> {
    decomposition_factors_with(arr, beta, &Limits::default())
}

pub fn decomposition_factors_with(
    arr: &Arrangement,
    beta: &ExponentVector,
    limits: &Limits,
) -> Result<FactorReport> {
    beta.check_len(arr.len())?;
    let poset = poset::enumerate_flats_with(arr, limits)?;
    if poset
        .flats()
        .iter()
        .any(|f| f.closure_set.len() != f.codim)
    {
        return Err(Error::precondition(NOT_NORMAL_CROSSING));
    }
    let supports: Vec<Flat> = poset
        .flats()
        .iter()
        .filter(|f| f.closure_set.iter().all(|&i| beta.is_integer(i)))
        .cloned()
        .collect();
    Ok(FactorReport {
        count: supports.len(),
        supports,
    })
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| {
        u64::try_from(u128::from(acc) * u128::from(n - i) / u128::from(i + 1))
            .expect("binomial coefficient overflows u64")
    })
}

fn partial_binomial_sum(n: u64, top: u64) -> u64 {
    (0..=n).map(|j| binomial(top, j)).sum()
}

/// Factor count on a general-position arrangement in dimension `n` with `k`
/// integer exponents: `sum_{j=0}^{n} C(k, j)`.
pub fn count_general_position(n: u64, k: u64) -> u64 {
    partial_binomial_sum(n, k)
}

/// Number of flats of a general-position arrangement of `m` hyperplanes in
/// dimension `n`: `sum_{k=0}^{n} C(m, k)`.
pub fn flat_count_general_position(n: u64, m: u64) -> u64 {
    partial_binomial_sum(n, m)
}
