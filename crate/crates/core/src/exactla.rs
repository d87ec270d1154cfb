//! Exact rational linear algebra: reduced row-echelon form and affine
//! subspaces given by canonical augmented systems.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator by `num-rational`.
pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn is_integer(x: &Scalar) -> bool {
    x.is_integer()
}

/// Parses `"p"` or `"p/q"` with `q != 0`. Leading/trailing whitespace is rejected.
pub fn parse_scalar(text: &str) -> Option<Scalar> {
    if text.is_empty() || text.trim() != text {
        return None;
    }
    Scalar::from_str(text).ok()
}

/// Renders `p` for integers and `p/q` otherwise, lowest terms.
pub fn format_scalar(x: &Scalar) -> String {
    x.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    /// Same shape as the input; zero rows collect at the bottom.
    pub matrix: Vec<Vec<Scalar>>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan elimination over the rationals.
///
/// Panics if the rows do not all have the same length.
pub fn rref(matrix: &[Vec<Scalar>]) -> Rref {
    let mut m: Vec<Vec<Scalar>> = matrix.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    assert!(
        m.iter().all(|row| row.len() == cols),
        "rref: ragged matrix"
    );

    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(found) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, found);

        let inv = m[row][col].recip();
        for x in m[row].iter_mut().skip(col) {
            *x = &*x * &inv;
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let factor = other[col].clone();
            for (x, p) in other.iter_mut().zip(&pivot_row).skip(col) {
                *x -= &factor * p;
            }
        }
        pivots.push(col);
        row += 1;
    }

    Rref {
        rank: pivots.len(),
        matrix: m,
        pivots,
    }
}

pub fn rank(matrix: &[Vec<Scalar>]) -> usize {
    rref(matrix).rank
}

/// Solution set of an affine system `a_j . x + c_j = 0` in `Q^n`.
///
/// A nonempty subspace is stored as the RREF of its augmented system
/// `[A | -c]` with zero rows dropped, which makes structural equality the same
/// as equality of point sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineSubspace {
    ambient_dim: usize,
    system: Option<Vec<Vec<Scalar>>>,
}

impl AffineSubspace {
    pub fn ambient(n: usize) -> Self {
        AffineSubspace {
            ambient_dim: n,
            system: Some(Vec::new()),
        }
    }

    pub fn empty(n: usize) -> Self {
        AffineSubspace {
            ambient_dim: n,
            system: None,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn is_empty(&self) -> bool {
        self.system.is_none()
    }

    /// Canonical augmented rows `[a | rhs]` meaning `a . x = rhs`.
    pub fn canonical_system(&self) -> Option<&[Vec<Scalar>]> {
        self.system.as_deref()
    }

    pub fn dim(&self) -> Option<usize> {
        self.system.as_ref().map(|s| self.ambient_dim - s.len())
    }

    pub fn codim(&self) -> Option<usize> {
        self.system.as_ref().map(Vec::len)
    }

    fn from_augmented(n: usize, rows: Vec<Vec<Scalar>>) -> Self {
        if rows.is_empty() {
            return Self::ambient(n);
        }
        let reduced = rref(&rows);
        if reduced.pivots.last() == Some(&n) {
            return Self::empty(n);
        }
        let mut system = reduced.matrix;
        system.truncate(reduced.rank);
        AffineSubspace {
            ambient_dim: n,
            system: Some(system),
        }
    }

    /// Adds the equation `normal . x + constant = 0`.
    pub fn with_equation(&self, normal: &[Scalar], constant: &Scalar) -> Result<Self> {
        check_len(self.ambient_dim, normal)?;
        let Some(system) = &self.system else {
            return Ok(self.clone());
        };
        let mut rows = system.clone();
        rows.push(augmented_row(normal, constant));
        Ok(Self::from_augmented(self.ambient_dim, rows))
    }

    fn pivot_columns(system: &[Vec<Scalar>]) -> Vec<usize> {
        system
            .iter()
            .map(|row| row.iter().position(|x| !x.is_zero()).expect("no zero rows"))
            .collect()
    }

    /// Whether every point of this (nonempty) subspace satisfies
    /// `normal . x + constant = 0`. Always true for the empty set.
    pub fn lies_in(&self, normal: &[Scalar], constant: &Scalar) -> bool {
        let Some(system) = &self.system else {
            return true;
        };
        debug_assert_eq!(normal.len(), self.ambient_dim);
        let n = self.ambient_dim;
        let pivots = Self::pivot_columns(system);

        // Substitute x_pivot = rhs - sum_free R[r][f] x_f and require the
        // resulting affine function of the free coordinates to vanish.
        let mut value = constant.clone();
        for (row, &p) in system.iter().zip(&pivots) {
            value += &normal[p] * &row[n];
        }
        if !value.is_zero() {
            return false;
        }
        (0..n).filter(|f| !pivots.contains(f)).all(|f| {
            let mut coeff = normal[f].clone();
            for (row, &p) in system.iter().zip(&pivots) {
                coeff -= &normal[p] * &row[f];
            }
            coeff.is_zero()
        })
    }

    /// The point with all free coordinates set to zero.
    pub fn base_point(&self) -> Option<Vec<Scalar>> {
        let system = self.system.as_ref()?;
        let n = self.ambient_dim;
        let mut point = vec![Scalar::zero(); n];
        for (row, p) in system.iter().zip(Self::pivot_columns(system)) {
            point[p] = row[n].clone();
        }
        Some(point)
    }

    /// Pivot columns of the canonical system (empty for the ambient space).
    pub fn pivots(&self) -> Vec<usize> {
        self.system
            .as_deref()
            .map(Self::pivot_columns)
            .unwrap_or_default()
    }

    /// Whether `self` is a subset of `other` as point sets.
    pub fn is_subset_of(&self, other: &AffineSubspace) -> bool {
        let n = self.ambient_dim;
        match &other.system {
            None => self.is_empty(),
            Some(rows) => rows.iter().all(|row| {
                let neg = -row[n].clone();
                self.lies_in(&row[..n], &neg)
            }),
        }
    }
}

impl fmt::Display for AffineSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.system {
            None => write!(f, "EMPTY"),
            Some(rows) if rows.is_empty() => write!(f, "Q^{}", self.ambient_dim),
            Some(rows) => {
                let n = self.ambient_dim;
                let eqs: Vec<String> = rows
                    .iter()
                    .map(|row| {
                        let lhs: Vec<String> = row[..n].iter().map(format_scalar).collect();
                        format!("[{}] = {}", lhs.join(" "), format_scalar(&row[n]))
                    })
                    .collect();
                write!(f, "{{{}}}", eqs.join("; "))
            }
        }
    }
}

fn check_len(n: usize, normal: &[Scalar]) -> Result<()> {
    if normal.len() != n {
        return Err(Error::malformed(format!(
            "normal vector has length {}, expected {}",
            normal.len(),
            n
        )));
    }
    Ok(())
}

fn augmented_row(normal: &[Scalar], constant: &Scalar) -> Vec<Scalar> {
    let mut row = normal.to_vec();
    row.push(-constant.clone());
    row
}

/// Solution set of `{a_j . x + c_j = 0}` in `Q^n`; the empty list gives `Q^n`.
pub fn intersect<'a, I>(ambient_dim: usize, equations: I) -> Result<AffineSubspace>
where
    I: IntoIterator<Item = (&'a [Scalar], &'a Scalar)>,
{
    let mut rows = Vec::new();
    for (normal, constant) in equations {
        check_len(ambient_dim, normal)?;
        rows.push(augmented_row(normal, constant));
    }
    Ok(AffineSubspace::from_augmented(ambient_dim, rows))
}

/// Scales a rational vector to coprime integers, keeping the sign.
pub fn primitive_integer_vector(v: &[Scalar]) -> Vec<BigInt> {
    use num_integer::Integer;
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &gcd.abs()).collect()
}
