//! Affine hyperplane arrangements over the rationals: canonical hyperplanes,
//! classification (general position, normal crossing, central) and
//! essentialization.

use std::fmt;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactla::{self, intersect, AffineSubspace, Scalar};
use crate::poset;

/// `V(a . x + c)` with `a != 0`, stored with coprime integer coefficients and
/// a positive leading normal coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    normal: Vec<Scalar>,
    constant: Scalar,
}

impl Hyperplane {
    pub fn new(normal: Vec<Scalar>, constant: Scalar) -> Result<Self> {
        let Some(lead) = normal.iter().position(|x| !x.is_zero()) else {
            return Err(Error::malformed("hyperplane has a zero normal vector"));
        };
        let mut all = normal;
        all.push(constant);
        let mut ints = exactla::primitive_integer_vector(&all);
        if ints[lead].is_negative() {
            ints.iter_mut().for_each(|x| *x = -&*x);
        }
        let constant = Scalar::from_integer(ints.pop().expect("nonempty"));
        let normal = ints.into_iter().map(Scalar::from_integer).collect();
        Ok(Hyperplane { normal, constant })
    }

    /// Convenience constructor from integer data `a_1 .. a_n, c`.
    pub fn from_ints(normal: &[i64], constant: i64) -> Result<Self> {
        Self::new(
            normal.iter().map(|&x| exactla::int(x)).collect(),
            exactla::int(constant),
        )
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn normal(&self) -> &[Scalar] {
        &self.normal
    }

    pub fn constant(&self) -> &Scalar {
        &self.constant
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        self.normal
            .iter()
            .zip(point)
            .fold(self.constant.clone(), |acc, (a, x)| acc + a * x)
    }

    pub fn as_subspace(&self) -> AffineSubspace {
        intersect(self.dim(), [(self.normal(), self.constant())]).expect("lengths agree")
    }

    /// The hyperplane in `y` coordinates under `x = M y + t`.
    pub fn pull_back(&self, matrix: &[Vec<Scalar>], translation: &[Scalar]) -> Result<Self> {
        let n = self.dim();
        let normal = (0..n)
            .map(|col| {
                self.normal
                    .iter()
                    .zip(matrix)
                    .fold(Scalar::zero(), |acc, (a, row)| acc + a * &row[col])
            })
            .collect();
        Self::new(normal, self.eval(translation))
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let terms = self
            .normal
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| (a.clone(), format!("x{}", i + 1)))
            .chain((!self.constant.is_zero()).then(|| (self.constant.clone(), String::new())));
        for (a, var) in terms {
            let sign = if a.is_negative() { "-" } else { "+" };
            let mag = a.abs();
            if out.is_empty() {
                if a.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            if var.is_empty() || !mag.is_one() {
                out.push_str(&exactla::format_scalar(&mag));
            }
            out.push_str(&var);
        }
        write!(f, "V({out})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    dim: usize,
    hyperplanes: Vec<Hyperplane>,
}

impl Arrangement {
    pub fn new(dim: usize, hyperplanes: Vec<Hyperplane>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::malformed("ambient dimension must be at least 1"));
        }
        for (i, h) in hyperplanes.iter().enumerate() {
            if h.dim() != dim {
                return Err(Error::malformed(format!(
                    "hyperplane {} has {} coefficients, expected {}",
                    i + 1,
                    h.dim(),
                    dim
                )));
            }
        }
        for (i, j) in (0..hyperplanes.len()).tuple_combinations() {
            if hyperplanes[i] == hyperplanes[j] {
                return Err(Error::malformed(format!(
                    "hyperplanes {} and {} coincide",
                    i + 1,
                    j + 1
                )));
            }
        }
        Ok(Arrangement { dim, hyperplanes })
    }

    /// Rows are `[a_1, .., a_n, c]`.
    pub fn from_int_rows(dim: usize, rows: &[&[i64]]) -> Result<Self> {
        let hyperplanes = rows
            .iter()
            .map(|row| {
                if row.len() != dim + 1 {
                    return Err(Error::malformed("row length must be dim + 1"));
                }
                Hyperplane::from_ints(&row[..dim], row[dim])
            })
            .collect::<Result<_>>()?;
        Self::new(dim, hyperplanes)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn hyperplane(&self, i: usize) -> &Hyperplane {
        &self.hyperplanes[i]
    }

    /// Intersection of the hyperplanes with the given (0-based) indices.
    pub fn intersection_of(&self, indices: &[usize]) -> AffineSubspace {
        intersect(
            self.dim,
            indices
                .iter()
                .map(|&i| (self.hyperplanes[i].normal(), self.hyperplanes[i].constant())),
        )
        .expect("validated lengths")
    }

    pub fn common_intersection(&self) -> AffineSubspace {
        let all: Vec<usize> = (0..self.len()).collect();
        self.intersection_of(&all)
    }

    fn normals_rank(&self, indices: &[usize]) -> usize {
        let rows: Vec<Vec<Scalar>> = indices
            .iter()
            .map(|&i| self.hyperplanes[i].normal.clone())
            .collect();
        exactla::rank(&rows)
    }

    /// Reorders hyperplanes: position `k` of the result holds `self[perm[k]]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.len());
        Arrangement {
            dim: self.dim,
            hyperplanes: perm.iter().map(|&i| self.hyperplanes[i].clone()).collect(),
        }
    }

    /// Applies the coordinate change `x = M y + t` with `M` invertible.
    pub fn pull_back(&self, matrix: &[Vec<Scalar>], translation: &[Scalar]) -> Result<Self> {
        let n = self.dim;
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) || translation.len() != n {
            return Err(Error::malformed("coordinate change has the wrong shape"));
        }
        if exactla::rank(matrix) != n {
            return Err(Error::malformed("coordinate change is not invertible"));
        }
        let hyperplanes = self
            .hyperplanes
            .iter()
            .map(|h| h.pull_back(matrix, translation))
            .collect::<Result<_>>()?;
        Arrangement::new(n, hyperplanes)
    }
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.hyperplanes.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}} in Q^{}", parts.join(", "), self.dim)
    }
}

/// Bounds on the number of hyperplanes accepted by exponential-time routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Subset enumeration during classification.
    pub classify: usize,
    /// Flat enumeration.
    pub flats: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            classify: 20,
            flats: 16,
        }
    }
}

impl Limits {
    pub fn uniform(max_hyperplanes: usize) -> Self {
        Limits {
            classify: max_hyperplanes,
            flats: max_hyperplanes,
        }
    }

    pub(crate) fn check(limit: usize, what: &'static str, arr: &Arrangement) -> Result<()> {
        if arr.len() > limit {
            return Err(Error::ResourceLimit {
                what,
                actual: arr.len(),
                limit,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub general_position: bool,
    pub normal_crossing: bool,
    pub central: bool,
    pub common_intersection: AffineSubspace,
}

pub fn classify(arr: &Arrangement) -> Result<Classification> {
    classify_with(arr, &Limits::default())
}

pub fn classify_with(arr: &Arrangement, limits: &Limits) -> Result<Classification> {
    Limits::check(limits.classify, "classification", arr)?;
    let common_intersection = arr.common_intersection();
    let normal_crossing = poset::build_flats(arr)
        .iter()
        .all(|f| f.closure_set.len() == f.codim);
    Ok(Classification {
        general_position: is_general_position(arr),
        normal_crossing,
        central: !common_intersection.is_empty(),
        common_intersection,
    })
}

/// Every `p <= n` normals independent and every `n + 1` hyperplanes disjoint.
///
/// Independence is hereditary, so only subsets of size `min(m, n)` need a rank
/// check; with those independent, an `(n+1)`-subset is disjoint iff its
/// augmented system has full rank.
fn is_general_position(arr: &Arrangement) -> bool {
    let (n, m) = (arr.dim(), arr.len());
    let k = m.min(n);
    let independent = (0..m)
        .combinations(k)
        .all(|subset| arr.normals_rank(&subset) == k);
    if !independent {
        return false;
    }
    m <= n
        || (0..m)
            .combinations(n + 1)
            .all(|subset| arr.intersection_of(&subset).is_empty())
}

/// Base point of the common intersection and the coordinates spanning the
/// chosen complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub base_point: Vec<Scalar>,
    pub complement_coordinates: Vec<usize>,
}

impl Split {
    pub fn identity(n: usize) -> Self {
        Split {
            base_point: vec![Scalar::zero(); n],
            complement_coordinates: (0..n).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.complement_coordinates.len() == self.base_point.len()
            && self.base_point.iter().all(Zero::is_zero)
    }
}

/// Restricts an arrangement whose common intersection `V1` is positive
/// dimensional to a complement of `V1` through a point of `V1`.
///
/// The complement is the coordinate subspace on the pivot columns of the
/// normals' RREF, translated to the point of `V1` with free coordinates zero.
/// Arrangements with empty or zero-dimensional `V1` come back unchanged.
pub fn essentialize(arr: &Arrangement) -> (Arrangement, Split) {
    let n = arr.dim();
    let common = arr.common_intersection();
    match common.dim() {
        None | Some(0) => return (arr.clone(), Split::identity(n)),
        Some(_) => {}
    }
    let base_point = common.base_point().expect("nonempty");
    let coords = common.pivots();
    let hyperplanes = arr
        .hyperplanes()
        .iter()
        .map(|h| {
            let normal = coords.iter().map(|&p| h.normal()[p].clone()).collect();
            Hyperplane::new(normal, h.eval(&base_point))
                .expect("restriction of a hyperplane through V1 is nonzero on the complement")
        })
        .collect();
    let reduced = Arrangement::new(coords.len(), hyperplanes)
        .expect("distinct central hyperplanes restrict to distinct hyperplanes");
    (
        reduced,
        Split {
            base_point,
            complement_coordinates: coords,
        },
    )
}
