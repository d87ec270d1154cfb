#![allow(dead_code)]

use std::collections::BTreeSet;

use arrdmod::arrangement::{classify, Arrangement, Hyperplane};
use arrdmod::exactla::{int, ratio, AffineSubspace, Scalar};
use arrdmod::factors::ExponentVector;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn arr(n: usize, rows: &[&[i64]]) -> Arrangement {
    Arrangement::from_int_rows(n, rows).unwrap()
}

pub fn random_rational<R: Rng>(rng: &mut R, span: i64, max_den: i64) -> Scalar {
    ratio(rng.gen_range(-span..=span), rng.gen_range(1..=max_den))
}

pub fn random_non_integer<R: Rng>(rng: &mut R) -> Scalar {
    let den = *[2i64, 3, 5, 7, 12].choose(rng).unwrap();
    loop {
        let num = rng.gen_range(-20..=20);
        if num % den != 0 {
            return ratio(num, den);
        }
    }
}

/// Exponents with exactly `k` integer entries at random positions.
pub fn random_beta<R: Rng>(rng: &mut R, m: usize, k: usize) -> ExponentVector {
    let mut idx: Vec<usize> = (0..m).collect();
    idx.shuffle(rng);
    let integral: BTreeSet<usize> = idx[..k].iter().copied().collect();
    ExponentVector::new(
        (0..m)
            .map(|i| {
                if integral.contains(&i) {
                    int(rng.gen_range(-4..=4))
                } else {
                    random_non_integer(rng)
                }
            })
            .collect(),
    )
}

pub fn random_hyperplane<R: Rng>(rng: &mut R, n: usize) -> Hyperplane {
    loop {
        let normal: Vec<Scalar> = (0..n).map(|_| random_rational(rng, 6, 3)).collect();
        if let Ok(h) = Hyperplane::new(normal, random_rational(rng, 6, 4)) {
            return h;
        }
    }
}

/// Resamples until the arrangement is in general position.
pub fn random_general_position<R: Rng>(rng: &mut R, n: usize, m: usize) -> Arrangement {
    loop {
        let hs: Vec<Hyperplane> = (0..m).map(|_| random_hyperplane(rng, n)).collect();
        let Ok(a) = Arrangement::new(n, hs) else { continue };
        if classify(&a).unwrap().general_position {
            return a;
        }
    }
}

/// Small coefficients produce many parallels and concurrences.
pub fn random_degenerate<R: Rng>(rng: &mut R, n: usize, m: usize) -> Arrangement {
    let mut hs: Vec<Hyperplane> = Vec::new();
    while hs.len() < m {
        let normal: Vec<i64> = (0..n).map(|_| rng.gen_range(-1..=1)).collect();
        let Ok(h) = Hyperplane::from_ints(&normal, rng.gen_range(-1..=1)) else { continue };
        if !hs.contains(&h) {
            hs.push(h);
        }
    }
    Arrangement::new(n, hs).unwrap()
}

pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<Scalar>> {
    loop {
        let m: Vec<Vec<Scalar>> = (0..n)
            .map(|_| (0..n).map(|_| random_rational(rng, 4, 3)).collect())
            .collect();
        if !det(&m).is_zero() {
            return m;
        }
    }
}

pub fn random_permutation<R: Rng>(rng: &mut R, m: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..m).collect();
    p.shuffle(rng);
    p
}

/// Leibniz expansion; only for tiny matrices.
pub fn det(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    if n == 0 {
        return Scalar::one();
    }
    let mut total = Scalar::zero();
    for perm in permutations(n) {
        let inversions = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| perm[i] > perm[j])
            .count();
        let mut term = Scalar::one();
        for (row, &col) in perm.iter().enumerate() {
            term *= &m[row][col];
        }
        if inversions % 2 == 1 {
            term = -term;
        }
        total += term;
    }
    total
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|mask| mask.count_ones() as usize == k)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}

/// Largest `k` with some nonzero `k x k` minor.
pub fn brute_force_rank(m: &[Vec<Scalar>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    (1..=rows.min(cols))
        .rev()
        .find(|&k| {
            subsets(rows, k).iter().any(|rs| {
                subsets(cols, k).iter().any(|cs| {
                    let minor: Vec<Vec<Scalar>> = rs
                        .iter()
                        .map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect())
                        .collect();
                    !det(&minor).is_zero()
                })
            })
        })
        .unwrap_or(0)
}

/// Closure sets of all nonempty intersections over the `2^m` subsets.
/// Containment is tested by whether adding an equation lowers the dimension.
pub fn brute_force_closure_sets(a: &Arrangement) -> BTreeSet<Vec<usize>> {
    let m = a.len();
    let mut out = BTreeSet::new();
    for mask in 0u64..1 << m {
        let set: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        let sub: AffineSubspace = a.intersection_of(&set);
        let Some(dim) = sub.dim() else { continue };
        let closure: Vec<usize> = (0..m)
            .filter(|&j| {
                let h = a.hyperplane(j);
                sub.with_equation(h.normal(), h.constant()).unwrap().dim() == Some(dim)
            })
            .collect();
        out.insert(closure);
    }
    out
}

/// Lines `x`, `y`, `x + c y` for `c = 1, 2, ..` through the point `(px, py)`.
pub fn concurrent_lines(m: usize, px: i64, py: i64) -> Arrangement {
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for i in 0..m {
        let (a, b) = match i {
            0 => (1, 0),
            1 => (0, 1),
            _ => (1, i as i64 - 1),
        };
        rows.push(vec![a, b, -(a * px + b * py)]);
    }
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    arr(2, &refs)
}

pub fn binomial_sum(n: u64, top: u64) -> u64 {
    // Pascal's triangle, independent of the library's multiplicative formula.
    let size = top as usize + 1;
    let mut row = vec![0u64; size.max(n as usize + 1)];
    row[0] = 1;
    for _ in 0..top {
        for j in (1..row.len()).rev() {
            row[j] += row[j - 1];
        }
    }
    row[..=n as usize].iter().sum()
}

/// A corpus of small arrangements including degenerate ones.
pub fn corpus() -> Vec<Arrangement> {
    let mut out = vec![
        arr(2, &[]),
        arr(2, &[&[1, 0, 0]]),
        arr(2, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 1]]),
        arr(2, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]),
        arr(2, &[&[1, 0, 0], &[0, 1, 0], &[1, 0, 1]]),
        arr(2, &[&[1, 0, 0], &[1, 0, -1], &[1, 0, -2], &[0, 1, 0], &[0, 1, -1]]),
        arr(2, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0], &[0, 1, -1], &[1, 1, -1]]),
        // braid arrangement in Q^3
        arr(3, &[&[1, -1, 0, 0], &[1, 0, -1, 0], &[0, 1, -1, 0]]),
        // braid arrangement in Q^4
        arr(
            4,
            &[
                &[1, -1, 0, 0, 0],
                &[1, 0, -1, 0, 0],
                &[1, 0, 0, -1, 0],
                &[0, 1, -1, 0, 0],
                &[0, 1, 0, -1, 0],
                &[0, 0, 1, -1, 0],
            ],
        ),
        // coordinate hyperplanes plus x+y+z = 0 and x+y+z = 1
        arr(3, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[1, 1, 1, 0], &[1, 1, 1, -1]]),
        concurrent_lines(6, 2, -3),
    ];
    let mut r = rng(0xC0FFEE);
    for seed in 0..60 {
        let n = 2 + seed % 3;
        let m = 3 + seed % 8;
        out.push(random_degenerate(&mut r, n, m));
    }
    out
}
