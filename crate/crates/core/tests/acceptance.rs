//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Every check is exact; time budgets are wall-clock.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use arrdmod::arrangement::{classify, essentialize, Arrangement, Hyperplane};
use arrdmod::exactla::{int, Scalar};
use arrdmod::factors::{
    count_general_position, decomposition_factors, flat_count_general_position, ExponentVector,
};
use arrdmod::poset::enumerate_flats;
use arrdmod::resolution::{
    irreducibility_verdict, plane_resolution, plane_resolution_with, pullback_factors_with,
    Certificate, CenterPolicy, Justification, Status,
};
use common::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, budget: Duration, what: &str) -> Result<Duration, String> {
    let spent = start.elapsed();
    ensure!(spent < budget, "{what} took {spent:?}, budget {budget:?}");
    Ok(spent)
}

fn labels(a: &Arrangement, beta: &ExponentVector) -> Result<Vec<Vec<usize>>, String> {
    let r = decomposition_factors(a, beta).map_err(|e| e.to_string())?;
    ensure!(r.count == r.supports.len(), "count disagrees with supports");
    Ok(r.supports.iter().map(|f| f.closure_set.clone()).collect())
}

/// Triangle {x, y, x+y+1}: counts 1, 2, 4, 7 with the listed supports.
fn ac1_triangle_regression() -> Outcome {
    let start = Instant::now();
    let a = arr(2, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 1]]);
    let cases: [(ExponentVector, Vec<Vec<usize>>); 4] = [
        (ExponentVector::from_ratios(&[(1, 2), (1, 3), (1, 5)]), vec![vec![]]),
        (ExponentVector::from_ratios(&[(2, 1), (1, 3), (1, 5)]), vec![vec![], vec![0]]),
        (
            ExponentVector::from_ratios(&[(2, 1), (-1, 1), (1, 5)]),
            vec![vec![], vec![0], vec![1], vec![0, 1]],
        ),
        (
            ExponentVector::from_ints(&[2, -1, 0]),
            vec![vec![], vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]],
        ),
    ];
    let mut counts = Vec::new();
    for (beta, expected) in &cases {
        let got = labels(&a, beta)?;
        ensure!(&got == expected, "beta {beta}: supports {got:?}, expected {expected:?}");
        counts.push(got.len());
    }
    ensure!(counts == [1, 2, 4, 7], "counts {counts:?}");
    let spent = within(start, Duration::from_secs(1), "triangle regression")?;
    Ok(format!("counts {counts:?} in {spent:?}"))
}

struct GeneralPositionCase {
    arr: Arrangement,
    beta: ExponentVector,
    k: usize,
}

fn general_position_cases(rng: &mut ChaCha8Rng, count: usize) -> Vec<GeneralPositionCase> {
    (0..count)
        .map(|i| {
            let n = 2 + i % 3;
            let m = 1 + (i / 3) % 8;
            let arr = random_general_position(rng, n, m);
            let k = rng.gen_range(0..=m);
            let beta = random_beta(rng, m, k);
            GeneralPositionCase { arr, beta, k }
        })
        .collect()
}

/// Factor counts on random general-position arrangements follow
/// `sum_{j<=n} C(k, j)`.
fn ac2_counting_formula(cases: &[GeneralPositionCase], generated_in: Duration) -> Outcome {
    let start = Instant::now();
    for c in cases {
        let n = c.arr.dim() as u64;
        ensure!(c.beta.integer_count() == c.k, "generator produced wrong k");
        let got = decomposition_factors(&c.arr, &c.beta)
            .map_err(|e| e.to_string())?
            .count as u64;
        let pascal = binomial_sum(n, c.k as u64);
        ensure!(
            got == pascal && got == count_general_position(n, c.k as u64),
            "{}, beta {}: count {got}, closed form {pascal}",
            c.arr,
            c.beta
        );
    }
    let spent = within(start, Duration::from_secs(30) - generated_in, "counting formula")?;
    Ok(format!("{} arrangements in {:?}", cases.len(), spent + generated_in))
}

/// Flat counts on the same arrangements follow `sum_{k<=n} C(m, k)`.
fn ac3_flat_count(cases: &[GeneralPositionCase]) -> Outcome {
    for c in cases {
        let (n, m) = (c.arr.dim() as u64, c.arr.len() as u64);
        let got = enumerate_flats(&c.arr).map_err(|e| e.to_string())?.len() as u64;
        let pascal = binomial_sum(n, m);
        ensure!(
            got == pascal && got == flat_count_general_position(n, m),
            "{}: {got} flats, closed form {pascal}",
            c.arr
        );
    }
    Ok(format!("{} arrangements", cases.len()))
}

/// Worklist enumeration equals the 2^m subset oracle on the corpus.
fn ac4_oracle_equivalence() -> Outcome {
    let corpus = corpus();
    let mut degenerate = 0;
    for a in &corpus {
        ensure!(a.len() <= 10, "corpus arrangement too large");
        let found: BTreeSet<Vec<usize>> = enumerate_flats(a)
            .map_err(|e| e.to_string())?
            .flats()
            .iter()
            .map(|f| f.closure_set.clone())
            .collect();
        let oracle = brute_force_closure_sets(a);
        ensure!(found == oracle, "{a}: enumerated {found:?}, oracle {oracle:?}");
        if !classify(a).map_err(|e| e.to_string())?.general_position {
            degenerate += 1;
        }
    }
    Ok(format!("{} arrangements ({degenerate} not in general position)", corpus.len()))
}

/// Exponents for `m` lines with `k` integer entries and the requested
/// integrality of the sum.
fn concurrent_beta(rng: &mut ChaCha8Rng, m: usize, k: usize, sum_integral: bool) -> ExponentVector {
    loop {
        let mut entries: Vec<Scalar> = random_beta(rng, m, k).entries().to_vec();
        let non_integral: Vec<usize> = (0..m).filter(|&i| !entries[i].is_integer()).collect();
        if sum_integral {
            if let Some(&last) = non_integral.last() {
                let rest: Scalar = (0..m).filter(|&i| i != last).map(|i| entries[i].clone()).sum();
                entries[last] = int(rng.gen_range(-3..=3)) - rest;
            }
        }
        let beta = ExponentVector::new(entries);
        if beta.integer_count() == k && beta.sum().is_integer() == sum_integral {
            return beta;
        }
    }
}

/// Concurrent lines blown up at their common point: `2(k+1)` factors when
/// `sum beta` is integral, `k+1` otherwise.
fn ac5_concurrent_pullback() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(5);
    let mut checked = 0;
    for m in 2..=6usize {
        let a = concurrent_lines(m, rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        let res = plane_resolution_with(&a, CenterPolicy::AllMultiplePoints).map_err(|e| e.to_string())?;
        ensure!(res.centers().len() == 1, "m={m}: expected one center");
        if m >= 3 {
            ensure!(
                plane_resolution(&a).map_err(|e| e.to_string())?.multiplicities() == res.multiplicities(),
                "m={m}: minimal resolution differs from the common-point blow-up"
            );
        }
        for k in 0..=m {
            // With one non-integral entry the sum cannot be integral; with
            // none it must be.
            let states: &[bool] = match m - k {
                0 => &[true],
                1 => &[false],
                _ => &[true, false],
            };
            for &sum_integral in states {
                for _ in 0..4 {
                    let beta = concurrent_beta(&mut rng, m, k, sum_integral);
                    let got = pullback_factors_with(&a, &beta, &res).map_err(|e| e.to_string())?.count;
                    let expected = if sum_integral { 2 * (k + 1) } else { k + 1 };
                    ensure!(got == expected, "m={m} beta {beta}: {got} factors, expected {expected}");
                    checked += 1;
                }
            }
        }
    }
    let spent = within(start, Duration::from_secs(5), "concurrent pull-back sweep")?;
    Ok(format!("{checked} exponent vectors in {spent:?}"))
}

fn ac6_verdicts() -> Outcome {
    let pencil = arr(2, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]);
    let v = irreducibility_verdict(&pencil, &ExponentVector::from_ratios(&[(1, 2), (1, 2), (1, 2)]), None)
        .map_err(|e| e.to_string())?;
    ensure!(v.status == Status::Irreducible, "(a) got {v:?}");
    let v = irreducibility_verdict(&pencil, &ExponentVector::from_ratios(&[(1, 3), (1, 3), (1, 3)]), None)
        .map_err(|e| e.to_string())?;
    ensure!(v.status == Status::Reducible, "(b) got {v:?}");

    let mut rng = rng(6);
    let (mut witnesses, mut certified) = (0, 0);
    for a in corpus().iter().filter(|a| !a.is_empty()) {
        let m = a.len();
        let k = rng.gen_range(1..=m);
        let beta = random_beta(&mut rng, m, k);
        let v = irreducibility_verdict(a, &beta, None).map_err(|e| e.to_string())?;
        let first = (0..m).find(|&i| beta.is_integer(i)).expect("k >= 1");
        ensure!(
            v.status == Status::Reducible
                && v.justification == Justification::IntegerExponent { witness: first },
            "(c) {a} beta {beta}: {v:?}"
        );
        let local = Arrangement::new(a.dim(), vec![a.hyperplane(first).clone()]).unwrap();
        let local_beta = ExponentVector::new(vec![beta.entries()[first].clone()]);
        ensure!(
            decomposition_factors(&local, &local_beta).unwrap().count >= 2,
            "(c) witness restriction has a single factor"
        );
        witnesses += 1;

        if classify(a).map_err(|e| e.to_string())?.normal_crossing {
            let beta = random_beta(&mut rng, m, 0);
            let v = irreducibility_verdict(a, &beta, None).map_err(|e| e.to_string())?;
            ensure!(
                v.status == Status::Irreducible
                    && v.justification
                        == Justification::NormalCrossing { certificate: Certificate::new(m, []) },
                "(d) {a} beta {beta}: {v:?}"
            );
            ensure!(decomposition_factors(a, &beta).unwrap().count == 1, "(d) count is not 1");
            certified += 1;
        }
    }
    Ok(format!("(a) (b) ok; (c) {witnesses} witnesses; (d) {certified} certificates"))
}

fn random_normal_crossing(rng: &mut ChaCha8Rng) -> Arrangement {
    loop {
        let n = rng.gen_range(2..=3);
        let m = rng.gen_range(1..=6);
        let a = random_degenerate(rng, n, m);
        if classify(&a).unwrap().normal_crossing {
            return a;
        }
    }
}

fn count(a: &Arrangement, beta: &ExponentVector) -> Result<usize, String> {
    decomposition_factors(a, beta)
        .map(|r| r.count)
        .map_err(|e| format!("{a}: {e}"))
}

/// Counts are unchanged by relabeling, rescaling, coordinate changes and
/// essentialization.
fn ac7_invariance() -> Outcome {
    const CASES: usize = 60;
    let mut rng = rng(7);
    let cases: Vec<(Arrangement, ExponentVector)> = (0..CASES)
        .map(|i| {
            let a = if i % 2 == 0 {
                random_normal_crossing(&mut rng)
            } else {
                let n = rng.gen_range(2..=4);
                let m = rng.gen_range(1..=6);
                random_general_position(&mut rng, n, m)
            };
            let k = rng.gen_range(0..=a.len());
            let beta = random_beta(&mut rng, a.len(), k);
            (a, beta)
        })
        .collect();

    for (a, beta) in &cases {
        let base = count(a, beta)?;
        let perm = random_permutation(&mut rng, a.len());
        ensure!(count(&a.permuted(&perm), &beta.permuted(&perm))? == base, "(a) {a}");

        let scaled: Vec<Hyperplane> = a
            .hyperplanes()
            .iter()
            .map(|h| {
                let s = loop {
                    let s = random_rational(&mut rng, 7, 5);
                    if s != int(0) {
                        break s;
                    }
                };
                Hyperplane::new(h.normal().iter().map(|x| x * &s).collect(), h.constant() * &s).unwrap()
            })
            .collect();
        ensure!(count(&Arrangement::new(a.dim(), scaled).unwrap(), beta)? == base, "(b) {a}");

        let n = a.dim();
        let matrix = random_invertible(&mut rng, n);
        let shift: Vec<Scalar> = (0..n).map(|_| random_rational(&mut rng, 4, 3)).collect();
        ensure!(count(&a.pull_back(&matrix, &shift).unwrap(), beta)? == base, "(c) {a}");
    }

    // Central normal crossing arrangements with a positive-dimensional
    // common intersection.
    let mut reduced = 0;
    for _ in 0..CASES {
        let n = rng.gen_range(3..=4);
        let r = rng.gen_range(1..n);
        let normals = loop {
            let rows: Vec<Vec<Scalar>> = (0..r)
                .map(|_| (0..n).map(|_| random_rational(&mut rng, 5, 3)).collect())
                .collect();
            if brute_force_rank(&rows) == r {
                break rows;
            }
        };
        let point: Vec<Scalar> = (0..n).map(|_| random_rational(&mut rng, 4, 3)).collect();
        let hs: Vec<Hyperplane> = normals
            .iter()
            .map(|a| {
                let c = -a.iter().zip(&point).map(|(x, p)| x * p).sum::<Scalar>();
                Hyperplane::new(a.clone(), c).unwrap()
            })
            .collect();
        let a = Arrangement::new(n, hs).unwrap();
        let k = rng.gen_range(0..=r);
        let beta = random_beta(&mut rng, r, k);
        let (red, split) = essentialize(&a);
        ensure!(red.dim() == r && !split.is_identity(), "(d) {a} did not reduce");
        ensure!(count(&red, &beta)? == count(&a, &beta)?, "(d) {a}");
        reduced += 1;
    }
    Ok(format!("{CASES} cases each for (a)-(c), {reduced} for (d)"))
}

fn report(name: &str, outcome: std::thread::Result<Outcome>) -> bool {
    match outcome {
        Ok(Ok(detail)) => {
            println!("[PASS] {name}: {detail}");
            true
        }
        Ok(Err(why)) => {
            println!("[FAIL] {name}: {why}");
            false
        }
        Err(_) => {
            println!("[FAIL] {name}: panicked");
            false
        }
    }
}

fn main() -> ExitCode {
    let mut ok = true;
    ok &= report("AC1 triangle regression", catch_unwind(ac1_triangle_regression));

    let start = Instant::now();
    let cases = catch_unwind(|| general_position_cases(&mut rng(2), 120));
    let generated_in = start.elapsed();
    match cases {
        Ok(cases) => {
            ok &= report(
                "AC2 general-position factor count",
                catch_unwind(AssertUnwindSafe(|| ac2_counting_formula(&cases, generated_in))),
            );
            ok &= report(
                "AC3 general-position flat count",
                catch_unwind(AssertUnwindSafe(|| ac3_flat_count(&cases))),
            );
        }
        Err(_) => {
            println!("[FAIL] AC2 general-position factor count: generator panicked");
            println!("[FAIL] AC3 general-position flat count: generator panicked");
            ok = false;
        }
    }

    ok &= report("AC4 flat oracle equivalence", catch_unwind(ac4_oracle_equivalence));
    ok &= report("AC5 concurrent-lines pull-back counts", catch_unwind(ac5_concurrent_pullback));
    ok &= report("AC6 verdict soundness", catch_unwind(ac6_verdicts));
    ok &= report("AC7 invariance properties", catch_unwind(ac7_invariance));

    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
