//! Intersection poset of an arrangement: flats keyed by their closure sets,
//! ordered by reverse inclusion, with Hasse diagram export.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::arrangement::{Arrangement, Limits};
use crate::error::{Error, Result};
use crate::exactla::AffineSubspace;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flat {
    /// Sorted 0-based indices of every hyperplane containing the flat.
    pub closure_set: Vec<usize>,
    pub subspace: AffineSubspace,
    pub codim: usize,
}

impl Flat {
    pub fn is_ambient(&self) -> bool {
        self.codim == 0
    }

    pub fn dim(&self) -> usize {
        self.subspace.ambient_dim() - self.codim
    }

    /// `{1,3}` style label with 1-based indices.
    pub fn label(&self) -> String {
        format_index_set(&self.closure_set)
    }
}

pub fn format_index_set(set: &[usize]) -> String {
    let parts: Vec<String> = set.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionPoset {
    flats: Vec<Flat>,
    covers: Vec<(usize, usize)>,
}

impl IntersectionPoset {
    /// Sorted by `(codim, closure_set)`; index 0 is the ambient space.
    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    /// Pairs `(lower, upper)` of flat indices where `upper` is a maximal flat
    /// strictly contained in `lower`.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn find(&self, closure_set: &[usize]) -> Option<&Flat> {
        self.flats.iter().find(|f| f.closure_set == closure_set)
    }
}

fn closure_of_subspace(arr: &Arrangement, subspace: &AffineSubspace) -> Vec<usize> {
    arr.hyperplanes()
        .iter()
        .enumerate()
        .filter(|(_, h)| subspace.lies_in(h.normal(), h.constant()))
        .map(|(i, _)| i)
        .collect()
}

/// All `j` with `H_j` containing the intersection of `{H_i : i in S}`.
pub fn closure(arr: &Arrangement, set: &[usize]) -> Result<Vec<usize>> {
    if let Some(&bad) = set.iter().find(|&&i| i >= arr.len()) {
        return Err(Error::malformed(format!(
            "index {} out of range for {} hyperplanes",
            bad + 1,
            arr.len()
        )));
    }
    let subspace = arr.intersection_of(set);
    if subspace.is_empty() {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        return Err(Error::precondition(format!(
            "closure undefined: hyperplanes {} have empty intersection",
            format_index_set(&sorted)
        )));
    }
    Ok(closure_of_subspace(arr, &subspace))
}

/// Worklist enumeration from the ambient flat, without a size limit.
pub(crate) fn build_flats(arr: &Arrangement) -> Vec<Flat> {
    let n = arr.dim();
    let ambient = AffineSubspace::ambient(n);
    let mut known: BTreeMap<(usize, Vec<usize>), AffineSubspace> = BTreeMap::new();
    known.insert((0, Vec::new()), ambient.clone());
    let mut queue = vec![(Vec::new(), ambient)];

    while let Some((closure_set, subspace)) = queue.pop() {
        for (i, h) in arr.hyperplanes().iter().enumerate() {
            if closure_set.binary_search(&i).is_ok() {
                continue;
            }
            let next = subspace
                .with_equation(h.normal(), h.constant())
                .expect("validated lengths");
            let Some(codim) = next.codim() else {
                continue;
            };
            let key = (codim, closure_of_subspace(arr, &next));
            if !known.contains_key(&key) {
                known.insert(key.clone(), next.clone());
                queue.push((key.1, next));
            }
        }
    }

    known
        .into_iter()
        .map(|((codim, closure_set), subspace)| Flat {
            closure_set,
            subspace,
            codim,
        })
        .collect()
}

fn is_sorted_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|x| big.binary_search(x).is_ok())
}

pub(crate) fn covers_of(flats: &[Flat]) -> Vec<(usize, usize)> {
    // Intersection posets are ranked by codimension, so covers only join
    // adjacent levels.
    let mut covers = Vec::new();
    for (lo, f) in flats.iter().enumerate() {
        for (hi, g) in flats.iter().enumerate().skip(lo + 1) {
            if g.codim == f.codim + 1 && is_sorted_subset(&f.closure_set, &g.closure_set) {
                covers.push((lo, hi));
            }
        }
    }
    covers
}

pub fn enumerate_flats(arr: &Arrangement) -> Result<IntersectionPoset> {
    enumerate_flats_with(arr, &Limits::default())
}

pub fn enumerate_flats_with(arr: &Arrangement, limits: &Limits) -> Result<IntersectionPoset> {
    Limits::check(limits.flats, "flat enumeration", arr)?;
    let flats = build_flats(arr);
    let covers = covers_of(&flats);
    Ok(IntersectionPoset { flats, covers })
}

/// Graphviz digraph of the Hasse diagram, ambient space at the bottom.
pub fn hasse_dot(poset: &IntersectionPoset) -> String {
    let mut out = String::from("digraph intersection_poset {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, flat) in poset.flats.iter().enumerate() {
        let _ = writeln!(out, "  f{} [label=\"{}\"];", i, flat.label());
    }
    for (lo, hi) in &poset.covers {
        let _ = writeln!(out, "  f{lo} -> f{hi};");
    }
    out.push_str("}\n");
    out
}
