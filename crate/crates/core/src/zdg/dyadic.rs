//! Class-level zero-divisor graph of `Z/2^s[i,j,k]`.
//!
//! Every nonzero zero divisor is `2^l pi u` with `u` a unit and
//! `pi` one of `1, 1+i, 1+j, 1+k, 1+i+j+k, 1+i+j-k`, so the orbits
//! `[x] = x U` are indexed by such pairs. The ring is reversible, hence
//! `(a u)(b v) = 0` iff `a b = 0` and one product per class pair decides
//! the whole relation.

use std::collections::BTreeSet;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::compressed::CompressedGraph;
use super::graph::ZdGraph;
use super::twins::TwinPartition;
use crate::error::{Error, Result};
use crate::quaternion::{PiTag, QuatRing, Quaternion};

/// Largest `s` for which orbit sizes are enumerated.
pub const MAX_ORBIT_S: u32 = 5;
/// Largest `s` accepted by the class-level builder.
pub const MAX_CLASS_S: u32 = 15;

/// The class `[2^level * tag]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DyadicLabel {
    pub level: u32,
    pub tag: PiTag,
}

impl DyadicLabel {
    pub fn new(level: u32, tag: PiTag) -> Self {
        DyadicLabel { level, tag }
    }

    pub fn element(&self, s: u32) -> Quaternion {
        self.tag.quaternion(1 << s).scale(1 << self.level)
    }
}

impl fmt::Display for DyadicLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.level, self.tag) {
            (l, PiTag::One) => write!(f, "[2^{l}]"),
            (0, t) => write!(f, "[{}]", t.symbol()),
            (l, t) => write!(f, "[2^{l}({})]", t.symbol()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DyadicClass {
    /// All labels naming this class, first one primary.
    pub labels: Vec<DyadicLabel>,
    /// `2^l pi` for the primary label.
    pub element: Quaternion,
    /// Smallest orbit member and orbit size, when enumerated.
    pub canonical: Option<Quaternion>,
    pub size: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct DyadicClassGraph {
    s: u32,
    classes: Vec<DyadicClass>,
    graph: CompressedGraph,
}

/// All labels `[2^l pi]` except the unit class, in generation order.
pub fn dyadic_labels(s: u32) -> Vec<DyadicLabel> {
    let mut out = Vec::new();
    for l in 0..s {
        for tag in PiTag::ALL {
            if !(l == 0 && tag == PiTag::One) {
                out.push(DyadicLabel::new(l, tag));
            }
        }
    }
    out
}

fn orbit_min_and_size(x: &Quaternion, units: &[Quaternion], ring: &QuatRing) -> (Quaternion, u64) {
    let mut seen = FixedBitSet::with_capacity(ring.size() as usize);
    let mut min = *x;
    let mut count = 0;
    for u in units {
        let y = *x * *u;
        if !seen.put(ring.index_of(&y) as usize) {
            count += 1;
            if y.coeffs() < min.coeffs() {
                min = y;
            }
        }
    }
    (min, count)
}

impl DyadicClassGraph {
    /// Build the class graph. Orbit sizes and canonical representatives
    /// are enumerated when `s <= MAX_ORBIT_S`; otherwise sizes are left
    /// unknown and the compressed graph carries unit weights.
    pub fn build(s: u32) -> Result<Self> {
        if s == 0 || s > MAX_CLASS_S {
            return Err(Error::InvalidInput(format!(
                "class graph needs 1 <= s <= {MAX_CLASS_S}, got {s}"
            )));
        }
        let n = 1u64 << s;
        let mut classes: Vec<DyadicClass> = Vec::new();
        for label in dyadic_labels(s) {
            let x = label.element(s);
            match classes.iter_mut().find(|c| c.element == x) {
                Some(c) => c.labels.push(label),
                None => classes.push(DyadicClass {
                    labels: vec![label],
                    element: x,
                    canonical: None,
                    size: None,
                }),
            }
        }
        if s <= MAX_ORBIT_S {
            let ring = QuatRing::new(n)?;
            let units = ring.units();
            for c in &mut classes {
                let (min, size) = orbit_min_and_size(&c.element, &units, &ring);
                c.canonical = Some(min);
                c.size = Some(size);
            }
            let distinct: BTreeSet<[u64; 4]> =
                classes.iter().map(|c| c.canonical.unwrap().coeffs()).collect();
            assert_eq!(distinct.len(), classes.len(), "two labels share an orbit");
        }
        let k = classes.len();
        let relation = classes
            .iter()
            .map(|a| {
                let mut row = FixedBitSet::with_capacity(k);
                for (j, b) in classes.iter().enumerate() {
                    row.set(j, (a.element * b.element).is_zero());
                }
                row
            })
            .collect();
        let labels = classes
            .iter()
            .map(|c| c.labels.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("="))
            .collect();
        let sizes = classes.iter().map(|c| c.size.unwrap_or(1)).collect();
        let graph = CompressedGraph::from_parts(labels, sizes, relation);
        Ok(DyadicClassGraph { s, classes, graph })
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn classes(&self) -> &[DyadicClass] {
        &self.classes
    }

    /// Quotient by `~` (orbits under right multiplication by units).
    pub fn graph(&self) -> &CompressedGraph {
        &self.graph
    }

    pub fn sizes_known(&self) -> bool {
        self.classes.iter().all(|c| c.size.is_some())
    }

    pub fn class_of_label(&self, label: &DyadicLabel) -> Option<usize> {
        self.classes.iter().position(|c| c.labels.contains(label))
    }

    /// The class graph with classes of equal open neighbourhood merged.
    /// Returns the merged graph and the labels carried by each vertex.
    pub fn reduced(&self) -> (CompressedGraph, Vec<Vec<DyadicLabel>>) {
        let (g, groups) = self.graph.collapse_open_twins();
        let labels = groups
            .iter()
            .map(|grp| grp.iter().flat_map(|&c| self.classes[c].labels.iter().copied()).collect())
            .collect();
        (g, labels)
    }
}

/// Closed-form degrees of the reduced class graph, one entry per class
/// `[2^m]` (1 <= m <= s-1), `[2^m a]` with `a` in `{1+i, 1+j, 1+k}`
/// (0 <= m <= s-1) and `[2^m b]` with `b` in `{1+i+j+k, 1+i+j-k}`
/// (0 <= m < s-1). Fractional thresholds are compared exactly.
pub fn expected_degree_table(s: u32) -> Vec<(DyadicLabel, u64)> {
    let s = s as i64;
    let even = s % 2 == 0;
    let mut out = Vec::new();
    let push = |out: &mut Vec<(DyadicLabel, u64)>, m: i64, tag: PiTag, d: i64| {
        assert!(d >= 0, "negative degree at m = {m}");
        out.push((DyadicLabel::new(m as u32, tag), d as u64));
    };
    for m in 1..s {
        let d = if 2 * m < s {
            6 * m - 1
        } else if even {
            6 * m - 2
        } else {
            6 * m - 4
        };
        push(&mut out, m, PiTag::One, d);
    }
    for m in 0..s {
        let d = if 2 * m < s - 1 {
            6 * m + 2
        } else if even || 2 * m == s - 1 {
            6 * m + 1
        } else {
            6 * m - 1
        };
        for tag in [PiTag::OnePlusI, PiTag::OnePlusJ, PiTag::OnePlusK] {
            push(&mut out, m, tag, d);
        }
    }
    for m in 0..s - 1 {
        let d = if 2 * m < s - 1 {
            6 * m + 5
        } else if even {
            6 * m + 4
        } else {
            6 * m + 2
        };
        for tag in [PiTag::OnePlusIJK, PiTag::OnePlusIJMinusK] {
            push(&mut out, m, tag, d);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeMismatch {
    pub label: String,
    pub expected: u64,
    pub measured: Option<u64>,
}

/// Compare [`expected_degree_table`] with degrees in the reduced graph.
pub fn degree_table_check(s: u32) -> Result<(usize, Vec<DegreeMismatch>)> {
    let cg = DyadicClassGraph::build(s)?;
    let (g, labels) = cg.reduced();
    let table = expected_degree_table(s);
    let mut bad = Vec::new();
    for (label, expected) in &table {
        let measured = labels
            .iter()
            .position(|ls| ls.contains(label))
            .map(|v| g.degree(v) as u64);
        if measured != Some(*expected) {
            bad.push(DegreeMismatch {
                label: label.to_string(),
                expected: *expected,
                measured,
            });
        }
    }
    Ok((table.len(), bad))
}

const D: [PiTag; 5] = [
    PiTag::OnePlusI,
    PiTag::OnePlusJ,
    PiTag::OnePlusK,
    PiTag::OnePlusIJK,
    PiTag::OnePlusIJMinusK,
];
const D2: [PiTag; 2] = [PiTag::OnePlusIJK, PiTag::OnePlusIJMinusK];

/// Symbolic neighbour union for a class, before removing the class itself.
/// For `[2^m a]`, `a` in D1, `m = s-1` the term indexed `2^{s-1-m}` is
/// included only when `top_term` is set. For `[2^{s-1} b]`, `b` in D2, the
/// classes `[2^l]` are added only when `with_powers` is set.
fn lemma_union(s: u32, label: DyadicLabel, top_term: bool, with_powers: bool) -> Vec<DyadicLabel> {
    let m = label.level;
    let mut out = Vec::new();
    let all_tags = || PiTag::ALL.into_iter();
    match label.tag {
        PiTag::One => {
            for l in s - m..s {
                out.extend(all_tags().map(|t| DyadicLabel::new(l, t)));
            }
        }
        t if t.is_d1() && m == 0 => {
            out.push(DyadicLabel::new(s - 1, t));
            out.push(DyadicLabel::new(s - 1, PiTag::OnePlusIJK));
        }
        t if t.is_d1() => {
            for l in s - m..s {
                out.extend(all_tags().map(|u| DyadicLabel::new(l, u)));
            }
            if m < s - 1 || top_term {
                out.extend(D2.iter().chain([t].iter()).map(|&u| DyadicLabel::new(s - 1 - m, u)));
            }
        }
        t if m == s - 1 => {
            debug_assert!(t.is_d2());
            for l in 0..s {
                out.extend(D.iter().map(|&u| DyadicLabel::new(l, u)));
                if with_powers && l > 0 {
                    out.push(DyadicLabel::new(l, PiTag::One));
                }
            }
        }
        t if m == 0 => {
            out.extend(D.iter().map(|&u| DyadicLabel::new(s - 1, u)));
            out.extend(D2.iter().filter(|&&u| u != t).map(|&u| DyadicLabel::new(s - 2, u)));
        }
        t => {
            for l in s - m..s {
                out.push(DyadicLabel::new(l, PiTag::One));
            }
            for l in s - 1 - m..s {
                out.extend(D.iter().map(|&u| DyadicLabel::new(l, u)));
            }
            out.extend(D2.iter().filter(|&&u| u != t).map(|&u| DyadicLabel::new(s - 2 - m, u)));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NeighborMismatch {
    pub class: String,
    pub expected: Vec<String>,
    pub measured: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NeighborFormulaReport {
    pub s: u32,
    pub classes_checked: usize,
    pub mismatches: Vec<NeighborMismatch>,
    /// For `[2^{s-1} a]`, `a` in D1: does the formula match with the
    /// `[2^0 b]` term included, and without it.
    pub top_level_with_term: Option<bool>,
    pub top_level_without_term: Option<bool>,
    /// For `[2^{s-1} b]`, `b` in D2: does the measured neighbourhood equal
    /// the stated union once the classes `[2^l]`, `1 <= l <= s-1`, are
    /// added. Those classes are neighbours by the `[2^m]` formula and
    /// symmetry, but the stated union leaves them out, so this class is
    /// listed in `mismatches` whenever `s >= 2`.
    pub top_d2_with_powers: bool,
}

impl NeighborFormulaReport {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Check the symbolic neighbour unions against the `~`-class graph.
pub fn neighbor_formula_check(s: u32) -> Result<NeighborFormulaReport> {
    if s < 2 {
        return Err(Error::InvalidInput("neighbour formulas need s >= 2".into()));
    }
    let cg = DyadicClassGraph::build(s)?;
    let g = cg.graph();
    let to_set = |labels: Vec<DyadicLabel>, own: usize| -> BTreeSet<usize> {
        labels
            .iter()
            .filter(|l| !(l.level == 0 && l.tag == PiTag::One))
            .map(|l| cg.class_of_label(l).expect("label without class"))
            .filter(|&c| c != own)
            .collect()
    };
    let names = |set: &BTreeSet<usize>| set.iter().map(|&c| g.label(c).to_string()).collect();
    let mut mismatches = Vec::new();
    let mut with_term = None;
    let mut without_term = None;
    let mut with_powers = false;
    for (c, class) in cg.classes().iter().enumerate() {
        let label = class.labels[0];
        let measured: BTreeSet<usize> = g.neighbors(c).ones().collect();
        let top_d1 = label.tag.is_d1() && label.level == s - 1;
        if top_d1 {
            let a = to_set(lemma_union(s, label, true, false), c) == measured;
            let b = to_set(lemma_union(s, label, false, false), c) == measured;
            with_term = Some(with_term.unwrap_or(true) && a);
            without_term = Some(without_term.unwrap_or(true) && b);
            if !a && !b {
                mismatches.push(NeighborMismatch {
                    class: g.label(c).to_string(),
                    expected: names(&to_set(lemma_union(s, label, true, false), c)),
                    measured: names(&measured),
                });
            }
            continue;
        }
        if label.tag.is_d2() && label.level == s - 1 {
            with_powers = to_set(lemma_union(s, label, true, true), c) == measured;
        }
        let expected = to_set(lemma_union(s, label, true, false), c);
        if expected != measured {
            mismatches.push(NeighborMismatch {
                class: g.label(c).to_string(),
                expected: names(&expected),
                measured: names(&measured),
            });
        }
    }
    Ok(NeighborFormulaReport {
        s,
        classes_checked: cg.classes().len(),
        mismatches,
        top_level_with_term: with_term,
        top_level_without_term: without_term,
        top_d2_with_powers: with_powers,
    })
}

/// Partition of an element graph of `Z/n[i,j,k]` into orbits `x U`.
pub fn orbit_partition_of_graph(ring: &QuatRing, g: &ZdGraph<Quaternion>) -> Result<TwinPartition> {
    let units = ring.units();
    let size = ring.size() as usize;
    let mut pos = vec![usize::MAX; size];
    for (v, x) in g.vertices().iter().enumerate() {
        pos[ring.index_of(x) as usize] = v;
    }
    let mut done = FixedBitSet::with_capacity(g.len());
    let mut groups = Vec::new();
    for v in 0..g.len() {
        if done.contains(v) {
            continue;
        }
        let x = *g.vertex(v);
        let mut members = Vec::new();
        for u in &units {
            let w = pos[ring.index_of(&(x * *u)) as usize];
            if w == usize::MAX {
                return Err(Error::InvalidInput("graph does not match ring".into()));
            }
            if !done.put(w) {
                members.push(w);
            }
        }
        groups.push((members, g.square_zero(v)));
    }
    Ok(TwinPartition::from_groups(g.len(), groups))
}
