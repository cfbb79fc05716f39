use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::graph::ZdGraph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwinClass {
    /// Vertex indices, ascending.
    pub members: Vec<usize>,
    /// Members annihilate each other (for a singleton: its square is zero).
    pub self_adjacent: bool,
}

/// Partition of graph vertices into twin classes, ordered by smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwinPartition {
    classes: Vec<TwinClass>,
    class_of: Vec<usize>,
}

impl TwinPartition {
    /// Build from groups of vertices. Groups are re-sorted so the result
    /// does not depend on the order they were discovered in.
    pub fn from_groups(n: usize, groups: Vec<(Vec<usize>, bool)>) -> Self {
        let mut classes: Vec<TwinClass> = groups
            .into_iter()
            .map(|(mut members, self_adjacent)| {
                members.sort_unstable();
                TwinClass {
                    members,
                    self_adjacent,
                }
            })
            .collect();
        classes.sort_by_key(|c| c.members[0]);
        let mut class_of = vec![usize::MAX; n];
        for (ci, c) in classes.iter().enumerate() {
            for &m in &c.members {
                assert_eq!(class_of[m], usize::MAX, "vertex {m} in two classes");
                class_of[m] = ci;
            }
        }
        assert!(class_of.iter().all(|&c| c != usize::MAX), "partition does not cover");
        TwinPartition { classes, class_of }
    }

    pub fn singletons(n: usize) -> Self {
        Self::from_groups(n, (0..n).map(|a| (vec![a], false)).collect())
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[TwinClass] {
        &self.classes
    }

    pub fn class(&self, c: usize) -> &TwinClass {
        &self.classes[c]
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a]
    }

    pub fn vertex_count(&self) -> usize {
        self.class_of.len()
    }

    pub fn sizes(&self) -> Vec<u64> {
        self.classes.iter().map(|c| c.members.len() as u64).collect()
    }

    pub fn same_class(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    /// Class memberships as a canonical list of sorted member lists.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        self.classes.iter().map(|c| c.members.clone()).collect()
    }
}

fn group_by_key<K: std::hash::Hash + Eq>(keys: Vec<K>) -> Vec<Vec<usize>> {
    let mut index: HashMap<K, usize> = HashMap::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (a, key) in keys.into_iter().enumerate() {
        let next = groups.len();
        let g = *index.entry(key).or_insert(next);
        if g == next {
            groups.push(Vec::new());
        }
        groups[g].push(a);
    }
    groups
}

/// Twin classes: `a ~ b` iff `{x : a x = 0} = {x : b x = 0}` and
/// `{x : x a = 0} = {x : x b = 0}`, with `x` ranging over all vertices
/// (so `a` itself counts when `a^2 = 0`).
pub fn twin_partition<E: Clone>(g: &ZdGraph<E>) -> TwinPartition {
    // rows are compared exactly; hashing only narrows the candidates
    let with_self = |row: &FixedBitSet, a: usize| {
        let mut r = row.clone();
        if g.square_zero(a) {
            r.insert(a);
        }
        r
    };
    let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for a in 0..g.len() {
        let (r, l) = (with_self(g.out_row(a), a), with_self(g.in_row(a), a));
        let mut h = DefaultHasher::new();
        (&r, &l).hash(&mut h);
        let bucket = buckets.entry(h.finish()).or_default();
        let found = bucket.iter().copied().find(|&gi| {
            let b = groups[gi][0];
            with_self(g.out_row(b), b) == r && with_self(g.in_row(b), b) == l
        });
        match found {
            Some(gi) => groups[gi].push(a),
            None => {
                bucket.push(groups.len());
                groups.push(vec![a]);
            }
        }
    }
    let groups = groups
        .into_iter()
        .map(|members| {
            let sq = g.square_zero(members[0]);
            debug_assert!(members.iter().all(|&m| g.square_zero(m) == sq));
            (members, sq)
        })
        .collect();
    TwinPartition::from_groups(g.len(), groups)
}

/// Twins of the loop-free undirected view: vertices with the same open
/// neighbourhood (false twins) or the same closed neighbourhood (true
/// twins). No vertex has both kinds of twin, so this is a partition.
pub fn structural_twin_partition<E: Clone>(g: &ZdGraph<E>) -> TwinPartition {
    let n = g.len();
    let open: Vec<FixedBitSet> = (0..n).map(|a| g.neighbors(a)).collect();
    let closed: Vec<FixedBitSet> = open
        .iter()
        .enumerate()
        .map(|(a, row)| {
            let mut r = row.clone();
            r.insert(a);
            r
        })
        .collect();
    let mut groups = group_by_key(open);
    groups.retain(|m| m.len() > 1);
    let true_groups: Vec<Vec<usize>> = group_by_key(closed).into_iter().filter(|m| m.len() > 1).collect();
    let mut assigned = FixedBitSet::with_capacity(n);
    for m in groups.iter().chain(true_groups.iter()) {
        for &a in m {
            assert!(!assigned.put(a), "vertex {a} has both a true and a false twin");
        }
    }
    let mut out: Vec<(Vec<usize>, bool)> = groups.into_iter().map(|m| (m, false)).collect();
    out.extend(true_groups.into_iter().map(|m| (m, true)));
    out.extend((0..n).filter(|&a| !assigned.contains(a)).map(|a| (vec![a], false)));
    TwinPartition::from_groups(n, out)
}
