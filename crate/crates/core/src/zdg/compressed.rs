use std::collections::HashMap;
use std::fmt::Display;

use fixedbitset::FixedBitSet;

use super::graph::ZdGraph;
use super::twins::TwinPartition;

/// Quotient of a zero-divisor graph by a twin partition.
///
/// `relation[c][d]` records that `a b = 0` for every `a` in class `c` and
/// every `b` in class `d`; on the diagonal it records that members of `c`
/// annihilate each other. Undirected adjacency between distinct classes is
/// `relation[c][d] || relation[d][c]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedGraph {
    labels: Vec<String>,
    sizes: Vec<u64>,
    relation: Vec<FixedBitSet>,
}

impl CompressedGraph {
    pub fn from_parts(labels: Vec<String>, sizes: Vec<u64>, relation: Vec<FixedBitSet>) -> Self {
        let k = labels.len();
        assert_eq!(sizes.len(), k);
        assert_eq!(relation.len(), k);
        assert!(sizes.iter().all(|&s| s >= 1), "class sizes must be positive");
        assert!(relation.iter().all(|r| r.len() == k));
        CompressedGraph {
            labels,
            sizes,
            relation,
        }
    }

    /// Undirected loop-free graph with unit class sizes.
    pub fn from_adjacency(labels: Vec<String>, adj: &[FixedBitSet]) -> Self {
        let k = labels.len();
        let relation = adj
            .iter()
            .enumerate()
            .map(|(c, r)| {
                let mut r = r.clone();
                r.grow(k);
                r.set(c, false);
                r
            })
            .collect();
        Self::from_parts(labels, vec![1; k], relation)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, c: usize) -> &str {
        &self.labels[c]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn size(&self, c: usize) -> u64 {
        self.sizes[c]
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn total_size(&self) -> u64 {
        self.sizes.iter().sum()
    }

    pub fn relates(&self, c: usize, d: usize) -> bool {
        self.relation[c].contains(d)
    }

    pub fn self_adjacent(&self, c: usize) -> bool {
        self.relation[c].contains(c)
    }

    pub fn adjacent(&self, c: usize, d: usize) -> bool {
        c != d && (self.relates(c, d) || self.relates(d, c))
    }

    /// Undirected neighbour classes of `c`, excluding `c`.
    pub fn neighbors(&self, c: usize) -> FixedBitSet {
        let mut row = self.relation[c].clone();
        for d in 0..self.len() {
            if self.relates(d, c) {
                row.insert(d);
            }
        }
        row.set(c, false);
        row
    }

    pub fn adjacency(&self) -> Vec<FixedBitSet> {
        (0..self.len()).map(|c| self.neighbors(c)).collect()
    }

    pub fn degree(&self, c: usize) -> usize {
        self.neighbors(c).count_ones(..)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.len()).all(|c| (0..self.len()).all(|d| self.relates(c, d) == self.relates(d, c)))
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Merge classes with equal open neighbourhoods in the loop-free
    /// undirected view. Returns the merged graph and, for each new vertex,
    /// the old classes it absorbed.
    pub fn collapse_open_twins(&self) -> (CompressedGraph, Vec<Vec<usize>>) {
        let adj = self.adjacency();
        let mut index: HashMap<&FixedBitSet, usize> = HashMap::new();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (c, row) in adj.iter().enumerate() {
            let next = groups.len();
            let g = *index.entry(row).or_insert(next);
            if g == next {
                groups.push(Vec::new());
            }
            groups[g].push(c);
        }
        let k = groups.len();
        let labels = groups
            .iter()
            .map(|g| g.iter().map(|&c| self.labels[c].as_str()).collect::<Vec<_>>().join("|"))
            .collect();
        let sizes = groups.iter().map(|g| g.iter().map(|&c| self.sizes[c]).sum()).collect();
        let relation = groups
            .iter()
            .enumerate()
            .map(|(gi, g)| {
                let mut row = FixedBitSet::with_capacity(k);
                for (hi, h) in groups.iter().enumerate() {
                    let on = if gi == hi {
                        g.len() == 1 && self.self_adjacent(g[0])
                    } else {
                        self.adjacent(g[0], h[0])
                    };
                    row.set(hi, on);
                }
                row
            })
            .collect();
        (CompressedGraph::from_parts(labels, sizes, relation), groups)
    }

    /// Add a class for zero and one for the units (of the given count):
    /// the full ring partitioned into classes, for use in a product.
    pub fn with_zero_and_units(&self, unit_count: u64) -> CompressedGraph {
        let k = self.len() + 2;
        let zero = self.len();
        let mut labels = self.labels.clone();
        labels.push("0".into());
        labels.push("U".into());
        let mut sizes = self.sizes.clone();
        sizes.push(1);
        sizes.push(unit_count);
        let mut relation: Vec<FixedBitSet> = self
            .relation
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.grow(k);
                r.insert(zero);
                r
            })
            .collect();
        let mut zrow = FixedBitSet::with_capacity(k);
        zrow.insert_range(..);
        relation.push(zrow);
        let mut urow = FixedBitSet::with_capacity(k);
        urow.insert(zero);
        relation.push(urow);
        CompressedGraph::from_parts(labels, sizes, relation)
    }

    /// Classes of a direct product ring from per-factor full-ring classes
    /// (see [`CompressedGraph::with_zero_and_units`]): tuples of classes
    /// with componentwise relation, dropping the all-zero and all-unit
    /// tuples. Tuples are in lexicographic order of factor class indices.
    pub fn crt_product(parts: &[CompressedGraph]) -> CompressedGraph {
        assert!(!parts.is_empty());
        let mut tuples: Vec<Vec<usize>> = vec![vec![]];
        for p in parts {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    (0..p.len()).map(move |c| {
                        let mut t = t.clone();
                        t.push(c);
                        t
                    })
                })
                .collect();
        }
        tuples.retain(|t| {
            let all_zero = t.iter().zip(parts).all(|(&c, p)| p.label(c) == "0");
            let all_unit = t.iter().zip(parts).all(|(&c, p)| p.label(c) == "U");
            !all_zero && !all_unit
        });
        let k = tuples.len();
        let labels = tuples
            .iter()
            .map(|t| {
                let inner: Vec<&str> = t.iter().zip(parts).map(|(&c, p)| p.label(c)).collect();
                format!("({})", inner.join(", "))
            })
            .collect();
        let sizes = tuples
            .iter()
            .map(|t| t.iter().zip(parts).map(|(&c, p)| p.size(c)).product())
            .collect();
        let relation = tuples
            .iter()
            .map(|t| {
                let mut row = FixedBitSet::with_capacity(k);
                for (ui, u) in tuples.iter().enumerate() {
                    if t.iter().zip(u).zip(parts).all(|((&a, &b), p)| p.relates(a, b)) {
                        row.insert(ui);
                    }
                }
                row
            })
            .collect();
        CompressedGraph::from_parts(labels, sizes, relation)
    }

    /// CSV table `label,size,degree,self_adjacent`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,size,degree,self_adjacent\n");
        for c in 0..self.len() {
            let label = &self.labels[c];
            let quoted = if label.contains(',') || label.contains('"') {
                format!("\"{}\"", label.replace('"', "\"\""))
            } else {
                label.clone()
            };
            out.push_str(&format!(
                "{},{},{},{}\n",
                quoted,
                self.sizes[c],
                self.degree(c),
                self.self_adjacent(c)
            ));
        }
        out
    }
}

/// Quotient of `g` by `t`, labelled by each class's smallest member.
///
/// Panics if the relation is not constant on class pairs, which would mean
/// `t` is not a twin partition of `g`.
pub fn compress<E: Clone + Display>(g: &ZdGraph<E>, t: &TwinPartition) -> CompressedGraph {
    assert_eq!(g.len(), t.vertex_count(), "partition is for a different graph");
    let k = t.len();
    let n = g.len();
    let mut relation = Vec::with_capacity(k);
    for (ci, class) in t.classes().iter().enumerate() {
        let rep = class.members[0];
        let mut row = FixedBitSet::with_capacity(k);
        let mut expected = FixedBitSet::with_capacity(n);
        for (di, other) in t.classes().iter().enumerate() {
            let on = if ci == di {
                class.self_adjacent
            } else {
                g.has_edge(rep, other.members[0])
            };
            if on {
                row.insert(di);
                for &m in &other.members {
                    expected.insert(m);
                }
            }
        }
        for &a in &class.members {
            let mut actual = g.out_row(a).clone();
            if class.self_adjacent {
                actual.insert(a);
            }
            assert!(
                actual == expected,
                "quotient is ill-defined at vertex {a}: partition is not a twin partition"
            );
        }
        relation.push(row);
    }
    let labels = t
        .classes()
        .iter()
        .map(|c| g.vertex(c.members[0]).to_string())
        .collect();
    CompressedGraph::from_parts(labels, t.sizes(), relation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::QuatRing;
    use crate::zdg::graph::{build_graph, GraphLimits};
    use crate::zdg::twins::{structural_twin_partition, twin_partition};

    #[test]
    fn compress_quaternion_mod_4() {
        let g = build_graph(&QuatRing::new(4).unwrap(), &GraphLimits::default()).unwrap();
        let t = twin_partition(&g);
        let c = compress(&g, &t);
        assert_eq!(c.len(), 10);
        assert_eq!(c.total_size(), 127);
        assert!(c.is_symmetric());
        for a in 0..g.len() {
            for b in 0..g.len() {
                if t.class_of(a) != t.class_of(b) {
                    assert_eq!(g.adjacent(a, b), c.adjacent(t.class_of(a), t.class_of(b)));
                }
            }
        }
    }

    #[test]
    fn twin_free_graph_compresses_to_itself() {
        let g = ZdGraph::from_undirected_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        let c = compress(&g, &twin_partition(&g));
        assert_eq!(c.len(), 4);
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(c.adjacent(a, b), g.adjacent(a, b));
            }
        }
    }

    #[test]
    fn structural_partition_compresses() {
        let g = ZdGraph::from_undirected_edges(5, &[(0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]);
        let c = compress(&g, &structural_twin_partition(&g));
        assert_eq!(c.sizes(), &[2, 1, 2]);
        assert!(c.self_adjacent(2) && !c.self_adjacent(0));
    }

    #[test]
    #[should_panic(expected = "ill-defined")]
    fn bad_partition_is_caught() {
        let g = ZdGraph::from_undirected_edges(3, &[(0, 1)]);
        let t = TwinPartition::from_groups(3, vec![(vec![0, 2], false), (vec![1], false)]);
        compress(&g, &t);
    }

    #[test]
    fn open_twin_collapse() {
        // star K_{1,3}: leaves collapse
        let g = ZdGraph::from_undirected_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        let c = compress(&g, &TwinPartition::singletons(4));
        let (m, groups) = c.collapse_open_twins();
        assert_eq!(groups, vec![vec![0], vec![1, 2, 3]]);
        assert_eq!(m.sizes(), &[1, 3]);
        assert!(m.adjacent(0, 1));
        assert_eq!(m.label(1), "1|2|3");
    }

    #[test]
    fn product_of_full_ring_classes_counts_zero_divisors() {
        // Z_6[i,j,k] = Z_2[i,j,k] x Z_3[i,j,k]
        let lim = GraphLimits::default();
        let mut parts = Vec::new();
        for n in [2u64, 3] {
            let ring = QuatRing::new(n).unwrap();
            let g = build_graph(&ring, &lim).unwrap();
            let units = ring.units().len() as u64;
            parts.push(compress(&g, &twin_partition(&g)).with_zero_and_units(units));
        }
        let prod = CompressedGraph::crt_product(&parts);
        let g6 = build_graph(&QuatRing::new(6).unwrap(), &lim).unwrap();
        assert_eq!(prod.total_size(), g6.len() as u64);
        let direct = compress(&g6, &twin_partition(&g6));
        assert!(prod.len() >= direct.len());
    }
}
