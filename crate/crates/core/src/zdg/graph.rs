use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ring::FiniteRing;

/// Size caps for explicit graph construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphLimits {
    pub max_ring_size: u64,
    pub max_vertices: u64,
}

impl Default for GraphLimits {
    fn default() -> Self {
        GraphLimits {
            max_ring_size: 1_000_000,
            max_vertices: 40_000,
        }
    }
}

/// Zero-divisor graph with bitset rows. `out_adj[a]` holds `b` when
/// `a b = 0`, `in_adj[a]` holds `b` when `b a = 0`; the diagonal is never
/// set, squares are tracked separately in `square_zero`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZdGraph<E> {
    vertices: Vec<E>,
    out_adj: Vec<FixedBitSet>,
    in_adj: Vec<FixedBitSet>,
    square_zero: FixedBitSet,
    directed: bool,
}

/// Directed graph of `ring` on its nonzero zero divisors, in the ring's
/// lexicographic element order.
pub fn build_graph<R: FiniteRing>(ring: &R, limits: &GraphLimits) -> Result<ZdGraph<R::Elem>> {
    let size = ring.size();
    if size > limits.max_ring_size {
        return Err(Error::ResourceLimit {
            what: "ring elements",
            actual: size,
            cap: limits.max_ring_size,
            hint: "use the class-level (compressed) pipeline",
        });
    }
    let vertices: Vec<R::Elem> = (0..size)
        .into_par_iter()
        .map(|i| ring.element(i))
        .filter(|x| !ring.is_zero(x) && !ring.is_unit(x))
        .collect();
    if vertices.len() as u64 > limits.max_vertices {
        return Err(Error::ResourceLimit {
            what: "graph vertices",
            actual: vertices.len() as u64,
            cap: limits.max_vertices,
            hint: "use the class-level (compressed) pipeline",
        });
    }
    let v = vertices.len();
    let out_adj: Vec<FixedBitSet> = (0..v)
        .into_par_iter()
        .map(|a| {
            let mut row = FixedBitSet::with_capacity(v);
            let x = &vertices[a];
            for (b, y) in vertices.iter().enumerate() {
                if a != b && ring.product_is_zero(x, y) {
                    row.insert(b);
                }
            }
            row
        })
        .collect();
    let mut square_zero = FixedBitSet::with_capacity(v);
    for (a, x) in vertices.iter().enumerate() {
        square_zero.set(a, ring.product_is_zero(x, x));
    }
    let in_adj = transpose(&out_adj);
    Ok(ZdGraph {
        vertices,
        out_adj,
        in_adj,
        square_zero,
        directed: true,
    })
}

fn transpose(rows: &[FixedBitSet]) -> Vec<FixedBitSet> {
    let v = rows.len();
    let mut out = vec![FixedBitSet::with_capacity(v); v];
    for (a, row) in rows.iter().enumerate() {
        for b in row.ones() {
            out[b].insert(a);
        }
    }
    out
}

impl ZdGraph<usize> {
    /// Undirected graph on `0..n` from an edge list (used for test graphs).
    pub fn from_undirected_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![FixedBitSet::with_capacity(n); n];
        for &(a, b) in edges {
            assert!(a < n && b < n, "edge ({a},{b}) out of range");
            if a != b {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        ZdGraph {
            vertices: (0..n).collect(),
            out_adj: adj.clone(),
            in_adj: adj,
            square_zero: FixedBitSet::with_capacity(n),
            directed: false,
        }
    }
}

impl<E: Clone> ZdGraph<E> {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[E] {
        &self.vertices
    }

    pub fn vertex(&self, a: usize) -> &E {
        &self.vertices[a]
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// `{b : a b = 0, b != a}`.
    pub fn out_row(&self, a: usize) -> &FixedBitSet {
        &self.out_adj[a]
    }

    /// `{b : b a = 0, b != a}`.
    pub fn in_row(&self, a: usize) -> &FixedBitSet {
        &self.in_adj[a]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.out_adj[a].contains(b)
    }

    pub fn square_zero(&self, a: usize) -> bool {
        self.square_zero.contains(a)
    }

    /// Undirected neighbours of `a`.
    pub fn neighbors(&self, a: usize) -> FixedBitSet {
        let mut row = self.out_adj[a].clone();
        row.union_with(&self.in_adj[a]);
        row
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.out_adj[a].contains(b) || self.in_adj[a].contains(b)
    }

    pub fn degree(&self, a: usize) -> usize {
        self.neighbors(a).count_ones(..)
    }

    /// True when `a b = 0` always implies `b a = 0` among the vertices.
    pub fn is_symmetric(&self) -> bool {
        self.out_adj == self.in_adj
    }

    /// First ordered pair `(a, b)` with `a b = 0` but `b a != 0`.
    pub fn asymmetric_pair(&self) -> Option<(usize, usize)> {
        (0..self.len()).find_map(|a| {
            self.out_adj[a]
                .ones()
                .find(|&b| !self.in_adj[a].contains(b))
                .map(|b| (a, b))
        })
    }

    pub fn directed_edge_count(&self) -> usize {
        self.out_adj.iter().map(|r| r.count_ones(..)).sum()
    }

    pub fn undirected_edge_count(&self) -> usize {
        (0..self.len()).map(|a| self.degree(a)).sum::<usize>() / 2
    }

    /// Undirected view: an edge wherever `a b = 0` or `b a = 0`.
    pub fn undirected(&self) -> ZdGraph<E> {
        let rows: Vec<FixedBitSet> = (0..self.len()).map(|a| self.neighbors(a)).collect();
        ZdGraph {
            vertices: self.vertices.clone(),
            out_adj: rows.clone(),
            in_adj: rows,
            square_zero: self.square_zero.clone(),
            directed: false,
        }
    }

    /// Apply a vertex permutation and report whether every adjacency and
    /// non-adjacency (and every square-zero flag) is preserved.
    pub fn preserves_adjacency(&self, perm: &[usize]) -> bool {
        if perm.len() != self.len() {
            return false;
        }
        let mut seen = FixedBitSet::with_capacity(self.len());
        for &p in perm {
            if p >= self.len() || seen.put(p) {
                return false;
            }
        }
        (0..self.len()).all(|a| {
            self.square_zero(a) == self.square_zero(perm[a])
                && (0..self.len()).all(|b| self.has_edge(a, b) == self.has_edge(perm[a], perm[b]))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{Mat2, MatRing};
    use crate::quaternion::QuatRing;

    #[test]
    fn vertex_counts() {
        let lim = GraphLimits::default();
        assert_eq!(build_graph(&QuatRing::new(2).unwrap(), &lim).unwrap().len(), 7);
        assert_eq!(build_graph(&QuatRing::new(4).unwrap(), &lim).unwrap().len(), 127);
        assert_eq!(build_graph(&MatRing::new(3, 1).unwrap(), &lim).unwrap().len(), 32);
    }

    #[test]
    fn caps_are_enforced() {
        let lim = GraphLimits {
            max_ring_size: 100,
            max_vertices: 10,
        };
        let err = build_graph(&QuatRing::new(4).unwrap(), &lim).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { what: "ring elements", .. }));
        let lim = GraphLimits {
            max_ring_size: 1000,
            max_vertices: 10,
        };
        let err = build_graph(&QuatRing::new(3).unwrap(), &lim).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { what: "graph vertices", .. }));
    }

    #[test]
    fn edges_match_products() {
        let ring = MatRing::new(3, 1).unwrap();
        let g = build_graph(&ring, &GraphLimits::default()).unwrap();
        for a in 0..g.len() {
            assert!(!g.has_edge(a, a));
            for b in 0..g.len() {
                let zero = (*g.vertex(a) * *g.vertex(b)).is_zero();
                assert_eq!(g.has_edge(a, b), a != b && zero);
                assert_eq!(g.in_row(b).contains(a), a != b && zero);
            }
        }
        let u = g.undirected();
        assert!(!u.is_directed());
        assert!(u.is_symmetric());
    }

    #[test]
    fn matrix_graph_is_not_reversible() {
        let g = build_graph(&MatRing::new(3, 1).unwrap(), &GraphLimits::default()).unwrap();
        let (a, b) = g.asymmetric_pair().unwrap();
        assert!((*g.vertex(a) * *g.vertex(b)).is_zero());
        assert!(!(*g.vertex(b) * *g.vertex(a)).is_zero());
        let e11 = Mat2::unit_matrix(1, 1, 3);
        let e12 = Mat2::unit_matrix(1, 2, 3);
        assert!((e12 * e11).is_zero() && !(e11 * e12).is_zero());
    }

    #[test]
    fn quaternion_graphs_are_symmetric() {
        for n in [2, 4] {
            let g = build_graph(&QuatRing::new(n).unwrap(), &GraphLimits::default()).unwrap();
            assert!(g.is_symmetric(), "n = {n}");
        }
    }

    #[test]
    fn parallel_build_is_deterministic() {
        let ring = QuatRing::new(6).unwrap();
        let a = build_graph(&ring, &GraphLimits::default()).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| build_graph(&ring, &GraphLimits::default()).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn permutation_check() {
        let g = ZdGraph::from_undirected_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        assert!(g.preserves_adjacency(&[0, 1, 2, 3]));
        assert!(g.preserves_adjacency(&[3, 2, 1, 0]));
        assert!(!g.preserves_adjacency(&[1, 0, 2, 3]));
        assert!(!g.preserves_adjacency(&[0, 0, 2, 3]));
    }
}
