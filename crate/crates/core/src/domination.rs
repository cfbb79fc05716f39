//! Minimum dominating sets of undirected zero-divisor graphs.
//!
//! The exact solver works on a twin quotient. Within a class every member
//! has the same neighbours outside the class, so a dominating set only needs
//! to say, per class, whether it takes no member, one member, or all of
//! them. Taking one member dominates the neighbouring classes and, when the
//! members are mutually adjacent, the class itself. Taking all members
//! additionally dominates the class when it is not self-adjacent.

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{enumerate_m1, Mat2, MatRing, QuatMatIso};
use crate::modular::Modulus;
use crate::quaternion::{crt_join_quat, PiTag, QuatRing, Quaternion};
use crate::ring::FiniteRing;
use crate::zdg::{
    build_graph, compress, structural_twin_partition, twin_partition, CompressedGraph,
    GraphLimits, TwinPartition, ZdGraph,
};

/// Largest vertex count accepted by [`brute_force_domination`].
pub const BRUTE_FORCE_MAX_VERTICES: usize = 48;

/// Weighted undirected class graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominationInstance {
    labels: Vec<String>,
    sizes: Vec<u64>,
    adj: Vec<FixedBitSet>,
    self_adjacent: FixedBitSet,
}

impl DominationInstance {
    /// Undirected view of a compressed graph: distinct classes are
    /// adjacent when either relation holds.
    pub fn from_compressed(g: &CompressedGraph) -> Self {
        let k = g.len();
        let mut self_adjacent = FixedBitSet::with_capacity(k);
        for c in 0..k {
            self_adjacent.set(c, g.size(c) >= 2 && g.self_adjacent(c));
        }
        DominationInstance {
            labels: g.labels().to_vec(),
            sizes: g.sizes().to_vec(),
            adj: g.adjacency(),
            self_adjacent,
        }
    }

    /// Quotient of the undirected view of `g` by its open/closed twins.
    /// Also returns the partition so witnesses can be expanded.
    pub fn from_graph<E: Clone + std::fmt::Display>(g: &ZdGraph<E>) -> (Self, TwinPartition) {
        let u = g.undirected();
        let t = structural_twin_partition(&u);
        (Self::from_compressed(&compress(&u, &t)), t)
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn label(&self, c: usize) -> &str {
        &self.labels[c]
    }

    pub fn size(&self, c: usize) -> u64 {
        self.sizes[c]
    }

    pub fn vertex_count(&self) -> u64 {
        self.sizes.iter().sum()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    pub fn self_adjacent(&self, c: usize) -> bool {
        self.self_adjacent.contains(c)
    }

    /// Same instance plus one singleton class adjacent to everything.
    pub fn with_universal_vertex(&self) -> Self {
        let k = self.len() + 1;
        let mut adj: Vec<FixedBitSet> = self
            .adj
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.grow(k);
                r.insert(k - 1);
                r
            })
            .collect();
        let mut last = FixedBitSet::with_capacity(k);
        last.insert_range(..k - 1);
        adj.push(last);
        let mut self_adjacent = self.self_adjacent.clone();
        self_adjacent.grow(k);
        let mut labels = self.labels.clone();
        labels.push("universal".into());
        let mut sizes = self.sizes.clone();
        sizes.push(1);
        DominationInstance {
            labels,
            sizes,
            adj,
            self_adjacent,
        }
    }

    /// Does taking `counts[c]` members of each class dominate every vertex?
    pub fn is_dominating(&self, counts: &[u64]) -> bool {
        (0..self.len()).all(|c| {
            counts[c] == self.sizes[c]
                || (counts[c] >= 1 && self.self_adjacent(c))
                || self.adj[c].ones().any(|d| counts[d] >= 1)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverLimits {
    pub max_classes: usize,
    pub max_nodes: u64,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits {
            max_classes: 512,
            max_nodes: 50_000_000,
        }
    }
}

/// Summary of a completed search. Every node either was expanded or had
/// `cost + lower bound >= best`, so no cheaper selection exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub classes: usize,
    pub actions_after_reduction: usize,
    pub constraints_after_reduction: usize,
    pub root_lower_bound: u64,
    pub initial_upper_bound: u64,
    pub nodes: u64,
    pub pruned: u64,
    pub improvements: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DominationResult {
    pub gamma: u64,
    /// `(class, count)` pairs with nonzero count, ascending by class.
    pub witness: Vec<(usize, u64)>,
    pub certificate: Certificate,
    pub optimal: bool,
}

impl DominationResult {
    pub fn counts(&self, classes: usize) -> Vec<u64> {
        let mut c = vec![0; classes];
        for &(k, n) in &self.witness {
            c[k] = n;
        }
        c
    }
}

/// One way to use a class: take one member, or take all of them.
#[derive(Debug, Clone)]
struct Action {
    class: usize,
    count: u64,
    cover: FixedBitSet,
}

struct Search<'a> {
    actions: &'a [Action],
    /// per constraint, the actions covering it
    coverers: &'a [FixedBitSet],
    constraints: &'a FixedBitSet,
    best: u64,
    best_set: Vec<usize>,
    nodes: u64,
    pruned: u64,
    max_nodes: u64,
    improvements: Vec<u64>,
    aborted: bool,
}

impl Search<'_> {
    fn uncovered(&self, covered: &FixedBitSet) -> FixedBitSet {
        let mut u = self.constraints.clone();
        u.difference_with(covered);
        u
    }

    fn lower_bound(&self, uncovered: &FixedBitSet, banned: &FixedBitSet) -> u64 {
        if uncovered.is_clear() {
            return 0;
        }
        // disjoint packing: constraints no single action covers together
        let mut used = FixedBitSet::with_capacity(self.actions.len());
        let mut packing = 0u64;
        let mut order: Vec<(usize, usize)> = uncovered
            .ones()
            .map(|e| {
                let mut a = self.coverers[e].clone();
                a.difference_with(banned);
                (a.count_ones(..), e)
            })
            .collect();
        order.sort_unstable();
        for &(_, e) in &order {
            let mut a = self.coverers[e].clone();
            a.difference_with(banned);
            if a.is_disjoint(&used) {
                packing += a.ones().map(|i| self.actions[i].count).min().unwrap_or(u64::MAX / 4);
                used.union_with(&a);
            }
        }
        // counting: every action covers at most `best` new constraints
        let total = uncovered.count_ones(..) as u64;
        let max_cover = (0..self.actions.len())
            .filter(|&i| !banned.contains(i))
            .map(|i| self.actions[i].cover.intersection_count(uncovered) as u64)
            .max()
            .unwrap_or(0);
        let counting = if max_cover == 0 {
            u64::MAX / 4
        } else {
            total.div_ceil(max_cover)
        };
        packing.max(counting)
    }

    fn run(&mut self, covered: &FixedBitSet, chosen: &mut Vec<usize>, cost: u64, banned: &FixedBitSet) {
        if self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            self.aborted = true;
            return;
        }
        let uncovered = self.uncovered(covered);
        if uncovered.is_clear() {
            if cost < self.best {
                self.best = cost;
                self.best_set = chosen.clone();
                self.improvements.push(cost);
            }
            return;
        }
        if cost.saturating_add(self.lower_bound(&uncovered, banned)) >= self.best {
            self.pruned += 1;
            return;
        }
        // branch on the constraint with fewest remaining options
        let (e, options) = uncovered
            .ones()
            .map(|e| {
                let mut a = self.coverers[e].clone();
                a.difference_with(banned);
                (e, a)
            })
            .min_by_key(|(e, a)| (a.count_ones(..), *e))
            .unwrap();
        let _ = e;
        let mut opts: Vec<usize> = options.ones().collect();
        opts.sort_by_key(|&i| {
            let gain = self.actions[i].cover.intersection_count(&uncovered) as u64;
            // prefer large gain per unit cost, then cheaper, then index
            (std::cmp::Reverse(gain * 1_000_000 / self.actions[i].count), self.actions[i].count, i)
        });
        let mut banned = banned.clone();
        for i in opts {
            let mut next = covered.clone();
            next.union_with(&self.actions[i].cover);
            chosen.push(i);
            self.run(&next, chosen, cost + self.actions[i].count, &banned);
            chosen.pop();
            banned.insert(i);
        }
    }
}

fn build_actions(inst: &DominationInstance) -> Vec<Action> {
    let k = inst.len();
    let mut out = Vec::new();
    for c in 0..k {
        let mut cover = inst.adj[c].clone();
        let covers_self = inst.sizes[c] == 1 || inst.self_adjacent(c);
        if covers_self {
            cover.insert(c);
        }
        out.push(Action {
            class: c,
            count: 1,
            cover: cover.clone(),
        });
        if !covers_self {
            cover.insert(c);
            out.push(Action {
                class: c,
                count: inst.sizes[c],
                cover,
            });
        }
    }
    out
}

/// Drop actions whose coverage is contained in a no-more-expensive
/// action's coverage, and constraints implied by another constraint.
fn reduce(actions: Vec<Action>, k: usize) -> (Vec<Action>, FixedBitSet) {
    let n = actions.len();
    let mut keep = vec![true; n];
    for a in 0..n {
        for b in 0..n {
            if a == b || !keep[b] {
                continue;
            }
            let (x, y) = (&actions[a], &actions[b]);
            let dominated = x.cover.is_subset(&y.cover)
                && y.count <= x.count
                && (x.cover != y.cover || y.count < x.count || b < a);
            if dominated {
                keep[a] = false;
                break;
            }
        }
    }
    let actions: Vec<Action> = actions
        .into_iter()
        .zip(keep)
        .filter_map(|(a, k)| k.then_some(a))
        .collect();
    let coverers = coverer_sets(&actions, k);
    let mut constraints = FixedBitSet::with_capacity(k);
    constraints.insert_range(..);
    for f in 0..k {
        // f is implied if some other live constraint e has coverers(e) within coverers(f)
        let implied = constraints.ones().any(|e| {
            e != f
                && coverers[e].is_subset(&coverers[f])
                && (coverers[e] != coverers[f] || e < f)
        });
        if implied {
            constraints.set(f, false);
        }
    }
    (actions, constraints)
}

fn coverer_sets(actions: &[Action], k: usize) -> Vec<FixedBitSet> {
    let mut out = vec![FixedBitSet::with_capacity(actions.len()); k];
    for (i, a) in actions.iter().enumerate() {
        for e in a.cover.ones() {
            out[e].insert(i);
        }
    }
    out
}

fn greedy(actions: &[Action], constraints: &FixedBitSet) -> Vec<usize> {
    let mut covered = FixedBitSet::with_capacity(constraints.len());
    let mut chosen = Vec::new();
    loop {
        let mut left = constraints.clone();
        left.difference_with(&covered);
        if left.is_clear() {
            return chosen;
        }
        let best = (0..actions.len())
            .filter(|&i| actions[i].cover.intersection_count(&left) > 0)
            .min_by(|&i, &j| {
                let gi = actions[i].cover.intersection_count(&left) as u128 * actions[j].count as u128;
                let gj = actions[j].cover.intersection_count(&left) as u128 * actions[i].count as u128;
                gj.cmp(&gi).then(i.cmp(&j))
            })
            .expect("every constraint is coverable");
        covered.union_with(&actions[best].cover);
        chosen.push(best);
    }
}

/// Exact minimum dominating set of the full graph behind `inst`.
pub fn exact_domination(inst: &DominationInstance, limits: &SolverLimits) -> Result<DominationResult> {
    let k = inst.len();
    if k > limits.max_classes {
        return Err(Error::ResourceLimit {
            what: "domination classes",
            actual: k as u64,
            cap: limits.max_classes as u64,
            hint: "compress the graph further or raise the class cap",
        });
    }
    if k == 0 {
        return Ok(DominationResult {
            gamma: 0,
            witness: vec![],
            certificate: Certificate {
                classes: 0,
                actions_after_reduction: 0,
                constraints_after_reduction: 0,
                root_lower_bound: 0,
                initial_upper_bound: 0,
                nodes: 0,
                pruned: 0,
                improvements: vec![],
            },
            optimal: true,
        });
    }
    let (actions, constraints) = reduce(build_actions(inst), k);
    let coverers = coverer_sets(&actions, k);
    let start = greedy(&actions, &constraints);
    let ub: u64 = start.iter().map(|&i| actions[i].count).sum();
    let mut search = Search {
        actions: &actions,
        coverers: &coverers,
        constraints: &constraints,
        best: ub,
        best_set: start,
        nodes: 0,
        pruned: 0,
        max_nodes: limits.max_nodes,
        improvements: vec![ub],
        aborted: false,
    };
    let empty = FixedBitSet::with_capacity(k);
    let no_ban = FixedBitSet::with_capacity(actions.len());
    let root_lb = search.lower_bound(&constraints, &no_ban).min(ub);
    search.run(&empty, &mut Vec::new(), 0, &no_ban);
    if search.aborted {
        return Err(Error::ResourceLimit {
            what: "branch-and-bound nodes",
            actual: search.nodes,
            cap: limits.max_nodes,
            hint: "raise the node cap",
        });
    }
    let mut counts = vec![0u64; k];
    for &i in &search.best_set {
        let a = &actions[i];
        counts[a.class] = counts[a.class].max(a.count);
    }
    // two actions of one class would never both be chosen at the optimum
    let gamma: u64 = counts.iter().sum();
    assert_eq!(gamma, search.best, "witness cost disagrees with search");
    assert!(inst.is_dominating(&counts), "solver produced a non-dominating witness");
    let witness = counts
        .iter()
        .enumerate()
        .filter(|(_, &n)| n > 0)
        .map(|(c, &n)| (c, n))
        .collect();
    Ok(DominationResult {
        gamma,
        witness,
        certificate: Certificate {
            classes: k,
            actions_after_reduction: actions.len(),
            constraints_after_reduction: constraints.count_ones(..),
            root_lower_bound: root_lb,
            initial_upper_bound: ub,
            nodes: search.nodes,
            pruned: search.pruned,
            improvements: search.improvements,
        },
        optimal: true,
    })
}

/// Vertices of the full graph realising a witness: the first member of a
/// class taken once, every member of a class taken fully.
pub fn expand_witness(t: &TwinPartition, result: &DominationResult) -> Vec<usize> {
    let mut out = Vec::new();
    for &(c, n) in &result.witness {
        let members = &t.class(c).members;
        out.extend(members.iter().take(n as usize));
    }
    out.sort_unstable();
    out
}

/// Is `set` (vertex indices) dominating in the undirected view of `g`?
pub fn is_dominating_vertex_set<E: Clone>(g: &ZdGraph<E>, set: &[usize]) -> bool {
    let mut covered = FixedBitSet::with_capacity(g.len());
    for &v in set {
        covered.insert(v);
        covered.union_with(&g.neighbors(v));
    }
    covered.count_ones(..) == g.len()
}

/// Exact domination number by iterative deepening over all subsets,
/// without any use of twins. At each step some vertex of the closed
/// neighbourhood of the first undominated vertex must be chosen.
pub fn brute_force_domination<E: Clone>(g: &ZdGraph<E>) -> Result<u64> {
    let n = g.len();
    if n > BRUTE_FORCE_MAX_VERTICES {
        return Err(Error::ResourceLimit {
            what: "brute-force vertices",
            actual: n as u64,
            cap: BRUTE_FORCE_MAX_VERTICES as u64,
            hint: "use the compressed exact solver",
        });
    }
    if n == 0 {
        return Ok(0);
    }
    let closed: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).ones().fold(1u64 << v, |m, b| m | 1 << b))
        .collect();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    fn exists(closed: &[u64], full: u64, covered: u64, left: u32) -> bool {
        if covered == full {
            return true;
        }
        if left == 0 {
            return false;
        }
        let v = (!covered & full).trailing_zeros() as usize;
        let mut cand = closed[v];
        while cand != 0 {
            let w = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            if exists(closed, full, covered | closed[w], left - 1) {
                return true;
            }
        }
        false
    }
    let k = (1..=n as u32)
        .find(|&k| exists(&closed, full, 0, k))
        .expect("the whole vertex set dominates");
    Ok(k as u64)
}

/// `{p^{s-1} a^t a : a in M1}`: `p + 1` matrices dominating the undirected
/// zero-divisor graph of `M_2(Z/p^s)`.
pub fn m1_dominating_set(p: u64, s: u32) -> Result<Vec<Mat2>> {
    if p == 2 {
        return Err(Error::Unsupported("the M1 construction needs an odd prime".into()));
    }
    let scale = Modulus::prime_power(p, s)?.value() / p;
    let mut out: Vec<Mat2> = Vec::new();
    for a in enumerate_m1(p, s)? {
        let m = a.outer(&a).scale(scale);
        if !out.contains(&m) {
            out.push(m);
        }
    }
    if out.len() as u64 != p + 1 {
        return Err(Error::InvalidInput(format!(
            "expected {} distinct matrices, got {}",
            p + 1,
            out.len()
        )));
    }
    Ok(out)
}

/// Dominating set of the undirected zero-divisor graph of `Z/n[i,j,k]`
/// assembled slot by slot through the CRT: `2^{s0-1}(1+i+j+k)` in the
/// 2-part (when `n` is even) and the image of [`m1_dominating_set`] in
/// each odd prime-power slot, zeros elsewhere.
pub fn composite_dominating_set(n: u64) -> Result<Vec<Quaternion>> {
    let m = Modulus::new(n)?;
    let parts = m.factors().to_vec();
    let zeros: Vec<Quaternion> = m.prime_power_parts().into_iter().map(Quaternion::zero).collect();
    let mut out = Vec::new();
    for (slot, &(p, s)) in parts.iter().enumerate() {
        let q = zeros[slot].modulus();
        let local: Vec<Quaternion> = if p == 2 {
            vec![PiTag::OnePlusIJK.quaternion(q).scale(q / 2)]
        } else {
            let iso = QuatMatIso::new(p, s)?;
            m1_dominating_set(p, s)?
                .iter()
                .map(|a| iso.mat_to_quat(a))
                .collect::<Result<_>>()?
        };
        for x in local {
            let mut tuple = zeros.clone();
            tuple[slot] = x;
            out.push(crt_join_quat(&tuple)?);
        }
    }
    Ok(out)
}

/// Every member of `set` is a nonzero zero divisor and every other nonzero
/// zero divisor `x` has some `d` in `set` with `d x = 0` or `x d = 0`.
/// Checked over the whole ring.
pub fn verify_dominating_set<R: FiniteRing>(ring: &R, set: &[R::Elem]) -> bool {
    let is_vertex = |x: &R::Elem| !ring.is_zero(x) && !ring.is_unit(x);
    if !set.iter().all(is_vertex) {
        return false;
    }
    (0..ring.size()).all(|i| {
        let x = ring.element(i);
        !is_vertex(&x)
            || set.contains(&x)
            || set
                .iter()
                .any(|d| ring.product_is_zero(d, &x) || ring.product_is_zero(&x, d))
    })
}

/// Predicted domination number `1 + m + p_1 + ... + p_m` for
/// `n = 2^{s0} p_1^{s_1} ... p_m^{s_m}`.
pub fn composite_formula(n: u64) -> Result<u64> {
    let m = Modulus::new(n)?;
    let odd: Vec<u64> = m.factors().iter().filter(|f| f.0 != 2).map(|f| f.0).collect();
    Ok(1 + odd.len() as u64 + odd.iter().sum::<u64>())
}

/// Domination instance for `Z/n[i,j,k]`. Prime powers are compressed from
/// the element graph; composite moduli use the product of per-factor
/// twin classes (plus zero and unit classes) so the composite ring is never
/// enumerated.
pub fn quaternion_instance(n: u64, limits: &GraphLimits) -> Result<DominationInstance> {
    let m = Modulus::new(n)?;
    if m.factors().len() == 1 {
        let g = build_graph(&QuatRing::new(n)?, limits)?;
        return Ok(DominationInstance::from_graph(&g).0);
    }
    Ok(DominationInstance::from_compressed(&quaternion_product_classes(n, limits)?))
}

/// Twin classes of the directed zero-divisor graph of `Z/n[i,j,k]` as a
/// product over the prime-power factors of `n`.
pub fn quaternion_product_classes(n: u64, limits: &GraphLimits) -> Result<CompressedGraph> {
    let m = Modulus::new(n)?;
    let mut parts = Vec::new();
    for q in m.prime_power_parts() {
        let ring = QuatRing::new(q)?;
        let g = build_graph(&ring, limits)?;
        let units = ring.size() - g.len() as u64 - 1;
        parts.push(compress(&g, &twin_partition(&g)).with_zero_and_units(units));
    }
    Ok(CompressedGraph::crt_product(&parts))
}

/// Domination instance for `M_2(Z/p^s)` from its element graph.
pub fn matrix_instance(p: u64, s: u32, limits: &GraphLimits) -> Result<DominationInstance> {
    let g = build_graph(&MatRing::new(p, s)?, limits)?;
    Ok(DominationInstance::from_graph(&g).0)
}

/// Random graph on `base` vertices with edge probability `density`, then
/// `twins` extra vertices each copying a random vertex's neighbourhood,
/// joined to it (true twin) or not (false twin) at random.
pub fn random_graph_with_twins(seed: u64, base: usize, twins: usize, density: f64) -> ZdGraph<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = base + twins;
    let mut adj = vec![vec![false; n]; n];
    for a in 0..base {
        for b in a + 1..base {
            if rng.gen_bool(density) {
                adj[a][b] = true;
                adj[b][a] = true;
            }
        }
    }
    for v in base..n {
        let src = rng.gen_range(0..v);
        for w in 0..v {
            if w != src && adj[src][w] {
                adj[v][w] = true;
                adj[w][v] = true;
            }
        }
        if rng.gen_bool(0.5) {
            adj[v][src] = true;
            adj[src][v] = true;
        }
    }
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| adj[a][b])
        .collect();
    ZdGraph::from_undirected_edges(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> GraphLimits {
        GraphLimits::default()
    }

    #[test]
    fn m1_set_examples() {
        let d = m1_dominating_set(3, 1).unwrap();
        let want = [[1, 0, 0, 0], [1, 1, 1, 1], [1, 2, 2, 1], [0, 0, 0, 1]];
        assert_eq!(d.iter().map(|m| m.entries()).collect::<Vec<_>>(), want);
        assert_eq!(m1_dominating_set(3, 2).unwrap().len(), 4);
        assert_eq!(m1_dominating_set(5, 1).unwrap().len(), 6);
        assert!(m1_dominating_set(2, 2).is_err());
        for (p, s) in [(3, 1), (3, 2), (5, 1)] {
            let ring = MatRing::new(p, s).unwrap();
            assert!(verify_dominating_set(&ring, &m1_dominating_set(p, s).unwrap()));
        }
    }

    #[test]
    fn composite_set_sizes() {
        assert_eq!(composite_dominating_set(8).unwrap(), vec![Quaternion::new([4, 4, 4, 4], 8).unwrap()]);
        assert_eq!(composite_dominating_set(6).unwrap().len(), 5);
        assert_eq!(composite_dominating_set(10).unwrap().len(), 7);
        assert_eq!(composite_dominating_set(15).unwrap().len(), 10);
        for n in [2, 4, 6, 10] {
            let ring = QuatRing::new(n).unwrap();
            assert!(verify_dominating_set(&ring, &composite_dominating_set(n).unwrap()), "n = {n}");
        }
        assert_eq!(composite_formula(12).unwrap(), 5);
        assert_eq!(composite_formula(8).unwrap(), 1);
    }

    #[test]
    fn verify_rejects_bad_sets() {
        let ring = MatRing::new(3, 1).unwrap();
        let d = m1_dominating_set(3, 1).unwrap();
        assert!(!verify_dominating_set(&ring, &d[..3]));
        assert!(!verify_dominating_set(&ring, &[Mat2::identity(3)]));
    }

    #[test]
    fn small_exact_values() {
        let s = SolverLimits::default();
        let r = exact_domination(&matrix_instance(3, 1, &lim()).unwrap(), &s).unwrap();
        assert_eq!(r.gamma, 4);
        assert!(r.optimal);
        let r = exact_domination(&quaternion_instance(4, &lim()).unwrap(), &s).unwrap();
        assert_eq!(r.gamma, 1);
        let r = exact_domination(&quaternion_instance(6, &lim()).unwrap(), &s).unwrap();
        assert_eq!(r.gamma, 5);
    }

    #[test]
    fn brute_force_examples() {
        let g = build_graph(&MatRing::new(3, 1).unwrap(), &lim()).unwrap();
        assert_eq!(brute_force_domination(&g.undirected()).unwrap(), 4);
        let g = build_graph(&QuatRing::new(2).unwrap(), &lim()).unwrap();
        assert_eq!(brute_force_domination(&g).unwrap(), 1);
        let k5: Vec<(usize, usize)> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
        assert_eq!(brute_force_domination(&ZdGraph::from_undirected_edges(5, &k5)).unwrap(), 1);
        let empty = ZdGraph::from_undirected_edges(4, &[]);
        assert_eq!(brute_force_domination(&empty).unwrap(), 4);
        let big = ZdGraph::from_undirected_edges(49, &[]);
        assert!(brute_force_domination(&big).is_err());
    }

    #[test]
    fn witness_expands_to_dominating_set() {
        let g = build_graph(&MatRing::new(3, 1).unwrap(), &lim()).unwrap();
        let (inst, t) = DominationInstance::from_graph(&g);
        let r = exact_domination(&inst, &SolverLimits::default()).unwrap();
        let set = expand_witness(&t, &r);
        assert_eq!(set.len() as u64, r.gamma);
        assert!(is_dominating_vertex_set(&g, &set));
    }

    #[test]
    fn universal_vertex_gives_one() {
        let g = random_graph_with_twins(7, 10, 5, 0.3);
        let (inst, _) = DominationInstance::from_graph(&g);
        let r = exact_domination(&inst.with_universal_vertex(), &SolverLimits::default()).unwrap();
        assert_eq!(r.gamma, 1);
    }

    #[test]
    fn random_graphs_match_oracle() {
        for seed in 0..20 {
            let g = random_graph_with_twins(seed, 12, 10, 0.25);
            let (inst, t) = DominationInstance::from_graph(&g);
            let r = exact_domination(&inst, &SolverLimits::default()).unwrap();
            assert_eq!(r.gamma, brute_force_domination(&g).unwrap(), "seed {seed}");
            assert!(is_dominating_vertex_set(&g, &expand_witness(&t, &r)));
        }
    }

    #[test]
    fn class_cap() {
        let inst = matrix_instance(3, 1, &lim()).unwrap();
        let tight = SolverLimits {
            max_classes: 2,
            max_nodes: 10,
        };
        assert!(matches!(
            exact_domination(&inst, &tight),
            Err(Error::ResourceLimit { .. })
        ));
    }
}
