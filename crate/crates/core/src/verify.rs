//! End-to-end checks with expected values from a fixture file.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::automorphism::{
    check_pairing, check_stabilization, find_automorphisms, is_group, LabeledCompressedGraph,
};
use crate::domination::{
    brute_force_domination, composite_dominating_set, exact_domination, matrix_instance,
    m1_dominating_set, quaternion_instance, random_graph_with_twins, verify_dominating_set,
    DominationInstance, SolverLimits,
};
use crate::error::{Error, Result};
use crate::matrix::{
    canonical_factorize, enumerate_m1, factorization_multiplicity, orthogonal_partner, smith_type, Mat2,
    MatRing, QuatMatIso,
};
use crate::modular::{factorize, is_prime};
use crate::quaternion::{dyadic_shapes, factorize_2adic, PiTag, QuatRing, Quaternion};
use crate::zdg::{
    build_graph, degree_table_check, neighbor_formula_check, orbit_partition_of_graph, twin_partition,
    DyadicClassGraph, GraphLimits, TwinPartition,
};

const DEFAULT_FIXTURES: &str = include_str!("../fixtures/expected.json");

/// Run settings. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub max_s: u32,
    /// Odd primes used for the matrix-ring checks.
    pub primes: Vec<u64>,
    pub max_ring_size: u64,
    pub max_vertices: u64,
    pub max_classes: usize,
    pub max_nodes: u64,
    /// 0 means one thread per core.
    pub threads: usize,
    pub out_dir: Option<String>,
    pub export: Vec<String>,
    pub seed: u64,
    pub random_graphs: usize,
    pub iso_samples: u64,
    /// Also measure the domination number of `Z_15[i,j,k]` (slow).
    pub odd_composite: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_s: 5,
            primes: vec![3, 5],
            max_ring_size: 1_000_000,
            max_vertices: 40_000,
            max_classes: 512,
            max_nodes: 50_000_000,
            threads: 0,
            out_dir: None,
            export: vec![],
            seed: 2024,
            random_graphs: 50,
            iso_samples: 100_000,
            odd_composite: false,
        }
    }
}

pub const EXPORT_FORMATS: [&str; 3] = ["dot", "json", "csv"];

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.max_s == 0 {
            return bad("max_s must be positive".into());
        }
        if self.max_ring_size == 0 || self.max_vertices == 0 || self.max_classes == 0 || self.max_nodes == 0 {
            return bad("caps must be positive".into());
        }
        if let Some(p) = self.primes.iter().find(|&&p| p == 2 || !is_prime(p)) {
            return bad(format!("primes must be odd primes, got {p}"));
        }
        if let Some(f) = self.export.iter().find(|f| !EXPORT_FORMATS.contains(&f.as_str())) {
            return bad(format!("unknown export format {f:?}"));
        }
        Ok(())
    }

    pub fn graph_limits(&self) -> GraphLimits {
        GraphLimits {
            max_ring_size: self.max_ring_size,
            max_vertices: self.max_vertices,
        }
    }

    pub fn solver_limits(&self) -> SolverLimits {
        SolverLimits {
            max_classes: self.max_classes,
            max_nodes: self.max_nodes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fixture {
    pub expected: Value,
    /// Where the expected value comes from.
    pub basis: String,
}

/// Expected values keyed by check id.
#[derive(Debug, Clone, PartialEq)]
pub struct Fixtures(BTreeMap<String, Fixture>);

impl Fixtures {
    pub fn builtin() -> Self {
        Self::from_json_str(DEFAULT_FIXTURES).expect("built-in fixtures parse")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let map = serde_json::from_str(text).map_err(|e| Error::Config(format!("fixtures: {e}")))?;
        Ok(Fixtures(map))
    }

    pub fn get(&self, id: &str) -> Option<&Fixture> {
        self.0.get(id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub claim: String,
    pub status: Status,
    pub measured: Value,
    pub expected: Value,
    pub basis: String,
    pub elapsed_ms: u64,
    pub note: Option<String>,
}

/// A measurement reported alongside the checks without a pass/fail verdict.
#[derive(Debug, Clone, Serialize)]
pub struct Observation {
    pub id: String,
    pub description: String,
    pub value: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
    pub observations: Vec<Observation>,
    pub resource_limited: bool,
}

impl VerifyReport {
    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn all_pass(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    /// 0 all pass, 1 failures, 3 failures caused only by resource caps.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else if self.resource_limited
            && self
                .checks
                .iter()
                .filter(|c| c.status == Status::Fail)
                .all(|c| c.note.as_deref().is_some_and(|n| n.starts_with("resource limit")))
        {
            3
        } else {
            1
        }
    }

    pub fn lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                let tag = match c.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Skipped => "SKIP",
                };
                format!("{tag} {:<26} {}  measured={}", c.id, c.claim, c.measured)
            })
            .collect()
    }
}

/// Every key of `expected` is present in `measured` with an equal value.
pub fn matches_expected(measured: &Value, expected: &Value) -> bool {
    match (measured, expected) {
        (Value::Object(m), Value::Object(e)) => e.iter().all(|(k, v)| m.get(k).is_some_and(|mv| matches_expected(mv, v))),
        _ => measured == expected,
    }
}

type CheckFn<'a> = Box<dyn Fn() -> Result<Value> + 'a>;

struct Check<'a> {
    id: String,
    claim: String,
    /// skipped when this exceeds `max_s`
    s: u32,
    run: CheckFn<'a>,
}

fn check<'a>(id: impl Into<String>, claim: impl Into<String>, s: u32, run: impl Fn() -> Result<Value> + 'a) -> Check<'a> {
    Check {
        id: id.into(),
        claim: claim.into(),
        s,
        run: Box::new(run),
    }
}

fn zero_divisor_count(p: u64, s: u32) -> u64 {
    let total = p.pow(4 * s);
    total - MatRing::new(p, s).map(|r| r.unit_count()).unwrap_or(total) - 1
}

fn max_exponent(n: u64) -> u32 {
    factorize(n).map(|f| f.iter().map(|x| x.1).max().unwrap_or(1)).unwrap_or(1)
}

fn partner_failures(q: u64) -> Result<Value> {
    let f = factorize(q)?;
    let (p, s) = f[0];
    let all = enumerate_m1(p, s)?;
    let mut failures = 0;
    for a in &all {
        let partners: Vec<_> = all.iter().filter(|b| a.dot(b) == 0).collect();
        if partners.len() != 1 || *partners[0] != orthogonal_partner(a) {
            failures += 1;
        }
    }
    Ok(json!({ "vectors": all.len(), "failures": failures }))
}

fn matrix_round_trip(p: u64, s: u32) -> Result<Value> {
    let ring = MatRing::new(p, s)?;
    let mut zd = 0;
    let mut failures = 0;
    for a in ring.elements().filter(|a| !a.is_zero() && !a.is_unit()) {
        zd += 1;
        let ok = canonical_factorize(&a).is_ok_and(|f| {
            let t = f.smith_type();
            f.reconstruct() == a
                && smith_type(&a).is_ok_and(|st| st == t)
                && t.j.is_none_or(|j| j >= 1 && t.i <= j)
        });
        if !ok {
            failures += 1;
        }
    }
    Ok(json!({ "zero_divisors": zd, "failures": failures }))
}

/// Round trip of every shape, and `(l, pi)` multiplicities: one shape
/// per element except `2^{s-1}(1+i+j+k) = 2^{s-1}(1+i+j-k)`.
fn dyadic_check(s: u32) -> Result<Value> {
    let ring = QuatRing::new(1 << s)?;
    let mut elements = 0;
    let mut round_trip = 0;
    let mut unexpected = 0;
    let mut paired = 0;
    for x in ring.elements().filter(|x| !x.is_zero() && !x.is_unit()) {
        elements += 1;
        let shapes = dyadic_shapes(&x)?;
        if shapes.iter().any(|f| f.reconstruct() != x) || factorize_2adic(&x)? != shapes[0] {
            round_trip += 1;
        }
        let top_pair = shapes.len() == 2
            && shapes.iter().all(|f| f.l == s - 1 && f.pi.is_d2())
            && shapes[0].pi != shapes[1].pi;
        if top_pair {
            paired += 1;
        } else if shapes.len() != 1 {
            unexpected += 1;
        }
    }
    Ok(json!({
        "elements": elements,
        "round_trip_failures": round_trip,
        "unexpected_multiplicity": unexpected,
        "top_d2_pairs": paired,
    }))
}

/// The `~`-partition with the classes of `2^{(s-1)/2}(1+i)`, `(1+j)`,
/// `(1+k)` merged when `s` is odd.
fn expected_twin_partition(s: u32, orbits: &TwinPartition, vertices: &[Quaternion]) -> TwinPartition {
    if s % 2 == 0 {
        return orbits.clone();
    }
    let n = 1u64 << s;
    let h = (s - 1) / 2;
    let targets: Vec<Quaternion> = [PiTag::OnePlusI, PiTag::OnePlusJ, PiTag::OnePlusK]
        .iter()
        .map(|t| t.quaternion(n).scale(1 << h))
        .collect();
    let merged: BTreeSet<usize> = targets
        .iter()
        .map(|x| orbits.class_of(vertices.iter().position(|v| v == x).expect("vertex present")))
        .collect();
    let mut groups: Vec<(Vec<usize>, bool)> = Vec::new();
    let mut big = Vec::new();
    for (c, class) in orbits.classes().iter().enumerate() {
        if merged.contains(&c) {
            big.extend(class.members.iter().copied());
        } else {
            groups.push((class.members.clone(), class.self_adjacent));
        }
    }
    groups.push((big, false));
    TwinPartition::from_groups(vertices.len(), groups)
}

fn twins_check(s: u32, limits: &GraphLimits) -> Result<Value> {
    let ring = QuatRing::new(1 << s)?;
    let g = build_graph(&ring, limits)?;
    let t = twin_partition(&g);
    let orbits = orbit_partition_of_graph(&ring, &g)?;
    let expected = expected_twin_partition(s, &orbits, g.vertices());
    Ok(json!({
        "classes": t.len(),
        "orbit_classes": orbits.len(),
        "twins_equal_orbits": t.blocks() == orbits.blocks(),
        "equals_expected_partition": t.blocks() == expected.blocks(),
    }))
}

fn iso_exhaustive(p: u64) -> Result<Value> {
    let iso = QuatMatIso::new(p, 1)?;
    let ring = QuatRing::new(p)?;
    let all: Vec<Quaternion> = ring.elements().collect();
    let images: Vec<Mat2> = all.iter().map(|x| iso.quat_to_mat(x)).collect::<Result<_>>()?;
    let mut failures = 0;
    for (x, fx) in all.iter().zip(&images) {
        if iso.mat_to_quat(fx)? != *x {
            failures += 1;
        }
        for (y, fy) in all.iter().zip(&images) {
            if iso.quat_to_mat(&(*x * *y))? != *fx * *fy || iso.quat_to_mat(&(*x + *y))? != *fx + *fy {
                failures += 1;
            }
        }
    }
    if iso.quat_to_mat(&Quaternion::one(p))? != Mat2::identity(p) {
        failures += 1;
    }
    let distinct: BTreeSet<[u64; 4]> = images.iter().map(|m| m.entries()).collect();
    Ok(json!({ "failures": failures, "image_size": distinct.len() }))
}

fn iso_sampled(p: u64, s: u32, samples: u64, seed: u64) -> Result<Value> {
    let iso = QuatMatIso::new(p, s)?;
    let ring = QuatRing::new(p.pow(s))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..samples {
        let x = ring.element(rng.gen_range(0..ring.size()));
        let y = ring.element(rng.gen_range(0..ring.size()));
        let (fx, fy) = (iso.quat_to_mat(&x)?, iso.quat_to_mat(&y)?);
        if iso.quat_to_mat(&(x * y))? != fx * fy || iso.quat_to_mat(&(x + y))? != fx + fy {
            failures += 1;
        }
    }
    Ok(json!({ "samples": samples, "failures": failures }))
}

fn oracle_random(cfg: &RunConfig) -> Result<Value> {
    let mut disagreements = 0;
    for k in 0..cfg.random_graphs {
        let g = random_graph_with_twins(
            cfg.seed.wrapping_add(k as u64),
            10 + k % 10,
            5 + k % 7,
            0.2 + 0.05 * (k % 5) as f64,
        );
        let (inst, _) = DominationInstance::from_graph(&g);
        let exact = exact_domination(&inst, &cfg.solver_limits())?.gamma;
        if exact != brute_force_domination(&g)? {
            disagreements += 1;
        }
    }
    Ok(json!({ "graphs": cfg.random_graphs, "disagreements": disagreements }))
}

fn matrix_cases(cfg: &RunConfig) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for &p in &cfg.primes {
        for s in 1..=cfg.max_s {
            let size = p.checked_pow(4 * s);
            if size.is_none_or(|n| n > cfg.max_ring_size) || zero_divisor_count(p, s) > cfg.max_vertices {
                break;
            }
            out.push((p, s));
        }
    }
    // the order criteria are listed in
    out.sort_by_key(|&(p, s)| (s, p));
    out
}

fn checks(cfg: &RunConfig) -> Vec<Check<'_>> {
    let lim = cfg.graph_limits();
    let sol = cfg.solver_limits();
    let mut out = Vec::new();
    for (p, s) in matrix_cases(cfg) {
        out.push(check(
            format!("domination.matrix.{p}^{s}"),
            format!("domination number of M_2(Z_{}) is p+1", p.pow(s)),
            s,
            move || Ok(json!({ "gamma": exact_domination(&matrix_instance(p, s, &lim)?, &sol)?.gamma })),
        ));
    }
    let quat_ns = [2u64, 4, 8, 6, 12, 10];
    for n in quat_ns {
        out.push(check(
            format!("domination.quaternion.{n}"),
            format!("domination number of Z_{n}[i,j,k] is 1+m+p_1+...+p_m"),
            max_exponent(n),
            move || Ok(json!({ "gamma": exact_domination(&quaternion_instance(n, &lim)?, &sol)?.gamma })),
        ));
    }
    for (p, s) in matrix_cases(cfg) {
        out.push(check(
            format!("construct.matrix.{p}^{s}"),
            "the matrices p^{s-1} a^t a, a in M1, dominate",
            s,
            move || {
                let d = m1_dominating_set(p, s)?;
                Ok(json!({ "size": d.len(), "dominating": verify_dominating_set(&MatRing::new(p, s)?, &d) }))
            },
        ));
    }
    for n in quat_ns {
        out.push(check(
            format!("construct.quaternion.{n}"),
            "CRT-assembled set dominates with the predicted size",
            max_exponent(n),
            move || {
                let d = composite_dominating_set(n)?;
                Ok(json!({ "size": d.len(), "dominating": verify_dominating_set(&QuatRing::new(n)?, &d) }))
            },
        ));
    }
    for s in 2..=4 {
        out.push(check(
            format!("aut.order.{s}"),
            "automorphism group order of the compressed graph",
            s,
            move || Ok(json!({ "order": find_automorphisms(&LabeledCompressedGraph::build(s)?)?.len() })),
        ));
        out.push(check(
            format!("aut.lemmas.{s}"),
            "automorphisms stabilise P_m and Q_n and pair P_m with P_{s-1-m}",
            s,
            move || {
                let lg = LabeledCompressedGraph::build(s)?;
                let autos = find_automorphisms(&lg)?;
                let stab = autos.iter().filter(|f| !check_stabilization(f, &lg).pass).count();
                let pair = autos.iter().filter(|f| !check_pairing(f, &lg).pass).count();
                Ok(json!({
                    "automorphisms": autos.len(),
                    "stabilization_failures": stab,
                    "pairing_failures": pair,
                    "group": is_group(&autos),
                }))
            },
        ));
    }
    for s in 2..=5 {
        out.push(check(
            format!("degree.{s}"),
            "compressed degrees follow the closed-form table",
            s,
            move || {
                let (n, bad) = degree_table_check(s)?;
                Ok(json!({ "entries": n, "mismatches": bad.len(), "details": bad }))
            },
        ));
    }
    for q in [3u64, 9, 5, 4, 8] {
        out.push(check(
            format!("partner.{q}"),
            "every a in M1 has exactly one b in M1 with a b^t = 0",
            max_exponent(q),
            move || partner_failures(q),
        ));
    }
    out.push(check(
        "factor.matrix.9",
        "every zero divisor of M_2(Z_9) is u1 p^i a^t b + u2 p^j E_mn",
        2,
        || matrix_round_trip(3, 2),
    ));
    for s in 1..=3 {
        out.push(check(
            format!("factor.dyadic.{s}"),
            "every zero divisor of Z_{2^s}[i,j,k] is 2^l pi a0 with unique (l, pi)",
            s,
            move || dyadic_check(s),
        ));
    }
    for s in 2..=4 {
        out.push(check(
            format!("twins.{s}"),
            "twin classes are the ~-classes (s odd: with the middle D1 triple merged)",
            s,
            move || twins_check(s, &lim),
        ));
    }
    out.push(check(
        "oracle.matrix.3^1",
        "compressed exact solver agrees with brute force",
        1,
        move || {
            let g = build_graph(&MatRing::new(3, 1)?, &lim)?;
            let (inst, _) = DominationInstance::from_graph(&g);
            let a = exact_domination(&inst, &sol)?.gamma;
            let b = brute_force_domination(&g.undirected())?;
            Ok(json!({ "exact": a, "brute_force": b, "agree": a == b }))
        },
    ));
    out.push(check(
        "oracle.quaternion.2",
        "compressed exact solver agrees with brute force",
        1,
        move || {
            let g = build_graph(&QuatRing::new(2)?, &lim)?;
            let (inst, _) = DominationInstance::from_graph(&g);
            let a = exact_domination(&inst, &sol)?.gamma;
            let b = brute_force_domination(&g.undirected())?;
            Ok(json!({ "exact": a, "brute_force": b, "agree": a == b }))
        },
    ));
    out.push(check(
        "oracle.random",
        "compressed exact solver agrees with brute force on random twin-rich graphs",
        1,
        move || oracle_random(cfg),
    ));
    out.push(check("iso.3", "Z_3[i,j,k] is isomorphic to M_2(Z_3)", 1, || iso_exhaustive(3)));
    out.push(check("iso.9", "Z_9[i,j,k] is isomorphic to M_2(Z_9)", 2, move || {
        iso_sampled(3, 2, cfg.iso_samples, cfg.seed)
    }));
    out.push(check("iso.25", "Z_25[i,j,k] is isomorphic to M_2(Z_25)", 2, move || {
        iso_sampled(5, 2, cfg.iso_samples, cfg.seed)
    }));
    for s in 1..=2 {
        out.push(check(
            format!("reversible.{s}"),
            "Z_{2^s}[i,j,k] is reversible",
            s,
            move || {
                let g = build_graph(&QuatRing::new(1 << s)?, &lim)?;
                let pairs: usize = (0..g.len())
                    .map(|a| g.out_row(a).ones().filter(|&b| !g.has_edge(b, a)).count())
                    .sum();
                Ok(json!({ "asymmetric_pairs": pairs }))
            },
        ));
    }
    out.push(check("reversible.matrix", "M_2(Z_3) is not reversible", 1, || {
        let e11 = Mat2::unit_matrix(1, 1, 3);
        let e12 = Mat2::unit_matrix(1, 2, 3);
        let g = build_graph(&MatRing::new(3, 1)?, &GraphLimits::default())?;
        Ok(json!({
            "e12_e11_zero": (e12 * e11).is_zero(),
            "e11_e12_zero": (e11 * e12).is_zero(),
            "graph_has_asymmetric_pair": g.asymmetric_pair().is_some(),
        }))
    }));
    out
}

fn observations(cfg: &RunConfig) -> Result<Vec<Observation>> {
    let mut out = Vec::new();
    for s in 2..=cfg.max_s.clamp(2, 6) {
        let r = neighbor_formula_check(s)?;
        out.push(Observation {
            id: format!("neighbors.{s}"),
            description: "class neighbourhoods against the symbolic unions".into(),
            value: serde_json::to_value(&r).expect("serialisable"),
        });
    }
    if cfg.max_s >= 3 {
        let (g, _) = DyadicClassGraph::build(3)?.graph().collapse_open_twins();
        out.push(Observation {
            id: "twins.3.class_level".into(),
            description: "vertices after merging open twins in the loop-free class graph".into(),
            value: json!({ "vertices": g.len() }),
        });
    }
    if cfg.max_s >= 2 {
        out.push(Observation {
            id: "factor.matrix.9.multiplicity".into(),
            description: "preimages of each zero divisor over canonical factorisation parameters".into(),
            value: serde_json::to_value(factorization_multiplicity(3, 2)?).expect("serialisable"),
        });
    }
    if cfg.odd_composite {
        let mut limits = cfg.solver_limits();
        limits.max_classes = limits.max_classes.max(1024);
        let inst = quaternion_instance(15, &cfg.graph_limits())?;
        let r = exact_domination(&inst, &limits)?;
        out.push(Observation {
            id: "domination.quaternion.15".into(),
            description: "odd composite modulus, measured".into(),
            value: json!({
                "gamma": r.gamma,
                "classes": inst.len(),
                "with_leading_one": 1 + 2 + 3 + 5,
                "without_leading_one": 2 + 3 + 5,
                "construction_size": composite_dominating_set(15)?.len(),
            }),
        });
    }
    Ok(out)
}

/// Run every check allowed by `cfg`. `progress` is called with each
/// result as it completes.
pub fn run_verify(cfg: &RunConfig, fixtures: &Fixtures, mut progress: impl FnMut(&CheckResult)) -> Result<VerifyReport> {
    cfg.validate()?;
    let mut results = Vec::new();
    let mut resource_limited = false;
    let mut seen = BTreeSet::new();
    for c in checks(cfg) {
        assert!(seen.insert(c.id.clone()), "duplicate check id {}", c.id);
        let fixture = fixtures.get(&c.id);
        let (expected, basis) = match fixture {
            Some(f) => (f.expected.clone(), f.basis.clone()),
            None => (Value::Null, String::new()),
        };
        let start = Instant::now();
        let (status, measured, note) = if c.s > cfg.max_s {
            (Status::Skipped, Value::Null, Some(format!("needs s = {} > max_s", c.s)))
        } else if fixture.is_none() {
            (Status::Fail, Value::Null, Some("no expected value in fixtures".into()))
        } else {
            match (c.run)() {
                Ok(v) => {
                    let st = if matches_expected(&v, &expected) { Status::Pass } else { Status::Fail };
                    (st, v, None)
                }
                Err(e @ Error::ResourceLimit { .. }) => {
                    resource_limited = true;
                    (Status::Fail, Value::Null, Some(format!("resource limit: {e}")))
                }
                Err(e) => (Status::Fail, Value::Null, Some(e.to_string())),
            }
        };
        let r = CheckResult {
            id: c.id,
            claim: c.claim,
            status,
            measured,
            expected,
            basis,
            elapsed_ms: start.elapsed().as_millis() as u64,
            note,
        };
        progress(&r);
        results.push(r);
    }
    Ok(VerifyReport {
        checks: results,
        observations: observations(cfg)?,
        resource_limited,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing() {
        let cfg = RunConfig::from_toml_str("max_s = 2\nprimes = [3]\nexport = [\"dot\"]").unwrap();
        assert_eq!(cfg.max_s, 2);
        assert_eq!(cfg.primes, vec![3]);
        assert!(RunConfig::from_toml_str("max_s = 2\nbogus = 1").is_err());
        assert!(RunConfig::from_toml_str("max_s = 0").is_err());
        assert!(RunConfig::from_toml_str("primes = [2]").is_err());
        assert!(RunConfig::from_toml_str("export = [\"png\"]").is_err());
        assert_eq!(RunConfig::from_toml_str("").unwrap(), RunConfig::default());
    }

    #[test]
    fn fixtures_cover_default_checks() {
        let fx = Fixtures::builtin();
        let cfg = RunConfig::default();
        let ids: Vec<String> = checks(&cfg).into_iter().map(|c| c.id).collect();
        for id in &ids {
            assert!(fx.get(id).is_some(), "missing fixture for {id}");
        }
        assert_eq!(ids.iter().collect::<BTreeSet<_>>().len(), ids.len());
        assert!(fx.0.keys().all(|k| ids.contains(k)), "fixture without a check");
    }

    #[test]
    fn subset_matching() {
        assert!(matches_expected(&json!({"a": 1, "b": 2}), &json!({"a": 1})));
        assert!(!matches_expected(&json!({"a": 1}), &json!({"a": 2})));
        assert!(!matches_expected(&json!({"b": 1}), &json!({"a": 1})));
        assert!(matches_expected(&json!(3), &json!(3)));
    }

    #[test]
    fn matrix_cases_respect_caps() {
        let cfg = RunConfig::default();
        assert_eq!(matrix_cases(&cfg), vec![(3, 1), (5, 1), (3, 2)]);
        let small = RunConfig {
            max_s: 1,
            ..RunConfig::default()
        };
        assert_eq!(matrix_cases(&small), vec![(3, 1), (5, 1)]);
    }

    #[test]
    fn max_s_one_subset() {
        let cfg = RunConfig {
            max_s: 1,
            random_graphs: 3,
            iso_samples: 100,
            ..RunConfig::default()
        };
        let r = run_verify(&cfg, &Fixtures::builtin(), |_| {}).unwrap();
        assert!(r.checks.iter().filter(|c| c.id.starts_with("aut.")).all(|c| c.status == Status::Skipped));
        let d1 = r.checks.iter().find(|c| c.id == "factor.dyadic.1").unwrap();
        assert_eq!(d1.status, Status::Pass);
        assert!(r.all_pass(), "{:?}", r.lines());
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn corrupted_fixture_fails() {
        let cfg = RunConfig {
            max_s: 1,
            random_graphs: 2,
            iso_samples: 10,
            ..RunConfig::default()
        };
        let text = DEFAULT_FIXTURES.replace(
            "\"domination.matrix.3^1\": { \"expected\": { \"gamma\": 4 }",
            "\"domination.matrix.3^1\": { \"expected\": { \"gamma\": 5 }",
        );
        assert_ne!(text, DEFAULT_FIXTURES);
        let r = run_verify(&cfg, &Fixtures::from_json_str(&text).unwrap(), |_| {}).unwrap();
        assert_eq!(r.exit_code(), 1);
    }
}
