//! The built-in verification matrix: every structural claim checked
//! against an exhaustive or brute-force computation on desk-scale graphs.
//!
//! Cases whose vertex count exceeds the budget are skipped, never failed.
//! With `perturb` set, one edge of every materialized graph is rewired
//! first, which must make at least one criterion fail.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::family::{FamilyKind, FamilySpec};
use crate::field::FpMatrix;
use crate::graph::{Budget, BuildMode, Graph, Line, Point, Vertex};
use crate::linearized::rank_count;
use crate::metrics::{self, CycleWitness, MetricsError};
use crate::spectrum::{self, SpectrumError};

/// `(p, e, m)` triples of the spectrum cross-check.
pub const SPECTRUM_CASES: [(u32, usize, usize); 11] = [
    (2, 1, 1),
    (2, 1, 2),
    (2, 1, 3),
    (2, 2, 2),
    (2, 2, 3),
    (3, 1, 1),
    (3, 1, 2),
    (2, 3, 3),
    (3, 2, 2),
    (5, 1, 1),
    (7, 1, 1),
];

/// Connected cases (`m <= e`) whose diameter is checked.
pub const DIAMETER_CASES: [(u32, usize, usize); 9] = [
    (2, 1, 1),
    (3, 1, 1),
    (2, 2, 1),
    (5, 1, 1),
    (2, 3, 1),
    (3, 2, 1),
    (2, 2, 2),
    (3, 2, 2),
    (2, 3, 3),
];

/// `(p, e, m, girth)`.
pub const GIRTH_CASES: [(u32, usize, usize, u32); 10] = [
    (3, 1, 1, 6),
    (5, 1, 1, 6),
    (3, 2, 1, 6),
    (3, 1, 2, 6),
    (2, 2, 1, 6),
    (2, 3, 1, 6),
    (2, 1, 1, 8),
    (2, 1, 2, 8),
    (2, 2, 2, 8),
    (2, 1, 3, 8),
];

/// `(p, e)` with `m = e` for the expander cross-check.
pub const EXPANDER_CASES: [(u32, usize); 3] = [(2, 1), (2, 2), (3, 1)];

const WENGER_CASES: [(u32, usize, usize); 3] = [(3, 1, 1), (5, 1, 2), (2, 2, 2)];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub budget: Budget,
    pub seed: u64,
    pub perturb: bool,
    /// Random vertex pairs per graph for path witnesses.
    pub path_samples: usize,
    /// Random point pairs of `L_1(11)` for the common-neighbor check.
    pub pair_samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            budget: Budget::default(),
            seed: 0,
            perturb: false,
            path_samples: 1000,
            pair_samples: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub status: Status,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    /// First few failure descriptions.
    pub failures: Vec<String>,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let mut s = format!(
            "{:>2}  {:<34} {}  ({} passed, {} failed, {} skipped)",
            self.id, self.name, self.status, self.passed, self.failed, self.skipped
        );
        if let Some(first) = self.failures.first() {
            s.push_str(&format!(": {first}"));
        }
        s
    }
}

struct Tally {
    passed: usize,
    failed: usize,
    skipped: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { passed: 0, failed: 0, skipped: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.fail(what());
        }
    }

    fn fail(&mut self, msg: String) {
        self.failed += 1;
        if self.failures.len() < 5 {
            self.failures.push(msg);
        }
    }

    fn finish(self, id: u8, name: &str) -> CriterionResult {
        let status = if self.failed > 0 {
            Status::Fail
        } else if self.skipped > 0 {
            Status::Skip
        } else {
            Status::Pass
        };
        CriterionResult {
            id,
            name: name.to_string(),
            status,
            passed: self.passed,
            failed: self.failed,
            skipped: self.skipped,
            failures: self.failures,
        }
    }
}

type Key = (FamilyKind, u32, usize, usize);

/// Materialized graphs shared between criteria.
pub struct Runner {
    cfg: VerifyConfig,
    graphs: HashMap<Key, Option<Graph>>,
}

fn spec_of(key: Key) -> FamilySpec {
    let (kind, p, e, m) = key;
    match kind {
        FamilyKind::Wenger => FamilySpec::wenger(p, e, m),
        _ => FamilySpec::linearized(p, e, m),
    }
}

fn label(key: Key) -> String {
    spec_of(key).label()
}

// Graphs above this size are left out of the trace identity.
const TRACE_LIMIT: u64 = 20_000;

fn vertex_count(p: u32, e: usize, m: usize) -> Option<u64> {
    (p as u64).checked_pow(e as u32)?.checked_pow(m as u32 + 1)?.checked_mul(2)
}

fn fits(cfg: &VerifyConfig, p: u32, e: usize, m: usize) -> bool {
    vertex_count(p, e, m).is_some_and(|n| n <= cfg.budget.max_vertices)
}

impl Runner {
    pub fn new(cfg: VerifyConfig) -> Runner {
        Runner { cfg, graphs: HashMap::new() }
    }

    /// `None` when the graph is over budget.
    fn graph(&mut self, key: Key) -> Result<Option<&Graph>, String> {
        if !self.graphs.contains_key(&key) {
            let (_, p, e, m) = key;
            let g = if fits(&self.cfg, p, e, m) {
                let mut g = Graph::build(&spec_of(key), BuildMode::Materialized, self.cfg.budget)
                    .map_err(|err| format!("{}: {err}", label(key)))?;
                if self.cfg.perturb {
                    g.perturb_one_edge().map_err(|err| err.to_string())?;
                }
                Some(g)
            } else {
                None
            };
            self.graphs.insert(key, g);
        }
        Ok(self.graphs[&key].as_ref())
    }

    fn all_keys() -> Vec<Key> {
        let lin = SPECTRUM_CASES
            .iter()
            .copied()
            .chain(DIAMETER_CASES)
            .chain(GIRTH_CASES.iter().map(|&(p, e, m, _)| (p, e, m)))
            .chain(EXPANDER_CASES.iter().map(|&(p, e)| (p, e, e)))
            .map(|(p, e, m)| (FamilyKind::Linearized, p, e, m));
        let wen = WENGER_CASES.iter().map(|&(p, e, m)| (FamilyKind::Wenger, p, e, m));
        let mut keys: Vec<Key> = Vec::new();
        for k in lin.chain(wen) {
            if !keys.contains(&k) {
                keys.push(k);
            }
        }
        keys
    }

    pub fn run_all(&mut self) -> Vec<CriterionResult> {
        (1..=11).map(|id| self.run(id)).collect()
    }

    /// Runs one criterion, `1..=11`.
    pub fn run(&mut self, id: u8) -> CriterionResult {
        match id {
            1 => self.spectrum_closed_form(),
            2 => self.trace_identity(),
            3 => self.regularity(),
            4 => self.components(),
            5 => self.diameter(),
            6 => self.girth(),
            7 => self.witnesses(),
            8 => self.common_neighbors(),
            9 => rank_counts(),
            10 => self.expander(),
            11 => negative_control(),
            _ => panic!("criterion ids are 1..=11"),
        }
    }

    fn spectrum_closed_form(&mut self) -> CriterionResult {
        let mut t = Tally::new();
        for (p, e, m) in SPECTRUM_CASES {
            if !fits(&self.cfg, p, e, m) {
                t.skipped += 1;
                continue;
            }
            let spec = FamilySpec::linearized(p, e, m);
            let fam = spec.realize().expect("valid case");
            let closed = spectrum::closed_form_linearized(p, e, m).map(|c| c.to_report(spec.clone()));
            match (closed, spectrum::spectrum_enumerate(&fam, self.cfg.budget)) {
                (Ok(c), Ok(en)) => t.check(c.same_spectrum(&en), || format!("{} closed form differs", spec.label())),
                (_, Err(SpectrumError::BudgetExceeded { .. })) => t.skipped += 1,
                (Err(err), _) | (_, Err(err)) => t.fail(format!("{}: {err}", spec.label())),
            }
        }
        t.finish(1, "spectrum closed form = enumeration")
    }

    fn trace_identity(&mut self) -> CriterionResult {
        let mut t = Tally::new();
        for (p, e, m) in SPECTRUM_CASES {
            let key = (FamilyKind::Linearized, p, e, m);
            if vertex_count(p, e, m).is_none_or(|n| n > TRACE_LIMIT) {
                continue;
            }
            let budget = self.cfg.budget;
            let g = match self.graph(key) {
                Ok(Some(g)) => g,
                Ok(None) => {
                    t.skipped += 1;
                    continue;
                }
                Err(msg) => {
                    t.fail(msg);
                    continue;
                }
            };
            let report = match spectrum::spectrum_enumerate(g.family(), budget) {
                Ok(r) => r,
                Err(SpectrumError::BudgetExceeded { .. }) => {
                    t.skipped += 1;
                    continue;
                }
                Err(err) => {
                    t.fail(err.to_string());
                    continue;
                }
            };
            for k in 1..=3 {
                match spectrum::walk_trace(g, k) {
                    Ok(tr) => t.check(tr == report.power_sum(k), || {
                        format!("{} k={k}: tr(A^2k) = {tr}, eigenvalues give {}", label(key), report.power_sum(k))
                    }),
                    Err(err) => t.fail(err.to_string()),
                }
            }
        }
        t.finish(2, "trace identity k = 1, 2, 3")
    }

    fn with_graphs(&mut self, keys: &[Key], t: &mut Tally, mut f: impl FnMut(Key, &Graph, &mut Tally)) {
        for &key in keys {
            match self.graph(key) {
                Ok(Some(g)) => f(key, g, t),
                Ok(None) => t.skipped += 1,
                Err(msg) => t.fail(msg),
            }
        }
    }

    fn regularity(&mut self) -> CriterionResult {
        let mut t = Tally::new();
        self.with_graphs(&Self::all_keys(), &mut t, |key, g, t| {
            let adj = g.adjacency().expect("materialized");
            let q = g.family().q();
            let side = q.pow(g.family().m() as u32 + 1);
            let regular = (0..adj.vertex_count()).all(|v| adj.degree(v) as u64 == q);
            t.check(regular, || format!("{} is not {q}-regular", label(key)));
            t.check(adj.vertex_count() as u64 == 2 * side, || format!("{} vertex count", label(key)));
            t.check(adj.edge_count() as u64 == side * q, || format!("{} edge count", label(key)));
        });
        t.finish(3, "regularity and counts")
    }

    fn components(&mut self) -> CriterionResult {
        let mut t = Tally::new();
        self.with_graphs(&Self::all_keys(), &mut t, |key, g, t| {
            let bfs = metrics::components(g.adjacency().expect("materialized")).count() as u64;
            let formula = spectrum::component_count_formula(g.family());
            t.check(BigUint::from(bfs) == formula, || format!("{}: BFS {bfs}, formula {formula}", label(key)));
            let (kind, p, e, m) = key;
            if kind == FamilyKind::Linearized {
                let q = (p as u64).pow(e as u32);
                let expect = if m >= e { q.pow((m - e) as u32) } else { 1 };
                t.check(bfs == expect, || format!("{}: BFS {bfs}, expected {expect}", label(key)));
            }
        });
        t.finish(4, "component count")
    }

    fn diameter(&mut self) -> CriterionResult {
        let mut t = Tally::new();
        let keys: Vec<Key> = DIAMETER_CASES.iter().map(|&(p, e, m)| (FamilyKind::Linearized, p, e, m)).collect();
        self.with_graphs(&keys, &mut t, |key, g, t| {
            let adj = g.adjacency().expect("materialized");
            let expect = 2 * (key.3 as u32 + 1);
            let connected = metrics::components(adj).count() == 1;
            let d = metrics::diameter(adj);
            t.check(connected && d == expect, || format!("{}: diameter {d}, expected {expect}", label(key)));
        });
        t.finish(5, "diameter 2(m+1)")
    }

    fn girth(&mut self) -> CriterionResult {
        let mut t = Tally::new();
        let expected: HashMap<Key, u32> = GIRTH_CASES
            .iter()
            .map(|&(p, e, m, g)| ((FamilyKind::Linearized, p, e, m), g))
            .collect();
        self.with_graphs(&Self::all_keys(), &mut t, |key, g, t| {
            match metrics::girth(g.adjacency().expect("materialized")) {
                Ok(girth) => {
                    t.check(girth >= 6, || format!("{}: girth {girth} < 6", label(key)));
                    if let Some(&want) = expected.get(&key) {
                        t.check(girth == want, || format!("{}: girth {girth}, expected {want}", label(key)));
                    }
                }
                Err(err) => t.fail(format!("{}: {err}", label(key))),
            }
        });
        t.finish(6, "girth")
    }

    fn witnesses(&mut self) -> CriterionResult {
        let mut t = Tally::new();
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        let samples = self.cfg.path_samples;
        let keys: Vec<Key> = DIAMETER_CASES.iter().map(|&(p, e, m)| (FamilyKind::Linearized, p, e, m)).collect();
        self.with_graphs(&keys, &mut t, |key, g, t| {
            let bound = 2 * (g.family().m() + 1);
            let n = g.vertex_count();
            for _ in 0..samples {
                let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
                match path_between(g, a, b) {
                    Ok(len) => t.check(len <= bound, || format!("{}: path {a}->{b} has length {len}", label(key))),
                    Err(msg) => t.fail(format!("{}: {a}->{b}: {msg}", label(key))),
                }
            }
            // L and L + [0, ..., 0, 1] are at distance exactly 2(m+1)
            let m = g.family().m();
            let zero = vec![0i64; m + 1];
            let mut unit = zero.clone();
            unit[m] = 1;
            let (a, b) = (
                g.encode(&Vertex::Line(g.line(&zero))),
                g.encode(&Vertex::Line(g.line(&unit))),
            );
            match path_between(g, a, b) {
                Ok(len) => t.check(len == bound, || format!("{}: lower-bound pair has path length {len}", label(key))),
                Err(msg) => t.fail(format!("{}: lower-bound pair: {msg}", label(key))),
            }
        });
        self.with_graphs(&Self::all_keys(), &mut t, |key, g, t| {
            let (kind, p, e, m) = key;
            if kind != FamilyKind::Linearized {
                return;
            }
            let fam = g.family();
            let six = p != 2 || (e >= 2 && m == 1);
            let eight = p == 2 && ((e == 1 && m == 1) || m >= 2);
            let attempts: [(bool, usize, Result<CycleWitness, MetricsError>); 2] = [
                (six, 6, metrics::cycle_witness_6(fam)),
                (eight, 8, metrics::cycle_witness_8(fam)),
            ];
            for (applies, len, res) in attempts {
                if !applies {
                    continue;
                }
                match res {
                    Ok(w) => t.check(w.len() == len && cycle_in_graph(g, &w), || {
                        format!("{}: {len}-cycle witness invalid", label(key))
                    }),
                    Err(err) => t.fail(format!("{}: {len}-cycle: {err}", label(key))),
                }
            }
        });
        t.finish(7, "path and cycle witnesses")
    }

    fn common_neighbors(&mut self) -> CriterionResult {
        let mut t = Tally::new();
        let qs: [(u32, usize); 4] = [(2, 1), (3, 1), (2, 2), (5, 1)];
        let keys: Vec<Key> = qs.iter().map(|&(p, e)| (FamilyKind::Linearized, p, e, 1)).collect();
        self.with_graphs(&keys, &mut t, |key, g, t| {
            let side = g.side_size();
            for a in 0..side {
                for b in (0..side).filter(|&b| b != a) {
                    common_neighbor_check(g, a, b, key, t);
                }
            }
        });
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        let samples = self.cfg.pair_samples;
        let key = (FamilyKind::Linearized, 11, 1, 1);
        self.with_graphs(&[key], &mut t, |key, g, t| {
            let side = g.side_size();
            for _ in 0..samples {
                let a = rng.gen_range(0..side);
                let b = (a + rng.gen_range(1..side)) % side;
                common_neighbor_check(g, a, b, key, t);
            }
            let got = metrics::common_neighbor(g.family(), &g.point(&[0, 0]), &g.point(&[-1, -1]));
            t.check(matches!(&got, Ok(Some(l)) if *l == g.line(&[1, 0])), || {
                format!("L_1(11) (0,0),(-1,-1): got {got:?}")
            });
        });
        t.finish(8, "common neighbor vs brute force")
    }

    fn expander(&mut self) -> CriterionResult {
        let mut t = Tally::new();
        for (p, e) in EXPANDER_CASES {
            if !fits(&self.cfg, p, e, e) {
                t.skipped += 1;
                continue;
            }
            let fam = FamilySpec::linearized(p, e, e).realize().expect("valid case");
            match spectrum::spectrum_enumerate(&fam, self.cfg.budget) {
                Ok(r) => {
                    let want = spectrum::expansion_bound(p, e).radicand;
                    let got = spectrum::second_largest_radicand(&r);
                    t.check(got.as_ref() == Some(&want), || {
                        format!("{}: second radicand {got:?}, expected {want}", fam.spec().label())
                    });
                }
                Err(SpectrumError::BudgetExceeded { .. }) => t.skipped += 1,
                Err(err) => t.fail(err.to_string()),
            }
        }
        t.finish(10, "expander second eigenvalue")
    }
}

/// Runs every criterion with `cfg`.
pub fn run_all(cfg: VerifyConfig) -> Vec<CriterionResult> {
    Runner::new(cfg).run_all()
}

fn has_edge(g: &Graph, a: u64, b: u64) -> bool {
    g.adjacency().expect("materialized").neighbors(a as usize).contains(&(b as u32))
}

// Path witness checked against the stored adjacency lists.
fn path_between(g: &Graph, a: u64, b: u64) -> Result<usize, String> {
    let (va, vb) = (g.decode(a).map_err(|e| e.to_string())?, g.decode(b).map_err(|e| e.to_string())?);
    let w = metrics::diameter_witness(g.family(), &va, &vb).map_err(|e| e.to_string())?;
    let ids = w.ids(g);
    let distinct = ids.iter().collect::<BTreeSet<_>>().len() == ids.len();
    let ok = ids.first() == Some(&a)
        && ids.last() == Some(&b)
        && distinct
        && ids.windows(2).all(|s| has_edge(g, s[0], s[1]));
    if ok {
        Ok(w.len())
    } else {
        Err("not a path in the graph".to_string())
    }
}

fn cycle_in_graph(g: &Graph, w: &CycleWitness) -> bool {
    let ids = w.ids(g);
    let distinct = ids.iter().collect::<BTreeSet<_>>().len() == ids.len();
    distinct
        && ids.len() >= 4
        && (0..ids.len()).all(|i| has_edge(g, ids[i], ids[(i + 1) % ids.len()]))
        && w.is_cycle(g.family())
}

fn common_neighbor_check(g: &Graph, a: u64, b: u64, key: Key, t: &mut Tally) {
    let adj = g.adjacency().expect("materialized");
    let na: BTreeSet<u32> = adj.neighbors(a as usize).iter().copied().collect();
    let shared: Vec<u32> = adj.neighbors(b as usize).iter().copied().filter(|l| na.contains(l)).collect();
    let point = |id| match g.decode(id) {
        Ok(Vertex::Point(p)) => p,
        _ => Point(Vec::new()),
    };
    let got = metrics::common_neighbor(g.family(), &point(a), &point(b));
    let brute: Option<Line> = match shared.as_slice() {
        [] => None,
        [l] => match g.decode(*l as u64) {
            Ok(Vertex::Line(l)) => Some(l),
            _ => None,
        },
        _ => {
            t.fail(format!("{}: points {a},{b} share {} lines", label(key), shared.len()));
            return;
        }
    };
    t.check(matches!(&got, Ok(x) if *x == brute), || {
        format!("{}: points {a},{b}: got {got:?}, brute force {brute:?}", label(key))
    });
}

fn rank_counts() -> CriterionResult {
    let mut t = Tally::new();
    for q in [2u32, 3] {
        for l in 1..=3usize {
            for n in 1..=3usize {
                let cells = l * n;
                let mut hist = vec![0u64; l.min(n) + 1];
                for code in 0..(q as u64).pow(cells as u32) {
                    let mut c = code;
                    let rows: Vec<Vec<u32>> = (0..l)
                        .map(|_| {
                            (0..n)
                                .map(|_| {
                                    let d = (c % q as u64) as u32;
                                    c /= q as u64;
                                    d
                                })
                                .collect()
                        })
                        .collect();
                    hist[FpMatrix::from_rows(&rows, q).rank()] += 1;
                }
                for (k, &count) in hist.iter().enumerate() {
                    match rank_count(l, n, k, q as u64) {
                        Ok(v) => t.check(v == BigUint::from(count), || {
                            format!("rank_count({l},{n},{k},{q}) = {v}, enumeration {count}")
                        }),
                        Err(err) => t.fail(err.to_string()),
                    }
                }
            }
        }
    }
    for q in [2u64, 3, 4, 5] {
        for l in 1..=4usize {
            for n in 1..=4usize {
                let sum: Result<BigUint, _> = (0..=l.min(n)).map(|k| rank_count(l, n, k, q)).sum();
                let want = BigUint::from(q).pow((l * n) as u32);
                t.check(sum.as_ref() == Ok(&want), || format!("sum rule fails for l={l} n={n} q={q}"));
            }
        }
    }
    t.finish(9, "rank counts")
}

/// Closed walk in `L_1(11)` satisfying the cycle system while revisiting
/// its first point, so it is not a cycle.
pub fn negative_control_walk() -> (Graph, CycleWitness) {
    let g = Graph::build(&FamilySpec::linearized(11, 1, 1), BuildMode::Lazy, Budget::default())
        .expect("L_1(11) builds");
    let points = [[0, 0], [-1, -1], [-2, 0], [0, 0], [-1, -2], [-2, -8]].iter().map(|c| g.point(c)).collect();
    let lines = [[1, 0], [-1, 2], [0, 0], [2, 0], [6, -4], [4, 0]].iter().map(|c| g.line(c)).collect();
    let w = CycleWitness::from_vertices(g.family(), points, lines);
    (g, w)
}

fn negative_control() -> CriterionResult {
    let mut t = Tally::new();
    let (g, w) = negative_control_walk();
    let fam = g.family();
    let f = fam.field();
    let ints = |v: &[i64]| v.iter().map(|&x| f.from_int(x)).collect::<Vec<_>>();
    t.check(w.u == ints(&[1, 1, -2, 1, 1, -2]) && w.c == ints(&[1, -1, 0, 2, 6, 4]), || {
        "coefficients differ from the six-tuple".to_string()
    });
    t.check(w.is_closed_walk(fam), || "walk is not closed".to_string());
    t.check(metrics::verify_cycle_system(fam, &w.u, &w.c), || "cycle system rejected".to_string());
    t.check(!w.is_cycle(fam), || "accepted as a cycle".to_string());
    t.check(w.points[3] == w.points[0], || "P_4 differs from P_1".to_string());
    t.finish(11, "cycle system negative control")
}
