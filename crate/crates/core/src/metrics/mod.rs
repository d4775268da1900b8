//! Connectivity, diameter and girth by BFS, plus the constructive
//! path and cycle witnesses in [`witness`].

use std::collections::VecDeque;
use std::sync::atomic::{AtomicU32, Ordering};

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::Family;
use crate::graph::{Adjacency, Graph, GraphError};
use crate::spectrum::component_count_formula;

pub mod witness;

pub use witness::{
    common_neighbor, cycle_witness_6, cycle_witness_8, diameter_witness, verify_cycle_system,
    CycleWitness, PathWitness,
};

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph has no cycle")]
    Acyclic,
    #[error("the two points coincide")]
    SamePoint,
    #[error("construction needs the linearized family")]
    NotLinearized,
    #[error("construction unsupported here: {0}")]
    UnsupportedRegime(&'static str),
    #[error("linear system for the witness has no solution")]
    SolveFailed,
    #[error("no 6-cycle construction for p = 2 with this (e, m)")]
    NoSixCycle,
    #[error("constructed witness failed validation")]
    InvalidWitness,
}

const UNSEEN: u32 = u32::MAX;

/// Connected components of an adjacency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    /// Component label per vertex, numbered in order of smallest vertex.
    pub labels: Vec<u32>,
    /// Sizes indexed by label.
    pub sizes: Vec<usize>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }
}

pub fn components(adj: &Adjacency) -> Components {
    let n = adj.vertex_count();
    let mut labels = vec![UNSEEN; n];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..n {
        if labels[s] != UNSEEN {
            continue;
        }
        let c = sizes.len() as u32;
        labels[s] = c;
        queue.push_back(s);
        let mut size = 0;
        while let Some(v) = queue.pop_front() {
            size += 1;
            for &w in adj.neighbors(v) {
                if labels[w as usize] == UNSEEN {
                    labels[w as usize] = c;
                    queue.push_back(w as usize);
                }
            }
        }
        sizes.push(size);
    }
    Components { labels, sizes }
}

/// BFS distances from `src`; unreachable vertices get `None`.
pub fn bfs_distances(adj: &Adjacency, src: usize) -> Vec<Option<u32>> {
    let mut dist = vec![UNSEEN; adj.vertex_count()];
    bfs_into(adj, src, &mut dist, &mut VecDeque::new());
    dist.into_iter().map(|d| (d != UNSEEN).then_some(d)).collect()
}

pub fn distance(adj: &Adjacency, a: usize, b: usize) -> Option<u32> {
    bfs_distances(adj, a)[b]
}

// Fills `dist` and returns the eccentricity of `src` within its component.
fn bfs_into(adj: &Adjacency, src: usize, dist: &mut [u32], queue: &mut VecDeque<usize>) -> u32 {
    dist.fill(UNSEEN);
    queue.clear();
    dist[src] = 0;
    queue.push_back(src);
    let mut ecc = 0;
    while let Some(v) = queue.pop_front() {
        let d = dist[v];
        ecc = ecc.max(d);
        for &w in adj.neighbors(v) {
            if dist[w as usize] == UNSEEN {
                dist[w as usize] = d + 1;
                queue.push_back(w as usize);
            }
        }
    }
    ecc
}

/// Eccentricity of every vertex inside its own component.
pub fn eccentricities(adj: &Adjacency) -> Vec<u32> {
    let n = adj.vertex_count();
    (0..n)
        .into_par_iter()
        .map_init(
            || (vec![UNSEEN; n], VecDeque::new()),
            |(dist, queue), s| bfs_into(adj, s, dist, queue),
        )
        .collect()
}

/// Diameter of each component, indexed like [`Components::sizes`].
pub fn component_diameters(adj: &Adjacency, comps: &Components) -> Vec<u32> {
    let mut out = vec![0; comps.count()];
    for (v, ecc) in eccentricities(adj).into_iter().enumerate() {
        let c = comps.labels[v] as usize;
        out[c] = out[c].max(ecc);
    }
    out
}

/// Largest component diameter (the graph diameter when connected).
pub fn diameter(adj: &Adjacency) -> u32 {
    eccentricities(adj).into_iter().max().unwrap_or(0)
}

/// Length of a shortest cycle.
pub fn girth(adj: &Adjacency) -> Result<u32, MetricsError> {
    let n = adj.vertex_count();
    let best = AtomicU32::new(UNSEEN);
    (0..n).into_par_iter().for_each_init(
        || (vec![UNSEEN; n], vec![UNSEEN; n], VecDeque::new(), Vec::new()),
        |(dist, parent, queue, touched), s| {
            shortest_cycle_through(adj, s, dist, parent, queue, touched, &best);
        },
    );
    match best.into_inner() {
        UNSEEN => Err(MetricsError::Acyclic),
        g => Ok(g),
    }
}

// Truncated BFS from `s`. A non-tree edge (x, y) closes a walk of length
// dist[x] + dist[y] + 1 containing a cycle, and a shortest cycle through s
// is found exactly this way.
fn shortest_cycle_through(
    adj: &Adjacency,
    s: usize,
    dist: &mut [u32],
    parent: &mut [u32],
    queue: &mut VecDeque<usize>,
    touched: &mut Vec<usize>,
    best: &AtomicU32,
) {
    for &v in touched.iter() {
        dist[v] = UNSEEN;
        parent[v] = UNSEEN;
    }
    touched.clear();
    queue.clear();
    dist[s] = 0;
    touched.push(s);
    queue.push_back(s);
    while let Some(x) = queue.pop_front() {
        let dx = dist[x];
        if 2 * dx + 1 >= best.load(Ordering::Relaxed) {
            return;
        }
        for &y in adj.neighbors(x) {
            let y = y as usize;
            if dist[y] == UNSEEN {
                dist[y] = dx + 1;
                parent[y] = x as u32;
                touched.push(y);
                queue.push_back(y);
            } else if parent[x] != y as u32 {
                best.fetch_min(dx + dist[y] + 1, Ordering::Relaxed);
            }
        }
    }
}

/// Girth expected for a linearized graph: 6 when `p` is odd or when
/// `p = 2, e >= 2, m = 1`; 8 for `p = 2` with `e = m = 1` or `m >= 2`.
pub fn predicted_girth(p: u32, e: usize, m: usize) -> u32 {
    if p != 2 || (e >= 2 && m == 1) {
        6
    } else {
        8
    }
}

/// Diameter expected for a linearized graph, known when `m <= e`.
pub fn predicted_diameter(e: usize, m: usize) -> Option<u32> {
    (m <= e).then_some(2 * (m as u32 + 1))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Predicted {
    pub components: Option<u64>,
    pub diameter: Option<u32>,
    pub girth: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matches {
    pub components: Option<bool>,
    pub diameter: Option<bool>,
    pub girth: Option<bool>,
}

impl Matches {
    /// No prediction disagrees.
    pub fn all(&self) -> bool {
        [self.components, self.diameter, self.girth].iter().all(|m| *m != Some(false))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub components: u64,
    pub sizes: Vec<u64>,
    /// Largest component diameter.
    pub diameter: u32,
    /// `None` for a forest.
    pub girth: Option<u32>,
    pub predicted: Predicted,
    #[serde(rename = "match")]
    pub matches: Matches,
}

impl MetricsReport {
    /// BFS metrics of a materialized graph with the matching predictions.
    pub fn compute(graph: &Graph) -> Result<MetricsReport, MetricsError> {
        let adj = graph.adjacency()?;
        let comps = components(adj);
        let diameter = component_diameters(adj, &comps).into_iter().max().unwrap_or(0);
        let girth = match girth(adj) {
            Ok(g) => Some(g),
            Err(MetricsError::Acyclic) => None,
            Err(e) => return Err(e),
        };
        let predicted = predictions(graph.family(), graph.injective_theta());
        let matches = Matches {
            components: predicted.components.map(|c| c == comps.count() as u64),
            diameter: predicted.diameter.map(|d| d == diameter),
            girth: predicted.girth.map(|g| Some(g) == girth),
        };
        Ok(MetricsReport {
            components: comps.count() as u64,
            sizes: comps.sizes.iter().map(|&s| s as u64).collect(),
            diameter,
            girth,
            predicted,
            matches,
        })
    }

    /// One-line summary for terminals.
    pub fn summary(&self) -> String {
        fn opt<T: ToString>(v: Option<T>) -> String {
            v.map_or_else(|| "-".to_string(), |x| x.to_string())
        }
        format!(
            "diameter {} (predicted {}) girth {} (predicted {}) components {} (predicted {})",
            self.diameter,
            opt(self.predicted.diameter),
            opt(self.girth),
            opt(self.predicted.girth),
            self.components,
            opt(self.predicted.components),
        )
    }
}

/// Predictions that apply to `family`. The component count needs an
/// injective `θ`; diameter and girth need the linearized family, and the
/// diameter is only predicted when connected.
pub fn predictions(family: &Family, injective_theta: bool) -> Predicted {
    let spec = family.spec();
    let components = injective_theta.then(|| component_count_formula(family).to_u64()).flatten();
    let (diameter, girth) = if family.is_linearized() {
        (predicted_diameter(spec.e, spec.m), Some(predicted_girth(spec.p, spec.e, spec.m)))
    } else {
        (None, None)
    };
    Predicted { components, diameter, girth }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FamilySpec;
    use crate::graph::{Budget, BuildMode};

    fn graph(p: u32, e: usize, m: usize) -> Graph {
        Graph::build(&FamilySpec::linearized(p, e, m), BuildMode::Materialized, Budget::default()).unwrap()
    }

    fn cycle(n: usize) -> Adjacency {
        let lists: Vec<Vec<u32>> =
            (0..n).map(|i| vec![((i + n - 1) % n) as u32, ((i + 1) % n) as u32]).collect();
        Adjacency::from_lists(&lists)
    }

    #[test]
    fn toy_graphs() {
        let c7 = cycle(7);
        assert_eq!(girth(&c7).unwrap(), 7);
        assert_eq!(diameter(&c7), 3);
        assert_eq!(components(&c7).count(), 1);
        let path = Adjacency::from_lists(&[vec![1], vec![0, 2], vec![1], vec![]]);
        assert!(matches!(girth(&path), Err(MetricsError::Acyclic)));
        let comps = components(&path);
        assert_eq!(comps.sizes, vec![3, 1]);
        assert_eq!(component_diameters(&path, &comps), vec![2, 0]);
        assert_eq!(distance(&path, 0, 2), Some(2));
        assert_eq!(distance(&path, 0, 3), None);
    }

    #[test]
    fn small_linearized_metrics() {
        for (p, e, m, d, g) in [(2, 1, 1, 4, 8), (3, 1, 1, 4, 6), (2, 2, 1, 4, 6), (2, 2, 2, 6, 8)] {
            let r = MetricsReport::compute(&graph(p, e, m)).unwrap();
            assert_eq!((r.components, r.diameter, r.girth), (1, d, Some(g)), "{p} {e} {m}");
            assert!(r.matches.all());
        }
    }

    #[test]
    fn disconnected_when_m_exceeds_e() {
        // L_2(2): rank of (1, x, x^2) over F_2 is 2, so q^(3-2) = 2 components
        let g = graph(2, 1, 2);
        let r = MetricsReport::compute(&g).unwrap();
        assert_eq!(r.components, 2);
        assert_eq!(r.sizes, vec![8, 8]);
        assert_eq!(r.predicted.diameter, None);
        assert_eq!(r.girth, Some(8));
    }

    #[test]
    fn predictions_table() {
        assert_eq!(predicted_girth(3, 1, 4), 6);
        assert_eq!(predicted_girth(2, 3, 1), 6);
        assert_eq!(predicted_girth(2, 1, 1), 8);
        assert_eq!(predicted_girth(2, 3, 2), 8);
        assert_eq!(predicted_diameter(2, 2), Some(6));
        assert_eq!(predicted_diameter(1, 2), None);
    }

    #[test]
    fn report_json_shape() {
        let r = MetricsReport::compute(&graph(2, 1, 1)).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["match"]["girth"], true);
        assert_eq!(v["predicted"]["diameter"], 4);
        assert_eq!(
            r.summary(),
            "diameter 4 (predicted 4) girth 8 (predicted 8) components 1 (predicted 1)"
        );
        let back: MetricsReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn perturbation_breaks_regularity() {
        let mut g = graph(3, 1, 1);
        g.perturb_one_edge().unwrap();
        let adj = g.adjacency().unwrap();
        assert!((0..adj.vertex_count()).any(|v| adj.degree(v) != 3));
    }
}
