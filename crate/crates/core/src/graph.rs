//! The bipartite graph itself: vertices, neighbor solving, the vertex-id
//! codec, optional materialized adjacency, and exporters.

use std::collections::BTreeSet;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::{Family, FamilyError, FamilyKind, FamilySpec};
use crate::field::FieldElement;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("{what} needs {needed}, budget is {budget}")]
    BudgetExceeded { what: &'static str, needed: u64, budget: u64 },
    #[error("vertex id {id} out of range [0, {limit})")]
    OutOfRange { id: u64, limit: u64 },
    #[error("vertex has {got} coordinates, expected {expected}")]
    BadVertex { expected: usize, got: usize },
    #[error("operation needs a materialized adjacency")]
    NotMaterialized,
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Resource limits for the exhaustive workloads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest vertex count that may be materialized or swept by BFS.
    pub max_vertices: u64,
    /// Largest number of polynomial evaluations for spectrum enumeration.
    pub max_evals: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_vertices: 2_000_000, max_evals: 100_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuildMode {
    Lazy,
    Materialized,
}

/// `(p_1, ..., p_(m+1))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(pub Vec<FieldElement>);

/// `[l_1, ..., l_(m+1)]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line(pub Vec<FieldElement>);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Vertex {
    Point(Point),
    Line(Line),
}

impl Vertex {
    pub fn coords(&self) -> &[FieldElement] {
        match self {
            Vertex::Point(p) => &p.0,
            Vertex::Line(l) => &l.0,
        }
    }

    pub fn is_point(&self) -> bool {
        matches!(self, Vertex::Point(_))
    }
}

/// Compressed adjacency lists over vertex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Adjacency {
    pub fn from_lists(lists: &[Vec<u32>]) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        let mut targets = Vec::with_capacity(lists.iter().map(Vec::len).sum());
        offsets.push(0);
        for l in lists {
            targets.extend_from_slice(l);
            offsets.push(targets.len());
        }
        Adjacency { offsets, targets }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Undirected edge count (each edge is stored twice).
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    /// Sorted `(u, v)` pairs with `u < v`.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = (0..self.vertex_count())
            .flat_map(|u| {
                self.neighbors(u)
                    .iter()
                    .filter(move |&&v| (v as usize) > u)
                    .map(move |&v| (u as u32, v))
            })
            .collect();
        out.sort_unstable();
        out
    }
}

/// The graph of a family, with lazily solved or materialized neighbors.
#[derive(Debug, Clone)]
pub struct Graph {
    family: Family,
    adjacency: Option<Adjacency>,
    injective_theta: bool,
    perturbed: bool,
}

/// Metadata export schema.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphMeta {
    pub p: u32,
    pub e: usize,
    pub m: usize,
    pub family: FamilyKind,
    pub modulus: Vec<u32>,
    pub vertices: u64,
    pub edges: u64,
    pub regular: u64,
    pub injective_theta: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    EdgeList,
    Dimacs,
    JsonMeta,
}

impl Graph {
    pub fn build(spec: &FamilySpec, mode: BuildMode, budget: Budget) -> Result<Graph, GraphError> {
        Graph::from_family(spec.realize()?, mode, budget)
    }

    pub fn from_family(family: Family, mode: BuildMode, budget: Budget) -> Result<Graph, GraphError> {
        let injective_theta = family.theta_injective();
        let mut g = Graph { family, adjacency: None, injective_theta, perturbed: false };
        if mode == BuildMode::Materialized {
            g.materialize(budget)?;
        }
        Ok(g)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn spec(&self) -> &FamilySpec {
        self.family.spec()
    }

    /// False when `u -> (1, f_2(u), ...)` collapses, in which case the
    /// spectral formulas do not apply.
    pub fn injective_theta(&self) -> bool {
        self.injective_theta
    }

    pub fn is_perturbed(&self) -> bool {
        self.perturbed
    }

    /// `q^(m+1)`, the size of each side.
    pub fn side_size(&self) -> u64 {
        side_size(self.family.q(), self.family.m())
    }

    /// `2 q^(m+1)`.
    pub fn vertex_count(&self) -> u64 {
        2 * self.side_size()
    }

    /// `q^(m+2)`, or the stored count when materialized.
    pub fn edge_count(&self) -> u64 {
        match &self.adjacency {
            Some(a) => a.edge_count() as u64,
            None => self.side_size() * self.family.q(),
        }
    }

    pub fn adjacency(&self) -> Result<&Adjacency, GraphError> {
        self.adjacency.as_ref().ok_or(GraphError::NotMaterialized)
    }

    pub fn is_materialized(&self) -> bool {
        self.adjacency.is_some()
    }

    pub fn materialize(&mut self, budget: Budget) -> Result<(), GraphError> {
        if self.adjacency.is_some() {
            return Ok(());
        }
        let n = self.vertex_count();
        if n > budget.max_vertices || n > u32::MAX as u64 {
            return Err(GraphError::BudgetExceeded {
                what: "materialization",
                needed: n,
                budget: budget.max_vertices,
            });
        }
        let lists: Vec<Vec<u32>> = (0..n)
            .map(|id| self.neighbor_ids(id).into_iter().map(|x| x as u32).collect())
            .collect();
        self.adjacency = Some(Adjacency::from_lists(&lists));
        Ok(())
    }

    /// Rewires one edge of a materialized graph: the first point drops its
    /// first line and gains a line it was not adjacent to. Used to check
    /// that the verification suite notices a broken graph.
    pub fn perturb_one_edge(&mut self) -> Result<(), GraphError> {
        let adj = self.adjacency.as_ref().ok_or(GraphError::NotMaterialized)?;
        let n = adj.vertex_count();
        let mut lists: Vec<Vec<u32>> = (0..n).map(|v| adj.neighbors(v).to_vec()).collect();
        let side = self.side_size() as u32;
        let old = lists[0][0];
        let new = (side..2 * side)
            .find(|l| !lists[0].contains(l))
            .expect("a point is not adjacent to every line");
        lists[0].retain(|&x| x != old);
        lists[0].push(new);
        lists[0].sort_unstable();
        lists[old as usize].retain(|&x| x != 0);
        lists[new as usize].push(0);
        lists[new as usize].sort_unstable();
        self.adjacency = Some(Adjacency::from_lists(&lists));
        self.perturbed = true;
        Ok(())
    }

    fn check_len(&self, v: &[FieldElement]) -> Result<(), GraphError> {
        let expected = self.family.m() + 1;
        if v.len() != expected {
            return Err(GraphError::BadVertex { expected, got: v.len() });
        }
        Ok(())
    }

    /// `P ~ L` iff `l_k + p_k = f_k(p_1) l_1` for all `k >= 2`.
    pub fn is_adjacent(&self, p: &Point, l: &Line) -> bool {
        incident(&self.family, p, l)
    }

    /// The `q` lines through `p`, ordered by `l_1`.
    pub fn neighbors_of_point(&self, p: &Point) -> Vec<Line> {
        let f = self.family.field();
        let fs: Vec<FieldElement> = (0..self.family.m()).map(|j| self.family.f(j, p.0[0])).collect();
        f.elements()
            .map(|l1| {
                let mut line = Vec::with_capacity(fs.len() + 1);
                line.push(l1);
                line.extend(fs.iter().zip(&p.0[1..]).map(|(&fk, &pk)| f.sub(f.mul(fk, l1), pk)));
                Line(line)
            })
            .collect()
    }

    /// The `q` points on `l`, ordered by `p_1`.
    pub fn neighbors_of_line(&self, l: &Line) -> Vec<Point> {
        let f = self.family.field();
        f.elements()
            .map(|p1| {
                let mut point = Vec::with_capacity(l.0.len());
                point.push(p1);
                point.extend(
                    (0..self.family.m()).map(|j| f.sub(f.mul(self.family.f(j, p1), l.0[0]), l.0[j + 1])),
                );
                Point(point)
            })
            .collect()
    }

    /// Neighbor ids of a vertex id, solved from the adjacency equations
    /// (or read from the materialized lists).
    pub fn neighbor_ids(&self, id: u64) -> Vec<u64> {
        if let Some(adj) = &self.adjacency {
            return adj.neighbors(id as usize).iter().map(|&x| x as u64).collect();
        }
        match self.decode(id).expect("id in range") {
            Vertex::Point(p) => self
                .neighbors_of_point(&p)
                .into_iter()
                .map(|l| self.encode(&Vertex::Line(l)))
                .collect(),
            Vertex::Line(l) => self
                .neighbors_of_line(&l)
                .into_iter()
                .map(|p| self.encode(&Vertex::Point(p)))
                .collect(),
        }
    }

    /// `side * q^(m+1) + Σ_j idx(v_j) q^j`.
    pub fn encode(&self, v: &Vertex) -> u64 {
        let q = self.family.q();
        let body = v.coords().iter().rev().fold(0u64, |acc, x| acc * q + x.index() as u64);
        match v {
            Vertex::Point(_) => body,
            Vertex::Line(_) => self.side_size() + body,
        }
    }

    pub fn try_encode(&self, v: &Vertex) -> Result<u64, GraphError> {
        self.check_len(v.coords())?;
        if v.coords().iter().any(|&x| !self.family.field().contains(x)) {
            return Err(GraphError::BadVertex { expected: self.family.m() + 1, got: 0 });
        }
        Ok(self.encode(v))
    }

    pub fn decode(&self, id: u64) -> Result<Vertex, GraphError> {
        let side = self.side_size();
        if id >= 2 * side {
            return Err(GraphError::OutOfRange { id, limit: 2 * side });
        }
        let (is_line, mut rest) = if id >= side { (true, id - side) } else { (false, id) };
        let q = self.family.q();
        let f = self.family.field();
        let coords: Vec<FieldElement> = (0..=self.family.m())
            .map(|_| {
                let x = f.element(rest % q).expect("digit below q");
                rest /= q;
                x
            })
            .collect();
        Ok(if is_line { Vertex::Line(Line(coords)) } else { Vertex::Point(Point(coords)) })
    }

    pub fn point(&self, coords: &[i64]) -> Point {
        let f = self.family.field();
        Point(coords.iter().map(|&c| f.from_int(c)).collect())
    }

    pub fn line(&self, coords: &[i64]) -> Line {
        let f = self.family.field();
        Line(coords.iter().map(|&c| f.from_int(c)).collect())
    }

    pub fn meta(&self) -> GraphMeta {
        let spec = self.family.spec();
        GraphMeta {
            p: spec.p,
            e: spec.e,
            m: spec.m,
            family: spec.family,
            modulus: self.family.field().modulus().to_vec(),
            vertices: self.vertex_count(),
            edges: self.edge_count(),
            regular: self.family.q(),
            injective_theta: self.injective_theta,
        }
    }

    /// Sorted `(u, v)` edge pairs, `u < v`.
    pub fn edges(&self) -> Vec<(u64, u64)> {
        if let Some(adj) = &self.adjacency {
            return adj.edges().into_iter().map(|(u, v)| (u as u64, v as u64)).collect();
        }
        // points come first in id order and every edge has exactly one point end
        (0..self.side_size())
            .flat_map(|u| {
                let mut vs = self.neighbor_ids(u);
                vs.sort_unstable();
                vs.into_iter().map(move |v| (u, v))
            })
            .collect()
    }

    pub fn export<W: Write>(&self, format: ExportFormat, budget: Budget, mut sink: W) -> Result<(), GraphError> {
        if format != ExportFormat::JsonMeta && self.vertex_count() > budget.max_vertices {
            return Err(GraphError::BudgetExceeded {
                what: "export",
                needed: self.vertex_count(),
                budget: budget.max_vertices,
            });
        }
        match format {
            ExportFormat::EdgeList => {
                for (u, v) in self.edges() {
                    writeln!(sink, "{u} {v}")?;
                }
            }
            ExportFormat::Dimacs => {
                writeln!(sink, "p edge {} {}", self.vertex_count(), self.edge_count())?;
                for (u, v) in self.edges() {
                    writeln!(sink, "e {} {}", u + 1, v + 1)?;
                }
            }
            ExportFormat::JsonMeta => {
                serde_json::to_writer_pretty(&mut sink, &self.meta()).map_err(io::Error::from)?;
                writeln!(sink)?;
            }
        }
        sink.flush()?;
        Ok(())
    }
}

/// Checks the adjacency equations directly, without a [`Graph`].
pub fn incident(family: &Family, p: &Point, l: &Line) -> bool {
    let f = family.field();
    let (p, l) = (&p.0, &l.0);
    (0..family.m()).all(|j| f.add(l[j + 1], p[j + 1]) == f.mul(family.f(j, p[0]), l[0]))
}

pub(crate) fn side_size(q: u64, m: usize) -> u64 {
    q.saturating_pow(m as u32 + 1)
}

/// The connection set `S = {(t, t f_2(u), ..., t f_(m+1)(u)) : t != 0}` of
/// the line-side Cayley graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleySet {
    pub elements: BTreeSet<Vec<FieldElement>>,
}

impl CayleySet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, s: &[FieldElement]) -> bool {
        self.elements.contains(s)
    }
}

pub fn cayley_generators(family: &Family) -> CayleySet {
    let f = family.field();
    let mut elements = BTreeSet::new();
    for u in f.elements() {
        let theta = family.theta(u);
        for t in f.nonzero_elements() {
            elements.insert(theta.iter().map(|&x| f.mul(t, x)).collect());
        }
    }
    CayleySet { elements }
}
