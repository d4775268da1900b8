//! Explicit paths and cycles for the linearized family.
//!
//! Paths between two vertices are solved from a Moore-type linear system
//! and have length at most `2(m+1)` whenever `m <= e`. Cycles are the
//! short fixed patterns giving the girth upper bounds.

use std::collections::HashMap;

use crate::family::Family;
use crate::field::{linalg, FieldElement};
use crate::graph::{incident, Graph, Line, Point, Vertex};

use super::MetricsError;

/// The unique line through two points, if any.
///
/// With `u = p_1 - p'_1` nonzero and `l = (p_2 - p'_2) / u`, a common line
/// exists iff `p_k - p'_k = l * u^(p^(k-2))` for every `k`.
pub fn common_neighbor(family: &Family, a: &Point, b: &Point) -> Result<Option<Line>, MetricsError> {
    if !family.is_linearized() {
        return Err(MetricsError::NotLinearized);
    }
    if a == b {
        return Err(MetricsError::SamePoint);
    }
    let f = family.field();
    let m = family.m();
    let u = f.sub(a.0[0], b.0[0]);
    if u.is_zero() {
        return Ok(None);
    }
    let l = f.div(f.sub(a.0[1], b.0[1]), u).expect("u is nonzero");
    for j in 0..m {
        if f.sub(a.0[j + 1], b.0[j + 1]) != f.mul(l, family.f(j, u)) {
            return Ok(None);
        }
    }
    let coords = std::iter::once(l)
        .chain((0..m).map(|j| f.sub(f.mul(l, family.f(j, a.0[0])), a.0[j + 1])))
        .collect();
    Ok(Some(Line(coords)))
}

/// A walk between two vertices, loop-erased into a path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathWitness {
    pub vertices: Vec<Vertex>,
}

impl PathWitness {
    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn ids(&self, graph: &Graph) -> Vec<u64> {
        self.vertices.iter().map(|v| graph.encode(v)).collect()
    }

    /// Consecutive vertices adjacent, no repeats.
    pub fn is_valid(&self, family: &Family) -> bool {
        let distinct = {
            let mut seen = std::collections::HashSet::new();
            self.vertices.iter().all(|v| seen.insert(v))
        };
        distinct
            && self.vertices.windows(2).all(|w| match (&w[0], &w[1]) {
                (Vertex::Point(p), Vertex::Line(l)) | (Vertex::Line(l), Vertex::Point(p)) => {
                    incident(family, p, l)
                }
                _ => false,
            })
    }

    fn loop_erased(walk: Vec<Vertex>) -> PathWitness {
        let mut out: Vec<Vertex> = Vec::with_capacity(walk.len());
        let mut at: HashMap<Vertex, usize> = HashMap::new();
        for v in walk {
            if let Some(&i) = at.get(&v) {
                for gone in out.drain(i + 1..) {
                    at.remove(&gone);
                }
            } else {
                at.insert(v.clone(), out.len());
                out.push(v);
            }
        }
        PathWitness { vertices: out }
    }
}

/// A path from `a` to `b` of length at most `2(m+1)`. Needs `m <= e`.
pub fn diameter_witness(family: &Family, a: &Vertex, b: &Vertex) -> Result<PathWitness, MetricsError> {
    if !family.is_linearized() {
        return Err(MetricsError::NotLinearized);
    }
    if family.m() > family.field().degree() {
        return Err(MetricsError::UnsupportedRegime("paths need m <= e"));
    }
    let walk = match (a, b) {
        (Vertex::Line(x), Vertex::Line(y)) => line_walk(family, x, y, family.field().zero())?,
        (Vertex::Point(x), Vertex::Point(y)) => point_walk(family, x, y)?,
        (Vertex::Point(x), Vertex::Line(y)) => point_to_line(family, x, y)?,
        (Vertex::Line(x), Vertex::Point(y)) => {
            let mut w = point_to_line(family, y, x)?;
            w.reverse();
            w
        }
    };
    if walk.first() != Some(a) || walk.last() != Some(b) {
        return Err(MetricsError::InvalidWitness);
    }
    let path = PathWitness::loop_erased(walk);
    if !path.is_valid(family) {
        return Err(MetricsError::InvalidWitness);
    }
    Ok(path)
}

// Anchors x_1, x_1 + α_0, ..., x_1 + α_(m-1) over the polynomial basis.
// The system (L' - L) = Σ t_i θ(x_i) then has a Moore matrix of full rank.
fn line_walk(family: &Family, from: &Line, to: &Line, x1: FieldElement) -> Result<Vec<Vertex>, MetricsError> {
    let f = family.field();
    let m = family.m();
    let basis = f.basis();
    let anchors: Vec<FieldElement> =
        std::iter::once(x1).chain(basis[..m].iter().map(|&b| f.add(x1, b))).collect();
    let thetas: Vec<Vec<FieldElement>> = anchors.iter().map(|&x| family.theta(x)).collect();
    let a: Vec<Vec<FieldElement>> =
        (0..=m).map(|r| thetas.iter().map(|th| th[r]).collect()).collect();
    let rhs: Vec<FieldElement> = (0..=m).map(|r| f.sub(to.0[r], from.0[r])).collect();
    let t = linalg::solve(f, &a, &rhs).ok_or(MetricsError::SolveFailed)?;

    let mut walk = vec![Vertex::Line(from.clone())];
    let mut cur = from.0.clone();
    for (i, &x) in anchors.iter().enumerate() {
        let p = std::iter::once(x)
            .chain((0..m).map(|j| f.sub(f.mul(family.f(j, x), cur[0]), cur[j + 1])))
            .collect();
        walk.push(Vertex::Point(Point(p)));
        for (c, &th) in cur.iter_mut().zip(&thetas[i]) {
            *c = f.add(*c, f.mul(t[i], th));
        }
        walk.push(Vertex::Line(Line(cur.clone())));
    }
    Ok(walk)
}

// Steps d_i = α_(i-1) for i <= m and d_(m+1) = Δ_1 - Σ α; the line l_1 values
// y_i (with y_(m+1) = 0) solve Σ y_i d_i^(p^(k-2)) = Δ_k.
fn point_walk(family: &Family, from: &Point, to: &Point) -> Result<Vec<Vertex>, MetricsError> {
    let f = family.field();
    let m = family.m();
    let delta: Vec<FieldElement> = (0..=m).map(|r| f.sub(to.0[r], from.0[r])).collect();
    let mut d: Vec<FieldElement> = f.basis()[..m].to_vec();
    let last = d.iter().fold(delta[0], |acc, &x| f.sub(acc, x));
    d.push(last);
    let a: Vec<Vec<FieldElement>> =
        (0..m).map(|j| d[..m].iter().map(|&x| family.f(j, x)).collect()).collect();
    let mut y = linalg::solve(f, &a, &delta[1..]).ok_or(MetricsError::SolveFailed)?;
    y.push(f.zero());

    let mut walk = vec![Vertex::Point(from.clone())];
    let mut cur = from.0.clone();
    for (&di, &yi) in d.iter().zip(&y) {
        let l = std::iter::once(yi)
            .chain((0..m).map(|j| f.sub(f.mul(family.f(j, cur[0]), yi), cur[j + 1])))
            .collect();
        walk.push(Vertex::Line(Line(l)));
        cur[0] = f.add(cur[0], di);
        for j in 0..m {
            cur[j + 1] = f.add(cur[j + 1], f.mul(yi, family.f(j, di)));
        }
        walk.push(Vertex::Point(Point(cur.clone())));
    }
    Ok(walk)
}

// Through the line [0, -p_2, ..., -p_(m+1)], which passes through `p`.
fn point_to_line(family: &Family, p: &Point, l: &Line) -> Result<Vec<Vertex>, MetricsError> {
    let f = family.field();
    let start = Line(std::iter::once(f.zero()).chain(p.0[1..].iter().map(|&x| f.neg(x))).collect());
    let mut walk = line_walk(family, &start, l, p.0[0])?;
    walk.remove(0);
    Ok(walk)
}

/// A closed walk `P_1 L_1 P_2 L_2 ... P_t L_t P_1`, with its coefficient
/// form `u_i = (P_i)_1 - (P_(i+1))_1`, `c_i = (L_i)_1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleWitness {
    pub points: Vec<Point>,
    pub lines: Vec<Line>,
    pub u: Vec<FieldElement>,
    pub c: Vec<FieldElement>,
}

impl CycleWitness {
    pub fn from_vertices(family: &Family, points: Vec<Point>, lines: Vec<Line>) -> CycleWitness {
        let f = family.field();
        let t = points.len();
        let u = (0..t).map(|i| f.sub(points[i].0[0], points[(i + 1) % t].0[0])).collect();
        let c = lines.iter().map(|l| l.0[0]).collect();
        CycleWitness { points, lines, u, c }
    }

    /// Walks from `start`: `L_i` has first coordinate `c_i` and passes
    /// through `P_i`, then `P_(i+1)` has first coordinate `(P_i)_1 - u_i`.
    /// The walk closes up exactly when the coefficient system holds.
    pub fn from_coefficients(family: &Family, start: Point, u: Vec<FieldElement>, c: Vec<FieldElement>) -> CycleWitness {
        let f = family.field();
        let m = family.m();
        let mut points = vec![start];
        let mut lines = Vec::new();
        for (i, (&ui, &ci)) in u.iter().zip(&c).enumerate() {
            let p = &points[i];
            let l: Vec<FieldElement> = std::iter::once(ci)
                .chain((0..m).map(|j| f.sub(f.mul(family.f(j, p.0[0]), ci), p.0[j + 1])))
                .collect();
            let x = f.sub(p.0[0], ui);
            let next = std::iter::once(x)
                .chain((0..m).map(|j| f.sub(f.mul(family.f(j, x), ci), l[j + 1])))
                .collect();
            lines.push(Line(l));
            if i + 1 < u.len() {
                points.push(Point(next));
            }
        }
        CycleWitness { points, lines, u, c }
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        2 * self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_closed_walk(&self, family: &Family) -> bool {
        let t = self.points.len();
        t > 0
            && self.lines.len() == t
            && (0..t).all(|i| {
                incident(family, &self.points[i], &self.lines[i])
                    && incident(family, &self.points[(i + 1) % t], &self.lines[i])
            })
    }

    /// Closed walk with pairwise distinct points and pairwise distinct lines.
    pub fn is_cycle(&self, family: &Family) -> bool {
        fn distinct<T: Ord + Clone>(v: &[T]) -> bool {
            let mut s = v.to_vec();
            s.sort();
            s.windows(2).all(|w| w[0] != w[1])
        }
        self.points.len() >= 2
            && self.is_closed_walk(family)
            && distinct(&self.points)
            && distinct(&self.lines)
    }

    pub fn satisfies_system(&self, family: &Family) -> bool {
        verify_cycle_system(family, &self.u, &self.c)
    }

    /// Vertex ids in cycle order, starting at `P_1`.
    pub fn ids(&self, graph: &Graph) -> Vec<u64> {
        self.points
            .iter()
            .zip(&self.lines)
            .flat_map(|(p, l)| {
                [graph.encode(&Vertex::Point(p.clone())), graph.encode(&Vertex::Line(l.clone()))]
            })
            .collect()
    }
}

/// `Σ u_i = 0` and `Σ c_i f_k(u_i) = 0` for every `k`, all `u_i` nonzero.
/// Necessary for a closed walk; distinctness is checked separately.
pub fn verify_cycle_system(family: &Family, u: &[FieldElement], c: &[FieldElement]) -> bool {
    let f = family.field();
    if u.is_empty() || u.len() != c.len() || u.iter().any(|x| x.is_zero()) {
        return false;
    }
    let sum = u.iter().fold(f.zero(), |acc, &x| f.add(acc, x));
    sum.is_zero()
        && (0..family.m()).all(|j| {
            u.iter()
                .zip(c)
                .fold(f.zero(), |acc, (&ui, &ci)| f.add(acc, f.mul(ci, family.f(j, ui))))
                .is_zero()
        })
}

fn checked(family: &Family, w: CycleWitness) -> Result<CycleWitness, MetricsError> {
    if w.is_cycle(family) && w.satisfies_system(family) {
        Ok(w)
    } else {
        Err(MetricsError::InvalidWitness)
    }
}

/// A 6-cycle. Exists for odd `p`, and for `p = 2` when `e >= 2, m = 1`.
pub fn cycle_witness_6(family: &Family) -> Result<CycleWitness, MetricsError> {
    if !family.is_linearized() {
        return Err(MetricsError::NotLinearized);
    }
    let f = family.field();
    let m = family.m();
    let fill = |head: i64, rest: i64| -> Vec<FieldElement> {
        std::iter::once(f.from_int(head)).chain((0..m).map(|_| f.from_int(rest))).collect()
    };
    if f.characteristic() != 2 {
        let points = vec![Point(fill(0, 0)), Point(fill(-1, -1)), Point(fill(-2, 0))];
        let lines = vec![Line(fill(1, 0)), Line(fill(-1, 2)), Line(fill(0, 0))];
        return checked(family, CycleWitness::from_vertices(family, points, lines));
    }
    if f.degree() < 2 || m != 1 {
        return Err(MetricsError::NoSixCycle);
    }
    // β ≠ 0 of trace zero, then α with α^2 + α = β.
    let (alpha, beta) = f
        .nonzero_elements()
        .filter(|&b| f.trace(b) == 0)
        .find_map(|b| f.nonzero_elements().find(|&a| f.add(f.square(a), a) == b).map(|a| (a, b)))
        .ok_or(MetricsError::NoSixCycle)?;
    let a2 = f.square(alpha);
    let ab = f.div(beta, alpha).expect("alpha is nonzero");
    let points = vec![
        Point(vec![f.zero(), f.zero()]),
        Point(vec![a2, f.zero()]),
        Point(vec![beta, beta]),
    ];
    let lines = vec![
        Line(vec![f.zero(), f.zero()]),
        Line(vec![ab, f.mul(alpha, beta)]),
        Line(vec![f.one(), f.zero()]),
    ];
    checked(family, CycleWitness::from_vertices(family, points, lines))
}

/// An 8-cycle over F_2 coordinates, for `p = 2` with `e = m = 1` or `m >= 2`.
pub fn cycle_witness_8(family: &Family) -> Result<CycleWitness, MetricsError> {
    if !family.is_linearized() {
        return Err(MetricsError::NotLinearized);
    }
    let f = family.field();
    let (e, m) = (f.degree(), family.m());
    if f.characteristic() != 2 || !((e == 1 && m == 1) || m >= 2) {
        return Err(MetricsError::UnsupportedRegime("8-cycle needs p = 2 and e = m = 1 or m >= 2"));
    }
    let fill = |head: i64, rest: i64| -> Vec<FieldElement> {
        std::iter::once(f.from_int(head)).chain((0..m).map(|_| f.from_int(rest))).collect()
    };
    let points = vec![Point(fill(0, 0)), Point(fill(1, 0)), Point(fill(0, 1)), Point(fill(1, 1))];
    let lines = vec![Line(fill(0, 0)), Line(fill(1, 1)), Line(fill(0, 1)), Line(fill(1, 0))];
    checked(family, CycleWitness::from_vertices(family, points, lines))
}
