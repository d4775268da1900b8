//! Wenger-type bipartite graphs over GF(p^e).
//!
//! The graphs have two copies of `F_q^(m+1)` as vertex classes; a point
//! `(p_1, ..., p_(m+1))` is adjacent to a line `[l_1, ..., l_(m+1)]` when
//! `l_k + p_k = f_k(p_1) * l_1` for `k = 2..=m+1`. The linearized family uses
//! `f_k(x) = x^(p^(k-2))`, the classical Wenger family `f_k(x) = x^(k-1)`.
//!
//! Everything is exact: spectra are reported as integer radicands, counts as
//! big integers, and every closed form has an enumeration or BFS route next
//! to it for cross-checking.

pub mod family;
pub mod field;
pub mod graph;
pub mod linearized;
pub mod metrics;
pub mod parse;
pub mod spectrum;
pub mod verify;

pub use family::{Family, FamilyError, FamilyKind, FamilySpec};
pub use field::{Field, FieldElement, FieldError, FpMatrix};
pub use graph::{Budget, BuildMode, Graph, GraphError, Line, Point, Vertex};
