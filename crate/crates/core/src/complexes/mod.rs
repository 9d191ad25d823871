//! Finite simplicial complexes stored by their maximal simplices.

mod cuspidal;
mod shape;

pub use cuspidal::{
    build_c, build_sc, extract_l, is_c_simplex, sc_contains, sc_preimage, Arrow, LFactor, ObstructorL, Sign, Signed,
    SignedPosition,
};
pub use shape::{ModelVertex, ObstructorShape, ShapeError};

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::Hash;

use serde::Serialize;
use thiserror::Error;

use crate::exact::sparse_rank;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("vertex {0} appears in both complexes")]
    LabelCollision(String),
    #[error("simplex refers to unknown vertex {0}")]
    UnknownVertex(String),
    #[error("complex has {faces} faces, above the limit of {limit}")]
    TooLarge { faces: usize, limit: usize },
}

/// Bound on the number of faces materialized for homology.
pub const FACE_LIMIT: usize = 2_000_000;

/// Vertex labels: anything orderable and printable.
pub trait Label: Clone + Eq + Hash + Ord + fmt::Display + fmt::Debug {}
impl<T: Clone + Eq + Hash + Ord + fmt::Display + fmt::Debug> Label for T {}

#[derive(Debug, Clone)]
pub struct SimplicialComplex<V> {
    vertices: Vec<V>,
    index: HashMap<V, usize>,
    /// Sorted vertex indices; no member contains another.
    maximal: Vec<Vec<usize>>,
}

impl<V: PartialEq> PartialEq for SimplicialComplex<V> {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.maximal == other.maximal
    }
}

impl<V: Eq> Eq for SimplicialComplex<V> {}

/// Vertices of a join, tagged by side.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side<V, W> {
    Left(V),
    Right(W),
}

impl<V: fmt::Display, W: fmt::Display> fmt::Display for Side<V, W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Left(v) => write!(f, "{v}"),
            Side::Right(w) => write!(f, "{w}'"),
        }
    }
}

impl<V: Label> SimplicialComplex<V> {
    /// The complex whose only simplex is the empty one; the unit for joins.
    pub fn empty() -> Self {
        SimplicialComplex {
            vertices: Vec::new(),
            index: HashMap::new(),
            maximal: vec![Vec::new()],
        }
    }

    /// Builds a complex from generating simplices, keeping the maximal ones.
    /// Vertices not covered by any simplex become isolated points.
    pub fn new(vertices: Vec<V>, simplices: Vec<Vec<V>>) -> Result<Self, ComplexError> {
        let mut sorted: Vec<V> = vertices;
        sorted.sort();
        sorted.dedup();
        let index: HashMap<V, usize> = sorted.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let mut gens: Vec<Vec<usize>> = Vec::with_capacity(simplices.len() + sorted.len());
        for s in simplices {
            let mut ids = s
                .iter()
                .map(|v| {
                    index
                        .get(v)
                        .copied()
                        .ok_or_else(|| ComplexError::UnknownVertex(v.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            ids.sort_unstable();
            ids.dedup();
            gens.push(ids);
        }
        gens.extend((0..sorted.len()).map(|i| vec![i]));
        Ok(SimplicialComplex {
            maximal: keep_maximal(gens),
            vertices: sorted,
            index,
        })
    }

    /// Like [`new`](Self::new) with the vertex set read off the simplices.
    pub fn from_simplices(simplices: Vec<Vec<V>>) -> Self {
        let vertices = simplices.iter().flatten().cloned().collect();
        Self::new(vertices, simplices).expect("vertices collected from simplices")
    }

    pub fn vertices(&self) -> &[V] {
        &self.vertices
    }

    pub fn vertex_index(&self, v: &V) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// Maximal simplices as sorted vertex indices.
    pub fn maximal_indices(&self) -> &[Vec<usize>] {
        &self.maximal
    }

    pub fn maximal_simplices(&self) -> Vec<Vec<V>> {
        self.maximal
            .iter()
            .map(|s| s.iter().map(|&i| self.vertices[i].clone()).collect())
            .collect()
    }

    /// Dimension; `-1` for the empty complex.
    pub fn dim(&self) -> i64 {
        self.maximal.iter().map(|s| s.len() as i64 - 1).max().unwrap_or(-1)
    }

    pub fn contains(&self, simplex: &[V]) -> bool {
        let Some(ids) = simplex
            .iter()
            .map(|v| self.vertex_index(v))
            .collect::<Option<BTreeSet<_>>>()
        else {
            return false;
        };
        self.maximal
            .iter()
            .any(|m| ids.iter().all(|i| m.binary_search(i).is_ok()))
    }

    /// All nonempty faces grouped by dimension.
    pub fn faces(&self) -> Result<Vec<Vec<Vec<usize>>>, ComplexError> {
        let estimate: usize = self
            .maximal
            .iter()
            .map(|m| 1usize.checked_shl(m.len() as u32).unwrap_or(usize::MAX))
            .fold(0usize, |a, b| a.saturating_add(b));
        if estimate > FACE_LIMIT {
            return Err(ComplexError::TooLarge {
                faces: estimate,
                limit: FACE_LIMIT,
            });
        }
        let d = (self.dim() + 1).max(0) as usize;
        let mut by_dim: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); d];
        for m in &self.maximal {
            for mask in 1u64..1 << m.len() {
                let face: Vec<usize> = (0..m.len()).filter(|b| mask >> b & 1 == 1).map(|b| m[b]).collect();
                by_dim[face.len() - 1].insert(face);
            }
        }
        Ok(by_dim.into_iter().map(|s| s.into_iter().collect()).collect())
    }

    pub fn f_vector(&self) -> Result<Vec<usize>, ComplexError> {
        Ok(self.faces()?.iter().map(Vec::len).collect())
    }

    /// Rational Betti numbers `b_0..b_dim` (unreduced).
    pub fn betti(&self) -> Result<Vec<usize>, ComplexError> {
        let faces = self.faces()?;
        let ranks: Vec<usize> = (0..faces.len())
            .map(|k| {
                if k == 0 {
                    0
                } else {
                    boundary_rank(&faces[k], &faces[k - 1])
                }
            })
            .collect();
        Ok((0..faces.len())
            .map(|k| {
                let next = ranks.get(k + 1).copied().unwrap_or(0);
                faces[k].len() - ranks[k] - next
            })
            .collect())
    }

    /// Reduced Euler characteristic `-1 + f_0 - f_1 + ...`.
    pub fn reduced_euler(&self) -> Result<i64, ComplexError> {
        Ok(self.f_vector()?.iter().enumerate().fold(
            -1,
            |acc, (k, &f)| if k % 2 == 0 { acc + f as i64 } else { acc - f as i64 },
        ))
    }

    /// Join with vertices tagged by side.
    pub fn join<W: Label>(&self, other: &SimplicialComplex<W>) -> SimplicialComplex<Side<V, W>> {
        let mut vertices: Vec<Side<V, W>> = self.vertices.iter().cloned().map(Side::Left).collect();
        vertices.extend(other.vertices.iter().cloned().map(Side::Right));
        let shift = self.vertices.len();
        let maximal = self
            .maximal
            .iter()
            .flat_map(|a| {
                other.maximal.iter().map(move |b| {
                    let mut s = a.clone();
                    s.extend(b.iter().map(|i| i + shift));
                    s
                })
            })
            .collect();
        // Left labels sort before Right labels, so indices are already sorted.
        SimplicialComplex {
            index: vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect(),
            vertices,
            maximal,
        }
    }

    /// Join of complexes whose labels are already disjoint.
    pub fn join_disjoint(&self, other: &Self) -> Result<Self, ComplexError> {
        if let Some(v) = other.vertices.iter().find(|v| self.index.contains_key(v)) {
            return Err(ComplexError::LabelCollision(v.to_string()));
        }
        let mut vertices = self.vertices.clone();
        vertices.extend(other.vertices.iter().cloned());
        vertices.sort();
        let index: HashMap<V, usize> = vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let left: Vec<usize> = self.vertices.iter().map(|v| index[v]).collect();
        let right: Vec<usize> = other.vertices.iter().map(|v| index[v]).collect();
        let mut maximal = Vec::with_capacity(self.maximal.len() * other.maximal.len());
        for a in &self.maximal {
            for b in &other.maximal {
                let mut s: Vec<usize> = a.iter().map(|&i| left[i]).chain(b.iter().map(|&i| right[i])).collect();
                s.sort_unstable();
                maximal.push(s);
            }
        }
        maximal.sort();
        Ok(SimplicialComplex {
            vertices,
            index,
            maximal,
        })
    }

    /// Disjoint union with vertices tagged by side.
    pub fn disjoint_union<W: Label>(&self, other: &SimplicialComplex<W>) -> SimplicialComplex<Side<V, W>> {
        let mut simplices: Vec<Vec<Side<V, W>>> = self
            .maximal_simplices()
            .into_iter()
            .map(|s| s.into_iter().map(Side::Left).collect())
            .collect();
        simplices.extend(
            other
                .maximal_simplices()
                .into_iter()
                .map(|s| s.into_iter().map(Side::Right).collect()),
        );
        let mut vertices: Vec<Side<V, W>> = self.vertices.iter().cloned().map(Side::Left).collect();
        vertices.extend(other.vertices.iter().cloned().map(Side::Right));
        SimplicialComplex::new(vertices, simplices).unwrap()
    }

    /// Induced subcomplex on the given vertices.
    pub fn induced(&self, keep: &[V]) -> Self {
        let keep_ids: BTreeSet<usize> = keep.iter().filter_map(|v| self.vertex_index(v)).collect();
        let simplices = self
            .maximal
            .iter()
            .map(|m| {
                m.iter()
                    .filter(|i| keep_ids.contains(i))
                    .map(|&i| self.vertices[i].clone())
                    .collect()
            })
            .collect();
        let vertices = keep_ids.iter().map(|&i| self.vertices[i].clone()).collect();
        Self::new(vertices, simplices).unwrap()
    }

    /// Applies a vertex relabeling and compares maximal simplices with
    /// `other`. The map must be a bijection onto `other`'s vertices.
    pub fn is_isomorphic_via<W: Label>(&self, other: &SimplicialComplex<W>, map: impl Fn(&V) -> W) -> bool {
        let image: BTreeSet<W> = self.vertices.iter().map(&map).collect();
        if image.len() != self.vertices.len() || image != other.vertices.iter().cloned().collect() {
            return false;
        }
        let ours: BTreeSet<BTreeSet<W>> = self
            .maximal_simplices()
            .iter()
            .map(|s| s.iter().map(&map).collect())
            .collect();
        let theirs: BTreeSet<BTreeSet<W>> = other
            .maximal_simplices()
            .into_iter()
            .map(|s| s.into_iter().collect())
            .collect();
        ours == theirs
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            vertices: self.vertices.iter().map(ToString::to_string).collect(),
            maximal: self.maximal.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ComplexJson {
    pub vertices: Vec<String>,
    pub maximal: Vec<Vec<usize>>,
}

fn keep_maximal(mut gens: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    gens.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    gens.dedup();
    let mut kept: Vec<Vec<usize>> = Vec::new();
    for g in gens {
        let covered = kept.iter().any(|k| g.iter().all(|i| k.binary_search(i).is_ok()));
        if !covered {
            kept.push(g);
        }
    }
    kept.sort();
    if kept.is_empty() {
        kept.push(Vec::new());
    }
    kept
}

fn boundary_rank(faces: &[Vec<usize>], lower: &[Vec<usize>]) -> usize {
    let pos: HashMap<&[usize], usize> = lower.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
    let rows: Vec<Vec<(usize, i64)>> = faces
        .iter()
        .map(|f| {
            (0..f.len())
                .map(|drop| {
                    let sub: Vec<usize> = f
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != drop)
                        .map(|(_, &v)| v)
                        .collect();
                    let sign = if drop % 2 == 0 { 1 } else { -1 };
                    (pos[sub.as_slice()], sign)
                })
                .collect()
        })
        .collect();
    sparse_rank(&rows)
}

/// Boundary of the `(k+1)`-simplex on vertices `0..=k+1`, a `k`-sphere.
pub fn simplex_boundary(k: usize) -> SimplicialComplex<usize> {
    let n = k + 2;
    let simplices = (0..n).map(|skip| (0..n).filter(|&v| v != skip).collect()).collect();
    SimplicialComplex::new((0..n).collect(), simplices).unwrap()
}

/// Betti numbers of `S^k` in the form returned by [`SimplicialComplex::betti`].
pub fn sphere_betti(k: usize) -> Vec<usize> {
    if k == 0 {
        return vec![2];
    }
    let mut b = vec![0; k + 1];
    b[0] = 1;
    b[k] = 1;
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s0(a: &str, b: &str) -> SimplicialComplex<String> {
        SimplicialComplex::new(vec![a.into(), b.into()], vec![]).unwrap()
    }

    #[test]
    fn maximal_reduction() {
        let c = SimplicialComplex::new(vec![1, 2, 3], vec![vec![1, 2], vec![1], vec![2, 1], vec![1, 2, 3]]).unwrap();
        assert_eq!(c.maximal_indices(), &[vec![0, 1, 2]]);
        assert_eq!(c.f_vector().unwrap(), vec![3, 3, 1]);
        assert!(c.contains(&[3, 1]));
        assert!(!c.contains(&[4]));
    }

    #[test]
    fn join_of_zero_spheres_is_a_circle() {
        let c = s0("a", "b").join(&s0("c", "d"));
        assert_eq!(c.f_vector().unwrap(), vec![4, 4]);
        assert_eq!(c.betti().unwrap(), vec![1, 1]);
    }

    #[test]
    fn cone_is_contractible() {
        let point = SimplicialComplex::new(vec!["p".to_string()], vec![]).unwrap();
        let circle = s0("a", "b").join(&s0("c", "d"));
        assert_eq!(point.join(&circle).betti().unwrap(), vec![1, 0, 0]);
    }

    #[test]
    fn octahedron() {
        let circle = s0("a", "b").join(&s0("c", "d"));
        let c = s0("e", "f").join(&circle);
        assert_eq!(c.betti().unwrap(), vec![1, 0, 1]);
        assert_eq!(c.reduced_euler().unwrap(), 1);
    }

    #[test]
    fn empty_complex_is_join_unit() {
        let e: SimplicialComplex<String> = SimplicialComplex::empty();
        assert_eq!(e.dim(), -1);
        assert_eq!(e.reduced_euler().unwrap(), -1);
        let x = s0("a", "b");
        let j = e.join_disjoint(&x).unwrap();
        assert_eq!(j, x);
        assert_eq!(e.join_disjoint(&e).unwrap().maximal_indices(), &[Vec::<usize>::new()]);
    }

    #[test]
    fn collision_is_reported() {
        assert!(matches!(
            s0("a", "b").join_disjoint(&s0("b", "c")),
            Err(ComplexError::LabelCollision(_))
        ));
    }

    #[test]
    fn simplex_boundaries_are_spheres() {
        for k in 0..5 {
            assert_eq!(simplex_boundary(k).betti().unwrap(), sphere_betti(k));
        }
    }

    #[test]
    fn induced_subcomplex() {
        let c = simplex_boundary(2);
        let sub = c.induced(&[0, 1, 2]);
        assert_eq!(sub.f_vector().unwrap(), vec![3, 3, 1]);
    }
}
