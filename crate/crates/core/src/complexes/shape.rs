//! Joins of spheres and spheres-with-a-point, and their obstructor value.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::SimplicialComplex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShapeError {
    #[error("shape has no factors")]
    Empty,
}

/// `S^a * S^{k_1}_+ * ... * S^{k_r}_+`, where `S^k_+` is `S^k` with a
/// disjoint point added and the plain factor `S^a` is optional.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructorShape {
    pub sphere_dim: Option<u32>,
    pub plus_dims: Vec<u32>,
}

impl ObstructorShape {
    pub fn new(sphere_dim: Option<u32>, plus_dims: Vec<u32>) -> Result<Self, ShapeError> {
        if sphere_dim.is_none() && plus_dims.is_empty() {
            return Err(ShapeError::Empty);
        }
        Ok(ObstructorShape { sphere_dim, plus_dims })
    }

    pub fn plus(plus_dims: Vec<u32>) -> Result<Self, ShapeError> {
        Self::new(None, plus_dims)
    }

    /// `a + Σk_i + 2r - 1` with the plain sphere, `Σk_i + 2r - 2` without.
    pub fn m(&self) -> i64 {
        let r = self.plus_dims.len() as i64;
        let k: i64 = self.plus_dims.iter().map(|&k| i64::from(k)).sum();
        match self.sphere_dim {
            Some(a) => i64::from(a) + k + 2 * r - 1,
            None => k + 2 * r - 2,
        }
    }

    /// `Σ(k_i + 2) + (a + 1)`: the number of free coordinates in the cone
    /// over the join, counting each ray.
    pub fn cone_dimension(&self) -> i64 {
        let plus: i64 = self.plus_dims.iter().map(|&k| i64::from(k) + 2).sum();
        plus + self.sphere_dim.map_or(0, |a| i64::from(a) + 1)
    }

    /// The join realized with octahedral spheres.
    pub fn model_complex(&self) -> SimplicialComplex<ModelVertex> {
        let mut out = SimplicialComplex::empty();
        if let Some(a) = self.sphere_dim {
            out = out.join_disjoint(&model_sphere(0, a, false)).unwrap();
        }
        for (i, &k) in self.plus_dims.iter().enumerate() {
            out = out.join_disjoint(&model_sphere(i + 1, k, true)).unwrap();
        }
        out
    }
}

impl fmt::Display for ObstructorShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(a) = self.sphere_dim {
            parts.push(format!("S^{a}"));
        }
        parts.extend(self.plus_dims.iter().map(|k| format!("S^{k}_+")));
        f.write_str(&parts.join(" * "))
    }
}

/// Vertex of the model join: factor 0 is the plain sphere, factor `i >= 1`
/// the `i`-th plus factor. `coord` is `None` for the added point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ModelVertex {
    pub factor: usize,
    pub coord: Option<(usize, bool)>,
}

impl fmt::Display for ModelVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.coord {
            Some((j, positive)) => write!(f, "f{}e{}{}", self.factor, j, if positive { '+' } else { '-' }),
            None => write!(f, "f{}p", self.factor),
        }
    }
}

/// `S^k` as the join of `k + 1` zero-spheres, plus a disjoint point if asked.
pub fn model_sphere(factor: usize, k: u32, with_point: bool) -> SimplicialComplex<ModelVertex> {
    let k = k as usize;
    let mut simplices = Vec::with_capacity(1 << (k + 1));
    for mask in 0u64..1 << (k + 1) {
        simplices.push(
            (0..=k)
                .map(|j| ModelVertex {
                    factor,
                    coord: Some((j, mask >> j & 1 == 0)),
                })
                .collect(),
        );
    }
    if with_point {
        simplices.push(vec![ModelVertex { factor, coord: None }]);
    }
    SimplicialComplex::from_simplices(simplices)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m_values() {
        assert_eq!(ObstructorShape::plus(vec![0, 1]).unwrap().m(), 3);
        assert_eq!(ObstructorShape::plus(vec![0]).unwrap().m(), 0);
        assert_eq!(ObstructorShape::new(Some(2), vec![]).unwrap().m(), 1);
        assert_eq!(ObstructorShape::new(None, vec![]), Err(ShapeError::Empty));
    }

    #[test]
    fn model_of_s0_plus() {
        let c = ObstructorShape::plus(vec![0]).unwrap().model_complex();
        assert_eq!(c.vertices().len(), 3);
        assert_eq!(c.f_vector().unwrap(), vec![3]);
    }

    #[test]
    fn display() {
        let s = ObstructorShape::new(Some(1), vec![1, 3]).unwrap();
        assert_eq!(s.to_string(), "S^1 * S^1_+ * S^3_+");
    }
}
