//! Cone maps into `SL_n(R)` and the unipotent group `N_n`, evaluated in
//! exact arithmetic, with a numerical harness for properness and
//! divergence.

pub mod adjoint;
pub mod harness;
pub mod lemma25;
mod maps;

pub use maps::{
    fibration_compose, heisenberg_map, naive_map, psi_sl, split_map, ConstantMap, FibrationMap, HeisenbergMap, PsiMap,
    TrivialMap,
};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::complexes::{Label, SimplicialComplex};
use crate::exact::{log_abs, ExactMatrix, MatrixError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("vertex {0} is not allowed by this map")]
    BadVertex(String),
    #[error("simplex [{0}] is not in the domain")]
    BadSimplex(String),
    #[error("matrix size {0} is too small")]
    InvalidSize(usize),
    #[error("invalid cone point: {0}")]
    BadPoint(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A point `(x, t)` of `cone(K) = K x [0, inf) / K x {0}`, with `x` given
/// by barycentric weights on a simplex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConePoint<V> {
    pub simplex: Vec<V>,
    pub weights: Vec<BigRational>,
    pub t: BigRational,
}

impl<V: Label> ConePoint<V> {
    pub fn new(simplex: Vec<V>, weights: Vec<BigRational>, t: BigRational) -> Result<Self, ModelError> {
        if simplex.len() != weights.len() {
            return Err(ModelError::BadPoint(format!(
                "{} weights for {} vertices",
                weights.len(),
                simplex.len()
            )));
        }
        if t.is_negative() {
            return Err(ModelError::BadPoint("negative radius".into()));
        }
        if weights.iter().any(Signed::is_negative) {
            return Err(ModelError::BadPoint("negative weight".into()));
        }
        if simplex.is_empty() {
            if !t.is_zero() {
                return Err(ModelError::BadPoint("empty simplex away from the apex".into()));
            }
        } else if !weights.iter().sum::<BigRational>().is_one() {
            return Err(ModelError::BadPoint("weights do not sum to 1".into()));
        }
        let mut seen = simplex.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != simplex.len() {
            return Err(ModelError::BadPoint("repeated vertex".into()));
        }
        Ok(ConePoint { simplex, weights, t })
    }

    pub fn apex() -> Self {
        ConePoint {
            simplex: Vec::new(),
            weights: Vec::new(),
            t: BigRational::zero(),
        }
    }

    pub fn barycenter(simplex: Vec<V>, t: BigRational) -> Result<Self, ModelError> {
        let k = simplex.len() as i64;
        let w = vec![crate::exact::ratio(1, k.max(1)); simplex.len()];
        Self::new(simplex, w, t)
    }

    /// `weight * t` for every vertex.
    pub fn coordinates(&self) -> impl Iterator<Item = (&V, BigRational)> {
        self.simplex.iter().zip(&self.weights).map(|(v, w)| (v, w * &self.t))
    }

    pub fn is_apex(&self) -> bool {
        self.t.is_zero()
    }
}

/// A map from the open cone on a finite complex to a matrix group.
pub trait ConeMap: Sync {
    type Vertex: Label + Send + Sync;

    fn matrix_size(&self) -> usize;

    fn domain(&self) -> &SimplicialComplex<Self::Vertex>;

    fn eval(&self, p: &ConePoint<Self::Vertex>) -> Result<ExactMatrix, ModelError>;

    /// The image together with its inverse.
    fn eval_with_inverse(&self, p: &ConePoint<Self::Vertex>) -> Result<(ExactMatrix, ExactMatrix), ModelError> {
        let g = self.eval(p)?;
        let inv = g.inverse()?;
        Ok((g, inv))
    }
}

/// `log max(|g|_max, |g^-1|_max, 1)`.
pub fn size(g: &ExactMatrix) -> Result<f64, MatrixError> {
    let inv = g.inverse()?;
    Ok(size_with_inverse(g, &inv))
}

pub fn size_with_inverse(g: &ExactMatrix, inv: &ExactMatrix) -> f64 {
    log_max_abs(g).max(log_max_abs(inv)).max(0.0)
}

fn log_max_abs(g: &ExactMatrix) -> f64 {
    let m = g.max_abs();
    if m.is_zero() {
        f64::NEG_INFINITY
    } else {
        log_abs(&m)
    }
}

/// `D(A, B) = size(A^-1 B)`.
pub fn divergence(a: &ExactMatrix, b: &ExactMatrix) -> Result<f64, MatrixError> {
    let d = a.inverse()?.try_mul(b)?;
    size(&d)
}

/// `D(A, B)` from cached inverses: `A^-1 B` and its inverse `B^-1 A`.
pub fn divergence_cached(a: &ExactMatrix, a_inv: &ExactMatrix, b: &ExactMatrix, b_inv: &ExactMatrix) -> f64 {
    let ab = a_inv * b;
    let ba = b_inv * a;
    size_with_inverse(&ab, &ba)
}
