use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;

use super::{ConeMap, ConePoint, ModelError};
use crate::complexes::{
    extract_l, sc_contains, Arrow, Label, ObstructorL, Side, Signed, SignedPosition, SimplicialComplex,
};
use crate::exact::{ExactMatrix, MatrixError};

fn simplex_label<V: Label>(simplex: &[V]) -> String {
    simplex.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn check_in_range(n: usize, p: &ConePoint<SignedPosition>) -> Result<(), ModelError> {
    for v in &p.simplex {
        let a = v.base;
        if a.row == 0 || a.col == 0 || a.row > n || a.col > n || a.row == a.col {
            return Err(ModelError::BadVertex(v.to_string()));
        }
    }
    Ok(())
}

/// Writes `sign * weight * t` into each position of the simplex.
fn place(n: usize, p: &ConePoint<SignedPosition>, keep: impl Fn(&Arrow) -> bool) -> ExactMatrix {
    let mut g = ExactMatrix::identity(n);
    if p.is_apex() {
        return g;
    }
    for (v, x) in p.coordinates() {
        if keep(&v.base) && !x.is_zero() {
            let x = if v.sign.value() < 0 { -x } else { x };
            g[(v.base.row - 1, v.base.col - 1)] += x;
        }
    }
    g
}

/// Upper unitriangular matrix with `sign * weight * t` at each position of
/// the simplex and zero at the other positions above the diagonal.
pub fn heisenberg_map(n: usize, p: &ConePoint<SignedPosition>) -> Result<ExactMatrix, ModelError> {
    check_in_range(n, p)?;
    if let Some(v) = p.simplex.iter().find(|v| !v.base.is_above_diagonal()) {
        return Err(ModelError::BadVertex(v.to_string()));
    }
    let bases: BTreeSet<Arrow> = p.simplex.iter().map(|v| v.base).collect();
    if bases.len() != p.simplex.len() {
        return Err(ModelError::BadSimplex(simplex_label(&p.simplex)));
    }
    Ok(place(n, p, |_| true))
}

/// The split map on a simplex of `SC(C(n))`: the above-diagonal
/// coordinates form `U`, the below-diagonal ones `Λ`, and the value is `UΛ`.
pub fn split_map(n: usize, p: &ConePoint<SignedPosition>) -> Result<ExactMatrix, ModelError> {
    Ok(split_parts(n, p)?.0)
}

fn split_parts(n: usize, p: &ConePoint<SignedPosition>) -> Result<(ExactMatrix, ExactMatrix), ModelError> {
    check_in_range(n, p)?;
    if !sc_contains(&p.simplex) {
        return Err(ModelError::BadSimplex(simplex_label(&p.simplex)));
    }
    let u = place(n, p, Arrow::is_above_diagonal);
    let lambda = place(n, p, |a| !a.is_above_diagonal());
    let inv = &lambda.inverse()? * &u.inverse()?;
    Ok((&u * &lambda, inv))
}

/// `I + Σ sign * weight * t * E_ij` with no splitting. Kept as the
/// counterexample: this map does not separate disjoint simplices.
pub fn naive_map(n: usize, p: &ConePoint<SignedPosition>) -> Result<ExactMatrix, ModelError> {
    check_in_range(n, p)?;
    if !sc_contains(&p.simplex) {
        return Err(ModelError::BadSimplex(simplex_label(&p.simplex)));
    }
    Ok(place(n, p, |_| true))
}

/// The split map restricted to `L`.
pub fn psi_sl(n: usize, p: &ConePoint<SignedPosition>) -> Result<ExactMatrix, ModelError> {
    PsiMap::new(n).eval(p)
}

/// `cone(S^{m+1}) -> N_n`, with `S^{m+1}` the join of one `S^0` per
/// allowed position.
#[derive(Debug, Clone)]
pub struct HeisenbergMap {
    n: usize,
    positions: Vec<Arrow>,
    domain: SimplicialComplex<SignedPosition>,
}

impl HeisenbergMap {
    /// All positions above the diagonal.
    pub fn new(n: usize) -> Self {
        let positions = (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| Arrow::new(i, j)))
            .collect();
        Self::with_positions(n, positions).expect("positions above the diagonal")
    }

    pub fn with_positions(n: usize, positions: Vec<Arrow>) -> Result<Self, ModelError> {
        if let Some(a) = positions.iter().find(|a| !a.is_above_diagonal() || a.col > n) {
            return Err(ModelError::BadVertex(a.to_string()));
        }
        let k = positions.len();
        let simplices = (0u64..1 << k)
            .map(|mask| {
                positions
                    .iter()
                    .enumerate()
                    .map(|(b, &a)| {
                        if mask >> b & 1 == 0 {
                            Signed::plus(a)
                        } else {
                            Signed::minus(a)
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(HeisenbergMap {
            n,
            positions,
            domain: SimplicialComplex::from_simplices(simplices),
        })
    }

    pub fn positions(&self) -> &[Arrow] {
        &self.positions
    }
}

impl ConeMap for HeisenbergMap {
    type Vertex = SignedPosition;

    fn matrix_size(&self) -> usize {
        self.n
    }

    fn domain(&self) -> &SimplicialComplex<SignedPosition> {
        &self.domain
    }

    fn eval(&self, p: &ConePoint<SignedPosition>) -> Result<ExactMatrix, ModelError> {
        if let Some(v) = p.simplex.iter().find(|v| !self.positions.contains(&v.base)) {
            return Err(ModelError::BadVertex(v.to_string()));
        }
        heisenberg_map(self.n, p)
    }
}

/// `Ψ` on `cone(L)` for `SL_n(R)`.
#[derive(Debug, Clone)]
pub struct PsiMap {
    l: ObstructorL,
}

impl PsiMap {
    pub fn new(n: usize) -> Self {
        PsiMap { l: extract_l(n) }
    }

    pub fn obstructor(&self) -> &ObstructorL {
        &self.l
    }
}

impl ConeMap for PsiMap {
    type Vertex = SignedPosition;

    fn matrix_size(&self) -> usize {
        self.l.n
    }

    fn domain(&self) -> &SimplicialComplex<SignedPosition> {
        &self.l.complex
    }

    fn eval(&self, p: &ConePoint<SignedPosition>) -> Result<ExactMatrix, ModelError> {
        Ok(self.eval_with_inverse(p)?.0)
    }

    fn eval_with_inverse(&self, p: &ConePoint<SignedPosition>) -> Result<(ExactMatrix, ExactMatrix), ModelError> {
        if !self.l.complex.contains(&p.simplex) {
            return Err(ModelError::BadSimplex(simplex_label(&p.simplex)));
        }
        split_parts(self.l.n, p)
    }
}

/// Sends every point to the same matrix. Not proper.
#[derive(Debug, Clone)]
pub struct ConstantMap<V> {
    pub value: ExactMatrix,
    pub domain: SimplicialComplex<V>,
}

impl<V: Label + Send + Sync> ConeMap for ConstantMap<V> {
    type Vertex = V;

    fn matrix_size(&self) -> usize {
        self.value.size()
    }

    fn domain(&self) -> &SimplicialComplex<V> {
        &self.domain
    }

    fn eval(&self, _: &ConePoint<V>) -> Result<ExactMatrix, ModelError> {
        Ok(self.value.clone())
    }
}

/// The map from the cone on the empty complex, a single point, to the
/// identity of the trivial group.
#[derive(Debug, Clone)]
pub struct TrivialMap {
    n: usize,
    domain: SimplicialComplex<String>,
}

impl TrivialMap {
    pub fn new(n: usize) -> Self {
        TrivialMap {
            n,
            domain: SimplicialComplex::empty(),
        }
    }
}

impl ConeMap for TrivialMap {
    type Vertex = String;

    fn matrix_size(&self) -> usize {
        self.n
    }

    fn domain(&self) -> &SimplicialComplex<String> {
        &self.domain
    }

    fn eval(&self, p: &ConePoint<String>) -> Result<ExactMatrix, ModelError> {
        if !p.is_apex() || !p.simplex.is_empty() {
            return Err(ModelError::BadSimplex(simplex_label(&p.simplex)));
        }
        Ok(ExactMatrix::identity(self.n))
    }
}

type Hom = Box<dyn Fn(&ExactMatrix) -> ExactMatrix + Send + Sync>;

/// `f(x, y) = embed(α(x)) · section(β(y))` on the cone over the join
/// `K_H * K_Q`.
pub struct FibrationMap<A: ConeMap, B: ConeMap> {
    alpha: A,
    beta: B,
    embed: Hom,
    section: Hom,
    n: usize,
    domain: SimplicialComplex<Side<A::Vertex, B::Vertex>>,
}

pub fn fibration_compose<A: ConeMap, B: ConeMap>(
    alpha: A,
    beta: B,
    section: impl Fn(&ExactMatrix) -> ExactMatrix + Send + Sync + 'static,
    embed: impl Fn(&ExactMatrix) -> ExactMatrix + Send + Sync + 'static,
) -> Result<FibrationMap<A, B>, ModelError> {
    let left = embed(&ExactMatrix::identity(alpha.matrix_size())).size();
    let right = section(&ExactMatrix::identity(beta.matrix_size())).size();
    if left != right {
        return Err(MatrixError::DimensionMismatch { left, right }.into());
    }
    let domain = alpha.domain().join(beta.domain());
    Ok(FibrationMap {
        alpha,
        beta,
        embed: Box::new(embed),
        section: Box::new(section),
        n: left,
        domain,
    })
}

/// Restricts a join point to one side, rescaling weights and radius.
fn restrict<V: Label>(parts: Vec<(V, BigRational)>, t: &BigRational) -> ConePoint<V> {
    let total: BigRational = parts.iter().map(|(_, w)| w.clone()).sum();
    if total.is_zero() || t.is_zero() {
        return ConePoint::apex();
    }
    let (simplex, weights): (Vec<V>, Vec<BigRational>) = parts.into_iter().map(|(v, w)| (v, w / &total)).unzip();
    ConePoint {
        simplex,
        weights,
        t: t * total,
    }
}

impl<A: ConeMap, B: ConeMap> FibrationMap<A, B> {
    /// The two factor points `(x, y)` of a point on the join.
    pub fn split(&self, p: &ConePoint<Side<A::Vertex, B::Vertex>>) -> (ConePoint<A::Vertex>, ConePoint<B::Vertex>) {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for (v, w) in p.simplex.iter().zip(&p.weights) {
            match v {
                Side::Left(a) => left.push((a.clone(), w.clone())),
                Side::Right(b) => right.push((b.clone(), w.clone())),
            }
        }
        (restrict(left, &p.t), restrict(right, &p.t))
    }
}

impl<A: ConeMap, B: ConeMap> ConeMap for FibrationMap<A, B> {
    type Vertex = Side<A::Vertex, B::Vertex>;

    fn matrix_size(&self) -> usize {
        self.n
    }

    fn domain(&self) -> &SimplicialComplex<Self::Vertex> {
        &self.domain
    }

    fn eval(&self, p: &ConePoint<Self::Vertex>) -> Result<ExactMatrix, ModelError> {
        if !self.domain.contains(&p.simplex) {
            return Err(ModelError::BadSimplex(simplex_label(&p.simplex)));
        }
        let (x, y) = self.split(p);
        let h = (self.embed)(&self.alpha.eval(&x)?);
        let q = (self.section)(&self.beta.eval(&y)?);
        Ok(h.try_mul(&q)?)
    }
}
