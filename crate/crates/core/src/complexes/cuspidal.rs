//! The cuspidal complex `C(n)`, its signed double `SC`, and the obstructor
//! subcomplex `L ⊂ SC`.
//!
//! Vertices of `C(n)` are off-diagonal positions `(i, j)` of an `n x n`
//! matrix, read as arrows `i -> j`; a set of positions is a simplex iff the
//! arrows have no oriented cycle.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use petgraph::algo::is_cyclic_directed;
use petgraph::graphmap::DiGraphMap;
use serde::Serialize;

use super::{Label, ModelVertex, ObstructorShape, SimplicialComplex};

/// Matrix position `(row, col)`, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Arrow {
    pub row: usize,
    pub col: usize,
}

impl Arrow {
    pub fn new(row: usize, col: usize) -> Self {
        Arrow { row, col }
    }

    pub fn is_above_diagonal(&self) -> bool {
        self.row < self.col
    }
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.row < 10 && self.col < 10 {
            write!(f, "{}{}", self.row, self.col)
        } else {
            write!(f, "({},{})", self.row, self.col)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseVertexError(pub String);

impl fmt::Display for ParseVertexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse vertex {:?}", self.0)
    }
}

impl std::error::Error for ParseVertexError {}

impl FromStr for Arrow {
    type Err = ParseVertexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseVertexError(s.to_string());
        let t = s.trim();
        let (row, col) = if let Some(inner) = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')) {
            let (a, b) = inner.split_once(',').ok_or_else(err)?;
            (
                a.trim().parse().map_err(|_| err())?,
                b.trim().parse().map_err(|_| err())?,
            )
        } else {
            let digits: Vec<usize> = t
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize))
                .collect::<Option<_>>()
                .ok_or_else(err)?;
            match digits[..] {
                [a, b] => (a, b),
                _ => return Err(err()),
            }
        };
        if row == 0 || col == 0 || row == col {
            return Err(err());
        }
        Ok(Arrow { row, col })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// A vertex of a signed double: a base vertex with a sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Signed<V> {
    pub base: V,
    pub sign: Sign,
}

impl<V> Signed<V> {
    pub fn plus(base: V) -> Self {
        Signed { base, sign: Sign::Plus }
    }

    pub fn minus(base: V) -> Self {
        Signed {
            base,
            sign: Sign::Minus,
        }
    }
}

impl<V: fmt::Display> fmt::Display for Signed<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign == Sign::Plus { '+' } else { '-' };
        write!(f, "{}{}", self.base, s)
    }
}

pub type SignedPosition = Signed<Arrow>;

impl FromStr for SignedPosition {
    type Err = ParseVertexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let (head, sign) = if let Some(h) = t.strip_suffix('+') {
            (h, Sign::Plus)
        } else if let Some(h) = t.strip_suffix('-').or_else(|| t.strip_suffix('−')) {
            (h, Sign::Minus)
        } else {
            return Err(ParseVertexError(s.to_string()));
        };
        let base = head.parse().map_err(|_| ParseVertexError(s.to_string()))?;
        Ok(Signed { base, sign })
    }
}

/// Whether the arrows form a simplex of `C(n)`: distinct off-diagonal
/// positions with no oriented cycle.
pub fn is_c_simplex(arrows: &[Arrow]) -> bool {
    let distinct: BTreeSet<&Arrow> = arrows.iter().collect();
    if distinct.len() != arrows.len() || arrows.iter().any(|a| a.row == a.col) {
        return false;
    }
    let graph: DiGraphMap<usize, ()> = arrows.iter().map(|a| (a.row, a.col)).collect();
    !is_cyclic_directed(&graph)
}

/// Whether signed positions form a simplex of `SC(C(n))`: forgetting signs
/// is injective and the image is a simplex of `C(n)`.
pub fn sc_contains(simplex: &[SignedPosition]) -> bool {
    let bases: Vec<Arrow> = simplex.iter().map(|v| v.base).collect();
    is_c_simplex(&bases)
}

fn positions(n: usize) -> Vec<Arrow> {
    (1..=n)
        .flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| Arrow::new(i, j)))
        .collect()
}

/// `C(n)`. Its maximal simplices are the transitive tournaments, one per
/// ordering of `1..=n`.
pub fn build_c(n: usize) -> SimplicialComplex<Arrow> {
    assert!(n >= 2, "C(n) needs n >= 2");
    let maximal = (1..=n)
        .permutations(n)
        .map(|perm| {
            perm.iter()
                .tuple_combinations()
                .map(|(&a, &b)| Arrow::new(a, b))
                .collect::<Vec<_>>()
        })
        .collect();
    SimplicialComplex::new(positions(n), maximal).unwrap()
}

/// The signed double of any complex. Each maximal `k`-simplex lifts to
/// `2^(k+1)` maximal simplices.
pub fn build_sc<V: Label>(c: &SimplicialComplex<V>) -> SimplicialComplex<Signed<V>> {
    let vertices = c
        .vertices()
        .iter()
        .flat_map(|v| [Signed::plus(v.clone()), Signed::minus(v.clone())])
        .collect();
    let mut lifts = Vec::new();
    for m in c.maximal_simplices() {
        for mask in 0u64..1 << m.len() {
            lifts.push(
                m.iter()
                    .enumerate()
                    .map(|(b, v)| Signed {
                        base: v.clone(),
                        sign: if mask >> b & 1 == 0 { Sign::Plus } else { Sign::Minus },
                    })
                    .collect(),
            );
        }
    }
    SimplicialComplex::new(vertices, lifts).unwrap()
}

/// Full preimage of a simplex of `C(n)` under the sign-forgetting map,
/// computed by testing every set of signed lifts against [`sc_contains`].
pub fn sc_preimage(simplex: &[Arrow]) -> SimplicialComplex<SignedPosition> {
    let candidates: Vec<SignedPosition> = simplex
        .iter()
        .flat_map(|&a| [Signed::plus(a), Signed::minus(a)])
        .collect();
    assert!(candidates.len() <= 20, "preimage too large to enumerate");
    let mut simplices = Vec::new();
    for mask in 1u64..1 << candidates.len() {
        let s: Vec<SignedPosition> = (0..candidates.len())
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| candidates[b])
            .collect();
        if sc_contains(&s) {
            simplices.push(s);
        }
    }
    SimplicialComplex::new(candidates, simplices).unwrap()
}

/// One join factor `S^{k-2}_+` of `L`: the signed lifts of the positions
/// `(1,k), .., (k-1,k)` and the extra point `(k, k-1)+`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LFactor {
    pub column: usize,
    pub sphere: Vec<Arrow>,
    pub point: Arrow,
}

impl LFactor {
    fn new(k: usize) -> Self {
        LFactor {
            column: k,
            sphere: (1..k).map(|i| Arrow::new(i, k)).collect(),
            point: Arrow::new(k, k - 1),
        }
    }

    pub fn sphere_dim(&self) -> u32 {
        self.sphere.len() as u32 - 1
    }

    fn complex(&self) -> SimplicialComplex<SignedPosition> {
        let mut simplices: Vec<Vec<SignedPosition>> = (0u64..1 << self.sphere.len())
            .map(|mask| {
                self.sphere
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
        simplices.push(vec![Signed::plus(self.point)]);
        SimplicialComplex::from_simplices(simplices)
    }
}

/// `L = S^0_+ * S^1_+ * ... * S^{n-2}_+` inside `SC(C(n))`.
#[derive(Debug, Clone)]
pub struct ObstructorL {
    pub n: usize,
    pub factors: Vec<LFactor>,
    pub complex: SimplicialComplex<SignedPosition>,
}

/// Builds `L` as the join of its factors. The join is a proper subcomplex
/// of the subcomplex of `SC` induced on the same vertices.
pub fn extract_l(n: usize) -> ObstructorL {
    assert!(n >= 2, "L needs n >= 2");
    let factors: Vec<LFactor> = (2..=n).map(LFactor::new).collect();
    let mut complex = SimplicialComplex::empty();
    for f in &factors {
        complex = complex
            .join_disjoint(&f.complex())
            .expect("factors use distinct positions");
    }
    ObstructorL { n, factors, complex }
}

impl ObstructorL {
    /// Shape read off the factors.
    pub fn shape(&self) -> ObstructorShape {
        ObstructorShape::plus(self.factors.iter().map(LFactor::sphere_dim).collect()).unwrap()
    }

    /// Whether every maximal simplex of `L` is a simplex of `SC(C(n))`.
    pub fn lies_in_sc(&self) -> bool {
        self.complex.maximal_simplices().iter().all(|s| sc_contains(s))
            && self
                .complex
                .vertices()
                .iter()
                .all(|v| v.base.row <= self.n && v.base.col <= self.n)
    }

    /// The vertex bijection onto the model join of [`ObstructorShape::model_complex`].
    pub fn to_model(&self, v: &SignedPosition) -> ModelVertex {
        let k = self
            .factors
            .iter()
            .position(|f| f.column == v.base.col && f.sphere.contains(&v.base) || f.point == v.base)
            .expect("vertex of L");
        let f = &self.factors[k];
        if f.point == v.base {
            ModelVertex {
                factor: k + 1,
                coord: None,
            }
        } else {
            ModelVertex {
                factor: k + 1,
                coord: Some((v.base.row - 1, v.sign == Sign::Plus)),
            }
        }
    }

    /// Checks that [`to_model`](Self::to_model) is an isomorphism onto the
    /// model of [`shape`](Self::shape).
    pub fn is_isomorphic_to_model(&self) -> bool {
        let model = self.shape().model_complex();
        self.complex.is_isomorphic_via(&model, |v| self.to_model(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(s: &str) -> SignedPosition {
        s.parse().unwrap()
    }

    #[test]
    fn parse_positions() {
        assert_eq!(sp("23+"), Signed::plus(Arrow::new(2, 3)));
        assert_eq!(sp("13-"), Signed::minus(Arrow::new(1, 3)));
        assert_eq!(sp("(10,2)+").base, Arrow::new(10, 2));
        assert!("22+".parse::<SignedPosition>().is_err());
        assert!("23".parse::<SignedPosition>().is_err());
        assert_eq!(Arrow::new(10, 2).to_string(), "(10,2)");
    }

    #[test]
    fn cycles_are_rejected() {
        assert!(is_c_simplex(&[Arrow::new(1, 2), Arrow::new(2, 3), Arrow::new(1, 3)]));
        assert!(!is_c_simplex(&[Arrow::new(1, 2), Arrow::new(2, 1)]));
        assert!(!is_c_simplex(&[Arrow::new(1, 2), Arrow::new(2, 3), Arrow::new(3, 1)]));
        assert!(!sc_contains(&[sp("12+"), sp("12-")]));
    }

    #[test]
    fn l3_vertices() {
        let l = extract_l(3);
        assert_eq!(l.complex.vertices().len(), 8);
        assert!(l.lies_in_sc());
        assert!(l.is_isomorphic_to_model());
        assert_eq!(l.shape().plus_dims, vec![0, 1]);
    }
}
