//! Root systems in simple-root coordinates.
//!
//! Roots are integer vectors over the simple roots `α_1..α_r`. Irreducible
//! systems are built from the usual orthonormal models and converted; the
//! orthonormal vectors are discarded afterwards. Node indices are zero-based
//! throughout the API (`α_1` is index 0).

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact::{rat, ExactMatrix};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootSystemError {
    #[error("invalid rank {rank} for type {family}")]
    InvalidRank { family: Family, rank: usize },
    #[error("{0} is not a simple root")]
    NotSimpleRoot(Root),
    #[error("node index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("vector has length {got}, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("cannot parse root system type {0:?}")]
    Parse(String),
    #[error("{0} is not a positive root")]
    NotPositiveRoot(Root),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E6,
    E7,
    E8,
    F4,
    G2,
    BC,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::A,
        Family::B,
        Family::C,
        Family::D,
        Family::E6,
        Family::E7,
        Family::E8,
        Family::F4,
        Family::G2,
        Family::BC,
    ];

    fn fixed_rank(self) -> Option<usize> {
        match self {
            Family::E6 => Some(6),
            Family::E7 => Some(7),
            Family::E8 => Some(8),
            Family::F4 => Some(4),
            Family::G2 => Some(2),
            _ => None,
        }
    }

    fn min_rank(self) -> usize {
        match self {
            Family::A | Family::BC => 1,
            Family::B | Family::C => 2,
            Family::D => 4,
            other => other.fixed_rank().unwrap(),
        }
    }

    /// Smallest rank at which the family is conventionally irreducible and
    /// distinct from the others.
    fn standard_min_rank(self) -> usize {
        match self {
            Family::B => 3,
            Family::BC => 2,
            other => other.min_rank(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::E6 => "E",
            Family::E7 => "E",
            Family::E8 => "E",
            Family::F4 => "F",
            Family::G2 => "G",
            Family::BC => "BC",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootSystemType {
    family: Family,
    rank: usize,
}

impl RootSystemType {
    pub fn new(family: Family, rank: usize) -> Result<Self, RootSystemError> {
        let ok = match family.fixed_rank() {
            Some(r) => rank == r,
            None => rank >= family.min_rank(),
        };
        if !ok {
            return Err(RootSystemError::InvalidRank { family, rank });
        }
        Ok(RootSystemType { family, rank })
    }

    /// Accepts the degenerate ranks `B_1`, `C_1`, `D_2`, `D_3` that arise
    /// when a family formula is applied at small size. `D_1` has no roots
    /// and is still rejected.
    pub fn new_degenerate(family: Family, rank: usize) -> Result<Self, RootSystemError> {
        let ok = match family {
            Family::B | Family::C => rank >= 1,
            Family::D => rank >= 2,
            _ => return Self::new(family, rank),
        };
        if !ok {
            return Err(RootSystemError::InvalidRank { family, rank });
        }
        Ok(RootSystemType { family, rank })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_standard(&self) -> bool {
        self.rank >= self.family.standard_min_rank()
    }

    pub fn is_reduced(&self) -> bool {
        self.family != Family::BC
    }

    /// Number of positive roots by the classical closed forms.
    pub fn positive_root_count(&self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1) / 2,
            Family::B | Family::C => n * n,
            Family::D => n * (n - 1),
            Family::E6 => 36,
            Family::E7 => 63,
            Family::E8 => 120,
            Family::F4 => 24,
            Family::G2 => 6,
            Family::BC => n * n + n,
        }
    }

    /// Coefficients of the highest root over the simple roots, in the
    /// standard numbering. For `BC_n` the simple roots are
    /// `e_1-e_2, .., e_{n-1}-e_n, e_n`, so the highest root `2e_1` has all
    /// coefficients 2. Only meaningful for standard ranks.
    pub fn highest_root_table(&self) -> Vec<i64> {
        let n = self.rank;
        match self.family {
            Family::A => vec![1; n],
            Family::B => {
                let mut v = vec![2; n];
                v[0] = 1;
                v
            }
            Family::C => {
                let mut v = vec![2; n];
                v[n - 1] = 1;
                v
            }
            Family::D => {
                let mut v = vec![2; n];
                v[0] = 1;
                v[n - 2] = 1;
                v[n - 1] = 1;
                v
            }
            Family::E6 => vec![1, 2, 2, 3, 2, 1],
            Family::E7 => vec![2, 2, 3, 4, 3, 2, 1],
            Family::E8 => vec![2, 3, 4, 6, 5, 4, 3, 2],
            Family::F4 => vec![2, 3, 4, 2],
            Family::G2 => vec![3, 2],
            Family::BC => vec![2; n],
        }
    }
}

impl fmt::Display for RootSystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for RootSystemType {
    type Err = RootSystemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let split = t
            .find(|c: char| c.is_ascii_digit())
            .ok_or_else(|| RootSystemError::Parse(s.to_string()))?;
        let (head, digits) = t.split_at(split);
        let rank: usize = digits.parse().map_err(|_| RootSystemError::Parse(s.to_string()))?;
        let family = match (head.to_ascii_uppercase().as_str(), rank) {
            ("A", _) => Family::A,
            ("B", _) => Family::B,
            ("C", _) => Family::C,
            ("D", _) => Family::D,
            ("BC", _) => Family::BC,
            ("E", 6) => Family::E6,
            ("E", 7) => Family::E7,
            ("E", 8) => Family::E8,
            ("F", 4) => Family::F4,
            ("G", 2) => Family::G2,
            _ => return Err(RootSystemError::Parse(s.to_string())),
        };
        RootSystemType::new(family, rank)
    }
}

/// Parses `A2`, `E8`, or products such as `A2xBC1`.
pub fn parse_types(s: &str) -> Result<Vec<RootSystemType>, RootSystemError> {
    s.split(['x', 'X', '*']).map(str::parse).collect()
}

/// Integer vector over the simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Root(pub Vec<i64>);

impl Root {
    pub fn zero(rank: usize) -> Self {
        Root(vec![0; rank])
    }

    pub fn simple(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Root(v)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.0.iter().all(|&c| c >= 0)
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> Root {
        Root(self.0.iter().map(|a| k * a).collect())
    }

    /// The `c > 0` with `self = c * other`, if one exists.
    pub fn positive_multiple_of(&self, other: &Root) -> Option<BigRational> {
        let pivot = other.0.iter().position(|&c| c != 0)?;
        let (num, den) = (self.0[pivot], other.0[pivot]);
        // self * den == other * num componentwise, and num/den > 0
        if (num > 0) != (den > 0) || num == 0 {
            return None;
        }
        let proportional = self.0.iter().zip(&other.0).all(|(a, b)| a * den == b * num);
        proportional.then(|| BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{sign}a{}", i + 1)?;
            } else {
                write!(f, "{sign}{mag}a{}", i + 1)?;
            }
            first = false;
        }
        Ok(())
    }
}

/// One irreducible block of a (possibly reducible) root system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub kind: RootSystemType,
    /// Index of the component's first simple root in the global numbering.
    pub offset: usize,
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    components: Vec<Component>,
    rank: usize,
    positives: Vec<Root>,
    multiplicity: Vec<u32>,
    /// Squared length in the component's construction coordinates.
    length2: Vec<i64>,
    component_of: Vec<usize>,
    positive_index: HashMap<Root, usize>,
}

impl RootSystem {
    /// Builds an irreducible root system.
    pub fn build(kind: RootSystemType) -> RootSystem {
        Self::product(&[kind])
    }

    pub fn from_type(family: Family, rank: usize) -> Result<RootSystem, RootSystemError> {
        Ok(Self::build(RootSystemType::new(family, rank)?))
    }

    /// Disjoint union with block-diagonal coordinates.
    pub fn product(kinds: &[RootSystemType]) -> RootSystem {
        let rank: usize = kinds.iter().map(|k| k.rank).sum();
        let mut components = Vec::new();
        let mut entries: Vec<(Root, i64, usize)> = Vec::new();
        let mut offset = 0;
        for (ci, kind) in kinds.iter().enumerate() {
            for (local, len2) in irreducible_positives(*kind) {
                let mut v = vec![0; rank];
                v[offset..offset + kind.rank].copy_from_slice(&local);
                entries.push((Root(v), len2, ci));
            }
            components.push(Component { kind: *kind, offset });
            offset += kind.rank;
        }
        entries.sort_by(|a, b| a.0.height().cmp(&b.0.height()).then_with(|| b.0.cmp(&a.0)));
        let positive_index = entries.iter().enumerate().map(|(i, e)| (e.0.clone(), i)).collect();
        RootSystem {
            components,
            rank,
            multiplicity: vec![1; entries.len()],
            length2: entries.iter().map(|e| e.1).collect(),
            component_of: entries.iter().map(|e| e.2).collect(),
            positives: entries.into_iter().map(|e| e.0).collect(),
            positive_index,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_standard(&self) -> bool {
        self.components.iter().all(|c| c.kind.is_standard())
    }

    /// `A2`, `C3`, or `A2xBC1` for products.
    pub fn type_label(&self) -> String {
        self.components
            .iter()
            .map(|c| c.kind.to_string())
            .collect::<Vec<_>>()
            .join("x")
    }

    pub fn simple_roots(&self) -> Vec<Root> {
        (0..self.rank).map(|i| Root::simple(self.rank, i)).collect()
    }

    /// Positive roots sorted by height; the first `rank` are the simple roots.
    pub fn positive_roots(&self) -> &[Root] {
        &self.positives
    }

    /// All roots: positives followed by their negatives.
    pub fn roots(&self) -> Vec<Root> {
        let mut all = self.positives.clone();
        all.extend(self.positives.iter().map(Root::neg));
        all
    }

    /// `Φ ∪ {0}` with zero first.
    pub fn roots_with_zero(&self) -> Vec<Root> {
        let mut all = vec![Root::zero(self.rank)];
        all.extend(self.roots());
        all
    }

    pub fn positive_index(&self, root: &Root) -> Option<usize> {
        self.positive_index.get(root).copied()
    }

    pub fn is_root(&self, v: &Root) -> bool {
        if v.len() != self.rank {
            return false;
        }
        self.positive_index.contains_key(v) || self.positive_index.contains_key(&v.neg())
    }

    /// Membership in `Φ ∪ {0}`. Vectors of the wrong length are not members.
    pub fn is_element(&self, v: &[i64]) -> bool {
        if v.len() != self.rank {
            return false;
        }
        let r = Root(v.to_vec());
        r.is_zero() || self.is_root(&r)
    }

    fn check_index(&self, i: usize) -> Result<(), RootSystemError> {
        if i >= self.rank {
            return Err(RootSystemError::IndexOutOfRange {
                index: i,
                rank: self.rank,
            });
        }
        Ok(())
    }

    /// `α̂_i`: `2α_i` when that is a root, else `α_i`.
    pub fn hat_index(&self, i: usize) -> Result<Root, RootSystemError> {
        self.check_index(i)?;
        let a = Root::simple(self.rank, i);
        let doubled = a.scale(2);
        Ok(if self.is_root(&doubled) { doubled } else { a })
    }

    pub fn hat(&self, alpha: &Root) -> Result<Root, RootSystemError> {
        let i = (alpha.len() == self.rank)
            .then(|| alpha.0.iter().position(|&c| c == 1))
            .flatten()
            .filter(|&i| *alpha == Root::simple(self.rank, i))
            .ok_or_else(|| RootSystemError::NotSimpleRoot(alpha.clone()))?;
        self.hat_index(i)
    }

    /// All `α̂_i` in node order.
    pub fn hat_simple(&self) -> Vec<Root> {
        (0..self.rank).map(|i| self.hat_index(i).unwrap()).collect()
    }

    /// Positive roots supported on `α_1..α_i` with positive `α_i` coefficient.
    pub fn phi_i_plus(&self, i: usize) -> Result<Vec<Root>, RootSystemError> {
        self.check_index(i)?;
        Ok(self
            .positives
            .iter()
            .filter(|r| r.0[i] > 0 && r.0[i + 1..].iter().all(|&c| c == 0))
            .cloned()
            .collect())
    }

    /// Multiplicity-weighted size of `Φ_i⁺`.
    pub fn dim_n_i(&self, i: usize) -> Result<u64, RootSystemError> {
        Ok(self
            .phi_i_plus(i)?
            .iter()
            .map(|r| u64::from(self.multiplicity_of(r).unwrap()))
            .sum())
    }

    pub fn multiplicity(&self) -> &[u32] {
        &self.multiplicity
    }

    /// Multiplicity of a root (negative roots share their positive's).
    pub fn multiplicity_of(&self, root: &Root) -> Option<u32> {
        let idx = self.positive_index(root).or_else(|| self.positive_index(&root.neg()))?;
        Some(self.multiplicity[idx])
    }

    pub fn set_multiplicity(&mut self, root: &Root, m: u32) -> Result<(), RootSystemError> {
        let idx = self
            .positive_index(root)
            .ok_or_else(|| RootSystemError::NotPositiveRoot(root.clone()))?;
        self.multiplicity[idx] = m;
        Ok(())
    }

    /// Sum of multiplicities over `Φ⁺`.
    pub fn total_positive_dimension(&self) -> u64 {
        self.multiplicity.iter().map(|&m| u64::from(m)).sum()
    }

    /// Whether the positive root at `idx` has the shortest length occurring
    /// in its irreducible component, in a component with several lengths.
    pub fn is_short(&self, idx: usize) -> bool {
        let comp = self.component_of[idx];
        let lens = self
            .length2
            .iter()
            .zip(&self.component_of)
            .filter(|(_, &c)| c == comp)
            .map(|(l, _)| *l);
        let (min, max) = lens.fold((i64::MAX, i64::MIN), |(lo, hi), l| (lo.min(l), hi.max(l)));
        min < max && self.length2[idx] == min
    }

    /// Highest root of each irreducible component (the unique positive root
    /// of maximal height in that block).
    pub fn highest_roots(&self) -> Vec<Root> {
        (0..self.components.len())
            .map(|c| {
                self.positives
                    .iter()
                    .zip(&self.component_of)
                    .filter(|(_, &ci)| ci == c)
                    .map(|(r, _)| r)
                    .max_by_key(|r| r.height())
                    .unwrap()
                    .clone()
            })
            .collect()
    }

    /// Whether `α + β ∈ Φ` implies `α + β ∈ set` for all `α, β` in `set`.
    pub fn is_closed_under_addition(&self, set: &[Root]) -> bool {
        let members: HashSet<&Root> = set.iter().collect();
        set.iter().all(|a| {
            set.iter().all(|b| {
                let s = a.add(b);
                !self.is_root(&s) || members.contains(&s)
            })
        })
    }

    pub fn to_json(&self) -> RootSystemJson {
        RootSystemJson {
            schema_version: SCHEMA_VERSION,
            family: self.type_label(),
            rank: self.rank,
            nonstandard: !self.is_standard(),
            simple: self.simple_roots(),
            positives: self.positives.clone(),
            multiplicity: self.multiplicity.iter().enumerate().map(|(i, &m)| (i, m)).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RootSystemJson {
    pub schema_version: u32,
    pub family: String,
    pub rank: usize,
    pub nonstandard: bool,
    pub simple: Vec<Root>,
    pub positives: Vec<Root>,
    /// Keyed by index into `positives`.
    pub multiplicity: BTreeMap<usize, u32>,
}

/// Positive roots of an irreducible type as (coefficients, squared length).
fn irreducible_positives(kind: RootSystemType) -> Vec<(Vec<i64>, i64)> {
    let (simple, all) = orthonormal_model(kind);
    let coords = SimpleCoordinates::new(&simple);
    let mut out: Vec<(Vec<i64>, i64)> = all
        .iter()
        .map(|v| (coords.solve(v), v.iter().map(|x| x * x).sum()))
        .filter(|(c, _)| c.iter().any(|&x| x > 0))
        .collect();
    out.sort();
    out.dedup();
    debug_assert_eq!(out.len(), kind.positive_root_count());
    out
}

struct SimpleCoordinates {
    simple: Vec<Vec<i64>>,
    gram_inv: ExactMatrix,
}

impl SimpleCoordinates {
    fn new(simple: &[Vec<i64>]) -> Self {
        let r = simple.len();
        let mut gram = ExactMatrix::zeros(r);
        for i in 0..r {
            for j in 0..r {
                gram[(i, j)] = rat(dot(&simple[i], &simple[j]));
            }
        }
        SimpleCoordinates {
            simple: simple.to_vec(),
            gram_inv: gram.inverse().expect("simple roots are independent"),
        }
    }

    fn solve(&self, v: &[i64]) -> Vec<i64> {
        let r = self.simple.len();
        let rhs: Vec<BigRational> = self.simple.iter().map(|s| rat(dot(s, v))).collect();
        (0..r)
            .map(|i| {
                let mut acc = BigRational::zero();
                for (j, b) in rhs.iter().enumerate() {
                    acc += &self.gram_inv[(i, j)] * b;
                }
                assert!(acc.is_integer(), "root not integral over simple roots");
                acc.to_integer().to_i64().unwrap()
            })
            .collect()
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn unit(dim: usize, i: usize, scale: i64) -> Vec<i64> {
    let mut v = vec![0; dim];
    v[i] = scale;
    v
}

fn combo(dim: usize, terms: &[(usize, i64)]) -> Vec<i64> {
    let mut v = vec![0; dim];
    for &(i, c) in terms {
        v[i] += c;
    }
    v
}

/// `±e_i ± e_j` for `i < j`, scaled.
fn pm_pairs(dim: usize, scale: i64, with_plus: bool) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            for si in [1, -1] {
                for sj in [1, -1] {
                    if !with_plus && si == sj {
                        continue;
                    }
                    out.push(combo(dim, &[(i, si * scale), (j, sj * scale)]));
                }
            }
        }
    }
    out
}

fn pm_units(dim: usize, scale: i64) -> Vec<Vec<i64>> {
    (0..dim)
        .flat_map(|i| [unit(dim, i, scale), unit(dim, i, -scale)])
        .collect()
}

/// Simple roots and all roots of an irreducible type in orthonormal
/// coordinates (doubled where half-integers occur).
fn orthonormal_model(kind: RootSystemType) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let n = kind.rank;
    match kind.family {
        Family::A => {
            let d = n + 1;
            let simple = (0..n).map(|i| combo(d, &[(i, 1), (i + 1, -1)])).collect();
            (simple, pm_pairs(d, 1, false))
        }
        Family::B | Family::C | Family::D | Family::BC => {
            let mut simple: Vec<Vec<i64>> = (0..n - 1).map(|i| combo(n, &[(i, 1), (i + 1, -1)])).collect();
            let mut all = pm_pairs(n, 1, true);
            match kind.family {
                Family::B => {
                    simple.push(unit(n, n - 1, 1));
                    all.extend(pm_units(n, 1));
                }
                Family::C => {
                    simple.push(unit(n, n - 1, 2));
                    all.extend(pm_units(n, 2));
                }
                Family::D => {
                    simple.push(combo(n, &[(n - 2, 1), (n - 1, 1)]));
                }
                _ => {
                    simple.push(unit(n, n - 1, 1));
                    all.extend(pm_units(n, 1));
                    all.extend(pm_units(n, 2));
                }
            }
            (simple, all)
        }
        Family::G2 => {
            let simple = vec![combo(3, &[(0, 1), (1, -1)]), combo(3, &[(0, -2), (1, 1), (2, 1)])];
            let mut all = pm_pairs(3, 1, false);
            for i in 0..3 {
                let mut long = vec![-1; 3];
                long[i] = 2;
                all.push(long.clone());
                all.push(long.iter().map(|x| -x).collect());
            }
            (simple, all)
        }
        Family::F4 => {
            // doubled coordinates
            let simple = vec![
                combo(4, &[(1, 2), (2, -2)]),
                combo(4, &[(2, 2), (3, -2)]),
                unit(4, 3, 2),
                vec![1, -1, -1, -1],
            ];
            let mut all = pm_units(4, 2);
            all.extend(pm_pairs(4, 2, true));
            all.extend(sign_vectors(4, |_| true));
            (simple, all)
        }
        Family::E6 | Family::E7 | Family::E8 => e8_restricted(n),
    }
}

fn sign_vectors(dim: usize, keep: impl Fn(usize) -> bool) -> Vec<Vec<i64>> {
    (0..1u32 << dim)
        .filter(|m| keep(m.count_ones() as usize))
        .map(|m| (0..dim).map(|i| if m >> i & 1 == 1 { -1 } else { 1 }).collect())
        .collect()
}

/// `E_8` in doubled coordinates, restricted to the span of the first
/// `rank` simple roots for `E_6` and `E_7`.
fn e8_restricted(rank: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let mut simple = vec![
        vec![1, -1, -1, -1, -1, -1, -1, 1],
        combo(8, &[(0, 2), (1, 2)]),
        combo(8, &[(0, -2), (1, 2)]),
    ];
    for i in 1..6 {
        simple.push(combo(8, &[(i + 1, 2), (i, -2)]));
    }
    let mut all = pm_pairs(8, 2, true);
    all.extend(sign_vectors(8, |minus| minus % 2 == 0));
    if rank == 8 {
        return (simple, all);
    }
    let coords = SimpleCoordinates::new(&simple);
    let all = all
        .into_iter()
        .filter(|v| coords.solve(v)[rank..].iter().all(|&c| c == 0))
        .collect();
    simple.truncate(rank);
    (simple, all)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RootSystem {
        RootSystem::product(&parse_types(s).unwrap())
    }

    #[test]
    fn rank_validation() {
        assert!(RootSystemType::new(Family::D, 3).is_err());
        assert!(RootSystemType::new(Family::E7, 6).is_err());
        assert!(RootSystemType::new(Family::A, 0).is_err());
        assert!(RootSystemType::new(Family::BC, 1).is_ok());
        let b2 = RootSystemType::new(Family::B, 2).unwrap();
        assert!(!b2.is_standard());
        assert!(RootSystemType::new_degenerate(Family::D, 2).is_ok());
        assert!(RootSystemType::new_degenerate(Family::D, 1).is_err());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("E8".parse::<RootSystemType>().unwrap().rank(), 8);
        assert_eq!("bc3".parse::<RootSystemType>().unwrap().to_string(), "BC3");
        assert!("E5".parse::<RootSystemType>().is_err());
        assert_eq!(rs("A2xBC1").type_label(), "A2xBC1");
    }

    #[test]
    fn bc1_roots() {
        let r = rs("BC1");
        let roots: HashSet<Root> = r.roots().into_iter().collect();
        let expected: HashSet<Root> = [-2, -1, 1, 2].iter().map(|&c| Root(vec![c])).collect();
        assert_eq!(roots, expected);
        assert_eq!(r.hat_index(0).unwrap(), Root(vec![2]));
    }

    #[test]
    fn a2_membership() {
        let r = rs("A2");
        assert!(r.is_element(&[0, 0]));
        assert!(r.is_element(&[1, 1]));
        assert!(!r.is_element(&[2, 0]));
        assert!(!r.is_element(&[1, 1, 0]));
        assert_eq!(r.phi_i_plus(0).unwrap(), vec![Root(vec![1, 0])]);
        assert_eq!(r.phi_i_plus(1).unwrap().len(), 2);
    }

    #[test]
    fn hat_rejects_non_simple() {
        let r = rs("A2");
        assert!(matches!(
            r.hat(&Root(vec![1, 1])),
            Err(RootSystemError::NotSimpleRoot(_))
        ));
        assert_eq!(r.hat(&Root(vec![0, 1])).unwrap(), Root(vec![0, 1]));
    }

    #[test]
    fn c2_positives() {
        // y1-y2 = a1, 2y2 = a2, y1+y2 = a1+a2, 2y1 = 2a1+a2
        let r = rs("C2");
        let pos: HashSet<Root> = r.positive_roots().iter().cloned().collect();
        let expected: HashSet<Root> = [[1, 0], [0, 1], [1, 1], [2, 1]]
            .iter()
            .map(|v| Root(v.to_vec()))
            .collect();
        assert_eq!(pos, expected);
    }

    #[test]
    fn short_roots_of_b3() {
        let r = rs("B3");
        let short: Vec<&Root> = (0..r.positive_roots().len())
            .filter(|&i| r.is_short(i))
            .map(|i| &r.positive_roots()[i])
            .collect();
        // e_3, e_2 = a2+a3, e_1 = a1+a2+a3
        assert_eq!(short.len(), 3);
        assert!(short.iter().all(|s| s.0[2] == 1));
    }

    #[test]
    fn multiplicity_override() {
        let mut r = rs("A2");
        r.set_multiplicity(&Root(vec![1, 1]), 3).unwrap();
        assert_eq!(r.dim_n_i(1).unwrap(), 4);
        assert_eq!(r.multiplicity_of(&Root(vec![-1, -1])), Some(3));
        assert!(r.set_multiplicity(&Root(vec![-1, 0]), 2).is_err());
    }

    #[test]
    fn positive_multiple() {
        let a = Root(vec![2, 4]);
        let b = Root(vec![1, 2]);
        assert_eq!(a.positive_multiple_of(&b), Some(rat(2)));
        assert_eq!(b.positive_multiple_of(&a), Some(crate::exact::ratio(1, 2)));
        assert_eq!(a.neg().positive_multiple_of(&b), None);
        assert_eq!(Root(vec![0, 0]).positive_multiple_of(&b), None);
        assert_eq!(Root(vec![1, 1]).positive_multiple_of(&b), None);
    }

    #[test]
    fn json_shape() {
        let j = rs("A2").to_json();
        assert_eq!(j.positives.len(), 3);
        assert_eq!(j.simple, vec![Root(vec![1, 0]), Root(vec![0, 1])]);
        assert_eq!(j.multiplicity.len(), 3);
    }
}
