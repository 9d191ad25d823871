//! Arithmetic groups by kind: symmetric-space dimension, obstructor shape
//! and the identity `m + 2 = dim G/K`.
//!
//! Number rings enter only through their real and complex place counts
//! `(r, s)`. For `SO(Q)` the dimension of the anisotropic kernel's
//! symmetric space is an input.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::complexes::{ObstructorShape, ShapeError};
use crate::rootsys::{Family, Root, RootSystem, RootSystemError, RootSystemType};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("n = {0} is too small for this group")]
    InvalidSize(usize),
    #[error("a number ring needs r + s >= 1, got r = {r}, s = {s}")]
    NoPlaces { r: u32, s: u32 },
    #[error("invalid Witt index q = {q} for SO of dimension {n}")]
    InvalidWittIndex { n: usize, q: usize },
    #[error("SO(Q) needs dim X_M")]
    MissingAnisotropicDimension,
    #[error("root subspace n_{0} is trivial")]
    EmptyFactor(usize),
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
    #[error(transparent)]
    Shape(#[from] ShapeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupKind {
    /// `SL_n(Z)`.
    SlZ,
    /// `SL_n(Z[√2])`, with the obstructor complex that keeps the unit
    /// sphere separate.
    SlZSqrt2,
    /// `SL_n(O)` for a ring of integers with `r` real and `s` complex places.
    SlO {
        r: u32,
        s: u32,
    },
    /// `Sp_2n(Z)`; `n` is half the matrix size.
    SpZ,
    SpO {
        r: u32,
        s: u32,
    },
    /// `SO(Q)` on `Q^n` with Witt index `q`.
    SoQ {
        q: usize,
        dim_xm: Option<u64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GroupSpec {
    #[serde(flatten)]
    pub kind: GroupKind,
    pub n: usize,
}

impl GroupSpec {
    pub fn new(kind: GroupKind, n: usize) -> Result<Self, CatalogError> {
        let spec = GroupSpec { kind, n };
        spec.validate()?;
        Ok(spec)
    }

    pub fn sl_z(n: usize) -> Result<Self, CatalogError> {
        Self::new(GroupKind::SlZ, n)
    }

    pub fn sl_z_sqrt2(n: usize) -> Result<Self, CatalogError> {
        Self::new(GroupKind::SlZSqrt2, n)
    }

    pub fn sl_o(n: usize, r: u32, s: u32) -> Result<Self, CatalogError> {
        Self::new(GroupKind::SlO { r, s }, n)
    }

    pub fn sp_z(n: usize) -> Result<Self, CatalogError> {
        Self::new(GroupKind::SpZ, n)
    }

    pub fn sp_o(n: usize, r: u32, s: u32) -> Result<Self, CatalogError> {
        Self::new(GroupKind::SpO { r, s }, n)
    }

    pub fn so_q(n: usize, q: usize, dim_xm: Option<u64>) -> Result<Self, CatalogError> {
        Self::new(GroupKind::SoQ { q, dim_xm }, n)
    }

    pub fn validate(&self) -> Result<(), CatalogError> {
        let n = self.n;
        match self.kind {
            GroupKind::SlZ | GroupKind::SlZSqrt2 | GroupKind::SlO { .. } if n < 2 => Err(CatalogError::InvalidSize(n)),
            GroupKind::SpZ | GroupKind::SpO { .. } if n < 1 => Err(CatalogError::InvalidSize(n)),
            GroupKind::SlO { r, s } | GroupKind::SpO { r, s } if r + s == 0 => Err(CatalogError::NoPlaces { r, s }),
            // q = 1, n = 2 is a split torus: no unipotent radical.
            GroupKind::SoQ { q, .. } if q == 0 || n < 2 * q || (q == 1 && n == 2) => {
                Err(CatalogError::InvalidWittIndex { n, q })
            }
            _ => Ok(()),
        }
    }

    /// `r + 2s`, the rank of the ring of integers over `Z`.
    fn degree(&self) -> u64 {
        match self.kind {
            GroupKind::SlO { r, s } | GroupKind::SpO { r, s } => u64::from(r + 2 * s),
            GroupKind::SlZSqrt2 => 2,
            _ => 1,
        }
    }

    /// Rank of the unit group `O^*`.
    fn unit_rank(&self) -> u64 {
        match self.kind {
            GroupKind::SlO { r, s } | GroupKind::SpO { r, s } => u64::from(r + s) - 1,
            GroupKind::SlZSqrt2 => 1,
            _ => 0,
        }
    }

    fn dim_xm_input(&self) -> Result<Option<u64>, CatalogError> {
        match self.kind {
            GroupKind::SoQ { dim_xm: None, .. } => Err(CatalogError::MissingAnisotropicDimension),
            GroupKind::SoQ { dim_xm, .. } => Ok(dim_xm),
            _ => Ok(None),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n;
        match self.kind {
            GroupKind::SlZ => write!(f, "SL_{n}(Z)"),
            GroupKind::SlZSqrt2 => write!(f, "SL_{n}(Z[√2])"),
            GroupKind::SlO { r, s } => write!(f, "SL_{n}(O; r={r}, s={s})"),
            GroupKind::SpZ => write!(f, "Sp_{}(Z)", 2 * n),
            GroupKind::SpO { r, s } => write!(f, "Sp_{}(O; r={r}, s={s})", 2 * n),
            GroupKind::SoQ { q, dim_xm } => match dim_xm {
                Some(d) => write!(f, "SO(Q; n={n}, q={q}, dim X_M={d})"),
                None => write!(f, "SO(Q; n={n}, q={q})"),
            },
        }
    }
}

/// The relative root system with root-space dimensions, and `dim X_M`.
#[derive(Debug, Clone)]
pub struct RootData {
    pub system: RootSystem,
    pub dim_xm: u64,
}

impl RootData {
    /// `dim X_M + Σ_{Φ⁺} dim g_α + rank`.
    pub fn lemma_a_count(&self) -> u64 {
        self.dim_xm + self.system.total_positive_dimension() + self.system.rank() as u64
    }
}

pub fn root_data(spec: &GroupSpec) -> Result<RootData, CatalogError> {
    spec.validate()?;
    let n = spec.n;
    let d = spec.degree() as u32;
    let (kind, dim_xm) = match spec.kind {
        GroupKind::SlZ | GroupKind::SlZSqrt2 | GroupKind::SlO { .. } => (
            RootSystemType::new(Family::A, n - 1)?,
            (n as u64 - 1) * spec.unit_rank(),
        ),
        GroupKind::SpZ | GroupKind::SpO { .. } => (
            RootSystemType::new_degenerate(Family::C, n)?,
            n as u64 * spec.unit_rank(),
        ),
        GroupKind::SoQ { q, .. } => {
            let family = if n == 2 * q { Family::D } else { Family::B };
            (
                RootSystemType::new_degenerate(family, q)?,
                spec.dim_xm_input()?.unwrap_or(0),
            )
        }
    };
    let short = match spec.kind {
        GroupKind::SoQ { q, .. } => (n - 2 * q) as u32,
        _ => d,
    };
    let mut system = RootSystem::build(kind);
    let positives: Vec<Root> = system.positive_roots().to_vec();
    for root in &positives {
        let m = match spec.kind {
            // the short roots y_a of B_q are the ones with α_q-coefficient 1
            GroupKind::SoQ { q, .. } if kind.family() == Family::B && root.coeffs()[q - 1] == 1 => short,
            GroupKind::SoQ { .. } => 1,
            _ => d,
        };
        system.set_multiplicity(root, m)?;
    }
    Ok(RootData { system, dim_xm })
}

/// `dim G/K` from the closed forms, or from root data where the group has
/// no closed form of its own.
pub fn dim_symmetric(spec: &GroupSpec) -> Result<u64, CatalogError> {
    spec.validate()?;
    let n = spec.n as u64;
    Ok(match spec.kind {
        GroupKind::SlZ => n * (n + 1) / 2 - 1,
        GroupKind::SlZSqrt2 => n * n + n - 2,
        GroupKind::SlO { r, s } => u64::from(r) * (n * n + n - 2) / 2 + u64::from(s) * (n * n - 1),
        GroupKind::SpZ => n * n + n,
        GroupKind::SpO { .. } => root_data(spec)?.lemma_a_count(),
        GroupKind::SoQ { q, .. } => {
            let q = q as u64;
            spec.dim_xm_input()?.unwrap_or(0) + q * (q - 1) + q * (n - 2 * q) + q
        }
    })
}

/// The obstructor complex as the group's own display writes it.
pub fn obstructor_shape(spec: &GroupSpec) -> Result<ObstructorShape, CatalogError> {
    spec.validate()?;
    let n = spec.n as u32;
    let d = spec.degree() as u32;
    let shape = match spec.kind {
        GroupKind::SlZ => ObstructorShape::plus((0..n - 1).collect())?,
        GroupKind::SlZSqrt2 => ObstructorShape::new(Some(n - 2), (1..n).map(|p| 2 * p - 1).collect())?,
        GroupKind::SlO { r, s } => ObstructorShape::plus((1..n).map(|p| p * d + (r + s - 1) - 1).collect())?,
        GroupKind::SpZ => {
            let mut plus: Vec<u32> = (0..n - 1).collect();
            plus.push((n + 2) * (n - 1) / 2);
            ObstructorShape::plus(plus)?
        }
        GroupKind::SpO { .. } => {
            let mut plus: Vec<u32> = (1..n).map(|p| p * d - 1).collect();
            plus.push(n * (n + 1) * d / 2 - 1);
            ObstructorShape::new(((n - 1) * d).checked_sub(1), plus)?
        }
        GroupKind::SoQ { q, .. } => {
            let q = q as u32;
            let xm = spec.dim_xm_input()?.unwrap_or(0) as u32;
            let mut plus: Vec<u32> = (0..q - 1).collect();
            plus.push(q * (n - 2 * q) + q * (q - 1) / 2 - 1);
            ObstructorShape::new(xm.checked_sub(1), plus)?
        }
    };
    Ok(shape)
}

/// `L_M * L_1 * ... * L_r` with `L_M = S^{dim X_M - 1}` (absent when
/// `dim X_M = 0`) and `L_i = S^{dim n_i - 1}_+`.
pub fn lemma_a_shape_from(system: &RootSystem, dim_xm: u64) -> Result<ObstructorShape, CatalogError> {
    let mut plus = Vec::with_capacity(system.rank());
    for i in 0..system.rank() {
        let dim = system.dim_n_i(i)?;
        if dim == 0 {
            return Err(CatalogError::EmptyFactor(i + 1));
        }
        plus.push(dim as u32 - 1);
    }
    Ok(ObstructorShape::new((dim_xm as u32).checked_sub(1), plus)?)
}

pub fn lemma_a_shape(spec: &GroupSpec) -> Result<ObstructorShape, CatalogError> {
    let data = root_data(spec)?;
    lemma_a_shape_from(&data.system, data.dim_xm)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub group: String,
    pub dim_symmetric: u64,
    pub obstructor: ObstructorShape,
    pub m: i64,
    pub identity_holds: bool,
    /// `dim X_M + Σ dim g_α + rank` from root data.
    pub lemma_a_count: u64,
    /// `Σ(k_i + 2) + (a + 1)` of the shape equals `lemma_a_count`.
    pub componentwise_holds: bool,
}

impl DimensionReport {
    pub fn passed(&self) -> bool {
        self.identity_holds && self.componentwise_holds
    }

    /// `(dim, [k_1,...], m, holds)`, with `a + ` before the list when the
    /// plain sphere `S^a` is present.
    pub fn row(&self) -> String {
        let plus: Vec<String> = self.obstructor.plus_dims.iter().map(ToString::to_string).collect();
        let sphere = self
            .obstructor
            .sphere_dim
            .map(|a| format!("{a} + "))
            .unwrap_or_default();
        format!(
            "({}, {sphere}[{}], {}, {})",
            self.dim_symmetric,
            plus.join(","),
            self.m,
            self.identity_holds
        )
    }
}

pub fn identity_check(spec: &GroupSpec) -> Result<DimensionReport, CatalogError> {
    let dim = dim_symmetric(spec)?;
    let shape = obstructor_shape(spec)?;
    let count = root_data(spec)?.lemma_a_count();
    let m = shape.m();
    Ok(DimensionReport {
        group: spec.to_string(),
        dim_symmetric: dim,
        identity_holds: m + 2 == dim as i64,
        m,
        lemma_a_count: count,
        componentwise_holds: shape.cone_dimension() == count as i64,
        obstructor: shape,
    })
}

/// Aligned plain-text table, one row per report.
pub fn render_table(reports: &[DimensionReport]) -> String {
    let header = ["group", "dim G/K", "L", "m", "m+2=dim", "Lemma A"];
    let rows: Vec<[String; 6]> = reports
        .iter()
        .map(|r| {
            [
                r.group.clone(),
                r.dim_symmetric.to_string(),
                r.obstructor.to_string(),
                r.m.to_string(),
                r.identity_holds.to_string(),
                r.componentwise_holds.to_string(),
            ]
        })
        .collect();
    let mut width = header.map(str::len);
    for row in &rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&width)
            .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(&header.map(String::from));
    for row in &rows {
        out += &line(row);
    }
    out
}
