//! Root systems, obstructor complexes and exact matrix models used to compute
//! obstructor dimensions of arithmetic lattices.

pub mod catalog;
pub mod complexes;
pub mod exact;
pub mod lemmakey;
pub mod matrixmodels;
pub mod rootsys;

pub use catalog::{identity_check, DimensionReport, GroupKind, GroupSpec};
pub use complexes::ObstructorShape;
pub use exact::{ExactMatrix, MatrixError};
pub use rootsys::{Family, Root, RootSystem, RootSystemError, RootSystemType};

pub(crate) fn as_millis<S: serde::Serializer>(d: &std::time::Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}
