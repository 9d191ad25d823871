//! The adjoint action of `SL_n` on `sl_n`, where the root space of
//! `y_i - y_j` is spanned by `E_ij`.

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ModelError;
use crate::complexes::Arrow;
use crate::exact::{rat, ratio, ExactMatrix, MatrixError};
use crate::lemmakey::{key_ordering, key_witness, Label, Labeling};
use crate::rootsys::{Family, Root, RootSystem};

/// `g X g^-1`.
pub fn adjoint_apply(g: &ExactMatrix, x: &ExactMatrix) -> Result<ExactMatrix, MatrixError> {
    g.try_mul(x)?.try_mul(&g.inverse()?)
}

/// Coefficient of `E_kl` in `g E_ij g^-1`, which is `g_ki (g^-1)_jl`.
pub fn adjoint_component(n: usize, g: &ExactMatrix, source: Arrow, target: Arrow) -> Result<BigRational, ModelError> {
    if g.size() != n {
        return Err(MatrixError::DimensionMismatch {
            left: g.size(),
            right: n,
        }
        .into());
    }
    for a in [source, target] {
        if a.row == a.col || a.row == 0 || a.col == 0 || a.row > n || a.col > n {
            return Err(ModelError::BadVertex(a.to_string()));
        }
    }
    let inv = g.inverse()?;
    Ok(&g[(target.row - 1, source.row - 1)] * &inv[(source.col - 1, target.col - 1)])
}

/// `Y + [X,Y] + [X,[X,Y]]/2! + ...` for nilpotent `X`.
pub fn adjoint_series(x: &ExactMatrix, y: &ExactMatrix) -> Result<ExactMatrix, MatrixError> {
    let mut out = y.clone();
    let mut term = y.clone();
    for k in 1..=2 * x.size() {
        term = x.bracket(&term).scale(&ratio(1, k as i64));
        if term.entries().iter().all(Zero::is_zero) {
            return Ok(out);
        }
        out = out.add(&term);
    }
    Err(MatrixError::NotNilpotent)
}

/// The root `y_i - y_j` of `A_{n-1}` in simple-root coordinates.
pub fn arrow_root(n: usize, a: Arrow) -> Root {
    let mut c = vec![0i64; n - 1];
    let (lo, hi, s) = if a.row < a.col {
        (a.row, a.col, 1)
    } else {
        (a.col, a.row, -1)
    };
    for x in &mut c[lo - 1..hi - 1] {
        *x = s;
    }
    Root(c)
}

/// Inverse of [`arrow_root`]; `None` for zero or non-roots.
pub fn root_arrow(root: &Root) -> Option<Arrow> {
    let c = root.coeffs();
    let support: Vec<usize> = (0..c.len()).filter(|&i| c[i] != 0).collect();
    let (&a, &b) = (support.first()?, support.last()?);
    if b - a + 1 != support.len() {
        return None;
    }
    match c[a] {
        1 if support.iter().all(|&i| c[i] == 1) => Some(Arrow::new(a + 1, b + 2)),
        -1 if support.iter().all(|&i| c[i] == -1) => Some(Arrow::new(b + 2, a + 1)),
        _ => None,
    }
}

/// The lower elementary `E_{j+1,j}` spanning the root space of `-α_j`
/// (0-based `j`).
fn zeta(n: usize, j: usize) -> ExactMatrix {
    ExactMatrix::elementary(n, j + 1, j)
}

#[derive(Debug, Clone, Serialize)]
pub struct LhsInstance {
    pub seed: u64,
    pub labeling: String,
    pub sigma: Root,
    pub mu: Root,
    pub target: String,
    #[serde(serialize_with = "as_string")]
    pub slope: BigRational,
    /// `(t, component)` pairs, exact.
    pub values: Vec<(String, String)>,
    pub linear: bool,
}

fn as_string<S: serde::Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}

/// One seeded `SL_3` instance: a labeling of the key ordering of `A_2`
/// with its witness `(σ, μ)`, and `g(t) = u d y_{j_1} ... y_{j_{l-1}}
/// exp(t ζ)` where the `y` are the earlier D-labeled rays and `ζ` belongs
/// to the focus. The `μ -> σ` component of `Ad g(t)` should equal `t` times
/// the `Ad d` eigenvalue on the `σ` space times the `σ` coefficient of
/// `[ζ, X_μ]`, with `X_μ` the coroot of the focus when `μ = 0`.
pub fn lhs_spot_check(seed: u64) -> Result<LhsInstance, ModelError> {
    const N: usize = 3;
    let rs = RootSystem::from_type(Family::A, N - 1).expect("A2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = key_ordering(&rs);
    let p = rng.gen_range(0..order.len());
    let labeling = Labeling::from_mask(&order, p, rng.gen_range(0..1u64 << p));
    let w = key_witness(&rs, &labeling).map_err(|e| ModelError::BadPoint(e.to_string()))?;
    let focus = labeling.focus();
    let target = root_arrow(&w.sigma).ok_or_else(|| ModelError::BadPoint(format!("σ = {} is not a root", w.sigma)))?;
    let x_mu = match root_arrow(&w.mu) {
        Some(a) => ExactMatrix::elementary(N, a.row - 1, a.col - 1),
        None if w.mu.is_zero() => {
            ExactMatrix::elementary(N, focus, focus).sub(&ExactMatrix::elementary(N, focus + 1, focus + 1))
        }
        None => return Err(ModelError::BadPoint(format!("μ = {} is not a root", w.mu))),
    };

    let mut u = ExactMatrix::identity(N);
    for i in 0..N {
        for j in i + 1..N {
            u[(i, j)] = rat(rng.gen_range(-5..=5));
        }
    }
    let d1 = ratio(rng.gen_range(1..=9), rng.gen_range(1..=9));
    let d2 = ratio(rng.gen_range(1..=9), rng.gen_range(1..=9));
    let d3 = ratio(1, 1) / (&d1 * &d2);
    let d = ExactMatrix::diagonal(&[d1, d2, d3]);
    let mut prefix = &u * &d;
    for (node, label) in labeling.labeled().take(p) {
        if label == Label::D {
            let s = rat(rng.gen_range(1..=9));
            prefix = &prefix * &zeta(N, node).scale(&s).exp_nilpotent()?;
        }
    }

    let (r, c) = (target.row - 1, target.col - 1);
    let bracket = zeta(N, focus).bracket(&x_mu);
    let slope = &d[(r, r)] / &d[(c, c)] * &bracket[(r, c)];
    let mut values = Vec::new();
    let mut linear = !slope.is_zero();
    for t in [0, 1, 2, 3, 7, 100] {
        let t = rat(t);
        let g = &prefix * &zeta(N, focus).scale(&t).exp_nilpotent()?;
        let comp = adjoint_apply(&g, &x_mu)?[(r, c)].clone();
        linear &= comp == &t * &slope;
        values.push((t.to_string(), comp.to_string()));
    }
    Ok(LhsInstance {
        seed,
        labeling: labeling.to_string(),
        sigma: w.sigma,
        mu: w.mu,
        target: format!("E{target}"),
        slope,
        values,
        linear,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arrow_root_round_trip() {
        for n in 2..=5 {
            for i in 1..=n {
                for j in 1..=n {
                    if i != j {
                        let a = Arrow::new(i, j);
                        assert_eq!(root_arrow(&arrow_root(n, a)), Some(a));
                    }
                }
            }
        }
        assert_eq!(root_arrow(&Root(vec![0, 0])), None);
        assert_eq!(root_arrow(&Root(vec![1, 0, 1])), None);
    }

    #[test]
    fn component_errors() {
        let g = ExactMatrix::identity(3);
        assert!(adjoint_component(3, &g, Arrow::new(1, 1), Arrow::new(1, 2)).is_err());
        assert!(adjoint_component(4, &g, Arrow::new(1, 2), Arrow::new(1, 2)).is_err());
        assert!(adjoint_component(2, &ExactMatrix::zeros(2), Arrow::new(1, 2), Arrow::new(1, 2)).is_err());
    }
}
