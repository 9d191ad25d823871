//! Sampled certification of properness and divergence.
//!
//! Points are drawn from each simplex of the domain with a fixed seed, pushed
//! out along rays `t = r_0 < r_1 < ...`, and mapped exactly. A ray is proper
//! when `size` grows by the margin and is eventually nondecreasing. A pair of
//! disjoint simplices diverges when, for every matched pair of sample
//! points, `D` grows by the margin between the first and last radius.

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::{size_with_inverse, ConeMap, ConePoint, ModelError};
use crate::exact::{log_bigint, ratio, ExactMatrix};
use crate::rootsys::SCHEMA_VERSION;

#[derive(Debug, Clone, Serialize)]
pub struct HarnessConfig {
    #[serde(serialize_with = "as_strings")]
    pub radii: Vec<BigRational>,
    pub margin: f64,
    /// Points per simplex, the barycenter included.
    pub samples: usize,
    pub seed: u64,
    /// Rays must be nondecreasing from this radius index on.
    pub monotone_from: usize,
    /// Keep every row, not only failures.
    pub keep_rows: bool,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            radii: powers_of_two(20),
            margin: 10.0 * std::f64::consts::LN_2,
            samples: 8,
            seed: 0x0bd1,
            monotone_from: 8,
            keep_rows: false,
        }
    }
}

/// `1, 2, 4, ..., 2^max`.
pub fn powers_of_two(max: u32) -> Vec<BigRational> {
    (0..=max)
        .map(|k| BigRational::from_integer(BigInt::one() << k))
        .collect()
}

fn as_strings<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inadmissible,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairRow {
    pub sigma: Vec<String>,
    pub tau: Vec<String>,
    /// Minimum over matched samples of `D` at each radius.
    pub d: Vec<f64>,
    /// Minimum over matched samples of `D(last) - D(first)`.
    pub growth: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct DivergenceReport {
    pub schema_version: u32,
    pub map: String,
    pub config: HarnessConfig,
    pub pairs: usize,
    pub passed: usize,
    pub failed: usize,
    pub min_growth: f64,
    pub worst: Option<PairRow>,
    pub rows: Vec<PairRow>,
    #[serde(serialize_with = "crate::as_millis")]
    pub elapsed: Duration,
}

impl DivergenceReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RayRow {
    pub simplex: Vec<String>,
    pub weights: Vec<String>,
    pub sizes: Vec<f64>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct PropernessReport {
    pub schema_version: u32,
    pub map: String,
    pub config: HarnessConfig,
    pub rays: usize,
    pub passed: usize,
    pub failed: usize,
    pub min_growth: f64,
    pub rows: Vec<RayRow>,
    #[serde(serialize_with = "crate::as_millis")]
    pub elapsed: Duration,
}

impl PropernessReport {
    pub fn passed(&self) -> bool {
        self.failed == 0 && self.rays > 0
    }
}

#[derive(Clone)]
struct Face<V> {
    vertices: Vec<V>,
    mask: u128,
    samples: Vec<Vec<BigRational>>,
}

fn sample_seed(seed: u64, ids: &[usize]) -> u64 {
    ids.iter().fold(seed ^ 0xcbf2_9ce4_8422_2325, |h, &i| {
        (h ^ i as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Barycenter first, then random interior points with weights `k_i / Σk`.
fn sample_weights(len: usize, count: usize, seed: u64) -> Vec<Vec<BigRational>> {
    let mut out = vec![vec![ratio(1, len as i64); len]];
    if len == 1 {
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < count.max(1) {
        let k: Vec<i64> = (0..len).map(|_| rng.gen_range(1..=8)).collect();
        let total: i64 = k.iter().sum();
        let w: Vec<BigRational> = k.iter().map(|&x| ratio(x, total)).collect();
        if !out.contains(&w) {
            out.push(w);
        }
    }
    out
}

fn face_of<V: Clone>(domain_vertices: &[V], ids: &[usize], config: &HarnessConfig) -> Face<V> {
    Face {
        vertices: ids.iter().map(|&i| domain_vertices[i].clone()).collect(),
        mask: ids.iter().fold(0u128, |m, &i| m | 1 << i),
        samples: sample_weights(ids.len(), config.samples, sample_seed(config.seed, ids)),
    }
}

fn all_faces<M: ConeMap>(map: &M, config: &HarnessConfig) -> Result<Vec<Face<M::Vertex>>, ModelError> {
    let domain = map.domain();
    if domain.vertices().len() > 128 {
        return Err(ModelError::BadPoint(format!(
            "domain has {} vertices, the harness handles at most 128",
            domain.vertices().len()
        )));
    }
    let faces = domain.faces().map_err(|e| ModelError::BadPoint(e.to_string()))?;
    Ok(faces
        .iter()
        .flatten()
        .map(|ids| face_of(domain.vertices(), ids, config))
        .collect())
}

type Image = (ExactMatrix, ExactMatrix);

fn images<M: ConeMap>(map: &M, faces: &[Face<M::Vertex>], t: &BigRational) -> Result<Vec<Vec<Image>>, ModelError> {
    faces
        .par_iter()
        .map(|f| {
            f.samples
                .iter()
                .map(|w| {
                    let p = ConePoint {
                        simplex: f.vertices.clone(),
                        weights: w.clone(),
                        t: t.clone(),
                    };
                    map.eval_with_inverse(&p)
                })
                .collect()
        })
        .collect()
}

fn labels<V: ToString>(vs: &[V]) -> Vec<String> {
    vs.iter().map(ToString::to_string).collect()
}

fn ray_verdict(sizes: &[f64], config: &HarnessConfig) -> Verdict {
    let from = config.monotone_from.min(sizes.len().saturating_sub(1));
    let monotone = sizes[from..].windows(2).all(|w| w[1] >= w[0] - 1e-9);
    let growth = sizes.last().copied().unwrap_or(0.0) - sizes.first().copied().unwrap_or(0.0);
    if monotone && growth >= config.margin {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// An integer matrix over one common denominator, so products need no gcd
/// reductions.
struct Scaled {
    n: usize,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Scaled {
    fn new(m: &ExactMatrix) -> Self {
        let den = m.entries().iter().fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
        let num = m.entries().iter().map(|e| e.numer() * (&den / e.denom())).collect();
        Scaled { n: m.size(), num, den }
    }

    /// Log of the largest entry of `self * other` in absolute value.
    fn log_max_product(&self, other: &Scaled) -> f64 {
        let n = self.n;
        let mut best = BigUint::zero();
        let mut acc = BigInt::zero();
        for i in 0..n {
            for j in 0..n {
                acc.set_zero();
                for k in 0..n {
                    let a = &self.num[i * n + k];
                    let b = &other.num[k * n + j];
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                if acc.magnitude() > &best {
                    best = acc.magnitude().clone();
                }
            }
        }
        if best.is_zero() {
            return f64::NEG_INFINITY;
        }
        log_bigint(&BigInt::from(best)) - log_bigint(&self.den) - log_bigint(&other.den)
    }
}

type ScaledImage = (Scaled, Scaled);

fn scale_all(imgs: &[Vec<Image>]) -> Vec<Vec<ScaledImage>> {
    imgs.par_iter()
        .map(|v| v.iter().map(|(g, inv)| (Scaled::new(g), Scaled::new(inv))).collect())
        .collect()
}

/// `D(A, B) = log max(|A^-1 B|, |B^-1 A|, 1)` for every matched sample pair.
fn matched_divergences(a: &[ScaledImage], b: &[ScaledImage]) -> Vec<f64> {
    matched(a.len(), b.len())
        .map(|(x, y)| {
            let ab = a[x].1.log_max_product(&b[y].0);
            let ba = b[y].1.log_max_product(&a[x].0);
            ab.max(ba).max(0.0)
        })
        .collect()
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

fn growth_of(first: &[f64], last: &[f64]) -> f64 {
    last.iter().zip(first).map(|(l, f)| l - f).fold(f64::INFINITY, f64::min)
}

fn verdict(growth: f64, config: &HarnessConfig) -> Verdict {
    if growth >= config.margin {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

struct PairState {
    a: u32,
    b: u32,
    first: Vec<f64>,
    growth: f64,
}

fn matched(a: usize, b: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..a.max(b)).map(move |s| (s % a, s % b))
}

/// Runs properness on every sampled ray and divergence on every unordered
/// pair of disjoint simplices, sharing the mapped points between the two.
///
/// Pair verdicts only need `D` at the first and last radius, so pairs are
/// evaluated there; rows that end up in the report are recomputed over the
/// whole schedule.
pub fn certify<M: ConeMap>(
    map: &M,
    name: &str,
    config: &HarnessConfig,
) -> Result<(PropernessReport, DivergenceReport), ModelError> {
    run(map, name, config, true).map(|(p, d)| (p, d.expect("pairs requested")))
}

pub fn properness_test<M: ConeMap>(
    map: &M,
    name: &str,
    config: &HarnessConfig,
) -> Result<PropernessReport, ModelError> {
    run(map, name, config, false).map(|(p, _)| p)
}

pub fn divergence_all<M: ConeMap>(map: &M, name: &str, config: &HarnessConfig) -> Result<DivergenceReport, ModelError> {
    certify(map, name, config).map(|(_, d)| d)
}

fn run<M: ConeMap>(
    map: &M,
    name: &str,
    config: &HarnessConfig,
    with_pairs: bool,
) -> Result<(PropernessReport, Option<DivergenceReport>), ModelError> {
    let start = Instant::now();
    let faces = all_faces(map, config)?;
    let radii = &config.radii;
    if radii.is_empty() {
        return Err(ModelError::BadPoint("empty radius schedule".into()));
    }
    let mut ray_sizes: Vec<Vec<Vec<f64>>> = faces
        .iter()
        .map(|f| vec![Vec::with_capacity(radii.len()); f.samples.len()])
        .collect();
    let mut pairs: Vec<PairState> = Vec::new();
    if with_pairs {
        for i in 0..faces.len() {
            for j in i + 1..faces.len() {
                if faces[i].mask & faces[j].mask == 0 {
                    pairs.push(PairState {
                        a: i as u32,
                        b: j as u32,
                        first: Vec::new(),
                        growth: 0.0,
                    });
                }
            }
        }
    }
    let last = radii.len() - 1;
    for (r, t) in radii.iter().enumerate() {
        let imgs = images(map, &faces, t)?;
        for (sizes, img) in ray_sizes.iter_mut().zip(&imgs) {
            for (s, (g, inv)) in sizes.iter_mut().zip(img) {
                s.push(size_with_inverse(g, inv));
            }
        }
        if pairs.is_empty() || (r != 0 && r != last) {
            continue;
        }
        let scaled = scale_all(&imgs);
        drop(imgs);
        pairs.par_iter_mut().for_each(|p| {
            let ds = matched_divergences(&scaled[p.a as usize], &scaled[p.b as usize]);
            if r == 0 {
                p.first = ds.clone();
            }
            if r == last {
                p.growth = growth_of(&p.first, &ds);
            }
        });
    }

    let mut rays = PropernessReport {
        schema_version: SCHEMA_VERSION,
        map: name.to_string(),
        config: config.clone(),
        rays: 0,
        passed: 0,
        failed: 0,
        min_growth: f64::INFINITY,
        rows: Vec::new(),
        elapsed: Duration::ZERO,
    };
    for (f, sizes) in faces.iter().zip(&ray_sizes) {
        for (w, s) in f.samples.iter().zip(sizes) {
            let verdict = ray_verdict(s, config);
            rays.rays += 1;
            rays.min_growth = rays.min_growth.min(s[last] - s[0]);
            if verdict == Verdict::Pass {
                rays.passed += 1;
            } else {
                rays.failed += 1;
            }
            if config.keep_rows || verdict != Verdict::Pass {
                rays.rows.push(RayRow {
                    simplex: labels(&f.vertices),
                    weights: labels(w),
                    sizes: s.clone(),
                    verdict,
                });
            }
        }
    }
    rays.elapsed = start.elapsed();
    if !with_pairs {
        return Ok((rays, None));
    }

    let mut report = DivergenceReport {
        schema_version: SCHEMA_VERSION,
        map: name.to_string(),
        config: config.clone(),
        pairs: pairs.len(),
        passed: 0,
        failed: 0,
        min_growth: f64::INFINITY,
        worst: None,
        rows: Vec::new(),
        elapsed: Duration::ZERO,
    };
    let mut worst: Option<&PairState> = None;
    for p in &pairs {
        let v = verdict(p.growth, config);
        if v == Verdict::Pass {
            report.passed += 1;
        } else {
            report.failed += 1;
        }
        if worst.map_or(true, |w| p.growth < w.growth) {
            worst = Some(p);
        }
        if config.keep_rows || v != Verdict::Pass {
            report
                .rows
                .push(full_row(map, &faces[p.a as usize], &faces[p.b as usize], config)?);
        }
    }
    if let Some(w) = worst {
        report.min_growth = w.growth;
        report.worst = Some(full_row(map, &faces[w.a as usize], &faces[w.b as usize], config)?);
    }
    report.elapsed = start.elapsed();
    Ok((rays, Some(report)))
}

fn full_row<M: ConeMap>(
    map: &M,
    fa: &Face<M::Vertex>,
    fb: &Face<M::Vertex>,
    config: &HarnessConfig,
) -> Result<PairRow, ModelError> {
    let pair = [fa.clone(), fb.clone()];
    let mut d = Vec::with_capacity(config.radii.len());
    let mut first = Vec::new();
    let mut growth = 0.0;
    for (r, t) in config.radii.iter().enumerate() {
        let scaled = scale_all(&images(map, &pair, t)?);
        let ds = matched_divergences(&scaled[0], &scaled[1]);
        d.push(min_of(&ds));
        if r == 0 {
            first = ds.clone();
        }
        if r + 1 == config.radii.len() {
            growth = growth_of(&first, &ds);
        }
    }
    Ok(PairRow {
        sigma: labels(&fa.vertices),
        tau: labels(&fb.vertices),
        d,
        growth,
        verdict: verdict(growth, config),
    })
}

/// Divergence of a single pair. Identical or overlapping simplices are
/// reported as inadmissible.
pub fn divergence_test<M: ConeMap>(
    map: &M,
    sigma: &[M::Vertex],
    tau: &[M::Vertex],
    config: &HarnessConfig,
) -> Result<PairRow, ModelError> {
    let domain = map.domain();
    let ids = |s: &[M::Vertex]| -> Result<Vec<usize>, ModelError> {
        let mut ids: Vec<usize> = s
            .iter()
            .map(|v| {
                domain
                    .vertex_index(v)
                    .ok_or_else(|| ModelError::BadVertex(v.to_string()))
            })
            .collect::<Result<_, _>>()?;
        ids.sort_unstable();
        if ids.is_empty() || !domain.contains(s) {
            return Err(ModelError::BadSimplex(labels(s).join(",")));
        }
        Ok(ids)
    };
    let (a, b) = (ids(sigma)?, ids(tau)?);
    let (fa, fb) = (
        face_of(domain.vertices(), &a, config),
        face_of(domain.vertices(), &b, config),
    );
    if fa.mask & fb.mask != 0 {
        return Ok(PairRow {
            sigma: labels(sigma),
            tau: labels(tau),
            d: Vec::new(),
            growth: 0.0,
            verdict: Verdict::Inadmissible,
        });
    }
    full_row(map, &fa, &fb, config)
}
