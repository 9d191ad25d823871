//! Ordering of the hatted simple roots and U/D witness search.
//!
//! Given an ordering of `Δ̂` and a labeling of a prefix by `U`/`D` whose last
//! node (the focus `α̂`) is `D`, a witness is a pair `σ, μ ∈ Φ ∪ {0}` with
//!
//! 1. `μ - σ = α̂`,
//! 2. `σ - φ` is never a positive multiple of a `D` node, for `φ ∈ Φ ∪ {0}`,
//! 3. `φ - σ` is never a positive multiple of a `U` node, for `φ ∈ Φ ∪ {0}`.
//!
//! [`key_ordering`] produces an ordering for which every labeling has a
//! witness, and [`key_witness`] builds one directly. [`exhaustive_verify`]
//! checks every labeling by brute force.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::rootsys::{Family, Root, RootSystem, RootSystemType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Label {
    U,
    D,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LemmaKeyError {
    #[error("invalid labeling: {0}")]
    InvalidLabeling(String),
    #[error("labeling order differs from the key ordering")]
    OrderMismatch,
    #[error("constructive rule produced no valid witness for {0}")]
    NoWitness(Labeling),
    #[error("no witness exists for {0}")]
    LemmaFailure(Labeling),
}

/// A `U`/`D` labeling of a prefix of an ordering of `Δ̂`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Labeling {
    order: Vec<usize>,
    labels: Vec<Label>,
}

impl Labeling {
    /// `labels[k]` labels `order[k]`; the last label is the focus and must be `D`.
    pub fn new(order: Vec<usize>, labels: Vec<Label>) -> Result<Self, LemmaKeyError> {
        if labels.is_empty() || labels.len() > order.len() {
            return Err(LemmaKeyError::InvalidLabeling(format!(
                "{} labels for {} nodes",
                labels.len(),
                order.len()
            )));
        }
        if *labels.last().unwrap() != Label::D {
            return Err(LemmaKeyError::InvalidLabeling("focus must be labeled D".into()));
        }
        let distinct: BTreeSet<usize> = order.iter().copied().collect();
        if distinct.len() != order.len() {
            return Err(LemmaKeyError::InvalidLabeling("order repeats a node".into()));
        }
        Ok(Labeling { order, labels })
    }

    /// Focus at position `p` of `order`; bit `k` of `mask` set means
    /// `order[k]` is `D` (for `k < p`).
    pub fn from_mask(order: &[usize], p: usize, mask: u64) -> Self {
        let mut labels: Vec<Label> = (0..p)
            .map(|k| if mask >> k & 1 == 1 { Label::D } else { Label::U })
            .collect();
        labels.push(Label::D);
        Labeling {
            order: order.to_vec(),
            labels,
        }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn focus(&self) -> usize {
        self.order[self.labels.len() - 1]
    }

    pub fn labeled(&self) -> impl Iterator<Item = (usize, Label)> + '_ {
        self.order.iter().copied().zip(self.labels.iter().copied())
    }

    pub fn label_of(&self, node: usize) -> Option<Label> {
        self.labeled().find(|&(n, _)| n == node).map(|(_, l)| l)
    }

    fn nodes_with(&self, label: Label) -> Vec<usize> {
        self.labeled().filter(|&(_, l)| l == label).map(|(n, _)| n).collect()
    }
}

impl fmt::Display for Labeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.labeled().map(|(n, l)| format!("a{}:{:?}", n + 1, l)).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KeyWitness {
    pub sigma: Root,
    pub mu: Root,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// Condition (1): `μ - σ` differs from `α̂`.
    Difference { expected: Root, got: Root },
    /// Condition (2): `σ - φ` is a positive multiple of the `D` node.
    Down { phi: Root, node: usize },
    /// Condition (3): `φ - σ` is a positive multiple of the `U` node.
    Up { phi: Root, node: usize },
    /// `σ` or `μ` is not in `Φ ∪ {0}`.
    NotAnElement(Root),
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct WitnessCheck {
    pub violations: Vec<Violation>,
}

impl WitnessCheck {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Nodes `i != j` are adjacent when `α_i + α_j` is a root.
pub fn adjacency(rs: &RootSystem) -> Vec<Vec<usize>> {
    let r = rs.rank();
    (0..r)
        .map(|i| {
            (0..r)
                .filter(|&j| j != i && rs.is_root(&Root::simple(r, i).add(&Root::simple(r, j))))
                .collect()
        })
        .collect()
}

/// Connected components of the diagram restricted to `nodes`, each sorted,
/// ordered by smallest node.
fn components_within(adj: &[Vec<usize>], nodes: &BTreeSet<usize>) -> Vec<Vec<usize>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &start in nodes {
        if seen.contains(&start) {
            continue;
        }
        let mut comp = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            if !comp.insert(v) {
                continue;
            }
            stack.extend(adj[v].iter().filter(|w| nodes.contains(w)));
        }
        seen.extend(comp.iter().copied());
        out.push(comp.into_iter().collect());
    }
    out
}

/// Positive roots supported on `nodes`.
fn sub_positives<'a>(rs: &'a RootSystem, nodes: &[usize]) -> impl Iterator<Item = &'a Root> + 'a {
    let support: BTreeSet<usize> = nodes.iter().copied().collect();
    rs.positive_roots()
        .iter()
        .filter(move |r| r.0.iter().enumerate().all(|(i, &c)| c == 0 || support.contains(&i)))
}

fn sub_highest(rs: &RootSystem, nodes: &[usize]) -> Root {
    sub_positives(rs, nodes)
        .max_by_key(|r| r.height())
        .expect("nonempty component")
        .clone()
}

fn is_type_a(rs: &RootSystem, nodes: &[usize]) -> bool {
    let theta = sub_highest(rs, nodes);
    nodes.iter().all(|&i| theta.0[i] == 1)
}

/// Nodes of a type-A component in path order, from the smaller endpoint.
fn path_order(adj: &[Vec<usize>], nodes: &[usize]) -> Vec<usize> {
    let inside = |v: &usize| nodes.contains(v);
    let start = *nodes
        .iter()
        .find(|&&v| adj[v].iter().filter(|w| inside(w)).count() <= 1)
        .expect("a path has an endpoint");
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(&next) = adj[cur].iter().find(|&&w| w != prev && inside(&w)) {
        order.push(next);
        prev = cur;
        cur = next;
    }
    order
}

/// The node `j` at which `-θ` works as `σ`: `θ - α̂_j ∈ Φ ∪ {0}` and `θ` is
/// the only root of the component with maximal `α_j` coefficient.
fn circled_node(rs: &RootSystem, nodes: &[usize]) -> usize {
    let theta = sub_highest(rs, nodes);
    let roots: Vec<&Root> = sub_positives(rs, nodes).collect();
    nodes
        .iter()
        .copied()
        .find(|&j| {
            let hat = rs.hat_index(j).unwrap();
            let top = roots.iter().filter(|r| r.0[j] >= theta.0[j]).count();
            rs.is_element(&theta.sub(&hat).0) && top == 1
        })
        .expect("every non-type-A component has a circled node")
}

fn order_nodes(rs: &RootSystem, adj: &[Vec<usize>], nodes: &BTreeSet<usize>) -> Vec<usize> {
    let mut out = Vec::new();
    for comp in components_within(adj, nodes) {
        if is_type_a(rs, &comp) {
            out.extend(path_order(adj, &comp));
        } else {
            let j = circled_node(rs, &comp);
            let rest: BTreeSet<usize> = comp.iter().copied().filter(|&v| v != j).collect();
            out.extend(order_nodes(rs, adj, &rest));
            out.push(j);
        }
    }
    out
}

/// The key ordering of `Δ̂`, as node indices.
pub fn key_ordering(rs: &RootSystem) -> Vec<usize> {
    let adj = adjacency(rs);
    order_nodes(rs, &adj, &(0..rs.rank()).collect())
}

/// Builds a witness by the constructive rule: on a type-A component, `σ` is
/// minus the sum of the maximal run of `D` nodes ending at the focus;
/// otherwise `σ` is minus the highest root of the component.
pub fn key_witness(rs: &RootSystem, lab: &Labeling) -> Result<KeyWitness, LemmaKeyError> {
    if lab.order() != key_ordering(rs).as_slice() {
        return Err(LemmaKeyError::OrderMismatch);
    }
    let adj = adjacency(rs);
    let focus = lab.focus();
    let labeled: BTreeSet<usize> = lab.labeled().map(|(n, _)| n).collect();
    let comp = components_within(&adj, &labeled)
        .into_iter()
        .find(|c| c.contains(&focus))
        .unwrap();
    let hat = rs.hat_index(focus).unwrap();
    let sigma = if is_type_a(rs, &comp) {
        let mut path = path_order(&adj, &comp);
        if path[0] == focus {
            path.reverse();
        }
        if *path.last().unwrap() != focus {
            return Err(LemmaKeyError::NoWitness(lab.clone()));
        }
        let mut sum = Root::zero(rs.rank());
        for &v in path.iter().rev() {
            if lab.label_of(v) != Some(Label::D) {
                break;
            }
            sum = sum.add(&Root::simple(rs.rank(), v));
        }
        sum.neg()
    } else {
        sub_highest(rs, &comp).neg()
    };
    let w = KeyWitness {
        mu: sigma.add(&hat),
        sigma,
    };
    if verify_witness(rs, lab, &w).is_valid() {
        Ok(w)
    } else {
        Err(LemmaKeyError::NoWitness(lab.clone()))
    }
}

/// Checks conditions (1)-(3), listing every violated triple.
pub fn verify_witness(rs: &RootSystem, lab: &Labeling, w: &KeyWitness) -> WitnessCheck {
    let mut violations = Vec::new();
    let hat = rs.hat_index(lab.focus()).unwrap();
    let diff = w.mu.sub(&w.sigma);
    if diff != hat {
        violations.push(Violation::Difference {
            expected: hat,
            got: diff,
        });
    }
    for v in [&w.sigma, &w.mu] {
        if !rs.is_element(&v.0) {
            violations.push(Violation::NotAnElement(v.clone()));
        }
    }
    let down = lab.nodes_with(Label::D);
    let up = lab.nodes_with(Label::U);
    let hats = rs.hat_simple();
    for phi in rs.roots_with_zero() {
        let d = w.sigma.sub(&phi);
        for &node in &down {
            if d.positive_multiple_of(&hats[node]).is_some() {
                violations.push(Violation::Down { phi: phi.clone(), node });
            }
        }
        let u = d.neg();
        for &node in &up {
            if u.positive_multiple_of(&hats[node]).is_some() {
                violations.push(Violation::Up { phi: phi.clone(), node });
            }
        }
    }
    WitnessCheck { violations }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExhaustiveReport {
    pub system: String,
    /// Key ordering, 1-based node numbers.
    pub order: Vec<usize>,
    pub labelings_checked: u64,
    pub witnesses_found: u64,
    /// Labelings with a witness inside the labeled component of the focus,
    /// quantifying only over that component's roots and nodes.
    pub componentwise_found: u64,
    /// Labelings whose constructive witness passes [`verify_witness`].
    pub constructive_verified: u64,
    #[serde(serialize_with = "crate::as_millis")]
    pub elapsed: Duration,
}

impl ExhaustiveReport {
    pub fn passed(&self) -> bool {
        self.witnesses_found == self.labelings_checked
            && self.componentwise_found == self.labelings_checked
            && self.constructive_verified == self.labelings_checked
    }
}

/// For one candidate `σ`, the nodes that may not be `D` and may not be `U`.
#[derive(Clone, Copy)]
struct Forbidden {
    not_down: u64,
    not_up: u64,
}

fn forbidden_masks(sigma: &Root, elements: &[Root], hats: &[Root], nodes: &[usize]) -> Forbidden {
    let mut f = Forbidden { not_down: 0, not_up: 0 };
    for phi in elements {
        let d = sigma.sub(phi);
        if d.is_zero() {
            continue;
        }
        for &node in nodes {
            if d.positive_multiple_of(&hats[node]).is_some() {
                f.not_down |= 1 << node;
            }
            if d.neg().positive_multiple_of(&hats[node]).is_some() {
                f.not_up |= 1 << node;
            }
        }
    }
    f
}

fn search(candidates: &[Forbidden], down: u64, up: u64) -> bool {
    candidates.iter().any(|f| f.not_down & down == 0 && f.not_up & up == 0)
}

/// Checks every labeling of every prefix of the key ordering by brute force
/// over `σ ∈ Φ ∪ {0}`.
pub fn exhaustive_verify(rs: &RootSystem) -> Result<ExhaustiveReport, LemmaKeyError> {
    let start = Instant::now();
    let order = key_ordering(rs);
    let adj = adjacency(rs);
    let hats = rs.hat_simple();
    let elements = rs.roots_with_zero();
    let all_nodes: Vec<usize> = (0..rs.rank()).collect();
    let masks: Vec<Forbidden> = elements
        .iter()
        .map(|s| forbidden_masks(s, &elements, &hats, &all_nodes))
        .collect();

    let mut restricted = HashMap::new();
    let mut report = ExhaustiveReport {
        system: rs.type_label(),
        order: order.iter().map(|i| i + 1).collect(),
        labelings_checked: 0,
        witnesses_found: 0,
        componentwise_found: 0,
        constructive_verified: 0,
        elapsed: Duration::ZERO,
    };
    for p in 0..order.len() {
        let focus = order[p];
        let candidates: Vec<Forbidden> = elements
            .iter()
            .zip(&masks)
            .filter(|(s, _)| rs.is_element(&s.add(&hats[focus]).0))
            .map(|(_, m)| *m)
            .collect();
        for mask in 0..1u64 << p {
            let lab = Labeling::from_mask(&order, p, mask);
            let (down, up) = node_masks(&lab);
            report.labelings_checked += 1;
            if !search(&candidates, down, up) {
                report.elapsed = start.elapsed();
                return Err(LemmaKeyError::LemmaFailure(lab));
            }
            report.witnesses_found += 1;
            if componentwise_witness(rs, &adj, &hats, &lab, down, up, &mut restricted) {
                report.componentwise_found += 1;
            }
            if key_witness(rs, &lab).is_ok() {
                report.constructive_verified += 1;
            }
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// A1-A8, B2-B8, C2-C8, D4-D8, the exceptional types and BC1-BC8.
pub fn verification_types() -> Vec<RootSystemType> {
    let mut out = Vec::new();
    for (family, lo) in [(Family::A, 1), (Family::B, 2), (Family::C, 2), (Family::D, 4)] {
        out.extend((lo..=8).map(|r| RootSystemType::new(family, r).unwrap()));
    }
    for (family, r) in [
        (Family::E6, 6),
        (Family::E7, 7),
        (Family::E8, 8),
        (Family::F4, 4),
        (Family::G2, 2),
    ] {
        out.push(RootSystemType::new(family, r).unwrap());
    }
    out.extend((1..=8).map(|r| RootSystemType::new(Family::BC, r).unwrap()));
    out
}

fn node_masks(lab: &Labeling) -> (u64, u64) {
    lab.labeled().fold((0, 0), |(d, u), (n, l)| match l {
        Label::D => (d | 1 << n, u),
        Label::U => (d, u | 1 << n),
    })
}

type Restricted = HashMap<Vec<usize>, Vec<(Root, Forbidden)>>;

/// Witness search restricted to the subsystem spanned by the labeled
/// component containing the focus.
fn componentwise_witness(
    rs: &RootSystem,
    adj: &[Vec<usize>],
    hats: &[Root],
    lab: &Labeling,
    down: u64,
    up: u64,
    cache: &mut Restricted,
) -> bool {
    let focus = lab.focus();
    let labeled: BTreeSet<usize> = lab.labeled().map(|(n, _)| n).collect();
    let comp = components_within(adj, &labeled)
        .into_iter()
        .find(|c| c.contains(&focus))
        .unwrap();
    let comp_mask: u64 = comp.iter().fold(0, |m, &n| m | 1 << n);
    let table = cache.entry(comp.clone()).or_insert_with(|| {
        let mut elements = vec![Root::zero(rs.rank())];
        for r in sub_positives(rs, &comp) {
            elements.push(r.clone());
            elements.push(r.neg());
        }
        elements
            .iter()
            .map(|s| (s.clone(), forbidden_masks(s, &elements, hats, &comp)))
            .collect()
    });
    let members: BTreeSet<&Root> = table.iter().map(|(s, _)| s).collect();
    table
        .iter()
        .filter(|(s, _)| members.contains(&s.add(&hats[focus])))
        .any(|(_, f)| f.not_down & down & comp_mask == 0 && f.not_up & up & comp_mask == 0)
}
