use num_rational::BigRational;
use num_traits::{One, Zero};
use obdim_core::complexes::{Arrow, Side, Signed, SignedPosition};
use obdim_core::exact::{rat, ratio, ExactMatrix};
use obdim_core::matrixmodels::adjoint::{adjoint_apply, adjoint_component, adjoint_series, arrow_root, lhs_spot_check};
use obdim_core::matrixmodels::harness::{certify, divergence_test, properness_test, HarnessConfig, Verdict};
use obdim_core::matrixmodels::lemma25::{lemma25_experiment, s_matrix};
use obdim_core::matrixmodels::{
    divergence, fibration_compose, heisenberg_map, naive_map, psi_sl, size, split_map, ConeMap, ConePoint, ConstantMap,
    HeisenbergMap, ModelError, PsiMap, TrivialMap,
};
use obdim_core::Root;
use proptest::prelude::*;

fn sp(s: &str) -> SignedPosition {
    s.parse().unwrap()
}

fn point(vs: &[&str], coords: &[i64]) -> ConePoint<SignedPosition> {
    let t: i64 = coords.iter().sum();
    let w = coords.iter().map(|&c| ratio(c, t)).collect();
    ConePoint::new(vs.iter().map(|v| sp(v)).collect(), w, rat(t)).unwrap()
}

fn m(rows: &[&[i64]]) -> ExactMatrix {
    ExactMatrix::from_i64(rows)
}

#[test]
fn heisenberg_examples() {
    let apex = ConePoint::<SignedPosition>::apex();
    assert!(heisenberg_map(3, &apex).unwrap().is_identity());
    let p = point(&["12+"], &[5]);
    assert_eq!(heisenberg_map(3, &p).unwrap(), m(&[&[1, 5, 0], &[0, 1, 0], &[0, 0, 1]]));
    let p = point(&["12-", "13+", "23-"], &[1, 2, 3]);
    assert_eq!(
        heisenberg_map(3, &p).unwrap(),
        m(&[&[1, -1, 2], &[0, 1, -3], &[0, 0, 1]])
    );
    assert!(matches!(
        heisenberg_map(3, &point(&["21+"], &[1])),
        Err(ModelError::BadVertex(_))
    ));
    assert!(matches!(
        heisenberg_map(2, &point(&["13+"], &[1])),
        Err(ModelError::BadVertex(_))
    ));
    assert!(heisenberg_map(3, &point(&["12+", "12-"], &[1, 1])).is_err());
}

#[test]
fn heisenberg_difference_is_linear_in_t() {
    // σ = {12+}, τ = {12-, 13+} with weights (w, 1-w): A^-1 B has -t(1+w) at (1,2).
    for (num, den) in [(1, 2), (1, 3), (5, 7)] {
        let w = ratio(num, den);
        for t in [1, 10, 1000] {
            let t = rat(t);
            let a = heisenberg_map(3, &ConePoint::new(vec![sp("12+")], vec![rat(1)], t.clone()).unwrap()).unwrap();
            let b = heisenberg_map(
                3,
                &ConePoint::new(
                    vec![sp("12-"), sp("13+")],
                    vec![w.clone(), BigRational::one() - &w],
                    t.clone(),
                )
                .unwrap(),
            )
            .unwrap();
            let d = &a.inverse().unwrap() * &b;
            assert_eq!(d[(0, 1)], -(&t * (BigRational::one() + &w)));
        }
    }
}

#[test]
fn split_map_product_display() {
    for (x, y) in [(3, 5), (1, 1), (10, 2)] {
        let p = point(&["23+", "31+"], &[x, y]);
        let expected = m(&[&[1, 0, 0], &[x * y, 1, x], &[y, 0, 1]]);
        assert_eq!(split_map(3, &p).unwrap(), expected);
    }
    // 31+ is not a vertex of L(3)
    assert!(matches!(
        psi_sl(3, &point(&["23+", "31+"], &[1, 1])),
        Err(ModelError::BadSimplex(_))
    ));
    assert!(matches!(
        split_map(3, &point(&["12+", "21+"], &[1, 1])),
        Err(ModelError::BadSimplex(_))
    ));
}

#[test]
fn bounded_and_unbounded_pairs() {
    let mut bounded = Vec::new();
    let mut unbounded = Vec::new();
    for r in [10, 1000, 1_000_000] {
        let a = split_map(3, &point(&["12+", "13+", "23+"], &[r, 1, 1])).unwrap();
        assert_eq!(a, m(&[&[1, r, 1], &[0, 1, 1], &[0, 0, 1]]));
        let b = naive_map(3, &point(&["13-", "32+"], &[r, 1])).unwrap();
        assert_eq!(b, m(&[&[1, 0, -r], &[0, 1, 0], &[0, 1, 1]]));
        let b2 = split_map(3, &point(&["13-", "32+"], &[r, 1])).unwrap();
        assert_eq!(b2, m(&[&[1, -r, -r], &[0, 1, 0], &[0, 1, 1]]));

        let ainv = a.inverse().unwrap();
        assert_eq!(&ainv * &b, m(&[&[1, -1, -1], &[0, 0, -1], &[0, 1, 1]]));
        assert_eq!(&ainv * &b2, m(&[&[1, -r - 1, -1], &[0, 0, -1], &[0, 1, 1]]));
        bounded.push(divergence(&a, &b).unwrap());
        unbounded.push(divergence(&a, &b2).unwrap());
    }
    assert!(bounded.windows(2).all(|w| w[0] == w[1]));
    assert!(unbounded.windows(2).all(|w| w[1] > w[0] + 4.0));
}

#[test]
fn psi_has_determinant_one_on_l() {
    let psi = PsiMap::new(4);
    for s in psi.domain().maximal_simplices() {
        let coords: Vec<i64> = (1..=s.len() as i64).collect();
        let names: Vec<String> = s.iter().map(ToString::to_string).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let g = psi.eval(&point(&refs, &coords)).unwrap();
        assert!(g.determinant().is_one());
    }
}

#[test]
fn divergence_statistic_symmetry_and_invariance() {
    let a = split_map(3, &point(&["12+", "13-", "32+"], &[2, 7, 3])).unwrap();
    let b = split_map(3, &point(&["21+", "23-"], &[5, 4])).unwrap();
    let g = m(&[&[2, 1, 0], &[1, 1, 0], &[3, -4, 1]]);
    let d = divergence(&a, &b).unwrap();
    assert_eq!(d, divergence(&b, &a).unwrap());
    assert_eq!(d, divergence(&(&g * &a), &(&g * &b)).unwrap());
    assert_eq!(size(&ExactMatrix::identity(4)).unwrap(), 0.0);
}

#[test]
fn harness_n3() {
    let config = HarnessConfig::default();
    let (rays, pairs) = certify(&HeisenbergMap::new(3), "heisenberg", &config).unwrap();
    assert!(rays.passed() && pairs.passed());
    assert_eq!(pairs.pairs, 145);
    let (rays, pairs) = certify(&PsiMap::new(3), "psi", &config).unwrap();
    assert!(rays.passed() && pairs.passed());
    assert!(pairs.min_growth >= config.margin);
}

#[test]
fn harness_edge_cases() {
    let config = HarnessConfig::default();
    let h = HeisenbergMap::new(3);
    let same = divergence_test(&h, &[sp("12+")], &[sp("12+")], &config).unwrap();
    assert_eq!(same.verdict, Verdict::Inadmissible);
    let row = divergence_test(&h, &[sp("12+")], &[sp("12-"), sp("13+")], &config).unwrap();
    assert_eq!(row.verdict, Verdict::Pass);
    assert_eq!(row.d.len(), config.radii.len());
    assert!(divergence_test(&h, &[sp("21+")], &[sp("12-")], &config).is_err());

    let constant = ConstantMap {
        value: ExactMatrix::identity(3),
        domain: h.domain().clone(),
    };
    let report = properness_test(&constant, "constant", &config).unwrap();
    assert!(!report.passed());
    assert_eq!(report.passed, 0);
    assert!(properness_test(&h, "heisenberg", &config).unwrap().passed());
    assert!(properness_test(&PsiMap::new(3), "psi", &config).unwrap().passed());
}

fn center_embed(h: &ExactMatrix) -> ExactMatrix {
    let mut g = ExactMatrix::identity(3);
    g[(0, 2)] = h[(0, 1)].clone();
    g
}

fn heisenberg_by_fibration() -> obdim_core::matrixmodels::FibrationMap<HeisenbergMap, HeisenbergMap> {
    let center = HeisenbergMap::new(2);
    let quotient = HeisenbergMap::with_positions(3, vec![Arrow::new(1, 2), Arrow::new(2, 3)]).unwrap();
    fibration_compose(center, quotient, |q| q.clone(), center_embed).unwrap()
}

#[test]
fn fibration_recovers_heisenberg() {
    let f = heisenberg_by_fibration();
    let h = HeisenbergMap::new(3);
    let relabel = |v: &Side<SignedPosition, SignedPosition>| match v {
        Side::Left(c) => Signed {
            base: Arrow::new(1, 3),
            sign: c.sign,
        },
        Side::Right(q) => *q,
    };
    assert!(f.domain().is_isomorphic_via(h.domain(), relabel));
    for s in f.domain().maximal_simplices() {
        for (coords, t) in [([1, 2, 3], 6), ([5, 1, 1], 70), ([1, 1, 1], 3)] {
            let w: Vec<BigRational> = coords.iter().map(|&c| ratio(c, coords.iter().sum())).collect();
            let p = ConePoint::new(s.clone(), w.clone(), rat(t)).unwrap();
            let q = ConePoint::new(s.iter().map(relabel).collect(), w, rat(t)).unwrap();
            assert_eq!(f.eval(&p).unwrap(), h.eval(&q).unwrap());
        }
    }
    let (rays, pairs) = certify(&f, "fibration", &HarnessConfig::default()).unwrap();
    assert!(rays.passed() && pairs.passed());
    assert_eq!(pairs.pairs, 145);
}

#[test]
fn fibration_trivial_factors() {
    let alpha = HeisenbergMap::new(3);
    let f = fibration_compose(
        alpha.clone(),
        TrivialMap::new(1),
        |_| ExactMatrix::identity(3),
        |h| h.clone(),
    )
    .unwrap();
    let p = point(&["12+", "23-"], &[2, 3]);
    let lifted = ConePoint::new(
        p.simplex.iter().cloned().map(Side::Left).collect(),
        p.weights.clone(),
        p.t.clone(),
    )
    .unwrap();
    assert_eq!(f.eval(&lifted).unwrap(), alpha.eval(&p).unwrap());

    let beta = HeisenbergMap::new(3);
    let g = fibration_compose(
        TrivialMap::new(1),
        beta.clone(),
        |q| q.clone(),
        |_| ExactMatrix::identity(3),
    )
    .unwrap();
    let lifted = ConePoint::new(
        p.simplex.iter().cloned().map(Side::Right).collect(),
        p.weights.clone(),
        p.t.clone(),
    )
    .unwrap();
    assert_eq!(g.eval(&lifted).unwrap(), beta.eval(&p).unwrap());

    let bad = fibration_compose(
        HeisenbergMap::new(2),
        HeisenbergMap::new(3),
        |q| q.clone(),
        |h| h.clone(),
    );
    assert!(matches!(bad, Err(ModelError::Matrix(_))));
}

#[test]
fn lemma25_small_examples() {
    let u = m(&[&[1, 4, -2], &[0, 1, 7], &[0, 0, 1]]);
    let id = ExactMatrix::identity(3);
    assert!(s_matrix(&u, &id, &u, &id).unwrap().is_identity());

    let big = 1_000_000;
    let lambda = m(&[&[1, 0], &[big, 1]]);
    let id2 = ExactMatrix::identity(2);
    let s = s_matrix(&id2, &lambda, &id2, &id2).unwrap();
    assert_eq!(s, lambda.inverse().unwrap());
    assert_eq!(s.max_abs(), rat(big));
}

#[test]
fn lemma25_minimum_grows() {
    let mins: Vec<BigRational> = [10, 1000, 100_000]
        .iter()
        .map(|&mag| lemma25_experiment(3, mag, 30, 11).unwrap().min_max_entry)
        .collect();
    assert!(mins.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn adjoint_examples() {
    let e = |i, j| Arrow::new(i, j);
    let id = ExactMatrix::identity(3);
    for (s, t) in [
        (e(1, 2), e(1, 2)),
        (e(1, 3), e(2, 3)),
        (e(3, 1), e(3, 1)),
        (e(2, 1), e(1, 2)),
    ] {
        let c = adjoint_component(3, &id, s, t).unwrap();
        assert_eq!(c, if s == t { rat(1) } else { rat(0) });
    }
    for t in [rat(1), rat(-4), ratio(7, 3)] {
        let g = ExactMatrix::elementary(3, 1, 0).scale(&t).exp_nilpotent().unwrap();
        assert_eq!(adjoint_component(3, &g, e(1, 3), e(2, 3)).unwrap(), t);
    }
    let d = [rat(2), ratio(1, 3), ratio(3, 2)];
    let g = ExactMatrix::diagonal(&d);
    for (i, j) in [(1, 2), (3, 1), (2, 3)] {
        let c = adjoint_component(3, &g, e(i, j), e(i, j)).unwrap();
        assert_eq!(c, &d[i - 1] / &d[j - 1]);
    }
}

#[test]
fn lhs_component_is_linear() {
    let mut labelings = std::collections::BTreeSet::new();
    for seed in 0..20 {
        let inst = lhs_spot_check(seed).unwrap();
        assert!(inst.linear, "seed {seed}: {:?}", inst.values);
        assert_eq!(inst.values[0].1, "0");
        labelings.insert(inst.labeling);
    }
    assert_eq!(labelings.len(), 3);
}

/// Whether `v` is a sum of the generators, all of which are positive roots.
fn in_monoid(v: &[i64], gens: &[Root]) -> bool {
    if v.iter().any(|&c| c < 0) {
        return false;
    }
    if v.iter().all(|&c| c == 0) {
        return true;
    }
    gens.iter().any(|g| {
        let rest: Vec<i64> = v.iter().zip(g.coeffs()).map(|(a, b)| a - b).collect();
        in_monoid(&rest, gens)
    })
}

fn upper_support(n: usize) -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    let positions: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    prop::collection::vec((prop::sample::select(positions), -3i64..=3), 1..4)
        .prop_map(|v| v.into_iter().map(|((i, j), c)| (i, j, c)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn adjoint_respects_root_support(entries in upper_support(4)) {
        let n = 4;
        let mut x = ExactMatrix::zeros(n);
        for &(i, j, c) in &entries {
            x[(i, j)] = rat(c);
        }
        let gens: Vec<Root> = entries
            .iter()
            .filter(|e| e.2 != 0)
            .map(|&(i, j, _)| arrow_root(n, Arrow::new(i + 1, j + 1)))
            .collect();
        let g = x.exp_nilpotent().unwrap();
        for s in (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j))).filter(|(i, j)| i != j) {
            for t in (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j))).filter(|(i, j)| i != j) {
                let (s, t) = (Arrow::new(s.0, s.1), Arrow::new(t.0, t.1));
                let c = adjoint_component(n, &g, s, t).unwrap();
                if !c.is_zero() {
                    let diff = arrow_root(n, t).sub(&arrow_root(n, s));
                    prop_assert!(in_monoid(diff.coeffs(), &gens), "{s} -> {t}");
                }
            }
        }
    }

    #[test]
    fn exp_series_matches_conjugation(entries in upper_support(4), y in prop::collection::vec(-5i64..=5, 16)) {
        let mut x = ExactMatrix::zeros(4);
        for &(i, j, c) in &entries {
            x[(i, j)] = ratio(c, 2);
        }
        let rows: Vec<&[i64]> = y.chunks(4).collect();
        let y = ExactMatrix::from_i64(&rows);
        let g = x.exp_nilpotent().unwrap();
        prop_assert_eq!(adjoint_series(&x, &y).unwrap(), adjoint_apply(&g, &y).unwrap());
    }
}
