use std::collections::BTreeSet;

use obdim_core::complexes::{
    build_c, build_sc, extract_l, is_c_simplex, sc_contains, sc_preimage, sphere_betti, Arrow, ObstructorShape, Side,
    Signed, SignedPosition, SimplicialComplex,
};
use proptest::prelude::*;

fn sp(s: &str) -> SignedPosition {
    s.parse().unwrap()
}

fn arrows(n: usize) -> Vec<Arrow> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                out.push(Arrow::new(i, j));
            }
        }
    }
    out
}

/// Cycle test by repeatedly deleting sources, independent of petgraph.
fn acyclic_by_peeling(set: &[Arrow]) -> bool {
    let mut edges: Vec<Arrow> = set.to_vec();
    loop {
        let nodes: BTreeSet<usize> = edges.iter().flat_map(|a| [a.row, a.col]).collect();
        let Some(&source) = nodes.iter().find(|&&v| edges.iter().all(|a| a.col != v)) else {
            return edges.is_empty();
        };
        edges.retain(|a| a.row != source);
    }
}

#[test]
fn c3_is_an_annulus() {
    let c = build_c(3);
    assert_eq!(c.f_vector().unwrap(), vec![6, 12, 6]);
    assert_eq!(c.betti().unwrap(), vec![1, 1, 0]);
    // unreduced Euler characteristic
    assert_eq!(c.reduced_euler().unwrap() + 1, 0);
    assert!(c.contains(&[Arrow::new(1, 2), Arrow::new(2, 3), Arrow::new(1, 3)]));
    assert!(!c.contains(&[Arrow::new(1, 2), Arrow::new(2, 1)]));
}

#[test]
fn c_simplices_match_acyclic_subsets() {
    for n in 3..=4 {
        let all = arrows(n);
        let c = build_c(n);
        let mut f = vec![0usize; all.len()];
        for mask in 1u32..1 << all.len() {
            let set: Vec<Arrow> = (0..all.len()).filter(|b| mask >> b & 1 == 1).map(|b| all[b]).collect();
            let oracle = acyclic_by_peeling(&set);
            assert_eq!(is_c_simplex(&set), oracle);
            assert_eq!(c.contains(&set), oracle);
            if oracle {
                f[set.len() - 1] += 1;
            }
        }
        while f.last() == Some(&0) {
            f.pop();
        }
        assert_eq!(c.f_vector().unwrap(), f, "n={n}");
    }
}

#[test]
fn signed_double_of_small_complexes() {
    let point = SimplicialComplex::new(vec!["v"], vec![]).unwrap();
    let s = build_sc(&point);
    assert_eq!(s.vertices().len(), 2);
    assert_eq!(s.betti().unwrap(), vec![2]);

    let edge = SimplicialComplex::from_simplices(vec![vec!["a", "b"]]);
    let s = build_sc(&edge);
    assert_eq!(s.f_vector().unwrap(), vec![4, 4]);
    assert_eq!(s.betti().unwrap(), vec![1, 1]);
}

#[test]
fn signed_double_of_c3() {
    let c = build_c(3);
    let sc = build_sc(&c);
    assert_eq!(sc.vertices().len(), 12);
    for tri in c.maximal_simplices() {
        let pre = sc_preimage(&tri);
        assert_eq!(pre.maximal_indices().len(), 8);
        assert_eq!(pre.betti().unwrap(), vec![1, 0, 1]);
        let lifts: Vec<SignedPosition> = pre.vertices().to_vec();
        assert_eq!(sc.induced(&lifts), pre);
    }
    for s in sc.maximal_simplices() {
        assert!(sc_contains(&s));
    }
}

#[test]
fn preimages_in_c4_are_spheres() {
    let c = build_c(4);
    let faces = c.faces().unwrap();
    for (k, layer) in faces.iter().enumerate().take(4) {
        for face in layer {
            let simplex: Vec<Arrow> = face.iter().map(|&i| c.vertices()[i]).collect();
            let pre = sc_preimage(&simplex);
            assert_eq!(pre.maximal_indices().len(), 1 << (k + 1));
            assert_eq!(pre.betti().unwrap(), sphere_betti(k));
        }
    }
}

#[test]
fn l_vertex_counts_and_shape() {
    let counts = [(2, 3), (3, 8), (4, 15)];
    for (n, v) in counts {
        assert_eq!(extract_l(n).complex.vertices().len(), v);
    }
    for n in 2..=6 {
        let l = extract_l(n);
        assert!(l.lies_in_sc(), "n={n}");
        assert!(l.is_isomorphic_to_model(), "n={n}");
        let expected: Vec<u32> = (0..=(n as u32 - 2)).collect();
        assert_eq!(l.shape().plus_dims, expected);
        assert_eq!(2 * l.shape().m(), (n * n + n) as i64 - 6);
    }
}

#[test]
fn l_factor_spheres_have_sphere_homology() {
    let l = extract_l(5);
    for f in &l.factors {
        let sphere = sc_preimage(&f.sphere);
        assert_eq!(sphere.betti().unwrap(), sphere_betti(f.sphere_dim() as usize));
    }
}

#[test]
fn l_is_not_the_induced_subcomplex() {
    let l = extract_l(3);
    let sc = build_sc(&build_c(3));
    let induced = sc.induced(l.complex.vertices());
    assert!(induced.contains(&[sp("13+"), sp("32+")]));
    assert!(!l.complex.contains(&[sp("13+"), sp("32+")]));
    for s in l.complex.maximal_simplices() {
        assert!(induced.contains(&s));
    }
}

#[test]
fn sl3_picture_equals_l3() {
    // sphere over <12,23,13>, the half of the sphere over <13,23,21> with
    // 21+, and 32+ coned to 12+, 12-, 21+
    let mut simplices: Vec<Vec<SignedPosition>> =
        sc_preimage(&[Arrow::new(1, 2), Arrow::new(2, 3), Arrow::new(1, 3)]).maximal_simplices();
    simplices.extend(
        sc_preimage(&[Arrow::new(1, 3), Arrow::new(2, 3), Arrow::new(2, 1)])
            .maximal_simplices()
            .into_iter()
            .filter(|s| s.contains(&sp("21+"))),
    );
    for v in ["12+", "12-", "21+"] {
        simplices.push(vec![sp("32+"), sp(v)]);
    }
    let picture = SimplicialComplex::from_simplices(simplices);
    assert_eq!(picture, extract_l(3).complex);
}

#[test]
fn join_examples() {
    let s0 = SimplicialComplex::new(vec!["n", "s"], vec![]).unwrap();
    let circle = build_sc(&SimplicialComplex::from_simplices(vec![vec!["a", "b"]]));
    assert_eq!(s0.join(&circle).betti().unwrap(), vec![1, 0, 1]);
    let shape = ObstructorShape::new(Some(1), vec![0]).unwrap();
    let model = shape.model_complex();
    // S^1 * (S^0 + point)
    assert_eq!(model.vertices().len(), 4 + 3);
    assert_eq!(model.reduced_euler().unwrap(), 2);
}

#[test]
fn obstructor_m_examples() {
    assert_eq!(ObstructorShape::plus(vec![0, 1]).unwrap().m(), 3);
    for n in 2..=12u32 {
        let s = ObstructorShape::plus((0..=n - 2).collect()).unwrap();
        assert_eq!(2 * s.m(), i64::from(n * n + n) - 6);
        let odd: Vec<u32> = (1..n).map(|i| 2 * i - 1).collect();
        let s = ObstructorShape::new(Some(n - 2), odd).unwrap();
        assert_eq!(s.m(), i64::from(n * n + n) - 4);
    }
}

#[test]
fn json_format() {
    let v = serde_json::to_value(build_c(3).to_json()).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 6);
    assert_eq!(v["vertices"][0], "12");
    assert_eq!(v["maximal"].as_array().unwrap().len(), 6);
}

fn small_complex(max_vertices: usize) -> impl Strategy<Value = SimplicialComplex<usize>> {
    (1..=max_vertices).prop_flat_map(|nv| {
        prop::collection::vec(prop::collection::btree_set(0..nv, 1..=nv.min(3)), 0..5).prop_map(move |sets| {
            let simplices = sets.into_iter().map(|s| s.into_iter().collect()).collect();
            SimplicialComplex::new((0..nv).collect(), simplices).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reduced_euler_multiplies_under_join(x in small_complex(4), y in small_complex(4)) {
        let j = x.join(&y);
        let (ex, ey) = (x.reduced_euler().unwrap(), y.reduced_euler().unwrap());
        prop_assert_eq!(j.reduced_euler().unwrap(), -ex * ey);
    }

    #[test]
    fn signed_double_commutes_with_join(x in small_complex(3), y in small_complex(3)) {
        let left = build_sc(&x.join(&y));
        let right = build_sc(&x).join(&build_sc(&y));
        let ok = left.is_isomorphic_via(&right, |v: &Signed<Side<usize, usize>>| match v.base {
            Side::Left(a) => Side::Left(Signed { base: a, sign: v.sign }),
            Side::Right(b) => Side::Right(Signed { base: b, sign: v.sign }),
        });
        prop_assert!(ok);
    }

    #[test]
    fn m_is_monotone(dims in prop::collection::vec(0u32..6, 1..5), i in 0usize..4, a in prop::option::of(0u32..5)) {
        let base = ObstructorShape::new(a, dims.clone()).unwrap();
        let mut bigger = dims.clone();
        let i = i % bigger.len();
        bigger[i] += 1;
        prop_assert!(ObstructorShape::new(a, bigger).unwrap().m() > base.m());
        let mut more = dims;
        more.push(0);
        prop_assert!(ObstructorShape::new(a, more).unwrap().m() > base.m());
    }
}
