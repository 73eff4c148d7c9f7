use std::collections::BTreeSet;

use jwphase::oracle::{from_pauli_vector, make_projector};
use jwphase::pauli::{Gate, PauliPoint, DEFAULT_STABILIZER_CAP};
use jwphase::phasespace::{
    build_phase_space, count_isotropics_containing, edge_products, f_counting, find_vertex_signs, inclusion_graph,
    jordan_wigner_majoranas, lambda_membership, make_cnc_operator, make_theorem2_operator, projected_family,
    stabilizer_inner_product, stabilizers, theorem2_family, vertex_check, CncLabel, Origin, PhaseSpaceConfig,
    SignStrategy, Theorem2Label,
};
use jwphase::scalar::{rat_int, Rational};
use num_traits::Zero;
use proptest::prelude::*;

fn x() -> PauliPoint {
    PauliPoint::new(0, 1)
}

fn z() -> PauliPoint {
    PauliPoint::new(1, 0)
}

#[test]
fn jordan_wigner_majoranas_anticommute_pairwise() {
    for n in 1..=4 {
        let maj = jordan_wigner_majoranas(2 * n + 1);
        assert_eq!(maj.len(), 2 * n + 1);
        for (i, a) in maj.iter().enumerate() {
            assert!(a.is_hermitian());
            assert_eq!(a.n, n);
            for b in &maj[i + 1..] {
                assert!(!a.commutes_with(b));
            }
        }
        let products = edge_products(&maj).unwrap();
        assert_eq!(products.len(), Theorem2Label::support_size(n));
        assert!(products.iter().all(|p| p.is_hermitian()));
    }
}

#[test]
fn one_qubit_majorana_operators_are_all_vertices() {
    for bits in 0u8..8 {
        let eta: Vec<bool> = (0..3).map(|i| bits >> i & 1 == 1).collect();
        let op = make_theorem2_operator(&Theorem2Label::jordan_wigner(1, eta)).unwrap();
        let r = vertex_check(&op, DEFAULT_STABILIZER_CAP).unwrap();
        assert_eq!(r.min, rat_int(0));
        assert_eq!(r.rank, 3);
        assert!(r.is_vertex);
    }
    assert_eq!(theorem2_family(1, DEFAULT_STABILIZER_CAP).unwrap().len(), 8);
}

/// Matchings of size `k` in `K_m`, counted by brute force over edge subsets.
fn complete_graph_matchings(m: usize, k: usize) -> usize {
    let edges: Vec<(usize, usize)> = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
    (0u32..1 << edges.len())
        .filter(|s| s.count_ones() as usize == k)
        .filter(|s| {
            let mut used = 0u32;
            edges.iter().enumerate().filter(|(i, _)| s >> i & 1 == 1).all(|(_, &(a, b))| {
                let ok = used & (1 << a | 1 << b) == 0;
                used |= 1 << a | 1 << b;
                ok
            })
        })
        .count()
}

#[test]
fn two_qubit_vertex_has_fifteen_orthogonal_stabilizers() {
    let t = find_vertex_signs(2, SignStrategy::Exhaustive, DEFAULT_STABILIZER_CAP).unwrap();
    assert_eq!(t.report.rank, 15);
    assert_eq!(t.report.min, rat_int(0));
    assert_eq!(t.report.orthogonal.len(), complete_graph_matchings(5, 2));
    assert_eq!(complete_graph_matchings(5, 2), 15);
    let op = make_theorem2_operator(&Theorem2Label::jordan_wigner(2, t.eta.clone())).unwrap();
    assert!(lambda_membership(&op, DEFAULT_STABILIZER_CAP).unwrap().member);
}

#[test]
fn flipped_sign_verdict_is_consistent() {
    let t = find_vertex_signs(2, SignStrategy::Exhaustive, DEFAULT_STABILIZER_CAP).unwrap();
    let mut eta = t.eta.clone();
    eta[0] = !eta[0];
    let op = make_theorem2_operator(&Theorem2Label::jordan_wigner(2, eta)).unwrap();
    let verdict = lambda_membership(&op, DEFAULT_STABILIZER_CAP).unwrap();
    match vertex_check(&op, DEFAULT_STABILIZER_CAP) {
        Ok(r) => assert!(verdict.member && r.rank <= 15),
        Err(_) => assert!(!verdict.member && verdict.min < rat_int(0)),
    }
}

#[test]
fn isotropic_counts_match_closed_form() {
    for n in 1..=3 {
        let maj = jordan_wigner_majoranas(2 * n + 1);
        for idx in 1..1usize << (2 * n) {
            let a = PauliPoint::from_index(idx, n);
            let (m, count) = count_isotropics_containing(a, &maj, DEFAULT_STABILIZER_CAP).unwrap();
            assert_eq!(f_counting(n, m).unwrap(), count.into(), "n={n} a={}", a.to_letters(n));
        }
        let (g, rights) = inclusion_graph(&maj, &vec![false; Theorem2Label::support_size(n)], DEFAULT_STABILIZER_CAP)
            .unwrap();
        let mut degree = vec![0usize; rights.len()];
        for (_, r, _) in &g.edges {
            degree[*r] += 1;
        }
        assert!(degree.iter().all(|d| *d == (1 << n) - 1), "n={n}");
    }
}

#[test]
fn stabilizer_overlap_matches_dense_trace() {
    let ops = build_phase_space(1, &PhaseSpaceConfig::line_graph()).unwrap().operators;
    for op in &ops {
        let dense = from_pauli_vector(&op.to_vector().unwrap()).unwrap();
        for s in stabilizers(1, DEFAULT_STABILIZER_CAP).unwrap() {
            let tr = dense.mul(&make_projector(s).unwrap()).trace();
            assert!(tr.im.is_zero());
            assert_eq!(stabilizer_inner_product(op, s).unwrap(), tr.re);
        }
    }
}

#[test]
fn cnc_labels_are_validated() {
    let zi = PauliPoint::new(0b01, 0);
    let iz = PauliPoint::new(0b10, 0);
    let omega = |g: bool| CncLabel {
        n: 2,
        omega: vec![(zi, false), (iz, false), (zi + iz, g)],
    };
    let op = make_cnc_operator(&omega(false)).unwrap();
    assert!(lambda_membership(&op, DEFAULT_STABILIZER_CAP).unwrap().member);
    assert!(make_cnc_operator(&omega(true)).is_err());
    let open = CncLabel {
        n: 2,
        omega: vec![(zi, false), (iz, false)],
    };
    assert!(make_cnc_operator(&open).is_err());
    let anticommuting = CncLabel {
        n: 1,
        omega: vec![(x(), false), (z(), true)],
    };
    assert!(make_cnc_operator(&anticommuting).is_ok());
}

#[test]
fn projected_extremes_on_one_qubit_are_the_cube() {
    let keys = |ops: Vec<_>| -> BTreeSet<Vec<(PauliPoint, Rational)>> {
        ops.iter().map(jwphase::phasespace::PhasePointOperator::key).collect()
    };
    let projected = keys(projected_family(1, DEFAULT_STABILIZER_CAP).unwrap());
    let cube = keys(theorem2_family(1, DEFAULT_STABILIZER_CAP).unwrap());
    assert_eq!(projected, cube);
}

#[test]
fn generating_sets_lie_in_lambda() {
    for n in [1, 2] {
        let space = build_phase_space(n, &PhaseSpaceConfig::line_graph()).unwrap();
        assert!(space.count(Origin::Stabilizer) > 0 && space.count(Origin::Cnc) > 0);
        let step = if n == 1 { 1 } else { 37 };
        for op in space.operators.iter().step_by(step) {
            assert!(lambda_membership(op, DEFAULT_STABILIZER_CAP).unwrap().member);
        }
    }
    let stab = build_phase_space(1, &PhaseSpaceConfig::stabilizer_only()).unwrap();
    assert_eq!(stab.len(), 6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn clifford_conjugation_preserves_membership(bits in 0u32..1 << 10, gates in proptest::collection::vec(0usize..5, 1..6)) {
        let eta: Vec<bool> = (0..10).map(|i| bits >> i & 1 == 1).collect();
        let op = make_theorem2_operator(&Theorem2Label::jordan_wigner(2, eta)).unwrap();
        let before = lambda_membership(&op, DEFAULT_STABILIZER_CAP).unwrap();
        let mut image = op.clone();
        for g in gates {
            let gate = [Gate::H(0), Gate::S(1), Gate::CX(0, 1), Gate::SX(1), Gate::CZ(0, 1)][g];
            image = image.conjugate(&gate.tableau(2).unwrap()).unwrap();
        }
        let after = lambda_membership(&image, DEFAULT_STABILIZER_CAP).unwrap();
        prop_assert_eq!(before.member, after.member);
        prop_assert_eq!(before.min, after.min);
    }
}
