use jwphase::oracle::{dense_pauli, dense_input, exact_branches, exact_distribution, CliffordUnitary, DenseOperator};
use jwphase::pauli::{beta, CliffordTableau, Gate, PauliPoint, PhasedPauli};
use jwphase::scalar::{rat, Rational};
use jwphase::simulate::{injection_circuit, NamedState};
use num_complex::Complex;
use num_traits::Zero;
use proptest::prelude::*;

fn all_gates(n: usize) -> Vec<Gate> {
    let mut gates = Vec::new();
    for q in 0..n {
        gates.extend([
            Gate::X(q),
            Gate::Y(q),
            Gate::Z(q),
            Gate::H(q),
            Gate::S(q),
            Gate::Sdg(q),
            Gate::SX(q),
        ]);
        for t in 0..n {
            if t != q {
                gates.extend([Gate::CX(q, t), Gate::CZ(q, t), Gate::Swap(q, t)]);
            }
        }
    }
    gates
}

#[test]
fn tableau_matches_dense_conjugation_for_every_gate() {
    for n in 1..=3 {
        for g in all_gates(n) {
            let t = g.tableau(n).unwrap();
            let u = CliffordUnitary::of_gate(&g, n).unwrap();
            for a in PauliPoint::all(n) {
                let p = PhasedPauli::from_point(n, a);
                let dense = u.conjugate(&dense_pauli::<Rational>(&p).unwrap());
                let image = dense_pauli::<Rational>(&t.apply(&p).unwrap()).unwrap();
                assert_eq!(dense, image, "gate {g} on {p}");
            }
        }
    }
}

#[test]
fn z_times_x_is_i_y() {
    let z: PhasedPauli = "Z".parse().unwrap();
    let x: PhasedPauli = "X".parse().unwrap();
    assert_eq!(z.mul(&x).unwrap(), "iY".parse().unwrap());
}

#[test]
fn beta_matches_dense_products() {
    let n = 2;
    for a in PauliPoint::all(n) {
        for b in PauliPoint::all(n) {
            let Ok(bt) = beta(a, b) else { continue };
            let ta = dense_pauli::<Rational>(&PhasedPauli::from_point(n, a)).unwrap();
            let tb = dense_pauli::<Rational>(&PhasedPauli::from_point(n, b)).unwrap();
            let tab = dense_pauli::<Rational>(&PhasedPauli::new(n, if bt { 2 } else { 0 }, a + b)).unwrap();
            assert_eq!(ta.mul(&tb), tab);
        }
    }
}

#[test]
fn injection_outputs_t_state() {
    let magic = injection_circuit(NamedState::H);
    let rho = dense_input::<f64>(&magic).unwrap();
    let text = magic.to_string();
    let truncated: String = text.lines().filter(|l| !l.contains("-> out")).collect::<Vec<_>>().join("\n");
    let circuit = jwphase::simulate::Circuit::parse(&truncated).unwrap();
    let branches = exact_branches(&rho, &circuit).unwrap();
    assert_eq!(branches.len(), 2);
    let half = std::f64::consts::FRAC_1_SQRT_2;
    // T|+> = (|0> + e^{i pi/4}|1>)/sqrt 2
    let mut target = DenseOperator::<f64>::zeros(1).unwrap();
    let amp = [Complex::new(half, 0.0), Complex::new(0.5, 0.5)];
    for r in 0..2 {
        for c in 0..2 {
            target.set(r, c, amp[r] * amp[c].conj());
        }
    }
    for b in &branches {
        assert!((b.prob - 0.5).abs() < 1e-12);
        let out = b.state.partial_trace(&[0]).unwrap();
        assert!(out.max_abs_diff(&target) < 1e-12);
    }
    let dist = exact_distribution(&rho, &magic).unwrap();
    let p_plus = (1.0 + half) / 2.0;
    for (bits, p) in dist {
        let expected = 0.5 * if bits[1] { 1.0 - p_plus } else { p_plus };
        assert!((p - expected).abs() < 1e-12);
    }
}

#[test]
fn repeated_measurement_is_deterministic() {
    let c = jwphase::simulate::Circuit::parse("qubits 2\nstate + 0\ngate CX 0 1\nmeasure ZZ -> a\nmeasure XX -> b\nmeasure XX -> c\n").unwrap();
    let rho = dense_input::<Rational>(&c).unwrap();
    let dist = exact_distribution(&rho, &c).unwrap();
    for (bits, p) in &dist {
        assert_eq!(bits[1], bits[2]);
        assert!(!p.is_zero());
    }
    let total: Rational = dist.values().cloned().sum();
    assert_eq!(total, rat(1, 1));
}

proptest! {
    #[test]
    fn random_gate_sequences_match_dense(seq in proptest::collection::vec(0usize..30, 0..8), a in 0usize..64) {
        let n = 3;
        let gates = all_gates(n);
        let chosen: Vec<Gate> = seq.iter().map(|i| gates[i % gates.len()]).collect();
        let t = CliffordTableau::from_gates(n, &chosen).unwrap();
        let p = PhasedPauli::from_point(n, PauliPoint::from_index(a, n));
        let mut m = dense_pauli::<Rational>(&p).unwrap();
        for g in &chosen {
            m = CliffordUnitary::of_gate(g, n).unwrap().conjugate(&m);
        }
        prop_assert_eq!(m, dense_pauli::<Rational>(&t.apply(&p).unwrap()).unwrap());
    }
}
