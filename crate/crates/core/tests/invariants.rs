mod common;

use common::*;
use proptest::prelude::*;

use xyent::analytic::{
    delta_max, finite_t_concurrence_formula, global_max_concurrence, steady_concurrence_t0,
    steady_concurrence_t0_unclamped, steady_state, steady_state_finite_t, steady_state_t0,
};
use xyent::dynamics::steady_state_nullspace;
use xyent::entanglement::{concurrence, concurrence_general, concurrence_x_form, partial_trace, Subsystem};
use xyent::model::{
    build_hamiltonian, eigenbasis, liouvillian_superoperator, master_rhs, DensityMatrix, ModelParams,
    StateVector,
};
use xyent::qmath::{hermitian_eigen, kron, ComplexMatrix};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn general_concurrence_matches_x_form(rho in x_state()) {
        let g = concurrence_general(&rho).unwrap().c;
        let x = concurrence_x_form(&rho).unwrap().c;
        prop_assert!((g - x).abs() < 1e-9, "general {g} vs x-form {x}");
    }

    #[test]
    fn closed_form_steady_concurrence_matches_matrix(
        w in 0.0..5.0f64, d in -3.0..3.0f64, g in 0.05..3.0f64,
    ) {
        let p = ModelParams::zero_temperature(w, 0.0, d, g).unwrap();
        let from_matrix = concurrence_x_form(&steady_state_t0(&p).unwrap().rho).unwrap().c;
        prop_assert!((steady_concurrence_t0(&p).unwrap() - from_matrix).abs() < 1e-12);
    }

    #[test]
    fn finite_t_formula_is_first_branch(w in 0.0..5.0f64, d in -3.0..3.0f64, n in 0.0..3.0f64) {
        let p = ModelParams::scaled(w, d, n).unwrap();
        let r = concurrence_x_form(&steady_state_finite_t(&p).unwrap().rho).unwrap();
        let formula = finite_t_concurrence_formula(w, d, n);
        prop_assert!((formula - r.c1.unwrap()).abs() < 1e-10, "formula {formula} vs C1 {:?}", r.c1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn hamiltonian_spectrum(p in any_params()) {
        let big = p.derived().omega_big;
        let mut expected = [big, -big, p.j, -p.j];
        expected.sort_by(f64::total_cmp);
        let eig = hermitian_eigen(&build_hamiltonian(&p)).unwrap();
        for (a, b) in eig.eigenvalues.iter().zip(expected) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        let basis = eigenbasis(&p);
        let u = basis.unitary();
        let diag = &(&u.adjoint() * &build_hamiltonian(&p)) * &u;
        let expected = ComplexMatrix::from_real_diagonal(&basis.energies).unwrap();
        prop_assert!(diag.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn analytic_steady_states_are_stationary(p in valid_params(2.0)) {
        let s = steady_state(&p).unwrap();
        prop_assert!(master_rhs(&p, s.rho.matrix()).max_abs() < 1e-12);
    }

    #[test]
    fn nullspace_agrees_with_closed_form(p in any_params()) {
        let a = steady_state(&p).unwrap();
        let n = steady_state_nullspace(&p).unwrap();
        prop_assert!(a.rho.max_abs_diff(&n.rho) < 1e-10);
    }

    #[test]
    fn liouvillian_matches_master_equation(p in any_params(), x in any_matrix()) {
        let l = liouvillian_superoperator(&p);
        let lv = ComplexMatrix::unvectorize(&l.mul_vec(&x.vectorize()).unwrap()).unwrap();
        let direct = master_rhs(&p, &x);
        prop_assert!(lv.max_abs_diff(&direct) < 1e-12);
        prop_assert!(direct.trace().norm() < 1e-12);
    }

    #[test]
    fn generator_preserves_hermiticity(p in any_params(), x in hermitian_matrix()) {
        prop_assert!(master_rhs(&p, &x).hermitian_deviation() < 1e-12);
    }

    #[test]
    fn concurrence_is_local_unitary_invariant(
        rho in density_matrix(), u1 in qubit_unitary(), u2 in qubit_unitary(),
    ) {
        let u = kron(&u1, &u2).unwrap();
        let rotated = DensityMatrix::new((&(&u * rho.matrix()) * &u.adjoint()).hermitian_part()).unwrap();
        let a = concurrence_general(&rho).unwrap().c;
        let b = concurrence_general(&rotated).unwrap().c;
        prop_assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn product_states_are_unentangled(a in qubit_state(), b in qubit_state()) {
        let v = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]];
        let rho = DensityMatrix::from_pure(&StateVector::normalized(v).unwrap());
        prop_assert!(concurrence(&rho).unwrap().c < 1e-7);
    }

    #[test]
    fn partial_traces_are_states(rho in density_matrix()) {
        for keep in [Subsystem::A, Subsystem::B] {
            let r = partial_trace(&rho, keep);
            prop_assert!((r.trace().re - 1.0).abs() < 1e-12);
            prop_assert!(r.hermitian_deviation() < 1e-12);
        }
    }

    #[test]
    fn optimal_anisotropy_reaches_global_maximum(w in 0.0..5.0f64, g in 0.05..3.0f64) {
        let dm = delta_max(w, g);
        let at = steady_concurrence_t0_unclamped(w, dm, g);
        prop_assert!((at - global_max_concurrence()).abs() < 1e-12);
        prop_assert!(at >= steady_concurrence_t0_unclamped(w, dm * (1.0 + 1e-3), g));
        prop_assert!(at >= steady_concurrence_t0_unclamped(w, dm * (1.0 - 1e-3), g));
    }

    #[test]
    fn concurrence_sign_follows_positivity_bound(
        w in 0.0..3.0f64, g in 0.05..3.0f64, rel in 1e-3..0.5f64,
    ) {
        let bound = (4.0 * w * w + g * g).sqrt();
        prop_assert!(steady_concurrence_t0_unclamped(w, bound * (1.0 - rel), g) > 0.0);
        prop_assert!(steady_concurrence_t0_unclamped(w, bound * (1.0 + rel), g) < 0.0);
        prop_assert!(steady_concurrence_t0_unclamped(w, bound, g).abs() < 1e-12);
    }

    #[test]
    fn steady_concurrence_scale_invariant(p in valid_params(1.0), k in 0.1..10.0f64) {
        let q = p.rescaled(k).unwrap();
        let a = concurrence(&steady_state(&p).unwrap().rho).unwrap().c;
        let b = concurrence(&steady_state(&q).unwrap().rho).unwrap().c;
        prop_assert!((a - b).abs() < 1e-10);
        let n = concurrence(&steady_state_nullspace(&q).unwrap().rho).unwrap().c;
        prop_assert!((a - n).abs() < 1e-10);
    }
}

#[test]
fn werner_family() {
    let singlet = StateVector::normalized([c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]).unwrap();
    let s = DensityMatrix::from_pure(&singlet);
    let mixed = ComplexMatrix::identity(4).unwrap().scale_real(0.25);
    for k in 0..=100 {
        let p = k as f64 / 100.0;
        let m = &s.matrix().scale_real(p) + &mixed.scale_real(1.0 - p);
        let rho = DensityMatrix::new(m).unwrap();
        let expected = ((3.0 * p - 1.0) / 2.0).max(0.0);
        assert!((concurrence_general(&rho).unwrap().c - expected).abs() < 1e-10, "p = {p}");
        assert!((concurrence_x_form(&rho).unwrap().c - expected).abs() < 1e-10, "p = {p}");
    }
}

#[test]
fn steady_concurrence_independent_of_coupling() {
    for base in [ModelParams::figure1(), ModelParams::figure2()] {
        let cs: Vec<f64> = [0.0, 0.05, 0.1]
            .iter()
            .map(|&j| {
                let p = base.with_j(j * base.omega).unwrap();
                concurrence(&steady_state_nullspace(&p).unwrap().rho).unwrap().c
            })
            .collect();
        for c in &cs {
            assert!((c - cs[0]).abs() < 1e-8, "{cs:?}");
        }
    }
}

#[test]
fn steady_coherence_is_global() {
    for p in [ModelParams::figure1(), ModelParams::figure2(), ModelParams::figure2().with_nbar(0.3).unwrap()] {
        let rho = steady_state_nullspace(&p).unwrap().rho;
        for keep in [Subsystem::A, Subsystem::B] {
            let r = partial_trace(&rho, keep);
            assert!(r[(0, 1)].norm() < 1e-12 && r[(1, 0)].norm() < 1e-12);
        }
        assert!(rho.get(0, 3).norm() > 1e-3);
    }
}

#[test]
fn high_temperature_limit() {
    for base in [ModelParams::figure1(), ModelParams::figure2()] {
        let p = base.with_nbar(1e6).unwrap();
        let s = steady_state_finite_t(&p).unwrap();
        for k in 0..4 {
            assert!((s.rho.population(k) - 0.25).abs() < 1e-5);
        }
        assert!(s.rho.get(0, 3).norm() < 1e-6);
        assert_eq!(concurrence(&s.rho).unwrap().c, 0.0);
    }
}

#[test]
fn large_energy_asymptote() {
    let d = 0.7;
    let w = 1e6;
    let c = finite_t_concurrence_formula(w, d, 0.0);
    assert!((c * w / d - 1.0).abs() < 1e-3);
}
