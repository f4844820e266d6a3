//! Concurrence and local/global coherence diagnostics.

use crate::error::{Error, Result};
use crate::model::{DensityMatrix, EE, EG, GE, GG};
use crate::qmath::{hermitian_eigen, kron, pauli_y, psd_sqrt, ComplexMatrix, ComplexScalar};

/// Tolerance on the block-2 entries for [`concurrence_x_form`].
pub const X_PATTERN_TOL: f64 = 1e-10;

const LAMBDA_CLAMP_TOL: f64 = 1e-10;

/// Entries that vanish for an X-shaped density matrix.
const OFF_X_ENTRIES: [(usize, usize); 8] = [
    (EE, EG),
    (EE, GE),
    (EG, GG),
    (GE, GG),
    (EG, EE),
    (GE, EE),
    (GG, EG),
    (GG, GE),
];

#[derive(Debug, Clone, PartialEq)]
pub struct ConcurrenceResult {
    /// Eigenvalues of `ρ ρ̃`, descending and clamped at zero.
    pub lambdas: [f64; 4],
    /// Smallest eigenvalue before clamping.
    pub min_raw_lambda: f64,
    /// Block branches, present when computed from the X-state closed form.
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub c: f64,
}

impl ConcurrenceResult {
    /// `√λ₁ − √λ₂ − √λ₃ − √λ₄` before clamping.
    pub fn wootters_margin(&self) -> f64 {
        let s = self.lambdas.map(f64::sqrt);
        s[0] - s[1] - s[2] - s[3]
    }
}

fn sort_descending(mut l: [f64; 4]) -> [f64; 4] {
    l.sort_by(|a, b| b.total_cmp(a));
    l
}

/// `(σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
pub fn spin_flip(rho: &ComplexMatrix) -> ComplexMatrix {
    let yy = kron(&pauli_y(), &pauli_y()).expect("4x4");
    &(&yy * &rho.conj()) * &yy
}

/// Wootters concurrence for an arbitrary two-qubit state.
///
/// The eigenvalues of `R = ρ ρ̃` are taken from the similar Hermitian matrix
/// `√ρ ρ̃ √ρ`, which shares the spectrum of `R`.
pub fn concurrence_general(rho: &DensityMatrix) -> Result<ConcurrenceResult> {
    let m = rho.matrix();
    let sqrt_rho = psd_sqrt(m)?;
    let flipped = spin_flip(m);
    let product = &(&sqrt_rho * &flipped) * &sqrt_rho;
    let eig = hermitian_eigen(&product.hermitian_part())?;
    let min_raw = eig.eigenvalues[0];
    if min_raw < -LAMBDA_CLAMP_TOL {
        return Err(Error::Numeric(format!(
            "spin-flip spectrum has eigenvalue {min_raw:.3e} below -1e-10"
        )));
    }
    let mut lambdas = [0.0; 4];
    for (dst, &l) in lambdas.iter_mut().zip(eig.eigenvalues.iter().rev()) {
        *dst = l.max(0.0);
    }
    let s = lambdas.map(f64::sqrt);
    let c = (s[0] - s[1] - s[2] - s[3]).max(0.0);
    Ok(ConcurrenceResult {
        lambdas,
        min_raw_lambda: min_raw,
        c1: None,
        c2: None,
        c,
    })
}

/// Largest block-2 entry magnitude and its location, for X-pattern checks.
pub fn x_pattern_violation(m: &ComplexMatrix) -> (f64, (usize, usize)) {
    OFF_X_ENTRIES
        .iter()
        .map(|&(i, j)| (m[(i, j)].norm(), (i, j)))
        .fold((0.0, (0, 0)), |best, cur| if cur.0 > best.0 { cur } else { best })
}

pub fn is_x_form(m: &ComplexMatrix) -> bool {
    x_pattern_violation(m).0 <= X_PATTERN_TOL
}

/// Closed-form concurrence of an X-shaped state:
/// `C = max(0, C₁, C₂)` with `C₁ = 2(|ρ₄₁| − √(ρ₃₃ρ₂₂))`, `C₂ = 2(|ρ₃₂| − √(ρ₄₄ρ₁₁))`.
pub fn concurrence_x_form(rho: &DensityMatrix) -> Result<ConcurrenceResult> {
    let m = rho.matrix();
    let (worst, (i, j)) = x_pattern_violation(m);
    if worst > X_PATTERN_TOL {
        return Err(Error::Domain(format!(
            "not an X-state: |rho{}{}| = {worst:.3e} exceeds {X_PATTERN_TOL:e}",
            i + 1,
            j + 1
        )));
    }
    let p = |k: usize| m[(k, k)].re.max(0.0);
    let outer_diag = (p(EE) * p(GG)).sqrt();
    let inner_diag = (p(EG) * p(GE)).sqrt();
    let outer_coh = m[(GG, EE)].norm();
    let inner_coh = m[(GE, EG)].norm();

    let c1 = 2.0 * (outer_coh - inner_diag);
    let c2 = 2.0 * (inner_coh - outer_diag);
    let c = c1.max(c2).max(0.0);

    // √λ pairs are |√(ρ₁₁ρ₄₄) ± |ρ₁₄|| and |√(ρ₂₂ρ₃₃) ± |ρ₂₃||
    let lambdas = sort_descending([
        (outer_diag + outer_coh).powi(2),
        (outer_diag - outer_coh).powi(2),
        (inner_diag + inner_coh).powi(2),
        (inner_diag - inner_coh).powi(2),
    ]);
    Ok(ConcurrenceResult {
        lambdas,
        min_raw_lambda: lambdas[3],
        c1: Some(c1),
        c2: Some(c2),
        c,
    })
}

/// X-form closed form when the pattern holds, general construction otherwise.
pub fn concurrence(rho: &DensityMatrix) -> Result<ConcurrenceResult> {
    if is_x_form(rho.matrix()) {
        concurrence_x_form(rho)
    } else {
        concurrence_general(rho)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Reduced state of the kept qubit, in the single-qubit basis `(|e⟩, |g⟩)`.
pub fn partial_trace(rho: &DensityMatrix, keep: Subsystem) -> ComplexMatrix {
    let m = rho.matrix();
    ComplexMatrix::from_fn(2, |i, j| {
        (0..2)
            .map(|k| match keep {
                Subsystem::A => m[(2 * i + k, 2 * j + k)],
                Subsystem::B => m[(2 * k + i, 2 * k + j)],
            })
            .sum()
    })
    .expect("2x2")
}

#[derive(Debug, Clone)]
pub struct CoherenceReport {
    pub reduced_a: ComplexMatrix,
    pub reduced_b: ComplexMatrix,
    /// Off-diagonal magnitude of the qubit-A reduced state.
    pub local_coherence_a: f64,
    pub local_coherence_b: f64,
    /// `ρ₁₄`.
    pub global_14: ComplexScalar,
    /// `ρ₂₃`.
    pub global_23: ComplexScalar,
}

pub fn coherence_report(rho: &DensityMatrix) -> CoherenceReport {
    let reduced_a = partial_trace(rho, Subsystem::A);
    let reduced_b = partial_trace(rho, Subsystem::B);
    let off = |m: &ComplexMatrix| m[(0, 1)].norm().max(m[(1, 0)].norm());
    CoherenceReport {
        local_coherence_a: off(&reduced_a),
        local_coherence_b: off(&reduced_b),
        reduced_a,
        reduced_b,
        global_14: rho.get(EE, GG),
        global_23: rho.get(EG, GE),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{named_initial_state, StateVector};

    fn re(x: f64) -> ComplexScalar {
        ComplexScalar::new(x, 0.0)
    }

    fn werner(p: f64) -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = StateVector::new([re(0.0), re(-s), re(s), re(0.0)]).unwrap().projector();
        let mixed = ComplexMatrix::identity(4).unwrap().scale_real(0.25);
        DensityMatrix::new(&singlet.scale_real(p) + &mixed.scale_real(1.0 - p)).unwrap()
    }

    #[test]
    fn bell_and_product_states() {
        let bell = named_initial_state("bell_gg_ee").unwrap();
        assert!((concurrence_general(&bell).unwrap().c - 1.0).abs() < 1e-12);
        assert!((concurrence_x_form(&bell).unwrap().c - 1.0).abs() < 1e-15);
        let gg = named_initial_state("gg").unwrap();
        assert!(concurrence_general(&gg).unwrap().c.abs() < 1e-12);
        assert_eq!(concurrence_x_form(&gg).unwrap().c, 0.0);
    }

    #[test]
    fn werner_family() {
        // brute-force oracle: R = ρ ρ̃ for the Werner state has eigenvalues
        // ((1+3p)/4)² once and ((1−p)/4)² three times
        for &p in &[0.0, 0.4, 1.0, 0.2, 0.75] {
            let rho = werner(p);
            let r = &rho.matrix().clone() * &spin_flip(rho.matrix());
            let tr_r = r.trace().re;
            let expected_tr = ((1.0 + 3.0 * p) / 4.0).powi(2) + 3.0 * ((1.0 - p) / 4.0).powi(2);
            assert!((tr_r - expected_tr).abs() < 1e-12);
            let want = (0.5 * (3.0 * p - 1.0)).max(0.0);
            let got = concurrence_general(&rho).unwrap();
            assert!((got.c - want).abs() < 1e-10, "p={p}: {} vs {want}", got.c);
            assert!((got.lambdas[0] - ((1.0 + 3.0 * p) / 4.0).powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn x_form_rejects_block_two_entries() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = StateVector::new([re(s), re(s), re(0.0), re(0.0)]).unwrap();
        let rho = DensityMatrix::from_pure(&psi);
        let err = concurrence_x_form(&rho).unwrap_err();
        assert!(err.to_string().contains("rho12") || err.to_string().contains("rho21"));
        // dispatcher falls back to the general path
        assert!(concurrence(&rho).unwrap().c1.is_none());
    }

    #[test]
    fn diagonal_state_has_no_concurrence() {
        let rho = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.1, 0.2, 0.3, 0.4]).unwrap()).unwrap();
        let c = concurrence_x_form(&rho).unwrap();
        assert_eq!(c.c, 0.0);
        assert!(c.c1.unwrap() <= 0.0 && c.c2.unwrap() <= 0.0);
    }

    #[test]
    fn partial_traces() {
        let gg = named_initial_state("gg").unwrap();
        let a = partial_trace(&gg, Subsystem::A);
        assert_eq!(a, ComplexMatrix::from_real_diagonal(&[0.0, 1.0]).unwrap());
        let bell = named_initial_state("bell_gg_ee").unwrap();
        let half = ComplexMatrix::identity(2).unwrap().scale_real(0.5);
        assert!(partial_trace(&bell, Subsystem::A).max_abs_diff(&half) < 1e-15);
        assert!(partial_trace(&bell, Subsystem::B).max_abs_diff(&half) < 1e-15);
    }

    #[test]
    fn partial_trace_picks_the_right_factor() {
        // |e⟩⊗|g⟩ keeps |e⟩ on A and |g⟩ on B
        let eg = DensityMatrix::from_pure(&StateVector::basis(EG));
        assert_eq!(partial_trace(&eg, Subsystem::A), ComplexMatrix::from_real_diagonal(&[1.0, 0.0]).unwrap());
        assert_eq!(partial_trace(&eg, Subsystem::B), ComplexMatrix::from_real_diagonal(&[0.0, 1.0]).unwrap());
    }

    #[test]
    fn coherence_of_bell_states() {
        let bell = named_initial_state("bell_gg_ee").unwrap();
        let r = coherence_report(&bell);
        assert_eq!(r.local_coherence_a, 0.0);
        assert_eq!(r.local_coherence_b, 0.0);
        assert!((r.global_14.norm() - 0.5).abs() < 1e-15);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi2 = DensityMatrix::from_pure(&StateVector::new([re(0.0), re(s), re(s), re(0.0)]).unwrap());
        let r = coherence_report(&phi2);
        assert!((r.global_23.norm() - 0.5).abs() < 1e-15);
        assert_eq!(r.local_coherence_a, 0.0);
    }
}
