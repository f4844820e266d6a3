//! The two-qubit XY model: parameters, operators, eigenbasis and the
//! generator of the dissipative dynamics.
//!
//! Basis order is fixed everywhere as `|ee⟩, |eg⟩, |ge⟩, |gg⟩` (indices 0..4),
//! with qubit 1 as the left tensor factor. `|e⟩` is the upper level
//! (`S_z = +1/2`) and `S⁻|e⟩ = |g⟩`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result, StateInvariant};
use crate::qmath::{
    hermitian_eigen, kron, mat_mul, ComplexMatrix, ComplexScalar, I, ONE, ZERO,
};

pub const EE: usize = 0;
pub const EG: usize = 1;
pub const GE: usize = 2;
pub const GG: usize = 3;

/// Hermiticity tolerance for a [`DensityMatrix`].
pub const STATE_HERMITIAN_TOL: f64 = 1e-10;
/// Trace tolerance for a [`DensityMatrix`].
pub const STATE_TRACE_TOL: f64 = 1e-10;
/// Smallest admissible eigenvalue of a [`DensityMatrix`].
pub const STATE_EIGEN_FLOOR: f64 = -1e-8;

/// Each restriction ratio must not exceed this for the single-decay-rate model to hold.
pub const RESTRICTION_LIMIT: f64 = 0.1;

/// Physical parameters of the model.
///
/// `omega`, `j` and `delta` are energies; `gamma` is a rate; `nbar` is the
/// mean thermal occupation of the bath.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub omega: f64,
    pub j: f64,
    pub delta: f64,
    pub gamma: f64,
    pub nbar: f64,
}

impl ModelParams {
    pub fn new(omega: f64, j: f64, delta: f64, gamma: f64, nbar: f64) -> Result<Self> {
        if !(omega.is_finite() && j.is_finite() && delta.is_finite()) {
            return Err(Error::Domain("omega, j and delta must be finite".into()));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::Domain(format!("gamma must be positive, got {gamma}")));
        }
        if !(nbar.is_finite() && nbar >= 0.0) {
            return Err(Error::Domain(format!("nbar must be non-negative, got {nbar}")));
        }
        Ok(Self {
            omega,
            j,
            delta,
            gamma,
            nbar,
        })
    }

    /// Zero-temperature parameters.
    pub fn zero_temperature(omega: f64, j: f64, delta: f64, gamma: f64) -> Result<Self> {
        Self::new(omega, j, delta, gamma, 0.0)
    }

    /// Parameters in units of `gamma` (so `gamma = 1`), with `j = 0`.
    pub fn scaled(omega_bar: f64, delta_bar: f64, nbar: f64) -> Result<Self> {
        Self::new(omega_bar, 0.0, delta_bar, 1.0, nbar)
    }

    /// γ = 0.3, ω = 1, J = 0.1, Δ = 0.1.
    pub fn figure1() -> Self {
        Self::zero_temperature(1.0, 0.1, 0.1, 0.3).expect("valid")
    }

    /// γ = 0.458, ω = 1, J = 0.1, Δ = 0.458.
    pub fn figure2() -> Self {
        Self::zero_temperature(1.0, 0.1, 0.458, 0.458).expect("valid")
    }

    pub fn with_nbar(self, nbar: f64) -> Result<Self> {
        Self::new(self.omega, self.j, self.delta, self.gamma, nbar)
    }

    pub fn with_j(self, j: f64) -> Result<Self> {
        Self::new(self.omega, j, self.delta, self.gamma, self.nbar)
    }

    /// Multiplies every energy and the rate by `k`.
    pub fn rescaled(self, k: f64) -> Result<Self> {
        Self::new(
            k * self.omega,
            k * self.j,
            k * self.delta,
            k * self.gamma,
            self.nbar,
        )
    }

    pub fn derived(&self) -> DerivedParams {
        DerivedParams::from(self)
    }
}

/// Quantities that follow from [`ModelParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    /// `Ω = √(ω² + Δ²)`.
    pub omega_big: f64,
    /// `α = 4Ω² + γ²`.
    pub alpha: f64,
    /// `|gg⟩` amplitude of the `+Ω` eigenstate.
    pub n_plus: f64,
    /// `|gg⟩` amplitude of the `−Ω` eigenstate.
    pub n_minus: f64,
    pub omega_bar: f64,
    pub delta_bar: f64,
    pub omega_big_bar: f64,
    /// `Ω − ω`, evaluated without cancellation.
    pub omega_big_minus_omega: f64,
    /// `Ω + ω`, evaluated without cancellation.
    pub omega_big_plus_omega: f64,
}

impl From<&ModelParams> for DerivedParams {
    fn from(p: &ModelParams) -> Self {
        let w = p.omega;
        let d = p.delta;
        let big = w.hypot(d);
        let d2 = d * d;
        // one of Ω ∓ ω suffers cancellation; rewrite it through (Ω−ω)(Ω+ω) = Δ²
        let (minus, plus) = if w >= 0.0 {
            let plus = big + w;
            (if plus > 0.0 { d2 / plus } else { 0.0 }, plus)
        } else {
            let minus = big - w;
            (minus, d2 / minus)
        };
        let norm = |x: f64| -> f64 {
            let den = d.hypot(x);
            if den > 0.0 {
                x / den
            } else {
                // Δ = 0 and Ω = |ω| on this side: amplitude of the limit state
                0.0
            }
        };
        let (n_plus, n_minus) = if d == 0.0 {
            if w > 0.0 {
                (0.0, 1.0)
            } else if w < 0.0 {
                (1.0, 0.0)
            } else {
                (0.0, 1.0)
            }
        } else {
            (norm(minus), norm(plus))
        };
        Self {
            omega_big: big,
            alpha: 4.0 * big * big + p.gamma * p.gamma,
            n_plus,
            n_minus,
            omega_bar: w / p.gamma,
            delta_bar: d / p.gamma,
            omega_big_bar: big / p.gamma,
            omega_big_minus_omega: minus,
            omega_big_plus_omega: plus,
        }
    }
}

/// A normalized pure state in the product basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    v: [ComplexScalar; 4],
}

impl StateVector {
    pub fn new(v: [ComplexScalar; 4]) -> Result<Self> {
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("state vector norm is {norm}, expected 1")));
        }
        Ok(Self { v })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(v: [ComplexScalar; 4]) -> Result<Self> {
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Domain("cannot normalize a zero vector".into()));
        }
        Ok(Self {
            v: v.map(|z| z / norm),
        })
    }

    /// Product-basis state `k` (see [`EE`], [`EG`], [`GE`], [`GG`]).
    pub fn basis(k: usize) -> Self {
        let mut v = [ZERO; 4];
        v[k] = ONE;
        Self { v }
    }

    pub fn amplitudes(&self) -> &[ComplexScalar; 4] {
        &self.v
    }

    pub fn inner(&self, other: &Self) -> ComplexScalar {
        self.v.iter().zip(&other.v).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.v, &self.v).expect("4x4")
    }
}

/// Two-qubit density matrix in the product basis.
///
/// Construction checks Hermiticity and unit trace within `1e-10` and a
/// smallest eigenvalue of at least `-1e-8`.
#[derive(Clone, PartialEq)]
pub struct DensityMatrix {
    m: ComplexMatrix,
}

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensityMatrix {:?}", self.m)
    }
}

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if m.dim() != 4 {
            return Err(Error::Usage(format!(
                "density matrix must be 4x4, got {0}x{0}",
                m.dim()
            )));
        }
        let herm = m.hermitian_deviation();
        if herm > STATE_HERMITIAN_TOL {
            return Err(Error::InvalidState {
                invariant: StateInvariant::Hermiticity,
                deviation: herm,
            });
        }
        let tr = m.trace();
        let tr_dev = (tr - ONE).norm();
        if tr_dev > STATE_TRACE_TOL {
            return Err(Error::InvalidState {
                invariant: StateInvariant::Trace,
                deviation: tr_dev,
            });
        }
        let min = hermitian_eigen(&m)?.eigenvalues[0];
        if min < STATE_EIGEN_FLOOR {
            return Err(Error::InvalidState {
                invariant: StateInvariant::Positivity,
                deviation: -min,
            });
        }
        Ok(Self { m })
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        Self {
            m: psi.projector(),
        }
    }

    /// Nearest physical state: Hermitian part, negative eigenvalues clamped to
    /// zero, trace renormalized to one.
    pub fn project_physical(m: &ComplexMatrix) -> Result<Self> {
        if m.dim() != 4 {
            return Err(Error::Usage("density matrix must be 4x4".into()));
        }
        let eig = hermitian_eigen(&m.hermitian_part())?;
        let clamped = eig.map_eigenvalues(|l| l.max(0.0));
        let tr = clamped.trace().re;
        if tr <= 0.0 {
            return Err(Error::Domain("projection has zero trace".into()));
        }
        Self::new(clamped.scale_real(1.0 / tr).hermitian_part())
    }

    /// Skips validation; for states produced by trusted internal paths.
    pub(crate) fn from_matrix_unchecked(m: ComplexMatrix) -> Self {
        debug_assert_eq!(m.dim(), 4);
        Self { m }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.m
    }

    /// Zero-based entry `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> ComplexScalar {
        self.m[(i, j)]
    }

    /// Real diagonal entry `i`.
    pub fn population(&self, i: usize) -> f64 {
        self.m[(i, i)].re
    }

    pub fn purity(&self) -> f64 {
        mat_mul(&self.m, &self.m).expect("4x4").trace().re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigen(&self.m)
            .map(|e| e.eigenvalues[0])
            .unwrap_or(f64::NEG_INFINITY)
    }

    /// `max |ρ_ij − σ_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.m.max_abs_diff(&other.m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Qubit {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinKind {
    Plus,
    Minus,
    Z,
}

/// Single-qubit spin operator embedded in the two-qubit space.
pub fn spin_operator(qubit: Qubit, kind: SpinKind) -> ComplexMatrix {
    let half = ComplexScalar::new(0.5, 0.0);
    // single-qubit basis (|e⟩, |g⟩)
    let single = match kind {
        SpinKind::Plus => vec![ZERO, ONE, ZERO, ZERO],
        SpinKind::Minus => vec![ZERO, ZERO, ONE, ZERO],
        SpinKind::Z => vec![half, ZERO, ZERO, -half],
    };
    let op = ComplexMatrix::from_vec(2, single).expect("2x2");
    let id = ComplexMatrix::identity(2).expect("2x2");
    match qubit {
        Qubit::One => kron(&op, &id),
        Qubit::Two => kron(&id, &op),
    }
    .expect("4x4")
}

/// `H = ω(S₁ᶻ+S₂ᶻ) + J(S₁⁺S₂⁻+S₁⁻S₂⁺) + Δ(S₁⁺S₂⁺+S₁⁻S₂⁻)`.
///
/// In the product basis this is `[[ω,0,0,Δ],[0,0,J,0],[0,J,0,0],[Δ,0,0,−ω]]`.
pub fn build_hamiltonian(p: &ModelParams) -> ComplexMatrix {
    let re = |x: f64| ComplexScalar::new(x, 0.0);
    let mut h = ComplexMatrix::zeros(4).expect("4x4");
    h[(EE, EE)] = re(p.omega);
    h[(GG, GG)] = re(-p.omega);
    h[(EG, GE)] = re(p.j);
    h[(GE, EG)] = re(p.j);
    h[(EE, GG)] = re(p.delta);
    h[(GG, EE)] = re(p.delta);
    h
}

/// Hamiltonian eigenstates ordered `+Ω, +J, −J, −Ω`.
#[derive(Debug, Clone)]
pub struct Eigenbasis {
    pub states: [StateVector; 4],
    pub energies: [f64; 4],
    /// Set when Δ = 0 and the `±Ω` states are the Δ → 0 limits.
    pub limit_case: bool,
}

impl Eigenbasis {
    /// Unitary whose columns are the eigenstates in the product basis.
    pub fn unitary(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(4, |i, a| self.states[a].amplitudes()[i]).expect("4x4")
    }
}

/// Eigenstates of the Hamiltonian:
///
/// ```text
/// Φ₁ = N⁺(|gg⟩ + Δ/(Ω−ω)|ee⟩)      E = +Ω
/// Φ₂ = (|eg⟩ + |ge⟩)/√2            E = +J
/// Φ₃ = (|ge⟩ − |eg⟩)/√2            E = −J
/// Φ₄ = N⁻(|gg⟩ − Δ/(Ω+ω)|ee⟩)      E = −Ω
/// ```
pub fn eigenbasis(p: &ModelParams) -> Eigenbasis {
    let d = p.derived();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re = |x: f64| ComplexScalar::new(x, 0.0);

    let phi2 = StateVector {
        v: [ZERO, re(s), re(s), ZERO],
    };
    let phi3 = StateVector {
        v: [ZERO, re(-s), re(s), ZERO],
    };

    let (phi1, phi4, limit_case) = if p.delta == 0.0 {
        // Δ → 0: the ±Ω pair degenerates to the bare |ee⟩, |gg⟩ states
        if p.omega < 0.0 {
            (StateVector::basis(GG), StateVector::basis(EE), true)
        } else {
            (StateVector::basis(EE), StateVector::basis(GG), true)
        }
    } else {
        let dm = d.omega_big_minus_omega;
        let dp = d.omega_big_plus_omega;
        let n1 = p.delta.hypot(dm);
        let n4 = p.delta.hypot(dp);
        let phi1 = StateVector {
            v: [re(p.delta / n1), ZERO, ZERO, re(dm / n1)],
        };
        let phi4 = StateVector {
            v: [re(-p.delta / n4), ZERO, ZERO, re(dp / n4)],
        };
        (phi1, phi4, false)
    };

    Eigenbasis {
        states: [phi1, phi2, phi3, phi4],
        energies: [d.omega_big, p.j, -p.j, -d.omega_big],
        limit_case,
    }
}

/// `D[A]ρ = AρA† − (A†Aρ + ρA†A)/2`.
pub fn dissipator_apply(a: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    let a_dag = a.adjoint();
    let ada = a_dag.checked_mul(a).expect("4x4");
    let jump = &(a * rho) * &a_dag;
    let anti = &(&ada * rho) + &(rho * &ada);
    &jump - &anti.scale_real(0.5)
}

/// A jump operator together with its rate.
#[derive(Debug, Clone)]
pub struct Channel {
    pub rate: f64,
    pub op: ComplexMatrix,
    op_dag: ComplexMatrix,
    op_dag_op: ComplexMatrix,
}

impl Channel {
    fn new(rate: f64, op: ComplexMatrix) -> Self {
        let op_dag = op.adjoint();
        let op_dag_op = &op_dag * &op;
        Self {
            rate,
            op,
            op_dag,
            op_dag_op,
        }
    }
}

/// The right-hand side of the master equation
/// `dρ/dt = −i[H,ρ] + γ(n̄+1) Σₖ D[Sₖ⁻]ρ + γn̄ Σₖ D[Sₖ⁺]ρ`,
/// with operators precomputed for repeated evaluation.
#[derive(Debug, Clone)]
pub struct Generator {
    pub hamiltonian: ComplexMatrix,
    pub channels: Vec<Channel>,
}

impl Generator {
    pub fn new(p: &ModelParams) -> Self {
        let decay = p.gamma * (p.nbar + 1.0);
        let pump = p.gamma * p.nbar;
        let mut channels = vec![
            Channel::new(decay, spin_operator(Qubit::One, SpinKind::Minus)),
            Channel::new(decay, spin_operator(Qubit::Two, SpinKind::Minus)),
        ];
        if pump > 0.0 {
            channels.push(Channel::new(pump, spin_operator(Qubit::One, SpinKind::Plus)));
            channels.push(Channel::new(pump, spin_operator(Qubit::Two, SpinKind::Plus)));
        }
        Self {
            hamiltonian: build_hamiltonian(p),
            channels,
        }
    }

    /// `−i[H, ρ]`.
    pub fn coherent_part(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let comm = &(&self.hamiltonian * rho) - &(rho * &self.hamiltonian);
        comm.scale(-I)
    }

    /// Sum of the rate-weighted dissipators.
    pub fn dissipative_part(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(4).expect("4x4");
        for ch in &self.channels {
            let jump = &(&ch.op * rho) * &ch.op_dag;
            let anti = &(&ch.op_dag_op * rho) + &(rho * &ch.op_dag_op);
            let d = &jump - &anti.scale_real(0.5);
            out = &out + &d.scale_real(ch.rate);
        }
        out
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        &self.coherent_part(rho) + &self.dissipative_part(rho)
    }
}

/// `dρ/dt` for the given parameters (the `n̄ = 0` case drops the pumping terms).
pub fn master_rhs(p: &ModelParams, rho: &ComplexMatrix) -> ComplexMatrix {
    Generator::new(p).apply(rho)
}

/// Matrix `L` acting on column-stacked `vec(ρ)` with `vec(dρ/dt) = L vec(ρ)`.
///
/// Built from `vec(AXB) = (Bᵀ ⊗ A) vec(X)` rather than by probing
/// [`master_rhs`], so the two stay independent.
pub fn liouvillian_superoperator(p: &ModelParams) -> ComplexMatrix {
    let gen = Generator::new(p);
    let id = ComplexMatrix::identity(4).expect("4x4");
    let h = &gen.hamiltonian;
    let k = |a: &ComplexMatrix, b: &ComplexMatrix| kron(a, b).expect("16x16");

    let mut l = (&k(&id, h) - &k(&h.transpose(), &id)).scale(-I);
    for ch in &gen.channels {
        let jump = k(&ch.op.conj(), &ch.op);
        let left = k(&id, &ch.op_dag_op);
        let right = k(&ch.op_dag_op.transpose(), &id);
        let d = &jump - &(&left + &right).scale_real(0.5);
        l = &l + &d.scale_real(ch.rate);
    }
    l
}

/// Ratios behind the single-decay-rate assumption.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestrictionReport {
    /// `|J|/ω`.
    pub j_ratio: f64,
    /// `(Ω − ω)/ω`.
    pub anisotropy_ratio: f64,
    pub passed: bool,
}

impl fmt::Display for RestrictionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "|J|/omega = {:.6} (limit {RESTRICTION_LIMIT}), (Omega-omega)/omega = {:.6} (limit {RESTRICTION_LIMIT}): {}",
            self.j_ratio,
            self.anisotropy_ratio,
            if self.passed { "passed" } else { "FAILED" }
        )
    }
}

pub fn check_restrictions(p: &ModelParams) -> Result<RestrictionReport> {
    if p.omega <= 0.0 {
        return Err(Error::Domain(format!(
            "restriction ratios need omega > 0, got {}",
            p.omega
        )));
    }
    let d = p.derived();
    let j_ratio = p.j.abs() / p.omega;
    let anisotropy_ratio = d.omega_big_minus_omega / p.omega;
    let report = RestrictionReport {
        j_ratio,
        anisotropy_ratio,
        passed: j_ratio <= RESTRICTION_LIMIT && anisotropy_ratio <= RESTRICTION_LIMIT,
    };
    if !report.passed {
        log::warn!("parameters outside the single-decay-rate regime: {report}");
    }
    Ok(report)
}

/// Named initial states used by the figures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InitialState {
    /// `|gg⟩`.
    Gg,
    /// `(|gg⟩ − |ee⟩)/√2`.
    BellGgEe,
    /// Equal mixture of `|gg⟩` and `(|eg⟩ + |ge⟩)/√2`.
    MixedFig1,
}

impl InitialState {
    pub const ALL: [InitialState; 3] = [
        InitialState::Gg,
        InitialState::BellGgEe,
        InitialState::MixedFig1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InitialState::Gg => "gg",
            InitialState::BellGgEe => "bell_gg_ee",
            InitialState::MixedFig1 => "mixed_fig1",
        }
    }

    pub fn density_matrix(self) -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let re = |x: f64| ComplexScalar::new(x, 0.0);
        match self {
            InitialState::Gg => DensityMatrix::from_pure(&StateVector::basis(GG)),
            InitialState::BellGgEe => DensityMatrix::from_pure(&StateVector {
                v: [re(-s), ZERO, ZERO, re(s)],
            }),
            InitialState::MixedFig1 => {
                let gg = StateVector::basis(GG).projector();
                let phi2 = StateVector {
                    v: [ZERO, re(s), re(s), ZERO],
                }
                .projector();
                DensityMatrix::from_matrix_unchecked((&gg + &phi2).scale_real(0.5))
            }
        }
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InitialState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gg" => Ok(InitialState::Gg),
            "bell_gg_ee" => Ok(InitialState::BellGgEe),
            "mixed_fig1" => Ok(InitialState::MixedFig1),
            other => Err(Error::Usage(format!(
                "unknown initial state '{other}' (expected gg, bell_gg_ee or mixed_fig1)"
            ))),
        }
    }
}

pub fn named_initial_state(name: &str) -> Result<DensityMatrix> {
    Ok(name.parse::<InitialState>()?.density_matrix())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> ComplexScalar {
        ComplexScalar::new(x, 0.0)
    }

    fn apply(op: &ComplexMatrix, k: usize) -> Vec<ComplexScalar> {
        op.mul_vec(StateVector::basis(k).amplitudes()).unwrap()
    }

    fn unit(k: usize) -> Vec<ComplexScalar> {
        StateVector::basis(k).amplitudes().to_vec()
    }

    #[test]
    fn spin_operator_actions() {
        let s1m = spin_operator(Qubit::One, SpinKind::Minus);
        assert_eq!(apply(&s1m, EE), unit(GE));
        let sz = &spin_operator(Qubit::One, SpinKind::Z) + &spin_operator(Qubit::Two, SpinKind::Z);
        assert_eq!(apply(&sz, EE), unit(EE));
        let raise = &spin_operator(Qubit::One, SpinKind::Plus) * &spin_operator(Qubit::Two, SpinKind::Plus);
        assert_eq!(apply(&raise, GG), unit(EE));
        assert_eq!(
            spin_operator(Qubit::Two, SpinKind::Minus).adjoint(),
            spin_operator(Qubit::Two, SpinKind::Plus)
        );
    }

    #[test]
    fn hamiltonian_from_operator_definitions() {
        let p = ModelParams::zero_temperature(1.0, 0.1, 0.1, 0.3).unwrap();
        let h = build_hamiltonian(&p);
        let s = |q, k| spin_operator(q, k);
        use Qubit::*;
        use SpinKind::*;
        let from_ops = {
            let zeeman = (&s(One, Z) + &s(Two, Z)).scale_real(p.omega);
            let exchange = (&(&s(One, Plus) * &s(Two, Minus)) + &(&s(One, Minus) * &s(Two, Plus))).scale_real(p.j);
            let aniso = (&(&s(One, Plus) * &s(Two, Plus)) + &(&s(One, Minus) * &s(Two, Minus))).scale_real(p.delta);
            &(&zeeman + &exchange) + &aniso
        };
        assert!(h.max_abs_diff(&from_ops) < 1e-15);
        assert_eq!(h[(EE, GG)], re(0.1));
        assert_eq!(h[(EG, GE)], re(0.1));
        assert_eq!(h.hermitian_deviation(), 0.0);

        let free = build_hamiltonian(&ModelParams::zero_temperature(1.0, 0.0, 0.0, 1.0).unwrap());
        assert_eq!(free, ComplexMatrix::from_real_diagonal(&[1.0, 0.0, 0.0, -1.0]).unwrap());
    }

    #[test]
    fn hamiltonian_spectrum_is_plus_minus_j_and_omega() {
        let p = ModelParams::figure2();
        let e = hermitian_eigen(&build_hamiltonian(&p)).unwrap();
        let big = p.derived().omega_big;
        let want = [-big, -0.1, 0.1, big];
        for (a, b) in e.eigenvalues.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((big - 1.099_893).abs() < 1e-6);
    }

    #[test]
    fn eigenbasis_diagonalizes_hamiltonian() {
        for &(w, j, d) in &[(1.0, 0.1, 0.458), (1.0, 0.1, -0.2), (-0.7, 0.3, 0.4), (0.0, 0.0, 1.0), (1e3, 0.1, 1e-7)] {
            let p = ModelParams::zero_temperature(w, j, d, 1.0).unwrap();
            let basis = eigenbasis(&p);
            assert!(!basis.limit_case);
            let h = build_hamiltonian(&p);
            for (phi, e) in basis.states.iter().zip(basis.energies) {
                let hv = h.mul_vec(phi.amplitudes()).unwrap();
                for (a, b) in hv.iter().zip(phi.amplitudes()) {
                    assert!((a - b * e).norm() < 1e-12, "params {w} {j} {d}");
                }
            }
            let u = basis.unitary();
            let uu = &u.adjoint() * &u;
            assert!(uu.max_abs_diff(&ComplexMatrix::identity(4).unwrap()) < 1e-14);
        }
    }

    #[test]
    fn eigenbasis_overlap_with_ground_state() {
        for &d in &[0.1, 0.458, -0.3, 2.0] {
            let p = ModelParams::zero_temperature(1.0, 0.1, d, 0.5).unwrap();
            let der = p.derived();
            let basis = eigenbasis(&p);
            let ov = basis.states[0].inner(&StateVector::basis(GG)).norm_sqr();
            let want = (der.omega_big - 1.0) / (2.0 * der.omega_big);
            assert!((ov - want).abs() < 1e-14);
            // N± against the textbook form
            let np = (der.omega_big - 1.0) / (d * d + (der.omega_big - 1.0).powi(2)).sqrt();
            assert!((der.n_plus - np).abs() < 1e-12);
        }
    }

    #[test]
    fn eigenbasis_limit_without_anisotropy() {
        let p = ModelParams::zero_temperature(1.0, 0.1, 0.0, 0.3).unwrap();
        let b = eigenbasis(&p);
        assert!(b.limit_case);
        assert_eq!(b.states[3], StateVector::basis(GG));
        assert_eq!(b.energies[3], -1.0);
        assert_eq!(b.states[0], StateVector::basis(EE));
    }

    #[test]
    fn derived_params_identities() {
        let p = ModelParams::zero_temperature(1.0, 0.1, 0.458, 0.458).unwrap();
        let d = p.derived();
        assert!((d.omega_big * d.omega_big - (1.0 + 0.458 * 0.458)).abs() < 1e-12);
        assert!((d.alpha - (4.0 * d.omega_big.powi(2) + 0.458 * 0.458)).abs() < 1e-12);
        assert!((d.omega_bar - 1.0 / 0.458).abs() < 1e-15);
        assert!((d.delta_bar - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dissipator_cases() {
        let s1m = spin_operator(Qubit::One, SpinKind::Minus);
        let ee = StateVector::basis(EE).projector();
        let ge = StateVector::basis(GE).projector();
        let out = dissipator_apply(&s1m, &ee);
        assert!(out.max_abs_diff(&(&ge - &ee)) < 1e-15);
        let gg = StateVector::basis(GG).projector();
        assert_eq!(dissipator_apply(&s1m, &gg).max_abs(), 0.0);
    }

    #[test]
    fn ground_state_is_stationary_without_couplings() {
        let p = ModelParams::zero_temperature(1.0, 0.0, 0.0, 0.3).unwrap();
        let gg = StateVector::basis(GG).projector();
        assert_eq!(master_rhs(&p, &gg).max_abs(), 0.0);
    }

    #[test]
    fn restriction_reports() {
        let r = check_restrictions(&ModelParams::figure1()).unwrap();
        assert!(r.passed);
        assert!((r.j_ratio - 0.1).abs() < 1e-15);
        assert!((r.anisotropy_ratio - 0.004_987_562).abs() < 1e-8);
        let r = check_restrictions(&ModelParams::figure2()).unwrap();
        assert!(r.passed);
        assert!((r.anisotropy_ratio - 0.099_893).abs() < 1e-6);
        let r = check_restrictions(&ModelParams::zero_temperature(1.0, 0.1, 0.5, 0.3).unwrap()).unwrap();
        assert!(!r.passed);
        assert!((r.anisotropy_ratio - (1.25f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!((r.anisotropy_ratio - 0.1180).abs() < 1e-4);
        let bad = ModelParams::zero_temperature(-1.0, 0.1, 0.5, 0.3).unwrap();
        assert!(matches!(check_restrictions(&bad), Err(Error::Domain(_))));
    }

    #[test]
    fn named_states() {
        let gg = named_initial_state("gg").unwrap();
        assert_eq!(gg.matrix(), &ComplexMatrix::from_real_diagonal(&[0.0, 0.0, 0.0, 1.0]).unwrap());
        let bell = named_initial_state("bell_gg_ee").unwrap();
        assert!((bell.get(EE, EE).re - 0.5).abs() < 1e-15);
        assert!((bell.get(GG, GG).re - 0.5).abs() < 1e-15);
        assert!((bell.get(EE, GG).re + 0.5).abs() < 1e-15);
        assert!((bell.get(GG, EE).re + 0.5).abs() < 1e-15);
        let mixed = named_initial_state("mixed_fig1").unwrap();
        let mut want = ComplexMatrix::from_real_diagonal(&[0.0, 0.25, 0.25, 0.5]).unwrap();
        want[(EG, GE)] = re(0.25);
        want[(GE, EG)] = re(0.25);
        assert!(mixed.matrix().max_abs_diff(&want) < 1e-15);
        assert!(DensityMatrix::new(mixed.into_matrix()).is_ok());
        assert!(matches!(named_initial_state("ee"), Err(Error::Usage(_))));
    }

    #[test]
    fn density_matrix_validation() {
        let m = ComplexMatrix::from_real_diagonal(&[0.0, 0.0, 0.0, 0.9]).unwrap();
        assert!(matches!(
            DensityMatrix::new(m),
            Err(Error::InvalidState { invariant: StateInvariant::Trace, .. })
        ));
        let m = ComplexMatrix::from_real_diagonal(&[1.1, -0.1, 0.0, 0.0]).unwrap();
        assert!(matches!(
            DensityMatrix::new(m),
            Err(Error::InvalidState { invariant: StateInvariant::Positivity, .. })
        ));
        let mut m = ComplexMatrix::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5]).unwrap();
        m[(0, 3)] = re(0.1);
        assert!(matches!(
            DensityMatrix::new(m),
            Err(Error::InvalidState { invariant: StateInvariant::Hermiticity, .. })
        ));
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(1.0, 0.1, 0.1, 0.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, 0.1, 0.1, 1.0, -0.5).is_err());
        assert!(ModelParams::new(f64::NAN, 0.1, 0.1, 1.0, 0.0).is_err());
    }
}
