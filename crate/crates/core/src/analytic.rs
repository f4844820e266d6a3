//! Closed-form results: the zero-temperature trajectory from `|gg⟩`, steady
//! states at zero and finite temperature, their concurrence, and the
//! anisotropy that maximizes steady-state entanglement.
//!
//! Finite-temperature expressions are written in the scaled variables
//! `ω̄ = ω/γ`, `Δ̄ = Δ/γ` with `m = 1 + 2n̄`.

use num_complex::Complex64;

use crate::dynamics::transform_from_eigenbasis;
use crate::error::{Error, Result};
use crate::model::{master_rhs, DensityMatrix, ModelParams, EE, GG};
use crate::qmath::{ComplexMatrix, ComplexScalar, I};

/// `1 + √5`.
fn golden_denominator() -> f64 {
    1.0 + 5f64.sqrt()
}

fn require_zero_temperature(p: &ModelParams, what: &str) -> Result<()> {
    if p.nbar > 0.0 {
        Err(Error::UnsupportedRegime(format!(
            "{what} is only available at zero temperature (nbar = {})",
            p.nbar
        )))
    } else {
        Ok(())
    }
}

/// Density matrix at time `t` from `|gg⟩`, in the Hamiltonian eigenbasis.
///
/// ```text
/// ρ̄₁₁ = [−ωα + 2ΩΔ²e^{−2γt} + Ω(α − 2Δ²) + 2Δ²γ e^{−γt} sin 2Ωt] / (2Ωα)
/// ρ̄₂₂ = ρ̄₃₃ = Δ²[Ω − Ω e^{−2γt} − γ e^{−γt} sin 2Ωt] / (Ωα)
/// ρ̄₄₄ = 1 − ρ̄₁₁ − ρ̄₂₂ − ρ̄₃₃
/// ρ̄₁₄ = Δ[2iΩ e^{−γt} cos 2Ωt + 2Ω e^{−γt} sin 2Ωt + γ] / (4iΩ² + 2Ωγ)
/// ```
pub fn analytic_trajectory_gg(p: &ModelParams, t: f64) -> Result<ComplexMatrix> {
    require_zero_temperature(p, "the analytic trajectory")?;
    if p.delta == 0.0 {
        return Err(Error::Domain(
            "the analytic trajectory needs a nonzero anisotropy".into(),
        ));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("time must be non-negative, got {t}")));
    }
    let d = p.derived();
    let (w, big, alpha, g) = (p.omega, d.omega_big, d.alpha, p.gamma);
    let d2 = p.delta * p.delta;
    let e1 = (-g * t).exp();
    let e2 = (-2.0 * g * t).exp();
    let (sin, cos) = (2.0 * big * t).sin_cos();

    let r11 = (-w * alpha + 2.0 * big * d2 * e2 + big * (alpha - 2.0 * d2)
        + 2.0 * e1 * d2 * g * sin)
        / (2.0 * big * alpha);
    let r22 = d2 / (big * alpha) * (big - big * e2 - e1 * g * sin);
    let r33 = r22;
    let r44 = 1.0 - r11 - r22 - r33;
    let r14 = p.delta / (4.0 * I * big * big + 2.0 * big * g)
        * (2.0 * I * big * e1 * cos + 2.0 * big * e1 * sin + g);

    let mut m = ComplexMatrix::from_real_diagonal(&[r11, r22, r33, r44])?;
    m[(0, 3)] = r14;
    m[(3, 0)] = r14.conj();
    Ok(m)
}

/// [`analytic_trajectory_gg`] mapped back to the product basis.
pub fn analytic_trajectory_gg_product(p: &ModelParams, t: f64) -> Result<DensityMatrix> {
    let bar = analytic_trajectory_gg(p, t)?;
    DensityMatrix::new(transform_from_eigenbasis(p, &bar).hermitian_part())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    ZeroTemperature,
    FiniteTemperature,
}

#[derive(Debug, Clone)]
pub struct AnalyticSteadyState {
    pub rho: DensityMatrix,
    pub regime: Regime,
    /// `‖dρ/dt‖_max` at `rho`.
    pub residual: f64,
}

impl AnalyticSteadyState {
    fn new(p: &ModelParams, m: ComplexMatrix, regime: Regime) -> Result<Self> {
        let rho = DensityMatrix::new(m)?;
        let residual = master_rhs(p, rho.matrix()).max_abs();
        Ok(Self {
            rho,
            regime,
            residual,
        })
    }
}

fn x_state(diag: [f64; 4], rho14: ComplexScalar) -> Result<ComplexMatrix> {
    let mut m = ComplexMatrix::from_real_diagonal(&diag)?;
    m[(EE, GG)] = rho14;
    m[(GG, EE)] = rho14.conj();
    Ok(m)
}

/// Zero-temperature steady state:
/// `ρ₁₁ = ρ₂₂ = ρ₃₃ = Δ²/α`, `ρ₄₄ = 1 − 3Δ²/α`, `ρ₁₄ = (−2ωΔ − iΔγ)/α`.
pub fn steady_state_t0(p: &ModelParams) -> Result<AnalyticSteadyState> {
    require_zero_temperature(p, "the zero-temperature steady state")?;
    let alpha = p.derived().alpha;
    let pop = p.delta * p.delta / alpha;
    let rho14 = Complex64::new(-2.0 * p.omega * p.delta, -p.delta * p.gamma) / alpha;
    let m = x_state([pop, pop, pop, 1.0 - 3.0 * pop], rho14)?;
    AnalyticSteadyState::new(p, m, Regime::ZeroTemperature)
}

/// `(2√(Δ²(4ω²+γ²)) − 2Δ²)/α` without the clamp at zero.
pub fn steady_concurrence_t0_unclamped(omega: f64, delta: f64, gamma: f64) -> f64 {
    let alpha = 4.0 * (omega * omega + delta * delta) + gamma * gamma;
    let d2 = delta * delta;
    (2.0 * (d2 * (4.0 * omega * omega + gamma * gamma)).sqrt() - 2.0 * d2) / alpha
}

/// Zero-temperature steady-state concurrence, clamped at zero.
pub fn steady_concurrence_t0(p: &ModelParams) -> Result<f64> {
    require_zero_temperature(p, "the zero-temperature steady concurrence")?;
    Ok(steady_concurrence_t0_unclamped(p.omega, p.delta, p.gamma).max(0.0))
}

/// Anisotropy maximizing the steady concurrence at fixed `ω`, `γ`:
/// `√(4ω² + γ²)/(1 + √5)`.
pub fn delta_max(omega: f64, gamma: f64) -> f64 {
    (4.0 * omega * omega + gamma * gamma).sqrt() / golden_denominator()
}

/// `(1 + √5)⁻¹`, the steady concurrence along the optimal ridge.
pub fn global_max_concurrence() -> f64 {
    1.0 / golden_denominator()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimumReport {
    pub delta_max: f64,
    pub c_at_optimum: f64,
    /// `4ω² + γ² ≥ Δ²` at the optimum, the condition for positive concurrence.
    pub positivity_bound_ok: bool,
}

pub fn optimum(omega: f64, gamma: f64) -> OptimumReport {
    let dm = delta_max(omega, gamma);
    OptimumReport {
        delta_max: dm,
        c_at_optimum: steady_concurrence_t0_unclamped(omega, dm, gamma).max(0.0),
        positivity_bound_ok: 4.0 * omega * omega + gamma * gamma >= dm * dm,
    }
}

/// Finite-temperature steady state in scaled variables (`m = 1 + 2n̄`):
///
/// ```text
/// D   = m²(4ω̄² + m² + 4Δ̄²)
/// ρ₁₁ = [n̄²(4ω̄² + m²) + Δ̄²m²] / D
/// ρ₂₂ = ρ₃₃ = [1 − (4ω̄² + m²)/D] / 4
/// ρ₄₄ = [4ω̄²(1+n̄)² + m²((1+n̄)² + Δ̄²)] / D
/// ρ₁₄ = −Δ̄(2ω̄ + i m) / (m(4ω̄² + m² + 4Δ̄²))
/// ```
pub fn steady_state_finite_t(p: &ModelParams) -> Result<AnalyticSteadyState> {
    let d = p.derived();
    let (w, dl, n) = (d.omega_bar, d.delta_bar, p.nbar);
    let m = 1.0 + 2.0 * n;
    let m2 = m * m;
    let inner = 4.0 * w * w + m2 + 4.0 * dl * dl;
    let den = m2 * inner;
    let r11 = (n * n * (4.0 * w * w + m2) + dl * dl * m2) / den;
    let r22 = 0.25 * (1.0 - (4.0 * w * w + m2) / den);
    let np1 = 1.0 + n;
    let r44 = (4.0 * w * w * np1 * np1 + m2 * (np1 * np1 + dl * dl)) / den;
    let rho14 = -dl * Complex64::new(2.0 * w, m) / (m * inner);
    let mat = x_state([r11, r22, r22, r44], rho14)?;
    AnalyticSteadyState::new(p, mat, Regime::FiniteTemperature)
}

/// Analytic steady state for any temperature.
pub fn steady_state(p: &ModelParams) -> Result<AnalyticSteadyState> {
    if p.nbar > 0.0 {
        steady_state_finite_t(p)
    } else {
        steady_state_t0(p)
    }
}

/// Finite-temperature steady concurrence before clamping:
///
/// ```text
/// C = 2√(Δ̄²(4ω̄² + m²)) / (m(4Ω̄² + m²)) − 1/2 + (4ω̄² + m²) / (2m²(4Ω̄² + m²))
/// ```
pub fn finite_t_concurrence_formula(omega_bar: f64, delta_bar: f64, nbar: f64) -> f64 {
    let m = 1.0 + 2.0 * nbar;
    let m2 = m * m;
    let w2 = 4.0 * omega_bar * omega_bar;
    let big2 = 4.0 * (omega_bar * omega_bar + delta_bar * delta_bar);
    2.0 * (delta_bar * delta_bar * (w2 + m2)).sqrt() / (m * (big2 + m2)) - 0.5
        + (w2 + m2) / (2.0 * m2 * (big2 + m2))
}

/// Finite-temperature steady concurrence, clamped at zero.
pub fn steady_concurrence_finite_t(p: &ModelParams) -> f64 {
    let d = p.derived();
    finite_t_concurrence_formula(d.omega_bar, d.delta_bar, p.nbar).max(0.0)
}

const NBAR_SEARCH_LIMIT: f64 = 1e3;
const NBAR_TOL: f64 = 1e-10;

/// Thermal occupation at which the steady concurrence first reaches zero.
///
/// The bracket grows by doubling from a small `n̄`; bisection then runs on the
/// unclamped formula to `1e-10`.
pub fn vanishing_temperature(p: &ModelParams) -> Result<f64> {
    let d = p.derived();
    let f = |n: f64| finite_t_concurrence_formula(d.omega_bar, d.delta_bar, n);
    if f(0.0) <= 0.0 {
        return Err(Error::Domain(
            "steady concurrence is already zero at zero temperature".into(),
        ));
    }
    let mut lo = 0.0;
    let mut hi = 1.0 / 1024.0;
    while f(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > NBAR_SEARCH_LIMIT {
            return Err(Error::NotFound(format!(
                "concurrence stays positive up to nbar = {NBAR_SEARCH_LIMIT}"
            )));
        }
    }
    while hi - lo > NBAR_TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
