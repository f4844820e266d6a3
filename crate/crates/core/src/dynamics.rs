//! Time integration of the master equation and numerical steady states.

use std::collections::VecDeque;
use std::fmt;

use rayon::prelude::*;

use crate::entanglement::{concurrence, x_pattern_violation};
use crate::error::{Error, Result};
use crate::model::{
    eigenbasis, liouvillian_superoperator, master_rhs, DensityMatrix, Generator, ModelParams,
};
use crate::qmath::{hermitian_eigen, solve_linear, ComplexMatrix, ONE, ZERO};

/// Largest admissible step as a fraction of the fastest model time scale.
pub const DT_SAFETY: f64 = 0.04;
/// Per-step Hermiticity or trace correction above this aborts integration.
pub const MAX_STEP_CORRECTION: f64 = 1e-9;
/// Smallest eigenvalue tolerated during integration.
pub const POSITIVITY_ABORT: f64 = -1e-6;
/// Accepted `‖dρ/dt‖_max` for a steady state.
pub const STEADY_RESIDUAL_TOL: f64 = 1e-8;

const J_EPSILON: f64 = 1e-12;

/// Total relaxation rate `Γ = γ(1 + 2n̄)`; every decay rate of the model is a
/// multiple of it (`Γ = γ` at zero temperature).
pub fn relaxation_rate(p: &ModelParams) -> f64 {
    p.gamma * (1.0 + 2.0 * p.nbar)
}

/// Largest step allowed for these parameters:
/// `0.04 · min(1/Γ, 1/Ω, 1/max(|J|, ε))` with `Γ` from [`relaxation_rate`].
pub fn max_stable_dt(p: &ModelParams) -> f64 {
    let big = p.derived().omega_big;
    let rate = relaxation_rate(p);
    let scales = [
        1.0 / rate,
        if big > 0.0 { 1.0 / big } else { f64::INFINITY },
        1.0 / p.j.abs().max(J_EPSILON),
    ];
    DT_SAFETY * scales.into_iter().fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_max: f64,
    /// Record every `record_stride`-th step (the last step is always recorded).
    pub record_stride: usize,
    /// Max-entry drift of ρ over `convergence_window` that counts as converged.
    pub convergence_tol: f64,
    /// Defaults to `5/Γ` (`5/γ` at zero temperature).
    pub convergence_window: f64,
}

impl IntegratorConfig {
    pub fn new(p: &ModelParams, dt: f64, t_max: f64, record_stride: usize) -> Result<Self> {
        Self {
            dt,
            t_max,
            record_stride,
            convergence_tol: 1e-9,
            convergence_window: 5.0 / relaxation_rate(p),
        }
        .validated(p)
    }

    /// Largest admissible step, `t_max = 30/γ`, every step recorded.
    pub fn default_for(p: &ModelParams) -> Self {
        Self::new(p, max_stable_dt(p), 30.0 / p.gamma, 1).expect("default config is valid")
    }

    pub fn with_convergence(mut self, tol: f64, window: f64) -> Self {
        self.convergence_tol = tol;
        self.convergence_window = window;
        self
    }

    pub fn validated(self, p: &ModelParams) -> Result<Self> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Usage(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::Usage(format!("t_max must be positive, got {}", self.t_max)));
        }
        if self.record_stride == 0 {
            return Err(Error::Usage("record_stride must be at least 1".into()));
        }
        if !(self.convergence_tol > 0.0 && self.convergence_window > 0.0) {
            return Err(Error::Usage("convergence tolerance and window must be positive".into()));
        }
        let bound = max_stable_dt(p);
        if self.dt > bound * (1.0 + 1e-12) {
            return Err(Error::Usage(format!(
                "dt = {} exceeds the stability bound {bound:.6e} for these parameters",
                self.dt
            )));
        }
        Ok(self)
    }

    fn steps(&self) -> (usize, f64) {
        let n = ((self.t_max / self.dt) - 1e-9).ceil().max(1.0) as usize;
        (n, self.t_max / n as f64)
    }
}

/// Worst-case bookkeeping over a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryDiagnostics {
    pub steps: usize,
    pub max_trace_correction: f64,
    pub max_hermiticity_correction: f64,
    pub min_eigenvalue: f64,
    /// Largest block-2 entry seen, tracked when the initial state is X-shaped.
    pub max_x_violation: Option<f64>,
    /// Drift over the convergence window at the final step (if a full window was available).
    pub final_drift: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub gamma: f64,
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub concurrences: Vec<f64>,
    pub converged_at: Option<f64>,
    pub diagnostics: TrajectoryDiagnostics,
}

impl Trajectory {
    pub fn gamma_times(&self) -> impl Iterator<Item = f64> + '_ {
        self.times.iter().map(move |t| t * self.gamma)
    }

    pub fn final_state(&self) -> &DensityMatrix {
        self.states.last().expect("at least one recorded state")
    }

    pub fn final_concurrence(&self) -> f64 {
        *self.concurrences.last().expect("at least one recorded state")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Classical fixed-step RK4 on `dρ/dt = Gρ`.
fn rk4_step(gen: &Generator, rho: &ComplexMatrix, dt: f64) -> ComplexMatrix {
    let k1 = gen.apply(rho);
    let k2 = gen.apply(&(rho + &k1.scale_real(0.5 * dt)));
    let k3 = gen.apply(&(rho + &k2.scale_real(0.5 * dt)));
    let k4 = gen.apply(&(rho + &k3.scale_real(dt)));
    let incr = &(&k1 + &k2.scale_real(2.0)) + &(&k3.scale_real(2.0) + &k4);
    rho + &incr.scale_real(dt / 6.0)
}

/// Sliding record of past states for windowed drift checks.
struct DriftWindow {
    capacity: usize,
    history: VecDeque<ComplexMatrix>,
}

impl DriftWindow {
    fn new(window: f64, dt: f64, n_steps: usize) -> Self {
        let capacity = ((window / dt).ceil().max(1.0) as usize).min(n_steps + 1) + 1;
        Self {
            capacity,
            history: VecDeque::with_capacity(capacity),
        }
    }

    /// Pushes `rho`; returns the drift against the states one full, half and
    /// quarter window back once a full window is available.
    fn push(&mut self, rho: &ComplexMatrix) -> Option<f64> {
        if self.history.len() == self.capacity {
            self.history.pop_front();
        }
        self.history.push_back(rho.clone());
        if self.history.len() < self.capacity {
            return None;
        }
        let n = self.history.len();
        let lags = [0, n / 2, 3 * n / 4];
        Some(
            lags.iter()
                .map(|&k| self.history[k].max_abs_diff(rho))
                .fold(0.0, f64::max),
        )
    }
}

fn run(
    p: &ModelParams,
    rho0: &DensityMatrix,
    cfg: &IntegratorConfig,
    stop_on_convergence: bool,
) -> Result<Trajectory> {
    let cfg = cfg.validated(p)?;
    let gen = Generator::new(p);
    let (n_steps, dt) = cfg.steps();
    let track_x = x_pattern_violation(rho0.matrix()).0 == 0.0;

    let mut diag = TrajectoryDiagnostics {
        steps: 0,
        max_trace_correction: 0.0,
        max_hermiticity_correction: 0.0,
        min_eigenvalue: rho0.min_eigenvalue(),
        max_x_violation: track_x.then_some(0.0),
        final_drift: None,
    };

    let mut traj = Trajectory {
        gamma: p.gamma,
        times: vec![0.0],
        states: vec![rho0.clone()],
        concurrences: vec![concurrence(rho0)?.c],
        converged_at: None,
        diagnostics: diag,
    };

    let mut window = DriftWindow::new(cfg.convergence_window, dt, n_steps);
    window.push(rho0.matrix());
    let mut rho = rho0.matrix().clone();

    for step in 1..=n_steps {
        let t = step as f64 * dt;
        let raw = rk4_step(&gen, &rho, dt);

        let herm_corr = 0.5 * raw.hermitian_deviation();
        let sym = raw.hermitian_part();
        let tr = sym.trace();
        let tr_corr = (tr - ONE).norm();
        rho = sym.scale_real(1.0 / tr.re);
        diag.max_hermiticity_correction = diag.max_hermiticity_correction.max(herm_corr);
        diag.max_trace_correction = diag.max_trace_correction.max(tr_corr);
        log::trace!("t={t:.6} hermiticity correction {herm_corr:.3e}, trace correction {tr_corr:.3e}");
        if herm_corr > MAX_STEP_CORRECTION || tr_corr > MAX_STEP_CORRECTION {
            return Err(Error::Numeric(format!(
                "step correction too large at t={t} (hermiticity {herm_corr:.3e}, trace {tr_corr:.3e}); reduce dt"
            )));
        }
        if rho.as_slice().iter().any(|z| !z.is_finite()) {
            return Err(Error::Numeric(format!("non-finite state at t={t}; reduce dt")));
        }

        let min_eig = hermitian_eigen(&rho)?.eigenvalues[0];
        diag.min_eigenvalue = diag.min_eigenvalue.min(min_eig);
        if min_eig < POSITIVITY_ABORT {
            return Err(Error::Numeric(format!(
                "positivity lost at t={t} (smallest eigenvalue {min_eig:.3e}); reduce dt"
            )));
        }
        if let Some(v) = diag.max_x_violation.as_mut() {
            *v = v.max(x_pattern_violation(&rho).0);
        }

        let drift = window.push(&rho);
        if drift.is_some() {
            diag.final_drift = drift;
        }
        if let Some(d) = drift {
            if d < cfg.convergence_tol && traj.converged_at.is_none() {
                traj.converged_at = Some(t);
            }
        }
        let settled = stop_on_convergence
            && traj.converged_at.is_some()
            && gen.apply(&rho).max_abs() < STEADY_RESIDUAL_TOL;

        let last = step == n_steps || settled;
        if step % cfg.record_stride == 0 || last {
            let state = DensityMatrix::from_matrix_unchecked(rho.clone());
            traj.concurrences.push(concurrence(&state)?.c);
            traj.times.push(t);
            traj.states.push(state);
        }
        diag.steps = step;
        if last {
            break;
        }
    }

    log::debug!(
        "integrated {} steps: max trace correction {:.3e}, max hermiticity correction {:.3e}, min eigenvalue {:.3e}",
        diag.steps,
        diag.max_trace_correction,
        diag.max_hermiticity_correction,
        diag.min_eigenvalue
    );
    traj.diagnostics = diag;
    Ok(traj)
}

/// Integrates the master equation from `rho0` up to `cfg.t_max`.
///
/// After every step the state is replaced by its Hermitian part and
/// renormalized to unit trace; corrections above `1e-9` abort the run.
pub fn integrate(p: &ModelParams, rho0: &DensityMatrix, cfg: &IntegratorConfig) -> Result<Trajectory> {
    run(p, rho0, cfg, false)
}

/// Runs independent trajectories in parallel; results keep the input order.
pub fn integrate_batch(
    jobs: &[(ModelParams, DensityMatrix)],
    cfg_for: impl Fn(&ModelParams) -> Result<IntegratorConfig> + Sync,
) -> Vec<Result<Trajectory>> {
    jobs.par_iter()
        .map(|(p, rho0)| integrate(p, rho0, &cfg_for(p)?))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SteadyStateMethod {
    Nullspace,
    Longtime,
    Analytic,
}

impl fmt::Display for SteadyStateMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SteadyStateMethod::Nullspace => "nullspace",
            SteadyStateMethod::Longtime => "longtime",
            SteadyStateMethod::Analytic => "analytic",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SteadyStateResult {
    pub rho: DensityMatrix,
    pub method: SteadyStateMethod,
    /// `‖dρ/dt‖_max` at `rho`.
    pub residual: f64,
}

impl SteadyStateResult {
    pub(crate) fn checked(p: &ModelParams, rho: DensityMatrix, method: SteadyStateMethod) -> Result<Self> {
        let residual = master_rhs(p, rho.matrix()).max_abs();
        if residual >= STEADY_RESIDUAL_TOL {
            return Err(Error::Numeric(format!(
                "{method} steady state has residual {residual:.3e}"
            )));
        }
        Ok(Self {
            rho,
            method,
            residual,
        })
    }
}

/// Solves `L vec(ρ) = 0` with the `ρ₁₁` row replaced by `tr ρ = 1`.
pub fn steady_state_nullspace(p: &ModelParams) -> Result<SteadyStateResult> {
    let mut l = liouvillian_superoperator(p);
    // the diagonal rows sum to zero, so one of them carries no information
    for col in 0..16 {
        l[(0, col)] = ZERO;
    }
    for k in 0..4 {
        l[(0, 5 * k)] = ONE;
    }
    let mut rhs = vec![ZERO; 16];
    rhs[0] = ONE;
    let sol = solve_linear(&l, &rhs).map_err(|e| match e {
        Error::Singular { pivot, .. } => Error::Multiplicity(format!(
            "trace-augmented Liouvillian is singular (pivot {pivot:.3e})"
        )),
        other => other,
    })?;
    log::debug!("nullspace solve residual {:.3e}", sol.residual);
    let m = ComplexMatrix::unvectorize(&sol.x)?.hermitian_part();
    SteadyStateResult::checked(p, DensityMatrix::new(m)?, SteadyStateMethod::Nullspace)
}

/// Integrates until the windowed drift drops below `cfg.convergence_tol` and
/// the residual below [`STEADY_RESIDUAL_TOL`]. Needs `t_max ≥ 20/Γ`.
pub fn steady_state_longtime(
    p: &ModelParams,
    rho0: &DensityMatrix,
    cfg: &IntegratorConfig,
) -> Result<SteadyStateResult> {
    let min_t = 20.0 / relaxation_rate(p);
    if cfg.t_max < min_t {
        return Err(Error::Usage(format!(
            "t_max = {} is shorter than 20/(gamma(1+2 nbar)) = {min_t}",
            cfg.t_max
        )));
    }
    let traj = run(p, rho0, cfg, true)?;
    if traj.converged_at.is_none() {
        let drift = traj.diagnostics.final_drift.unwrap_or(f64::NAN);
        return Err(Error::Numeric(format!(
            "no convergence by t = {} (final drift {drift:.3e} over window {})",
            cfg.t_max, cfg.convergence_window
        )));
    }
    let rho = DensityMatrix::new(traj.final_state().matrix().clone())?;
    SteadyStateResult::checked(p, rho, SteadyStateMethod::Longtime)
}

/// `ρ̄ = U† ρ U`, with the Hamiltonian eigenstates as the columns of `U`.
pub fn transform_to_eigenbasis(p: &ModelParams, rho: &ComplexMatrix) -> ComplexMatrix {
    let u = eigenbasis(p).unitary();
    &(&u.adjoint() * rho) * &u
}

/// `ρ = U ρ̄ U†`.
pub fn transform_from_eigenbasis(p: &ModelParams, rho_bar: &ComplexMatrix) -> ComplexMatrix {
    let u = eigenbasis(p).unitary();
    &(&u * rho_bar) * &u.adjoint()
}
