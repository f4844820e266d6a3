//! Steady-concurrence surfaces over scaled parameter grids and ridge extraction.

use rayon::prelude::*;

use crate::analytic::{delta_max, finite_t_concurrence_formula, steady_concurrence_t0_unclamped};
use crate::error::{Error, Result};
use crate::model::{check_restrictions, ModelParams};

/// Evenly spaced axis including both end points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::Usage(format!("axis needs at least 2 points, got {count}")));
        }
        if !(start.is_finite() && stop.is_finite() && start < stop) {
            return Err(Error::Usage(format!("axis needs start < stop, got {start}..{stop}")));
        }
        Ok(Self { start, stop, count })
    }

    /// A single fixed value.
    pub fn fixed(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::Usage("axis value must be finite".into()));
        }
        Ok(Self {
            start: value,
            stop: value,
            count: 1,
        })
    }

    pub fn step(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.stop - self.start) / (self.count - 1) as f64
        }
    }

    pub fn value(&self, k: usize) -> f64 {
        if k + 1 == self.count {
            self.stop
        } else {
            self.start + k as f64 * self.step()
        }
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|k| self.value(k))
    }
}

/// Grid over `ω̄ × Δ̄ (× n̄)` with `γ = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepGrid {
    pub omega_bar_axis: Axis,
    pub delta_bar_axis: Axis,
    pub nbar_axis: Option<Axis>,
}

impl SweepGrid {
    /// The 400 × 400 grid over `ω̄ ∈ [0, 5]`, `Δ̄ ∈ [0, 3]`.
    pub fn standard_surface() -> Self {
        Self {
            omega_bar_axis: Axis::new(0.0, 5.0, 400).expect("valid"),
            delta_bar_axis: Axis::new(0.0, 3.0, 400).expect("valid"),
            nbar_axis: None,
        }
    }

    pub fn len(&self) -> usize {
        self.omega_bar_axis.count
            * self.delta_bar_axis.count
            * self.nbar_axis.map_or(1, |a| a.count)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub omega_bar: f64,
    pub delta_bar: f64,
    pub nbar: Option<f64>,
    pub c: f64,
}

/// Best `Δ̄` on one `ω̄` line of the surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RidgeRow {
    pub omega_bar: f64,
    pub argmax_delta_bar: f64,
    /// `Δ_max/γ` from the closed form.
    pub predicted_delta_bar: f64,
    pub max_c: f64,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub grid: SweepGrid,
    /// Row-major in (ω̄, Δ̄, n̄).
    pub points: Vec<SweepPoint>,
    /// One row per ω̄; only for zero-temperature surfaces.
    pub ridge: Vec<RidgeRow>,
    pub global_max: SweepPoint,
    /// Best point satisfying the single-decay-rate restrictions, if any.
    pub best_restricted: Option<SweepPoint>,
}

/// Steady concurrence at a scaled point, clamped at zero.
pub fn scaled_steady_concurrence(omega_bar: f64, delta_bar: f64, nbar: Option<f64>) -> f64 {
    match nbar {
        None => steady_concurrence_t0_unclamped(omega_bar, delta_bar, 1.0),
        Some(n) => finite_t_concurrence_formula(omega_bar, delta_bar, n),
    }
    .max(0.0)
}

fn restricted(omega_bar: f64, delta_bar: f64) -> bool {
    ModelParams::scaled(omega_bar, delta_bar, 0.0)
        .ok()
        .and_then(|p| check_restrictions(&p).ok())
        .is_some_and(|r| r.passed)
}

/// Evaluates every grid point (in parallel) and summarizes the ridge.
pub fn run_sweep(grid: &SweepGrid) -> SweepResult {
    let nw = grid.omega_bar_axis.count;
    let nd = grid.delta_bar_axis.count;
    let nn = grid.nbar_axis.map_or(1, |a| a.count);

    let points: Vec<SweepPoint> = (0..nw * nd * nn)
        .into_par_iter()
        .map(|flat| {
            let iw = flat / (nd * nn);
            let id = (flat / nn) % nd;
            let omega_bar = grid.omega_bar_axis.value(iw);
            let delta_bar = grid.delta_bar_axis.value(id);
            let nbar = grid.nbar_axis.map(|a| a.value(flat % nn));
            SweepPoint {
                omega_bar,
                delta_bar,
                nbar,
                c: scaled_steady_concurrence(omega_bar, delta_bar, nbar),
            }
        })
        .collect();

    let ridge = if grid.nbar_axis.is_none() {
        points
            .chunks(nd)
            .map(|line| {
                let best = line
                    .iter()
                    .fold(line[0], |b, p| if p.c > b.c { *p } else { b });
                RidgeRow {
                    omega_bar: best.omega_bar,
                    argmax_delta_bar: best.delta_bar,
                    predicted_delta_bar: delta_max(best.omega_bar, 1.0),
                    max_c: best.c,
                }
            })
            .collect()
    } else {
        Vec::new()
    };

    let global_max = points
        .iter()
        .fold(points[0], |b, p| if p.c > b.c { *p } else { b });
    let best_restricted = points
        .iter()
        .filter(|p| restricted(p.omega_bar, p.delta_bar))
        .fold(None::<SweepPoint>, |b, p| match b {
            Some(b) if b.c >= p.c => Some(b),
            _ => Some(*p),
        });

    SweepResult {
        grid: *grid,
        points,
        ridge,
        global_max,
        best_restricted,
    }
}
