//! One complete run: projection, kernel build, integration and moment series.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::integrator::{integrate_with, IntegratorConfig, StepStats};
use crate::kernel::{DiscreteKernel, DiscretizationRule, KernelSpec};
use crate::rhs::RhsPath;
use crate::state::{project_initial, AprioriBounds, DiscreteState, InitialProfile, MomentSeries, DEFAULT_PANELS};

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSetup {
    pub grid: Grid,
    pub spec: KernelSpec,
    pub rule: DiscretizationRule,
    pub profile: InitialProfile,
    pub t_max: f64,
    /// States are returned at these times, each in `[0, t_max]`.
    pub snapshot_times: Vec<f64>,
    /// Spacing of the moment series; defaults to `t_max/50`.
    pub moment_dt: Option<f64>,
    pub integrator: IntegratorConfig,
    pub path: RhsPath,
    pub projection_panels: usize,
}

impl SimulationSetup {
    pub fn new(grid: Grid, spec: KernelSpec, profile: InitialProfile, t_max: f64) -> Self {
        SimulationSetup {
            grid,
            spec,
            rule: DiscretizationRule::Point,
            profile,
            t_max,
            snapshot_times: Vec::new(),
            moment_dt: None,
            integrator: IntegratorConfig::default(),
            path: RhsPath::Auto,
            projection_panels: DEFAULT_PANELS,
        }
    }

    pub fn with_snapshots(mut self, times: &[f64]) -> Self {
        self.snapshot_times = times.to_vec();
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    pub snapshots: Vec<DiscreteState>,
    pub moments: MomentSeries,
    pub stats: StepStats,
    /// Initial number in the strip below cell 1, lost by projection.
    pub dust_number: f64,
    /// Initial number beyond the last cell, lost by projection.
    pub tail_number: f64,
    /// Output times where a uniform a-priori moment bound failed.
    pub apriori_violations: Vec<f64>,
}

/// Merge `{0}`, the snapshots, a `moment_dt` grid and `t_max` into one
/// increasing list; returns the list and the index of each snapshot in it.
pub fn output_times(setup: &SimulationSetup) -> Result<(Vec<f64>, Vec<usize>)> {
    let t_max = setup.t_max;
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidArgument { name: "t_max", value: t_max });
    }
    if setup.snapshot_times.iter().any(|&t| !(0.0..=t_max).contains(&t))
        || setup.snapshot_times.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(Error::InvalidSnapshotTimes);
    }
    let dt = setup.moment_dt.unwrap_or(t_max / 50.0);
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument { name: "moment_dt", value: dt });
    }

    // (time, is_snapshot)
    let mut all: Vec<(f64, bool)> = setup.snapshot_times.iter().map(|&t| (t, true)).collect();
    all.push((0.0, false));
    all.push((t_max, false));
    let steps = libm::floor(t_max / dt + 1e-9) as usize;
    all.extend((1..=steps).map(|k| (k as f64 * dt, false)).filter(|p| p.0 < t_max));
    all.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));

    let tol = 1e-12 * t_max;
    let mut times: Vec<f64> = Vec::with_capacity(all.len());
    let mut snap_idx = Vec::with_capacity(setup.snapshot_times.len());
    for (t, is_snap) in all {
        match times.last_mut() {
            Some(last) if t - *last <= tol => {
                if is_snap {
                    *last = t;
                    snap_idx.push(times.len() - 1);
                }
            }
            _ => {
                times.push(t);
                if is_snap {
                    snap_idx.push(times.len() - 1);
                }
            }
        }
    }
    Ok((times, snap_idx))
}

pub fn simulate(setup: &SimulationSetup) -> Result<SimulationResult> {
    let (times, snap_idx) = output_times(setup)?;
    let projection = project_initial(&setup.profile, setup.grid, setup.projection_panels)?;
    let dk = DiscreteKernel::new(&setup.spec, setup.grid, setup.rule)?;
    let traj = integrate_with(&projection.state, &dk, &setup.integrator, &times, setup.path)?;
    drop(dk);

    let bounds = AprioriBounds::for_profile(&setup.profile);
    let mut moments = MomentSeries::new(setup.grid.epsilon());
    let mut apriori_violations = Vec::new();
    for (state, &d) in traj.states.iter().zip(&traj.defect_integrals) {
        moments.push(state, d);
        if !bounds.holds(state) {
            apriori_violations.push(state.t);
        }
    }
    let snapshots = snap_idx.iter().map(|&k| traj.states[k].clone()).collect();
    Ok(SimulationResult {
        snapshots,
        moments,
        stats: traj.stats,
        dust_number: projection.dust_number,
        tail_number: projection.tail_number,
        apriori_violations,
    })
}
