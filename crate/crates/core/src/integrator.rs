//! Adaptive Dormand–Prince 5(4) integration with PI step control and
//! snapshot landing.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::kernel::DiscreteKernel;
use crate::rhs::{eval_rhs_into, mass_defect_of, RhsPath, RhsWorkspace};
use crate::state::DiscreteState;

/// An autonomous system `y' = f(y)` with an optional scalar side integral.
pub trait OdeSystem {
    fn dim(&self) -> usize;
    fn rhs(&mut self, y: &[f64], dy: &mut [f64]);
    /// Rate of a scalar quantity integrated alongside `y` with the same stage weights.
    fn aux_rate(&mut self, _y: &[f64]) -> f64 {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NegativityPolicy {
    /// Zero out values in `[-10·atol, 0)`; retry the step below that band.
    #[default]
    ClampTiny,
    /// Fail once any value drops below `-10·atol`.
    Reject,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rtol: f64,
    pub atol: f64,
    pub safety: f64,
    /// Defaults to `1e-4` times the integration span.
    pub h_init: Option<f64>,
    /// Defaults to a tenth of the integration span.
    pub h_max: Option<f64>,
    pub max_steps: usize,
    pub negativity: NegativityPolicy,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rtol: 1e-6,
            atol: 1e-10,
            safety: 0.9,
            h_init: None,
            h_max: None,
            max_steps: 1_000_000,
            negativity: NegativityPolicy::ClampTiny,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rtol > 0.0 && self.rtol.is_finite()) {
            return Err(Error::InvalidConfig("rtol must be positive"));
        }
        if !(self.atol > 0.0 && self.atol.is_finite()) {
            return Err(Error::InvalidConfig("atol must be positive"));
        }
        if !(self.safety > 0.0 && self.safety < 1.0) {
            return Err(Error::InvalidConfig("safety must lie in (0, 1)"));
        }
        if matches!(self.h_init, Some(h) if !(h > 0.0 && h.is_finite())) {
            return Err(Error::InvalidConfig("h_init must be positive"));
        }
        if matches!(self.h_max, Some(h) if !(h > 0.0 && h.is_finite())) {
            return Err(Error::InvalidConfig("h_max must be positive"));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidConfig("max_steps must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    /// Rejections caused by values below the negativity band.
    pub rejected_negativity: usize,
    pub rhs_evals: usize,
    /// Total amount added to components by clamping.
    pub clamped_mass: f64,
    /// Smallest component seen in an accepted step before clamping.
    pub min_before_clamp: f64,
}

/// States at each requested time plus the side integral at those times.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub aux: Vec<f64>,
    pub stats: StepStats,
}

// Dormand–Prince tableau; the systems are autonomous, so the nodes are not needed.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const ALPHA: f64 = 0.7 / 5.0;
const BETA: f64 = 0.4 / 5.0;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;

/// Integrate `sys` from `(t0, y0)` and return the state at each of `times`.
///
/// `times` must be strictly increasing with `times[0] >= t0`. Steps are
/// shortened to land exactly on each time.
pub fn solve<S: OdeSystem>(
    sys: &mut S,
    t0: f64,
    y0: &[f64],
    times: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Solution> {
    cfg.validate()?;
    let n = sys.dim();
    if y0.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: y0.len() });
    }
    if !t0.is_finite() || times.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidSnapshotTimes);
    }
    if times.first().is_some_and(|&t| t < t0) || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidSnapshotTimes);
    }

    let mut stats = StepStats { min_before_clamp: f64::INFINITY, ..Default::default() };
    let mut out = Solution { times: Vec::new(), states: Vec::new(), aux: Vec::new(), stats };
    let Some(&t_end) = times.last() else {
        return Ok(out);
    };
    let span = t_end - t0;
    let h_max = cfg.h_max.unwrap_or(span / 10.0);
    let mut h = cfg.h_init.unwrap_or(1e-4 * span).min(h_max);

    let mut y = y0.to_vec();
    let mut t = t0;
    let mut aux = 0.0;
    let mut k = [(); 7].map(|_| vec![0.0; n]);
    let mut ytmp = vec![0.0; n];
    let mut ynew = vec![0.0; n];
    let mut aux_k = [0.0f64; 6];
    let band = -10.0 * cfg.atol;

    sys.rhs(&y, &mut k[0]);
    stats.rhs_evals += 1;
    let mut err_prev: f64 = 1e-4;
    let mut last_rejected = false;
    let mut steps = 0usize;

    for &target in times {
        while t < target {
            if steps >= cfg.max_steps {
                return Err(Error::MaxStepsExceeded { t, steps });
            }
            steps += 1;

            if k[0].iter().all(|&v| v == 0.0) {
                // Autonomous fixed point: the state cannot move.
                t = target;
                stats.accepted += 1;
                continue;
            }

            let h_proposed = h.min(h_max);
            let mut h_try = h_proposed;
            let landing = t + 1.01 * h_try >= target;
            if landing {
                h_try = target - t;
            }
            if !(h_try > 0.0) || t + h_try == t {
                return Err(Error::StepSizeUnderflow { t, h: h_try });
            }

            aux_k[0] = sys.aux_rate(&y);
            stage(&y, h_try, &[(A21, &k[0])], &mut ytmp);
            sys.rhs(&ytmp, &mut k[1]);
            aux_k[1] = sys.aux_rate(&ytmp);
            stage(&y, h_try, &[(A31, &k[0]), (A32, &k[1])], &mut ytmp);
            sys.rhs(&ytmp, &mut k[2]);
            aux_k[2] = sys.aux_rate(&ytmp);
            stage(&y, h_try, &[(A41, &k[0]), (A42, &k[1]), (A43, &k[2])], &mut ytmp);
            sys.rhs(&ytmp, &mut k[3]);
            aux_k[3] = sys.aux_rate(&ytmp);
            stage(&y, h_try, &[(A51, &k[0]), (A52, &k[1]), (A53, &k[2]), (A54, &k[3])], &mut ytmp);
            sys.rhs(&ytmp, &mut k[4]);
            aux_k[4] = sys.aux_rate(&ytmp);
            stage(
                &y,
                h_try,
                &[(A61, &k[0]), (A62, &k[1]), (A63, &k[2]), (A64, &k[3]), (A65, &k[4])],
                &mut ytmp,
            );
            sys.rhs(&ytmp, &mut k[5]);
            aux_k[5] = sys.aux_rate(&ytmp);
            stage(
                &y,
                h_try,
                &[(B1, &k[0]), (B3, &k[2]), (B4, &k[3]), (B5, &k[4]), (B6, &k[5])],
                &mut ynew,
            );
            let (head, tail) = k.split_at_mut(6);
            sys.rhs(&ynew, &mut tail[0]);
            stats.rhs_evals += 6;

            let mut err = 0.0f64;
            for i in 0..n {
                let e = h_try
                    * (E1 * head[0][i] + E3 * head[2][i] + E4 * head[3][i] + E5 * head[4][i] + E6 * head[5][i]
                        + E7 * tail[0][i]);
                let sc = cfg.atol + cfg.rtol * y[i].abs().max(ynew[i].abs());
                err = err.max(e.abs() / sc);
            }
            if err.is_nan() {
                err = f64::INFINITY;
            }

            if err > 1.0 {
                let factor = (cfg.safety * libm::pow(err, -0.2)).clamp(MIN_FACTOR, 1.0);
                h = h_try * if factor.is_finite() { factor } else { MIN_FACTOR };
                stats.rejected += 1;
                last_rejected = true;
                continue;
            }

            let min = ynew.iter().copied().fold(f64::INFINITY, f64::min);
            if min < band {
                match cfg.negativity {
                    NegativityPolicy::Reject => return Err(Error::Negativity { t: t + h_try, min }),
                    NegativityPolicy::ClampTiny => {
                        h = 0.5 * h_try;
                        stats.rejected += 1;
                        stats.rejected_negativity += 1;
                        last_rejected = true;
                        continue;
                    }
                }
            }

            stats.accepted += 1;
            stats.min_before_clamp = stats.min_before_clamp.min(min);
            let mut clamped = false;
            if min < 0.0 {
                for v in ynew.iter_mut().filter(|v| **v < 0.0) {
                    stats.clamped_mass += -*v;
                    *v = 0.0;
                }
                clamped = true;
            }

            aux += h_try
                * (B1 * aux_k[0] + B3 * aux_k[2] + B4 * aux_k[3] + B5 * aux_k[4] + B6 * aux_k[5]);
            t = if landing { target } else { t + h_try };
            core::mem::swap(&mut y, &mut ynew);
            if clamped {
                sys.rhs(&y, &mut k[0]);
                stats.rhs_evals += 1;
            } else {
                let (first, rest) = k.split_at_mut(1);
                core::mem::swap(&mut first[0], &mut rest[5]);
            }

            let e = err.max(1e-10);
            let mut factor = cfg.safety * libm::pow(e, -ALPHA) * libm::pow(err_prev, BETA);
            factor = factor.clamp(MIN_FACTOR, if last_rejected { 1.0 } else { MAX_FACTOR });
            err_prev = e;
            last_rejected = false;
            h = h_try * factor;
            if landing {
                h = h.max(h_proposed);
            }
        }
        out.times.push(target);
        out.states.push(y.clone());
        out.aux.push(aux);
    }
    out.stats = stats;
    Ok(out)
}

#[inline]
fn stage(y: &[f64], h: f64, terms: &[(f64, &Vec<f64>)], out: &mut [f64]) {
    for i in 0..y.len() {
        let mut s = 0.0;
        for (a, k) in terms {
            s += a * k[i];
        }
        out[i] = y[i] + h * s;
    }
}

/// The truncated DCA system with the boundary defect as side integral.
pub struct DcaSystem<'a> {
    dk: &'a DiscreteKernel,
    path: RhsPath,
    ws: RhsWorkspace,
}

impl<'a> DcaSystem<'a> {
    pub fn new(dk: &'a DiscreteKernel, path: RhsPath) -> Self {
        DcaSystem { dk, path, ws: RhsWorkspace::new(dk.grid().len()) }
    }
}

impl OdeSystem for DcaSystem<'_> {
    fn dim(&self) -> usize {
        self.dk.grid().len()
    }

    fn rhs(&mut self, y: &[f64], dy: &mut [f64]) {
        // Lengths are checked once before integration starts.
        eval_rhs_into(y, self.dk, self.path, &mut self.ws).expect("state length matches the kernel");
        dy.copy_from_slice(&self.ws.q);
    }

    fn aux_rate(&mut self, y: &[f64]) -> f64 {
        mass_defect_of(y, self.dk)
    }
}

/// Snapshots of a DCA trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<DiscreteState>,
    /// `∫ D ds` from the initial time to each snapshot, on the unscaled `Y1` scale.
    pub defect_integrals: Vec<f64>,
    pub stats: StepStats,
}

pub fn integrate(
    state0: &DiscreteState,
    dk: &DiscreteKernel,
    cfg: &IntegratorConfig,
    times: &[f64],
) -> Result<Trajectory> {
    integrate_with(state0, dk, cfg, times, RhsPath::Auto)
}

pub fn integrate_with(
    state0: &DiscreteState,
    dk: &DiscreteKernel,
    cfg: &IntegratorConfig,
    times: &[f64],
    path: RhsPath,
) -> Result<Trajectory> {
    if state0.grid != *dk.grid() {
        return Err(Error::GridMismatch);
    }
    let mut sys = DcaSystem::new(dk, path);
    let sol = solve(&mut sys, state0.t, &state0.c, times, cfg)?;
    let states = sol
        .states
        .into_iter()
        .zip(&sol.times)
        .map(|(c, &t)| DiscreteState { grid: state0.grid, c, t })
        .collect();
    Ok(Trajectory { states, defect_integrals: sol.aux, stats: sol.stats })
}
