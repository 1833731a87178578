//! Concentration vectors on a grid, projection of continuous initial data,
//! step-function reconstruction and moments.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::quad::simpson_one_sided;

/// Default Simpson panels per cell for projection.
pub const DEFAULT_PANELS: usize = 16;

/// Named initial size distributions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialProfile {
    /// `f(x) = x·e^{-x}`.
    XExp,
    /// `f(x) = (2/M)·1_{[0,M]}(x)`.
    Uniform { support: f64 },
    Zero,
}

impl InitialProfile {
    pub fn density(&self, x: f64) -> f64 {
        match *self {
            InitialProfile::XExp => x * libm::exp(-x),
            InitialProfile::Uniform { support } => {
                if (0.0..=support).contains(&x) {
                    2.0 / support
                } else {
                    0.0
                }
            }
            InitialProfile::Zero => 0.0,
        }
    }

    /// Limit of the density approaching `x` from the left (`from_left`) or right.
    fn one_sided(&self, x: f64, from_left: bool) -> f64 {
        match *self {
            InitialProfile::Uniform { support } if x == support => {
                if from_left {
                    2.0 / support
                } else {
                    0.0
                }
            }
            _ => self.density(x),
        }
    }

    /// Points where the density jumps or kinks.
    fn breakpoint(&self) -> Option<f64> {
        match *self {
            InitialProfile::Uniform { support } => Some(support),
            _ => None,
        }
    }

    /// `∫₀^∞ f`.
    pub fn number(&self) -> f64 {
        match *self {
            InitialProfile::XExp => 1.0,
            InitialProfile::Uniform { .. } => 2.0,
            InitialProfile::Zero => 0.0,
        }
    }

    /// `∫₀^∞ x·f`.
    pub fn mass(&self) -> f64 {
        match *self {
            InitialProfile::XExp => 2.0,
            InitialProfile::Uniform { support } => support,
            InitialProfile::Zero => 0.0,
        }
    }

    /// `‖f‖_{0,1} = ∫₀^∞ (1 + x)·f`.
    pub fn weighted_norm(&self) -> f64 {
        self.number() + self.mass()
    }

    /// `∫_a^∞ f` in closed form.
    fn tail_number(&self, a: f64) -> f64 {
        match *self {
            InitialProfile::XExp => (a + 1.0) * libm::exp(-a),
            InitialProfile::Uniform { support } => 2.0 / support * (support - a).max(0.0),
            InitialProfile::Zero => 0.0,
        }
    }

    /// `∫_a^b f` by composite Simpson, split at the breakpoint if it lies inside.
    pub fn integrate(&self, a: f64, b: f64, panels: usize) -> f64 {
        let f = |x: f64| self.density(x);
        match self.breakpoint() {
            Some(p) if p > a && p < b => {
                simpson_one_sided(f, |x| self.one_sided(x, false), |x| self.one_sided(x, true), a, p, panels)
                    + simpson_one_sided(f, |x| self.one_sided(x, false), |x| self.one_sided(x, true), p, b, panels)
            }
            _ => simpson_one_sided(f, |x| self.one_sided(x, false), |x| self.one_sided(x, true), a, b, panels),
        }
    }
}

/// Number density `c_i(t)` of each cell at time `t`. `c_0 ≡ 0` is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteState {
    pub grid: Grid,
    pub c: Vec<f64>,
    pub t: f64,
}

impl DiscreteState {
    pub fn zeros(grid: Grid) -> Self {
        DiscreteState { grid, c: vec![0.0; grid.len()], t: 0.0 }
    }

    pub fn from_values(grid: Grid, c: Vec<f64>, t: f64) -> Result<Self> {
        if c.len() != grid.len() {
            return Err(Error::LengthMismatch { expected: grid.len(), found: c.len() });
        }
        Ok(DiscreteState { grid, c, t })
    }

    /// Continuous-scale moment `∫xʳ f_ε dx ≈ ε^{r+1}·Σ iʳ c_i` (cell-center weights).
    pub fn moment(&self, r: f64) -> f64 {
        libm::pow(self.grid.epsilon(), r + 1.0) * self.y_norm(r)
    }

    /// Unscaled norm `‖c‖_{Y_r} = Σ iʳ |c_i|`.
    pub fn y_norm(&self, r: f64) -> f64 {
        self.c
            .iter()
            .enumerate()
            .map(|(k, &v)| weight(k + 1, r) * v.abs())
            .sum()
    }

    /// Discrete particle count `Σ c_i`.
    pub fn count(&self) -> f64 {
        self.c.iter().sum()
    }

    /// Concentration in the last cell.
    pub fn boundary_value(&self) -> f64 {
        self.c.last().copied().unwrap_or(0.0)
    }

    pub fn reconstruct(&self) -> StepFunction {
        StepFunction { grid: self.grid, values: self.c.clone() }
    }
}

#[inline]
fn weight(i: usize, r: f64) -> f64 {
    if r == 0.0 {
        1.0
    } else if r == 1.0 {
        i as f64
    } else if r == 2.0 {
        (i * i) as f64
    } else {
        libm::pow(i as f64, r)
    }
}

/// A projected initial state with the mass the grid could not hold.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub state: DiscreteState,
    /// `∫_{[0, ε/2)} f`, the dust strip below cell 1.
    pub dust_number: f64,
    /// `∫_{(m+1/2)ε}^∞ f`, beyond the last cell.
    pub tail_number: f64,
}

/// `c_i = (1/ε)·∫_{Λᵢ} f` by composite Simpson with `panels` subdivisions per cell.
pub fn project_initial(profile: &InitialProfile, grid: Grid, panels: usize) -> Result<Projection> {
    let eps = grid.epsilon();
    let mut c = Vec::with_capacity(grid.len());
    for i in 1..=grid.len() {
        let (a, b) = grid.cell_bounds(i);
        let v = profile.integrate(a, b, panels) / eps;
        if !v.is_finite() {
            return Err(Error::NonFinite { what: "initial projection" });
        }
        c.push(v);
    }
    let dust_number = profile.integrate(0.0, 0.5 * eps, panels);
    let tail_number = profile.tail_number(grid.right_edge());
    if !dust_number.is_finite() || !tail_number.is_finite() {
        return Err(Error::NonFinite { what: "projection diagnostics" });
    }
    Ok(Projection { state: DiscreteState { grid, c, t: 0.0 }, dust_number, tail_number })
}

/// Piecewise-constant reconstruction `f_ε = Σ c_i·1_{Λᵢ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl StepFunction {
    /// Value at `x`; zero in the dust strip and beyond the last cell.
    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(match self.grid.cell_of(x)? {
            Some(i) => self.values[i - 1],
            None => 0.0,
        })
    }

    /// `∫ f_ε dx = ε·Σ c_i`.
    pub fn integral(&self) -> f64 {
        self.grid.epsilon() * self.values.iter().sum::<f64>()
    }
}

/// Time series of moments along a trajectory.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MomentSeries {
    pub epsilon: f64,
    pub times: Vec<f64>,
    pub m0: Vec<f64>,
    pub m1: Vec<f64>,
    pub m2: Vec<f64>,
    pub y1: Vec<f64>,
    pub n_count: Vec<f64>,
    /// `ε²·∫₀ᵗ D ds`, the boundary mass defect on the `M1` scale.
    pub mass_defect_integral: Vec<f64>,
}

impl MomentSeries {
    pub fn new(epsilon: f64) -> Self {
        MomentSeries { epsilon, ..Default::default() }
    }

    /// Append the moments of `state`; `defect_integral` is on the unscaled `Y1` scale.
    pub fn push(&mut self, state: &DiscreteState, defect_integral: f64) {
        let eps = state.grid.epsilon();
        self.times.push(state.t);
        self.m0.push(state.moment(0.0));
        self.m1.push(state.moment(1.0));
        self.m2.push(state.moment(2.0));
        self.y1.push(state.y_norm(1.0));
        self.n_count.push(state.count());
        self.mass_defect_integral.push(eps * eps * defect_integral);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Uniform a-priori bounds `∫x f_ε ≤ 2‖f^in‖_{0,1}` and `∫f_ε ≤ ‖f^in‖_{0,1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AprioriBounds {
    pub weighted_norm: f64,
}

impl AprioriBounds {
    pub fn for_profile(profile: &InitialProfile) -> Self {
        AprioriBounds { weighted_norm: profile.weighted_norm() }
    }

    pub fn holds(&self, state: &DiscreteState) -> bool {
        let slack = 1.0 + 1e-12;
        state.moment(1.0) <= 2.0 * self.weighted_norm * slack && state.moment(0.0) <= self.weighted_norm * slack
    }
}
