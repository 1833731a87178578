//! Error measurement, convergence orders and moment diagnostics.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exact::{ConstantPairSolution, ExactCase, Side};
use crate::kernel::KernelSpec;
use crate::quad::{bisect, simpson_one_sided};
use crate::state::{MomentSeries, StepFunction};

/// Default Simpson panels per integration piece.
pub const DEFAULT_ERROR_PANELS: usize = 16;
const ROOT_TOL: f64 = 1e-10;

/// A continuous reference solution with known nonsmooth points.
pub trait Reference {
    fn value(&self, t: f64, x: f64, side: Side) -> f64;
    fn breakpoints(&self, t: f64) -> Vec<f64>;
}

/// An [`ExactCase`] that has been checked to have a closed form.
#[derive(Debug, Clone, Copy)]
pub struct ClosedForm(ExactCase);

impl ClosedForm {
    pub fn new(case: ExactCase) -> Result<Self> {
        case.require_closed_form()?;
        Ok(ClosedForm(case))
    }
}

impl Reference for ClosedForm {
    fn value(&self, t: f64, x: f64, side: Side) -> f64 {
        self.0.eval_side(t, x, side).unwrap_or(0.0)
    }

    fn breakpoints(&self, t: f64) -> Vec<f64> {
        self.0.breakpoints(t)
    }
}

impl Reference for ConstantPairSolution {
    fn value(&self, t: f64, x: f64, side: Side) -> f64 {
        self.eval_side(t, x, side)
    }

    fn breakpoints(&self, t: f64) -> Vec<f64> {
        ConstantPairSolution::breakpoints(self, t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub epsilon: f64,
    pub t: f64,
    pub e1: f64,
    /// `‖f_exact - f_ε‖_{L¹(0, x_max)}`
    pub numerator: f64,
    /// `‖f_exact‖_{L¹(0, x_max)}`
    pub denominator: f64,
}

/// Relative L1 error of `sf` against the closed form of `case` at time `t`.
pub fn rel_l1_error(sf: &StepFunction, case: &ExactCase, t: f64, panels: usize) -> Result<ErrorReport> {
    rel_l1_error_against(sf, &ClosedForm::new(*case)?, t, panels)
}

/// Relative L1 error over `[0, x_max]` against any [`Reference`].
///
/// Every cell, the dust strip and the strip beyond the last cell are split at
/// the reference's breakpoints and at sign changes of `f - c_i`, and each
/// piece is integrated by Simpson with one-sided endpoint values.
pub fn rel_l1_error_against<R: Reference>(sf: &StepFunction, reference: &R, t: f64, panels: usize) -> Result<ErrorReport> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument { name: "t", value: t });
    }
    let grid = sf.grid;
    let eps = grid.epsilon();
    let mut breaks: Vec<f64> = reference.breakpoints(t);
    breaks.sort_by(f64::total_cmp);

    let mut num = 0.0;
    let mut den = 0.0;
    let mut piece = |a: f64, b: f64, level: f64| {
        if b <= a {
            return;
        }
        let mut lo = a;
        for &p in breaks.iter().filter(|&&p| p > a && p < b) {
            let (n, d) = abs_diff_integral(reference, t, lo, p, level, panels);
            num += n;
            den += d;
            lo = p;
        }
        let (n, d) = abs_diff_integral(reference, t, lo, b, level, panels);
        num += n;
        den += d;
    };

    piece(0.0, 0.5 * eps, 0.0);
    for (k, &c) in sf.values.iter().enumerate() {
        let (a, b) = grid.cell_bounds(k + 1);
        piece(a, b, c);
    }
    piece(grid.right_edge(), grid.x_max(), 0.0);

    if !(num.is_finite() && den.is_finite()) {
        return Err(Error::NonFinite { what: "L1 error" });
    }
    if den <= 0.0 {
        return Err(Error::InvalidArgument { name: "reference L1 norm", value: den });
    }
    Ok(ErrorReport { epsilon: eps, t, e1: num / den, numerator: num, denominator: den })
}

/// `(∫_a^b |f - level|, ∫_a^b |f|)` on a piece where `f` is smooth inside.
fn abs_diff_integral<R: Reference>(r: &R, t: f64, a: f64, b: f64, level: f64, panels: usize) -> (f64, f64) {
    let f = |x: f64| r.value(t, x, Side::At);
    let fa = |x: f64| r.value(t, x, Side::Right);
    let fb = |x: f64| r.value(t, x, Side::Left);
    let den = simpson_one_sided(|x| f(x).abs(), |x| fa(x).abs(), |x| fb(x).abs(), a, b, panels);

    let g = |x: f64| f(x) - level;
    let n = panels.max(2);
    let h = (b - a) / n as f64;
    let mut lo = a;
    let mut lo_is_edge = true;
    let mut prev = fa(a) - level;
    let mut num = 0.0;
    for k in 1..=n {
        let x = if k == n { b } else { a + h * k as f64 };
        let gx = if k == n { fb(b) - level } else { g(x) };
        if (prev < 0.0 && gx > 0.0) || (prev > 0.0 && gx < 0.0) {
            let (r_lo, r_hi) = bisect(g, x - h, x, ROOT_TOL);
            num += side_integral(&g, &fa, level, lo, r_lo, lo_is_edge, panels);
            lo = r_hi;
            lo_is_edge = false;
        }
        prev = gx;
    }
    num += last_integral(&g, &fa, &fb, level, lo, b, lo_is_edge, panels);
    (num, den)
}

fn side_integral<G, A>(g: &G, fa: &A, level: f64, lo: f64, hi: f64, lo_is_edge: bool, panels: usize) -> f64
where
    G: Fn(f64) -> f64,
    A: Fn(f64) -> f64,
{
    let left = |x: f64| if lo_is_edge { (fa(x) - level).abs() } else { g(x).abs() };
    simpson_one_sided(|x| g(x).abs(), left, |x| g(x).abs(), lo, hi, panels)
}

#[allow(clippy::too_many_arguments)]
fn last_integral<G, A, B>(g: &G, fa: &A, fb: &B, level: f64, lo: f64, hi: f64, lo_is_edge: bool, panels: usize) -> f64
where
    G: Fn(f64) -> f64,
    A: Fn(f64) -> f64,
    B: Fn(f64) -> f64,
{
    let left = |x: f64| if lo_is_edge { (fa(x) - level).abs() } else { g(x).abs() };
    simpson_one_sided(|x| g(x).abs(), left, |x| (fb(x) - level).abs(), lo, hi, panels)
}

/// Errors at one time across a ladder of cell widths.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceTable {
    pub t: f64,
    /// `(ε, E1)` pairs with ε strictly decreasing.
    pub rows: Vec<(f64, f64)>,
}

impl ConvergenceTable {
    pub fn new(t: f64) -> Self {
        ConvergenceTable { t, rows: Vec::new() }
    }

    pub fn push(&mut self, epsilon: f64, e1: f64) {
        self.rows.push((epsilon, e1));
    }

    pub fn order_estimate(&self) -> Result<f64> {
        estimate_order(&self.rows)
    }

    /// Order fitted to the first `k + 1` rows for each `k`; `None` until two usable rows exist.
    pub fn cumulative_orders(&self) -> Vec<Option<f64>> {
        (0..self.rows.len()).map(|k| estimate_order(&self.rows[..=k]).ok()).collect()
    }

    /// Errors strictly decrease as ε decreases.
    pub fn strictly_decreasing(&self) -> bool {
        self.rows.len() >= 2 && self.rows.windows(2).all(|w| w[1].1 < w[0].1 && w[1].0 < w[0].0)
    }
}

/// Least-squares slope of `log E1` against `log ε`, skipping rows with
/// non-positive or non-finite entries.
pub fn estimate_order(rows: &[(f64, f64)]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|(e, err)| *e > 0.0 && e.is_finite() && *err > 0.0 && err.is_finite())
        .map(|&(e, err)| (libm::log(e), libm::log(err)))
        .collect();
    if pts.len() < 2 {
        return Err(Error::InsufficientRows { usable: pts.len() });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientRows { usable: 1 });
    }
    Ok(sxy / sxx)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    NumberDecay,
    MassBalance,
    Riccati,
    Gelation,
}

/// Outcome of the moment checks on one series.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MomentBoundReport {
    /// Second-moment bound at each series time, `None` once its denominator is not positive.
    pub riccati_bound: Vec<Option<f64>>,
    /// Zero of the bound's denominator, when the growth constants are declared.
    pub riccati_blowup_time: Option<f64>,
    /// `(2·Σc^in/(K₁^ε·t))^{1/2}` per time; diagnostic only.
    pub gelation_envelope: Vec<Option<f64>>,
    /// Largest `|M₁(t) - M₁(0) - ε²∫D|/M₁(0)` along the series.
    pub mass_balance_residual: f64,
    pub violations: Vec<(Check, f64)>,
}

impl MomentBoundReport {
    pub fn violations_of(&self, check: Check) -> impl Iterator<Item = f64> + '_ {
        self.violations.iter().filter(move |v| v.0 == check).map(|v| v.1)
    }

    /// No violations outside the diagnostic-only gelation check.
    pub fn passes(&self) -> bool {
        self.violations.iter().all(|v| v.0 == Check::Gelation)
    }
}

/// Checks a series against number decay, interior mass balance, the
/// second-moment Riccati bound and the Y₁ decay envelope.
///
/// `rtol` sets the slacks: `10·rtol` relative per interval for `M₀` and
/// `100·rtol·M₁(0)` for the mass balance.
pub fn moment_diagnostics(series: &MomentSeries, spec: &KernelSpec, rtol: f64) -> MomentBoundReport {
    let mut rep = MomentBoundReport::default();
    let n = series.len();
    if n == 0 {
        return rep;
    }

    for k in 1..n {
        if series.m0[k] > series.m0[k - 1] * (1.0 + 10.0 * rtol) {
            rep.violations.push((Check::NumberDecay, series.times[k]));
        }
    }

    let m1_0 = series.m1[0];
    for k in 0..n {
        let r = (series.m1[k] - m1_0 - series.mass_defect_integral[k]).abs();
        let rel = if m1_0 > 0.0 { r / m1_0 } else { r };
        rep.mass_balance_residual = rep.mass_balance_residual.max(rel);
        if r > 100.0 * rtol * m1_0 {
            rep.violations.push((Check::MassBalance, series.times[k]));
        }
    }

    let b = spec.bounds;
    if let (Some(a1), Some(a2)) = (b.a1, b.a2) {
        let a = 2.0 * a1.max(a2);
        let m1_bar = series.m1.iter().copied().fold(0.0, f64::max);
        let m2_0 = series.m2[0];
        let bound = RiccatiBound { a, m1_bar, m2_0 };
        rep.riccati_blowup_time = bound.blowup_time();
        for k in 0..n {
            let v = bound.eval(series.times[k] - series.times[0]);
            if let Some(v) = v {
                if series.m2[k] > v * (1.0 + 10.0 * rtol) {
                    rep.violations.push((Check::Riccati, series.times[k]));
                }
            }
            rep.riccati_bound.push(v);
        }
    }

    if let Some(k1) = b.k1 {
        let eps = series.epsilon;
        let k1d = k1 * eps * eps * eps;
        let count0 = series.n_count[0];
        for k in 0..n {
            let t = series.times[k] - series.times[0];
            let env = (t > 0.0 && k1d > 0.0).then(|| libm::sqrt(2.0 * count0 / (k1d * t)));
            if let Some(e) = env {
                if series.y1[k] > e {
                    rep.violations.push((Check::Gelation, series.times[k]));
                }
            }
            rep.gelation_envelope.push(env);
        }
    }
    rep
}

/// `M₂(0)·A·M̄₁·e^{A·M̄₁·t} / (A·M̄₁ + 2A·M₂(0)·(1 - e^{A·M̄₁·t}))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiccatiBound {
    pub a: f64,
    pub m1_bar: f64,
    pub m2_0: f64,
}

impl RiccatiBound {
    pub fn eval(&self, t: f64) -> Option<f64> {
        let am = self.a * self.m1_bar;
        let e = libm::exp(am * t);
        let den = am + 2.0 * self.a * self.m2_0 * (1.0 - e);
        (den > 0.0).then(|| self.m2_0 * am * e / den)
    }

    /// Time at which the denominator reaches zero.
    pub fn blowup_time(&self) -> Option<f64> {
        let am = self.a * self.m1_bar;
        if !(am > 0.0 && self.m2_0 > 0.0) {
            return None;
        }
        Some(libm::log1p(self.m1_bar / (2.0 * self.m2_0)) / am)
    }
}
