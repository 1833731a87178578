//! Right-hand side of the truncated DCA system.
//!
//! With 1-based indices and stored entries `K_{i,j} = K^ε_{i,j}`, row `i` of
//! the system reads
//!
//! ```text
//! Q_i = flux_{i-1} - flux_i - c_i·(E¹_i + E²_i)
//! flux_i = c_i·(F¹_i + F²_i)
//! F¹_i = Σ_{j≤i} j·K_{i,j}c_j      E¹_i = Σ_{j≥i} K_{i,j}c_j
//! F²_i = Σ_{j≥i} j·C_{i,j}c_j      E²_i = Σ_{j≤i} C_{i,j}c_j
//! ```
//!
//! and `flux_0 = 0` because `c_0 = 0`. The sums `F¹_i, F²_i` feed the gain of
//! row `i + 1`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::kernel::DiscreteKernel;
use crate::quad::Neumaier;
use crate::state::DiscreteState;

/// Above this many cells the row sums use compensated summation.
pub const COMPENSATED_THRESHOLD: usize = 512;

/// Which evaluation path to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RhsPath {
    /// O(m) prefix/suffix sums when both kernels are constant, else generic.
    #[default]
    Auto,
    /// Always the O(m²) row-sum loop.
    Generic,
}

/// Scratch vectors for one caller. `q` holds the last evaluated `dc/dt`.
#[derive(Debug, Clone, Default)]
pub struct RhsWorkspace {
    pub f1: Vec<f64>,
    pub f2: Vec<f64>,
    pub e1: Vec<f64>,
    pub e2: Vec<f64>,
    pub q: Vec<f64>,
}

impl RhsWorkspace {
    pub fn new(m: usize) -> Self {
        RhsWorkspace {
            f1: vec![0.0; m],
            f2: vec![0.0; m],
            e1: vec![0.0; m],
            e2: vec![0.0; m],
            q: vec![0.0; m],
        }
    }

    fn resize(&mut self, m: usize) {
        for v in [&mut self.f1, &mut self.f2, &mut self.e1, &mut self.e2, &mut self.q] {
            v.clear();
            v.resize(m, 0.0);
        }
    }
}

fn check_state(state: &DiscreteState, dk: &DiscreteKernel) -> Result<()> {
    if state.grid != *dk.grid() {
        return Err(Error::GridMismatch);
    }
    check_len(&state.c, dk)
}

fn check_len(c: &[f64], dk: &DiscreteKernel) -> Result<()> {
    if c.len() != dk.grid().len() {
        return Err(Error::LengthMismatch { expected: dk.grid().len(), found: c.len() });
    }
    Ok(())
}

/// `dc/dt` for `state`.
pub fn eval_rhs(state: &DiscreteState, dk: &DiscreteKernel) -> Result<Vec<f64>> {
    check_state(state, dk)?;
    let mut ws = RhsWorkspace::new(state.c.len());
    eval_rhs_into(&state.c, dk, RhsPath::Auto, &mut ws)?;
    Ok(ws.q)
}

/// Evaluate into `ws.q`, reusing the workspace buffers.
pub fn eval_rhs_into(c: &[f64], dk: &DiscreteKernel, path: RhsPath, ws: &mut RhsWorkspace) -> Result<()> {
    check_len(c, dk)?;
    let m = c.len();
    if ws.q.len() != m {
        ws.resize(m);
    }
    match (path, dk.constant_entries()) {
        (RhsPath::Auto, Some((k, cc))) => row_sums_constant(c, k, cc, ws),
        _ if m > COMPENSATED_THRESHOLD => row_sums_compensated(c, dk, ws),
        _ => row_sums_plain(c, dk, ws),
    }
    assemble(c, ws);
    Ok(())
}

fn row_sums_plain(c: &[f64], dk: &DiscreteKernel, ws: &mut RhsWorkspace) {
    let m = c.len();
    for i in 0..m {
        let kr = dk.k_row(i + 1);
        let cr = dk.c_row(i + 1);
        let (mut f1, mut f2, mut e1, mut e2) = (0.0, 0.0, 0.0, 0.0);
        for j in 0..=i {
            f1 += (j + 1) as f64 * kr[j] * c[j];
            e2 += cr[j] * c[j];
        }
        for j in i..m {
            e1 += kr[j] * c[j];
            f2 += (j + 1) as f64 * cr[j] * c[j];
        }
        ws.f1[i] = f1;
        ws.f2[i] = f2;
        ws.e1[i] = e1;
        ws.e2[i] = e2;
    }
}

fn row_sums_compensated(c: &[f64], dk: &DiscreteKernel, ws: &mut RhsWorkspace) {
    let m = c.len();
    for i in 0..m {
        let kr = dk.k_row(i + 1);
        let cr = dk.c_row(i + 1);
        let (mut f1, mut f2, mut e1, mut e2) =
            (Neumaier::default(), Neumaier::default(), Neumaier::default(), Neumaier::default());
        for j in 0..=i {
            f1.add((j + 1) as f64 * kr[j] * c[j]);
            e2.add(cr[j] * c[j]);
        }
        for j in i..m {
            e1.add(kr[j] * c[j]);
            f2.add((j + 1) as f64 * cr[j] * c[j]);
        }
        ws.f1[i] = f1.value();
        ws.f2[i] = f2.value();
        ws.e1[i] = e1.value();
        ws.e2[i] = e2.value();
    }
}

fn row_sums_constant(c: &[f64], k: f64, cc: f64, ws: &mut RhsWorkspace) {
    let m = c.len();
    // prefix sums of j·c_j and c_j
    let (mut p1, mut p0) = (Neumaier::default(), Neumaier::default());
    for i in 0..m {
        p1.add((i + 1) as f64 * c[i]);
        p0.add(c[i]);
        ws.f1[i] = k * p1.value();
        ws.e2[i] = cc * p0.value();
    }
    let (mut s1, mut s0) = (Neumaier::default(), Neumaier::default());
    for i in (0..m).rev() {
        s1.add((i + 1) as f64 * c[i]);
        s0.add(c[i]);
        ws.f2[i] = cc * s1.value();
        ws.e1[i] = k * s0.value();
    }
}

fn assemble(c: &[f64], ws: &mut RhsWorkspace) {
    let mut inflow = 0.0;
    for i in 0..c.len() {
        let flux = c[i] * (ws.f1[i] + ws.f2[i]);
        ws.q[i] = inflow - flux - c[i] * (ws.e1[i] + ws.e2[i]);
        inflow = flux;
    }
}

/// Boundary defect `D = Σ i·Q_i` of the truncated system:
/// `D = -(m+1)·c_m·Σ_j j·K_{m,j}c_j - m(m+1)·C_{m,m}·c_m²`.
pub fn mass_defect_rate(state: &DiscreteState, dk: &DiscreteKernel) -> Result<f64> {
    check_state(state, dk)?;
    Ok(mass_defect_of(&state.c, dk))
}

/// [`mass_defect_rate`] on a raw concentration slice of the kernel's length.
pub fn mass_defect_of(c: &[f64], dk: &DiscreteKernel) -> f64 {
    let m = c.len();
    let cm = c[m - 1];
    if cm == 0.0 {
        return 0.0;
    }
    let kr = dk.k_row(m);
    let mut s = Neumaier::default();
    for j in 0..m {
        s.add((j + 1) as f64 * kr[j] * c[j]);
    }
    let mf = m as f64;
    -(mf + 1.0) * cm * s.value() - mf * (mf + 1.0) * dk.c(m, m) * cm * cm
}

/// Weak-form rate `Σ_i Σ_{j≤i} [j(φ_{i+1}-φ_i) - φ_j]·K_{i,j}c_ic_j
/// + Σ_i Σ_{j≥i} [j(φ_{i+1}-φ_i) - φ_j]·C_{i,j}c_ic_j`.
///
/// `phi[k]` holds `φ_{k+1}`, so `phi` has `m + 1` entries. For any `φ` the
/// result equals `Σ φ_i·Q_i + φ_{m+1}·flux_m`.
pub fn weak_form_rate(state: &DiscreteState, dk: &DiscreteKernel, phi: &[f64]) -> Result<f64> {
    check_state(state, dk)?;
    let m = state.c.len();
    if phi.len() != m + 1 {
        return Err(Error::LengthMismatch { expected: m + 1, found: phi.len() });
    }
    let c = &state.c;
    let mut acc = Neumaier::default();
    for i in 0..m {
        let dphi = phi[i + 1] - phi[i];
        let kr = dk.k_row(i + 1);
        let cr = dk.c_row(i + 1);
        let mut row = Neumaier::default();
        for j in 0..=i {
            let bracket = (j + 1) as f64 * dphi - phi[j];
            row.add(bracket * kr[j] * c[j]);
        }
        for j in i..m {
            let bracket = (j + 1) as f64 * dphi - phi[j];
            row.add(bracket * cr[j] * c[j]);
        }
        acc.add(c[i] * row.value());
    }
    Ok(acc.value())
}
