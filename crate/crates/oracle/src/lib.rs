//! Brute-force reference implementations for cross-checking the solver.
//!
//! Nothing here shares code with the solver: each function is a literal
//! transcription written for clarity, not speed.

use std::fmt;

/// Largest system the naive right-hand side accepts.
pub const MAX_NAIVE_CELLS: usize = 64;
/// Largest number of fixed steps [`rk4_reference`] will take.
pub const MAX_RK4_STEPS: f64 = 1e7;

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    TooLarge { m: usize },
    TooManySteps { steps: f64 },
    BadStep { h: f64 },
    LengthMismatch { expected: usize, found: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooLarge { m } => write!(f, "naive oracle limited to {MAX_NAIVE_CELLS} cells, got {m}"),
            OracleError::TooManySteps { steps } => write!(f, "{steps:e} fixed steps exceeds the guard"),
            OracleError::BadStep { h } => write!(f, "step must be positive, got {h}"),
            OracleError::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
        }
    }
}

impl std::error::Error for OracleError {}

/// Reference value next to the fast-path value.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub reference: Vec<f64>,
    pub fast: Vec<f64>,
    pub abs_discrepancy: f64,
    pub rel_discrepancy: f64,
}

impl OracleResult {
    /// Sup-norm discrepancy, relative to the sup norm of the reference.
    pub fn compare(reference: Vec<f64>, fast: Vec<f64>) -> Result<Self, OracleError> {
        if reference.len() != fast.len() {
            return Err(OracleError::LengthMismatch { expected: reference.len(), found: fast.len() });
        }
        let abs = reference.iter().zip(&fast).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let scale = reference.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let rel = if scale > 0.0 { abs / scale } else { abs };
        Ok(OracleResult { reference, fast, abs_discrepancy: abs, rel_discrepancy: rel })
    }
}

/// `dc/dt` of the truncated system written term by term.
///
/// `k` and `c_kernel` are the raw continuous kernels; each entry is formed as
/// `ε·K(εi, εj)` at the point of use. `c[i-1]` holds `c_i`, and `c_0 = 0`.
pub fn naive_rhs<K, C>(c: &[f64], eps: f64, k: K, c_kernel: C) -> Result<Vec<f64>, OracleError>
where
    K: Fn(f64, f64) -> f64,
    C: Fn(f64, f64) -> f64,
{
    let m = c.len();
    if m > MAX_NAIVE_CELLS {
        return Err(OracleError::TooLarge { m });
    }
    let conc = |i: usize| if i == 0 { 0.0 } else { c[i - 1] };
    let kk = |i: usize, j: usize| eps * k(eps * i as f64, eps * j as f64);
    let cc = |i: usize, j: usize| eps * c_kernel(eps * i as f64, eps * j as f64);

    let mut q = vec![0.0; m];
    for i in 1..=m {
        let mut ohs_gain = 0.0;
        for j in 1..i {
            ohs_gain += j as f64 * kk(i - 1, j) * conc(j);
        }
        let mut ohs_growth = 0.0;
        for j in 1..=i {
            ohs_growth += j as f64 * kk(i, j) * conc(j);
        }
        let mut ohs_merge = 0.0;
        for j in i..=m {
            ohs_merge += kk(i, j) * conc(j);
        }
        let mut inv_gain = 0.0;
        if i >= 2 {
            for j in (i - 1)..=m {
                inv_gain += j as f64 * cc(i - 1, j) * conc(j);
            }
        }
        let mut inv_growth = 0.0;
        for j in i..=m {
            inv_growth += j as f64 * cc(i, j) * conc(j);
        }
        let mut inv_merge = 0.0;
        for j in 1..=i {
            inv_merge += cc(i, j) * conc(j);
        }
        q[i - 1] = conc(i - 1) * ohs_gain - conc(i) * ohs_growth - conc(i) * ohs_merge + conc(i - 1) * inv_gain
            - conc(i) * inv_growth
            - conc(i) * inv_merge;
    }
    Ok(q)
}

/// Truncated weak-form sum `Σ_i Σ_{j≤i} [j(φ_{i+1}-φ_i) - φ_j]K_{i,j}c_ic_j
/// + Σ_i Σ_{j≥i} [j(φ_{i+1}-φ_i) - φ_j]C_{i,j}c_ic_j` as a plain double loop.
///
/// `phi[i-1]` holds `φ_i` for `i = 1..=m+1`.
pub fn naive_weak_form<K, C>(c: &[f64], eps: f64, phi: &[f64], k: K, c_kernel: C) -> Result<f64, OracleError>
where
    K: Fn(f64, f64) -> f64,
    C: Fn(f64, f64) -> f64,
{
    let m = c.len();
    if m > MAX_NAIVE_CELLS {
        return Err(OracleError::TooLarge { m });
    }
    if phi.len() != m + 1 {
        return Err(OracleError::LengthMismatch { expected: m + 1, found: phi.len() });
    }
    let mut total = 0.0;
    for i in 1..=m {
        for j in 1..=m {
            let bracket = j as f64 * (phi[i] - phi[i - 1]) - phi[j - 1];
            let (x, y) = (eps * i as f64, eps * j as f64);
            if j <= i {
                total += bracket * eps * k(x, y) * c[i - 1] * c[j - 1];
            }
            if j >= i {
                total += bracket * eps * c_kernel(x, y) * c[i - 1] * c[j - 1];
            }
        }
    }
    Ok(total)
}

/// Classical fixed-step RK4 from `t0` to `t_end`; the last step is shortened to land on `t_end`.
pub fn rk4_reference<F>(y0: &[f64], t0: f64, t_end: f64, h: f64, mut f: F) -> Result<Vec<f64>, OracleError>
where
    F: FnMut(&[f64]) -> Vec<f64>,
{
    if !(h > 0.0) {
        return Err(OracleError::BadStep { h });
    }
    let steps = ((t_end - t0) / h).ceil();
    if steps > MAX_RK4_STEPS {
        return Err(OracleError::TooManySteps { steps });
    }
    let n = steps.max(0.0) as usize;
    let mut y = y0.to_vec();
    let mut t = t0;
    let axpy = |y: &[f64], a: f64, k: &[f64]| -> Vec<f64> { y.iter().zip(k).map(|(y, k)| y + a * k).collect() };
    for s in 0..n {
        let hs = if s + 1 == n { t_end - t } else { h };
        let k1 = f(&y);
        let k2 = f(&axpy(&y, 0.5 * hs, &k1));
        let k3 = f(&axpy(&y, 0.5 * hs, &k2));
        let k4 = f(&axpy(&y, hs, &k3));
        for i in 0..y.len() {
            y[i] += hs / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t += hs;
    }
    Ok(y)
}
