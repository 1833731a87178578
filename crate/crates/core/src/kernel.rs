//! Aggregation kernels `K` and inverse-aggregation kernels `C`.
//!
//! The registry is closed: constants, the product `xy` and the sum `x + y`.
//! `C` is either an independent family or `λ·K` with `λ ∈ [0, 1]`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::{check_size, Grid};
use crate::quad::gauss_legendre;

/// Closed-form kernel families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelFamily {
    /// `K(x, y) = L`.
    Constant(f64),
    /// `K(x, y) = x·y`.
    Product,
    /// `K(x, y) = x + y`.
    Sum,
}

impl KernelFamily {
    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match *self {
            KernelFamily::Constant(l) => l,
            KernelFamily::Product => x * y,
            KernelFamily::Sum => x + y,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelFamily::Constant(_) => "constant",
            KernelFamily::Product => "product",
            KernelFamily::Sum => "sum",
        }
    }

    fn constant_value(&self) -> Option<f64> {
        match *self {
            KernelFamily::Constant(l) => Some(l),
            _ => None,
        }
    }
}

/// How `C` is built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InverseKernel {
    /// `C = λ·K`.
    Scaled(f64),
    Independent(KernelFamily),
}

/// Optional analytic constants attached to a kernel pair.
///
/// All constants refer to the continuous kernels: `∂ₓK ≥ -α`, `∂ₓC ≥ -β`,
/// `sup C ≤ 𝓜` for large second argument, `K ≤ A₁xy`, `C ≤ A₂xy`,
/// `K ≥ K₁xy`, `C ≥ K₂xy`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DeclaredBounds {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub m_cal: Option<f64>,
    pub a1: Option<f64>,
    pub a2: Option<f64>,
    pub k1: Option<f64>,
    pub k2: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub k: KernelFamily,
    pub c: InverseKernel,
    pub bounds: DeclaredBounds,
}

impl KernelSpec {
    /// Independent `K` and `C`.
    pub fn pair(k: KernelFamily, c: KernelFamily) -> Self {
        KernelSpec { k, c: InverseKernel::Independent(c), bounds: DeclaredBounds::default() }
    }

    /// `C = λ·K`.
    pub fn scaled(k: KernelFamily, lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidArgument { name: "lambda", value: lambda });
        }
        Ok(KernelSpec { k, c: InverseKernel::Scaled(lambda), bounds: DeclaredBounds::default() })
    }

    pub fn with_bounds(mut self, bounds: DeclaredBounds) -> Self {
        self.bounds = bounds;
        self
    }

    pub fn lambda(&self) -> Option<f64> {
        match self.c {
            InverseKernel::Scaled(l) => Some(l),
            InverseKernel::Independent(_) => None,
        }
    }

    pub fn eval_k(&self, x: f64, y: f64) -> Result<f64> {
        check_size(x)?;
        check_size(y)?;
        Ok(self.k.eval(x, y))
    }

    pub fn eval_c(&self, x: f64, y: f64) -> Result<f64> {
        check_size(x)?;
        check_size(y)?;
        Ok(self.c_unchecked(x, y))
    }

    #[inline]
    fn c_unchecked(&self, x: f64, y: f64) -> f64 {
        match self.c {
            InverseKernel::Scaled(l) => l * self.k.eval(x, y),
            InverseKernel::Independent(fam) => fam.eval(x, y),
        }
    }

    /// `(K, C)` values when both kernels are constant.
    pub fn constant_values(&self) -> Option<(f64, f64)> {
        let k = self.k.constant_value()?;
        let c = match self.c {
            InverseKernel::Scaled(l) => l * k,
            InverseKernel::Independent(fam) => fam.constant_value()?,
        };
        Some((k, c))
    }

    /// Short human-readable description used in output metadata.
    pub fn describe(&self) -> alloc::string::String {
        use core::fmt::Write;
        let mut s = alloc::string::String::new();
        let _ = write!(s, "K={}", self.k.name());
        if let KernelFamily::Constant(l) = self.k {
            let _ = write!(s, "({l})");
        }
        match self.c {
            InverseKernel::Scaled(l) => {
                let _ = write!(s, ";C=lambda*K;lambda={l}");
            }
            InverseKernel::Independent(fam) => {
                let _ = write!(s, ";C={}", fam.name());
                if let KernelFamily::Constant(l) = fam {
                    let _ = write!(s, "({l})");
                }
            }
        }
        s
    }
}

/// Which definition of the discrete kernels to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiscretizationRule {
    /// `K^ε_{i,j} = ε·K(εi, εj)`.
    #[default]
    Point,
    /// `K^ε_{i,j} = (1/ε)·∫∫_{Λᵢ×Λⱼ} K`, by a q×q Gauss-Legendre rule.
    CellAverage { q: usize },
}

/// Discrete kernel matrices `K^ε_{i,j}` and `C^ε_{i,j}` on a grid.
///
/// Entries already carry the factor ε, so the right-hand side applies none.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteKernel {
    grid: Grid,
    kd: Vec<f64>,
    cd: Vec<f64>,
    rule: DiscretizationRule,
    constant: Option<(f64, f64)>,
}

impl DiscreteKernel {
    pub fn new(spec: &KernelSpec, grid: Grid, rule: DiscretizationRule) -> Result<Self> {
        let m = grid.len();
        let eps = grid.epsilon();
        let mut kd = vec![0.0; m * m];
        let mut cd = vec![0.0; m * m];

        let quad = match rule {
            DiscretizationRule::Point => None,
            DiscretizationRule::CellAverage { q } => Some(gauss_legendre(q)),
        };
        let entry = |f: &dyn Fn(f64, f64) -> f64, i: usize, j: usize| -> f64 {
            match &quad {
                None => eps * f(eps * i as f64, eps * j as f64),
                Some((nodes, weights)) => {
                    let (xc, yc) = (eps * i as f64, eps * j as f64);
                    let half = 0.5 * eps;
                    let mut acc = 0.0;
                    for (xn, xw) in nodes.iter().zip(weights) {
                        for (yn, yw) in nodes.iter().zip(weights) {
                            acc += xw * yw * f(xc + half * xn, yc + half * yn);
                        }
                    }
                    // (1/ε)·(ε/2)²·Σ
                    acc * 0.25 * eps
                }
            }
        };

        let kfun = |x: f64, y: f64| spec.k.eval(x, y);
        for i in 1..=m {
            for j in i..=m {
                let v = entry(&kfun, i, j);
                if !v.is_finite() {
                    return Err(Error::NonFinite { what: "kernel K" });
                }
                kd[(i - 1) * m + (j - 1)] = v;
                kd[(j - 1) * m + (i - 1)] = v;
            }
        }
        match spec.c {
            InverseKernel::Scaled(lambda) => {
                for (c, k) in cd.iter_mut().zip(&kd) {
                    *c = lambda * k;
                }
            }
            InverseKernel::Independent(fam) => {
                let cfun = |x: f64, y: f64| fam.eval(x, y);
                for i in 1..=m {
                    for j in i..=m {
                        let v = entry(&cfun, i, j);
                        if !v.is_finite() {
                            return Err(Error::NonFinite { what: "kernel C" });
                        }
                        cd[(i - 1) * m + (j - 1)] = v;
                        cd[(j - 1) * m + (i - 1)] = v;
                    }
                }
            }
        }

        let constant = spec.constant_values().map(|_| (kd[0], cd[0]));
        Ok(DiscreteKernel { grid, kd, cd, rule, constant })
    }

    #[inline]
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    #[inline]
    pub fn rule(&self) -> DiscretizationRule {
        self.rule
    }

    /// `K^ε_{i,j}` with 1-based indices.
    #[inline]
    pub fn k(&self, i: usize, j: usize) -> f64 {
        self.kd[(i - 1) * self.grid.len() + (j - 1)]
    }

    /// `C^ε_{i,j}` with 1-based indices.
    #[inline]
    pub fn c(&self, i: usize, j: usize) -> f64 {
        self.cd[(i - 1) * self.grid.len() + (j - 1)]
    }

    /// Row `i` (1-based) of `K^ε`.
    #[inline]
    pub fn k_row(&self, i: usize) -> &[f64] {
        let m = self.grid.len();
        &self.kd[(i - 1) * m..i * m]
    }

    /// Row `i` (1-based) of `C^ε`.
    #[inline]
    pub fn c_row(&self, i: usize) -> &[f64] {
        let m = self.grid.len();
        &self.cd[(i - 1) * m..i * m]
    }

    /// `(K^ε, C^ε)` when both kernels are constant; enables the O(m) path.
    #[inline]
    pub fn constant_entries(&self) -> Option<(f64, f64)> {
        self.constant
    }
}

/// Outcome of numerically probing the growth hypotheses.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub r: f64,
    pub y_probe_max: f64,
    pub samples: usize,
    pub symmetric_k: bool,
    pub symmetric_c: bool,
    pub nonneg_k: bool,
    pub nonneg_c: bool,
    /// `(y, υ_R(y))` with `υ_R(y) = sup_{x∈[0,R]} K(x,y)/y`, increasing `y ≥ R`.
    pub ch1_profile: Vec<(f64, f64)>,
    /// Sampled sup of `C` over `[0,R]×[R, y_probe_max]`.
    pub ch2_sup: f64,
    /// Bound the sup was compared against.
    pub m_cal: f64,
    /// Whether `m_cal` came from the declared bounds.
    pub m_cal_declared: bool,
    pub ch1_pass: bool,
    pub ch2_pass: bool,
    /// Finite-difference check of `∂ₓK ≥ -α`, when α is declared.
    pub alpha_pass: Option<bool>,
    /// Finite-difference check of `∂ₓC ≥ -β`, when β is declared.
    pub beta_pass: Option<bool>,
}

impl HypothesisReport {
    pub fn all_pass(&self) -> bool {
        self.symmetric_k
            && self.symmetric_c
            && self.nonneg_k
            && self.nonneg_c
            && self.ch1_pass
            && self.ch2_pass
            && self.alpha_pass.unwrap_or(true)
            && self.beta_pass.unwrap_or(true)
    }
}

/// Sample the kernel pair and check symmetry, sign and the growth hypotheses.
///
/// `ch1_pass` requires the last sampled `υ_R` to fall below a tenth of the
/// first. For `ch2`, an undeclared `𝓜` is inferred as 1.1× the sup over the
/// inner window `[0,R]×[R, √(R·y_max)]` (at least 1), so kernels that keep
/// growing in `y` fail.
pub fn probe_hypotheses(spec: &KernelSpec, r: f64, y_probe_max: f64, samples: usize) -> HypothesisReport {
    let r = r.max(1.0);
    let y_probe_max = if y_probe_max > r { y_probe_max } else { 10.0 * r };
    let samples = samples.max(8);

    let lin = |a: f64, b: f64, k: usize| a + (b - a) * k as f64 / (samples - 1) as f64;
    let geo = |a: f64, b: f64, k: usize| a * libm::pow(b / a, k as f64 / (samples - 1) as f64);

    let (mut symmetric_k, mut symmetric_c, mut nonneg_k, mut nonneg_c) = (true, true, true, true);
    for a in 0..samples {
        for b in 0..samples {
            let x = geo(1e-3, y_probe_max, a);
            let y = geo(1e-3, y_probe_max, b);
            let (kxy, kyx) = (spec.k.eval(x, y), spec.k.eval(y, x));
            let (cxy, cyx) = (spec.c_unchecked(x, y), spec.c_unchecked(y, x));
            symmetric_k &= kxy == kyx;
            symmetric_c &= cxy == cyx;
            nonneg_k &= kxy >= 0.0;
            nonneg_c &= cxy >= 0.0;
        }
    }

    let ch1_profile: Vec<(f64, f64)> = (0..samples)
        .map(|b| {
            let y = geo(r, y_probe_max, b);
            let sup = (0..samples)
                .map(|a| spec.k.eval(lin(0.0, r, a), y) / y)
                .fold(0.0f64, f64::max);
            (y, sup)
        })
        .collect();
    let first = ch1_profile[0].1;
    let last = ch1_profile[samples - 1].1;
    let ch1_pass = last < 0.1 * first || (first == 0.0 && last == 0.0);

    let sup_c = |y_hi: f64| {
        let mut sup = 0.0f64;
        for a in 0..samples {
            for b in 0..samples {
                sup = sup.max(spec.c_unchecked(lin(0.0, r, a), geo(r, y_hi, b)));
            }
        }
        sup
    };
    let ch2_sup = sup_c(y_probe_max);
    let (m_cal, m_cal_declared) = match spec.bounds.m_cal {
        Some(m) => (m, true),
        None => ((1.1 * sup_c(libm::sqrt(r * y_probe_max))).max(1.0), false),
    };
    let ch2_pass = ch2_sup <= m_cal;

    let h = 1e-6;
    let derivative_ok = |f: &dyn Fn(f64, f64) -> f64, bound: f64| {
        (0..samples).all(|a| {
            (0..samples).all(|b| {
                let x = lin(0.0, y_probe_max, a);
                let y = lin(0.0, y_probe_max, b);
                (f(x + h, y) - f(x, y)) / h >= -bound - 1e-6 * (1.0 + bound)
            })
        })
    };
    let alpha_pass = spec.bounds.alpha.map(|alpha| derivative_ok(&|x, y| spec.k.eval(x, y), alpha));
    let beta_pass = spec.bounds.beta.map(|beta| derivative_ok(&|x, y| spec.c_unchecked(x, y), beta));

    HypothesisReport {
        r,
        y_probe_max,
        samples,
        symmetric_k,
        symmetric_c,
        nonneg_k,
        nonneg_c,
        ch1_profile,
        ch2_sup,
        m_cal,
        m_cal_declared,
        ch1_pass,
        ch2_pass,
        alpha_pass,
        beta_pass,
    }
}
