//! Test cases with closed-form references.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::kernel::{KernelFamily, KernelSpec};
use crate::state::InitialProfile;

/// Which one-sided limit to take at a jump.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// The value at `x` itself.
    At,
    /// Limit from the left.
    Left,
    /// Limit from the right.
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExactCase {
    /// `K = C ≡ 1`, `f(0,x) = x·e^{-x}`.
    Case1,
    /// `K ≡ 1`, `C = λK`, `f(0,x) = x·e^{-x}`.
    Case2 { lambda: f64 },
    /// `K ≡ 1`, `C ≡ 0`, `f(0,x) = (2/M)·1_{[0,M]}(x)`.
    Case3 { support: f64 },
}

impl ExactCase {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ExactCase::Case2 { lambda } if !(0.0..=1.0).contains(&lambda) => {
                Err(Error::InvalidArgument { name: "lambda", value: lambda })
            }
            ExactCase::Case3 { support } if !(support > 0.0 && support.is_finite()) => {
                Err(Error::InvalidArgument { name: "M", value: support })
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExactCase::Case1 => "case1",
            ExactCase::Case2 { .. } => "case2",
            ExactCase::Case3 { .. } => "case3",
        }
    }

    pub fn initial_profile(&self) -> InitialProfile {
        match *self {
            ExactCase::Case1 | ExactCase::Case2 { .. } => InitialProfile::XExp,
            ExactCase::Case3 { support } => InitialProfile::Uniform { support },
        }
    }

    pub fn kernel_spec(&self) -> Result<KernelSpec> {
        Ok(match *self {
            ExactCase::Case1 => KernelSpec::pair(KernelFamily::Constant(1.0), KernelFamily::Constant(1.0)),
            ExactCase::Case2 { lambda } => KernelSpec::scaled(KernelFamily::Constant(1.0), lambda)?,
            ExactCase::Case3 { .. } => KernelSpec::pair(KernelFamily::Constant(1.0), KernelFamily::Constant(0.0)),
        })
    }

    /// Whether [`ExactCase::exact_solution`] returns values for this case.
    pub fn has_closed_form(&self) -> bool {
        match *self {
            ExactCase::Case2 { lambda } => lambda == 1.0,
            _ => true,
        }
    }

    /// The published closed form at `(t, x)`, or `None` without one.
    ///
    /// Case 1 is `(x - t)·e^{-x+t}/(1+t)` for `x > t`, extended by zero.
    /// Case 3 is `2/(M(1+t)²)·1_{[0,M]}(x/(1+t))`. Case 2 delegates to case 1
    /// at `λ = 1` and has no closed form otherwise.
    pub fn exact_solution(&self, t: f64, x: f64) -> Option<f64> {
        self.eval_side(t, x, Side::At)
    }

    /// Like [`ExactCase::exact_solution`], with the requested one-sided limit at jumps.
    pub fn eval_side(&self, t: f64, x: f64, side: Side) -> Option<f64> {
        match *self {
            ExactCase::Case1 => Some(if x > t { (x - t) * libm::exp(t - x) / (1.0 + t) } else { 0.0 }),
            ExactCase::Case2 { lambda } if lambda == 1.0 => ExactCase::Case1.eval_side(t, x, side),
            ExactCase::Case2 { .. } => None,
            ExactCase::Case3 { support } => {
                let edge = support * (1.0 + t);
                let inside = match side {
                    Side::At => x / (1.0 + t) <= support,
                    Side::Left => x <= edge,
                    Side::Right => x < edge,
                };
                Some(if x >= 0.0 && inside { 2.0 / (support * (1.0 + t) * (1.0 + t)) } else { 0.0 })
            }
        }
    }

    /// Points in `x` where the closed form jumps or kinks at time `t`.
    pub fn breakpoints(&self, t: f64) -> Vec<f64> {
        match *self {
            ExactCase::Case1 | ExactCase::Case2 { .. } => vec![t],
            ExactCase::Case3 { support } => vec![support * (1.0 + t)],
        }
    }

    pub fn require_closed_form(&self) -> Result<()> {
        if self.has_closed_form() {
            Ok(())
        } else {
            Err(Error::NoClosedForm)
        }
    }

    /// `∫_x^∞ f(t, y) dy` of the closed form; the part a grid ending at `x` cannot hold.
    pub fn number_beyond(&self, t: f64, x: f64) -> Option<f64> {
        if !self.has_closed_form() {
            return None;
        }
        Some(match *self {
            ExactCase::Case1 | ExactCase::Case2 { .. } => {
                let u = (x - t).max(0.0);
                (u + 1.0) * libm::exp(-u) / (1.0 + t)
            }
            ExactCase::Case3 { support } => {
                let end = support * (1.0 + t);
                (end - x.max(0.0)).max(0.0) * 2.0 / (support * (1.0 + t) * (1.0 + t))
            }
        })
    }
}

/// Solution of the continuous equation for `K = C ≡ L` from a named profile.
///
/// Both kernels constant makes the growth velocity `L·M₁` and the loss rate
/// `L·M₀(t)`, so the profile is transported rigidly and damped:
/// `f(t,x) = f⁰(x - L·M₁·t)/(1 + L·M₀(0)·t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantPairSolution {
    pub profile: InitialProfile,
    pub rate: f64,
}

impl ConstantPairSolution {
    pub fn new(profile: InitialProfile, rate: f64) -> Result<Self> {
        if !(rate >= 0.0 && rate.is_finite()) {
            return Err(Error::InvalidArgument { name: "L", value: rate });
        }
        Ok(ConstantPairSolution { profile, rate })
    }

    fn shift(&self, t: f64) -> f64 {
        self.rate * self.profile.mass() * t
    }

    pub fn eval(&self, t: f64, x: f64) -> f64 {
        self.eval_side(t, x, Side::At)
    }

    pub fn eval_side(&self, t: f64, x: f64, side: Side) -> f64 {
        let u = x - self.shift(t);
        let v = match self.profile {
            InitialProfile::Uniform { support } => {
                let inside = match side {
                    Side::At => (0.0..=support).contains(&u),
                    Side::Left => u > 0.0 && u <= support,
                    Side::Right => u >= 0.0 && u < support,
                };
                if inside {
                    2.0 / support
                } else {
                    0.0
                }
            }
            _ if u < 0.0 => 0.0,
            _ => self.profile.density(u),
        };
        v / (1.0 + self.rate * self.profile.number() * t)
    }

    pub fn breakpoints(&self, t: f64) -> Vec<f64> {
        let s = self.shift(t);
        match self.profile {
            InitialProfile::Uniform { support } => vec![s, s + support],
            _ => vec![s],
        }
    }
}
