//! Run configuration: a TOML file, flag overrides and the defaults of the
//! published experiments.

use std::path::{Path, PathBuf};

use dca_core::integrator::{IntegratorConfig, NegativityPolicy};
use dca_core::kernel::{DeclaredBounds, DiscretizationRule, KernelFamily, KernelSpec};
use dca_core::rhs::RhsPath;
use dca_core::{ExactCase, InitialProfile};
use serde::Deserialize;

use crate::error::{CliError, Result};

pub const DEFAULT_EPSILONS: [f64; 3] = [0.05, 0.01, 0.005];
pub const DEFAULT_SNAPSHOTS: [f64; 2] = [1.0, 2.5];
pub const DEFAULT_LAMBDAS: [f64; 4] = [0.0, 0.5, 0.75, 1.0];
pub const DEFAULT_X_MAX: f64 = 10.0;
pub const DEFAULT_T_MAX: f64 = 2.5;
pub const DEFAULT_SUPPORT: f64 = 3.0;
pub const DEFAULT_OUTPUT_DIR: &str = "dca_out";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CaseName {
    Case1,
    Case2,
    Case3,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyName {
    Constant,
    Product,
    Sum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleName {
    Point,
    CellAverage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileName {
    Xexp,
    Uniform,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NegativityName {
    ClampTiny,
    Reject,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathName {
    Auto,
    Generic,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsBlock {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    #[serde(rename = "M_cal")]
    pub m_cal: Option<f64>,
    #[serde(rename = "A1")]
    pub a1: Option<f64>,
    #[serde(rename = "A2")]
    pub a2: Option<f64>,
    #[serde(rename = "K1")]
    pub k1: Option<f64>,
    #[serde(rename = "K2")]
    pub k2: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelBlock {
    #[serde(rename = "K")]
    pub k: Option<FamilyName>,
    /// Value of a constant `K`.
    #[serde(rename = "L")]
    pub l: Option<f64>,
    pub lambda: Option<f64>,
    #[serde(rename = "C")]
    pub c: Option<FamilyName>,
    /// Value of a constant `C`; defaults to `L`.
    #[serde(rename = "C_L")]
    pub c_l: Option<f64>,
    pub rule: Option<RuleName>,
    pub quad_points: Option<usize>,
    pub bounds: Option<BoundsBlock>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorBlock {
    pub rtol: Option<f64>,
    pub atol: Option<f64>,
    pub safety: Option<f64>,
    pub h_init: Option<f64>,
    pub h_max: Option<f64>,
    pub max_steps: Option<usize>,
    pub negativity: Option<NegativityName>,
    pub rhs_path: Option<PathName>,
}

/// The file as written; every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub case: Option<CaseName>,
    pub epsilon: Option<f64>,
    pub epsilon_list: Option<Vec<f64>>,
    pub x_max: Option<f64>,
    pub t_max: Option<f64>,
    pub snapshot_times: Option<Vec<f64>>,
    pub output_dir: Option<PathBuf>,
    #[serde(rename = "M")]
    pub support: Option<f64>,
    pub lambda_list: Option<Vec<f64>>,
    pub initial: Option<ProfileName>,
    pub moment_dt: Option<f64>,
    pub threads: Option<usize>,
    pub projection_panels: Option<usize>,
    pub kernel: Option<KernelBlock>,
    pub integrator: Option<IntegratorBlock>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }
}

/// Command-line values that override the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub case: Option<CaseName>,
    pub epsilon: Option<f64>,
    pub lambda: Option<f64>,
    pub output_dir: Option<PathBuf>,
    pub rtol: Option<f64>,
    pub atol: Option<f64>,
    pub threads: Option<usize>,
}

/// A validated configuration with every default filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub case: CaseName,
    /// Single cell width for `simulate`; falls back to the first ladder entry.
    pub epsilon: Option<f64>,
    pub epsilon_list: Vec<f64>,
    pub x_max: f64,
    pub t_max: f64,
    pub snapshot_times: Vec<f64>,
    pub output_dir: PathBuf,
    pub support: f64,
    /// λ fixed by `--lambda` or `kernel.lambda` for case 2.
    pub lambda: Option<f64>,
    pub lambda_list: Vec<f64>,
    pub initial: InitialProfile,
    pub moment_dt: Option<f64>,
    pub threads: Option<usize>,
    pub projection_panels: usize,
    /// Kernel pair for `custom`; named cases carry their own.
    pub custom_kernel: Option<KernelSpec>,
    pub rule: DiscretizationRule,
    pub integrator: IntegratorConfig,
    pub rhs_path: RhsPath,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::resolve(FileConfig::default(), Overrides::default()).expect("defaults are valid")
    }
}

fn check_eps(key: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(CliError::Config(format!("{key}: epsilon must lie in (0, 1), got {v}")));
    }
    Ok(())
}

fn check_positive(key: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(CliError::Config(format!("{key}: must be positive, got {v}")));
    }
    Ok(())
}

fn check_lambda(key: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(CliError::Config(format!("{key}: lambda must lie in [0, 1], got {v}")));
    }
    Ok(())
}

fn family(name: FamilyName, value: f64) -> KernelFamily {
    match name {
        FamilyName::Constant => KernelFamily::Constant(value),
        FamilyName::Product => KernelFamily::Product,
        FamilyName::Sum => KernelFamily::Sum,
    }
}

impl RunConfig {
    pub fn resolve(file: FileConfig, ov: Overrides) -> Result<Self> {
        let case = ov.case.or(file.case).unwrap_or(CaseName::Case1);
        let kernel = file.kernel.unwrap_or_default();
        let integ = file.integrator.unwrap_or_default();

        let epsilon = ov.epsilon.or(file.epsilon);
        if let Some(e) = epsilon {
            check_eps("epsilon", e)?;
        }
        let epsilon_list = file.epsilon_list.unwrap_or_else(|| DEFAULT_EPSILONS.to_vec());
        for &e in &epsilon_list {
            check_eps("epsilon_list", e)?;
        }
        if epsilon_list.windows(2).any(|w| w[1] >= w[0]) {
            return Err(CliError::Config("epsilon_list: values must be strictly decreasing".into()));
        }

        let x_max = file.x_max.unwrap_or(DEFAULT_X_MAX);
        check_positive("x_max", x_max)?;
        let t_max = file.t_max.unwrap_or(DEFAULT_T_MAX);
        check_positive("t_max", t_max)?;
        let snapshot_times = file.snapshot_times.unwrap_or_else(|| DEFAULT_SNAPSHOTS.to_vec());
        if snapshot_times.iter().any(|&t| !(0.0..=t_max).contains(&t)) {
            return Err(CliError::Config(format!("snapshot_times: every time must lie in [0, t_max = {t_max}]")));
        }
        if snapshot_times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Config("snapshot_times: values must be strictly increasing".into()));
        }
        if let Some(dt) = file.moment_dt {
            check_positive("moment_dt", dt)?;
        }

        let support = file.support.unwrap_or(DEFAULT_SUPPORT);
        check_positive("M", support)?;
        let lambda = ov.lambda.or(kernel.lambda);
        if let Some(l) = lambda {
            check_lambda("lambda", l)?;
        }
        let lambda_list = file.lambda_list.unwrap_or_else(|| DEFAULT_LAMBDAS.to_vec());
        for &l in &lambda_list {
            check_lambda("lambda_list", l)?;
        }

        let initial = match file.initial.unwrap_or(ProfileName::Xexp) {
            ProfileName::Xexp => InitialProfile::XExp,
            ProfileName::Uniform => InitialProfile::Uniform { support },
            ProfileName::Zero => InitialProfile::Zero,
        };
        if file.initial.is_some() && case != CaseName::Custom {
            return Err(CliError::Config("initial: only valid with case = \"custom\"".into()));
        }

        let rule = match kernel.rule.unwrap_or(RuleName::Point) {
            RuleName::Point => {
                if kernel.quad_points.is_some() {
                    return Err(CliError::Config("kernel.quad_points: only valid with kernel.rule = \"cell_average\"".into()));
                }
                DiscretizationRule::Point
            }
            RuleName::CellAverage => {
                let q = kernel.quad_points.unwrap_or(4);
                if q == 0 {
                    return Err(CliError::Config("kernel.quad_points: must be at least 1".into()));
                }
                DiscretizationRule::CellAverage { q }
            }
        };

        let custom_kernel = if case == CaseName::Custom {
            let l = kernel.l.unwrap_or(1.0);
            if !(l >= 0.0 && l.is_finite()) {
                return Err(CliError::Config(format!("kernel.L: must be nonnegative, got {l}")));
            }
            let k = family(kernel.k.unwrap_or(FamilyName::Constant), l);
            let mut spec = match (lambda, kernel.c) {
                (Some(_), Some(_)) => {
                    return Err(CliError::Config("kernel.C: give either kernel.lambda or kernel.C, not both".into()))
                }
                (Some(l), None) => KernelSpec::scaled(k, l).map_err(|e| CliError::Config(e.to_string()))?,
                (None, c) => {
                    let cl = kernel.c_l.unwrap_or(l);
                    if !(cl >= 0.0 && cl.is_finite()) {
                        return Err(CliError::Config(format!("kernel.C_L: must be nonnegative, got {cl}")));
                    }
                    KernelSpec::pair(k, family(c.unwrap_or(FamilyName::Constant), cl))
                }
            };
            if let Some(b) = kernel.bounds {
                spec = spec.with_bounds(DeclaredBounds {
                    alpha: b.alpha,
                    beta: b.beta,
                    m_cal: b.m_cal,
                    a1: b.a1,
                    a2: b.a2,
                    k1: b.k1,
                    k2: b.k2,
                });
            }
            Some(spec)
        } else {
            let fixed = [
                ("kernel.K", kernel.k.is_some()),
                ("kernel.L", kernel.l.is_some()),
                ("kernel.C", kernel.c.is_some()),
                ("kernel.C_L", kernel.c_l.is_some()),
                ("kernel.bounds", kernel.bounds.is_some()),
            ];
            if let Some((key, _)) = fixed.iter().find(|f| f.1) {
                return Err(CliError::Config(format!("{key}: the kernel is fixed by the named case; use case = \"custom\"")));
            }
            if kernel.lambda.is_some() && case != CaseName::Case2 {
                return Err(CliError::Config("kernel.lambda: only valid with case2 or custom".into()));
            }
            None
        };
        if ov.lambda.is_some() && !matches!(case, CaseName::Case2 | CaseName::Custom) {
            return Err(CliError::Config("--lambda: only valid with case2 or custom".into()));
        }

        let defaults = IntegratorConfig::default();
        let integrator = IntegratorConfig {
            rtol: ov.rtol.or(integ.rtol).unwrap_or(defaults.rtol),
            atol: ov.atol.or(integ.atol).unwrap_or(defaults.atol),
            safety: integ.safety.unwrap_or(defaults.safety),
            h_init: integ.h_init,
            h_max: integ.h_max,
            max_steps: integ.max_steps.unwrap_or(defaults.max_steps),
            negativity: match integ.negativity.unwrap_or(NegativityName::ClampTiny) {
                NegativityName::ClampTiny => NegativityPolicy::ClampTiny,
                NegativityName::Reject => NegativityPolicy::Reject,
            },
        };
        integrator.validate().map_err(|e| CliError::Config(format!("integrator: {e}")))?;
        let rhs_path = match integ.rhs_path.unwrap_or(PathName::Auto) {
            PathName::Auto => RhsPath::Auto,
            PathName::Generic => RhsPath::Generic,
        };

        let threads = ov.threads.or(file.threads);
        if threads == Some(0) {
            return Err(CliError::Config("threads: must be at least 1".into()));
        }
        let projection_panels = file.projection_panels.unwrap_or(dca_core::state::DEFAULT_PANELS);
        if projection_panels < 2 {
            return Err(CliError::Config("projection_panels: must be at least 2".into()));
        }

        Ok(RunConfig {
            case,
            epsilon,
            epsilon_list,
            x_max,
            t_max,
            snapshot_times,
            output_dir: ov.output_dir.or(file.output_dir).unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR)),
            support,
            lambda,
            lambda_list,
            initial,
            moment_dt: file.moment_dt,
            threads,
            projection_panels,
            custom_kernel,
            rule,
            integrator,
            rhs_path,
        })
    }

    /// The named test case for `lambda` (case 2 only), or `None` for custom runs.
    pub fn exact_case(&self, lambda: Option<f64>) -> Option<ExactCase> {
        match self.case {
            CaseName::Case1 => Some(ExactCase::Case1),
            CaseName::Case2 => Some(ExactCase::Case2 { lambda: lambda.or(self.lambda).unwrap_or(1.0) }),
            CaseName::Case3 => Some(ExactCase::Case3 { support: self.support }),
            CaseName::Custom => None,
        }
    }

    pub fn kernel_spec(&self, lambda: Option<f64>) -> Result<KernelSpec> {
        match (&self.custom_kernel, self.exact_case(lambda)) {
            (Some(spec), _) => Ok(*spec),
            (None, Some(case)) => case.kernel_spec().map_err(|e| CliError::Config(e.to_string())),
            (None, None) => Err(CliError::Config("custom case without a kernel".into())),
        }
    }

    pub fn profile(&self) -> InitialProfile {
        match self.exact_case(None) {
            Some(case) => case.initial_profile(),
            None => self.initial,
        }
    }

    /// Cell width for a single run.
    pub fn single_epsilon(&self) -> f64 {
        self.epsilon.unwrap_or(self.epsilon_list[0])
    }
}
