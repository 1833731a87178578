use std::path::{Path, PathBuf};

use dca_core::analysis::{moment_diagnostics, rel_l1_error, ConvergenceTable, MomentBoundReport, DEFAULT_ERROR_PANELS};
use dca_core::kernel::{probe_hypotheses, DiscreteKernel, DiscretizationRule, HypothesisReport, KernelSpec};
use dca_core::rhs::{eval_rhs_into, mass_defect_rate, weak_form_rate, RhsPath, RhsWorkspace};
use dca_core::{simulate, DiscreteState, Grid, SimulationResult, SimulationSetup};
use dca_oracle::{naive_rhs, OracleResult};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::config::{CaseName, RunConfig};
use crate::error::{CliError, Result};
use crate::output::{self, Metadata};

/// Probe window used for every hypothesis check.
pub const PROBE_R: f64 = 2.0;
pub const PROBE_Y_MAX: f64 = 1e3;
pub const PROBE_SAMPLES: usize = 32;
/// Seed of the oracle self-test in `validate`.
pub const ORACLE_SEED: u64 = 20_240_601;
pub const ORACLE_INSTANCES: usize = 200;

pub const TAG_VERIFIED: &str = "verified";
pub const TAG_UNVERIFIED: &str = "hypotheses-unverified";

/// One finished simulation with everything written about it.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub epsilon: f64,
    pub lambda: Option<f64>,
    pub dir: PathBuf,
    pub result: SimulationResult,
    pub hypotheses: HypothesisReport,
    pub diagnostics: MomentBoundReport,
    pub meta: Metadata,
}

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("threads: {e}")))
}

/// Folder name for a parameter value, e.g. `eps_0.05`.
fn tagged(prefix: &str, v: f64) -> String {
    format!("{prefix}_{v}")
}

/// Simulate one `(ε, λ)` configuration and write its files into `dir`.
pub fn run_one(cfg: &RunConfig, epsilon: f64, lambda: Option<f64>, dir: &Path) -> Result<RunOutcome> {
    let grid = Grid::new(epsilon, cfg.x_max).map_err(|e| CliError::Config(format!("epsilon = {epsilon}: {e}")))?;
    let spec = cfg.kernel_spec(lambda)?;
    let hypotheses = probe_hypotheses(&spec, PROBE_R, PROBE_Y_MAX, PROBE_SAMPLES);

    let mut setup = SimulationSetup::new(grid, spec, cfg.profile(), cfg.t_max).with_snapshots(&cfg.snapshot_times);
    setup.rule = cfg.rule;
    setup.moment_dt = cfg.moment_dt;
    setup.integrator = cfg.integrator;
    setup.path = cfg.rhs_path;
    setup.projection_panels = cfg.projection_panels;
    let result = simulate(&setup).map_err(|e| CliError::from_core(epsilon, e))?;
    let diagnostics = moment_diagnostics(&result.moments, &spec, cfg.integrator.rtol);

    let meta = run_metadata(cfg, &setup, lambda, &result, &hypotheses, &diagnostics);
    output::ensure_dir(dir)?;
    for s in &result.snapshots {
        output::write_snapshot(dir, s, &meta)?;
    }
    output::write_moments(dir, &result.moments, &meta)?;
    output::write_run_metadata(dir, &meta)?;
    Ok(RunOutcome { epsilon, lambda, dir: dir.to_path_buf(), result, hypotheses, diagnostics, meta })
}

fn run_metadata(
    cfg: &RunConfig,
    setup: &SimulationSetup,
    lambda: Option<f64>,
    r: &SimulationResult,
    hyp: &HypothesisReport,
    diag: &MomentBoundReport,
) -> Metadata {
    let mut m = Metadata::default();
    let case = match cfg.exact_case(lambda) {
        Some(c) => c.name(),
        None => "custom",
    };
    m.push("case", case);
    if let Some(l) = setup.spec.lambda() {
        m.push("lambda", l);
    }
    m.push("epsilon", setup.grid.epsilon());
    m.push("m", setup.grid.len());
    m.push("x_max", setup.grid.x_max());
    m.push("t_max", setup.t_max);
    m.push("kernel", setup.spec.describe());
    m.push(
        "rule",
        match setup.rule {
            DiscretizationRule::Point => "point".to_string(),
            DiscretizationRule::CellAverage { q } => format!("cell_average(q={q})"),
        },
    );
    m.push("hypotheses", if hyp.all_pass() { TAG_VERIFIED } else { TAG_UNVERIFIED });
    m.push("ch1_pass", hyp.ch1_pass);
    m.push("ch2_pass", hyp.ch2_pass);
    m.push("rtol", setup.integrator.rtol);
    m.push("atol", setup.integrator.atol);
    m.push("accepted", r.stats.accepted);
    m.push("rejected", r.stats.rejected);
    m.push("rejected_negativity", r.stats.rejected_negativity);
    m.push("rhs_evals", r.stats.rhs_evals);
    m.push("clamped_mass", r.stats.clamped_mass);
    m.push("projection_dust_number", r.dust_number);
    m.push("projection_tail_number", r.tail_number);
    m.push("apriori_violations", r.apriori_violations.len());
    m.push("moment_check_passes", diag.passes());
    m.push("mass_balance_residual", diag.mass_balance_residual);
    if let Some(ts) = diag.riccati_blowup_time {
        m.push("riccati_blowup_time", ts);
    }
    m
}

/// `simulate`: one run, or one per λ for case 2 without a fixed λ.
pub fn cmd_simulate(cfg: &RunConfig) -> Result<Vec<RunOutcome>> {
    let eps = cfg.single_epsilon();
    if cfg.case == CaseName::Case2 && cfg.lambda.is_none() {
        let pool = pool(cfg.threads)?;
        let runs: Vec<Result<RunOutcome>> = pool.install(|| {
            cfg.lambda_list
                .par_iter()
                .map(|&l| run_one(cfg, eps, Some(l), &cfg.output_dir.join(tagged("lambda", l))))
                .collect()
        });
        return runs.into_iter().collect();
    }
    Ok(vec![run_one(cfg, eps, cfg.lambda, &cfg.output_dir)?])
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub tables: Vec<ConvergenceTable>,
    pub runs: Vec<RunOutcome>,
    /// `(ε, message)` for runs that did not finish.
    pub failures: Vec<(f64, String)>,
}

/// `sweep`: one run per ε, relative L1 errors at every snapshot time.
pub fn cmd_sweep(cfg: &RunConfig) -> Result<SweepReport> {
    if cfg.epsilon_list.len() < 2 {
        return Err(CliError::Config("epsilon_list: a sweep needs at least 2 values".into()));
    }
    let case = cfg
        .exact_case(cfg.lambda)
        .filter(|c| c.has_closed_form())
        .ok_or_else(|| CliError::Config("case: a sweep needs a closed-form case (case1, case3 or case2 with lambda = 1)".into()))?;
    output::ensure_dir(&cfg.output_dir)?;

    let pool = pool(cfg.threads)?;
    let results: Vec<Result<RunOutcome>> = pool.install(|| {
        cfg.epsilon_list
            .par_iter()
            .map(|&e| run_one(cfg, e, cfg.lambda, &cfg.output_dir.join(tagged("eps", e))))
            .collect()
    });

    let mut runs = Vec::new();
    let mut failures = Vec::new();
    let mut tables: Vec<ConvergenceTable> = cfg.snapshot_times.iter().map(|&t| ConvergenceTable::new(t)).collect();
    for (&eps, res) in cfg.epsilon_list.iter().zip(results) {
        match res {
            Ok(run) => {
                for (table, snap) in tables.iter_mut().zip(&run.result.snapshots) {
                    let e1 = rel_l1_error(&snap.reconstruct(), &case, snap.t, DEFAULT_ERROR_PANELS)
                        .map(|r| r.e1)
                        .unwrap_or(f64::NAN);
                    table.push(eps, e1);
                }
                runs.push(run);
            }
            Err(e @ CliError::Io { .. }) => return Err(e),
            Err(e) => {
                for table in tables.iter_mut() {
                    table.push(eps, f64::NAN);
                }
                failures.push((eps, e.to_string()));
            }
        }
    }

    let mut meta = Metadata::default();
    meta.push("case", case.name());
    if let Some(l) = cfg.kernel_spec(cfg.lambda)?.lambda() {
        meta.push("lambda", l);
    }
    meta.push("x_max", cfg.x_max);
    meta.push("rtol", cfg.integrator.rtol);
    meta.push("atol", cfg.integrator.atol);
    for t in &cfg.snapshot_times {
        if let Some(v) = case.number_beyond(*t, cfg.x_max) {
            meta.push(&format!("exact_l1_beyond_x_max_t{t}"), v);
        }
    }
    for (eps, msg) in &failures {
        meta.push("failed", format!("epsilon {eps}: {msg}"));
    }
    for t in &tables {
        output::write_convergence(&cfg.output_dir, t, &meta)?;
    }
    output::write_error_history(&cfg.output_dir, &tables, &meta)?;
    Ok(SweepReport { tables, runs, failures })
}

#[derive(Debug, Clone)]
pub struct ValidateReport {
    pub hypotheses: HypothesisReport,
    /// `(passed, description)` per property.
    pub checks: Vec<(bool, String)>,
    pub oracle_worst: f64,
    pub defect_worst: f64,
}

impl ValidateReport {
    /// Oracle and identity checks passed; hypothesis probes are informational.
    pub fn oracle_ok(&self) -> bool {
        self.checks.iter().filter(|c| !c.1.starts_with("hypothesis")).all(|c| c.0)
    }
}

/// `validate`: hypothesis probes plus a seeded small-system oracle comparison.
pub fn cmd_validate(cfg: &RunConfig) -> Result<ValidateReport> {
    let spec = cfg.kernel_spec(cfg.lambda)?;
    let h = probe_hypotheses(&spec, PROBE_R, PROBE_Y_MAX, PROBE_SAMPLES);
    let mut checks = vec![
        (h.symmetric_k, "hypothesis: K symmetric".to_string()),
        (h.symmetric_c, "hypothesis: C symmetric".to_string()),
        (h.nonneg_k, "hypothesis: K nonnegative".to_string()),
        (h.nonneg_c, "hypothesis: C nonnegative".to_string()),
        (
            h.ch1_pass,
            format!(
                "hypothesis: CH1 sup K(x,y)/y decays (R = {}, y up to {}, first {:.3e}, last {:.3e})",
                h.r,
                h.y_probe_max,
                h.ch1_profile[0].1,
                h.ch1_profile.last().map_or(0.0, |p| p.1)
            ),
        ),
        (
            h.ch2_pass,
            format!(
                "hypothesis: CH2 sup C = {:.3e} <= M_cal = {:.3e} ({})",
                h.ch2_sup,
                h.m_cal,
                if h.m_cal_declared { "declared" } else { "inferred" }
            ),
        ),
    ];
    if let Some(p) = h.alpha_pass {
        checks.push((p, "hypothesis: dK/dx >= -alpha".to_string()));
    }
    if let Some(p) = h.beta_pass {
        checks.push((p, "hypothesis: dC/dx >= -beta".to_string()));
    }

    let (oracle_worst, defect_worst, phi_worst) = oracle_self_test(&spec)?;
    checks.push((
        oracle_worst <= 1e-13,
        format!("oracle: rhs vs naive transcription, {ORACLE_INSTANCES} instances (seed {ORACLE_SEED}), worst rel {oracle_worst:.2e} <= 1e-13"),
    ));
    checks.push((defect_worst <= 1e-12, format!("oracle: sum i*Q_i = mass defect, worst {defect_worst:.2e} <= 1e-12")));
    checks.push((phi_worst <= 1e-14, format!("oracle: weak form with phi_i = i vanishes, worst {phi_worst:.2e} <= 1e-14")));
    Ok(ValidateReport { hypotheses: h, checks, oracle_worst, defect_worst })
}

fn oracle_self_test(spec: &KernelSpec) -> Result<(f64, f64, f64)> {
    let mut rng = StdRng::seed_from_u64(ORACLE_SEED);
    let (mut worst, mut defect, mut phi_worst) = (0.0f64, 0.0f64, 0.0f64);
    let to_cfg = |e: dca_core::Error| CliError::Config(e.to_string());
    for _ in 0..ORACLE_INSTANCES {
        let m = rng.gen_range(2..=32);
        let eps = rng.gen_range(0.01..0.3);
        let g = Grid::with_cells(eps, m).map_err(to_cfg)?;
        let dk = DiscreteKernel::new(spec, g, DiscretizationRule::Point).map_err(to_cfg)?;
        let c: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..2.0)).collect();
        let reference = naive_rhs(&c, eps, |x, y| spec.eval_k(x, y).unwrap_or(f64::NAN), |x, y| spec.eval_c(x, y).unwrap_or(f64::NAN))
            .map_err(|e| CliError::Validation(e.to_string()))?;
        let mut ws = RhsWorkspace::new(m);
        for path in [RhsPath::Auto, RhsPath::Generic] {
            eval_rhs_into(&c, &dk, path, &mut ws).map_err(to_cfg)?;
            let r = OracleResult::compare(reference.clone(), ws.q.clone()).map_err(|e| CliError::Validation(e.to_string()))?;
            worst = worst.max(r.rel_discrepancy);
        }
        let s = DiscreteState::from_values(g, c, 0.0).map_err(to_cfg)?;
        let iq: f64 = ws.q.iter().enumerate().map(|(k, q)| (k + 1) as f64 * q).sum();
        let d = mass_defect_rate(&s, &dk).map_err(to_cfg)?;
        defect = defect.max((iq - d).abs() / (1.0 + iq.abs()));
        let phi: Vec<f64> = (1..=m + 1).map(|i| i as f64).collect();
        let w = weak_form_rate(&s, &dk, &phi).map_err(to_cfg)?;
        let quad: f64 = s.c.iter().sum::<f64>().powi(2) * eps * (m * m) as f64;
        phi_worst = phi_worst.max(w.abs() / (1.0 + quad));
    }
    Ok((worst, defect, phi_worst))
}
