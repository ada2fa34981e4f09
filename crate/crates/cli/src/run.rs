//! Runs every `(method, eps, h)` cell of an experiment and fits slopes.

use std::cmp::Ordering;
use std::time::Instant;

use rayon::prelude::*;
use wkb_march::fit::{loglog_slope_with_floor, SlopeFit, ERROR_FLOOR};
use wkb_march::stepper::{solve, wave_to_u, Solution};
use wkb_march::{CoefficientModel, Complex64, Grid, MethodId, PhaseMode, PhaseModel};

use crate::config::{ErrorFrame, ExperimentConfig, Problem};
use crate::error::CliError;
use crate::problem::{self, Reference};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Study {
    Convergence,
    WorkPrecision,
    PhaseStudy,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub method: MethodId,
    pub epsilon: f64,
    pub h: f64,
    pub phase_mode: PhaseMode,
    pub n_steps: usize,
    pub max_error_u: f64,
    pub max_error_wave: f64,
    /// Median solve time over the repetitions, reference excluded.
    pub wall_time_s: f64,
    /// Median phase construction time, reported apart from the solve.
    pub phase_setup_s: f64,
    /// `max |phi~ - phi|` over the nodes, phase study only.
    pub max_phase_error: Option<f64>,
}

impl RunRecord {
    pub fn error(&self, frame: ErrorFrame) -> f64 {
        match frame {
            ErrorFrame::U => self.max_error_u,
            ErrorFrame::Wave => self.max_error_wave,
        }
    }
}

/// Log-log fit of one `(method, eps)` series against `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesFit {
    pub method: MethodId,
    pub epsilon: f64,
    pub phase_mode: PhaseMode,
    pub frame: ErrorFrame,
    pub fit: Option<SlopeFit>,
    /// Step sizes whose error fell below the floor and were left out.
    pub below_floor_h: Vec<f64>,
}

impl SeriesFit {
    pub fn slope(&self) -> Option<f64> {
        self.fit.as_ref().map(|f| f.slope)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub records: Vec<RunRecord>,
    pub fits: Vec<SeriesFit>,
}

impl Table {
    pub fn record(&self, method: MethodId, epsilon: f64, h: f64) -> Option<&RunRecord> {
        self.records.iter().find(|r| r.method == method && r.epsilon == epsilon && r.h == h)
    }

    pub fn fit(&self, method: MethodId, epsilon: f64) -> Option<&SeriesFit> {
        self.fits.iter().find(|f| f.method == method && f.epsilon == epsilon)
    }
}

struct Prepared {
    epsilon: f64,
    initial: (Complex64, Complex64),
    reference: Reference,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Sort key: method, then `eps` and `h` descending.
fn cell_order(a: (MethodId, f64, f64), b: (MethodId, f64, f64)) -> Ordering {
    a.0.cmp(&b.0).then(b.1.total_cmp(&a.1)).then(b.2.total_cmp(&a.2))
}

fn run_cell(
    cfg: &ExperimentConfig,
    model: &CoefficientModel,
    prep: &Prepared,
    method: MethodId,
    h: f64,
    study: Study,
) -> Result<RunRecord, CliError> {
    let (lo, hi) = cfg.problem.interval();
    let grid = Grid::uniform(lo, hi, h)?;
    let reps = if study == Study::WorkPrecision { cfg.repetitions } else { 1 };

    let mut setup_times = Vec::with_capacity(reps);
    let mut phase = None;
    for _ in 0..reps {
        let t = Instant::now();
        let p = PhaseModel::build(model, prep.epsilon, cfg.phase_mode, grid.nodes())?;
        setup_times.push(t.elapsed().as_secs_f64());
        phase = Some(p);
    }
    let phase = phase.expect("at least one repetition");

    let mut solve_times = Vec::with_capacity(reps);
    let mut sol: Option<Solution> = None;
    for _ in 0..reps {
        let t = Instant::now();
        let s = solve(method, &grid, prep.initial.0, prep.initial.1, &phase)?;
        solve_times.push(t.elapsed().as_secs_f64());
        sol = Some(s);
    }
    let sol = sol.expect("at least one repetition");

    let mut max_error_u: f64 = 0.0;
    let mut max_error_wave: f64 = 0.0;
    for (u, w) in sol.u.iter().zip(&sol.wave) {
        let (p, d) = prep.reference.eval(u.x)?;
        let u_ref = wave_to_u(p, d, u.x, model, prep.epsilon)?;
        max_error_u = max_error_u.max(u.dist_inf(&u_ref));
        max_error_wave = max_error_wave.max((w.v[0] - p).norm());
    }

    let max_phase_error = if study == Study::PhaseStudy && model.is_exact_phase_capable() {
        let exact = PhaseModel::exact(model, prep.epsilon)?;
        let mut worst: f64 = 0.0;
        for &x in grid.nodes() {
            worst = worst.max((phase.phi(x)? - exact.phi(x)?).abs());
        }
        Some(worst)
    } else {
        None
    };

    Ok(RunRecord {
        method,
        epsilon: prep.epsilon,
        h,
        phase_mode: cfg.phase_mode,
        n_steps: grid.n_steps(),
        max_error_u,
        max_error_wave,
        wall_time_s: median(solve_times),
        phase_setup_s: median(setup_times),
        max_phase_error,
    })
}

pub fn run(cfg: &ExperimentConfig, study: Study) -> Result<Table, CliError> {
    cfg.validate()?;
    if study == Study::PhaseStudy && cfg.phase_mode == PhaseMode::Exact {
        return Err(CliError::Config("phase-study needs phase_mode simpson or chebyshev".into()));
    }
    for (e, h) in cfg.below_floor_pairs() {
        log::warn!("eps = {e}, h = {h}: predicted error is below the double precision floor {ERROR_FLOOR:e}");
    }
    let model = problem::model(&cfg.problem)?;
    if cfg.phase_mode == PhaseMode::Exact && !model.is_exact_phase_capable() {
        return Err(CliError::Config(format!("problem {} has no closed-form phase", cfg.problem)));
    }

    let prepared: Vec<Prepared> = cfg
        .epsilons
        .par_iter()
        .map(|&epsilon| {
            Ok(Prepared {
                epsilon,
                initial: problem::initial_data(&cfg.problem, epsilon)?,
                reference: problem::reference(&cfg.problem, &model, epsilon)?,
            })
        })
        .collect::<Result<_, CliError>>()?;

    let mut cells = Vec::new();
    for &method in &cfg.methods {
        for (k, prep) in prepared.iter().enumerate() {
            for &h in &cfg.step_sizes {
                cells.push((method, prep.epsilon, h, k));
            }
        }
    }
    cells.sort_by(|a, b| cell_order((a.0, a.1, a.2), (b.0, b.1, b.2)));
    cells.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1 && a.2 == b.2);

    let results: Vec<Result<RunRecord, CliError>> =
        cells.par_iter().map(|&(m, _, h, k)| run_cell(cfg, &model, &prepared[k], m, h, study)).collect();
    let records = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let fits = fit_series(&records, cfg.error_frame);
    Ok(Table { records, fits })
}

/// One fit per `(method, eps)` over the records, which must be in cell order.
pub fn fit_series(records: &[RunRecord], frame: ErrorFrame) -> Vec<SeriesFit> {
    let mut fits = Vec::new();
    let mut start = 0;
    while start < records.len() {
        let (m, e) = (records[start].method, records[start].epsilon);
        let end = start + records[start..].iter().take_while(|r| r.method == m && r.epsilon == e).count();
        let group = &records[start..end];
        let hs: Vec<f64> = group.iter().map(|r| r.h).collect();
        let errs: Vec<f64> = group.iter().map(|r| r.error(frame)).collect();
        let below_floor_h = errs
            .iter()
            .zip(&hs)
            .filter(|(e, _)| !(**e >= ERROR_FLOOR))
            .map(|(_, &h)| h)
            .collect();
        fits.push(SeriesFit {
            method: m,
            epsilon: e,
            phase_mode: group[0].phase_mode,
            frame,
            fit: loglog_slope_with_floor(&hs, &errs, ERROR_FLOOR),
            below_floor_h,
        });
        start = end;
    }
    fits
}

pub fn run_convergence(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    run(cfg, Study::Convergence)
}

pub fn run_work_precision(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    run(cfg, Study::WorkPrecision)
}

pub fn run_phase_study(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    run(cfg, Study::PhaseStudy)
}

/// Per-node trajectory of a single solve.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeRow {
    pub x: f64,
    pub phi: Complex64,
    pub eps_dphi: Complex64,
    pub error_u: f64,
    pub error_wave: f64,
}

pub fn run_solve(problem: &Problem, method: MethodId, epsilon: f64, h: f64, mode: PhaseMode) -> Result<Vec<NodeRow>, CliError> {
    let cfg = ExperimentConfig::new(problem.clone(), &[method], &[epsilon], &[h]).with_phase_mode(mode);
    cfg.validate()?;
    let model = problem::model(problem)?;
    let (lo, hi) = problem.interval();
    let grid = Grid::uniform(lo, hi, h)?;
    let phase = PhaseModel::build(&model, epsilon, mode, grid.nodes())?;
    let (phi0, d0) = problem::initial_data(problem, epsilon)?;
    let reference = problem::reference(problem, &model, epsilon)?;
    let sol = solve(method, &grid, phi0, d0, &phase)?;
    let mut rows = Vec::with_capacity(sol.wave.len());
    for (u, w) in sol.u.iter().zip(&sol.wave) {
        let (p, d) = reference.eval(u.x)?;
        let u_ref = wave_to_u(p, d, u.x, &model, epsilon)?;
        rows.push(NodeRow {
            x: u.x,
            phi: w.v[0],
            eps_dphi: w.v[1],
            error_u: u.dist_inf(&u_ref),
            error_wave: (w.v[0] - p).norm(),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use wkb_march::BuiltinModel;

    fn airy_cfg(methods: &[MethodId], eps: &[f64], hs: &[f64]) -> ExperimentConfig {
        ExperimentConfig::new(Problem::Builtin(BuiltinModel::Airy { x_end: 2.0 }), methods, eps, hs)
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn records_sorted_and_fitted() {
        let cfg = airy_cfg(&[MethodId::Wkb3, MethodId::Wkb2], &[0.125, 0.25], &[0.125, 0.5, 0.25]);
        let t = run_convergence(&cfg).unwrap();
        assert_eq!(t.records.len(), 12);
        assert_eq!(t.fits.len(), 4);
        let keys: Vec<(MethodId, f64, f64)> = t.records.iter().map(|r| (r.method, r.epsilon, r.h)).collect();
        assert_eq!(keys[0], (MethodId::Wkb2, 0.25, 0.5));
        assert_eq!(keys[11], (MethodId::Wkb3, 0.125, 0.125));
        assert!(t.fits.iter().all(|f| f.slope().unwrap() > 1.0));
    }

    #[test]
    fn constant_problem_is_exact() {
        let cfg = ExperimentConfig::new(
            Problem::Builtin(BuiltinModel::Constant { value: 2.0, lo: 0.0, hi: 1.0 }),
            &MethodId::ALL,
            &[0.5, 0.1, 0.01],
            &[1.0, 0.3, 0.1],
        );
        let t = run_convergence(&cfg).unwrap();
        assert!(t.records.iter().all(|r| r.max_error_u <= 1e-13 && r.max_error_wave <= 1e-13));
    }

    #[test]
    fn work_precision_matches_convergence_errors() {
        let mut cfg = airy_cfg(&[MethodId::Wkb3], &[0.0625], &[0.25, 0.125]);
        let a = run_convergence(&cfg).unwrap();
        cfg.repetitions = 3;
        let b = run_work_precision(&cfg).unwrap();
        for (x, y) in a.records.iter().zip(&b.records) {
            assert_eq!(x.max_error_u.to_bits(), y.max_error_u.to_bits());
            assert_eq!(x.max_error_wave.to_bits(), y.max_error_wave.to_bits());
            assert!(y.wall_time_s > 0.0);
        }
    }

    #[test]
    fn phase_study_needs_numeric_phase() {
        let cfg = airy_cfg(&[MethodId::Wkb3], &[0.0625], &[0.25]);
        assert!(matches!(run_phase_study(&cfg), Err(CliError::Config(_))));
        let t = run_phase_study(&cfg.with_phase_mode(PhaseMode::Simpson)).unwrap();
        let e = t.records[0].max_phase_error.unwrap();
        assert!(e > 0.0 && e < 1e-3);
    }

    #[test]
    fn constant_phase_error_is_zero() {
        let cfg = ExperimentConfig::new(
            Problem::Builtin(BuiltinModel::Constant { value: 1.0, lo: 0.0, hi: 1.0 }),
            &[MethodId::Wkb3],
            &[0.1],
            &[0.25],
        );
        for mode in [PhaseMode::Simpson, PhaseMode::Chebyshev { n: 17 }] {
            let t = run_phase_study(&cfg.clone().with_phase_mode(mode)).unwrap();
            assert!(t.records[0].max_phase_error.unwrap() <= 1e-15, "{mode}");
        }
    }

    #[test]
    fn reruns_are_bit_identical() {
        let cfg = airy_cfg(&MethodId::ALL, &[0.25, 0.03125], &[0.5, 0.25, 0.0625]);
        let a = run_convergence(&cfg).unwrap();
        let b = run_convergence(&cfg).unwrap();
        for (x, y) in a.records.iter().zip(&b.records) {
            assert_eq!((x.max_error_u.to_bits(), x.max_error_wave.to_bits()), (y.max_error_u.to_bits(), y.max_error_wave.to_bits()));
        }
    }

    #[test]
    fn single_solve_trajectory() {
        let rows = run_solve(&Problem::Builtin(BuiltinModel::Exp), MethodId::Wkb3, 0.1, 0.25, PhaseMode::Exact).unwrap();
        assert_eq!(rows.len(), 5);
        assert_eq!(rows[0].phi, Complex64::new(1.0, 0.0));
        assert!(rows.iter().all(|r| r.error_u < 1e-4));
    }
}
