use std::fs;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use nalgebra::DMatrix;

use super::config::{
    DatasetSpec, ExperimentConfig, GraphSource, MethodSpec, SamplerKind, SamplerParams,
    SolverSettings,
};
use super::io::{load_features, load_ratings};
use super::metrics::{export_failures, export_metrics, sort_rows, FailureRow, MetricsRow};
use super::split::{split_dataset, DatasetSplit};
use crate::completion::{dglr_solve_with, rmse_eval, CompletionProblem};
use crate::error::{Error, Result};
use crate::graphs::{
    content_graph, knn_feature_graph, laplacian_from_weights, synthetic_netflix, Axis,
    GraphLaplacian, ProductOperator, RatingMatrix, Shape, DEFAULT_NEIGHBORS,
};
use crate::linalg::{SolverOptions, SparseSym};
use crate::sampling::{
    aopt_local_search, bandlimited_basis, gcs_sample_with, igcs_sample, random_sample,
    sidecar_path, write_meta, write_samples, GcsOptions, IgcsParams, IndexMask, SampleMeta,
    SampleSet,
};

/// Output of one sampler invocation.
#[derive(Debug, Clone)]
pub struct SamplerRun {
    pub samples: SampleSet,
    /// LOBPCG iterations per step; empty for the random sampler.
    pub iter_counts: Vec<usize>,
    pub wall_time_seconds: f64,
}

impl SamplerRun {
    pub fn total_iterations(&self) -> usize {
        self.iter_counts.iter().sum()
    }
}

/// Runs one sampler. `initial` entries count as observed and are never
/// picked; picks come from `pool`. The timer covers sampling only.
#[allow(clippy::too_many_arguments)]
pub fn run_sampler(
    kind: SamplerKind,
    params: &SamplerParams,
    row_graph: &Arc<GraphLaplacian>,
    col_graph: &Arc<GraphLaplacian>,
    initial: &IndexMask,
    pool: &IndexMask,
    k: usize,
    solver: SolverOptions,
) -> Result<SamplerRun> {
    let shape = Shape::new(row_graph.n(), col_graph.n());
    let operator = || -> Result<ProductOperator> {
        let mut op = ProductOperator::new(
            Arc::clone(row_graph),
            Arc::clone(col_graph),
            params.alpha,
            params.beta,
        )?;
        op.add_samples(&initial.iter().collect::<Vec<_>>())?;
        Ok(op)
    };
    let gcs_options = GcsOptions {
        solver,
        warm_start: params.warm_start,
        ..GcsOptions::default()
    };
    let (samples, iter_counts, elapsed) = match kind {
        SamplerKind::Gcs => {
            let op = operator()?;
            let t = Instant::now();
            let (s, state) = gcs_sample_with(op, k, Some(pool), &gcs_options)?;
            (s, state.iter_counts, t.elapsed())
        }
        SamplerKind::Igcs => {
            let p = IgcsParams {
                alpha: params.alpha,
                beta: params.beta,
                q: params.q,
                zeta: params.zeta,
                solver,
                ..IgcsParams::default()
            };
            let t = Instant::now();
            let run = igcs_sample(row_graph, col_graph, &p, k, Some(pool), Some(initial))?;
            let iters = run.iter_counts();
            (run.samples, iters, t.elapsed())
        }
        SamplerKind::Random => {
            let mut candidates = pool.clone();
            for l in initial.iter() {
                candidates.remove(l);
            }
            let t = Instant::now();
            let s = random_sample(shape, Some(&candidates), k, solver.seed)?;
            (s, Vec::new(), t.elapsed())
        }
        SamplerKind::Aopt => {
            let op = operator()?;
            let pool_size = params.pool_size.min(shape.len());
            let t = Instant::now();
            let basis = bandlimited_basis(row_graph, col_graph, params.k1, params.k2)?;
            let run = aopt_local_search(&basis, op, k, pool_size, Some(pool), &gcs_options)?;
            (run.samples, run.state.iter_counts, t.elapsed())
        }
    };
    Ok(SamplerRun {
        samples,
        iter_counts,
        wall_time_seconds: elapsed.as_secs_f64(),
    })
}

#[derive(Debug, Clone, Default)]
pub struct ExperimentResults {
    /// Sorted by `(method, seed, K)`.
    pub rows: Vec<MetricsRow>,
    pub failures: Vec<FailureRow>,
}

/// Everything a seed's cells share.
struct Prepared {
    observed: RatingMatrix,
    /// Reference values for scoring; the observed values when absent.
    truth: Option<DMatrix<f64>>,
    row_graph: Arc<GraphLaplacian>,
    col_graph: Arc<GraphLaplacian>,
    split: DatasetSplit,
}

fn read_graph(path: &Path) -> Result<GraphLaplacian> {
    laplacian_from_weights(SparseSym::read_edge_list(path)?)
}

fn prepare(cfg: &ExperimentConfig, ratings: Option<&RatingMatrix>, seed: u64) -> Result<Prepared> {
    let (observed, truth, generated) = match &cfg.dataset {
        DatasetSpec::Synthetic(params) => {
            let mut p = params.clone();
            p.seed = seed;
            let d = synthetic_netflix(&p)?;
            (d.observed, Some(d.truth), Some((d.row_graph, d.col_graph)))
        }
        DatasetSpec::Ratings { .. } => (ratings.expect("ratings are loaded").clone(), None, None),
    };
    let split = split_dataset(&observed, &cfg.split, seed)?;
    let (row, col) = match &cfg.graphs {
        GraphSource::Provided {
            row_graph,
            col_graph,
        } => {
            let pick = |file: &Option<std::path::PathBuf>,
                        fallback: Option<GraphLaplacian>,
                        what: &str| match file {
                Some(path) => read_graph(path),
                None => {
                    fallback.ok_or_else(|| Error::Config(format!("no {what} graph file given")))
                }
            };
            let (gr, gc) = generated.map_or((None, None), |(r, c)| (Some(r), Some(c)));
            (pick(row_graph, gr, "row")?, pick(col_graph, gc, "column")?)
        }
        GraphSource::G2Content { d_s, gamma } => {
            // only the initial observations feed the graphs
            let gamma_set = observed.restrict(&split.initial)?;
            (
                content_graph(&gamma_set, Axis::Rows, *d_s, *gamma)?,
                content_graph(&gamma_set, Axis::Cols, *d_s, *gamma)?,
            )
        }
        GraphSource::G1Features {
            row_features,
            col_features,
            neighbors,
        } => {
            let k = neighbors.unwrap_or(DEFAULT_NEIGHBORS);
            (
                knn_feature_graph(&load_features(row_features)?, k)?,
                knn_feature_graph(&load_features(col_features)?, k)?,
            )
        }
    };
    if row.n() != observed.rows() || col.n() != observed.cols() {
        return Err(Error::InvalidArgument(format!(
            "graphs have {} and {} nodes but the ratings are {}x{}",
            row.n(),
            col.n(),
            observed.rows(),
            observed.cols()
        )));
    }
    Ok(Prepared {
        observed,
        truth,
        row_graph: Arc::new(row),
        col_graph: Arc::new(col),
        split,
    })
}

fn sampler_options(s: &SolverSettings, seed: u64) -> SolverOptions {
    SolverOptions::sampler_default()
        .with_tol(s.sampler_tol)
        .with_max_iter(s.sampler_max_iter)
        .with_seed(seed)
}

fn cg_options(s: &SolverSettings, mn: usize, seed: u64) -> SolverOptions {
    let o = SolverOptions::cg_default(mn)
        .with_tol(s.cg_tol)
        .with_seed(seed);
    match s.cg_max_iter {
        Some(it) => o.with_max_iter(it),
        None => o,
    }
}

fn eig_options(s: &SolverSettings, seed: u64) -> SolverOptions {
    SolverOptions::lobpcg_default()
        .with_tol(s.eig_tol)
        .with_max_iter(s.eig_max_iter)
        .with_seed(seed)
}

struct CellOutput {
    row: MetricsRow,
    run: SamplerRun,
}

fn run_cell(
    cfg: &ExperimentConfig,
    prep: &Prepared,
    spec: &MethodSpec,
    seed: u64,
    k: usize,
) -> std::result::Result<CellOutput, (&'static str, Error)> {
    let params = spec.resolve(&cfg.sampler);
    let shape = prep.split.shape;
    let initial = prep.split.initial_mask();
    let run = run_sampler(
        spec.kind,
        &params,
        &prep.row_graph,
        &prep.col_graph,
        &initial,
        &prep.split.pool_mask(),
        k,
        sampler_options(&cfg.solver, seed),
    )
    .map_err(|e| ("sample", e))?;

    let complete = || -> Result<(f64, f64)> {
        let mut omega: Vec<(usize, usize)> = prep.split.initial.clone();
        omega.extend_from_slice(run.samples.pairs());
        let omega = SampleSet::from_pairs(shape, &omega)?;
        let problem = CompletionProblem::new(
            &prep.observed,
            omega,
            Arc::clone(&prep.row_graph),
            Arc::clone(&prep.col_graph),
            params.alpha,
            params.beta,
        )?;
        let report = dglr_solve_with(
            &problem,
            &cg_options(&cfg.solver, shape.len(), seed),
            &eig_options(&cfg.solver, seed),
        )?;
        let mut scored = prep.split.eval.clone();
        scored.extend(
            prep.split
                .pool
                .iter()
                .filter(|&&(i, j)| !run.samples.contains(i, j)),
        );
        let reference = match &prep.truth {
            Some(t) => t.clone(),
            None => prep.observed.to_dense_zero_filled(),
        };
        let rmse = rmse_eval(&report.x_star, &reference, &scored)?;
        Ok((rmse, report.lambda_min_est))
    };
    let (rmse, lambda_min_est) = complete().map_err(|e| ("complete", e))?;
    let row = MetricsRow {
        method: spec.label(),
        seed,
        k,
        rmse,
        lambda_min_est,
        wall_time_seconds: run.wall_time_seconds,
        lobpcg_total_iters: run.total_iterations(),
    };
    row.validate().map_err(|e| ("score", e))?;
    Ok(CellOutput { row, run })
}

fn write_cell_artifacts(
    dir: &Path,
    spec: &MethodSpec,
    params: &SamplerParams,
    out: &CellOutput,
) -> Result<()> {
    let samples_dir = dir.join("samples");
    fs::create_dir_all(&samples_dir).map_err(|e| Error::io(&samples_dir, e))?;
    let r = &out.row;
    let path = samples_dir.join(format!("{}_seed{}_K{}.csv", r.method, r.seed, r.k));
    write_samples(&path, &out.run.samples)?;
    let igcs = spec.kind == SamplerKind::Igcs;
    let meta = SampleMeta {
        method: spec.kind.name().to_string(),
        k: r.k,
        seed: r.seed,
        alpha: params.alpha,
        beta: params.beta,
        q: igcs.then_some(params.q),
        zeta: igcs.then_some(params.zeta),
        iter_counts: out.run.iter_counts.clone(),
        wall_time_seconds: out.run.wall_time_seconds,
    };
    write_meta(&sidecar_path(&path), &meta)
}

/// Runs every `(seed, method, budget)` cell. A failing cell becomes a
/// [`FailureRow`] and the others proceed. With `output_dir` set, writes
/// `metrics.csv`, `failures.csv` (when nonempty) and the sample sets.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResults> {
    cfg.validate()?;
    let ratings = match &cfg.dataset {
        DatasetSpec::Ratings { path } => Some(load_ratings(path)?),
        DatasetSpec::Synthetic(_) => None,
    };
    let methods: Vec<MethodSpec> = cfg.methods.iter().map(|m| m.spec()).collect();
    let mut results = ExperimentResults::default();
    let fail = |spec: &MethodSpec, seed: u64, k: usize, stage: &str, e: &Error| FailureRow {
        method: spec.label(),
        seed,
        k,
        stage: stage.to_string(),
        error: e.to_string(),
    };

    for &seed in &cfg.seeds {
        let prep = prepare(cfg, ratings.as_ref(), seed);
        let mn = match (&prep, &cfg.dataset) {
            (Ok(p), _) => p.split.shape.len(),
            (Err(_), DatasetSpec::Synthetic(s)) => s.m * s.n,
            (Err(_), DatasetSpec::Ratings { .. }) => {
                ratings.as_ref().map_or(0, |r| r.rows() * r.cols())
            }
        };
        let budgets = cfg.resolve_budgets(mn);
        for spec in &methods {
            for &k in &budgets {
                let prep = match &prep {
                    Ok(p) => p,
                    Err(e) => {
                        log::warn!("seed {seed}: {e}");
                        results.failures.push(fail(spec, seed, k, "prepare", e));
                        continue;
                    }
                };
                match run_cell(cfg, prep, spec, seed, k) {
                    Ok(out) => {
                        if let Some(dir) = &cfg.output_dir {
                            let params = spec.resolve(&cfg.sampler);
                            if let Err(e) = write_cell_artifacts(dir, spec, &params, &out) {
                                results.failures.push(fail(spec, seed, k, "write", &e));
                                continue;
                            }
                        }
                        log::info!(
                            "{} seed {} K {}: rmse {:.4}, {:.3}s",
                            out.row.method,
                            seed,
                            k,
                            out.row.rmse,
                            out.row.wall_time_seconds
                        );
                        results.rows.push(out.row);
                    }
                    Err((stage, e)) => {
                        log::warn!("{} seed {seed} K {k} failed at {stage}: {e}", spec.label());
                        results.failures.push(fail(spec, seed, k, stage, &e));
                    }
                }
            }
        }
    }
    sort_rows(&mut results.rows);
    results
        .failures
        .sort_by(|a, b| (&a.method, a.seed, a.k).cmp(&(&b.method, b.seed, b.k)));
    if let Some(dir) = &cfg.output_dir {
        if !results.rows.is_empty() {
            export_metrics(&results.rows, &dir.join("metrics.csv"))?;
        }
        if !results.failures.is_empty() {
            export_failures(&results.failures, &dir.join("failures.csv"))?;
        }
    }
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::config::{MethodEntry, SplitFractions};
    use crate::graphs::SyntheticParams;

    fn tiny(methods: Vec<MethodEntry>) -> ExperimentConfig {
        ExperimentConfig {
            dataset: DatasetSpec::Synthetic(SyntheticParams::new(12, 8, 2, 2)),
            graphs: GraphSource::default(),
            split: SplitFractions::default(),
            methods,
            sampler: SamplerParams::default(),
            budget_fractions: vec![],
            budgets: vec![10],
            seeds: vec![1],
            solver: SolverSettings::default(),
            output_dir: None,
        }
    }

    #[test]
    fn random_smoke_run() {
        let res = run_experiment(&tiny(vec![MethodEntry::Name(SamplerKind::Random)])).unwrap();
        assert!(res.failures.is_empty(), "{:?}", res.failures);
        assert_eq!(res.rows.len(), 1);
        assert!(res.rows[0].rmse.is_finite());
        assert_eq!(res.rows[0].lobpcg_total_iters, 0);
    }

    #[test]
    fn every_sampler_runs_and_writes_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = tiny(
            [
                SamplerKind::Gcs,
                SamplerKind::Igcs,
                SamplerKind::Random,
                SamplerKind::Aopt,
            ]
            .into_iter()
            .map(MethodEntry::Name)
            .collect(),
        );
        cfg.output_dir = Some(dir.path().to_path_buf());
        cfg.seeds = vec![0, 1];
        let res = run_experiment(&cfg).unwrap();
        assert!(res.failures.is_empty(), "{:?}", res.failures);
        assert_eq!(res.rows.len(), 8);
        let back = super::super::metrics::read_metrics(&dir.path().join("metrics.csv")).unwrap();
        assert_eq!(back, res.rows);
        let s = crate::sampling::read_samples(
            &dir.path().join("samples/gcs_seed1_K10.csv"),
            Shape::new(12, 8),
        )
        .unwrap();
        assert_eq!(s.len(), 10);
    }

    #[test]
    fn deterministic_except_wall_time() {
        let cfg = tiny(vec![
            MethodEntry::Name(SamplerKind::Gcs),
            MethodEntry::Name(SamplerKind::Igcs),
        ]);
        let strip = |mut rows: Vec<MetricsRow>| {
            rows.iter_mut().for_each(|r| r.wall_time_seconds = 0.0);
            rows
        };
        let a = strip(run_experiment(&cfg).unwrap().rows);
        let b = strip(run_experiment(&cfg).unwrap().rows);
        assert_eq!(a, b);
    }

    #[test]
    fn oversized_budget_fails_only_its_cell() {
        let mut cfg = tiny(vec![
            MethodEntry::Name(SamplerKind::Random),
            MethodEntry::Name(SamplerKind::Gcs),
        ]);
        cfg.budgets = vec![5, 500];
        let res = run_experiment(&cfg).unwrap();
        assert_eq!(res.rows.len(), 2);
        assert_eq!(res.failures.len(), 2);
        assert!(res
            .failures
            .iter()
            .all(|f| f.k == 500 && f.stage == "sample"));
    }

    #[test]
    fn degenerate_split_reports_sampler_error() {
        let mut cfg = tiny(vec![MethodEntry::Name(SamplerKind::Gcs)]);
        cfg.split = SplitFractions::new(1.0, 0.0, 0.0).unwrap();
        let res = run_experiment(&cfg).unwrap();
        assert!(res.rows.is_empty());
        assert_eq!(res.failures[0].stage, "sample");
    }

    #[test]
    fn ratings_with_content_graphs() {
        let dir = tempfile::tempdir().unwrap();
        let data = synthetic_netflix(&SyntheticParams::new(16, 12, 2, 2)).unwrap();
        let path = dir.path().join("r.csv");
        super::super::io::write_ratings(&path, &data.observed).unwrap();
        let mut cfg = tiny(vec![
            MethodEntry::Name(SamplerKind::Random),
            MethodEntry::Name(SamplerKind::Gcs),
        ]);
        cfg.dataset = DatasetSpec::Ratings { path };
        cfg.graphs = GraphSource::G2Content {
            d_s: None,
            gamma: None,
        };
        cfg.split = SplitFractions::new(0.6, 0.2, 0.2).unwrap();
        cfg.budgets = vec![12];
        let res = run_experiment(&cfg).unwrap();
        assert!(res.failures.is_empty(), "{:?}", res.failures);
        assert_eq!(res.rows.len(), 2);
    }
}
