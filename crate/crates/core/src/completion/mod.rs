//! Dual-graph-regularized matrix completion.

pub mod bounds;
pub mod objective;
pub mod problem;
pub mod solve;

pub use bounds::{mse_upper_bound, rmse_eval, ErrorBound};
pub use objective::{dglr_gradient, dglr_objective};
pub use problem::CompletionProblem;
pub use solve::{
    dglr_solve, dglr_solve_with, read_dense_csv, write_dense_csv, CompletionReport, ReportSummary,
};

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use nalgebra::{DMatrix, DVector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::error::Error;
    use crate::graphs::{graph_from_edges, GraphLaplacian, Shape};
    use crate::linalg::{sym_eigen, SolverOptions};
    use crate::sampling::SampleSet;

    fn path(n: usize) -> Arc<GraphLaplacian> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i, 1.0)).collect();
        Arc::new(graph_from_edges(n, &edges).unwrap())
    }

    fn random_graph(n: usize, rng: &mut ChaCha8Rng) -> Arc<GraphLaplacian> {
        let mut edges: Vec<_> = (1..n)
            .map(|i| (i - 1, i, rng.random_range(0.2..1.5)))
            .collect();
        for i in 0..n {
            for j in (i + 2)..n {
                if rng.random_bool(0.3) {
                    edges.push((i, j, rng.random_range(0.2..1.5)));
                }
            }
        }
        Arc::new(graph_from_edges(n, &edges).unwrap())
    }

    fn random_omega(shape: Shape, count: usize, rng: &mut ChaCha8Rng) -> SampleSet {
        let idx = rand::seq::index::sample(rng, shape.len(), count).into_vec();
        SampleSet::from_linear(shape, &idx).unwrap()
    }

    fn opts() -> SolverOptions {
        SolverOptions::cg_default(1000).with_tol(1e-12)
    }

    #[test]
    fn identity_system_returns_observations() {
        let shape = Shape::new(3, 2);
        let y = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let all = SampleSet::from_linear(shape, &(0..6).collect::<Vec<_>>()).unwrap();
        let p = CompletionProblem::from_dense(&y, all, path(3), path(2), 0.0, 0.0).unwrap();
        let r = dglr_solve(&p, &opts()).unwrap();
        assert!((r.x_star - y).amax() < 1e-12);
        assert!((r.lambda_min_est - 1.0).abs() < 1e-6);
    }

    #[test]
    fn constant_truth_from_one_sample() {
        let shape = Shape::new(4, 3);
        let y = DMatrix::from_element(4, 3, 3.5);
        let omega = SampleSet::from_pairs(shape, &[(2, 1)]).unwrap();
        let p = CompletionProblem::from_dense(&y, omega, path(4), path(3), 0.3, 0.7).unwrap();
        let r = dglr_solve(&p, &opts()).unwrap();
        assert!((r.x_star - y).amax() < 1e-9);
    }

    #[test]
    fn empty_sample_set_is_singular() {
        let shape = Shape::new(3, 3);
        let y = DMatrix::zeros(3, 3);
        let p =
            CompletionProblem::from_dense(&y, SampleSet::new(shape, 0), path(3), path(3), 0.1, 0.1)
                .unwrap();
        assert!(matches!(dglr_solve(&p, &opts()), Err(Error::Singular(_))));
    }

    #[test]
    fn zero_weights_need_full_sampling() {
        let shape = Shape::new(2, 2);
        let y = DMatrix::zeros(2, 2);
        let omega = SampleSet::from_linear(shape, &[0, 1]).unwrap();
        assert!(CompletionProblem::from_dense(&y, omega, path(2), path(2), 0.0, 0.1).is_err());
    }

    #[test]
    fn matches_dense_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            let shape = Shape::new(4, 3);
            let y = DMatrix::from_fn(4, 3, |_, _| rng.random_range(1.0..5.0));
            let omega = random_omega(shape, 5, &mut rng);
            let (gr, gc) = (random_graph(4, &mut rng), random_graph(3, &mut rng));
            let p = CompletionProblem::from_dense(&y, omega, gr, gc, 0.1, 0.2).unwrap();
            let q = p.operator().unwrap().materialize().unwrap();
            let b = DVector::from_vec(p.rhs());
            let dense = q.lu().solve(&b).unwrap();
            let r = dglr_solve(&p, &opts()).unwrap();
            let x = DVector::from_column_slice(r.x_star.as_slice());
            assert!((&x - &dense).norm() / dense.norm() <= 1e-8);
            let grad = dglr_gradient(&r.x_star, &p).unwrap();
            assert!(grad.norm() <= 10.0 * 1e-12 * b.norm() + 1e-12);
        }
    }

    #[test]
    fn objective_special_cases() {
        let shape = Shape::new(3, 2);
        let y = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let all = SampleSet::from_linear(shape, &(0..6).collect::<Vec<_>>()).unwrap();
        let p = CompletionProblem::from_dense(&y, all, path(3), path(2), 0.0, 0.0).unwrap();
        assert_eq!(dglr_objective(&y, &p).unwrap(), 0.0);
        assert_eq!(dglr_gradient(&y, &p).unwrap().amax(), 0.0);

        let c = DMatrix::from_element(3, 2, 2.0);
        let omega = SampleSet::from_linear(shape, &[0, 4]).unwrap();
        let p = CompletionProblem::from_dense(&c, omega, path(3), path(2), 0.4, 0.9).unwrap();
        assert!(dglr_objective(&c, &p).unwrap().abs() < 1e-15);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let shape = Shape::new(5, 4);
        let y = DMatrix::from_fn(5, 4, |_, _| rng.random_range(1.0..5.0));
        let omega = random_omega(shape, 9, &mut rng);
        let p = CompletionProblem::from_dense(
            &y,
            omega,
            random_graph(5, &mut rng),
            random_graph(4, &mut rng),
            0.3,
            0.6,
        )
        .unwrap();
        let x = DMatrix::from_fn(5, 4, |_, _| rng.random_range(-2.0..2.0));
        let g = dglr_gradient(&x, &p).unwrap();
        let h = 1e-5;
        let mut fd = DMatrix::zeros(5, 4);
        for j in 0..4 {
            for i in 0..5 {
                let mut xp = x.clone();
                xp[(i, j)] += h;
                let mut xm = x.clone();
                xm[(i, j)] -= h;
                fd[(i, j)] = (dglr_objective(&xp, &p).unwrap() - dglr_objective(&xm, &p).unwrap())
                    / (2.0 * h);
            }
        }
        assert!((&g - &fd).norm() / g.norm() <= 1e-5);
    }

    #[test]
    fn error_bound_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for _ in 0..20 {
            let shape = Shape::new(4, 4);
            let truth = DMatrix::from_fn(4, 4, |_, _| rng.random_range(1.0..5.0));
            let noise = DMatrix::from_fn(4, 4, |_, _| rng.random_range(-0.5..0.5));
            let omega = random_omega(shape, 7, &mut rng);
            let p = CompletionProblem::from_dense(
                &(&truth + &noise),
                omega,
                random_graph(4, &mut rng),
                random_graph(4, &mut rng),
                0.2,
                0.3,
            )
            .unwrap();
            let lam = sym_eigen(&p.operator().unwrap().materialize().unwrap())
                .unwrap()
                .min_value();
            let r = dglr_solve(&p, &opts()).unwrap();
            assert!((r.lambda_min_est - lam).abs() < 1e-5);
            let b = mse_upper_bound(&r.x_star, &truth, &noise, &p, lam).unwrap();
            assert!(b.actual_error <= b.bound + 1e-9);
        }
    }

    #[test]
    fn bound_collapses_for_noiseless_constant() {
        let shape = Shape::new(3, 3);
        let truth = DMatrix::from_element(3, 3, 4.0);
        let noise = DMatrix::zeros(3, 3);
        let omega = SampleSet::from_pairs(shape, &[(0, 0), (2, 1)]).unwrap();
        let p = CompletionProblem::from_dense(&truth, omega, path(3), path(3), 0.1, 0.1).unwrap();
        let mut r = dglr_solve(&p, &opts()).unwrap();
        let b = r.attach_ground_truth(&p, &truth, &noise).unwrap();
        assert!(b.rho.abs() < 1e-12);
        assert!(b.bound.abs() < 1e-9);
        assert!(b.actual_error < 1e-9);
        assert!(mse_upper_bound(&r.x_star, &truth, &noise, &p, 0.0).is_err());
    }

    #[test]
    fn report_files() {
        let dir = tempfile::tempdir().unwrap();
        let shape = Shape::new(2, 2);
        let y = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let all = SampleSet::from_linear(shape, &[0, 1, 2, 3]).unwrap();
        let p = CompletionProblem::from_dense(&y, all, path(2), path(2), 0.0, 0.0).unwrap();
        let mut r = dglr_solve(&p, &opts()).unwrap();
        r.attach_rmse(&y, &[(0, 0)]).unwrap();
        r.write_json(&dir.path().join("r.json")).unwrap();
        let s: ReportSummary =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap())
                .unwrap();
        assert_eq!(s, r.summary());
        r.write_matrix_csv(&dir.path().join("x.csv")).unwrap();
        assert_eq!(
            std::fs::read_to_string(dir.path().join("x.csv")).unwrap(),
            "1,2\n3,4\n"
        );
        assert_eq!(read_dense_csv(&dir.path().join("x.csv")).unwrap(), y);
        std::fs::write(dir.path().join("bad.csv"), "1,2\n3\n").unwrap();
        assert!(read_dense_csv(&dir.path().join("bad.csv")).is_err());
    }
}
