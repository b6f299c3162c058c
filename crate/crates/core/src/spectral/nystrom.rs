//! Nyström discretisation of `T_n` on Gauss–Legendre nodes.
//!
//! The matrix `W^{1/2} K W^{1/2}` (with `K_ij = G(t_i, t_j)` and `W` the
//! weight diagonal) is similar to the plain Nyström matrix `K W` and
//! symmetric, so a symmetric eigensolver applies.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

use super::kernel::{GreenKernel, KernelEvaluator, DEFAULT_MAX_KERNEL_N};
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

pub const DEFAULT_PRECISION_BITS: u32 = 256;
pub const DEFAULT_MAX_ORDER: usize = 1024;
pub const DEFAULT_REL_TOL: f64 = 1e-8;
/// Largest matrix handed to the dense eigensolver; bigger ones use
/// subspace iteration.
pub const DENSE_EIGEN_LIMIT: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralEstimate {
    pub n: u64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub quad_order: usize,
    /// Relative change of `lambda1` over the last doubling of the order.
    pub residual_estimate: f64,
}

impl SpectralEstimate {
    /// `sqrt(2) (2n)! lambda_1`, which tends to 1.
    pub fn stirling_ratio(&self) -> f64 {
        self.lambda1 / crate::exact_bounds::stirling_asymptote(self.n)
    }

    /// `n lambda_2 / lambda_1`.
    pub fn rank1_ratio(&self) -> f64 {
        self.n as f64 * self.lambda2 / self.lambda1
    }
}

#[derive(Clone, Copy, Debug)]
pub struct NystromConfig {
    /// Starting order; `None` picks `max(64, 8n)`.
    pub quad_order: Option<usize>,
    pub max_order: usize,
    pub rel_tol: f64,
    pub precision_bits: u32,
    pub max_n: u64,
}

impl Default for NystromConfig {
    fn default() -> Self {
        Self {
            quad_order: None,
            max_order: DEFAULT_MAX_ORDER,
            rel_tol: DEFAULT_REL_TOL,
            precision_bits: DEFAULT_PRECISION_BITS,
            max_n: DEFAULT_MAX_KERNEL_N,
        }
    }
}

pub fn default_order(n: u64) -> usize {
    64usize.max(8 * n as usize)
}

/// One discretisation at a fixed order.
#[derive(Clone, Debug)]
pub struct NystromSolution {
    pub n: u64,
    pub order: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Leading eigenvalues of `T_n`, descending.
    pub eigenvalues: Vec<f64>,
    /// Leading eigenfunction sampled at the nodes, unit `L^2` norm under
    /// the quadrature, sign chosen so the sum is positive.
    pub leading_eigenfunction: Vec<f64>,
}

/// `(2n)! G(t_i, t_j)` on the given nodes, row-major.
pub fn scaled_kernel_matrix(evaluator: &KernelEvaluator, nodes: &[f64]) -> Vec<f64> {
    let size = nodes.len();
    let fixed: Vec<_> = nodes.iter().map(|&x| evaluator.fixed_point(x)).collect();
    // Column j holds G(t_i, t_j) for i <= j (left piece, t_i <= t_j).
    let columns: Vec<Vec<f64>> = (0..size)
        .into_par_iter()
        .map(|j| {
            let (left, _) = evaluator.source_coeffs(&fixed[j]);
            (0..=j).map(|i| evaluator.eval_poly(&left, &fixed[i])).collect()
        })
        .collect();
    let mut out = vec![0.0; size * size];
    for (j, col) in columns.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            out[i * size + j] = v;
            out[j * size + i] = v;
        }
    }
    out
}

pub fn nystrom_at_order(n: u64, order: usize, config: &NystromConfig) -> Result<NystromSolution> {
    let kernel = GreenKernel::with_limit(n, config.max_n)?;
    let evaluator = KernelEvaluator::new(&kernel, config.precision_bits)?;
    solve_order(&evaluator, order)
}

fn solve_order(evaluator: &KernelEvaluator, order: usize) -> Result<NystromSolution> {
    let rule = GaussLegendre::new(order);
    let k = scaled_kernel_matrix(evaluator, &rule.nodes);
    let sqrt_w: Vec<f64> = rule.weights.iter().map(|w| w.sqrt()).collect();
    let matrix = DMatrix::from_fn(order, order, |i, j| sqrt_w[i] * k[i * order + j] * sqrt_w[j]);

    let (values, leading) = if order <= DENSE_EIGEN_LIMIT {
        dense_top(matrix, 4)
    } else {
        subspace_top(&matrix, 4)?
    };
    let scale = evaluator.scale();
    let mut u: Vec<f64> = leading.iter().zip(&sqrt_w).map(|(v, s)| v / s).collect();
    if u.iter().sum::<f64>() < 0.0 {
        u.iter_mut().for_each(|x| *x = -*x);
    }
    Ok(NystromSolution {
        n: evaluator.n(),
        order,
        nodes: rule.nodes,
        weights: rule.weights,
        eigenvalues: values.into_iter().map(|v| v / scale).collect(),
        leading_eigenfunction: u,
    })
}

fn dense_top(matrix: DMatrix<f64>, count: usize) -> (Vec<f64>, DVector<f64>) {
    let eig = SymmetricEigen::new(matrix);
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = idx.iter().take(count).map(|&i| eig.eigenvalues[i]).collect();
    (values, eig.eigenvectors.column(idx[0]).into_owned())
}

/// Top eigenpairs of a symmetric matrix by block power iteration with
/// Rayleigh–Ritz extraction. The starting block is the first few monomials
/// at the row index, so the result is deterministic.
fn subspace_top(matrix: &DMatrix<f64>, count: usize) -> Result<(Vec<f64>, DVector<f64>)> {
    let size = matrix.nrows();
    let block = (count + 2).min(size);
    let mut basis = DMatrix::from_fn(size, block, |i, j| {
        let x = -1.0 + 2.0 * (i as f64 + 0.5) / size as f64;
        x.powi(j as i32) + 1e-3 * ((i * 7 + j * 13) % 17) as f64
    });
    let mut previous = vec![f64::INFINITY; count];
    for _ in 0..2000 {
        let q = basis.clone().qr().q();
        let aq = matrix * &q;
        let small = q.transpose() * &aq;
        let eig = SymmetricEigen::new(small);
        let mut idx: Vec<usize> = (0..block).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let values: Vec<f64> = idx.iter().take(count).map(|&i| eig.eigenvalues[i]).collect();
        let converged = values
            .iter()
            .zip(&previous)
            .take(2)
            .all(|(v, p)| ((v - p) / v).abs() < 1e-14);
        let ritz = &q * &eig.eigenvectors;
        if converged {
            return Ok((values, ritz.column(idx[0]).into_owned()));
        }
        previous = values;
        basis = matrix * ritz;
    }
    Err(Error::Convergence {
        message: "subspace iteration did not settle".into(),
        best: previous[0],
    })
}

/// Two leading eigenvalues of `T_n`, doubling the quadrature order until
/// `lambda_1` changes by less than `config.rel_tol`.
pub fn nystrom_eigs_with(n: u64, config: &NystromConfig) -> Result<SpectralEstimate> {
    let start = config.quad_order.unwrap_or_else(|| default_order(n));
    if start < 8 * n as usize {
        return Err(Error::argument(format!(
            "quad_order {start} is below 8n = {}",
            8 * n
        )));
    }
    let kernel = GreenKernel::with_limit(n, config.max_n)?;
    let evaluator = KernelEvaluator::new(&kernel, config.precision_bits)?;

    let mut order = start;
    let mut prev = solve_order(&evaluator, order)?;
    loop {
        let next_order = order * 2;
        if next_order > config.max_order.max(start) {
            return Err(Error::Convergence {
                message: format!("lambda_1 not stable to {:e} by order {order} for n = {n}", config.rel_tol),
                best: prev.eigenvalues[0],
            });
        }
        let cur = solve_order(&evaluator, next_order)?;
        let change = ((cur.eigenvalues[0] - prev.eigenvalues[0]) / cur.eigenvalues[0]).abs();
        if change <= config.rel_tol {
            return Ok(SpectralEstimate {
                n,
                lambda1: cur.eigenvalues[0],
                lambda2: cur.eigenvalues[1],
                quad_order: next_order,
                residual_estimate: change,
            });
        }
        order = next_order;
        prev = cur;
    }
}

pub fn nystrom_eigs(n: u64, quad_order: Option<usize>) -> Result<SpectralEstimate> {
    nystrom_eigs_with(
        n,
        &NystromConfig {
            quad_order,
            ..NystromConfig::default()
        },
    )
}

/// `n lambda_2 / lambda_1`.
pub fn rank1_ratio(n: u64) -> Result<f64> {
    Ok(nystrom_eigs(n, None)?.rank1_ratio())
}
