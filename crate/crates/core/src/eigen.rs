//! Lowest eigenpairs of a sector Hamiltonian.
//!
//! Lanczos with full reorthogonalization finds one eigenpair at a time;
//! converged vectors are locked and projected out of every later Krylov
//! space, so degenerate levels come out with their full multiplicity.
//! A closing Rayleigh–Ritz pass over the locked vectors re-diagonalizes
//! nearly degenerate blocks. [`dense_spectrum`] is the small-dimension
//! oracle.

use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::SectorBasis;
use crate::cluster::ClusterGraph;
use crate::error::{Error, Result};
use crate::hamiltonian::{dot, Hamiltonian, LinearOperator, StateVector};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_DEG_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 2000;
pub const DEFAULT_K: usize = 4;
pub const DEFAULT_SEED: u64 = 1;
pub const MAX_K: usize = 64;
pub const DENSE_MAX_DIM: usize = 4000;

/// Largest Krylov basis kept before a restart from the current Ritz vector.
const MAX_KRYLOV: usize = 300;
const RITZ_CHECK_EVERY: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub k: usize,
    pub tol: f64,
    pub deg_tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            k: DEFAULT_K,
            tol: DEFAULT_TOL,
            deg_tol: DEFAULT_DEG_TOL,
            max_iter: DEFAULT_MAX_ITER,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EigenResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<StateVector>,
    pub residual_norms: Vec<f64>,
    /// Eigenvalues inside the degeneracy window of the lowest.
    pub degeneracy: usize,
    /// Lowest Ritz value after each convergence check of the first solve.
    pub ground_history: Vec<f64>,
    /// Total operator applications.
    pub matvecs: usize,
    /// Sector dimension; lets `ground_space` tell a full spectrum from a
    /// truncated one.
    pub dim: usize,
}

impl EigenResult {
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    fn with_degeneracy(mut self, deg_tol: f64) -> Self {
        self.degeneracy = count_window(&self.eigenvalues, deg_tol);
        self
    }
}

fn count_window(values: &[f64], deg_tol: f64) -> usize {
    let e0 = values[0];
    let width = deg_tol * e0.abs().max(1.0);
    values.iter().take_while(|&&e| e - e0 < width).count()
}

fn deflate(locked: &[Vec<f64>], x: &mut [f64]) {
    for q in locked {
        let c = dot(q, x);
        x.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
    }
}

fn normalize(x: &mut [f64]) -> f64 {
    let n = dot(x, x).sqrt();
    if n > 0.0 {
        x.iter_mut().for_each(|a| *a /= n);
    }
    n
}

struct RitzPair {
    value: f64,
    vector: Vec<f64>,
    residual: f64,
}

/// Lowest eigenpair of `op` on the orthogonal complement of `locked`.
fn lowest_in_complement<O: LinearOperator + ?Sized>(
    op: &O,
    locked: &[Vec<f64>],
    mut start: Vec<f64>,
    tol: f64,
    budget: usize,
    matvecs: &mut usize,
    history: &mut Vec<f64>,
) -> Result<RitzPair> {
    let n = op.dim();
    let room = n - locked.len();
    let max_basis = MAX_KRYLOV.min(room);
    let mut best: Option<RitzPair> = None;

    loop {
        deflate(locked, &mut start);
        deflate(locked, &mut start);
        if normalize(&mut start) == 0.0 {
            return Err(Error::InvalidParameter(
                "start vector vanished after deflation".into(),
            ));
        }
        let mut vecs: Vec<Vec<f64>> = vec![start];
        let mut alpha: Vec<f64> = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut w = vec![0.0; n];

        loop {
            let j = vecs.len() - 1;
            op.apply(&vecs[j], &mut w);
            *matvecs += 1;
            deflate(locked, &mut w);
            let a = dot(&vecs[j], &w);
            alpha.push(a);
            // full reorthogonalization, applied twice
            for _ in 0..2 {
                for q in &vecs {
                    let c = dot(q, &w);
                    w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
                }
                deflate(locked, &mut w);
            }
            let b = dot(&w, &w).sqrt();
            let m = alpha.len();
            let exhausted = b <= 1e-13 * a.abs().max(1.0) || m >= max_basis;
            let check = exhausted || m.is_multiple_of(RITZ_CHECK_EVERY) || *matvecs >= budget;

            if check {
                let (theta, s) = lowest_ritz(&alpha, &beta);
                history.push(theta);
                let estimate = b * s[m - 1].abs();
                if estimate <= tol || exhausted || *matvecs >= budget {
                    let mut x = vec![0.0; n];
                    for (q, &c) in vecs.iter().zip(&s) {
                        x.iter_mut().zip(q).for_each(|(a, b)| *a += c * b);
                    }
                    deflate(locked, &mut x);
                    normalize(&mut x);
                    let pair = ritz_residual(op, &x, matvecs);
                    if pair.residual <= tol {
                        return Ok(pair);
                    }
                    let improved = best.as_ref().is_none_or(|p| pair.residual < p.residual);
                    if improved {
                        best = Some(RitzPair {
                            value: pair.value,
                            vector: pair.vector.clone(),
                            residual: pair.residual,
                        });
                    }
                    if *matvecs >= budget {
                        return Err(Error::NoConvergence {
                            iterations: *matvecs,
                            residuals: vec![best.map_or(f64::INFINITY, |p| p.residual)],
                        });
                    }
                    if exhausted || estimate <= tol {
                        // restart from the current Ritz vector
                        start = pair.vector;
                        break;
                    }
                }
            }

            beta.push(b);
            let next: Vec<f64> = w.iter().map(|x| x / b).collect();
            vecs.push(next);
        }
    }
}

fn ritz_residual<O: LinearOperator + ?Sized>(op: &O, x: &[f64], matvecs: &mut usize) -> RitzPair {
    let mut hx = vec![0.0; x.len()];
    op.apply(x, &mut hx);
    *matvecs += 1;
    let value = dot(x, &hx);
    let residual = hx
        .iter()
        .zip(x)
        .map(|(h, v)| (h - value * v).powi(2))
        .sum::<f64>()
        .sqrt();
    RitzPair {
        value,
        vector: x.to_vec(),
        residual,
    }
}

/// Lowest eigenpair of the symmetric tridiagonal matrix (alpha, beta).
fn lowest_ritz(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
    let m = alpha.len();
    let t = DMatrix::from_fn(m, m, |r, c| {
        if r == c {
            alpha[r]
        } else if r + 1 == c {
            beta[r]
        } else if c + 1 == r {
            beta[c]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let (idx, &theta) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty tridiagonal");
    (
        theta,
        eig.eigenvectors.column(idx).iter().copied().collect(),
    )
}

/// `k` lowest eigenpairs of `op`, ascending, each to residual `tol`.
pub fn lanczos<O: LinearOperator + ?Sized>(op: &O, cfg: &SolverConfig) -> Result<LanczosOutput> {
    if cfg.k == 0 || cfg.k > MAX_K {
        return Err(Error::InvalidParameter(format!(
            "k must be in 1..={MAX_K}, got {}",
            cfg.k
        )));
    }
    if cfg.tol.is_nan() || cfg.tol <= 0.0 || cfg.deg_tol.is_nan() || cfg.deg_tol <= 0.0 {
        return Err(Error::InvalidParameter(
            "tolerances must be positive".into(),
        ));
    }
    let n = op.dim();
    let k = cfg.k.min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut locked: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut matvecs = 0;
    let mut history = Vec::new();
    let mut residuals = Vec::with_capacity(k);

    for target in 0..k {
        let start: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        let budget = matvecs + cfg.max_iter;
        let mut scratch = Vec::new();
        let hist = if target == 0 {
            &mut history
        } else {
            &mut scratch
        };
        let pair =
            match lowest_in_complement(op, &locked, start, cfg.tol, budget, &mut matvecs, hist) {
                Ok(p) => p,
                Err(Error::NoConvergence {
                    iterations,
                    residuals: last,
                }) => {
                    residuals.extend(last);
                    return Err(Error::NoConvergence {
                        iterations,
                        residuals,
                    });
                }
                Err(e) => return Err(e),
            };
        residuals.push(pair.residual);
        locked.push(pair.vector);
    }

    // Rayleigh–Ritz over the locked block
    let mut hq: Vec<Vec<f64>> = Vec::with_capacity(k);
    for q in &locked {
        let mut y = vec![0.0; n];
        op.apply(q, &mut y);
        matvecs += 1;
        hq.push(y);
    }
    let small = DMatrix::from_fn(k, k, |r, c| {
        0.5 * (dot(&locked[r], &hq[c]) + dot(&locked[c], &hq[r]))
    });
    let eig = SymmetricEigen::new(small);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut values = Vec::with_capacity(k);
    let mut vectors = Vec::with_capacity(k);
    let mut resid = Vec::with_capacity(k);
    for &c in &order {
        let coeffs = eig.eigenvectors.column(c);
        let mut x = vec![0.0; n];
        let mut hx = vec![0.0; n];
        for (r, &a) in coeffs.iter().enumerate() {
            x.iter_mut().zip(&locked[r]).for_each(|(v, q)| *v += a * q);
            hx.iter_mut().zip(&hq[r]).for_each(|(v, q)| *v += a * q);
        }
        let norm = normalize(&mut x);
        hx.iter_mut().for_each(|v| *v /= norm);
        let e = dot(&x, &hx);
        let r = hx
            .iter()
            .zip(&x)
            .map(|(h, v)| (h - e * v).powi(2))
            .sum::<f64>()
            .sqrt();
        values.push(e);
        vectors.push(x);
        resid.push(r);
    }
    if let Some(worst) = resid
        .iter()
        .copied()
        .fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.max(r))))
    {
        if worst > cfg.tol {
            return Err(Error::NoConvergence {
                iterations: matvecs,
                residuals: resid,
            });
        }
    }
    Ok(LanczosOutput {
        eigenvalues: values,
        eigenvectors: vectors,
        residual_norms: resid,
        ground_history: history,
        matvecs,
    })
}

/// Raw output of [`lanczos`] on an arbitrary operator.
#[derive(Debug, Clone)]
pub struct LanczosOutput {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
    pub residual_norms: Vec<f64>,
    pub ground_history: Vec<f64>,
    pub matvecs: usize,
}

/// `cfg.k` lowest eigenpairs of the cluster Hamiltonian in `sector`.
pub fn lowest_eigenpairs(
    graph: &ClusterGraph,
    sector: Arc<SectorBasis>,
    cfg: &SolverConfig,
) -> Result<EigenResult> {
    let h = Hamiltonian::new(graph, Arc::clone(&sector))?;
    let out = lanczos(&h, cfg)?;
    let eigenvectors = out
        .eigenvectors
        .into_iter()
        .map(|amps| StateVector::new(Arc::clone(&sector), amps))
        .collect::<Result<Vec<_>>>()?;
    Ok(EigenResult {
        eigenvalues: out.eigenvalues,
        eigenvectors,
        residual_norms: out.residual_norms,
        degeneracy: 0,
        ground_history: out.ground_history,
        matvecs: out.matvecs,
        dim: sector.dim(),
    }
    .with_degeneracy(cfg.deg_tol))
}

/// Full spectrum from the column-assembled dense matrix.
pub fn dense_spectrum(
    graph: &ClusterGraph,
    sector: Arc<SectorBasis>,
    deg_tol: f64,
) -> Result<EigenResult> {
    let dim = sector.dim();
    if dim > DENSE_MAX_DIM {
        return Err(Error::DenseTooLarge {
            dim,
            max: DENSE_MAX_DIM,
        });
    }
    let h = Hamiltonian::new(graph, Arc::clone(&sector))?;
    let matrix = dense_matrix(&h);
    let eig = SymmetricEigen::new(matrix.clone());
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut eigenvalues = Vec::with_capacity(dim);
    let mut eigenvectors = Vec::with_capacity(dim);
    let mut residual_norms = Vec::with_capacity(dim);
    for &c in &order {
        let v = eig.eigenvectors.column(c).into_owned();
        let e = eig.eigenvalues[c];
        residual_norms.push((&matrix * &v - &v * e).norm());
        eigenvalues.push(e);
        eigenvectors.push(StateVector::new(
            Arc::clone(&sector),
            v.iter().copied().collect(),
        )?);
    }
    Ok(EigenResult {
        eigenvalues,
        eigenvectors,
        residual_norms,
        degeneracy: 0,
        ground_history: Vec::new(),
        matvecs: dim,
        dim,
    }
    .with_degeneracy(deg_tol))
}

/// Dense matrix of an operator, one column per unit vector.
pub fn dense_matrix<O: LinearOperator + ?Sized>(op: &O) -> DMatrix<f64> {
    let n = op.dim();
    let mut m = DMatrix::zeros(n, n);
    let mut e = vec![0.0; n];
    let mut col = vec![0.0; n];
    for c in 0..n {
        e[c] = 1.0;
        op.apply(&e, &mut col);
        e[c] = 0.0;
        m.column_mut(c).copy_from_slice(&col);
    }
    m
}

/// Orthonormal basis of the lowest degenerate level.
pub fn ground_space(result: &EigenResult, deg_tol: f64) -> Result<Vec<StateVector>> {
    let count = count_window(&result.eigenvalues, deg_tol);
    if count == result.eigenvalues.len() && count < result.dim {
        return Err(Error::WindowUnresolved {
            k: result.eigenvalues.len(),
        });
    }
    // re-orthonormalize (modified Gram–Schmidt)
    let mut out: Vec<StateVector> = Vec::with_capacity(count);
    for v in &result.eigenvectors[..count] {
        let mut x = v.clone();
        for q in &out {
            let c = q.dot(&x);
            x = x.combine(1.0, q, -c);
        }
        out.push(x.normalized());
    }
    Ok(out)
}

/// Lowest eigenpairs with automatic growth of `k` until the ground window
/// is resolved (up to `MAX_K` or the sector dimension).
pub fn solve_ground(
    graph: &ClusterGraph,
    sector: Arc<SectorBasis>,
    cfg: &SolverConfig,
) -> Result<(EigenResult, Vec<StateVector>)> {
    let mut cfg = *cfg;
    let cap = MAX_K.min(sector.dim());
    loop {
        let result = lowest_eigenpairs(graph, Arc::clone(&sector), &cfg)?;
        match ground_space(&result, cfg.deg_tol) {
            Ok(ground) => return Ok((result, ground)),
            Err(Error::WindowUnresolved { .. }) if cfg.k < cap => {
                cfg.k = (cfg.k * 2).min(cap);
            }
            Err(e) => return Err(e),
        }
    }
}
