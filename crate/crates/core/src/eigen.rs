//! Smallest eigenpairs of real symmetric operators: dense diagonalization
//! for small sectors and a restarted Lanczos iteration with full
//! reorthogonalization for the rest.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{LinearOperator, SparseOperator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dense,
    Iterative,
    /// Dense up to [`AUTO_DENSE_MAX`], iterative above.
    Auto,
}

pub const AUTO_DENSE_MAX: usize = 300;

impl Method {
    pub fn resolve(self, dim: usize) -> Method {
        match self {
            Method::Auto if dim <= AUTO_DENSE_MAX => Method::Dense,
            Method::Auto => Method::Iterative,
            m => m,
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(Method::Dense),
            "iterative" | "lanczos" => Ok(Method::Iterative),
            "auto" => Ok(Method::Auto),
            other => Err(Error::InvalidArgument(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    /// Krylov subspace size before an explicit restart.
    pub krylov_dim: usize,
    pub max_restarts: usize,
    /// Absolute residual target; the solver also respects a floor set by
    /// the operator norm and machine precision.
    pub residual_tol: f64,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            krylov_dim: 150,
            max_restarts: 60,
            residual_tol: 1e-10,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    /// `||A x - value x||` for the returned unit vector.
    pub residual: f64,
    pub matvecs: usize,
    pub method: Method,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn residual_norm<A: LinearOperator + ?Sized>(op: &A, x: &[f64], value: f64) -> f64 {
    let mut ax = vec![0.0; x.len()];
    op.apply(x, &mut ax);
    ax.iter()
        .zip(x)
        .map(|(a, b)| (a - value * b).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Ascending eigenvalues and matching eigenvector columns.
pub fn sorted_symmetric_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_columns(
        &order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<DVector<f64>>>(),
    );
    (values, vectors)
}

fn dense_smallest(m: DMatrix<f64>) -> EigenPair {
    let op = m.clone();
    let (values, vectors) = sorted_symmetric_eigen(m);
    let vector: Vec<f64> = vectors.column(0).iter().copied().collect();
    let residual = residual_norm(&op, &vector, values[0]);
    EigenPair {
        value: values[0],
        vector,
        residual,
        matvecs: 0,
        method: Method::Dense,
    }
}

/// Lanczos with explicit restarts from the current Ritz vector.
pub fn lanczos_smallest<A: LinearOperator + ?Sized>(
    op: &A,
    opts: &LanczosOptions,
) -> Result<EigenPair> {
    let dim = op.dim();
    if dim == 0 {
        return Err(Error::InvalidArgument("empty operator".into()));
    }
    if dim == 1 {
        let mut y = [0.0];
        op.apply(&[1.0], &mut y);
        return Ok(EigenPair {
            value: y[0],
            vector: vec![1.0],
            residual: 0.0,
            matvecs: 1,
            method: Method::Iterative,
        });
    }
    let m = opts.krylov_dim.clamp(2, dim);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut start: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() - 0.5).collect();
    let n0 = norm(&start);
    start.iter_mut().for_each(|v| *v /= n0);

    let mut matvecs = 0;
    let mut norm_est: f64 = 0.0;
    let mut best = (f64::INFINITY, f64::INFINITY);
    let mut w = vec![0.0; dim];

    for _ in 0..=opts.max_restarts {
        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alpha: Vec<f64> = Vec::with_capacity(m);
        let mut beta: Vec<f64> = Vec::with_capacity(m);
        let mut ritz: Option<(f64, Vec<f64>)> = None;

        for j in 0..m {
            op.apply(&basis[j], &mut w);
            matvecs += 1;
            let a = dot(&basis[j], &w);
            alpha.push(a);
            // two passes of classical Gram-Schmidt against the whole basis
            for _ in 0..2 {
                for q in &basis {
                    let h = dot(q, &w);
                    w.iter_mut().zip(q).for_each(|(wi, qi)| *wi -= h * qi);
                }
            }
            let b = norm(&w);
            let size = j + 1;
            norm_est = norm_est.max(a.abs()).max(b);
            let floor = 64.0 * f64::EPSILON * norm_est.max(1.0);
            let target = opts.residual_tol.max(floor);
            let breakdown = b <= floor;
            let check = breakdown || size == m || size % 10 == 0;
            if check {
                let t = DMatrix::from_fn(size, size, |r, c| {
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
                let (_, vecs) = sorted_symmetric_eigen(t);
                let estimate = b * vecs[(size - 1, 0)].abs();
                if estimate <= target || breakdown || size == m {
                    let mut x = vec![0.0; dim];
                    for (q, &yq) in basis.iter().zip(vecs.column(0).iter()) {
                        x.iter_mut().zip(q).for_each(|(xi, qi)| *xi += yq * qi);
                    }
                    let nx = norm(&x);
                    x.iter_mut().for_each(|v| *v /= nx);
                    // Rayleigh quotient of the normalised Ritz vector
                    let mut ax = vec![0.0; dim];
                    op.apply(&x, &mut ax);
                    matvecs += 1;
                    let value = dot(&x, &ax);
                    let residual = ax
                        .iter()
                        .zip(&x)
                        .map(|(a, b)| (a - value * b).powi(2))
                        .sum::<f64>()
                        .sqrt();
                    if residual < best.1 {
                        best = (value, residual);
                    }
                    let floor = 64.0 * f64::EPSILON * norm_est.max(1.0) * (dim as f64).sqrt();
                    if residual <= opts.residual_tol.max(floor) {
                        return Ok(EigenPair {
                            value,
                            vector: x,
                            residual,
                            matvecs,
                            method: Method::Iterative,
                        });
                    }
                    ritz = Some((value, x));
                    if breakdown || size == m {
                        break;
                    }
                }
            }
            if breakdown {
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|v| v / b).collect());
        }
        match ritz {
            Some((_, x)) => start = x,
            None => break,
        }
    }
    Err(Error::NoConvergence {
        estimate: best.0,
        residual: best.1,
        iterations: matvecs,
    })
}

/// Smallest eigenpair with the requested method. `Dense` refuses
/// dimensions above [`crate::operators::DENSE_LIMIT`].
pub fn smallest_eigenpair(
    op: &SparseOperator,
    method: Method,
    opts: &LanczosOptions,
) -> Result<EigenPair> {
    match method.resolve(op.dim()) {
        Method::Dense => Ok(dense_smallest(op.to_dense()?)),
        _ => {
            // CSR pays off whenever it fits comfortably in memory.
            let nnz_est = op.dim() * (op.action().terms().len() + 1);
            if nnz_est <= 20_000_000 {
                lanczos_smallest(&op.to_csr(), opts)
            } else {
                lanczos_smallest(op, opts)
            }
        }
    }
}

/// Smallest eigenvalue within `tol` (the Lanczos residual target).
pub fn min_eigenvalue(op: &SparseOperator, method: Method, tol: f64) -> Result<f64> {
    let opts = LanczosOptions {
        residual_tol: tol,
        ..LanczosOptions::default()
    };
    smallest_eigenpair(op, method, &opts).map(|p| p.value)
}

/// Smallest eigenvalue of a dense symmetric matrix.
pub fn dense_min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::SectorBasis;
    use crate::graph::{Boundary, Graph, LatticeSpec};
    use crate::operators::{singlet_projector, ProjectorSum};
    use std::sync::Arc;

    #[test]
    fn diagonal_matrix() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 1.0, 2.0]));
        assert_eq!(dense_min_eigenvalue(&m), 1.0);
        let p = lanczos_smallest(&m, &LanczosOptions::default()).unwrap();
        assert!((p.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn singlet_projector_min() {
        let p = singlet_projector(Arc::new(SectorBasis::new(2, 1).unwrap()), 0, 1).unwrap();
        assert!(min_eigenvalue(&p, Method::Dense, 1e-12).unwrap().abs() < 1e-15);
        assert!(min_eigenvalue(&p, Method::Iterative, 1e-12).unwrap().abs() < 1e-12);
    }

    #[test]
    fn iterative_matches_dense_on_ring8_half_filling() {
        let g = Graph::lattice(&LatticeSpec::chain(8, Boundary::Periodic).unwrap()).unwrap();
        let basis = Arc::new(SectorBasis::new(8, 4).unwrap());
        for sum in [
            ProjectorSum::delta_hamiltonian(&g).scaled(-1.0),
            ProjectorSum::bound_gap(&g, 3.0),
        ] {
            let op = sum.on(basis.clone()).unwrap();
            let d = min_eigenvalue(&op, Method::Dense, 1e-10).unwrap();
            let i = min_eigenvalue(&op, Method::Iterative, 1e-10).unwrap();
            assert!((d - i).abs() <= 1e-8, "dense {d} iterative {i}");
        }
    }

    #[test]
    fn dense_refuses_huge() {
        let basis = Arc::new(SectorBasis::new(16, 8).unwrap());
        let op = ProjectorSum::delta_spin_squared(16).on(basis).unwrap();
        assert!(matches!(
            smallest_eigenpair(&op, Method::Dense, &LanczosOptions::default()),
            Err(Error::DenseTooLarge { .. })
        ));
    }

    #[test]
    fn non_convergence_reports_estimate() {
        let g = Graph::lattice(&LatticeSpec::chain(10, Boundary::Periodic).unwrap()).unwrap();
        let op = ProjectorSum::delta_hamiltonian(&g)
            .scaled(-1.0)
            .on(Arc::new(SectorBasis::new(10, 5).unwrap()))
            .unwrap();
        let opts = LanczosOptions {
            krylov_dim: 3,
            max_restarts: 1,
            residual_tol: 1e-14,
            seed: 1,
        };
        match lanczos_smallest(&op, &opts) {
            Err(Error::NoConvergence {
                estimate, residual, ..
            }) => {
                assert!(estimate.is_finite());
                assert!(residual > 0.0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
