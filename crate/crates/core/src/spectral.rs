//! Numerical certificates for `c * dH/4J - dS2 >= 0` and the smallest
//! admissible constant.
//!
//! Both operators conserve magnetization, so everything is done sector by
//! sector. Spin flip maps sector `m` to `n - m` with the same spectrum; only
//! sectors up to half filling are needed, and for `n <= 10` all sectors are
//! scanned so that the symmetry is checked rather than assumed.

use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::SectorBasis;
use crate::eigen::{smallest_eigenpair, sorted_symmetric_eigen, LanczosOptions, Method};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::operators::{spin_deficit, LinearOperator, ProjectorSum, DENSE_LIMIT};

pub const DEFAULT_TOL: f64 = 1e-9;
/// `dH/4J` eigenvalues at or below this are treated as the kernel.
pub const KERNEL_THRESHOLD: f64 = 1e-10;
const FULL_SCAN_MAX_QUBITS: usize = 10;

#[derive(Debug, Clone, Copy)]
pub struct CertifyOptions {
    pub tol: f64,
    pub method: Method,
    pub seed: u64,
    /// Scan every sector instead of half filling. Defaults to `n <= 10`.
    pub all_sectors: Option<bool>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            tol: DEFAULT_TOL,
            method: Method::Auto,
            seed: 0x5eed,
            all_sectors: None,
        }
    }
}

impl CertifyOptions {
    fn lanczos(&self) -> LanczosOptions {
        LanczosOptions {
            residual_tol: (0.1 * self.tol).max(1e-13),
            seed: self.seed,
            ..LanczosOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorMin {
    pub n_flipped: usize,
    pub dim: usize,
    pub lambda_min: f64,
    pub method: Method,
}

/// Smallest eigenvalue of a projector sum over the scanned sectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// The constant under test, when certifying `c * dH/4J - dS2`.
    pub constant: Option<f64>,
    pub lambda_min: f64,
    pub sectors: Vec<SectorMin>,
    pub tol: f64,
    pub method: Method,
    pub pass: bool,
    /// Whether per-sector minima agree under `m -> n - m`; only set when
    /// every sector was scanned.
    pub flip_symmetric: Option<bool>,
}

impl Certificate {
    pub fn sector_minima(&self) -> Vec<f64> {
        self.sectors.iter().map(|s| s.lambda_min).collect()
    }
}

/// Certifies `sum >= -tol` sector by sector.
pub fn certify_operator(sum: &ProjectorSum, opts: &CertifyOptions) -> Result<Certificate> {
    let n = sum.n_qubits();
    let all = opts.all_sectors.unwrap_or(n <= FULL_SCAN_MAX_QUBITS);
    let last = if all { n } else { n / 2 };
    let lanczos = opts.lanczos();
    let sectors: Vec<SectorMin> = (0..=last)
        .into_par_iter()
        .map(|m| {
            let basis = Arc::new(SectorBasis::new(n, m)?);
            let dim = basis.dim();
            let op = sum.on(basis)?;
            let method = opts.method.resolve(dim);
            let pair = smallest_eigenpair(&op, method, &lanczos)?;
            Ok(SectorMin {
                n_flipped: m,
                dim,
                lambda_min: pair.value,
                method: pair.method,
            })
        })
        .collect::<Result<_>>()?;
    let lambda_min = sectors
        .iter()
        .map(|s| s.lambda_min)
        .fold(f64::INFINITY, f64::min);
    let flip_symmetric = all.then(|| {
        let scale = sum.norm_bound().max(1.0);
        sectors.iter().all(|s| {
            let mirror = sectors[n - s.n_flipped].lambda_min;
            (s.lambda_min - mirror).abs() <= 1e-9 * scale
        })
    });
    Ok(Certificate {
        constant: None,
        lambda_min,
        sectors,
        tol: opts.tol,
        method: opts.method,
        pass: lambda_min >= -opts.tol,
        flip_symmetric,
    })
}

/// Checks `dS2 <= c * dH/4J` on `g` by bounding the smallest eigenvalue of
/// `c * dH/4J - dS2`.
pub fn certify_inequality(g: &Graph, c: f64, opts: &CertifyOptions) -> Result<Certificate> {
    if !c.is_finite() || c < 0.0 {
        return Err(Error::InvalidArgument(format!("constant must be finite and >= 0, got {c}")));
    }
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let mut cert = certify_operator(&ProjectorSum::bound_gap(g, c), opts)?;
    cert.constant = Some(c);
    Ok(cert)
}

/// A joint eigenpair of `dH/4J` and `dS2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointPair {
    pub delta_h: f64,
    pub delta_s2: f64,
}

struct JointDecomposition {
    pairs: Vec<JointPair>,
    vectors: DMatrix<f64>,
}

/// Simultaneous diagonalization on one sector: diagonalize `dH/4J`, then
/// `dS2` inside each of its eigenspaces.
fn joint_decomposition(g: &Graph, n_flipped: usize) -> Result<JointDecomposition> {
    let basis = Arc::new(SectorBasis::new(g.n_sites(), n_flipped)?);
    if basis.dim() > DENSE_LIMIT {
        return Err(Error::DenseTooLarge {
            dim: basis.dim(),
            max: DENSE_LIMIT,
        });
    }
    let h = ProjectorSum::delta_hamiltonian(g).on(basis.clone())?.to_dense()?;
    let s = ProjectorSum::delta_spin_squared(g.n_sites())
        .on(basis.clone())?
        .to_dense()?;
    let (hvals, hvecs) = sorted_symmetric_eigen(h);
    let dim = hvals.len();
    let mut pairs = Vec::with_capacity(dim);
    let mut columns = Vec::with_capacity(dim);
    let mut start = 0;
    while start < dim {
        let a0 = hvals[start];
        let mut end = start + 1;
        while end < dim && (hvals[end] - a0).abs() <= 1e-8 * a0.abs().max(1.0) {
            end += 1;
        }
        let v = hvecs.columns(start, end - start).into_owned();
        let block = v.transpose() * &s * &v;
        let (bvals, bvecs) = sorted_symmetric_eigen(block);
        let a = hvals[start..end].iter().sum::<f64>() / (end - start) as f64;
        for (j, &b) in bvals.iter().enumerate() {
            pairs.push(JointPair {
                delta_h: a,
                delta_s2: b,
            });
            columns.push(&v * bvecs.column(j));
        }
        start = end;
    }
    Ok(JointDecomposition {
        pairs,
        vectors: DMatrix::from_columns(&columns),
    })
}

/// All joint eigenpairs `(dH/4J, dS2)` in one sector, ordered by `dH/4J`.
pub fn joint_eigenpairs(g: &Graph, n_flipped: usize) -> Result<Vec<JointPair>> {
    Ok(joint_decomposition(g, n_flipped)?.pairs)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub n_flipped: usize,
    /// Column of the sector's joint eigenbasis (dense) or 0 (iterative).
    pub eigen_index: usize,
    pub delta_h: f64,
    pub delta_s2: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorRatio {
    pub n_flipped: usize,
    pub ratio: f64,
}

/// Smallest `c` with `c * dH/4J - dS2 >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PencilResult {
    pub c_star: f64,
    pub witness: Witness,
    pub sectors: Vec<SectorRatio>,
    pub method: Method,
}

#[derive(Debug, Clone, Copy)]
pub struct PencilOptions {
    pub method: Method,
    pub seed: u64,
    pub residual_tol: f64,
}

impl Default for PencilOptions {
    fn default() -> Self {
        PencilOptions {
            method: Method::Auto,
            seed: 0x5eed,
            residual_tol: 1e-10,
        }
    }
}

/// Auto picks dense for sectors up to this dimension.
pub const PENCIL_AUTO_DENSE_MAX: usize = 1000;

/// The tightest constant for `g`.
///
/// Dense route: joint eigenpairs per sector; the answer is the largest
/// `dS2 / (dH/4J)` over pairs outside the kernel of `dH/4J`.
///
/// Iterative route: in sector `m`, states of total spin `n/2 - m` carry the
/// largest `dS2` value `b_m`, and every higher multiplet is a copy of a state
/// from a lower sector. With penalty `mu > |E|/2`, the smallest eigenvalue of
/// `dH/4J + mu (b_m - dS2)` is the lowest `dH/4J` among spin-`(n/2 - m)`
/// states, so `c_star = max_m b_m / lambda_m`.
pub fn optimal_constant(g: &Graph, opts: &PencilOptions) -> Result<PencilResult> {
    let n = g.n_sites();
    let largest = SectorBasis::new(n, n / 2)?.dim();
    let method = match opts.method {
        Method::Auto if largest <= PENCIL_AUTO_DENSE_MAX => Method::Dense,
        Method::Auto => Method::Iterative,
        m => m,
    };
    let per_sector: Vec<(SectorRatio, Witness)> = match method {
        Method::Iterative => (1..=n / 2)
            .into_par_iter()
            .map(|m| penalized_sector(g, m, opts))
            .collect::<Result<_>>()?,
        _ => (1..=n / 2)
            .into_par_iter()
            .map(|m| dense_sector(g, m))
            .collect::<Result<_>>()?,
    };
    let (_, witness) = per_sector
        .iter()
        .copied()
        .max_by(|a, b| a.0.ratio.total_cmp(&b.0.ratio))
        .ok_or_else(|| Error::InvalidArgument("graph needs at least two sites".into()))?;
    Ok(PencilResult {
        c_star: per_sector
            .iter()
            .map(|(r, _)| r.ratio)
            .fold(0.0, f64::max),
        witness,
        sectors: per_sector.into_iter().map(|(r, _)| r).collect(),
        method,
    })
}

fn dense_sector(g: &Graph, m: usize) -> Result<(SectorRatio, Witness)> {
    let n = g.n_sites();
    let b_m = spin_deficit(n, n as f64 / 2.0 - m as f64);
    let jd = joint_decomposition(g, m)?;
    // only multiplets first appearing in this sector; the rest are copies
    let (idx, pair) = jd
        .pairs
        .iter()
        .enumerate()
        .filter(|(_, p)| p.delta_h > KERNEL_THRESHOLD && (p.delta_s2 - b_m).abs() < 1e-6 * b_m.max(1.0))
        .max_by(|a, b| {
            (a.1.delta_s2 / a.1.delta_h).total_cmp(&(b.1.delta_s2 / b.1.delta_h))
        })
        .ok_or_else(|| Error::InvalidArgument(format!("sector {m} lies in the kernel")))?;
    let basis = Arc::new(SectorBasis::new(g.n_sites(), m)?);
    let h = ProjectorSum::delta_hamiltonian(g).on(basis.clone())?;
    let s = ProjectorSum::delta_spin_squared(g.n_sites()).on(basis)?;
    let x: Vec<f64> = jd.vectors.column(idx).iter().copied().collect();
    let residual = eigen_residual(&h, &x, pair.delta_h) + eigen_residual(&s, &x, pair.delta_s2);
    Ok((
        SectorRatio {
            n_flipped: m,
            ratio: pair.delta_s2 / pair.delta_h,
        },
        Witness {
            n_flipped: m,
            eigen_index: idx,
            delta_h: pair.delta_h,
            delta_s2: pair.delta_s2,
            residual,
        },
    ))
}

fn penalized_sector(g: &Graph, m: usize, opts: &PencilOptions) -> Result<(SectorRatio, Witness)> {
    let n = g.n_sites();
    let spin = n as f64 / 2.0 - m as f64;
    let b_m = spin_deficit(n, spin);
    let mu = g.n_edges() as f64 + 1.0;
    let dh = ProjectorSum::delta_hamiltonian(g);
    let ds2 = ProjectorSum::delta_spin_squared(n);
    let penalized = dh.plus(&ds2.scaled(-mu))?.with_shift(mu * b_m);
    let basis = Arc::new(SectorBasis::new(n, m)?);
    let op = penalized.on(basis.clone())?;
    let lanczos = LanczosOptions {
        residual_tol: opts.residual_tol,
        seed: opts.seed,
        ..LanczosOptions::default()
    };
    let pair = smallest_eigenpair(&op, Method::Iterative, &lanczos)?;
    if pair.value <= KERNEL_THRESHOLD {
        return Err(Error::InvalidArgument(format!(
            "sector {m}: lowest penalized value {} is in the kernel",
            pair.value
        )));
    }
    let h = dh.on(basis.clone())?;
    let s = ds2.on(basis)?;
    let delta_h = rayleigh(&h, &pair.vector);
    let delta_s2 = rayleigh(&s, &pair.vector);
    Ok((
        SectorRatio {
            n_flipped: m,
            ratio: b_m / pair.value,
        },
        Witness {
            n_flipped: m,
            eigen_index: 0,
            delta_h,
            delta_s2,
            residual: pair.residual,
        },
    ))
}

fn rayleigh<A: LinearOperator>(op: &A, x: &[f64]) -> f64 {
    let mut ax = vec![0.0; x.len()];
    op.apply(x, &mut ax);
    ax.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() / x.iter().map(|v| v * v).sum::<f64>()
}

fn eigen_residual<A: LinearOperator>(op: &A, x: &[f64], value: f64) -> f64 {
    let mut ax = vec![0.0; x.len()];
    op.apply(x, &mut ax);
    ax.iter()
        .zip(x)
        .map(|(a, b)| (a - value * b).powi(2))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Boundary, LatticeSpec};

    fn edge() -> Graph {
        Graph::from_edge_list([(0, 1)]).unwrap()
    }

    fn ring(n: usize) -> Graph {
        Graph::lattice(&LatticeSpec::chain(n, Boundary::Periodic).unwrap()).unwrap()
    }

    #[test]
    fn single_edge_certificates() {
        let opts = CertifyOptions::default();
        let tight = certify_inequality(&edge(), 2.0, &opts).unwrap();
        assert!(tight.pass);
        assert!(tight.lambda_min.abs() < 1e-12);
        let loose = certify_inequality(&edge(), 1.9, &opts).unwrap();
        assert!(!loose.pass);
        assert!((loose.lambda_min + 0.1).abs() < 1e-12);
        assert!(certify_inequality(&edge(), -1.0, &opts).is_err());
    }

    #[test]
    fn ring4_passes_at_six() {
        let cert = certify_inequality(&ring(4), 6.0, &CertifyOptions::default()).unwrap();
        assert!(cert.pass, "{cert:?}");
        assert_eq!(cert.flip_symmetric, Some(true));
        assert_eq!(cert.sectors.len(), 5);
    }

    #[test]
    fn half_filling_scan_for_large_graphs() {
        let opts = CertifyOptions {
            all_sectors: Some(false),
            ..CertifyOptions::default()
        };
        let cert = certify_inequality(&ring(6), 19.0, &opts).unwrap();
        assert_eq!(cert.sectors.len(), 4);
        assert_eq!(cert.flip_symmetric, None);
        assert!(cert.pass);
    }

    #[test]
    fn optimal_constants_small() {
        let opts = PencilOptions::default();
        let c = optimal_constant(&edge(), &opts).unwrap();
        assert!((c.c_star - 2.0).abs() < 1e-10);
        let c = optimal_constant(&Graph::complete(3).unwrap(), &opts).unwrap();
        assert!((c.c_star - 2.0).abs() < 1e-10);
    }

    #[test]
    fn ring4_optimum_comes_from_spin_zero() {
        let c = optimal_constant(&ring(4), &PencilOptions::default()).unwrap();
        assert!((c.c_star - 6.0).abs() < 1e-9, "{c:?}");
        assert_eq!(c.witness.n_flipped, 2);
        assert!((c.witness.delta_s2 - 6.0).abs() < 1e-9);
        assert!((c.witness.delta_h - 1.0).abs() < 1e-9);
        assert!(c.witness.residual < 1e-9);
        // single magnons only reach 4
        assert!((c.sectors[0].ratio - 4.0).abs() < 1e-9);
    }

    #[test]
    fn dense_and_penalized_routes_agree() {
        let graphs = [
            ring(6),
            Graph::lattice(&LatticeSpec::chain(5, Boundary::Open).unwrap()).unwrap(),
            Graph::from_edge_list([(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 4), (2, 5)]).unwrap(),
        ];
        for g in &graphs {
            let dense = optimal_constant(
                g,
                &PencilOptions {
                    method: Method::Dense,
                    ..PencilOptions::default()
                },
            )
            .unwrap();
            let iter = optimal_constant(
                g,
                &PencilOptions {
                    method: Method::Iterative,
                    ..PencilOptions::default()
                },
            )
            .unwrap();
            assert!(
                (dense.c_star - iter.c_star).abs() <= 1e-8 * dense.c_star,
                "{} vs {}",
                dense.c_star,
                iter.c_star
            );
            for (a, b) in dense.sectors.iter().zip(&iter.sectors) {
                assert!((a.ratio - b.ratio).abs() <= 1e-8 * a.ratio.max(1.0));
            }
        }
    }

    #[test]
    fn joint_pairs_cover_sector() {
        let g = ring(4);
        let pairs = joint_eigenpairs(&g, 2).unwrap();
        assert_eq!(pairs.len(), 6);
        // one maximal-spin state in the kernel
        assert_eq!(pairs.iter().filter(|p| p.delta_h.abs() < 1e-10).count(), 1);
    }
}
