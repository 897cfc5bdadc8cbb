//! Singlet-projector sums restricted to magnetization sectors.
//!
//! Every operator here is `shift * I + sum_w w * P(i,k)` where `P(i,k)` is
//! the projector onto the two-qubit singlet. On a basis state whose bits `i`
//! and `k` differ, `P |b> = (|b> - |b ^ mask>) / 2`; otherwise `P |b> = 0`.
//! This includes `dH = H - E*` over `4J` (one projector per edge) and the
//! total-spin deficit `dS2` (two projectors per unordered pair).

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::basis::SectorBasis;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Sector dimensions above this are never materialised densely.
pub const DENSE_LIMIT: usize = 4096;

const PAR_THRESHOLD: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairTerm {
    pub i: usize,
    pub k: usize,
    pub weight: f64,
}

/// Basis-independent description of a weighted projector sum.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorSum {
    n_qubits: usize,
    terms: Vec<PairTerm>,
    shift: f64,
}

impl ProjectorSum {
    /// Collects terms, merging repeated pairs (in either order) and dropping
    /// zero weights.
    pub fn new<I>(n_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (i, k, w) in terms {
            if i == k {
                return Err(Error::SameSite(i));
            }
            for s in [i, k] {
                if s >= n_qubits {
                    return Err(Error::SiteOutOfRange {
                        site: s,
                        n_sites: n_qubits,
                    });
                }
            }
            if !w.is_finite() {
                return Err(Error::InvalidArgument(format!("non-finite weight on ({i}, {k})")));
            }
            *merged.entry((i.min(k), i.max(k))).or_insert(0.0) += w;
        }
        let terms = merged
            .into_iter()
            .filter(|&(_, w)| w != 0.0)
            .map(|((i, k), weight)| PairTerm { i, k, weight })
            .collect();
        Ok(ProjectorSum {
            n_qubits,
            terms,
            shift: 0.0,
        })
    }

    pub fn singlet(n_qubits: usize, i: usize, k: usize) -> Result<Self> {
        Self::new(n_qubits, [(i, k, 1.0)])
    }

    /// `dH / 4J`: one projector per edge.
    pub fn delta_hamiltonian(g: &Graph) -> Self {
        Self::new(g.n_sites(), g.edges().iter().map(|&(i, k)| (i, k, 1.0)))
            .expect("graph edges are valid pairs")
    }

    /// `dS2 = Smax^2 - S^2`, the ordered-pair sum of all singlet projectors.
    pub fn delta_spin_squared(n_qubits: usize) -> Self {
        let pairs = (0..n_qubits).flat_map(|i| (i + 1..n_qubits).map(move |k| (i, k, 2.0)));
        Self::new(n_qubits, pairs).expect("distinct in-range pairs")
    }

    /// `c * dH/4J - dS2`; positive semidefinite exactly when `c` is a valid
    /// bound constant.
    pub fn bound_gap(g: &Graph, c: f64) -> Self {
        Self::delta_hamiltonian(g)
            .scaled(c)
            .plus(&Self::delta_spin_squared(g.n_sites()).scaled(-1.0))
            .expect("same qubit count")
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PairTerm] {
        &self.terms
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn with_shift(mut self, shift: f64) -> Self {
        self.shift = shift;
        self
    }

    pub fn scaled(&self, factor: f64) -> Self {
        ProjectorSum::new(
            self.n_qubits,
            self.terms.iter().map(|t| (t.i, t.k, t.weight * factor)),
        )
        .expect("terms already validated")
        .with_shift(self.shift * factor)
    }

    pub fn plus(&self, other: &ProjectorSum) -> Result<Self> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::SizeMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        let terms = self.terms.iter().chain(&other.terms).map(|t| (t.i, t.k, t.weight));
        Ok(ProjectorSum::new(self.n_qubits, terms)?.with_shift(self.shift + other.shift))
    }

    /// Upper bound on the spectral radius (each projector has norm 1).
    pub fn norm_bound(&self) -> f64 {
        self.shift.abs() + self.terms.iter().map(|t| t.weight.abs()).sum::<f64>()
    }

    pub fn on(&self, basis: Arc<SectorBasis>) -> Result<SparseOperator> {
        SparseOperator::new(basis, self.clone())
    }
}

/// Anything that can act on a real vector.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

/// A projector sum bound to one sector basis. Application is matrix-free;
/// explicit entries, CSR and dense forms are produced on request.
#[derive(Debug, Clone)]
pub struct SparseOperator {
    basis: Arc<SectorBasis>,
    action: ProjectorSum,
}

impl SparseOperator {
    pub fn new(basis: Arc<SectorBasis>, action: ProjectorSum) -> Result<Self> {
        if basis.n_qubits() != action.n_qubits() {
            return Err(Error::SizeMismatch {
                expected: basis.n_qubits(),
                found: action.n_qubits(),
            });
        }
        Ok(SparseOperator { basis, action })
    }

    pub fn basis(&self) -> &Arc<SectorBasis> {
        &self.basis
    }

    pub fn action(&self) -> &ProjectorSum {
        &self.action
    }

    /// Sorted `(col, value)` entries of one row, duplicates merged and exact
    /// zeros dropped.
    fn row(&self, r: usize) -> Vec<(usize, f64)> {
        let b = self.basis.state(r);
        let mut diag = self.action.shift;
        let mut off: Vec<(usize, f64)> = Vec::new();
        for t in &self.action.terms {
            if (b >> t.i) & 1 != (b >> t.k) & 1 {
                diag += 0.5 * t.weight;
                let partner = b ^ (1u64 << t.i) ^ (1u64 << t.k);
                let c = self
                    .basis
                    .index_of(partner)
                    .expect("exchange stays in sector");
                off.push((c, -0.5 * t.weight));
            }
        }
        off.push((r, diag));
        off.sort_unstable_by_key(|&(c, _)| c);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(off.len());
        for (c, v) in off {
            match merged.last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|&(_, v)| v != 0.0);
        merged
    }

    /// All nonzero entries `(row, col, value)` in row-major order, both
    /// triangles.
    pub fn entries(&self) -> Vec<(usize, usize, f64)> {
        (0..self.dim())
            .flat_map(|r| self.row(r).into_iter().map(move |(c, v)| (r, c, v)))
            .collect()
    }

    pub fn to_csr(&self) -> CsrMatrix {
        let rows: Vec<Vec<(usize, f64)>> = if self.dim() >= PAR_THRESHOLD {
            (0..self.dim()).into_par_iter().map(|r| self.row(r)).collect()
        } else {
            (0..self.dim()).map(|r| self.row(r)).collect()
        };
        CsrMatrix::from_rows(self.dim(), rows)
    }

    pub fn to_dense(&self) -> Result<DMatrix<f64>> {
        let dim = self.dim();
        if dim > DENSE_LIMIT {
            return Err(Error::DenseTooLarge {
                dim,
                max: DENSE_LIMIT,
            });
        }
        let mut m = DMatrix::zeros(dim, dim);
        for r in 0..dim {
            for (c, v) in self.row(r) {
                m[(r, c)] = v;
            }
        }
        Ok(m)
    }

    fn apply_row(&self, r: usize, x: &[f64]) -> f64 {
        let b = self.basis.state(r);
        let mut acc = self.action.shift * x[r];
        for t in &self.action.terms {
            if (b >> t.i) & 1 != (b >> t.k) & 1 {
                let partner = b ^ (1u64 << t.i) ^ (1u64 << t.k);
                let c = self
                    .basis
                    .index_of(partner)
                    .expect("exchange stays in sector");
                acc += 0.5 * t.weight * (x[r] - x[c]);
            }
        }
        acc
    }
}

impl LinearOperator for SparseOperator {
    fn dim(&self) -> usize {
        self.basis.dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        if self.dim() >= PAR_THRESHOLD {
            y.par_iter_mut()
                .enumerate()
                .for_each(|(r, out)| *out = self.apply_row(r, x));
        } else {
            for (r, out) in y.iter_mut().enumerate() {
                *out = self.apply_row(r, x);
            }
        }
    }
}

/// Compressed sparse rows, full (both triangles) storage.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    fn from_rows(dim: usize, rows: Vec<Vec<(usize, f64)>>) -> Self {
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for row in rows {
            for (c, v) in row {
                cols.push(c);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        CsrMatrix {
            dim,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.dim).all(|r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).all(|p| {
                let c = self.cols[p];
                let lo = self.row_ptr[c];
                let hi = self.row_ptr[c + 1];
                match self.cols[lo..hi].binary_search(&r) {
                    Ok(q) => (self.vals[lo + q] - self.vals[p]).abs() <= tol,
                    Err(_) => false,
                }
            })
        })
    }
}

impl LinearOperator for CsrMatrix {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let row = |r: usize| -> f64 {
            (self.row_ptr[r]..self.row_ptr[r + 1])
                .map(|p| self.vals[p] * x[self.cols[p]])
                .sum()
        };
        if self.dim >= PAR_THRESHOLD {
            y.par_iter_mut().enumerate().for_each(|(r, out)| *out = row(r));
        } else {
            for (r, out) in y.iter_mut().enumerate() {
                *out = row(r);
            }
        }
    }
}

impl LinearOperator for DMatrix<f64> {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (r, out) in y.iter_mut().enumerate() {
            *out = self.row(r).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }
}

fn check_graph_basis(g: &Graph, basis: &SectorBasis) -> Result<()> {
    if g.n_sites() != basis.n_qubits() {
        return Err(Error::SizeMismatch {
            expected: g.n_sites(),
            found: basis.n_qubits(),
        });
    }
    Ok(())
}

pub fn singlet_projector(basis: Arc<SectorBasis>, i: usize, k: usize) -> Result<SparseOperator> {
    let sum = ProjectorSum::singlet(basis.n_qubits(), i, k)?;
    SparseOperator::new(basis, sum)
}

/// `dH / 4J` on one sector.
pub fn delta_hamiltonian(g: &Graph, basis: Arc<SectorBasis>) -> Result<SparseOperator> {
    check_graph_basis(g, &basis)?;
    SparseOperator::new(basis, ProjectorSum::delta_hamiltonian(g))
}

/// `dS2` on one sector.
pub fn delta_spin_squared(basis: Arc<SectorBasis>) -> Result<SparseOperator> {
    let sum = ProjectorSum::delta_spin_squared(basis.n_qubits());
    SparseOperator::new(basis, sum)
}

/// Maximal `S^2` eigenvalue, `(n/2)(n/2 + 1)`.
pub fn max_spin_squared(n_qubits: usize) -> f64 {
    let h = n_qubits as f64 / 2.0;
    h * (h + 1.0)
}

/// `dS2` eigenvalue of a total-spin-`s` multiplet.
pub fn spin_deficit(n_qubits: usize, s: f64) -> f64 {
    max_spin_squared(n_qubits) - s * (s + 1.0)
}

/// Full-space operator as a dense `2^n x 2^n` matrix (computational basis),
/// used by small oracles.
pub fn full_space_dense(sum: &ProjectorSum) -> DMatrix<f64> {
    let n = sum.n_qubits();
    let dim = 1usize << n;
    let mut m = DMatrix::zeros(dim, dim);
    for b in 0..dim as u64 {
        let r = b as usize;
        m[(r, r)] += sum.shift();
        for t in sum.terms() {
            if (b >> t.i) & 1 != (b >> t.k) & 1 {
                let c = (b ^ (1 << t.i) ^ (1 << t.k)) as usize;
                m[(r, r)] += 0.5 * t.weight;
                m[(c, r)] -= 0.5 * t.weight;
            }
        }
    }
    m
}
