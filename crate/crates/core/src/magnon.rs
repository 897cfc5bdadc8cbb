//! Single-magnon plane waves over the all-down vacuum.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::basis::SectorBasis;
use crate::error::{Error, Result};
use crate::graph::{Boundary, LatticeSpec};
use crate::operators::{LinearOperator, SparseOperator};

/// Complex amplitudes over a sector basis.
#[derive(Debug, Clone)]
pub struct StateVector {
    basis: Arc<SectorBasis>,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(basis: Arc<SectorBasis>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::SizeMismatch {
                expected: basis.dim(),
                found: amplitudes.len(),
            });
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite amplitude".into()));
        }
        Ok(StateVector { basis, amplitudes })
    }

    pub fn basis(&self) -> &Arc<SectorBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn split(&self) -> (Vec<f64>, Vec<f64>) {
        (
            self.amplitudes.iter().map(|a| a.re).collect(),
            self.amplitudes.iter().map(|a| a.im).collect(),
        )
    }

    /// `A v` for a real operator on the same sector.
    pub fn apply(&self, op: &SparseOperator) -> Result<Vec<Complex64>> {
        if op.basis().n_qubits() != self.basis.n_qubits()
            || op.basis().n_flipped() != self.basis.n_flipped()
        {
            return Err(Error::InvalidArgument("operator acts on a different sector".into()));
        }
        let (re, im) = self.split();
        let mut are = vec![0.0; re.len()];
        let mut aim = vec![0.0; im.len()];
        op.apply(&re, &mut are);
        op.apply(&im, &mut aim);
        Ok(are
            .into_iter()
            .zip(aim)
            .map(|(r, i)| Complex64::new(r, i))
            .collect())
    }

    /// `<v|A|v> / <v|v>`; real because `A` is real symmetric.
    pub fn expectation(&self, op: &SparseOperator) -> Result<f64> {
        let av = self.apply(op)?;
        let num: f64 = self
            .amplitudes
            .iter()
            .zip(&av)
            .map(|(v, a)| (v.conj() * a).re)
            .sum();
        Ok(num / self.norm().powi(2))
    }

    /// `||A v - <A> v||` for the normalised state.
    pub fn eigen_residual(&self, op: &SparseOperator) -> Result<f64> {
        let n = self.norm();
        let mean = self.expectation(op)?;
        let av = self.apply(op)?;
        Ok(av
            .iter()
            .zip(&self.amplitudes)
            .map(|(a, v)| ((a - v * mean) / n).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }
}

/// Lattice momentum `k_d = 2 pi m_d / N_d`.
pub fn momentum(spec: &LatticeSpec, m: &[i64]) -> Vec<f64> {
    m.iter()
        .zip(spec.extents())
        .map(|(&md, &n)| 2.0 * PI * md.rem_euclid(n as i64) as f64 / n as f64)
        .collect()
}

/// `S+_k |vac>` normalised: a single up spin at site `x` with amplitude
/// `exp(i k.x) / sqrt(Ntot)`. Uses the raising operator, so the result lies
/// in the one-flip sector.
pub fn magnon_state(spec: &LatticeSpec, m: &[i64]) -> Result<StateVector> {
    if spec.boundary() != Boundary::Periodic {
        return Err(Error::InvalidArgument(
            "plane-wave momenta need periodic boundaries".into(),
        ));
    }
    if m.len() != spec.dims() {
        return Err(Error::SizeMismatch {
            expected: spec.dims(),
            found: m.len(),
        });
    }
    let n = spec.n_sites();
    let basis = Arc::new(SectorBasis::new(n, 1)?);
    let k = momentum(spec, m);
    let scale = 1.0 / (n as f64).sqrt();
    let amplitudes = (0..n)
        .map(|site| {
            // basis state `site` is the word with only bit `site` set
            debug_assert_eq!(basis.state(site), 1u64 << site);
            let phase: f64 = spec
                .coords(site)
                .iter()
                .zip(&k)
                .map(|(&x, &kd)| kd * x as f64)
                .sum();
            Complex64::from_polar(scale, phase)
        })
        .collect();
    StateVector::new(basis, amplitudes)
}

/// Exact one-magnon `dH/4J` eigenvalue on a periodic lattice,
/// `sum_d (1 - cos k_d)`.
pub fn magnon_energy(spec: &LatticeSpec, m: &[i64]) -> f64 {
    momentum(spec, m).iter().map(|k| 1.0 - k.cos()).sum()
}
