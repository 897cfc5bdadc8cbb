//! Closed-form bound constants, the three-qubit spectrum, and the spectral
//! bound obtained from a weakly homogeneous coupling matrix.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::eigen::sorted_symmetric_eigen;
use crate::error::{Error, Result};
use crate::graph::{Boundary, Graph, LatticeSpec};
use crate::operators::{max_spin_squared, ProjectorSum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Generic,
    Diameter,
    PeriodicExact,
    OpenExact,
    Assignment,
    Optimal,
    Baerwinkel,
    /// Constant given by the caller.
    Supplied,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_sites: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dims: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extents: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Boundary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diameter: Option<usize>,
}

impl BoundParams {
    fn lattice(spec: &LatticeSpec) -> Self {
        BoundParams {
            n_sites: Some(spec.n_sites()),
            dims: Some(spec.dims()),
            extents: Some(spec.extents().to_vec()),
            boundary: Some(spec.boundary()),
            diameter: None,
        }
    }
}

/// Affine bound `dS2 <= slope * dH/4J + offset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSpec {
    pub slope: f64,
    pub offset: f64,
    pub provenance: Provenance,
    /// Exact slope as a reduced fraction, when it was evaluated rationally.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_slope: Option<String>,
    pub params: BoundParams,
}

impl BoundSpec {
    pub fn linear(slope: f64, provenance: Provenance, params: BoundParams) -> Self {
        BoundSpec {
            slope,
            offset: 0.0,
            provenance,
            exact_slope: None,
            params,
        }
    }

    fn exact(value: &BigRational, provenance: Provenance, params: BoundParams) -> Self {
        BoundSpec {
            slope: value.to_f64().unwrap_or(f64::INFINITY),
            offset: 0.0,
            provenance,
            exact_slope: Some(value.to_string()),
            params,
        }
    }

    /// Right-hand side at `x = dH/4J`.
    pub fn evaluate(&self, x: f64) -> f64 {
        self.slope * x + self.offset
    }
}

fn int(v: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn pow(base: &BigRational, exp: i64) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..exp.unsigned_abs() {
        acc *= base;
    }
    if exp < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// `sum |w|` over the periodic displacement range of an axis of length n.
fn periodic_abs_sum(n: usize) -> BigRational {
    let delta = n % 2;
    (int(n * n) - int(delta)) / int(4)
}

/// `sum w^2` over the periodic displacement range.
fn periodic_sq_sum(n: usize) -> BigRational {
    let delta = n % 2;
    int(n) * (int(n * n + 2) - int(3 * delta)) / int(12)
}

fn open_abs_sum(n: usize) -> BigRational {
    int(n * (n - 1))
}

fn open_sq_sum(n: usize) -> BigRational {
    int(n * (n - 1) * (2 * n - 1)) / int(3)
}

/// Largest per-axis sum of `|dk_d| * |dk|_1` over a displacement box, given
/// per-axis counts, `sum |w|` and `sum w^2`.
fn axis_bracket(counts: &[BigRational], abs: &[BigRational], sq: &[BigRational]) -> BigRational {
    let dims = counts.len();
    (0..dims)
        .map(|d| {
            let others: BigRational = (0..dims)
                .filter(|&e| e != d)
                .fold(BigRational::one(), |acc, e| acc * &counts[e]);
            let mut total = &others * &sq[d];
            for d2 in (0..dims).filter(|&e| e != d) {
                let rest: BigRational = (0..dims)
                    .filter(|&e| e != d && e != d2)
                    .fold(BigRational::one(), |acc, e| acc * &counts[e]);
                total += &abs[d] * &abs[d2] * rest;
            }
            total
        })
        .max()
        .unwrap_or_else(BigRational::zero)
}

/// Periodic lattice constant,
/// `N^(D-2) [ (D-1) ((N^2 - d)/4)^2 + N * N (N^2 + 2 - 3d) / 12 ]`
/// with `d = N mod 2`; unequal extents use the per-axis form of the same sum.
pub fn periodic_exact(extents: &[usize]) -> BigRational {
    let n = extents[0];
    if extents.iter().all(|&m| m == n) {
        let dims = extents.len() as i64;
        let nn = int(n);
        let delta = n % 2;
        let t1 = (int(n * n) - int(delta)) / int(4);
        let t2 = &nn * (int(n * n + 2) - int(3 * delta)) / int(12);
        return pow(&nn, dims - 2) * (int(extents.len() - 1) * &t1 * &t1 + &nn * t2);
    }
    let counts: Vec<_> = extents.iter().map(|&m| int(m)).collect();
    let abs: Vec<_> = extents.iter().map(|&m| periodic_abs_sum(m)).collect();
    let sq: Vec<_> = extents.iter().map(|&m| periodic_sq_sum(m)).collect();
    axis_bracket(&counts, &abs, &sq)
}

/// Open lattice constant,
/// `(2N-1)^(D-2) [ (D-1) N^2 (N-1)^2 + (2N-1) N (N-1) (2N-1) / 3 ]`;
/// unequal extents use the per-axis form.
pub fn open_exact(extents: &[usize]) -> BigRational {
    let n = extents[0];
    if extents.iter().all(|&m| m == n) {
        let dims = extents.len() as i64;
        let w = int(2 * n - 1);
        let s1 = int(n * (n - 1));
        let s2 = int(n * (n - 1) * (2 * n - 1)) / int(3);
        return pow(&w, dims - 2) * (int(extents.len() - 1) * &s1 * &s1 + &w * s2);
    }
    let counts: Vec<_> = extents.iter().map(|&m| int(2 * m - 1)).collect();
    let abs: Vec<_> = extents.iter().map(|&m| open_abs_sum(m)).collect();
    let sq: Vec<_> = extents.iter().map(|&m| open_sq_sum(m)).collect();
    axis_bracket(&counts, &abs, &sq)
}

/// Leading large-N coefficient of the periodic constant, `(3D+1)/48`.
pub fn periodic_leading_coefficient(dims: usize) -> f64 {
    (3 * dims + 1) as f64 / 48.0
}

/// Leading large-N coefficient of the open constant, `(3D+1) 2^D / 12`.
pub fn open_leading_coefficient(dims: usize) -> f64 {
    (3 * dims + 1) as f64 * 2f64.powi(dims as i32) / 12.0
}

#[derive(Debug, Clone, Copy)]
pub enum ClosedForm<'a> {
    /// `Ntot (Ntot - 1)^2`.
    Generic { n_sites: usize },
    /// `diam * Ntot (Ntot - 1)`.
    Diameter(&'a Graph),
    Periodic { dims: usize, side: usize },
    Open { dims: usize, side: usize },
}

pub fn closed_form_constant(variant: ClosedForm<'_>) -> Result<BoundSpec> {
    match variant {
        ClosedForm::Generic { n_sites } => {
            if n_sites < 2 {
                return Err(Error::InvalidArgument(format!("need at least 2 sites, got {n_sites}")));
            }
            let c = int(n_sites) * int(n_sites - 1) * int(n_sites - 1);
            Ok(BoundSpec::exact(
                &c,
                Provenance::Generic,
                BoundParams {
                    n_sites: Some(n_sites),
                    ..BoundParams::default()
                },
            ))
        }
        ClosedForm::Diameter(g) => {
            let n = g.n_sites();
            let diam = g.diameter();
            let c = int(diam) * int(n) * int(n - 1);
            Ok(BoundSpec::exact(
                &c,
                Provenance::Diameter,
                BoundParams {
                    n_sites: Some(n),
                    diameter: Some(diam),
                    ..BoundParams::default()
                },
            ))
        }
        ClosedForm::Periodic { dims, side } => {
            lattice_constant(&LatticeSpec::new(dims, side, Boundary::Periodic)?)
        }
        ClosedForm::Open { dims, side } => {
            lattice_constant(&LatticeSpec::new(dims, side, Boundary::Open)?)
        }
    }
}

/// Exact lattice constant for the lattice's boundary condition.
pub fn lattice_constant(spec: &LatticeSpec) -> Result<BoundSpec> {
    let (value, provenance) = match spec.boundary() {
        Boundary::Periodic => (periodic_exact(spec.extents()), Provenance::PeriodicExact),
        Boundary::Open => (open_exact(spec.extents()), Provenance::OpenExact),
    };
    Ok(BoundSpec::exact(&value, provenance, BoundParams::lattice(spec)))
}

/// Both nonzero eigenvalues (each doubly degenerate) of
/// `a P12 + b P23 - P13` on three qubits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeQubitSpectrum {
    pub upper: f64,
    pub lower: f64,
    pub psd: bool,
}

/// `(-1 + a + b +/- sqrt(1 + a + b - ab + a^2 + b^2)) / 2`.
pub fn three_qubit_eigenvalues(a: f64, b: f64) -> Result<ThreeQubitSpectrum> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "coefficients must be positive, got ({a}, {b})"
        )));
    }
    let root = (1.0 + a + b - a * b + a * a + b * b).sqrt();
    Ok(ThreeQubitSpectrum {
        upper: 0.5 * (-1.0 + a + b + root),
        lower: 0.5 * (-1.0 + a + b - root),
        psd: three_qubit_psd(a, b),
    })
}

/// `ab >= a + b`, up to rounding in the product.
pub fn three_qubit_psd(a: f64, b: f64) -> bool {
    a * b - (a + b) >= -4.0 * f64::EPSILON * (a * b).abs().max(a + b)
}

/// `a P(0,1) + b P(1,2) - P(0,2)` on three qubits.
pub fn three_qubit_operator(a: f64, b: f64) -> ProjectorSum {
    ProjectorSum::new(3, [(0, 1, a), (1, 2, b), (0, 2, -1.0)]).expect("valid pairs")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Gauge {
    Raw,
    WeaklyHomogeneous,
}

/// Symmetric coupling matrix `J_ik` of `H = sum_{i,k} J_ik s_i . s_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    matrix: DMatrix<f64>,
    gauge: Gauge,
}

impl CouplingMatrix {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::SizeMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coupling".into()));
        }
        if (&matrix - matrix.transpose()).amax() > 0.0 {
            return Err(Error::InvalidArgument("coupling matrix is not symmetric".into()));
        }
        Ok(CouplingMatrix {
            matrix,
            gauge: Gauge::Raw,
        })
    }

    /// `J_ik = -2J` for every ordered adjacent pair, so that
    /// `sum_{i,k} J_ik s_i . s_k = -J sum_E sigma_i . sigma_k`.
    pub fn from_graph(g: &Graph, coupling: f64) -> Self {
        let n = g.n_sites();
        let mut m = DMatrix::zeros(n, n);
        for &(i, k) in g.edges() {
            m[(i, k)] = -2.0 * coupling;
            m[(k, i)] = -2.0 * coupling;
        }
        CouplingMatrix {
            matrix: m,
            gauge: Gauge::Raw,
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn gauge(&self) -> Gauge {
        self.gauge
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.matrix.row_iter().map(|r| r.sum()).collect()
    }

    /// Largest deviation of a row sum from their mean.
    pub fn row_sum_spread(&self) -> f64 {
        let sums = self.row_sums();
        let mean = sums.iter().sum::<f64>() / sums.len() as f64;
        sums.iter().map(|s| (s - mean).abs()).fold(0.0, f64::max)
    }

    /// Ascending eigenvalues.
    pub fn spectrum(&self) -> Vec<f64> {
        sorted_symmetric_eigen(self.matrix.clone()).0
    }
}

/// Replaces the diagonal with
/// `J_ll = (1/Ntot) sum_{i,k} J_ik - sum_{i != l} J_il`,
/// which leaves the off-diagonal couplings and the trace unchanged and makes
/// every row sum equal.
pub fn gauge_weak_homogeneity(m: &CouplingMatrix) -> CouplingMatrix {
    let n = m.matrix.nrows();
    let total: f64 = m.matrix.sum();
    let mut out = m.matrix.clone();
    for l in 0..n {
        let off: f64 = (0..n).filter(|&i| i != l).map(|i| m.matrix[(i, l)]).sum();
        out[(l, l)] = total / n as f64 - off;
    }
    CouplingMatrix {
        matrix: out,
        gauge: Gauge::WeaklyHomogeneous,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeCheck {
    pub j_expected: f64,
    pub j_min_expected: f64,
    pub j_deviation: f64,
    pub j_min_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaerwinkelBound {
    pub bound: BoundSpec,
    /// Eigenvalue on the all-ones vector.
    pub j: f64,
    /// Smallest eigenvalue orthogonal to the all-ones vector.
    pub j_min: f64,
    /// Next smallest; equal to `j_min` when that is degenerate.
    pub j2: f64,
    pub coupling: f64,
    pub spin: f64,
    /// Gauged coupling spectrum, ascending.
    pub coupling_spectrum: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice_check: Option<LatticeCheck>,
}

/// Analytic gauged coupling spectrum of a periodic lattice,
/// `-4J sum_d cos(2 pi m_d / N_d)` over all momenta, ascending.
pub fn periodic_coupling_spectrum(spec: &LatticeSpec, coupling: f64) -> Vec<f64> {
    let mut out: Vec<f64> = (0..spec.n_sites())
        .map(|site| {
            spec.coords(site)
                .iter()
                .zip(spec.extents())
                .map(|(&m, &n)| {
                    -4.0 * coupling * (2.0 * std::f64::consts::PI * m as f64 / n as f64).cos()
                })
                .sum()
        })
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Spectral bound `H >= (j - j_min)/Ntot S^2 + Ntot j_min s(s+1)
/// + (Ntot - 1)(j2 - j_min) s` for the weakly homogeneous gauge, converted
/// to `dS2 <= slope * dH/4J + offset` with `E* = -J |E|`.
pub fn baerwinkel_bound(g: &Graph, coupling: f64, spin: f64) -> Result<BaerwinkelBound> {
    if coupling.is_nan() || coupling <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "conversion needs a ferromagnetic coupling J > 0, got {coupling}"
        )));
    }
    if spin != 0.5 {
        return Err(Error::InvalidArgument(format!(
            "conversion to dS2 form is defined for s = 1/2 only, got {spin}"
        )));
    }
    let n = g.n_sites();
    let gauged = gauge_weak_homogeneity(&CouplingMatrix::from_graph(g, coupling));
    let spectrum = gauged.spectrum();
    let sums = gauged.row_sums();
    let j = sums.iter().sum::<f64>() / n as f64;
    let drop = spectrum
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - j).abs().total_cmp(&(b.1 - j).abs()))
        .map(|(i, _)| i)
        .expect("non-empty spectrum");
    let perp: Vec<f64> = spectrum
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != drop)
        .map(|(_, &v)| v)
        .collect();
    let j_min = perp[0];
    let j2 = perp.get(1).copied().unwrap_or(j_min);
    let alpha = (j_min - j) / n as f64;
    if alpha.is_nan() || alpha <= 1e-12 * j.abs().max(1.0) {
        return Err(Error::InvalidArgument(format!(
            "flat coupling spectrum: j = {j}, j_min = {j_min}"
        )));
    }
    let nf = n as f64;
    let k = nf * j_min * spin * (spin + 1.0) + (nf - 1.0) * (j2 - j_min) * spin;
    let e_star = -coupling * g.n_edges() as f64;
    let slope = 4.0 * coupling / alpha;
    let offset = (e_star + alpha * max_spin_squared(n) - k) / alpha;

    let lattice_check = g
        .lattice_spec()
        .filter(|s| s.boundary() == Boundary::Periodic)
        .map(|s| {
            let dims = s.dims() as f64;
            let nmax = *s.extents().iter().max().unwrap() as f64;
            let j_expected = -4.0 * coupling * dims;
            let j_min_expected =
                -4.0 * coupling * (dims - 1.0 + (2.0 * std::f64::consts::PI / nmax).cos());
            LatticeCheck {
                j_expected,
                j_min_expected,
                j_deviation: (j - j_expected).abs(),
                j_min_deviation: (j_min - j_min_expected).abs(),
            }
        });
    let params = match g.lattice_spec() {
        Some(s) => BoundParams::lattice(s),
        None => BoundParams {
            n_sites: Some(n),
            ..BoundParams::default()
        },
    };
    Ok(BaerwinkelBound {
        bound: BoundSpec {
            slope,
            offset,
            provenance: Provenance::Baerwinkel,
            exact_slope: None,
            params,
        },
        j,
        j_min,
        j2,
        coupling,
        spin,
        coupling_spectrum: spectrum,
        lattice_check,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tighter {
    First,
    Second,
    Equal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub from: f64,
    pub to: f64,
    pub tighter: Tighter,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub first: BoundSpec,
    pub second: BoundSpec,
    pub x_max: f64,
    pub crossovers: Vec<f64>,
    pub segments: Vec<Segment>,
    pub at_zero: [f64; 2],
    pub at_max: [f64; 2],
}

/// Number of bonds, the largest possible `dH/4J` eigenvalue (`D N^D` on a
/// periodic lattice).
pub fn default_x_max(g: &Graph) -> f64 {
    g.n_edges() as f64
}

/// Where each affine bound is tighter (smaller) on `[0, x_max]`.
pub fn compare_bounds(first: &BoundSpec, second: &BoundSpec, x_max: f64) -> ComparisonReport {
    let tighter_at = |x: f64| {
        let (a, b) = (first.evaluate(x), second.evaluate(x));
        if (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0) {
            Tighter::Equal
        } else if a < b {
            Tighter::First
        } else {
            Tighter::Second
        }
    };
    let mut crossovers = Vec::new();
    let ds = first.slope - second.slope;
    if ds != 0.0 {
        let x = (second.offset - first.offset) / ds;
        if (0.0..=x_max).contains(&x) {
            crossovers.push(x);
        }
    }
    let mut cuts = vec![0.0];
    cuts.extend(crossovers.iter().copied().filter(|&x| x > 0.0 && x < x_max));
    cuts.push(x_max);
    let segments = cuts
        .windows(2)
        .map(|w| Segment {
            from: w[0],
            to: w[1],
            tighter: tighter_at(0.5 * (w[0] + w[1])),
        })
        .collect();
    ComparisonReport {
        first: first.clone(),
        second: second.clone(),
        x_max,
        crossovers,
        segments,
        at_zero: [first.evaluate(0.0), second.evaluate(0.0)],
        at_max: [first.evaluate(x_max), second.evaluate(x_max)],
    }
}
