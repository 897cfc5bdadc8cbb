//! Matrix Market export of sector operators, and two-column state files.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::SectorBasis;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::magnon::StateVector;
use crate::operators::{ProjectorSum, SparseOperator};

const HEADER: &str = "%%MatrixMarket matrix coordinate real symmetric";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OperatorKind {
    #[serde(rename = "deltaH")]
    DeltaH,
    #[serde(rename = "deltaS2")]
    DeltaS2,
}

impl std::str::FromStr for OperatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "deltaH" | "dH" | "delta-h" => Ok(OperatorKind::DeltaH),
            "deltaS2" | "dS2" | "delta-s2" => Ok(OperatorKind::DeltaS2),
            other => Err(Error::InvalidArgument(format!("unknown operator '{other}'"))),
        }
    }
}

impl std::fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OperatorKind::DeltaH => "deltaH",
            OperatorKind::DeltaS2 => "deltaS2",
        })
    }
}

/// Sparse symmetric matrix in 0-based coordinates, lower triangle only.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricCoo {
    pub dim: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

impl SymmetricCoo {
    pub fn from_operator(op: &SparseOperator) -> Self {
        let mut entries: Vec<_> = op.entries().into_iter().filter(|&(r, c, _)| r >= c).collect();
        entries.sort_by_key(|&(r, c, _)| (r, c));
        SymmetricCoo {
            dim: op.basis().dim(),
            entries,
        }
    }

    /// Both triangles, sorted `(row, col)`.
    pub fn full_entries(&self) -> Vec<(usize, usize, f64)> {
        let mut out: Vec<_> = self
            .entries
            .iter()
            .flat_map(|&(r, c, v)| {
                let mirror = (r != c).then_some((c, r, v));
                std::iter::once((r, c, v)).chain(mirror)
            })
            .collect();
        out.sort_by_key(|&(r, c, _)| (r, c));
        out
    }

    pub fn to_matrix_market(&self, comment: Option<&str>) -> String {
        let mut s = String::new();
        s.push_str(HEADER);
        s.push('\n');
        if let Some(c) = comment {
            for line in c.lines() {
                let _ = writeln!(s, "% {line}");
            }
        }
        let _ = writeln!(s, "{} {} {}", self.dim, self.dim, self.entries.len());
        for &(r, c, v) in &self.entries {
            let _ = writeln!(s, "{} {} {}", r + 1, c + 1, v);
        }
        s
    }

    pub fn parse_matrix_market(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let header = lines.next().map(|(_, l)| l).unwrap_or("");
        let banner: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
        if banner != ["%%matrixmarket", "matrix", "coordinate", "real", "symmetric"] {
            return Err(Error::Parse {
                line: 1,
                message: format!("unsupported header '{header}'"),
            });
        }
        let mut body = lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));
        let (size_line, size) = body.next().ok_or(Error::Parse {
            line: 1,
            message: "missing size line".into(),
        })?;
        let nums = parse_fields::<usize>(size, size_line, 3)?;
        if nums[0] != nums[1] {
            return Err(Error::Parse {
                line: size_line,
                message: "symmetric matrix must be square".into(),
            });
        }
        let mut entries = Vec::with_capacity(nums[2]);
        for (line, l) in body {
            let f: Vec<&str> = l.split_whitespace().collect();
            if f.len() != 3 {
                return Err(Error::Parse {
                    line,
                    message: format!("expected 3 fields, found {}", f.len()),
                });
            }
            let idx = |s: &str| -> Result<usize> {
                match s.parse::<usize>() {
                    Ok(i) if (1..=nums[0]).contains(&i) => Ok(i - 1),
                    _ => Err(Error::Parse {
                        line,
                        message: format!("bad index '{s}'"),
                    }),
                }
            };
            let (r, c) = (idx(f[0])?, idx(f[1])?);
            if r < c {
                return Err(Error::Parse {
                    line,
                    message: "entry above the diagonal in a symmetric file".into(),
                });
            }
            let v = f[2].parse::<f64>().map_err(|_| Error::Parse {
                line,
                message: format!("bad value '{}'", f[2]),
            })?;
            entries.push((r, c, v));
        }
        if entries.len() != nums[2] {
            return Err(Error::SizeMismatch {
                expected: nums[2],
                found: entries.len(),
            });
        }
        Ok(SymmetricCoo { dim: nums[0], entries })
    }
}

fn parse_fields<T: std::str::FromStr>(l: &str, line: usize, count: usize) -> Result<Vec<T>> {
    let out: Vec<T> = l
        .split_whitespace()
        .map(|s| s.parse::<T>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Parse {
            line,
            message: format!("cannot parse '{l}'"),
        })?;
    if out.len() != count {
        return Err(Error::Parse {
            line,
            message: format!("expected {count} fields, found {}", out.len()),
        });
    }
    Ok(out)
}

pub fn sector_operator(g: &Graph, sector: usize, which: OperatorKind) -> Result<SparseOperator> {
    let basis = Arc::new(SectorBasis::new(g.n_sites(), sector)?);
    let sum = match which {
        OperatorKind::DeltaH => ProjectorSum::delta_hamiltonian(g),
        OperatorKind::DeltaS2 => ProjectorSum::delta_spin_squared(g.n_sites()),
    };
    sum.on(basis)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportSummary {
    pub path: String,
    pub operator: OperatorKind,
    pub sector: usize,
    pub dim: usize,
    pub stored_entries: usize,
}

/// Writes one sector block of `dH/4J` or `dS2` as a symmetric coordinate
/// file (lower triangle, 1-based, sorted by row then column).
pub fn export_operator(
    g: &Graph,
    sector: usize,
    which: OperatorKind,
    path: impl AsRef<Path>,
) -> Result<ExportSummary> {
    let op = sector_operator(g, sector, which)?;
    let coo = SymmetricCoo::from_operator(&op);
    let comment = format!("{which} on {} qubits, sector {sector}", g.n_sites());
    std::fs::write(path.as_ref(), coo.to_matrix_market(Some(&comment)))?;
    Ok(ExportSummary {
        path: path.as_ref().display().to_string(),
        operator: which,
        sector,
        dim: coo.dim,
        stored_entries: coo.entries.len(),
    })
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<SymmetricCoo> {
    SymmetricCoo::parse_matrix_market(&std::fs::read_to_string(path)?)
}

/// One `re im` line per basis state, in basis order.
pub fn format_state(state: &StateVector) -> String {
    let b = state.basis();
    let mut s = format!("# n_qubits {} n_flipped {}\n", b.n_qubits(), b.n_flipped());
    for a in state.amplitudes() {
        let _ = writeln!(s, "{} {}", a.re, a.im);
    }
    s
}

pub fn parse_state(text: &str) -> Result<Vec<Complex64>> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(line, l)| {
            let v = parse_fields::<f64>(l, line, 2)?;
            Ok(Complex64::new(v[0], v[1]))
        })
        .collect()
}

pub fn write_state(state: &StateVector, path: impl AsRef<Path>) -> Result<()> {
    Ok(std::fs::write(path, format_state(state))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Boundary, LatticeSpec};
    use crate::magnon::magnon_state;

    #[test]
    fn single_edge_block() {
        let g = Graph::from_edge_list([(0, 1)]).unwrap();
        let coo = SymmetricCoo::from_operator(&sector_operator(&g, 1, OperatorKind::DeltaH).unwrap());
        assert_eq!(coo.entries, vec![(0, 0, 0.5), (1, 0, -0.5), (1, 1, 0.5)]);
        let text = coo.to_matrix_market(None);
        assert_eq!(text, format!("{HEADER}\n2 2 3\n1 1 0.5\n2 1 -0.5\n2 2 0.5\n"));
        assert_eq!(SymmetricCoo::parse_matrix_market(&text).unwrap(), coo);
    }

    #[test]
    fn ring4_sector1_counts() {
        let g = Graph::lattice(&LatticeSpec::chain(4, Boundary::Periodic).unwrap()).unwrap();
        let coo = SymmetricCoo::from_operator(&sector_operator(&g, 1, OperatorKind::DeltaH).unwrap());
        assert_eq!(coo.dim, 4);
        assert_eq!(coo.entries.len(), 8);
        assert_eq!(coo.entries.iter().filter(|e| e.0 == e.1).count(), 4);
        assert!(sector_operator(&g, 99, OperatorKind::DeltaH).is_err());
    }

    #[test]
    fn bad_files() {
        assert!(SymmetricCoo::parse_matrix_market("%%MatrixMarket matrix array real general\n").is_err());
        let upper = format!("{HEADER}\n2 2 1\n1 2 1.0\n");
        assert!(SymmetricCoo::parse_matrix_market(&upper).is_err());
        let short = format!("{HEADER}\n2 2 2\n1 1 1.0\n");
        assert!(SymmetricCoo::parse_matrix_market(&short).is_err());
    }

    #[test]
    fn state_round_trip() {
        let spec = LatticeSpec::chain(5, Boundary::Periodic).unwrap();
        let v = magnon_state(&spec, &[2]).unwrap();
        let back = parse_state(&format_state(&v)).unwrap();
        assert_eq!(back, v.amplitudes());
    }
}
