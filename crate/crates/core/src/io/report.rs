//! JSON report and CSV tables.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bounds::{BaerwinkelBound, BoundSpec, ComparisonReport};
use crate::eigen::Method;
use crate::graph::{Boundary, Graph};
use crate::io::mtx::ExportSummary;
use crate::spectral::{Certificate, PencilResult};
use crate::weights::LoadMap;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub n_sites: usize,
    pub n_edges: usize,
    pub diameter: usize,
    pub lattice: Option<String>,
    pub boundary: Option<Boundary>,
}

impl GraphSummary {
    pub fn of(g: &Graph) -> Self {
        GraphSummary {
            n_sites: g.n_sites(),
            n_edges: g.n_edges(),
            diameter: g.diameter(),
            lattice: g.lattice_spec().map(|s| s.to_string()),
            boundary: g.lattice_spec().map(|s| s.boundary()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedLoadMap {
    pub label: String,
    pub loads: LoadMap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationSummary {
    pub uniform_max_load: f64,
    pub optimized_max_load: f64,
    pub lower_bound: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MagnonRow {
    pub momentum: Vec<i64>,
    pub k: Vec<f64>,
    /// `<dH/4J>` of the plane wave.
    pub delta_h: f64,
    /// `sum_d (1 - cos k_d)`.
    pub expected_delta_h: f64,
    /// `4J <dH/4J>`.
    pub energy: f64,
    pub residual: f64,
    pub delta_s2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub dims: usize,
    pub side: usize,
    pub n_sites: usize,
    pub value: f64,
    pub exact: Option<String>,
    pub method: Option<Method>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

/// Every field is always present so the schema does not depend on the
/// subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: serde_json::Value,
    pub graph: Option<GraphSummary>,
    pub bounds: Vec<BoundSpec>,
    pub certificates: Vec<Certificate>,
    pub optimal: Option<PencilResult>,
    pub load_maps: Vec<NamedLoadMap>,
    pub optimization: Option<OptimizationSummary>,
    pub baerwinkel: Option<BaerwinkelBound>,
    pub comparisons: Vec<ComparisonReport>,
    pub magnons: Vec<MagnonRow>,
    pub exports: Vec<ExportSummary>,
    pub sweep: Vec<SweepRow>,
    pub notes: Vec<String>,
    pub failures: Vec<String>,
    /// Overall verdict of `verify`; `None` for commands without one.
    pub pass: Option<bool>,
    pub timing: Timing,
}

impl Report {
    pub fn new(command: &str, config: serde_json::Value) -> Self {
        Report {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            graph: None,
            bounds: Vec::new(),
            certificates: Vec::new(),
            optimal: None,
            load_maps: Vec::new(),
            optimization: None,
            baerwinkel: None,
            comparisons: Vec::new(),
            magnons: Vec::new(),
            exports: Vec::new(),
            sweep: Vec::new(),
            notes: Vec::new(),
            failures: Vec::new(),
            pass: None,
            timing: Timing { elapsed_ms: 0.0 },
        }
    }

    /// 0 when everything held, 1 on a failed bound or numerical failure.
    pub fn exit_code(&self) -> i32 {
        if self.failures.is_empty() && self.pass != Some(false) {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }

    /// JSON with the timing block zeroed, for reproducibility checks.
    pub fn without_timing(&self) -> Report {
        Report {
            timing: Timing { elapsed_ms: 0.0 },
            ..self.clone()
        }
    }
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("dims,side,n_sites,value\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{}", r.dims, r.side, r.n_sites, r.value);
    }
    s
}

pub fn magnon_csv(rows: &[MagnonRow]) -> String {
    let mut s = String::from("momentum,delta_h,expected_delta_h,energy,residual,delta_s2\n");
    for r in rows {
        let m: Vec<String> = r.momentum.iter().map(i64::to_string).collect();
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            m.join(" "),
            r.delta_h,
            r.expected_delta_h,
            r.energy,
            r.residual,
            r.delta_s2
        );
    }
    s
}
