//! Command-line configuration and dispatch.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{
    baerwinkel_bound, closed_form_constant, compare_bounds, default_x_max, lattice_constant, BoundParams,
    BoundSpec, ClosedForm, Provenance,
};
use crate::eigen::Method;
use crate::error::{Error, Result};
use crate::graph::{Boundary, Graph, LatticeSpec};
use crate::io::edgelist::read_edge_list;
use crate::io::mtx::{export_operator, sector_operator, write_state, OperatorKind};
use crate::io::report::{
    magnon_csv, sweep_csv, GraphSummary, MagnonRow, NamedLoadMap, OptimizationSummary, Report, SweepRow,
};
use crate::magnon::{magnon_energy, magnon_state, momentum};
use crate::spectral::{certify_inequality, optimal_constant, CertifyOptions, PencilOptions};
use crate::weights::{
    assignment_constant, optimize_weights, uniform_assignment, OptimizeParams, PathChoice, WeightedAssignment,
};

/// Environment variable read by the binary to size the worker pool.
pub const THREADS_ENV: &str = "SPIN_ENERGY_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_BOUND_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "spin-energy", version, about = "Spin-energy inequalities for Heisenberg graphs")]
pub struct CommandConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
#[group(id = "source", required = true, multiple = false)]
pub struct GraphSource {
    /// Hypercubic lattice as `DxN` (dimension by side), e.g. `1x4`.
    #[arg(long)]
    pub lattice: Option<String>,
    /// Lattice with per-axis extents, e.g. `4x3`.
    #[arg(long)]
    pub shape: Option<String>,
    /// Edge-list file.
    #[arg(long)]
    pub edges: Option<PathBuf>,
    /// Complete graph on this many sites.
    #[arg(long)]
    pub complete: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GraphArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[arg(long, default_value = "periodic", value_parser = parse_boundary)]
    pub bc: Boundary,
    /// Exchange coupling J; only scales reported energies.
    #[arg(short = 'J', long = "coupling", default_value_t = 1.0)]
    pub coupling: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CommonArgs {
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value = "auto", value_parser = parse_method)]
    pub method: Method,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also write the table (sweep or dispersion) as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Generic,
    Diameter,
    Periodic,
    Open,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Closed-form bound constants.
    Constant {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum)]
        variant: Option<Variant>,
        /// Sweep the lattice side over these values (with `--lattice`).
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Certify `dS2 <= c dH/4J` sector by sector.
    Verify {
        #[command(flatten)]
        graph: GraphArgs,
        /// Constant to test; defaults to the closed form.
        #[arg(long)]
        c: Option<f64>,
        #[arg(long, value_enum)]
        variant: Option<Variant>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Smallest valid constant.
    Optimal {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        /// Certify the result at `c_star (1 + 1e-9)`.
        #[arg(long)]
        certify: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Optimize path weights.
    Optimize {
        #[command(flatten)]
        graph: GraphArgs,
        /// Path family; canonical on lattices, bfs otherwise.
        #[arg(long, value_parser = parse_paths)]
        paths: Option<PathChoice>,
        /// Start from the paths of a saved assignment.
        #[arg(long)]
        assignment: Option<PathBuf>,
        /// Save the optimized assignment.
        #[arg(long)]
        save_assignment: Option<PathBuf>,
        #[arg(long, default_value_t = 100_000)]
        max_iter: usize,
        #[arg(long)]
        certify: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Compare against the weak-homogeneity spectral bound.
    Compare {
        #[command(flatten)]
        graph: GraphArgs,
        /// Our slope; defaults to the closed form.
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        x_max: Option<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Single-magnon states and dispersion.
    Magnon {
        #[command(flatten)]
        graph: GraphArgs,
        /// Integer momentum per axis; all momenta when omitted.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        momentum: Vec<i64>,
        /// Write the state for `--momentum` as two-column text.
        #[arg(long, requires = "momentum")]
        state_out: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Export a sector block in Matrix Market format.
    Export {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        sector: usize,
        #[arg(long, default_value = "deltaH", value_parser = parse_operator)]
        which: OperatorKind,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn parse_boundary(s: &str) -> Result<Boundary> {
    s.parse()
}

fn parse_method(s: &str) -> Result<Method> {
    s.parse()
}

fn parse_paths(s: &str) -> Result<PathChoice> {
    s.parse()
}

fn parse_operator(s: &str) -> Result<OperatorKind> {
    s.parse()
}

fn parse_dims(s: &str) -> Result<Vec<usize>> {
    s.split(['x', 'X'])
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidLattice(format!("cannot parse '{s}'")))
        })
        .collect()
}

/// `DxN` into `(D, N)`.
pub fn parse_lattice(s: &str) -> Result<(usize, usize)> {
    match parse_dims(s)?.as_slice() {
        &[d, n] => Ok((d, n)),
        _ => Err(Error::InvalidLattice(format!("expected DxN, got '{s}'"))),
    }
}

impl GraphArgs {
    pub fn lattice_spec(&self) -> Result<Option<LatticeSpec>> {
        let s = &self.source;
        if let Some(l) = &s.lattice {
            let (d, n) = parse_lattice(l)?;
            return Ok(Some(LatticeSpec::new(d, n, self.bc)?));
        }
        if let Some(shape) = &s.shape {
            return Ok(Some(LatticeSpec::with_extents(parse_dims(shape)?, self.bc)?));
        }
        Ok(None)
    }

    pub fn build(&self) -> Result<Graph> {
        if let Some(spec) = self.lattice_spec()? {
            return Graph::lattice(&spec);
        }
        let s = &self.source;
        if let Some(path) = &s.edges {
            return read_edge_list(path);
        }
        if let Some(n) = s.complete {
            return Graph::complete(n);
        }
        Err(Error::InvalidArgument("no graph source given".into()))
    }

    /// Same geometry with a different side, for sweeps.
    fn with_side(&self, side: usize) -> Result<Graph> {
        let (d, _) = parse_lattice(
            self.source
                .lattice
                .as_deref()
                .ok_or_else(|| Error::InvalidArgument("--sizes needs --lattice".into()))?,
        )?;
        Graph::lattice(&LatticeSpec::new(d, side, self.bc)?)
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Constant { .. } => "constant",
            Command::Verify { .. } => "verify",
            Command::Optimal { .. } => "optimal",
            Command::Optimize { .. } => "optimize",
            Command::Compare { .. } => "compare",
            Command::Magnon { .. } => "magnon",
            Command::Export { .. } => "export",
        }
    }

    pub fn graph_args(&self) -> &GraphArgs {
        match self {
            Command::Constant { graph, .. }
            | Command::Verify { graph, .. }
            | Command::Optimal { graph, .. }
            | Command::Optimize { graph, .. }
            | Command::Compare { graph, .. }
            | Command::Magnon { graph, .. }
            | Command::Export { graph, .. } => graph,
        }
    }

    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::Constant { common, .. }
            | Command::Verify { common, .. }
            | Command::Optimal { common, .. }
            | Command::Optimize { common, .. }
            | Command::Compare { common, .. }
            | Command::Magnon { common, .. }
            | Command::Export { common, .. } => common,
        }
    }
}

/// Closed form for a graph: the named variant, or the lattice's own
/// boundary, or the generic constant.
pub fn default_constant(g: &Graph, variant: Option<Variant>) -> Result<BoundSpec> {
    let spec = g.lattice_spec();
    match (variant, spec) {
        (Some(Variant::Generic), _) | (None, None) => closed_form_constant(ClosedForm::Generic {
            n_sites: g.n_sites(),
        }),
        (Some(Variant::Diameter), _) => closed_form_constant(ClosedForm::Diameter(g)),
        (Some(v @ (Variant::Periodic | Variant::Open)), Some(spec)) => {
            let bc = if v == Variant::Periodic {
                Boundary::Periodic
            } else {
                Boundary::Open
            };
            lattice_constant(&LatticeSpec::with_extents(spec.extents().to_vec(), bc)?)
        }
        (Some(_), None) => Err(Error::InvalidArgument(
            "lattice variants need --lattice or --shape".into(),
        )),
        (None, Some(spec)) => lattice_constant(spec),
    }
}

fn certify_opts(common: &CommonArgs) -> CertifyOptions {
    CertifyOptions {
        tol: common.tol,
        method: common.method,
        seed: common.seed,
        all_sectors: None,
    }
}

fn pencil_opts(common: &CommonArgs) -> PencilOptions {
    PencilOptions {
        method: common.method,
        seed: common.seed,
        ..PencilOptions::default()
    }
}

/// Numerical failures go into the report; everything else is a usage error.
fn absorb<T>(report: &mut Report, r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e @ Error::NoConvergence { .. }) => {
            report.failures.push(e.to_string());
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

/// Runs one command and returns its report. Files named by the command
/// (exports, CSV, saved assignments) are written here; the report itself is
/// left to the caller.
pub fn run(config: &CommandConfig) -> Result<Report> {
    let start = Instant::now();
    let cmd = &config.command;
    let common = cmd.common();
    if common.tol.is_nan() || common.tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", common.tol)));
    }
    let mut report = Report::new(cmd.name(), serde_json::to_value(config)?);
    let graph_args = cmd.graph_args();
    let g = graph_args.build()?;
    report.graph = Some(GraphSummary::of(&g));

    match cmd {
        Command::Constant { variant, sizes, .. } => {
            if sizes.is_empty() {
                report.bounds.push(default_constant(&g, *variant)?);
            } else {
                for &n in sizes {
                    let gn = graph_args.with_side(n)?;
                    let b = default_constant(&gn, *variant)?;
                    report.sweep.push(SweepRow {
                        dims: gn.lattice_spec().map_or(0, |s| s.dims()),
                        side: n,
                        n_sites: gn.n_sites(),
                        value: b.slope,
                        exact: b.exact_slope.clone(),
                        method: None,
                    });
                    report.bounds.push(b);
                }
            }
        }
        Command::Verify { c, variant, .. } => {
            let bound = match c {
                Some(c) => BoundSpec::linear(*c, Provenance::Supplied, BoundParams::default()),
                None => default_constant(&g, *variant)?,
            };
            if let Some(cert) = absorb(&mut report, certify_inequality(&g, bound.slope, &certify_opts(common)))? {
                report.pass = Some(cert.pass);
                report.certificates.push(cert);
            } else {
                report.pass = Some(false);
            }
            report.bounds.push(bound);
        }
        Command::Optimal { sizes, certify, .. } => {
            let graphs = if sizes.is_empty() {
                vec![g.clone()]
            } else {
                sizes.iter().map(|&n| graph_args.with_side(n)).collect::<Result<_>>()?
            };
            for gn in &graphs {
                let Some(res) = absorb(&mut report, optimal_constant(gn, &pencil_opts(common)))? else {
                    continue;
                };
                if *certify {
                    let c = res.c_star * (1.0 + 1e-9);
                    if let Some(cert) = absorb(&mut report, certify_inequality(gn, c, &certify_opts(common)))? {
                        if !cert.pass {
                            report.failures.push(format!("certificate failed at c_star(1 + 1e-9) = {c}"));
                        }
                        report.certificates.push(cert);
                    }
                }
                report.bounds.push(BoundSpec::linear(
                    res.c_star,
                    Provenance::Optimal,
                    BoundParams {
                        n_sites: Some(gn.n_sites()),
                        ..BoundParams::default()
                    },
                ));
                if !sizes.is_empty() {
                    let spec = gn.lattice_spec().expect("sweeps use lattices");
                    report.sweep.push(SweepRow {
                        dims: spec.dims(),
                        side: spec.extents()[0],
                        n_sites: gn.n_sites(),
                        value: res.c_star,
                        exact: None,
                        method: Some(res.method),
                    });
                }
                report.optimal = Some(res);
            }
        }
        Command::Optimize {
            paths,
            assignment,
            save_assignment,
            max_iter,
            certify,
            ..
        } => {
            let start_wa = match assignment {
                Some(path) => WeightedAssignment::from_json(&std::fs::read_to_string(path)?)?,
                None => {
                    let choice = paths.unwrap_or(if g.lattice_spec().is_some() {
                        PathChoice::Canonical
                    } else {
                        PathChoice::Bfs
                    });
                    uniform_assignment(&g, choice)?
                }
            };
            let (start_loads, start_bound) = assignment_constant(&g, &start_wa)?;
            let params = OptimizeParams {
                max_iter: *max_iter,
                ..OptimizeParams::default()
            };
            let opt = optimize_weights(&g, &start_wa, &params)?;
            let (_, opt_bound) = assignment_constant(&g, &opt.assignment)?;
            if !opt.converged {
                report.failures.push(format!("weight optimization hit the {max_iter} iteration cap"));
            }
            report.optimization = Some(OptimizationSummary {
                uniform_max_load: start_loads.max_load,
                optimized_max_load: opt.loads.max_load,
                lower_bound: opt.lower_bound,
                iterations: opt.iterations,
                converged: opt.converged,
            });
            report.load_maps.push(NamedLoadMap {
                label: "initial".into(),
                loads: start_loads,
            });
            report.load_maps.push(NamedLoadMap {
                label: "optimized".into(),
                loads: opt.loads.clone(),
            });
            if *certify {
                for b in [&start_bound, &opt_bound] {
                    if let Some(cert) = absorb(&mut report, certify_inequality(&g, b.slope, &certify_opts(common)))? {
                        if !cert.pass {
                            report.failures.push(format!("assignment constant {} failed certification", b.slope));
                        }
                        report.certificates.push(cert);
                    }
                }
            }
            report.bounds.push(start_bound);
            report.bounds.push(opt_bound);
            if let Some(path) = save_assignment {
                std::fs::write(path, opt.assignment.to_json()?)?;
            }
        }
        Command::Compare { c, x_max, .. } => {
            let ours = match c {
                Some(c) => BoundSpec::linear(*c, Provenance::Supplied, BoundParams::default()),
                None => default_constant(&g, None)?,
            };
            let theirs = baerwinkel_bound(&g, graph_args.coupling.abs(), 0.5)?;
            let x_max = x_max.unwrap_or_else(|| default_x_max(&g));
            report.comparisons.push(compare_bounds(&ours, &theirs.bound, x_max));
            report.bounds.push(ours);
            report.bounds.push(theirs.bound.clone());
            report.baerwinkel = Some(theirs);
        }
        Command::Magnon { momentum: m, state_out, .. } => {
            let spec = g
                .lattice_spec()
                .cloned()
                .ok_or_else(|| Error::InvalidArgument("magnons need a periodic lattice".into()))?;
            let momenta: Vec<Vec<i64>> = if m.is_empty() {
                all_momenta(spec.extents())
            } else {
                vec![m.clone()]
            };
            for mom in momenta {
                let v = magnon_state(&spec, &mom)?;
                let h = sector_operator(&g, 1, OperatorKind::DeltaH)?;
                let s2 = sector_operator(&g, 1, OperatorKind::DeltaS2)?;
                let delta_h = v.expectation(&h)?;
                report.magnons.push(MagnonRow {
                    k: momentum(&spec, &mom),
                    delta_h,
                    expected_delta_h: magnon_energy(&spec, &mom),
                    energy: 4.0 * graph_args.coupling * delta_h,
                    residual: v.eigen_residual(&h)?,
                    delta_s2: v.expectation(&s2)?,
                    momentum: mom,
                });
                if let Some(path) = state_out {
                    write_state(&v, path)?;
                }
            }
            let n = g.n_sites() as f64;
            report.notes.push(format!(
                "nonzero-momentum magnons carry dS2 = Ntot = {n}; the value Ntot/2 + 1/4 = {} does not match",
                n / 2.0 + 0.25
            ));
        }
        Command::Export { sector, which, out, .. } => {
            report.exports.push(export_operator(&g, *sector, *which, out)?);
        }
    }

    if let Some(path) = &common.csv {
        let table = if report.magnons.is_empty() {
            sweep_csv(&report.sweep)
        } else {
            magnon_csv(&report.magnons)
        };
        std::fs::write(path, table)?;
    }
    report.timing.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

fn all_momenta(extents: &[usize]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &n in extents {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..n as i64).map(move |m| {
                    let mut v = prefix.clone();
                    v.push(m);
                    v
                })
            })
            .collect();
    }
    out
}

/// Sizes the global rayon pool from [`THREADS_ENV`] when set.
pub fn init_threads() -> Result<Option<usize>> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("{THREADS_ENV}='{value}' is not a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(Some(n))
}

/// Parses, runs and writes the report; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match CommandConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let report = match run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let json = report.to_json();
    match &config.command.common().output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, json + "\n") {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
        }
        None => {
            use std::io::Write;
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout().lock(), "{json}");
        }
    }
    for f in &report.failures {
        eprintln!("failure: {f}");
    }
    report.exit_code()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<Report> {
        let mut full = vec!["spin-energy"];
        full.extend_from_slice(args);
        run(&CommandConfig::try_parse_from(full).expect("valid args"))
    }

    #[test]
    fn constant_ring4() {
        let r = run_args(&["constant", "--lattice", "1x4", "--bc", "periodic", "--variant", "periodic"]).unwrap();
        assert_eq!(r.bounds[0].slope, 6.0);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn verify_ring4() {
        let r = run_args(&["verify", "--lattice", "1x4", "--bc", "periodic", "--c", "6"]).unwrap();
        assert_eq!(r.pass, Some(true));
        assert_eq!(r.certificates.len(), 1);
        let r = run_args(&["verify", "--lattice", "1x4", "--c", "5"]).unwrap();
        assert_eq!(r.pass, Some(false));
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn compare_ring4() {
        let r = run_args(&["compare", "--lattice", "1x4", "--bc", "periodic"]).unwrap();
        let cmp = &r.comparisons[0];
        assert_eq!(cmp.first.slope, 6.0);
        assert!((cmp.second.slope - 4.0).abs() < 1e-9);
        assert!((cmp.second.offset - 2.0).abs() < 1e-9);
        assert_eq!(cmp.crossovers.len(), 1);
        assert!((cmp.crossovers[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn graph_source_is_exclusive() {
        assert!(CommandConfig::try_parse_from(["spin-energy", "constant"]).is_err());
        assert!(CommandConfig::try_parse_from([
            "spin-energy",
            "constant",
            "--lattice",
            "1x4",
            "--complete",
            "3"
        ])
        .is_err());
        assert!(run_args(&["verify", "--complete", "3", "--tol", "0"]).is_err());
    }

    #[test]
    fn lattice_strings() {
        assert_eq!(parse_lattice("2x3").unwrap(), (2, 3));
        assert!(parse_lattice("2x3x4").is_err());
        assert!(parse_lattice("ax3").is_err());
    }

    #[test]
    fn momenta_enumeration() {
        assert_eq!(all_momenta(&[2, 3]).len(), 6);
        assert_eq!(all_momenta(&[3])[2], vec![2]);
    }
}
