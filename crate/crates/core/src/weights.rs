//! Path-weight assignments.
//!
//! Each ordered pair `(i, k)` is routed along a path with weights `c_l` on
//! its edges, `sum 1/c_l = 1`. The chain inequality gives
//! `P(i,k) <= sum_l c_l P(edge_l)`, so summing over all ordered pairs bounds
//! `dS2` by `sum_e load(e) P(e) <= max_e load(e) * dH/4J`.

use serde::{Deserialize, Serialize};

use crate::bounds::{BoundParams, BoundSpec, Provenance};
use crate::error::{Error, Result};
use crate::graph::{Graph, Path, Site};

const RECIPROCAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathChoice {
    /// Deterministic BFS shortest paths.
    Bfs,
    /// Axis-ordered lattice paths.
    Canonical,
}

impl std::str::FromStr for PathChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bfs" => Ok(PathChoice::Bfs),
            "canonical" => Ok(PathChoice::Canonical),
            other => Err(Error::InvalidArgument(format!("unknown path choice '{other}'"))),
        }
    }
}

/// One ordered pair's path and per-step weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRoute {
    pub source: Site,
    pub target: Site,
    pub path: Path,
    pub weights: Vec<f64>,
}

impl PairRoute {
    pub fn reciprocal_sum(&self) -> f64 {
        self.weights.iter().map(|w| 1.0 / w).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedAssignment {
    pub n_sites: usize,
    pub routes: Vec<PairRoute>,
}

impl WeightedAssignment {
    /// Checks paths, weight bounds and the reciprocal-sum condition.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.n_sites != g.n_sites() {
            return Err(Error::SizeMismatch {
                expected: g.n_sites(),
                found: self.n_sites,
            });
        }
        for r in &self.routes {
            if r.path.source() != r.source || r.path.target() != r.target || !r.path.is_valid_in(g) {
                return Err(Error::InvalidArgument(format!(
                    "route for ({}, {}) is not a simple path between them",
                    r.source, r.target
                )));
            }
            if r.weights.len() != r.path.len() {
                return Err(Error::SizeMismatch {
                    expected: r.path.len(),
                    found: r.weights.len(),
                });
            }
            let sum = r.reciprocal_sum();
            let bad_weight = r.weights.iter().any(|&w| !w.is_finite() || w < 1.0 - RECIPROCAL_TOL);
            if bad_weight || (sum - 1.0).abs() > RECIPROCAL_TOL {
                return Err(Error::ReciprocalSum {
                    source_site: r.source,
                    target_site: r.target,
                    sum,
                });
            }
        }
        Ok(())
    }

    pub fn route(&self, source: Site, target: Site) -> Option<&PairRoute> {
        self.routes
            .iter()
            .find(|r| r.source == source && r.target == target)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn route_paths(g: &Graph, paths: PathChoice) -> Result<Vec<Path>> {
    let n = g.n_sites();
    let mut out = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        let tree = match paths {
            PathChoice::Bfs => Some(g.bfs_tree(i)?),
            PathChoice::Canonical => None,
        };
        for k in (0..n).filter(|&k| k != i) {
            out.push(match &tree {
                Some(t) => t.path_to(k)?,
                None => g.canonical_path_between(i, k)?,
            });
        }
    }
    Ok(out)
}

/// Every ordered pair on its deterministic path with all weights equal to
/// the path length.
pub fn uniform_assignment(g: &Graph, paths: PathChoice) -> Result<WeightedAssignment> {
    let routes = route_paths(g, paths)?
        .into_iter()
        .map(|path| {
            let len = path.len();
            PairRoute {
                source: path.source(),
                target: path.target(),
                weights: vec![len as f64; len],
                path,
            }
        })
        .collect();
    Ok(WeightedAssignment {
        n_sites: g.n_sites(),
        routes,
    })
}

/// Accumulated weight per edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoadMap {
    pub edges: Vec<(Site, Site)>,
    pub loads: Vec<f64>,
    pub max_load: f64,
    pub argmax: (Site, Site),
}

impl LoadMap {
    pub fn load(&self, u: Site, v: Site) -> Option<f64> {
        let key = (u.min(v), u.max(v));
        self.edges.iter().position(|&e| e == key).map(|i| self.loads[i])
    }

    /// Max load as an integer, when every load is integral.
    pub fn max_load_integer(&self) -> Option<u64> {
        self.loads
            .iter()
            .all(|l| l.fract() == 0.0)
            .then_some(self.max_load as u64)
    }
}

fn route_edge_indices(g: &Graph, wa: &WeightedAssignment) -> Vec<Vec<usize>> {
    wa.routes
        .iter()
        .map(|r| {
            r.path
                .steps()
                .map(|(a, b)| g.edge_index(a, b).expect("validated path"))
                .collect()
        })
        .collect()
}

fn load_map(g: &Graph, loads: Vec<f64>) -> LoadMap {
    let (arg, max_load) = loads
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, l)| if l > acc.1 { (i, l) } else { acc });
    LoadMap {
        edges: g.edges().to_vec(),
        loads,
        max_load,
        argmax: g.edges()[arg],
    }
}

/// Per-edge loads and the induced bound `dS2 <= max_load * dH/4J`.
pub fn assignment_constant(g: &Graph, wa: &WeightedAssignment) -> Result<(LoadMap, BoundSpec)> {
    wa.validate(g)?;
    let mut loads = vec![0.0; g.n_edges()];
    for (route, edges) in wa.routes.iter().zip(route_edge_indices(g, wa)) {
        for (&e, &w) in edges.iter().zip(&route.weights) {
            loads[e] += w;
        }
    }
    let map = load_map(g, loads);
    let bound = BoundSpec::linear(
        map.max_load,
        Provenance::Assignment,
        BoundParams {
            n_sites: Some(g.n_sites()),
            ..BoundParams::default()
        },
    );
    Ok((map, bound))
}

#[derive(Debug, Clone, Copy)]
pub struct OptimizeParams {
    pub max_iter: usize,
    /// Stop when the best max load improved by less than `rel_tol`
    /// (relative) over the last `window` iterations.
    pub window: usize,
    pub rel_tol: f64,
    /// Stop when the relative duality gap drops below this.
    pub gap_tol: f64,
}

impl Default for OptimizeParams {
    fn default() -> Self {
        OptimizeParams {
            max_iter: 100_000,
            window: 50,
            rel_tol: 1e-8,
            gap_tol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizedAssignment {
    pub assignment: WeightedAssignment,
    pub loads: LoadMap,
    /// Dual certificate: no weight choice on these paths beats this value.
    pub lower_bound: f64,
    pub iterations: usize,
    /// False when the iteration budget ran out first.
    pub converged: bool,
    /// Best max load after each iteration.
    #[serde(skip)]
    pub history: Vec<f64>,
}

/// Minimizes the max edge load over weights on fixed paths.
///
/// In reciprocal coordinates `x = 1/c` each pair's weights form a simplex
/// and the loads `sum 1/x` are convex. For edge prices `p` on the unit
/// simplex, the best response on a path is `x_e ~ sqrt(p_e)`, giving the
/// concave dual `sum_pairs (sum_{e in path} sqrt(p_e))^2` whose gradient is
/// the load vector. The prices follow the multiplicative update
/// `p_e <- p_e * load_e / dual`, starting from uniform prices (uniform
/// weights). The best primal iterate is kept, and the dual value certifies
/// its gap.
pub fn optimize_weights(
    g: &Graph,
    paths: &WeightedAssignment,
    params: &OptimizeParams,
) -> Result<OptimizedAssignment> {
    if paths.n_sites != g.n_sites() {
        return Err(Error::SizeMismatch {
            expected: g.n_sites(),
            found: paths.n_sites,
        });
    }
    for r in &paths.routes {
        if !r.path.is_valid_in(g) {
            return Err(Error::InvalidArgument(format!(
                "route for ({}, {}) is not a path in the graph",
                r.source, r.target
            )));
        }
    }
    let routes = route_edge_indices(g, paths);
    let n_edges = g.n_edges();
    let mut price = vec![1.0 / n_edges as f64; n_edges];
    let mut best = f64::INFINITY;
    let mut best_price = price.clone();
    let mut lower = 0.0f64;
    let mut history = Vec::new();
    let mut converged = false;

    for iter in 0..params.max_iter {
        let root: Vec<f64> = price.iter().map(|p| p.sqrt()).collect();
        let mut load = vec![0.0; n_edges];
        for edges in &routes {
            let total: f64 = edges.iter().map(|&e| root[e]).sum();
            for &e in edges {
                load[e] += total / root[e];
            }
        }
        let max_load = load.iter().copied().fold(0.0, f64::max);
        let dual: f64 = price.iter().zip(&load).map(|(p, l)| p * l).sum();
        if max_load < best {
            best = max_load;
            best_price.clone_from(&price);
        }
        lower = lower.max(dual);
        history.push(best);

        if (best - lower) <= params.gap_tol * best {
            converged = true;
            break;
        }
        if iter >= params.window {
            let past = history[iter - params.window];
            if past - best < params.rel_tol * best {
                converged = true;
                break;
            }
        }
        for (p, l) in price.iter_mut().zip(&load) {
            *p *= l / dual;
        }
    }

    let root: Vec<f64> = best_price.iter().map(|p| p.sqrt()).collect();
    let assignment = WeightedAssignment {
        n_sites: paths.n_sites,
        routes: paths
            .routes
            .iter()
            .zip(&routes)
            .map(|(r, edges)| {
                let total: f64 = edges.iter().map(|&e| root[e]).sum();
                PairRoute {
                    source: r.source,
                    target: r.target,
                    path: r.path.clone(),
                    weights: edges.iter().map(|&e| total / root[e]).collect(),
                }
            })
            .collect(),
    };
    let (loads, _) = assignment_constant(g, &assignment)?;
    Ok(OptimizedAssignment {
        assignment,
        loads,
        lower_bound: lower.min(best),
        iterations: history.len(),
        converged,
        history,
    })
}
