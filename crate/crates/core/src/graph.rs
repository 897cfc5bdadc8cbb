//! Coupling graphs: hypercubic lattices, arbitrary edge lists, and the
//! deterministic shortest paths used to build path-weight assignments.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Site index, 0-based.
pub type Site = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    Open,
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "periodic" | "pbc" => Ok(Boundary::Periodic),
            "open" | "obc" => Ok(Boundary::Open),
            other => Err(Error::InvalidArgument(format!("unknown boundary '{other}'"))),
        }
    }
}

/// Rectangular lattice geometry. Sites are indexed row-major with the first
/// dimension varying fastest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    extents: Vec<usize>,
    boundary: Boundary,
}

impl LatticeSpec {
    /// `dims`-dimensional lattice with `side` sites along every axis.
    pub fn new(dims: usize, side: usize, boundary: Boundary) -> Result<Self> {
        Self::with_extents(vec![side; dims], boundary)
    }

    pub fn chain(side: usize, boundary: Boundary) -> Result<Self> {
        Self::new(1, side, boundary)
    }

    /// Lattice with a separate extent per dimension (e.g. a 4x3 patch).
    pub fn with_extents(extents: Vec<usize>, boundary: Boundary) -> Result<Self> {
        if extents.is_empty() {
            return Err(Error::InvalidLattice("need at least one dimension".into()));
        }
        for &n in &extents {
            if n < 2 {
                return Err(Error::InvalidLattice(format!("side length {n} < 2")));
            }
            if boundary == Boundary::Periodic && n < 3 {
                return Err(Error::InvalidLattice(format!(
                    "periodic side length {n} < 3 would duplicate edges"
                )));
            }
        }
        Ok(LatticeSpec { extents, boundary })
    }

    pub fn dims(&self) -> usize {
        self.extents.len()
    }

    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Common side length, if all extents agree.
    pub fn side(&self) -> Option<usize> {
        let n = self.extents[0];
        self.extents.iter().all(|&m| m == n).then_some(n)
    }

    pub fn n_sites(&self) -> usize {
        self.extents.iter().product()
    }

    pub fn site_index(&self, coords: &[usize]) -> Site {
        let mut idx = 0;
        let mut stride = 1;
        for (&x, &n) in coords.iter().zip(&self.extents) {
            idx += x * stride;
            stride *= n;
        }
        idx
    }

    pub fn coords(&self, mut site: Site) -> Vec<usize> {
        self.extents
            .iter()
            .map(|&n| {
                let x = site % n;
                site /= n;
                x
            })
            .collect()
    }

    /// Admissible periodic displacement range along an axis of length `n`:
    /// `[-floor((n-1)/2), ceil((n-1)/2)]`.
    pub fn periodic_range(n: usize) -> (i64, i64) {
        let n = n as i64;
        (-((n - 1) / 2), n / 2)
    }
}

impl std::fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let shape: Vec<String> = self.extents.iter().map(|n| n.to_string()).collect();
        let bc = match self.boundary {
            Boundary::Periodic => "periodic",
            Boundary::Open => "open",
        };
        write!(f, "{} {}", shape.join("x"), bc)
    }
}

/// A simple walk through the graph, stored as the visited sites.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Path {
    sites: Vec<Site>,
}

impl Path {
    pub(crate) fn from_sites(sites: Vec<Site>) -> Self {
        debug_assert!(sites.len() >= 2);
        Path { sites }
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn source(&self) -> Site {
        self.sites[0]
    }

    pub fn target(&self) -> Site {
        *self.sites.last().unwrap()
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.sites.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Steps as (from, to) pairs in walk order.
    pub fn steps(&self) -> impl Iterator<Item = (Site, Site)> + '_ {
        self.sites.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn edges(&self) -> Vec<(Site, Site)> {
        self.steps().collect()
    }

    /// True if every step is a graph edge and no site repeats.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let distinct: BTreeSet<_> = self.sites.iter().collect();
        distinct.len() == self.sites.len() && self.steps().all(|(a, b)| g.has_edge(a, b))
    }
}

/// Breadth-first distances and deterministic parents from one source.
#[derive(Debug, Clone)]
pub struct BfsTree {
    source: Site,
    dist: Vec<usize>,
    parent: Vec<Option<Site>>,
}

impl BfsTree {
    pub fn source(&self) -> Site {
        self.source
    }

    pub fn distance(&self, k: Site) -> usize {
        self.dist[k]
    }

    pub fn distances(&self) -> &[usize] {
        &self.dist
    }

    pub fn path_to(&self, k: Site) -> Result<Path> {
        if k == self.source {
            return Err(Error::SameSite(k));
        }
        let mut sites = vec![k];
        let mut cur = k;
        while let Some(p) = self.parent[cur] {
            sites.push(p);
            cur = p;
        }
        sites.reverse();
        Ok(Path::from_sites(sites))
    }
}

/// Undirected simple connected coupling graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n_sites: usize,
    edges: Vec<(Site, Site)>,
    adjacency: Vec<Vec<Site>>,
    lattice: Option<LatticeSpec>,
}

impl Graph {
    /// Nearest-neighbour lattice; periodic boundaries add the wrap edges.
    pub fn lattice(spec: &LatticeSpec) -> Result<Graph> {
        let n_sites = spec.n_sites();
        let mut edges = BTreeSet::new();
        for site in 0..n_sites {
            let x = spec.coords(site);
            for (d, &n) in spec.extents().iter().enumerate() {
                let mut y = x.clone();
                if x[d] + 1 < n {
                    y[d] = x[d] + 1;
                } else if spec.boundary() == Boundary::Periodic {
                    y[d] = 0;
                } else {
                    continue;
                }
                let other = spec.site_index(&y);
                edges.insert((site.min(other), site.max(other)));
            }
        }
        let mut g = Self::assemble(n_sites, edges)?;
        g.lattice = Some(spec.clone());
        Ok(g)
    }

    /// Graph from arbitrary site pairs. Duplicates (in either orientation)
    /// collapse; the site count is one past the largest index.
    pub fn from_edge_list<I>(pairs: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (Site, Site)>,
    {
        let mut edges = BTreeSet::new();
        let mut n_sites = 0;
        for (u, v) in pairs {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            n_sites = n_sites.max(u + 1).max(v + 1);
            edges.insert((u.min(v), u.max(v)));
        }
        if edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        Self::assemble(n_sites, edges)
    }

    pub fn complete(n: usize) -> Result<Graph> {
        Self::from_edge_list((0..n).flat_map(|i| (i + 1..n).map(move |k| (i, k))))
    }

    fn assemble(n_sites: usize, edges: BTreeSet<(Site, Site)>) -> Result<Graph> {
        let mut adjacency = vec![Vec::new(); n_sites];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        let g = Graph {
            n_sites,
            edges: edges.into_iter().collect(),
            adjacency,
            lattice: None,
        };
        let components = g.component_count();
        if components != 1 {
            return Err(Error::Disconnected { components });
        }
        Ok(g)
    }

    fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n_sites];
        let mut count = 0;
        for start in 0..self.n_sites {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(u) = stack.pop() {
                for &v in &self.adjacency[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        count
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(Site, Site)] {
        &self.edges
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, site: Site) -> &[Site] {
        &self.adjacency[site]
    }

    pub fn degree(&self, site: Site) -> usize {
        self.adjacency[site].len()
    }

    pub fn has_edge(&self, u: Site, v: Site) -> bool {
        u < self.n_sites && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Position of the undirected edge `{u, v}` in [`Graph::edges`].
    pub fn edge_index(&self, u: Site, v: Site) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn lattice_spec(&self) -> Option<&LatticeSpec> {
        self.lattice.as_ref()
    }

    fn check_site(&self, site: Site) -> Result<()> {
        if site >= self.n_sites {
            return Err(Error::SiteOutOfRange {
                site,
                n_sites: self.n_sites,
            });
        }
        Ok(())
    }

    /// BFS from `source`. Every site's parent is its smallest-index neighbour
    /// one step closer to the source, which makes path choice reproducible.
    pub fn bfs_tree(&self, source: Site) -> Result<BfsTree> {
        self.check_site(source)?;
        let mut dist = vec![usize::MAX; self.n_sites];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        let parent = (0..self.n_sites)
            .map(|v| {
                if v == source {
                    None
                } else {
                    self.adjacency[v]
                        .iter()
                        .copied()
                        .find(|&u| dist[u] + 1 == dist[v])
                }
            })
            .collect();
        Ok(BfsTree {
            source,
            dist,
            parent,
        })
    }

    pub fn shortest_path(&self, i: Site, k: Site) -> Result<Path> {
        self.check_site(k)?;
        if i == k {
            return Err(Error::SameSite(i));
        }
        self.bfs_tree(i)?.path_to(k)
    }

    pub fn distance(&self, i: Site, k: Site) -> Result<usize> {
        self.check_site(k)?;
        Ok(self.bfs_tree(i)?.distance(k))
    }

    pub fn diameter(&self) -> usize {
        (0..self.n_sites)
            .map(|s| {
                self.bfs_tree(s)
                    .expect("site in range")
                    .distances()
                    .iter()
                    .copied()
                    .max()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }

    /// Axis-ordered lattice path from `start` by displacement `delta`: all
    /// steps along the first dimension, then the second, and so on. Periodic
    /// steps wrap.
    pub fn canonical_lattice_path(&self, start: &[usize], delta: &[i64]) -> Result<Path> {
        let spec = self
            .lattice
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("graph has no lattice geometry".into()))?;
        if start.len() != spec.dims() || delta.len() != spec.dims() {
            return Err(Error::SizeMismatch {
                expected: spec.dims(),
                found: start.len().min(delta.len()),
            });
        }
        if delta.iter().all(|&d| d == 0) {
            return Err(Error::DisplacementOutOfRange("zero displacement".into()));
        }
        for (d, (&x, &n)) in start.iter().zip(spec.extents()).enumerate() {
            if x >= n {
                return Err(Error::DisplacementOutOfRange(format!(
                    "start coordinate {x} outside axis {d} of length {n}"
                )));
            }
            match spec.boundary() {
                Boundary::Periodic => {
                    let (lo, hi) = LatticeSpec::periodic_range(n);
                    if delta[d] < lo || delta[d] > hi {
                        return Err(Error::DisplacementOutOfRange(format!(
                            "component {} on axis {d} outside [{lo}, {hi}]",
                            delta[d]
                        )));
                    }
                }
                Boundary::Open => {
                    let end = x as i64 + delta[d];
                    if end < 0 || end >= n as i64 {
                        return Err(Error::DisplacementOutOfRange(format!(
                            "endpoint {end} on axis {d} outside [0, {n})"
                        )));
                    }
                }
            }
        }
        let mut pos: Vec<usize> = start.to_vec();
        let mut sites = vec![spec.site_index(&pos)];
        for (d, &n) in spec.extents().iter().enumerate() {
            let step = delta[d].signum();
            for _ in 0..delta[d].unsigned_abs() {
                pos[d] = (pos[d] as i64 + step).rem_euclid(n as i64) as usize;
                sites.push(spec.site_index(&pos));
            }
        }
        Ok(Path::from_sites(sites))
    }

    /// Canonical path between two sites: the displacement is reduced into
    /// the periodic range, or taken literally for open boundaries.
    pub fn canonical_path_between(&self, i: Site, k: Site) -> Result<Path> {
        self.check_site(i)?;
        self.check_site(k)?;
        if i == k {
            return Err(Error::SameSite(i));
        }
        let spec = self
            .lattice
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("graph has no lattice geometry".into()))?;
        let xi = spec.coords(i);
        let xk = spec.coords(k);
        let delta: Vec<i64> = xi
            .iter()
            .zip(&xk)
            .zip(spec.extents())
            .map(|((&a, &b), &n)| {
                let raw = b as i64 - a as i64;
                match spec.boundary() {
                    Boundary::Open => raw,
                    Boundary::Periodic => {
                        let (lo, _) = LatticeSpec::periodic_range(n);
                        (raw - lo).rem_euclid(n as i64) + lo
                    }
                }
            })
            .collect();
        self.canonical_lattice_path(&xi, &delta)
    }

    /// Map from edge to its index, for callers that accumulate per-edge data.
    pub fn edge_lookup(&self) -> HashMap<(Site, Site), usize> {
        self.edges.iter().enumerate().map(|(i, &e)| (e, i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: usize) -> Graph {
        Graph::lattice(&LatticeSpec::chain(n, Boundary::Periodic).unwrap()).unwrap()
    }

    fn chain(n: usize) -> Graph {
        Graph::lattice(&LatticeSpec::chain(n, Boundary::Open).unwrap()).unwrap()
    }

    fn triangle() -> Graph {
        Graph::from_edge_list([(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn lattice_counts() {
        let g = ring(4);
        assert_eq!((g.n_sites(), g.n_edges()), (4, 4));
        let spec = LatticeSpec::new(2, 3, Boundary::Open).unwrap();
        let g = Graph::lattice(&spec).unwrap();
        assert_eq!((g.n_sites(), g.n_edges()), (9, 12));
        let spec = LatticeSpec::new(2, 3, Boundary::Periodic).unwrap();
        let g = Graph::lattice(&spec).unwrap();
        assert_eq!((g.n_sites(), g.n_edges()), (9, 18));
    }

    #[test]
    fn lattice_rejects_small_sides() {
        assert!(LatticeSpec::chain(1, Boundary::Open).is_err());
        assert!(LatticeSpec::chain(2, Boundary::Periodic).is_err());
        assert!(LatticeSpec::chain(2, Boundary::Open).is_ok());
    }

    #[test]
    fn row_major_indexing() {
        let spec = LatticeSpec::with_extents(vec![4, 3], Boundary::Open).unwrap();
        assert_eq!(spec.site_index(&[1, 0]), 1);
        assert_eq!(spec.site_index(&[0, 1]), 4);
        assert_eq!(spec.coords(7), vec![3, 1]);
    }

    #[test]
    fn edge_list_errors() {
        assert!(matches!(Graph::from_edge_list([(0, 0)]), Err(Error::SelfLoop(0))));
        assert!(matches!(
            Graph::from_edge_list([(0, 1), (2, 3)]),
            Err(Error::Disconnected { components: 2 })
        ));
        assert!(matches!(Graph::from_edge_list([]), Err(Error::EmptyGraph)));
    }

    #[test]
    fn edge_list_dedups() {
        let g = Graph::from_edge_list([(0, 1), (1, 0), (1, 2), (0, 2)]).unwrap();
        assert_eq!(g.n_edges(), 3);
        assert_eq!(g, triangle());
    }

    #[test]
    fn shortest_paths() {
        assert_eq!(triangle().shortest_path(0, 2).unwrap().edges(), vec![(0, 2)]);
        assert_eq!(ring(4).shortest_path(0, 3).unwrap().edges(), vec![(0, 3)]);
        assert_eq!(
            chain(4).shortest_path(0, 3).unwrap().edges(),
            vec![(0, 1), (1, 2), (2, 3)]
        );
        assert!(matches!(triangle().shortest_path(1, 1), Err(Error::SameSite(1))));
    }

    #[test]
    fn shortest_path_tie_break_uses_smallest_parent() {
        // ring of 4: 0 -> 2 can go through 1 or 3; parent of 2 is 1
        assert_eq!(ring(4).shortest_path(0, 2).unwrap().sites(), &[0, 1, 2]);
        // and from 2 back to 0 the parent of 0 is 1 as well
        assert_eq!(ring(4).shortest_path(2, 0).unwrap().sites(), &[2, 1, 0]);
    }

    #[test]
    fn diameters() {
        assert_eq!(ring(4).diameter(), 2);
        assert_eq!(chain(5).diameter(), 4);
        assert_eq!(triangle().diameter(), 1);
    }

    #[test]
    fn canonical_paths() {
        let spec = LatticeSpec::new(2, 4, Boundary::Periodic).unwrap();
        let g = Graph::lattice(&spec).unwrap();
        let p = g.canonical_lattice_path(&[0, 0], &[1, 2]).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.sites(), &[0, 1, 5, 9]);

        let g = ring(4);
        assert_eq!(g.canonical_lattice_path(&[0], &[-1]).unwrap().edges(), vec![(0, 3)]);
        assert!(g.canonical_lattice_path(&[0], &[-2]).is_err());
        assert!(g.canonical_lattice_path(&[0], &[0]).is_err());

        let g = chain(3);
        assert_eq!(
            g.canonical_lattice_path(&[0], &[2]).unwrap().edges(),
            vec![(0, 1), (1, 2)]
        );
        assert!(g.canonical_lattice_path(&[1], &[2]).is_err());
    }

    #[test]
    fn canonical_path_between_reduces_displacement() {
        let g = ring(4);
        assert_eq!(g.canonical_path_between(0, 3).unwrap().sites(), &[0, 3]);
        assert_eq!(g.canonical_path_between(3, 1).unwrap().sites(), &[3, 0, 1]);
        assert_eq!(g.canonical_path_between(1, 3).unwrap().sites(), &[1, 2, 3]);
    }

    #[test]
    fn periodic_lattice_is_regular() {
        for dims in 1..=3 {
            let spec = LatticeSpec::new(dims, 3, Boundary::Periodic).unwrap();
            let g = Graph::lattice(&spec).unwrap();
            assert!((0..g.n_sites()).all(|s| g.degree(s) == 2 * dims));
        }
    }
}
