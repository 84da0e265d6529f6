//! Trap lattice geometry and blockade-radius connectivity.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::profile::HardwareProfile;

/// Relative slack on the distance predicate so that lattice distances equal
/// to the radius (6 µm vs 2·3 µm) count as inside despite rounding.
const RADIUS_SLACK: f64 = 1e-9;

/// A trap site, addressed by row and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site {
    pub row: usize,
    pub col: usize,
}

impl Site {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeKind {
    Square,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeGeometry {
    pub kind: LatticeKind,
    /// Trap spacing in micrometres.
    pub spacing: f64,
    pub rows: usize,
    pub cols: usize,
}

impl LatticeGeometry {
    pub fn site_count(&self) -> usize {
        self.rows * self.cols
    }

    pub fn contains(&self, site: Site) -> bool {
        site.row < self.rows && site.col < self.cols
    }

    /// Position in micrometres, `x` along columns and `y` along rows.
    pub fn position(&self, site: Site) -> [f64; 2] {
        [
            site.col as f64 * self.spacing,
            site.row as f64 * self.spacing,
        ]
    }

    /// All sites in row-major order.
    pub fn sites(&self) -> Vec<Site> {
        (0..self.rows)
            .flat_map(|r| (0..self.cols).map(move |c| Site::new(r, c)))
            .collect()
    }

    /// Rectangular block of sites in row-major order.
    pub fn block(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Vec<Site> {
        (row0..row0 + rows)
            .flat_map(|r| (col0..col0 + cols).map(move |c| Site::new(r, c)))
            .filter(|s| self.contains(*s))
            .collect()
    }
}

pub fn distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// The edge predicate: `distance(a, b) ≤ radius`.
pub fn within_radius(a: [f64; 2], b: [f64; 2], radius: f64) -> bool {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    dx * dx + dy * dy <= radius * radius * (1.0 + RADIUS_SLACK)
}

#[derive(Debug, Error, PartialEq)]
pub enum ConnectivityError {
    #[error("connectivity region is empty")]
    EmptyRegion,
    #[error("site ({}, {}) is outside the {rows}×{cols} lattice", site.row, site.col)]
    OffLattice {
        site: Site,
        rows: usize,
        cols: usize,
    },
    #[error("site ({}, {}) appears twice in the region", .0.row, .0.col)]
    DuplicateSite(Site),
}

/// Blockade graph over a set of lattice sites: `i ~ j` iff the sites are
/// within one blockade radius of each other.
#[derive(Debug, Clone)]
pub struct ConnectivityGraph {
    sites: Vec<Site>,
    coords: Vec<[f64; 2]>,
    adjacency: Vec<Vec<usize>>,
    index: HashMap<Site, usize>,
    radius_um: f64,
    spacing: f64,
}

/// Builds the blockade graph over `region`. Node `i` is `region[i]`.
pub fn build_connectivity(
    profile: &HardwareProfile,
    region: &[Site],
) -> Result<ConnectivityGraph, ConnectivityError> {
    let lattice = &profile.lattice;
    if region.is_empty() {
        return Err(ConnectivityError::EmptyRegion);
    }
    let mut index = HashMap::with_capacity(region.len());
    for (i, &site) in region.iter().enumerate() {
        if !lattice.contains(site) {
            return Err(ConnectivityError::OffLattice {
                site,
                rows: lattice.rows,
                cols: lattice.cols,
            });
        }
        if index.insert(site, i).is_some() {
            return Err(ConnectivityError::DuplicateSite(site));
        }
    }
    let radius_um = profile.blockade_radius_um();
    let coords: Vec<_> = region.iter().map(|&s| lattice.position(s)).collect();

    // Scan the lattice offsets inside the radius instead of all node pairs.
    let reach = profile.blockade_radius_sites.ceil() as isize;
    let mut adjacency = vec![Vec::new(); region.len()];
    for (i, &site) in region.iter().enumerate() {
        for dr in -reach..=reach {
            for dc in -reach..=reach {
                if dr == 0 && dc == 0 {
                    continue;
                }
                let (r, c) = (site.row as isize + dr, site.col as isize + dc);
                if r < 0 || c < 0 {
                    continue;
                }
                let other = Site::new(r as usize, c as usize);
                if let Some(&j) = index.get(&other) {
                    if within_radius(coords[i], coords[j], radius_um) {
                        adjacency[i].push(j);
                    }
                }
            }
        }
        adjacency[i].sort_unstable();
    }

    Ok(ConnectivityGraph {
        sites: region.to_vec(),
        coords,
        adjacency,
        index,
        radius_um,
        spacing: lattice.spacing,
    })
}

impl ConnectivityGraph {
    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn site(&self, node: usize) -> Site {
        self.sites[node]
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn node_of(&self, site: Site) -> Option<usize> {
        self.index.get(&site).copied()
    }

    pub fn position(&self, node: usize) -> [f64; 2] {
        self.coords[node]
    }

    pub fn radius_um(&self) -> f64 {
        self.radius_um
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn are_adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn distance_um(&self, a: usize, b: usize) -> f64 {
        distance(self.coords[a], self.coords[b])
    }

    /// Edges `(i, j)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, ns)| ns.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Hop distances from `from` (`usize::MAX` when unreachable).
    pub fn hop_distances(&self, from: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len()];
        dist[from] = 0;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Shortest path `from → to` (inclusive) through nodes accepted by
    /// `passable`. The endpoints are always allowed. Neighbours are visited
    /// in index order, so the result is deterministic.
    pub fn shortest_path(
        &self,
        from: usize,
        to: usize,
        passable: impl Fn(usize) -> bool,
    ) -> Option<Vec<usize>> {
        let mut prev = vec![usize::MAX; self.len()];
        prev[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = prev[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &v in &self.adjacency[u] {
                if prev[v] == usize::MAX && (v == to || passable(v)) {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DegreeStats {
    pub min: usize,
    pub mean: f64,
    pub max: usize,
}

pub fn connectivity_stats(graph: &ConnectivityGraph) -> DegreeStats {
    let degrees = graph.adjacency.iter().map(Vec::len);
    let min = degrees.clone().min().unwrap_or(0);
    let max = degrees.clone().max().unwrap_or(0);
    let mean = if graph.is_empty() {
        0.0
    } else {
        degrees.sum::<usize>() as f64 / graph.len() as f64
    };
    DegreeStats { min, mean, max }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn profile(radius: f64, rows: usize, cols: usize) -> HardwareProfile {
        let mut p = HardwareProfile::rb87_2023();
        p.blockade_radius_sites = radius;
        p.lattice.rows = rows;
        p.lattice.cols = cols;
        p.qubit_capacity = rows * cols;
        p
    }

    fn interior_degree(radius: f64) -> usize {
        let p = profile(radius, 15, 15);
        let g = build_connectivity(&p, &p.lattice.sites()).unwrap();
        g.degree(g.node_of(Site::new(7, 7)).unwrap())
    }

    /// Counts integer offsets with dx² + dy² ≤ r².
    fn offset_count(r: i64) -> usize {
        let mut n = 0;
        for dx in -r..=r {
            for dy in -r..=r {
                if (dx, dy) != (0, 0) && dx * dx + dy * dy <= r * r {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn interior_degrees() {
        assert_eq!(offset_count(2), 12);
        assert_eq!(offset_count(3), 28);
        assert_eq!(interior_degree(1.0), 4);
        assert_eq!(interior_degree(2.0), 12);
        assert_eq!(interior_degree(3.0), 28);
    }

    #[test]
    fn stats_small_regions() {
        let p = profile(1.0, 10, 10);
        let g = build_connectivity(&p, &[Site::new(4, 4)]).unwrap();
        let s = connectivity_stats(&g);
        assert_eq!((s.min, s.max), (0, 0));

        let g = build_connectivity(&p, &p.lattice.block(0, 0, 3, 3)).unwrap();
        let s = connectivity_stats(&g);
        assert_eq!((s.min, s.max), (2, 4));
        assert!((s.mean - 24.0 / 9.0).abs() < 1e-12);
        assert_eq!(g.edge_count(), 12);

        let p = profile(2.0, 10, 10);
        let g = build_connectivity(&p, &p.lattice.sites()).unwrap();
        assert_eq!(connectivity_stats(&g).max, 12);
    }

    #[test]
    fn region_errors() {
        let p = profile(2.0, 4, 4);
        assert_eq!(
            build_connectivity(&p, &[]).unwrap_err(),
            ConnectivityError::EmptyRegion
        );
        assert!(matches!(
            build_connectivity(&p, &[Site::new(4, 0)]),
            Err(ConnectivityError::OffLattice { .. })
        ));
        assert!(matches!(
            build_connectivity(&p, &[Site::new(1, 1), Site::new(1, 1)]),
            Err(ConnectivityError::DuplicateSite(_))
        ));
    }

    #[test]
    fn shortest_path_respects_passable() {
        let p = profile(1.0, 1, 5);
        let g = build_connectivity(&p, &p.lattice.sites()).unwrap();
        assert_eq!(g.shortest_path(0, 4, |_| true), Some(vec![0, 1, 2, 3, 4]));
        assert_eq!(g.shortest_path(0, 4, |n| n != 2), None);
        assert_eq!(g.hop_distances(0), vec![0, 1, 2, 3, 4]);
    }

    proptest! {
        #[test]
        fn edges_match_distance_predicate(
            radius in 1.0f64..3.5,
            mask in proptest::collection::vec(any::<bool>(), 64),
        ) {
            let p = profile(radius, 8, 8);
            let region: Vec<Site> = p.lattice.sites().into_iter()
                .zip(&mask).filter(|(_, &m)| m).map(|(s, _)| s).collect();
            prop_assume!(!region.is_empty());
            let g = build_connectivity(&p, &region).unwrap();
            for i in 0..region.len() {
                for j in 0..region.len() {
                    let a = p.lattice.position(region[i]);
                    let b = p.lattice.position(region[j]);
                    let expected = i != j && within_radius(a, b, p.blockade_radius_um());
                    prop_assert_eq!(g.are_adjacent(i, j), expected);
                    prop_assert_eq!(g.are_adjacent(i, j), g.are_adjacent(j, i));
                }
            }
        }

        #[test]
        fn interior_degree_monotone(r1 in 1.0f64..4.0, dr in 0.0f64..2.0) {
            prop_assert!(interior_degree(r1) <= interior_degree(r1 + dr));
        }
    }
}
