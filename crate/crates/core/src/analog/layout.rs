use serde::{Deserialize, Serialize};

use super::AnalogError;
use crate::lattice::{distance, within_radius};

/// Interaction exponent of the van der Waals tail.
pub const DEFAULT_EXPONENT: f64 = 6.0;

/// Atoms in the plane with a blockade radius and a Rabi scale.
///
/// Positions are in µm, `rabi_max` in rad/µs. The interaction is
/// `V(r) = c6 / r^α` with `c6 = Ω_max · R_b^α`, so that `V(R_b) = Ω_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomLayout {
    positions: Vec<[f64; 2]>,
    blockade_radius: f64,
    rabi_max: f64,
    exponent: f64,
}

impl AtomLayout {
    pub fn new(
        positions: Vec<[f64; 2]>,
        blockade_radius: f64,
        rabi_max: f64,
    ) -> Result<Self, AnalogError> {
        Self::with_exponent(positions, blockade_radius, rabi_max, DEFAULT_EXPONENT)
    }

    pub fn with_exponent(
        positions: Vec<[f64; 2]>,
        blockade_radius: f64,
        rabi_max: f64,
        exponent: f64,
    ) -> Result<Self, AnalogError> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(AnalogError::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )))
            }
        };
        positive("blockade radius", blockade_radius)?;
        positive("rabi_max", rabi_max)?;
        positive("exponent", exponent)?;
        for (i, p) in positions.iter().enumerate() {
            if !p.iter().all(|c| c.is_finite()) {
                return Err(AnalogError::InvalidParameter(format!(
                    "position {i} is not finite"
                )));
            }
            if let Some(j) = positions[..i].iter().position(|q| q == p) {
                return Err(AnalogError::CoincidentAtoms { a: j, b: i });
            }
        }
        Ok(Self {
            positions,
            blockade_radius,
            rabi_max,
            exponent,
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[[f64; 2]] {
        &self.positions
    }

    pub fn blockade_radius(&self) -> f64 {
        self.blockade_radius
    }

    pub fn rabi_max(&self) -> f64 {
        self.rabi_max
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn c6(&self) -> f64 {
        self.rabi_max * self.blockade_radius.powf(self.exponent)
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        distance(self.positions[i], self.positions[j])
    }

    /// `c6 / r_ij^α`.
    pub fn interaction(&self, i: usize, j: usize) -> f64 {
        self.c6() / self.distance(i, j).powf(self.exponent)
    }

    /// Strongest pair interaction, i.e. that of the closest pair.
    pub fn nearest_interaction(&self) -> f64 {
        let n = self.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| self.interaction(i, j))
            .fold(0.0, f64::max)
    }

    pub fn unit_disk_graph(&self) -> UnitDiskGraph {
        let n = self.len();
        let mut adj = vec![Vec::new(); n];
        for i in 0..n {
            for j in i + 1..n {
                if within_radius(self.positions[i], self.positions[j], self.blockade_radius) {
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
        }
        UnitDiskGraph { adj }
    }
}

/// Graph with an edge between atoms at distance `≤ R_b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitDiskGraph {
    adj: Vec<Vec<usize>>,
}

impl UnitDiskGraph {
    /// Builds a graph from an edge list; self-loops are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, AnalogError> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a == b || a >= n || b >= n {
                return Err(AnalogError::InvalidParameter(format!(
                    "invalid edge ({a}, {b}) on {n} nodes"
                )));
            }
            if !adj[a].contains(&b) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        adj.iter_mut().for_each(|v| v.sort_unstable());
        Ok(Self { adj })
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, ns)| ns.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
            .collect()
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(k, &a)| set[k + 1..].iter().all(|&b| !self.has_edge(a, b)))
    }
}
