//! Greedy initial placement of logical qubits onto graph nodes.

use super::TranspileError;
use crate::circuit::Circuit;
use crate::lattice::ConnectivityGraph;

/// Logical qubit `q` sits on graph node `nodes[q]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub nodes: Vec<usize>,
}

impl Placement {
    pub fn identity(n: usize) -> Self {
        Self {
            nodes: (0..n).collect(),
        }
    }

    pub fn node(&self, q: usize) -> usize {
        self.nodes[q]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Pair interaction counts of every multi-qubit gate.
fn interaction_weights(c: &Circuit) -> Vec<Vec<u32>> {
    let n = c.n_qubits();
    let mut w = vec![vec![0u32; n]; n];
    for g in c.gates() {
        if g.qubits.len() < 2 {
            continue;
        }
        for (i, &a) in g.qubits.iter().enumerate() {
            for &b in &g.qubits[i + 1..] {
                w[a][b] += 1;
                w[b][a] += 1;
            }
        }
    }
    w
}

/// Places on any node of `graph`.
pub fn place(c: &Circuit, graph: &ConnectivityGraph) -> Result<Placement, TranspileError> {
    let all: Vec<usize> = (0..graph.len()).collect();
    place_on(c, graph, &all)
}

/// Greedy placement restricted to the `allowed` nodes.
///
/// Qubits are taken in order of their interaction with those already placed
/// (heaviest first, lowest index on ties). Each goes to the free node that
/// is adjacent to the most interaction weight, then closest in hops to its
/// placed partners, then of highest degree, then of lowest index.
pub fn place_on(
    c: &Circuit,
    graph: &ConnectivityGraph,
    allowed: &[usize],
) -> Result<Placement, TranspileError> {
    let n = c.n_qubits();
    if n > allowed.len() {
        return Err(TranspileError::RegisterTooSmall {
            qubits: n,
            sites: allowed.len(),
        });
    }
    let w = interaction_weights(c);
    let total: Vec<u32> = w.iter().map(|row| row.iter().sum()).collect();
    let mut nodes = vec![usize::MAX; n];
    let mut placed = vec![false; n];
    let mut taken = vec![false; graph.len()];
    let mut hops: Vec<Option<Vec<usize>>> = vec![None; graph.len()];

    let centroid = {
        let (sx, sy) = allowed.iter().fold((0.0, 0.0), |(x, y), &v| {
            let p = graph.position(v);
            (x + p[0], y + p[1])
        });
        let k = allowed.len().max(1) as f64;
        [sx / k, sy / k]
    };

    for _ in 0..n {
        let attached = |q: usize| -> u32 { (0..n).filter(|&p| placed[p]).map(|p| w[q][p]).sum() };
        let q = (0..n)
            .filter(|&q| !placed[q])
            .max_by(|&a, &b| {
                (attached(a), total[a])
                    .cmp(&(attached(b), total[b]))
                    .then(b.cmp(&a))
            })
            .expect("an unplaced qubit remains");

        let partners: Vec<(usize, u32)> = (0..n)
            .filter(|&p| placed[p] && w[q][p] > 0)
            .map(|p| (nodes[p], w[q][p]))
            .collect();
        for &(node, _) in &partners {
            if hops[node].is_none() {
                hops[node] = Some(graph.hop_distances(node));
            }
        }

        let score = |v: usize| {
            let adjacent: u32 = partners
                .iter()
                .filter(|&&(u, _)| graph.are_adjacent(u, v))
                .map(|&(_, wt)| wt)
                .sum();
            let spread: u64 = partners
                .iter()
                .map(|&(u, wt)| {
                    let d = hops[u].as_ref().expect("computed above")[v];
                    wt as u64 * d.min(graph.len()) as u64
                })
                .sum();
            let p = graph.position(v);
            let off_centre = (p[0] - centroid[0]).hypot(p[1] - centroid[1]);
            (adjacent, spread, graph.degree(v), off_centre)
        };

        let best = allowed
            .iter()
            .copied()
            .filter(|&v| !taken[v])
            .min_by(|&a, &b| {
                let (sa, sb) = (score(a), score(b));
                sb.0.cmp(&sa.0)
                    .then(sa.1.cmp(&sb.1))
                    .then(sb.2.cmp(&sa.2))
                    .then(sa.3.total_cmp(&sb.3))
                    .then(a.cmp(&b))
            })
            .expect("enough free nodes");

        nodes[q] = best;
        placed[q] = true;
        taken[best] = true;
    }
    Ok(Placement { nodes })
}
