use serde::Serialize;

use super::evolve::evolve;
use super::layout::{AtomLayout, UnitDiskGraph};
use super::sweep::SweepSchedule;
use super::AnalogError;
use crate::rng::SimRng;
use crate::sim::sample_index;

/// Largest graph the exhaustive solver accepts.
pub const MAX_BRUTE_FORCE: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MisSample {
    /// Independent set per shot, sorted.
    pub sets: Vec<Vec<usize>>,
    /// Shots whose raw excitation pattern violated an edge.
    pub repaired_shots: usize,
    pub best: Vec<usize>,
    pub best_size: usize,
    pub mean_size: f64,
    pub max_norm_drift: f64,
}

/// Drops vertices until `set` is independent, each time removing the
/// vertex with the most conflicts (the higher index on ties).
pub fn repair(graph: &UnitDiskGraph, mut set: Vec<usize>) -> Vec<usize> {
    set.sort_unstable();
    loop {
        let conflicts: Vec<usize> = set
            .iter()
            .map(|&a| set.iter().filter(|&&b| graph.has_edge(a, b)).count())
            .collect();
        let worst = (0..set.len()).max_by_key(|&k| (conflicts[k], set[k]));
        match worst {
            Some(k) if conflicts[k] > 0 => {
                set.remove(k);
            }
            _ => return set,
        }
    }
}

/// Evolves under `sweep`, measures every atom in the `{g, r}` basis
/// `n_shots` times and maps excited atoms to repaired independent sets.
pub fn sample_mis(
    layout: &AtomLayout,
    sweep: &SweepSchedule,
    dt: f64,
    n_shots: usize,
    rng: &mut SimRng,
) -> Result<MisSample, AnalogError> {
    let graph = layout.unit_disk_graph();
    let evolution = evolve(layout, sweep, dt)?;
    let probs = evolution.probabilities();
    let n = layout.len();
    let mut sets = Vec::with_capacity(n_shots);
    let mut repaired_shots = 0;
    for _ in 0..n_shots {
        let s = sample_index(probs.iter().copied(), rng);
        let raw: Vec<usize> = (0..n).filter(|&i| s >> i & 1 == 1).collect();
        let set = repair(&graph, raw.clone());
        if set.len() != raw.len() {
            repaired_shots += 1;
        }
        sets.push(set);
    }
    let best = sets
        .iter()
        .max_by(|a, b| a.len().cmp(&b.len()).then(b.cmp(a)))
        .cloned()
        .unwrap_or_default();
    let mean_size = if sets.is_empty() {
        0.0
    } else {
        sets.iter().map(Vec::len).sum::<usize>() as f64 / sets.len() as f64
    };
    Ok(MisSample {
        best_size: best.len(),
        best,
        sets,
        repaired_shots,
        mean_size,
        max_norm_drift: evolution.max_norm_drift,
    })
}

fn search(adj: &[u32], cand: u32, current: u32, best: &mut u32) {
    if current.count_ones() + cand.count_ones() <= best.count_ones() {
        return;
    }
    if cand == 0 {
        *best = current;
        return;
    }
    let mut v = cand.trailing_zeros() as usize;
    let mut deg = 0;
    let mut rest = cand;
    while rest != 0 {
        let u = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let d = (adj[u] & cand).count_ones();
        if d > deg {
            deg = d;
            v = u;
        }
    }
    if deg == 0 {
        *best = current | cand;
        return;
    }
    let bit = 1u32 << v;
    search(adj, cand & !bit & !adj[v], current | bit, best);
    search(adj, cand & !bit, current, best);
}

/// Exact maximum independent set by branch and bound. Returns the size and
/// one witness.
pub fn brute_force_mis(graph: &UnitDiskGraph) -> Result<(usize, Vec<usize>), AnalogError> {
    let n = graph.len();
    if n > MAX_BRUTE_FORCE {
        return Err(AnalogError::TooManyAtoms {
            n,
            max: MAX_BRUTE_FORCE,
        });
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| graph.neighbors(v).iter().fold(0, |m, &u| m | 1 << u))
        .collect();
    let all = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    let mut best = 0;
    search(&adj, all, 0, &mut best);
    let witness: Vec<usize> = (0..n).filter(|&v| best >> v & 1 == 1).collect();
    Ok((witness.len(), witness))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_complete() {
        let empty = UnitDiskGraph::from_edges(5, &[]).unwrap();
        assert_eq!(brute_force_mis(&empty).unwrap().0, 5);
        let k4: Vec<_> = (0..4)
            .flat_map(|a| (a + 1..4).map(move |b| (a, b)))
            .collect();
        let g = UnitDiskGraph::from_edges(4, &k4).unwrap();
        assert_eq!(brute_force_mis(&g).unwrap().0, 1);
    }

    #[test]
    fn path_graph() {
        let g = UnitDiskGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(brute_force_mis(&g).unwrap(), (2, vec![0, 2]));
    }

    #[test]
    fn repair_is_independent() {
        let g = UnitDiskGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let s = repair(&g, vec![0, 1, 2, 3]);
        assert!(g.is_independent(&s));
        assert_eq!(s, vec![0, 3]);
    }

    #[test]
    fn too_large() {
        let g = UnitDiskGraph::from_edges(21, &[]).unwrap();
        assert!(brute_force_mis(&g).is_err());
    }
}
