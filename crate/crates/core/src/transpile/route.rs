//! Routing: make every multi-qubit gate act on atoms that are pairwise
//! within one blockade radius.
//!
//! The routed circuit acts on *atoms*. Atom `i` starts on node
//! `placement[i]` holding logical qubit `i`.
//!
//! * Swap mode keeps atoms fixed and moves quantum states with native SWAPs
//!   along shortest paths. Each excursion from the placement is undone
//!   before the next multi-qubit gate it does not cover, so every gate is
//!   routed from the same layout and the SWAP count cannot grow when edges
//!   are added. The last excursion stays; the logical-to-atom map at the
//!   end is the output permutation that readout must undo.
//! * Shuttle mode physically relocates atoms onto free nodes with the mobile
//!   tweezer. Atoms keep their logical qubits, so the permutation is the
//!   identity.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::place::Placement;
use super::TranspileError;
use crate::circuit::{Circuit, Gate, GateKind};
use crate::lattice::ConnectivityGraph;
use crate::prep::min_cost_assignment;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum RoutingMode {
    #[default]
    Swap,
    Shuttle,
}

impl std::str::FromStr for RoutingMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "swap" => Ok(RoutingMode::Swap),
            "shuttle" => Ok(RoutingMode::Shuttle),
            other => Err(format!("unknown routing mode `{other}` (swap|shuttle)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RoutedOp {
    /// Gate on atoms; `nodes` are their graph nodes when it runs.
    Gate { gate: Gate, nodes: Vec<usize> },
    Shuttle {
        atom: usize,
        from: usize,
        to: usize,
        distance_um: f64,
    },
}

impl RoutedOp {
    pub fn atoms(&self) -> Vec<usize> {
        match self {
            RoutedOp::Gate { gate, .. } => gate.qubits.clone(),
            RoutedOp::Shuttle { atom, .. } => vec![*atom],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoutedCircuit {
    pub n_qubits: usize,
    pub ops: Vec<RoutedOp>,
    pub initial_nodes: Vec<usize>,
    pub final_nodes: Vec<usize>,
    /// `output_permutation[q]` is the atom holding logical qubit `q` at
    /// readout.
    pub output_permutation: Vec<usize>,
    pub swaps_inserted: usize,
    pub shuttles_inserted: usize,
}

impl RoutedCircuit {
    pub fn measured(&self) -> bool {
        matches!(self.ops.last(), Some(RoutedOp::Gate { gate, .. }) if gate.kind == GateKind::MeasureAll)
    }
}

struct Router<'g> {
    graph: &'g ConnectivityGraph,
    /// atom -> node
    node_of: Vec<usize>,
    /// node -> atom
    atom_at: HashMap<usize, usize>,
    /// logical -> atom
    loc: Vec<usize>,
    ops: Vec<RoutedOp>,
    swaps: usize,
    shuttles: usize,
    /// Atom pairs swapped since the layout last matched the placement.
    excursion: Vec<(usize, usize)>,
    /// Operands of the last gate routed from the placement.
    covered: Vec<usize>,
}

impl<'g> Router<'g> {
    fn new(graph: &'g ConnectivityGraph, placement: &Placement) -> Self {
        let node_of = placement.nodes.clone();
        let atom_at = node_of.iter().enumerate().map(|(a, &v)| (v, a)).collect();
        Self {
            graph,
            node_of,
            atom_at,
            loc: (0..placement.len()).collect(),
            ops: Vec::new(),
            swaps: 0,
            shuttles: 0,
            excursion: Vec::new(),
            covered: Vec::new(),
        }
    }

    fn emit(&mut self, kind: GateKind, atoms: Vec<usize>) {
        let nodes = atoms.iter().map(|&a| self.node_of[a]).collect();
        self.ops.push(RoutedOp::Gate {
            gate: Gate::new(kind, atoms),
            nodes,
        });
    }

    fn mutually_adjacent(&self, atoms: &[usize]) -> bool {
        atoms.iter().enumerate().all(|(i, &a)| {
            atoms[i + 1..]
                .iter()
                .all(|&b| self.graph.are_adjacent(self.node_of[a], self.node_of[b]))
        })
    }

    /// SWAP the states on two adjacent atoms.
    fn swap_atoms(&mut self, a: usize, b: usize) {
        self.emit(GateKind::Swap, vec![a, b]);
        self.swaps += 1;
        self.excursion.push((a, b));
        let qa = self.loc.iter().position(|&x| x == a);
        let qb = self.loc.iter().position(|&x| x == b);
        if let Some(q) = qa {
            self.loc[q] = b;
        }
        if let Some(q) = qb {
            self.loc[q] = a;
        }
    }

    /// Walks logical qubit `q` along `path` (starting at its node) by SWAPs,
    /// stopping at `path[stop]`.
    fn walk(&mut self, path: &[usize], stop: usize) {
        for k in 0..stop {
            let a = self.atom_at[&path[k]];
            let b = self.atom_at[&path[k + 1]];
            self.swap_atoms(a, b);
        }
    }

    /// Restores the placement layout by replaying the excursion backwards.
    fn return_home(&mut self) {
        let excursion = std::mem::take(&mut self.excursion);
        for &(a, b) in excursion.iter().rev() {
            self.swap_atoms(a, b);
        }
        self.excursion.clear();
    }

    fn swap_route(&mut self, gate: &Gate) -> Result<(), TranspileError> {
        if !gate.qubits.iter().all(|q| self.covered.contains(q)) {
            self.return_home();
            self.covered = gate.qubits.clone();
        }
        let atoms: Vec<usize> = gate.qubits.iter().map(|&q| self.loc[q]).collect();
        if self.mutually_adjacent(&atoms) {
            self.emit(gate.kind, atoms);
            return Ok(());
        }
        let hosted = |v: usize| self.atom_at.contains_key(&v);
        if atoms.len() == 2 {
            let (from, to) = (self.node_of[atoms[0]], self.node_of[atoms[1]]);
            let path = self
                .graph
                .shortest_path(from, to, hosted)
                .ok_or(TranspileError::Disconnected { from, to })?;
            self.walk(&path, path.len() - 2);
        } else {
            self.gather_by_swaps(&gate.qubits)?;
        }
        let atoms = gate.qubits.iter().map(|&q| self.loc[q]).collect();
        self.emit(gate.kind, atoms);
        Ok(())
    }

    /// Moves the operands of a 3+ qubit gate onto a clique of hosted nodes,
    /// one operand at a time, never crossing an operand that has already
    /// arrived. Cliques are tried in order of their assignment lower bound
    /// and every operand order is simulated; the cheapest feasible plan wins.
    fn gather_by_swaps(&mut self, qubits: &[usize]) -> Result<(), TranspileError> {
        let size = qubits.len();
        let hosted: Vec<usize> = {
            let mut v: Vec<usize> = self.atom_at.keys().copied().collect();
            v.sort_unstable();
            v
        };
        let start: Vec<usize> = qubits.iter().map(|&q| self.node_of[self.loc[q]]).collect();
        let dist: Vec<Vec<usize>> = start.iter().map(|&v| self.graph.hop_distances(v)).collect();

        let mut candidates: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut clique = Vec::with_capacity(size);
        let is_hosted = |v: usize| self.atom_at.contains_key(&v);
        for_each_clique(
            self.graph,
            &hosted,
            size,
            &is_hosted,
            &mut clique,
            &mut |c| {
                if dist.iter().any(|d| c.iter().any(|&v| d[v] == usize::MAX)) {
                    return;
                }
                let cost: Vec<Vec<f64>> = dist
                    .iter()
                    .map(|d| c.iter().map(|&v| d[v] as f64).collect())
                    .collect();
                let assign = min_cost_assignment(&cost);
                let bound = assign.iter().enumerate().map(|(i, &j)| dist[i][c[j]]).sum();
                let dests = assign.iter().map(|&j| c[j]).collect();
                candidates.push((bound, dests));
            },
        );
        if candidates.is_empty() {
            return Err(TranspileError::NoClique { size });
        }
        candidates.sort();

        let orders = permutations(size);
        let mut best: Option<(usize, Vec<usize>, Vec<usize>)> = None;
        for (bound, dests) in &candidates {
            if best.as_ref().is_some_and(|(cost, _, _)| cost <= bound) {
                break;
            }
            for order in &orders {
                let Some(cost) = self.gather_cost(&start, dests, order) else {
                    continue;
                };
                if best.as_ref().is_none_or(|(c, _, _)| cost < *c) {
                    best = Some((cost, dests.clone(), order.clone()));
                }
            }
        }
        let (_, dests, order) = best.ok_or(TranspileError::Disconnected {
            from: start[0],
            to: candidates[0].1[0],
        })?;

        let mut settled: Vec<usize> = Vec::with_capacity(size);
        for &i in &order {
            let from = self.node_of[self.loc[qubits[i]]];
            let dest = dests[i];
            if from != dest {
                let path = self
                    .graph
                    .shortest_path(from, dest, |v| {
                        self.atom_at.contains_key(&v) && !settled.contains(&v)
                    })
                    .expect("path found during planning");
                self.walk(&path, path.len() - 1);
            }
            settled.push(dest);
        }
        Ok(())
    }

    /// SWAP count of moving operand `i` from `start[i]` to `dests[i]` in
    /// `order`, or `None` if some operand gets cut off.
    fn gather_cost(&self, start: &[usize], dests: &[usize], order: &[usize]) -> Option<usize> {
        let mut pos = start.to_vec();
        let mut settled: Vec<usize> = Vec::with_capacity(order.len());
        let mut cost = 0;
        for &i in order {
            if pos[i] != dests[i] {
                let path = self.graph.shortest_path(pos[i], dests[i], |v| {
                    self.atom_at.contains_key(&v) && !settled.contains(&v)
                })?;
                // States on the path shift back by one node.
                for p in pos.iter_mut() {
                    if let Some(k) = path[1..].iter().position(|v| v == p) {
                        *p = path[k];
                    }
                }
                pos[i] = dests[i];
                cost += path.len() - 1;
            }
            settled.push(dests[i]);
        }
        Some(cost)
    }

    fn shuttle(&mut self, atom: usize, to: usize) {
        let from = self.node_of[atom];
        let distance_um = self.graph.distance_um(from, to);
        self.ops.push(RoutedOp::Shuttle {
            atom,
            from,
            to,
            distance_um,
        });
        self.shuttles += 1;
        self.atom_at.remove(&from);
        self.atom_at.insert(to, atom);
        self.node_of[atom] = to;
    }

    /// Free node adjacent to every node in `anchors`, nearest to `origin`.
    fn free_spot(&self, anchors: &[usize], origin: usize) -> Option<usize> {
        let first = *anchors.first()?;
        self.graph
            .neighbors(first)
            .iter()
            .copied()
            .filter(|v| !self.atom_at.contains_key(v))
            .filter(|&v| anchors.iter().all(|&a| self.graph.are_adjacent(a, v)))
            .min_by(|&a, &b| {
                self.graph
                    .distance_um(origin, a)
                    .total_cmp(&self.graph.distance_um(origin, b))
                    .then(a.cmp(&b))
            })
    }

    fn shuttle_route(&mut self, gate: &Gate) -> Result<(), TranspileError> {
        let atoms: Vec<usize> = gate.qubits.iter().map(|&q| self.loc[q]).collect();
        if !self.mutually_adjacent(&atoms) {
            if atoms.len() == 2 {
                let (a, b) = (atoms[0], atoms[1]);
                let (na, nb) = (self.node_of[a], self.node_of[b]);
                if let Some(spot) = self.free_spot(&[nb], na) {
                    self.shuttle(a, spot);
                } else if let Some(spot) = self.free_spot(&[na], nb) {
                    self.shuttle(b, spot);
                } else {
                    return Err(TranspileError::NoFreeSite { near: nb });
                }
            } else {
                // Gather around the last operand.
                let anchor = *atoms.last().expect("multi-qubit gate");
                let mut gathered = vec![self.node_of[anchor]];
                for &a in &atoms[..atoms.len() - 1] {
                    let na = self.node_of[a];
                    if gathered.iter().all(|&g| self.graph.are_adjacent(g, na)) {
                        gathered.push(na);
                        continue;
                    }
                    let spot = self
                        .free_spot(&gathered, na)
                        .ok_or(TranspileError::NoFreeSite { near: gathered[0] })?;
                    self.shuttle(a, spot);
                    gathered.push(spot);
                }
            }
        }
        self.emit(gate.kind, atoms);
        Ok(())
    }
}

/// All orderings of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if current.len() == used.len() {
            out.push(current.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                current.push(i);
                rec(current, used, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// Calls `visit` with every clique of `size` nodes drawn from `nodes`
/// (sorted) whose members all pass `keep`, in lexicographic order.
fn for_each_clique(
    graph: &ConnectivityGraph,
    nodes: &[usize],
    size: usize,
    keep: &dyn Fn(usize) -> bool,
    current: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if current.len() == size {
        visit(current);
        return;
    }
    let candidates: Vec<usize> = match current.last() {
        None => nodes.to_vec(),
        Some(&last) => graph
            .neighbors(current[0])
            .iter()
            .copied()
            .filter(|&v| v > last && keep(v))
            .filter(|&v| current.iter().all(|&c| graph.are_adjacent(c, v)))
            .collect(),
    };
    for v in candidates {
        current.push(v);
        for_each_clique(graph, nodes, size, keep, current, visit);
        current.pop();
    }
}

/// Routes a native circuit. See the module docs for the two modes.
pub fn route(
    c: &Circuit,
    placement: &Placement,
    graph: &ConnectivityGraph,
    mode: RoutingMode,
) -> Result<RoutedCircuit, TranspileError> {
    if let Some(g) = c.gates().iter().find(|g| !g.kind.is_native()) {
        return Err(TranspileError::NotNative(g.kind.name()));
    }
    if placement.len() != c.n_qubits() {
        return Err(TranspileError::PlacementSize {
            placement: placement.len(),
            qubits: c.n_qubits(),
        });
    }
    let mut r = Router::new(graph, placement);
    for g in c.gates() {
        match g.qubits.len() {
            0 => r.emit(g.kind, Vec::new()),
            1 => {
                let atom = r.loc[g.qubits[0]];
                r.emit(g.kind, vec![atom]);
            }
            _ => match mode {
                RoutingMode::Swap => r.swap_route(g)?,
                RoutingMode::Shuttle => r.shuttle_route(g)?,
            },
        }
    }
    Ok(RoutedCircuit {
        n_qubits: c.n_qubits(),
        ops: r.ops,
        initial_nodes: placement.nodes.clone(),
        final_nodes: r.node_of,
        output_permutation: r.loc,
        swaps_inserted: r.swaps,
        shuttles_inserted: r.shuttles,
    })
}
