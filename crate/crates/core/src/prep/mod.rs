//! Register preparation: stochastic loading, imaging, rearrangement and
//! transfer losses.
//!
//! One attempt loads every trap independently, images the array (detection
//! is taken as perfect), plans a minimum-total-distance assignment of loaded
//! atoms onto the target sites and executes it one move at a time. Each atom
//! on a target site then survives its transfer with probability
//! `transfer_success`. Failed attempts restart from cooling and are charged
//! the full preparation time again.

mod assignment;

use std::collections::HashMap;
use std::time::Duration;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

pub use assignment::min_cost_assignment;

use crate::lattice::{distance, LatticeGeometry, Site};
use crate::profile::HardwareProfile;
use crate::rng::SimRng;

#[derive(Debug, Error, PartialEq)]
pub enum PrepError {
    #[error("retry loading: {available} atoms loaded but {required} target sites")]
    InsufficientAtoms { available: usize, required: usize },
    #[error("target site ({}, {}) is not part of the trap array", .0.row, .0.col)]
    TargetOffArray(Site),
    #[error("register of {requested} qubits exceeds capacity {capacity}")]
    ExceedsCapacity { requested: usize, capacity: usize },
    #[error("invalid move {from:?} -> {to:?}: {reason}")]
    InvalidMove {
        from: Site,
        to: Site,
        reason: &'static str,
    },
    #[error("no free holding site to break a move cycle")]
    NoHoldingSite,
    #[error(
        "no defect-free register after {attempts} attempts ({elapsed_ms} ms, {last_defects} defects in the last)"
    )]
    RetriesExhausted {
        attempts: usize,
        elapsed_ms: f64,
        last_defects: usize,
    },
}

/// Trap sites and which of them hold an atom (at most one each).
#[derive(Debug, Clone, PartialEq)]
pub struct Occupancy {
    sites: Vec<Site>,
    coords: Vec<[f64; 2]>,
    occupied: Vec<bool>,
    index: HashMap<Site, usize>,
}

impl Occupancy {
    pub fn new(lattice: &LatticeGeometry, sites: &[Site], occupied: Vec<bool>) -> Self {
        assert_eq!(sites.len(), occupied.len());
        Self {
            sites: sites.to_vec(),
            coords: sites.iter().map(|&s| lattice.position(s)).collect(),
            occupied,
            index: sites.iter().enumerate().map(|(i, &s)| (s, i)).collect(),
        }
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn occupied(&self) -> &[bool] {
        &self.occupied
    }

    pub fn is_occupied(&self, site: Site) -> bool {
        self.index.get(&site).is_some_and(|&i| self.occupied[i])
    }

    pub fn count(&self) -> usize {
        self.occupied.iter().filter(|&&o| o).count()
    }

    pub fn position(&self, site: Site) -> Option<[f64; 2]> {
        self.index.get(&site).map(|&i| self.coords[i])
    }

    fn slot(&self, site: Site) -> Option<usize> {
        self.index.get(&site).copied()
    }

    /// Applies one move, checking the source holds an atom and the
    /// destination is empty.
    pub fn apply_move(&mut self, from: Site, to: Site) -> Result<(), PrepError> {
        let invalid = |reason| PrepError::InvalidMove { from, to, reason };
        let a = self.slot(from).ok_or(invalid("source not in array"))?;
        let b = self.slot(to).ok_or(invalid("destination not in array"))?;
        if !self.occupied[a] {
            return Err(invalid("source is empty"));
        }
        if self.occupied[b] {
            return Err(invalid("destination is occupied"));
        }
        self.occupied[a] = false;
        self.occupied[b] = true;
        Ok(())
    }
}

/// Loads each site independently with probability `p`.
pub fn sample_loading(
    lattice: &LatticeGeometry,
    sites: &[Site],
    p: f64,
    rng: &mut SimRng,
) -> Occupancy {
    assert!(
        p > 0.0 && p <= 1.0,
        "loading probability {p} outside (0, 1]"
    );
    let occupied = sites.iter().map(|_| rng.random_bool(p)).collect();
    Occupancy::new(lattice, sites, occupied)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Move {
    pub from: Site,
    pub to: Site,
    pub distance_um: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MovePlan {
    pub moves: Vec<Move>,
    pub total_distance_um: f64,
    pub targets: Vec<Site>,
}

/// Plans moves that fill every target site with the smallest total travel
/// distance.
///
/// Atoms already on target sites stay put; for a metric cost there is always
/// an optimal assignment of that form. The remaining empty targets are
/// matched to the spare atoms with [`min_cost_assignment`].
pub fn plan_rearrangement(occ: &Occupancy, targets: &[Site]) -> Result<MovePlan, PrepError> {
    for &t in targets {
        if occ.slot(t).is_none() {
            return Err(PrepError::TargetOffArray(t));
        }
    }
    let available = occ.count();
    if available < targets.len() {
        return Err(PrepError::InsufficientAtoms {
            available,
            required: targets.len(),
        });
    }

    let target_set: std::collections::HashSet<Site> = targets.iter().copied().collect();
    let holes: Vec<Site> = targets
        .iter()
        .copied()
        .filter(|&t| !occ.is_occupied(t))
        .collect();
    let spares: Vec<Site> = occ
        .sites
        .iter()
        .zip(&occ.occupied)
        .filter(|(s, &o)| o && !target_set.contains(s))
        .map(|(&s, _)| s)
        .collect();

    let pos = |s: Site| occ.position(s).expect("site in array");
    let cost: Vec<Vec<f64>> = holes
        .iter()
        .map(|&h| spares.iter().map(|&a| distance(pos(a), pos(h))).collect())
        .collect();
    let assignment = min_cost_assignment(&cost);
    let pairs: Vec<(Site, Site)> = holes
        .iter()
        .zip(&assignment)
        .map(|(&h, &a)| (spares[a], h))
        .collect();

    let moves = sequence_moves(occ, &pairs)?;
    let total_distance_um = moves.iter().map(|m| m.distance_um).sum();
    Ok(MovePlan {
        moves,
        total_distance_um,
        targets: targets.to_vec(),
    })
}

/// Orders `(source, destination)` transfers so that every move starts from
/// an occupied site and ends on an empty one. A move is ready once its
/// destination is free; when only cycles remain, one atom of the cycle is
/// parked on the nearest free site outside all pending moves.
pub fn sequence_moves(occ: &Occupancy, pairs: &[(Site, Site)]) -> Result<Vec<Move>, PrepError> {
    let pos = |s: Site| occ.position(s).expect("site in array");
    let mut state = occ.clone();
    let mut pending: Vec<(Site, Site)> = pairs.iter().copied().filter(|(a, b)| a != b).collect();
    let mut moves = Vec::with_capacity(pending.len());

    let mut emit = |state: &mut Occupancy, from: Site, to: Site| -> Result<(), PrepError> {
        state.apply_move(from, to)?;
        moves.push(Move {
            from,
            to,
            distance_um: distance(pos(from), pos(to)),
        });
        Ok(())
    };

    while !pending.is_empty() {
        if let Some(k) = pending.iter().position(|&(_, to)| !state.is_occupied(to)) {
            let (from, to) = pending.remove(k);
            emit(&mut state, from, to)?;
            continue;
        }
        let (from, to) = pending[0];
        let busy: std::collections::HashSet<Site> =
            pending.iter().flat_map(|&(a, b)| [a, b]).collect();
        let origin = pos(from);
        let hold = state
            .sites
            .iter()
            .zip(&state.occupied)
            .filter(|(s, &o)| !o && !busy.contains(s))
            .map(|(&s, _)| s)
            .min_by(|&a, &b| {
                distance(origin, pos(a))
                    .total_cmp(&distance(origin, pos(b)))
                    .then(a.cmp(&b))
            })
            .ok_or(PrepError::NoHoldingSite)?;
        emit(&mut state, from, hold)?;
        pending[0] = (hold, to);
    }
    Ok(moves)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrepOutcome {
    pub occupancy: Occupancy,
    pub targets: Vec<Site>,
    pub defect_free: bool,
    pub elapsed: Duration,
    pub moves_executed: usize,
    pub atoms_lost_in_transfer: usize,
    pub attempts: usize,
}

impl PrepOutcome {
    pub fn elapsed_ms(&self) -> f64 {
        self.elapsed.as_nanos() as f64 / 1e6
    }

    pub fn defects(&self) -> usize {
        self.targets
            .iter()
            .filter(|&&t| !self.occupancy.is_occupied(t))
            .count()
    }
}

/// Executes `plan` on `occ`, then applies the per-atom transfer loss on every
/// target site. Elapsed time is `t_prep + total_distance / shuttle_speed`.
pub fn execute_plan(
    occ: &Occupancy,
    plan: &MovePlan,
    profile: &HardwareProfile,
    rng: &mut SimRng,
) -> Result<PrepOutcome, PrepError> {
    let mut state = occ.clone();
    for m in &plan.moves {
        state.apply_move(m.from, m.to)?;
    }
    let mut lost = 0;
    for &t in &plan.targets {
        let k = state.slot(t).ok_or(PrepError::TargetOffArray(t))?;
        if state.occupied[k] && !rng.random_bool(profile.transfer_success) {
            state.occupied[k] = false;
            lost += 1;
        }
    }
    let defect_free = plan.targets.iter().all(|&t| state.is_occupied(t));
    let elapsed = profile.prep_time() + profile.shuttle_time(plan.total_distance_um);
    Ok(PrepOutcome {
        occupancy: state,
        targets: plan.targets.clone(),
        defect_free,
        elapsed,
        moves_executed: plan.moves.len(),
        atoms_lost_in_transfer: lost,
        attempts: 1,
    })
}

/// Centred compact block of `n` sites: `w = min(⌈√n⌉, cols)` columns and
/// `⌈n / w⌉` rows, filled row-major.
pub fn target_region(lattice: &LatticeGeometry, n: usize) -> Vec<Site> {
    if n == 0 {
        return Vec::new();
    }
    let width = ((n as f64).sqrt().ceil() as usize).min(lattice.cols).max(1);
    let height = n.div_ceil(width);
    let row0 = lattice.rows.saturating_sub(height) / 2;
    let col0 = lattice.cols.saturating_sub(width) / 2;
    let mut block = lattice.block(row0, col0, height, width);
    block.truncate(n);
    block
}

/// Loads, plans and executes until the `n_qubits` target sites are all
/// filled, allowing `max_retries` repeats after the first attempt.
pub fn prepare_register(
    profile: &HardwareProfile,
    n_qubits: usize,
    max_retries: usize,
    rng: &mut SimRng,
) -> Result<PrepOutcome, PrepError> {
    if n_qubits > profile.qubit_capacity {
        return Err(PrepError::ExceedsCapacity {
            requested: n_qubits,
            capacity: profile.qubit_capacity,
        });
    }
    let lattice = &profile.lattice;
    let sites = lattice.sites();
    let targets = target_region(lattice, n_qubits);
    let mut elapsed = Duration::ZERO;
    let mut last_defects = n_qubits;

    for attempt in 1..=max_retries + 1 {
        let occ = sample_loading(lattice, &sites, profile.loading_prob, rng);
        let plan = match plan_rearrangement(&occ, &targets) {
            Ok(plan) => plan,
            Err(PrepError::InsufficientAtoms { available, .. }) => {
                elapsed += profile.prep_time();
                last_defects = n_qubits - available;
                continue;
            }
            Err(e) => return Err(e),
        };
        let mut outcome = execute_plan(&occ, &plan, profile, rng)?;
        elapsed += outcome.elapsed;
        if outcome.defect_free {
            outcome.elapsed = elapsed;
            outcome.attempts = attempt;
            return Ok(outcome);
        }
        last_defects = outcome.defects();
    }
    Err(PrepError::RetriesExhausted {
        attempts: max_retries + 1,
        elapsed_ms: elapsed.as_nanos() as f64 / 1e6,
        last_defects,
    })
}
