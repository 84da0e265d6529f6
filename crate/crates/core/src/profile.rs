//! Machine model of a neutral-atom processor.
//!
//! A [`HardwareProfile`] holds every platform parameter the other modules
//! consume: register size and geometry, blockade radius, lifetimes and
//! decoherence times, operation fidelities and durations. Profiles are read
//! from JSON documents whose keys are the field names below; any key left
//! out takes its value from the bundled `rb87-2023` profile.

use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::lattice::{LatticeGeometry, LatticeKind};

/// Name of the default profile.
pub const DEFAULT_PROFILE: &str = "rb87-2023";

/// Names accepted by [`HardwareProfile::builtin`].
pub const BUILTIN_PROFILES: [&str; 2] = [DEFAULT_PROFILE, "nuclear-spin"];

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("malformed profile document: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error("profile field `{field}`: {constraint} violated (value {value})")]
    Invariant {
        field: &'static str,
        constraint: &'static str,
        value: f64,
    },
    #[error("unknown built-in profile `{0}`")]
    UnknownBuiltin(String),
}

/// Platform parameters. Units are part of the field contract:
/// lifetimes and decoherence times in seconds, gate durations in
/// microseconds, preparation and readout in milliseconds, distances in
/// micrometres.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardwareProfile {
    pub name: String,
    pub qubit_capacity: usize,
    pub lattice: LatticeGeometry,
    /// Probability that a trap holds an atom after loading.
    pub loading_prob: f64,
    /// Blockade radius in units of the lattice spacing.
    pub blockade_radius_sites: f64,
    pub trap_lifetime: f64,
    pub t1: f64,
    pub t2: f64,
    pub t2_star: f64,
    pub f_1q: f64,
    pub f_2q: f64,
    pub f_readout: f64,
    /// Probability that a placed atom survives its transfer.
    pub transfer_success: f64,
    pub t_1q: f64,
    pub t_2q: f64,
    pub t_prep: f64,
    pub t_readout: f64,
    /// Mobile-tweezer speed in µm/µs. Not a measured value; a configurable
    /// assumption.
    pub shuttle_speed: f64,
}

/// Same fields as [`HardwareProfile`], all optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileDocument {
    name: Option<String>,
    qubit_capacity: Option<usize>,
    lattice: Option<LatticeDocument>,
    loading_prob: Option<f64>,
    blockade_radius_sites: Option<f64>,
    trap_lifetime: Option<f64>,
    t1: Option<f64>,
    t2: Option<f64>,
    t2_star: Option<f64>,
    f_1q: Option<f64>,
    f_2q: Option<f64>,
    f_readout: Option<f64>,
    transfer_success: Option<f64>,
    t_1q: Option<f64>,
    t_2q: Option<f64>,
    t_prep: Option<f64>,
    t_readout: Option<f64>,
    shuttle_speed: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeDocument {
    kind: Option<LatticeKind>,
    spacing: Option<f64>,
    rows: Option<usize>,
    cols: Option<usize>,
}

impl Default for HardwareProfile {
    fn default() -> Self {
        Self::rb87_2023()
    }
}

impl HardwareProfile {
    /// Electronic-spin rubidium register: ~100 qubits on a 3 µm square
    /// lattice with the current typical fidelities and durations.
    pub fn rb87_2023() -> Self {
        Self {
            name: DEFAULT_PROFILE.to_string(),
            qubit_capacity: 100,
            lattice: LatticeGeometry {
                kind: LatticeKind::Square,
                spacing: 3.0,
                rows: 10,
                cols: 10,
            },
            loading_prob: 0.55,
            blockade_radius_sites: 2.0,
            trap_lifetime: 10.0,
            t1: 4.0,
            t2: 1.0,
            t2_star: 4e-3,
            f_1q: 0.999,
            f_2q: 0.975,
            f_readout: 0.95,
            transfer_success: 0.988,
            t_1q: 2.0,
            t_2q: 0.4,
            t_prep: 400.0,
            t_readout: 10.0,
            shuttle_speed: 0.55,
        }
    }

    /// Nuclear-spin encoding: same machine, longer coherence.
    pub fn nuclear_spin() -> Self {
        Self {
            name: "nuclear-spin".to_string(),
            t1: 50.0,
            t2: 40.0,
            t2_star: 30.0,
            ..Self::rb87_2023()
        }
    }

    pub fn builtin(name: &str) -> Result<Self, ProfileError> {
        match name {
            DEFAULT_PROFILE => Ok(Self::rb87_2023()),
            "nuclear-spin" => Ok(Self::nuclear_spin()),
            other => Err(ProfileError::UnknownBuiltin(other.to_string())),
        }
    }

    /// Parses and validates a profile document, filling missing keys from
    /// the default profile.
    pub fn from_json(text: &str) -> Result<Self, ProfileError> {
        let doc: ProfileDocument = serde_json::from_str(text)?;
        let base = Self::rb87_2023();
        let lat = doc.lattice.unwrap_or_default();
        let profile = Self {
            name: doc.name.unwrap_or(base.name),
            qubit_capacity: doc.qubit_capacity.unwrap_or(base.qubit_capacity),
            lattice: LatticeGeometry {
                kind: lat.kind.unwrap_or(base.lattice.kind),
                spacing: lat.spacing.unwrap_or(base.lattice.spacing),
                rows: lat.rows.unwrap_or(base.lattice.rows),
                cols: lat.cols.unwrap_or(base.lattice.cols),
            },
            loading_prob: doc.loading_prob.unwrap_or(base.loading_prob),
            blockade_radius_sites: doc
                .blockade_radius_sites
                .unwrap_or(base.blockade_radius_sites),
            trap_lifetime: doc.trap_lifetime.unwrap_or(base.trap_lifetime),
            t1: doc.t1.unwrap_or(base.t1),
            t2: doc.t2.unwrap_or(base.t2),
            t2_star: doc.t2_star.unwrap_or(base.t2_star),
            f_1q: doc.f_1q.unwrap_or(base.f_1q),
            f_2q: doc.f_2q.unwrap_or(base.f_2q),
            f_readout: doc.f_readout.unwrap_or(base.f_readout),
            transfer_success: doc.transfer_success.unwrap_or(base.transfer_success),
            t_1q: doc.t_1q.unwrap_or(base.t_1q),
            t_2q: doc.t_2q.unwrap_or(base.t_2q),
            t_prep: doc.t_prep.unwrap_or(base.t_prep),
            t_readout: doc.t_readout.unwrap_or(base.t_readout),
            shuttle_speed: doc.shuttle_speed.unwrap_or(base.shuttle_speed),
        };
        profile.validate()?;
        Ok(profile)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serialises")
    }

    pub fn validate(&self) -> Result<(), ProfileError> {
        let unit = |field, value: f64| {
            if value > 0.0 && value <= 1.0 {
                Ok(())
            } else {
                Err(ProfileError::Invariant {
                    field,
                    constraint: "0 < value ≤ 1",
                    value,
                })
            }
        };
        let positive = |field, value: f64| {
            if value > 0.0 && value.is_finite() {
                Ok(())
            } else {
                Err(ProfileError::Invariant {
                    field,
                    constraint: "value > 0",
                    value,
                })
            }
        };
        unit("loading_prob", self.loading_prob)?;
        unit("transfer_success", self.transfer_success)?;
        unit("f_1q", self.f_1q)?;
        unit("f_2q", self.f_2q)?;
        unit("f_readout", self.f_readout)?;
        positive("trap_lifetime", self.trap_lifetime)?;
        positive("t1", self.t1)?;
        positive("t2", self.t2)?;
        positive("t2_star", self.t2_star)?;
        positive("t_1q", self.t_1q)?;
        positive("t_2q", self.t_2q)?;
        positive("t_prep", self.t_prep)?;
        positive("t_readout", self.t_readout)?;
        positive("shuttle_speed", self.shuttle_speed)?;
        positive("lattice.spacing", self.lattice.spacing)?;
        if self.t2 > 2.0 * self.t1 {
            return Err(ProfileError::Invariant {
                field: "t2",
                constraint: "t2 ≤ 2·t1",
                value: self.t2,
            });
        }
        if self.t2_star > self.t2 {
            return Err(ProfileError::Invariant {
                field: "t2_star",
                constraint: "t2_star ≤ t2",
                value: self.t2_star,
            });
        }
        if !(self.blockade_radius_sites >= 1.0 && self.blockade_radius_sites.is_finite()) {
            return Err(ProfileError::Invariant {
                field: "blockade_radius_sites",
                constraint: "blockade_radius_sites ≥ 1",
                value: self.blockade_radius_sites,
            });
        }
        if self.qubit_capacity == 0 {
            return Err(ProfileError::Invariant {
                field: "qubit_capacity",
                constraint: "qubit_capacity ≥ 1",
                value: 0.0,
            });
        }
        if self.lattice.site_count() < self.qubit_capacity {
            return Err(ProfileError::Invariant {
                field: "lattice",
                constraint: "rows·cols ≥ qubit_capacity",
                value: self.lattice.site_count() as f64,
            });
        }
        Ok(())
    }

    /// Blockade radius in micrometres.
    pub fn blockade_radius_um(&self) -> f64 {
        self.blockade_radius_sites * self.lattice.spacing
    }

    pub fn single_qubit_gate_time(&self) -> Duration {
        micros(self.t_1q)
    }

    pub fn two_qubit_gate_time(&self) -> Duration {
        micros(self.t_2q)
    }

    pub fn prep_time(&self) -> Duration {
        millis(self.t_prep)
    }

    pub fn readout_time(&self) -> Duration {
        millis(self.t_readout)
    }

    /// Time to shuttle an atom over `distance_um`.
    pub fn shuttle_time(&self, distance_um: f64) -> Duration {
        micros(distance_um / self.shuttle_speed)
    }

    /// Short stable hash of the canonical JSON form.
    pub fn fingerprint(&self) -> String {
        let canonical = serde_json::to_string(self).expect("profile serialises");
        let digest = Sha256::digest(canonical.as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Durations are kept at nanosecond resolution so timing totals are exact
/// sums of integers.
pub fn micros(us: f64) -> Duration {
    Duration::from_nanos((us * 1e3).round() as u64)
}

pub fn millis(ms: f64) -> Duration {
    Duration::from_nanos((ms * 1e6).round() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_profile_values() {
        let p = HardwareProfile::from_json("{}").unwrap();
        assert_eq!(p.name, "rb87-2023");
        assert_eq!(p.f_1q, 0.999);
        assert_eq!(p.f_2q, 0.975);
        assert_eq!(p.t_2q, 0.4);
        assert_eq!(p.t_prep, 400.0);
        assert_eq!(p.t_readout, 10.0);
        assert_eq!(p.loading_prob, 0.55);
        assert_eq!(p.transfer_success, 0.988);
        assert_eq!(p.two_qubit_gate_time(), Duration::from_nanos(400));
        assert_eq!(p.prep_time(), Duration::from_millis(400));
    }

    #[test]
    fn t2_bound_is_enforced() {
        let err = HardwareProfile::from_json(r#"{"t2": 10, "t1": 4}"#).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("t2 ≤ 2·t1 violated"), "{msg}");
        assert!(msg.contains("`t2`"));
    }

    #[test]
    fn zero_fidelity_rejected() {
        let err = HardwareProfile::from_json(r#"{"f_2q": 0}"#).unwrap_err();
        assert!(matches!(err, ProfileError::Invariant { field: "f_2q", .. }));
    }

    #[test]
    fn other_bounds() {
        for (doc, field) in [
            (r#"{"t2_star": 2.0}"#, "t2_star"),
            (r#"{"blockade_radius_sites": 0.5}"#, "blockade_radius_sites"),
            (r#"{"loading_prob": 1.5}"#, "loading_prob"),
            (r#"{"t_prep": -1}"#, "t_prep"),
            (r#"{"qubit_capacity": 101}"#, "lattice"),
            (r#"{"lattice": {"spacing": 0}}"#, "lattice.spacing"),
        ] {
            match HardwareProfile::from_json(doc) {
                Err(ProfileError::Invariant { field: f, .. }) => assert_eq!(f, field, "{doc}"),
                other => panic!("{doc}: {other:?}"),
            }
        }
    }

    #[test]
    fn unknown_and_malformed_rejected() {
        assert!(matches!(
            HardwareProfile::from_json(r#"{"t3": 1}"#),
            Err(ProfileError::Malformed(_))
        ));
        assert!(matches!(
            HardwareProfile::from_json(r#"{"lattice": {"depth": 2}}"#),
            Err(ProfileError::Malformed(_))
        ));
        assert!(matches!(
            HardwareProfile::from_json("{\"t1\": "),
            Err(ProfileError::Malformed(_))
        ));
    }

    #[test]
    fn partial_lattice_is_merged() {
        let p = HardwareProfile::from_json(r#"{"lattice": {"rows": 12}}"#).unwrap();
        assert_eq!(p.lattice.rows, 12);
        assert_eq!(p.lattice.cols, 10);
        assert_eq!(p.lattice.spacing, 3.0);
    }

    #[test]
    fn builtins_validate() {
        for name in BUILTIN_PROFILES {
            HardwareProfile::builtin(name).unwrap().validate().unwrap();
        }
        assert_eq!(HardwareProfile::nuclear_spin().t2, 40.0);
        assert!(HardwareProfile::builtin("cs133").is_err());
    }

    #[test]
    fn fingerprint_tracks_content() {
        let a = HardwareProfile::rb87_2023();
        let mut b = a.clone();
        assert_eq!(a.fingerprint(), b.fingerprint());
        b.t_prep = 1.0;
        assert_ne!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint().len(), 16);
    }
}
