use serde::{Deserialize, Serialize};

use super::AnalogError;

/// Piecewise-linear function of time given by `(t, value)` knots; constant
/// beyond the first and last knot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinear {
    knots: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self, AnalogError> {
        if knots.is_empty() {
            return Err(AnalogError::InvalidParameter("no knots".into()));
        }
        if knots.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
            return Err(AnalogError::InvalidParameter("non-finite knot".into()));
        }
        if knots.windows(2).any(|w| w[1].0 < w[0].0) {
            return Err(AnalogError::InvalidParameter(
                "knot times must be non-decreasing".into(),
            ));
        }
        Ok(Self { knots })
    }

    pub fn constant(v: f64) -> Self {
        Self {
            knots: vec![(0.0, v)],
        }
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn value(&self, t: f64) -> f64 {
        let k = &self.knots;
        if t <= k[0].0 {
            return k[0].1;
        }
        for w in k.windows(2) {
            let ((t0, v0), (t1, v1)) = (w[0], w[1]);
            if t <= t1 {
                return if t1 > t0 {
                    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
                } else {
                    v1
                };
            }
        }
        k[k.len() - 1].1
    }

    /// Largest `|value|`; attained at a knot.
    pub fn max_abs(&self) -> f64 {
        self.knots.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max)
    }
}

/// Global drive over `[0, T]`: Rabi frequency `Ω(t)` and detuning `Δ(t)`,
/// both in rad/µs, `T` in µs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSchedule {
    pub total_time: f64,
    pub omega: PiecewiseLinear,
    pub delta: PiecewiseLinear,
}

impl SweepSchedule {
    pub fn new(
        total_time: f64,
        omega: PiecewiseLinear,
        delta: PiecewiseLinear,
    ) -> Result<Self, AnalogError> {
        if !(total_time.is_finite() && total_time >= 0.0) {
            return Err(AnalogError::InvalidParameter(format!(
                "sweep time must be non-negative, got {total_time}"
            )));
        }
        Ok(Self {
            total_time,
            omega,
            delta,
        })
    }

    pub fn constant(total_time: f64, omega: f64, delta: f64) -> Result<Self, AnalogError> {
        Self::new(
            total_time,
            PiecewiseLinear::constant(omega),
            PiecewiseLinear::constant(delta),
        )
    }

    /// Ω ramps `0 → Ω_max → 0` over 10%/80%/10% of `T` while Δ rises
    /// linearly from `−Ω_max` to `2·Ω_max`.
    pub fn default_mis(total_time: f64, omega_max: f64) -> Result<Self, AnalogError> {
        let t = total_time;
        Self::new(
            t,
            PiecewiseLinear::new(vec![
                (0.0, 0.0),
                (0.1 * t, omega_max),
                (0.9 * t, omega_max),
                (t, 0.0),
            ])?,
            PiecewiseLinear::new(vec![(0.0, -omega_max), (t, 2.0 * omega_max)])?,
        )
    }

    /// Drive starts and ends switched off.
    pub fn is_adiabatic_shape(&self) -> bool {
        self.omega.value(0.0) == 0.0 && self.omega.value(self.total_time) == 0.0
    }
}
