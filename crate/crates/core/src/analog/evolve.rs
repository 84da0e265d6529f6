use super::hamiltonian::RydbergHamiltonian;
use super::layout::AtomLayout;
use super::sweep::SweepSchedule;
use super::AnalogError;
use crate::sim::C64;

/// Largest step allowed by the precondition
/// `dt ≤ 0.01 / max(Ω_max, |Δ|_max, V_nearest)`.
pub fn max_stable_dt(layout: &AtomLayout, sweep: &SweepSchedule) -> f64 {
    let scale = layout
        .rabi_max()
        .max(sweep.omega.max_abs())
        .max(sweep.delta.max_abs())
        .max(layout.nearest_interaction());
    0.01 / scale
}

#[derive(Debug, Clone)]
pub struct Evolution {
    /// Final state, bit `i` set meaning atom `i` is excited.
    pub amplitudes: Vec<C64>,
    pub steps: usize,
    pub dt: f64,
    /// Largest `|‖ψ‖ − 1|` seen before the per-step renormalisation.
    pub max_norm_drift: f64,
}

impl Evolution {
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Integrates the Schrödinger equation from the all-ground state.
pub fn evolve(
    layout: &AtomLayout,
    sweep: &SweepSchedule,
    dt: f64,
) -> Result<Evolution, AnalogError> {
    let mut psi = vec![C64::new(0.0, 0.0); 1 << layout.len()];
    psi[0] = C64::new(1.0, 0.0);
    evolve_from(layout, sweep, dt, psi, |_, _| {})
}

/// Fixed-step RK4 from `initial`. `observe(t, ψ)` is called at `t = 0`
/// and after every step.
pub fn evolve_from(
    layout: &AtomLayout,
    sweep: &SweepSchedule,
    dt: f64,
    initial: Vec<C64>,
    mut observe: impl FnMut(f64, &[C64]),
) -> Result<Evolution, AnalogError> {
    let bound = max_stable_dt(layout, sweep);
    if !(dt > 0.0 && dt <= bound * (1.0 + 1e-12)) {
        return Err(AnalogError::StepTooLarge { dt, max: bound });
    }
    let h = RydbergHamiltonian::new(layout)?;
    if initial.len() != h.dim() {
        return Err(AnalogError::InvalidParameter(format!(
            "initial state has {} amplitudes, expected {}",
            initial.len(),
            h.dim()
        )));
    }
    let steps = (sweep.total_time / dt).ceil() as usize;
    let step = if steps == 0 {
        0.0
    } else {
        sweep.total_time / steps as f64
    };

    let dim = h.dim();
    let mut psi = initial;
    let zero = C64::new(0.0, 0.0);
    let (mut k, mut acc, mut tmp) = (vec![zero; dim], vec![zero; dim], vec![zero; dim]);
    let minus_i = C64::new(0.0, -1.0);
    let mut max_drift: f64 = 0.0;
    observe(0.0, &psi);

    for n in 0..steps {
        let t = n as f64 * step;
        let at = |s: f64| (sweep.omega.value(s), sweep.delta.value(s));
        let stages = [
            (at(t), 0.0, 1.0),
            (at(t + step / 2.0), step / 2.0, 2.0),
            (at(t + step / 2.0), step / 2.0, 2.0),
            (at(t + step), step, 1.0),
        ];
        acc.iter_mut().for_each(|a| *a = zero);
        for (stage, &((omega, delta), offset, weight)) in stages.iter().enumerate() {
            if stage == 0 {
                tmp.copy_from_slice(&psi);
            } else {
                for ((t_, p), k_) in tmp.iter_mut().zip(&psi).zip(&k) {
                    *t_ = p + k_ * offset;
                }
            }
            h.apply(omega, delta, &tmp, &mut k);
            for (a, k_) in acc.iter_mut().zip(k.iter_mut()) {
                *k_ *= minus_i;
                *a += *k_ * weight;
            }
        }
        for (p, a) in psi.iter_mut().zip(&acc) {
            *p += a * (step / 6.0);
        }
        let norm = psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        max_drift = max_drift.max((norm - 1.0).abs());
        psi.iter_mut().for_each(|a| *a /= norm);
        observe(t + step, &psi);
    }
    if max_drift > 1e-8 {
        log::warn!("norm drift {max_drift:.2e} exceeds 1e-8; reduce the time step");
    }
    Ok(Evolution {
        amplitudes: psi,
        steps,
        dt: step,
        max_norm_drift: max_drift,
    })
}
