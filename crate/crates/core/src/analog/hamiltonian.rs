use super::layout::AtomLayout;
use super::AnalogError;
use crate::sim::C64;

/// Largest layout handled by the dense-vector Hamiltonian.
pub const MAX_ATOMS: usize = 16;

/// `H = Σ (Ω/2) σx_i − Δ Σ n_i + Σ_{i<j} V_ij n_i n_j` in the basis where
/// bit `i` set means atom `i` is in the Rydberg state.
#[derive(Debug, Clone)]
pub struct RydbergHamiltonian {
    n: usize,
    /// `Σ V_ij n_i n_j` per basis state.
    interaction: Vec<f64>,
    /// Rydberg excitation count per basis state.
    excitations: Vec<f64>,
}

impl RydbergHamiltonian {
    pub fn new(layout: &AtomLayout) -> Result<Self, AnalogError> {
        let n = layout.len();
        if n > MAX_ATOMS {
            return Err(AnalogError::TooManyAtoms { n, max: MAX_ATOMS });
        }
        let dim = 1usize << n;
        let mut v = vec![vec![0.0; n]; n];
        for (i, row) in v.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate().skip(i + 1) {
                *x = layout.interaction(i, j);
            }
        }
        let mut interaction = vec![0.0; dim];
        let mut excitations = vec![0.0; dim];
        for s in 0..dim {
            let mut e = 0.0;
            for i in (0..n).filter(|&i| s >> i & 1 == 1) {
                for j in (i + 1..n).filter(|&j| s >> j & 1 == 1) {
                    e += v[i][j];
                }
            }
            interaction[s] = e;
            excitations[s] = s.count_ones() as f64;
        }
        Ok(Self {
            n,
            interaction,
            excitations,
        })
    }

    pub fn n_atoms(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// Diagonal entry for basis state `s` at detuning `delta`.
    pub fn diagonal(&self, s: usize, delta: f64) -> f64 {
        self.interaction[s] - delta * self.excitations[s]
    }

    pub fn excitations(&self, s: usize) -> usize {
        self.excitations[s] as usize
    }

    /// `out = H ψ`.
    pub fn apply(&self, omega: f64, delta: f64, psi: &[C64], out: &mut [C64]) {
        let half = omega / 2.0;
        for (s, o) in out.iter_mut().enumerate() {
            let mut flip = C64::new(0.0, 0.0);
            for i in 0..self.n {
                flip += psi[s ^ (1 << i)];
            }
            *o = psi[s] * self.diagonal(s, delta) + flip * half;
        }
    }

    /// `⟨ψ|H|ψ⟩`.
    pub fn expectation(&self, omega: f64, delta: f64, psi: &[C64]) -> f64 {
        let mut h = vec![C64::new(0.0, 0.0); psi.len()];
        self.apply(omega, delta, psi, &mut h);
        psi.iter().zip(&h).map(|(a, b)| (a.conj() * b).re).sum()
    }

    /// Dense matrix, row-major.
    pub fn to_dense(&self, omega: f64, delta: f64) -> Vec<Vec<C64>> {
        let dim = self.dim();
        let mut m = vec![vec![C64::new(0.0, 0.0); dim]; dim];
        for (s, row) in m.iter_mut().enumerate() {
            row[s] = C64::new(self.diagonal(s, delta), 0.0);
            for i in 0..self.n {
                row[s ^ (1 << i)] += C64::new(omega / 2.0, 0.0);
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_atom_matrix() {
        let l = AtomLayout::new(vec![[0.0, 0.0]], 5.0, 1.0).unwrap();
        let h = RydbergHamiltonian::new(&l).unwrap().to_dense(0.8, 0.3);
        assert_eq!(h[0][0].re, 0.0);
        assert_eq!(h[0][1].re, 0.4);
        assert_eq!(h[1][0].re, 0.4);
        assert_eq!(h[1][1].re, -0.3);
    }

    #[test]
    fn pair_at_radius_has_v_equal_omega_max() {
        let l = AtomLayout::new(vec![[0.0, 0.0], [7.5, 0.0]], 7.5, 2.5).unwrap();
        let h = RydbergHamiltonian::new(&l).unwrap();
        assert!((h.diagonal(0b11, 0.0) - 2.5).abs() < 1e-12);
    }

    #[test]
    fn too_many_atoms() {
        let pos = (0..17).map(|i| [i as f64, 0.0]).collect();
        let l = AtomLayout::new(pos, 1.0, 1.0).unwrap();
        assert!(matches!(
            RydbergHamiltonian::new(&l),
            Err(AnalogError::TooManyAtoms { .. })
        ));
    }
}
