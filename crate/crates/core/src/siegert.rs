//! Siegert eigenfunctions and the probability balance of resonant states.
//!
//! A point state has the form `psi_x = psi1 * lambda^|x|` for `x != 0` and
//! `psi_0` on the impurity, with `psi1 = t0 * psi0`. For `|lambda| > 1`
//! (resonant, anti-resonant, anti-bound) the amplitude grows without bound, so
//! norms are taken over a finite window `[-L, L]`. Over that window the decay
//! of the norm in time is exactly matched by the current leaving through the two
//! boundaries.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::{ModelParams, PointState, StateClass};

const SINGULAR_NORM_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormConvention {
    /// `psi0 = 1`.
    Unnormalized,
    /// `<psi~|psi> = 1`, with the divergent geometric tail continued analytically.
    Biorthogonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SiegertState {
    pub lambda: Complex64,
    pub k: Complex64,
    pub energy: Complex64,
    pub class: StateClass,
    pub psi0: Complex64,
    pub psi1: Complex64,
    /// Stored separately so consumers never depend on the square-root branch.
    pub psi0_sq: Complex64,
    pub convention: NormConvention,
}

impl SiegertState {
    /// Amplitude on site `x`.
    pub fn amplitude(&self, x: i64) -> Complex64 {
        if x == 0 {
            self.psi0
        } else {
            self.psi1 * self.lambda.powi(x.unsigned_abs() as i32)
        }
    }

    /// Window `[-L, L]` together with the two amplitudes just outside it.
    pub fn sample(&self, half_length: usize) -> AmplitudeSequence {
        let l = half_length as i64;
        AmplitudeSequence {
            half_length,
            values: (-l..=l).map(|x| self.amplitude(x)).collect(),
            halo: Some([self.amplitude(-l - 1), self.amplitude(l + 1)]),
        }
    }

    /// The time-reversed partner: amplitudes conjugated, `K -> -conj(K)`.
    pub fn conj(&self) -> Self {
        let class = match self.class {
            StateClass::Resonant => StateClass::AntiResonant,
            StateClass::AntiResonant => StateClass::Resonant,
            other => other,
        };
        Self {
            lambda: self.lambda.conj(),
            k: Complex64::new(-self.k.re, self.k.im),
            energy: self.energy.conj(),
            class,
            psi0: self.psi0.conj(),
            psi1: self.psi1.conj(),
            psi0_sq: self.psi0_sq.conj(),
            convention: self.convention,
        }
    }
}

/// Finite window of amplitudes `phi_x` for `x` in `[-L, L]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeSequence {
    pub half_length: usize,
    pub values: Vec<Complex64>,
    /// `[phi_{-L-1}, phi_{L+1}]` when the sequence continues past the window;
    /// otherwise those sites are zero.
    pub halo: Option<[Complex64; 2]>,
}

impl AmplitudeSequence {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.len().is_multiple_of(2) {
            return Err(Error::Config(format!(
                "amplitude window needs 2L+1 entries, got {}",
                values.len()
            )));
        }
        if values
            .iter()
            .any(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::Config(
                "amplitude window has non-finite entries".into(),
            ));
        }
        Ok(Self {
            half_length: values.len() / 2,
            values,
            halo: None,
        })
    }

    /// `phi_x`, with the halo (or zero) one site beyond each end.
    pub fn get(&self, x: i64) -> Complex64 {
        let l = self.half_length as i64;
        if x.abs() <= l {
            self.values[(x + l) as usize]
        } else if x == -l - 1 {
            self.halo.map_or(Complex64::new(0.0, 0.0), |h| h[0])
        } else if x == l + 1 {
            self.halo.map_or(Complex64::new(0.0, 0.0), |h| h[1])
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            half_length: self.half_length,
            values: self.values.iter().map(|v| v.conj()).collect(),
            halo: self.halo.map(|h| [h[0].conj(), h[1].conj()]),
        }
    }
}

/// Hopping magnitude on the bond between `x` and `x + 1`.
pub fn bond_hopping(params: &ModelParams, x: i64) -> f64 {
    if x == -1 || x == 0 {
        params.t0
    } else {
        1.0
    }
}

/// `(H phi)_x` for the infinite chain.
pub fn apply_hamiltonian(
    params: &ModelParams,
    x: i64,
    phi: impl Fn(i64) -> Complex64,
) -> Complex64 {
    let onsite = if x == 0 { params.v0 } else { 0.0 };
    phi(x) * onsite
        - phi(x - 1) * bond_hopping(params, x - 1)
        - phi(x + 1) * bond_hopping(params, x)
}

/// Eigenfunction for a point state.
///
/// `psi1 = t0 psi0` follows from the equation on site 1. Under
/// [`NormConvention::Biorthogonal`], `psi0^2 = (1 - lambda^2) / (2 + V0 lambda)`,
/// which is also the residue of `<0|(E - H)^-1|0>` at the pole.
pub fn build_siegert_state(
    params: &ModelParams,
    state: &PointState,
    convention: NormConvention,
) -> Result<SiegertState> {
    if state.class == StateClass::Degenerate {
        return Err(Error::ExceptionalPoint);
    }
    let lambda = state.lambda;
    let (psi0, psi0_sq) = match convention {
        NormConvention::Unnormalized => (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
        NormConvention::Biorthogonal => {
            let denom = lambda * params.v0 + 2.0;
            if denom.norm() < SINGULAR_NORM_TOL {
                return Err(Error::NormalizationSingular {
                    magnitude: denom.norm(),
                });
            }
            let sq = (Complex64::new(1.0, 0.0) - lambda * lambda) / denom;
            (sq.sqrt(), sq)
        }
    };
    Ok(SiegertState {
        lambda,
        k: state.k,
        energy: state.energy,
        class: state.class,
        psi0,
        psi1: psi0 * params.t0,
        psi0_sq,
        convention,
    })
}

/// `|(H psi)_x - E psi_x|`.
pub fn stencil_residual(params: &ModelParams, state: &SiegertState, x: i64) -> f64 {
    (apply_hamiltonian(params, x, |y| state.amplitude(y)) - state.energy * state.amplitude(x))
        .norm()
}

/// Bilinear (not sesquilinear) pairing `psi0^2 + 2 psi1^2 lambda^2 / (1 - lambda^2)`,
/// the analytically continued `<psi~|psi>`.
pub fn biorthogonal_overlap(state: &SiegertState) -> Complex64 {
    let l2 = state.lambda * state.lambda;
    state.psi0_sq + state.psi1 * state.psi1 * l2 * 2.0 / (Complex64::new(1.0, 0.0) - l2)
}

/// `|psi0|^2 + 2 sum_{x=1..L} |psi1|^2 exp(-2 x Im K)`.
pub fn partial_norm(state: &SiegertState, half_length: usize) -> f64 {
    let tail = state.psi1.norm_sqr();
    let growth = -2.0 * state.k.im;
    let sum: f64 = (1..=half_length)
        .map(|x| tail * (growth * x as f64).exp())
        .sum();
    state.psi0.norm_sqr() + 2.0 * sum
}

/// Large-`L` estimate `|psi1|^2 exp(-2 L Im K) / sinh(-Im K)`.
///
/// The exact sum approaches `exp(-Im K)` times this, not this itself.
pub fn partial_norm_leading(state: &SiegertState, half_length: usize) -> f64 {
    let im = state.k.im;
    state.psi1.norm_sqr() * (-2.0 * half_length as f64 * im).exp() / (-im).sinh()
}

/// Current through the bond `(L, L+1)`, `J = i (conj(psi_{L+1}) psi_L - psi_{L+1} conj(psi_L))`.
pub fn boundary_current(state: &SiegertState, half_length: usize) -> f64 {
    let l = half_length as i64;
    bond_current(state.amplitude(l), state.amplitude(l + 1))
}

/// Current through the bond `(-L-1, -L)`, positive in the `+x` direction.
/// Mirror symmetry makes it `-boundary_current`.
pub fn boundary_current_left(state: &SiegertState, half_length: usize) -> f64 {
    let l = half_length as i64;
    bond_current(state.amplitude(-l - 1), state.amplitude(-l))
}

/// Large-`L` estimate `2 |psi1|^2 exp(-2 L Im K) sin(Re K)`.
pub fn boundary_current_leading(state: &SiegertState, half_length: usize) -> f64 {
    2.0 * state.psi1.norm_sqr() * (-2.0 * half_length as f64 * state.k.im).exp() * state.k.re.sin()
}

fn bond_current(from: Complex64, to: Complex64) -> f64 {
    let i = Complex64::new(0.0, 1.0);
    (i * (to.conj() * from - to * from.conj())).re
}

/// The two sides of the balance for a resonant state at `t = 0`:
/// `-(d/dt) <Psi|Psi>_L = -2 Im E <psi|psi>_L` and the outflow `J(L) + |J(-L)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservationSides {
    pub norm_decay: f64,
    pub outflow: f64,
}

impl ConservationSides {
    pub fn relative_residual(&self) -> f64 {
        (self.norm_decay - self.outflow).abs() / self.outflow.abs()
    }
}

pub fn conservation_sides(state: &SiegertState, half_length: usize) -> Result<ConservationSides> {
    if state.class != StateClass::Resonant {
        return Err(Error::Class {
            expected: StateClass::Resonant,
            found: state.class,
        });
    }
    let norm_decay = -2.0 * state.energy.im * partial_norm(state, half_length);
    let outflow =
        boundary_current(state, half_length) + boundary_current_left(state, half_length).abs();
    Ok(ConservationSides {
        norm_decay,
        outflow,
    })
}

/// Relative mismatch between the decay of the partial norm and the boundary outflow.
pub fn conservation_residual(state: &SiegertState, half_length: usize) -> Result<f64> {
    Ok(conservation_sides(state, half_length)?.relative_residual())
}

/// `sum_{x=-L..L} conj(phi_x) (H phi)_x`, one site-row at a time, reading the
/// halo beyond the window.
pub fn quadratic_form_partial(params: &ModelParams, seq: &AmplitudeSequence) -> Complex64 {
    let l = seq.half_length as i64;
    (-l..=l)
        .map(|x| seq.get(x).conj() * apply_hamiltonian(params, x, |y| seq.get(y)))
        .sum()
}

/// The same matrix element regrouped bond by bond,
/// `-sum_bonds t (conj(phi_x) phi_{x+1} + phi_x conj(phi_{x+1})) + V0 |phi_0|^2`,
/// keeping only bonds inside the window. Real by construction.
pub fn quadratic_form_resummed(params: &ModelParams, seq: &AmplitudeSequence) -> Complex64 {
    let l = seq.half_length as i64;
    let bonds: Complex64 = (-l..l)
        .map(|x| {
            let (a, b) = (seq.get(x), seq.get(x + 1));
            -(a.conj() * b + a * b.conj()) * bond_hopping(params, x)
        })
        .sum();
    bonds + seq.get(0).norm_sqr() * params.v0
}
