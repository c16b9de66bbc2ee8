//! Point spectrum of the single-impurity chain.
//!
//! With `lambda = exp(iK)` the outgoing-wave eigenproblem of the chain reduces to
//! the secular quadratic
//!
//! ```text
//! (1 - 2 t0^2) lambda^2 + V0 lambda + 1 = 0
//! ```
//!
//! and each root is mapped to a wave number `K = -i log(lambda)` (principal branch,
//! `Re K` in `(-pi, pi]`) and an energy `E = -2 cos K = -(lambda + 1/lambda)`.
//! Roots are labelled by where `K` lands in the complex plane.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `|Re K|` and `|Re K - pi|` (and on `|Im K|`) for "on the axis".
pub const AXIS_TOL: f64 = 1e-9;
/// Absolute tolerance on the secular discriminant for an exceptional point.
pub const EXCEPTIONAL_TOL: f64 = 1e-10;
/// Below this `|1 - 2 t0^2|` the secular equation is treated as linear.
pub const LINEAR_TOL: f64 = 1e-12;

/// Couplings of the impurity site. The bulk hopping, `hbar` and the lattice
/// spacing are all fixed to one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Hopping between the impurity and its two neighbours.
    pub t0: f64,
    /// On-site potential of the impurity.
    pub v0: f64,
}

impl ModelParams {
    pub fn new(t0: f64, v0: f64) -> Result<Self> {
        let params = Self { t0, v0 };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.t0.is_finite() && self.v0.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParams {
                t0: self.t0,
                v0: self.v0,
            })
        }
    }

    /// Leading coefficient `1 - 2 t0^2` of the secular quadratic.
    pub fn quadratic_coefficient(&self) -> f64 {
        1.0 - 2.0 * self.t0 * self.t0
    }

    /// `V0^2 - 4 (1 - 2 t0^2)`.
    pub fn discriminant(&self) -> f64 {
        self.v0 * self.v0 - 4.0 * self.quadratic_coefficient()
    }

    /// Secular polynomial evaluated at `lambda`.
    pub fn secular(&self, lambda: Complex64) -> Complex64 {
        (lambda * self.quadratic_coefficient() + self.v0) * lambda + 1.0
    }

    /// Derivative of the secular polynomial.
    pub fn secular_derivative(&self, lambda: Complex64) -> Complex64 {
        lambda * (2.0 * self.quadratic_coefficient()) + self.v0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StateClass {
    Bound,
    AntiBound,
    Resonant,
    AntiResonant,
    Degenerate,
}

impl StateClass {
    pub fn name(self) -> &'static str {
        match self {
            StateClass::Bound => "Bound",
            StateClass::AntiBound => "AntiBound",
            StateClass::Resonant => "Resonant",
            StateClass::AntiResonant => "AntiResonant",
            StateClass::Degenerate => "Degenerate",
        }
    }
}

impl std::fmt::Display for StateClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One discrete solution of the secular equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointState {
    pub lambda: Complex64,
    pub k: Complex64,
    pub energy: Complex64,
    pub class: StateClass,
}

impl PointState {
    /// Builds the state for a root `lambda`, classifying it from its wave number.
    pub fn from_lambda(lambda: Complex64) -> Self {
        let k = wave_number(lambda);
        Self {
            lambda,
            k,
            energy: energy_from_lambda(lambda),
            class: classify(k),
        }
    }

    /// True when the root lies strictly inside the unit circle (`Im K > 0`).
    pub fn is_inside_unit_circle(&self) -> bool {
        self.lambda.norm() < 1.0
    }
}

/// `K = -i log(lambda)` on the principal branch, with `Re K = -pi` mapped to `+pi`.
pub fn wave_number(lambda: Complex64) -> Complex64 {
    let mut re = lambda.im.atan2(lambda.re);
    if re <= -PI {
        re = PI;
    }
    Complex64::new(re, -lambda.norm().ln())
}

/// `E = -(lambda + 1/lambda)`, equal to `-2 cos K`.
pub fn energy_from_lambda(lambda: Complex64) -> Complex64 {
    -(lambda + lambda.inv())
}

/// Classifies a wave number with `Re k` in `(-pi, pi]`.
///
/// The upper half plane (and the real axis, within [`AXIS_TOL`]) holds bound
/// states. Below it, roots on the imaginary axis or on `Re k = pi` are
/// anti-bound, and the fourth and third quadrants hold resonant and
/// anti-resonant states.
pub fn classify(k: Complex64) -> StateClass {
    if k.im >= -AXIS_TOL {
        return StateClass::Bound;
    }
    let on_axis = k.re.abs() <= AXIS_TOL || (PI - k.re.abs()).abs() <= AXIS_TOL;
    if on_axis {
        StateClass::AntiBound
    } else if k.re > 0.0 {
        StateClass::Resonant
    } else {
        StateClass::AntiResonant
    }
}

/// All point states for one parameter set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSpectrum {
    pub params: ModelParams,
    pub states: Vec<PointState>,
    /// Set when the discriminant vanishes within [`EXCEPTIONAL_TOL`].
    pub exceptional_point: bool,
}

impl PointSpectrum {
    pub fn of_class(&self, class: StateClass) -> impl Iterator<Item = &PointState> {
        self.states.iter().filter(move |s| s.class == class)
    }

    pub fn first_of_class(&self, class: StateClass) -> Option<&PointState> {
        self.of_class(class).next()
    }

    /// Sorted class labels, used to detect where the spectrum changes character.
    pub fn signature(&self) -> Vec<StateClass> {
        let mut classes: Vec<_> = self.states.iter().map(|s| s.class).collect();
        classes.sort();
        classes
    }

    /// Resonant and anti-resonant partners, when both exist.
    pub fn resonance_pair(&self) -> Option<(&PointState, &PointState)> {
        Some((
            self.first_of_class(StateClass::Resonant)?,
            self.first_of_class(StateClass::AntiResonant)?,
        ))
    }
}

fn state_order(a: &PointState, b: &PointState) -> Ordering {
    a.class
        .cmp(&b.class)
        .then(a.k.re.total_cmp(&b.k.re))
        .then(a.k.im.total_cmp(&b.k.im))
}

/// Roots of the secular quadratic, converted to point states.
pub fn solve_point_spectrum(params: ModelParams) -> Result<PointSpectrum> {
    params.validate()?;
    let a = params.quadratic_coefficient();
    let b = params.v0;

    if a.abs() < LINEAR_TOL {
        // The second root escapes to infinity.
        if b == 0.0 {
            return Err(Error::DegenerateModel {
                t0: params.t0,
                v0: params.v0,
            });
        }
        let lambda = Complex64::new(-1.0 / b, 0.0);
        return Ok(PointSpectrum {
            params,
            states: vec![PointState::from_lambda(lambda)],
            exceptional_point: false,
        });
    }

    let disc = params.discriminant();
    if disc.abs() < EXCEPTIONAL_TOL {
        let lambda = Complex64::new(-b / (2.0 * a), 0.0);
        let state = PointState {
            class: StateClass::Degenerate,
            ..PointState::from_lambda(lambda)
        };
        return Ok(PointSpectrum {
            params,
            states: vec![state, state],
            exceptional_point: true,
        });
    }

    let roots = if disc > 0.0 {
        // Cancellation-free pair: q = -(b + sign(b) sqrt(disc)) / 2, roots q/a and 1/q.
        let sign = if b >= 0.0 { 1.0 } else { -1.0 };
        let q = -0.5 * (b + sign * disc.sqrt());
        [Complex64::new(q / a, 0.0), Complex64::new(1.0 / q, 0.0)]
    } else {
        let re = -b / (2.0 * a);
        let im = (-disc).sqrt() / (2.0 * a);
        [Complex64::new(re, im), Complex64::new(re, -im)]
    };

    let mut states: Vec<_> = roots.into_iter().map(PointState::from_lambda).collect();
    states.sort_by(state_order);
    Ok(PointSpectrum {
        params,
        states,
        exceptional_point: false,
    })
}

/// Values of `V0` where the two roots coalesce, `V0 = +-2 sqrt(1 - 2 t0^2)`.
///
/// Returns `None` when `1 - 2 t0^2 < 0`; at `1 - 2 t0^2 = 0` (within
/// [`LINEAR_TOL`]) both values collapse to zero.
pub fn exceptional_points(t0: f64) -> Option<(f64, f64)> {
    let a = 1.0 - 2.0 * t0 * t0;
    if a < -LINEAR_TOL || !a.is_finite() {
        return None;
    }
    let v = 2.0 * a.max(0.0).sqrt();
    Some((-v, v))
}

/// Values of `V0` at which a root reaches the band edge, `lambda = 1` (lower
/// edge, `E = -2`) and `lambda = -1` (upper edge, `E = 2`).
pub fn band_edge_crossings(t0: f64) -> (f64, f64) {
    let v = 2.0 - 2.0 * t0 * t0;
    (-v, v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub v0: f64,
    pub spectrum: Result<PointSpectrum>,
    /// The class signature differs from the previous row.
    pub transition: bool,
}

impl SweepRow {
    pub fn signature(&self) -> Option<Vec<StateClass>> {
        self.spectrum.as_ref().ok().map(PointSpectrum::signature)
    }
}

/// Uniform grid `v0_start..=v0_end` with `n` points.
pub fn v0_grid(v0_start: f64, v0_end: f64, n: usize) -> Vec<f64> {
    let span = v0_end - v0_start;
    let last = (n - 1) as f64;
    (0..n)
        .map(|i| {
            if i + 1 == n {
                v0_end
            } else {
                v0_start + span * i as f64 / last
            }
        })
        .collect()
}

/// Point spectrum along a `V0` sweep at fixed `t0`.
pub fn sweep_spectrum(t0: f64, v0_start: f64, v0_end: f64, n: usize) -> Result<Vec<SweepRow>> {
    if n < 2 {
        return Err(Error::Config(format!(
            "sweep needs at least 2 points, got {n}"
        )));
    }
    if !(v0_start.is_finite() && v0_end.is_finite() && t0.is_finite()) {
        return Err(Error::InvalidParams { t0, v0: v0_start });
    }
    let mut rows: Vec<SweepRow> = Vec::with_capacity(n);
    for v0 in v0_grid(v0_start, v0_end, n) {
        let spectrum = solve_point_spectrum(ModelParams { t0, v0 });
        let signature = spectrum.as_ref().ok().map(PointSpectrum::signature);
        let transition = rows
            .last()
            .map(|prev| prev.signature() != signature)
            .unwrap_or(false);
        rows.push(SweepRow {
            v0,
            spectrum,
            transition,
        });
    }
    Ok(rows)
}

fn signature_at(t0: f64, v0: f64) -> Option<Vec<StateClass>> {
    solve_point_spectrum(ModelParams { t0, v0 })
        .ok()
        .map(|s| s.signature())
}

/// Bisects `[lo, hi]` for the point where the class signature stops matching
/// the one at `lo`.
pub fn refine_transition(t0: f64, mut lo: f64, mut hi: f64) -> f64 {
    let left = signature_at(t0, lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            break;
        }
        if signature_at(t0, mid) == left {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Every transition flagged by [`sweep_spectrum`], refined by bisection.
pub fn locate_transitions(rows: &[SweepRow], t0: f64) -> Vec<f64> {
    rows.windows(2)
        .filter(|w| w[1].transition)
        .map(|w| refine_transition(t0, w[0].v0, w[1].v0))
        .collect()
}
