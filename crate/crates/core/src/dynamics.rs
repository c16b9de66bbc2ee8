//! Survival amplitude and its split into point-state components.
//!
//! On the physical sheet `E = -(lambda + 1/lambda)` with `|lambda| < 1`, the
//! impurity element of the resolvent is the rational function
//!
//! ```text
//! G00(lambda) = -lambda / ((1 - 2 t0^2) lambda^2 + V0 lambda + 1)
//! ```
//!
//! whose poles are exactly the point states. Mapping `A(t) = <0|exp(-iHt)|0>`
//! to the `lambda` plane and expanding `G00` in partial fractions gives one
//! contour integral per pole over the clockwise unit circle,
//!
//! ```text
//! chi_n(t) = (1/2 pi i) ∮ dlambda (-lambda + 1/lambda) exp[i (lambda + 1/lambda) t]
//!            * w_n * lambda_n / (lambda - lambda_n),
//! ```
//!
//! with `w_n = rho_n / lambda_n^2` and `rho_n` the `lambda`-plane residue of `G00`.
//! In terms of the bi-orthogonal amplitude, `w_n = psi0_n^2 / (1 - lambda_n^2)`.
//! Poles inside the unit circle (bound states) contribute an extra discrete
//! term `psi0_n^2 exp(-i E_n t)`. The components then add up to `A(t)` exactly.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{survival_oracle, OracleConfig};
use crate::numeric::{max_abs_diff, pairwise_sum};
use crate::spectrum::{solve_point_spectrum, ModelParams, PointState, StateClass};

/// Distance from a secular root inside which the resolvent is not evaluated.
pub const POLE_TOL: f64 = 1e-13;
/// A pole closer than this to the unit circle (and away from `+-1`) is on the contour.
pub const CONTOUR_POLE_TOL: f64 = 1e-8;
/// Smallest anti-resonant weight accepted as a ratio denominator.
pub const UNDERFLOW_THRESHOLD: f64 = 1e-280;

/// Trapezoidal quadrature on the unit circle, refined by doubling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourConfig {
    /// Initial node count, a power of two no smaller than 64.
    pub n_points: usize,
    pub rel_tol: f64,
    pub max_doublings: u32,
}

impl Default for ContourConfig {
    fn default() -> Self {
        Self {
            n_points: 4096,
            rel_tol: 1e-10,
            max_doublings: 6,
        }
    }
}

impl ContourConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_points < 64 || !self.n_points.is_power_of_two() {
            return Err(Error::Config(format!(
                "contour node count must be a power of two >= 64, got {}",
                self.n_points
            )));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::Config(format!(
                "contour tolerance must be positive, got {}",
                self.rel_tol
            )));
        }
        if self.max_doublings < 1 || self.max_doublings > 24 {
            return Err(Error::Config(format!(
                "contour doublings must lie in 1..=24, got {}",
                self.max_doublings
            )));
        }
        Ok(())
    }
}

/// Which prefactor multiplies `exp[i (lambda + 1/lambda) t]` in the integrand.
///
/// Both give identical components: they differ by an exact derivative, which
/// integrates to zero around the closed contour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum IntegrandForm {
    /// `(-lambda + 1/lambda) * w_n * lambda_n / (lambda - lambda_n)`, `w_n = rho_n / lambda_n^2`.
    #[default]
    Printed,
    /// `dE/dlambda * rho_n / (lambda - lambda_n)`, with `dE/dlambda = -1 + 1/lambda^2`.
    Jacobian,
}

/// `dE/dlambda` for `E = -(lambda + 1/lambda)`.
pub fn d_energy_d_lambda(lambda: Complex64) -> Complex64 {
    (lambda * lambda).inv() - 1.0
}

/// `G00(lambda) = -lambda / P(lambda)`, the impurity element of `(E - H)^-1`
/// at `E = -(lambda + 1/lambda)`.
pub fn resolvent_diagonal(params: &ModelParams, lambda: Complex64) -> Result<Complex64> {
    params.validate()?;
    match solve_point_spectrum(*params) {
        Ok(spec) => {
            if spec
                .states
                .iter()
                .any(|s| (s.lambda - lambda).norm() < POLE_TOL)
            {
                return Err(Error::Pole {
                    lambda,
                    tolerance: POLE_TOL,
                });
            }
        }
        Err(Error::DegenerateModel { .. }) => {}
        Err(e) => return Err(e),
    }
    Ok(-lambda / params.secular(lambda))
}

/// Residue of `G00` at a simple pole in the `lambda` plane, `-lambda_n / P'(lambda_n)`.
pub fn resolvent_residue(params: &ModelParams, state: &PointState) -> Result<Complex64> {
    if state.class == StateClass::Degenerate {
        return Err(Error::ExceptionalPoint);
    }
    let slope = params.secular_derivative(state.lambda);
    if slope.norm() < POLE_TOL {
        return Err(Error::ExceptionalPoint);
    }
    Ok(-state.lambda / slope)
}

/// Residue of `G00` as a function of `E`; equals the bi-orthogonal `psi0^2`.
pub fn energy_residue(params: &ModelParams, state: &PointState) -> Result<Complex64> {
    Ok(resolvent_residue(params, state)? * d_energy_d_lambda(state.lambda))
}

#[derive(Debug, Clone, Copy)]
struct PoleTerm {
    lambda: Complex64,
    /// Constant multiplying `R(lambda) * phase` (and `1/lambda` for the Jacobian form).
    coefficient: Complex64,
    /// `1 - lambda_n^2`.
    edge_gap: Complex64,
    /// `(psi0^2, E_n)` for poles inside the unit circle.
    discrete: Option<(Complex64, Complex64)>,
}

impl PoleTerm {
    fn new(params: &ModelParams, state: &PointState, form: IntegrandForm) -> Result<Self> {
        let rho = resolvent_residue(params, state)?;
        let lambda = state.lambda;
        let edge_gap = Complex64::new(1.0, 0.0) - lambda * lambda;
        if (lambda.norm() - 1.0).abs() < CONTOUR_POLE_TOL && edge_gap.norm() > CONTOUR_POLE_TOL {
            return Err(Error::PoleOnContour { lambda });
        }
        let coefficient = match form {
            IntegrandForm::Printed => rho / lambda,
            IntegrandForm::Jacobian => rho,
        };
        let discrete = (lambda.norm() < 1.0 - CONTOUR_POLE_TOL)
            .then(|| (rho * d_energy_d_lambda(lambda), state.energy));
        Ok(Self {
            lambda,
            coefficient,
            edge_gap,
            discrete,
        })
    }

    /// `(1 - lambda^2) / (lambda - lambda_n)`, split as
    /// `-(lambda + lambda_n) + (1 - lambda_n^2) / (lambda - lambda_n)` so that a
    /// pole at a band edge cancels exactly.
    fn rational(&self, lambda: Complex64) -> Complex64 {
        let smooth = -(lambda + self.lambda);
        let gap = lambda - self.lambda;
        if gap == Complex64::new(0.0, 0.0) {
            smooth
        } else {
            smooth + self.edge_gap / gap
        }
    }
}

/// Nodes added at one refinement level, with the per-pole integrand factors.
struct Level {
    /// `2 cos(theta_j)`, i.e. `lambda + 1/lambda` on the unit circle.
    energy_arg: Vec<f64>,
    /// `factors[n][j]`: everything in `lambda_j * integrand_n` except the phase.
    factors: Vec<Vec<Complex64>>,
    /// Per pole, the sum of `|factors[n][j]|`.
    magnitude: Vec<f64>,
}

/// Evaluates all components for one parameter set at any number of times,
/// sharing nodes and rational factors between calls.
pub struct ContourIntegrator {
    poles: Vec<PoleTerm>,
    form: IntegrandForm,
    cfg: ContourConfig,
    levels: Vec<OnceLock<Level>>,
}

impl ContourIntegrator {
    pub fn new(
        params: &ModelParams,
        states: &[PointState],
        cfg: ContourConfig,
        form: IntegrandForm,
    ) -> Result<Self> {
        cfg.validate()?;
        let poles = states
            .iter()
            .map(|s| PoleTerm::new(params, s, form))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            poles,
            form,
            cfg,
            levels: (0..=cfg.max_doublings).map(|_| OnceLock::new()).collect(),
        })
    }

    /// Level 0 holds `theta_j = 2 pi j / N`; level `d` holds the odd nodes of
    /// the grid with `N 2^d` points.
    fn level(&self, d: usize) -> &Level {
        self.levels[d].get_or_init(|| {
            let (count, total, offset, stride) = if d == 0 {
                (self.cfg.n_points, self.cfg.n_points, 0, 1)
            } else {
                let total = self.cfg.n_points << d;
                (total / 2, total, 1, 2)
            };
            let thetas: Vec<f64> = (0..count)
                .map(|j| 2.0 * PI * (offset + stride * j) as f64 / total as f64)
                .collect();
            // Clockwise: lambda = exp(-i theta).
            let lambdas: Vec<Complex64> = thetas
                .iter()
                .map(|&th| Complex64::new(th.cos(), -th.sin()))
                .collect();
            let factors: Vec<Vec<Complex64>> = self
                .poles
                .iter()
                .map(|pole| {
                    lambdas
                        .iter()
                        .map(|&l| {
                            let base = pole.rational(l) * pole.coefficient;
                            match self.form {
                                IntegrandForm::Printed => base,
                                IntegrandForm::Jacobian => base * l.conj(),
                            }
                        })
                        .collect()
                })
                .collect();
            let magnitude = factors
                .iter()
                .map(|f| f.iter().map(|z| z.norm()).sum())
                .collect();
            Level {
                energy_arg: thetas.iter().map(|th| 2.0 * th.cos()).collect(),
                factors,
                magnitude,
            }
        })
    }

    fn level_sums(&self, d: usize, t: f64) -> Vec<Complex64> {
        let level = self.level(d);
        let phases: Vec<Complex64> = level
            .energy_arg
            .iter()
            .map(|&e| Complex64::cis(e * t))
            .collect();
        level
            .factors
            .iter()
            .map(|f| {
                let terms: Vec<Complex64> = f.iter().zip(&phases).map(|(a, p)| a * p).collect();
                pairwise_sum(&terms)
            })
            .collect()
    }

    /// Every component `<0|chi_n(t)>`, in the order the states were given.
    pub fn components_at(&self, t: f64) -> Result<Vec<Complex64>> {
        let n0 = self.cfg.n_points as f64;
        let mut sums = self.level_sums(0, t);
        let mut magnitude = self.level(0).magnitude.clone();
        let mut current: Vec<Complex64> = sums.iter().map(|s| -s / n0).collect();
        let mut last_change = f64::INFINITY;

        for d in 1..=self.cfg.max_doublings as usize {
            let extra = self.level_sums(d, t);
            let level = self.level(d);
            let count = n0 * (1u64 << d) as f64;
            let mut converged = true;
            last_change = 0.0;
            for (n, add) in extra.iter().enumerate() {
                sums[n] += add;
                magnitude[n] += level.magnitude[n];
                let refined = -sums[n] / count;
                let change = (refined - current[n]).norm();
                // Below the rounding floor of the sum nothing more can be resolved.
                let floor = 64.0 * f64::EPSILON * magnitude[n] / count;
                if change > self.cfg.rel_tol * refined.norm() && change > floor {
                    converged = false;
                }
                last_change = last_change.max(change);
                current[n] = refined;
            }
            if converged {
                for (value, pole) in current.iter_mut().zip(&self.poles) {
                    if let Some((weight, energy)) = pole.discrete {
                        *value += weight * (-Complex64::i() * energy * t).exp();
                    }
                }
                return Ok(current);
            }
        }
        Err(Error::NonConvergence {
            t,
            doublings: self.cfg.max_doublings,
            change: last_change,
        })
    }
}

/// `<0|chi_n(t)>` for one point state, using the printed integrand.
pub fn component_chi(
    params: &ModelParams,
    state: &PointState,
    t: f64,
    cfg: &ContourConfig,
) -> Result<Complex64> {
    component_chi_with(params, state, t, cfg, IntegrandForm::Printed)
}

pub fn component_chi_with(
    params: &ModelParams,
    state: &PointState,
    t: f64,
    cfg: &ContourConfig,
    form: IntegrandForm,
) -> Result<Complex64> {
    let integrator = ContourIntegrator::new(params, std::slice::from_ref(state), *cfg, form)?;
    Ok(integrator.components_at(t)?[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    Decomposition,
    LatticeOracle,
    Both,
}

/// One point state and its component on the time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub state: PointState,
    pub values: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeSeries {
    pub times: Vec<f64>,
    /// Sum of components, or the oracle amplitude for [`Method::LatticeOracle`].
    pub total: Vec<Complex64>,
    pub components: Vec<Component>,
    pub oracle: Option<Vec<Complex64>>,
    pub max_discrepancy: Option<f64>,
    pub ratio: Option<Vec<f64>>,
}

impl AmplitudeSeries {
    pub fn component(&self, class: StateClass) -> Option<&Component> {
        self.components.iter().find(|c| c.state.class == class)
    }

    /// `|<0|chi_n(t)>|^2` for the first component of a class.
    pub fn weights(&self, class: StateClass) -> Option<Vec<f64>> {
        self.component(class)
            .map(|c| c.values.iter().map(|v| v.norm_sqr()).collect())
    }

    /// Pointwise `|sum of components - oracle|`.
    pub fn discrepancy(&self) -> Option<Vec<f64>> {
        self.oracle.as_ref().map(|o| {
            self.total
                .iter()
                .zip(o)
                .map(|(a, b)| (a - b).norm())
                .collect()
        })
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.iter().all(|t| t.is_finite()) {
        Ok(())
    } else {
        Err(Error::Config("time grid has non-finite entries".into()))
    }
}

/// Components of every non-degenerate point state and their sum.
pub fn decomposition_series(
    params: &ModelParams,
    times: &[f64],
    cfg: &ContourConfig,
) -> Result<AmplitudeSeries> {
    check_times(times)?;
    let spectrum = solve_point_spectrum(*params)?;
    if spectrum.exceptional_point {
        return Err(Error::ExceptionalPoint);
    }
    let integrator =
        ContourIntegrator::new(params, &spectrum.states, *cfg, IntegrandForm::Printed)?;
    let rows = times
        .par_iter()
        .map(|&t| integrator.components_at(t))
        .collect::<Result<Vec<_>>>()?;

    let components = spectrum
        .states
        .iter()
        .enumerate()
        .map(|(n, state)| Component {
            state: *state,
            values: rows.iter().map(|r| r[n]).collect(),
        })
        .collect();
    let total = rows.iter().map(|r| pairwise_sum(r)).collect();
    Ok(AmplitudeSeries {
        times: times.to_vec(),
        total,
        components,
        oracle: None,
        max_discrepancy: None,
        ratio: None,
    })
}

pub fn survival_series(
    params: &ModelParams,
    times: &[f64],
    method: Method,
    cfg: &ContourConfig,
    oracle_cfg: &OracleConfig,
) -> Result<AmplitudeSeries> {
    check_times(times)?;
    match method {
        Method::Decomposition => decomposition_series(params, times, cfg),
        Method::LatticeOracle => {
            let oracle = survival_oracle(params, oracle_cfg, times)?;
            Ok(AmplitudeSeries {
                times: times.to_vec(),
                total: oracle.clone(),
                components: Vec::new(),
                oracle: Some(oracle),
                max_discrepancy: None,
                ratio: None,
            })
        }
        Method::Both => {
            // Cheap horizon check before the quadrature.
            oracle_cfg.validate()?;
            let oracle = survival_oracle(params, oracle_cfg, times)?;
            let mut series = decomposition_series(params, times, cfg)?;
            series.max_discrepancy = Some(max_abs_diff(&series.total, &oracle));
            series.oracle = Some(oracle);
            Ok(series)
        }
    }
}

/// `|chi_res|^2 / |chi_ar|^2` at one time.
pub fn resonance_ratio(res: Complex64, ar: Complex64, t: f64) -> Result<f64> {
    let denom = ar.norm_sqr();
    if denom.is_nan() || denom <= UNDERFLOW_THRESHOLD {
        return Err(Error::Underflow { t });
    }
    Ok(res.norm_sqr() / denom)
}

/// Decomposition series with the ratio column filled in.
pub fn ratio_series(
    params: &ModelParams,
    times: &[f64],
    cfg: &ContourConfig,
) -> Result<AmplitudeSeries> {
    let spectrum = solve_point_spectrum(*params)?;
    if spectrum.resonance_pair().is_none() {
        let found = spectrum
            .states
            .first()
            .map_or(StateClass::Degenerate, |s| s.class);
        return Err(Error::Class {
            expected: StateClass::Resonant,
            found,
        });
    }
    let mut series = decomposition_series(params, times, cfg)?;
    let res = series
        .component(StateClass::Resonant)
        .expect("resonant component");
    let ar = series
        .component(StateClass::AntiResonant)
        .expect("anti-resonant component");
    let ratio = times
        .iter()
        .enumerate()
        .map(|(i, &t)| resonance_ratio(res.values[i], ar.values[i], t))
        .collect::<Result<Vec<_>>>()?;
    series.ratio = Some(ratio);
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::siegert::{build_siegert_state, NormConvention};

    fn decay_params() -> ModelParams {
        ModelParams::new(0.5, -0.8).unwrap()
    }

    fn pair(p: &ModelParams) -> (PointState, PointState) {
        let spec = solve_point_spectrum(*p).unwrap();
        let (r, a) = spec.resonance_pair().unwrap();
        (*r, *a)
    }

    /// Counter-clockwise circle of `radius` around `center`, trapezoid rule.
    fn circle_integral(
        f: impl Fn(Complex64) -> Complex64,
        center: Complex64,
        radius: f64,
    ) -> Complex64 {
        let n = 256;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let th = 2.0 * PI * j as f64 / n as f64;
            let dz = Complex64::new(0.0, 1.0) * Complex64::from_polar(radius, th);
            acc += f(center + Complex64::from_polar(radius, th)) * dz;
        }
        acc * (2.0 * PI / n as f64) / Complex64::new(0.0, 2.0 * PI)
    }

    #[test]
    fn poles_of_resolvent_match_roots() {
        for (t0, v0) in [(0.5, -0.8), (0.5, -2.0), (1.1, 0.7)] {
            let p = ModelParams::new(t0, v0).unwrap();
            for s in solve_point_spectrum(p).unwrap().states {
                assert!(matches!(
                    resolvent_diagonal(&p, s.lambda),
                    Err(Error::Pole { .. })
                ));
                let near = s.lambda * (1.0 + 1e-7);
                assert!(resolvent_diagonal(&p, near).unwrap().norm() > 1e5);
            }
        }
    }

    #[test]
    fn resolvent_vanishes_linearly_at_origin() {
        let p = ModelParams::new(1.0, 0.0).unwrap();
        for eps in [1e-3, 1e-6] {
            let g = resolvent_diagonal(&p, Complex64::new(eps, 0.0)).unwrap();
            assert!((g / eps + 1.0).norm() < 1e-2 * eps.sqrt().max(1e-6) + 3.0 * eps);
        }
    }

    #[test]
    fn residue_equals_biorthogonal_amplitude() {
        for (t0, v0, class) in [
            (0.5, -0.8, StateClass::Resonant),
            (0.5, -0.8, StateClass::AntiResonant),
            (0.5, -2.0, StateClass::Bound),
            (0.5, -2.0, StateClass::AntiBound),
        ] {
            let p = ModelParams::new(t0, v0).unwrap();
            let spec = solve_point_spectrum(p).unwrap();
            let s = spec.first_of_class(class).unwrap();
            let g = |l: Complex64| -l / p.secular(l);
            let rho = circle_integral(g, s.lambda, 1e-3);
            let psi = build_siegert_state(&p, s, NormConvention::Biorthogonal).unwrap();
            assert!((rho * d_energy_d_lambda(s.lambda) - psi.psi0_sq).norm() < 1e-10);
            assert!((energy_residue(&p, s).unwrap() - psi.psi0_sq).norm() < 1e-12);
        }
    }

    #[test]
    fn components_at_zero_sum_to_one() {
        let p = decay_params();
        let (res, ar) = pair(&p);
        let cfg = ContourConfig::default();
        let cr = component_chi(&p, &res, 0.0, &cfg).unwrap();
        let ca = component_chi(&p, &ar, 0.0, &cfg).unwrap();
        assert!((cr + ca - 1.0).norm() < 1e-12);
        // Equal weights, complex-conjugate values.
        assert!((cr.norm_sqr() - ca.norm_sqr()).abs() < 1e-12);
        assert!((cr - ca.conj()).norm() < 1e-12);
        // chi_n(0) = w_n = 1 / (2 + V0 lambda_n).
        assert!((cr - (res.lambda * p.v0 + 2.0).inv()).norm() < 1e-12);
    }

    #[test]
    fn both_integrand_forms_agree() {
        let p = decay_params();
        let (res, _) = pair(&p);
        let cfg = ContourConfig::default();
        for t in [-3.0, 0.0, 1.0, 7.5] {
            let a = component_chi_with(&p, &res, t, &cfg, IntegrandForm::Printed).unwrap();
            let b = component_chi_with(&p, &res, t, &cfg, IntegrandForm::Jacobian).unwrap();
            assert!((a - b).norm() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn printed_integrand_with_energy_residue_is_incomplete() {
        // Weighting the printed integrand by psi0^2 instead of w_n misses A(0) = 1.
        let p = decay_params();
        let (res, ar) = pair(&p);
        let cfg = ContourConfig::default();
        let mut total = Complex64::new(0.0, 0.0);
        for s in [res, ar] {
            let psi0_sq = energy_residue(&p, &s).unwrap();
            let w = resolvent_residue(&p, &s).unwrap() / (s.lambda * s.lambda);
            total += component_chi(&p, &s, 0.0, &cfg).unwrap() * psi0_sq / w;
        }
        assert!((total - 1.0).norm() > 0.5);
    }

    #[test]
    fn time_reversal_of_components() {
        let p = decay_params();
        let (res, ar) = pair(&p);
        let cfg = ContourConfig::default();
        for t in [1.0, 5.0, 10.0] {
            let a = component_chi(&p, &ar, t, &cfg).unwrap();
            let r = component_chi(&p, &res, -t, &cfg).unwrap();
            assert!((a - r.conj()).norm() < 1e-10 * a.norm().max(1e-3));
        }
    }

    #[test]
    fn quadrature_converges_under_refinement() {
        let p = decay_params();
        let (res, _) = pair(&p);
        let coarse = ContourConfig {
            n_points: 1024,
            ..Default::default()
        };
        let fine = ContourConfig {
            n_points: 8192,
            ..Default::default()
        };
        for t in [0.5, 12.0, 40.0] {
            let a = component_chi(&p, &res, t, &coarse).unwrap();
            let b = component_chi(&p, &res, t, &fine).unwrap();
            assert!((a - b).norm() <= 1e-10 * b.norm().max(1e-6), "t={t}");
        }
    }

    #[test]
    fn non_convergence_is_reported() {
        // 64 nodes cannot resolve exp(2 i t cos theta) at t = 200.
        let p = decay_params();
        let (res, _) = pair(&p);
        let cfg = ContourConfig {
            n_points: 64,
            rel_tol: 1e-12,
            max_doublings: 1,
        };
        let err = component_chi(&p, &res, 200.0, &cfg).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }));
    }

    #[test]
    fn degenerate_and_on_contour_poles_rejected() {
        let p = ModelParams::new(0.5, -2f64.sqrt()).unwrap();
        let spec = solve_point_spectrum(p).unwrap();
        let cfg = ContourConfig::default();
        assert_eq!(
            component_chi(&p, &spec.states[0], 1.0, &cfg).unwrap_err(),
            Error::ExceptionalPoint
        );
        // t0 = 0 decouples the impurity; with |V0| < 2 both roots sit on the circle.
        let p = ModelParams::new(0.0, 0.5).unwrap();
        let spec = solve_point_spectrum(p).unwrap();
        let err = component_chi(&p, &spec.states[0], 1.0, &cfg).unwrap_err();
        assert!(matches!(err, Error::PoleOnContour { .. }));
        assert!(ContourConfig {
            n_points: 100,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(ContourConfig {
            n_points: 32,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(ContourConfig {
            rel_tol: 0.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(ContourConfig {
            max_doublings: 0,
            ..Default::default()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn band_edge_pole_is_removable() {
        // V0 = -3/2 puts a root exactly at lambda = 1.
        let p = ModelParams::new(0.5, -1.5).unwrap();
        let times = [0.0, 2.0, -6.0];
        let series = decomposition_series(&p, &times, &ContourConfig::default()).unwrap();
        let oracle = survival_oracle(&p, &OracleConfig::default(), &times).unwrap();
        assert!(max_abs_diff(&series.total, &oracle) < 1e-9);
    }

    #[test]
    fn resonant_weight_dominates_in_decay_window() {
        let p = decay_params();
        let times: Vec<f64> = (1..=12).map(|i| 0.5 * i as f64).collect();
        let series = decomposition_series(&p, &times, &ContourConfig::default()).unwrap();
        let res = series.weights(StateClass::Resonant).unwrap();
        let ar = series.weights(StateClass::AntiResonant).unwrap();
        for i in 0..times.len() {
            assert!(ar[i] < 0.35 * res[i], "t={}", times[i]);
        }
    }

    #[test]
    fn ratio_requires_resonance_pair() {
        let p = ModelParams::new(0.5, -2.0).unwrap();
        let err = ratio_series(&p, &[0.0], &ContourConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Class { .. }));
        assert!(matches!(
            resonance_ratio(Complex64::new(1.0, 0.0), Complex64::new(1e-141, 0.0), 3.0),
            Err(Error::Underflow { t }) if t == 3.0
        ));
    }

    #[test]
    fn ratio_symmetry() {
        let p = decay_params();
        let times = crate::numeric::symmetric_grid(10.0, 41);
        let s = ratio_series(&p, &times, &ContourConfig::default()).unwrap();
        let r = s.ratio.unwrap();
        assert!((r[20] - 1.0).abs() < 1e-10);
        for i in 0..41 {
            assert!((r[i] * r[40 - i] - 1.0).abs() < 1e-8);
        }
    }
}
