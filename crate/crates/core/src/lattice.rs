//! Finite-chain reference propagator.
//!
//! The chain is truncated to `[-L, L]` and diagonalized exactly. Until the
//! fastest wave packet (group velocity 2) has had time to reach an end and come
//! back, the truncated chain and the infinite one give the same survival amplitude.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;
use crate::siegert::bond_hopping;
use crate::spectrum::ModelParams;

/// Maximal group velocity `max |dE/dk|` of the band `E = -2 cos k`.
pub const MAX_GROUP_VELOCITY: f64 = 2.0;

const MAX_QL_ITERATIONS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Sites on each side of the impurity.
    pub half_length: usize,
    /// Fraction of the reflection time that may be used, in `(0, 0.95]`.
    pub horizon_safety: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            half_length: 400,
            horizon_safety: 0.95,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.half_length < 50 {
            return Err(Error::Config(format!(
                "oracle half length must be at least 50, got {}",
                self.half_length
            )));
        }
        if !(self.horizon_safety > 0.0 && self.horizon_safety <= 0.95) {
            return Err(Error::Config(format!(
                "horizon safety must lie in (0, 0.95], got {}",
                self.horizon_safety
            )));
        }
        Ok(())
    }

    /// Largest `|t|` accepted: `safety * L / 2`.
    pub fn horizon(&self) -> f64 {
        self.horizon_safety * self.half_length as f64 / MAX_GROUP_VELOCITY
    }
}

/// Real symmetric tridiagonal matrix; `off_diagonal[i]` couples rows `i` and `i+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diagonal: Vec<f64>,
    pub off_diagonal: Vec<f64>,
}

impl SymTridiagonal {
    pub fn len(&self) -> usize {
        self.diagonal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagonal.is_empty()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = self.diagonal[i];
            if i + 1 < n {
                m[i][i + 1] = self.off_diagonal[i];
                m[i + 1][i] = self.off_diagonal[i];
            }
        }
        m
    }

    /// Eigenvalues together with `|<row|v_j>|^2` for one chosen row.
    ///
    /// Implicit QL with Wilkinson shifts; only the requested row of the
    /// eigenvector matrix is carried through the rotations, which is all the
    /// survival amplitude needs.
    pub fn spectral_weights(&self, row: usize) -> Result<SpectralWeights> {
        let n = self.len();
        if row >= n {
            return Err(Error::Config(format!("row {row} outside a {n}x{n} matrix")));
        }
        let mut d = self.diagonal.clone();
        let mut e = self.off_diagonal.clone();
        e.resize(n, 0.0);
        e[n - 1] = 0.0;
        let mut z = vec![0.0; n];
        z[row] = 1.0;
        implicit_ql(&mut d, &mut e, &mut z)?;

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
        Ok(SpectralWeights {
            energies: order.iter().map(|&j| d[j]).collect(),
            weights: order.iter().map(|&j| z[j] * z[j]).collect(),
        })
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.spectral_weights(0)?.energies)
    }
}

fn implicit_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let scale = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_QL_ITERATIONS {
                return Err(Error::EigenSolver { index: l });
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;

                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Eigenvalues `E_j` (ascending) and weights `|<0|v_j>|^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralWeights {
    pub energies: Vec<f64>,
    pub weights: Vec<f64>,
}

impl SpectralWeights {
    /// `sum_j w_j exp(-i E_j t)`.
    pub fn amplitude(&self, t: f64) -> Complex64 {
        let terms: Vec<Complex64> = self
            .energies
            .iter()
            .zip(&self.weights)
            .map(|(&e, &w)| Complex64::from_polar(w, -e * t))
            .collect();
        pairwise_sum(&terms)
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Chain truncated to `[-L, L]`; the impurity sits at row `L`.
pub fn build_hamiltonian(params: &ModelParams, half_length: usize) -> Result<SymTridiagonal> {
    if half_length < 1 {
        return Err(Error::Config("chain half length must be at least 1".into()));
    }
    params.validate()?;
    let l = half_length as i64;
    let diagonal = (-l..=l)
        .map(|x| if x == 0 { params.v0 } else { 0.0 })
        .collect();
    let off_diagonal = (-l..l).map(|x| -bond_hopping(params, x)).collect();
    Ok(SymTridiagonal {
        diagonal,
        off_diagonal,
    })
}

/// Spectral weights of the impurity site on the truncated chain.
pub fn impurity_weights(params: &ModelParams, half_length: usize) -> Result<SpectralWeights> {
    build_hamiltonian(params, half_length)?.spectral_weights(half_length)
}

/// `A(t) = <0|exp(-iHt)|0>` on the truncated chain, for times inside the horizon.
pub fn survival_oracle(
    params: &ModelParams,
    cfg: &OracleConfig,
    times: &[f64],
) -> Result<Vec<Complex64>> {
    cfg.validate()?;
    let horizon = cfg.horizon();
    if let Some(&t) = times.iter().find(|t| t.is_nan() || t.abs() >= horizon) {
        return Err(Error::HorizonExceeded { t, horizon });
    }
    let weights = impurity_weights(params, cfg.half_length)?;
    Ok(times.iter().map(|&t| weights.amplitude(t)).collect())
}
