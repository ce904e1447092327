//! Exhaustive-grid estimate of `P_max` for very small registers.
//!
//! Independent of the coordinate-ascent path: the first `L - 1` qubits are
//! scanned on a `(theta, gamma)` grid and the last qubit is eliminated by
//! Cauchy-Schwarz (the best overlap of a two-component vector with a unit
//! vector is its norm). The best grid cell is then polished by a shrinking
//! compass search.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statevector::StateVector;

pub const ORACLE_MAX_QUBITS: usize = 3;

fn bra(theta: f64, gamma: f64) -> [Complex64; 2] {
    [Complex64::new(theta.cos(), 0.0), Complex64::from_polar(theta.sin(), -gamma)]
}

fn fold(v: &[Complex64], e: &[Complex64; 2]) -> Vec<Complex64> {
    let half = v.len() / 2;
    (0..half).map(|i| e[0] * v[i] + e[1] * v[half + i]).collect()
}

/// Squared norm of the residual after contracting the leading qubits with
/// the product bra given by `params = [theta_1, gamma_1, theta_2, ...]`.
fn residual(amps: &[Complex64], params: &[f64]) -> f64 {
    let mut v = amps.to_vec();
    for p in params.chunks_exact(2) {
        v = fold(&v, &bra(p[0], p[1]));
    }
    v.iter().map(|a| a.norm_sqr()).sum()
}

fn grid_search(
    v: &[Complex64],
    grid: &[(f64, f64, [Complex64; 2])],
    depth: usize,
    path: &mut Vec<f64>,
    best: &mut (f64, Vec<f64>),
) {
    if depth == 0 {
        let p: f64 = v.iter().map(|a| a.norm_sqr()).sum();
        if p > best.0 {
            *best = (p, path.clone());
        }
        return;
    }
    for (theta, gamma, e) in grid {
        let next = fold(v, e);
        path.push(*theta);
        path.push(*gamma);
        grid_search(&next, grid, depth - 1, path, best);
        path.truncate(path.len() - 2);
    }
}

/// Estimate `P_max` by exhaustive search. `resolution` is the number of grid
/// steps per angle; cost is `O(resolution^(2(L-1)))`.
pub fn brute_force_pmax(state: &StateVector, resolution: usize) -> Result<f64> {
    let num_qubits = state.num_qubits();
    if num_qubits > ORACLE_MAX_QUBITS {
        return Err(Error::OracleTooLarge { num_qubits, max: ORACLE_MAX_QUBITS });
    }
    let amps = state.amplitudes();
    let free = num_qubits - 1;
    if free == 0 {
        return Ok(residual(amps, &[]));
    }
    let resolution = resolution.max(2);
    let theta_step = 0.5 * PI / resolution as f64;
    let gamma_step = 2.0 * PI / resolution as f64;

    // theta in [0, pi/2] covers every single-qubit state up to phase.
    let mut grid = Vec::with_capacity((resolution + 1) * resolution);
    for i in 0..=resolution {
        for j in 0..resolution {
            let (t, g) = (i as f64 * theta_step, j as f64 * gamma_step);
            grid.push((t, g, bra(t, g)));
        }
    }
    let mut best = (f64::NEG_INFINITY, Vec::new());
    grid_search(amps, &grid, free, &mut Vec::with_capacity(2 * free), &mut best);

    let (mut value, mut x) = best;
    let mut steps: Vec<f64> = (0..2 * free)
        .map(|i| if i % 2 == 0 { theta_step } else { gamma_step })
        .collect();
    let dims = x.len();
    let neighbours = 3usize.pow(dims as u32);
    let mut iterations = 0;
    while steps[0] > 1e-12 && iterations < 100_000 {
        iterations += 1;
        let mut improved = false;
        for code in 0..neighbours {
            let mut c = code;
            let mut trial = x.clone();
            for (i, t) in trial.iter_mut().enumerate() {
                *t += (c % 3) as f64 * steps[i] - steps[i];
                c /= 3;
            }
            let p = residual(amps, &trial);
            if p > value {
                value = p;
                x = trial;
                improved = true;
            }
        }
        if !improved {
            for s in &mut steps {
                *s *= 0.5;
            }
        }
    }
    Ok(value.min(1.0))
}
