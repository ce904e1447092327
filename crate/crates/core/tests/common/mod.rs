//! Test-only oracles, independent of the library's gate and optimizer code.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use shor_entanglement::StateVector;

/// Direct O(q^2) transform: out_c = q^{-1/2} sum_a exp(2 pi i a c / q) in_a.
pub fn direct_dft(amps: &[Complex64]) -> Vec<Complex64> {
    let q = amps.len();
    let scale = (q as f64).sqrt().recip();
    (0..q)
        .map(|c| {
            let mut acc = Complex64::default();
            for (a, &v) in amps.iter().enumerate() {
                let phase = 2.0 * PI * ((a * c) % q) as f64 / q as f64;
                acc += Complex64::from_polar(1.0, phase) * v;
            }
            acc * scale
        })
        .collect()
}

pub fn max_deviation(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Haar-ish random 2x2 unitary from a random unit quaternion.
pub fn random_unitary<R: Rng>(rng: &mut R) -> [[Complex64; 2]; 2] {
    let (alpha, beta, delta): (f64, f64, f64) = (
        rng.random_range(0.0..2.0 * PI),
        rng.random_range(0.0..2.0 * PI),
        rng.random_range(0.0..2.0 * PI),
    );
    let theta = rng.random::<f64>().sqrt().asin();
    let (c, s) = (theta.cos(), theta.sin());
    let g = Complex64::from_polar(1.0, delta);
    [
        [g * Complex64::from_polar(c, alpha), g * Complex64::from_polar(s, beta)],
        [-g * Complex64::from_polar(s, -beta), g * Complex64::from_polar(c, -alpha)],
    ]
}

/// Apply `u` to qubit `k` (1-based, most significant first).
pub fn apply_local(state: &StateVector, k: usize, u: &[[Complex64; 2]; 2]) -> StateVector {
    let n = state.num_qubits();
    let mask = 1usize << (n - k);
    let mut amps = state.amplitudes().to_vec();
    for j in 0..amps.len() {
        if j & mask == 0 {
            let (a0, a1) = (amps[j], amps[j | mask]);
            amps[j] = u[0][0] * a0 + u[0][1] * a1;
            amps[j | mask] = u[1][0] * a0 + u[1][1] * a1;
        }
    }
    StateVector::from_amplitudes(amps).unwrap()
}

/// New state whose qubit `perm[i]` carries what qubit `i + 1` carried.
pub fn permute_qubits(state: &StateVector, perm: &[usize]) -> StateVector {
    let n = state.num_qubits();
    let mut amps = vec![Complex64::default(); state.dim()];
    for (j, &a) in state.amplitudes().iter().enumerate() {
        let mut target = 0usize;
        for (i, &p) in perm.iter().enumerate() {
            if j & (1 << (n - 1 - i)) != 0 {
                target |= 1 << (n - p);
            }
        }
        amps[target] = a;
    }
    StateVector::from_amplitudes(amps).unwrap()
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn bell() -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::from_amplitudes(vec![c(h, 0.), c(0., 0.), c(0., 0.), c(h, 0.)]).unwrap()
}

pub fn ghz() -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = vec![c(0., 0.); 8];
    v[0] = c(h, 0.);
    v[7] = c(h, 0.);
    StateVector::from_amplitudes(v).unwrap()
}

pub fn w_state() -> StateVector {
    let a = 3f64.sqrt().recip();
    let mut v = vec![c(0., 0.); 8];
    v[1] = c(a, 0.);
    v[2] = c(a, 0.);
    v[4] = c(a, 0.);
    StateVector::from_amplitudes(v).unwrap()
}
