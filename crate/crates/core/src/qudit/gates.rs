//! Dense single-register gates. Matrices act on column vectors of amplitudes.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type Mat = DMatrix<Complex64>;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `exp(2πi k / d)`.
pub fn root_of_unity(k: i64, d: usize) -> Complex64 {
    let k = k.rem_euclid(d as i64) as f64;
    Complex64::from_polar(1.0, 2.0 * PI * k / d as f64)
}

/// Discrete Fourier transform, `F[a][b] = ω^{ab} / √d`.
pub fn dft(d: usize) -> Mat {
    let norm = (d as f64).sqrt().recip();
    Mat::from_fn(d, d, |a, b| root_of_unity((a * b) as i64, d) * norm)
}

pub fn dft_dagger(d: usize) -> Mat {
    dft(d).adjoint()
}

pub fn hadamard() -> Mat {
    Mat::from_row_slice(2, 2, &[c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2), c(-FRAC_1_SQRT_2)])
}

/// Shift `|a⟩ → |a+1 mod d⟩`.
pub fn shift_x(d: usize) -> Mat {
    Mat::from_fn(d, d, |a, b| if a == (b + 1) % d { c(1.0) } else { c(0.0) })
}

/// Clock `|a⟩ → ω^a |a⟩`.
pub fn clock_z(d: usize) -> Mat {
    Mat::from_fn(d, d, |a, b| if a == b { root_of_unity(a as i64, d) } else { c(0.0) })
}

pub fn pauli_x() -> Mat {
    shift_x(2)
}

pub fn pauli_z() -> Mat {
    clock_z(2)
}

pub fn pauli_y() -> Mat {
    Mat::from_row_slice(2, 2, &[c(0.0), -I, I, c(0.0)])
}

pub fn identity(d: usize) -> Mat {
    Mat::identity(d, d)
}

/// `S^k` with `S = diag(1, i)`; negative powers give `S†`.
pub fn phase_s_pow(k: i32) -> Mat {
    let p = I.powi(k.rem_euclid(4));
    Mat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), p])
}

/// `R_z(θ) = diag(1, e^{iθ})`.
pub fn rz(theta: f64) -> Mat {
    Mat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), Complex64::from_polar(1.0, theta)])
}

/// `R_x(θ) = H R_z(θ) H`.
pub fn rx(theta: f64) -> Mat {
    let h = hadamard();
    &h * rz(theta) * &h
}

/// `exp(iθP)` for an involutory `P` (`P² = 1`).
pub fn exp_involution(theta: f64, p: &Mat) -> Mat {
    let n = p.nrows();
    Mat::identity(n, n) * c(theta.cos()) + p * (I * theta.sin())
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kronecker(b)
}

/// Measurement gate for the equatorial basis `(|0⟩ + (-1)^s e^{-iθ}|1⟩)/√2`.
///
/// Row `s` is the bra of outcome `s`, so applying the gate and reading the
/// computational digit realizes the measurement.
pub fn equatorial_basis(theta: f64) -> Mat {
    let e = Complex64::from_polar(FRAC_1_SQRT_2, theta);
    Mat::from_row_slice(2, 2, &[c(FRAC_1_SQRT_2), e, c(FRAC_1_SQRT_2), -e])
}

/// Y basis: outcome 0 is `(|0⟩ + i|1⟩)/√2`, outcome 1 is `(|0⟩ − i|1⟩)/√2`.
pub fn y_basis() -> Mat {
    equatorial_basis(-PI / 2.0)
}

/// Computational (Z) basis.
pub fn z_basis(d: usize) -> Mat {
    identity(d)
}

/// X basis for qubits (`H` maps `|±⟩` to `|0⟩, |1⟩`).
pub fn x_basis() -> Mat {
    hadamard()
}

/// Largest entry of `|U†U − 1|`.
pub fn unitarity_deviation(m: &Mat) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    let prod = m.adjoint() * m;
    let id = Mat::identity(m.nrows(), m.ncols());
    max_abs_diff(&prod, &id)
}

pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Distance between two operators after removing the best global phase.
pub fn max_abs_diff_up_to_phase(a: &Mat, b: &Mat) -> f64 {
    let inner: Complex64 = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
    let phase = if inner.norm() > 0.0 { inner / inner.norm() } else { c(1.0) };
    a.iter().zip(b.iter()).map(|(x, y)| (x - phase * y).norm()).fold(0.0, f64::max)
}
