//! The master equation written out element by element.
//!
//! Each line below is one ρ′_jk (1-based, basis order of [`crate::hilbert`]).
//! Dissipative terms follow the reference listing of the element equations;
//! hopping terms are the commutator `−i[H_hop, ρ]` expanded by hand. This is a
//! second, independent route to the same derivative as
//! [`super::rhs_superoperator`] and exists to cross-check it.

use num_complex::Complex64;

use crate::hilbert::{DensityMatrix, Operator};

/// ρ′ from the 64 element equations.
#[rustfmt::skip]
pub fn rhs_elementwise(rho: &DensityMatrix, alpha: Complex64, beta: Complex64, xi12: f64, xi23: f64) -> Operator {
    let m = &rho.0 .0;
    let r = |j: usize, k: usize| m[j - 1][k - 1];
    let (a, b) = (alpha, beta);
    let (ac, bc) = (a.conj(), b.conj());
    let re_a = Complex64::new(a.re, 0.0);
    let re_b = Complex64::new(b.re, 0.0);
    let x12 = Complex64::new(xi12, 0.0);
    let x23 = Complex64::new(xi23, 0.0);
    let i = Complex64::i();
    let mut out = Operator::zero();
    let mut d = |j: usize, k: usize, v: Complex64| out.0[j - 1][k - 1] = v;
    d(1, 1, -6.0 * re_a * r(1, 1) + 2.0 * re_b * r(2, 2) + 2.0 * re_b * r(3, 3) + 2.0 * re_b * r(4, 4));
    d(1, 2, (a - bc - 6.0 * re_a) * r(1, 2) + i * x12 * r(1, 3) + 2.0 * re_b * r(3, 5) + 2.0 * re_b * r(4, 6));
    d(1, 3, i * x12 * r(1, 2) + (a - bc - 6.0 * re_a) * r(1, 3) + i * x23 * r(1, 4) + 2.0 * re_b * r(2, 5) + 2.0 * re_b * r(4, 7));
    d(1, 4, i * x23 * r(1, 3) + (a - bc - 6.0 * re_a) * r(1, 4) + 2.0 * re_b * r(2, 6) + 2.0 * re_b * r(3, 7));
    d(1, 5, (-6.0 * re_a - 2.0 * bc + 2.0 * a) * r(1, 5) + i * x23 * r(1, 6) + 2.0 * re_b * r(4, 8));
    d(1, 6, i * x23 * r(1, 5) + (-6.0 * re_a - 2.0 * bc + 2.0 * a) * r(1, 6) + i * x12 * r(1, 7) + 2.0 * re_b * r(3, 8));
    d(1, 7, i * x12 * r(1, 6) + (-6.0 * re_a - 2.0 * bc + 2.0 * a) * r(1, 7) + 2.0 * re_b * r(2, 8));
    d(1, 8, (-3.0 * ac - 3.0 * bc) * r(1, 8));
    d(2, 1, (-a - b - 4.0 * re_a) * r(2, 1) - i * x12 * r(3, 1) + 2.0 * re_b * r(5, 3) + 2.0 * re_b * r(6, 4));
    d(2, 2, 2.0 * re_a * r(1, 1) + (-4.0 * re_a - 2.0 * re_b) * r(2, 2) + i * x12 * r(2, 3) - i * x12 * r(3, 2) + 2.0 * re_b * r(5, 5) + 2.0 * re_b * r(6, 6));
    d(2, 3, i * x12 * r(2, 2) + (-4.0 * re_a - 2.0 * re_b) * r(2, 3) + i * x23 * r(2, 4) - i * x12 * r(3, 3) + 2.0 * re_b * r(6, 7));
    d(2, 4, i * x23 * r(2, 3) + (-4.0 * re_a - 2.0 * re_b) * r(2, 4) - i * x12 * r(3, 4) + 2.0 * re_b * r(5, 7));
    d(2, 5, 2.0 * re_a * r(1, 3) + (a + b - 4.0 * re_a - 4.0 * re_b) * r(2, 5) + i * x23 * r(2, 6) - i * x12 * r(3, 5) + 2.0 * re_b * r(6, 8));
    d(2, 6, 2.0 * re_a * r(1, 4) + i * x23 * r(2, 5) + (a + b - 4.0 * re_a - 4.0 * re_b) * r(2, 6) + i * x12 * r(2, 7) - i * x12 * r(3, 6) + 2.0 * re_b * r(5, 8));
    d(2, 7, i * x12 * r(2, 6) + (a + b - 4.0 * re_a - 4.0 * re_b) * r(2, 7) - i * x12 * r(3, 7));
    d(2, 8, 2.0 * re_a * r(1, 7) + (-6.0 * re_b - 2.0 * ac + 2.0 * b) * r(2, 8) - i * x12 * r(3, 8));
    d(3, 1, -i * x12 * r(2, 1) + (-a - b - 4.0 * re_a) * r(3, 1) - i * x23 * r(4, 1) + 2.0 * re_b * r(5, 2) + 2.0 * re_b * r(7, 4));
    d(3, 2, -i * x12 * r(2, 2) + (-4.0 * re_a - 2.0 * re_b) * r(3, 2) + i * x12 * r(3, 3) - i * x23 * r(4, 2) + 2.0 * re_b * r(7, 6));
    d(3, 3, 2.0 * re_a * r(1, 1) - i * x12 * r(2, 3) + i * x12 * r(3, 2) + (-4.0 * re_a - 2.0 * re_b) * r(3, 3) + i * x23 * r(3, 4) - i * x23 * r(4, 3) + 2.0 * re_b * r(5, 5) + 2.0 * re_b * r(7, 7));
    d(3, 4, -i * x12 * r(2, 4) + i * x23 * r(3, 3) + (-4.0 * re_a - 2.0 * re_b) * r(3, 4) - i * x23 * r(4, 4) + 2.0 * re_b * r(5, 6));
    d(3, 5, 2.0 * re_a * r(1, 2) - i * x12 * r(2, 5) + (a + b - 4.0 * re_a - 4.0 * re_b) * r(3, 5) + i * x23 * r(3, 6) - i * x23 * r(4, 5) + 2.0 * re_b * r(7, 8));
    d(3, 6, -i * x12 * r(2, 6) + i * x23 * r(3, 5) + (a + b - 4.0 * re_a - 4.0 * re_b) * r(3, 6) + i * x12 * r(3, 7) - i * x23 * r(4, 6));
    d(3, 7, 2.0 * re_a * r(1, 4) - i * x12 * r(2, 7) + i * x12 * r(3, 6) + (a + b - 4.0 * re_a - 4.0 * re_b) * r(3, 7) - i * x23 * r(4, 7) + 2.0 * re_b * r(5, 8));
    d(3, 8, 2.0 * re_a * r(1, 6) - i * x12 * r(2, 8) + (-6.0 * re_b - 2.0 * ac + 2.0 * b) * r(3, 8) - i * x23 * r(4, 8));
    d(4, 1, -i * x23 * r(3, 1) + (-a - b - 4.0 * re_a) * r(4, 1) + 2.0 * re_b * r(6, 2) + 2.0 * re_b * r(7, 3));
    d(4, 2, -i * x23 * r(3, 2) + (-4.0 * re_a - 2.0 * re_b) * r(4, 2) + i * x12 * r(4, 3) + 2.0 * re_b * r(7, 5));
    d(4, 3, -i * x23 * r(3, 3) + i * x12 * r(4, 2) + (-4.0 * re_a - 2.0 * re_b) * r(4, 3) + i * x23 * r(4, 4) + 2.0 * re_b * r(6, 5));
    d(4, 4, 2.0 * re_a * r(1, 1) - i * x23 * r(3, 4) + i * x23 * r(4, 3) + (-4.0 * re_a - 2.0 * re_b) * r(4, 4) + 2.0 * re_b * r(6, 6) + 2.0 * re_b * r(7, 7));
    d(4, 5, -i * x23 * r(3, 5) + (a + b - 4.0 * re_a - 4.0 * re_b) * r(4, 5) + i * x23 * r(4, 6));
    d(4, 6, 2.0 * re_a * r(1, 2) - i * x23 * r(3, 6) + i * x23 * r(4, 5) + (a + b - 4.0 * re_a - 4.0 * re_b) * r(4, 6) + i * x12 * r(4, 7) + 2.0 * re_b * r(7, 8));
    d(4, 7, 2.0 * re_a * r(1, 3) - i * x23 * r(3, 7) + i * x12 * r(4, 6) + (a + b - 4.0 * re_a - 4.0 * re_b) * r(4, 7) + 2.0 * re_b * r(6, 8));
    d(4, 8, 2.0 * re_a * r(1, 5) - i * x23 * r(3, 8) + (-6.0 * re_b - 2.0 * ac + 2.0 * b) * r(4, 8));
    d(5, 1, (-2.0 * a - 2.0 * b - 2.0 * re_a) * r(5, 1) - i * x23 * r(6, 1) + 2.0 * re_b * r(8, 4));
    d(5, 2, 2.0 * re_a * r(3, 1) + (-a - b - 2.0 * re_a - 2.0 * re_b) * r(5, 2) + i * x12 * r(5, 3) - i * x23 * r(6, 2) + 2.0 * re_b * r(8, 6));
    d(5, 3, 2.0 * re_a * r(2, 1) + i * x12 * r(5, 2) + (-a - b - 2.0 * re_a - 2.0 * re_b) * r(5, 3) + i * x23 * r(5, 4) - i * x23 * r(6, 3) + 2.0 * re_b * r(8, 7));
    d(5, 4, i * x23 * r(5, 3) + (-a - b - 2.0 * re_a - 2.0 * re_b) * r(5, 4) - i * x23 * r(6, 4));
    d(5, 5, 2.0 * re_a * r(2, 2) + 2.0 * re_a * r(3, 3) + (-4.0 * re_b - 2.0 * re_a) * r(5, 5) + i * x23 * r(5, 6) - i * x23 * r(6, 5) + 2.0 * re_b * r(8, 8));
    d(5, 6, 2.0 * re_a * r(3, 4) + i * x23 * r(5, 5) + (-4.0 * re_b - 2.0 * re_a) * r(5, 6) + i * x12 * r(5, 7) - i * x23 * r(6, 6));
    d(5, 7, 2.0 * re_a * r(2, 4) + i * x12 * r(5, 6) + (-4.0 * re_b - 2.0 * re_a) * r(5, 7) - i * x23 * r(6, 7));
    d(5, 8, 2.0 * re_a * r(2, 6) + 2.0 * re_a * r(3, 7) + (b - ac - 6.0 * re_b) * r(5, 8) - i * x23 * r(6, 8));
    d(6, 1, -i * x23 * r(5, 1) + (-2.0 * a - 2.0 * b - 2.0 * re_a) * r(6, 1) - i * x12 * r(7, 1) + 2.0 * re_b * r(8, 3));
    d(6, 2, 2.0 * re_a * r(4, 1) - i * x23 * r(5, 2) + (-a - b - 2.0 * re_a - 2.0 * re_b) * r(6, 2) + i * x12 * r(6, 3) - i * x12 * r(7, 2) + 2.0 * re_b * r(8, 5));
    d(6, 3, -i * x23 * r(5, 3) + i * x12 * r(6, 2) + (-a - b - 2.0 * re_a - 2.0 * re_b) * r(6, 3) + i * x23 * r(6, 4) - i * x12 * r(7, 3));
    d(6, 4, 2.0 * re_a * r(2, 1) - i * x23 * r(5, 4) + i * x23 * r(6, 3) + (-a - b - 2.0 * re_a - 2.0 * re_b) * r(6, 4) - i * x12 * r(7, 4) + 2.0 * re_b * r(8, 7));
    d(6, 5, 2.0 * re_a * r(4, 3) - i * x23 * r(5, 5) + (-4.0 * re_b - 2.0 * re_a) * r(6, 5) + i * x23 * r(6, 6) - i * x12 * r(7, 5));
    d(6, 6, 2.0 * re_a * r(2, 2) + 2.0 * re_a * r(4, 4) - i * x23 * r(5, 6) + i * x23 * r(6, 5) + (-4.0 * re_b - 2.0 * re_a) * r(6, 6) + i * x12 * r(6, 7) - i * x12 * r(7, 6) + 2.0 * re_b * r(8, 8));
    d(6, 7, 2.0 * re_a * r(2, 3) - i * x23 * r(5, 7) + i * x12 * r(6, 6) + (-4.0 * re_b - 2.0 * re_a) * r(6, 7) - i * x12 * r(7, 7));
    d(6, 8, 2.0 * re_a * r(2, 5) + 2.0 * re_a * r(4, 7) - i * x23 * r(5, 8) + (b - ac - 6.0 * re_b) * r(6, 8) - i * x12 * r(7, 8));
    d(7, 1, -i * x12 * r(6, 1) + (-2.0 * a - 2.0 * b - 2.0 * re_a) * r(7, 1) + 2.0 * re_b * r(8, 2));
    d(7, 2, -i * x12 * r(6, 2) + (-a - b - 2.0 * re_a - 2.0 * re_b) * r(7, 2) + i * x12 * r(7, 3));
    d(7, 3, 2.0 * re_a * r(4, 1) - i * x12 * r(6, 3) + i * x12 * r(7, 2) + (-a - b - 2.0 * re_a - 2.0 * re_b) * r(7, 3) + i * x23 * r(7, 4) + 2.0 * re_b * r(8, 5));
    d(7, 4, 2.0 * re_a * r(3, 1) - i * x12 * r(6, 4) + i * x23 * r(7, 3) + (-a - b - 2.0 * re_a - 2.0 * re_b) * r(7, 4) + 2.0 * re_b * r(8, 6));
    d(7, 5, 2.0 * re_a * r(4, 2) - i * x12 * r(6, 5) + (-4.0 * re_b - 2.0 * re_a) * r(7, 5) + i * x23 * r(7, 6));
    d(7, 6, 2.0 * re_a * r(3, 2) - i * x12 * r(6, 6) + i * x23 * r(7, 5) + (-4.0 * re_b - 2.0 * re_a) * r(7, 6) + i * x12 * r(7, 7));
    d(7, 7, 2.0 * re_a * r(3, 3) + 2.0 * re_a * r(4, 4) - i * x12 * r(6, 7) + i * x12 * r(7, 6) + (-4.0 * re_b - 2.0 * re_a) * r(7, 7) + 2.0 * re_b * r(8, 8));
    d(7, 8, 2.0 * re_a * r(3, 5) + 2.0 * re_a * r(4, 6) - i * x12 * r(6, 8) + (b - ac - 6.0 * re_b) * r(7, 8));
    d(8, 1, (-3.0 * a - 3.0 * b) * r(8, 1));
    d(8, 2, 2.0 * re_a * r(7, 1) + (-2.0 * a - 2.0 * b - 2.0 * re_b) * r(8, 2) + i * x12 * r(8, 3));
    d(8, 3, 2.0 * re_a * r(6, 1) + i * x12 * r(8, 2) + (-2.0 * a - 2.0 * b - 2.0 * re_b) * r(8, 3) + i * x23 * r(8, 4));
    d(8, 4, 2.0 * re_a * r(5, 1) + i * x23 * r(8, 3) + (-2.0 * a - 2.0 * b - 2.0 * re_b) * r(8, 4));
    d(8, 5, 2.0 * re_a * r(6, 2) + 2.0 * re_a * r(7, 3) + (-a - b - 4.0 * re_b) * r(8, 5) + i * x23 * r(8, 6));
    d(8, 6, 2.0 * re_a * r(5, 2) + 2.0 * re_a * r(7, 4) + i * x23 * r(8, 5) + (-a - b - 4.0 * re_b) * r(8, 6) + i * x12 * r(8, 7));
    d(8, 7, 2.0 * re_a * r(5, 3) + 2.0 * re_a * r(6, 4) + i * x12 * r(8, 6) + (-a - b - 4.0 * re_b) * r(8, 7));
    d(8, 8, 2.0 * re_a * r(5, 5) + 2.0 * re_a * r(6, 6) + 2.0 * re_a * r(7, 7) - 6.0 * re_b * r(8, 8));
    out
}
