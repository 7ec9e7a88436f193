//! The eight-dimensional state space of three single-photon cavities.
//!
//! Basis order (0-based index → occupations n₁n₂n₃):
//!
//! ```text
//! 0 |000⟩  1 |100⟩  2 |010⟩  3 |001⟩  4 |110⟩  5 |101⟩  6 |011⟩  7 |111⟩
//! ```
//!
//! Human-facing labels (CSV headers, log lines) are 1-based, so `rho18` is
//! the |000⟩⟨111| coherence.

use core::fmt;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

/// Dimension of the state space.
pub const DIM: usize = 8;

/// Off-diagonal Frobenius norm at which the Jacobi iteration stops.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 64;

const OCCUPATIONS: [[u8; 3]; DIM] = [
    [0, 0, 0],
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 1, 0],
    [1, 0, 1],
    [0, 1, 1],
    [1, 1, 1],
];

pub type Matrix = [[Complex64; DIM]; DIM];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum HilbertError {
    #[error("cavity index {0} out of range 1..=3")]
    CavityIndex(usize),
    #[error("occupation {0:?} is not a valid single-photon configuration")]
    Occupation([u8; 3]),
    #[error("matrix is not Hermitian (defect {defect:e} > {tol:e})")]
    NotHermitian { defect: f64, tol: f64 },
    #[error("Jacobi iteration did not converge (off-diagonal norm {0:e})")]
    NoConvergence(f64),
}

/// Position of a product state in the basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex(u8);

impl BasisIndex {
    pub fn new(index: usize) -> Option<Self> {
        (index < DIM).then_some(Self(index as u8))
    }

    pub fn from_occupations(occ: [u8; 3]) -> Result<Self, HilbertError> {
        OCCUPATIONS
            .iter()
            .position(|o| *o == occ)
            .map(|i| Self(i as u8))
            .ok_or(HilbertError::Occupation(occ))
    }

    pub fn occupations(self) -> [u8; 3] {
        OCCUPATIONS[self.0 as usize]
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// 1-based label.
    pub fn label(self) -> usize {
        self.0 as usize + 1
    }

    pub fn all() -> impl Iterator<Item = Self> {
        (0..DIM as u8).map(Self)
    }

    /// The state with cavity `cavity` (0-based) emptied, if it was occupied.
    pub fn lowered(self, cavity: usize) -> Option<Self> {
        let mut occ = self.occupations();
        if occ[cavity] == 0 {
            return None;
        }
        occ[cavity] = 0;
        Self::from_occupations(occ).ok()
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.occupations();
        write!(f, "|{a}{b}{c}⟩")
    }
}

/// Precomputed `lowered` table: `LOWER[c][n]` is the index reached by
/// removing the photon of cavity c from basis state n.
pub(crate) const LOWER: [[Option<usize>; DIM]; 3] = {
    let mut table = [[None; DIM]; 3];
    let mut c = 0;
    while c < 3 {
        let mut n = 0;
        while n < DIM {
            if OCCUPATIONS[n][c] == 1 {
                let mut m = 0;
                while m < DIM {
                    let mut same = true;
                    let mut k = 0;
                    while k < 3 {
                        let want = if k == c { 0 } else { OCCUPATIONS[n][k] };
                        if OCCUPATIONS[m][k] != want {
                            same = false;
                        }
                        k += 1;
                    }
                    if same {
                        table[c][n] = Some(m);
                    }
                    m += 1;
                }
            }
            n += 1;
        }
        c += 1;
    }
    table
};

/// Occupation of cavity c in basis state n, as f64.
pub(crate) fn occupation(c: usize, n: usize) -> f64 {
    OCCUPATIONS[n][c] as f64
}

/// A linear operator on the state space.
#[derive(Clone, Copy, PartialEq)]
pub struct Operator(pub Matrix);

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl Default for Operator {
    fn default() -> Self {
        Self::zero()
    }
}

impl Operator {
    pub const fn zero() -> Self {
        Self([[ZERO; DIM]; DIM])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..DIM {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zero();
        for i in 0..DIM {
            for j in 0..DIM {
                m.0[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn diagonal(values: [f64; DIM]) -> Self {
        Self::from_fn(|i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                ZERO
            }
        })
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..DIM).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// max |M_ij − conj(M_ji)|.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..DIM {
            for j in i..DIM {
                worst = worst.max((self.0[i][j] - self.0[j][i].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &[Complex64; DIM]) -> [Complex64; DIM] {
        let mut out = [ZERO; DIM];
        for i in 0..DIM {
            out[i] = (0..DIM).map(|j| self.0[i][j] * v[j]).sum();
        }
        out
    }
}

impl Index<(usize, usize)> for Operator {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Operator {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.0[i][j]
    }
}

impl Add for Operator {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl Sub for Operator {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl Mul for Operator {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| (0..DIM).map(|k| self.0[i][k] * rhs.0[k][j]).sum())
    }
}

/// `a_i` for cavity `i ∈ {1, 2, 3}`.
pub fn annihilation(cavity: usize) -> Result<Operator, HilbertError> {
    if !(1..=3).contains(&cavity) {
        return Err(HilbertError::CavityIndex(cavity));
    }
    let mut a = Operator::zero();
    for n in 0..DIM {
        if let Some(m) = LOWER[cavity - 1][n] {
            a.0[m][n] = ONE;
        }
    }
    Ok(a)
}

/// Normalised state vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureState {
    amplitudes: [Complex64; DIM],
}

impl PureState {
    /// Normalises `amplitudes`; `None` for the zero vector.
    pub fn new(amplitudes: [Complex64; DIM]) -> Option<Self> {
        let mut s = Self { amplitudes };
        s.normalize().then_some(s)
    }

    pub fn basis(index: BasisIndex) -> Self {
        let mut amplitudes = [ZERO; DIM];
        amplitudes[index.index()] = ONE;
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &[Complex64; DIM] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Rescales to unit norm; false (and unchanged) if the norm is zero.
    pub(crate) fn normalize(&mut self) -> bool {
        let n = self.norm_sqr().sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return false;
        }
        for a in &mut self.amplitudes {
            *a /= n;
        }
        true
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64; DIM] {
        &mut self.amplitudes
    }

    /// ⟨a_c† a_c⟩ for 0-based cavity c.
    pub fn occupation(&self, cavity: usize) -> f64 {
        (0..DIM)
            .map(|n| occupation(cavity, n) * self.amplitudes[n].norm_sqr())
            .sum()
    }

    /// a_c|ψ⟩ renormalised; `None` if the cavity is empty in every component.
    pub fn lowered(&self, cavity: usize) -> Option<Self> {
        let mut out = [ZERO; DIM];
        for n in 0..DIM {
            if let Some(m) = LOWER[cavity][n] {
                out[m] = self.amplitudes[n];
            }
        }
        Self::new(out)
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix(Operator::from_fn(|i, j| {
            self.amplitudes[i] * self.amplitudes[j].conj()
        }))
    }
}

/// Entangled initial states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InitialState {
    /// (|100⟩ + |010⟩ + |001⟩)/√3
    W,
    /// (|000⟩ + |111⟩)/√2
    Ghz,
}

impl InitialState {
    pub fn pure(self) -> PureState {
        let mut amps = [ZERO; DIM];
        match self {
            Self::W => {
                for i in 1..=3 {
                    amps[i] = ONE;
                }
            }
            Self::Ghz => {
                amps[0] = ONE;
                amps[7] = ONE;
            }
        }
        PureState::new(amps).expect("non-zero")
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::W => "W",
            Self::Ghz => "GHZ",
        }
    }
}

impl core::str::FromStr for InitialState {
    type Err = &'static str;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "W" | "w" => Ok(Self::W),
            "GHZ" | "ghz" | "Ghz" => Ok(Self::Ghz),
            _ => Err("expected W or GHZ"),
        }
    }
}

pub fn initial_state(kind: InitialState) -> DensityMatrix {
    let mut m = Operator::zero();
    match kind {
        InitialState::W => {
            for j in 1..=3 {
                for k in 1..=3 {
                    m.0[j][k] = Complex64::new(1.0 / 3.0, 0.0);
                }
            }
        }
        InitialState::Ghz => {
            for (j, k) in [(0, 0), (0, 7), (7, 0), (7, 7)] {
                m.0[j][k] = Complex64::new(0.5, 0.0);
            }
        }
    }
    DensityMatrix(m)
}

/// A density matrix ρ_jk.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct DensityMatrix(pub Operator);

impl DensityMatrix {
    pub fn operator(&self) -> &Operator {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    pub fn population(&self, n: usize) -> f64 {
        self.0 .0[n][n].re
    }

    /// Makes the matrix exactly Hermitian by averaging with its adjoint.
    pub fn symmetrize(&mut self) {
        for i in 0..DIM {
            self.0 .0[i][i].im = 0.0;
            for j in i + 1..DIM {
                let v = 0.5 * (self.0 .0[i][j] + self.0 .0[j][i].conj());
                self.0 .0[i][j] = v;
                self.0 .0[j][i] = v.conj();
            }
        }
    }

    /// ½ Σ|λ| of the difference; both matrices are assumed Hermitian.
    pub fn trace_distance(&self, other: &Self) -> f64 {
        let diff = self.0 - other.0;
        0.5 * jacobi(diff)
            .map(|l| l.iter().map(|x| x.abs()).sum())
            .unwrap_or(f64::NAN)
    }
}

/// ⟨n₁n₂n₃|ρ^{T₁}|m₁m₂m₃⟩ = ⟨m₁n₂n₃|ρ|n₁m₂m₃⟩.
pub fn partial_transpose_first(rho: &Operator) -> Operator {
    Operator::from_fn(|n, m| {
        let (on, om) = (OCCUPATIONS[n], OCCUPATIONS[m]);
        let row = BasisIndex::from_occupations([om[0], on[1], on[2]])
            .expect("valid")
            .index();
        let col = BasisIndex::from_occupations([on[0], om[1], om[2]])
            .expect("valid")
            .index();
        rho.0[row][col]
    })
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &Operator, tol: f64) -> Result<[f64; DIM], HilbertError> {
    let defect = m.hermiticity_defect();
    if defect > tol {
        return Err(HilbertError::NotHermitian { defect, tol });
    }
    jacobi(*m)
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let mut s = 0.0;
    for i in 0..DIM {
        for j in 0..DIM {
            if i != j {
                s += a[i][j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

// Cyclic Jacobi for complex Hermitian matrices. Each rotation first removes the
// phase of a_pq, then applies a real Givens rotation to the 2×2 block.
fn jacobi(op: Operator) -> Result<[f64; DIM], HilbertError> {
    let mut a = op.0;
    for i in 0..DIM {
        a[i][i].im = 0.0;
    }
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) < JACOBI_TOLERANCE {
            let mut out = [0.0; DIM];
            for i in 0..DIM {
                out[i] = a[i][i].re;
            }
            out.sort_by(|x, y| x.total_cmp(y));
            return Ok(out);
        }
        for p in 0..DIM - 1 {
            for q in p + 1..DIM {
                let b = a[p][q];
                let mag = b.norm();
                if mag == 0.0 {
                    continue;
                }
                let phase = b / mag; // e^{iφ}
                let theta = 0.5 * (2.0 * mag).atan2(a[q][q].re - a[p][p].re);
                let (s, c) = theta.sin_cos();
                // V = [[c, s], [−s e^{−iφ}, c e^{−iφ}]] on columns p, q
                let vqp = -s * phase.conj();
                let vqq = c * phase.conj();
                for row in a.iter_mut() {
                    let (x, y) = (row[p], row[q]);
                    row[p] = x * c + y * vqp;
                    row[q] = x * s + y * vqq;
                }
                for k in 0..DIM {
                    let (x, y) = (a[p][k], a[q][k]);
                    a[p][k] = x * c + y * vqp.conj();
                    a[q][k] = x * s + y * vqq.conj();
                }
                a[p][q] = ZERO;
                a[q][p] = ZERO;
                a[p][p].im = 0.0;
                a[q][q].im = 0.0;
            }
        }
    }
    Err(HilbertError::NoConvergence(off_diagonal_norm(&a)))
}

/// Negativity together with the partially transposed spectrum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NegativityReport {
    pub negativity: f64,
    /// Eigenvalues of ρ^{T₁}, ascending.
    pub spectrum: [f64; DIM],
    /// Eigenvalues below `-NEGATIVE_EIGENVALUE_SLACK`.
    pub negative_count: usize,
}

/// Eigenvalues of ρ^{T₁} closer to zero than this are not counted as negative.
pub const NEGATIVE_EIGENVALUE_SLACK: f64 = 1e-10;

pub fn negativity_report(rho: &DensityMatrix) -> NegativityReport {
    let spectrum = jacobi(partial_transpose_first(&rho.0)).unwrap_or([f64::NAN; DIM]);
    let negative_sum: f64 = spectrum.iter().filter(|&&l| l < 0.0).sum();
    let negative_count = spectrum
        .iter()
        .filter(|&&l| l < -NEGATIVE_EIGENVALUE_SLACK)
        .count();
    if negative_count > 1 {
        log::warn!("partial transpose has {negative_count} negative eigenvalues");
    }
    NegativityReport {
        negativity: (-2.0 * negative_sum).max(0.0),
        spectrum,
        negative_count,
    }
}

/// 𝒩 = max(0, −2 Σ λ⁻) over the negative eigenvalues of ρ^{T₁}.
pub fn negativity(rho: &DensityMatrix) -> f64 {
    negativity_report(rho).negativity
}

impl Zero for Operator {
    fn zero() -> Self {
        Operator::zero()
    }
    fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(|z| z.is_zero())
    }
}
