//! Pure states, tuples of states and their Bargmann invariants.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{is_psd, HermitianMatrix, DEFAULT_PSD_TOL, MAX_DIM};

/// Allowed deviation of a state's norm from 1.
pub const NORM_TOL: f64 = 1e-12;

/// Allowed deviation of a density matrix's trace from 1.
pub const TRACE_TOL: f64 = 1e-9;

/// Unit-norm vector of complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Wraps `amps`, rejecting vectors whose norm differs from 1 by more
    /// than [`NORM_TOL`].
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let norm = checked_norm(&amps)?;
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amps })
    }

    /// Scales `amps` to unit norm.
    pub fn from_unnormalized(amps: Vec<Complex64>) -> Result<Self> {
        let norm = checked_norm(&amps)?;
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            amps: amps.into_iter().map(|z| z / norm).collect(),
        })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// |0>
    pub fn zero() -> Self {
        Self::qubit(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    /// |1>
    pub fn one() -> Self {
        Self::qubit(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    }

    /// (|0> + |1>)/sqrt(2)
    pub fn plus() -> Self {
        Self::qubit(
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(FRAC_1_SQRT_2, 0.0),
        )
    }

    /// (|0> - |1>)/sqrt(2)
    pub fn minus() -> Self {
        Self::qubit(
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(-FRAC_1_SQRT_2, 0.0),
        )
    }

    /// (|0> + i|1>)/sqrt(2)
    pub fn plus_i() -> Self {
        Self::qubit(
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, FRAC_1_SQRT_2),
        )
    }

    /// (|0> - i|1>)/sqrt(2)
    pub fn minus_i() -> Self {
        Self::qubit(
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, -FRAC_1_SQRT_2),
        )
    }

    fn qubit(a: Complex64, b: Complex64) -> Self {
        Self { amps: vec![a, b] }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn is_real(&self) -> bool {
        self.amps.iter().all(|z| z.im == 0.0)
    }

    /// `<self|other>`
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// The state multiplied by `e^{i theta}`.
    pub fn with_phase(&self, theta: f64) -> Self {
        let phase = Complex64::from_polar(1.0, theta);
        Self {
            amps: self.amps.iter().map(|z| z * phase).collect(),
        }
    }
}

fn checked_norm(amps: &[Complex64]) -> Result<f64> {
    if amps.is_empty() {
        return Err(Error::InvalidDimension(0));
    }
    if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
}

/// Ordered tuple of states sharing one Hilbert-space dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct StateTuple {
    states: Vec<StateVector>,
}

impl StateTuple {
    pub fn new(states: Vec<StateVector>) -> Result<Self> {
        let first = states
            .first()
            .ok_or(Error::TooFewStates { found: 0, min: 1 })?;
        if states.len() > MAX_DIM {
            return Err(Error::DimensionTooLarge {
                dim: states.len(),
                max: MAX_DIM,
            });
        }
        let dim = first.dim();
        if let Some(bad) = states.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self { states })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Hilbert-space dimension shared by all members.
    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn reversed(&self) -> Self {
        Self {
            states: self.states.iter().rev().cloned().collect(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.states.iter().all(StateVector::is_real)
    }

    /// `|<psi_i|psi_j>|^2` for all `i < j`, in row-major upper-triangle order.
    pub fn pairwise_overlaps(&self) -> Vec<f64> {
        let n = self.len();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                out.push(overlap_unchecked(&self.states[i], &self.states[j]));
            }
        }
        out
    }
}

/// Density matrix: PSD with unit trace, both within `1e-9`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: HermitianMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        let trace = matrix.trace();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotUnitTrace { trace });
        }
        if !is_psd(&matrix, DEFAULT_PSD_TOL) {
            return Err(Error::NotPsd {
                min_eigenvalue: crate::linalg::hermitian_eigenvalues(&matrix).min_eigenvalue,
            });
        }
        Ok(Self { matrix })
    }

    /// The projector `|psi><psi|`.
    pub fn from_pure(state: &StateVector) -> Result<Self> {
        let a = state.amplitudes();
        let matrix = HermitianMatrix::from_fn(a.len(), |i, j| a[i] * a[j].conj())?;
        Ok(Self { matrix })
    }

    /// The maximally mixed state `I/d`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        let w = 1.0 / dim as f64;
        let matrix = HermitianMatrix::from_fn(dim, |i, j| {
            Complex64::new(if i == j { w } else { 0.0 }, 0.0)
        })?;
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }
}

/// A Bargmann invariant together with its order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantValue {
    pub order: usize,
    pub value: Complex64,
}

impl InvariantValue {
    pub fn modulus(&self) -> f64 {
        self.value.norm()
    }

    /// Phase wrapped into `[0, 2pi)`.
    pub fn phase(&self) -> f64 {
        wrap_phase(self.value.arg())
    }
}

/// Wraps an angle into `[0, 2pi)`.
pub fn wrap_phase(phi: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let w = phi.rem_euclid(tau);
    // rem_euclid can round up to exactly tau for tiny negative inputs.
    if w >= tau {
        0.0
    } else {
        w
    }
}

/// `|<a|b>|^2`
pub fn overlap(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

fn overlap_unchecked(a: &StateVector, b: &StateVector) -> f64 {
    a.amps
        .iter()
        .zip(&b.amps)
        .map(|(x, y)| x.conj() * y)
        .sum::<Complex64>()
        .norm_sqr()
}

/// `<psi_1|psi_2><psi_2|psi_3>...<psi_n|psi_1>`
pub fn bargmann_invariant(t: &StateTuple) -> Result<InvariantValue> {
    let n = t.len();
    if n < 2 {
        return Err(Error::TooFewStates { found: n, min: 2 });
    }
    let s = t.states();
    let mut value = Complex64::new(1.0, 0.0);
    for k in 0..n {
        value *= s[k].inner(&s[(k + 1) % n])?;
    }
    Ok(InvariantValue { order: n, value })
}

/// `Tr(rho_1 rho_2 ... rho_n)`
pub fn bargmann_invariant_mixed(ms: &[DensityMatrix]) -> Result<InvariantValue> {
    let n = ms.len();
    if n < 2 {
        return Err(Error::TooFewStates { found: n, min: 2 });
    }
    let d = ms[0].dim();
    if let Some(bad) = ms.iter().find(|m| m.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: bad.dim(),
        });
    }
    let mut product = ms[0].matrix().entries().to_vec();
    for m in &ms[1..] {
        product = matmul(&product, m.matrix().entries(), d);
    }
    let value = (0..d).map(|i| product[i * d + i]).sum();
    Ok(InvariantValue { order: n, value })
}

fn matmul(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

/// Matrix of inner products `G_ij = <psi_i|psi_j>`.
pub fn gram_matrix(t: &StateTuple) -> Result<HermitianMatrix> {
    let s = t.states();
    let n = s.len();
    let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        entries[i * n + i] = Complex64::new(1.0, 0.0);
        for j in i + 1..n {
            let z = s[i].inner(&s[j])?;
            entries[i * n + j] = z;
            entries[j * n + i] = z.conj();
        }
    }
    HermitianMatrix::new(n, entries)
}

/// Multiplies state `k` by `e^{i phases[k]}`.
pub fn apply_gauge(t: &StateTuple, phases: &[f64]) -> Result<StateTuple> {
    if phases.len() != t.len() {
        return Err(Error::LengthMismatch {
            expected: t.len(),
            found: phases.len(),
        });
    }
    Ok(StateTuple {
        states: t
            .states()
            .iter()
            .zip(phases)
            .map(|(s, &theta)| s.with_phase(theta))
            .collect(),
    })
}

/// Haar-random pure state in `C^d`: i.i.d. standard normal real and
/// imaginary parts, normalized.
pub fn haar_random_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<StateVector> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    loop {
        let amps: Vec<Complex64> = (0..d)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        // Resample on underflow; vanishingly rare for any d >= 1.
        if norm > 1e-150 {
            return StateVector::from_unnormalized(amps);
        }
    }
}

/// Tuple of `n` independent Haar-random states in `C^d`.
pub fn haar_random_tuple<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<StateTuple> {
    let states = (0..n)
        .map(|_| haar_random_state(d, rng))
        .collect::<Result<Vec<_>>>()?;
    StateTuple::new(states)
}

/// Real-amplitude encoding `(1/2)[[Re m, -Im m], [Im m, Re m]]`.
///
/// The output is a `2d x 2d` real symmetric density matrix.
pub fn real_encode(m: &DensityMatrix) -> Result<DensityMatrix> {
    let d = m.dim();
    let src = m.matrix();
    let matrix = HermitianMatrix::from_fn(2 * d, |i, j| {
        let z = src.get(i % d, j % d);
        let x = match (i < d, j < d) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        };
        Complex64::new(0.5 * x, 0.0)
    })?;
    Ok(DensityMatrix { matrix })
}

/// On-disk layout of a state tuple: `{"dim": d, "states": [[[re, im], ...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub dim: usize,
    pub states: Vec<Vec<[f64; 2]>>,
}

impl StateFile {
    pub fn from_tuple(t: &StateTuple) -> Self {
        Self {
            dim: t.dim(),
            states: t
                .states()
                .iter()
                .map(|s| s.amplitudes().iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }

    pub fn into_tuple(self) -> Result<StateTuple> {
        let states = self
            .states
            .into_iter()
            .map(|amps| {
                if amps.len() != self.dim {
                    return Err(Error::DimensionMismatch {
                        expected: self.dim,
                        found: amps.len(),
                    });
                }
                StateVector::new(
                    amps.into_iter()
                        .map(|[re, im]| Complex64::new(re, im))
                        .collect(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        StateTuple::new(states)
    }
}

pub fn parse_state_file(text: &str) -> Result<StateTuple> {
    let file: StateFile = serde_json::from_str(text)?;
    file.into_tuple()
}

/// Serializes a tuple with every amplitude printed to 17 significant digits.
pub fn format_state_file(t: &StateTuple) -> String {
    let mut out = String::new();
    let _ = write!(out, "{{\"dim\": {}, \"states\": [", t.dim());
    for (k, s) in t.states().iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        out.push('[');
        for (i, z) in s.amplitudes().iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "[{:.16e}, {:.16e}]", z.re, z.im);
        }
        out.push(']');
    }
    out.push_str("]}\n");
    out
}
