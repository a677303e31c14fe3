//! Candidate Gram matrices parameterized by gauge-invariant data, and the
//! realizability decision: a Hermitian matrix is the Gram matrix of some
//! tuple of pure states iff it is PSD with unit diagonal.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    is_psd, psd_factor, vectors_to_tuple, HermitianMatrix, DEFAULT_PSD_TOL, RANK_TOL,
};
use crate::states::{wrap_phase, StateTuple, StateVector};

/// Slack allowed on each overlap outside `[0, 1]`; values inside the slack
/// are clamped.
const OVERLAP_SLACK: f64 = 1e-12;

/// Off-diagonal moduli below this make the third-order phase undefined.
const ZERO_LINK_TOL: f64 = 1e-12;

fn check_overlap(what: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() || !(-OVERLAP_SLACK..=1.0 + OVERLAP_SLACK).contains(&value) {
        return Err(Error::OutOfRange { what, value });
    }
    Ok(value.clamp(0.0, 1.0))
}

fn check_phase(what: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::OutOfRange { what, value });
    }
    Ok(wrap_phase(value))
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Pairwise overlaps `(d12, d13, d23)` of three states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverlapTuple3 {
    pub d12: f64,
    pub d13: f64,
    pub d23: f64,
}

impl OverlapTuple3 {
    pub fn new(d12: f64, d13: f64, d23: f64) -> Result<Self> {
        Ok(Self {
            d12: check_overlap("d12", d12)?,
            d13: check_overlap("d13", d13)?,
            d23: check_overlap("d23", d23)?,
        })
    }

    pub fn from_tuple(t: &StateTuple) -> Result<Self> {
        if t.len() != 3 {
            return Err(Error::LengthMismatch {
                expected: 3,
                found: t.len(),
            });
        }
        let o = t.pairwise_overlaps();
        Self::new(o[0], o[1], o[2])
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.d12, self.d13, self.d23]
    }

    /// `1 - d12 - d13 - d23 + 2 sqrt(d12 d13 d23)`, the determinant of the
    /// zero-phase candidate. Nonnegative exactly for realizable triples.
    pub fn zero_bound(&self) -> f64 {
        1.0 - self.d12 - self.d13 - self.d23 + 2.0 * (self.d12 * self.d13 * self.d23).sqrt()
    }
}

/// Pairwise overlaps of four states, ordered `(d12, d13, d14, d23, d24, d34)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverlapTuple6 {
    pub d12: f64,
    pub d13: f64,
    pub d14: f64,
    pub d23: f64,
    pub d24: f64,
    pub d34: f64,
}

impl OverlapTuple6 {
    pub fn new(values: [f64; 6]) -> Result<Self> {
        const NAMES: [&str; 6] = ["d12", "d13", "d14", "d23", "d24", "d34"];
        let mut v = [0.0; 6];
        for (k, (&x, name)) in values.iter().zip(NAMES).enumerate() {
            v[k] = check_overlap(name, x)?;
        }
        Ok(Self {
            d12: v[0],
            d13: v[1],
            d14: v[2],
            d23: v[3],
            d24: v[4],
            d34: v[5],
        })
    }

    pub fn from_slice(values: &[f64]) -> Result<Self> {
        let arr: [f64; 6] = values.try_into().map_err(|_| Error::LengthMismatch {
            expected: 6,
            found: values.len(),
        })?;
        Self::new(arr)
    }

    pub fn from_tuple(t: &StateTuple) -> Result<Self> {
        if t.len() != 4 {
            return Err(Error::LengthMismatch {
                expected: 4,
                found: t.len(),
            });
        }
        Self::from_slice(&t.pairwise_overlaps())
    }

    pub fn as_array(&self) -> [f64; 6] {
        [self.d12, self.d13, self.d14, self.d23, self.d24, self.d34]
    }
}

/// Three-state candidate: overlaps plus the phase of the third-order invariant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate3 {
    pub overlaps: OverlapTuple3,
    /// In `[0, 2pi)`.
    pub phi: f64,
}

impl Candidate3 {
    pub fn new(overlaps: OverlapTuple3, phi: f64) -> Result<Self> {
        Ok(Self {
            overlaps,
            phi: check_phase("phi", phi)?,
        })
    }
}

/// Four-state candidate with phases on entries (2,3), (2,4) and (3,4).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate4 {
    pub overlaps: OverlapTuple6,
    pub phi123: f64,
    pub phi124: f64,
    pub phi134: f64,
}

impl Candidate4 {
    pub fn new(overlaps: OverlapTuple6, phi123: f64, phi124: f64, phi134: f64) -> Result<Self> {
        Ok(Self {
            overlaps,
            phi123: check_phase("phi123", phi123)?,
            phi124: check_phase("phi124", phi124)?,
            phi134: check_phase("phi134", phi134)?,
        })
    }
}

/// Circulant four-state candidate with first row `(1, alpha, sqrt(delta), conj(alpha))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirculantCandidate4 {
    pub alpha: Complex64,
    pub delta: f64,
}

impl CirculantCandidate4 {
    pub fn new(alpha: Complex64, delta: f64) -> Result<Self> {
        if !alpha.re.is_finite() || !alpha.im.is_finite() || alpha.norm() > 1.0 + 1e-12 {
            return Err(Error::OutOfRange {
                what: "|alpha|",
                value: alpha.norm(),
            });
        }
        Ok(Self {
            alpha,
            delta: check_overlap("delta", delta)?,
        })
    }

    /// The extremal circulant candidate whose fourth-order invariant
    /// `alpha^4` has phase `phi`: `alpha = e^{i phi/4} / (|sin| + |cos|)(phi/4)`
    /// and `sqrt(delta) = (|cos| - |sin|) / (|sin| + |cos|)`.
    ///
    /// Defined for `phi` in `[0, pi]`, where `sqrt(delta)` stays nonnegative;
    /// `2pi - phi` gives the complex-conjugate invariant.
    pub fn boundary(phi: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::PI).contains(&phi) {
            return Err(Error::OutOfRange {
                what: "phi",
                value: phi,
            });
        }
        let theta = phi / 4.0;
        let (s, c) = (theta.sin().abs(), theta.cos().abs());
        let alpha = Complex64::from_polar(1.0 / (s + c), theta);
        let root_delta = (c - s) / (s + c);
        Self::new(alpha, (root_delta * root_delta).min(1.0))
    }
}

/// Three-state candidate: real first row, phase on entry (2,3).
pub fn build_candidate3(c: &Candidate3) -> Result<HermitianMatrix> {
    let o = &c.overlaps;
    let (a, b) = (o.d12.sqrt(), o.d13.sqrt());
    let z = Complex64::from_polar(o.d23.sqrt(), c.phi);
    HermitianMatrix::from_rows(&[
        vec![real(1.0), real(a), real(b)],
        vec![real(a), real(1.0), z],
        vec![real(b), z.conj(), real(1.0)],
    ])
}

pub fn build_candidate4(c: &Candidate4) -> Result<HermitianMatrix> {
    let o = &c.overlaps;
    let upper = [
        real(o.d12.sqrt()),
        real(o.d13.sqrt()),
        real(o.d14.sqrt()),
        Complex64::from_polar(o.d23.sqrt(), c.phi123),
        Complex64::from_polar(o.d24.sqrt(), c.phi124),
        Complex64::from_polar(o.d34.sqrt(), c.phi134),
    ];
    from_upper4(&upper)
}

/// 4x4 unit-diagonal Hermitian matrix from its row-major upper triangle.
pub(crate) fn from_upper4(upper: &[Complex64; 6]) -> Result<HermitianMatrix> {
    const POS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let mut entries = vec![Complex64::new(0.0, 0.0); 16];
    for i in 0..4 {
        entries[i * 4 + i] = real(1.0);
    }
    for (&(i, j), &z) in POS.iter().zip(upper) {
        entries[i * 4 + j] = z;
        entries[j * 4 + i] = z.conj();
    }
    HermitianMatrix::new(4, entries)
}

pub fn build_circulant4(c: &CirculantCandidate4) -> Result<HermitianMatrix> {
    let first = [real(1.0), c.alpha, real(c.delta.sqrt()), c.alpha.conj()];
    HermitianMatrix::from_fn(4, |i, j| first[(j + 4 - i) % 4])
}

/// Closed-form spectrum `1 + sqrt(delta) +- 2 Re(alpha)`,
/// `1 - sqrt(delta) +- 2 Im(alpha)`, ascending.
pub fn circulant_eigenvalues(c: &CirculantCandidate4) -> Vec<f64> {
    let r = c.delta.sqrt();
    let (re, im) = (2.0 * c.alpha.re, 2.0 * c.alpha.im);
    let mut eig = vec![1.0 + r + re, 1.0 + r - re, 1.0 - r + im, 1.0 - r - im];
    eig.sort_by(f64::total_cmp);
    eig
}

/// Whether `m` is the Gram matrix of some tuple of pure states.
pub fn is_realizable(m: &HermitianMatrix) -> bool {
    m.check_unit_diagonal(DEFAULT_PSD_TOL).is_ok() && is_psd(m, DEFAULT_PSD_TOL)
}

/// Three real-amplitude states with the given pairwise overlaps.
///
/// Realizable triples always admit the zero-phase candidate, whose
/// factorization is real.
pub fn real_realization_triple(o: &OverlapTuple3) -> Result<StateTuple> {
    let bound = o.zero_bound();
    if bound < -DEFAULT_PSD_TOL {
        return Err(Error::NotRealizable { bound });
    }

    let d = o.as_array();
    // (pair, remaining index) for (1,2), (1,3), (2,3).
    const PAIRS: [((usize, usize), usize); 3] = [((0, 1), 2), ((0, 2), 1), ((1, 2), 0)];
    if let Some(&((i, j), k)) = PAIRS.iter().zip(d).find(|(_, x)| *x == 0.0).map(|(p, _)| p) {
        return orthogonal_pair_realization(o, i, j, k);
    }

    let m = build_candidate3(&Candidate3::new(*o, 0.0)?)?;
    vectors_to_tuple(psd_factor(&m, RANK_TOL))
}

/// Realization when states `i` and `j` are orthogonal: `|0>`, `|1>`, and
/// the third state spanned by them plus a fresh direction.
fn orthogonal_pair_realization(
    o: &OverlapTuple3,
    i: usize,
    j: usize,
    k: usize,
) -> Result<StateTuple> {
    let overlap = |a: usize, b: usize| -> f64 {
        match (a.min(b), a.max(b)) {
            (0, 1) => o.d12,
            (0, 2) => o.d13,
            _ => o.d23,
        }
    };
    let (dik, djk) = (overlap(i, k), overlap(j, k));
    let mut states = vec![StateVector::zero(); 3];
    states[i] = StateVector::from_real(&[1.0, 0.0, 0.0])?;
    states[j] = StateVector::from_real(&[0.0, 1.0, 0.0])?;
    states[k] = StateVector::from_unnormalized(vec![
        real(dik.sqrt()),
        real(djk.sqrt()),
        real((1.0 - dik - djk).max(0.0).sqrt()),
    ])?;
    StateTuple::new(states)
}

/// Gauge-invariant content of a 3x3 Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Invariants3 {
    pub overlaps: OverlapTuple3,
    /// `arg(m12 m23 m31)` in `[0, 2pi)`; reported as 0 when `zero_cycle` is set.
    pub phi: f64,
    /// Some off-diagonal entry vanishes, so `phi` is undefined.
    pub zero_cycle: bool,
}

pub fn extract_invariants3(m: &HermitianMatrix) -> Result<Invariants3> {
    if m.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: m.dim(),
        });
    }
    m.check_unit_diagonal(DEFAULT_PSD_TOL)?;
    let (m12, m13, m23) = (m.get(0, 1), m.get(0, 2), m.get(1, 2));
    let overlaps = OverlapTuple3::new(m12.norm_sqr(), m13.norm_sqr(), m23.norm_sqr())?;
    let zero_cycle = [m12, m13, m23].iter().any(|z| z.norm() < ZERO_LINK_TOL);
    let phi = if zero_cycle {
        0.0
    } else {
        wrap_phase((m12 * m23 * m13.conj()).arg())
    };
    Ok(Invariants3 {
        overlaps,
        phi,
        zero_cycle,
    })
}

/// JSON form of a candidate: `{"overlaps": [...], "phases": [...]}`.
///
/// Three overlaps `(d12, d13, d23)` take one phase `phi`; six overlaps
/// `(d12, d13, d14, d23, d24, d34)` take three phases `(phi123, phi124, phi134)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateSpec {
    pub overlaps: Vec<f64>,
    #[serde(default)]
    pub phases: Vec<f64>,
}

/// A parsed [`CandidateSpec`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnyCandidate {
    Three(Candidate3),
    Four(Candidate4),
}

impl CandidateSpec {
    pub fn from_candidate3(c: &Candidate3) -> Self {
        Self {
            overlaps: c.overlaps.as_array().to_vec(),
            phases: vec![c.phi],
        }
    }

    pub fn from_candidate4(c: &Candidate4) -> Self {
        Self {
            overlaps: c.overlaps.as_array().to_vec(),
            phases: vec![c.phi123, c.phi124, c.phi134],
        }
    }

    /// Missing phases default to zero.
    pub fn parse(&self) -> Result<AnyCandidate> {
        let phase = |k: usize| self.phases.get(k).copied().unwrap_or(0.0);
        match self.overlaps.len() {
            3 => {
                if self.phases.len() > 1 {
                    return Err(Error::LengthMismatch {
                        expected: 1,
                        found: self.phases.len(),
                    });
                }
                let o = OverlapTuple3::new(self.overlaps[0], self.overlaps[1], self.overlaps[2])?;
                Ok(AnyCandidate::Three(Candidate3::new(o, phase(0))?))
            }
            6 => {
                if self.phases.len() > 3 {
                    return Err(Error::LengthMismatch {
                        expected: 3,
                        found: self.phases.len(),
                    });
                }
                let o = OverlapTuple6::from_slice(&self.overlaps)?;
                Ok(AnyCandidate::Four(Candidate4::new(
                    o,
                    phase(0),
                    phase(1),
                    phase(2),
                )?))
            }
            n => Err(Error::LengthMismatch {
                expected: 6,
                found: n,
            }),
        }
    }
}

impl AnyCandidate {
    pub fn matrix(&self) -> Result<HermitianMatrix> {
        match self {
            AnyCandidate::Three(c) => build_candidate3(c),
            AnyCandidate::Four(c) => build_candidate4(c),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eigenvalues, principal_minors};
    use crate::states::{gram_matrix, overlap};
    use std::f64::consts::{FRAC_PI_4, PI};

    fn c3(d12: f64, d13: f64, d23: f64, phi: f64) -> Candidate3 {
        Candidate3::new(OverlapTuple3::new(d12, d13, d23).unwrap(), phi).unwrap()
    }

    fn counterexample_overlaps() -> OverlapTuple6 {
        let r6 = 6f64.sqrt();
        OverlapTuple6::new([0.5, 0.5, 0.75, 0.5, (4.0 + r6) / 8.0, (4.0 - r6) / 8.0]).unwrap()
    }

    #[test]
    fn candidate3_examples() {
        for phi in [0.0, 1.0, 5.0] {
            let m = build_candidate3(&c3(0.0, 0.0, 0.0, phi)).unwrap();
            assert_eq!(m, HermitianMatrix::identity(3).unwrap());
        }

        let m = build_candidate3(&c3(0.25, 0.25, 0.25, 0.0)).unwrap();
        assert!(m.entries().iter().enumerate().all(|(k, z)| {
            let want = if k % 4 == 0 { 1.0 } else { 0.5 };
            (z - real(want)).norm() < 1e-15
        }));
        let det = principal_minors(&m).unwrap()[6];
        assert!((det - 0.5).abs() < 1e-15);

        let m = build_candidate3(&c3(1.0, 0.0, 1.0, 0.0)).unwrap();
        assert!(hermitian_eigenvalues(&m).min_eigenvalue < 0.0);
        assert!(!is_realizable(&m));
    }

    #[test]
    fn candidate_validation() {
        assert!(matches!(
            OverlapTuple3::new(1.2, 0.0, 0.0),
            Err(Error::OutOfRange { what: "d12", .. })
        ));
        assert!(OverlapTuple6::new([0.0, 0.0, 0.0, 0.0, -0.1, 0.0]).is_err());
        assert!(OverlapTuple6::from_slice(&[0.5; 5]).is_err());
        let c = c3(0.1, 0.1, 0.1, -PI / 2.0);
        assert!((c.phi - 1.5 * PI).abs() < 1e-15);
        assert!(CirculantCandidate4::new(Complex64::new(1.0, 0.1), 0.0).is_err());
        assert!(CirculantCandidate4::new(Complex64::new(0.1, 0.0), 1.5).is_err());
    }

    #[test]
    fn candidate4_counterexample_min_eigenvalues() {
        let o = counterexample_overlaps();
        let m = build_candidate4(&Candidate4::new(o, 0.0, 0.0, 0.0).unwrap()).unwrap();
        let min = hermitian_eigenvalues(&m).min_eigenvalue;
        assert!((min + 0.044984).abs() < 1e-5, "{min}");
        let m = build_candidate4(&Candidate4::new(o, PI, PI, PI).unwrap()).unwrap();
        let min = hermitian_eigenvalues(&m).min_eigenvalue;
        assert!((min + 1.17472).abs() < 1e-5, "{min}");

        let zero = OverlapTuple6::new([0.0; 6]).unwrap();
        let m = build_candidate4(&Candidate4::new(zero, 1.0, 2.0, 3.0).unwrap()).unwrap();
        assert_eq!(m, HermitianMatrix::identity(4).unwrap());
    }

    #[test]
    fn circulant_examples() {
        let c = CirculantCandidate4::new(Complex64::new(0.0, 0.0), 0.0).unwrap();
        assert_eq!(
            build_circulant4(&c).unwrap(),
            HermitianMatrix::identity(4).unwrap()
        );
        assert_eq!(circulant_eigenvalues(&c), vec![1.0; 4]);

        let c = CirculantCandidate4::new(Complex64::new(0.5, 0.0), 0.0).unwrap();
        assert_eq!(circulant_eigenvalues(&c), vec![0.0, 1.0, 1.0, 2.0]);
        let eig = hermitian_eigenvalues(&build_circulant4(&c).unwrap()).eigenvalues;
        for (a, b) in eig.iter().zip([0.0, 1.0, 1.0, 2.0]) {
            assert!((a - b).abs() < 1e-14);
        }

        let c = CirculantCandidate4::new(Complex64::new(0.0, 0.5), 0.0).unwrap();
        assert_eq!(circulant_eigenvalues(&c), vec![0.0, 1.0, 1.0, 2.0]);

        // 2 alpha = 1 + sqrt(delta) with delta = alpha^2 forces alpha = 1.
        let c = CirculantCandidate4::new(Complex64::new(1.0, 0.0), 1.0).unwrap();
        assert!(circulant_eigenvalues(&c)[0].abs() < 1e-15);
    }

    #[test]
    fn circulant_first_row_and_shift() {
        let alpha = Complex64::new(0.2, 0.3);
        let m = build_circulant4(&CirculantCandidate4::new(alpha, 0.16).unwrap()).unwrap();
        assert_eq!(m.get(0, 1), alpha);
        assert_eq!(m.get(0, 2), real(0.4));
        assert_eq!(m.get(0, 3), alpha.conj());
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(m.get(i, j), m.get((i + 1) % 4, (j + 1) % 4));
            }
        }
    }

    #[test]
    fn circulant_boundary_is_singular() {
        let c = CirculantCandidate4::boundary(PI).unwrap();
        assert!((c.alpha - Complex64::new(0.5, 0.5)).norm() < 1e-15);
        assert!(circulant_eigenvalues(&c)[0].abs() < 1e-12);
        assert!(CirculantCandidate4::boundary(4.0).is_err());
    }

    #[test]
    fn realizability_examples() {
        assert!(is_realizable(&HermitianMatrix::identity(4).unwrap()));
        let m = HermitianMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 0.9]]).unwrap();
        assert!(!is_realizable(&m));
    }

    #[test]
    fn real_triple_examples() {
        let t = real_realization_triple(&OverlapTuple3::new(0.0, 0.0, 0.0).unwrap()).unwrap();
        let g = gram_matrix(&t).unwrap();
        assert!(g
            .entries()
            .iter()
            .zip(HermitianMatrix::identity(3).unwrap().entries())
            .all(|(a, b)| (a - b).norm() < 1e-15));

        let o = OverlapTuple3::new(0.5, 0.5, 0.5).unwrap();
        assert!((o.zero_bound() - (2.0 * 0.125f64.sqrt() - 0.5)).abs() < 1e-15);
        let t = real_realization_triple(&o).unwrap();
        assert!(t.is_real());
        for x in t.pairwise_overlaps() {
            assert!((x - 0.5).abs() < 1e-12);
        }

        let err = real_realization_triple(&OverlapTuple3::new(1.0, 0.0, 1.0).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NotRealizable { .. }));
    }

    #[test]
    fn real_triple_with_orthogonal_pair() {
        for (d12, d13, d23) in [(0.3, 0.0, 0.6), (0.0, 0.5, 0.5), (0.2, 0.7, 0.0)] {
            let o = OverlapTuple3::new(d12, d13, d23).unwrap();
            let t = real_realization_triple(&o).unwrap();
            assert!(t.is_real());
            let got = t.pairwise_overlaps();
            for (a, b) in got.iter().zip(o.as_array()) {
                assert!((a - b).abs() < 1e-12, "{got:?} vs {o:?}");
            }
        }
        assert!(real_realization_triple(&OverlapTuple3::new(0.0, 0.6, 0.6).unwrap()).is_err());
    }

    #[test]
    fn extract_examples() {
        let inv = extract_invariants3(&HermitianMatrix::identity(3).unwrap()).unwrap();
        assert!(inv.zero_cycle);
        assert_eq!(inv.phi, 0.0);
        assert_eq!(inv.overlaps.as_array(), [0.0; 3]);

        let t = StateTuple::new(vec![
            StateVector::zero(),
            StateVector::plus(),
            StateVector::minus_i(),
        ])
        .unwrap();
        let inv = extract_invariants3(&gram_matrix(&t).unwrap()).unwrap();
        assert!(!inv.zero_cycle);
        for x in inv.overlaps.as_array() {
            assert!((x - 0.5).abs() < 1e-15);
        }
        assert!((inv.phi - 7.0 * FRAC_PI_4).abs() < 1e-14);

        let c = c3(0.3, 0.6, 0.4, 2.0);
        let inv = extract_invariants3(&build_candidate3(&c).unwrap()).unwrap();
        assert!((inv.phi - 2.0).abs() < 1e-14);

        assert!(matches!(
            extract_invariants3(&HermitianMatrix::identity(2).unwrap()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn candidate_spec_json() {
        let spec: CandidateSpec =
            serde_json::from_str(r#"{"overlaps": [0.25, 0.25, 0.25], "phases": [0.0]}"#).unwrap();
        let AnyCandidate::Three(c) = spec.parse().unwrap() else {
            panic!("expected a three-state candidate");
        };
        assert_eq!(c.overlaps.d23, 0.25);

        let spec = CandidateSpec::from_candidate4(
            &Candidate4::new(counterexample_overlaps(), PI, 0.0, 0.0).unwrap(),
        );
        let text = serde_json::to_string(&spec).unwrap();
        let back: CandidateSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back.parse().unwrap(), spec.parse().unwrap());

        let bad = CandidateSpec {
            overlaps: vec![0.1; 5],
            phases: vec![],
        };
        assert!(bad.parse().is_err());
    }

    #[test]
    fn from_tuple_requires_matching_length() {
        let t = StateTuple::new(vec![StateVector::zero(), StateVector::one()]).unwrap();
        assert!(OverlapTuple3::from_tuple(&t).is_err());
        assert!(OverlapTuple6::from_tuple(&t).is_err());
        let t = StateTuple::new(vec![
            StateVector::zero(),
            StateVector::plus(),
            StateVector::one(),
        ])
        .unwrap();
        let o = OverlapTuple3::from_tuple(&t).unwrap();
        assert!(
            (o.d12 - overlap(&StateVector::zero(), &StateVector::plus()).unwrap()).abs() < 1e-15
        );
    }
}
