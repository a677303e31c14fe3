//! Imaginarity witnesses built from measured invariants.
//!
//! Four-state overlaps alone can certify set imaginarity: if no choice of
//! real signs on the off-diagonal entries of the candidate Gram matrix
//! gives a PSD matrix, no real-amplitude tuple reproduces the overlaps.
//! For three states overlaps never suffice, and the only witness is a
//! nonzero imaginary part of the third-order invariant.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gram::{build_candidate3, from_upper4, Candidate3, OverlapTuple3, OverlapTuple6};
use crate::linalg::{hermitian_eigenvalues, HermitianMatrix, DEFAULT_PSD_TOL};
use crate::states::{bargmann_invariant, StateTuple};

/// Tolerance used to merge equal minimum eigenvalues across variants.
pub const DEDUP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WitnessMode {
    /// First row fixed real and positive; signs on entries (2,3), (2,4), (3,4).
    #[serde(rename = "gauge3")]
    GaugeFixed3,
    /// Signs on all six off-diagonal entries.
    #[serde(rename = "full6")]
    Full6,
}

impl WitnessMode {
    pub fn variant_count(self) -> usize {
        match self {
            WitnessMode::GaugeFixed3 => 8,
            WitnessMode::Full6 => 64,
        }
    }
}

impl fmt::Display for WitnessMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WitnessMode::GaugeFixed3 => "gauge3",
            WitnessMode::Full6 => "full6",
        })
    }
}

impl FromStr for WitnessMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gauge3" => Ok(WitnessMode::GaugeFixed3),
            "full6" => Ok(WitnessMode::Full6),
            other => Err(Error::Parse(format!("unknown witness mode '{other}'"))),
        }
    }
}

/// Real phases (`+1` or `-1`) for the free off-diagonal entries.
///
/// `GaugeFixed3` holds signs for entries (2,3), (2,4), (3,4); `Full6` for
/// (1,2), (1,3), (1,4), (2,3), (2,4), (3,4).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignAssignment {
    pub signs: Vec<i8>,
    pub mode: WitnessMode,
}

impl SignAssignment {
    /// Variant `index`: bit `k` set means sign `k` is `-1`.
    pub fn from_index(mode: WitnessMode, index: usize) -> Self {
        let len = match mode {
            WitnessMode::GaugeFixed3 => 3,
            WitnessMode::Full6 => 6,
        };
        let signs = (0..len)
            .map(|k| if index >> k & 1 == 1 { -1 } else { 1 })
            .collect();
        Self { signs, mode }
    }

    pub fn all(mode: WitnessMode) -> Vec<Self> {
        (0..mode.variant_count())
            .map(|i| Self::from_index(mode, i))
            .collect()
    }

    /// Signs on all six upper-triangle entries.
    fn full_signs(&self) -> [f64; 6] {
        let mut out = [1.0; 6];
        let offset = 6 - self.signs.len();
        for (k, &s) in self.signs.iter().enumerate() {
            out[offset + k] = f64::from(s);
        }
        out
    }
}

/// The real candidate Gram matrix for one sign variant.
pub fn sign_variant_matrix(o: &OverlapTuple6, signs: &SignAssignment) -> Result<HermitianMatrix> {
    let moduli = o.as_array().map(f64::sqrt);
    let s = signs.full_signs();
    let upper: [Complex64; 6] = std::array::from_fn(|k| Complex64::new(s[k] * moduli[k], 0.0));
    from_upper4(&upper)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantResult {
    pub signs: Vec<i8>,
    pub min_eig: f64,
}

/// Verdict of an overlap witness with every variant's minimum eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    /// True iff every variant's minimum eigenvalue is below `-tolerance`.
    pub witnessed: bool,
    pub mode: WitnessMode,
    /// In variant-index order.
    pub variants: Vec<VariantResult>,
    pub tolerance: f64,
    /// `[re, im]` of the fourth-order invariant when the report came from states.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta4: Option<[f64; 2]>,
    /// Phase of `delta4` in `[0, 2pi)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta4_phase: Option<f64>,
}

impl WitnessReport {
    pub fn min_eigenvalues(&self) -> Vec<f64> {
        self.variants.iter().map(|v| v.min_eig).collect()
    }

    pub fn variant(&self, signs: &[i8]) -> Option<&VariantResult> {
        self.variants.iter().find(|v| v.signs == signs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !tol.is_finite() || tol < 0.0 {
        return Err(Error::OutOfRange {
            what: "tolerance",
            value: tol,
        });
    }
    Ok(())
}

/// Tests every real sign variant of the four-state candidate for PSD.
///
/// A positive verdict shows the overlaps have no real-amplitude
/// realization; whether they are quantum realizable at all is not checked.
pub fn witness_overlaps4(o: &OverlapTuple6, mode: WitnessMode, tol: f64) -> Result<WitnessReport> {
    check_tol(tol)?;
    let variants = SignAssignment::all(mode)
        .into_iter()
        .map(|signs| {
            let m = sign_variant_matrix(o, &signs)?;
            Ok(VariantResult {
                min_eig: hermitian_eigenvalues(&m).min_eigenvalue,
                signs: signs.signs,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let witnessed = variants.iter().all(|v| v.min_eig < -tol);
    Ok(WitnessReport {
        witnessed,
        mode,
        variants,
        tolerance: tol,
        delta4: None,
        delta4_phase: None,
    })
}

/// [`witness_overlaps4`] on the overlaps of a four-state tuple.
pub fn witness_states4(t: &StateTuple, mode: WitnessMode, tol: f64) -> Result<WitnessReport> {
    if t.len() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: t.len(),
        });
    }
    let mut report = witness_overlaps4(&OverlapTuple6::from_tuple(t)?, mode, tol)?;
    let delta4 = bargmann_invariant(t)?;
    report.delta4 = Some([delta4.value.re, delta4.value.im]);
    report.delta4_phase = Some(delta4.phase());
    Ok(report)
}

/// Third-order invariant witness: `|Im D123| > tol * max(1, |D123|)`.
pub fn witness_phase3(t: &StateTuple, tol: f64) -> Result<bool> {
    check_tol(tol)?;
    if t.len() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: t.len(),
        });
    }
    let d = bargmann_invariant(t)?.value;
    Ok(d.im.abs() > tol * d.norm().max(1.0))
}

/// Overlap-only witness for three states: both real variants (phase 0 and
/// pi) of the three-state candidate fail to be PSD.
///
/// Never fires on a realizable triple, since the zero-phase variant is
/// PSD whenever any phase is.
pub fn witness_overlaps3(o: &OverlapTuple3, tol: f64) -> Result<bool> {
    check_tol(tol)?;
    for phi in [0.0, std::f64::consts::PI] {
        let m = build_candidate3(&Candidate3::new(*o, phi)?)?;
        if hermitian_eigenvalues(&m).min_eigenvalue >= -tol {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn dedup_sorted(mut values: Vec<f64>) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(values.len());
    for v in values {
        match out.last() {
            Some(&last) if (v - last).abs() <= DEDUP_TOL => {}
            _ => out.push(v),
        }
    }
    out
}

/// Checks that fixing the gauge loses nothing: the 64-variant and
/// 8-variant runs agree on the verdict and on the set of minimum
/// eigenvalues.
pub fn gauge_independence_check(o: &OverlapTuple6, tol: f64) -> Result<bool> {
    let fixed = witness_overlaps4(o, WitnessMode::GaugeFixed3, tol)?;
    let full = witness_overlaps4(o, WitnessMode::Full6, tol)?;
    let a = dedup_sorted(fixed.min_eigenvalues());
    let b = dedup_sorted(full.min_eigenvalues());
    Ok(fixed.witnessed == full.witnessed
        && a.len() == b.len()
        && a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= DEDUP_TOL))
}

/// Default tolerance for the witnesses: the PSD tolerance.
pub const DEFAULT_WITNESS_TOL: f64 = DEFAULT_PSD_TOL;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::factor_states;
    use crate::rng::sample_rng;
    use crate::states::{apply_gauge, haar_random_tuple, StateVector};
    use std::f64::consts::PI;

    fn counterexample() -> OverlapTuple6 {
        let r6 = 6f64.sqrt();
        OverlapTuple6::new([0.5, 0.5, 0.75, 0.5, (4.0 + r6) / 8.0, (4.0 - r6) / 8.0]).unwrap()
    }

    fn counterexample_states() -> StateTuple {
        let psi4 = StateVector::new(vec![
            Complex64::new((PI / 6.0).cos(), 0.0),
            Complex64::from_polar((PI / 6.0).sin(), PI / 4.0),
        ])
        .unwrap();
        StateTuple::new(vec![
            StateVector::zero(),
            StateVector::plus(),
            StateVector::minus_i(),
            psi4,
        ])
        .unwrap()
    }

    #[test]
    fn sign_enumeration() {
        let all = SignAssignment::all(WitnessMode::GaugeFixed3);
        assert_eq!(all.len(), 8);
        assert_eq!(all[0].signs, vec![1, 1, 1]);
        assert_eq!(all[1].signs, vec![-1, 1, 1]);
        assert_eq!(all[7].signs, vec![-1, -1, -1]);
        let full = SignAssignment::all(WitnessMode::Full6);
        assert_eq!(full.len(), 64);
        assert_eq!(full[0b101000].signs, vec![1, 1, 1, -1, 1, -1]);
    }

    #[test]
    fn variant_matrix_layout() {
        let o = counterexample();
        let m = sign_variant_matrix(
            &o,
            &SignAssignment::from_index(WitnessMode::GaugeFixed3, 0b100),
        )
        .unwrap();
        assert_eq!(m.get(0, 3).re, 0.75f64.sqrt());
        assert_eq!(m.get(1, 2).re, 0.5f64.sqrt());
        assert_eq!(m.get(2, 3).re, -o.d34.sqrt());
        assert_eq!(m.get(3, 2).re, -o.d34.sqrt());
    }

    #[test]
    fn all_ones_not_witnessed() {
        let o = OverlapTuple6::new([1.0; 6]).unwrap();
        let r = witness_overlaps4(&o, WitnessMode::GaugeFixed3, DEFAULT_WITNESS_TOL).unwrap();
        assert!(!r.witnessed);
        assert!(r.variants[0].min_eig.abs() < 1e-12);
    }

    #[test]
    fn counterexample_list() {
        let r = witness_overlaps4(
            &counterexample(),
            WitnessMode::GaugeFixed3,
            DEFAULT_WITNESS_TOL,
        )
        .unwrap();
        assert!(r.witnessed);
        let expected: [([i8; 3], f64); 8] = [
            ([1, 1, 1], -0.044984),
            ([-1, 1, 1], -0.512315),
            ([1, -1, 1], -0.709002),
            ([1, 1, -1], -0.561292),
            ([-1, -1, 1], -0.837603),
            ([1, -1, -1], -0.704281),
            ([-1, 1, -1], -0.491359),
            ([-1, -1, -1], -1.17472),
        ];
        for (signs, want) in expected {
            let got = r.variant(&signs).unwrap().min_eig;
            assert!((got - want).abs() < 1e-5, "{signs:?}: {got} vs {want}");
        }
    }

    #[test]
    fn real_tuple_not_witnessed() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let t = StateTuple::new(vec![
            StateVector::zero(),
            StateVector::plus(),
            StateVector::one(),
            StateVector::from_real(&[h, -h]).unwrap(),
        ])
        .unwrap();
        let r = witness_states4(&t, WitnessMode::GaugeFixed3, DEFAULT_WITNESS_TOL).unwrap();
        assert!(!r.witnessed);
        let o = OverlapTuple6::from_tuple(&t).unwrap();
        assert!(
            !witness_overlaps4(&o, WitnessMode::Full6, DEFAULT_WITNESS_TOL)
                .unwrap()
                .witnessed
        );
    }

    #[test]
    fn counterexample_states_witnessed() {
        let t = counterexample_states();
        let r = witness_states4(&t, WitnessMode::GaugeFixed3, DEFAULT_WITNESS_TOL).unwrap();
        assert!(r.witnessed);
        assert!(r.delta4.is_some());
        let phase = r.delta4_phase.unwrap();
        assert!((0.0..std::f64::consts::TAU).contains(&phase));
        let direct = witness_overlaps4(
            &counterexample(),
            WitnessMode::GaugeFixed3,
            DEFAULT_WITNESS_TOL,
        )
        .unwrap();
        for (a, b) in r.min_eigenvalues().iter().zip(direct.min_eigenvalues()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn witness_states_needs_four() {
        let t = StateTuple::new(vec![
            StateVector::zero(),
            StateVector::plus(),
            StateVector::one(),
        ])
        .unwrap();
        assert!(matches!(
            witness_states4(&t, WitnessMode::GaugeFixed3, 1e-9),
            Err(Error::DimensionMismatch {
                expected: 4,
                found: 3
            })
        ));
        assert!(witness_overlaps4(&counterexample(), WitnessMode::Full6, -1.0).is_err());
    }

    #[test]
    fn phase3_examples() {
        let real_chain = StateTuple::new(vec![
            StateVector::zero(),
            StateVector::plus(),
            StateVector::one(),
        ])
        .unwrap();
        assert!(!witness_phase3(&real_chain, DEFAULT_WITNESS_TOL).unwrap());
        let t = StateTuple::new(vec![
            StateVector::zero(),
            StateVector::plus(),
            StateVector::minus_i(),
        ])
        .unwrap();
        assert!(witness_phase3(&t, DEFAULT_WITNESS_TOL).unwrap());
        let g = apply_gauge(&t, &[0.3, -2.0, 5.0]).unwrap();
        assert!(witness_phase3(&g, DEFAULT_WITNESS_TOL).unwrap());
        assert!(witness_phase3(&counterexample_states(), 1e-9).is_err());
    }

    #[test]
    fn gauge_independence_examples() {
        assert!(gauge_independence_check(&counterexample(), DEFAULT_WITNESS_TOL).unwrap());
        assert!(gauge_independence_check(
            &OverlapTuple6::new([0.0; 6]).unwrap(),
            DEFAULT_WITNESS_TOL
        )
        .unwrap());
        let full =
            witness_overlaps4(&counterexample(), WitnessMode::Full6, DEFAULT_WITNESS_TOL).unwrap();
        assert!(full.witnessed);
        assert_eq!(dedup_sorted(full.min_eigenvalues()).len(), 8);
    }

    #[test]
    fn gauge_independence_on_haar_overlaps() {
        for i in 0..1000 {
            let d = 2 + (i % 3) as usize;
            let t = haar_random_tuple(4, d, &mut sample_rng(31, i)).unwrap();
            let o = OverlapTuple6::from_tuple(&t).unwrap();
            assert!(
                gauge_independence_check(&o, DEFAULT_WITNESS_TOL).unwrap(),
                "sample {i}"
            );
        }
    }

    #[test]
    fn witnessed_overlaps_have_no_real_factorization() {
        let mut witnessed = 0;
        for i in 0..10_000u64 {
            let d = 2 + (i % 3) as usize;
            let t = haar_random_tuple(4, d, &mut sample_rng(77, i)).unwrap();
            let o = OverlapTuple6::from_tuple(&t).unwrap();
            let r = witness_overlaps4(&o, WitnessMode::GaugeFixed3, DEFAULT_WITNESS_TOL).unwrap();
            if !r.witnessed {
                continue;
            }
            witnessed += 1;
            for signs in SignAssignment::all(WitnessMode::GaugeFixed3) {
                let m = sign_variant_matrix(&o, &signs).unwrap();
                assert!(matches!(factor_states(&m), Err(Error::NotPsd { .. })));
            }
        }
        assert!(witnessed > 0);
    }

    #[test]
    fn overlaps3_never_witness() {
        for i in 0..10_000u64 {
            let d = 2 + (i % 3) as usize;
            let t = haar_random_tuple(3, d, &mut sample_rng(5, i)).unwrap();
            let o = OverlapTuple3::from_tuple(&t).unwrap();
            assert!(!witness_overlaps3(&o, DEFAULT_WITNESS_TOL).unwrap());
        }
    }

    #[test]
    fn report_json_shape() {
        let r = witness_overlaps4(&counterexample(), WitnessMode::GaugeFixed3, 1e-9).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["witnessed"], true);
        assert_eq!(v["mode"], "gauge3");
        assert_eq!(v["tolerance"], 1e-9);
        assert_eq!(v["variants"].as_array().unwrap().len(), 8);
        assert_eq!(v["variants"][1]["signs"], serde_json::json!([-1, 1, 1]));
        assert!(v.get("delta4").is_none());
    }
}
