//! Monte Carlo experiments over Haar-random tuples and the writers behind
//! the command-line tool.
//!
//! Sample `i` of an ensemble always draws from `sample_rng(seed, i)`, and
//! results are gathered in sample order, so outputs are byte-identical for
//! any worker count.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::gram::OverlapTuple6;
use crate::regions::{
    max_imag_on_boundary, min_real_on_boundary, BoundaryCurve, Region, RegionPoint,
};
use crate::rng::{sample_rng, RNG_ALGORITHM};
use crate::states::{bargmann_invariant, haar_random_tuple};
use crate::witness::{witness_overlaps4, WitnessMode, DEFAULT_WITNESS_TOL};

pub const TOOL_NAME: &str = "bargmann";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Desk-scale ensemble size.
pub const DEFAULT_SAMPLES: usize = 100_000;

/// Half-width of the band reported as "boundary" by [`member`].
pub const BOUNDARY_BAND: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub workers: usize,
}

impl ExperimentConfig {
    pub fn new(dim: usize, samples: usize, seed: u64, workers: usize) -> Result<Self> {
        let config = Self {
            dim,
            samples,
            seed,
            workers,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < 1 {
            return Err(Error::InvalidConfig("samples must be at least 1".into()));
        }
        if self.dim < 2 {
            return Err(Error::InvalidConfig("dim must be at least 2".into()));
        }
        if self.workers < 1 {
            return Err(Error::InvalidConfig("workers must be at least 1".into()));
        }
        Ok(())
    }

    /// Evaluates `f` on every sample index on a pool of `workers` threads,
    /// returning results in index order.
    fn map_samples<T, F>(&self, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(u64) -> Result<T> + Sync + Send,
    {
        self.validate()?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
        pool.install(|| (0..self.samples as u64).into_par_iter().map(f).collect())
    }
}

/// Bargmann invariants of order `order` (3 or 4) of Haar-random tuples.
pub fn run_scatter(config: &ExperimentConfig, order: usize) -> Result<Vec<Complex64>> {
    if order != 3 && order != 4 {
        return Err(Error::InvalidConfig(format!(
            "order must be 3 or 4, got {order}"
        )));
    }
    let (dim, seed) = (config.dim, config.seed);
    config.map_samples(|i| {
        let t = haar_random_tuple(order, dim, &mut sample_rng(seed, i))?;
        Ok(bargmann_invariant(&t)?.value)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FractionResult {
    pub dim: usize,
    pub samples: usize,
    pub witnessed_count: usize,
    pub fraction: f64,
    pub seed: u64,
}

impl FractionResult {
    /// Binomial standard error of `fraction`.
    pub fn standard_error(&self) -> f64 {
        (self.fraction * (1.0 - self.fraction) / self.samples as f64).sqrt()
    }
}

/// Fraction of Haar-random four-tuples whose overlaps alone witness
/// imaginarity (gauge-fixed eight-variant test).
pub fn run_fraction(config: &ExperimentConfig) -> Result<FractionResult> {
    let (dim, seed) = (config.dim, config.seed);
    let hits = config.map_samples(|i| {
        let t = haar_random_tuple(4, dim, &mut sample_rng(seed, i))?;
        let o = OverlapTuple6::from_tuple(&t)?;
        Ok(witness_overlaps4(&o, WitnessMode::GaugeFixed3, DEFAULT_WITNESS_TOL)?.witnessed)
    })?;
    let witnessed_count = hits.into_iter().filter(|&w| w).count();
    Ok(FractionResult {
        dim,
        samples: config.samples,
        witnessed_count,
        fraction: witnessed_count as f64 / config.samples as f64,
        seed,
    })
}

pub fn run_boundary(region: Region, samples: usize) -> Result<BoundaryCurve> {
    BoundaryCurve::sample(region, samples)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Boundary,
    Outside,
}

impl Membership {
    pub fn as_str(self) -> &'static str {
        match self {
            Membership::Inside => "inside",
            Membership::Boundary => "boundary",
            Membership::Outside => "outside",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemberVerdict {
    pub point: RegionPoint,
    pub membership: Membership,
}

/// Classifies `re + i im` against a region, with a `BOUNDARY_BAND` band
/// around the boundary.
pub fn member(region: Region, re: f64, im: f64) -> Result<MemberVerdict> {
    if !re.is_finite() || !im.is_finite() {
        return Err(Error::NonFinite);
    }
    let point = RegionPoint::new(region, Complex64::new(re, im))?;
    let membership = if point.boundary_distance.abs() <= BOUNDARY_BAND {
        Membership::Boundary
    } else if point.boundary_distance > 0.0 {
        Membership::Inside
    } else {
        Membership::Outside
    };
    Ok(MemberVerdict { point, membership })
}

/// `x` rounded to 12 significant digits with a `.` decimal point.
/// Magnitudes outside `[1e-4, 1e12)` use exponent notation.
pub fn format_sig12(x: f64) -> String {
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    let a = rounded.abs();
    if rounded == 0.0 {
        "0".to_string()
    } else if !(1e-4..1e12).contains(&a) {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}

fn write_csv_metadata<W: Write>(w: &mut W, fields: &[(&str, String)]) -> Result<()> {
    for (key, value) in fields {
        writeln!(w, "# {key}: {value}")?;
    }
    Ok(())
}

fn ensemble_metadata(config: &ExperimentConfig) -> Vec<(&'static str, String)> {
    vec![
        ("tool", format!("{TOOL_NAME} {TOOL_VERSION}")),
        ("rng", RNG_ALGORITHM.to_string()),
        ("seed", config.seed.to_string()),
        ("dim", config.dim.to_string()),
        ("samples", config.samples.to_string()),
    ]
}

pub fn write_scatter<W: Write>(
    w: &mut W,
    config: &ExperimentConfig,
    order: usize,
    points: &[Complex64],
    format: OutputFormat,
) -> Result<()> {
    let mut meta = ensemble_metadata(config);
    meta.push(("order", order.to_string()));
    match format {
        OutputFormat::Csv => {
            write_csv_metadata(w, &meta)?;
            writeln!(w, "re,im")?;
            for z in points {
                writeln!(w, "{},{}", format_sig12(z.re), format_sig12(z.im))?;
            }
        }
        OutputFormat::Json => {
            write!(w, "{{\"metadata\": {}, \"points\": [", json_metadata(&meta))?;
            for (k, z) in points.iter().enumerate() {
                if k > 0 {
                    write!(w, ", ")?;
                }
                write!(w, "[{}, {}]", format_sig12(z.re), format_sig12(z.im))?;
            }
            writeln!(w, "]}}")?;
        }
    }
    Ok(())
}

fn json_metadata(fields: &[(&str, String)]) -> String {
    let map: serde_json::Map<String, serde_json::Value> = fields
        .iter()
        .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.clone())))
        .collect();
    serde_json::Value::Object(map).to_string()
}

pub fn write_fraction<W: Write>(
    w: &mut W,
    result: &FractionResult,
    format: OutputFormat,
) -> Result<()> {
    let config = ExperimentConfig {
        dim: result.dim,
        samples: result.samples,
        seed: result.seed,
        workers: 1,
    };
    let meta = ensemble_metadata(&config);
    match format {
        OutputFormat::Csv => {
            write_csv_metadata(w, &meta)?;
            writeln!(w, "dim,samples,witnessed,fraction,std_error")?;
            writeln!(
                w,
                "{},{},{},{},{}",
                result.dim,
                result.samples,
                result.witnessed_count,
                format_sig12(result.fraction),
                format_sig12(result.standard_error())
            )?;
        }
        OutputFormat::Json => {
            let value = json!({
                "metadata": serde_json::from_str::<serde_json::Value>(&json_metadata(&meta))?,
                "dim": result.dim,
                "samples": result.samples,
                "witnessed": result.witnessed_count,
                "fraction": result.fraction,
                "std_error": result.standard_error(),
            });
            writeln!(w, "{}", serde_json::to_string_pretty(&value)?)?;
        }
    }
    Ok(())
}

/// Boundary CSV with columns `phi,re,im`. The metadata header records the
/// numerically located extrema of the curve.
pub fn write_boundary_csv<W: Write>(w: &mut W, curve: &BoundaryCurve) -> Result<()> {
    let min_re = min_real_on_boundary(curve.region);
    let max_im = max_imag_on_boundary(curve.region);
    write_csv_metadata(
        w,
        &[
            ("tool", format!("{TOOL_NAME} {TOOL_VERSION}")),
            ("region", curve.region.to_string()),
            ("samples", curve.samples.len().to_string()),
            (
                "min_re",
                format!(
                    "{} at phi={}",
                    format_sig12(min_re.value.re),
                    format_sig12(min_re.phi)
                ),
            ),
            (
                "max_im",
                format!(
                    "{} at phi={}",
                    format_sig12(max_im.value.im),
                    format_sig12(max_im.phi)
                ),
            ),
        ],
    )?;
    writeln!(w, "phi,re,im")?;
    for s in &curve.samples {
        writeln!(
            w,
            "{},{},{}",
            format_sig12(s.phi),
            format_sig12(s.value.re),
            format_sig12(s.value.im)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::b3_constraint;
    use std::f64::consts::PI;

    #[test]
    fn config_validation() {
        assert!(ExperimentConfig::new(2, 0, 1, 1).is_err());
        assert!(ExperimentConfig::new(1, 10, 1, 1).is_err());
        assert!(ExperimentConfig::new(2, 10, 1, 0).is_err());
        assert!(ExperimentConfig::new(2, 10, 1, 1).is_ok());
    }

    #[test]
    fn scatter_rejects_bad_order() {
        let config = ExperimentConfig::new(2, 10, 1, 1).unwrap();
        assert!(run_scatter(&config, 5).is_err());
    }

    #[test]
    fn scatter_order3_inside_b3() {
        for dim in [2, 3, 4] {
            let config = ExperimentConfig::new(dim, 20_000, 11, 4).unwrap();
            for z in run_scatter(&config, 3).unwrap() {
                assert!(b3_constraint(z).unwrap() >= -1e-9, "{z}");
            }
        }
    }

    #[test]
    fn scatter_is_worker_independent() {
        let points: Vec<Vec<Complex64>> = [1, 2, 8]
            .iter()
            .map(|&w| run_scatter(&ExperimentConfig::new(3, 2000, 5, w).unwrap(), 4).unwrap())
            .collect();
        assert_eq!(points[0], points[1]);
        assert_eq!(points[0], points[2]);
    }

    #[test]
    fn boundary_examples() {
        let curve = run_boundary(Region::B3, 4).unwrap();
        let third = (1.0f64 / 3.0).powf(1.5);
        let want = [1.0, third, 0.125, third];
        for (s, r) in curve.samples.iter().zip(want) {
            assert!((s.value.norm() - r).abs() < 1e-14);
        }

        let curve = run_boundary(Region::B4Circ, 2).unwrap();
        assert_eq!(curve.samples[0].phi, 0.0);
        assert_eq!(curve.samples[0].value, Complex64::new(1.0, 0.0));
        assert_eq!(curve.samples[1].phi, PI);
        assert_eq!(curve.samples[1].value.re, -0.25);

        assert!(matches!(
            run_boundary(Region::B3, 1),
            Err(Error::TooFewSamples { .. })
        ));
    }

    #[test]
    fn boundary_csv() {
        let mut out = Vec::new();
        write_boundary_csv(&mut out, &run_boundary(Region::B4Circ, 2).unwrap()).unwrap();
        let text = String::from_utf8(out).unwrap();
        let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(rows[0], "phi,re,im");
        assert_eq!(rows[1], "0,1,0");
        assert!(rows[2].starts_with("3.14159265359,-0.25,"));
        assert!(text.contains("# max_im: 0.38490017946 at phi=1.04719"));
    }

    #[test]
    fn member_examples() {
        assert_eq!(
            member(Region::B3, -0.125, 0.0).unwrap().membership,
            Membership::Boundary
        );
        assert_eq!(
            member(Region::B3, 0.0, 0.0).unwrap().membership,
            Membership::Inside
        );
        let v = member(Region::B3, 0.0, 0.2).unwrap();
        assert_eq!(v.membership, Membership::Outside);
        assert!(v.point.boundary_distance < 0.0);
        assert_eq!(
            member(Region::B4Circ, -0.25, 0.0).unwrap().membership,
            Membership::Boundary
        );
        assert_eq!(
            member(Region::B4Circ, -0.26, 0.0).unwrap().membership,
            Membership::Outside
        );
        assert!(matches!(
            member(Region::B3, 1.5, 0.0),
            Err(Error::OutOfRange { .. })
        ));
        assert!(member(Region::B3, f64::NAN, 0.0).is_err());
    }

    #[test]
    fn sig12_formatting() {
        assert_eq!(format_sig12(0.125), "0.125");
        assert_eq!(format_sig12(-0.0), "0");
        assert_eq!(format_sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig12(PI), "3.14159265359");
        assert_eq!(format_sig12(-2.5e-7), "-2.5e-7");
        assert_eq!(format_sig12(0.00025), "0.00025");
        assert_eq!(
            "3.06161699787e-17".parse::<f64>().unwrap(),
            3.06161699787e-17
        );
        assert_eq!(format_sig12(3.061616997868383e-17), "3.06161699787e-17");
    }

    #[test]
    fn fraction_counts_are_consistent() {
        let r = run_fraction(&ExperimentConfig::new(2, 2000, 3, 2).unwrap()).unwrap();
        assert_eq!(r.samples, 2000);
        assert_eq!(r.fraction, r.witnessed_count as f64 / 2000.0);
        assert!(r.witnessed_count > 0 && r.witnessed_count < 2000);
    }

    #[test]
    fn fraction_writers() {
        let r = FractionResult {
            dim: 2,
            samples: 4,
            witnessed_count: 1,
            fraction: 0.25,
            seed: 9,
        };
        let mut csv = Vec::new();
        write_fraction(&mut csv, &r, OutputFormat::Csv).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        assert!(csv.contains("# seed: 9"));
        assert!(csv.contains("\n2,4,1,0.25,"));

        let mut js = Vec::new();
        write_fraction(&mut js, &r, OutputFormat::Json).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&js).unwrap();
        assert_eq!(v["witnessed"], 1);
        assert_eq!(v["metadata"]["rng"], RNG_ALGORITHM);
    }

    #[test]
    fn scatter_writers() {
        let config = ExperimentConfig::new(2, 3, 1, 1).unwrap();
        let points = run_scatter(&config, 3).unwrap();
        let mut js = Vec::new();
        write_scatter(&mut js, &config, 3, &points, OutputFormat::Json).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&js).unwrap();
        assert_eq!(v["points"].as_array().unwrap().len(), 3);
        assert_eq!(v["metadata"]["order"], "3");
        assert_eq!(v["metadata"]["tool"], format!("bargmann {TOOL_VERSION}"));

        let mut csv = Vec::new();
        write_scatter(&mut csv, &config, 3, &points, OutputFormat::Csv).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 4);
    }
}
