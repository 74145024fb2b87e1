//! Result rows and their CSV encoding.

use std::cmp::Ordering;
use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Shortest round-tripping decimal; infinities become `inf` and `-inf`.
pub fn format_metric(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else if v.is_nan() {
        "nan".into()
    } else {
        v.to_string()
    }
}

fn metric<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str(&format_metric(*v))
    }
}

/// A row type with a fixed column layout.
pub trait CsvRow {
    const HEADER: &'static [&'static str];

    fn cells(&self) -> Vec<String>;

    /// Algebra, then layer size, then seed.
    fn order(&self, other: &Self) -> Ordering;
}

/// One Lorenz network.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LorenzRecord {
    pub algebra: String,
    pub l_hyper: usize,
    pub l_real_equiv: usize,
    pub tnp: u64,
    pub seed: u64,
    #[serde(serialize_with = "metric")]
    pub train_gain_db: f64,
    #[serde(serialize_with = "metric")]
    pub test_gain_db: f64,
    pub train_ms: f64,
}

impl CsvRow for LorenzRecord {
    const HEADER: &'static [&'static str] = &[
        "algebra",
        "L_hyper",
        "L_real_equiv",
        "tnp",
        "seed",
        "train_gain_db",
        "test_gain_db",
        "train_ms",
    ];

    fn cells(&self) -> Vec<String> {
        vec![
            self.algebra.clone(),
            self.l_hyper.to_string(),
            self.l_real_equiv.to_string(),
            self.tnp.to_string(),
            self.seed.to_string(),
            format_metric(self.train_gain_db),
            format_metric(self.test_gain_db),
            format!("{:.3}", self.train_ms),
        ]
    }

    fn order(&self, other: &Self) -> Ordering {
        (&self.algebra, self.l_hyper, self.seed).cmp(&(&other.algebra, other.l_hyper, other.seed))
    }
}

/// Reconstruction quality of one auto-encoder on one split.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AutoencoderRecord {
    pub algebra: String,
    pub hidden: usize,
    pub split: String,
    #[serde(serialize_with = "metric")]
    pub psnr_mean: f64,
    #[serde(serialize_with = "metric")]
    pub psnr_std: f64,
    #[serde(serialize_with = "metric")]
    pub ssim_mean: f64,
    #[serde(serialize_with = "metric")]
    pub ssim_std: f64,
    pub tnp: u64,
    pub train_ms: f64,
    pub seed: u64,
}

impl CsvRow for AutoencoderRecord {
    const HEADER: &'static [&'static str] = &[
        "algebra",
        "split",
        "psnr_mean",
        "psnr_std",
        "ssim_mean",
        "ssim_std",
        "tnp",
        "train_ms",
        "seed",
    ];

    fn cells(&self) -> Vec<String> {
        vec![
            self.algebra.clone(),
            self.split.clone(),
            format_metric(self.psnr_mean),
            format_metric(self.psnr_std),
            format_metric(self.ssim_mean),
            format_metric(self.ssim_std),
            self.tnp.to_string(),
            format!("{:.3}", self.train_ms),
            self.seed.to_string(),
        ]
    }

    fn order(&self, other: &Self) -> Ordering {
        (&self.algebra, self.hidden, self.seed, &self.split).cmp(&(
            &other.algebra,
            other.hidden,
            other.seed,
            &other.split,
        ))
    }
}

/// How often an algebra scored the best test gain among the networks of one
/// `(L, trial)` cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WinCount {
    pub algebra: String,
    pub l_hyper: usize,
    pub wins: usize,
    pub trials: usize,
}

impl CsvRow for WinCount {
    const HEADER: &'static [&'static str] = &["algebra", "L_hyper", "wins", "trials"];

    fn cells(&self) -> Vec<String> {
        vec![
            self.algebra.clone(),
            self.l_hyper.to_string(),
            self.wins.to_string(),
            self.trials.to_string(),
        ]
    }

    fn order(&self, other: &Self) -> Ordering {
        (&self.algebra, self.l_hyper).cmp(&(&other.algebra, other.l_hyper))
    }
}

/// Writes a header and the records in sorted order.
pub fn emit_csv<R: CsvRow>(records: &[R], out: &mut dyn Write) -> Result<()> {
    let mut sorted: Vec<&R> = records.iter().collect();
    sorted.sort_by(|a, b| a.order(b));
    let here = Path::new("-");
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(R::HEADER).map_err(|e| Error::csv(here, e))?;
    for r in sorted {
        writer.write_record(r.cells()).map_err(|e| Error::csv(here, e))?;
    }
    writer.flush().map_err(|e| Error::io(here, e))
}

pub fn emit_csv_file<R: CsvRow>(records: &[R], path: &Path) -> Result<()> {
    let mut file = File::create(path).map_err(|e| Error::io(path, e))?;
    emit_csv(records, &mut file).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}
