//! Benchmark runners: Lorenz one-step prediction and CIFAR-10 auto-encoding.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use hyperelm_core::autoencoder::{autoencoder_trial, ImageRgb, PixelEncoding};
use hyperelm_core::elm::{match_hidden_neurons, tnp};
use hyperelm_core::lorenz::{lorenz_trial, Encoding, LorenzData, LorenzParams, LorenzSetup, Normalization};
use hyperelm_core::{builtin, AlgebraName};
use rayon::prelude::*;
use serde::Serialize;

use crate::data::write_png;
use crate::error::{Error, Result};
use crate::records::{AutoencoderRecord, LorenzRecord, WinCount};

/// Seed shared by every algebra in the `(l, trial)` cell of a run.
pub fn trial_seed(base: u64, l: usize, trial: usize) -> u64 {
    // splitmix64 finaliser
    let mut z = base ^ ((l as u64) << 32) ^ trial as u64;
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Usage(format!("cannot start {jobs} worker threads: {e}")))
}

pub type Progress<'a> = &'a (dyn Fn(&str) + Sync);

pub fn quiet(_: &str) {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum NormalizeMode {
    Raw,
    Minmax,
}

impl From<NormalizeMode> for Normalization {
    fn from(m: NormalizeMode) -> Self {
        match m {
            NormalizeMode::Raw => Normalization::Raw,
            NormalizeMode::Minmax => Normalization::MinMax,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LorenzExperiment {
    /// Catalog names; `real` selects the real-valued baseline.
    pub algebras: Vec<String>,
    pub l_min: usize,
    pub l_max: usize,
    pub trials: usize,
    pub seed: u64,
    pub sigma: f64,
    pub rho: f64,
    pub beta: f64,
    pub dt: f64,
    pub steps: usize,
    pub initial: [f64; 3],
    pub train_positions: usize,
    pub window: usize,
    pub normalize: NormalizeMode,
}

impl Default for LorenzExperiment {
    fn default() -> Self {
        let p = LorenzParams::default();
        let s = LorenzSetup::default();
        Self {
            algebras: AlgebraName::ALL
                .iter()
                .filter(|a| **a != AlgebraName::Complex)
                .map(|a| a.as_str().to_string())
                .collect(),
            l_min: 11,
            l_max: 35,
            trials: 100,
            seed: 42,
            sigma: p.sigma,
            rho: p.rho,
            beta: p.beta,
            dt: p.dt,
            steps: p.steps,
            initial: s.initial,
            train_positions: s.train_positions,
            window: s.window,
            normalize: NormalizeMode::Raw,
        }
    }
}

impl LorenzExperiment {
    pub fn setup(&self) -> LorenzSetup {
        LorenzSetup {
            params: LorenzParams {
                sigma: self.sigma,
                rho: self.rho,
                beta: self.beta,
                dt: self.dt,
                steps: self.steps,
            },
            initial: self.initial,
            train_positions: self.train_positions,
            window: self.window,
            normalization: self.normalize.into(),
        }
    }

    fn encodings(&self) -> Result<Vec<(String, Encoding)>> {
        self.algebras
            .iter()
            .map(|a| {
                let name: AlgebraName = a.parse()?;
                let enc = match name {
                    AlgebraName::Real => Encoding::Real,
                    other => Encoding::Hypercomplex(Arc::new(builtin(other))),
                };
                Ok((name.as_str().to_string(), enc))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LorenzResults {
    pub records: Vec<LorenzRecord>,
    pub wins: Vec<WinCount>,
}

pub fn run_lorenz_experiment(cfg: &LorenzExperiment, jobs: usize, progress: Progress) -> Result<LorenzResults> {
    if cfg.l_min == 0 || cfg.l_min > cfg.l_max {
        return Err(Error::Usage(format!("empty hidden-size range {}..={}", cfg.l_min, cfg.l_max)));
    }
    let encodings = cfg.encodings()?;
    let data = LorenzData::generate(&cfg.setup())?;
    let cells: Vec<(usize, usize)> = (cfg.l_min..=cfg.l_max)
        .flat_map(|l| (0..cfg.trials).map(move |t| (l, t)))
        .collect();
    let window = cfg.window;

    let per_cell: Vec<Vec<LorenzRecord>> = pool(jobs)?.install(|| {
        cells
            .par_iter()
            .map(|&(l, trial)| {
                let seed = trial_seed(cfg.seed, l, trial);
                let l_real = match_hidden_neurons(l);
                let rows = encodings
                    .iter()
                    .map(|(name, enc)| {
                        let hidden = if *enc == Encoding::Real { l_real } else { l };
                        let start = Instant::now();
                        let out = lorenz_trial(&data, enc, hidden, seed)?;
                        let train_ms = start.elapsed().as_secs_f64() * 1e3;
                        let dim = enc.algebra().dim();
                        Ok(LorenzRecord {
                            algebra: name.clone(),
                            l_hyper: l,
                            l_real_equiv: l_real,
                            tnp: tnp(enc.input_dim(window), hidden, enc.output_dim(), dim),
                            seed,
                            train_gain_db: out.train_gain_db,
                            test_gain_db: out.test_gain_db,
                            train_ms,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                progress(&format!("lorenz L={l} trial={trial} done"));
                Ok(rows)
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut wins: Vec<WinCount> = (cfg.l_min..=cfg.l_max)
        .flat_map(|l| {
            encodings.iter().map(move |(name, _)| WinCount {
                algebra: name.clone(),
                l_hyper: l,
                wins: 0,
                trials: cfg.trials,
            })
        })
        .collect();
    for rows in &per_cell {
        // the first algebra in the requested order wins ties
        let Some(best) = rows.iter().reduce(|a, b| if b.test_gain_db > a.test_gain_db { b } else { a }) else {
            continue;
        };
        if let Some(w) = wins.iter_mut().find(|w| w.algebra == best.algebra && w.l_hyper == best.l_hyper) {
            w.wins += 1;
        }
    }
    Ok(LorenzResults {
        records: per_cell.into_iter().flatten().collect(),
        wins,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AutoencoderExperiment {
    pub algebras: Vec<String>,
    pub l_real: usize,
    pub l_hyper: usize,
    pub alpha_real: f64,
    pub alpha_hyper: f64,
    pub train_images: usize,
    pub test_images: usize,
    pub trials: usize,
    pub seed: u64,
    pub data_dir: PathBuf,
}

impl Default for AutoencoderExperiment {
    fn default() -> Self {
        Self {
            algebras: AlgebraName::ALL
                .iter()
                .filter(|a| **a != AlgebraName::Complex)
                .map(|a| a.as_str().to_string())
                .collect(),
            l_real: 600,
            l_hyper: 450,
            alpha_real: PixelEncoding::Real.default_alpha(),
            alpha_hyper: 10.0 / 1024.0,
            train_images: 10_000,
            test_images: 10_000,
            trials: 1,
            seed: 42,
            data_dir: PathBuf::from("data/cifar-10-batches-bin"),
        }
    }
}

/// Where and how many decoded test reconstructions to write as PNG.
#[derive(Debug, Clone)]
pub struct ImageDump {
    pub dir: PathBuf,
    pub count: usize,
}

pub fn run_autoencoder_experiment(
    cfg: &AutoencoderExperiment,
    train: &[ImageRgb],
    test: &[ImageRgb],
    jobs: usize,
    dump: Option<&ImageDump>,
    progress: Progress,
) -> Result<Vec<AutoencoderRecord>> {
    let train = &train[..cfg.train_images.min(train.len())];
    let test = &test[..cfg.test_images.min(test.len())];
    if train.is_empty() || test.is_empty() {
        return Err(Error::Usage("no training or test images selected".into()));
    }
    let mut runs = Vec::new();
    for name in &cfg.algebras {
        let name: AlgebraName = name.parse()?;
        let (enc, hidden, alpha) = match name {
            AlgebraName::Real => (PixelEncoding::Real, cfg.l_real, cfg.alpha_real),
            other => (
                PixelEncoding::Hypercomplex(Arc::new(builtin(other))),
                cfg.l_hyper,
                cfg.alpha_hyper,
            ),
        };
        for trial in 0..cfg.trials {
            runs.push((name, enc.clone(), hidden, alpha, trial_seed(cfg.seed, 0, trial)));
        }
    }
    if let Some(d) = dump {
        std::fs::create_dir_all(&d.dir).map_err(|e| Error::io(&d.dir, e))?;
        for (i, img) in test.iter().take(d.count).enumerate() {
            write_png(img, &d.dir.join(format!("original_{i:04}.png")))?;
        }
    }

    let rows: Vec<Vec<AutoencoderRecord>> = pool(jobs)?.install(|| {
        runs.par_iter()
            .map(|(name, enc, hidden, alpha, seed)| {
                let start = Instant::now();
                let out = autoencoder_trial(train, test, enc, *hidden, *alpha, *seed)?;
                let train_ms = start.elapsed().as_secs_f64() * 1e3;
                if let Some(d) = dump {
                    let probe = &test[..d.count.min(test.len())];
                    let back = enc.decode(&out.model.predict(&enc.encode(probe)?)?)?;
                    for (i, img) in back.iter().enumerate() {
                        write_png(img, &d.dir.join(format!("{name}_{seed}_{i:04}.png")))?;
                    }
                }
                progress(&format!(
                    "cifar {name} seed={seed} test psnr {:.2} dB",
                    out.test.psnr.mean
                ));
                let row = |split: &str, q: &hyperelm_core::autoencoder::Quality| AutoencoderRecord {
                    algebra: name.as_str().to_string(),
                    hidden: *hidden,
                    split: split.to_string(),
                    psnr_mean: q.psnr.mean,
                    psnr_std: q.psnr.std,
                    ssim_mean: q.ssim.mean,
                    ssim_std: q.ssim.std,
                    tnp: enc.tnp(*hidden),
                    train_ms,
                    seed: *seed,
                };
                Ok(vec![row("train", &out.train), row("test", &out.test)])
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(rows.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_spread_and_stable() {
        assert_eq!(trial_seed(42, 20, 3), trial_seed(42, 20, 3));
        let mut seen: Vec<u64> = (11..=35).flat_map(|l| (0..100).map(move |t| trial_seed(42, l, t))).collect();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), 25 * 100);
    }

    #[test]
    fn one_trial_per_hidden_size() {
        let cfg = LorenzExperiment {
            algebras: vec!["quaternion".into()],
            l_min: 4,
            l_max: 6,
            trials: 1,
            steps: 500,
            ..LorenzExperiment::default()
        };
        let res = run_lorenz_experiment(&cfg, 2, &quiet).unwrap();
        assert_eq!(res.records.len(), 3);
        assert!(res.wins.iter().all(|w| w.wins == 1));
        let again = run_lorenz_experiment(&cfg, 1, &quiet).unwrap();
        let strip = |r: &LorenzResults| {
            r.records
                .iter()
                .map(|x| (x.algebra.clone(), x.l_hyper, x.seed, x.test_gain_db.to_bits()))
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(&res), strip(&again));
    }

    #[test]
    fn empty_range_is_rejected() {
        let cfg = LorenzExperiment {
            l_min: 35,
            l_max: 11,
            ..LorenzExperiment::default()
        };
        assert!(matches!(run_lorenz_experiment(&cfg, 1, &quiet), Err(Error::Usage(_))));
    }
}
