//! CIFAR-10 images, pixel encodings, image-quality metrics, and the
//! auto-encoding comparison built on them.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::algebra::AlgebraSpec;
use crate::elm::{ElmConfig, ElmModel};
use crate::error::{Error, Result};
use crate::realification::HMatrix;

pub const SIDE: usize = 32;
pub const PIXELS: usize = SIDE * SIDE;
pub const IMAGE_BYTES: usize = 3 * PIXELS;
pub const RECORD_BYTES: usize = IMAGE_BYTES + 1;

/// A 32x32 RGB image stored as three 1024-byte planes, R then G then B.
#[derive(Clone, PartialEq, Eq)]
pub struct ImageRgb {
    data: [u8; IMAGE_BYTES],
}

impl core::fmt::Debug for ImageRgb {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "ImageRgb({:?}..)", &self.data[..4])
    }
}

impl ImageRgb {
    pub fn from_planar(bytes: &[u8]) -> Result<Self> {
        let data: [u8; IMAGE_BYTES] = bytes
            .try_into()
            .map_err(|_| Error::Format(format!("expected {IMAGE_BYTES} image bytes, got {}", bytes.len())))?;
        Ok(Self { data })
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut data = [0u8; IMAGE_BYTES];
        for (i, v) in data.iter_mut().enumerate() {
            *v = f(i / PIXELS, i % PIXELS);
        }
        Self { data }
    }

    pub fn filled(v: u8) -> Self {
        Self {
            data: [v; IMAGE_BYTES],
        }
    }

    pub fn planar(&self) -> &[u8] {
        &self.data
    }

    pub fn channel(&self, c: usize) -> &[u8] {
        &self.data[c * PIXELS..(c + 1) * PIXELS]
    }

    /// Byte of channel `c` at row `y`, column `x`.
    pub fn get(&self, c: usize, y: usize, x: usize) -> u8 {
        self.data[c * PIXELS + y * SIDE + x]
    }

    /// Interleaved RGB bytes, row by row.
    pub fn interleaved(&self) -> Vec<u8> {
        (0..PIXELS).flat_map(|p| (0..3).map(move |c| self.data[c * PIXELS + p])).collect()
    }
}

/// Parses concatenated CIFAR-10 binary records, discarding the label byte.
pub fn parse_cifar(bytes: &[u8]) -> Result<Vec<ImageRgb>> {
    if bytes.len() % RECORD_BYTES != 0 {
        return Err(Error::Format(format!(
            "{} bytes is not a whole number of {RECORD_BYTES}-byte records",
            bytes.len()
        )));
    }
    bytes
        .chunks_exact(RECORD_BYTES)
        .map(|r| ImageRgb::from_planar(&r[1..]))
        .collect()
}

fn to_unit(v: u8) -> f64 {
    2.0 * v as f64 / 255.0 - 1.0
}

/// Inverse of the `[0, 255] -> [-1, 1]` map, clamped, rounding half up.
pub fn to_byte(c: f64) -> u8 {
    let v = libm::floor((c.clamp(-1.0, 1.0) + 1.0) * 127.5 + 0.5);
    if v.is_nan() {
        0
    } else {
        v.min(255.0) as u8
    }
}

fn check_dim4(algebra: &AlgebraSpec) -> Result<()> {
    if algebra.dim() != 4 {
        return Err(Error::WrongAlgebraDim {
            name: algebra.name().into(),
            dim: algebra.dim(),
            expected: 4,
        });
    }
    Ok(())
}

/// One row of 1024 entries `r i + g j + b k` with zero real part.
pub fn encode_hyper(images: &[ImageRgb], algebra: Arc<AlgebraSpec>) -> Result<HMatrix> {
    check_dim4(&algebra)?;
    Ok(HMatrix::from_fn(algebra, images.len(), PIXELS, |m, p, e| {
        e[0] = 0.0;
        for c in 0..3 {
            e[c + 1] = to_unit(images[m].data[c * PIXELS + p]);
        }
    }))
}

/// One row of 3072 reals, R plane then G then B.
pub fn encode_real(images: &[ImageRgb]) -> HMatrix {
    HMatrix::from_fn(Arc::new(AlgebraSpec::reals()), images.len(), IMAGE_BYTES, |m, i, e| {
        e[0] = to_unit(images[m].data[i]);
    })
}

pub fn decode_hyper(encoded: &HMatrix) -> Result<Vec<ImageRgb>> {
    if encoded.dim() != 4 || encoded.cols() != PIXELS {
        return Err(Error::ShapeMismatch(format!(
            "expected dimension-4 entries in {PIXELS} columns, got dimension {} and {} columns",
            encoded.dim(),
            encoded.cols()
        )));
    }
    Ok((0..encoded.rows())
        .map(|m| {
            let row = encoded.row_coeffs(m);
            ImageRgb::from_fn(|c, p| to_byte(row[4 * p + c + 1]))
        })
        .collect())
}

pub fn decode_real(encoded: &HMatrix) -> Result<Vec<ImageRgb>> {
    if encoded.dim() != 1 || encoded.cols() != IMAGE_BYTES {
        return Err(Error::ShapeMismatch(format!(
            "expected {IMAGE_BYTES} real columns, got dimension {} and {} columns",
            encoded.dim(),
            encoded.cols()
        )));
    }
    Ok((0..encoded.rows())
        .map(|m| {
            let row = encoded.row_coeffs(m);
            ImageRgb::from_fn(|c, p| to_byte(row[c * PIXELS + p]))
        })
        .collect())
}

/// `10 log10(255^2 / MSE)` over all 3072 bytes; `+inf` for identical images.
pub fn psnr(a: &ImageRgb, b: &ImageRgb) -> f64 {
    let sse: f64 = a
        .data
        .iter()
        .zip(b.data.iter())
        .map(|(&x, &y)| {
            let d = x as f64 - y as f64;
            d * d
        })
        .sum();
    if sse == 0.0 {
        return f64::INFINITY;
    }
    10.0 * libm::log10(255.0 * 255.0 / (sse / IMAGE_BYTES as f64))
}

const WIN: usize = 11;
const SIGMA: f64 = 1.5;
const OUT: usize = SIDE - WIN + 1;

fn gaussian_kernel() -> [f64; WIN] {
    let r = (WIN / 2) as f64;
    let mut k: [f64; WIN] = core::array::from_fn(|i| {
        let d = i as f64 - r;
        libm::exp(-d * d / (2.0 * SIGMA * SIGMA))
    });
    let s: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= s);
    k
}

/// Valid-region separable Gaussian filter of a 32x32 plane.
fn filter(plane: &[f64], k: &[f64; WIN]) -> [f64; OUT * OUT] {
    let mut rows = [0.0; SIDE * OUT];
    for y in 0..SIDE {
        for x in 0..OUT {
            rows[y * OUT + x] = (0..WIN).map(|t| k[t] * plane[y * SIDE + x + t]).sum();
        }
    }
    let mut out = [0.0; OUT * OUT];
    for y in 0..OUT {
        for x in 0..OUT {
            out[y * OUT + x] = (0..WIN).map(|t| k[t] * rows[(y + t) * OUT + x]).sum();
        }
    }
    out
}

/// Mean structural similarity with an 11x11 Gaussian window (sigma 1.5),
/// K1 = 0.01, K2 = 0.03 and range 255, over valid windows, averaged over
/// the three channels.
pub fn ssim(a: &ImageRgb, b: &ImageRgb) -> f64 {
    let c1 = (0.01 * 255.0) * (0.01 * 255.0);
    let c2 = (0.03 * 255.0) * (0.03 * 255.0);
    let k = gaussian_kernel();
    let mut total = 0.0;
    for c in 0..3 {
        let x: Vec<f64> = a.channel(c).iter().map(|&v| v as f64).collect();
        let y: Vec<f64> = b.channel(c).iter().map(|&v| v as f64).collect();
        let prod = |p: &[f64], q: &[f64]| -> Vec<f64> { p.iter().zip(q).map(|(u, v)| u * v).collect() };
        let mx = filter(&x, &k);
        let my = filter(&y, &k);
        let mxx = filter(&prod(&x, &x), &k);
        let myy = filter(&prod(&y, &y), &k);
        let mxy = filter(&prod(&x, &y), &k);
        let mut s = 0.0;
        for i in 0..OUT * OUT {
            let vx = mxx[i] - mx[i] * mx[i];
            let vy = myy[i] - my[i] * my[i];
            let cxy = mxy[i] - mx[i] * my[i];
            s += ((2.0 * mx[i] * my[i] + c1) * (2.0 * cxy + c2))
                / ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
        }
        total += s / (OUT * OUT) as f64;
    }
    total / 3.0
}

/// Parameter count `dim * 2 * D * L` used to match auto-encoder sizes.
pub fn autoencoder_tnp(input_dim: usize, hidden: usize, algebra_dim: usize) -> u64 {
    2 * (algebra_dim as u64) * (input_dim as u64) * (hidden as u64)
}

/// Mean and population standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub mean: f64,
    pub std: f64,
}

impl Stats {
    pub fn of(values: &[f64]) -> Stats {
        if values.is_empty() {
            return Stats {
                mean: f64::NAN,
                std: f64::NAN,
            };
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        Stats {
            mean,
            std: libm::sqrt(var),
        }
    }
}

/// Pixel encoding used by an auto-encoder.
#[derive(Debug, Clone, PartialEq)]
pub enum PixelEncoding {
    Real,
    Hypercomplex(Arc<AlgebraSpec>),
}

impl PixelEncoding {
    pub fn algebra(&self) -> Arc<AlgebraSpec> {
        match self {
            PixelEncoding::Real => Arc::new(AlgebraSpec::reals()),
            PixelEncoding::Hypercomplex(a) => a.clone(),
        }
    }

    pub fn input_dim(&self) -> usize {
        match self {
            PixelEncoding::Real => IMAGE_BYTES,
            PixelEncoding::Hypercomplex(_) => PIXELS,
        }
    }

    /// `30/3072` for reals and `10/1024` for hypercomplex inputs.
    pub fn default_alpha(&self) -> f64 {
        match self {
            PixelEncoding::Real => 30.0 / 3072.0,
            PixelEncoding::Hypercomplex(_) => 10.0 / 1024.0,
        }
    }

    pub fn encode(&self, images: &[ImageRgb]) -> Result<HMatrix> {
        match self {
            PixelEncoding::Real => Ok(encode_real(images)),
            PixelEncoding::Hypercomplex(a) => encode_hyper(images, a.clone()),
        }
    }

    pub fn decode(&self, encoded: &HMatrix) -> Result<Vec<ImageRgb>> {
        match self {
            PixelEncoding::Real => decode_real(encoded),
            PixelEncoding::Hypercomplex(_) => decode_hyper(encoded),
        }
    }

    pub fn config(&self, hidden: usize, alpha: f64, seed: u64) -> ElmConfig {
        let d = self.input_dim();
        ElmConfig::new(self.algebra(), d, hidden, d, seed).with_alpha(alpha)
    }

    pub fn tnp(&self, hidden: usize) -> u64 {
        autoencoder_tnp(self.input_dim(), hidden, self.algebra().dim())
    }
}

/// Reconstruction quality on one image set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quality {
    pub psnr: Stats,
    pub ssim: Stats,
}

/// Scores reconstructions against originals; infinite PSNR values are kept.
pub fn quality(originals: &[ImageRgb], reconstructed: &[ImageRgb]) -> Result<Quality> {
    if originals.len() != reconstructed.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} originals vs {} reconstructions",
            originals.len(),
            reconstructed.len()
        )));
    }
    let p: Vec<f64> = originals.iter().zip(reconstructed).map(|(a, b)| psnr(a, b)).collect();
    let s: Vec<f64> = originals.iter().zip(reconstructed).map(|(a, b)| ssim(a, b)).collect();
    Ok(Quality {
        psnr: Stats::of(&p),
        ssim: Stats::of(&s),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AutoencoderOutcome {
    pub train: Quality,
    pub test: Quality,
    pub model: ElmModel,
}

/// Fits an auto-encoder on `train` (targets equal inputs) and scores the
/// decoded reconstructions of both sets.
pub fn autoencoder_trial(
    train: &[ImageRgb],
    test: &[ImageRgb],
    encoding: &PixelEncoding,
    hidden: usize,
    alpha: f64,
    seed: u64,
) -> Result<AutoencoderOutcome> {
    let x = encoding.encode(train)?;
    let model = ElmModel::init(encoding.config(hidden, alpha, seed))?.train(&x, &x)?;
    let score = |images: &[ImageRgb], x: &HMatrix| -> Result<Quality> {
        let back = encoding.decode(&model.predict(x)?)?;
        quality(images, &back)
    };
    let train_q = score(train, &x)?;
    let test_q = score(test, &encoding.encode(test)?)?;
    Ok(AutoencoderOutcome {
        train: train_q,
        test: test_q,
        model,
    })
}
