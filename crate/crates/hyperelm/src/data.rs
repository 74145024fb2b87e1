//! Reading and writing datasets: CIFAR-10 batches, PNG dumps, and
//! coefficient matrices stored as headerless CSV.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use hyperelm_core::autoencoder::{parse_cifar, ImageRgb, SIDE};
use hyperelm_core::{AlgebraSpec, HMatrix};

use crate::error::{Error, Result};

pub const TRAIN_BATCH: &str = "data_batch_1.bin";
pub const TEST_BATCH: &str = "test_batch.bin";

/// Images of one CIFAR-10 binary batch file.
pub fn load_cifar(path: &Path) -> Result<Vec<ImageRgb>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_cifar(&bytes).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

/// The first training batch and the test batch of an extracted
/// `cifar-10-batches-bin` directory.
pub fn load_cifar_dir(dir: &Path) -> Result<(Vec<ImageRgb>, Vec<ImageRgb>)> {
    Ok((load_cifar(&dir.join(TRAIN_BATCH))?, load_cifar(&dir.join(TEST_BATCH))?))
}

pub fn write_png(img: &ImageRgb, path: &Path) -> Result<()> {
    image::save_buffer(path, &img.interleaved(), SIDE as u32, SIDE as u32, image::ColorType::Rgb8)
        .map_err(|e| match e {
            image::ImageError::IoError(io) => Error::io(path, io),
            other => Error::Format(format!("{}: {other}", path.display())),
        })
}

/// Reads a matrix whose rows list the coefficients of each entry in turn.
pub fn read_matrix_csv(path: &Path, algebra: Arc<AlgebraSpec>) -> Result<HMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::csv(path, e))?;
    let mut data = Vec::new();
    let mut width = None;
    let mut rows = 0;
    for record in reader.records() {
        let record = record.map_err(|e| Error::csv(path, e))?;
        if *width.get_or_insert(record.len()) != record.len() {
            return Err(Error::Format(format!("{}: ragged row {}", path.display(), rows + 1)));
        }
        for cell in record.iter() {
            let v: f64 = cell
                .parse()
                .map_err(|_| Error::Format(format!("{}: not a number: {cell:?}", path.display())))?;
            data.push(v);
        }
        rows += 1;
    }
    let width = width.unwrap_or(0);
    let dim = algebra.dim();
    if width % dim != 0 {
        return Err(Error::Format(format!(
            "{}: {width} values per row is not a multiple of dimension {dim}",
            path.display()
        )));
    }
    Ok(HMatrix::new(algebra, rows, width / dim, data)?)
}

pub fn write_matrix_csv(m: &HMatrix, out: &mut dyn std::io::Write) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    let stdout = PathBuf::from("-");
    for i in 0..m.rows() {
        writer
            .write_record(m.row_coeffs(i).iter().map(|v| v.to_string()))
            .map_err(|e| Error::csv(&stdout, e))?;
    }
    writer.flush().map_err(|e| Error::io(&stdout, e))
}
