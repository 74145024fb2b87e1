//! JSON documents for algebras and trained models.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use hyperelm_core::elm::Activation;
use hyperelm_core::{builtin, AlgebraName, AlgebraSpec, ElmConfig, ElmModel, HMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `table[i][j]` holds the coefficients of the product of units `i+1` and `j+1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub name: String,
    pub dim: usize,
    pub table: Vec<Vec<Vec<f64>>>,
}

impl From<&AlgebraSpec> for AlgebraDoc {
    fn from(spec: &AlgebraSpec) -> Self {
        Self {
            name: spec.name().to_string(),
            dim: spec.dim(),
            table: spec.nested_table(),
        }
    }
}

impl AlgebraDoc {
    /// A document using a catalog name must carry the catalog table.
    pub fn resolve(&self) -> Result<AlgebraSpec> {
        let spec = AlgebraSpec::new(self.name.clone(), self.dim, &self.table)?;
        match AlgebraName::from_spec_name(&self.name) {
            Some(name) if !builtin(name).same_as(&spec) => Err(hyperelm_core::Error::UnknownAlgebra(format!(
                "{} (table differs from the built-in one)",
                self.name
            ))
            .into()),
            _ => Ok(spec),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigDoc {
    pub input_dim: usize,
    pub hidden: usize,
    pub output_dim: usize,
    pub alpha: f64,
    pub activation: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDoc {
    pub algebra: AlgebraDoc,
    pub config: ConfigDoc,
    #[serde(rename = "W")]
    pub weights: Vec<Vec<Vec<f64>>>,
    #[serde(rename = "M")]
    pub output: Option<Vec<Vec<Vec<f64>>>>,
}

fn nested(m: &HMatrix) -> Vec<Vec<Vec<f64>>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.entry(i, j).to_vec()).collect())
        .collect()
}

fn unnest(algebra: &Arc<AlgebraSpec>, rows: &[Vec<Vec<f64>>], what: &str) -> Result<HMatrix> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut data = Vec::with_capacity(rows.len() * cols * algebra.dim());
    for row in rows {
        if row.len() != cols {
            return Err(Error::Format(format!("{what}: ragged rows")));
        }
        for entry in row {
            if entry.len() != algebra.dim() {
                return Err(Error::Format(format!(
                    "{what}: entry of length {}, expected {}",
                    entry.len(),
                    algebra.dim()
                )));
            }
            data.extend_from_slice(entry);
        }
    }
    Ok(HMatrix::new(algebra.clone(), rows.len(), cols, data)?)
}

impl From<&ElmModel> for ModelDoc {
    fn from(model: &ElmModel) -> Self {
        let c = model.config();
        Self {
            algebra: AlgebraDoc::from(c.algebra.as_ref()),
            config: ConfigDoc {
                input_dim: c.input_dim,
                hidden: c.hidden,
                output_dim: c.output_dim,
                alpha: c.alpha,
                activation: c.activation.as_str().to_string(),
                seed: c.seed,
            },
            weights: nested(model.weights()),
            output: model.output_weights().map(nested),
        }
    }
}

impl ModelDoc {
    pub fn into_model(self) -> Result<ElmModel> {
        let algebra = Arc::new(self.algebra.resolve()?);
        let activation = Activation::parse(&self.config.activation)
            .ok_or_else(|| Error::Format(format!("unknown activation {:?}", self.config.activation)))?;
        let config = ElmConfig {
            algebra: algebra.clone(),
            input_dim: self.config.input_dim,
            hidden: self.config.hidden,
            output_dim: self.config.output_dim,
            alpha: self.config.alpha,
            activation,
            seed: self.config.seed,
        };
        let weights = unnest(&algebra, &self.weights, "W")?;
        let output = self.output.as_deref().map(|m| unnest(&algebra, m, "M")).transpose()?;
        Ok(ElmModel::from_parts(config, weights, output)?)
    }
}

pub fn model_to_json(model: &ElmModel) -> Result<String> {
    Ok(serde_json::to_string(&ModelDoc::from(model))?)
}

pub fn model_from_json(text: &str) -> Result<ElmModel> {
    serde_json::from_str::<ModelDoc>(text)?.into_model()
}

pub fn save_model(model: &ElmModel, path: &Path) -> Result<()> {
    fs::write(path, model_to_json(model)?).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: &Path) -> Result<ElmModel> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    model_from_json(&text)
}

pub fn load_algebra(path: &Path) -> Result<AlgebraSpec> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str::<AlgebraDoc>(&text)?.resolve()
}

/// A catalog name, or else a path to an algebra document.
pub fn algebra_from_arg(arg: &str) -> Result<AlgebraSpec> {
    match arg.parse::<AlgebraName>() {
        Ok(name) => Ok(builtin(name)),
        Err(e) => {
            let path = Path::new(arg);
            if path.is_file() {
                load_algebra(path)
            } else {
                Err(e.into())
            }
        }
    }
}
