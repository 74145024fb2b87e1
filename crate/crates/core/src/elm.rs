//! Hypercomplex-valued extreme learning machines.
//!
//! A single hidden layer with fixed random weights feeds a linear output
//! layer fitted by hypercomplex least squares. Both layers carry a bias,
//! implemented by appending a real-unit column to their inputs, so the
//! hidden weights are `(D+1) x L` and the output weights `(L+1) x O`.

use alloc::format;
use alloc::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::algebra::{ensure_same, AlgebraSpec, HNumber};
use crate::error::{shape_err, Error, Result};
use crate::realification::{lstsq, matmul, HMatrix};

/// Hidden-layer nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Activation {
    #[default]
    SplitTanh,
}

impl Activation {
    pub fn as_str(self) -> &'static str {
        match self {
            Activation::SplitTanh => "split_tanh",
        }
    }

    pub fn parse(s: &str) -> Option<Activation> {
        match s {
            "split_tanh" | "tanh" => Some(Activation::SplitTanh),
            _ => None,
        }
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            Activation::SplitTanh => libm::tanh(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElmConfig {
    pub algebra: Arc<AlgebraSpec>,
    pub input_dim: usize,
    pub hidden: usize,
    pub output_dim: usize,
    pub alpha: f64,
    pub activation: Activation,
    pub seed: u64,
}

impl ElmConfig {
    /// Configuration with `alpha = 10 / input_dim`.
    pub fn new(algebra: Arc<AlgebraSpec>, input_dim: usize, hidden: usize, output_dim: usize, seed: u64) -> Self {
        let alpha = 10.0 / input_dim.max(1) as f64;
        Self {
            algebra,
            input_dim,
            hidden,
            output_dim,
            alpha,
            activation: Activation::SplitTanh,
            seed,
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.input_dim == 0 || self.hidden == 0 || self.output_dim == 0 {
            return Err(Error::InvalidConfig(format!(
                "layer sizes must be positive, got {}-{}-{}",
                self.input_dim, self.hidden, self.output_dim
            )));
        }
        // zero is accepted and yields an all-zero hidden layer
        if !self.alpha.is_finite() || self.alpha < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "scaling factor must be finite and non-negative, got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    pub fn tnp(&self) -> u64 {
        tnp(self.input_dim, self.hidden, self.output_dim, self.algebra.dim())
    }
}

/// An initialised network; `output` is `None` until trained.
#[derive(Debug, Clone, PartialEq)]
pub struct ElmModel {
    config: ElmConfig,
    weights: HMatrix,
    output: Option<HMatrix>,
}

impl ElmModel {
    /// Draws every coefficient of the `(D+1) x L` hidden weights from `alpha * N(0, 1)`.
    pub fn init(config: ElmConfig) -> Result<Self> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let rows = config.input_dim + 1;
        let n = rows * config.hidden * config.algebra.dim();
        let alpha = config.alpha;
        let data = (0..n)
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                alpha * z
            })
            .collect();
        let weights = HMatrix::new(config.algebra.clone(), rows, config.hidden, data)?;
        Ok(Self {
            config,
            weights,
            output: None,
        })
    }

    /// Reassembles a model from stored parts, checking every shape.
    pub fn from_parts(config: ElmConfig, weights: HMatrix, output: Option<HMatrix>) -> Result<Self> {
        config.validate()?;
        ensure_same(&config.algebra, weights.algebra())?;
        if weights.shape() != (config.input_dim + 1, config.hidden) {
            return Err(shape_err!(
                "hidden weights are {}x{}, expected {}x{}",
                weights.rows(),
                weights.cols(),
                config.input_dim + 1,
                config.hidden
            ));
        }
        if let Some(m) = &output {
            ensure_same(&config.algebra, m.algebra())?;
            if m.shape() != (config.hidden + 1, config.output_dim) {
                return Err(shape_err!(
                    "output weights are {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    config.hidden + 1,
                    config.output_dim
                ));
            }
        }
        Ok(Self {
            config,
            weights,
            output,
        })
    }

    pub fn config(&self) -> &ElmConfig {
        &self.config
    }

    pub fn weights(&self) -> &HMatrix {
        &self.weights
    }

    pub fn output_weights(&self) -> Option<&HMatrix> {
        self.output.as_ref()
    }

    pub fn is_trained(&self) -> bool {
        self.output.is_some()
    }

    fn check_input(&self, x: &HMatrix) -> Result<()> {
        ensure_same(&self.config.algebra, x.algebra())?;
        if x.cols() != self.config.input_dim {
            return Err(shape_err!(
                "input has {} columns, model expects {}",
                x.cols(),
                self.config.input_dim
            ));
        }
        Ok(())
    }

    /// `f([X | 1] W)`, shape `M x L`.
    pub fn hidden(&self, x: &HMatrix) -> Result<HMatrix> {
        self.check_input(x)?;
        let pre = matmul(&x.append_unit_column(), &self.weights)?;
        let act = self.config.activation;
        Ok(pre.map_coeffs(|v| act.apply(v)))
    }

    /// Fits the output layer: `M = lstsq([H | 1], T)`.
    pub fn train(&self, x: &HMatrix, t: &HMatrix) -> Result<ElmModel> {
        self.check_input(x)?;
        ensure_same(&self.config.algebra, t.algebra())?;
        if x.rows() == 0 {
            return Err(shape_err!("training set is empty"));
        }
        if t.rows() != x.rows() || t.cols() != self.config.output_dim {
            return Err(shape_err!(
                "targets are {}x{}, expected {}x{}",
                t.rows(),
                t.cols(),
                x.rows(),
                self.config.output_dim
            ));
        }
        let h = self.hidden(x)?.append_unit_column();
        let m = lstsq(&h, t)?;
        Ok(ElmModel {
            config: self.config.clone(),
            weights: self.weights.clone(),
            output: Some(m),
        })
    }

    /// `[H | 1] M` with no output activation.
    pub fn predict(&self, x: &HMatrix) -> Result<HMatrix> {
        let m = self.output.as_ref().ok_or(Error::NotTrained)?;
        let h = self.hidden(x)?.append_unit_column();
        matmul(&h, m)
    }
}

/// Applies `tanh` to each coefficient independently.
pub fn split_tanh(x: &HNumber) -> HNumber {
    let coeffs = x.coeffs().iter().map(|&v| libm::tanh(v)).collect();
    HNumber::new(x.algebra().clone(), coeffs).expect("tanh of finite values is finite")
}

/// Total parameter count `dim * ((D+1) L + (L+1) O)`, fixed random weights included.
pub fn tnp(input_dim: usize, hidden: usize, output_dim: usize, algebra_dim: usize) -> u64 {
    let (d, l, o, n) = (input_dim as u64, hidden as u64, output_dim as u64, algebra_dim as u64);
    n * ((d + 1) * l + (l + 1) * o)
}

/// Real hidden-layer size matching a four-dimensional Lorenz network: `round(20 L / 13)`.
pub fn match_hidden_neurons(l_hyper: usize) -> usize {
    libm::round(20.0 * l_hyper as f64 / 13.0) as usize
}

/// Real hidden-layer size whose parameter count is closest to that of a
/// hypercomplex `d_hyper - l_hyper - o_hyper` network over an `algebra_dim` algebra.
pub fn match_hidden_neurons_for(
    l_hyper: usize,
    d_hyper: usize,
    o_hyper: usize,
    algebra_dim: usize,
    d_real: usize,
    o_real: usize,
) -> usize {
    let target = tnp(d_hyper, l_hyper, o_hyper, algebra_dim) as f64;
    let l = (target - o_real as f64) / (d_real + 1 + o_real) as f64;
    libm::round(l).max(1.0) as usize
}
