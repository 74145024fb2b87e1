//! Lorenz trajectories, sliding-window datasets, and prediction gain.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::algebra::AlgebraSpec;
use crate::elm::{ElmConfig, ElmModel};
use crate::error::{Error, Result};
use crate::realification::HMatrix;

pub type Point = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorenzParams {
    pub sigma: f64,
    pub rho: f64,
    pub beta: f64,
    pub dt: f64,
    pub steps: usize,
}

impl Default for LorenzParams {
    /// sigma = 10, rho = 28, beta = 8/3, 4000 positions at dt = 0.01.
    fn default() -> Self {
        Self {
            sigma: 10.0,
            rho: 28.0,
            beta: 8.0 / 3.0,
            dt: 0.01,
            steps: 4000,
        }
    }
}

impl LorenzParams {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !(positive(self.sigma) && positive(self.rho) && positive(self.beta)) {
            return Err(Error::InvalidConfig(format!(
                "sigma, rho and beta must be positive, got {}, {}, {}",
                self.sigma, self.rho, self.beta
            )));
        }
        if !positive(self.dt) {
            return Err(Error::InvalidConfig(format!("dt must be positive, got {}", self.dt)));
        }
        if self.steps == 0 {
            return Err(Error::InvalidConfig(format!("steps must be at least 1")));
        }
        Ok(())
    }
}

pub fn lorenz_deriv(p: Point, params: &LorenzParams) -> Point {
    let [x, y, z] = p;
    [
        params.sigma * (y - x),
        x * (params.rho - z) - y,
        x * y - params.beta * z,
    ]
}

fn axpy(p: Point, h: f64, k: Point) -> Point {
    [p[0] + h * k[0], p[1] + h * k[1], p[2] + h * k[2]]
}

/// One classical fourth-order Runge-Kutta step.
pub fn rk4_step(p: Point, params: &LorenzParams, dt: f64) -> Point {
    let k1 = lorenz_deriv(p, params);
    let k2 = lorenz_deriv(axpy(p, dt / 2.0, k1), params);
    let k3 = lorenz_deriv(axpy(p, dt / 2.0, k2), params);
    let k4 = lorenz_deriv(axpy(p, dt, k3), params);
    let mut out = p;
    for i in 0..3 {
        out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// A sequence of consecutive positions.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub positions: Vec<Point>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Splits into the first `n` positions and the rest.
    pub fn split_at(&self, n: usize) -> (Trajectory, Trajectory) {
        let n = n.min(self.len());
        (
            Trajectory {
                positions: self.positions[..n].to_vec(),
            },
            Trajectory {
                positions: self.positions[n..].to_vec(),
            },
        )
    }
}

/// `params.steps` positions starting at `p0`, spaced `params.dt` apart.
pub fn rk4_generate(p0: Point, params: &LorenzParams) -> Result<Trajectory> {
    params.validate()?;
    let mut positions = Vec::with_capacity(params.steps);
    let mut p = p0;
    if !p.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("initial condition"));
    }
    positions.push(p);
    for _ in 1..params.steps {
        p = rk4_step(p, params, params.dt);
        if !p.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("Lorenz trajectory"));
        }
        positions.push(p);
    }
    Ok(Trajectory { positions })
}

/// How positions are presented to a network.
#[derive(Debug, Clone, PartialEq)]
pub enum Encoding {
    /// `3T` real inputs, 3 real targets.
    Real,
    /// `T` entries `x i + y j + z k`, one such target.
    Hypercomplex(Arc<AlgebraSpec>),
}

impl Encoding {
    pub fn algebra(&self) -> Arc<AlgebraSpec> {
        match self {
            Encoding::Real => Arc::new(AlgebraSpec::reals()),
            Encoding::Hypercomplex(a) => a.clone(),
        }
    }

    pub fn input_dim(&self, window: usize) -> usize {
        match self {
            Encoding::Real => 3 * window,
            Encoding::Hypercomplex(_) => window,
        }
    }

    pub fn output_dim(&self) -> usize {
        match self {
            Encoding::Real => 3,
            Encoding::Hypercomplex(_) => 1,
        }
    }

    /// Reads positions back from network outputs; the real coefficient of a
    /// hypercomplex output is ignored.
    pub fn decode(&self, y: &HMatrix) -> Vec<Point> {
        (0..y.rows())
            .map(|i| match self {
                Encoding::Real => {
                    let r = y.row_coeffs(i);
                    [r[0], r[1], r[2]]
                }
                Encoding::Hypercomplex(_) => {
                    let e = y.entry(i, 0);
                    [e[1], e[2], e[3]]
                }
            })
            .collect()
    }
}

/// Inputs are `T` consecutive positions, the target is the next one.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowedDataset {
    pub inputs: HMatrix,
    pub targets: HMatrix,
    pub window: usize,
}

impl WindowedDataset {
    pub fn len(&self) -> usize {
        self.inputs.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.rows() == 0
    }
}

pub fn build_windows(traj: &Trajectory, window: usize, encoding: &Encoding) -> Result<WindowedDataset> {
    let n = traj.len();
    if window == 0 || n <= window {
        return Err(Error::SeriesTooShort { len: n, window });
    }
    let samples = n - window;
    let algebra = encoding.algebra();
    let p = &traj.positions;
    let (inputs, targets) = match encoding {
        Encoding::Real => {
            let inputs = HMatrix::from_fn(algebra.clone(), samples, 3 * window, |t, c, e| {
                e[0] = p[t + c / 3][c % 3];
            });
            let targets = HMatrix::from_fn(algebra, samples, 3, |t, c, e| e[0] = p[t + window][c]);
            (inputs, targets)
        }
        Encoding::Hypercomplex(a) => {
            if a.dim() != 4 {
                return Err(Error::WrongAlgebraDim {
                    name: a.name().into(),
                    dim: a.dim(),
                    expected: 4,
                });
            }
            let put = |q: &Point, e: &mut [f64]| {
                e[0] = 0.0;
                e[1..].copy_from_slice(q);
            };
            let inputs = HMatrix::from_fn(algebra.clone(), samples, window, |t, c, e| put(&p[t + c], e));
            let targets = HMatrix::from_fn(algebra, samples, 1, |t, _, e| put(&p[t + window], e));
            (inputs, targets)
        }
    };
    Ok(WindowedDataset {
        inputs,
        targets,
        window,
    })
}

fn norm3(p: &Point) -> f64 {
    libm::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2])
}

fn sample_variance(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
}

/// `10 log10(var(|p|) / var(|p - p_hat|))` with unbiased sample variances.
///
/// Returns `+inf` when the error norms have zero variance and
/// [`Error::DegenerateSignal`] when the signal norms do.
pub fn prediction_gain(actual: &[Point], predicted: &[Point]) -> Result<f64> {
    if actual.len() != predicted.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} actual positions vs {} predictions",
            actual.len(),
            predicted.len()
        )));
    }
    if actual.len() < 2 {
        return Err(Error::ShapeMismatch(format!(
            "prediction gain needs at least 2 samples, got {}",
            actual.len()
        )));
    }
    let signal = sample_variance(actual.iter().map(norm3));
    let error = sample_variance(
        actual
            .iter()
            .zip(predicted)
            .map(|(a, p)| norm3(&[a[0] - p[0], a[1] - p[1], a[2] - p[2]])),
    );
    if signal == 0.0 {
        return Err(Error::DegenerateSignal);
    }
    if error == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * libm::log10(signal / error))
}

/// Optional rescaling of coordinates before windowing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    #[default]
    Raw,
    /// Per-coordinate affine map of the fitting range onto `[-1, 1]`.
    MinMax,
}

/// Fitted per-coordinate affine map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaler {
    lo: Point,
    hi: Point,
}

impl Scaler {
    pub fn fit(traj: &Trajectory) -> Scaler {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for p in &traj.positions {
            for c in 0..3 {
                lo[c] = lo[c].min(p[c]);
                hi[c] = hi[c].max(p[c]);
            }
        }
        Scaler { lo, hi }
    }

    fn span(&self, c: usize) -> f64 {
        let s = self.hi[c] - self.lo[c];
        if s > 0.0 {
            s
        } else {
            1.0
        }
    }

    pub fn forward(&self, p: &Point) -> Point {
        core::array::from_fn(|c| 2.0 * (p[c] - self.lo[c]) / self.span(c) - 1.0)
    }

    pub fn inverse(&self, p: &Point) -> Point {
        core::array::from_fn(|c| (p[c] + 1.0) / 2.0 * self.span(c) + self.lo[c])
    }

    pub fn apply(&self, traj: &Trajectory) -> Trajectory {
        Trajectory {
            positions: traj.positions.iter().map(|p| self.forward(p)).collect(),
        }
    }
}

/// Setup shared by every network in a Lorenz comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct LorenzSetup {
    pub params: LorenzParams,
    pub initial: Point,
    /// Positions used for training; the remainder is the test series.
    pub train_positions: usize,
    pub window: usize,
    pub normalization: Normalization,
}

impl Default for LorenzSetup {
    fn default() -> Self {
        Self {
            params: LorenzParams::default(),
            initial: [1.0, 1.0, 1.0],
            train_positions: 300,
            window: 3,
            normalization: Normalization::Raw,
        }
    }
}

/// The generated series split into training and test parts.
#[derive(Debug, Clone, PartialEq)]
pub struct LorenzData {
    pub train: Trajectory,
    pub test: Trajectory,
    pub window: usize,
    scaler: Option<Scaler>,
}

impl LorenzData {
    pub fn generate(setup: &LorenzSetup) -> Result<LorenzData> {
        let traj = rk4_generate(setup.initial, &setup.params)?;
        if setup.train_positions <= setup.window || traj.len() <= setup.train_positions + setup.window {
            return Err(Error::SeriesTooShort {
                len: traj.len(),
                window: setup.window,
            });
        }
        let (train, test) = traj.split_at(setup.train_positions);
        let scaler = match setup.normalization {
            Normalization::Raw => None,
            Normalization::MinMax => Some(Scaler::fit(&train)),
        };
        Ok(LorenzData {
            train,
            test,
            window: setup.window,
            scaler,
        })
    }

    fn scaled(&self, traj: &Trajectory) -> Trajectory {
        match &self.scaler {
            Some(s) => s.apply(traj),
            None => traj.clone(),
        }
    }

    fn unscale(&self, pts: Vec<Point>) -> Vec<Point> {
        match &self.scaler {
            Some(s) => pts.iter().map(|p| s.inverse(p)).collect(),
            None => pts,
        }
    }

    pub fn windows(&self, encoding: &Encoding) -> Result<(WindowedDataset, WindowedDataset)> {
        Ok((
            build_windows(&self.scaled(&self.train), self.window, encoding)?,
            build_windows(&self.scaled(&self.test), self.window, encoding)?,
        ))
    }
}

/// Prediction gains of one trained network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorenzOutcome {
    pub train_gain_db: f64,
    pub test_gain_db: f64,
}

/// Trains one network with `hidden` neurons and `alpha = 10 / D` and scores it
/// on both splits, in the original coordinates.
pub fn lorenz_trial(data: &LorenzData, encoding: &Encoding, hidden: usize, seed: u64) -> Result<LorenzOutcome> {
    let (train, test) = data.windows(encoding)?;
    let config = ElmConfig::new(
        encoding.algebra(),
        encoding.input_dim(data.window),
        hidden,
        encoding.output_dim(),
        seed,
    );
    let model = ElmModel::init(config)?.train(&train.inputs, &train.targets)?;
    let score = |set: &WindowedDataset, traj: &Trajectory| -> Result<f64> {
        let predicted = data.unscale(encoding.decode(&model.predict(&set.inputs)?));
        prediction_gain(&traj.positions[data.window..], &predicted)
    };
    Ok(LorenzOutcome {
        train_gain_db: score(&train, &data.train)?,
        test_gain_db: score(&test, &data.test)?,
    })
}
