//! Chaotic iterators driving the cipher.
//!
//! Two maps are provided:
//!
//! * **TD-ERCS** (tangent-delay ellipse reflecting cavity): a point bounces
//!   around the ellipse `mu²x² + y² = mu²`. Each step follows the current
//!   chord to its second intersection with the ellipse, then reflects the
//!   chord slope about the tangent taken `delay` points in the past.
//! * **NCA**: a one-dimensional map on `(0, 1)` mixing a tangent and a power
//!   term, `x' = (1 - b⁻⁴)·cot(a/(1+b))·(1 + 1/b)^b·tan(a·x)·(1 - x)^b`.
//!
//! All arithmetic is binary64. Orbits are reproducible on one platform and
//! build; bit-equality across platforms is not promised because `tan` and
//! `powf` come from the platform math library.

use std::collections::VecDeque;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::keying::KeyMaterial;

/// Maximum `|mu²x² + y² - mu²|` tolerated before a step is rejected.
pub const ELLIPSE_DIVERGENCE_LIMIT: f64 = 1e-6;

/// Default number of iterations discarded before an orbit is used.
pub const DEFAULT_BURN_IN: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TdErcsSeed {
    pub x0: f64,
    pub mu: f64,
    pub alpha: f64,
    pub delay: usize,
}

impl TdErcsSeed {
    pub fn new(x0: f64, mu: f64, alpha: f64, delay: usize) -> Result<Self> {
        let seed = TdErcsSeed { x0, mu, alpha, delay };
        seed.validate()?;
        Ok(seed)
    }

    pub fn validate(&self) -> Result<()> {
        if !(-1.0..=1.0).contains(&self.x0) {
            return Err(Error::param("x0", self.x0, "must lie in [-1, 1]"));
        }
        validate_tdercs_shape(self.mu, self.alpha, self.delay)
    }
}

/// Checks the key-independent TD-ERCS parameters.
pub fn validate_tdercs_shape(mu: f64, alpha: f64, delay: usize) -> Result<()> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::param("mu", mu, "must lie in the open interval (0, 1)"));
    }
    if !(alpha > 0.0 && alpha < std::f64::consts::PI) {
        return Err(Error::param("alpha", alpha, "must lie in the open interval (0, pi)"));
    }
    if (alpha - FRAC_PI_2).abs() < 1e-12 {
        return Err(Error::param("alpha", alpha, "tan(alpha) is unbounded near pi/2"));
    }
    if delay < 2 {
        return Err(Error::param("delay", delay, "tangent delay must be at least 2"));
    }
    Ok(())
}

/// Slope of the ellipse tangent at `(x, y)`.
fn tangent_slope(x: f64, y: f64, mu: f64) -> f64 {
    -(x / y) * mu * mu
}

#[derive(Debug, Clone)]
pub struct TdErcsState {
    x: f64,
    y: f64,
    slope: f64,
    mu: f64,
    delay: usize,
    /// Tangent slopes of the most recent `delay` points, oldest first.
    tangents: VecDeque<f64>,
    iteration: u64,
}

impl TdErcsState {
    /// Places the start point on the upper half of the ellipse and derives
    /// the initial chord slope from the launch angle `alpha`.
    pub fn new(seed: &TdErcsSeed) -> Result<Self> {
        seed.validate()?;
        let TdErcsSeed { x0, mu, alpha, delay } = *seed;
        let y0 = mu * (1.0 - x0 * x0).sqrt();
        if y0 == 0.0 {
            return Err(Error::DegenerateSeed(x0));
        }
        let tangent0 = tangent_slope(x0, y0, mu);
        let t = alpha.tan();
        let slope = -(t + tangent0) / (1.0 - tangent0 * t);
        if !slope.is_finite() {
            return Err(Error::DegenerateSeed(x0));
        }
        let mut tangents = VecDeque::with_capacity(delay + 1);
        tangents.push_back(tangent0);
        Ok(TdErcsState {
            x: x0,
            y: y0,
            slope,
            mu,
            delay,
            tangents,
            iteration: 0,
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// Current chord slope.
    pub fn slope(&self) -> f64 {
        self.slope
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    /// Signed distance from the ellipse, `mu²x² + y² - mu²`.
    pub fn residual(&self) -> f64 {
        let m2 = self.mu * self.mu;
        m2 * self.x * self.x + self.y * self.y - m2
    }

    /// Advances one reflection and returns the new `x`, which lies in `[-1, 1]`.
    pub fn step(&mut self) -> Result<f64> {
        let m2 = self.mu * self.mu;
        let k = self.slope;
        let (xp, yp) = (self.x, self.y);
        let i = self.iteration + 1;

        let x = -(2.0 * k * yp + xp * (m2 - k * k)) / (m2 + k * k);
        let y = k * (x - xp) + yp;

        // For i < delay the freshest tangent (point i-1) is used, afterwards
        // the one `delay` points back, which is the front of a full buffer.
        let delayed = if (i as usize) < self.delay {
            *self.tangents.back().expect("history is never empty")
        } else {
            *self.tangents.front().expect("history is never empty")
        };
        let slope = (2.0 * delayed - k + k * delayed * delayed) / (1.0 + 2.0 * k * delayed - delayed * delayed);

        let residual = m2 * x * x + y * y - m2;
        if residual.is_nan() || residual.abs() > ELLIPSE_DIVERGENCE_LIMIT {
            return Err(Error::NumericalDivergence {
                map: "TD-ERCS",
                iteration: i,
                detail: format!("ellipse residual {residual:e}"),
            });
        }
        let tangent = tangent_slope(x, y, self.mu);
        if !slope.is_finite() || !tangent.is_finite() {
            return Err(Error::NumericalDivergence {
                map: "TD-ERCS",
                iteration: i,
                detail: format!("non-finite slope at ({x}, {y})"),
            });
        }

        self.x = x;
        self.y = y;
        self.slope = slope;
        self.tangents.push_back(tangent);
        if self.tangents.len() > self.delay {
            self.tangents.pop_front();
        }
        self.iteration = i;
        Ok(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NcaParams {
    pub alpha: f64,
    pub beta: f64,
}

impl NcaParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let params = NcaParams { alpha, beta };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.4) {
            return Err(Error::param("nca_alpha", self.alpha, "must lie in (0, 1.4]"));
        }
        if !(5.0..=43.6).contains(&self.beta) {
            return Err(Error::param("nca_beta", self.beta, "must lie in [5, 43.6]"));
        }
        Ok(())
    }

    /// The constant factor `(1 - b⁻⁴)·cot(a/(1+b))·(1 + 1/b)^b`.
    fn gain(&self) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        (1.0 - b.powi(-4)) / (a / (1.0 + b)).tan() * (1.0 + 1.0 / b).powf(b)
    }
}

#[derive(Debug, Clone)]
pub struct NcaState {
    x: f64,
    params: NcaParams,
    gain: f64,
    iteration: u64,
}

impl NcaState {
    pub fn new(x0: f64, params: NcaParams) -> Result<Self> {
        params.validate()?;
        if !(x0 > 0.0 && x0 < 1.0) {
            return Err(Error::param("x0_nca", x0, "must lie in the open interval (0, 1)"));
        }
        Ok(NcaState {
            x: x0,
            params,
            gain: params.gain(),
            iteration: 0,
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn params(&self) -> NcaParams {
        self.params
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn step(&mut self) -> Result<f64> {
        let NcaParams { alpha, beta } = self.params;
        let x = self.x;
        let next = self.gain * (alpha * x).tan() * (1.0 - x).powf(beta);
        if !(next > 0.0 && next < 1.0) {
            return Err(Error::NumericalDivergence {
                map: "NCA",
                iteration: self.iteration + 1,
                detail: format!("iterate {next:e} left (0, 1) from x = {x:e}"),
            });
        }
        self.x = next;
        self.iteration += 1;
        Ok(next)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    TdErcs,
    Nca,
}

/// Runs the selected map seeded from `key`, discards `burn_in` outputs and
/// collects the next `n`.
pub fn chaotic_sequence(kind: MapKind, key: &KeyMaterial, n: usize, burn_in: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::param("n", n, "sequence length must be at least 1"));
    }
    match kind {
        MapKind::TdErcs => {
            let mut state = TdErcsState::new(&key.tdercs_seed()?)?;
            collect(n, burn_in, || state.step())
        }
        MapKind::Nca => {
            let mut state = key.nca_state()?;
            collect(n, burn_in, || state.step())
        }
    }
}

fn collect(n: usize, burn_in: usize, mut next: impl FnMut() -> Result<f64>) -> Result<Vec<f64>> {
    for _ in 0..burn_in {
        next()?;
    }
    (0..n).map(|_| next()).collect()
}

/// A bijection on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// Stable argsort: `values[p[0]] <= values[p[1]] <= ...`, ties by index.
    pub fn from_sequence(values: &[f64]) -> Self {
        let mut indices: Vec<usize> = (0..values.len()).collect();
        indices.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        Permutation(indices)
    }

    pub fn from_indices(indices: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; indices.len()];
        for &i in &indices {
            if i >= indices.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::param("permutation", i, "indices must be a bijection on 0..n"));
            }
        }
        Ok(Permutation(indices))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (dst, &src) in self.0.iter().enumerate() {
            inv[src] = dst;
        }
        Permutation(inv)
    }
}

impl std::ops::Index<usize> for Permutation {
    type Output = usize;

    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}
