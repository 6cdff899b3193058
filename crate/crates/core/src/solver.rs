//! Generalized power method on the product of unit spheres.
//!
//! Maximizes `f(x) = Tr(x^T K x)` over `n x d0` blocks with unit rows by
//! iterating `x <- Pi(K x)`, where `Pi` normalizes rows. The momentum
//! variant extrapolates `K x` with weights `r_n = (n - 1) / (n + 2)`.
//!
//! Both momentum readings are run by the same loop. Since `K` is linear,
//! `K (x_m + r (x_m - x_{m-1})) = (1 + r) K x_m - r K x_{m-1}`, so
//! extrapolating the images `y = K x` (the `Main` form) and applying `K` to
//! extrapolated iterates (the `Appendix` form) give the same iterates; the
//! two differ only in which quantity drives the stopping test. Every
//! iteration costs exactly one application of `K`.

use ndarray::{Array2, ArrayView2, Axis, Zip};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::descriptor::ShiftedOperator;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MomentumVariant {
    /// Stop on `o_{n-1} = Tr(y_{n-1}^T x_{n-1})`, the bookkeeping value of
    /// the momentum pseudocode, tested one iteration behind.
    #[default]
    Main,
    /// Stop on the true objective `f(x_n)`, as the plain method does.
    Appendix,
}

impl MomentumVariant {
    pub fn name(self) -> &'static str {
        match self {
            MomentumVariant::Main => "main",
            MomentumVariant::Appendix => "appendix",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Upper bound `d0` on the embedding dimension.
    pub dimension: usize,
    /// Relative objective change below which iteration stops.
    pub tol: f64,
    pub max_iter: usize,
    pub momentum: bool,
    pub momentum_variant: MomentumVariant,
    pub seed: u64,
    /// Extra diagonal margin added to the shift.
    pub shift_epsilon: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            dimension: 30,
            tol: 1e-8,
            max_iter: 10_000,
            momentum: true,
            momentum_variant: MomentumVariant::Main,
            seed: 0,
            shift_epsilon: 0.0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dimension < 2 {
            return Err(Error::InvalidConfig(format!(
                "embedding dimension must be at least 2, got {}",
                self.dimension
            )));
        }
        self.validate_stopping()?;
        if !(self.shift_epsilon >= 0.0 && self.shift_epsilon.is_finite()) {
            return Err(Error::InvalidConfig("shift epsilon must be >= 0".into()));
        }
        Ok(())
    }

    fn validate_stopping(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerance must lie in (0, 1), got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be positive".into()));
        }
        Ok(())
    }
}

/// One recorded iterate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub iteration: usize,
    /// `f(x_m) = Tr(x_m^T K x_m)`.
    pub objective: f64,
    /// First-order criterion `Delta(x_m)`.
    pub delta: f64,
    /// `||x_m - x_{m-1}||_F^2`, zero for the starting point.
    pub step_sq: f64,
    /// Quantity the stopping rule compared for this iterate.
    pub stopping_value: f64,
}

#[derive(Clone, Debug)]
pub struct IterateState {
    /// Final iterate, unit rows.
    pub x: Array2<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// `f` at the final iterate.
    pub objective: f64,
    /// `Delta` at the final iterate.
    pub delta: f64,
    /// Entries for iterates `0..=iterations`.
    pub trace: Vec<TraceEntry>,
}

/// Row-normalizes `x`; fails on a zero row.
pub fn project_rows(x: ArrayView2<f64>) -> Result<Array2<f64>> {
    let mut out = x.to_owned();
    for (i, mut row) in out.axis_iter_mut(Axis(0)).enumerate() {
        let norm = row.dot(&row).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroRow(i));
        }
        row /= norm;
    }
    Ok(out)
}

/// `f(x) = Tr(x^T K x)`.
pub fn objective(k: &ShiftedOperator<'_>, x: ArrayView2<f64>) -> Result<f64> {
    let kx = k.apply(x)?;
    Ok(frobenius_dot(x, kx.view()))
}

/// `Delta(x) = sum_i ||(K x)_i|| - Tr(x^T K x)`; non-negative on unit-row
/// inputs and zero exactly at fixed points of `x <- Pi(K x)`.
pub fn first_order_criterion(k: &ShiftedOperator<'_>, x: ArrayView2<f64>) -> Result<f64> {
    let kx = k.apply(x)?;
    Ok(row_norm_sum(kx.view()) - frobenius_dot(x, kx.view()))
}

fn frobenius_dot(a: ArrayView2<f64>, b: ArrayView2<f64>) -> f64 {
    Zip::from(a).and(b).fold(0.0, |acc, &p, &q| acc + p * q)
}

fn row_norm_sum(a: ArrayView2<f64>) -> f64 {
    a.axis_iter(Axis(0)).map(|r| r.dot(&r).sqrt()).sum()
}

fn distance_sq(a: ArrayView2<f64>, b: ArrayView2<f64>) -> f64 {
    Zip::from(a)
        .and(b)
        .fold(0.0, |acc, &p, &q| acc + (p - q) * (p - q))
}

/// Momentum weight `r_n = (n - 1) / (n + 2)`.
pub fn momentum_weight(n: usize) -> f64 {
    debug_assert!(n >= 1);
    (n as f64 - 1.0) / (n as f64 + 2.0)
}

/// The generator behind every random choice of a solve.
pub fn solver_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Starting point: `Pi` of `d0` uniformly sampled columns of `K`.
///
/// When `d0 > n` all `n` columns are used and the block is padded with zero
/// columns. A row that vanishes on the sampled columns gets a Gaussian
/// direction instead.
pub fn initial_point(
    k: &ShiftedOperator<'_>,
    dimension: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Array2<f64>> {
    let n = k.dim();
    let sampled = k.sample_columns(dimension.min(n), rng)?;
    let mut x = Array2::zeros((n, dimension));
    x.slice_mut(ndarray::s![.., ..sampled.ncols()])
        .assign(&sampled);
    for mut row in x.axis_iter_mut(Axis(0)) {
        let mut norm = row.dot(&row).sqrt();
        while norm == 0.0 {
            row.mapv_inplace(|_| StandardNormal.sample(rng));
            norm = row.dot(&row).sqrt();
        }
        row /= norm;
    }
    Ok(x)
}

/// Runs the configured method from the sampled starting point.
pub fn solve(k: &ShiftedOperator<'_>, cfg: &SolverConfig) -> Result<IterateState> {
    cfg.validate()?;
    let mut rng = solver_rng(cfg.seed);
    let x0 = initial_point(k, cfg.dimension, &mut rng)?;
    if cfg.momentum {
        gpmm_solve_from(k, x0, cfg)
    } else {
        gpm_solve_from(k, x0, cfg)
    }
}

/// Plain generalized power method from the sampled starting point; ignores
/// `cfg.momentum`.
pub fn gpm_solve(k: &ShiftedOperator<'_>, cfg: &SolverConfig) -> Result<IterateState> {
    solve(k, &SolverConfig { momentum: false, ..cfg.clone() })
}

/// Momentum method from the sampled starting point; ignores `cfg.momentum`.
pub fn gpmm_solve(k: &ShiftedOperator<'_>, cfg: &SolverConfig) -> Result<IterateState> {
    solve(k, &SolverConfig { momentum: true, ..cfg.clone() })
}

pub fn gpm_solve_from(
    k: &ShiftedOperator<'_>,
    x0: Array2<f64>,
    cfg: &SolverConfig,
) -> Result<IterateState> {
    iterate(k, x0, cfg, None)
}

pub fn gpmm_solve_from(
    k: &ShiftedOperator<'_>,
    x0: Array2<f64>,
    cfg: &SolverConfig,
) -> Result<IterateState> {
    iterate(k, x0, cfg, Some(cfg.momentum_variant))
}

fn iterate(
    k: &ShiftedOperator<'_>,
    x0: Array2<f64>,
    cfg: &SolverConfig,
    momentum: Option<MomentumVariant>,
) -> Result<IterateState> {
    cfg.validate_stopping()?;
    if x0.nrows() != k.dim() {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            found: x0.nrows(),
        });
    }
    let mut x = project_rows(x0.view())?;
    let mut kx = k.apply(x.view())?;
    let f0 = frobenius_dot(x.view(), kx.view());
    let mut trace = vec![TraceEntry {
        iteration: 0,
        objective: f0,
        delta: row_norm_sum(kx.view()) - f0,
        step_sq: 0.0,
        stopping_value: f0,
    }];
    // Bookkeeping values o_n = Tr(y_n^T x_n) with y_0 = K x_0.
    let mut bookkeeping = vec![f0];
    // y_{n-1} = K x_{n-2}; equals K x_0 at n = 1.
    let mut y_prev = kx.clone();
    let mut converged = false;
    let mut n = 0;

    while n < cfg.max_iter {
        n += 1;
        let next = match momentum {
            None => project_with_fallback(kx.view(), None),
            Some(_) => {
                let r = momentum_weight(n);
                let mut z = kx.clone();
                if r != 0.0 {
                    z *= 1.0 + r;
                    z.scaled_add(-r, &y_prev);
                }
                project_with_fallback(z.view(), Some(kx.view()))
            }
        }?;
        let step_sq = distance_sq(next.view(), x.view());
        // y_n = K x_{n-1}
        y_prev = std::mem::replace(&mut kx, k.apply(next.view())?);
        x = next;

        let f = frobenius_dot(x.view(), kx.view());
        if !f.is_finite() {
            return Err(Error::NonFinite("objective"));
        }
        let o = frobenius_dot(y_prev.view(), x.view());
        bookkeeping.push(o);
        let stopping_value = match momentum {
            Some(MomentumVariant::Main) => bookkeeping[n - 1],
            _ => f,
        };
        trace.push(TraceEntry {
            iteration: n,
            objective: f,
            delta: row_norm_sum(kx.view()) - f,
            step_sq,
            stopping_value,
        });

        if n >= 2 {
            let (cur, prev) = match momentum {
                Some(MomentumVariant::Main) => (bookkeeping[n - 1], bookkeeping[n - 2]),
                _ => (trace[n].objective, trace[n - 1].objective),
            };
            if ((cur - prev) / prev).abs() < cfg.tol {
                converged = true;
                break;
            }
        }
    }

    let last = trace.last().copied().expect("trace holds the start point");
    Ok(IterateState {
        x,
        iterations: n,
        converged,
        objective: last.objective,
        delta: last.delta,
        trace,
    })
}

/// `Pi(z)`, replacing any zero row of `z` by the matching row of
/// `Pi(fallback)`.
fn project_with_fallback(
    z: ArrayView2<f64>,
    fallback: Option<ArrayView2<f64>>,
) -> Result<Array2<f64>> {
    let mut out = z.to_owned();
    for (i, mut row) in out.axis_iter_mut(Axis(0)).enumerate() {
        let mut norm = row.dot(&row).sqrt();
        if norm == 0.0 {
            if let Some(fb) = fallback {
                row.assign(&fb.row(i));
                norm = row.dot(&row).sqrt();
            }
        }
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroRow(i));
        }
        row /= norm;
    }
    Ok(out)
}
