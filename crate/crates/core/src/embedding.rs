//! Spherical and ellipsoidal embeddings from a solution `H` via its SVD.
//!
//! With `H = U S V^T`, the spherical coordinates of node `i` are the row
//! `(U S)_i` (unit norm, since `H` has unit rows) and the ellipsoidal
//! coordinates are `U_i`, which satisfy `U_i S^2 U_i^T = 1`. Only
//! `rho = H H^T = U S^2 U^T` is invariant under rotations of `H`, so `V` is
//! dropped.

use nalgebra::DMatrix;
use ndarray::{Array1, Array2, ArrayView2, Axis};

use crate::error::{Error, Result};

/// Singular values at or below this fraction of the largest are treated as
/// zero when counting the numerical rank.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Default significance threshold for the effective dimension.
pub const DEFAULT_EPSILON: f64 = 0.01;

#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingResult {
    u: Array2<f64>,
    singular_values: Array1<f64>,
    /// `sum_l s_l^2` over every computed singular value, i.e. `Tr(rho)`.
    trace: f64,
    effective_dimension: usize,
    epsilon: f64,
}

/// Computes the thin SVD of `h` and keeps the numerical-rank part, with
/// column signs canonicalized so the largest-magnitude entry of each column
/// of `U` is positive (first such entry on ties).
pub fn svd_embedding(h: ArrayView2<f64>, epsilon: f64) -> Result<EmbeddingResult> {
    svd_embedding_with_rank_tolerance(h, epsilon, RANK_TOLERANCE)
}

/// [`svd_embedding`] keeping singular values above `rank_tolerance * s_1`.
pub fn svd_embedding_with_rank_tolerance(
    h: ArrayView2<f64>,
    epsilon: f64,
    rank_tolerance: f64,
) -> Result<EmbeddingResult> {
    check_epsilon(epsilon)?;
    if !(0.0..1.0).contains(&rank_tolerance) {
        return Err(Error::InvalidConfig(format!(
            "rank tolerance must lie in [0, 1), got {rank_tolerance}"
        )));
    }
    let (n, d) = h.dim();
    if n == 0 || d == 0 {
        return Err(Error::Svd("empty matrix".into()));
    }
    if h.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("embedding input"));
    }
    let m = DMatrix::from_fn(n, d, |i, j| h[[i, j]]);
    let svd = m.svd(true, false);
    let u_full = svd
        .u
        .ok_or_else(|| Error::Svd("left singular vectors were not computed".into()))?;

    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .total_cmp(&svd.singular_values[a])
            .then(a.cmp(&b))
    });
    let s_max = svd.singular_values[order[0]];
    if !(s_max > 0.0) {
        return Err(Error::Svd("matrix is zero".into()));
    }
    let trace: f64 = order.iter().map(|&l| svd.singular_values[l].powi(2)).sum();
    let rank = order
        .iter()
        .take_while(|&&l| svd.singular_values[l] > rank_tolerance * s_max)
        .count();

    let mut u = Array2::zeros((n, rank));
    let mut s = Array1::zeros(rank);
    for (c, &l) in order[..rank].iter().enumerate() {
        s[c] = svd.singular_values[l];
        let col = u_full.column(l);
        let mut pivot = 0;
        for i in 1..n {
            if col[i].abs() > col[pivot].abs() {
                pivot = i;
            }
        }
        let sign = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            u[[i, c]] = sign * col[i];
        }
    }

    let eigenvalues: Vec<f64> = s.iter().map(|v| v * v).collect();
    let effective_dimension = effective_dimension_of(&eigenvalues, trace, epsilon);
    Ok(EmbeddingResult {
        u,
        singular_values: s,
        trace,
        effective_dimension,
        epsilon,
    })
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )))
    }
}

/// Smallest `r >= 1` whose leading `r` eigenvalues of `rho` exceed
/// `(1 - epsilon) * trace`; the full length when none does.
pub fn effective_dimension_of(eigenvalues: &[f64], trace: f64, epsilon: f64) -> usize {
    let target = (1.0 - epsilon) * trace;
    let mut cumulative = 0.0;
    for (r, &lambda) in eigenvalues.iter().enumerate() {
        cumulative += lambda;
        if cumulative > target {
            return r + 1;
        }
    }
    eigenvalues.len().max(1)
}

impl EmbeddingResult {
    pub fn node_count(&self) -> usize {
        self.u.nrows()
    }

    /// Number of kept singular values `r`.
    pub fn rank(&self) -> usize {
        self.singular_values.len()
    }

    pub fn singular_values(&self) -> &Array1<f64> {
        &self.singular_values
    }

    /// Rows of `U`: the ellipsoidal embedding.
    pub fn ellipsoidal(&self) -> ArrayView2<'_, f64> {
        self.u.view()
    }

    /// Rows of `U S`: the spherical embedding.
    pub fn spherical(&self) -> Array2<f64> {
        let mut sigma = self.u.clone();
        for (mut col, &s) in sigma.axis_iter_mut(Axis(1)).zip(&self.singular_values) {
            col *= s;
        }
        sigma
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn effective_dimension(&self) -> usize {
        self.effective_dimension
    }

    /// Recomputes the effective dimension for another threshold.
    pub fn effective_dimension_at(&self, epsilon: f64) -> Result<usize> {
        check_epsilon(epsilon)?;
        Ok(effective_dimension_of(
            &self.rho_eigenvalues(),
            self.trace,
            epsilon,
        ))
    }

    /// `Tr(rho)`, equal to `n` for unit-row input.
    pub fn rho_trace(&self) -> f64 {
        self.trace
    }

    /// Non-zero eigenvalues of `rho = H H^T`, i.e. `s_l^2`.
    pub fn rho_eigenvalues(&self) -> Vec<f64> {
        self.singular_values.iter().map(|s| s * s).collect()
    }

    /// Spectrum of `rho / n`, summing to one for unit-row input.
    pub fn rho_spectrum(&self) -> Vec<f64> {
        let n = self.node_count() as f64;
        self.singular_values.iter().map(|s| s * s / n).collect()
    }

    /// Keeps the leading `d_eff` coordinates.
    pub fn truncate(&self) -> EmbeddingResult {
        self.leading(self.effective_dimension)
    }

    /// Keeps the coordinates whose `rho` eigenvalue exceeds
    /// `tail_tolerance` times the largest one; `0` keeps everything.
    pub fn resolved(&self, tail_tolerance: f64) -> EmbeddingResult {
        let cutoff = tail_tolerance * self.singular_values[0].powi(2);
        let r = self.singular_values.iter().filter(|&&s| s * s > cutoff).count().max(1);
        self.leading(r)
    }

    /// Keeps the leading `rank` coordinates.
    pub fn leading(&self, rank: usize) -> EmbeddingResult {
        let r = rank.clamp(1, self.rank());
        EmbeddingResult {
            u: self.u.slice(ndarray::s![.., ..r]).to_owned(),
            singular_values: self.singular_values.slice(ndarray::s![..r]).to_owned(),
            trace: self.trace,
            effective_dimension: self.effective_dimension.min(r),
            epsilon: self.epsilon,
        }
    }

    /// Nuclear norm `||rho - rho_eff||_*`, the eigenvalue mass that
    /// [`EmbeddingResult::truncate`] discards.
    pub fn truncated_nuclear_mass(&self) -> f64 {
        self.rho_eigenvalues()[self.effective_dimension..].iter().sum()
    }

    /// `rho` rebuilt as `U S^2 U^T`; `O(n^2 r)`, meant for checks on small graphs.
    pub fn reconstruct_rho(&self) -> Array2<f64> {
        let sigma = self.spherical();
        sigma.dot(&sigma.t())
    }
}
