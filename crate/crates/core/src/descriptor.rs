//! Matrix-free descriptor operators and the diagonally dominant shift.
//!
//! Both descriptors are a sparse adjacency part plus a rank-one correction,
//! so `M X` costs `O((n + m) d)` and the dense `n x n` matrix is never built:
//!
//! ```text
//! modularity   Q = (A - d d^T / 2m) / 2m
//! laplacian    L = D^-1/2 A D^-1/2 - sqrt(pi) sqrt(pi)^T,   pi_i = d_i / 2m
//! ```
//!
//! The iteration matrix `K` keeps the off-diagonal entries of `M` and
//! replaces its diagonal by `v_i = 1 + eps + sum_{k != i} |M_ik|`.

use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Descriptor {
    #[default]
    #[serde(rename = "modularity")]
    Modularity,
    #[serde(rename = "normlap")]
    NormalizedLaplacian,
}

impl Descriptor {
    pub fn name(self) -> &'static str {
        match self {
            Descriptor::Modularity => "modularity",
            Descriptor::NormalizedLaplacian => "normlap",
        }
    }
}

impl std::str::FromStr for Descriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "modularity" => Ok(Descriptor::Modularity),
            "normlap" => Ok(Descriptor::NormalizedLaplacian),
            other => Err(Error::InvalidConfig(format!("unknown descriptor `{other}`"))),
        }
    }
}

/// A symmetric descriptor matrix `M` of a graph, applied matrix-free.
#[derive(Clone, Debug)]
pub struct DescriptorOperator<'g> {
    kind: Descriptor,
    graph: &'g Graph,
    /// `d_i / 2m` for modularity, `sqrt(pi_i)` for the laplacian descriptor.
    rank_one: Vec<f64>,
    /// `1 / sqrt(d_i)`, laplacian only.
    inv_sqrt_degree: Vec<f64>,
}

impl<'g> DescriptorOperator<'g> {
    pub fn new(kind: Descriptor, graph: &'g Graph) -> Result<Self> {
        let vol = graph.volume();
        if graph.edge_count() == 0 {
            return Err(Error::EmptyGraph);
        }
        let degrees = graph.degrees();
        let (rank_one, inv_sqrt_degree) = match kind {
            Descriptor::Modularity => (degrees.iter().map(|&d| d as f64 / vol).collect(), vec![]),
            Descriptor::NormalizedLaplacian => {
                if let Some(i) = degrees.iter().position(|&d| d == 0) {
                    return Err(Error::ZeroDegree(i));
                }
                (
                    degrees.iter().map(|&d| (d as f64 / vol).sqrt()).collect(),
                    degrees.iter().map(|&d| 1.0 / (d as f64).sqrt()).collect(),
                )
            }
        };
        Ok(DescriptorOperator {
            kind,
            graph,
            rank_one,
            inv_sqrt_degree,
        })
    }

    pub fn modularity(graph: &'g Graph) -> Result<Self> {
        Self::new(Descriptor::Modularity, graph)
    }

    pub fn normalized_laplacian(graph: &'g Graph) -> Result<Self> {
        Self::new(Descriptor::NormalizedLaplacian, graph)
    }

    pub fn kind(&self) -> Descriptor {
        self.kind
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn dim(&self) -> usize {
        self.graph.node_count()
    }

    /// Entry `M_ij`, `O(log deg)`.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let a = if i != j && self.graph.has_edge(i, j) { 1.0 } else { 0.0 };
        self.entry_with_adjacency(i, j, a)
    }

    fn entry_with_adjacency(&self, i: usize, j: usize, a: f64) -> f64 {
        match self.kind {
            Descriptor::Modularity => {
                let vol = self.graph.volume();
                (a - self.rank_one[i] * self.rank_one[j] * vol) / vol
            }
            Descriptor::NormalizedLaplacian => {
                a * self.inv_sqrt_degree[i] * self.inv_sqrt_degree[j]
                    - self.rank_one[i] * self.rank_one[j]
            }
        }
    }

    /// Diagonal entry `M_ii` (graphs carry no self-loops).
    pub fn diagonal(&self, i: usize) -> f64 {
        self.entry_with_adjacency(i, i, 0.0)
    }

    /// Computes `M X` for an `n x d` block.
    pub fn apply(&self, x: ArrayView2<f64>) -> Result<Array2<f64>> {
        let n = self.dim();
        if x.nrows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: x.nrows(),
            });
        }
        let d = x.ncols();
        let x = x.as_standard_layout();
        let xs = x.as_slice().expect("standard layout");
        let mut out = Array2::<f64>::zeros((n, d));
        if d == 0 {
            return Ok(out);
        }
        let os = out.as_slice_mut().expect("fresh array");

        // rank-one projection w^T X
        let mut proj = vec![0.0; d];
        for (i, row) in xs.chunks_exact(d).enumerate() {
            let w = self.rank_one[i];
            for (p, &v) in proj.iter_mut().zip(row) {
                *p += w * v;
            }
        }

        match self.kind {
            Descriptor::Modularity => {
                let inv_vol = 1.0 / self.graph.volume();
                for (i, orow) in os.chunks_exact_mut(d).enumerate() {
                    for &j in self.graph.neighbors(i) {
                        let xrow = &xs[j * d..(j + 1) * d];
                        for (o, &v) in orow.iter_mut().zip(xrow) {
                            *o += v;
                        }
                    }
                    let w = self.rank_one[i];
                    for (o, &p) in orow.iter_mut().zip(&proj) {
                        *o = *o * inv_vol - w * p;
                    }
                }
            }
            Descriptor::NormalizedLaplacian => {
                for (i, orow) in os.chunks_exact_mut(d).enumerate() {
                    for &j in self.graph.neighbors(i) {
                        let s = self.inv_sqrt_degree[j];
                        let xrow = &xs[j * d..(j + 1) * d];
                        for (o, &v) in orow.iter_mut().zip(xrow) {
                            *o += s * v;
                        }
                    }
                    let s = self.inv_sqrt_degree[i];
                    let w = self.rank_one[i];
                    for (o, &p) in orow.iter_mut().zip(&proj) {
                        *o = s * *o - w * p;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Column `M e_j`, `O(n)`.
    pub fn column(&self, j: usize) -> Array1<f64> {
        let n = self.dim();
        let mut col = Array1::from_shape_fn(n, |i| self.entry_with_adjacency(i, j, 0.0));
        for &i in self.graph.neighbors(j) {
            col[i] = self.entry_with_adjacency(i, j, 1.0);
        }
        col
    }

    /// Off-diagonal absolute row sums `sum_{k != i} |M_ik|`, `O(deg i)` per row.
    ///
    /// Non-neighbours only see the rank-one part, which has a fixed sign, so
    /// their contribution collapses to a closed form over the total weight.
    pub fn off_diagonal_abs_row_sums(&self) -> Vec<f64> {
        let g = self.graph;
        let n = g.node_count();
        let vol = g.volume();
        match self.kind {
            Descriptor::Modularity => (0..n)
                .map(|i| {
                    let di = g.degree(i) as f64;
                    let mut near = 0.0;
                    let mut neighbor_degrees = 0.0;
                    for &k in g.neighbors(i) {
                        let dk = g.degree(k) as f64;
                        near += (1.0 - di * dk / vol).abs();
                        neighbor_degrees += dk;
                    }
                    let far = di * (vol - di - neighbor_degrees) / vol;
                    (near + far) / vol
                })
                .collect(),
            Descriptor::NormalizedLaplacian => {
                let total: f64 = self.rank_one.iter().sum();
                (0..n)
                    .map(|i| {
                        let si = self.rank_one[i];
                        let mut near = 0.0;
                        let mut neighbor_weight = 0.0;
                        for &k in g.neighbors(i) {
                            let sk = self.rank_one[k];
                            near += (self.inv_sqrt_degree[i] * self.inv_sqrt_degree[k] - si * sk)
                                .abs();
                            neighbor_weight += sk;
                        }
                        let far = si * (total - si - neighbor_weight).max(0.0);
                        near + far
                    })
                    .collect()
            }
        }
    }

    /// Shift vector `v_i = 1 + epsilon + sum_{k != i} |M_ik|`.
    pub fn diagonal_shift_vector(&self, epsilon: f64) -> Vec<f64> {
        self.off_diagonal_abs_row_sums()
            .into_iter()
            .map(|s| 1.0 + epsilon + s)
            .collect()
    }

    /// Builds the shifted iteration matrix `K` with the given margin.
    pub fn shifted(self, epsilon: f64) -> Result<ShiftedOperator<'g>> {
        ShiftedOperator::new(self, epsilon)
    }
}

/// `K`: the descriptor with its diagonal replaced by the shift vector.
///
/// `K` is strictly diagonally dominant with positive diagonal, hence
/// positive definite, and `||(K x)_i|| >= 1 + epsilon` for every unit-row `x`.
#[derive(Clone, Debug)]
pub struct ShiftedOperator<'g> {
    base: DescriptorOperator<'g>,
    shift: Vec<f64>,
    /// `v_i - M_ii`, added to `M X` row-wise.
    correction: Vec<f64>,
    epsilon: f64,
}

impl<'g> ShiftedOperator<'g> {
    pub fn new(base: DescriptorOperator<'g>, epsilon: f64) -> Result<Self> {
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "shift epsilon must be finite and non-negative, got {epsilon}"
            )));
        }
        let shift = base.diagonal_shift_vector(epsilon);
        let correction = shift
            .iter()
            .enumerate()
            .map(|(i, &v)| v - base.diagonal(i))
            .collect();
        Ok(ShiftedOperator {
            base,
            shift,
            correction,
            epsilon,
        })
    }

    pub fn base(&self) -> &DescriptorOperator<'g> {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Diagonal of `K`.
    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.shift[i]
        } else {
            self.base.entry(i, j)
        }
    }

    /// Computes `K X`.
    pub fn apply(&self, x: ArrayView2<f64>) -> Result<Array2<f64>> {
        let mut out = self.base.apply(x)?;
        for ((mut orow, xrow), &c) in out
            .axis_iter_mut(Axis(0))
            .zip(x.axis_iter(Axis(0)))
            .zip(&self.correction)
        {
            orow.scaled_add(c, &xrow);
        }
        Ok(out)
    }

    /// Column `K e_j`.
    pub fn column(&self, j: usize) -> Array1<f64> {
        let mut col = self.base.column(j);
        col[j] = self.shift[j];
        col
    }

    /// The columns of `K` at `count` indices drawn uniformly without
    /// replacement, as an `n x count` block.
    pub fn sample_columns<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Result<Array2<f64>> {
        let n = self.dim();
        if count > n {
            return Err(Error::TooManySamples {
                requested: count,
                available: n,
            });
        }
        let picked = rand::seq::index::sample(rng, n, count);
        let mut block = Array2::zeros((n, count));
        for (c, j) in picked.iter().enumerate() {
            block.column_mut(c).assign(&self.column(j));
        }
        Ok(block)
    }
}
