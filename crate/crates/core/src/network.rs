//! Weights, biases, and the evolving network state.

use ndarray::{Array1, Array2};
use rand::Rng;

use crate::error::{Error, Result};
use crate::topology::NetworkTopology;

/// Asymmetric weight matrix and bias vector.
///
/// `w` is stored in incoming orientation: `w[[i, j]]` is the weight of the
/// connection from neuron `j` into neuron `i`, so the drive on neuron `i`
/// is a contiguous row dot product. `w[[i, j]]` and `w[[j, i]]` are
/// independent values; entries forbidden by the topology stay exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Parameters {
    pub w: Array2<f64>,
    pub b: Array1<f64>,
}

impl Parameters {
    pub fn zeros(topo: &NetworkTopology) -> Self {
        let n = topo.n_total();
        Parameters {
            w: Array2::zeros((n, n)),
            b: Array1::zeros(n),
        }
    }

    /// Draw weights and biases from U(-range, range) on the allowed entries.
    ///
    /// Draw order is fixed (weight rows in index order, spans left to right,
    /// then biases) so a seeded generator reproduces parameters exactly.
    pub fn random_uniform<R: Rng>(topo: &NetworkTopology, range: f64, rng: &mut R) -> Self {
        let mut params = Parameters::zeros(topo);
        for i in 0..topo.n_total() {
            for span in topo.peer_spans(i) {
                for j in span {
                    params.w[[i, j]] = rng.random_range(-range..range);
                }
            }
        }
        for i in 0..topo.n_total() {
            params.b[i] = rng.random_range(-range..range);
        }
        params
    }

    /// Weight of the connection from `from` into `to`.
    pub fn weight(&self, from: usize, to: usize) -> f64 {
        self.w[[to, from]]
    }

    /// Set the weight from `from` into `to`; rejects forbidden pairs.
    pub fn set_weight(
        &mut self,
        topo: &NetworkTopology,
        from: usize,
        to: usize,
        value: f64,
    ) -> Result<()> {
        if !topo.is_connected(from, to) {
            return Err(Error::Argument(format!(
                "no connection {} -> {} in this topology",
                from, to
            )));
        }
        self.w[[to, from]] = value;
        Ok(())
    }

    /// Replace `w` with its symmetric part on the allowed entries.
    pub fn symmetrize(&mut self) {
        let n = self.w.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (self.w[[i, j]] + self.w[[j, i]]);
                self.w[[i, j]] = avg;
                self.w[[j, i]] = avg;
            }
        }
    }

    /// Max |w[i][j]| over entries forbidden by the mask; 0 means the
    /// zero-off-mask invariant holds exactly.
    pub fn mask_violation(&self, topo: &NetworkTopology) -> f64 {
        let n = topo.n_total();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if !topo.is_connected(i, j) {
                    worst = worst.max(self.w[[i, j]].abs());
                }
            }
        }
        worst
    }

    pub fn n_total(&self) -> usize {
        self.b.len()
    }
}

/// Neuron internal states and velocities for momentum relaxation.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkState {
    pub s: Array1<f64>,
    pub v: Array1<f64>,
}

impl NetworkState {
    pub fn zeros(n: usize) -> Self {
        NetworkState {
            s: Array1::zeros(n),
            v: Array1::zeros(n),
        }
    }

    /// s ~ U(0, 1), v = 0.
    pub fn random_uniform<R: Rng>(n: usize, rng: &mut R) -> Self {
        NetworkState {
            s: Array1::from_shape_fn(n, |_| rng.random_range(0.0..1.0)),
            v: Array1::zeros(n),
        }
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.s.iter().all(|x| x.is_finite()) && self.v.iter().all(|x| x.is_finite())
    }
}
