//! Clamp targets for visible neurons.

use ndarray::Array1;

use crate::error::{Error, Result};

/// Target values and clamp selection over the visible neurons.
///
/// `targets[i]` is only meaningful where `clamp_mask[i]` is set; clamped
/// neurons feel an extra pressure `beta * (target - s)` during relaxation.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSample {
    pub targets: Array1<f64>,
    pub clamp_mask: Vec<bool>,
}

impl DataSample {
    /// Build a sample after validating lengths and the [0, 1] target range.
    pub fn new(targets: Array1<f64>, clamp_mask: Vec<bool>) -> Result<Self> {
        if targets.len() != clamp_mask.len() {
            return Err(Error::Dimension(format!(
                "targets has {} entries but clamp_mask has {}",
                targets.len(),
                clamp_mask.len()
            )));
        }
        for (i, &t) in targets.iter().enumerate() {
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::Argument(format!(
                    "target[{}] = {} outside [0, 1]",
                    i, t
                )));
            }
        }
        Ok(DataSample { targets, clamp_mask })
    }

    /// Clamp every visible neuron to the given targets.
    pub fn fully_clamped(targets: Array1<f64>) -> Result<Self> {
        let mask = vec![true; targets.len()];
        DataSample::new(targets, mask)
    }

    /// Number of visible neurons this sample addresses.
    pub fn n_visible(&self) -> usize {
        self.targets.len()
    }

    /// An empty clamp mask means a free phase regardless of beta.
    pub fn is_free(&self) -> bool {
        !self.clamp_mask.iter().any(|&m| m)
    }

    /// Indices of the clamped neurons, ascending.
    pub fn clamped_indices(&self) -> Vec<usize> {
        self.clamp_mask
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| if m { Some(i) } else { None })
            .collect()
    }
}
