//! Visible/hidden partition and the connectivity pattern.

use std::ops::Range;

use ndarray::Array2;

/// Network shape: `n_visible` input/output neurons followed by `n_hidden`
/// hidden neurons, with a fixed connectivity pattern.
///
/// Connections exist between every visible-hidden pair and every
/// hidden-hidden pair, in both directions; visible neurons are not connected
/// to each other and no neuron connects to itself. The pattern is symmetric
/// even though weight values are not tied.
///
/// Neurons are indexed with visible first: `0..n_visible` visible,
/// `n_visible..n_total` hidden.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NetworkTopology {
    n_visible: usize,
    n_hidden: usize,
}

impl NetworkTopology {
    pub fn new(n_visible: usize, n_hidden: usize) -> Self {
        NetworkTopology { n_visible, n_hidden }
    }

    pub fn n_visible(&self) -> usize {
        self.n_visible
    }

    pub fn n_hidden(&self) -> usize {
        self.n_hidden
    }

    pub fn n_total(&self) -> usize {
        self.n_visible + self.n_hidden
    }

    pub fn is_visible(&self, i: usize) -> bool {
        i < self.n_visible
    }

    /// Whether a connection (in either direction) exists between `i` and `j`.
    pub fn is_connected(&self, i: usize, j: usize) -> bool {
        i != j && !(self.is_visible(i) && self.is_visible(j))
    }

    /// Contiguous index ranges of the neurons connected to neuron `i`.
    ///
    /// The second range is empty for visible neurons. Useful for iterating a
    /// weight-matrix row without touching forbidden entries.
    pub fn peer_spans(&self, i: usize) -> [Range<usize>; 2] {
        if self.is_visible(i) {
            [self.n_visible..self.n_total(), 0..0]
        } else {
            [0..i, i + 1..self.n_total()]
        }
    }

    /// Materialize the boolean connectivity mask (diagnostics and tests).
    pub fn mask_matrix(&self) -> Array2<bool> {
        let n = self.n_total();
        Array2::from_shape_fn((n, n), |(i, j)| self.is_connected(i, j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mask_structure() {
        let topo = NetworkTopology::new(3, 2);
        let mask = topo.mask_matrix();
        for i in 0..5 {
            assert!(!mask[[i, i]], "self connection at {}", i);
            for j in 0..5 {
                assert_eq!(mask[[i, j]], mask[[j, i]], "mask not symmetric at {},{}", i, j);
                if i < 3 && j < 3 {
                    assert!(!mask[[i, j]], "visible pair {},{} connected", i, j);
                } else if i != j {
                    assert!(mask[[i, j]], "pair {},{} should be connected", i, j);
                }
            }
        }
    }

    #[test]
    fn peer_spans_cover_exactly_the_mask() {
        for (nv, nh) in [(3usize, 2usize), (0, 4), (4, 0), (1, 1)] {
            let topo = NetworkTopology::new(nv, nh);
            let n = topo.n_total();
            for i in 0..n {
                let mut from_spans = vec![false; n];
                for r in topo.peer_spans(i) {
                    for j in r {
                        from_spans[j] = true;
                    }
                }
                for (j, &in_span) in from_spans.iter().enumerate() {
                    assert_eq!(in_span, topo.is_connected(i, j), "nv={} nh={} i={} j={}", nv, nh, i, j);
                }
            }
        }
    }

    #[test]
    fn hidden_only_and_visible_only() {
        let all_hidden = NetworkTopology::new(0, 3);
        assert!(all_hidden.is_connected(0, 1));
        let all_visible = NetworkTopology::new(3, 0);
        assert!(!all_visible.is_connected(0, 1));
    }
}
