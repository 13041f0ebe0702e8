use crate::error::{Error, Result};

/// A list of points in 1 or 2 dimensions stored as a flat coordinate buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::InvalidConfig(format!("unsupported dimension {dim}")));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: coords.len() % dim,
            });
        }
        Ok(Self { dim, coords })
    }

    pub fn empty(dim: usize) -> Self {
        assert!((1..=2).contains(&dim), "unsupported dimension {dim}");
        Self {
            dim,
            coords: Vec::new(),
        }
    }

    pub fn from_1d(xs: &[f64]) -> Self {
        Self {
            dim: 1,
            coords: xs.to_vec(),
        }
    }

    pub fn from_2d(points: &[[f64; 2]]) -> Self {
        Self {
            dim: 2,
            coords: points.iter().flatten().copied().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn push(&mut self, p: &[f64]) {
        assert_eq!(p.len(), self.dim, "point dimension mismatch");
        self.coords.extend_from_slice(p);
    }

    /// Returns the points reordered by `order` (indices into `self`).
    pub fn permuted(&self, order: &[usize]) -> Self {
        let mut out = Self::empty(self.dim);
        for &i in order {
            out.push(self.point(i));
        }
        out
    }
}

#[inline]
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
