//! Unit-norm embedding vectors and cosine similarity.

use serde::{Deserialize, Serialize};

use crate::error::EmbedError;

/// A fixed-dimension embedding. Encoders produce unit-norm vectors, except
/// the all-zero vector for empty input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vector {
    pub components: Vec<f64>,
}

impl Vector {
    pub fn zeros(dimension: usize) -> Self {
        Vector {
            components: vec![0.0; dimension],
        }
    }

    pub fn dimension(&self) -> usize {
        self.components.len()
    }

    pub fn norm(&self) -> f64 {
        self.components.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| *c == 0.0)
    }

    /// L2-normalize in place; the zero vector is left untouched.
    pub fn normalize(&mut self) {
        let norm = self.norm();
        if norm > 0.0 {
            for c in &mut self.components {
                *c /= norm;
            }
        }
    }
}

/// Standard cosine similarity; 0 if either vector is zero.
pub fn cosine_sim(a: &Vector, b: &Vector) -> Result<f64, EmbedError> {
    if a.dimension() != b.dimension() {
        return Err(EmbedError::DimensionMismatch {
            left: a.dimension(),
            right: b.dimension(),
        });
    }
    let norm_a = a.norm();
    let norm_b = b.norm();
    if norm_a == 0.0 || norm_b == 0.0 {
        return Ok(0.0);
    }
    let dot: f64 = a
        .components
        .iter()
        .zip(&b.components)
        .map(|(x, y)| x * y)
        .sum();
    Ok((dot / (norm_a * norm_b)).clamp(-1.0, 1.0))
}
