use serde::{Deserialize, Serialize};

/// Ordered moments `μ₀, μ₁, …` of a positive measure.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MomentVector(pub Vec<f64>);

impl MomentVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, k: usize) -> Option<f64> {
        self.0.get(k).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Elementwise `|self_k - reference_k| / |reference_k|`.
    pub fn relative_errors(&self, reference: &MomentVector) -> Vec<f64> {
        self.0
            .iter()
            .zip(&reference.0)
            .map(|(a, b)| ((a - b) / b).abs())
            .collect()
    }
}

impl std::ops::Index<usize> for MomentVector {
    type Output = f64;

    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}
