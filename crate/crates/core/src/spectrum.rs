//! Spectrum reports: sorted eigenvalues with cluster multiplicities.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Analytic,
    Discretized,
}

/// One spectral line: eigenvalue and multiplicity after clustering.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralEntry {
    pub eigenvalue: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub entries: Vec<SpectralEntry>,
    pub cutoff: f64,
    pub cluster_tol: f64,
    pub provenance: Provenance,
    pub n: usize,
    pub delta_bits: String,
    pub lattice_hash: u64,
}

impl SpectrumReport {
    /// Total number of eigenvalues counted with multiplicity.
    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    pub fn eigenvalues_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.total_multiplicity());
        for e in &self.entries {
            out.extend(std::iter::repeat(e.eigenvalue).take(e.multiplicity));
        }
        out
    }

    /// Smallest eigenvalue in absolute value.
    pub fn min_abs_eigenvalue(&self) -> Option<f64> {
        self.entries.iter().map(|e| e.eigenvalue.abs()).min_by(f64::total_cmp)
    }

    /// Checks the strict ordering invariant.
    pub fn is_strictly_increasing(&self) -> bool {
        self.entries.windows(2).all(|w| w[0].eigenvalue < w[1].eigenvalue)
    }
}

/// Groups an ascending list of eigenvalues into clusters: a new cluster
/// starts whenever the gap to the previous value exceeds `tol`. The reported
/// eigenvalue of a cluster is its mean.
pub fn cluster_sorted(values: &[f64], tol: f64) -> Vec<SpectralEntry> {
    let mut entries: Vec<SpectralEntry> = Vec::new();
    let mut i = 0;
    while i < values.len() {
        let mut j = i + 1;
        while j < values.len() && (values[j] - values[j - 1]).abs() <= tol {
            j += 1;
        }
        let mult = j - i;
        let mean = values[i..j].iter().sum::<f64>() / mult as f64;
        entries.push(SpectralEntry { eigenvalue: mean, multiplicity: mult });
        i = j;
    }
    entries
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clusters_by_gap() {
        let vals = [1.0, 1.0 + 1e-12, 2.0, 3.0, 3.0, 3.0];
        let entries = cluster_sorted(&vals, 1e-9);
        assert_eq!(entries.len(), 3);
        assert_eq!(entries[0].multiplicity, 2);
        assert_eq!(entries[1].multiplicity, 1);
        assert_eq!(entries[2].multiplicity, 3);
    }

    #[test]
    fn empty_input() {
        assert!(cluster_sorted(&[], 1e-9).is_empty());
    }
}
