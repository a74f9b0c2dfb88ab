use serde::{Deserialize, Serialize};

use crate::diversity::{symmetric_eigen, KernelMatrix, ZERO_TOLERANCE};
use crate::error::{Error, Result};

/// Two-dimensional classical MDS embedding of a caption set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MdsEmbedding {
    pub coordinates: Vec<[f64; 2]>,
    /// Eigenvalues of the double-centered matrix used for the two axes.
    pub eigenvalues: [f64; 2],
    /// Frobenius norm of the difference between embedded and kernel distances.
    pub stress: f64,
}

/// Pairwise distances implied by an inner-product kernel,
/// `d_ij = √max(0, k_ii + k_jj - 2 k_ij)`.
pub fn kernel_distances(kernel: &KernelMatrix) -> KernelMatrix {
    KernelMatrix::symmetric_from_fn(kernel.size(), |i, j| {
        if i == j {
            0.0
        } else {
            (kernel.get(i, i) + kernel.get(j, j) - 2.0 * kernel.get(i, j))
                .max(0.0)
                .sqrt()
        }
    })
}

/// Classical (Torgerson) MDS: double-center `-½ D²` and keep the two leading
/// non-negative eigenpairs.
pub fn classical_mds(kernel: &KernelMatrix) -> Result<MdsEmbedding> {
    let m = kernel.size();
    if m < 2 {
        return Err(Error::InsufficientCaptions { needed: 2, got: m });
    }
    let distances = kernel_distances(kernel);
    let squared: Vec<f64> = distances.entries().iter().map(|d| d * d).collect();
    let row_means: Vec<f64> = squared
        .chunks(m)
        .map(|r| r.iter().sum::<f64>() / m as f64)
        .collect();
    let grand_mean = row_means.iter().sum::<f64>() / m as f64;
    let centered = KernelMatrix::symmetric_from_fn(m, |i, j| {
        -0.5 * (squared[i * m + j] - row_means[i] - row_means[j] + grand_mean)
    });

    let eigen = symmetric_eigen(&centered)?;
    let scale = eigen.values.first().copied().unwrap_or(0.0).max(1.0);
    let mut eigenvalues = [0.0; 2];
    let mut coordinates = vec![[0.0; 2]; m];
    for axis in 0..2.min(m) {
        let lambda = eigen.values[axis];
        if lambda <= ZERO_TOLERANCE * scale {
            continue;
        }
        eigenvalues[axis] = lambda;
        let s = lambda.sqrt();
        for (point, v) in coordinates.iter_mut().zip(&eigen.vectors[axis]) {
            point[axis] = v * s;
        }
    }

    let mut residual = 0.0;
    for i in 0..m {
        for j in 0..m {
            let dx = coordinates[i][0] - coordinates[j][0];
            let dy = coordinates[i][1] - coordinates[j][1];
            let embedded = (dx * dx + dy * dy).sqrt();
            residual += (embedded - distances.get(i, j)).powi(2);
        }
    }
    Ok(MdsEmbedding {
        coordinates,
        eigenvalues,
        stress: residual.sqrt(),
    })
}
