//! Cyclic Jacobi eigen-decomposition for small dense symmetric matrices.

use crate::error::Result;

use super::KernelMatrix;

const MAX_SWEEPS: usize = 100;
const RELATIVE_OFF_DIAGONAL: f64 = 1e-12;
const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Eigenpairs sorted by descending eigenvalue. `vectors[i]` is the unit
/// eigenvector for `values[i]`, signed so its largest-magnitude entry is
/// positive.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub sweeps: usize,
}

pub fn symmetric_eigen(matrix: &KernelMatrix) -> Result<SymmetricEigen> {
    matrix.check_symmetric(SYMMETRY_TOLERANCE)?;
    let n = matrix.size();
    let mut a: Vec<Vec<f64>> = matrix.rows().take(n).map(<[f64]>::to_vec).collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let threshold = RELATIVE_OFF_DIAGONAL * matrix.frobenius_norm();
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS && off_diagonal_norm(&a) > threshold {
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] != 0.0 {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = order
        .iter()
        .map(|&col| {
            let mut vec: Vec<f64> = (0..n).map(|row| v[row][col]).collect();
            orient(&mut vec);
            vec
        })
        .collect();
    Ok(SymmetricEigen {
        values,
        vectors,
        sweeps,
    })
}

/// Eigenvalues in descending order (not clamped).
pub fn symmetric_eigenvalues(matrix: &KernelMatrix) -> Result<Vec<f64>> {
    symmetric_eigen(matrix).map(|e| e.values)
}

fn off_diagonal_norm(a: &[Vec<f64>]) -> f64 {
    let mut sum = 0.0;
    for (i, row) in a.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if i != j {
                sum += x * x;
            }
        }
    }
    sum.sqrt()
}

/// Apply the rotation that zeroes `a[p][q]`: `A <- JᵀAJ`, `V <- VJ`.
#[allow(clippy::needless_range_loop)]
fn rotate(a: &mut [Vec<f64>], v: &mut [Vec<f64>], p: usize, q: usize) {
    let apq = a[p][q];
    let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for row in a.iter_mut() {
        let (akp, akq) = (row[p], row[q]);
        row[p] = c * akp - s * akq;
        row[q] = s * akp + c * akq;
    }
    for k in 0..a.len() {
        let (apk, aqk) = (a[p][k], a[q][k]);
        a[p][k] = c * apk - s * aqk;
        a[q][k] = s * apk + c * aqk;
    }
    a[p][q] = 0.0;
    a[q][p] = 0.0;
    for row in v.iter_mut() {
        let (vkp, vkq) = (row[p], row[q]);
        row[p] = c * vkp - s * vkq;
        row[q] = s * vkp + c * vkq;
    }
}

/// Flip the sign so the largest-magnitude entry is positive (first wins ties).
fn orient(vec: &mut [f64]) {
    let mut best = 0;
    for (i, x) in vec.iter().enumerate() {
        if x.abs() > vec[best].abs() {
            best = i;
        }
    }
    if vec.get(best).is_some_and(|&x| x < 0.0) {
        vec.iter_mut().for_each(|x| *x = -*x);
    }
}
