use crate::error::KernelError;
use crate::mat::Mat;

/// Symmetric matrix in packed lower-triangular storage (row by row:
/// a₀₀, a₁₀, a₁₁, a₂₀, …). Symmetry holds by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    lower: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(dim: usize) -> Self {
        SymmetricMatrix {
            dim,
            lower: vec![0.0; dim * (dim + 1) / 2],
        }
    }

    pub fn from_dense(m: &Mat) -> Result<Self, KernelError> {
        if m.nrows() != m.ncols() {
            return Err(KernelError::Dimension(format!(
                "symmetric matrix from {}×{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let mut s = SymmetricMatrix::zeros(m.nrows());
        for i in 0..m.nrows() {
            for j in 0..=i {
                s.set(i, j, 0.5 * (m[(i, j)] + m[(j, i)]));
            }
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        r * (r + 1) / 2 + c
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.lower[self.slot(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let s = self.slot(i, j);
        self.lower[s] = v;
    }

    pub fn to_dense(&self) -> Mat {
        let mut m = Mat::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] = self.at(i, j);
            }
        }
        m
    }

    pub fn is_finite(&self) -> bool {
        self.lower.iter().all(|v| v.is_finite())
    }
}

/// Full eigendecomposition A = V·diag(λ)·Vᵀ of a dense symmetric matrix by
/// cyclic Jacobi rotations. Returns eigenvalues ascending with matching
/// eigenvector columns. `tol` is relative to the Frobenius norm.
pub fn jacobi_eigendecomposition(a: &Mat, tol: f64) -> Result<(Vec<f64>, Mat), KernelError> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(KernelError::Dimension(format!(
            "eigendecomposition of {}×{}",
            n,
            a.ncols()
        )));
    }
    if !a.is_finite() {
        return Err(KernelError::NonFinite {
            what: "eigendecomposition input",
            index: 0,
        });
    }
    let mut m = a.clone();
    m.symmetrize();
    let mut v = Mat::identity(n);
    let scale = m.frobenius().max(1e-300);
    let stop = tol.max(1e-15) * scale;

    const MAX_SWEEPS: usize = 64;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                off += m[(i, j)] * m[(i, j)];
            }
        }
        if (2.0 * off).sqrt() <= stop {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq.abs() <= stop / (n * n) as f64 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // rotate rows/columns p, q of m
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                // accumulate eigenvectors
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].partial_cmp(&m[(j, j)]).unwrap());
    let evals: Vec<f64> = order.iter().map(|&i| m[(i, i)]).collect();
    let mut evecs = Mat::zeros(n, n);
    for (newcol, &oldcol) in order.iter().enumerate() {
        for k in 0..n {
            evecs[(k, newcol)] = v[(k, oldcol)];
        }
    }
    Ok((evals, evecs))
}

/// Eigenvalues of a symmetric matrix, ascending, accurate to tol·‖m‖.
pub fn eig_symmetric(m: &SymmetricMatrix, tol: f64) -> Result<Vec<f64>, KernelError> {
    Ok(jacobi_eigendecomposition(&m.to_dense(), tol)?.0)
}

/// Smallest eigenvalue (the PSD test everything downstream relies on).
pub fn min_eigenvalue(m: &SymmetricMatrix, tol: f64) -> Result<f64, KernelError> {
    Ok(eig_symmetric(m, tol)?[0])
}

/// f(A) = V·diag(f(λ))·Vᵀ for a dense symmetric A, eigenvalues floored at
/// `floor` before applying f (guards inverse square roots near boundary).
pub fn symmetric_function(
    a: &Mat,
    floor: f64,
    f: impl Fn(f64) -> f64,
) -> Result<Mat, KernelError> {
    let (evals, v) = jacobi_eigendecomposition(a, 1e-14)?;
    let n = a.nrows();
    let mut scaled = v.clone();
    for j in 0..n {
        let fl = f(evals[j].max(floor));
        for i in 0..n {
            scaled[(i, j)] *= fl;
        }
    }
    Ok(scaled.matmul(&v.transpose()))
}
