//! Fixed-size dense helpers: cyclic Jacobi for small symmetric eigenproblems
//! and a one-sided Jacobi SVD for the tall matrices used by the μ-system.

use crate::error::LinalgError;

const JACOBI_REL_THRESHOLD: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 50;
const SYMMETRY_TOL: f64 = 1e-12;

pub type Mat3 = [[f64; 3]; 3];
pub type Mat4 = [[f64; 4]; 4];

pub fn identity<const N: usize>() -> [[f64; N]; N] {
    let mut m = [[0.0; N]; N];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub fn transpose<const R: usize, const C: usize>(m: &[[f64; C]; R]) -> [[f64; R]; C] {
    let mut t = [[0.0; R]; C];
    for i in 0..R {
        for j in 0..C {
            t[j][i] = m[i][j];
        }
    }
    t
}

pub fn matmul<const R: usize, const K: usize, const C: usize>(
    a: &[[f64; K]; R],
    b: &[[f64; C]; K],
) -> [[f64; C]; R] {
    let mut out = [[0.0; C]; R];
    for i in 0..R {
        for k in 0..K {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..C {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn matvec<const R: usize, const C: usize>(a: &[[f64; C]; R], x: &[f64; C]) -> [f64; R] {
    let mut out = [0.0; R];
    for i in 0..R {
        out[i] = (0..C).map(|j| a[i][j] * x[j]).sum();
    }
    out
}

pub fn frobenius<const R: usize, const C: usize>(m: &[[f64; C]; R]) -> f64 {
    m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn max_abs_diff<const R: usize, const C: usize>(a: &[[f64; C]; R], b: &[[f64; C]; R]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Largest absolute off-diagonal entry.
pub fn max_off_diagonal<const N: usize>(m: &[[f64; N]; N]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..N {
        for j in 0..N {
            if i != j {
                worst = worst.max(m[i][j].abs());
            }
        }
    }
    worst
}

pub fn det3(m: &Mat3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub fn det4(m: &Mat4) -> f64 {
    let mut det = 0.0;
    for col in 0..4 {
        let mut minor = [[0.0; 3]; 3];
        for i in 1..4 {
            let mut jj = 0;
            for j in 0..4 {
                if j == col {
                    continue;
                }
                minor[i - 1][jj] = m[i][j];
                jj += 1;
            }
        }
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        det += sign * m[0][col] * det3(&minor);
    }
    det
}

/// Eigen-decomposition of a small symmetric matrix.
///
/// `vectors` holds the eigenvectors as columns, matched to `values` which are
/// ascending. The eigenvector matrix always has determinant +1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymEigen<const N: usize> {
    pub values: [f64; N],
    pub vectors: [[f64; N]; N],
}

/// Cyclic Jacobi eigensolver for symmetric `N×N` input.
pub fn sym_eigen<const N: usize>(m: &[[f64; N]; N]) -> Result<SymEigen<N>, LinalgError> {
    let scale = frobenius(m).max(f64::MIN_POSITIVE);
    for i in 0..N {
        for j in (i + 1)..N {
            let defect = (m[i][j] - m[j][i]).abs();
            if defect > SYMMETRY_TOL * scale.max(1.0) {
                return Err(LinalgError::NotSymmetric { defect });
            }
        }
    }

    let mut a = *m;
    // use the exact symmetric part so rotations see consistent data
    for i in 0..N {
        for j in (i + 1)..N {
            let avg = 0.5 * (a[i][j] + a[j][i]);
            a[i][j] = avg;
            a[j][i] = avg;
        }
    }
    let mut v = identity::<N>();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..N)
            .flat_map(|i| ((i + 1)..N).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_REL_THRESHOLD * scale {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&x, &y| a[x][x].total_cmp(&a[y][y]));
    let values = std::array::from_fn(|k| a[order[k]][order[k]]);
    let mut vectors = [[0.0; N]; N];
    for (k, &src) in order.iter().enumerate() {
        for i in 0..N {
            vectors[i][k] = v[i][src];
        }
    }
    if N > 0 && signed_det(&vectors) < 0.0 {
        for row in vectors.iter_mut() {
            row[N - 1] = -row[N - 1];
        }
    }
    Ok(SymEigen { values, vectors })
}

fn signed_det<const N: usize>(m: &[[f64; N]; N]) -> f64 {
    // Gaussian elimination with partial pivoting; N is tiny.
    let mut a = *m;
    let mut det = 1.0;
    for col in 0..N {
        let pivot = (col..N)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap_or(col);
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for r in (col + 1)..N {
            let f = a[r][col] / a[col][col];
            for c in col..N {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    det
}

/// Thin SVD of an `R×C` matrix with `R ≥ C`.
///
/// Singular values are descending; `v` holds the right singular vectors as
/// columns in the same order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Svd<const C: usize> {
    pub values: [f64; C],
    pub v: [[f64; C]; C],
}

/// One-sided (Hestenes) Jacobi SVD. Accurate for small singular values, which
/// the rank decisions rely on.
pub fn svd<const R: usize, const C: usize>(m: &[[f64; C]; R]) -> Svd<C> {
    let mut u = *m;
    let mut v = identity::<C>();
    for _ in 0..60 {
        let mut rotated = false;
        for p in 0..C {
            for q in (p + 1)..C {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for row in u.iter() {
                    alpha += row[p] * row[p];
                    beta += row[q] * row[q];
                    gamma += row[p] * row[q];
                }
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for row in u.iter_mut() {
                    let up = row[p];
                    let uq = row[q];
                    row[p] = c * up - s * uq;
                    row[q] = s * up + c * uq;
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: [f64; C] = std::array::from_fn(|j| u.iter().map(|row| row[j] * row[j]).sum::<f64>().sqrt());
    let mut order: [usize; C] = std::array::from_fn(|i| i);
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let values = std::array::from_fn(|k| norms[order[k]]);
    let mut vs = [[0.0; C]; C];
    for (k, &src) in order.iter().enumerate() {
        for i in 0..C {
            vs[i][k] = v[i][src];
        }
    }
    Svd { values, v: vs }
}
