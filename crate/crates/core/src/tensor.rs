//! Vectors, bivectors, symmetric 2-tensors and algebraic curvature tensors
//! in Euclidean 4-space.
//!
//! Bivectors use the fixed basis
//!
//! ```text
//! β1 = e1∧e2, β2 = e1∧e3, β3 = e1∧e4, β4 = e3∧e4, β5 = e4∧e2, β6 = e2∧e3
//! ```
//!
//! so that βk and βk+3 are Hodge-dual partners. A curvature tensor is stored
//! as the symmetric 6×6 matrix `A[k][l] = R(βk, βl)`; four-index components
//! are read off through [`PAIRS`], which also fixes the pair symmetries.
//!
//! Indices are 0-based throughout the Rust API. Curvature sign convention:
//! `r_ij = Σ_k R_ikjk`, so the unit sphere has `R_1212 = 1`.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::TensorError;
use crate::linalg::{self, Mat4, SymEigen};

/// Index pairs `(a, b)` with `βk = e_a ∧ e_b`.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2)];

/// Bianchi and symmetry checks on externally supplied matrices.
pub const INPUT_TOL: f64 = 1e-9;

/// Basis slot and sign of `e_i ∧ e_j`, or `None` when `i == j`.
pub fn pair_slot(i: usize, j: usize) -> Option<(usize, f64)> {
    PAIRS.iter().enumerate().find_map(|(k, &(a, b))| {
        if (a, b) == (i, j) {
            Some((k, 1.0))
        } else if (a, b) == (j, i) {
            Some((k, -1.0))
        } else {
            None
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec4(pub [f64; 4]);

impl Vec4 {
    pub fn basis(i: usize) -> Self {
        let mut v = [0.0; 4];
        v[i] = 1.0;
        Vec4(v)
    }

    pub fn dot(&self, other: &Vec4) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }
}

impl Add for Vec4 {
    type Output = Vec4;
    fn add(self, o: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for Vec4 {
    type Output = Vec4;
    fn sub(self, o: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Mul<Vec4> for f64 {
    type Output = Vec4;
    fn mul(self, v: Vec4) -> Vec4 {
        Vec4(v.0.map(|x| self * x))
    }
}

/// Element of Λ² in the canonical basis β1..β6.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Bivector(pub [f64; 6]);

impl Bivector {
    pub fn basis(k: usize) -> Self {
        let mut b = [0.0; 6];
        b[k] = 1.0;
        Bivector(b)
    }

    /// Inner product induced by g; the βk are orthonormal.
    pub fn dot(&self, other: &Bivector) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Skew endomorphism of the 4-space, with `(u∧v)w = g(u,w)v − g(v,w)u`.
    /// Rows index the output component.
    pub fn to_skew_operator(&self) -> Mat4 {
        let mut m = [[0.0; 4]; 4];
        for (k, &(a, b)) in PAIRS.iter().enumerate() {
            m[b][a] += self.0[k];
            m[a][b] -= self.0[k];
        }
        m
    }

    /// Inverse of [`Bivector::to_skew_operator`] on its (skew) part.
    pub fn from_skew_operator(m: &Mat4) -> Self {
        Bivector(std::array::from_fn(|k| {
            let (a, b) = PAIRS[k];
            0.5 * (m[b][a] - m[a][b])
        }))
    }
}

impl Add for Bivector {
    type Output = Bivector;
    fn add(self, o: Bivector) -> Bivector {
        Bivector(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for Bivector {
    type Output = Bivector;
    fn sub(self, o: Bivector) -> Bivector {
        Bivector(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Neg for Bivector {
    type Output = Bivector;
    fn neg(self) -> Bivector {
        Bivector(self.0.map(|x| -x))
    }
}

impl Mul<Bivector> for f64 {
    type Output = Bivector;
    fn mul(self, b: Bivector) -> Bivector {
        Bivector(b.0.map(|x| self * x))
    }
}

/// `u ∧ v`: coefficients are the 2×2 minors of `(u, v)`.
pub fn wedge(u: &Vec4, v: &Vec4) -> Bivector {
    Bivector(std::array::from_fn(|k| {
        let (a, b) = PAIRS[k];
        u.0[a] * v.0[b] - u.0[b] * v.0[a]
    }))
}

/// Symmetric (0,2) tensor; only the upper triangle is stored.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Sym2([f64; 10]);

#[inline]
fn sym_slot(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // row-major upper triangle of a 4×4 matrix
    i * 4 - i * (i + 1) / 2 + j
}

impl Sym2 {
    pub fn zero() -> Self {
        Sym2([0.0; 10])
    }

    /// The inner product g.
    pub fn metric() -> Self {
        Sym2::diagonal([1.0; 4])
    }

    pub fn diagonal(d: [f64; 4]) -> Self {
        Sym2::from_fn(|i, j| if i == j { d[i] } else { 0.0 })
    }

    /// Builds from `f(i, j)` evaluated on the upper triangle.
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut s = [0.0; 10];
        for i in 0..4 {
            for j in i..4 {
                s[sym_slot(i, j)] = f(i, j);
            }
        }
        Sym2(s)
    }

    /// Symmetric part of an arbitrary 4×4 matrix.
    pub fn from_matrix(m: &Mat4) -> Self {
        Sym2::from_fn(|i, j| 0.5 * (m[i][j] + m[j][i]))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[sym_slot(i, j)]
    }

    pub fn matrix(&self) -> Mat4 {
        std::array::from_fn(|i| std::array::from_fn(|j| self.get(i, j)))
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius(&self) -> f64 {
        linalg::frobenius(&self.matrix())
    }

    /// Trace-free part.
    pub fn trace_free(&self) -> Sym2 {
        let t = self.trace() / 4.0;
        *self - t * Sym2::metric()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn eigen(&self) -> SymEigen<4> {
        // storage is symmetric by construction
        linalg::sym_eigen(&self.matrix()).expect("Sym2 is symmetric")
    }

    /// Components in the orthonormal frame `f`: `b'_ab = b(u_a, u_b)`.
    pub fn in_frame(&self, f: &Frame) -> Sym2 {
        let m = linalg::matmul(&linalg::matmul(&linalg::transpose(&f.m), &self.matrix()), &f.m);
        Sym2::from_matrix(&m)
    }
}

impl Add for Sym2 {
    type Output = Sym2;
    fn add(self, o: Sym2) -> Sym2 {
        Sym2(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for Sym2 {
    type Output = Sym2;
    fn sub(self, o: Sym2) -> Sym2 {
        Sym2(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Mul<Sym2> for f64 {
    type Output = Sym2;
    fn mul(self, s: Sym2) -> Sym2 {
        Sym2(s.0.map(|x| self * x))
    }
}

/// Positive orthonormal basis `u1..u4`, stored as the matrix whose columns
/// are the `u_j` in standard coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    m: Mat4,
}

impl Frame {
    pub const TOL: f64 = 1e-9;

    pub fn identity() -> Self {
        Frame { m: linalg::identity() }
    }

    /// Validates orthogonality and orientation.
    pub fn new(m: Mat4) -> Result<Self, TensorError> {
        if m.iter().flatten().any(|x| !x.is_finite()) {
            return Err(TensorError::NonFinite);
        }
        let gram = linalg::matmul(&linalg::transpose(&m), &m);
        let defect = linalg::max_abs_diff(&gram, &linalg::identity());
        if defect > Self::TOL {
            return Err(TensorError::NotOrthogonal { defect });
        }
        let det = linalg::det4(&m);
        if det <= 0.0 {
            return Err(TensorError::NotPositive { det });
        }
        Ok(Frame { m })
    }

    /// Builds from the four basis vectors.
    pub fn from_columns(cols: [Vec4; 4]) -> Result<Self, TensorError> {
        Frame::new(std::array::from_fn(|i| std::array::from_fn(|j| cols[j].0[i])))
    }

    pub(crate) fn from_matrix_unchecked(m: Mat4) -> Self {
        Frame { m }
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.m
    }

    pub fn column(&self, j: usize) -> Vec4 {
        Vec4(std::array::from_fn(|i| self.m[i][j]))
    }

    pub fn columns(&self) -> [Vec4; 4] {
        std::array::from_fn(|j| self.column(j))
    }

    /// Frame `F·G`: the frame whose vectors have coordinates `G` relative to `F`.
    pub fn compose(&self, g: &Frame) -> Frame {
        Frame { m: linalg::matmul(&self.m, &g.m) }
    }

    pub fn inverse(&self) -> Frame {
        Frame { m: linalg::transpose(&self.m) }
    }

    pub fn gram_defect(&self) -> f64 {
        let gram = linalg::matmul(&linalg::transpose(&self.m), &self.m);
        linalg::max_abs_diff(&gram, &linalg::identity())
    }

    /// Matrix of the induced map on Λ²: column k holds `u_a ∧ u_b` for `(a, b) = PAIRS[k]`.
    pub fn bivector_matrix(&self) -> [[f64; 6]; 6] {
        let mut l = [[0.0; 6]; 6];
        for (k, &(a, b)) in PAIRS.iter().enumerate() {
            let w = wedge(&self.column(a), &self.column(b));
            for (row, x) in w.0.iter().enumerate() {
                l[row][k] = *x;
            }
        }
        l
    }
}

impl Default for Frame {
    fn default() -> Self {
        Frame::identity()
    }
}

/// Algebraic curvature tensor as a symmetric bilinear form on Λ².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvTensor {
    a: [[f64; 6]; 6],
}

impl CurvTensor {
    pub fn zero() -> Self {
        CurvTensor { a: [[0.0; 6]; 6] }
    }

    /// Validates symmetry and the first Bianchi identity at [`INPUT_TOL`]
    /// (relative), then stores the exact symmetric part with the Bianchi
    /// defect projected out.
    pub fn from_matrix(a: [[f64; 6]; 6]) -> Result<Self, TensorError> {
        if a.iter().flatten().any(|x| !x.is_finite()) {
            return Err(TensorError::NonFinite);
        }
        let scale = linalg::frobenius(&a).max(1.0);
        let mut sym_defect = 0.0f64;
        for k in 0..6 {
            for l in (k + 1)..6 {
                sym_defect = sym_defect.max((a[k][l] - a[l][k]).abs());
            }
        }
        if sym_defect > INPUT_TOL * scale {
            return Err(TensorError::NotSymmetric { defect: sym_defect });
        }
        let r = Self::from_matrix_unchecked(a);
        let defect = r.bianchi_defect().abs();
        if defect > INPUT_TOL * scale {
            return Err(TensorError::Bianchi { defect });
        }
        Ok(r.project_bianchi())
    }

    /// Stores the symmetric part without a Bianchi check.
    pub(crate) fn from_matrix_unchecked(a: [[f64; 6]; 6]) -> Self {
        let mut s = a;
        for k in 0..6 {
            for l in (k + 1)..6 {
                let avg = 0.5 * (a[k][l] + a[l][k]);
                s[k][l] = avg;
                s[l][k] = avg;
            }
        }
        CurvTensor { a: s }
    }

    /// `A[k][l] = f(a, b, c, d)` for `βk = e_a∧e_b`, `βl = e_c∧e_d`.
    /// `f` must have the curvature symmetries for the result to be meaningful.
    pub fn from_fn(f: impl Fn(usize, usize, usize, usize) -> f64) -> Self {
        let mut a = [[0.0; 6]; 6];
        for (k, &(i, j)) in PAIRS.iter().enumerate() {
            for (l, &(p, q)) in PAIRS.iter().enumerate() {
                a[k][l] = f(i, j, p, q);
            }
        }
        Self::from_matrix_unchecked(a)
    }

    pub fn matrix(&self) -> &[[f64; 6]; 6] {
        &self.a
    }

    /// `R_{ijkl}` in the standard basis (0-based; zero when `i == j` or `k == l`).
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        match (pair_slot(i, j), pair_slot(k, l)) {
            (Some((x, sx)), Some((y, sy))) => sx * sy * self.a[x][y],
            _ => 0.0,
        }
    }

    /// `R(u_i∧u_j, u_k∧u_l)` in frame `f`, with 1-based indices.
    pub fn component(&self, f: &Frame, idx: (usize, usize, usize, usize)) -> Result<f64, TensorError> {
        let (i, j, k, l) = idx;
        for n in [i, j, k, l] {
            if !(1..=4).contains(&n) {
                return Err(TensorError::IndexOutOfRange(n));
            }
        }
        let u = f.columns();
        let x = wedge(&u[i - 1], &u[j - 1]);
        let y = wedge(&u[k - 1], &u[l - 1]);
        Ok(self.form(&x, &y))
    }

    /// Bilinear form `R(x, y)` on bivectors.
    pub fn form(&self, x: &Bivector, y: &Bivector) -> f64 {
        let ay = linalg::matvec(&self.a, &y.0);
        x.0.iter().zip(ay.iter()).map(|(p, q)| p * q).sum()
    }

    /// `R_1234 + R_1342 + R_1423`.
    pub fn bianchi_defect(&self) -> f64 {
        self.a[0][3] + self.a[1][4] + self.a[2][5]
    }

    fn project_bianchi(mut self) -> Self {
        let t = self.bianchi_defect() / 3.0;
        for k in 0..3 {
            self.a[k][k + 3] -= t;
            self.a[k + 3][k] -= t;
        }
        self
    }

    pub fn frobenius(&self) -> f64 {
        linalg::frobenius(&self.a)
    }

    /// `max(1, ‖A‖_F)`: the reference magnitude for relative tolerances.
    pub fn scale(&self) -> f64 {
        self.frobenius().max(1.0)
    }

    pub fn max_abs_diff(&self, other: &CurvTensor) -> f64 {
        linalg::max_abs_diff(&self.a, &other.a)
    }

    /// Components of `R` in the frame `f`, as a tensor in canonical coordinates.
    pub fn rotate(&self, f: &Frame) -> CurvTensor {
        let l = f.bivector_matrix();
        let lt = linalg::transpose(&l);
        Self::from_matrix_unchecked(linalg::matmul(&linalg::matmul(&lt, &self.a), &l))
    }

    pub fn ricci(&self) -> Sym2 {
        Sym2::from_fn(|i, j| (0..4).map(|k| self.get(i, k, j, k)).sum())
    }

    pub fn scalar(&self) -> f64 {
        self.ricci().trace()
    }

    /// `e = r − (s/4) g`.
    pub fn einstein(&self) -> Sym2 {
        self.ricci().trace_free()
    }

    /// `W = R − ½ (e ∧ g) − (s/24)(g ∧ g)`.
    pub fn weyl(&self) -> CurvTensor {
        let r = self.ricci();
        let s = r.trace();
        let e = r.trace_free();
        let eg = kn_product(&e, &Sym2::metric());
        let gg = kn_product(&Sym2::metric(), &Sym2::metric());
        *self - 0.5 * eg - (s / 24.0) * gg
    }

    /// `[trc R]_ij = Σ_{k,p,q} R_ikpq R_jkpq`.
    pub fn triple_contraction(&self) -> Sym2 {
        // rows[i][k] = (R_{ik,βm})_m; the full (p, q) sum counts each pair twice
        let mut rows = [[[0.0; 6]; 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            for (k, slot) in row.iter_mut().enumerate() {
                if let Some((x, sign)) = pair_slot(i, k) {
                    *slot = self.a[x].map(|v| sign * v);
                }
            }
        }
        Sym2::from_fn(|i, j| {
            let mut acc = 0.0;
            for k in 0..4 {
                for m in 0..6 {
                    acc += rows[i][k][m] * rows[j][k][m];
                }
            }
            2.0 * acc
        })
    }

    /// `[R b]_ij = Σ_{p,q} R_ipjq b_pq`.
    pub fn act_on_sym2(&self, b: &Sym2) -> Sym2 {
        Sym2::from_fn(|i, j| {
            let mut acc = 0.0;
            for p in 0..4 {
                for q in 0..4 {
                    let bpq = b.get(p, q);
                    if bpq != 0.0 {
                        acc += self.get(i, p, j, q) * bpq;
                    }
                }
            }
            acc
        })
    }

    /// `R` acting on Λ² as the endomorphism with matrix `A` in the orthonormal
    /// basis βk; equal to `½ Σ_{p,q} R_ijpq b^pq` in index form.
    pub fn act_on_bivector(&self, b: &Bivector) -> Bivector {
        Bivector(linalg::matvec(&self.a, &b.0))
    }
}

impl Add for CurvTensor {
    type Output = CurvTensor;
    fn add(self, o: CurvTensor) -> CurvTensor {
        CurvTensor { a: std::array::from_fn(|k| std::array::from_fn(|l| self.a[k][l] + o.a[k][l])) }
    }
}

impl Sub for CurvTensor {
    type Output = CurvTensor;
    fn sub(self, o: CurvTensor) -> CurvTensor {
        CurvTensor { a: std::array::from_fn(|k| std::array::from_fn(|l| self.a[k][l] - o.a[k][l])) }
    }
}

impl Mul<CurvTensor> for f64 {
    type Output = CurvTensor;
    fn mul(self, r: CurvTensor) -> CurvTensor {
        CurvTensor { a: r.a.map(|row| row.map(|x| self * x)) }
    }
}

/// `(h ∧ k)_ijkl = h_ik k_jl + k_ik h_jl − h_il k_jk − k_il h_jk`.
pub fn kn_product(h: &Sym2, k: &Sym2) -> CurvTensor {
    CurvTensor::from_fn(|a, b, c, d| {
        h.get(a, c) * k.get(b, d) + k.get(a, c) * h.get(b, d) - h.get(a, d) * k.get(b, c) - k.get(a, d) * h.get(b, c)
    })
}

/// Kulkarni–Nomizu square `R_ijkl = b_ik b_jl − b_il b_jk` (half of `b ∧ b`).
pub fn kn_square(b: &Sym2) -> CurvTensor {
    CurvTensor::from_fn(|i, j, k, l| b.get(i, k) * b.get(j, l) - b.get(i, l) * b.get(j, k))
}

/// Rebuilds the inverse rotation: the tensor whose components in `f` are `r`.
pub fn from_frame_components(r: &CurvTensor, f: &Frame) -> CurvTensor {
    r.rotate(&f.inverse())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn e(i: usize) -> Vec4 {
        Vec4::basis(i)
    }

    fn sample() -> CurvTensor {
        let mut a = [[0.0; 6]; 6];
        for k in 0..6 {
            for l in k..6 {
                let v = ((k * 7 + l * 3) % 11) as f64 / 3.0 - 1.5;
                a[k][l] = v;
                a[l][k] = v;
            }
        }
        CurvTensor::from_matrix_unchecked(a).project_bianchi()
    }

    #[test]
    fn wedge_basis_and_antisymmetry() {
        assert_eq!(wedge(&e(0), &e(1)), Bivector::basis(0));
        assert_eq!(wedge(&e(3), &e(1)), Bivector::basis(4));
        let u = Vec4([0.3, -1.0, 2.0, 0.5]);
        assert_eq!(wedge(&u, &u), Bivector::default());
        // (e1 + e2) ∧ e3 = e1∧e3 + e2∧e3
        assert_eq!(wedge(&(e(0) + e(1)), &e(2)), Bivector::basis(1) + Bivector::basis(5));
    }

    #[test]
    fn skew_operator_of_beta1() {
        let m = Bivector::basis(0).to_skew_operator();
        let apply = |v: Vec4| Vec4(linalg::matvec(&m, &v.0));
        assert_eq!(apply(e(0)), e(1));
        assert_eq!(apply(e(1)), -1.0 * e(0));
        assert_eq!(apply(e(2)), Vec4::default());
        assert_eq!(apply(e(3)), Vec4::default());
    }

    #[test]
    fn self_dual_generator_is_complex_structure() {
        let j = (Bivector::basis(0) + Bivector::basis(3)).to_skew_operator();
        let jj = linalg::matmul(&j, &j);
        let minus_id: Mat4 = std::array::from_fn(|i| std::array::from_fn(|k| if i == k { -1.0 } else { 0.0 }));
        assert_eq!(jj, minus_id);
    }

    #[test]
    fn skew_operator_round_trip() {
        let b = Bivector([0.5, -1.0, 2.0, 0.25, 3.0, -0.75]);
        let m = b.to_skew_operator();
        let mt = linalg::transpose(&m);
        for i in 0..4 {
            for j in 0..4 {
                assert_abs_diff_eq!(m[i][j], -mt[i][j], epsilon = 1e-15);
            }
        }
        assert_eq!(Bivector::from_skew_operator(&m), b);
    }

    #[test]
    fn component_reads_identity_frame() {
        let r = sample();
        let f = Frame::identity();
        assert_eq!(r.component(&f, (1, 2, 1, 2)).unwrap(), r.matrix()[0][0]);
        assert_eq!(r.component(&f, (1, 2, 3, 4)).unwrap(), r.matrix()[0][3]);
        assert_eq!(r.component(&f, (2, 1, 3, 4)).unwrap(), -r.matrix()[0][3]);
        let b = r.component(&f, (1, 2, 3, 4)).unwrap()
            + r.component(&f, (1, 3, 4, 2)).unwrap()
            + r.component(&f, (1, 4, 2, 3)).unwrap();
        assert!(b.abs() < 1e-15);
        assert_eq!(r.component(&f, (0, 2, 1, 2)), Err(TensorError::IndexOutOfRange(0)));
        assert_eq!(r.component(&f, (1, 2, 5, 2)), Err(TensorError::IndexOutOfRange(5)));
    }

    #[test]
    fn pair_symmetries_of_get() {
        let r = sample();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        let x = r.get(i, j, k, l);
                        assert_eq!(x, -r.get(j, i, k, l));
                        assert_eq!(x, r.get(k, l, i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn unit_sphere_from_kn_square_of_metric() {
        let r = kn_square(&Sym2::metric());
        assert_eq!(r.get(0, 1, 0, 1), 1.0);
        assert_eq!(r.scalar(), 12.0);
        assert!(r.einstein().max_abs() < 1e-15);
        assert!(r.weyl().frobenius() < 1e-14);
    }

    #[test]
    fn kn_square_three_one() {
        let d = 0.7;
        let r = kn_square(&Sym2::diagonal([d, d, d, -d]));
        assert_abs_diff_eq!(r.get(0, 1, 0, 1), d * d, epsilon = 1e-15);
        assert_abs_diff_eq!(r.get(1, 3, 1, 3), -d * d, epsilon = 1e-15);
        assert_abs_diff_eq!(r.scalar(), 0.0, epsilon = 1e-15);
        let ric = r.ricci();
        for (i, want) in [d * d, d * d, d * d, -3.0 * d * d].iter().enumerate() {
            assert_abs_diff_eq!(ric.get(i, i), *want, epsilon = 1e-15);
        }
        assert!(r.weyl().frobenius() < 1e-14);
    }

    #[test]
    fn kn_square_two_two_is_einstein() {
        let r = kn_square(&Sym2::diagonal([1.3, 1.3, -1.3, -1.3]));
        assert!(r.einstein().max_abs() < 1e-14);
    }

    #[test]
    fn act_on_metric_is_ricci() {
        let r = sample();
        let a = r.act_on_sym2(&Sym2::metric());
        assert!((a - r.ricci()).max_abs() < 1e-14);
    }

    #[test]
    fn weyl_is_traceless_and_star_commuting() {
        let w = sample().weyl();
        assert!(w.ricci().max_abs() < 1e-13);
        assert!(w.bianchi_defect().abs() < 1e-13);
        let a = w.matrix();
        for k in 0..3 {
            for l in 0..3 {
                assert_abs_diff_eq!(a[k][l], a[k + 3][l + 3], epsilon = 1e-13);
                assert_abs_diff_eq!(a[k][l + 3], a[k + 3][l], epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn rotate_identity_and_invariance() {
        let r = sample();
        assert!(r.rotate(&Frame::identity()).max_abs_diff(&r) < 1e-15);
        let c = std::f64::consts::FRAC_1_SQRT_2;
        let f = Frame::new([[c, -c, 0.0, 0.0], [c, c, 0.0, 0.0], [0.0, 0.0, 0.0, -1.0], [0.0, 0.0, 1.0, 0.0]]).unwrap();
        let rr = r.rotate(&f);
        assert_abs_diff_eq!(rr.scalar(), r.scalar(), epsilon = 1e-13);
        assert!(from_frame_components(&rr, &f).max_abs_diff(&r) < 1e-14);
    }

    #[test]
    fn frame_validation() {
        assert!(matches!(Frame::new([[2.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]]), Err(TensorError::NotOrthogonal { .. })));
        let mut m = linalg::identity::<4>();
        m[3][3] = -1.0;
        assert!(matches!(Frame::new(m), Err(TensorError::NotPositive { .. })));
    }

    #[test]
    fn from_matrix_checks() {
        let mut a = [[0.0; 6]; 6];
        a[0][3] = 1.0;
        a[3][0] = 1.0;
        assert!(matches!(CurvTensor::from_matrix(a), Err(TensorError::Bianchi { .. })));
        a[1][4] = -1.0;
        a[4][1] = -1.0;
        assert!(CurvTensor::from_matrix(a).is_ok());
        a[0][1] = 0.5;
        assert!(matches!(CurvTensor::from_matrix(a), Err(TensorError::NotSymmetric { .. })));
    }

    #[test]
    fn sym2_slots_cover_upper_triangle() {
        let mut seen = [false; 10];
        for i in 0..4 {
            for j in i..4 {
                seen[sym_slot(i, j)] = true;
                assert_eq!(sym_slot(i, j), sym_slot(j, i));
            }
        }
        assert!(seen.iter().all(|&b| b));
    }
}
