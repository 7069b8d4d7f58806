//! Quaternions and the double covers `S³ → SO(3)` and `S³×S³ → SO(4)`.
//!
//! The 4-space is identified with ℍ through `(1, i, j, k) ↔ (e1, e2, e3, e4)`,
//! and the pure quaternions `1⊥` with ℝ³ through `(i, j, k)`.

use std::ops::{Add, Mul, Neg};

use serde::{Deserialize, Serialize};

use crate::error::QuaternionError;
use crate::hodge::pm_bases;
use crate::linalg::{Mat3, Mat4};
use crate::tensor::{Bivector, Frame, Vec4};

pub const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ONE: Quaternion = Quaternion { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };
    pub const I: Quaternion = Quaternion { w: 0.0, x: 1.0, y: 0.0, z: 0.0 };
    pub const J: Quaternion = Quaternion { w: 0.0, x: 0.0, y: 1.0, z: 0.0 };
    pub const K: Quaternion = Quaternion { w: 0.0, x: 0.0, y: 0.0, z: 1.0 };

    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn from_vec4(v: &Vec4) -> Self {
        Quaternion::new(v.0[0], v.0[1], v.0[2], v.0[3])
    }

    pub fn to_vec4(self) -> Vec4 {
        Vec4([self.w, self.x, self.y, self.z])
    }

    pub fn pure(v: [f64; 3]) -> Self {
        Quaternion::new(0.0, v[0], v[1], v[2])
    }

    pub fn vector_part(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sq(&self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(self, c: f64) -> Self {
        Quaternion::new(c * self.w, c * self.x, c * self.y, c * self.z)
    }
}

/// Hamilton product, `i·j = k`.
pub fn qmul(a: Quaternion, b: Quaternion) -> Quaternion {
    Quaternion {
        w: a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        x: a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        y: a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        z: a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    }
}

pub fn qconj(a: Quaternion) -> Quaternion {
    a.conj()
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        qmul(self, o)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        self.scale(-1.0)
    }
}

/// Element of `S³`. Products are renormalized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitQuaternion(Quaternion);

impl UnitQuaternion {
    pub fn identity() -> Self {
        UnitQuaternion(Quaternion::ONE)
    }

    pub fn new(q: Quaternion) -> Result<Self, QuaternionError> {
        let norm = q.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOL {
            return Err(QuaternionError::NotUnit { norm });
        }
        Ok(UnitQuaternion(q.scale(1.0 / norm)))
    }

    /// Normalizes any nonzero quaternion.
    pub fn normalize(q: Quaternion) -> Result<Self, QuaternionError> {
        let norm = q.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(QuaternionError::NotUnit { norm });
        }
        Ok(UnitQuaternion(q.scale(1.0 / norm)))
    }

    /// `cos φ + sin φ · i`.
    pub fn phase_i(phi: f64) -> Self {
        UnitQuaternion(Quaternion::new(phi.cos(), phi.sin(), 0.0, 0.0))
    }

    pub fn get(&self) -> Quaternion {
        self.0
    }

    pub fn conj(&self) -> Self {
        UnitQuaternion(self.0.conj())
    }

    pub fn mul(&self, o: &UnitQuaternion) -> Self {
        let q = qmul(self.0, o.0);
        UnitQuaternion(q.scale(1.0 / q.norm()))
    }

    pub fn neg(&self) -> Self {
        UnitQuaternion(-self.0)
    }
}

/// `±(p, q)`; the canonical representative has the first nonzero
/// component of `p` positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuatPair {
    pub p: UnitQuaternion,
    pub q: UnitQuaternion,
}

impl QuatPair {
    pub fn new(p: UnitQuaternion, q: UnitQuaternion) -> Self {
        QuatPair { p, q }
    }

    pub fn canonical(&self) -> QuatPair {
        let c = self.p.get();
        let first = [c.w, c.x, c.y, c.z].into_iter().find(|v| *v != 0.0).unwrap_or(1.0);
        if first < 0.0 {
            QuatPair { p: self.p.neg(), q: self.q.neg() }
        } else {
            *self
        }
    }

    pub fn mul(&self, o: &QuatPair) -> QuatPair {
        QuatPair { p: self.p.mul(&o.p), q: self.q.mul(&o.q) }
    }
}

/// `x ↦ p x p̄` on `1⊥`; column `k` is the image of the k-th of `(i, j, k)`.
pub fn so3_from_unit(p: &UnitQuaternion) -> Mat3 {
    let p = p.get();
    let basis = [Quaternion::I, Quaternion::J, Quaternion::K];
    let mut m = [[0.0; 3]; 3];
    for (col, b) in basis.iter().enumerate() {
        let img = qmul(qmul(p, *b), p.conj()).vector_part();
        for row in 0..3 {
            m[row][col] = img[row];
        }
    }
    m
}

/// Frame `(p q̄, p i q̄, p j q̄, p k q̄)`, i.e. the matrix of `x ↦ p x q̄`.
pub fn so4_from_pair(pair: &QuatPair) -> Frame {
    let (p, q) = (pair.p.get(), pair.q.get());
    let basis = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];
    let mut m = [[0.0; 4]; 4];
    for (col, b) in basis.iter().enumerate() {
        let img = qmul(qmul(p, *b), q.conj()).to_vec4();
        for row in 0..4 {
            m[row][col] = img.0[row];
        }
    }
    Frame::from_matrix_unchecked(m)
}

/// Unit quaternion `p` with `so3_from_unit(p) = m`, for `m ∈ SO(3)`.
/// The sign is fixed so that the first nonzero component is positive.
pub fn unit_from_so3(m: &Mat3) -> UnitQuaternion {
    let tr = m[0][0] + m[1][1] + m[2][2];
    // Shepperd: pivot on the largest of (w², x², y², z²)
    let cand = [1.0 + tr, 1.0 + m[0][0] - m[1][1] - m[2][2], 1.0 - m[0][0] + m[1][1] - m[2][2], 1.0 - m[0][0] - m[1][1] + m[2][2]];
    let pivot = (0..4).max_by(|&a, &b| cand[a].total_cmp(&cand[b])).unwrap_or(0);
    let r = cand[pivot].max(0.0).sqrt();
    let h = 0.5 / r;
    let q = match pivot {
        0 => Quaternion::new(0.5 * r, (m[2][1] - m[1][2]) * h, (m[0][2] - m[2][0]) * h, (m[1][0] - m[0][1]) * h),
        1 => Quaternion::new((m[2][1] - m[1][2]) * h, 0.5 * r, (m[0][1] + m[1][0]) * h, (m[0][2] + m[2][0]) * h),
        2 => Quaternion::new((m[0][2] - m[2][0]) * h, (m[0][1] + m[1][0]) * h, 0.5 * r, (m[1][2] + m[2][1]) * h),
        _ => Quaternion::new((m[1][0] - m[0][1]) * h, (m[0][2] + m[2][0]) * h, (m[1][2] + m[2][1]) * h, 0.5 * r),
    };
    let u = UnitQuaternion(q.scale(1.0 / q.norm()));
    QuatPair::new(u, UnitQuaternion::identity()).canonical().p
}

/// Compares the σ± bases of `so4_from_pair(p, q)` with `so3_from_unit(p)`
/// acting on σ⁺ of the identity frame and `so3_from_unit(q)` on σ⁻.
/// Returns the largest coefficient deviation.
pub fn equivariance_check(pair: &QuatPair) -> f64 {
    let rotated = pm_bases(&so4_from_pair(pair));
    let base = pm_bases(&Frame::identity());
    let rp = so3_from_unit(&pair.p);
    let rq = so3_from_unit(&pair.q);
    let mut worst = 0.0f64;
    for k in 0..3 {
        let mut want_plus = Bivector::default();
        let mut want_minus = Bivector::default();
        for l in 0..3 {
            want_plus = want_plus + rp[l][k] * base.plus[l];
            want_minus = want_minus + rq[l][k] * base.minus[l];
        }
        for (got, want) in [(rotated.plus[k], want_plus), (rotated.minus[k], want_minus)] {
            worst = got.0.iter().zip(want.0.iter()).map(|(a, b)| (a - b).abs()).fold(worst, f64::max);
        }
    }
    worst
}

fn mult_op(v: [f64; 3], left: bool) -> Result<Mat4, QuaternionError> {
    let v = Quaternion::pure(v);
    let basis = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];
    let mut m = [[0.0; 4]; 4];
    for (col, b) in basis.iter().enumerate() {
        let img = if left { qmul(v, *b) } else { qmul(*b, v) }.to_vec4();
        for row in 0..4 {
            m[row][col] = img.0[row];
        }
    }
    Ok(m)
}

fn check_pure(v: &Quaternion) -> Result<[f64; 3], QuaternionError> {
    if v.w.abs() > UNIT_TOL * v.norm().max(1.0) {
        return Err(QuaternionError::NotPure { real: v.w });
    }
    Ok(v.vector_part())
}

/// Matrix of `x ↦ v x` for a pure quaternion `v`; lies in Λ⁺.
pub fn left_mult_op(v: &Quaternion) -> Result<Mat4, QuaternionError> {
    mult_op(check_pure(v)?, true)
}

/// Matrix of `x ↦ x v` for a pure quaternion `v`; lies in Λ⁻.
pub fn right_mult_op(v: &Quaternion) -> Result<Mat4, QuaternionError> {
    mult_op(check_pure(v)?, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodge::apply_star;
    use crate::linalg;

    #[test]
    fn hamilton_rules() {
        use Quaternion as Q;
        assert_eq!(Q::I * Q::J, Q::K);
        assert_eq!(Q::J * Q::K, Q::I);
        assert_eq!(Q::K * Q::I, Q::J);
        assert_eq!(Q::I * Q::I, -Q::ONE);
        let q = Q::new(0.5, -1.0, 2.0, 0.25);
        let n = q * q.conj();
        assert!((n.w - q.norm_sq()).abs() < 1e-15 && n.vector_part() == [0.0; 3]);
    }

    #[test]
    fn so3_identity_and_axis_rotation() {
        assert_eq!(so3_from_unit(&UnitQuaternion::identity()), linalg::identity::<3>());
        let theta: f64 = 0.7;
        let p = UnitQuaternion::phase_i(theta / 2.0);
        let m = so3_from_unit(&p);
        // j ↦ cos θ j + sin θ k
        assert!((m[1][1] - theta.cos()).abs() < 1e-15);
        assert!((m[2][1] - theta.sin()).abs() < 1e-15);
        assert!((m[1][2] + theta.sin()).abs() < 1e-15);
        assert!((m[0][0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn so4_identity_and_diagonal_pair() {
        let one = UnitQuaternion::identity();
        assert_eq!(*so4_from_pair(&QuatPair::new(one, one)).matrix(), linalg::identity::<4>());
        let p = UnitQuaternion::normalize(Quaternion::new(0.3, -0.4, 0.5, 0.7)).unwrap();
        let f = so4_from_pair(&QuatPair::new(p, p));
        let u1 = f.column(0);
        assert!((u1.0[0] - 1.0).abs() < 1e-15 && u1.0[1..].iter().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn mult_ops_split_self_dual() {
        let beta = Bivector::basis;
        let l = Bivector::from_skew_operator(&left_mult_op(&Quaternion::I).unwrap());
        assert_eq!(l, beta(0) + beta(3));
        let r = Bivector::from_skew_operator(&right_mult_op(&Quaternion::I).unwrap());
        assert_eq!(r, beta(0) - beta(3));
        for v in [Quaternion::J, Quaternion::K, Quaternion::pure([0.3, -1.0, 2.0])] {
            let l = Bivector::from_skew_operator(&left_mult_op(&v).unwrap());
            let r = Bivector::from_skew_operator(&right_mult_op(&v).unwrap());
            assert_eq!(apply_star(&l), l);
            assert_eq!(apply_star(&r), -r);
        }
        let a = left_mult_op(&Quaternion::pure([0.1, 0.2, -0.3])).unwrap();
        let b = right_mult_op(&Quaternion::pure([-0.5, 0.4, 0.9])).unwrap();
        assert!(linalg::max_abs_diff(&linalg::matmul(&a, &b), &linalg::matmul(&b, &a)) < 1e-15);
        assert!(matches!(left_mult_op(&Quaternion::ONE), Err(QuaternionError::NotPure { .. })));
    }

    #[test]
    fn unit_lift_round_trip() {
        let p = UnitQuaternion::normalize(Quaternion::new(-0.2, 0.9, 0.1, -0.4)).unwrap();
        let m = so3_from_unit(&p);
        let back = unit_from_so3(&m);
        assert!(linalg::max_abs_diff(&so3_from_unit(&back), &m) < 1e-14);
        let expected = QuatPair::new(p, p).canonical().p.get();
        assert!((back.get().w - expected.w).abs() < 1e-14);
    }

    #[test]
    fn canonical_representative() {
        let p = UnitQuaternion::normalize(Quaternion::new(-1.0, 1.0, 0.0, 0.0)).unwrap();
        let q = UnitQuaternion::identity();
        let c = QuatPair::new(p, q).canonical();
        assert!(c.p.get().w > 0.0 && c.q.get().w < 0.0);
        assert_eq!(so4_from_pair(&c), so4_from_pair(&QuatPair::new(p, q)));
    }

    #[test]
    fn non_unit_rejected() {
        assert!(matches!(UnitQuaternion::new(Quaternion::new(2.0, 0.0, 0.0, 0.0)), Err(QuaternionError::NotUnit { .. })));
    }
}
