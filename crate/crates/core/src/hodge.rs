//! Hodge star on Λ², the self-dual/anti-self-dual bases attached to a frame,
//! and the 3×3 blocks W±.
//!
//! Orientation: `e1∧e2∧e3∧e4` is positive, so `⋆βk = βk+3` in the canonical
//! bivector ordering and the star matrix is `[[0, I], [I, 0]]`.

use serde::{Deserialize, Serialize};

use crate::linalg::Mat3;
use crate::tensor::{wedge, Bivector, CurvTensor, Frame};

pub fn star() -> [[f64; 6]; 6] {
    let mut s = [[0.0; 6]; 6];
    for k in 0..3 {
        s[k][k + 3] = 1.0;
        s[k + 3][k] = 1.0;
    }
    s
}

pub fn apply_star(b: &Bivector) -> Bivector {
    let c = b.0;
    Bivector([c[3], c[4], c[5], c[0], c[1], c[2]])
}

/// Length-√2 orthogonal bases of Λ⁺ and Λ⁻ attached to a positive
/// orthonormal frame:
///
/// ```text
/// σ±1 = u1∧u2 ± u3∧u4,  σ±2 = u1∧u3 ± u4∧u2,  σ±3 = u1∧u4 ± u2∧u3
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PmBases {
    pub plus: [Bivector; 3],
    pub minus: [Bivector; 3],
}

/// Index patterns `(a, b, c, d)` of the three σ± generators.
const PATTERNS: [[usize; 4]; 3] = [[0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];

pub fn pm_bases(f: &Frame) -> PmBases {
    let u = f.columns();
    let mut plus = [Bivector::default(); 3];
    let mut minus = [Bivector::default(); 3];
    for (k, &[a, b, c, d]) in PATTERNS.iter().enumerate() {
        let x = wedge(&u[a], &u[b]);
        let y = wedge(&u[c], &u[d]);
        plus[k] = x + y;
        minus[k] = x - y;
    }
    PmBases { plus, minus }
}

/// Matrices of an operator restricted to Λ± in the σ± bases. `cross` holds
/// the Λ⁺×Λ⁻ pairing, which vanishes for Weyl tensors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PmBlocks {
    pub plus: Mat3,
    pub minus: Mat3,
    pub cross: Mat3,
}

impl PmBlocks {
    /// Largest off-diagonal magnitude over both blocks.
    pub fn max_off_diagonal(&self) -> f64 {
        crate::linalg::max_off_diagonal(&self.plus).max(crate::linalg::max_off_diagonal(&self.minus))
    }

    pub fn diag_plus(&self) -> [f64; 3] {
        std::array::from_fn(|k| self.plus[k][k])
    }

    pub fn diag_minus(&self) -> [f64; 3] {
        std::array::from_fn(|k| self.minus[k][k])
    }
}

/// Blocks of `r` itself (no Weyl projection): entry `(k, l) = r(σk, σl) / 2`,
/// so the diagonal carries eigenvalues of the restricted operator.
pub fn pm_blocks(r: &CurvTensor, f: &Frame) -> PmBlocks {
    let b = pm_bases(f);
    let block = |x: &[Bivector; 3], y: &[Bivector; 3]| -> Mat3 {
        std::array::from_fn(|k| std::array::from_fn(|l| 0.5 * r.form(&x[k], &y[l])))
    };
    PmBlocks { plus: block(&b.plus, &b.plus), minus: block(&b.minus, &b.minus), cross: block(&b.plus, &b.minus) }
}

/// `(W⁺, W⁻)` of the Weyl part of `r` in the bases attached to `f`.
pub fn w_pm_blocks(r: &CurvTensor, f: &Frame) -> PmBlocks {
    pm_blocks(&r.weyl(), f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;

    #[test]
    fn star_is_symmetric_involution() {
        let s = star();
        assert_eq!(linalg::matmul(&s, &s), linalg::identity::<6>());
        assert_eq!(linalg::transpose(&s), s);
        assert_eq!(apply_star(&Bivector::basis(0)), Bivector::basis(3));
    }

    #[test]
    fn star_spectrum() {
        let e = linalg::sym_eigen(&star()).unwrap();
        let want = [-1.0, -1.0, -1.0, 1.0, 1.0, 1.0];
        for (got, w) in e.values.iter().zip(want.iter()) {
            assert!((got - w).abs() < 1e-14);
        }
    }

    #[test]
    fn identity_frame_bases() {
        let b = pm_bases(&Frame::identity());
        let beta = Bivector::basis;
        assert_eq!(b.plus, [beta(0) + beta(3), beta(1) + beta(4), beta(2) + beta(5)]);
        assert_eq!(b.minus[0], beta(0) - beta(3));
        for k in 0..3 {
            assert_eq!(apply_star(&b.plus[k]), b.plus[k]);
            assert_eq!(apply_star(&b.minus[k]), -b.minus[k]);
            assert!((b.plus[k].dot(&b.plus[k]) - 2.0).abs() < 1e-15);
        }
    }
}
