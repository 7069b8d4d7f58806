//! Constructors for the weakly Einstein families.
//!
//! Each family is assembled from a Singer–Thorpe prescription: the scalar
//! curvature, the eigenvalues of `e` along a frame, and the diagonal entries
//! of `W±` in the σ± bases of that frame. The EPS tensor is written down from
//! its literal components.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::FamilyError;
use crate::quaternion::{so4_from_pair, QuatPair, Quaternion, UnitQuaternion};
use crate::tensor::{from_frame_components, kn_product, CurvTensor, Frame, Sym2};

const TRACE_TOL: f64 = 1e-12;

/// Parameters of one family member. The frame is carried separately by
/// [`FamilyParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// Scalar-flat: `Σμ = Σc = 0`, W± spectra `±c`.
    Thm1 { mu: [f64; 4], c: [f64; 3] },
    /// `e`-spectrum `(−λ, −μ, μ, λ)` with `λ > μ ≥ 0`.
    Thm2 { s: f64, lambda: f64, mu: f64, c: [f64; 3] },
    /// `e`-spectrum `(−λ, −λ, λ, λ)`, one extra Weyl parameter ξ.
    Thm3 { s: f64, lambda: f64, xi: f64, c: [f64; 3] },
    KahlerType { s: f64, lambda: f64, xi: f64 },
    Eps { lambda: f64 },
    SingerThorpe { s: f64, mu: [f64; 4], w_plus: [f64; 3], w_minus: [f64; 3] },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Thm1 { .. } => "thm1",
            Family::Thm2 { .. } => "thm2",
            Family::Thm3 { .. } => "thm3",
            Family::KahlerType { .. } => "kahler",
            Family::Eps { .. } => "eps",
            Family::SingerThorpe { .. } => "singer-thorpe",
        }
    }

    pub fn build(&self, frame: &Frame) -> Result<CurvTensor, FamilyError> {
        match *self {
            Family::Thm1 { mu, c } => thm1(mu, c, frame),
            Family::Thm2 { s, lambda, mu, c } => thm2(s, lambda, mu, c, frame),
            Family::Thm3 { s, lambda, xi, c } => thm3(s, lambda, xi, c, frame),
            Family::KahlerType { s, lambda, xi } => kahler_type(s, lambda, xi, frame),
            Family::Eps { lambda } => Ok(from_frame_components(&eps(lambda)?, frame)),
            Family::SingerThorpe { s, mu, w_plus, w_minus } => singer_thorpe(frame, s, mu, w_plus, w_minus),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub family: Family,
    pub frame: Frame,
}

impl FamilyParams {
    pub fn build(&self) -> Result<CurvTensor, FamilyError> {
        self.family.build(&self.frame)
    }
}

fn check_finite(name: &'static str, xs: &[f64]) -> Result<(), FamilyError> {
    if xs.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(FamilyError::NonFinite(name))
    }
}

fn check_trace(what: &'static str, xs: &[f64]) -> Result<(), FamilyError> {
    let sum: f64 = xs.iter().sum();
    let mag = xs.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    if sum.abs() > TRACE_TOL * mag {
        return Err(FamilyError::TraceConstraint { what, sum });
    }
    Ok(())
}

fn check_lambda(lambda: f64) -> Result<(), FamilyError> {
    check_finite("lambda", &[lambda])?;
    if lambda <= 0.0 {
        return Err(FamilyError::LambdaPositive(lambda));
    }
    Ok(())
}

/// Tensor with scalar curvature `s`, Einstein eigenvalues `mu` along the
/// frame vectors, and `W±` diagonal in the σ± bases with entries `w_plus`,
/// `w_minus`.
pub fn singer_thorpe(
    frame: &Frame,
    s: f64,
    mu: [f64; 4],
    w_plus: [f64; 3],
    w_minus: [f64; 3],
) -> Result<CurvTensor, FamilyError> {
    check_finite("s", &[s])?;
    check_finite("mu", &mu)?;
    check_finite("w_plus", &w_plus)?;
    check_finite("w_minus", &w_minus)?;
    check_trace("Einstein eigenvalues μ", &mu)?;
    check_trace("W⁺ eigenvalues", &w_plus)?;
    check_trace("W⁻ eigenvalues", &w_minus)?;

    // W = [[P, Q], [Q, P]] with P ± Q the W± blocks in the frame's own basis
    let mut a = [[0.0; 6]; 6];
    for k in 0..3 {
        let p = 0.5 * (w_plus[k] + w_minus[k]);
        let q = 0.5 * (w_plus[k] - w_minus[k]);
        a[k][k] = p;
        a[k + 3][k + 3] = p;
        a[k][k + 3] = q;
        a[k + 3][k] = q;
    }
    let w = CurvTensor::from_matrix_unchecked(a);
    let g = Sym2::metric();
    let local = w + 0.5 * kn_product(&Sym2::diagonal(mu), &g) + (s / 24.0) * kn_product(&g, &g);
    Ok(from_frame_components(&local, frame))
}

pub fn thm1(mu: [f64; 4], c: [f64; 3], frame: &Frame) -> Result<CurvTensor, FamilyError> {
    check_trace("c", &c)?;
    singer_thorpe(frame, 0.0, mu, c, c.map(|x| -x))
}

pub fn thm2(s: f64, lambda: f64, mu: f64, c: [f64; 3], frame: &Frame) -> Result<CurvTensor, FamilyError> {
    check_finite("mu", &[mu])?;
    check_lambda(lambda)?;
    check_trace("c", &c)?;
    if !(lambda > mu && mu >= 0.0) {
        return Err(FamilyError::LambdaMuOrder { lambda, mu });
    }
    let base = [-s / 12.0, -s / 12.0, s / 6.0];
    let wp = std::array::from_fn(|k| c[k] + base[k]);
    let wm = std::array::from_fn(|k| -c[k] + base[k]);
    singer_thorpe(frame, s, [-lambda, -mu, mu, lambda], wp, wm)
}

pub fn thm3(s: f64, lambda: f64, xi: f64, c: [f64; 3], frame: &Frame) -> Result<CurvTensor, FamilyError> {
    check_finite("xi", &[xi])?;
    check_lambda(lambda)?;
    check_trace("c", &c)?;
    let base = [-s / 12.0, xi - s / 12.0, -xi + s / 6.0];
    let wp = std::array::from_fn(|k| c[k] + base[k]);
    let wm = std::array::from_fn(|k| -c[k] + base[k]);
    singer_thorpe(frame, s, [-lambda, -lambda, lambda, lambda], wp, wm)
}

/// Kähler-type member, prescribed through its W± spectra directly.
pub fn kahler_type(s: f64, lambda: f64, xi: f64, frame: &Frame) -> Result<CurvTensor, FamilyError> {
    check_finite("s", &[s])?;
    check_finite("xi", &[xi])?;
    check_lambda(lambda)?;
    let wp = [s / 6.0, -s / 12.0, -s / 12.0];
    let wm = [-s / 3.0, 2.0 * xi - s / 12.0, -2.0 * xi + 5.0 * s / 12.0];
    singer_thorpe(frame, s, [-lambda, -lambda, lambda, lambda], wp, wm)
}

/// The EPS curvature: `R1212 = R1313 = R1414 = R2323 = −R2424 = −R3434 = −λ/2`.
pub fn eps(lambda: f64) -> Result<CurvTensor, FamilyError> {
    check_lambda(lambda)?;
    let h = -lambda / 2.0;
    // diagonal slots in the β ordering (12, 13, 14, 34, 42, 23)
    let diag = [h, h, h, -h, -h, h];
    let mut a = [[0.0; 6]; 6];
    for (k, d) in diag.iter().enumerate() {
        a[k][k] = *d;
    }
    Ok(CurvTensor::from_matrix_unchecked(a))
}

fn uniform_unit(rng: &mut impl Rng) -> UnitQuaternion {
    loop {
        let q = Quaternion::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = q.norm();
        if n > 0.1 && n <= 1.0 {
            return UnitQuaternion::normalize(q).expect("nonzero");
        }
    }
}

/// Pair drawn uniformly from `S³ × S³` (rejection sampling).
pub fn random_pair(rng: &mut impl Rng) -> QuatPair {
    QuatPair::new(uniform_unit(rng), uniform_unit(rng))
}

/// Frame drawn uniformly from SO(4).
pub fn random_frame(rng: &mut impl Rng) -> Frame {
    so4_from_pair(&random_pair(rng))
}

fn trace_free3(rng: &mut impl Rng, mag: f64) -> [f64; 3] {
    let a = rng.gen_range(-mag..mag);
    let b = rng.gen_range(-mag..mag);
    [a, b, -a - b]
}

/// Trace-free μ in one of the shapes 1111, 211 or 31, in random order, with
/// distinct eigenvalues separated by at least 0.2.
fn trace_free_mu(rng: &mut impl Rng) -> [f64; 4] {
    let shape = rng.gen_range(0..3);
    let mut mu = loop {
        let a = signed(rng, 0.3, 3.0);
        let cand = match shape {
            0 => {
                let b = rng.gen_range(-3.0..3.0);
                let c = rng.gen_range(-3.0..3.0);
                [a, b, c, -a - b - c]
            }
            1 => {
                let b = rng.gen_range(-3.0..3.0);
                [a, a, b, -2.0 * a - b]
            }
            _ => [a, a, a, -3.0 * a],
        };
        if distinct_values(&cand) == [4, 3, 2][shape] {
            break cand;
        }
    };
    for i in (1..4).rev() {
        let j = rng.gen_range(0..=i);
        mu.swap(i, j);
    }
    mu
}

/// Number of distinct values, treating values closer than 0.2 as equal and
/// rejecting (as 0) near-coincidences in between.
fn distinct_values(mu: &[f64; 4]) -> usize {
    let mut sorted = *mu;
    sorted.sort_by(f64::total_cmp);
    let mut count = 1;
    for w in sorted.windows(2) {
        let gap = w[1] - w[0];
        if gap == 0.0 {
            continue;
        }
        if gap < 0.2 {
            return 0;
        }
        count += 1;
    }
    count
}

fn signed(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }
}

pub fn random_thm1(rng: &mut impl Rng) -> Family {
    Family::Thm1 { mu: trace_free_mu(rng), c: trace_free3(rng, 3.0) }
}

pub fn random_thm2(rng: &mut impl Rng) -> Family {
    let lambda = rng.gen_range(0.5..3.0);
    let mu = if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(0.1..lambda - 0.2) };
    Family::Thm2 { s: signed(rng, 0.5, 6.0), lambda, mu, c: trace_free3(rng, 3.0) }
}

pub fn random_thm3(rng: &mut impl Rng) -> Family {
    Family::Thm3 {
        s: rng.gen_range(-6.0..6.0),
        lambda: rng.gen_range(0.3..3.0),
        xi: rng.gen_range(-3.0..3.0),
        c: trace_free3(rng, 3.0),
    }
}

pub fn random_kahler(rng: &mut impl Rng) -> Family {
    Family::KahlerType { s: rng.gen_range(-6.0..6.0), lambda: rng.gen_range(0.3..3.0), xi: rng.gen_range(-3.0..3.0) }
}

/// A member of thm1, thm2, thm3 or kahler_type in a random frame.
pub fn random_family(rng: &mut impl Rng) -> FamilyParams {
    let family = match rng.gen_range(0..4) {
        0 => random_thm1(rng),
        1 => random_thm2(rng),
        2 => random_thm3(rng),
        _ => random_kahler(rng),
    };
    FamilyParams { family, frame: random_frame(rng) }
}

/// Deterministic weakly Einstein sample.
pub fn random_weakly_einstein(seed: u64) -> CurvTensor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_family(&mut rng).build().expect("random parameters are admissible")
}

/// Deterministic generic curvature tensor: Gaussian-like entries in [−1, 1)
/// with the Bianchi defect projected out.
pub fn random_curvature(seed: u64) -> CurvTensor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_curvature_with(&mut rng)
}

pub fn random_curvature_with(rng: &mut impl Rng) -> CurvTensor {
    let mut a = [[0.0; 6]; 6];
    for k in 0..6 {
        for l in k..6 {
            let v: f64 = rng.gen_range(-1.0..1.0);
            a[k][l] = v;
            a[l][k] = v;
        }
    }
    let t = (a[0][3] + a[1][4] + a[2][5]) / 3.0;
    for k in 0..3 {
        a[k][k + 3] -= t;
        a[k + 3][k] -= t;
    }
    CurvTensor::from_matrix_unchecked(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodge::w_pm_blocks;

    #[test]
    fn zero_prescription_is_zero() {
        let r = singer_thorpe(&Frame::identity(), 0.0, [0.0; 4], [0.0; 3], [0.0; 3]).unwrap();
        assert_eq!(r, CurvTensor::zero());
    }

    #[test]
    fn prescription_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = random_frame(&mut rng);
        let (s, mu, wp, wm) = (1.5, [-2.0, 0.5, 0.25, 1.25], [1.0, -0.25, -0.75], [0.5, 0.5, -1.0]);
        let r = singer_thorpe(&f, s, mu, wp, wm).unwrap();
        assert!((r.scalar() - s).abs() < 1e-12);
        let e = r.einstein().in_frame(&f);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { mu[i] } else { 0.0 };
                assert!((e.get(i, j) - want).abs() < 1e-12);
            }
        }
        let b = w_pm_blocks(&r, &f);
        assert!(b.max_off_diagonal() < 1e-12);
        for k in 0..3 {
            assert!((b.plus[k][k] - wp[k]).abs() < 1e-12);
            assert!((b.minus[k][k] - wm[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn einstein_when_mu_vanishes() {
        let r = singer_thorpe(&Frame::identity(), 3.0, [0.0; 4], [1.0, -2.0, 1.0], [0.0, 0.5, -0.5]).unwrap();
        assert!(r.einstein().max_abs() < 1e-14);
    }

    #[test]
    fn constraint_errors() {
        let f = Frame::identity();
        assert!(matches!(thm1([1.0, 0.0, 0.0, 0.0], [0.0; 3], &f), Err(FamilyError::TraceConstraint { .. })));
        assert!(matches!(thm1([0.0; 4], [1.0, 0.0, 0.0], &f), Err(FamilyError::TraceConstraint { .. })));
        assert!(matches!(thm2(1.0, 1.0, 1.0, [0.0; 3], &f), Err(FamilyError::LambdaMuOrder { .. })));
        assert!(matches!(thm2(1.0, 1.0, -0.5, [0.0; 3], &f), Err(FamilyError::LambdaMuOrder { .. })));
        assert!(matches!(thm3(1.0, 0.0, 0.0, [0.0; 3], &f), Err(FamilyError::LambdaPositive(_))));
        assert!(matches!(kahler_type(1.0, -1.0, 0.0, &f), Err(FamilyError::LambdaPositive(_))));
        assert!(matches!(eps(0.0), Err(FamilyError::LambdaPositive(_))));
        let msg = thm3(1.0, 0.0, 0.0, [0.0; 3], &f).unwrap_err().to_string();
        assert!(msg.contains("λ > 0 required"), "{msg}");
    }

    #[test]
    fn eps_homogeneous_and_literal() {
        let one = eps(1.0).unwrap();
        let two = eps(2.0).unwrap();
        assert!(two.max_abs_diff(&(2.0 * one)) == 0.0);
        assert_eq!(one.get(0, 1, 0, 1), -0.5);
        assert_eq!(one.get(1, 3, 1, 3), 0.5);
        assert_eq!(one.get(2, 3, 2, 3), 0.5);
        assert_eq!(one.get(1, 2, 1, 2), -0.5);
        assert_eq!(one.scalar(), -2.0);
    }

    #[test]
    fn thm1_trivial_when_c_vanishes() {
        let r = thm1([-3.0, 1.0, 1.0, 1.0], [0.0; 3], &Frame::identity()).unwrap();
        assert!(r.weyl().frobenius() < 1e-14);
        assert!(r.scalar().abs() < 1e-14);
    }

    #[test]
    fn thm3_at_zero_xi_matches_thm2_pattern() {
        let f = Frame::identity();
        let r = thm3(2.4, 1.0, 0.0, [0.3, -0.1, -0.2], &f).unwrap();
        let w = r.weyl();
        assert!((w.get(0, 1, 0, 1) + 0.2).abs() < 1e-14);
        assert!((w.get(0, 2, 0, 2) + 0.2).abs() < 1e-14);
        assert!((w.get(0, 3, 0, 3) - 0.4).abs() < 1e-14);
    }

    #[test]
    fn seeded_draws_are_reproducible() {
        assert_eq!(random_weakly_einstein(42), random_weakly_einstein(42));
        assert_eq!(random_curvature(9), random_curvature(9));
        assert_ne!(random_curvature(9), random_curvature(10));
    }
}
