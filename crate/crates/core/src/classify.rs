//! Weakly Einstein decision procedure and the inverse problem: recover the
//! family, its parameters and an adapted frame from a curvature tensor.
//!
//! An adapted frame is a positive orthonormal eigenframe of `e` whose σ±
//! bases also diagonalize `W±`. It is found case by case on the multiplicity
//! pattern of `e`:
//!
//! * `1111`: any ascending eigenframe already works.
//! * `211`: one planar rotation of the double eigenspace, chosen so the
//!   trace-free form `W(u^c ⊗ u^d + u^d ⊗ u^c)` restricted to that plane has
//!   zero diagonal (`c`, `d` the simple eigenvectors).
//! * `22`: independent rotations of both double eigenspaces by `α` and `β`
//!   rotate the last two σ⁺ by `α + β` and the last two σ⁻ by `β − α`, so the
//!   two 2×2 Weyl blocks are diagonalized independently.
//! * `31`: `s` must vanish; an SO(3) rotation of the triple eigenspace
//!   diagonalizes W⁺, and W⁻ = −W⁺ follows along.

use serde::{Deserialize, Serialize};

use crate::error::ClassifyError;
use crate::families::Family;
use crate::hodge::{apply_star, pm_blocks};
use crate::linalg::{self, Mat3};
use crate::quaternion::{so4_from_pair, unit_from_so3, QuatPair};
use crate::tensor::{wedge, CurvTensor, Frame, Sym2};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-7;
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    /// Relative tolerance for the decision, the frame diagonality and the
    /// reconstruction checks.
    pub tol: f64,
    /// Relative gap below which eigenvalues of `e` are merged.
    pub cluster_tol: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { tol: DEFAULT_TOL, cluster_tol: DEFAULT_CLUSTER_TOL }
    }
}

impl ClassifyOptions {
    pub fn with_tol(tol: f64) -> Self {
        ClassifyOptions { tol, ..Default::default() }
    }
}

/// The 4×3 coefficient matrix of the linear system for `(a2, a3, a4)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuMatrix {
    pub m: [[f64; 3]; 4],
    pub singular_values: [f64; 3],
    pub rank: usize,
    pub tol: f64,
}

impl MuMatrix {
    pub fn new(mu: [f64; 4], tol: f64) -> Self {
        let [m1, m2, m3, m4] = mu;
        let m = [[m2, m3, m4], [m1, m4, m3], [m4, m1, m2], [m3, m2, m1]];
        let sv = linalg::svd(&m).values;
        let rank = numerical_rank(&sv, tol);
        MuMatrix { m, singular_values: sv, rank, tol }
    }
}

fn numerical_rank(sv: &[f64], tol: f64) -> usize {
    let top = sv.iter().fold(0.0f64, |m, x| m.max(*x));
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&x| x > tol * top).count()
}

pub fn rank_rho(mu: [f64; 4], tol: f64) -> usize {
    MuMatrix::new(mu, tol).rank
}

/// Affine solution set `particular + span(directions)` of the μ-system
/// restricted to `a2 + a3 + a4 = 0`. `particular` is the minimum-norm point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionSet {
    pub particular: [f64; 3],
    pub directions: Vec<[f64; 3]>,
    /// Rank ρ of the unrestricted 4×3 matrix.
    pub rank: usize,
    pub residual: f64,
}

impl SolutionSet {
    pub fn is_unique(&self) -> bool {
        self.directions.is_empty()
    }
}

fn check_trace_free(mu: &[f64; 4]) -> Result<(), ClassifyError> {
    let sum: f64 = mu.iter().sum();
    let mag = mu.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    if sum.abs() > 1e-9 * mag {
        return Err(ClassifyError::TraceFree { sum });
    }
    Ok(())
}

/// Solves `M(μ) a = −(s/6) μ` with `Σa = 0`.
pub fn mu_system_solve(mu: [f64; 4], s: f64, tol: f64) -> Result<SolutionSet, ClassifyError> {
    check_trace_free(&mu)?;
    let mm = MuMatrix::new(mu, tol);
    let r2 = std::f64::consts::FRAC_1_SQRT_2;
    let r6 = 1.0 / 6.0f64.sqrt();
    // orthonormal basis of the plane Σa = 0, as columns
    let basis = [[r2, r6], [-r2, r6], [0.0, -2.0 * r6]];
    let mb = linalg::matmul(&mm.m, &basis);
    let rhs: [f64; 4] = mu.map(|x| -s * x / 6.0);
    let d = linalg::svd(&mb);
    let top = d.values[0];

    let mut t = [0.0; 2];
    let mut null = Vec::new();
    for i in 0..2 {
        let v = [d.v[0][i], d.v[1][i]];
        if top > 0.0 && d.values[i] > tol * top {
            let mv = linalg::matvec(&mb, &v);
            let coef = mv.iter().zip(rhs.iter()).map(|(a, b)| a * b).sum::<f64>() / (d.values[i] * d.values[i]);
            t[0] += coef * v[0];
            t[1] += coef * v[1];
        } else {
            null.push(linalg::matvec(&basis, &v));
        }
    }
    let a = linalg::matvec(&basis, &t);
    let ma = linalg::matvec(&mm.m, &a);
    let residual = ma.iter().zip(rhs.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let mu_mag = mu.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let a_mag = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let scale = (mu_mag * a_mag.max(s.abs()).max(1.0)).max(1.0);
    if residual > tol * scale {
        return Err(ClassifyError::Infeasible { residual });
    }
    Ok(SolutionSet { particular: a, directions: null, rank: mm.rank, residual })
}

/// Outcome of the weakly Einstein test.
///
/// Both residuals are max-abs entries divided by `scale²` (the tested
/// quantities are quadratic in `R`). The triple-contraction residual is
/// `3·|trc₀ R|`, which equals `|6We + se|` exactly in exact arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeakEinsteinReport {
    pub weakly_einstein: bool,
    pub trc_residual: f64,
    pub iff_residual: f64,
    pub residual: f64,
    pub tol: f64,
}

pub fn is_weakly_einstein(r: &CurvTensor, tol: f64) -> WeakEinsteinReport {
    let scale = r.scale();
    let norm = scale * scale;
    let trc = r.triple_contraction().trace_free();
    let trc_residual = 3.0 * trc.max_abs() / norm;
    let e = r.einstein();
    let we = r.weyl().act_on_sym2(&e);
    let iff = 6.0 * we + r.scalar() * e;
    let iff_residual = iff.max_abs() / norm;
    let residual = trc_residual.max(iff_residual);
    WeakEinsteinReport {
        weakly_einstein: trc_residual <= tol && iff_residual <= tol,
        trc_residual,
        iff_residual,
        residual,
        tol,
    }
}

/// Multiplicities of the eigenvalues of `e`, largest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Multiplicity {
    #[serde(rename = "4")]
    Four,
    #[serde(rename = "31")]
    ThreeOne,
    #[serde(rename = "22")]
    TwoTwo,
    #[serde(rename = "211")]
    TwoOneOne,
    #[serde(rename = "1111")]
    OneOneOneOne,
}

impl Multiplicity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Multiplicity::Four => "4",
            Multiplicity::ThreeOne => "31",
            Multiplicity::TwoTwo => "22",
            Multiplicity::TwoOneOne => "211",
            Multiplicity::OneOneOneOne => "1111",
        }
    }

    fn from_sizes(sizes: &[usize]) -> Self {
        let mut s = sizes.to_vec();
        s.sort_unstable_by(|a, b| b.cmp(a));
        match s.as_slice() {
            [4] => Multiplicity::Four,
            [3, 1] => Multiplicity::ThreeOne,
            [2, 2] => Multiplicity::TwoTwo,
            [2, 1, 1] => Multiplicity::TwoOneOne,
            _ => Multiplicity::OneOneOneOne,
        }
    }
}

impl std::fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Spectrum of `e`, ascending, with its eigenframe and clustering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    pub eigenvalues: [f64; 4],
    pub frame: Frame,
    pub multiplicity: Multiplicity,
    pub cluster_tol: f64,
    /// Index ranges `start..end` of the clusters, in ascending order.
    pub clusters: Vec<(usize, usize)>,
}

pub fn einstein_spectrum(r: &CurvTensor, cluster_tol: f64) -> SpectralData {
    sym2_spectrum(&r.einstein(), cluster_tol)
}

pub fn sym2_spectrum(e: &Sym2, cluster_tol: f64) -> SpectralData {
    let eig = e.eigen();
    let gap = cluster_tol * e.frobenius().max(1.0);
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..4 {
        if eig.values[i] - eig.values[i - 1] > gap {
            clusters.push((start, i));
            start = i;
        }
    }
    clusters.push((start, 4));
    let sizes: Vec<usize> = clusters.iter().map(|(a, b)| b - a).collect();
    SpectralData {
        eigenvalues: eig.values,
        frame: Frame::from_matrix_unchecked(eig.vectors),
        multiplicity: Multiplicity::from_sizes(&sizes),
        cluster_tol,
        clusters,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptedFrame {
    pub frame: Frame,
    pub multiplicity: Multiplicity,
    pub eigenvalues: [f64; 4],
    /// Largest off-diagonal entry of `e`, W⁺ and W⁻ in the frame, relative to scale.
    pub off_diagonal: f64,
}

/// Rotation of frame vectors `a`, `b` by `angle`: `u_a' = c u_a + s u_b`.
fn plane_rotation(a: usize, b: usize, angle: f64) -> Frame {
    let mut g = linalg::identity::<4>();
    let (s, c) = angle.sin_cos();
    g[a][a] = c;
    g[b][a] = s;
    g[a][b] = -s;
    g[b][b] = c;
    Frame::from_matrix_unchecked(g)
}

/// Angle ψ such that rotating a basis pair by ψ kills the off-diagonal entry
/// of the symmetric form `[[p, r], [r, q]]`.
fn diagonalizing_angle(p: f64, q: f64, r: f64) -> f64 {
    0.5 * (2.0 * r).atan2(p - q)
}

fn frame_off_diagonal(r: &CurvTensor, w: &CurvTensor, f: &Frame) -> f64 {
    let e = r.einstein().in_frame(f);
    let e_off = linalg::max_off_diagonal(&e.matrix());
    let blocks = pm_blocks(w, f);
    e_off.max(blocks.max_off_diagonal()) / r.scale()
}

pub fn adapted_frame(r: &CurvTensor, opts: &ClassifyOptions) -> Result<AdaptedFrame, ClassifyError> {
    let spectrum = einstein_spectrum(r, opts.cluster_tol);
    let w = r.weyl();
    let base = spectrum.frame;
    let frame = match spectrum.multiplicity {
        Multiplicity::Four => return Err(ClassifyError::Einstein),
        Multiplicity::OneOneOneOne => base,
        Multiplicity::TwoOneOne => {
            let (a, b) = spectrum.clusters.iter().find(|(s, e)| e - s == 2).map(|&(s, _)| (s, s + 1)).expect("211 has a pair");
            let simple: Vec<usize> = (0..4).filter(|&i| i != a && i != b).collect();
            let (c, d) = (simple[0], simple[1]);
            let wf = w.rotate(&base);
            // form W(u^c⊗u^d + u^d⊗u^c) on span(u_a, u_b); trace-free
            let m_aa = 2.0 * wf.get(a, c, a, d);
            let m_ab = wf.get(a, c, b, d) + wf.get(a, d, b, c);
            let beta = 0.5 * (-m_aa).atan2(m_ab);
            base.compose(&plane_rotation(a, b, beta))
        }
        Multiplicity::TwoTwo => {
            let blocks = pm_blocks(&w, &base);
            let psi_plus = diagonalizing_angle(blocks.plus[1][1], blocks.plus[2][2], blocks.plus[1][2]);
            let psi_minus = diagonalizing_angle(blocks.minus[1][1], blocks.minus[2][2], blocks.minus[1][2]);
            let alpha = 0.5 * (psi_plus - psi_minus);
            let beta = 0.5 * (psi_plus + psi_minus);
            base.compose(&plane_rotation(0, 1, alpha)).compose(&plane_rotation(2, 3, beta))
        }
        Multiplicity::ThreeOne => {
            let s = r.scalar();
            if s.abs() > opts.tol * r.scale() {
                return Err(ClassifyError::NonzeroScalarForTriple { s });
            }
            let (single, triple): (usize, [usize; 3]) =
                if spectrum.clusters[0].1 - spectrum.clusters[0].0 == 1 { (0, [1, 2, 3]) } else { (3, [0, 1, 2]) };
            let u = base.columns();
            let v = u[single];
            let tau: [_; 3] = std::array::from_fn(|k| {
                let x = wedge(&v, &u[triple[k]]);
                x + apply_star(&x)
            });
            let m: Mat3 = std::array::from_fn(|k| std::array::from_fn(|l| 0.5 * w.form(&tau[k], &tau[l])));
            let rot = linalg::sym_eigen(&m)?.vectors;
            let mut cols = u;
            for k in 0..3 {
                let mut t = crate::tensor::Vec4::default();
                for b in 0..3 {
                    t = t + rot[b][k] * u[triple[b]];
                }
                cols[triple[k]] = t;
            }
            let mut m4: linalg::Mat4 = std::array::from_fn(|i| std::array::from_fn(|j| cols[j].0[i]));
            if linalg::det4(&m4) < 0.0 {
                for row in m4.iter_mut() {
                    row[triple[2]] = -row[triple[2]];
                }
            }
            Frame::from_matrix_unchecked(m4)
        }
    };
    let off_diagonal = frame_off_diagonal(r, &w, &frame);
    if off_diagonal > opts.tol {
        return Err(ClassifyError::FrameSearch { off_diagonal });
    }
    let e = r.einstein().in_frame(&frame);
    Ok(AdaptedFrame {
        frame,
        multiplicity: spectrum.multiplicity,
        eigenvalues: std::array::from_fn(|i| e.get(i, i)),
        off_diagonal,
    })
}

/// For Einstein tensors: a frame whose σ± bases diagonalize W⁺ and W⁻,
/// built by lifting the two SO(3) eigenframes to unit quaternions.
pub fn einstein_adapted_frame(r: &CurvTensor) -> Result<Frame, ClassifyError> {
    let blocks = pm_blocks(&r.weyl(), &Frame::identity());
    let vp = linalg::sym_eigen(&blocks.plus)?.vectors;
    let vm = linalg::sym_eigen(&blocks.minus)?.vectors;
    let pair = QuatPair::new(unit_from_so3(&vp), unit_from_so3(&vm));
    Ok(so4_from_pair(&pair))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    NotWeaklyEinstein,
    Einstein,
    Thm1,
    Thm2,
    Thm3,
    /// Weakly Einstein at the tolerance, but no adapted frame or
    /// reconstruction passed it.
    Unresolved,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::NotWeaklyEinstein => "NotWeaklyEinstein",
            Verdict::Einstein => "Einstein",
            Verdict::Thm1 => "Thm1",
            Verdict::Thm2 => "Thm2",
            Verdict::Thm3 => "Thm3",
            Verdict::Unresolved => "Unresolved",
        }
    }

    pub fn is_weakly_einstein(&self) -> bool {
        !matches!(self, Verdict::NotWeaklyEinstein | Verdict::Unresolved)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: Verdict,
    /// Recovered parameters; rebuilding them in `frame` reproduces the input.
    pub family: Option<Family>,
    pub frame: Option<Frame>,
    pub multiplicity: Multiplicity,
    pub scalar: f64,
    pub eigenvalues: [f64; 4],
    pub report: WeakEinsteinReport,
    /// max-abs reconstruction error relative to scale.
    pub reconstruction_error: Option<f64>,
    pub off_diagonal: Option<f64>,
    pub note: Option<String>,
}

impl Classification {
    /// Largest constraint violation among the checks that were run.
    pub fn residual(&self) -> f64 {
        let mut r = self.report.residual;
        if let Some(x) = self.reconstruction_error {
            r = r.max(x);
        }
        if let Some(x) = self.off_diagonal {
            r = r.max(x);
        }
        r
    }
}

fn mean_free<const N: usize>(xs: [f64; N]) -> [f64; N] {
    let m = xs.iter().sum::<f64>() / N as f64;
    xs.map(|x| x - m)
}

pub fn classify(r: &CurvTensor, tol: f64) -> Classification {
    classify_with(r, &ClassifyOptions::with_tol(tol))
}

pub fn classify_with(r: &CurvTensor, opts: &ClassifyOptions) -> Classification {
    let report = is_weakly_einstein(r, opts.tol);
    let spectrum = einstein_spectrum(r, opts.cluster_tol);
    let s = r.scalar();
    let mut out = Classification {
        verdict: Verdict::NotWeaklyEinstein,
        family: None,
        frame: None,
        multiplicity: spectrum.multiplicity,
        scalar: s,
        eigenvalues: spectrum.eigenvalues,
        report,
        reconstruction_error: None,
        off_diagonal: None,
        note: None,
    };
    if !report.weakly_einstein {
        return out;
    }
    let scale = r.scale();

    let (verdict, family, frame) = if spectrum.multiplicity == Multiplicity::Four {
        let frame = match einstein_adapted_frame(r) {
            Ok(f) => f,
            Err(e) => return unresolved(out, e.to_string()),
        };
        let b = pm_blocks(&r.weyl(), &frame);
        out.off_diagonal = Some(b.max_off_diagonal() / scale);
        let family = Family::SingerThorpe { s, mu: [0.0; 4], w_plus: mean_free(b.diag_plus()), w_minus: mean_free(b.diag_minus()) };
        (Verdict::Einstein, family, frame)
    } else {
        let adapted = match adapted_frame(r, opts) {
            Ok(a) => a,
            Err(e) => return unresolved(out, e.to_string()),
        };
        out.off_diagonal = Some(adapted.off_diagonal);
        out.eigenvalues = adapted.eigenvalues;
        let frame = adapted.frame;
        let wf = r.weyl().rotate(&frame);
        let c = mean_free([wf.get(0, 1, 2, 3), wf.get(0, 2, 3, 1), wf.get(0, 3, 1, 2)]);
        let mu = mean_free(adapted.eigenvalues);
        if adapted.multiplicity == Multiplicity::TwoTwo {
            let lambda = (mu[2] + mu[3] - mu[0] - mu[1]) / 4.0;
            let xi = wf.get(0, 2, 0, 2) + s / 12.0;
            (Verdict::Thm3, Family::Thm3 { s, lambda, xi, c }, frame)
        } else if s.abs() <= opts.tol * scale {
            (Verdict::Thm1, Family::Thm1 { mu, c }, frame)
        } else {
            let lambda = 0.5 * (mu[3] - mu[0]);
            let mu_small = (0.5 * (mu[2] - mu[1])).max(0.0);
            (Verdict::Thm2, Family::Thm2 { s, lambda, mu: mu_small, c }, frame)
        }
    };

    out.family = Some(family);
    out.frame = Some(frame);
    let rebuilt = match family.build(&frame) {
        Ok(t) => t,
        Err(e) => return unresolved(out, e.to_string()),
    };
    let err = rebuilt.max_abs_diff(r) / scale;
    out.reconstruction_error = Some(err);
    if err > opts.tol {
        return unresolved(out, format!("reconstruction error {err:e} above tolerance"));
    }
    out.verdict = verdict;
    out
}

fn unresolved(mut out: Classification, note: String) -> Classification {
    out.verdict = Verdict::Unresolved;
    out.note = Some(note);
    out
}
