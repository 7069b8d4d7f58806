//! Algebraic curvature tensors in oriented Euclidean 4-space: Ricci and Weyl
//! decomposition, the Hodge splitting of Λ², the quaternionic description of
//! SO(4), constructors for the weakly Einstein families, and a classifier
//! that recovers family, parameters and adapted frame from a tensor.

pub mod classify;
pub mod error;
pub mod families;
pub mod hodge;
pub mod linalg;
pub mod quaternion;
pub mod tensor;
pub mod tensor_file;

pub use classify::{
    adapted_frame, classify, classify_with, einstein_spectrum, is_weakly_einstein, mu_system_solve, rank_rho,
    AdaptedFrame, Classification, ClassifyOptions, Multiplicity, MuMatrix, SolutionSet, SpectralData, Verdict,
    WeakEinsteinReport,
};
pub use error::{ClassifyError, FamilyError, FileError, LinalgError, QuaternionError, TensorError};
pub use families::{eps, kahler_type, singer_thorpe, thm1, thm2, thm3, Family, FamilyParams};
pub use hodge::{pm_bases, pm_blocks, star, w_pm_blocks, PmBases, PmBlocks};
pub use quaternion::{so3_from_unit, so4_from_pair, unit_from_so3, QuatPair, Quaternion, UnitQuaternion};
pub use tensor::{from_frame_components, kn_product, kn_square, wedge, Bivector, CurvTensor, Frame, Sym2, Vec4};
