//! Finite distributions, Shannon entropy, marginal models and rank vectors.

mod distribution;
mod model;
mod vector;

pub use distribution::{JointDistribution, DECIMAL_TV_TOLERANCE, DEFAULT_TOLERANCE};
pub use model::{
    check_compatibility, marginal_entropy_vector, marginal_lp, verify_marginal_lp,
    CompatibilityReport, CompatibilityViolation, MarginalLpVerdict, MarginalModel,
    DEFAULT_OUTCOME_CAP,
};
pub use vector::{
    partial_polymatroid_violation, PartialRankVector, PolymatroidViolation, RankVector,
    MAX_DENSE_N,
};

/// Marginal of `dist` on `target`.
pub fn marginalize(dist: &JointDistribution, target: crate::SubsetIndex) -> crate::Result<JointDistribution> {
    dist.marginalize(target)
}

/// Entropy of `dist` in bits.
pub fn shannon_entropy(dist: &JointDistribution) -> f64 {
    dist.shannon_entropy()
}

pub fn entropy_vector(dist: &JointDistribution) -> crate::Result<RankVector<f64>> {
    dist.entropy_vector()
}

pub fn mutual_information(
    dist: &JointDistribution,
    s: crate::SubsetIndex,
    t: crate::SubsetIndex,
    r: crate::SubsetIndex,
) -> crate::Result<f64> {
    dist.mutual_information(s, t, r)
}
