//! Closed-form inequality families and constructions: n-cycle facets, the Zhang-Yeung
//! inequality, submodular extension and the stochastic-process bound.

mod cycle;
mod fixtures;
mod submodular;

pub use cycle::{
    bit_block_model, check_cycle_contextuality, cycle_decomposition, cycle_inequalities,
    local_basic_inequalities, CycleVerdict,
};
pub use fixtures::{
    commoninfo, commoninfo2, cycle_contextual_model, figure_baynet, figure_baynet_listed_constraints,
    fzy_fixture, realize_zy_model, triangle_correlated, triangle_puc, trianglebox, zhang_yeung,
    FIGURE_BAYNET_OBSERVED,
};
pub use submodular::{submodular_extend, submodular_violation};

/// Lower bound on `I(A_1 : A_n)` for a stationary process.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ProcessBound {
    /// `max(0, raw)`.
    pub bound: f64,
    /// `H(A_1) − (n−1)·H(A_2|A_1)`, possibly negative.
    pub raw: f64,
    /// `⌊H(A_1)/H(A_2|A_1)⌋`; `None` when the conditional entropy is zero.
    pub horizon: Option<u64>,
}

pub fn process_bound(h1: f64, h_cond: f64, n: usize) -> crate::Result<ProcessBound> {
    if !(h1 >= 0.0) || !(h_cond >= 0.0) || !h1.is_finite() || !h_cond.is_finite() {
        return Err(crate::Error::domain("entropies must be finite and nonnegative"));
    }
    if n < 2 {
        return Err(crate::Error::domain("the bound needs n >= 2"));
    }
    let raw = h1 - (n - 1) as f64 * h_cond;
    let horizon = (h_cond > 0.0).then(|| (h1 / h_cond).floor() as u64);
    Ok(ProcessBound {
        bound: raw.max(0.0),
        raw,
        horizon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn process_bound_examples() {
        let b = process_bound(1.0, 0.0, 7).unwrap();
        assert_eq!((b.bound, b.horizon), (1.0, None));
        let b = process_bound(1.0, 0.25, 3).unwrap();
        assert_eq!(b.bound, 0.5);
        let b = process_bound(1.0, 0.25, 6).unwrap();
        assert_eq!((b.bound, b.raw, b.horizon), (0.0, -0.25, Some(4)));
        assert!(process_bound(-1.0, 0.0, 3).is_err());
        assert!(process_bound(1.0, 0.1, 1).is_err());
    }
}
