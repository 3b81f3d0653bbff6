//! Exact commutation checks.
//!
//! The primary path never materializes a matrix: a constraint row embeds as a
//! diagonal operator, so a ladder term commutes with it exactly when the
//! row's eigenvalue is equal at the two ends of every basis transition the
//! term induces. The [`matrix`] submodule provides an independent, literal
//! sparse-matrix commutator over exact complex rationals; it exists as a slow
//! oracle and is what `--dense-oracle` runs.

pub mod matrix;

use num_bigint::BigInt;
use thiserror::Error;

use crate::algebra::{DriverHamiltonian, DriverTerm};
use crate::model::ConstraintSet;
use crate::{DEFAULT_STATE_CAP, HARD_STATE_CAP};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("n = {n} exceeds the state-enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("cap {cap} exceeds the hard limit {hard}")]
    CapAboveHardLimit { cap: usize, hard: usize },
    #[error("term uses site {site} but the instance has n = {n}")]
    SiteOutOfRange { site: usize, n: usize },
}

fn check_cap(n: usize, cap: usize) -> Result<(), VerifyError> {
    if cap > HARD_STATE_CAP {
        return Err(VerifyError::CapAboveHardLimit {
            cap,
            hard: HARD_STATE_CAP,
        });
    }
    if n > cap {
        return Err(VerifyError::CapExceeded { n, cap });
    }
    Ok(())
}

/// One off-diagonal matrix element of a term: `|target⟩⟨source|` with sign
/// `Π_{i ∈ z} (1 - 2 x_i)` from the `σ^z` dressing. Bit `i` of a state is
/// variable `x_{i+1}`; `σ^+` requires a source 1 (cleared in the target),
/// `σ^-` a source 0 (set in the target).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisTransition {
    pub source: u64,
    pub target: u64,
    pub sign: i8,
}

/// Iterator over a term's transitions: one per assignment of the sites the
/// term leaves free, `2^(n - ladder_weight)` in total. A diagonal term yields
/// its `2^n` diagonal (source == target) elements.
pub struct Transitions {
    raise_mask: u64,
    lower_mask: u64,
    z_mask: u64,
    free_mask: u64,
    next_free: Option<u64>,
}

impl Iterator for Transitions {
    type Item = BasisTransition;

    fn next(&mut self) -> Option<BasisTransition> {
        let free = self.next_free?;
        self.next_free = if free == self.free_mask {
            None
        } else {
            // Next-larger submask of free_mask.
            Some((free | !self.free_mask).wrapping_add(1) & self.free_mask)
        };
        let sign = if ((free & self.z_mask).count_ones() & 1) == 0 {
            1
        } else {
            -1
        };
        Some(BasisTransition {
            source: free | self.raise_mask,
            target: free | self.lower_mask,
            sign,
        })
    }
}

fn site_mask(sites: &[usize]) -> u64 {
    sites.iter().fold(0u64, |m, &s| m | 1 << s)
}

/// Streams the transitions of `term` over `n` sites, default cap applied.
pub fn transitions_of(term: &DriverTerm, n: usize) -> Result<Transitions, VerifyError> {
    transitions_of_with_cap(term, n, DEFAULT_STATE_CAP)
}

/// Same as [`transitions_of`] with an explicit cap (hard limit 28).
pub fn transitions_of_with_cap(
    term: &DriverTerm,
    n: usize,
    cap: usize,
) -> Result<Transitions, VerifyError> {
    check_cap(n, cap)?;
    if let Some(site) = term.max_site() {
        if site >= n {
            return Err(VerifyError::SiteOutOfRange { site, n });
        }
    }
    let raise_mask = site_mask(term.raise_sites());
    let lower_mask = site_mask(term.lower_sites());
    let z_mask = site_mask(term.z_sites());
    let all = if n == 64 { !0 } else { (1u64 << n) - 1 };
    let free_mask = all & !(raise_mask | lower_mask);
    Ok(Transitions {
        raise_mask,
        lower_mask,
        z_mask,
        free_mask,
        next_free: Some(0),
    })
}

/// First transition found whose endpoint eigenvalues differ, with the values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutationCounterexample {
    pub term_index: usize,
    pub row_index: usize,
    pub source: u64,
    pub target: u64,
    pub source_eigenvalue: BigInt,
    pub target_eigenvalue: BigInt,
}

/// Outcome of a commutation check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommuteCheck {
    pub commutes: bool,
    pub counterexample: Option<CommutationCounterexample>,
}

/// Decides `[H, C_j] = 0` for every row `j` by streaming each merged term's
/// transitions and requiring eigenvalue equality at both endpoints, exactly.
/// Early-exits on the first counterexample. Equivalent to the literal matrix
/// commutator because merged terms are independent basis elements.
pub fn exact_commutator_is_zero(
    h: &DriverHamiltonian,
    cs: &ConstraintSet,
) -> Result<CommuteCheck, VerifyError> {
    exact_commutator_is_zero_with_cap(h, cs, DEFAULT_STATE_CAP)
}

/// Same as [`exact_commutator_is_zero`] with an explicit cap.
pub fn exact_commutator_is_zero_with_cap(
    h: &DriverHamiltonian,
    cs: &ConstraintSet,
    cap: usize,
) -> Result<CommuteCheck, VerifyError> {
    let n = cs.n();
    check_cap(n, cap)?;
    for (term_index, term) in h.terms().iter().enumerate() {
        for (row_index, row) in cs.constraints().iter().enumerate() {
            for tr in transitions_of_with_cap(term, n, cap)? {
                let source_eigenvalue = row.spin_eigenvalue(tr.source);
                let target_eigenvalue = row.spin_eigenvalue(tr.target);
                if source_eigenvalue != target_eigenvalue {
                    return Ok(CommuteCheck {
                        commutes: false,
                        counterexample: Some(CommutationCounterexample {
                            term_index,
                            row_index,
                            source: tr.source,
                            target: tr.target,
                            source_eigenvalue,
                            target_eigenvalue,
                        }),
                    });
                }
            }
        }
    }
    Ok(CommuteCheck {
        commutes: true,
        counterexample: None,
    })
}

/// True when the merged expansion moves population between basis states:
/// scans each site for a surviving term that raises or lowers there. Because
/// merging already dropped cancelled amplitudes, this agrees with an
/// off-diagonal scan of the assembled matrix.
pub fn has_offdiagonal_term(h: &DriverHamiltonian) -> bool {
    for site in 0..h.n() {
        for term in h.terms() {
            if term.raise_sites().binary_search(&site).is_ok()
                || term.lower_sites().binary_search(&site).is_ok()
            {
                return true;
            }
        }
    }
    false
}
