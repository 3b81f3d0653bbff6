//! Feasible-space enumeration and the transition graph a term set induces
//! on it.
//!
//! States are bitmasks satisfying every constraint row at its target value.
//! A term contributes an undirected edge wherever a feasible state matches
//! its ladder pattern; because terms are required to commute, transitions
//! can never leave the feasible set, and the builder asserts that rather
//! than assuming it.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{commutation_defect, DriverTerm};
use crate::model::ConstraintSet;
use crate::{DEFAULT_STATE_CAP, HARD_STATE_CAP};

#[derive(Debug, Error)]
pub enum FeasibilityError {
    #[error("{n} sites exceeds the enumeration cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("cap {cap} exceeds the hard limit of {limit}")]
    CapAboveHardLimit { cap: usize, limit: usize },
    #[error("term {term_index} does not commute with every constraint row")]
    NonCommutingTerm { term_index: usize },
    #[error("term {term_index} touches site {site} but the space has {n} sites")]
    SiteOutOfRange {
        term_index: usize,
        site: usize,
        n: usize,
    },
    #[error("transition graph has not been built yet")]
    GraphNotBuilt,
}

/// How the feasible states split into connected components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectivityReport {
    /// True when at most one component exists.
    pub connected: bool,
    pub component_count: usize,
    /// Sizes in order of each component's smallest state.
    pub component_sizes: Vec<usize>,
    /// True for empty or singleton spaces, where connectivity says nothing.
    pub degenerate: bool,
}

/// The exact solution set of a constraint system, with an optional
/// transition graph over it.
#[derive(Debug, Clone)]
pub struct FeasibleSpace {
    constraints: ConstraintSet,
    states: Vec<u64>,
    index: HashMap<u64, usize>,
    edges: Option<BTreeSet<(usize, usize)>>,
}

impl FeasibleSpace {
    pub fn n(&self) -> usize {
        self.constraints.n()
    }

    pub fn constraints(&self) -> &ConstraintSet {
        &self.constraints
    }

    /// Feasible bitmasks in ascending order; bit `i` holds `x_{i+1}`.
    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn contains(&self, state: u64) -> bool {
        self.index.contains_key(&state)
    }

    /// Undirected edges as index pairs into [`states`](Self::states), once
    /// the graph is built.
    pub fn edges(&self) -> Option<&BTreeSet<(usize, usize)>> {
        self.edges.as_ref()
    }

    /// True when the built graph has at least one edge.
    pub fn is_nontrivial(&self) -> Result<bool, FeasibilityError> {
        let edges = self.edges.as_ref().ok_or(FeasibilityError::GraphNotBuilt)?;
        Ok(!edges.is_empty())
    }

    /// Component structure of the built graph, found by breadth-first
    /// search from each unvisited state in ascending order.
    pub fn connectivity(&self) -> Result<ConnectivityReport, FeasibilityError> {
        let edges = self.edges.as_ref().ok_or(FeasibilityError::GraphNotBuilt)?;
        let count = self.states.len();
        if count <= 1 {
            return Ok(ConnectivityReport {
                connected: true,
                component_count: count,
                component_sizes: vec![1; count],
                degenerate: true,
            });
        }
        let mut adjacency = vec![Vec::new(); count];
        for &(a, b) in edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        let mut seen = vec![false; count];
        let mut component_sizes = Vec::new();
        for start in 0..count {
            if seen[start] {
                continue;
            }
            let mut size = 0usize;
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(v) = queue.pop_front() {
                size += 1;
                for &w in &adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            component_sizes.push(size);
        }
        Ok(ConnectivityReport {
            connected: component_sizes.len() == 1,
            component_count: component_sizes.len(),
            component_sizes,
            degenerate: false,
        })
    }
}

/// Enumerates every assignment satisfying all rows, under the default cap.
pub fn enumerate_feasible(cs: &ConstraintSet) -> Result<FeasibleSpace, FeasibilityError> {
    enumerate_feasible_with_cap(cs, DEFAULT_STATE_CAP)
}

/// As [`enumerate_feasible`] with an explicit cap, up to the hard limit.
///
/// Walks masks in ascending order, updating each row's running sum from the
/// bits that flip between consecutive masks, so the cost per state is
/// proportional to the flipped-bit count rather than to `n`.
pub fn enumerate_feasible_with_cap(
    cs: &ConstraintSet,
    cap: usize,
) -> Result<FeasibleSpace, FeasibilityError> {
    if cap > HARD_STATE_CAP {
        return Err(FeasibilityError::CapAboveHardLimit {
            cap,
            limit: HARD_STATE_CAP,
        });
    }
    let n = cs.n();
    if n > cap {
        return Err(FeasibilityError::CapExceeded { n, cap });
    }
    let mut sums: Vec<BigInt> = vec![BigInt::zero(); cs.m()];
    let mut states = Vec::new();
    for mask in 0u64..(1 << n) {
        if mask != 0 {
            // mask-1 ends in t ones; those bits fall, bit t rises.
            let t = (mask - 1).trailing_ones() as usize;
            for (r, row) in cs.constraints().iter().enumerate() {
                for low in 0..t {
                    sums[r] -= &row.coeffs[low];
                }
                sums[r] += &row.coeffs[t];
            }
        }
        if cs
            .constraints()
            .iter()
            .zip(&sums)
            .all(|(row, sum)| *sum == row.value)
        {
            states.push(mask);
        }
    }
    let index = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    Ok(FeasibleSpace {
        constraints: cs.clone(),
        states,
        index,
        edges: None,
    })
}

/// Populates the transition graph induced by `terms`.
///
/// Each term must commute with every row; the conjugate partner supplies the
/// reverse transition, so one undirected edge per matching source covers
/// both directions. Diagonal terms induce no transitions and are skipped.
pub fn build_transition_graph(
    mut fs: FeasibleSpace,
    terms: &[DriverTerm],
) -> Result<FeasibleSpace, FeasibilityError> {
    let n = fs.n();
    for (t, term) in terms.iter().enumerate() {
        if let Some(site) = term.max_site() {
            if site >= n {
                return Err(FeasibilityError::SiteOutOfRange {
                    term_index: t,
                    site,
                    n,
                });
            }
        }
        for row in fs.constraints.constraints() {
            if !commutation_defect(term, row).is_zero() {
                return Err(FeasibilityError::NonCommutingTerm { term_index: t });
            }
        }
    }
    let mut edges = fs.edges.take().unwrap_or_default();
    for term in terms {
        if term.is_diagonal() {
            continue;
        }
        let raise_mask: u64 = term.raise_sites().iter().map(|&s| 1u64 << s).sum();
        let lower_mask: u64 = term.lower_sites().iter().map(|&s| 1u64 << s).sum();
        for (i, &state) in fs.states.iter().enumerate() {
            if state & raise_mask == raise_mask && state & lower_mask == 0 {
                let target = (state & !raise_mask) | lower_mask;
                let j = *fs
                    .index
                    .get(&target)
                    .unwrap_or_else(|| panic!("commuting transition left the feasible set"));
                edges.insert((i.min(j), i.max(j)));
            }
        }
    }
    fs.edges = Some(edges);
    Ok(fs)
}
