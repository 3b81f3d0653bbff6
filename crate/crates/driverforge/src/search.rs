//! Enumeration of bounded-weight driver terms that commute with every
//! constraint row.
//!
//! The exhaustive route walks all sign vectors `u` in {-1, 0, 1}^n with
//! support size up to `k`, one orientation per +/- pair, and keeps those in
//! the kernel of the constraint matrix. The two-local route skips the scan
//! entirely by bucketing columns: a weight-2 kernel vector exists exactly
//! when two columns are equal (signs +1, -1) or opposite (signs +1, +1).

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{DriverTerm, ExactComplex};
use crate::model::ConstraintSet;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("weight bound {k} outside 1..={n}")]
    WeightOutOfRange { k: usize, n: usize },
}

/// Outcome of a term search: what was found and how much work it took.
#[derive(Debug, Clone)]
pub struct SearchReport {
    /// The weight bound the search ran with.
    pub max_weight: usize,
    /// Number of candidate sign vectors tested against the kernel condition.
    pub candidates_checked: u64,
    /// All commuting terms found, in deterministic order.
    pub terms: Vec<DriverTerm>,
    /// Wall-clock duration of the search.
    pub elapsed: Duration,
}

/// All kernel vectors supported on exactly `support` with the first entry
/// fixed to +1, as terms. Appends the per-support candidate count.
fn terms_on_support(cs: &ConstraintSet, support: &[usize]) -> (u64, Vec<DriverTerm>) {
    let j = support.len();
    let patterns = 1u64 << (j - 1);
    let mut found = Vec::new();
    'mask: for mask in 0..patterns {
        // Entry 0 of the support is +1; bit t of the mask flips entry t+1.
        let sign = |pos: usize| -> i64 {
            if pos == 0 {
                1
            } else if mask >> (pos - 1) & 1 == 1 {
                -1
            } else {
                1
            }
        };
        for row in cs.constraints() {
            let mut acc = BigInt::zero();
            for (pos, &site) in support.iter().enumerate() {
                if sign(pos) == 1 {
                    acc += &row.coeffs[site];
                } else {
                    acc -= &row.coeffs[site];
                }
            }
            if !acc.is_zero() {
                continue 'mask;
            }
        }
        let mut raise = Vec::new();
        let mut lower = Vec::new();
        for (pos, &site) in support.iter().enumerate() {
            if sign(pos) == 1 {
                raise.push(site);
            } else {
                lower.push(site);
            }
        }
        found.push(
            DriverTerm::new(vec![], raise, lower, ExactComplex::one())
                .expect("disjoint sorted sites"),
        );
    }
    (patterns, found)
}

/// Exhaustive search for every commuting term of weight at most `k`.
///
/// Emits one canonical term per +/- pair of kernel vectors (the smallest
/// ladder site acts as a raise site). Output order is weight ascending, then
/// support lexicographic, then sign pattern. Weight-1 terms arise only from
/// all-zero columns, so that pass runs, and is billed at `n` candidates,
/// only when such a column exists.
pub fn find_k_local_drivers(cs: &ConstraintSet, k: usize) -> Result<SearchReport, SearchError> {
    let n = cs.n();
    if k < 1 || k > n {
        return Err(SearchError::WeightOutOfRange { k, n });
    }
    let start = Instant::now();
    let mut candidates_checked = 0u64;
    let mut terms = Vec::new();

    if (0..n).any(|i| cs.column_is_zero(i)) {
        candidates_checked += n as u64;
        for i in 0..n {
            if cs.column_is_zero(i) {
                terms.push(
                    DriverTerm::new(vec![], vec![i], vec![], ExactComplex::one())
                        .expect("single site"),
                );
            }
        }
    }

    for j in 2..=k {
        let supports: Vec<Vec<usize>> = (0..n).combinations(j).collect();
        let per_support: Vec<(u64, Vec<DriverTerm>)> = supports
            .par_iter()
            .map(|support| terms_on_support(cs, support))
            .collect();
        for (checked, found) in per_support {
            candidates_checked += checked;
            terms.extend(found);
        }
    }

    Ok(SearchReport {
        max_weight: k,
        candidates_checked,
        terms,
        elapsed: start.elapsed(),
    })
}

/// Weight-2 search by column bucketing instead of candidate enumeration.
///
/// Equal columns at sites i < j give the swap-style term (raise i, lower j);
/// opposite columns give the double-raise term. A pair of all-zero columns
/// is both equal and opposite to itself and yields both terms, keeping the
/// output identical to the weight-2 slice of [`find_k_local_drivers`]. Every
/// unordered column pair is billed as one candidate.
pub fn find_two_local_by_columns(cs: &ConstraintSet) -> SearchReport {
    let n = cs.n();
    let start = Instant::now();
    let mut groups: BTreeMap<Vec<BigInt>, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        groups.entry(cs.column(i)).or_default().push(i);
    }

    let mut terms = Vec::new();
    let mut push = |raise: Vec<usize>, lower: Vec<usize>| {
        terms.push(
            DriverTerm::new(vec![], raise, lower, ExactComplex::one())
                .expect("disjoint sorted sites"),
        );
    };
    for (col, members) in &groups {
        let zero_col = col.iter().all(|c| c.is_zero());
        for pair in members.iter().combinations(2) {
            let (i, j) = (*pair[0], *pair[1]);
            if zero_col {
                push(vec![i, j], vec![]);
            }
            push(vec![i], vec![j]);
        }
        if zero_col {
            continue;
        }
        let neg: Vec<BigInt> = col.iter().map(|c| -c).collect();
        // Visit each {column, negation} bucket pair from one side only.
        if *col < neg {
            if let Some(others) = groups.get(&neg) {
                for &i in members {
                    for &j in others {
                        let (a, b) = if i < j { (i, j) } else { (j, i) };
                        push(vec![a, b], vec![]);
                    }
                }
            }
        }
    }
    terms.sort_by_key(|t| t.sort_key());

    SearchReport {
        max_weight: 2,
        candidates_checked: (n as u64) * (n as u64 - 1) / 2,
        terms,
        elapsed: start.elapsed(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::term_from_u;
    use crate::model::{Constraint, ConstraintSet};
    use crate::verify::exact_commutator_is_zero;
    use crate::DriverHamiltonian;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn cs_of(rows: &[&[i64]]) -> ConstraintSet {
        let constraints = rows
            .iter()
            .map(|r| Constraint {
                coeffs: r.iter().copied().map(BigInt::from).collect(),
                value: BigInt::zero(),
            })
            .collect();
        ConstraintSet::new(rows[0].len(), constraints, None).unwrap()
    }

    /// Reference enumeration: all 3^n sign vectors, weight filtered,
    /// canonicalized through term_from_u, deduplicated.
    fn naive_all_terms(cs: &ConstraintSet, k: usize) -> Vec<DriverTerm> {
        let n = cs.n();
        let mut out = Vec::new();
        for code in 0..3u64.pow(n as u32) {
            let mut c = code;
            let mut u = Vec::with_capacity(n);
            for _ in 0..n {
                u.push([0i8, 1, -1][(c % 3) as usize]);
                c /= 3;
            }
            let weight = u.iter().filter(|&&x| x != 0).count();
            if weight == 0 || weight > k {
                continue;
            }
            let in_kernel = cs.constraints().iter().all(|row| {
                let mut acc = BigInt::zero();
                for (i, &s) in u.iter().enumerate() {
                    match s {
                        1 => acc += &row.coeffs[i],
                        -1 => acc -= &row.coeffs[i],
                        _ => {}
                    }
                }
                acc.is_zero()
            });
            if !in_kernel {
                continue;
            }
            let term = term_from_u(&u, &[]).unwrap();
            if !out.contains(&term) {
                out.push(term);
            }
        }
        out.sort_by_key(|t: &DriverTerm| (t.ladder_weight(), t.sort_key()));
        out
    }

    fn sorted(mut terms: Vec<DriverTerm>) -> Vec<DriverTerm> {
        terms.sort_by_key(|t| (t.ladder_weight(), t.sort_key()));
        terms
    }

    #[test]
    fn uniform_row_of_four_has_six_swap_terms() {
        let cs = cs_of(&[&[1, 1, 1, 1]]);
        let report = find_k_local_drivers(&cs, 2).unwrap();
        assert_eq!(report.terms.len(), 6);
        for t in &report.terms {
            assert_eq!(t.raise_sites().len(), 1);
            assert_eq!(t.lower_sites().len(), 1);
        }
        assert_eq!(report.candidates_checked, 2 * 6);
    }

    #[test]
    fn powers_of_two_admit_nothing_at_weight_two() {
        let cs = cs_of(&[&[1, 2, 4, 8]]);
        let report = find_k_local_drivers(&cs, 2).unwrap();
        assert!(report.terms.is_empty());
    }

    #[test]
    fn weighted_triple_includes_double_raise_pattern() {
        let cs = cs_of(&[&[1, 1, 2]]);
        let report = find_k_local_drivers(&cs, 3).unwrap();
        let want = DriverTerm::new(vec![], vec![0, 1], vec![2], ExactComplex::one()).unwrap();
        assert!(report.terms.contains(&want));
        // The swap on the equal pair is the only other commuting term.
        assert_eq!(report.terms.len(), 2);
    }

    #[test]
    fn candidate_count_matches_closed_form() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0003);
        for _ in 0..30 {
            let n = rng.gen_range(2..=9);
            let k = rng.gen_range(1..=n.min(4));
            let coeffs: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
            let cs = match ConstraintSet::new(
                n,
                vec![Constraint {
                    coeffs: coeffs.iter().copied().map(BigInt::from).collect(),
                    value: BigInt::zero(),
                }],
                None,
            ) {
                Ok(cs) => cs,
                Err(_) => continue,
            };
            let report = find_k_local_drivers(&cs, k).unwrap();
            let mut want: u64 = (2..=k as u64)
                .map(|j| {
                    let c: u64 = binomial(n as u64, j);
                    (1u64 << (j - 1)) * c
                })
                .sum();
            if (0..n).any(|i| cs.column_is_zero(i)) {
                want += n as u64;
            }
            assert_eq!(report.candidates_checked, want);
        }
    }

    fn binomial(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        let mut acc = 1u64;
        for i in 0..k {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    }

    #[test]
    fn exhaustive_matches_naive_reference() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0004);
        for _ in 0..25 {
            let n = rng.gen_range(2..=6);
            let m = rng.gen_range(1..=2);
            let rows: Vec<Constraint> = (0..m)
                .map(|_| Constraint {
                    coeffs: (0..n)
                        .map(|_| BigInt::from(rng.gen_range(-2..=2i64)))
                        .collect(),
                    value: BigInt::zero(),
                })
                .collect();
            let cs = match ConstraintSet::new(n, rows, None) {
                Ok(cs) => cs,
                Err(_) => continue,
            };
            let k = rng.gen_range(1..=n);
            let report = find_k_local_drivers(&cs, k).unwrap();
            assert_eq!(sorted(report.terms), naive_all_terms(&cs, k));
        }
    }

    #[test]
    fn two_local_equals_weight_two_slice() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0005);
        for _ in 0..40 {
            let n = rng.gen_range(2..=8);
            let m = rng.gen_range(1..=3);
            let rows: Vec<Constraint> = (0..m)
                .map(|_| Constraint {
                    coeffs: (0..n)
                        .map(|_| BigInt::from(rng.gen_range(-2..=2i64)))
                        .collect(),
                    value: BigInt::zero(),
                })
                .collect();
            let cs = match ConstraintSet::new(n, rows, None) {
                Ok(cs) => cs,
                Err(_) => continue,
            };
            let fast = find_two_local_by_columns(&cs);
            let slice: Vec<DriverTerm> = find_k_local_drivers(&cs, 2)
                .unwrap()
                .terms
                .into_iter()
                .filter(|t| t.ladder_weight() == 2)
                .collect();
            assert_eq!(fast.terms, slice);
            assert_eq!(fast.candidates_checked, (n as u64) * (n as u64 - 1) / 2);
        }
    }

    #[test]
    fn two_local_corollary_examples() {
        let report = find_two_local_by_columns(&cs_of(&[&[1, 1], &[2, 2]]));
        assert_eq!(report.terms.len(), 1);
        assert_eq!(report.terms[0].raise_sites(), &[0]);
        assert_eq!(report.terms[0].lower_sites(), &[1]);

        let report = find_two_local_by_columns(&cs_of(&[&[1, -1]]));
        assert_eq!(report.terms.len(), 1);
        assert_eq!(report.terms[0].raise_sites(), &[0, 1]);
        assert!(report.terms[0].lower_sites().is_empty());

        let report = find_two_local_by_columns(&cs_of(&[&[1, 2], &[3, 4]]));
        assert!(report.terms.is_empty());
    }

    #[test]
    fn zero_column_pair_yields_both_sign_patterns() {
        let cs = cs_of(&[&[0, 0, 1]]);
        let report = find_two_local_by_columns(&cs);
        assert_eq!(report.terms.len(), 2);
        assert_eq!(report.terms[0].raise_sites(), &[0, 1]);
        assert_eq!(report.terms[1].raise_sites(), &[0]);
        assert_eq!(report.terms[1].lower_sites(), &[1]);
    }

    #[test]
    fn zero_columns_produce_weight_one_terms() {
        let cs = cs_of(&[&[0, 3, 0]]);
        let report = find_k_local_drivers(&cs, 2).unwrap();
        let singles: Vec<&DriverTerm> = report
            .terms
            .iter()
            .filter(|t| t.ladder_weight() == 1)
            .collect();
        assert_eq!(singles.len(), 2);
        assert_eq!(singles[0].raise_sites(), &[0]);
        assert_eq!(singles[1].raise_sites(), &[2]);
        // 3 weight-1 candidates billed plus the weight-2 scan.
        assert_eq!(report.candidates_checked, 3 + 2 * 3);
    }

    #[test]
    fn every_emitted_term_commutes_exactly() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0006);
        for _ in 0..10 {
            let n = rng.gen_range(3..=7);
            let rows: Vec<Constraint> = (0..2)
                .map(|_| Constraint {
                    coeffs: (0..n)
                        .map(|_| BigInt::from(rng.gen_range(-2..=2i64)))
                        .collect(),
                    value: BigInt::zero(),
                })
                .collect();
            let cs = match ConstraintSet::new(n, rows, None) {
                Ok(cs) => cs,
                Err(_) => continue,
            };
            let report = find_k_local_drivers(&cs, 3.min(n)).unwrap();
            if report.terms.is_empty() {
                continue;
            }
            let h = DriverHamiltonian::new(n, report.terms).unwrap();
            assert!(exact_commutator_is_zero(&h, &cs).unwrap().commutes);
        }
    }

    #[test]
    fn weight_bound_is_validated() {
        let cs = cs_of(&[&[1, 1]]);
        assert!(matches!(
            find_k_local_drivers(&cs, 0),
            Err(SearchError::WeightOutOfRange { .. })
        ));
        assert!(matches!(
            find_k_local_drivers(&cs, 3),
            Err(SearchError::WeightOutOfRange { .. })
        ));
    }
}
