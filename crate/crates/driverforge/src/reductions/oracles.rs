//! Exact exponential-time solvers for the subset problems, used as ground
//! truth by the reductions and the test suite.
//!
//! All three searches are deterministic: the returned witness is the first
//! one in a fixed enumeration order, so equal inputs give byte-equal
//! output. Sign vectors order their digits 0, then 1, then -1, read left to
//! right; subset searches order characteristic vectors 0 before 1.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::reductions::{ReductionError, SubsetInstance};
use crate::DEFAULT_ORACLE_CAP;

/// Two index sets into an instance's value list.
pub type IndexPair = (Vec<usize>, Vec<usize>);

fn check_cap(n: usize, cap: usize) -> Result<(), ReductionError> {
    if n > cap {
        return Err(ReductionError::OracleCapExceeded { n, cap });
    }
    Ok(())
}

/// Iterates all sign vectors of the given length in digit order 0, 1, -1,
/// leftmost digit most significant.
pub(crate) fn sign_vectors(len: usize) -> impl Iterator<Item = Vec<i8>> {
    let total = 3u64.pow(len as u32);
    (0..total).map(move |code| {
        let mut digits = vec![0i8; len];
        let mut c = code;
        for slot in digits.iter_mut().rev() {
            *slot = [0, 1, -1][(c % 3) as usize];
            c /= 3;
        }
        digits
    })
}

fn signed_sum(values: &[BigInt], signs: &[i8]) -> BigInt {
    let mut acc = BigInt::zero();
    for (v, &s) in values.iter().zip(signs) {
        match s {
            1 => acc += v,
            -1 => acc -= v,
            _ => {}
        }
    }
    acc
}

/// Per-sum bucket of right-half sign vectors, keeping only the first vector
/// in enumeration order for each nonemptiness requirement a left half could
/// impose.
#[derive(Default)]
struct RightBucket {
    any: Option<Vec<i8>>,
    with_plus: Option<Vec<i8>>,
    with_minus: Option<Vec<i8>>,
    with_both: Option<Vec<i8>>,
}

impl RightBucket {
    fn offer(&mut self, signs: &[i8]) {
        let plus = signs.contains(&1);
        let minus = signs.contains(&-1);
        if self.any.is_none() {
            self.any = Some(signs.to_vec());
        }
        if plus && self.with_plus.is_none() {
            self.with_plus = Some(signs.to_vec());
        }
        if minus && self.with_minus.is_none() {
            self.with_minus = Some(signs.to_vec());
        }
        if plus && minus && self.with_both.is_none() {
            self.with_both = Some(signs.to_vec());
        }
    }
}

/// Finds two nonempty disjoint index sets with equal sums, or reports that
/// none exist. Uses the default size cap.
pub fn oracle_equal_subset_sum(inst: &SubsetInstance) -> Result<Option<IndexPair>, ReductionError> {
    oracle_equal_subset_sum_with_cap(inst, DEFAULT_ORACLE_CAP)
}

/// As [`oracle_equal_subset_sum`] with an explicit cap.
///
/// Meets in the middle: the value list splits in half, the right half's
/// sign vectors are bucketed by sum, and the left half is scanned in
/// enumeration order for a bucket that cancels it. The witness is the first
/// full sign vector in the global order, with +1 entries forming the first
/// set and -1 entries the second.
pub fn oracle_equal_subset_sum_with_cap(
    inst: &SubsetInstance,
    cap: usize,
) -> Result<Option<IndexPair>, ReductionError> {
    let n = inst.len();
    check_cap(n, cap)?;
    let half = n / 2;
    let (left_values, right_values) = inst.values().split_at(half);

    let mut buckets: HashMap<BigInt, RightBucket> = HashMap::new();
    for signs in sign_vectors(right_values.len()) {
        let sum = signed_sum(right_values, &signs);
        buckets.entry(sum).or_default().offer(&signs);
    }

    for left in sign_vectors(half) {
        let needed = -signed_sum(left_values, &left);
        let Some(bucket) = buckets.get(&needed) else {
            continue;
        };
        let plus = left.contains(&1);
        let minus = left.contains(&-1);
        let right = match (plus, minus) {
            (true, true) => bucket.any.as_ref(),
            (true, false) => bucket.with_minus.as_ref(),
            (false, true) => bucket.with_plus.as_ref(),
            (false, false) => bucket.with_both.as_ref(),
        };
        if let Some(right) = right {
            let mut a = Vec::new();
            let mut b = Vec::new();
            for (i, &s) in left.iter().chain(right.iter()).enumerate() {
                match s {
                    1 => a.push(i),
                    -1 => b.push(i),
                    _ => {}
                }
            }
            return Ok(Some((a, b)));
        }
    }
    Ok(None)
}

/// Depth-first scan over characteristic vectors, 0 before 1 at every
/// index, collecting subsets that hit the target.
struct SubsetScan<'a> {
    values: &'a [BigInt],
    target: &'a BigInt,
    suffix_sums: Vec<BigInt>,
    allow_empty: bool,
    wanted: usize,
    found: Vec<Vec<usize>>,
}

impl SubsetScan<'_> {
    fn descend(&mut self, chosen: &mut Vec<usize>, sum: BigInt, index: usize) {
        if self.found.len() >= self.wanted {
            return;
        }
        if &sum > self.target || &sum + &self.suffix_sums[index] < *self.target {
            return;
        }
        if index == self.values.len() {
            if &sum == self.target && (self.allow_empty || !chosen.is_empty()) {
                self.found.push(chosen.clone());
            }
            return;
        }
        self.descend(chosen, sum.clone(), index + 1);
        chosen.push(index);
        let including = sum + &self.values[index];
        self.descend(chosen, including, index + 1);
        chosen.pop();
    }
}

/// Lists the first `wanted` subsets summing to the target, in
/// characteristic-vector order. Positive values make both prune rules
/// sound: a partial sum can only grow, and it cannot grow past what the
/// remaining suffix provides.
fn first_subsets(
    inst: &SubsetInstance,
    allow_empty: bool,
    wanted: usize,
) -> Result<Vec<Vec<usize>>, ReductionError> {
    let target = inst.target_or_err()?;
    let values = inst.values();
    let n = values.len();
    let mut suffix_sums = vec![BigInt::zero(); n + 1];
    for i in (0..n).rev() {
        suffix_sums[i] = &suffix_sums[i + 1] + &values[i];
    }
    let mut scan = SubsetScan {
        values,
        target,
        suffix_sums,
        allow_empty,
        wanted,
        found: Vec::new(),
    };
    scan.descend(&mut Vec::new(), BigInt::zero(), 0);
    Ok(scan.found)
}

/// Finds a nonempty subset summing to the target. The empty subset is not
/// accepted even for target 0, mirroring the nonempty convention of the
/// equal-sum problem.
pub fn oracle_subset_sum(inst: &SubsetInstance) -> Result<Option<Vec<usize>>, ReductionError> {
    oracle_subset_sum_with_cap(inst, DEFAULT_ORACLE_CAP)
}

pub fn oracle_subset_sum_with_cap(
    inst: &SubsetInstance,
    cap: usize,
) -> Result<Option<Vec<usize>>, ReductionError> {
    check_cap(inst.len(), cap)?;
    Ok(first_subsets(inst, false, 1)?.into_iter().next())
}

/// Finds two distinct subsets that each sum to the target. Unlike
/// [`oracle_subset_sum`], the empty subset counts here, so target 0 always
/// has one candidate and the question is whether a second exists.
pub fn oracle_two_or_more(inst: &SubsetInstance) -> Result<Option<IndexPair>, ReductionError> {
    oracle_two_or_more_with_cap(inst, DEFAULT_ORACLE_CAP)
}

pub fn oracle_two_or_more_with_cap(
    inst: &SubsetInstance,
    cap: usize,
) -> Result<Option<IndexPair>, ReductionError> {
    check_cap(inst.len(), cap)?;
    let mut found = first_subsets(inst, true, 2)?;
    if found.len() < 2 {
        return Ok(None);
    }
    let second = found.pop().expect("two entries");
    let first = found.pop().expect("one entry");
    Ok(Some((first, second)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn inst(values: &[i64], target: Option<i64>) -> SubsetInstance {
        SubsetInstance::from_ints(values, target).unwrap()
    }

    /// Single-pass reference: first full sign vector in digit order with
    /// zero sum and both signs present.
    fn reference_equal_sum(values: &[BigInt]) -> Option<(Vec<usize>, Vec<usize>)> {
        for signs in sign_vectors(values.len()) {
            if !signs.contains(&1) || !signs.contains(&-1) {
                continue;
            }
            if signed_sum(values, &signs).is_zero() {
                let a = signs
                    .iter()
                    .enumerate()
                    .filter(|(_, &s)| s == 1)
                    .map(|(i, _)| i)
                    .collect();
                let b = signs
                    .iter()
                    .enumerate()
                    .filter(|(_, &s)| s == -1)
                    .map(|(i, _)| i)
                    .collect();
                return Some((a, b));
            }
        }
        None
    }

    #[test]
    fn equal_sum_worked_examples() {
        assert_eq!(
            oracle_equal_subset_sum(&inst(&[1, 1, 2], None)).unwrap(),
            Some((vec![0, 1], vec![2]))
        );
        assert_eq!(
            oracle_equal_subset_sum(&inst(&[5, 5], None)).unwrap(),
            Some((vec![0], vec![1]))
        );
        assert_eq!(
            oracle_equal_subset_sum(&inst(&[1, 2, 4, 8], None)).unwrap(),
            None
        );
        assert_eq!(oracle_equal_subset_sum(&inst(&[7], None)).unwrap(), None);
    }

    #[test]
    fn equal_sum_matches_single_pass_reference() {
        let mut rng = StdRng::seed_from_u64(0x5eed_000a);
        for _ in 0..40 {
            let n = rng.gen_range(1..=8);
            let values: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=12)).collect();
            let instance = inst(&values, None);
            let got = oracle_equal_subset_sum(&instance).unwrap();
            let want = reference_equal_sum(instance.values());
            assert_eq!(got, want, "values {:?}", values);
        }
    }

    #[test]
    fn equal_sum_witness_sums_agree() {
        let mut rng = StdRng::seed_from_u64(0x5eed_000b);
        for _ in 0..30 {
            let n = rng.gen_range(2..=10);
            let values: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=30)).collect();
            let instance = inst(&values, None);
            if let Some((a, b)) = oracle_equal_subset_sum(&instance).unwrap() {
                assert!(!a.is_empty() && !b.is_empty());
                assert!(a.iter().all(|i| !b.contains(i)));
                let sum = |ix: &[usize]| -> BigInt {
                    ix.iter().map(|&i| instance.values()[i].clone()).sum()
                };
                assert_eq!(sum(&a), sum(&b));
            }
        }
    }

    #[test]
    fn subset_sum_worked_examples() {
        assert_eq!(
            oracle_subset_sum(&inst(&[1, 1, 2], Some(2))).unwrap(),
            Some(vec![2])
        );
        assert_eq!(oracle_subset_sum(&inst(&[1], Some(0))).unwrap(), None);
        assert_eq!(oracle_subset_sum(&inst(&[2, 3], Some(6))).unwrap(), None);
    }

    #[test]
    fn two_or_more_worked_examples() {
        assert_eq!(
            oracle_two_or_more(&inst(&[1, 1, 2], Some(2))).unwrap(),
            Some((vec![2], vec![0, 1]))
        );
        // Target 0 has the empty subset and nothing else.
        assert_eq!(oracle_two_or_more(&inst(&[1, 2], Some(0))).unwrap(), None);
        assert_eq!(oracle_two_or_more(&inst(&[4], Some(3))).unwrap(), None);
    }

    #[test]
    fn two_or_more_matches_brute_force_counts() {
        let mut rng = StdRng::seed_from_u64(0x5eed_000c);
        for _ in 0..40 {
            let n = rng.gen_range(1..=8);
            let values: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=9)).collect();
            let target = rng.gen_range(0..=20);
            let instance = inst(&values, Some(target));
            let matching = (0u64..1 << n)
                .filter(|mask| {
                    let sum: i64 = (0..n)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| values[i])
                        .sum();
                    sum == target
                })
                .count();
            let got = oracle_two_or_more(&instance).unwrap();
            assert_eq!(got.is_some(), matching >= 2);
            if let Some((s1, s2)) = got {
                assert_ne!(s1, s2);
                let sum = |ix: &[usize]| -> i64 { ix.iter().map(|&i| values[i]).sum() };
                assert_eq!(sum(&s1), target);
                assert_eq!(sum(&s2), target);
            }
        }
    }

    #[test]
    fn subset_sum_agrees_with_brute_force() {
        let mut rng = StdRng::seed_from_u64(0x5eed_000d);
        for _ in 0..40 {
            let n = rng.gen_range(1..=8);
            let values: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=9)).collect();
            let target = rng.gen_range(0..=15);
            let instance = inst(&values, Some(target));
            let any = (1u64..1 << n).any(|mask| {
                let sum: i64 = (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| values[i])
                    .sum();
                sum == target
            });
            assert_eq!(oracle_subset_sum(&instance).unwrap().is_some(), any);
        }
    }

    #[test]
    fn caps_are_enforced() {
        let values: Vec<i64> = (1..=19).collect();
        let instance = inst(&values, Some(5));
        assert!(matches!(
            oracle_equal_subset_sum(&instance),
            Err(ReductionError::OracleCapExceeded { n: 19, cap: 18 })
        ));
        assert!(matches!(
            oracle_subset_sum(&instance),
            Err(ReductionError::OracleCapExceeded { .. })
        ));
        assert!(oracle_subset_sum_with_cap(&instance, 19).is_ok());
    }

    #[test]
    fn missing_target_is_reported() {
        let instance = inst(&[1, 2], None);
        assert!(matches!(
            oracle_subset_sum(&instance),
            Err(ReductionError::TargetRequired)
        ));
        assert!(matches!(
            oracle_two_or_more(&instance),
            Err(ReductionError::TargetRequired)
        ));
    }
}
