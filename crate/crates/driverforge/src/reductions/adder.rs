//! The three-valued adder cell that the binary-expansion construction is
//! built from.
//!
//! A cell takes two inputs a and b, each in {-1, 0, 1}, and produces a
//! carry c and a sum digit s with 2c + s = a + b. Three internal wires
//! x1 = x2 = -c and x3 = -s let the relation be written as six homogeneous
//! equations with 0/1 coefficients over the seven cell variables, ordered
//! (a, b, x1, x2, x3, c, s).

use crate::reductions::ReductionError;

/// Which of the admissible (carry, sum) pairs a cell output is.
///
/// When the input total is +-1 there are two ways to split it; `Primary` is
/// the carry-free one and is what deterministic forward propagation uses.
/// Totals of 0 or +-2 split uniquely.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdderMode {
    Primary,
    Secondary,
}

/// All (carry, sum, mode) triples with 2*carry + sum = a + b and both
/// outputs in {-1, 0, 1}. The primary triple always comes first.
pub fn adder_outputs(a: i8, b: i8) -> Result<Vec<(i8, i8, AdderMode)>, ReductionError> {
    check_digit(a)?;
    check_digit(b)?;
    let total = a + b;
    Ok(match total {
        2 | -2 => vec![(total / 2, 0, AdderMode::Primary)],
        1 | -1 => vec![
            (0, total, AdderMode::Primary),
            (total, -total, AdderMode::Secondary),
        ],
        _ => vec![(0, 0, AdderMode::Primary)],
    })
}

/// The carry-free-when-possible output pair for the given inputs.
pub fn primary_output(a: i8, b: i8) -> Result<(i8, i8), ReductionError> {
    let outputs = adder_outputs(a, b)?;
    let (c, s, _) = outputs[0];
    Ok((c, s))
}

/// Internal wire values (x1, x2, x3) forced by a chosen carry and sum.
pub fn internal_wires(carry: i8, sum: i8) -> (i8, i8, i8) {
    (-carry, -carry, -sum)
}

/// The six constraint rows of one cell, over columns (a, b, x1, x2, x3, c,
/// s), with the given coefficients on the two input columns. An assignment
/// of cell variables is admissible exactly when it zeroes every row.
pub fn adder_constraint_rows(a_coeff: u8, b_coeff: u8) -> Vec<Vec<u8>> {
    vec![
        vec![a_coeff, b_coeff, 1, 1, 1, 0, 0],
        vec![0, 0, 1, 0, 1, 1, 1],
        vec![0, 0, 0, 1, 1, 1, 1],
        vec![0, 0, 1, 0, 0, 1, 0],
        vec![0, 0, 0, 1, 0, 1, 0],
        vec![0, 0, 0, 0, 1, 0, 1],
    ]
}

fn check_digit(value: i8) -> Result<(), ReductionError> {
    if !(-1..=1).contains(&value) {
        return Err(ReductionError::BadAssignmentEntry {
            index: 0,
            value: value as i64,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_digits() -> [i8; 3] {
        [-1, 0, 1]
    }

    #[test]
    fn outputs_satisfy_the_carry_sum_identity() {
        for a in all_digits() {
            for b in all_digits() {
                let outputs = adder_outputs(a, b).unwrap();
                let expected_count = match (a + b).abs() {
                    1 => 2,
                    _ => 1,
                };
                assert_eq!(outputs.len(), expected_count, "inputs ({a}, {b})");
                assert_eq!(outputs[0].2, AdderMode::Primary);
                for (c, s, _) in outputs {
                    assert_eq!(2 * c + s, a + b);
                    assert!((-1..=1).contains(&c) && (-1..=1).contains(&s));
                }
                let (c, s) = primary_output(a, b).unwrap();
                assert_eq!((c, s), (outputs_first(a, b)));
            }
        }
    }

    fn outputs_first(a: i8, b: i8) -> (i8, i8) {
        let outputs = adder_outputs(a, b).unwrap();
        (outputs[0].0, outputs[0].1)
    }

    #[test]
    fn primary_mode_is_carry_free_when_total_is_one() {
        assert_eq!(primary_output(1, 0).unwrap(), (0, 1));
        assert_eq!(primary_output(0, -1).unwrap(), (0, -1));
        assert_eq!(primary_output(1, 1).unwrap(), (1, 0));
        assert_eq!(primary_output(-1, -1).unwrap(), (-1, 0));
        assert_eq!(primary_output(1, -1).unwrap(), (0, 0));
    }

    #[test]
    fn out_of_range_inputs_are_rejected() {
        assert!(adder_outputs(2, 0).is_err());
        assert!(primary_output(0, -2).is_err());
    }

    fn row_is_zeroed(row: &[u8], assignment: &[i8; 7]) -> bool {
        row.iter()
            .zip(assignment)
            .map(|(&coeff, &v)| coeff as i32 * v as i32)
            .sum::<i32>()
            == 0
    }

    /// Exhausts all 3^7 assignments of one cell and checks the constraint
    /// rows carve out exactly the admissible (output, wire) combinations.
    #[test]
    fn constraint_rows_characterize_the_cell_exhaustively() {
        let rows = adder_constraint_rows(1, 1);
        let mut satisfying: Vec<(i8, i8, i8, i8)> = Vec::new();
        for code in 0..3u32.pow(7) {
            let mut assignment = [0i8; 7];
            let mut c = code;
            for slot in assignment.iter_mut() {
                *slot = [-1, 0, 1][(c % 3) as usize];
                c /= 3;
            }
            let [a, b, x1, x2, x3, carry, sum] = assignment;
            let satisfied = rows.iter().all(|row| row_is_zeroed(row, &assignment));
            let admissible = 2 * carry + sum == a + b && (x1, x2, x3) == internal_wires(carry, sum);
            assert_eq!(satisfied, admissible, "assignment {:?}", assignment);
            if satisfied {
                satisfying.push((a, b, carry, sum));
            }
        }
        // One satisfying assignment per admissible mode: nine input pairs,
        // of which four have totals of magnitude one and split two ways.
        assert_eq!(satisfying.len(), 13);
        for a in all_digits() {
            for b in all_digits() {
                let mut modes: Vec<(i8, i8)> = satisfying
                    .iter()
                    .filter(|&&(sa, sb, _, _)| (sa, sb) == (a, b))
                    .map(|&(_, _, c, s)| (c, s))
                    .collect();
                let mut expected: Vec<(i8, i8)> = adder_outputs(a, b)
                    .unwrap()
                    .into_iter()
                    .map(|(c, s, _)| (c, s))
                    .collect();
                modes.sort_unstable();
                expected.sort_unstable();
                assert_eq!(modes, expected, "inputs ({a}, {b})");
            }
        }
    }

    /// A zero coefficient detaches that input: the cell then adds only the
    /// other one and the detached column ranges freely.
    #[test]
    fn zero_coefficient_detaches_an_input() {
        let rows = adder_constraint_rows(0, 1);
        let mut count = 0;
        for code in 0..3u32.pow(7) {
            let mut assignment = [0i8; 7];
            let mut c = code;
            for slot in assignment.iter_mut() {
                *slot = [-1, 0, 1][(c % 3) as usize];
                c /= 3;
            }
            let [_, b, x1, x2, x3, carry, sum] = assignment;
            let satisfied = rows.iter().all(|row| row_is_zeroed(row, &assignment));
            let admissible = 2 * carry + sum == b && (x1, x2, x3) == internal_wires(carry, sum);
            assert_eq!(satisfied, admissible);
            if satisfied {
                count += 1;
            }
        }
        // Free input times five admissible (b, c, s) combinations.
        assert_eq!(count, 3 * 5);
    }

    #[test]
    fn both_coefficients_zero_force_zero_outputs() {
        let rows = adder_constraint_rows(0, 0);
        let mut count = 0;
        for code in 0..3u32.pow(7) {
            let mut assignment = [0i8; 7];
            let mut c = code;
            for slot in assignment.iter_mut() {
                *slot = [-1, 0, 1][(c % 3) as usize];
                c /= 3;
            }
            if rows.iter().all(|row| row_is_zeroed(row, &assignment)) {
                let [_, _, x1, x2, x3, carry, sum] = assignment;
                assert_eq!((x1, x2, x3, carry, sum), (0, 0, 0, 0, 0));
                count += 1;
            }
        }
        assert_eq!(count, 9);
    }
}
